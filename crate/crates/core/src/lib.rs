//! Utility-proportional-fair radio resource allocation for hybrid traffic.
//!
//! A single eNB shares a rate budget `R` among UEs, each running a mix of
//! real-time (sigmoidal utility) and delay-tolerant (logarithmic utility)
//! applications. The allocation maximizes
//!
//! ```text
//!     prod_i ( prod_j U_ij(r_ij)^alpha_ij )^beta_i     subject to  sum r_ij <= R
//! ```
//!
//! and can be computed two ways:
//!
//! * [`centralized`]: the eNB knows every utility and solves the problem in one
//!   shot by bisecting on the shadow price.
//! * [`distributed`]: UEs bid for rate, the eNB announces `p = sum(w) / R`, and
//!   every UE splits its share internally among its applications.
//!
//! The [`overhead`] module counts every logical message exchanged on the
//! eNB/UE channel and carries the closed-form minimum counts for fresh starts,
//! UE churn and application-usage changes. [`scenario`] drives time-slotted
//! experiments under rebid/no-rebid policies and scores them against a fresh
//! centralized solve.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]
// `!(x > 0.0)` is how parameter checks reject NaN along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod centralized;
pub mod distributed;
mod error;
mod math;
pub mod overhead;
pub mod presets;
pub mod scenario;
pub mod utility;

pub use error::{Error, Result};
pub use utility::{ApplicationProfile, LogParams, SigmoidParams, UeId, UeProfile, UtilityFunction};
