//! Application utility models and their log-marginals.
//!
//! Real-time traffic uses the normalized sigmoid
//! `U(r) = c * (1 / (1 + e^{-a(r-b)}) - d)` with `c = (1 + e^{ab}) / e^{ab}` and
//! `d = 1 / (1 + e^{ab})`; delay-tolerant traffic uses the normalized logarithm
//! `U(r) = ln(1 + k r) / ln(1 + k r_max)`. Both are log-concave, so the
//! weighted log-marginal `alpha * d ln U / dr` is strictly decreasing and can be
//! inverted by bisection. That inverse is the per-application demand curve; its
//! sum over a UE's applications is the UE demand curve used by both the
//! centralized solver and the bidding protocol.

use alloc::vec::Vec;
use core::fmt;

use crate::math::bisect_decreasing;
use crate::{Error, Result};

/// Lower end of every demand bracket, in rate units.
pub const DEMAND_LOWER_BRACKET: f64 = 1e-12;
/// Upper cap for demand bracket growth, in rate units.
pub const DEMAND_UPPER_CAP: f64 = (1u64 << 30) as f64;
/// Bracket width at which demand bisection stops (absolute above one rate
/// unit, relative below).
pub const DEMAND_TOLERANCE: f64 = 1e-9;
const DEMAND_MAX_ITER: usize = 400;

/// Stable identifier of a UE across a scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UeId(pub u32);

impl fmt::Display for UeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

fn positive(what: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter { what, value })
    }
}

/// Sigmoidal utility parameters: steepness `a` and inflection rate `b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmoidParams {
    a: f64,
    b: f64,
}

impl SigmoidParams {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        Ok(Self { a: positive("sigmoid a", a)?, b: positive("sigmoid b", b)? })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// Inflection rate.
    pub fn b(&self) -> f64 {
        self.b
    }

    /// Normalization factor `(1 + e^{ab}) / e^{ab}`.
    pub fn c(&self) -> f64 {
        1.0 + libm::exp(-self.a * self.b)
    }

    /// Offset `1 / (1 + e^{ab})` that pins `U(0) = 0`.
    pub fn d(&self) -> f64 {
        1.0 / (1.0 + libm::exp(self.a * self.b))
    }

    fn logistic(&self, r: f64) -> f64 {
        1.0 / (1.0 + libm::exp(-self.a * (r - self.b)))
    }

    fn one_minus_logistic(&self, r: f64) -> f64 {
        1.0 / (1.0 + libm::exp(self.a * (r - self.b)))
    }

    // c * (sigma(r) - d) == (1 - e^{-ar}) * sigma(r); the right-hand side has
    // no cancellation near r = 0 when ab is large.
    fn eval(&self, r: f64) -> f64 {
        -libm::expm1(-self.a * r) * self.logistic(r)
    }

    fn ln_marginal(&self, r: f64) -> f64 {
        self.a / libm::expm1(self.a * r) + self.a * self.one_minus_logistic(r)
    }
}

/// Logarithmic utility parameters: rate sensitivity `k_log` and the rate
/// `r_max` at which satisfaction reaches one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogParams {
    k_log: f64,
    r_max: f64,
}

impl LogParams {
    pub fn new(k_log: f64, r_max: f64) -> Result<Self> {
        Ok(Self { k_log: positive("log k", k_log)?, r_max: positive("log r_max", r_max)? })
    }

    pub fn k_log(&self) -> f64 {
        self.k_log
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    fn eval(&self, r: f64) -> f64 {
        libm::log1p(self.k_log * r) / libm::log1p(self.k_log * self.r_max)
    }

    // ln(1 + k r_max) is a constant factor of U and drops out of d ln U / dr.
    fn ln_marginal(&self, r: f64) -> f64 {
        let kr = self.k_log * r;
        self.k_log / ((1.0 + kr) * libm::log1p(kr))
    }
}

/// QoS curve of one application.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UtilityFunction {
    /// Real-time, inelastic traffic.
    Sigmoid(SigmoidParams),
    /// Delay-tolerant, elastic traffic.
    Log(LogParams),
}

impl UtilityFunction {
    pub fn sigmoid(a: f64, b: f64) -> Result<Self> {
        SigmoidParams::new(a, b).map(Self::Sigmoid)
    }

    pub fn log(k_log: f64, r_max: f64) -> Result<Self> {
        LogParams::new(k_log, r_max).map(Self::Log)
    }

    /// Satisfaction at rate `r >= 0`.
    pub fn eval(&self, r: f64) -> Result<f64> {
        if !(r >= 0.0) || r.is_infinite() {
            return Err(Error::Domain { what: "rate", value: r });
        }
        Ok(match self {
            Self::Sigmoid(s) => s.eval(r),
            Self::Log(l) => l.eval(r),
        })
    }

    /// `alpha * d ln U / dr` at `r > 0`.
    pub fn log_marginal(&self, alpha: f64, r: f64) -> Result<f64> {
        if !(r > 0.0) || r.is_infinite() {
            return Err(Error::Domain { what: "rate", value: r });
        }
        Ok(alpha * self.ln_marginal_unchecked(r))
    }

    fn ln_marginal_unchecked(&self, r: f64) -> f64 {
        match self {
            Self::Sigmoid(s) => s.ln_marginal(r),
            Self::Log(l) => l.ln_marginal(r),
        }
    }

    /// The unique `r > 0` with `log_marginal(alpha, r) == price`.
    ///
    /// Brackets from [`DEMAND_LOWER_BRACKET`] and doubles an upper end from one
    /// rate unit until the marginal drops below `price`.
    pub fn demand(&self, alpha: f64, price: f64) -> Result<f64> {
        if !(price > 0.0) || price.is_infinite() {
            return Err(Error::Domain { what: "price", value: price });
        }
        if !(alpha > 0.0) || alpha > 1.0 {
            return Err(Error::Domain { what: "usage fraction", value: alpha });
        }
        let excess = |r: f64| alpha * self.ln_marginal_unchecked(r) - price;
        let mut lo = DEMAND_LOWER_BRACKET;
        if excess(lo) <= 0.0 {
            return Err(Error::Domain { what: "price (above demand bracket)", value: price });
        }
        let mut hi = 1.0;
        while excess(hi) >= 0.0 {
            lo = hi;
            hi *= 2.0;
            if hi > DEMAND_UPPER_CAP {
                return Err(Error::Domain { what: "price (below demand bracket)", value: price });
            }
        }
        bisect_decreasing(excess, lo, hi, |lo, hi| hi - lo <= DEMAND_TOLERANCE * lo.min(1.0), DEMAND_MAX_ITER)
            .map(|(r, _)| r)
            .ok_or(Error::NoConvergence { what: "application demand", iterations: DEMAND_MAX_ITER })
    }

    /// Inflection rate: `b` for sigmoids, zero for logarithms.
    pub fn inflection(&self) -> f64 {
        match self {
            Self::Sigmoid(s) => s.b(),
            Self::Log(_) => 0.0,
        }
    }
}

/// One application running on a UE with its usage share.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApplicationProfile {
    /// Position in the UE's application catalogue.
    pub index: usize,
    pub utility: UtilityFunction,
    /// Usage fraction in `(0, 1]`.
    pub alpha: f64,
}

impl ApplicationProfile {
    pub fn demand(&self, price: f64) -> Result<f64> {
        self.utility.demand(self.alpha, price)
    }

    pub fn log_marginal(&self, r: f64) -> Result<f64> {
        self.utility.log_marginal(self.alpha, r)
    }
}

/// A UE: its installed applications, their usage shares and its subscriber
/// weight `beta`.
///
/// The catalogue keeps every installed application. Applications with zero
/// usage are absent from [`UeProfile::apps`]; the remaining shares are
/// renormalized to sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct UeProfile {
    id: UeId,
    beta: f64,
    catalogue: Vec<UtilityFunction>,
    apps: Vec<ApplicationProfile>,
}

impl UeProfile {
    /// Builds a profile from `(utility, usage weight)` pairs.
    pub fn new(id: UeId, beta: f64, apps: &[(UtilityFunction, f64)]) -> Result<Self> {
        let beta = positive("beta", beta)?;
        let catalogue: Vec<_> = apps.iter().map(|(u, _)| *u).collect();
        let weights: Vec<_> = apps.iter().map(|(_, w)| *w).collect();
        Self::assemble(id, beta, catalogue, &weights)
    }

    fn assemble(id: UeId, beta: f64, catalogue: Vec<UtilityFunction>, weights: &[f64]) -> Result<Self> {
        if catalogue.is_empty() {
            return Err(Error::Empty("application list"));
        }
        if weights.len() != catalogue.len() {
            return Err(Error::InvalidScenario("usage vector length differs from application count"));
        }
        let mut total = 0.0;
        for &w in weights {
            if !(w >= 0.0) || w.is_infinite() {
                return Err(Error::InvalidParameter { what: "usage weight", value: w });
            }
            total += w;
        }
        if total <= 0.0 {
            return Err(Error::NoActiveApplication(id));
        }
        let apps = catalogue
            .iter()
            .zip(weights)
            .enumerate()
            .filter(|(_, (_, &w))| w > 0.0)
            .map(|(index, (&utility, &w))| ApplicationProfile { index, utility, alpha: w / total })
            .collect();
        Ok(Self { id, beta, catalogue, apps })
    }

    /// Same UE and catalogue with new usage weights (one per catalogue entry).
    pub fn with_weights(&self, weights: &[f64]) -> Result<Self> {
        Self::assemble(self.id, self.beta, self.catalogue.clone(), weights)
    }

    /// Same UE with a different subscriber weight.
    pub fn with_beta(&self, beta: f64) -> Result<Self> {
        let mut out = self.clone();
        out.beta = positive("beta", beta)?;
        Ok(out)
    }

    pub fn id(&self) -> UeId {
        self.id
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn catalogue(&self) -> &[UtilityFunction] {
        &self.catalogue
    }

    /// Applications with positive usage, in catalogue order.
    pub fn apps(&self) -> &[ApplicationProfile] {
        &self.apps
    }

    /// Usage share of every catalogue entry (zero for absent applications).
    pub fn usage(&self) -> Vec<f64> {
        let mut out = alloc::vec![0.0; self.catalogue.len()];
        for app in &self.apps {
            out[app.index] = app.alpha;
        }
        out
    }

    /// UE demand at effective price `q`: the sum of application demands.
    ///
    /// Splitting a budget optimally among the applications equalizes their
    /// weighted log-marginals, and by the envelope theorem that common value is
    /// the marginal of the UE's aggregate log-utility. Inverting the aggregate
    /// therefore amounts to summing the per-application inverses.
    pub fn demand(&self, effective_price: f64) -> Result<f64> {
        self.apps.iter().map(|a| a.demand(effective_price)).sum()
    }

    /// Per-application demands at effective price `q`.
    pub fn app_demands(&self, effective_price: f64) -> Result<Vec<f64>> {
        self.apps.iter().map(|a| a.demand(effective_price)).collect()
    }

    /// Largest inflection rate among active applications.
    pub fn max_inflection(&self) -> f64 {
        self.apps.iter().map(|a| a.utility.inflection()).fold(0.0, f64::max)
    }
}
