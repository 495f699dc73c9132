//! Message accounting on the eNB/UE channel.
//!
//! Every logical transmission is recorded as a [`MessageRecord`]. A broadcast
//! counts as one transmission however many UEs hear it; that is what produces
//! the `+1` per price announcement in the closed forms of [`predict_overhead`].
//!
//! Decrease under rebidding: the per-case counts are `(k-1)M2 + k + 1 + M1`
//! (price at the UEs) and `2kM2 + M1` (price at the eNB). At `k = 1` the first
//! gives `M1 + 2`; the looser summary bound `2M2 + 2 - M1` that is sometimes
//! quoted for this case does not follow from it. This module implements the
//! per-case counts.

use alloc::vec::Vec;
use core::fmt;
use core::ops::RangeBounds;

use crate::distributed::BetaLocation;
use crate::scenario::{Architecture, Policy};
use crate::utility::UeId;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MessageKind {
    Bid,
    Price,
    UtilityParams,
    RateAssignment,
    ServiceTermination,
}

impl MessageKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Bid => "bid",
            Self::Price => "price",
            Self::UtilityParams => "utility_params",
            Self::RateAssignment => "rate_assignment",
            Self::ServiceTermination => "service_termination",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    UeToEnb,
    EnbToUe,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::UeToEnb => "ue->enb",
            Self::EnbToUe => "enb->ue",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Addressing {
    Unicast,
    Broadcast,
}

impl Addressing {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Unicast => "unicast",
            Self::Broadcast => "broadcast",
        }
    }
}

/// One logical transmission.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MessageRecord {
    pub slot: u64,
    pub kind: MessageKind,
    pub direction: Direction,
    pub addressing: Addressing,
    /// Sender for uplink, addressee for unicast downlink, `None` for broadcasts.
    pub ue: Option<UeId>,
}

/// Trace line: `slot,kind,direction,addressing,ue_id` (empty `ue_id` for broadcasts).
impl fmt::Display for MessageRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{},", self.slot, self.kind.as_str(), self.direction.as_str(), self.addressing.as_str())?;
        match self.ue {
            Some(id) => write!(f, "{id}"),
            None => Ok(()),
        }
    }
}

/// Append-only, in-process eNB/UE channel.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Channel {
    records: Vec<MessageRecord>,
}

impl Channel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn uplink(&mut self, slot: u64, kind: MessageKind, ue: UeId) {
        self.records.push(MessageRecord {
            slot,
            kind,
            direction: Direction::UeToEnb,
            addressing: Addressing::Unicast,
            ue: Some(ue),
        });
    }

    pub fn unicast(&mut self, slot: u64, kind: MessageKind, ue: UeId) {
        self.records.push(MessageRecord {
            slot,
            kind,
            direction: Direction::EnbToUe,
            addressing: Addressing::Unicast,
            ue: Some(ue),
        });
    }

    pub fn broadcast(&mut self, slot: u64, kind: MessageKind) {
        self.records.push(MessageRecord {
            slot,
            kind,
            direction: Direction::EnbToUe,
            addressing: Addressing::Broadcast,
            ue: None,
        });
    }

    pub fn records(&self) -> &[MessageRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn into_records(self) -> Vec<MessageRecord> {
        self.records
    }
}

/// Number of transmissions whose slot falls in `window`.
pub fn measure_overhead(trace: &[MessageRecord], window: impl RangeBounds<u64>) -> u64 {
    trace.iter().filter(|m| window.contains(&m.slot)).count() as u64
}

/// What changed in the cell before the counted window.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OverheadCase {
    /// `ues` UEs connect to an idle eNB.
    FreshStart { ues: u32 },
    /// The UE count goes from `before` to `after`.
    Churn { before: u32, after: u32 },
    /// `changed` of `ues` UEs alter their application usage.
    UsageChange { ues: u32, changed: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OverheadScenario {
    pub case: OverheadCase,
    pub architecture: Architecture,
    pub policy: Policy,
    pub beta_location: BetaLocation,
    /// Bidding iterations `k >= 1`; ignored by the centralized architecture.
    pub n_iter: u32,
}

/// Closed-form minimum transmission count for a scenario.
///
/// A distributed fresh start is counted as churn from zero UEs, so it takes
/// `(k+1)(M+1)` transmissions with the price at the UEs and `(2k+2)M` with the
/// price at the eNB. The rebid/no-rebid distinction does not apply to it.
pub fn predict_overhead(s: &OverheadScenario) -> Result<u64> {
    if s.n_iter == 0 {
        return Err(Error::InvalidScenario("iteration count must be at least one"));
    }
    let k = i64::from(s.n_iter);
    let at_ue = s.beta_location == BetaLocation::AtUe;
    let count = match (s.case, s.architecture) {
        (OverheadCase::FreshStart { ues: 0 }, _) => {
            return Err(Error::InvalidScenario("fresh start without UEs"));
        }
        (OverheadCase::Churn { before, after }, _) if before == after => {
            return Err(Error::InvalidScenario("churn without a change in UE count"));
        }
        (OverheadCase::UsageChange { ues, changed }, _) if changed == 0 || changed > ues => {
            return Err(Error::InvalidScenario("usage change needs 1 <= changed <= ues"));
        }
        (OverheadCase::Churn { after: 0, .. }, _) => {
            return Err(Error::InvalidScenario("churn must leave at least one UE"));
        }

        (OverheadCase::FreshStart { ues }, Architecture::Centralized) => 2 * i64::from(ues),
        (OverheadCase::Churn { before, after }, Architecture::Centralized) => {
            let (m1, m2) = (i64::from(before), i64::from(after));
            if m2 > m1 {
                2 * m2 - m1
            } else {
                m1
            }
        }
        (OverheadCase::UsageChange { ues, changed }, Architecture::Centralized) => i64::from(changed) + i64::from(ues),

        (OverheadCase::FreshStart { ues }, Architecture::Distributed) => {
            let m = i64::from(ues);
            if at_ue {
                (k + 1) * (m + 1)
            } else {
                (2 * k + 2) * m
            }
        }
        (OverheadCase::Churn { before, after }, Architecture::Distributed) => {
            let (m1, m2) = (i64::from(before), i64::from(after));
            match (s.policy, m2 > m1, at_ue) {
                (Policy::Rebid, true, true) => (k + 1) * m2 + k + 1 - m1,
                (Policy::Rebid, true, false) => (2 * k + 2) * m2 - m1,
                (Policy::Rebid, false, true) => (k - 1) * m2 + k + 1 + m1,
                (Policy::Rebid, false, false) => 2 * k * m2 + m1,
                (Policy::NoRebid, true, true) => k * (m2 - m1) + k,
                (Policy::NoRebid, true, false) => (2 * k + 2) * (m2 - m1),
                (Policy::NoRebid, false, _) => m1 - m2,
            }
        }
        (OverheadCase::UsageChange { ues, changed }, Architecture::Distributed) => {
            let (m, mc) = (i64::from(ues), i64::from(changed));
            match (s.policy, at_ue) {
                (Policy::Rebid, true) => mc + 1 + k * m + k,
                (Policy::Rebid, false) => mc + m + 2 * k * m,
                (Policy::NoRebid, true) => k * mc + k,
                (Policy::NoRebid, false) => (2 * k + 2) * mc,
            }
        }
    };
    Ok(count as u64)
}
