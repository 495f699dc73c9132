//! Time-slotted experiments with UE churn and usage changes.
//!
//! Slots are numbered from 1. All UEs in [`ScenarioScript::initial_ues`]
//! connect in slot 1; an [`Event`] at slot `n` is applied at the start of
//! slot `n` and opens a new window that lasts until the slot before the next
//! event (or the horizon). Every window is scored against a fresh centralized
//! solve for the UEs present in it.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::centralized::allocate_centralized;
use crate::distributed::{BiddingSession, CellChange, ProtocolConfig};
use crate::overhead::{measure_overhead, Channel, MessageKind, MessageRecord, OverheadCase};
use crate::utility::{UeId, UeProfile};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Architecture {
    Centralized,
    Distributed,
}

/// How incumbent UEs react to a change in the cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Policy {
    /// Everyone re-enters bidding, starting from their last bids.
    Rebid,
    /// Incumbents keep their bids; only new or changed UEs bid.
    NoRebid,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Action {
    Join(UeProfile),
    Leave(UeId),
    /// New usage weights, one per catalogue entry; renormalized on use.
    SetUsage {
        ue: UeId,
        weights: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Event {
    pub slot: u64,
    pub actions: Vec<Action>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioScript {
    pub initial_ues: Vec<UeProfile>,
    pub capacity: f64,
    /// Strictly increasing slots in `2..=horizon`.
    pub events: Vec<Event>,
    /// Last simulated slot.
    pub horizon: u64,
    pub policy: Policy,
    pub architecture: Architecture,
    pub cfg: ProtocolConfig,
}

impl ScenarioScript {
    pub fn validate(&self) -> Result<()> {
        crate::centralized::check_population(&self.initial_ues, self.capacity)?;
        self.cfg.validate()?;
        if self.horizon == 0 {
            return Err(Error::InvalidScenario("horizon must be at least one slot"));
        }
        let mut last = 1;
        for e in &self.events {
            if e.slot <= last {
                return Err(Error::InvalidScenario("event slots must be strictly increasing and after slot 1"));
            }
            if e.slot > self.horizon {
                return Err(Error::InvalidScenario("event after the horizon"));
            }
            if e.actions.is_empty() {
                return Err(Error::InvalidScenario("event without actions"));
            }
            last = e.slot;
        }
        // Dry run of the membership changes.
        let mut cell: BTreeMap<UeId, UeProfile> = self.initial_ues.iter().map(|u| (u.id(), u.clone())).collect();
        for e in &self.events {
            apply_actions(&mut cell, &e.actions)?;
        }
        Ok(())
    }
}

fn apply_actions(cell: &mut BTreeMap<UeId, UeProfile>, actions: &[Action]) -> Result<CellChange> {
    let mut change = CellChange::default();
    for action in actions {
        match action {
            Action::Join(profile) => {
                if cell.insert(profile.id(), profile.clone()).is_some() {
                    return Err(Error::DuplicateUe(profile.id()));
                }
                change.joined.push(profile.clone());
            }
            Action::Leave(id) => {
                cell.remove(id).ok_or(Error::UnknownUe(*id))?;
                change.joined.retain(|p| p.id() != *id);
                change.changed.retain(|p| p.id() != *id);
                change.left.push(*id);
            }
            Action::SetUsage { ue, weights } => {
                let current = cell.get(ue).ok_or(Error::UnknownUe(*ue))?;
                let updated = current.with_weights(weights)?;
                cell.insert(*ue, updated.clone());
                if let Some(j) = change.joined.iter_mut().find(|p| p.id() == *ue) {
                    *j = updated;
                } else if let Some(c) = change.changed.iter_mut().find(|p| p.id() == *ue) {
                    *c = updated;
                } else {
                    change.changed.push(updated);
                }
            }
        }
    }
    if cell.is_empty() {
        return Err(Error::InvalidScenario("cell became empty"));
    }
    Ok(change)
}

/// Full-information optimum for a snapshot of the cell.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleSnapshot {
    pub rates: BTreeMap<UeId, f64>,
    /// `w* = p* r*`.
    pub bids: BTreeMap<UeId, f64>,
    pub price: f64,
}

/// Fresh centralized solve mapped to rates, bids and price.
pub fn oracle_optimal(ues: &[UeProfile], capacity: f64) -> Result<OracleSnapshot> {
    let alloc = allocate_centralized(ues, capacity)?;
    let price = alloc.shadow_price;
    let bids = alloc.per_ue_rates.iter().map(|(&id, &r)| (id, price * r)).collect();
    Ok(OracleSnapshot { rates: alloc.per_ue_rates, bids, price })
}

/// One row per UE per slot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlotRow {
    pub slot: u64,
    pub ue: UeId,
    pub rate: f64,
    pub bid: f64,
    pub price: f64,
    /// Transmissions since slot 1, inclusive of this slot.
    pub overhead_cum: u64,
    pub rate_err: f64,
    pub bid_err: f64,
    /// Absolute price error `|p - p*|`.
    pub price_err: f64,
}

/// Steady state of a window: sampled at its last slot once converged.
#[derive(Debug, Clone, PartialEq)]
pub struct SteadyState {
    pub rates: BTreeMap<UeId, f64>,
    pub bids: BTreeMap<UeId, f64>,
    pub price: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WindowSummary {
    pub start_slot: u64,
    pub end_slot: u64,
    /// Slot in which the allocation settled, if it did.
    pub converged_slot: Option<u64>,
    /// Slots in this window that carried traffic.
    pub active_slots: u64,
    /// Transmissions inside the window.
    pub overhead: u64,
    pub steady: Option<SteadyState>,
    pub oracle: OracleSnapshot,
}

impl WindowSummary {
    pub fn converged(&self) -> bool {
        self.steady.is_some()
    }

    /// `max_i |r_i - r_i*|` at steady state.
    pub fn steady_rate_error(&self) -> Option<f64> {
        self.steady.as_ref().map(|s| max_gap(&s.rates, &self.oracle.rates))
    }

    pub fn steady_bid_error(&self) -> Option<f64> {
        self.steady.as_ref().map(|s| max_gap(&s.bids, &self.oracle.bids))
    }

    /// `|p - p*| / p*` at steady state.
    pub fn steady_price_error(&self) -> Option<f64> {
        self.steady.as_ref().map(|s| libm::fabs(s.price - self.oracle.price) / self.oracle.price)
    }
}

fn max_gap(a: &BTreeMap<UeId, f64>, b: &BTreeMap<UeId, f64>) -> f64 {
    a.iter().map(|(id, x)| b.get(id).map_or(f64::INFINITY, |y| libm::fabs(x - y))).fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeriesResult {
    pub rows: Vec<SlotRow>,
    pub windows: Vec<WindowSummary>,
    pub trace: Vec<MessageRecord>,
}

/// Per-slot, per-UE errors against the window's oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorPoint {
    pub slot: u64,
    pub ue: UeId,
    pub rate_err: f64,
    pub bid_err: f64,
    pub price_err: f64,
    /// `100 * |p - p*| / p*`.
    pub price_err_pct: f64,
}

/// Error trace of a finished run.
pub fn error_trace(result: &TimeSeriesResult) -> Vec<ErrorPoint> {
    let mut out = Vec::with_capacity(result.rows.len());
    let mut windows = result.windows.iter().peekable();
    for row in &result.rows {
        while windows.peek().is_some_and(|w| w.end_slot < row.slot) {
            windows.next();
        }
        let p_opt = windows.peek().map_or(f64::NAN, |w| w.oracle.price);
        out.push(ErrorPoint {
            slot: row.slot,
            ue: row.ue,
            rate_err: row.rate_err,
            bid_err: row.bid_err,
            price_err: row.price_err,
            price_err_pct: 100.0 * row.price_err / p_opt,
        });
    }
    out
}

struct Recorder {
    rows: Vec<SlotRow>,
    windows: Vec<WindowSummary>,
}

struct Snapshot {
    rates: BTreeMap<UeId, f64>,
    bids: BTreeMap<UeId, f64>,
    price: f64,
}

impl Recorder {
    fn record(&mut self, slot: u64, snap: &Snapshot, oracle: &OracleSnapshot, overhead_cum: u64) {
        let price_err = libm::fabs(snap.price - oracle.price);
        for (&ue, &rate) in &snap.rates {
            let bid = snap.bids[&ue];
            self.rows.push(SlotRow {
                slot,
                ue,
                rate,
                bid,
                price: snap.price,
                overhead_cum,
                rate_err: libm::fabs(rate - oracle.rates[&ue]),
                bid_err: libm::fabs(bid - oracle.bids[&ue]),
                price_err,
            });
        }
    }
}

fn window_bounds(script: &ScenarioScript) -> Vec<(u64, u64)> {
    let mut starts: Vec<u64> = core::iter::once(1).chain(script.events.iter().map(|e| e.slot)).collect();
    starts.push(script.horizon + 1);
    starts.windows(2).map(|w| (w[0], w[1] - 1)).collect()
}

/// Runs a script to its horizon.
pub fn run_scenario(script: &ScenarioScript) -> Result<TimeSeriesResult> {
    script.validate()?;
    match script.architecture {
        Architecture::Centralized => run_centralized(script),
        Architecture::Distributed => run_distributed(script),
    }
}

fn run_centralized(script: &ScenarioScript) -> Result<TimeSeriesResult> {
    let mut channel = Channel::new();
    let mut cell: BTreeMap<UeId, UeProfile> = BTreeMap::new();
    let mut rec = Recorder { rows: Vec::new(), windows: Vec::new() };
    let initial: Vec<Action> = script.initial_ues.iter().cloned().map(Action::Join).collect();

    for (n, (start, end)) in window_bounds(script).into_iter().enumerate() {
        let actions = if n == 0 { &initial } else { &script.events[n - 1].actions };
        let change = apply_actions(&mut cell, actions)?;
        for id in &change.left {
            channel.uplink(start, MessageKind::ServiceTermination, *id);
        }
        for p in change.joined.iter().chain(&change.changed) {
            channel.uplink(start, MessageKind::UtilityParams, p.id());
        }
        let ues: Vec<UeProfile> = cell.values().cloned().collect();
        let oracle = oracle_optimal(&ues, script.capacity)?;
        for id in cell.keys() {
            channel.unicast(start, MessageKind::RateAssignment, *id);
        }
        // The eNB's solve is the oracle: same inputs, same arithmetic.
        let solved = oracle.clone();
        let snap = Snapshot { rates: solved.rates.clone(), bids: solved.bids.clone(), price: solved.price };
        for slot in start..=end {
            let cum = measure_overhead(channel.records(), ..=slot);
            rec.record(slot, &snap, &oracle, cum);
        }
        rec.windows.push(WindowSummary {
            start_slot: start,
            end_slot: end,
            converged_slot: Some(start),
            active_slots: 1,
            overhead: measure_overhead(channel.records(), start..=end),
            steady: Some(SteadyState { rates: solved.rates, bids: solved.bids, price: solved.price }),
            oracle,
        });
    }
    Ok(TimeSeriesResult { rows: rec.rows, windows: rec.windows, trace: channel.into_records() })
}

fn run_distributed(script: &ScenarioScript) -> Result<TimeSeriesResult> {
    let mut channel = Channel::new();
    let mut cell: BTreeMap<UeId, UeProfile> = BTreeMap::new();
    let mut session = BiddingSession::new(script.capacity, script.cfg)?;
    let mut rec = Recorder { rows: Vec::new(), windows: Vec::new() };
    let initial: Vec<Action> = script.initial_ues.iter().cloned().map(Action::Join).collect();

    for (n, (start, end)) in window_bounds(script).into_iter().enumerate() {
        let (actions, policy) =
            if n == 0 { (&initial, Policy::Rebid) } else { (&script.events[n - 1].actions, script.policy) };
        let change = apply_actions(&mut cell, actions)?;
        session.begin_round(change, policy)?;
        let ues: Vec<UeProfile> = cell.values().cloned().collect();
        let oracle = oracle_optimal(&ues, script.capacity)?;

        let mut converged_slot = None;
        let mut active_slots = 0;
        for slot in start..=end {
            let report = session.step(slot, &mut channel)?;
            if report.messages > 0 {
                active_slots += 1;
            }
            if report.converged {
                converged_slot = Some(slot);
            }
            let snap = Snapshot {
                rates: session.rates(),
                bids: session.bids(),
                price: session.price().ok_or(Error::Empty("price history"))?,
            };
            rec.record(slot, &snap, &oracle, channel.len() as u64);
        }
        let steady = converged_slot.map(|_| SteadyState {
            rates: session.rates(),
            bids: session.bids(),
            price: session.price().unwrap_or(f64::NAN),
        });
        rec.windows.push(WindowSummary {
            start_slot: start,
            end_slot: end,
            converged_slot,
            active_slots,
            overhead: measure_overhead(channel.records(), start..=end),
            steady,
            oracle,
        });
    }
    Ok(TimeSeriesResult { rows: rec.rows, windows: rec.windows, trace: channel.into_records() })
}

/// Predicted minimum against measured transmissions for the window a case
/// refers to: the whole run for a fresh start, the first post-event window
/// otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OverheadCheck {
    pub predicted: u64,
    pub measured: u64,
    /// Slots with traffic in the measured window.
    pub slots: u64,
    pub converged: bool,
}

impl OverheadCheck {
    pub fn holds(&self) -> bool {
        self.measured >= self.predicted
    }
}

/// Runs `script` and compares the counted window with the closed form for `case`.
pub fn check_overhead(script: &ScenarioScript, case: OverheadCase) -> Result<OverheadCheck> {
    let scenario = crate::overhead::OverheadScenario {
        case,
        architecture: script.architecture,
        policy: script.policy,
        beta_location: script.cfg.beta_location,
        n_iter: 1,
    };
    let predicted = crate::overhead::predict_overhead(&scenario)?;
    let result = run_scenario(script)?;
    let window = match case {
        OverheadCase::FreshStart { .. } => result.windows.first(),
        _ => result.windows.get(1),
    }
    .ok_or(Error::InvalidScenario("script has no window for this case"))?;
    Ok(OverheadCheck {
        predicted,
        measured: window.overhead,
        slots: window.active_slots,
        converged: window.converged(),
    })
}
