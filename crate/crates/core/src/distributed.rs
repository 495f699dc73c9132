//! Two-stage bidding: external allocation between the eNB and its UEs, then
//! an internal split of each UE's share among its applications.
//!
//! One slot is one full exchange: the UEs that are bidding send their bids,
//! then the eNB announces `p = sum(w) / R`. A UE answers price `p` with
//! `w = p * S^{-1}(p / beta)`, where `S^{-1}` is its demand curve. At the fixed
//! point `sum S^{-1}(p / beta_i) = R`, which is the centralized optimum.
//!
//! The eNB always holds the latest bid of every UE in the cell, so a UE's rate
//! in any slot is `w_i / p`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::centralized::{check_population, Allocation};
use crate::math::{bisect_decreasing_log, blend_to_total};
use crate::overhead::{Channel, MessageKind};
use crate::scenario::Policy;
use crate::utility::{UeId, UeProfile};
use crate::{Error, Result};

/// Bid of a UE that has not heard any price yet.
pub const INITIAL_BID: f64 = 1.0;
/// Residual, relative to the UE budget, at which the internal split stops.
pub const SPLIT_TOLERANCE: f64 = 1e-8;
const SPLIT_MAX_ITER: usize = 400;

/// Where the subscriber weight `beta` is known.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BetaLocation {
    /// UEs know their own weight; the eNB broadcasts one price.
    AtUe,
    /// Only the eNB knows the weights; it unicasts `p / beta_i` to each UE.
    AtEnb,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolConfig {
    /// Bidding stops once no bid moves by `delta` or more between slots.
    pub delta: f64,
    pub beta_location: BetaLocation,
    /// Weight of the fresh bid in `w = damping * w' + (1 - damping) * w_prev`.
    /// `1.0` disables damping.
    pub damping: f64,
    /// Slots one bidding round may take before it is declared non-converged.
    pub max_slots: u64,
}

impl Default for ProtocolConfig {
    fn default() -> Self {
        Self { delta: 1e-3, beta_location: BetaLocation::AtUe, damping: 1.0, max_slots: 10_000 }
    }
}

impl ProtocolConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0) || self.delta.is_infinite() {
            return Err(Error::InvalidParameter { what: "delta", value: self.delta });
        }
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return Err(Error::InvalidParameter { what: "damping", value: self.damping });
        }
        if self.max_slots == 0 {
            return Err(Error::InvalidParameter { what: "max_slots", value: 0.0 });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bid {
    pub ue: UeId,
    /// Price times rate; always positive.
    pub w: f64,
    pub slot: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PriceAddressing {
    Broadcast,
    /// Unicast carrying the UE's effective price `p / beta_i`.
    PerUe {
        ue: UeId,
        effective: f64,
    },
}

/// A price announcement. The eNB-issued price and the shadow price are the
/// same quantity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShadowPrice {
    pub p: f64,
    pub slot: u64,
    pub addressing: PriceAddressing,
}

impl ShadowPrice {
    /// Per-UE copy of this price for a UE with weight `beta`.
    pub fn to_ue(&self, ue: UeId, beta: f64) -> Self {
        Self { addressing: PriceAddressing::PerUe { ue, effective: self.p / beta }, ..*self }
    }
}

/// `p = sum(w) / R`.
pub fn enb_price(bids: &[Bid], capacity: f64, slot: u64) -> Result<ShadowPrice> {
    if bids.is_empty() {
        return Err(Error::Empty("bid set"));
    }
    if !(capacity > 0.0) {
        return Err(Error::Domain { what: "capacity", value: capacity });
    }
    let total: f64 = bids.iter().map(|b| b.w).sum();
    Ok(ShadowPrice { p: total / capacity, slot, addressing: PriceAddressing::Broadcast })
}

/// A UE's answer to a price: its desired rate and its (possibly damped) bid.
pub fn ue_bid(ue: &UeProfile, price: &ShadowPrice, previous_bid: f64, cfg: &ProtocolConfig) -> Result<(f64, Bid)> {
    if !(price.p > 0.0) {
        return Err(Error::Domain { what: "price", value: price.p });
    }
    let effective = match price.addressing {
        PriceAddressing::Broadcast => price.p / ue.beta(),
        PriceAddressing::PerUe { effective, .. } => effective,
    };
    let rate = ue.demand(effective)?;
    let fresh = price.p * rate;
    let w = if cfg.damping == 1.0 { fresh } else { cfg.damping * fresh + (1.0 - cfg.damping) * previous_bid };
    Ok((rate, Bid { ue: ue.id(), w, slot: price.slot }))
}

/// Splits `budget` among the UE's applications by equalizing their weighted
/// log-marginals. Returns `(catalogue index, rate)` pairs.
pub fn run_iura(ue: &UeProfile, budget: f64) -> Result<Vec<(usize, f64)>> {
    if !(budget > 0.0) || budget.is_infinite() {
        return Err(Error::Domain { what: "UE budget", value: budget });
    }
    if let [only] = ue.apps() {
        return Ok(alloc::vec![(only.index, budget)]);
    }
    let excess = |lambda: f64| ue.demand(lambda).map(|d| d - budget);
    let (mut lo, mut hi) = (1.0, 1.0);
    if excess(1.0)? > 0.0 {
        while excess(hi)? > 0.0 {
            lo = hi;
            hi *= 2.0;
        }
    } else {
        while excess(lo)? < 0.0 {
            hi = lo;
            lo *= 0.5;
        }
    }
    let tol = SPLIT_TOLERANCE * budget;
    let found = bisect_decreasing_log(excess, lo, hi, |v| v.abs() <= tol, SPLIT_MAX_ITER)?;
    let rates = if found.fx.abs() <= tol {
        ue.app_demands(found.x)?
    } else if found.hi <= found.lo * (1.0 + 4.0 * f64::EPSILON) {
        blend_to_total(&ue.app_demands(found.lo)?, &ue.app_demands(found.hi)?, budget)
    } else {
        return Err(Error::NoConvergence { what: "internal split", iterations: SPLIT_MAX_ITER });
    };
    Ok(ue.apps().iter().map(|a| a.index).zip(rates).collect())
}

#[derive(Debug, Clone, PartialEq)]
struct UeAgent {
    profile: UeProfile,
    bid: f64,
    /// Last price this UE heard.
    inbox: Option<ShadowPrice>,
}

/// What happened to the cell right before a bidding round starts.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CellChange {
    pub joined: Vec<UeProfile>,
    pub left: Vec<UeId>,
    /// New profiles for UEs whose usage changed.
    pub changed: Vec<UeProfile>,
}

#[derive(Debug, Clone, PartialEq)]
struct Round {
    opening: bool,
    terminations: Vec<UeId>,
    /// UEs that send an opening bid in the first slot.
    openers: BTreeSet<UeId>,
    /// UEs that answer every price.
    bidders: BTreeSet<UeId>,
    /// UEs that receive the price.
    listeners: BTreeSet<UeId>,
    slots: u64,
}

/// Result of one slot of the bidding loop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlotReport {
    pub slot: u64,
    /// Transmissions in this slot.
    pub messages: u64,
    /// The round reached its termination criterion in this slot.
    pub converged: bool,
    /// The round hit `max_slots` in this slot without converging.
    pub gave_up: bool,
}

/// eNB-side state of the external allocation plus the UE agents it serves.
#[derive(Debug, Clone, PartialEq)]
pub struct BiddingSession {
    capacity: f64,
    cfg: ProtocolConfig,
    agents: BTreeMap<UeId, UeAgent>,
    price: Option<f64>,
    round: Option<Round>,
}

impl BiddingSession {
    pub fn new(capacity: f64, cfg: ProtocolConfig) -> Result<Self> {
        if !(capacity > 0.0) || capacity.is_infinite() {
            return Err(Error::Domain { what: "capacity", value: capacity });
        }
        cfg.validate()?;
        Ok(Self { capacity, cfg, agents: BTreeMap::new(), price: None, round: None })
    }

    pub fn config(&self) -> &ProtocolConfig {
        &self.cfg
    }

    /// Applies a cell change and schedules a bidding round for the next slot.
    ///
    /// Under [`Policy::Rebid`] every UE in the cell answers prices; under
    /// [`Policy::NoRebid`] only joining or changed UEs do (plus any UE still
    /// bidding in an unfinished round), and the rest keep their bids.
    pub fn begin_round(&mut self, change: CellChange, policy: Policy) -> Result<()> {
        for id in &change.left {
            if self.agents.remove(id).is_none() {
                return Err(Error::UnknownUe(*id));
            }
        }
        let mut openers = BTreeSet::new();
        for profile in change.joined {
            let id = profile.id();
            if self.agents.contains_key(&id) {
                return Err(Error::DuplicateUe(id));
            }
            self.agents.insert(id, UeAgent { profile, bid: INITIAL_BID, inbox: None });
            openers.insert(id);
        }
        for profile in change.changed {
            let id = profile.id();
            let agent = self.agents.get_mut(&id).ok_or(Error::UnknownUe(id))?;
            agent.profile = profile;
            openers.insert(id);
        }
        if self.agents.is_empty() {
            return Err(Error::Empty("cell"));
        }
        let bidders: BTreeSet<UeId> = match policy {
            Policy::Rebid => self.agents.keys().copied().collect(),
            Policy::NoRebid => {
                let mut set = openers.clone();
                if let Some(prev) = &self.round {
                    set.extend(prev.bidders.iter().filter(|id| self.agents.contains_key(id)));
                }
                set
            }
        };
        self.round = Some(Round {
            opening: true,
            terminations: change.left,
            openers,
            listeners: bidders.clone(),
            bidders,
            slots: 0,
        });
        Ok(())
    }

    /// Whether a bidding round is in progress.
    pub fn is_bidding(&self) -> bool {
        self.round.is_some()
    }

    /// Runs one slot, logging every transmission to `channel`.
    pub fn step(&mut self, slot: u64, channel: &mut Channel) -> Result<SlotReport> {
        let before = channel.len();
        let Some(mut round) = self.round.take() else {
            return Ok(SlotReport { slot, messages: 0, converged: false, gave_up: false });
        };
        round.slots += 1;
        let mut max_change: f64 = 0.0;

        if round.opening {
            for id in &round.terminations {
                channel.uplink(slot, MessageKind::ServiceTermination, *id);
            }
            for id in &round.openers {
                let agent = self.agents.get_mut(id).ok_or(Error::UnknownUe(*id))?;
                // A changed UE rebids at the last price it heard; a new UE
                // opens with the initial bid.
                if let Some(price) = agent.inbox {
                    let (_, bid) = ue_bid(&agent.profile, &price, agent.bid, &self.cfg)?;
                    agent.bid = bid.w;
                }
                channel.uplink(slot, MessageKind::Bid, *id);
            }
        } else {
            for id in &round.bidders {
                let agent = self.agents.get_mut(id).ok_or(Error::UnknownUe(*id))?;
                let price = agent.inbox.ok_or(Error::InvalidScenario("bidder has not heard a price"))?;
                let (_, bid) = ue_bid(&agent.profile, &price, agent.bid, &self.cfg)?;
                max_change = max_change.max(libm::fabs(bid.w - agent.bid));
                agent.bid = bid.w;
                channel.uplink(slot, MessageKind::Bid, *id);
            }
        }

        let bids: Vec<Bid> = self.agents.iter().map(|(&ue, a)| Bid { ue, w: a.bid, slot }).collect();
        let price = enb_price(&bids, self.capacity, slot)?;
        self.price = Some(price.p);

        if !round.listeners.is_empty() {
            match self.cfg.beta_location {
                BetaLocation::AtUe => {
                    channel.broadcast(slot, MessageKind::Price);
                    for agent in self.agents.values_mut() {
                        agent.inbox = Some(price);
                    }
                }
                BetaLocation::AtEnb => {
                    for id in &round.listeners {
                        let agent = self.agents.get_mut(id).ok_or(Error::UnknownUe(*id))?;
                        agent.inbox = Some(price.to_ue(*id, agent.profile.beta()));
                        channel.unicast(slot, MessageKind::Price, *id);
                    }
                }
            }
        }

        let converged = if round.opening { round.bidders.is_empty() } else { max_change < self.cfg.delta };
        let gave_up = !converged && round.slots >= self.cfg.max_slots;
        round.opening = false;
        if !converged && !gave_up {
            self.round = Some(round);
        }
        Ok(SlotReport { slot, messages: (channel.len() - before) as u64, converged, gave_up })
    }

    /// Latest announced price, if any.
    pub fn price(&self) -> Option<f64> {
        self.price
    }

    pub fn bids(&self) -> BTreeMap<UeId, f64> {
        self.agents.iter().map(|(&id, a)| (id, a.bid)).collect()
    }

    /// Rates implied by the current bids, `w_i / p`.
    pub fn rates(&self) -> BTreeMap<UeId, f64> {
        let total: f64 = self.agents.values().map(|a| a.bid).sum();
        let p = total / self.capacity;
        self.agents.iter().map(|(&id, a)| (id, a.bid / p)).collect()
    }

    pub fn profiles(&self) -> impl Iterator<Item = &UeProfile> {
        self.agents.values().map(|a| &a.profile)
    }

    pub fn profile(&self, id: UeId) -> Option<&UeProfile> {
        self.agents.get(&id).map(|a| &a.profile)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConvergenceStatus {
    Converged,
    NotConverged,
}

/// Bids and price after one slot.
#[derive(Debug, Clone, PartialEq)]
pub struct SlotSnapshot {
    pub slot: u64,
    pub price: f64,
    pub bids: BTreeMap<UeId, f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EuraOutcome {
    pub status: ConvergenceStatus,
    /// Final `r_i = w_i / p`.
    pub rates: BTreeMap<UeId, f64>,
    pub bids: BTreeMap<UeId, f64>,
    pub price: f64,
    pub slots: u64,
    pub trace: Vec<SlotSnapshot>,
}

/// Runs the external allocation from a cold start until the bids settle or
/// `cfg.max_slots` is reached. Slots are numbered from 1.
pub fn run_eura(ues: &[UeProfile], capacity: f64, cfg: &ProtocolConfig, channel: &mut Channel) -> Result<EuraOutcome> {
    check_population(ues, capacity)?;
    let mut session = BiddingSession::new(capacity, *cfg)?;
    session.begin_round(CellChange { joined: ues.to_vec(), ..Default::default() }, Policy::Rebid)?;
    let mut trace = Vec::new();
    let mut slot = 0;
    let status = loop {
        slot += 1;
        let report = session.step(slot, channel)?;
        trace.push(SlotSnapshot { slot, price: session.price().unwrap_or(0.0), bids: session.bids() });
        if report.converged {
            break ConvergenceStatus::Converged;
        }
        if report.gave_up {
            break ConvergenceStatus::NotConverged;
        }
    };
    Ok(EuraOutcome {
        status,
        rates: session.rates(),
        bids: session.bids(),
        price: session.price().unwrap_or(0.0),
        slots: slot,
        trace,
    })
}

/// External allocation followed by the internal split on every UE, packaged
/// like a centralized [`Allocation`] (`bisections` holds the slot count).
pub fn allocate_distributed(
    ues: &[UeProfile],
    capacity: f64,
    cfg: &ProtocolConfig,
    channel: &mut Channel,
) -> Result<(EuraOutcome, Allocation)> {
    let outcome = run_eura(ues, capacity, cfg, channel)?;
    let mut per_app_rates = BTreeMap::new();
    for ue in ues {
        for (index, r) in run_iura(ue, outcome.rates[&ue.id()])? {
            per_app_rates.insert((ue.id(), index), r);
        }
    }
    let total: f64 = outcome.rates.values().sum();
    let alloc = Allocation {
        per_app_rates,
        per_ue_rates: outcome.rates.clone(),
        shadow_price: outcome.price,
        bisections: outcome.slots as usize,
        residual: libm::fabs(total - capacity),
    };
    Ok((outcome, alloc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::centralized::allocate_centralized;
    use crate::overhead::measure_overhead;
    use crate::presets::default_ues;
    use crate::utility::UtilityFunction;
    use approx::assert_relative_eq;
    use std::vec;

    fn bid(ue: u32, w: f64) -> Bid {
        Bid { ue: UeId(ue), w, slot: 1 }
    }

    fn log_ue(id: u32, beta: f64) -> UeProfile {
        UeProfile::new(UeId(id), beta, &[(UtilityFunction::log(1.0, 100.0).unwrap(), 1.0)]).unwrap()
    }

    #[test]
    fn price_is_bid_total_over_capacity() {
        let six: Vec<_> = (0..6).map(|i| bid(i, 1.0)).collect();
        assert_relative_eq!(enb_price(&six, 180.0, 1).unwrap().p, 1.0 / 30.0, epsilon = 1e-15);
        let doubled: Vec<_> = (0..6).map(|i| bid(i, 2.0)).collect();
        assert_eq!(enb_price(&doubled, 180.0, 1).unwrap().p, 2.0 * enb_price(&six, 180.0, 1).unwrap().p);
        assert_eq!(enb_price(&[bid(0, 2.0), bid(1, 4.0)], 3.0, 1).unwrap().p, 2.0);
        assert_eq!(enb_price(&[], 3.0, 1), Err(Error::Empty("bid set")));
    }

    #[test]
    fn bid_for_log_ue_at_unit_price() {
        let cfg = ProtocolConfig::default();
        let price = ShadowPrice { p: 1.0, slot: 2, addressing: PriceAddressing::Broadcast };
        let (r, b) = ue_bid(&log_ue(1, 1.0), &price, INITIAL_BID, &cfg).unwrap();
        assert!((r - 0.7632228343518966).abs() < 1e-9);
        assert!((b.w - 0.7632228343518966).abs() < 1e-9);
        assert_eq!(b.slot, 2);

        let (r2, _) = ue_bid(&log_ue(1, 2.0), &price, INITIAL_BID, &cfg).unwrap();
        assert!(r2 > r);

        // The per-UE message carries p / beta; the result must match.
        let (r3, b3) = ue_bid(&log_ue(1, 2.0), &price.to_ue(UeId(1), 2.0), INITIAL_BID, &cfg).unwrap();
        assert_eq!((r2, b3.w), (r3, 1.0 * r3));
    }

    #[test]
    fn damping() {
        let price = ShadowPrice { p: 1.0, slot: 1, addressing: PriceAddressing::Broadcast };
        let ue = log_ue(1, 1.0);
        let undamped = ue_bid(&ue, &price, 5.0, &ProtocolConfig::default()).unwrap().1.w;
        let explicit = ue_bid(&ue, &price, 5.0, &ProtocolConfig { damping: 1.0, ..Default::default() }).unwrap().1.w;
        assert_eq!(undamped, explicit);
        let half = ue_bid(&ue, &price, 5.0, &ProtocolConfig { damping: 0.5, ..Default::default() }).unwrap().1.w;
        assert_relative_eq!(half, 0.5 * undamped + 2.5, epsilon = 1e-15);
        assert!(ProtocolConfig { damping: 0.0, ..Default::default() }.validate().is_err());
        assert!(ProtocolConfig { delta: 0.0, ..Default::default() }.validate().is_err());
    }

    #[test]
    fn single_ue_absorbs_capacity() {
        for delta in [1e-1, 1e-3, 1e-6] {
            let cfg = ProtocolConfig { delta, ..Default::default() };
            let mut ch = Channel::new();
            let out = run_eura(&[log_ue(1, 1.0)], 180.0, &cfg, &mut ch).unwrap();
            assert_eq!(out.status, ConvergenceStatus::Converged);
            assert_relative_eq!(out.rates[&UeId(1)], 180.0, max_relative = 1e-14);
        }
    }

    #[test]
    fn symmetric_pair_splits_evenly() {
        let mut ch = Channel::new();
        let out = run_eura(&[log_ue(1, 1.0), log_ue(2, 1.0)], 180.0, &ProtocolConfig::default(), &mut ch).unwrap();
        assert!((out.rates[&UeId(1)] - out.rates[&UeId(2)]).abs() <= 1e-6);
    }

    #[test]
    fn matches_centralized_on_default_set() {
        let ues = default_ues();
        let central = allocate_centralized(&ues, 180.0).unwrap();
        let mut ch = Channel::new();
        let (out, dist) = allocate_distributed(&ues, 180.0, &ProtocolConfig::default(), &mut ch).unwrap();
        assert_eq!(out.status, ConvergenceStatus::Converged);
        for (id, r) in &central.per_ue_rates {
            assert!((out.rates[id] - r).abs() <= 1e-2 * 180.0, "{id}: {} vs {r}", out.rates[id]);
        }
        for (key, r) in &central.per_app_rates {
            assert!((dist.per_app_rates[key] - r).abs() <= 1e-2 * 180.0);
        }
        assert!((out.rates.values().sum::<f64>() - 180.0).abs() < 1e-9);
    }

    #[test]
    fn fresh_run_message_accounting() {
        let ues = default_ues();
        for (loc, per_slot) in [(BetaLocation::AtUe, 7), (BetaLocation::AtEnb, 12)] {
            let cfg = ProtocolConfig { beta_location: loc, ..Default::default() };
            let mut ch = Channel::new();
            let out = run_eura(&ues, 180.0, &cfg, &mut ch).unwrap();
            assert_eq!(measure_overhead(ch.records(), ..), out.slots * per_slot);
        }
    }

    #[test]
    fn price_identity_every_slot() {
        let mut ch = Channel::new();
        let out = run_eura(&default_ues(), 180.0, &ProtocolConfig::default(), &mut ch).unwrap();
        for snap in &out.trace {
            let total: f64 = snap.bids.values().sum();
            assert_eq!(snap.price, total / 180.0);
        }
    }

    #[test]
    fn fixed_point_residual_tightens_with_delta() {
        let ues = default_ues();
        let mut last = f64::INFINITY;
        let mut last_slots = 0;
        for delta in [1e-2, 1e-3, 1e-4] {
            let cfg = ProtocolConfig { delta, ..Default::default() };
            let out = run_eura(&ues, 180.0, &cfg, &mut Channel::new()).unwrap();
            let demand: f64 = ues.iter().map(|u| u.demand(out.price / u.beta()).unwrap()).sum();
            let residual = (demand - 180.0).abs();
            assert!(residual <= 1e-2 * 180.0);
            assert!(residual < last, "delta={delta}: {residual} !< {last}");
            assert!(out.slots >= last_slots);
            last = residual;
            last_slots = out.slots;
        }
    }

    #[test]
    fn non_convergence_is_reported() {
        let cfg = ProtocolConfig { delta: 1e-12, max_slots: 3, ..Default::default() };
        let mut ch = Channel::new();
        let out = run_eura(&default_ues(), 180.0, &cfg, &mut ch).unwrap();
        assert_eq!(out.status, ConvergenceStatus::NotConverged);
        assert_eq!(out.slots, 3);
        assert_eq!(out.trace.len(), 3);
    }

    #[test]
    fn identical_runs_produce_identical_traces() {
        let a = {
            let mut ch = Channel::new();
            (run_eura(&default_ues(), 180.0, &ProtocolConfig::default(), &mut ch).unwrap(), ch)
        };
        let b = {
            let mut ch = Channel::new();
            (run_eura(&default_ues(), 180.0, &ProtocolConfig::default(), &mut ch).unwrap(), ch)
        };
        assert_eq!(a, b);
    }

    #[test]
    fn internal_split() {
        let ue = log_ue(1, 1.0);
        assert_eq!(run_iura(&ue, 42.0).unwrap(), vec![(0, 42.0)]);
        assert!(run_iura(&ue, 0.0).is_err());

        let u = UtilityFunction::sigmoid(3.0, 20.0).unwrap();
        let twins = UeProfile::new(UeId(1), 1.0, &[(u, 1.0), (u, 1.0)]).unwrap();
        let split = run_iura(&twins, 50.0).unwrap();
        assert!((split[0].1 - split[1].1).abs() <= 1e-6);
        assert!((split[0].1 + split[1].1 - 50.0).abs() <= 1e-8 * 50.0);
    }

    #[test]
    fn internal_split_matches_grid() {
        let (u1, u2) = (UtilityFunction::sigmoid(1.0, 30.0).unwrap(), UtilityFunction::log(15.0, 100.0).unwrap());
        let ue = UeProfile::new(UeId(1), 1.0, &[(u1, 0.9), (u2, 0.1)]).unwrap();
        for budget in [10.0, 33.0, 60.0] {
            let split = run_iura(&ue, budget).unwrap();
            let n = 100_000;
            let best = (1..n)
                .map(|i| budget * i as f64 / n as f64)
                .map(|x| (x, 0.9 * u1.eval(x).unwrap().ln() + 0.1 * u2.eval(budget - x).unwrap().ln()))
                .fold((0.0, f64::NEG_INFINITY), |b, c| if c.1 > b.1 { c } else { b })
                .0;
            assert!((split[0].1 - best).abs() <= 1e-3 * budget, "{budget}: {} vs {best}", split[0].1);
            assert!(split.iter().all(|(_, r)| *r > 0.0));
        }
    }
}
