//! One-shot eNB-side solver.
//!
//! The KKT conditions of the weighted log-utility problem read
//! `beta_i * alpha_ij * d ln U_ij / dr = p` for every application, with the
//! capacity constraint binding. Each rate is therefore the application demand
//! at the effective price `p / beta_i`, and `p` is the root of the strictly
//! decreasing aggregate demand curve `sum_ij demand_ij(p / beta_i) = R`.

use alloc::collections::BTreeMap;
use alloc::collections::BTreeSet;

use alloc::vec::Vec;

use crate::math::{bisect_decreasing_log, blend_to_total};
use crate::utility::{UeId, UeProfile};
use crate::{Error, Result};

/// Aggregate-demand residual, relative to `R`, at which the price search stops.
pub const PRICE_TOLERANCE: f64 = 1e-8;
/// Cap on price bisections.
pub const MAX_BISECTIONS: usize = 200;
/// Stationarity tolerance of [`kkt_certificate`], relative to the shadow price.
pub const STATIONARITY_TOLERANCE: f64 = 1e-5;
/// Feasibility tolerance of [`kkt_certificate`], relative to `R`.
pub const FEASIBILITY_TOLERANCE: f64 = 1e-6;

const MAX_BRACKET_STEPS: usize = 2048;

/// Rates assigned to every application and UE together with the shadow price.
#[derive(Debug, Clone, PartialEq)]
pub struct Allocation {
    /// Keyed by `(ue, catalogue index)`; applications with zero usage are absent.
    pub per_app_rates: BTreeMap<(UeId, usize), f64>,
    pub per_ue_rates: BTreeMap<UeId, f64>,
    pub shadow_price: f64,
    pub bisections: usize,
    /// `|sum r - R|`.
    pub residual: f64,
}

impl Allocation {
    pub fn total(&self) -> f64 {
        self.per_ue_rates.values().sum()
    }

    pub fn ue_rate(&self, id: UeId) -> Option<f64> {
        self.per_ue_rates.get(&id).copied()
    }
}

pub(crate) fn check_population(ues: &[UeProfile], capacity: f64) -> Result<()> {
    if ues.is_empty() {
        return Err(Error::Empty("UE list"));
    }
    if !(capacity > 0.0) || capacity.is_infinite() {
        return Err(Error::Domain { what: "capacity", value: capacity });
    }
    let mut seen = BTreeSet::new();
    for ue in ues {
        if !seen.insert(ue.id()) {
            return Err(Error::DuplicateUe(ue.id()));
        }
    }
    Ok(())
}

/// Solves the centralized problem for `ues` sharing `capacity`.
///
/// The search runs on a price normalized by the largest `beta`, so scaling
/// every `beta` by a power of two reproduces the rates bit for bit.
pub fn allocate_centralized(ues: &[UeProfile], capacity: f64) -> Result<Allocation> {
    check_population(ues, capacity)?;
    let beta_ref = ues.iter().map(UeProfile::beta).fold(0.0, f64::max);
    let weights: alloc::vec::Vec<f64> = ues.iter().map(|u| u.beta() / beta_ref).collect();

    let excess = |price: f64| -> Result<f64> {
        let mut total = 0.0;
        for (ue, w) in ues.iter().zip(&weights) {
            total += ue.demand(price / w)?;
        }
        Ok(total - capacity)
    };

    // Expand geometrically from 1 until the aggregate demand straddles R.
    let (mut lo, mut hi) = (1.0, 1.0);
    let at_one = excess(1.0)?;
    let mut steps = 0;
    if at_one > 0.0 {
        while excess(hi)? > 0.0 {
            lo = hi;
            hi *= 2.0;
            steps += 1;
            if steps > MAX_BRACKET_STEPS {
                return Err(Error::NoConvergence { what: "price bracket", iterations: steps });
            }
        }
    } else {
        while excess(lo)? < 0.0 {
            hi = lo;
            lo *= 0.5;
            steps += 1;
            if steps > MAX_BRACKET_STEPS {
                return Err(Error::NoConvergence { what: "price bracket", iterations: steps });
            }
        }
    }

    let tol = PRICE_TOLERANCE * capacity;
    let demands_at = |price: f64| -> Result<Vec<f64>> {
        let mut out = Vec::new();
        for (ue, w) in ues.iter().zip(&weights) {
            out.extend(ue.app_demands(price / w)?);
        }
        Ok(out)
    };
    let (price, bisections, rates) = if at_one.abs() <= tol {
        (1.0, 0, demands_at(1.0)?)
    } else {
        let found = bisect_decreasing_log(excess, lo, hi, |v| v.abs() <= tol, MAX_BISECTIONS)?;
        let rates = if found.fx.abs() <= tol {
            demands_at(found.x)?
        } else {
            blend_to_total(&demands_at(found.lo)?, &demands_at(found.hi)?, capacity)
        };
        (found.x, found.evaluations, rates)
    };

    let mut per_app_rates = BTreeMap::new();
    let mut per_ue_rates = BTreeMap::new();
    let mut next = rates.into_iter();
    for ue in ues {
        let mut total = 0.0;
        for app in ue.apps() {
            let r = next.next().unwrap_or(0.0);
            per_app_rates.insert((ue.id(), app.index), r);
            total += r;
        }
        per_ue_rates.insert(ue.id(), total);
    }
    let residual = libm::fabs(per_ue_rates.values().sum::<f64>() - capacity);
    Ok(Allocation { per_app_rates, per_ue_rates, shadow_price: price * beta_ref, bisections, residual })
}

/// First-order optimality residuals of an allocation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KktReport {
    /// `max_ij |beta_i * alpha_ij * d ln U_ij(r_ij) / dr - p|`.
    pub stationarity: f64,
    /// `|sum r - R|`.
    pub feasibility: f64,
    pub stationarity_tolerance: f64,
    pub feasibility_tolerance: f64,
}

impl KktReport {
    pub fn passes(&self) -> bool {
        self.stationarity <= self.stationarity_tolerance && self.feasibility <= self.feasibility_tolerance
    }
}

/// Checks stationarity and feasibility of `alloc` for `(ues, capacity)`.
///
/// Missing or non-positive rates count as infinite stationarity error.
pub fn kkt_certificate(ues: &[UeProfile], capacity: f64, alloc: &Allocation) -> KktReport {
    let price = alloc.shadow_price;
    let mut stationarity: f64 = 0.0;
    let mut total = 0.0;
    for ue in ues {
        for app in ue.apps() {
            let gap = alloc
                .per_app_rates
                .get(&(ue.id(), app.index))
                .and_then(|&r| {
                    total += r;
                    app.log_marginal(r).ok()
                })
                .map_or(f64::INFINITY, |m| libm::fabs(ue.beta() * m - price));
            stationarity = stationarity.max(gap);
        }
    }
    KktReport {
        stationarity,
        feasibility: libm::fabs(total - capacity),
        stationarity_tolerance: STATIONARITY_TOLERANCE * price,
        feasibility_tolerance: FEASIBILITY_TOLERANCE * capacity,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::default_ues;
    use crate::utility::UtilityFunction;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::vec::Vec;

    fn single(id: u32, u: UtilityFunction, beta: f64) -> UeProfile {
        UeProfile::new(UeId(id), beta, &[(u, 1.0)]).unwrap()
    }

    #[test]
    fn rejects_degenerate_input() {
        assert_eq!(allocate_centralized(&[], 10.0), Err(Error::Empty("UE list")));
        let ue = single(0, UtilityFunction::log(1.0, 10.0).unwrap(), 1.0);
        assert!(allocate_centralized(core::slice::from_ref(&ue), 0.0).is_err());
        assert!(allocate_centralized(core::slice::from_ref(&ue), -3.0).is_err());
        assert_eq!(allocate_centralized(&[ue.clone(), ue], 3.0), Err(Error::DuplicateUe(UeId(0))));
    }

    #[test]
    fn single_ue_takes_everything() {
        let u = UtilityFunction::log(1.0, 100.0).unwrap();
        let ue = single(7, u, 1.0);
        let alloc = allocate_centralized(&[ue], 180.0).unwrap();
        assert_relative_eq!(alloc.per_ue_rates[&UeId(7)], 180.0, max_relative = 1e-8);
        assert_relative_eq!(alloc.per_app_rates[&(UeId(7), 0)], 180.0, max_relative = 1e-8);
        assert_relative_eq!(alloc.shadow_price, u.log_marginal(1.0, 180.0).unwrap(), max_relative = 1e-7);
    }

    #[test]
    fn identical_ues_split_evenly() {
        let ues = default_ues();
        let a = allocate_centralized(&[relabel(&ues[1], 1), relabel(&ues[1], 2)], 180.0).unwrap();
        assert!((a.per_ue_rates[&UeId(1)] - a.per_ue_rates[&UeId(2)]).abs() <= 1e-6);
    }

    fn relabel(ue: &UeProfile, id: u32) -> UeProfile {
        let apps: Vec<_> = ue.catalogue().iter().copied().zip(ue.usage()).collect();
        UeProfile::new(UeId(id), ue.beta(), &apps).unwrap()
    }

    // Brute-force search over 1e5 splits of R between two single-app UEs.
    fn grid_split(u1: &UeProfile, u2: &UeProfile, capacity: f64) -> f64 {
        let obj = |ue: &UeProfile, r: f64| {
            let app = ue.apps()[0];
            ue.beta() * app.alpha * app.utility.eval(r).unwrap().ln()
        };
        let n = 100_000;
        (1..n)
            .map(|i| capacity * i as f64 / n as f64)
            .map(|x| (x, obj(u1, x) + obj(u2, capacity - x)))
            .fold((0.0, f64::NEG_INFINITY), |best, c| if c.1 > best.1 { c } else { best })
            .0
    }

    #[test]
    fn two_ue_grid_oracle() {
        let u1 = single(1, UtilityFunction::sigmoid(1.0, 30.0).unwrap(), 1.0);
        let u2 = single(2, UtilityFunction::log(3.0, 100.0).unwrap(), 1.0);
        let alloc = allocate_centralized(&[u1.clone(), u2.clone()], 180.0).unwrap();
        let x = grid_split(&u1, &u2, 180.0);
        assert!((alloc.per_ue_rates[&UeId(1)] - x).abs() <= 1e-2, "{} vs {x}", alloc.per_ue_rates[&UeId(1)]);
        assert!((alloc.per_ue_rates[&UeId(2)] - (180.0 - x)).abs() <= 1e-2);
        assert!(kkt_certificate(&[u1, u2], 180.0, &alloc).passes());
    }

    #[test]
    fn certificate_detects_perturbation() {
        let ues = default_ues();
        let alloc = allocate_centralized(&ues, 180.0).unwrap();
        let report = kkt_certificate(&ues, 180.0, &alloc);
        assert!(report.passes(), "{report:?}");

        let mut bent = alloc.clone();
        let key = (UeId(2), 0);
        *bent.per_app_rates.get_mut(&key).unwrap() *= 1.01;
        let report = kkt_certificate(&ues, 180.0, &bent);
        assert!(report.stationarity > report.stationarity_tolerance);

        let mut missing = alloc;
        missing.per_app_rates.remove(&key);
        assert!(kkt_certificate(&ues, 180.0, &missing).stationarity.is_infinite());
    }

    #[test]
    fn doubling_beta_is_bit_identical() {
        let ues = default_ues();
        let doubled: Vec<_> = ues.iter().map(|u| u.with_beta(2.0 * u.beta()).unwrap()).collect();
        let a = allocate_centralized(&ues, 180.0).unwrap();
        let b = allocate_centralized(&doubled, 180.0).unwrap();
        assert_eq!(a.per_app_rates, b.per_app_rates);
        assert_eq!(b.shadow_price, 2.0 * a.shadow_price);
    }

    proptest! {
        #[test]
        fn constraint_binds_and_kkt_holds(
            betas in proptest::collection::vec(0.2f64..5.0, 6),
            capacity in 20.0f64..800.0,
        ) {
            let ues: Vec<_> = default_ues().iter().zip(&betas).map(|(u, b)| u.with_beta(*b).unwrap()).collect();
            let alloc = allocate_centralized(&ues, capacity).unwrap();
            prop_assert!((alloc.total() - capacity).abs() <= 1e-6 * capacity);
            prop_assert!(alloc.per_app_rates.values().all(|&r| r > 0.0));
            for ue in &ues {
                let sum: f64 = alloc.per_app_rates.range((ue.id(), 0)..=(ue.id(), usize::MAX)).map(|(_, r)| r).sum();
                prop_assert!((sum - alloc.per_ue_rates[&ue.id()]).abs() <= 1e-9);
            }
            let report = kkt_certificate(&ues, capacity, &alloc);
            prop_assert!(report.passes(), "{:?}", report);
        }

        #[test]
        fn uniform_beta_scaling(scale in 0.1f64..10.0) {
            let ues = default_ues();
            let scaled: Vec<_> = ues.iter().map(|u| u.with_beta(u.beta() * scale).unwrap()).collect();
            let a = allocate_centralized(&ues, 180.0).unwrap();
            let b = allocate_centralized(&scaled, 180.0).unwrap();
            for (k, r) in &a.per_app_rates {
                prop_assert!((r - b.per_app_rates[k]).abs() <= 1e-6 * 180.0);
            }
            prop_assert!((b.shadow_price / a.shadow_price - scale).abs() <= 1e-6 * scale);
        }

        #[test]
        fn raising_beta_never_lowers_rate(m in 0usize..6, factor in 1.0f64..4.0) {
            let ues = default_ues();
            let mut bumped = ues.clone();
            bumped[m] = ues[m].with_beta(ues[m].beta() * factor).unwrap();
            let a = allocate_centralized(&ues, 180.0).unwrap();
            let b = allocate_centralized(&bumped, 180.0).unwrap();
            let id = ues[m].id();
            prop_assert!(b.per_ue_rates[&id] >= a.per_ue_rates[&id] - 1e-6);
        }
    }
}
