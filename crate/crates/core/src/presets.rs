//! Default six-UE cell and the usage schedules used by the bundled experiments.
//!
//! Every UE runs one real-time (sigmoid) and one delay-tolerant (log)
//! application, catalogue order `[sigmoid, log]`. The utility parameters are
//! stand-ins: three sigmoid steepness/inflection pairs and three log
//! sensitivities, each used by two UEs. Usage tables are 12-vectors whose
//! first six entries are the delay-tolerant shares of UEs 1..6 and whose last
//! six are the real-time shares.

use alloc::vec;
use alloc::vec::Vec;

use crate::distributed::ProtocolConfig;
use crate::scenario::{Action, Architecture, Event, Policy, ScenarioScript};
use crate::utility::{UeId, UeProfile, UtilityFunction};

pub const CAPACITY: f64 = 180.0;
pub const DELTA: f64 = 1e-3;
pub const UE_COUNT: usize = 6;
/// Slots per usage interval.
pub const WINDOW: u64 = 100;

/// `(a, b)` for UEs 1..3, repeated for UEs 4..6.
pub const SIGMOID_PARAMS: [(f64, f64); 3] = [(5.0, 10.0), (3.0, 20.0), (1.0, 30.0)];
/// `(k_log, r_max)` for UEs 1..3, repeated for UEs 4..6.
pub const LOG_PARAMS: [(f64, f64); 3] = [(15.0, 100.0), (3.0, 100.0), (0.5, 100.0)];

pub type UsageTable = [f64; 12];

pub const USAGE_1: UsageTable = [0.1, 0.5, 0.9, 0.1, 0.5, 0.9, 0.9, 0.5, 0.1, 0.9, 0.5, 0.1];
pub const USAGE_2: UsageTable = [0.5, 0.3, 0.2, 0.5, 0.3, 0.2, 0.5, 0.7, 0.8, 0.5, 0.7, 0.8];
pub const USAGE_3: UsageTable = [0.5, 0.9, 0.8, 0.5, 0.9, 0.8, 0.5, 0.1, 0.2, 0.5, 0.1, 0.2];
pub const USAGE_4: UsageTable = USAGE_2;
pub const USAGE_5: UsageTable = USAGE_3;
/// Five-UE phase of the churn experiment: UE 6 has no usage.
pub const USAGE_A: UsageTable = [0.1, 0.5, 0.9, 0.1, 0.5, 0.0, 0.9, 0.5, 0.1, 0.9, 0.5, 0.0];
pub const USAGE_B: UsageTable = USAGE_1;

pub const USAGE_SWEEP: [UsageTable; 5] = [USAGE_1, USAGE_2, USAGE_3, USAGE_4, USAGE_5];

/// Catalogue of UE `i` (zero-based): `[sigmoid, log]`.
pub fn catalogue(i: usize) -> [UtilityFunction; 2] {
    let (a, b) = SIGMOID_PARAMS[i % 3];
    let (k, r_max) = LOG_PARAMS[i % 3];
    [UtilityFunction::sigmoid(a, b).expect("preset sigmoid"), UtilityFunction::log(k, r_max).expect("preset log")]
}

/// Usage weights of UE `i` (zero-based) in catalogue order.
pub fn usage_weights(table: &UsageTable, i: usize) -> [f64; 2] {
    [table[UE_COUNT + i], table[i]]
}

fn profile(i: usize, weights: [f64; 2]) -> UeProfile {
    let [s, l] = catalogue(i);
    UeProfile::new(UeId(i as u32 + 1), 1.0, &[(s, weights[0]), (l, weights[1])]).expect("preset UE")
}

/// UEs with any usage under `table`, ids 1..=6, `beta = 1`.
pub fn ues_with_usage(table: &UsageTable) -> Vec<UeProfile> {
    (0..UE_COUNT)
        .map(|i| (i, usage_weights(table, i)))
        .filter(|(_, w)| w.iter().sum::<f64>() > 0.0)
        .map(|(i, w)| profile(i, w))
        .collect()
}

/// The six default UEs under the first usage table.
pub fn default_ues() -> Vec<UeProfile> {
    ues_with_usage(&USAGE_1)
}

fn usage_actions(from: &UsageTable, to: &UsageTable) -> Vec<Action> {
    (0..UE_COUNT)
        .filter(|&i| usage_weights(from, i) != usage_weights(to, i))
        .filter(|&i| usage_weights(from, i).iter().sum::<f64>() > 0.0)
        .map(|i| Action::SetUsage { ue: UeId(i as u32 + 1), weights: usage_weights(to, i).to_vec() })
        .collect()
}

fn script(
    initial_ues: Vec<UeProfile>,
    events: Vec<Event>,
    horizon: u64,
    architecture: Architecture,
    policy: Policy,
    cfg: ProtocolConfig,
) -> ScenarioScript {
    ScenarioScript { initial_ues, capacity: CAPACITY, events, horizon, policy, architecture, cfg }
}

/// Six UEs connect at slot 1; one interval.
pub fn fresh_start(architecture: Architecture, policy: Policy, cfg: ProtocolConfig) -> ScenarioScript {
    script(default_ues(), vec![], WINDOW, architecture, policy, cfg)
}

/// Five usage intervals of [`WINDOW`] slots each, cycling through
/// [`USAGE_SWEEP`].
pub fn usage_sweep(architecture: Architecture, policy: Policy, cfg: ProtocolConfig) -> ScenarioScript {
    let events = USAGE_SWEEP
        .windows(2)
        .enumerate()
        .map(|(n, pair)| Event { slot: (n as u64 + 1) * WINDOW + 1, actions: usage_actions(&pair[0], &pair[1]) })
        .collect();
    script(ues_with_usage(&USAGE_1), events, 5 * WINDOW, architecture, policy, cfg)
}

/// Five UEs for [`WINDOW`] slots, then UE 6 joins.
pub fn churn_5_to_6(architecture: Architecture, policy: Policy, cfg: ProtocolConfig) -> ScenarioScript {
    let mut actions = vec![Action::Join(profile(5, usage_weights(&USAGE_B, 5)))];
    actions.extend(usage_actions(&USAGE_A, &USAGE_B));
    let events = vec![Event { slot: WINDOW + 1, actions }];
    script(ues_with_usage(&USAGE_A), events, 2 * WINDOW, architecture, policy, cfg)
}

/// Six UEs for [`WINDOW`] slots, then UEs 5 and 6 leave.
pub fn churn_6_to_4(architecture: Architecture, policy: Policy, cfg: ProtocolConfig) -> ScenarioScript {
    let events = vec![Event { slot: WINDOW + 1, actions: vec![Action::Leave(UeId(5)), Action::Leave(UeId(6))] }];
    script(default_ues(), events, 2 * WINDOW, architecture, policy, cfg)
}

/// Six UEs for [`WINDOW`] slots, then UEs 1 and 2 switch from the first to
/// the second usage table.
pub fn usage_change_two(architecture: Architecture, policy: Policy, cfg: ProtocolConfig) -> ScenarioScript {
    let actions = (0..2)
        .map(|i| Action::SetUsage { ue: UeId(i as u32 + 1), weights: usage_weights(&USAGE_2, i).to_vec() })
        .collect();
    let events = vec![Event { slot: WINDOW + 1, actions }];
    script(default_ues(), events, 2 * WINDOW, architecture, policy, cfg)
}
