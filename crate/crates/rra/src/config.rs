//! TOML run configuration.
//!
//! ```toml
//! [network]
//! capacity = 180.0
//!
//! [[ues]]
//! id = 1
//! beta = 1.0
//! apps = [
//!     { kind = "sigmoid", a = 5.0, b = 10.0, alpha = 0.9 },
//!     { kind = "log", k = 15.0, r_max = 100.0, alpha = 0.1 },
//! ]
//!
//! [[events]]
//! slot = 101
//! leave = [5]
//! set_alphas = [{ ue = 1, alphas = [0.5, 0.5] }]
//!
//! [run]
//! horizon = 200
//! delta = 1e-3
//! policy = "rebid"
//! architecture = "distributed"
//! beta_location = "ue"
//!
//! [overhead]
//! deltas = [1e-2, 1e-3, 1e-4]
//! scenarios = ["fresh", "churn-5-to-6", "churn-6-to-4", "usage-change-two"]
//! ```
//!
//! Within one event, leaves apply first, then joins, then usage changes.

use rra_core::distributed::{BetaLocation, ProtocolConfig};
use rra_core::scenario::{Action, Architecture, Event, Policy, ScenarioScript};
use rra_core::{UeId, UeProfile, UtilityFunction};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub network: Network,
    pub ues: Vec<UeSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub events: Vec<EventSpec>,
    #[serde(default)]
    pub run: RunSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub overhead: Option<OverheadSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Network {
    pub capacity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UeSpec {
    pub id: u32,
    #[serde(default = "one")]
    pub beta: f64,
    pub apps: Vec<AppSpec>,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum AppSpec {
    Sigmoid { a: f64, b: f64, alpha: f64 },
    Log { k: f64, r_max: f64, alpha: f64 },
}

impl AppSpec {
    fn alpha(&self) -> f64 {
        match *self {
            AppSpec::Sigmoid { alpha, .. } | AppSpec::Log { alpha, .. } => alpha,
        }
    }

    fn utility(&self) -> Result<UtilityFunction, CliError> {
        Ok(match *self {
            AppSpec::Sigmoid { a, b, .. } => UtilityFunction::sigmoid(a, b)?,
            AppSpec::Log { k, r_max, .. } => UtilityFunction::log(k, r_max)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EventSpec {
    pub slot: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub leave: Vec<u32>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub join: Vec<UeSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub set_alphas: Vec<SetAlphas>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetAlphas {
    pub ue: u32,
    pub alphas: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum PolicyName {
    Rebid,
    NoRebid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ArchName {
    Centralized,
    Distributed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum BetaLocationName {
    Ue,
    Enb,
}

impl From<PolicyName> for Policy {
    fn from(p: PolicyName) -> Self {
        match p {
            PolicyName::Rebid => Policy::Rebid,
            PolicyName::NoRebid => Policy::NoRebid,
        }
    }
}

impl From<ArchName> for Architecture {
    fn from(a: ArchName) -> Self {
        match a {
            ArchName::Centralized => Architecture::Centralized,
            ArchName::Distributed => Architecture::Distributed,
        }
    }
}

impl From<BetaLocationName> for BetaLocation {
    fn from(b: BetaLocationName) -> Self {
        match b {
            BetaLocationName::Ue => BetaLocation::AtUe,
            BetaLocationName::Enb => BetaLocation::AtEnb,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunSpec {
    pub horizon: u64,
    pub delta: f64,
    pub policy: PolicyName,
    pub architecture: ArchName,
    pub beta_location: BetaLocationName,
    pub damping: f64,
    pub max_slots: u64,
}

impl Default for RunSpec {
    fn default() -> Self {
        let cfg = ProtocolConfig::default();
        RunSpec {
            horizon: 100,
            delta: cfg.delta,
            policy: PolicyName::Rebid,
            architecture: ArchName::Distributed,
            beta_location: BetaLocationName::Ue,
            damping: cfg.damping,
            max_slots: cfg.max_slots,
        }
    }
}

impl RunSpec {
    pub fn protocol(&self) -> ProtocolConfig {
        ProtocolConfig {
            delta: self.delta,
            beta_location: self.beta_location.into(),
            damping: self.damping,
            max_slots: self.max_slots,
        }
    }
}

/// Built-in overhead cases, each on the default six-UE set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OverheadScenarioName {
    Fresh,
    #[serde(rename = "churn-5-to-6")]
    Churn5To6,
    #[serde(rename = "churn-6-to-4")]
    Churn6To4,
    UsageChangeTwo,
}

impl OverheadScenarioName {
    pub const ALL: [Self; 4] = [Self::Fresh, Self::Churn5To6, Self::Churn6To4, Self::UsageChangeTwo];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Fresh => "fresh",
            Self::Churn5To6 => "churn-5-to-6",
            Self::Churn6To4 => "churn-6-to-4",
            Self::UsageChangeTwo => "usage-change-two",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OverheadSpec {
    pub deltas: Vec<f64>,
    pub scenarios: Vec<OverheadScenarioName>,
}

impl Default for OverheadSpec {
    fn default() -> Self {
        OverheadSpec { deltas: vec![1e-2, 1e-3, 1e-4], scenarios: OverheadScenarioName::ALL.to_vec() }
    }
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn profiles(&self) -> Result<Vec<UeProfile>, CliError> {
        self.ues.iter().map(UeSpec::profile).collect()
    }

    pub fn script(&self) -> Result<ScenarioScript, CliError> {
        let mut events = Vec::with_capacity(self.events.len());
        for e in &self.events {
            let mut actions = Vec::new();
            actions.extend(e.leave.iter().map(|&id| Action::Leave(UeId(id))));
            for j in &e.join {
                actions.push(Action::Join(j.profile()?));
            }
            actions.extend(e.set_alphas.iter().map(|s| Action::SetUsage { ue: UeId(s.ue), weights: s.alphas.clone() }));
            events.push(Event { slot: e.slot, actions });
        }
        let script = ScenarioScript {
            initial_ues: self.profiles()?,
            capacity: self.network.capacity,
            events,
            horizon: self.run.horizon,
            policy: self.run.policy.into(),
            architecture: self.run.architecture.into(),
            cfg: self.run.protocol(),
        };
        script.validate()?;
        Ok(script)
    }
}

impl UeSpec {
    pub fn profile(&self) -> Result<UeProfile, CliError> {
        let apps = self.apps.iter().map(|a| Ok((a.utility()?, a.alpha()))).collect::<Result<Vec<_>, CliError>>()?;
        Ok(UeProfile::new(UeId(self.id), self.beta, &apps)?)
    }

    pub fn from_profile(ue: &UeProfile) -> Self {
        let apps = ue
            .catalogue()
            .iter()
            .zip(ue.usage())
            .map(|(u, alpha)| match *u {
                UtilityFunction::Sigmoid(s) => AppSpec::Sigmoid { a: s.a(), b: s.b(), alpha },
                UtilityFunction::Log(l) => AppSpec::Log { k: l.k_log(), r_max: l.r_max(), alpha },
            })
            .collect();
        UeSpec { id: ue.id().0, beta: ue.beta(), apps }
    }
}

impl Config {
    /// Inverse of [`Config::script`] for scripts built in code.
    pub fn from_script(script: &ScenarioScript) -> Self {
        let events = script
            .events
            .iter()
            .map(|e| {
                let mut spec = EventSpec { slot: e.slot, leave: vec![], join: vec![], set_alphas: vec![] };
                for a in &e.actions {
                    match a {
                        Action::Leave(id) => spec.leave.push(id.0),
                        Action::Join(p) => spec.join.push(UeSpec::from_profile(p)),
                        Action::SetUsage { ue, weights } => {
                            spec.set_alphas.push(SetAlphas { ue: ue.0, alphas: weights.clone() })
                        }
                    }
                }
                spec
            })
            .collect();
        Config {
            network: Network { capacity: script.capacity },
            ues: script.initial_ues.iter().map(UeSpec::from_profile).collect(),
            events,
            run: RunSpec {
                horizon: script.horizon,
                delta: script.cfg.delta,
                policy: match script.policy {
                    Policy::Rebid => PolicyName::Rebid,
                    Policy::NoRebid => PolicyName::NoRebid,
                },
                architecture: match script.architecture {
                    Architecture::Centralized => ArchName::Centralized,
                    Architecture::Distributed => ArchName::Distributed,
                },
                beta_location: match script.cfg.beta_location {
                    BetaLocation::AtUe => BetaLocationName::Ue,
                    BetaLocation::AtEnb => BetaLocationName::Enb,
                },
                damping: script.cfg.damping,
                max_slots: script.cfg.max_slots,
            },
            overhead: None,
        }
    }
}
