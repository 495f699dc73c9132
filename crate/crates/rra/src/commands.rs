use std::fs;
use std::path::PathBuf;

use rayon::prelude::*;
use rra_core::centralized::{allocate_centralized, kkt_certificate};
use rra_core::distributed::{BetaLocation, ProtocolConfig};
use rra_core::overhead::OverheadCase;
use rra_core::presets;
use rra_core::scenario::{check_overhead, run_scenario, Architecture, Policy, ScenarioScript};

use crate::config::{Config, OverheadScenarioName, OverheadSpec};
use crate::output::{self, Artifact, OverheadRow, RunManifest};
use crate::{Cli, CliError, Command, CommonArgs};

/// Result of a command that ran to completion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub written: Vec<PathBuf>,
    /// False when a certificate or overhead bound failed; outputs are still written.
    pub passed: bool,
    pub message: String,
}

struct Loaded {
    config: Config,
    source: String,
    sha256: String,
}

fn load(args: &CommonArgs) -> Result<Loaded, CliError> {
    let (mut config, source, text) = match (&args.config, &args.preset) {
        (Some(path), _) => {
            let text = fs::read_to_string(path)
                .map_err(|source| CliError::Io { context: format!("reading {}", path.display()), source })?;
            (Config::parse(&text)?, path.display().to_string(), text)
        }
        (None, Some(name)) => {
            let config = crate::presets::preset(name)?;
            let text = config.to_toml();
            (config, format!("preset:{name}"), text)
        }
        (None, None) => return Err(CliError::Usage("one of --config or --preset is required".into())),
    };
    if let Some(d) = args.delta {
        config.run.delta = d;
    }
    if let Some(p) = args.policy {
        config.run.policy = p;
    }
    if let Some(a) = args.arch {
        config.run.architecture = a;
    }
    if let Some(b) = args.beta_location {
        config.run.beta_location = b;
    }
    Ok(Loaded { config, source, sha256: output::sha256_hex(&text) })
}

fn manifest(command: &'static str, loaded: &Loaded, parameters: serde_json::Value, artifacts: &[Artifact]) -> Artifact {
    RunManifest {
        command,
        config: loaded.source.clone(),
        config_sha256: loaded.sha256.clone(),
        parameters,
        outputs: artifacts.iter().map(|a| a.name).collect(),
        version: format!("rra {}", env!("CARGO_PKG_VERSION")),
    }
    .artifact()
}

fn run_parameters(c: &Config) -> serde_json::Value {
    serde_json::json!({
        "capacity": c.network.capacity,
        "delta": c.run.delta,
        "policy": c.run.policy,
        "architecture": c.run.architecture,
        "beta_location": c.run.beta_location,
        "damping": c.run.damping,
        "max_slots": c.run.max_slots,
        "horizon": c.run.horizon,
    })
}

pub fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Allocate(args) => allocate(&args),
        Command::Simulate(args) => simulate(&args),
        Command::Overhead(args) => overhead(&args),
    }
}

fn finish(
    args: &CommonArgs,
    mut artifacts: Vec<Artifact>,
    manifest: Artifact,
    passed: bool,
    message: String,
) -> Result<Outcome, CliError> {
    artifacts.push(manifest);
    let written = output::write_all(&args.out, &artifacts)?;
    Ok(Outcome { written, passed, message })
}

pub fn allocate(args: &CommonArgs) -> Result<Outcome, CliError> {
    let loaded = load(args)?;
    let ues = loaded.config.profiles()?;
    let capacity = loaded.config.network.capacity;
    let alloc = allocate_centralized(&ues, capacity)?;
    let kkt = kkt_certificate(&ues, capacity, &alloc);
    let artifacts = vec![output::allocation_csv(&alloc), output::certificate_json(&alloc, capacity, &kkt)];
    let params = serde_json::json!({ "capacity": capacity, "ues": ues.len() });
    let m = manifest("allocate", &loaded, params, &artifacts);
    let message = format!(
        "total rate {} of {capacity}, shadow price {}, KKT {}",
        alloc.total(),
        alloc.shadow_price,
        if kkt.passes() { "pass" } else { "FAIL" }
    );
    finish(args, artifacts, m, kkt.passes(), message)
}

pub fn simulate(args: &CommonArgs) -> Result<Outcome, CliError> {
    let loaded = load(args)?;
    let script = loaded.config.script()?;
    let result = run_scenario(&script)?;
    let artifacts =
        vec![output::timeseries_csv(&result), output::trace_txt(&result.trace), output::summary_json(&result)];
    let m = manifest("simulate", &loaded, run_parameters(&loaded.config), &artifacts);
    let settled = result.windows.iter().filter(|w| w.converged()).count();
    let message = format!("{} slots, {settled}/{} windows converged", script.horizon, result.windows.len());
    finish(args, artifacts, m, true, message)
}

struct GridPoint {
    scenario: OverheadScenarioName,
    delta: f64,
    architecture: Architecture,
    policy: Policy,
    beta_location: BetaLocation,
}

fn overhead_script(p: &GridPoint) -> (ScenarioScript, OverheadCase) {
    let cfg = ProtocolConfig { delta: p.delta, beta_location: p.beta_location, ..ProtocolConfig::default() };
    let (arch, policy) = (p.architecture, p.policy);
    match p.scenario {
        OverheadScenarioName::Fresh => {
            (presets::fresh_start(arch, policy, cfg), OverheadCase::FreshStart { ues: presets::UE_COUNT as u32 })
        }
        OverheadScenarioName::Churn5To6 => {
            (presets::churn_5_to_6(arch, policy, cfg), OverheadCase::Churn { before: 5, after: 6 })
        }
        OverheadScenarioName::Churn6To4 => {
            (presets::churn_6_to_4(arch, policy, cfg), OverheadCase::Churn { before: 6, after: 4 })
        }
        OverheadScenarioName::UsageChangeTwo => {
            (presets::usage_change_two(arch, policy, cfg), OverheadCase::UsageChange { ues: 6, changed: 2 })
        }
    }
}

fn names(p: &GridPoint) -> (&'static str, &'static str, &'static str) {
    (
        match p.architecture {
            Architecture::Centralized => "centralized",
            Architecture::Distributed => "distributed",
        },
        match p.policy {
            Policy::Rebid => "rebid",
            Policy::NoRebid => "no-rebid",
        },
        match p.beta_location {
            BetaLocation::AtUe => "ue",
            BetaLocation::AtEnb => "enb",
        },
    )
}

/// Measured against predicted counts over the full grid, filtered by any
/// `--arch`, `--policy` or `--beta-location` flags.
pub fn overhead_rows(
    spec: &OverheadSpec,
    arch: Option<Architecture>,
    policy: Option<Policy>,
    beta: Option<BetaLocation>,
) -> Result<Vec<OverheadRow>, CliError> {
    let mut grid = Vec::new();
    for &scenario in &spec.scenarios {
        for &delta in &spec.deltas {
            for architecture in [Architecture::Centralized, Architecture::Distributed] {
                for policy_ in [Policy::Rebid, Policy::NoRebid] {
                    for beta_location in [BetaLocation::AtUe, BetaLocation::AtEnb] {
                        if arch.is_some_and(|a| a != architecture)
                            || policy.is_some_and(|p| p != policy_)
                            || beta.is_some_and(|b| b != beta_location)
                        {
                            continue;
                        }
                        grid.push(GridPoint { scenario, delta, architecture, policy: policy_, beta_location });
                    }
                }
            }
        }
    }
    grid.par_iter()
        .map(|p| {
            let (script, case) = overhead_script(p);
            let check = check_overhead(&script, case)?;
            let (architecture, policy, beta_location) = names(p);
            Ok(OverheadRow {
                scenario: p.scenario.as_str(),
                delta: p.delta,
                architecture,
                policy,
                beta_location,
                predicted_min: check.predicted,
                measured: check.measured,
                slots: check.slots,
                converged: check.converged,
            })
        })
        .collect()
}

pub fn overhead(args: &CommonArgs) -> Result<Outcome, CliError> {
    let loaded = load(args)?;
    let mut spec = loaded.config.overhead.clone().unwrap_or_default();
    if let Some(d) = args.delta {
        spec.deltas = vec![d];
    }
    if spec.deltas.is_empty() || spec.scenarios.is_empty() {
        return Err(CliError::Config("[overhead] needs at least one delta and one scenario".into()));
    }
    if let Some(bad) = spec.deltas.iter().find(|d| !(**d > 0.0 && d.is_finite())) {
        return Err(CliError::Config(format!("delta must be positive and finite, got {bad}")));
    }
    let rows = overhead_rows(
        &spec,
        args.arch.map(Into::into),
        args.policy.map(Into::into),
        args.beta_location.map(Into::into),
    )?;
    let violations = rows.iter().filter(|r| r.measured < r.predicted_min).count();
    let artifacts = vec![output::overhead_csv(&rows)];
    let params = serde_json::json!({
        "deltas": spec.deltas,
        "scenarios": spec.scenarios,
        "architecture": args.arch,
        "policy": args.policy,
        "beta_location": args.beta_location,
    });
    let m = manifest("overhead", &loaded, params, &artifacts);
    let message = format!("{} rows, {violations} below the predicted minimum", rows.len());
    finish(args, artifacts, m, violations == 0, message)
}
