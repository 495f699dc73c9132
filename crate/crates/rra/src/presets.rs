//! Named configurations reachable through `--preset`.

use rra_core::distributed::ProtocolConfig;
use rra_core::presets;
use rra_core::scenario::{Architecture, Policy};

use crate::config::{Config, OverheadSpec};
use crate::CliError;

pub const NAMES: [&str; 6] =
    ["fresh-start", "usage-sweep", "churn-5-to-6", "churn-6-to-4", "usage-change-two", "overhead-grid"];

pub fn preset(name: &str) -> Result<Config, CliError> {
    let (arch, policy, cfg) = (Architecture::Distributed, Policy::Rebid, ProtocolConfig::default());
    let script = match name {
        "fresh-start" | "overhead-grid" => presets::fresh_start(arch, policy, cfg),
        "usage-sweep" => presets::usage_sweep(arch, policy, cfg),
        "churn-5-to-6" => presets::churn_5_to_6(arch, policy, cfg),
        "churn-6-to-4" => presets::churn_6_to_4(arch, policy, cfg),
        "usage-change-two" => presets::usage_change_two(arch, policy, cfg),
        other => {
            return Err(CliError::Usage(format!("unknown preset `{other}`; expected one of {}", NAMES.join(", "))))
        }
    };
    let mut config = Config::from_script(&script);
    if name == "overhead-grid" {
        config.overhead = Some(OverheadSpec::default());
    }
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_survive_a_toml_round_trip() {
        for name in NAMES {
            let c = preset(name).unwrap();
            let back = Config::parse(&c.to_toml()).unwrap();
            assert_eq!(back, c, "{name}");
            back.script().unwrap();
        }
    }

    #[test]
    fn preset_scripts_match_core() {
        let c = preset("churn-5-to-6").unwrap();
        let core = presets::churn_5_to_6(Architecture::Distributed, Policy::Rebid, ProtocolConfig::default());
        assert_eq!(c.script().unwrap(), core);
    }

    #[test]
    fn unknown_preset_is_rejected() {
        assert!(matches!(preset("nope"), Err(CliError::Usage(_))));
    }
}
