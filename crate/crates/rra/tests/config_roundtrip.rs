use proptest::prelude::*;
use rra::config::{AppSpec, Config, Network, RunSpec, UeSpec};

fn app() -> impl Strategy<Value = AppSpec> {
    prop_oneof![
        (0.1f64..10.0, 0.5f64..50.0, 0.0f64..1.0).prop_map(|(a, b, alpha)| AppSpec::Sigmoid { a, b, alpha }),
        (0.1f64..20.0, 1.0f64..500.0, 0.0f64..1.0).prop_map(|(k, r_max, alpha)| AppSpec::Log { k, r_max, alpha }),
    ]
}

fn config() -> impl Strategy<Value = Config> {
    let ues = proptest::collection::vec((0.1f64..5.0, proptest::collection::vec(app(), 1..4)), 1..6);
    (1.0f64..1000.0, ues).prop_map(|(capacity, ues)| Config {
        network: Network { capacity },
        ues: ues.into_iter().enumerate().map(|(i, (beta, apps))| UeSpec { id: i as u32 + 1, beta, apps }).collect(),
        events: vec![],
        run: RunSpec::default(),
        overhead: None,
    })
}

proptest! {
    #[test]
    fn toml_round_trip_is_exact(c in config()) {
        let text = c.to_toml();
        prop_assert_eq!(Config::parse(&text).unwrap(), c);
    }
}
