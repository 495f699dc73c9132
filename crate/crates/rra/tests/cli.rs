use std::fs;
use std::path::Path;
use std::process::Command;

use rra::config::Config;
use rra::output::{ALLOCATION_HEADER, OVERHEAD_HEADER, TIMESERIES_HEADER};

fn rra(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_rra")).args(args).output().expect("binary runs")
}

fn first_line(path: &Path) -> String {
    fs::read_to_string(path).unwrap().lines().next().unwrap().to_owned()
}

fn out_arg(dir: &Path) -> &str {
    dir.to_str().unwrap()
}

#[test]
fn csv_headers_are_pinned() {
    assert_eq!(ALLOCATION_HEADER, "ue_id,app_index,rate,ue_rate");
    assert_eq!(TIMESERIES_HEADER, "slot,ue_id,rate,bid,price,overhead_cum,rate_err,bid_err,price_err");
    assert_eq!(
        OVERHEAD_HEADER,
        "scenario,delta,architecture,policy,beta_location,predicted_min,measured,slots,converged"
    );

    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    assert!(rra(&["allocate", "--preset", "fresh-start", "--out", out_arg(&d.join("a"))]).status.success());
    assert_eq!(first_line(&d.join("a/allocation.csv")), ALLOCATION_HEADER);
    assert!(rra(&["simulate", "--preset", "churn-5-to-6", "--out", out_arg(&d.join("s"))]).status.success());
    assert_eq!(first_line(&d.join("s/timeseries.csv")), TIMESERIES_HEADER);
    let o = rra(&["overhead", "--preset", "overhead-grid", "--delta", "0.01", "--out", out_arg(&d.join("o"))]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(first_line(&d.join("o/overhead.csv")), OVERHEAD_HEADER);
}

#[test]
fn allocation_sums_to_capacity() {
    let tmp = tempfile::tempdir().unwrap();
    assert!(rra(&["allocate", "--preset", "fresh-start", "--out", out_arg(tmp.path())]).status.success());
    let text = fs::read_to_string(tmp.path().join("allocation.csv")).unwrap();
    let total: f64 = text.lines().skip(1).map(|l| l.split(',').nth(2).unwrap().parse::<f64>().unwrap()).sum();
    assert!((total - 180.0).abs() <= 1e-4, "{total}");
    let cert: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("certificate.json")).unwrap()).unwrap();
    assert_eq!(cert["passes"], true);
}

#[test]
fn doubling_every_beta_leaves_rates_unchanged() {
    let tmp = tempfile::tempdir().unwrap();
    let base = rra::presets::preset("fresh-start").unwrap();
    let mut doubled = base.clone();
    for ue in &mut doubled.ues {
        ue.beta *= 2.0;
    }
    for (name, cfg) in [("base", &base), ("doubled", &doubled)] {
        let path = tmp.path().join(format!("{name}.toml"));
        fs::write(&path, cfg.to_toml()).unwrap();
        let out = tmp.path().join(name);
        assert!(rra(&["allocate", "--config", path.to_str().unwrap(), "--out", out_arg(&out)]).status.success());
    }
    assert_eq!(
        fs::read(tmp.path().join("base/allocation.csv")).unwrap(),
        fs::read(tmp.path().join("doubled/allocation.csv")).unwrap()
    );
}

#[test]
fn malformed_config_fails_without_output() {
    let tmp = tempfile::tempdir().unwrap();
    let cases = [
        "not toml at all [",
        "[network]\ncapacity = 180.0\n",
        "[network]\ncapacity = -1.0\n[[ues]]\nid = 1\napps = [{ kind = \"log\", k = 1.0, r_max = 10.0, alpha = 1.0 }]\n",
        "[network]\ncapacity = 10.0\n[[ues]]\nid = 1\napps = [{ kind = \"cubic\", alpha = 1.0 }]\n",
        "[network]\ncapacity = 10.0\n[[ues]]\nid = 1\napps = [{ kind = \"log\", k = 1.0, r_max = 10.0, alpha = 1.0 }]\n[[events]]\nslot = 5\nleave = [9]\n",
    ];
    for (n, text) in cases.iter().enumerate() {
        let cfg = tmp.path().join(format!("bad{n}.toml"));
        fs::write(&cfg, text).unwrap();
        for cmd in ["allocate", "simulate"] {
            let out = tmp.path().join(format!("{cmd}{n}"));
            let o = rra(&[cmd, "--config", cfg.to_str().unwrap(), "--out", out_arg(&out)]);
            if cmd == "allocate" && n == 4 {
                // Events are irrelevant to a one-shot solve.
                continue;
            }
            assert!(!o.status.success(), "case {n} {cmd}");
            let err: serde_json::Value = serde_json::from_slice(&o.stderr).expect("stderr is JSON");
            assert!(err["error"]["message"].is_string());
            assert!(!out.exists(), "case {n} {cmd} left output behind");
        }
    }
}

#[test]
fn missing_config_file_is_an_io_error() {
    let tmp = tempfile::tempdir().unwrap();
    let o = rra(&["simulate", "--config", "/nonexistent/x.toml", "--out", out_arg(tmp.path())]);
    assert_eq!(o.status.code(), Some(1));
    let err: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "io");
}

#[test]
fn manifest_describes_the_run() {
    let tmp = tempfile::tempdir().unwrap();
    let o = rra(&[
        "simulate",
        "--preset",
        "churn-5-to-6",
        "--policy",
        "no-rebid",
        "--delta",
        "0.01",
        "--seedless",
        "--out",
        out_arg(tmp.path()),
    ]);
    assert!(o.status.success());
    let m: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(m["command"], "simulate");
    assert_eq!(m["config"], "preset:churn-5-to-6");
    assert_eq!(m["parameters"]["policy"], "no-rebid");
    assert_eq!(m["parameters"]["delta"], 0.01);
    assert_eq!(m["parameters"]["capacity"], 180.0);
    assert_eq!(m["outputs"], serde_json::json!(["timeseries.csv", "trace.txt", "summary.json"]));
    let preset_text = rra::presets::preset("churn-5-to-6").unwrap().to_toml();
    assert_eq!(m["config_sha256"], rra::output::sha256_hex(&preset_text));
    assert!(!fs::read_to_string(tmp.path().join("manifest.json")).unwrap().contains("timestamp"));
}

#[test]
fn config_file_and_preset_give_the_same_series() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("sweep.toml");
    fs::write(&cfg, rra::presets::preset("usage-sweep").unwrap().to_toml()).unwrap();
    assert!(rra(&["simulate", "--config", cfg.to_str().unwrap(), "--out", out_arg(&tmp.path().join("a"))])
        .status
        .success());
    assert!(rra(&["simulate", "--preset", "usage-sweep", "--out", out_arg(&tmp.path().join("b"))]).status.success());
    let a = fs::read(tmp.path().join("a/timeseries.csv")).unwrap();
    assert_eq!(a, fs::read(tmp.path().join("b/timeseries.csv")).unwrap());
    assert_eq!(String::from_utf8(a).unwrap().lines().count(), 1 + 500 * 6);
}

#[test]
fn hand_written_config_parses() {
    let text = r#"
[network]
capacity = 50.0

[[ues]]
id = 1
apps = [
    { kind = "sigmoid", a = 2.0, b = 8.0, alpha = 0.7 },
    { kind = "log", k = 4.0, r_max = 50.0, alpha = 0.3 },
]

[[ues]]
id = 2
beta = 2.0
apps = [{ kind = "log", k = 1.0, r_max = 50.0, alpha = 1.0 }]

[[events]]
slot = 30
join = [{ id = 3, apps = [{ kind = "sigmoid", a = 1.0, b = 5.0, alpha = 1.0 }] }]

[[events]]
slot = 60
leave = [2]
set_alphas = [{ ue = 1, alphas = [0.2, 0.8] }]

[run]
horizon = 90
policy = "no-rebid"
architecture = "distributed"
beta_location = "enb"
"#;
    let config = Config::parse(text).unwrap();
    let script = config.script().unwrap();
    assert_eq!(script.events.len(), 2);
    assert_eq!(script.initial_ues[1].beta(), 2.0);
    let res = rra_core::scenario::run_scenario(&script).unwrap();
    assert_eq!(res.windows.len(), 3);
    assert!(res.windows.iter().all(|w| w.converged()));
}

#[test]
fn unknown_fields_are_rejected() {
    let text = "[network]\ncapacity = 10.0\nfoo = 1\n[[ues]]\nid = 1\napps = []\n";
    assert!(matches!(Config::parse(text), Err(rra::CliError::Config(_))));
}
