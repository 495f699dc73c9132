//! File formats and the all-or-nothing writer.
//!
//! CSV headers are fixed; see `ALLOCATION_HEADER`, `TIMESERIES_HEADER` and
//! `OVERHEAD_HEADER`. Floats are written in shortest round-trip form.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rra_core::centralized::{Allocation, KktReport};
use rra_core::overhead::MessageRecord;
use rra_core::scenario::{TimeSeriesResult, WindowSummary};
use rra_core::UeId;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::CliError;

pub const ALLOCATION_HEADER: &str = "ue_id,app_index,rate,ue_rate";
pub const TIMESERIES_HEADER: &str = "slot,ue_id,rate,bid,price,overhead_cum,rate_err,bid_err,price_err";
pub const OVERHEAD_HEADER: &str =
    "scenario,delta,architecture,policy,beta_location,predicted_min,measured,slots,converged";

/// A named file body waiting to be written.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifact {
    pub name: &'static str,
    pub bytes: Vec<u8>,
}

fn csv_bytes<R: Serialize>(rows: impl IntoIterator<Item = R>) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).expect("in-memory csv write");
    }
    w.into_inner().expect("in-memory csv flush")
}

fn json_bytes(value: &impl Serialize) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(value).expect("json serializes");
    out.push(b'\n');
    out
}

#[derive(Serialize)]
struct AllocationRow {
    ue_id: u32,
    app_index: usize,
    rate: f64,
    ue_rate: f64,
}

pub fn allocation_csv(alloc: &Allocation) -> Artifact {
    let rows = alloc.per_app_rates.iter().map(|(&(ue, app_index), &rate)| AllocationRow {
        ue_id: ue.0,
        app_index,
        rate,
        ue_rate: alloc.per_ue_rates[&ue],
    });
    Artifact { name: "allocation.csv", bytes: csv_bytes(rows) }
}

#[derive(Serialize)]
struct Certificate {
    passes: bool,
    capacity: f64,
    total_rate: f64,
    shadow_price: f64,
    bisections: usize,
    stationarity: f64,
    stationarity_tolerance: f64,
    feasibility: f64,
    feasibility_tolerance: f64,
}

pub fn certificate_json(alloc: &Allocation, capacity: f64, kkt: &KktReport) -> Artifact {
    let cert = Certificate {
        passes: kkt.passes(),
        capacity,
        total_rate: alloc.total(),
        shadow_price: alloc.shadow_price,
        bisections: alloc.bisections,
        stationarity: kkt.stationarity,
        stationarity_tolerance: kkt.stationarity_tolerance,
        feasibility: kkt.feasibility,
        feasibility_tolerance: kkt.feasibility_tolerance,
    };
    Artifact { name: "certificate.json", bytes: json_bytes(&cert) }
}

#[derive(Serialize)]
struct TimeSeriesRow {
    slot: u64,
    ue_id: u32,
    rate: f64,
    bid: f64,
    price: f64,
    overhead_cum: u64,
    rate_err: f64,
    bid_err: f64,
    price_err: f64,
}

pub fn timeseries_csv(result: &TimeSeriesResult) -> Artifact {
    let rows = result.rows.iter().map(|r| TimeSeriesRow {
        slot: r.slot,
        ue_id: r.ue.0,
        rate: r.rate,
        bid: r.bid,
        price: r.price,
        overhead_cum: r.overhead_cum,
        rate_err: r.rate_err,
        bid_err: r.bid_err,
        price_err: r.price_err,
    });
    Artifact { name: "timeseries.csv", bytes: csv_bytes(rows) }
}

/// One line per message: `slot,kind,direction,addressing,ue_id`.
pub fn trace_txt(trace: &[MessageRecord]) -> Artifact {
    let mut bytes = Vec::new();
    for m in trace {
        writeln!(bytes, "{m}").expect("in-memory write");
    }
    Artifact { name: "trace.txt", bytes }
}

fn by_ue(m: &BTreeMap<UeId, f64>) -> BTreeMap<String, f64> {
    m.iter().map(|(id, v)| (id.0.to_string(), *v)).collect()
}

#[derive(Serialize)]
struct WindowJson {
    start_slot: u64,
    end_slot: u64,
    converged: bool,
    converged_slot: Option<u64>,
    active_slots: u64,
    overhead: u64,
    steady_rates: Option<BTreeMap<String, f64>>,
    steady_price: Option<f64>,
    oracle_rates: BTreeMap<String, f64>,
    oracle_price: f64,
    steady_rate_error: Option<f64>,
    steady_bid_error: Option<f64>,
    steady_price_error_pct: Option<f64>,
}

impl From<&WindowSummary> for WindowJson {
    fn from(w: &WindowSummary) -> Self {
        WindowJson {
            start_slot: w.start_slot,
            end_slot: w.end_slot,
            converged: w.converged(),
            converged_slot: w.converged_slot,
            active_slots: w.active_slots,
            overhead: w.overhead,
            steady_rates: w.steady.as_ref().map(|s| by_ue(&s.rates)),
            steady_price: w.steady.as_ref().map(|s| s.price),
            oracle_rates: by_ue(&w.oracle.rates),
            oracle_price: w.oracle.price,
            steady_rate_error: w.steady_rate_error(),
            steady_bid_error: w.steady_bid_error(),
            steady_price_error_pct: w.steady_price_error().map(|e| 100.0 * e),
        }
    }
}

pub fn summary_json(result: &TimeSeriesResult) -> Artifact {
    let windows: Vec<WindowJson> = result.windows.iter().map(WindowJson::from).collect();
    let total = rra_core::overhead::measure_overhead(&result.trace, ..);
    let body = serde_json::json!({ "windows": windows, "total_overhead": total });
    Artifact { name: "summary.json", bytes: json_bytes(&body) }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OverheadRow {
    pub scenario: &'static str,
    pub delta: f64,
    pub architecture: &'static str,
    pub policy: &'static str,
    pub beta_location: &'static str,
    pub predicted_min: u64,
    pub measured: u64,
    pub slots: u64,
    pub converged: bool,
}

pub fn overhead_csv(rows: &[OverheadRow]) -> Artifact {
    Artifact { name: "overhead.csv", bytes: csv_bytes(rows) }
}

/// Reproducibility record written next to every output set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub command: &'static str,
    /// `--config` path as given, or `preset:<name>`.
    pub config: String,
    /// SHA-256 of the configuration text (the canonical TOML for presets).
    pub config_sha256: String,
    pub parameters: serde_json::Value,
    pub outputs: Vec<&'static str>,
    pub version: String,
}

pub fn sha256_hex(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

impl RunManifest {
    pub fn artifact(&self) -> Artifact {
        Artifact { name: "manifest.json", bytes: json_bytes(self) }
    }
}

fn io_err(context: impl Into<String>) -> impl FnOnce(std::io::Error) -> CliError {
    let context = context.into();
    move |source| CliError::Io { context, source }
}

/// Writes every artifact into `dir`, each via a temporary file renamed into
/// place. Returns the final paths.
pub fn write_all(dir: &Path, artifacts: &[Artifact]) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(dir).map_err(io_err(format!("creating {}", dir.display())))?;
    let mut staged = Vec::with_capacity(artifacts.len());
    for a in artifacts {
        let mut tmp =
            tempfile::Builder::new().prefix(".rra-").tempfile_in(dir).map_err(io_err(format!("staging {}", a.name)))?;
        tmp.write_all(&a.bytes).map_err(io_err(format!("writing {}", a.name)))?;
        staged.push((tmp, dir.join(a.name)));
    }
    staged
        .into_iter()
        .map(|(tmp, path)| {
            tmp.persist(&path)
                .map_err(|e| CliError::Io { context: format!("renaming {}", path.display()), source: e.error })?;
            Ok(path)
        })
        .collect()
}
