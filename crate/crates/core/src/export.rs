//! CSV tables and run manifests.
//!
//! Numbers are written with 12 significant digits in plain decimal notation;
//! magnitudes below `1e-14` are written as zero so round-off noise never
//! reaches a golden file.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::depol::TAU_GAP;
use crate::error::Result;
use crate::qnum::{TAU_HERM, TAU_NUM, TAU_PSD, TAU_TR};
use crate::region::RateFrontier;

pub fn fmt_sig12(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x.abs() < 1e-14 {
        return "0.00000000000".to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    let decimals = (11 - exp).max(0) as usize;
    let s = format!("{x:.decimals$}");
    // rounding can carry into a new leading digit (9.99..95 -> 10.0..0)
    let carried = s.parse::<f64>().map(|v| v.abs() >= 10f64.powi(exp + 1)).unwrap_or(false);
    if carried && decimals > 0 {
        let d = decimals - 1;
        return format!("{x:.d$}");
    }
    s
}


/// CSV rows `key,R,Rprime` for points whose source carries a parameter
/// (`alpha` or `lambda`), in input order.
pub fn parameter_csv(header_key: &str, rows: &[(f64, f64, f64)]) -> String {
    let mut out = format!("{header_key},R,Rprime\n");
    for &(k, r, rp) in rows {
        let _ = writeln!(out, "{},{},{}", fmt_sig12(k), fmt_sig12(r), fmt_sig12(rp));
    }
    out
}

/// `R,Rprime,source` for every point of the frontier, in order.
pub fn frontier_points_csv(f: &RateFrontier) -> String {
    let mut out = String::from("R,Rprime,source\n");
    for p in f.points() {
        let _ = writeln!(out, "{},{},{}", fmt_sig12(p.rate.guaranteed), fmt_sig12(p.rate.excess), p.source);
    }
    out
}

/// `R,Rprime,source` for the hull vertices, ordered by increasing `R`.
pub fn frontier_hull_csv(f: &RateFrontier) -> String {
    let mut out = String::from("R,Rprime,source\n");
    for p in f.hull_points() {
        let _ = writeln!(out, "{},{},{}", fmt_sig12(p.rate.guaranteed), fmt_sig12(p.rate.excess), p.source);
    }
    out
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub tau_herm: f64,
    pub tau_tr: f64,
    pub tau_psd: f64,
    pub tau_num: f64,
    pub tau_gap: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            tau_herm: TAU_HERM,
            tau_tr: TAU_TR,
            tau_psd: TAU_PSD,
            tau_num: TAU_NUM,
            tau_gap: TAU_GAP,
        }
    }
}

/// Provenance written next to every output. Two runs with identical inputs
/// produce identical manifests apart from `wall_clock_seconds`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub seed: Option<u64>,
    pub tolerances: Tolerances,
    pub grid_sizes: BTreeMap<String, u64>,
    pub input_digests: BTreeMap<String, String>,
    pub output_digests: BTreeMap<String, String>,
    pub annotation: Option<String>,
    pub wall_clock_seconds: f64,
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            parameters: BTreeMap::new(),
            seed: None,
            tolerances: Tolerances::default(),
            grid_sizes: BTreeMap::new(),
            input_digests: BTreeMap::new(),
            output_digests: BTreeMap::new(),
            annotation: None,
            wall_clock_seconds: 0.0,
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }

    pub fn grid(mut self, key: &str, n: u64) -> Self {
        self.grid_sizes.insert(key.to_string(), n);
        self
    }

    pub fn record_input(&mut self, name: &str, bytes: &[u8]) {
        self.input_digests.insert(name.to_string(), sha256_hex(bytes));
    }

    /// Writes `contents` to `path` and records its digest under the file name.
    pub fn write_output(&mut self, path: &Path, contents: &str) -> Result<()> {
        std::fs::write(path, contents)?;
        let name = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        self.output_digests.insert(name, sha256_hex(contents.as_bytes()));
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes") + "\n"
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }
}

/// `<path>.<suffix>` next to `path`.
pub fn sibling(path: &Path, suffix: &str) -> std::path::PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".");
    s.push(suffix);
    s.into()
}
