//! Command-line front end. Every command writes human-readable lines to the
//! given writer and returns a process exit code:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success (or `check-eb`: entanglement breaking) |
//! | 1 | `check-eb`: not entanglement breaking |
//! | 2 | invalid flags or malformed input |
//! | 3 | I/O failure |
//! | 4 | sweep budget exhausted before `min_points` corners |
//! | 5 | unsupported dimension for the PPT certificate |
//! | 6 | a verification property failed |

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};

use crate::channels::file::parse_channel;
use crate::channels::{is_entanglement_breaking_qubit, EbVerdict, KrausChannel};
use crate::depol::{
    alpha_grid, ea_capacity, gap_report, lambda_grid, linear_grid, spc_frontier, time_division_excess,
    time_division_frontier, unassisted_capacity, RegionStatus,
};
use crate::error::Error;
use crate::export::{fmt_sig12, frontier_hull_csv, frontier_points_csv, parameter_csv, sibling, RunManifest};
use crate::region::{frontier_sweep, RateFrontier, Source, SweepConfig};
use crate::verify::{run_suite, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_BREAKING: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;
pub const EXIT_UNSUPPORTED: i32 = 5;
pub const EXIT_VERIFY: i32 = 6;

/// Grid used by `report` for both frontiers and the combined table.
pub const REPORT_GRID: usize = 512;

#[derive(Debug, Parser)]
#[command(name = "ebcap", version, about = "Capacity regions of entanglement-breaking channels with unreliable entanglement assistance")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form superposition region of the qubit depolarizing channel.
    DepolRegion {
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = REPORT_GRID)]
        grid: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Time-division segment of the qubit depolarizing channel.
    TdRegion {
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = REPORT_GRID)]
        grid: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Numerical frontier of an arbitrary channel.
    Sweep {
        #[arg(long)]
        channel: PathBuf,
        /// JSON sweep configuration; defaults apply when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// PPT certificate for a 2x2 or 2x3 channel.
    CheckEb {
        #[arg(long)]
        channel: PathBuf,
    },
    /// Property suites on seeded random instances.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Superposition vs time division: both frontiers, gap report, combined table.
    Report {
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        out_dir: PathBuf,
    },
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) => EXIT_IO,
        Error::BudgetExceeded { .. } => EXIT_BUDGET,
        Error::UnsupportedDimension(_) => EXIT_UNSUPPORTED,
        _ => EXIT_USAGE,
    }
}

fn fail(out: &mut dyn Write, e: &Error) -> i32 {
    let _ = writeln!(out, "error: {e}");
    exit_code(e)
}

fn check_eps(out: &mut dyn Write, eps: f64) -> Option<i32> {
    if !(0.0..=1.0).contains(&eps) {
        let _ = writeln!(out, "error: --eps must lie in [0, 1], got {eps}");
        return Some(EXIT_USAGE);
    }
    None
}

fn check_grid(out: &mut dyn Write, grid: usize) -> Option<i32> {
    if grid < 2 {
        let _ = writeln!(out, "error: --grid must be at least 2, got {grid}");
        return Some(EXIT_USAGE);
    }
    None
}

fn read_input(path: &Path) -> Result<String, Error> {
    Ok(std::fs::read_to_string(path)?)
}

fn finish(out: &mut dyn Write, mut manifest: RunManifest, path: &Path, start: Instant) -> i32 {
    manifest.wall_clock_seconds = start.elapsed().as_secs_f64();
    match manifest.save(path) {
        Ok(()) => {
            let _ = writeln!(out, "manifest: {}", path.display());
            EXIT_OK
        }
        Err(e) => fail(out, &e),
    }
}

fn print_hull_ends(out: &mut dyn Write, f: &RateFrontier) {
    let h = f.hull();
    let v = h.vertices();
    let _ = writeln!(
        out,
        "hull: {} vertices, max R = {}, max R' = {}",
        v.len(),
        fmt_sig12(h.max_guaranteed()),
        fmt_sig12(h.max_excess())
    );
}

pub fn cmd_depol_region(eps: f64, grid_size: usize, out_path: &Path, out: &mut dyn Write) -> i32 {
    let start = Instant::now();
    if let Some(code) = check_eps(out, eps).or_else(|| check_grid(out, grid_size)) {
        return code;
    }
    let alphas = alpha_grid(grid_size);
    let (frontier, gap) = match spc_frontier(eps, &alphas).and_then(|f| Ok((f, gap_report(eps, &alphas)?))) {
        Ok(v) => v,
        Err(e) => return fail(out, &e),
    };
    let rows: Vec<(f64, f64, f64)> = frontier
        .points()
        .iter()
        .map(|p| match p.source {
            Source::ClosedForm { alpha } => (alpha, p.rate.guaranteed, p.rate.excess),
            _ => unreachable!("closed-form frontier"),
        })
        .collect();
    let status = RegionStatus::for_eps(eps);
    let mut manifest = RunManifest::new("depol-region")
        .param("eps", eps)
        .grid("alpha", grid_size as u64);
    manifest.annotation = Some(status.label().to_string());
    if let Err(e) = manifest.write_output(out_path, &parameter_csv("alpha", &rows)) {
        return fail(out, &e);
    }
    let _ = writeln!(out, "eps = {eps}: {}", status.label());
    let _ = writeln!(out, "unassisted capacity C = {}", fmt_sig12(gap.unassisted_capacity));
    let _ = writeln!(out, "assisted capacity C_EA = {}", fmt_sig12(gap.ea_capacity));
    print_hull_ends(out, &frontier);
    let _ = writeln!(
        out,
        "max gap over time division = {} at alpha = {}",
        fmt_sig12(gap.max_vertical_gap),
        gap.argmax_alpha
    );
    let _ = writeln!(out, "wrote {}", out_path.display());
    finish(out, manifest, &sibling(out_path, "manifest.json"), start)
}

pub fn cmd_td_region(eps: f64, grid_size: usize, out_path: &Path, out: &mut dyn Write) -> i32 {
    let start = Instant::now();
    if let Some(code) = check_eps(out, eps).or_else(|| check_grid(out, grid_size)) {
        return code;
    }
    let lambdas = lambda_grid(grid_size);
    let frontier = match time_division_frontier(eps, &lambdas) {
        Ok(f) => f,
        Err(e) => return fail(out, &e),
    };
    let rows: Vec<(f64, f64, f64)> = lambdas
        .iter()
        .zip(frontier.points())
        .map(|(&l, p)| (l, p.rate.guaranteed, p.rate.excess))
        .collect();
    let status = RegionStatus::for_eps(eps);
    let mut manifest = RunManifest::new("td-region")
        .param("eps", eps)
        .grid("lambda", grid_size as u64);
    manifest.annotation = Some(status.label().to_string());
    if let Err(e) = manifest.write_output(out_path, &parameter_csv("lambda", &rows)) {
        return fail(out, &e);
    }
    let _ = writeln!(out, "eps = {eps}: {}", status.label());
    print_hull_ends(out, &frontier);
    let _ = writeln!(out, "wrote {}", out_path.display());
    finish(out, manifest, &sibling(out_path, "manifest.json"), start)
}

fn eb_annotation(ch: &KrausChannel) -> String {
    match is_entanglement_breaking_qubit(ch) {
        Ok(c) if c.verdict == EbVerdict::Breaking => "capacity region (entanglement-breaking channel)".into(),
        Ok(_) => "achievable inner bound only (channel not entanglement breaking)".into(),
        Err(_) => "achievable inner bound only (entanglement breaking not certified for this dimension)".into(),
    }
}

pub fn cmd_sweep(channel_file: &Path, config_file: Option<&Path>, out_path: &Path, out: &mut dyn Write) -> i32 {
    let start = Instant::now();
    let mut manifest = RunManifest::new("sweep");
    let ch_text = match read_input(channel_file) {
        Ok(t) => t,
        Err(e) => return fail(out, &e),
    };
    manifest.record_input("channel", ch_text.as_bytes());
    let ch = match parse_channel(&ch_text) {
        Ok(c) => c,
        Err(e) => return fail(out, &e),
    };
    let cfg = match config_file {
        Some(p) => match read_input(p) {
            Ok(t) => {
                manifest.record_input("config", t.as_bytes());
                match SweepConfig::from_json(&t) {
                    Ok(c) => c,
                    Err(e) => return fail(out, &e),
                }
            }
            Err(e) => return fail(out, &e),
        },
        None => SweepConfig::default(),
    };
    let result = match frontier_sweep(&ch, &cfg) {
        Ok(r) => r,
        Err(e) => return fail(out, &e),
    };
    let records = match result.hull_records(ch.dim_in()) {
        Ok(r) => r,
        Err(e) => return fail(out, &e),
    };
    manifest.seed = Some(cfg.seed);
    manifest = manifest
        .param("alphabet_size", cfg.alphabet_size)
        .param("resource_dim", cfg.resource_dim)
        .param("restarts", cfg.restarts)
        .param("refine_rounds", cfg.refine_rounds)
        .param("max_iterations", cfg.max_iterations)
        .param("min_points", cfg.min_points)
        .param("evaluations", result.evaluations)
        .grid("schmidt", cfg.schmidt_grid as u64)
        .grid("px", cfg.px_grid as u64)
        .grid("angle", cfg.angle_grid as u64);
    manifest.annotation = Some(eb_annotation(&ch));
    let hull_json = serde_json::to_string_pretty(&records).expect("hull records serialize") + "\n";
    let writes = manifest
        .write_output(out_path, &frontier_hull_csv(&result.frontier))
        .and_then(|_| manifest.write_output(&sibling(out_path, "points.csv"), &frontier_points_csv(&result.frontier)))
        .and_then(|_| manifest.write_output(&sibling(out_path, "hull.json"), &hull_json));
    if let Err(e) = writes {
        return fail(out, &e);
    }
    let _ = writeln!(out, "{}", manifest.annotation.as_deref().unwrap_or_default());
    let _ = writeln!(
        out,
        "{} corners from {} evaluations",
        result.frontier.points().len(),
        result.evaluations
    );
    print_hull_ends(out, &result.frontier);
    let _ = writeln!(out, "wrote {}", out_path.display());
    finish(out, manifest, &sibling(out_path, "manifest.json"), start)
}

pub fn cmd_check_eb(channel_file: &Path, out: &mut dyn Write) -> i32 {
    let ch = match read_input(channel_file).and_then(|t| parse_channel(&t)) {
        Ok(c) => c,
        Err(e) => return fail(out, &e),
    };
    match is_entanglement_breaking_qubit(&ch) {
        Ok(cert) => {
            let _ = writeln!(
                out,
                "{} (min partial-transpose eigenvalue {:.12e})",
                cert.verdict, cert.min_pt_eigenvalue
            );
            match cert.verdict {
                EbVerdict::Breaking => EXIT_OK,
                EbVerdict::NotBreaking => EXIT_NOT_BREAKING,
            }
        }
        Err(e) => fail(out, &e),
    }
}

pub fn cmd_verify(suite: Suite, seed: u64, trials: usize, out: &mut dyn Write) -> i32 {
    if trials == 0 {
        let _ = writeln!(out, "error: --trials must be at least 1");
        return EXIT_USAGE;
    }
    let checks = match run_suite(suite, seed, trials) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(out, "error: {e}");
            return EXIT_VERIFY;
        }
    };
    let mut failed = 0;
    for c in &checks {
        let _ = writeln!(out, "{c}");
        if !c.passed() {
            failed += 1;
        }
    }
    let _ = writeln!(out, "{} properties, {} failed (seed {seed}, trials {trials})", checks.len(), failed);
    if failed == 0 {
        EXIT_OK
    } else {
        EXIT_VERIFY
    }
}

/// `R,Rp_spc,Rp_td` on `n` evenly spaced guaranteed rates in `[0, C]`.
pub fn combined_table(spc: &RateFrontier, c: f64, c_ea: f64, n: usize) -> String {
    let mut s = String::from("R,Rp_spc,Rp_td\n");
    let rs = if c > 0.0 { linear_grid(0.0, c, n) } else { vec![0.0] };
    for r in rs {
        let spc_v = spc.hull().value_at(r).unwrap_or(0.0);
        let td_v = time_division_excess(c, c_ea, r);
        s.push_str(&format!("{},{},{}\n", fmt_sig12(r), fmt_sig12(spc_v), fmt_sig12(td_v)));
    }
    s
}

pub fn cmd_report(eps: f64, out_dir: &Path, out: &mut dyn Write) -> i32 {
    let start = Instant::now();
    if let Some(code) = check_eps(out, eps) {
        return code;
    }
    if let Err(e) = std::fs::create_dir_all(out_dir) {
        return fail(out, &Error::Io(e));
    }
    let alphas = alpha_grid(REPORT_GRID);
    let lambdas = lambda_grid(REPORT_GRID);
    let computed = (|| -> Result<_, Error> {
        Ok((
            spc_frontier(eps, &alphas)?,
            time_division_frontier(eps, &lambdas)?,
            gap_report(eps, &alphas)?,
            unassisted_capacity(eps)?,
            ea_capacity(eps)?,
        ))
    })();
    let (spc, td, gap, c, c_ea) = match computed {
        Ok(v) => v,
        Err(e) => return fail(out, &e),
    };
    let spc_rows: Vec<_> = alphas
        .iter()
        .zip(spc.points())
        .map(|(&a, p)| (a, p.rate.guaranteed, p.rate.excess))
        .collect();
    let td_rows: Vec<_> = lambdas
        .iter()
        .zip(td.points())
        .map(|(&l, p)| (l, p.rate.guaranteed, p.rate.excess))
        .collect();
    let mut manifest = RunManifest::new("report")
        .param("eps", eps)
        .grid("alpha", REPORT_GRID as u64)
        .grid("lambda", REPORT_GRID as u64)
        .grid("combined_r", REPORT_GRID as u64);
    manifest.annotation = Some(gap.status.label().to_string());
    let gap_json = serde_json::to_string_pretty(&gap).expect("gap report serializes") + "\n";
    let writes = manifest
        .write_output(&out_dir.join("spc.csv"), &parameter_csv("alpha", &spc_rows))
        .and_then(|_| manifest.write_output(&out_dir.join("td.csv"), &parameter_csv("lambda", &td_rows)))
        .and_then(|_| manifest.write_output(&out_dir.join("gap_report.json"), &gap_json))
        .and_then(|_| {
            manifest.write_output(&out_dir.join("combined.csv"), &combined_table(&spc, c, c_ea, REPORT_GRID))
        });
    if let Err(e) = writes {
        return fail(out, &e);
    }
    let _ = writeln!(out, "eps = {eps}: {}", gap.status.label());
    let _ = writeln!(out, "C = {}, C_EA = {}", fmt_sig12(c), fmt_sig12(c_ea));
    let _ = writeln!(
        out,
        "max vertical gap = {} at alpha = {} (R = {})",
        fmt_sig12(gap.max_vertical_gap),
        gap.argmax_alpha,
        fmt_sig12(gap.argmax_r)
    );
    let _ = writeln!(out, "dominated by time division: {}", gap.dominated);
    let _ = writeln!(out, "wrote {}", out_dir.display());
    finish(out, manifest, &out_dir.join("manifest.json"), start)
}

pub fn dispatch(cli: Cli, out: &mut dyn Write) -> i32 {
    match cli.command {
        Command::DepolRegion { eps, grid, out: path } => cmd_depol_region(eps, grid, &path, out),
        Command::TdRegion { eps, grid, out: path } => cmd_td_region(eps, grid, &path, out),
        Command::Sweep { channel, config, out: path } => cmd_sweep(&channel, config.as_deref(), &path, out),
        Command::CheckEb { channel } => cmd_check_eb(&channel, out),
        Command::Verify { suite, seed, trials } => cmd_verify(suite, seed, trials, out),
        Command::Report { eps, out_dir } => cmd_report(eps, &out_dir, out),
    }
}

/// Sizes the global worker pool from `EBCAP_THREADS` when set.
pub fn configure_threads(value: Option<&str>) -> Result<(), String> {
    let Some(v) = value else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("EBCAP_THREADS must be a positive integer, got {v:?}"))?;
    // a pool built earlier in the same process keeps its size
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_USAGE;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    if let Err(msg) = configure_threads(std::env::var("EBCAP_THREADS").ok().as_deref()) {
        let _ = writeln!(err, "error: {msg}");
        return EXIT_USAGE;
    }
    dispatch(cli, out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("ebcap").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8_lossy(&out).into_owned() + &String::from_utf8_lossy(&err))
    }

    #[test]
    fn bad_flags_exit_2() {
        assert_eq!(run_args(&["depol-region", "--eps", "0.7"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["bogus"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["verify", "--trials", "0"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["verify", "--suite", "nope"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["depol-region", "--eps", "1.5", "--out", "/nonexistent/x.csv"]).0, EXIT_USAGE);
    }

    #[test]
    fn help_exits_0() {
        let (code, text) = run_args(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(text.contains("depol-region"));
    }

    #[test]
    fn missing_files_exit_3() {
        assert_eq!(run_args(&["check-eb", "--channel", "/nonexistent/ch.json"]).0, EXIT_IO);
        assert_eq!(
            run_args(&["depol-region", "--eps", "0.7", "--grid", "8", "--out", "/nonexistent/dir/x.csv"]).0,
            EXIT_IO
        );
    }

    #[test]
    fn thread_variable_is_validated() {
        assert!(configure_threads(None).is_ok());
        assert!(configure_threads(Some("0")).is_err());
        assert!(configure_threads(Some("many")).is_err());
    }

    #[test]
    fn combined_table_degenerates_at_eps_1() {
        let spc = spc_frontier(1.0, &alpha_grid(4)).unwrap();
        assert_eq!(combined_table(&spc, 0.0, 0.0, 16), "R,Rp_spc,Rp_td\n0.00000000000,0.00000000000,0.00000000000\n");
    }
}
