//! Discretized search over encoding ensembles.
//!
//! Corners are evaluated on a structured grid (simplex grids for `lambda`
//! and `p_X`, and a product grid of encoder parameters) and then from random
//! starting ensembles refined by derivative-free coordinate ascent on a
//! random scalarization `w R + (1 - w) R'`. Encoders are pure: Euler-angle
//! unitaries when `G1` and `A` are both qubits, otherwise isometries
//! `G1 -> A (x) E` with the smallest environment `E` that fits, parametrized
//! as `W exp(i H(c))` around a Haar-random `W`.
//!
//! Every random draw derives from `SweepConfig::seed`; results are identical
//! for any worker count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::hull::{FrontierPoint, RateFrontier, RatePoint, Source};
use super::{rectangle_corner, EncodingEnsemble};
use crate::channels::file::ChannelFile;
use crate::channels::KrausChannel;
use crate::error::{Error, Result};
use crate::qnum::random::{haar_unitary, random_pmf};
use crate::qnum::{c, cr, eigh_hermitian, CMatrix, ProbVec};

const ANGLE_STEP: f64 = 0.1;
const SIMPLEX_STEP: f64 = 0.05;
const SHRINK: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    /// `|X|`.
    pub alphabet_size: usize,
    /// `dim G1 = dim G2`.
    pub resource_dim: usize,
    /// Resolution of the Schmidt-coefficient simplex grid.
    pub schmidt_grid: usize,
    /// Resolution of the `p_X` simplex grid.
    pub px_grid: usize,
    /// Points per Euler angle in the qubit encoder grid.
    pub angle_grid: usize,
    pub restarts: usize,
    pub refine_rounds: usize,
    pub seed: u64,
    /// Cap on corner evaluations.
    pub max_iterations: u64,
    pub min_points: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            alphabet_size: 2,
            resource_dim: 2,
            schmidt_grid: 256,
            px_grid: 8,
            angle_grid: 4,
            restarts: 64,
            refine_rounds: 8,
            seed: 0x00eb_cab0,
            max_iterations: 2_000_000,
            min_points: 1,
        }
    }
}

impl SweepConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Checks the search-space bounds `|X| <= d_A^2 + 1` and
    /// `d0 <= d_A (d_A^2 + 1)` that are sufficient to exhaust the region.
    pub fn validate(&self, d_a: usize) -> Result<()> {
        let x_max = d_a * d_a + 1;
        let d0_max = d_a * x_max;
        if self.alphabet_size == 0 || self.alphabet_size > x_max {
            return Err(Error::InvalidConfig(format!(
                "alphabet_size {} outside 1..={x_max}",
                self.alphabet_size
            )));
        }
        if self.resource_dim == 0 || self.resource_dim > d0_max {
            return Err(Error::InvalidConfig(format!(
                "resource_dim {} outside 1..={d0_max}",
                self.resource_dim
            )));
        }
        if self.schmidt_grid == 0 || self.px_grid == 0 || self.angle_grid == 0 {
            return Err(Error::InvalidConfig("grid resolutions must be positive".into()));
        }
        if self.min_points == 0 {
            return Err(Error::InvalidConfig("min_points must be positive".into()));
        }
        Ok(())
    }
}

/// How the encoders of a candidate are built.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EncoderParams {
    /// `Rz(phi) Ry(theta) Rz(chi)` per symbol.
    Euler { angles: Vec<[f64; 3]> },
    /// `W_x exp(i H(c_x))` restricted to the first `d0` columns, then split
    /// over the environment.
    Exponential {
        #[serde(skip)]
        bases: Vec<CMatrix>,
        coords: Vec<Vec<f64>>,
    },
    /// Fixed isometries (generalized shifts) per symbol.
    Shift { powers: Vec<usize> },
}

/// A point in the search space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleParams {
    pub px: Vec<f64>,
    pub schmidt: Vec<f64>,
    pub encoders: EncoderParams,
}

impl EnsembleParams {
    pub fn build(&self, d_a: usize) -> Result<EncodingEnsemble> {
        let d0 = self.schmidt.len();
        let encoders = match &self.encoders {
            EncoderParams::Euler { angles } => angles
                .iter()
                .map(|&[t, p, q]| KrausChannel::isometry(euler_unitary(t, p, q)))
                .collect::<Result<Vec<_>>>()?,
            EncoderParams::Exponential { bases, coords } => bases
                .iter()
                .zip(coords)
                .map(|(w, cs)| dilated_encoder(&(w * expi_hermitian(cs)), d0, d_a))
                .collect::<Result<Vec<_>>>()?,
            EncoderParams::Shift { powers } => powers
                .iter()
                .map(|&s| dilated_encoder(&shift_matrix(env_dim(d0, d_a) * d_a, s), d0, d_a))
                .collect::<Result<Vec<_>>>()?,
        };
        EncodingEnsemble::new(ProbVec::new(self.px.clone())?, self.schmidt.clone(), encoders)
    }
}

/// `Rz(phi) Ry(theta) Rz(chi)`.
pub fn euler_unitary(theta: f64, phi: f64, chi: f64) -> CMatrix {
    let (ct, st) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let e = |a: f64| c((a / 2.0).cos(), (a / 2.0).sin());
    // Rz(a) = diag(e^{-ia/2}, e^{ia/2})
    CMatrix::from_row_slice(
        2,
        2,
        &[
            e(-phi) * e(-chi) * cr(ct),
            e(-phi) * e(chi) * cr(-st),
            e(phi) * e(-chi) * cr(st),
            e(phi) * e(chi) * cr(ct),
        ],
    )
}

fn env_dim(d0: usize, d_a: usize) -> usize {
    d0.div_ceil(d_a)
}

/// Hermitian matrix from `d^2` real coordinates: diagonal, then real and
/// imaginary parts of the strict upper triangle.
fn hermitian_from_coords(coords: &[f64]) -> CMatrix {
    let d = (coords.len() as f64).sqrt().round() as usize;
    let mut h = CMatrix::zeros(d, d);
    let mut k = d;
    for i in 0..d {
        h[(i, i)] = cr(coords[i]);
        for j in i + 1..d {
            let z = c(coords[k], coords[k + 1]);
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
            k += 2;
        }
    }
    h
}

fn expi_hermitian(coords: &[f64]) -> CMatrix {
    let h = hermitian_from_coords(coords);
    let (vals, vecs) = eigh_hermitian(&h).expect("constructed Hermitian");
    let phases = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        vals.len(),
        vals.iter().map(|&v| c(v.cos(), v.sin())),
    ));
    &vecs * phases * vecs.adjoint()
}

fn shift_matrix(d: usize, power: usize) -> CMatrix {
    CMatrix::from_fn(d, d, |r, col| cr(if r == (col + power) % d { 1.0 } else { 0.0 }))
}

/// Isometry `G1 -> A (x) E` from the first `d0` columns of a unitary on
/// `A (x) E`, as Kraus operators `(1 (x) <j|) V`.
fn dilated_encoder(u: &CMatrix, d0: usize, d_a: usize) -> Result<KrausChannel> {
    let e = env_dim(d0, d_a);
    let v = u.columns(0, d0);
    let ops = (0..e)
        .map(|j| CMatrix::from_fn(d_a, d0, |a, col| v[(a * e + j, col)]))
        .collect();
    KrausChannel::new(ops)
}

/// All points of the simplex `{k/n : sum k = n}` in `parts` coordinates,
/// lexicographic, stopping after `limit` points.
fn simplex_grid(parts: usize, n: usize, limit: usize) -> Vec<Vec<f64>> {
    fn rec(parts: usize, left: usize, prefix: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<f64>>, limit: usize) {
        if out.len() >= limit {
            return;
        }
        if parts == 1 {
            prefix.push(left);
            out.push(prefix.iter().map(|&k| k as f64 / n as f64).collect());
            prefix.pop();
            return;
        }
        for k in (0..=left).rev() {
            prefix.push(k);
            rec(parts - 1, left - k, prefix, n, out, limit);
            prefix.pop();
            if out.len() >= limit {
                return;
            }
        }
    }
    let mut out = Vec::new();
    rec(parts, n, &mut Vec::new(), n, &mut out, limit);
    out
}

fn euler_grid(n: usize) -> Vec<[f64; 3]> {
    use std::f64::consts::PI;
    let thetas: Vec<f64> = if n == 1 {
        vec![0.0]
    } else {
        (0..n).map(|k| PI * k as f64 / (n - 1) as f64).collect()
    };
    let turns: Vec<f64> = (0..n).map(|k| 2.0 * PI * k as f64 / n as f64).collect();
    let mut out = Vec::with_capacity(n * n * n);
    for &t in &thetas {
        for &p in &turns {
            for &q in &turns {
                out.push([t, p, q]);
            }
        }
    }
    out
}

/// Mixed-radix counter over `digits` positions of base `radix`, capped.
fn product_indices(digits: usize, radix: usize, limit: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0usize; digits];
    loop {
        if out.len() >= limit {
            break;
        }
        out.push(cur.clone());
        let mut i = digits;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < radix {
                break;
            }
            cur[i] = 0;
        }
    }
    out
}

fn qubit_search(cfg: &SweepConfig, d_a: usize) -> bool {
    d_a == 2 && cfg.resource_dim == 2
}

fn grid_candidates(cfg: &SweepConfig, d_a: usize, limit: usize) -> Vec<EnsembleParams> {
    let nx = cfg.alphabet_size;
    let schmidts = simplex_grid(cfg.resource_dim, cfg.schmidt_grid, limit);
    let pxs = simplex_grid(nx, cfg.px_grid, limit);
    let mut out = Vec::new();
    if qubit_search(cfg, d_a) {
        // symbol 0 is the identity; the rest range over the Euler grid
        let grid = euler_grid(cfg.angle_grid);
        let combos = product_indices(nx - 1, grid.len(), limit);
        'outer: for s in &schmidts {
            for p in &pxs {
                for combo in &combos {
                    if out.len() >= limit {
                        break 'outer;
                    }
                    let mut angles = vec![[0.0; 3]];
                    angles.extend(combo.iter().map(|&i| grid[i]));
                    out.push(EnsembleParams {
                        px: p.clone(),
                        schmidt: s.clone(),
                        encoders: EncoderParams::Euler { angles },
                    });
                }
            }
        }
    } else {
        'outer2: for s in &schmidts {
            for p in &pxs {
                if out.len() >= limit {
                    break 'outer2;
                }
                out.push(EnsembleParams {
                    px: p.clone(),
                    schmidt: s.clone(),
                    encoders: EncoderParams::Shift { powers: (0..nx).collect() },
                });
            }
        }
    }
    out
}

fn random_candidate(cfg: &SweepConfig, d_a: usize, rng: &mut ChaCha8Rng) -> EnsembleParams {
    use std::f64::consts::PI;
    let nx = cfg.alphabet_size;
    let px = random_pmf(nx, rng).probs().to_vec();
    let schmidt = random_pmf(cfg.resource_dim, rng).probs().to_vec();
    let encoders = if qubit_search(cfg, d_a) {
        EncoderParams::Euler {
            angles: (0..nx)
                .map(|_| {
                    [
                        rng.random::<f64>() * PI,
                        rng.random::<f64>() * 2.0 * PI,
                        rng.random::<f64>() * 2.0 * PI,
                    ]
                })
                .collect(),
        }
    } else {
        let d = env_dim(cfg.resource_dim, d_a) * d_a;
        EncoderParams::Exponential {
            bases: (0..nx).map(|_| haar_unitary(d, rng)).collect(),
            coords: vec![vec![0.0; d * d]; nx],
        }
    };
    EnsembleParams { px, schmidt, encoders }
}

/// Number of refinement coordinates.
fn coord_count(p: &EnsembleParams) -> usize {
    p.px.len()
        + p.schmidt.len()
        + match &p.encoders {
            EncoderParams::Euler { angles } => 3 * angles.len(),
            EncoderParams::Exponential { coords, .. } => coords.iter().map(Vec::len).sum(),
            EncoderParams::Shift { .. } => 0,
        }
}

fn nudge_simplex(v: &mut [f64], i: usize, delta: f64) {
    v[i] = (v[i] + delta).max(0.0);
    let s: f64 = v.iter().sum();
    if s > 0.0 {
        v.iter_mut().for_each(|x| *x /= s);
    }
}

/// Candidate with coordinate `k` moved by `sign * step` (angles) or
/// `sign * step * SIMPLEX_STEP / ANGLE_STEP` (simplex coordinates).
fn perturbed(p: &EnsembleParams, k: usize, sign: f64, scale: f64) -> EnsembleParams {
    let mut q = p.clone();
    let nx = q.px.len();
    let d0 = q.schmidt.len();
    if k < nx {
        nudge_simplex(&mut q.px, k, sign * SIMPLEX_STEP * scale);
    } else if k < nx + d0 {
        nudge_simplex(&mut q.schmidt, k - nx, sign * SIMPLEX_STEP * scale);
    } else {
        let j = k - nx - d0;
        match &mut q.encoders {
            EncoderParams::Euler { angles } => angles[j / 3][j % 3] += sign * ANGLE_STEP * scale,
            EncoderParams::Exponential { coords, .. } => {
                let per = coords[0].len();
                coords[j / per][j % per] += sign * ANGLE_STEP * scale;
            }
            EncoderParams::Shift { .. } => unreachable!("shift encoders have no coordinates"),
        }
    }
    q
}

fn evaluate(ch: &KrausChannel, p: &EnsembleParams) -> Option<RatePoint> {
    let ens = p.build(ch.dim_in()).ok()?;
    rectangle_corner(ch, &ens).ok()
}

fn refine(ch: &KrausChannel, start: EnsembleParams, weight: f64, rounds: usize) -> (EnsembleParams, RatePoint) {
    let score = |r: RatePoint| weight * r.guaranteed + (1.0 - weight) * r.excess;
    let mut best = start;
    let mut best_rate = evaluate(ch, &best).unwrap_or(RatePoint::new(0.0, 0.0));
    let n = coord_count(&best);
    let mut scale = 1.0;
    for _ in 0..rounds {
        for k in 0..n {
            for sign in [1.0, -1.0] {
                let cand = perturbed(&best, k, sign, scale);
                if let Some(r) = evaluate(ch, &cand) {
                    if score(r) > score(best_rate) {
                        best = cand;
                        best_rate = r;
                        break;
                    }
                }
            }
        }
        scale *= SHRINK;
    }
    (best, best_rate)
}

/// Evaluations charged to one restart (start plus both directions per
/// coordinate per round).
fn restart_cost(cfg: &SweepConfig, d_a: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let n = coord_count(&random_candidate(cfg, d_a, &mut rng)) as u64;
    1 + 2 * n * cfg.refine_rounds as u64
}

fn restart_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64 + 1);
    rng
}

/// All evaluated corners, their hull, and the parameters behind each point
/// (index-aligned with `frontier.points()`).
#[derive(Debug, Clone)]
pub struct SweepResult {
    pub frontier: RateFrontier,
    pub params: Vec<EnsembleParams>,
    pub evaluations: u64,
}

/// Materialized hull vertex for export.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HullVertexRecord {
    pub rate: RatePoint,
    pub source: Source,
    pub params: EnsembleParams,
    pub encoders: Vec<ChannelFile>,
}

impl SweepResult {
    pub fn hull_records(&self, d_a: usize) -> Result<Vec<HullVertexRecord>> {
        self.frontier
            .hull_indices()
            .iter()
            .map(|&i| {
                let p = &self.frontier.points()[i];
                let params = &self.params[i];
                let ens = params.build(d_a)?;
                Ok(HullVertexRecord {
                    rate: p.rate,
                    source: p.source,
                    params: params.clone(),
                    encoders: ens.encoders().iter().map(ChannelFile::from_channel).collect(),
                })
            })
            .collect()
    }
}

pub fn frontier_sweep(ch: &KrausChannel, cfg: &SweepConfig) -> Result<SweepResult> {
    let d_a = ch.dim_in();
    cfg.validate(d_a)?;
    let cap = cfg.max_iterations;
    let grid = grid_candidates(cfg, d_a, cap.min(usize::MAX as u64) as usize);
    let mut used = grid.len() as u64;

    let cost = restart_cost(cfg, d_a);
    let affordable = (cap - used) / cost;
    let n_restarts = (cfg.restarts as u64).min(affordable) as usize;
    used += n_restarts as u64 * cost;

    let grid_rates: Vec<Option<RatePoint>> = grid.par_iter().map(|p| evaluate(ch, p)).collect();
    let refined: Vec<(EnsembleParams, RatePoint)> = (0..n_restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = restart_rng(cfg.seed, r);
            let start = random_candidate(cfg, d_a, &mut rng);
            let weight = rng.random::<f64>();
            refine(ch, start, weight, cfg.refine_rounds)
        })
        .collect();

    let mut points = Vec::with_capacity(grid.len() + refined.len());
    let mut params = Vec::with_capacity(points.capacity());
    for (i, (p, rate)) in grid.into_iter().zip(grid_rates).enumerate() {
        if let Some(rate) = rate {
            points.push(FrontierPoint {
                rate,
                source: Source::Grid { index: i as u64 },
            });
            params.push(p);
        }
    }
    for (r, (p, rate)) in refined.into_iter().enumerate() {
        points.push(FrontierPoint {
            rate,
            source: Source::Restart { index: r as u64 },
        });
        params.push(p);
    }
    if points.len() < cfg.min_points {
        return Err(Error::BudgetExceeded {
            iterations: used,
            found: points.len(),
            required: cfg.min_points,
        });
    }
    Ok(SweepResult {
        frontier: RateFrontier::new(points)?,
        params,
        evaluations: used,
    })
}
