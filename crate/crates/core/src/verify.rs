//! Executable property suites. Each property is checked on seeded random
//! instances (or a fixed grid) and reports the worst deviation seen.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channels::{
    choi, depolarizing, is_entanglement_breaking_qubit, measure_prepare_to_kraus, random_channel, EbVerdict,
    KrausChannel, MeasurePrepareChannel,
};
use crate::depol::{
    alpha_grid, closed_form_point, ea_capacity, joint_output_spectrum, linear_grid, superposition_ensemble,
    unassisted_capacity, DepolParams, EB_THRESHOLD,
};
use crate::error::Result;
use crate::qnum::random::{haar_isometry, haar_unitary, random_density};
use crate::qnum::{
    binary_convolution, cr, eigvals_hermitian, entropy_of_matrix, entropy_vn, max_abs_diff, maximally_entangled,
    partial_trace, partial_trace_matrix, CMatrix, DensityMatrix, PureState, SubsystemDims, TAU_NUM, TAU_TR,
};
use crate::region::{
    random_ensemble, rate_triple, rectangle_corner, relabel_for_trapezoid, time_share, trapezoid_corners,
    output_cq_state, EncodingEnsemble, RatePoint,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Lemmas,
    Depol,
    All,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyCheck {
    pub name: &'static str,
    pub cases: usize,
    pub worst: f64,
    pub tolerance: f64,
}

impl PropertyCheck {
    pub fn passed(&self) -> bool {
        self.worst.is_finite() && self.worst <= self.tolerance
    }
}

impl fmt::Display for PropertyCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:<32} cases={:<6} worst={:.3e} tol={:.0e}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.cases,
            self.worst,
            self.tolerance
        )
    }
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn check<F>(name: &'static str, tol: f64, seed: u64, stream: u64, trials: usize, mut f: F) -> Result<PropertyCheck>
where
    F: FnMut(&mut ChaCha8Rng) -> Result<f64>,
{
    let mut rng = rng_for(seed, stream);
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let d = f(&mut rng)?;
        worst = if d.is_nan() { f64::NAN } else { worst.max(d) };
    }
    Ok(PropertyCheck {
        name,
        cases: trials,
        worst,
        tolerance: tol,
    })
}

fn sample_channel(rng: &mut ChaCha8Rng) -> KrausChannel {
    let d_out = rng.random_range(2..=3);
    let n = rng.random_range(1..=4);
    random_channel(2, d_out, n, rng)
}

fn sample_ensemble(rng: &mut ChaCha8Rng) -> EncodingEnsemble {
    let nx = rng.random_range(1..=3);
    let d0 = rng.random_range(2..=3);
    random_ensemble(nx, d0, 2, rng)
}

/// `sum_x p(x) N(F^(x)(phi_A))`, the average output seen by the receiver.
fn average_output(ch: &KrausChannel, ens: &EncodingEnsemble) -> Result<CMatrix> {
    let cq = output_cq_state(ch, ens)?;
    let d_b = cq.dims().factors()[1];
    let mut avg = CMatrix::zeros(d_b, d_b);
    for (b, &p) in cq.blocks().iter().zip(cq.weights().probs()) {
        avg += partial_trace_matrix(b.matrix(), cq.dims(), &[1])? * cr(p);
    }
    Ok(avg)
}

/// `I(U;B)` for the time-sharing flag with `P(U = 2) = lam`.
pub fn flag_information(ch: &KrausChannel, e1: &EncodingEnsemble, e2: &EncodingEnsemble, lam: f64) -> Result<f64> {
    let b1 = average_output(ch, e1)?;
    let b2 = average_output(ch, e2)?;
    let mix = &b1 * cr(1.0 - lam) + &b2 * cr(lam);
    Ok(entropy_of_matrix(&mix)? - (1.0 - lam) * entropy_of_matrix(&b1)? - lam * entropy_of_matrix(&b2)?)
}

fn lambdas() -> Vec<f64> {
    (0..=10).map(|i| i as f64 / 10.0).collect()
}

fn corner_gap(a: RatePoint, b: RatePoint) -> f64 {
    (a.guaranteed - b.guaranteed).abs().max((a.excess - b.excess).abs())
}

/// Rate-region lemmas and the entropy identities they rest on.
pub fn lemma_suite(seed: u64, trials: usize) -> Result<Vec<PropertyCheck>> {
    let mut out = Vec::new();
    out.push(check("chain_rule", TAU_NUM, seed, 1, trials, |rng| {
        let ch = sample_channel(rng);
        let t = rate_triple(&ch, &sample_ensemble(rng))?;
        Ok((t.ixg2b - t.ixb - t.ig2b_given_x).abs())
    })?);
    out.push(check("time_share_convexity", TAU_NUM, seed, 2, trials, |rng| {
        let ch = sample_channel(rng);
        let (e1, e2) = (sample_ensemble(rng), sample_ensemble(rng));
        let (c1, c2) = (rectangle_corner(&ch, &e1)?, rectangle_corner(&ch, &e2)?);
        let mut worst = 0.0f64;
        for lam in lambdas() {
            let c = rectangle_corner(&ch, &time_share(&e1, &e2, lam)?)?;
            let interp = c1.lerp(c2, lam);
            let iu = flag_information(&ch, &e1, &e2, lam)?;
            worst = worst
                .max((c.excess - interp.excess).abs())
                .max((c.guaranteed - interp.guaranteed - iu).abs())
                .max(-iu);
        }
        Ok(worst)
    })?);
    out.push(check("trapezoid_dominance", TAU_NUM, seed, 3, trials, |rng| {
        let ch = sample_channel(rng);
        let ens = sample_ensemble(rng);
        let (p0, p1) = trapezoid_corners(&ch, &ens)?;
        let relabeled = relabel_for_trapezoid(&ens);
        let mut worst = 0.0f64;
        for lam in lambdas() {
            let target = p0.lerp(p1, lam);
            let c = rectangle_corner(&ch, &time_share(&ens, &relabeled, lam)?)?;
            worst = worst
                .max(target.guaranteed - c.guaranteed)
                .max(target.excess - c.excess);
        }
        Ok(worst)
    })?);
    out.push(check("relabel_equivalence", TAU_NUM, seed, 4, trials, |rng| {
        let ch = sample_channel(rng);
        let ens = sample_ensemble(rng);
        let (_, p1) = trapezoid_corners(&ch, &ens)?;
        Ok(corner_gap(p1, rectangle_corner(&ch, &relabel_for_trapezoid(&ens))?))
    })?);
    out.push(check("mirror_lemma", 1e-10, seed, 5, trials, |rng| {
        let mut worst = 0.0f64;
        for d in 2..=4 {
            let u = haar_unitary(d, rng);
            let phi = maximally_entangled(d);
            let id = crate::qnum::identity(d);
            let lhs = phi.apply(&crate::qnum::tensor(&id, &u))?;
            let rhs = phi.apply(&crate::qnum::tensor(&u.transpose(), &id))?;
            let diff = lhs
                .amplitudes()
                .iter()
                .zip(rhs.amplitudes().iter())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            worst = worst.max(diff);
        }
        Ok(worst)
    })?);
    out.push(check("subadditivity", TAU_NUM, seed, 6, trials, |rng| {
        let rho = random_density(6, rng.random_range(1..=6), rng);
        let dims = SubsystemDims::new(vec![2, 3])?;
        let sa = entropy_vn(&partial_trace(&rho, &dims, &[0])?);
        let sb = entropy_vn(&partial_trace(&rho, &dims, &[1])?);
        Ok((entropy_vn(&rho) - sa - sb).max(0.0))
    })?);
    out.push(check("partial_trace_of_product", TAU_TR, seed, 7, trials, |rng| {
        let (da, db) = (rng.random_range(1..=3), rng.random_range(1..=3));
        let a = random_density(da, da, rng);
        let b = random_density(db, db, rng);
        let dims = SubsystemDims::new(vec![da, db])?;
        let ab = a.tensor(&b);
        let ra = partial_trace(&ab, &dims, &[0])?;
        let rb = partial_trace(&ab, &dims, &[1])?;
        Ok(max_abs_diff(ra.matrix(), a.matrix()).max(max_abs_diff(rb.matrix(), b.matrix())))
    })?);
    out.push(check("data_processing", TAU_NUM, seed, 8, trials, |rng| {
        let ch = random_channel(2, 2, rng.random_range(1..=4), rng);
        let ens = sample_ensemble(rng);
        let before = rate_triple(&KrausChannel::identity(2), &ens)?.ixb;
        let after = rate_triple(&ch, &ens)?.ixb;
        Ok((after - before).max(0.0))
    })?);
    out.push(check("rate_nonnegativity", TAU_NUM, seed, 9, trials, |rng| {
        let ch = sample_channel(rng);
        let t = rate_triple(&ch, &sample_ensemble(rng))?;
        Ok((-t.ixb).max(-t.ig2b_given_x).max(-t.ixg2b).max(0.0))
    })?);
    out.push(check("binary_convolution_assoc", 1e-12, seed, 10, trials, |rng| {
        let (a, b, c) = (rng.random::<f64>(), rng.random::<f64>(), rng.random::<f64>());
        let l = binary_convolution(a, binary_convolution(b, c)?)?;
        let r = binary_convolution(binary_convolution(a, b)?, c)?;
        Ok((l - r).abs())
    })?);
    Ok(out)
}

/// Closed-form depolarizing region against direct numerics.
pub fn depol_suite(seed: u64, trials: usize) -> Result<Vec<PropertyCheck>> {
    let mut out = Vec::new();
    out.push(check("formula_vs_numerics", TAU_NUM, seed, 101, trials, |rng| {
        let eps = rng.random::<f64>();
        let alpha = 0.5 * rng.random::<f64>();
        let want = closed_form_point(DepolParams::new(eps, alpha)?);
        let got = rectangle_corner(&depolarizing(eps)?, &superposition_ensemble(alpha)?)?;
        Ok(corner_gap(want, got))
    })?);

    let grid = linear_grid(0.0, 1.0, 100);
    let mut worst = 0.0f64;
    for &eps in &grid {
        for alpha in alpha_grid(100) {
            let s = joint_output_spectrum(DepolParams::new(eps, alpha)?).0;
            let sum: f64 = s.iter().sum();
            let outside = s.iter().map(|&v| (-v).max(v - 1.0)).fold(0.0, f64::max);
            worst = worst.max((sum - 1.0).abs()).max(outside);
        }
    }
    out.push(PropertyCheck {
        name: "spectrum_validity",
        cases: 100 * 100,
        worst,
        tolerance: TAU_TR,
    });

    out.push(check("input_entropy_constraint", TAU_NUM, seed, 102, trials, |rng| {
        let alpha = 0.5 * rng.random::<f64>();
        let ens = superposition_ensemble(alpha)?;
        let cq = output_cq_state(&KrausChannel::identity(2), &ens)?;
        let mut worst = 0.0f64;
        for b in cq.blocks() {
            let g2 = partial_trace_matrix(b.matrix(), cq.dims(), &[0])?;
            let vals = eigvals_hermitian(&g2)?;
            worst = worst.max((vals[0] - (1.0 - alpha)).abs()).max((vals[1] - alpha).abs());
        }
        Ok(worst)
    })?);

    let eps_grid = linear_grid(0.0, 1.0, 101);
    let mut worst = 0.0f64;
    for w in eps_grid.windows(2) {
        worst = worst
            .max(unassisted_capacity(w[1])? - unassisted_capacity(w[0])?)
            .max(ea_capacity(w[1])? - ea_capacity(w[0])?);
    }
    for &eps in &eps_grid {
        worst = worst.max(unassisted_capacity(eps)? - ea_capacity(eps)?);
    }
    out.push(PropertyCheck {
        name: "monotone_endpoints",
        cases: eps_grid.len(),
        worst: worst.max(0.0),
        tolerance: TAU_NUM,
    });

    out.push(check("guaranteed_rate_monotone_in_alpha", TAU_NUM, seed, 103, trials, |rng| {
        let eps = rng.random::<f64>();
        let mut worst = 0.0f64;
        let alphas = alpha_grid(64);
        for w in alphas.windows(2) {
            let r0 = closed_form_point(DepolParams::new(eps, w[0])?).guaranteed;
            let r1 = closed_form_point(DepolParams::new(eps, w[1])?).guaranteed;
            worst = worst.max(r1 - r0);
        }
        Ok(worst.max(0.0))
    })?);

    out.push(check("spectrum_vs_eigendecomposition", TAU_NUM, seed, 104, trials, |rng| {
        let eps = rng.random::<f64>();
        let alpha = 0.5 * rng.random::<f64>();
        let mut want = joint_output_spectrum(DepolParams::new(eps, alpha)?).0;
        want.sort_by(|a, b| b.total_cmp(a));
        let psi = DensityMatrix::from_pure(&PureState::schmidt(&[1.0 - alpha, alpha])?);
        let out = depolarizing(eps)?.apply_on_factor(&psi, &SubsystemDims::bipartite(2, 2)?, 1)?;
        let got = eigvals_hermitian(out.matrix())?;
        Ok(got.iter().zip(want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
    })?);
    Ok(out)
}

/// Channel representations and the entanglement-breaking certificate.
pub fn channel_suite(seed: u64, trials: usize) -> Result<Vec<PropertyCheck>> {
    let mut out = Vec::new();
    out.push(check("trace_preservation", TAU_TR, seed, 201, trials, |rng| {
        let (d_in, d_out) = (rng.random_range(1..=4), rng.random_range(1..=4));
        let ch = random_channel(d_in, d_out, rng.random_range(1..=5), rng);
        let rho = random_density(d_in, d_in, rng);
        let tr = ch.apply(&rho)?.matrix().trace().re;
        Ok(ch.completeness_deviation().max((tr - 1.0).abs()))
    })?);
    out.push(check("choi_consistency", TAU_NUM, seed, 202, trials, |rng| {
        let (d_in, d_out) = (rng.random_range(1..=3), rng.random_range(1..=3));
        let ch = random_channel(d_in, d_out, rng.random_range(1..=4), rng);
        let rho = random_density(d_in, d_in, rng);
        Ok(max_abs_diff(&choi(&ch).reconstruct_apply(&rho)?, ch.apply(&rho)?.matrix()))
    })?);

    let grid = linear_grid(0.0, 1.0, 200);
    let step = grid[1] - grid[0];
    let mut misses = 0usize;
    for &eps in &grid {
        let breaking = is_entanglement_breaking_qubit(&depolarizing(eps)?)?.verdict == EbVerdict::Breaking;
        if breaking != (eps >= EB_THRESHOLD) && (eps - EB_THRESHOLD).abs() > step {
            misses += 1;
        }
    }
    out.push(PropertyCheck {
        name: "eb_threshold_scan",
        cases: grid.len(),
        worst: misses as f64,
        tolerance: 0.0,
    });

    out.push(check("measure_prepare_is_breaking", TAU_NUM, seed, 203, trials, |rng| {
        let n = rng.random_range(2..=4);
        // rank-one POVM from the rows of a Haar isometry C^2 -> C^n
        let v = haar_isometry(n, 2, rng);
        let povm: Vec<CMatrix> = (0..n)
            .map(|k| {
                let row = v.row(k).adjoint();
                &row * row.adjoint()
            })
            .collect();
        let d_out = rng.random_range(2..=3);
        let preps = (0..n).map(|_| random_density(d_out, d_out, rng)).collect();
        let ch = measure_prepare_to_kraus(&MeasurePrepareChannel::new(povm, preps)?)?;
        let cert = is_entanglement_breaking_qubit(&ch)?;
        Ok(match cert.verdict {
            EbVerdict::Breaking => 0.0,
            EbVerdict::NotBreaking => -cert.min_pt_eigenvalue,
        })
    })?);
    Ok(out)
}

pub fn run_suite(suite: Suite, seed: u64, trials: usize) -> Result<Vec<PropertyCheck>> {
    let mut out = Vec::new();
    if matches!(suite, Suite::Lemmas | Suite::All) {
        out.extend(lemma_suite(seed, trials)?);
    }
    if matches!(suite, Suite::Depol | Suite::All) {
        out.extend(depol_suite(seed, trials)?);
    }
    if suite == Suite::All {
        out.extend(channel_suite(seed, trials)?);
    }
    Ok(out)
}
