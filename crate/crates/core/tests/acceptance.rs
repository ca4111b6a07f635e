//! Acceptance criteria. Each criterion prints one PASS/FAIL line with the
//! measured deviation and runtime; the process fails if any criterion fails.

use std::time::{Duration, Instant};

use ebcap::channels::file::save_channel;
use ebcap::channels::{depolarizing, random_channel};
use ebcap::cli::{cmd_check_eb, cmd_report};
use ebcap::depol::{
    alpha_grid, closed_form_point, joint_output_spectrum, linear_grid, spc_frontier, superposition_ensemble,
    DepolParams, EB_THRESHOLD,
};
use ebcap::qnum::random::haar_unitary;
use ebcap::qnum::{eigvals_hermitian, identity, maximally_entangled, tensor, DensityMatrix, PureState, SubsystemDims};
use ebcap::region::{
    frontier_sweep, random_ensemble, rate_triple, rectangle_corner, relabel_for_trapezoid, time_share,
    trapezoid_corners, RatePoint, SweepConfig,
};
use ebcap::verify::flag_information;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    ok: bool,
    detail: String,
}

fn run(id: u32, name: &str, limit: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = f();
    let took = start.elapsed();
    let ok = out.ok && took <= limit;
    println!(
        "{} criterion {id}: {name}: {} [{:.2?} / limit {:.0?}]",
        if ok { "PASS" } else { "FAIL" },
        out.detail,
        took,
        limit
    );
    ok
}

// -sum p log2 p, independent of the library
fn h(ps: &[f64]) -> f64 {
    ps.iter().filter(|&&p| p > 0.0).map(|&p| -p * p.log2()).sum()
}

fn gap(a: RatePoint, b: RatePoint) -> f64 {
    (a.guaranteed - b.guaranteed).abs().max((a.excess - b.excess).abs())
}

fn endpoints() -> Outcome {
    let c = 1.0 - h(&[0.35, 0.65]);
    let c_ea = 2.0 - h(&[0.475, 0.175, 0.175, 0.175]);
    let f = spc_frontier(0.7, &alpha_grid(512)).unwrap();
    let v = f.hull().vertices();
    let (top, right) = (v[0], *v.last().unwrap());
    let dev = gap(top, RatePoint::new(0.0, c_ea)).max(gap(right, RatePoint::new(c, 0.0)));
    Outcome {
        ok: dev <= 1e-9,
        detail: format!("C = {c:.10}, C_EA = {c_ea:.10}, max deviation {dev:.2e} (tol 1e-9)"),
    }
}

fn fig2() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let mut sink = Vec::new();
    let code = cmd_report(0.7, dir.path(), &mut sink);
    let text = std::fs::read_to_string(dir.path().join("gap_report.json")).unwrap_or_default();
    let g: serde_json::Value = serde_json::from_str(&text).unwrap_or(serde_json::Value::Null);
    let dominated = g["dominated"].as_bool().unwrap_or(true);
    let max_gap = g["max_vertical_gap"].as_f64().unwrap_or(0.0);
    Outcome {
        ok: code == 0 && !dominated && max_gap > 1e-6,
        detail: format!("exit {code}, dominated = {dominated}, max vertical gap {max_gap:.6e} bits (need > 1e-6)"),
    }
}

fn closed_form_vs_numerics() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xacc3);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let eps = rng.random_range(EB_THRESHOLD..=1.0);
        let alpha = rng.random_range(0.0..=0.5);
        let want = closed_form_point(DepolParams::new(eps, alpha).unwrap());
        let t = rate_triple(&depolarizing(eps).unwrap(), &superposition_ensemble(alpha).unwrap()).unwrap();
        worst = worst.max(gap(want, RatePoint::new(t.ixb, t.ig2b_given_x)));
    }
    Outcome {
        ok: worst <= 1e-8,
        detail: format!("50 pairs, worst deviation {worst:.2e} (tol 1e-8)"),
    }
}

fn pair(rng: &mut ChaCha8Rng) -> (ebcap::channels::KrausChannel, ebcap::region::EncodingEnsemble, ebcap::region::EncodingEnsemble) {
    let ch = random_channel(2, 2, rng.random_range(1..=4), rng);
    let n1 = rng.random_range(1..=3);
    let e1 = random_ensemble(n1, 2, 2, rng);
    let n2 = rng.random_range(1..=3);
    let e2 = random_ensemble(n2, 2, 2, rng);
    (ch, e1, e2)
}

fn convexity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xacc4);
    let (mut worst, mut worst_excess, mut worst_residual) = (0.0f64, 0.0f64, 0.0f64);
    let mut violations = 0;
    for _ in 0..100 {
        let (ch, e1, e2) = pair(&mut rng);
        let c1 = rectangle_corner(&ch, &e1).unwrap();
        let c2 = rectangle_corner(&ch, &e2).unwrap();
        for k in 0..=10 {
            let lam = k as f64 / 10.0;
            let c = rectangle_corner(&ch, &time_share(&e1, &e2, lam).unwrap()).unwrap();
            let line = c1.lerp(c2, lam);
            let d = gap(c, line);
            if d > 1e-8 {
                violations += 1;
            }
            worst = worst.max(d);
            worst_excess = worst_excess.max((c.excess - line.excess).abs());
            let iu = flag_information(&ch, &e1, &e2, lam).unwrap();
            worst_residual = worst_residual.max((c.guaranteed - line.guaranteed - iu).abs());
        }
    }
    Outcome {
        ok: worst <= 1e-8,
        detail: format!(
            "1100 cases, worst |corner - interpolation| {worst:.2e} (tol 1e-8), {violations} cases over tol; \
             R' coordinate worst {worst_excess:.2e}; R - interpolation - I(U;B) worst {worst_residual:.2e}"
        ),
    }
}

fn equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xacc5);
    let (mut eq, mut chain) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let (ch, e, _) = pair(&mut rng);
        let (_, p1) = trapezoid_corners(&ch, &e).unwrap();
        eq = eq.max(gap(p1, rectangle_corner(&ch, &relabel_for_trapezoid(&e)).unwrap()));
        let t = rate_triple(&ch, &e).unwrap();
        chain = chain.max((t.ixg2b - t.ixb - t.ig2b_given_x).abs());
    }
    Outcome {
        ok: eq <= 1e-8 && chain <= 1e-8,
        detail: format!("100 ensembles, relabel deviation {eq:.2e}, chain rule deviation {chain:.2e} (tol 1e-8)"),
    }
}

fn eb_boundary() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let grid = linear_grid(0.0, 1.0, 200);
    let step = grid[1] - grid[0];
    let mut misses = Vec::new();
    for (i, &eps) in grid.iter().enumerate() {
        let path = dir.path().join(format!("d{i}.json"));
        save_channel(&depolarizing(eps).unwrap(), &path).unwrap();
        let code = cmd_check_eb(&path, &mut std::io::sink());
        let breaking = code == 0;
        if breaking != (eps >= EB_THRESHOLD) && (eps - EB_THRESHOLD).abs() > step {
            misses.push(eps);
        }
    }
    let first = grid
        .iter()
        .find(|&&e| cmd_check_eb_in_memory(e))
        .copied()
        .unwrap_or(f64::NAN);
    Outcome {
        ok: misses.is_empty(),
        detail: format!("200 points, first Breaking at eps = {first:.6}, {} misclassified", misses.len()),
    }
}

fn cmd_check_eb_in_memory(eps: f64) -> bool {
    ebcap::channels::is_entanglement_breaking_qubit(&depolarizing(eps).unwrap())
        .unwrap()
        .verdict
        == ebcap::channels::EbVerdict::Breaking
}

fn mirror() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xacc7);
    let mut worst = 0.0f64;
    for d in 2..=4 {
        let phi = maximally_entangled(d);
        for _ in 0..50 {
            let u = haar_unitary(d, &mut rng);
            let lhs = phi.apply(&tensor(&identity(d), &u)).unwrap();
            let rhs = phi.apply(&tensor(&u.transpose(), &identity(d))).unwrap();
            for (a, b) in lhs.amplitudes().iter().zip(rhs.amplitudes().iter()) {
                worst = worst.max((a - b).norm());
            }
        }
    }
    Outcome {
        ok: worst <= 1e-10,
        detail: format!("d = 2..4, 150 unitaries, worst entry deviation {worst:.2e} (tol 1e-10)"),
    }
}

fn sweep_optimality() -> Outcome {
    let cfg = SweepConfig::default();
    let res = frontier_sweep(&depolarizing(0.7).unwrap(), &cfg).unwrap();
    let exact = spc_frontier(0.7, &alpha_grid(8192)).unwrap();
    let c = exact.hull().max_guaranteed();
    let mut worst = 0.0f64;
    for r in linear_grid(0.0, c, 64) {
        let swept = res.frontier.hull().value_at(r).unwrap_or(0.0);
        let closed = exact.hull().value_at(r).unwrap_or(0.0);
        worst = worst.max((swept - closed).abs());
    }
    Outcome {
        ok: worst <= 1e-3,
        detail: format!(
            "|X| = {}, d0 = {}, {} evaluations, worst |R'_sweep - R'_closed| {worst:.2e} on 64 R values (tol 1e-3)",
            cfg.alphabet_size, cfg.resource_dim, res.evaluations
        ),
    }
}

fn degenerations() -> Outcome {
    let mut worst = 0.0f64;
    let dims = SubsystemDims::bipartite(2, 2).unwrap();
    for eps in linear_grid(0.0, 1.0, 20) {
        for (alpha, expect) in [
            (0.0, [0.0, eps / 2.0, 0.0, 1.0 - eps / 2.0]),
            (0.5, [eps / 4.0, eps / 4.0, eps / 4.0, 1.0 - 0.75 * eps]),
        ] {
            let s = joint_output_spectrum(DepolParams::new(eps, alpha).unwrap()).0;
            for (a, b) in s.iter().zip(expect) {
                worst = worst.max((a - b).abs());
            }
            let psi = DensityMatrix::from_pure(&PureState::schmidt(&[1.0 - alpha, alpha]).unwrap());
            let out = depolarizing(eps).unwrap().apply_on_factor(&psi, &dims, 1).unwrap();
            let direct = eigvals_hermitian(out.matrix()).unwrap();
            let mut sorted = expect;
            sorted.sort_by(|a, b| b.total_cmp(a));
            for (a, b) in direct.iter().zip(sorted) {
                worst = worst.max((a - b).abs());
            }
        }
    }
    Outcome {
        ok: worst <= 1e-10,
        detail: format!("20 eps values, worst deviation {worst:.2e} (tol 1e-10)"),
    }
}

fn main() {
    let s = Duration::from_secs;
    let results = [
        run(1, "depolarizing endpoints at eps = 0.7", s(1), endpoints),
        run(2, "report at eps = 0.7 beats time division", s(5), fig2),
        run(3, "closed form vs rate triple on the superposition ensemble", s(30), closed_form_vs_numerics),
        run(4, "time-shared corner equals interpolated corners", s(120), convexity),
        run(5, "relabel equivalence and chain rule", s(120), equivalence),
        run(6, "entanglement-breaking boundary at 2/3", s(10), eb_boundary),
        run(7, "mirror identity", s(5), mirror),
        run(8, "default sweep matches the closed-form frontier", s(600), sweep_optimality),
        run(9, "spectrum degenerations", s(5), degenerations),
    ];
    let failed = results.iter().filter(|&&ok| !ok).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
