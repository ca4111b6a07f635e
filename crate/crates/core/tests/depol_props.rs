use ebcap::channels::depolarizing;
use ebcap::depol::{
    alpha_grid, closed_form_point, ea_capacity, gap_report, joint_output_spectrum, spc_frontier,
    superposition_ensemble, time_division_frontier, unassisted_capacity, DepolParams,
};
use ebcap::qnum::{eigvals_hermitian, DensityMatrix, PureState, SubsystemDims};
use ebcap::region::rectangle_corner;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closed_form_matches_numerics(eps in 0.0f64..=1.0, alpha in 0.0f64..=0.5) {
        let want = closed_form_point(DepolParams::new(eps, alpha).unwrap());
        let got = rectangle_corner(&depolarizing(eps).unwrap(), &superposition_ensemble(alpha).unwrap()).unwrap();
        prop_assert!((want.guaranteed - got.guaranteed).abs() < 1e-8);
        prop_assert!((want.excess - got.excess).abs() < 1e-8);
    }

    #[test]
    fn spectrum_matches_eigendecomposition(eps in 0.0f64..=1.0, alpha in 0.0f64..=0.5) {
        let mut want = joint_output_spectrum(DepolParams::new(eps, alpha).unwrap()).0;
        prop_assert!(want.iter().all(|&v| (-1e-12..=1.0 + 1e-12).contains(&v)));
        prop_assert!((want.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        want.sort_by(|a, b| b.total_cmp(a));
        let psi = DensityMatrix::from_pure(&PureState::schmidt(&[1.0 - alpha, alpha]).unwrap());
        let out = depolarizing(eps).unwrap().apply_on_factor(&psi, &SubsystemDims::bipartite(2, 2).unwrap(), 1).unwrap();
        let got = eigvals_hermitian(out.matrix()).unwrap();
        for (a, b) in got.iter().zip(want) {
            prop_assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn guaranteed_rate_decreases_in_alpha(eps in 0.0f64..=1.0, a in 0.0f64..=0.5, b in 0.0f64..=0.5) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let r_lo = closed_form_point(DepolParams::new(eps, lo).unwrap()).guaranteed;
        let r_hi = closed_form_point(DepolParams::new(eps, hi).unwrap()).guaranteed;
        prop_assert!(r_hi <= r_lo + 1e-12);
    }

    #[test]
    fn capacities_are_ordered_and_monotone(e1 in 0.0f64..=1.0, e2 in 0.0f64..=1.0) {
        let (lo, hi) = if e1 < e2 { (e1, e2) } else { (e2, e1) };
        prop_assert!(unassisted_capacity(hi).unwrap() <= unassisted_capacity(lo).unwrap() + 1e-12);
        prop_assert!(ea_capacity(hi).unwrap() <= ea_capacity(lo).unwrap() + 1e-12);
        prop_assert!(unassisted_capacity(lo).unwrap() <= ea_capacity(lo).unwrap() + 1e-12);
    }

    #[test]
    fn superposition_hull_contains_time_division(eps in 0.0f64..=1.0) {
        let spc = spc_frontier(eps, &alpha_grid(64)).unwrap();
        let td = time_division_frontier(eps, &[0.0, 0.3, 0.7, 1.0]).unwrap();
        for p in td.points() {
            prop_assert!(spc.hull().dominates(p.rate, 1e-8));
        }
    }
}

#[test]
fn time_division_midpoint_at_0_7() {
    let td = time_division_frontier(0.7, &[0.5]).unwrap();
    let p = td.points()[0].rate;
    assert!((p.guaranteed - 0.0329659723).abs() < 1e-9);
    assert!((p.excess - ea_capacity(0.7).unwrap() / 2.0).abs() < 1e-15);
}

#[test]
fn strict_advantage_in_the_breaking_regime() {
    for eps in [2.0 / 3.0, 0.7, 0.8, 0.95] {
        let g = gap_report(eps, &alpha_grid(512)).unwrap();
        assert!(!g.dominated, "eps={eps}: {g:?}");
    }
    assert!(gap_report(1.0, &alpha_grid(512)).unwrap().dominated);
}
