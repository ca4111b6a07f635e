use ebcap::channels::{
    choi, depolarizing, is_entanglement_breaking_qubit, measure_prepare_to_kraus, random_channel, EbVerdict,
    KrausChannel, MeasurePrepareChannel,
};
use ebcap::channels::file::{channel_to_json, parse_channel};
use ebcap::qnum::random::{haar_isometry, random_density};
use ebcap::qnum::{hermitian_deviation, max_abs_diff, partial_trace, CMatrix, SubsystemDims};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn channels_map_states_to_states(seed in any::<u64>(), d_in in 1usize..4, d_out in 1usize..4, k in 1usize..5) {
        let mut r = rng(seed);
        let ch = random_channel(d_in, d_out, k, &mut r);
        prop_assert!(ch.completeness_deviation() < 1e-9);
        let rho = random_density(d_in, d_in, &mut r);
        let out = ch.apply(&rho).unwrap();
        prop_assert!((out.matrix().trace().re - 1.0).abs() < 1e-9);
        prop_assert!(hermitian_deviation(out.matrix()) < 1e-9);
        prop_assert!(*out.spectrum().last().unwrap() >= 0.0);
    }

    #[test]
    fn choi_state_reproduces_channel(seed in any::<u64>(), d_in in 1usize..4, d_out in 1usize..4, k in 1usize..4) {
        let mut r = rng(seed);
        let ch = random_channel(d_in, d_out, k, &mut r);
        let j = choi(&ch);
        let rho = random_density(d_in, d_in, &mut r);
        prop_assert!(max_abs_diff(&j.reconstruct_apply(&rho).unwrap(), ch.apply(&rho).unwrap().matrix()) < 1e-10);
        // reference marginal is maximally mixed
        let dims = SubsystemDims::new(vec![d_in, d_out]).unwrap();
        let r_marg = partial_trace(j.state(), &dims, &[0]).unwrap();
        let mm = CMatrix::identity(d_in, d_in) / ebcap::qnum::cr(d_in as f64);
        prop_assert!(max_abs_diff(r_marg.matrix(), &mm) < 1e-12);
    }

    #[test]
    fn composition_matches_sequential_application(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = random_channel(2, 3, 2, &mut r);
        let g = random_channel(3, 2, 3, &mut r);
        let rho = random_density(2, 2, &mut r);
        let seq = g.apply(&f.apply(&rho).unwrap()).unwrap();
        let comp = g.compose_after(&f).unwrap().apply(&rho).unwrap();
        prop_assert!(max_abs_diff(seq.matrix(), comp.matrix()) < 1e-12);
    }

    #[test]
    fn measure_prepare_channels_are_breaking(seed in any::<u64>(), n in 2usize..5, d_out in 2usize..4) {
        let mut r = rng(seed);
        let v = haar_isometry(n, 2, &mut r);
        let povm: Vec<CMatrix> = (0..n).map(|k| { let row = v.row(k).adjoint(); &row * row.adjoint() }).collect();
        let preps = (0..n).map(|_| random_density(d_out, d_out, &mut r)).collect();
        let ch = measure_prepare_to_kraus(&MeasurePrepareChannel::new(povm, preps).unwrap()).unwrap();
        prop_assert!(ch.completeness_deviation() < 1e-9);
        prop_assert_eq!(is_entanglement_breaking_qubit(&ch).unwrap().verdict, EbVerdict::Breaking);
    }

    #[test]
    fn depolarizing_pt_eigenvalue_is_linear(eps in 0.0f64..=1.0) {
        let cert = is_entanglement_breaking_qubit(&depolarizing(eps).unwrap()).unwrap();
        prop_assert!((cert.min_pt_eigenvalue - (3.0 * eps - 2.0) / 4.0).abs() < 1e-12);
    }

    #[test]
    fn channel_files_round_trip(seed in any::<u64>(), d_in in 1usize..4, d_out in 1usize..4) {
        let ch = random_channel(d_in, d_out, 2, &mut rng(seed));
        let back = parse_channel(&channel_to_json(&ch)).unwrap();
        prop_assert_eq!(back.kraus_ops().len(), ch.kraus_ops().len());
        for (a, b) in ch.kraus_ops().iter().zip(back.kraus_ops()) {
            prop_assert!(max_abs_diff(a, b) == 0.0);
        }
    }
}

#[test]
fn unitary_channels_are_not_breaking() {
    let mut r = rng(9);
    for _ in 0..20 {
        let u = ebcap::qnum::random::haar_unitary(2, &mut r);
        let cert = is_entanglement_breaking_qubit(&KrausChannel::isometry(u).unwrap()).unwrap();
        assert_eq!(cert.verdict, EbVerdict::NotBreaking);
        assert!((cert.min_pt_eigenvalue + 0.5).abs() < 1e-10);
    }
}

#[test]
fn qutrit_channels_are_refused() {
    let ch = random_channel(3, 3, 2, &mut rng(1));
    assert!(matches!(is_entanglement_breaking_qubit(&ch), Err(ebcap::Error::UnsupportedDimension(_))));
}
