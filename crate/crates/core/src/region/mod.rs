//! Encoding ensembles and the single-letter rate region.
//!
//! An ensemble fixes a classical variable `X ~ p_X`, a bipartite pure
//! resource `|phi>_{G1 G2} = sum_i sqrt(lambda_i) |i>|i>` and one encoder
//! `F^(x): G1 -> A` per symbol. Sending `A` through the channel gives the
//! classical-quantum state `omega_{X G2 B}`; its rectangle corner is
//! `(I(X;B), I(G2;B|X))` and the region is the union of the rectangles.

mod hull;
pub mod sweep;

pub use hull::{convex_hull_upper, FrontierPoint, RateFrontier, RatePoint, Source, UpperHull};
pub use sweep::{frontier_sweep, EnsembleParams, SweepConfig, SweepResult};

use crate::channels::KrausChannel;
use crate::error::{Error, Result};
use crate::qnum::{
    entropy_of_spectrum, partial_trace_matrix, CMatrix, DensityMatrix, ProbVec, PureState, SubsystemDims, TAU_TR,
};

#[derive(Debug, Clone)]
pub struct EncodingEnsemble {
    px: ProbVec,
    schmidt: Vec<f64>,
    encoders: Vec<KrausChannel>,
}

impl EncodingEnsemble {
    pub fn new(px: ProbVec, schmidt: Vec<f64>, encoders: Vec<KrausChannel>) -> Result<Self> {
        if encoders.len() != px.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} symbols but {} encoders",
                px.len(),
                encoders.len()
            )));
        }
        let sum: f64 = schmidt.iter().sum();
        if schmidt.is_empty() || schmidt.iter().any(|l| l.is_nan() || *l < -TAU_TR) || (sum - 1.0).abs() > TAU_TR {
            return Err(Error::InvalidState(format!("Schmidt coefficients {schmidt:?} are not a pmf")));
        }
        let d0 = schmidt.len();
        let d_a = encoders[0].dim_out();
        if let Some(f) = encoders.iter().find(|f| f.dim_in() != d0 || f.dim_out() != d_a) {
            return Err(Error::DimensionMismatch(format!(
                "encoder {} -> {} does not map G1 (dim {d0}) to A (dim {d_a})",
                f.dim_in(),
                f.dim_out()
            )));
        }
        let schmidt = schmidt.into_iter().map(|l| l.max(0.0)).collect();
        Ok(Self { px, schmidt, encoders })
    }

    pub fn px(&self) -> &ProbVec {
        &self.px
    }

    pub fn schmidt(&self) -> &[f64] {
        &self.schmidt
    }

    pub fn encoders(&self) -> &[KrausChannel] {
        &self.encoders
    }

    pub fn alphabet_size(&self) -> usize {
        self.px.len()
    }

    /// Dimension of `G1` and `G2`.
    pub fn resource_dim(&self) -> usize {
        self.schmidt.len()
    }

    pub fn input_dim(&self) -> usize {
        self.encoders[0].dim_out()
    }

    /// `|phi>` on `G2 (x) G1`.
    pub fn resource_state(&self) -> PureState {
        PureState::schmidt(&self.schmidt).expect("validated Schmidt vector")
    }

    /// The joint input states `omega^x_{G2 A}` before the channel.
    pub fn input_blocks(&self) -> Vec<DensityMatrix> {
        self.encoders
            .iter()
            .map(|f| encoded_block(&self.schmidt, f.kraus_ops()))
            .collect()
    }
}

/// `sum_k (1 (x) K_k)|phi><phi|(1 (x) K_k)^dag` for `|phi> = sum_i sqrt(l_i)|i i>`.
/// Each term is rank one with amplitudes `sqrt(l_i) K_k[b, i]` at `(i, b)`.
fn encoded_block(schmidt: &[f64], ops: &[CMatrix]) -> DensityMatrix {
    let d0 = schmidt.len();
    let d_out = ops[0].nrows();
    let n = d0 * d_out;
    let mut m = CMatrix::zeros(n, n);
    let mut v = crate::qnum::CVector::zeros(n);
    for k in ops {
        for i in 0..d0 {
            let s = schmidt[i].sqrt();
            for b in 0..d_out {
                v[i * d_out + b] = k[(b, i)] * s;
            }
        }
        m.ger(crate::qnum::cr(1.0), &v, &v.conjugate(), crate::qnum::cr(1.0));
    }
    DensityMatrix::from_trusted(m)
}

/// Classical-quantum state `sum_x p(x) |x><x| (x) omega^x_{G2 B}`.
#[derive(Debug, Clone)]
pub struct CQState {
    weights: ProbVec,
    blocks: Vec<DensityMatrix>,
    dims: SubsystemDims,
}

impl CQState {
    pub fn new(weights: ProbVec, blocks: Vec<DensityMatrix>, dims: SubsystemDims) -> Result<Self> {
        if weights.len() != blocks.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} weights but {} blocks",
                weights.len(),
                blocks.len()
            )));
        }
        if dims.len() != 2 {
            return Err(Error::DimensionMismatch("blocks must be bipartite G2 (x) B".into()));
        }
        for b in &blocks {
            dims.check(b.dim())?;
        }
        Ok(Self { weights, blocks, dims })
    }

    pub fn weights(&self) -> &ProbVec {
        &self.weights
    }

    pub fn blocks(&self) -> &[DensityMatrix] {
        &self.blocks
    }

    /// `[dim G2, dim B]`.
    pub fn dims(&self) -> &SubsystemDims {
        &self.dims
    }

    /// The full block-diagonal state on `X (x) G2 (x) B`, dims `[|X|, d_G2, d_B]`.
    pub fn joint_matrix(&self) -> CMatrix {
        let n = self.blocks.len();
        let d = self.dims.total();
        let mut m = CMatrix::zeros(n * d, n * d);
        for (x, (b, &p)) in self.blocks.iter().zip(self.weights.probs()).enumerate() {
            m.view_mut((x * d, x * d), (d, d)).copy_from(&(b.matrix() * crate::qnum::cr(p)));
        }
        m
    }
}

/// `omega^x_{G2 B} = (id (x) N o F^(x))(phi_{G2 G1})` for every symbol.
pub fn output_cq_state(ch: &KrausChannel, ens: &EncodingEnsemble) -> Result<CQState> {
    if ch.dim_in() != ens.input_dim() {
        return Err(Error::DimensionMismatch(format!(
            "channel input dim {} but encoders output dim {}",
            ch.dim_in(),
            ens.input_dim()
        )));
    }
    let d0 = ens.resource_dim();
    let blocks = ens
        .encoders
        .iter()
        .map(|f| Ok(encoded_block(&ens.schmidt, ch.compose_after(f)?.kraus_ops())))
        .collect::<Result<Vec<_>>>()?;
    CQState::new(ens.px.clone(), blocks, SubsystemDims::bipartite(d0, ch.dim_out())?)
}

/// `(I(X;B), I(G2;B|X), I(X G2;B))` in bits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateTriple {
    pub ixb: f64,
    pub ig2b_given_x: f64,
    pub ixg2b: f64,
}

/// Entropies of the cq state. Conditional terms are averages of block
/// entropies; `I(X G2;B)` comes from the spectra of the block-diagonal joint
/// states on `X G2` and `X G2 B`.
pub fn cq_rates(cq: &CQState) -> Result<RateTriple> {
    let dims = cq.dims();
    let d_b = dims.factors()[1];
    let mut avg_b = CMatrix::zeros(d_b, d_b);
    let mut h_b_given_x = 0.0;
    let mut ig2b_given_x = 0.0;
    let mut joint_xg2 = Vec::new();
    let mut joint_xg2b = Vec::new();
    for (block, &p) in cq.blocks.iter().zip(cq.weights.probs()) {
        if p <= 0.0 {
            continue;
        }
        let rho_b = partial_trace_matrix(block.matrix(), dims, &[1])?;
        let rho_g2 = partial_trace_matrix(block.matrix(), dims, &[0])?;
        avg_b += &rho_b * crate::qnum::cr(p);
        let spec_g2 = DensityMatrix::from_trusted(rho_g2).spectrum();
        let spec_g2b = block.spectrum();
        let hb = entropy_of_spectrum(&DensityMatrix::from_trusted(rho_b).spectrum());
        h_b_given_x += p * hb;
        ig2b_given_x += p * (entropy_of_spectrum(&spec_g2) + hb - entropy_of_spectrum(&spec_g2b));
        joint_xg2.extend(spec_g2.iter().map(|v| p * v));
        joint_xg2b.extend(spec_g2b.iter().map(|v| p * v));
    }
    let h_b = entropy_of_spectrum(&DensityMatrix::from_trusted(avg_b).spectrum());
    Ok(RateTriple {
        ixb: h_b - h_b_given_x,
        ig2b_given_x,
        ixg2b: entropy_of_spectrum(&joint_xg2) + h_b - entropy_of_spectrum(&joint_xg2b),
    })
}

pub fn rate_triple(ch: &KrausChannel, ens: &EncodingEnsemble) -> Result<RateTriple> {
    cq_rates(&output_cq_state(ch, ens)?)
}

fn clamp_rate(v: f64) -> f64 {
    if v < 0.0 && v > -crate::qnum::TAU_NUM {
        0.0
    } else {
        v
    }
}

/// `P0 = (I(X;B), I(G2;B|X))`.
pub fn rectangle_corner(ch: &KrausChannel, ens: &EncodingEnsemble) -> Result<RatePoint> {
    let t = rate_triple(ch, ens)?;
    Ok(RatePoint::new(clamp_rate(t.ixb), clamp_rate(t.ig2b_given_x)))
}

/// `(P0, P1)` with `P1 = (0, I(X G2;B))`.
pub fn trapezoid_corners(ch: &KrausChannel, ens: &EncodingEnsemble) -> Result<(RatePoint, RatePoint)> {
    let t = rate_triple(ch, ens)?;
    Ok((
        RatePoint::new(clamp_rate(t.ixb), clamp_rate(t.ig2b_given_x)),
        RatePoint::new(0.0, clamp_rate(t.ixg2b)),
    ))
}

/// Moves `X` into the resource: the new ensemble has a single symbol and
/// resource `sum_{x,i} sqrt(p(x) lambda_i) |x i>|x i>` on `(X, G1) (x) (X, G2)`.
/// Its encoder reads `x` off `G1` and applies `F^(x)`, with Kraus operators
/// `<x| (x) K^(x)_k`. The receiver holding `(X, G2)` then sees the cq state
/// itself, so the rectangle corner becomes `(0, I(X G2;B))`.
pub fn relabel_for_trapezoid(ens: &EncodingEnsemble) -> EncodingEnsemble {
    let nx = ens.alphabet_size();
    let d0 = ens.resource_dim();
    let d_a = ens.input_dim();
    let schmidt: Vec<f64> = ens
        .px
        .probs()
        .iter()
        .flat_map(|&p| ens.schmidt.iter().map(move |&l| p * l))
        .collect();
    let mut ops = Vec::new();
    for (x, f) in ens.encoders.iter().enumerate() {
        for k in f.kraus_ops() {
            let mut op = CMatrix::zeros(d_a, nx * d0);
            op.view_mut((0, x * d0), (d_a, d0)).copy_from(k);
            ops.push(op);
        }
    }
    let encoder = KrausChannel::new(ops).expect("controlled encoder is trace preserving");
    EncodingEnsemble::new(ProbVec::uniform(1), schmidt, vec![encoder]).expect("relabeled ensemble is valid")
}

/// Time sharing with a product resource `phi_1 (x) phi_2`. The combined
/// variable is `(X, U)` with `U = 2` w.p. `lam`; symbols of `ens1` come
/// first. Encoders for `U = 1` discard the second resource half and apply
/// `F_1^(x)`; for `U = 2` they discard the first half.
///
/// The resulting corner has `I(G2;B|X U) = (1 - lam) I_1 + lam I_2` exactly
/// and `I(X U;B) = I(U;B) + (1 - lam) R_1 + lam R_2`.
pub fn time_share(ens1: &EncodingEnsemble, ens2: &EncodingEnsemble, lam: f64) -> Result<EncodingEnsemble> {
    crate::error::check_range("lam", lam, 0.0, 1.0, "[0, 1]")?;
    if ens1.input_dim() != ens2.input_dim() {
        return Err(Error::DimensionMismatch(format!(
            "ensembles target input dims {} and {}",
            ens1.input_dim(),
            ens2.input_dim()
        )));
    }
    let (d1, d2) = (ens1.resource_dim(), ens2.resource_dim());
    let d_a = ens1.input_dim();
    let schmidt: Vec<f64> = ens1
        .schmidt
        .iter()
        .flat_map(|&a| ens2.schmidt.iter().map(move |&b| a * b))
        .collect();

    let mut probs = Vec::with_capacity(ens1.alphabet_size() + ens2.alphabet_size());
    let mut encoders = Vec::with_capacity(probs.capacity());
    for (f, &p) in ens1.encoders.iter().zip(ens1.px.probs()) {
        probs.push((1.0 - lam) * p);
        let mut ops = Vec::new();
        for k in f.kraus_ops() {
            for j in 0..d2 {
                // K (x) <j|
                let mut op = CMatrix::zeros(d_a, d1 * d2);
                for col in 0..d1 {
                    op.column_mut(col * d2 + j).copy_from(&k.column(col));
                }
                ops.push(op);
            }
        }
        encoders.push(KrausChannel::new(ops)?);
    }
    for (f, &p) in ens2.encoders.iter().zip(ens2.px.probs()) {
        probs.push(lam * p);
        let mut ops = Vec::new();
        for k in f.kraus_ops() {
            for i in 0..d1 {
                // <i| (x) K
                let mut op = CMatrix::zeros(d_a, d1 * d2);
                op.view_mut((0, i * d2), (d_a, d2)).copy_from(k);
                ops.push(op);
            }
        }
        encoders.push(KrausChannel::new(ops)?);
    }
    EncodingEnsemble::new(ProbVec::new(probs)?, schmidt, encoders)
}

/// Random ensemble: uniform `p_X` and Schmidt vector on their simplices and
/// random encoders `G1 -> A` with one or two Kraus operators.
pub fn random_ensemble<R: rand::Rng + ?Sized>(nx: usize, d0: usize, d_a: usize, rng: &mut R) -> EncodingEnsemble {
    use crate::qnum::random::random_pmf;
    let px = random_pmf(nx, rng);
    let schmidt = random_pmf(d0, rng).probs().to_vec();
    let encoders = (0..nx)
        .map(|_| {
            let n_kraus = 1 + rng.random_range(0..2);
            crate::channels::random_channel(d0, d_a, n_kraus, rng)
        })
        .collect();
    EncodingEnsemble::new(px, schmidt, encoders).expect("random ensemble is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::depolarizing;
    use crate::qnum::random::{haar_unitary, random_pmf};
    use crate::qnum::{h2, max_abs_diff, maximally_entangled, pauli_x, TAU_NUM};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn bitflip_ensemble(alpha: f64) -> EncodingEnsemble {
        EncodingEnsemble::new(
            ProbVec::uniform(2),
            vec![1.0 - alpha, alpha],
            vec![KrausChannel::identity(2), KrausChannel::isometry(pauli_x()).unwrap()],
        )
        .unwrap()
    }

    fn random_ensemble(rng: &mut ChaCha8Rng, nx: usize) -> EncodingEnsemble {
        EncodingEnsemble::new(
            random_pmf(nx, rng),
            random_pmf(2, rng).probs().to_vec(),
            (0..nx)
                .map(|_| KrausChannel::isometry(haar_unitary(2, rng)).unwrap())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn ensemble_validation() {
        let id = KrausChannel::identity(2);
        assert!(EncodingEnsemble::new(ProbVec::uniform(2), vec![0.5, 0.5], vec![id.clone()]).is_err());
        assert!(EncodingEnsemble::new(ProbVec::uniform(1), vec![0.5, 0.6], vec![id.clone()]).is_err());
        assert!(EncodingEnsemble::new(ProbVec::uniform(1), vec![0.2, 0.3, 0.5], vec![id]).is_err());
    }

    #[test]
    fn identity_encoders_on_epr_give_epr_blocks() {
        let ens = EncodingEnsemble::new(
            ProbVec::uniform(3),
            vec![0.5, 0.5],
            vec![KrausChannel::identity(2); 3],
        )
        .unwrap();
        let cq = output_cq_state(&KrausChannel::identity(2), &ens).unwrap();
        let epr = maximally_entangled(2).projector();
        for b in cq.blocks() {
            assert!(max_abs_diff(b.matrix(), &epr) < 1e-15);
        }
    }

    #[test]
    fn product_resource_gives_product_blocks() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut ens = random_ensemble(&mut rng, 3);
        ens.schmidt = vec![1.0, 0.0];
        let ch = depolarizing(0.3).unwrap();
        let cq = output_cq_state(&ch, &ens).unwrap();
        for b in cq.blocks() {
            let g = partial_trace_matrix(b.matrix(), cq.dims(), &[0]).unwrap();
            let r = partial_trace_matrix(b.matrix(), cq.dims(), &[1]).unwrap();
            assert!(max_abs_diff(b.matrix(), &crate::qnum::tensor(&g, &r)) < 1e-14);
        }
        assert!(rate_triple(&ch, &ens).unwrap().ig2b_given_x.abs() < 1e-12);
    }

    #[test]
    fn constant_x_has_no_guaranteed_rate() {
        let ens = EncodingEnsemble::new(ProbVec::uniform(1), vec![0.7, 0.3], vec![KrausChannel::identity(2)]).unwrap();
        let t = rate_triple(&depolarizing(0.2).unwrap(), &ens).unwrap();
        assert!(t.ixb.abs() < 1e-12);
        let c = rectangle_corner(&KrausChannel::identity(2), &EncodingEnsemble::new(
            ProbVec::uniform(1),
            vec![1.0, 0.0],
            vec![KrausChannel::identity(2)],
        ).unwrap()).unwrap();
        assert!(c.guaranteed.abs() < 1e-12 && c.excess.abs() < 1e-12);
        let (p0, p1) = trapezoid_corners(&depolarizing(0.2).unwrap(), &ens).unwrap();
        assert!((p0.excess - p1.excess).abs() < 1e-12 && p1.guaranteed == 0.0);
    }

    #[test]
    fn bitflip_ensemble_endpoints() {
        let ch = depolarizing(0.7).unwrap();
        let p = rectangle_corner(&ch, &bitflip_ensemble(0.0)).unwrap();
        assert!((p.guaranteed - (1.0 - h2(0.35).unwrap())).abs() < 1e-12);
        assert!(p.excess.abs() < 1e-12);
        let p = rectangle_corner(&ch, &bitflip_ensemble(0.5)).unwrap();
        let c_ea = 2.0 - entropy_of_spectrum(&[0.475, 0.175, 0.175, 0.175]);
        assert!(p.guaranteed.abs() < 1e-12);
        assert!((p.excess - c_ea).abs() < 1e-12);
    }

    #[test]
    fn relabel_examples() {
        let ch = depolarizing(0.7).unwrap();
        let single = EncodingEnsemble::new(ProbVec::uniform(1), vec![0.6, 0.4], vec![KrausChannel::identity(2)]).unwrap();
        let a = rectangle_corner(&ch, &single).unwrap();
        let b = rectangle_corner(&ch, &relabel_for_trapezoid(&single)).unwrap();
        assert!(a.weakly_dominates(b, 1e-12) && b.weakly_dominates(a, 1e-12));

        let c = rectangle_corner(&ch, &relabel_for_trapezoid(&bitflip_ensemble(0.0))).unwrap();
        assert!(c.guaranteed.abs() < 1e-12);
        assert!((c.excess - (1.0 - h2(0.35).unwrap())).abs() < TAU_NUM);
    }

    #[test]
    fn time_share_endpoints() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let ch = depolarizing(0.4).unwrap();
        let e1 = random_ensemble(&mut rng, 2);
        let e2 = random_ensemble(&mut rng, 3);
        let c1 = rectangle_corner(&ch, &e1).unwrap();
        let c2 = rectangle_corner(&ch, &e2).unwrap();
        let s0 = rectangle_corner(&ch, &time_share(&e1, &e2, 0.0).unwrap()).unwrap();
        let s1 = rectangle_corner(&ch, &time_share(&e1, &e2, 1.0).unwrap()).unwrap();
        assert!((s0.guaranteed - c1.guaranteed).abs() < TAU_NUM && (s0.excess - c1.excess).abs() < TAU_NUM);
        assert!((s1.guaranteed - c2.guaranteed).abs() < TAU_NUM && (s1.excess - c2.excess).abs() < TAU_NUM);
        assert!(time_share(&e1, &e2, 1.5).is_err());
        let qutrit = EncodingEnsemble::new(ProbVec::uniform(1), vec![1.0], vec![KrausChannel::isometry(
            CMatrix::from_fn(3, 1, |r, _| crate::qnum::cr(if r == 0 { 1.0 } else { 0.0 })),
        ).unwrap()]).unwrap();
        assert!(time_share(&e1, &qutrit, 0.5).is_err());
    }

    #[test]
    fn joint_matrix_is_block_diagonal() {
        let ens = bitflip_ensemble(0.3);
        let cq = output_cq_state(&KrausChannel::identity(2), &ens).unwrap();
        let j = cq.joint_matrix();
        assert_eq!(j.nrows(), 8);
        assert!((j.trace().re - 1.0).abs() < 1e-14);
        assert!(j.view((0, 4), (4, 4)).iter().all(|z| z.norm() == 0.0));
    }
}
