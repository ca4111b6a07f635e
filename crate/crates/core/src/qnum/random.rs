//! Random states, unitaries and isometries for sweeps and property checks.

use rand::Rng;
use rand_distr::StandardNormal;

use super::{c, cr, CMatrix, CVector, DensityMatrix, ProbVec, PureState};

fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        c(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
    })
}

/// Haar-distributed `d x d` unitary (QR of a Ginibre matrix with the phase fix).
pub fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix {
    let qr = ginibre(d, d, rng).qr();
    let (q, r) = qr.unpack();
    let mut u = q;
    for j in 0..d {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 { rjj / cr(rjj.norm()) } else { cr(1.0) };
        for i in 0..d {
            u[(i, j)] *= phase;
        }
    }
    u
}

/// Haar isometry `C^cols -> C^rows`, `rows >= cols`.
pub fn haar_isometry<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    assert!(rows >= cols, "isometry needs rows >= cols");
    haar_unitary(rows, rng).columns(0, cols).into_owned()
}

pub fn random_pure<R: Rng + ?Sized>(d: usize, rng: &mut R) -> PureState {
    let v: CVector = ginibre(d, 1, rng).column(0).into_owned();
    PureState::normalized(v).expect("Gaussian vector is almost surely non-zero")
}

/// Random mixed state `G G^dagger / tr`, rank `rank`.
pub fn random_density<R: Rng + ?Sized>(d: usize, rank: usize, rng: &mut R) -> DensityMatrix {
    let g = ginibre(d, rank.max(1), rng);
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    let m = m / cr(tr);
    DensityMatrix::from_trusted((&m + m.adjoint()) * cr(0.5))
}

/// Uniform point on the probability simplex.
pub fn random_pmf<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ProbVec {
    let w: Vec<f64> = (0..n).map(|_| -rng.random::<f64>().max(1e-300).ln()).collect();
    ProbVec::normalized(&w).expect("exponential weights are positive")
}
