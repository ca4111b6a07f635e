//! Complex Hermitian linear algebra and entropic functionals.
//!
//! All entropies are in bits. Composite systems use the convention that the
//! leftmost factor is the most significant digit of the row-major index, so
//! for dims `[d0, d1, d2]` the basis state `|i j k>` sits at
//! `(i * d1 + j) * d2 + k`.

pub mod random;

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{check_range, Error, Result};

pub use nalgebra::Complex;

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Hermiticity tolerance.
pub const TAU_HERM: f64 = 1e-9;
/// Trace / normalization tolerance.
pub const TAU_TR: f64 = 1e-9;
/// Allowed negative eigenvalue for a PSD operator.
pub const TAU_PSD: f64 = 1e-10;
/// General numeric comparison tolerance.
pub const TAU_NUM: f64 = 1e-8;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

#[inline]
pub fn cr(re: f64) -> C64 {
    Complex::new(re, 0.0)
}

pub fn identity(d: usize) -> CMatrix {
    CMatrix::identity(d, d)
}

/// Real diagonal matrix.
pub fn diag(values: &[f64]) -> CMatrix {
    CMatrix::from_diagonal(&CVector::from_iterator(values.len(), values.iter().map(|&v| cr(v))))
}

pub fn pauli_x() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[cr(0.0), cr(1.0), cr(1.0), cr(0.0)])
}

pub fn pauli_y() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[cr(0.0), c(0.0, -1.0), c(0.0, 1.0), cr(0.0)])
}

pub fn pauli_z() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[cr(1.0), cr(0.0), cr(0.0), cr(-1.0)])
}

/// Largest entrywise modulus of `m - m^dagger`.
pub fn hermitian_deviation(m: &CMatrix) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    if a.shape() != b.shape() {
        return f64::INFINITY;
    }
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn symmetrized(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * cr(0.5)
}

/// Eigenvalues of a Hermitian matrix in descending order.
pub fn eigvals_hermitian(m: &CMatrix) -> Result<Vec<f64>> {
    let deviation = hermitian_deviation(m);
    if deviation > TAU_HERM {
        return Err(Error::NonHermitian { deviation });
    }
    let mut vals: Vec<f64> = symmetrized(m).symmetric_eigenvalues().iter().copied().collect();
    vals.sort_by(|a, b| b.total_cmp(a));
    Ok(vals)
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues descending and
/// eigenvectors as the matching columns.
pub fn eigh_hermitian(m: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    let deviation = hermitian_deviation(m);
    if deviation > TAU_HERM {
        return Err(Error::NonHermitian { deviation });
    }
    let eig = SymmetricEigen::new(symmetrized(m));
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = CMatrix::from_fn(n, n, |r, col| eig.eigenvectors[(r, order[col])]);
    Ok((vals, vecs))
}

/// Kronecker product `a ⊗ b`.
pub fn tensor(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Kronecker product of a list of matrices, left to right.
pub fn tensor_all<'a, I: IntoIterator<Item = &'a CMatrix>>(factors: I) -> CMatrix {
    factors
        .into_iter()
        .fold(CMatrix::identity(1, 1), |acc, f| acc.kronecker(f))
}

/// Ordered factor dimensions of a tensor-product space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsystemDims(Vec<usize>);

impl SubsystemDims {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::DimensionMismatch(format!(
                "subsystem dims must be non-empty and positive, got {dims:?}"
            )));
        }
        Ok(Self(dims))
    }

    pub fn bipartite(d_a: usize, d_b: usize) -> Result<Self> {
        Self::new(vec![d_a, d_b])
    }

    pub fn factors(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> usize {
        self.0.iter().product()
    }

    pub fn check(&self, dim: usize) -> Result<()> {
        if self.total() == dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(format!(
                "factors {:?} multiply to {}, state has dim {}",
                self.0,
                self.total(),
                dim
            )))
        }
    }

    /// Row-major digits of a composite index.
    pub(crate) fn digits(&self, mut index: usize, out: &mut [usize]) {
        for (slot, &d) in out.iter_mut().zip(self.0.iter()).rev() {
            *slot = index % d;
            index /= d;
        }
    }

    pub(crate) fn compose(&self, digits: &[usize]) -> usize {
        digits
            .iter()
            .zip(self.0.iter())
            .fold(0, |acc, (&x, &d)| acc * d + x)
    }
}

/// A density operator: Hermitian, positive semidefinite, unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    m: CMatrix,
}

impl DensityMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        if !m.is_square() || m.nrows() == 0 {
            return Err(Error::InvalidState(format!("matrix shape {:?} is not square", m.shape())));
        }
        let deviation = hermitian_deviation(&m);
        if deviation > TAU_HERM {
            return Err(Error::InvalidState(format!("not Hermitian (deviation {deviation:.3e})")));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > TAU_TR || tr.im.abs() > TAU_TR {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let min = symmetrized(&m).symmetric_eigenvalues().min();
        if min < -TAU_PSD {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:.3e}")));
        }
        Ok(Self { m })
    }

    /// Wraps a matrix known to be a valid state (outputs of CPTP maps on
    /// valid states) without re-running the eigen check.
    pub(crate) fn from_trusted(m: CMatrix) -> Self {
        debug_assert!(m.is_square());
        Self { m }
    }

    pub fn from_pure(psi: &PureState) -> Self {
        Self { m: psi.projector() }
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self {
            m: CMatrix::identity(d, d) * cr(1.0 / d as f64),
        }
    }

    pub fn from_diagonal(probs: &[f64]) -> Result<Self> {
        Self::new(diag(probs))
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix {
        self.m
    }

    /// Spectrum, descending, clamped to `[0, 1]`.
    pub fn spectrum(&self) -> Vec<f64> {
        let mut vals: Vec<f64> = symmetrized(&self.m)
            .symmetric_eigenvalues()
            .iter()
            .map(|v| v.clamp(0.0, 1.0))
            .collect();
        vals.sort_by(|a, b| b.total_cmp(a));
        vals
    }

    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        Self { m: tensor(&self.m, &other.m) }
    }
}

/// A normalized state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amps: CVector,
}

impl PureState {
    pub fn new(amps: CVector) -> Result<Self> {
        let norm = amps.norm();
        if amps.is_empty() || (norm - 1.0).abs() > TAU_TR {
            return Err(Error::InvalidState(format!("state vector norm {norm} differs from 1")));
        }
        Ok(Self { amps })
    }

    /// Normalizes an arbitrary non-zero vector.
    pub fn normalized(amps: CVector) -> Result<Self> {
        let norm = amps.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidState("cannot normalize a zero vector".into()));
        }
        Ok(Self { amps: amps / cr(norm) })
    }

    pub fn basis(d: usize, i: usize) -> Self {
        let mut amps = CVector::zeros(d);
        amps[i] = cr(1.0);
        Self { amps }
    }

    /// Schmidt-form bipartite state `sum_i sqrt(lambda_i) |i>|i>`.
    pub fn schmidt(coefficients: &[f64]) -> Result<Self> {
        let d = coefficients.len();
        let mut amps = CVector::zeros(d * d);
        for (i, &l) in coefficients.iter().enumerate() {
            if l < -TAU_TR {
                return Err(Error::InvalidState(format!("negative Schmidt weight {l}")));
            }
            amps[i * d + i] = cr(l.max(0.0).sqrt());
        }
        Self::new(amps)
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amps
    }

    pub fn projector(&self) -> CMatrix {
        &self.amps * self.amps.adjoint()
    }

    pub fn apply(&self, u: &CMatrix) -> Result<PureState> {
        if u.ncols() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "operator has {} columns, state has dim {}",
                u.ncols(),
                self.dim()
            )));
        }
        PureState::new(u * &self.amps)
    }
}

/// A probability mass function.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbVec(Vec<f64>);

impl ProbVec {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidPmf("empty".into()));
        }
        if let Some(bad) = probs.iter().find(|p| !p.is_finite() || **p < -TAU_TR) {
            return Err(Error::InvalidPmf(format!("entry {bad} is negative or not finite")));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > TAU_TR {
            return Err(Error::InvalidPmf(format!("entries sum to {sum}")));
        }
        Ok(Self(probs.into_iter().map(|p| p.max(0.0)).collect()))
    }

    pub fn uniform(n: usize) -> Self {
        Self(vec![1.0 / n as f64; n])
    }

    /// Rescales non-negative weights to unit sum.
    pub fn normalized(weights: &[f64]) -> Result<Self> {
        let sum: f64 = weights.iter().sum();
        if sum.is_nan() || sum <= 0.0 || weights.iter().any(|w| *w < 0.0) {
            return Err(Error::InvalidPmf(format!("cannot normalize {weights:?}")));
        }
        Ok(Self(weights.iter().map(|w| w / sum).collect()))
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `-sum p log2 p` over a list of weights, `0 log 0 = 0`, entries clamped to `[0, 1]`.
pub fn entropy_of_spectrum(values: &[f64]) -> f64 {
    values
        .iter()
        .map(|v| v.clamp(0.0, 1.0))
        .filter(|&v| v > 0.0)
        .map(|v| -v * v.log2())
        .sum()
}

/// Von Neumann entropy in bits.
pub fn entropy_vn(rho: &DensityMatrix) -> f64 {
    entropy_of_spectrum(&rho.spectrum())
}

/// Von Neumann entropy of an unvalidated matrix; rejects anything that is not a state.
pub fn entropy_of_matrix(m: &CMatrix) -> Result<f64> {
    DensityMatrix::new(m.clone()).map(|rho| entropy_vn(&rho))
}

pub fn shannon_entropy(p: &ProbVec) -> f64 {
    entropy_of_spectrum(p.probs())
}

/// Binary entropy `H(x, 1 - x)`.
pub fn h2(x: f64) -> Result<f64> {
    check_range("x", x, 0.0, 1.0, "[0, 1]")?;
    Ok(entropy_of_spectrum(&[x, 1.0 - x]))
}

/// `a * b = (1 - a) b + a (1 - b)`, the flip probability of two cascaded
/// binary symmetric channels.
pub fn binary_convolution(a: f64, b: f64) -> Result<f64> {
    check_range("a", a, 0.0, 1.0, "[0, 1]")?;
    check_range("b", b, 0.0, 1.0, "[0, 1]")?;
    Ok((1.0 - a) * b + a * (1.0 - b))
}

/// Trace out every factor not listed in `keep`. Kept factors stay in their
/// original order.
pub fn partial_trace_matrix(m: &CMatrix, dims: &SubsystemDims, keep: &[usize]) -> Result<CMatrix> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("partial trace of a non-square matrix".into()));
    }
    dims.check(m.nrows())?;
    let n = dims.len();
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if kept.len() != keep.len() || kept.iter().any(|&k| k >= n) {
        return Err(Error::DimensionMismatch(format!(
            "keep set {keep:?} invalid for {n} factors"
        )));
    }
    let traced: Vec<usize> = (0..n).filter(|i| !kept.contains(i)).collect();
    // an empty factor list has total dimension 1
    let kept_dims = SubsystemDims(kept.iter().map(|&k| dims.0[k]).collect());
    let traced_dims = SubsystemDims(traced.iter().map(|&k| dims.0[k]).collect());
    let dk = kept_dims.total();
    let dt = traced_dims.total();

    let mut out = CMatrix::zeros(dk, dk);
    let mut kd_r = vec![0; kept.len()];
    let mut kd_c = vec![0; kept.len()];
    let mut td = vec![0; traced.len()];
    let mut full_r = vec![0; n];
    let mut full_c = vec![0; n];
    for r in 0..dk {
        kept_dims.digits(r, &mut kd_r);
        for col in 0..dk {
            kept_dims.digits(col, &mut kd_c);
            let mut acc = cr(0.0);
            for t in 0..dt {
                traced_dims.digits(t, &mut td);
                for (slot, &k) in kept.iter().enumerate() {
                    full_r[k] = kd_r[slot];
                    full_c[k] = kd_c[slot];
                }
                for (slot, &k) in traced.iter().enumerate() {
                    full_r[k] = td[slot];
                    full_c[k] = td[slot];
                }
                acc += m[(dims.compose(&full_r), dims.compose(&full_c))];
            }
            out[(r, col)] = acc;
        }
    }
    Ok(out)
}

pub fn partial_trace(rho: &DensityMatrix, dims: &SubsystemDims, keep: &[usize]) -> Result<DensityMatrix> {
    partial_trace_matrix(rho.matrix(), dims, keep).map(DensityMatrix::from_trusted)
}

/// Transpose of a single tensor factor.
pub fn partial_transpose(m: &CMatrix, dims: &SubsystemDims, factor: usize) -> Result<CMatrix> {
    dims.check(m.nrows())?;
    if factor >= dims.len() {
        return Err(Error::DimensionMismatch(format!("no factor {factor} in {:?}", dims.0)));
    }
    let n = m.nrows();
    let mut out = CMatrix::zeros(n, n);
    let mut dr = vec![0; dims.len()];
    let mut dc = vec![0; dims.len()];
    for r in 0..n {
        dims.digits(r, &mut dr);
        for col in 0..n {
            dims.digits(col, &mut dc);
            std::mem::swap(&mut dr[factor], &mut dc[factor]);
            out[(dims.compose(&dr), dims.compose(&dc))] = m[(r, col)];
            std::mem::swap(&mut dr[factor], &mut dc[factor]);
        }
    }
    Ok(out)
}

/// `I(A;B) = H(A) + H(B) - H(AB)` for a bipartite state.
pub fn mutual_info(rho_ab: &DensityMatrix, dims: &SubsystemDims) -> Result<f64> {
    if dims.len() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "mutual information needs two factors, got {:?}",
            dims.0
        )));
    }
    dims.check(rho_ab.dim())?;
    let rho_a = partial_trace(rho_ab, dims, &[0])?;
    let rho_b = partial_trace(rho_ab, dims, &[1])?;
    Ok(entropy_vn(&rho_a) + entropy_vn(&rho_b) - entropy_vn(rho_ab))
}

/// `(1/sqrt d) sum_i |i>|i>`.
pub fn maximally_entangled(d: usize) -> PureState {
    let mut amps = CVector::zeros(d * d);
    let a = cr(1.0 / (d as f64).sqrt());
    for i in 0..d {
        amps[i * d + i] = a;
    }
    PureState { amps }
}
