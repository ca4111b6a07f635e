//! Quantum channels: Kraus and Choi representations, measure-and-prepare
//! channels, the qubit depolarizing family, and entanglement-breaking
//! certification.

pub mod file;
mod measure_prepare;

pub use measure_prepare::{measure_prepare_to_kraus, MeasurePrepareChannel};

use crate::error::{check_range, Error, Result};
use crate::qnum::{
    cr, eigvals_hermitian, identity, max_abs_diff, maximally_entangled, partial_trace_matrix,
    partial_transpose, pauli_x, pauli_y, pauli_z, tensor, CMatrix, DensityMatrix, SubsystemDims,
    TAU_NUM,
};

/// A CPTP map given by Kraus operators `K_i` (`dim_out x dim_in`) with
/// `sum K_i^dagger K_i = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    dim_in: usize,
    dim_out: usize,
    ops: Vec<CMatrix>,
}

impl KrausChannel {
    pub fn new(ops: Vec<CMatrix>) -> Result<Self> {
        let first = ops
            .first()
            .ok_or_else(|| Error::InvalidChannel("no Kraus operators".into()))?;
        let (dim_out, dim_in) = first.shape();
        if dim_in == 0 || dim_out == 0 {
            return Err(Error::InvalidChannel("zero-sized Kraus operator".into()));
        }
        if let Some(k) = ops.iter().find(|k| k.shape() != (dim_out, dim_in)) {
            return Err(Error::InvalidChannel(format!(
                "Kraus operator of shape {:?}, expected {:?}",
                k.shape(),
                (dim_out, dim_in)
            )));
        }
        let ch = Self { dim_in, dim_out, ops };
        let dev = ch.completeness_deviation();
        if dev > TAU_NUM {
            return Err(Error::InvalidChannel(format!(
                "Kraus operators are not trace preserving (deviation {dev:.3e})"
            )));
        }
        Ok(ch)
    }

    pub fn identity(d: usize) -> Self {
        Self {
            dim_in: d,
            dim_out: d,
            ops: vec![identity(d)],
        }
    }

    /// Conjugation by a unitary or isometry `V` (`rho -> V rho V^dagger`).
    pub fn isometry(v: CMatrix) -> Result<Self> {
        Self::new(vec![v])
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn kraus_ops(&self) -> &[CMatrix] {
        &self.ops
    }

    /// Largest entry of `sum K^dagger K - 1`.
    pub fn completeness_deviation(&self) -> f64 {
        let sum = self
            .ops
            .iter()
            .fold(CMatrix::zeros(self.dim_in, self.dim_in), |acc, k| acc + k.adjoint() * k);
        max_abs_diff(&sum, &identity(self.dim_in))
    }

    /// `self` after `first`: Kraus operators `L_j K_i`.
    pub fn compose_after(&self, first: &KrausChannel) -> Result<KrausChannel> {
        if first.dim_out != self.dim_in {
            return Err(Error::DimensionMismatch(format!(
                "cannot feed a {}-dim output into a {}-dim input",
                first.dim_out, self.dim_in
            )));
        }
        let ops = self
            .ops
            .iter()
            .flat_map(|l| first.ops.iter().map(move |k| l * k))
            .collect();
        Ok(KrausChannel {
            dim_in: first.dim_in,
            dim_out: self.dim_out,
            ops,
        })
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.dim_in {
            return Err(Error::DimensionMismatch(format!(
                "channel input dim {} but state dim {}",
                self.dim_in,
                rho.dim()
            )));
        }
        Ok(DensityMatrix::from_trusted(self.apply_matrix(rho.matrix())))
    }

    pub(crate) fn apply_matrix(&self, m: &CMatrix) -> CMatrix {
        self.ops
            .iter()
            .fold(CMatrix::zeros(self.dim_out, self.dim_out), |acc, k| acc + k * m * k.adjoint())
    }

    /// Applies the channel to factor `target` of a composite state and the
    /// identity elsewhere. The output lives on `dims` with factor `target`
    /// replaced by `dim_out`.
    pub fn apply_on_factor(
        &self,
        rho: &DensityMatrix,
        dims: &SubsystemDims,
        target: usize,
    ) -> Result<DensityMatrix> {
        dims.check(rho.dim())?;
        let factors = dims.factors();
        if target >= factors.len() || factors[target] != self.dim_in {
            return Err(Error::DimensionMismatch(format!(
                "target factor {target} of {factors:?} does not match channel input dim {}",
                self.dim_in
            )));
        }
        let left: usize = factors[..target].iter().product();
        let right: usize = factors[target + 1..].iter().product();
        let lifted = self.lift(left, right);
        Ok(DensityMatrix::from_trusted(lifted.apply_matrix(rho.matrix())))
    }

    /// Output dims after `apply_on_factor`.
    pub fn output_dims(&self, dims: &SubsystemDims, target: usize) -> Result<SubsystemDims> {
        let mut f = dims.factors().to_vec();
        if target >= f.len() {
            return Err(Error::DimensionMismatch(format!("no factor {target}")));
        }
        f[target] = self.dim_out;
        SubsystemDims::new(f)
    }

    /// `id_left (x) self (x) id_right`.
    pub(crate) fn lift(&self, left: usize, right: usize) -> KrausChannel {
        let il = identity(left);
        let ir = identity(right);
        KrausChannel {
            dim_in: left * self.dim_in * right,
            dim_out: left * self.dim_out * right,
            ops: self.ops.iter().map(|k| tensor(&tensor(&il, k), &ir)).collect(),
        }
    }
}

/// Normalized Choi state `(id (x) N)(|Phi><Phi|)` on reference (x) output.
#[derive(Debug, Clone)]
pub struct ChoiMatrix {
    state: DensityMatrix,
    dims: SubsystemDims,
}

impl ChoiMatrix {
    pub fn state(&self) -> &DensityMatrix {
        &self.state
    }

    pub fn dims(&self) -> &SubsystemDims {
        &self.dims
    }

    pub fn dim_in(&self) -> usize {
        self.dims.factors()[0]
    }

    /// Channel action recovered from the Choi state:
    /// `N(rho) = d_in tr_R[(rho^T (x) 1) J]`.
    pub fn reconstruct_apply(&self, rho: &DensityMatrix) -> Result<CMatrix> {
        let d_in = self.dim_in();
        let d_out = self.dims.factors()[1];
        if rho.dim() != d_in {
            return Err(Error::DimensionMismatch(format!(
                "Choi input dim {d_in} but state dim {}",
                rho.dim()
            )));
        }
        let lhs = tensor(&rho.matrix().transpose(), &identity(d_out));
        let prod = lhs * self.state.matrix();
        Ok(partial_trace_matrix(&prod, &self.dims, &[1])? * cr(d_in as f64))
    }
}

pub fn choi(ch: &KrausChannel) -> ChoiMatrix {
    let d = ch.dim_in;
    let phi = DensityMatrix::from_pure(&maximally_entangled(d));
    let dims = SubsystemDims::new(vec![d, d]).expect("positive dims");
    let state = ch
        .apply_on_factor(&phi, &dims, 1)
        .expect("maximally entangled state matches channel input");
    ChoiMatrix {
        state,
        dims: SubsystemDims::new(vec![d, ch.dim_out]).expect("positive dims"),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EbVerdict {
    Breaking,
    NotBreaking,
}

impl std::fmt::Display for EbVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            EbVerdict::Breaking => "Breaking",
            EbVerdict::NotBreaking => "NotBreaking",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EbCertificate {
    pub verdict: EbVerdict,
    /// Smallest eigenvalue of the partially transposed Choi state.
    pub min_pt_eigenvalue: f64,
}

/// PPT test on the Choi state. Positivity under partial transpose is
/// equivalent to separability only for 2x2 and 2x3 systems; other
/// dimensions are refused.
pub fn is_entanglement_breaking_qubit(ch: &KrausChannel) -> Result<EbCertificate> {
    match (ch.dim_in, ch.dim_out) {
        (2, 2) | (2, 3) | (3, 2) => {}
        (a, b) => {
            return Err(Error::UnsupportedDimension(format!(
                "PPT certificate needs a 2x2 or 2x3 Choi state, channel is {a} -> {b}"
            )))
        }
    }
    let j = choi(ch);
    let pt = partial_transpose(j.state.matrix(), &j.dims, 1)?;
    let vals = eigvals_hermitian(&pt)?;
    let min = *vals.last().expect("non-empty spectrum");
    Ok(EbCertificate {
        verdict: if min >= -TAU_NUM {
            EbVerdict::Breaking
        } else {
            EbVerdict::NotBreaking
        },
        min_pt_eigenvalue: min,
    })
}

/// Qubit depolarizing channel `rho -> (1 - eps) rho + eps 1/2` as a Pauli
/// mixture.
pub fn depolarizing(eps: f64) -> Result<KrausChannel> {
    check_range("eps", eps, 0.0, 1.0, "[0, 1]")?;
    let a = (1.0 - 3.0 * eps / 4.0).max(0.0).sqrt();
    let b = (eps / 4.0).sqrt();
    KrausChannel::new(vec![
        identity(2) * cr(a),
        pauli_x() * cr(b),
        pauli_y() * cr(b),
        pauli_z() * cr(b),
    ])
}

/// Random channel from a Haar isometry `C^d_in -> C^d_out (x) C^n_kraus`.
pub fn random_channel<R: rand::Rng + ?Sized>(d_in: usize, d_out: usize, n_kraus: usize, rng: &mut R) -> KrausChannel {
    let k = n_kraus.max(d_in.div_ceil(d_out)).max(1);
    let v = crate::qnum::random::haar_isometry(d_out * k, d_in, rng);
    let ops = (0..k)
        .map(|j| CMatrix::from_fn(d_out, d_in, |a, col| v[(a * k + j, col)]))
        .collect();
    KrausChannel::new(ops).expect("Stinespring isometry gives a CPTP map")
}
