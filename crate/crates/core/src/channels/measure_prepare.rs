use crate::error::{Error, Result};
use crate::qnum::{cr, eigh_hermitian, hermitian_deviation, identity, max_abs_diff, CMatrix, DensityMatrix, TAU_NUM};

use super::KrausChannel;

/// `rho -> sum_y tr[M_y rho] sigma_y`: a POVM followed by preparation of one
/// state per outcome.
#[derive(Debug, Clone)]
pub struct MeasurePrepareChannel {
    povm: Vec<CMatrix>,
    prep_states: Vec<DensityMatrix>,
}

impl MeasurePrepareChannel {
    pub fn new(povm: Vec<CMatrix>, prep_states: Vec<DensityMatrix>) -> Result<Self> {
        let first = povm.first().ok_or_else(|| Error::InvalidPovm("no POVM elements".into()))?;
        let d = first.nrows();
        if povm.len() != prep_states.len() {
            return Err(Error::InvalidPovm(format!(
                "{} POVM elements but {} preparation states",
                povm.len(),
                prep_states.len()
            )));
        }
        let d_out = prep_states[0].dim();
        if prep_states.iter().any(|s| s.dim() != d_out) {
            return Err(Error::InvalidPovm("preparation states differ in dimension".into()));
        }
        let mut sum = CMatrix::zeros(d, d);
        for (y, m) in povm.iter().enumerate() {
            if m.shape() != (d, d) {
                return Err(Error::InvalidPovm(format!("element {y} has shape {:?}", m.shape())));
            }
            let dev = hermitian_deviation(m);
            if dev > TAU_NUM {
                return Err(Error::InvalidPovm(format!("element {y} is not Hermitian ({dev:.3e})")));
            }
            let (vals, _) = eigh_hermitian(m).map_err(|e| Error::InvalidPovm(e.to_string()))?;
            if vals.last().copied().unwrap_or(0.0) < -TAU_NUM {
                return Err(Error::InvalidPovm(format!("element {y} is not positive semidefinite")));
            }
            sum += m;
        }
        let dev = max_abs_diff(&sum, &identity(d));
        if dev > TAU_NUM {
            return Err(Error::InvalidPovm(format!("elements sum to identity only within {dev:.3e}")));
        }
        Ok(Self { povm, prep_states })
    }

    pub fn povm(&self) -> &[CMatrix] {
        &self.povm
    }

    pub fn prep_states(&self) -> &[DensityMatrix] {
        &self.prep_states
    }
}

/// Unit-rank Kraus operators `sqrt(mu_k s_j) |s_j><m_k|` from the spectral
/// decompositions `M_y = sum mu_k |m_k><m_k|` and `sigma_y = sum s_j |s_j><s_j|`.
pub fn measure_prepare_to_kraus(mp: &MeasurePrepareChannel) -> Result<KrausChannel> {
    let mut ops = Vec::new();
    for (m, sigma) in mp.povm.iter().zip(&mp.prep_states) {
        let (mu, mvecs) = eigh_hermitian(m)?;
        let (s, svecs) = eigh_hermitian(sigma.matrix())?;
        for (k, &mu_k) in mu.iter().enumerate() {
            if mu_k <= 0.0 {
                continue;
            }
            let bra = mvecs.column(k).adjoint();
            for (j, &s_j) in s.iter().enumerate() {
                if s_j <= 0.0 {
                    continue;
                }
                let ket = svecs.column(j);
                ops.push(ket * &bra * cr((mu_k * s_j).sqrt()));
            }
        }
    }
    if ops.is_empty() {
        return Err(Error::InvalidPovm("channel has no non-zero Kraus operators".into()));
    }
    KrausChannel::new(ops).map_err(|e| Error::InvalidPovm(e.to_string()))
}
