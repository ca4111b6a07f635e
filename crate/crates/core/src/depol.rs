//! Closed-form region of the qubit depolarizing channel
//! `N(rho) = (1 - eps) rho + eps 1/2`.
//!
//! With resource `sqrt(1 - alpha)|00> + sqrt(alpha)|11>`, uniform `X` and
//! encoders `X^x`, every corner of the region is
//!
//! ```text
//! R  = 1 - h2(alpha * eps/2)
//! R' = h2(alpha) + h2(alpha * eps/2) - H(joint output spectrum)
//! ```
//!
//! for `alpha` in `[0, 1/2]`. `alpha = 0` gives the unassisted capacity and
//! `alpha = 1/2` the entanglement-assisted capacity; mixing those two codes
//! gives the time-division segment. The channel is entanglement breaking
//! iff `eps >= 2/3`; below that the region is only an inner bound.

use serde::{Deserialize, Serialize};

use crate::error::{check_range, Result};
use crate::channels::KrausChannel;
use crate::qnum::{binary_convolution, entropy_of_spectrum, h2, pauli_x, ProbVec, TAU_NUM};
use crate::region::{EncodingEnsemble, FrontierPoint, RateFrontier, RatePoint, Source};

/// Threshold `max vertical gap > TAU_GAP` for a strict advantage over time division.
pub const TAU_GAP: f64 = 1e-6;

pub const EB_THRESHOLD: f64 = 2.0 / 3.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DepolParams {
    eps: f64,
    alpha: f64,
}

impl DepolParams {
    pub fn new(eps: f64, alpha: f64) -> Result<Self> {
        check_range("eps", eps, 0.0, 1.0, "[0, 1]")?;
        check_range("alpha", alpha, 0.0, 0.5, "[0, 1/2]")?;
        Ok(Self { eps, alpha })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn entanglement_breaking(&self) -> bool {
        is_entanglement_breaking(self.eps)
    }
}

pub fn is_entanglement_breaking(eps: f64) -> bool {
    eps >= EB_THRESHOLD - TAU_NUM
}

/// Whether the swept region is the capacity region or only achievable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionStatus {
    CapacityRegion,
    InnerBoundOnly,
}

impl RegionStatus {
    pub fn for_eps(eps: f64) -> Self {
        if is_entanglement_breaking(eps) {
            RegionStatus::CapacityRegion
        } else {
            RegionStatus::InnerBoundOnly
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            RegionStatus::CapacityRegion => "capacity region (entanglement-breaking channel)",
            RegionStatus::InnerBoundOnly => "achievable inner bound only (channel not entanglement breaking)",
        }
    }
}

/// Spectrum of `(id (x) N)(psi)` for `psi = sqrt(1-alpha)|00> + sqrt(alpha)|11>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointSpectrum(pub [f64; 4]);

impl JointSpectrum {
    pub fn values(&self) -> &[f64; 4] {
        &self.0
    }

    pub fn entropy(&self) -> f64 {
        entropy_of_spectrum(&self.0)
    }
}

/// `(alpha eps/2, (1-alpha) eps/2, 1/2 - eps/4 - sqrt(D), 1/2 - eps/4 + sqrt(D))`
/// with `D = eps^2/16 - (1-alpha) alpha eps (1 - 3 eps/4) + (1-eps)/4`,
/// negative `D` clamped to zero.
pub fn joint_output_spectrum(p: DepolParams) -> JointSpectrum {
    let (e, a) = (p.eps, p.alpha);
    let disc = e * e / 16.0 - (1.0 - a) * a * e * (1.0 - 0.75 * e) + (1.0 - e) / 4.0;
    let root = disc.max(0.0).sqrt();
    let mid = 0.5 - e / 4.0;
    JointSpectrum([a * e / 2.0, (1.0 - a) * e / 2.0, mid - root, mid + root])
}

pub fn closed_form_point(p: DepolParams) -> RatePoint {
    let flip = binary_convolution(p.alpha, p.eps / 2.0).expect("params validated");
    let hb = h2(flip).expect("convolution stays in [0, 1]");
    let r = 1.0 - hb;
    let rp = h2(p.alpha).expect("alpha in range") + hb - joint_output_spectrum(p).entropy();
    RatePoint::new(r.max(0.0), rp.max(0.0))
}

/// `C(N) = 1 - h2(eps/2)`.
pub fn unassisted_capacity(eps: f64) -> Result<f64> {
    Ok(closed_form_point(DepolParams::new(eps, 0.0)?).guaranteed)
}

/// `C_EA(N) = 2 - H(1 - 3eps/4, eps/4, eps/4, eps/4)`.
pub fn ea_capacity(eps: f64) -> Result<f64> {
    Ok(closed_form_point(DepolParams::new(eps, 0.5)?).excess)
}

/// `n` evenly spaced points on `[lo, hi]` (a single point gives `lo`).
pub fn linear_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect(),
    }
}

pub fn alpha_grid(n: usize) -> Vec<f64> {
    linear_grid(0.0, 0.5, n)
}

pub fn lambda_grid(n: usize) -> Vec<f64> {
    linear_grid(0.0, 1.0, n)
}

/// Points `((1 - lam) C, lam C_EA)`.
pub fn time_division_frontier(eps: f64, lambdas: &[f64]) -> Result<RateFrontier> {
    let c = unassisted_capacity(eps)?;
    let c_ea = ea_capacity(eps)?;
    let points = lambdas
        .iter()
        .map(|&lam| {
            check_range("lambda", lam, 0.0, 1.0, "[0, 1]")?;
            Ok(FrontierPoint {
                rate: RatePoint::new((1.0 - lam) * c, lam * c_ea),
                source: Source::TimeDivision { lambda: lam },
            })
        })
        .collect::<Result<Vec<_>>>()?;
    RateFrontier::new(points)
}

/// Closed-form corners over an `alpha` grid and their hull.
pub fn spc_frontier(eps: f64, alphas: &[f64]) -> Result<RateFrontier> {
    let points = alphas
        .iter()
        .map(|&alpha| {
            Ok(FrontierPoint {
                rate: closed_form_point(DepolParams::new(eps, alpha)?),
                source: Source::ClosedForm { alpha },
            })
        })
        .collect::<Result<Vec<_>>>()?;
    RateFrontier::new(points)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub eps: f64,
    pub unassisted_capacity: f64,
    pub ea_capacity: f64,
    /// `max_R (R'_spc(R) - R'_td(R))` over the superposition hull.
    pub max_vertical_gap: f64,
    pub argmax_alpha: f64,
    pub argmax_r: f64,
    /// True when time division matches the superposition hull within `TAU_GAP`.
    pub dominated: bool,
    pub status: RegionStatus,
}

/// `R'` on the time-division segment at guaranteed rate `r`.
pub fn time_division_excess(c: f64, c_ea: f64, r: f64) -> f64 {
    if c <= 0.0 {
        return if r <= 0.0 { c_ea } else { 0.0 };
    }
    (c_ea * (1.0 - r / c)).max(0.0)
}

/// Vertical gap between the superposition hull and the time-division
/// segment. The hull is concave and the segment linear, so the maximum sits
/// at a hull vertex.
pub fn gap_report(eps: f64, alphas: &[f64]) -> Result<GapReport> {
    let spc = spc_frontier(eps, alphas)?;
    let c = unassisted_capacity(eps)?;
    let c_ea = ea_capacity(eps)?;
    let mut best = (0.0, 0.0, 0.0);
    for fp in spc.hull_points() {
        let gap = fp.rate.excess - time_division_excess(c, c_ea, fp.rate.guaranteed);
        if gap > best.0 {
            let alpha = match fp.source {
                Source::ClosedForm { alpha } => alpha,
                _ => f64::NAN,
            };
            best = (gap, alpha, fp.rate.guaranteed);
        }
    }
    Ok(GapReport {
        eps,
        unassisted_capacity: c,
        ea_capacity: c_ea,
        max_vertical_gap: best.0,
        argmax_alpha: best.1,
        argmax_r: best.2,
        dominated: best.0 <= TAU_GAP,
        status: RegionStatus::for_eps(eps),
    })
}

/// Spectrum as a pmf.
pub fn spectrum_pmf(s: &JointSpectrum) -> Result<ProbVec> {
    ProbVec::new(s.0.to_vec())
}

/// Uniform `X`, resource `sqrt(1-alpha)|00> + sqrt(alpha)|11>`, encoders
/// `1` and `X`. Its rectangle corner is `closed_form_point` for every channel
/// parameter.
pub fn superposition_ensemble(alpha: f64) -> Result<EncodingEnsemble> {
    check_range("alpha", alpha, 0.0, 0.5, "[0, 1/2]")?;
    EncodingEnsemble::new(
        ProbVec::uniform(2),
        vec![1.0 - alpha, alpha],
        vec![KrausChannel::identity(2), KrausChannel::isometry(pauli_x())?],
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    // scalar -sum p log2 p, written out independently of the library
    fn h(ps: &[f64]) -> f64 {
        ps.iter().filter(|&&p| p > 0.0).map(|&p| -p * p.log2()).sum()
    }

    #[test]
    fn spectrum_degenerations() {
        for eps in [0.0, 0.3, 0.7, 1.0] {
            let s = joint_output_spectrum(DepolParams::new(eps, 0.0).unwrap()).0;
            let expect = [0.0, eps / 2.0, 0.0, 1.0 - eps / 2.0];
            for (a, b) in s.iter().zip(expect) {
                assert!((a - b).abs() < 1e-12, "eps={eps}: {s:?}");
            }
            let s = joint_output_spectrum(DepolParams::new(eps, 0.5).unwrap()).0;
            let expect = [eps / 4.0, eps / 4.0, eps / 4.0, 1.0 - 0.75 * eps];
            for (a, b) in s.iter().zip(expect) {
                assert!((a - b).abs() < 1e-12, "eps={eps}: {s:?}");
            }
        }
    }

    #[test]
    fn closed_form_examples() {
        let p = closed_form_point(DepolParams::new(0.7, 0.0).unwrap());
        assert!((p.guaranteed - (1.0 - h(&[0.35, 0.65]))).abs() < 1e-12);
        assert!((p.guaranteed - 0.0659319446).abs() < 1e-9);
        assert!(p.excess.abs() < 1e-12);
        let p = closed_form_point(DepolParams::new(0.7, 0.5).unwrap());
        assert!(p.guaranteed.abs() < 1e-12);
        assert!((p.excess - (2.0 - h(&[0.475, 0.175, 0.175, 0.175]))).abs() < 1e-12);
        assert!((p.excess - 0.1697).abs() < 1e-4);
    }

    #[test]
    fn capacities() {
        assert!((unassisted_capacity(0.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(unassisted_capacity(1.0).unwrap().abs() < 1e-15);
        assert!((ea_capacity(0.0).unwrap() - 2.0).abs() < 1e-15);
        assert!(ea_capacity(1.0).unwrap().abs() < 1e-12);
        assert!(unassisted_capacity(1.2).is_err());
    }

    #[test]
    fn time_division_examples() {
        let c = unassisted_capacity(0.7).unwrap();
        let c_ea = ea_capacity(0.7).unwrap();
        let f = time_division_frontier(0.7, &[0.0, 0.5, 1.0]).unwrap();
        let pts: Vec<_> = f.points().iter().map(|p| p.rate).collect();
        assert_eq!(pts[0], RatePoint::new(c, 0.0));
        assert_eq!(pts[2], RatePoint::new(0.0, c_ea));
        assert!((pts[1].guaranteed - 0.0330).abs() < 1e-4 && (pts[1].excess - 0.0849).abs() < 1e-4);
        assert_eq!(f.hull().vertices().len(), 2);
        assert!(time_division_frontier(0.7, &[1.5]).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(DepolParams::new(0.7, 0.6).is_err());
        assert!(DepolParams::new(-0.1, 0.2).is_err());
        assert!(DepolParams::new(0.7, 0.2).unwrap().entanglement_breaking());
        assert!(!DepolParams::new(0.5, 0.2).unwrap().entanglement_breaking());
        assert!(spc_frontier(0.7, &[]).is_err());
    }

    #[test]
    fn gap_examples() {
        let g = gap_report(1.0, &alpha_grid(64)).unwrap();
        assert!(g.max_vertical_gap.abs() < 1e-12 && g.dominated);
        let g = gap_report(0.7, &alpha_grid(512)).unwrap();
        assert!(g.max_vertical_gap > TAU_GAP && !g.dominated);
        assert!(g.argmax_alpha > 0.0 && g.argmax_alpha < 0.5);
        let g = gap_report(EB_THRESHOLD, &alpha_grid(512)).unwrap();
        assert!(!g.dominated);
    }

    #[test]
    fn closed_form_matches_superposition_ensemble() {
        let ch = crate::channels::depolarizing(0.7).unwrap();
        for alpha in [0.0, 0.1, 0.25, 0.5] {
            let ens = superposition_ensemble(alpha).unwrap();
            let got = crate::region::rectangle_corner(&ch, &ens).unwrap();
            let want = closed_form_point(DepolParams::new(0.7, alpha).unwrap());
            assert!((got.guaranteed - want.guaranteed).abs() < 1e-10, "alpha={alpha}");
            assert!((got.excess - want.excess).abs() < 1e-10, "alpha={alpha}");
        }
    }
}
