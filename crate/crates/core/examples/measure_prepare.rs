//! A measure-and-prepare channel built from a tetrahedral POVM, converted to
//! Kraus form and certified entanglement breaking.

use ebcap::channels::{is_entanglement_breaking_qubit, measure_prepare_to_kraus, MeasurePrepareChannel};
use ebcap::qnum::{c, cr, identity, pauli_x, pauli_y, pauli_z, DensityMatrix, PureState, CMatrix, CVector};

fn bloch(x: f64, y: f64, z: f64) -> CMatrix {
    (identity(2) + pauli_x() * cr(x) + pauli_y() * cr(y) + pauli_z() * cr(z)) * cr(0.5)
}

fn main() -> ebcap::Result<()> {
    let s = 1.0 / 3f64.sqrt();
    let dirs = [(s, s, s), (s, -s, -s), (-s, s, -s), (-s, -s, s)];
    let povm: Vec<CMatrix> = dirs.iter().map(|&(x, y, z)| bloch(x, y, z) * cr(0.5)).collect();
    // one preparation per outcome
    let zero = DensityMatrix::from_pure(&PureState::basis(2, 0));
    let one = DensityMatrix::from_pure(&PureState::basis(2, 1));
    let plus = DensityMatrix::from_pure(&PureState::normalized(CVector::from_vec(vec![c(1.0, 0.0), c(1.0, 0.0)]))?);
    let preps = vec![zero.clone(), one.clone(), zero, plus];

    let mp = MeasurePrepareChannel::new(povm, preps)?;
    let ch = measure_prepare_to_kraus(&mp)?;
    println!("{} Kraus operators, completeness deviation {:.2e}", ch.kraus_ops().len(), ch.completeness_deviation());
    let cert = is_entanglement_breaking_qubit(&ch)?;
    println!("{} (min PT eigenvalue {:.6})", cert.verdict, cert.min_pt_eigenvalue);
    Ok(())
}
