//! Entropies, partial traces and the mirror identity on small states.

use ebcap::qnum::random::haar_unitary;
use ebcap::qnum::{
    binary_convolution, entropy_vn, h2, identity, maximally_entangled, mutual_info, partial_trace, tensor,
    DensityMatrix, PureState, SubsystemDims,
};
use rand::SeedableRng;

fn main() -> ebcap::Result<()> {
    let epr = DensityMatrix::from_pure(&maximally_entangled(2));
    let dims = SubsystemDims::bipartite(2, 2)?;
    println!("S(EPR)            = {:.6}", entropy_vn(&epr));
    println!("S(tr_B EPR)       = {:.6}", entropy_vn(&partial_trace(&epr, &dims, &[0])?));
    println!("I(A;B) of EPR     = {:.6}", mutual_info(&epr, &dims)?);

    let psi = DensityMatrix::from_pure(&PureState::schmidt(&[0.8, 0.2])?);
    println!("I(A;B) of Schmidt (0.8, 0.2) = {:.6}  (2 h2(0.2) = {:.6})", mutual_info(&psi, &dims)?, 2.0 * h2(0.2)?);

    println!("h2(0.35) = {:.6}, 0.1 * 0.35 = {:.6}", h2(0.35)?, binary_convolution(0.1, 0.35)?);

    // (1 (x) U)|Phi> = (U^T (x) 1)|Phi>
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    let u = haar_unitary(3, &mut rng);
    let phi = maximally_entangled(3);
    let lhs = phi.apply(&tensor(&identity(3), &u))?;
    let rhs = phi.apply(&tensor(&u.transpose(), &identity(3)))?;
    let diff = (lhs.amplitudes() - rhs.amplitudes()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    println!("mirror identity, d = 3: max deviation {diff:.2e}");
    Ok(())
}
