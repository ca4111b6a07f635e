//! Rate triples of an encoding ensemble, the relabeling that turns the
//! trapezoid corner into a rectangle corner, and time sharing.

use ebcap::channels::depolarizing;
use ebcap::depol::superposition_ensemble;
use ebcap::region::{rate_triple, rectangle_corner, relabel_for_trapezoid, time_share, trapezoid_corners};

fn main() -> ebcap::Result<()> {
    let ch = depolarizing(0.7)?;
    let ens = superposition_ensemble(0.2)?;
    let t = rate_triple(&ch, &ens)?;
    println!("I(X;B) = {:.6}  I(G2;B|X) = {:.6}  I(XG2;B) = {:.6}", t.ixb, t.ig2b_given_x, t.ixg2b);
    println!("chain rule residual {:.2e}", t.ixg2b - t.ixb - t.ig2b_given_x);

    let (p0, p1) = trapezoid_corners(&ch, &ens)?;
    let relabeled = relabel_for_trapezoid(&ens);
    println!("P0 = {p0:?}");
    println!("P1 = {p1:?}, relabeled corner = {:?}", rectangle_corner(&ch, &relabeled)?);

    let classical = superposition_ensemble(0.0)?;
    let assisted = superposition_ensemble(0.5)?;
    let (c0, c1) = (rectangle_corner(&ch, &classical)?, rectangle_corner(&ch, &assisted)?);
    for lam in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let mixed = rectangle_corner(&ch, &time_share(&classical, &assisted, lam)?)?;
        let line = c0.lerp(c1, lam);
        println!(
            "lambda = {lam:.2}: time-shared ({:.6}, {:.6})  interpolated ({:.6}, {:.6})",
            mixed.guaranteed, mixed.excess, line.guaranteed, line.excess
        );
    }
    Ok(())
}
