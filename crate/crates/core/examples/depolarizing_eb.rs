//! PPT certificate for the depolarizing channel across the threshold 2/3.

use ebcap::channels::{choi, depolarizing, is_entanglement_breaking_qubit};

fn main() -> ebcap::Result<()> {
    let ch = depolarizing(0.7)?;
    println!("Choi spectrum at eps = 0.7: {:?}", choi(&ch).state().spectrum());
    for eps in [0.0, 0.5, 0.6, 0.66, 2.0 / 3.0, 0.7, 0.9, 1.0] {
        let cert = is_entanglement_breaking_qubit(&depolarizing(eps)?)?;
        println!(
            "eps = {eps:.4}  {:<12} min PT eigenvalue {:+.6}  (expected {:+.6})",
            cert.verdict.to_string(),
            cert.min_pt_eigenvalue,
            (3.0 * eps - 2.0) / 4.0
        );
    }
    Ok(())
}
