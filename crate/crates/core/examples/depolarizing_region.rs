//! Closed-form region of the depolarizing channel and its advantage over
//! time division, for a few noise levels.

use ebcap::depol::{alpha_grid, closed_form_point, gap_report, joint_output_spectrum, DepolParams};

fn main() -> ebcap::Result<()> {
    let p = DepolParams::new(0.7, 0.25)?;
    println!("eps = 0.7, alpha = 0.25: spectrum {:?}", joint_output_spectrum(p).values());
    println!("corner {:?}", closed_form_point(p));
    println!();
    println!("{:>6} {:>10} {:>10} {:>12} {:>8}  status", "eps", "C", "C_EA", "max gap", "alpha*");
    for eps in [0.5, 2.0 / 3.0, 0.7, 0.8, 0.9, 1.0] {
        let g = gap_report(eps, &alpha_grid(512))?;
        println!(
            "{eps:>6.4} {:>10.6} {:>10.6} {:>12.3e} {:>8.4}  {}",
            g.unassisted_capacity,
            g.ea_capacity,
            g.max_vertical_gap,
            g.argmax_alpha,
            g.status.label()
        );
    }
    Ok(())
}
