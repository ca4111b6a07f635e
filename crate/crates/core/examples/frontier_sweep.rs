//! Numerical frontier of the depolarizing channel against the closed form.

use std::time::Instant;

use ebcap::channels::depolarizing;
use ebcap::depol::{alpha_grid, spc_frontier};
use ebcap::region::{frontier_sweep, SweepConfig};

fn main() -> ebcap::Result<()> {
    let eps = 0.7;
    let cfg = SweepConfig {
        schmidt_grid: 64,
        restarts: 16,
        ..SweepConfig::default()
    };
    let start = Instant::now();
    let res = frontier_sweep(&depolarizing(eps)?, &cfg)?;
    println!("{} corners, {} evaluations, {:.2?}", res.frontier.points().len(), res.evaluations, start.elapsed());

    let exact = spc_frontier(eps, &alpha_grid(512))?;
    let c = exact.hull().max_guaranteed();
    let mut worst: f64 = 0.0;
    for k in 0..=16 {
        let r = c * k as f64 / 16.0;
        let swept = res.frontier.hull().value_at(r).unwrap_or(0.0);
        let closed = exact.hull().value_at(r).unwrap_or(0.0);
        worst = worst.max((swept - closed).abs());
        println!("R = {r:.5}  swept R' = {swept:.6}  closed form R' = {closed:.6}");
    }
    println!("worst deviation {worst:.2e}");
    Ok(())
}
