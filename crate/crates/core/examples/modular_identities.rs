//! Modular data of a random standard subspace and its identity residuals.
//!
//! ```text
//! cargo run --example modular_identities -- 8
//! ```

use modspace::dilation::{orthogonal_dilation, AbstractSubspace};
use modspace::sampling;

fn main() -> modspace::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(4);
    let mut rng = sampling::rng(7);
    let abs = AbstractSubspace::sample(&mut rng, n)?;
    let dilation = orthogonal_dilation(&abs)?;
    let md = dilation.subspace.modular_data()?;

    let mut spec = md.delta_spectrum().to_vec();
    spec.sort_by(f64::total_cmp);
    spec.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    println!("N = {n}, distinct spec(Delta) = {spec:.4?}");

    let report = md.identity_report()?;
    for c in &report.checks {
        println!("{:<52} {:>10.2e} {}", c.identity_name, c.residual, if c.pass { "ok" } else { "FAIL" });
    }
    println!("E_H formula vs Gram projection:  {:.2e}", md.projection_e()?.worst());
    println!("P_H formula vs direct cutting:   {:.2e}", md.cutting_p()?.worst());
    Ok(())
}
