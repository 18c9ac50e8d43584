//! Weyl operators on a truncated two-mode Fock space.

use modspace::quasiequiv::fock::{imag_part, TruncatedFock};
use num_complex::Complex64;

fn main() -> modspace::Result<()> {
    let fock = TruncatedFock::new(2, 40)?;
    let h = [Complex64::new(0.4, -0.2), Complex64::new(0.1, 0.5)];
    let k = [Complex64::new(-0.3, 0.1), Complex64::new(0.6, 0.0)];
    println!("Fock dimension: {}", fock.dim());
    println!("<0|V(h)|0> vs exp(-|h|^2/2): {:.1e}", fock.vacuum_kernel_residual(&h)?);
    println!("Im(h, k) = {:.6}", imag_part(&h, &k));
    for sector in [1, 3, 5] {
        println!("Weyl relation on <= {sector} particles: {:.1e}", fock.ccr_residual(&h, &k, sector)?);
    }
    println!("cutoff for |h| = 1 at 1e-12: {}", TruncatedFock::required_cutoff(1.0, 1e-12));
    Ok(())
}
