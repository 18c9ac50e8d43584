//! Orthogonal and symplectic dilations of one abstract subspace, intertwined by
//! the unitary `κ₁(h) ↦ κ₂(h)`.

use modspace::dilation::{one_particle_unitary, orthogonal_dilation, symplectic_dilation, AbstractSubspace};
use modspace::linalg::{frobenius, Mat};
use modspace::sampling;

fn main() -> modspace::Result<()> {
    let mut rng = sampling::rng(1);
    let abs = AbstractSubspace::sample(&mut rng, 4)?;
    let orth = orthogonal_dilation(&abs)?;
    let symp = symplectic_dilation(&abs)?;

    for c in orth.axioms(&abs, 1e-10).checks.iter().chain(&symp.report(1e-10).checks) {
        println!("{:<44} {:.2e}", c.identity_name, c.residual);
    }
    println!("alpha_hat condition number: {:.3}", symp.alpha_hat_condition());

    let u = one_particle_unitary(&orth, &symp.dilation)?;
    let d1 = orth.subspace.modular_data()?;
    let d2 = symp.dilation.subspace.modular_data()?;
    let dim = u.nrows();
    println!("|U^T U - 1|         = {:.2e}", frobenius(&(u.transpose() * &u - Mat::identity(dim, dim))));
    println!("|U Delta1 U* - Delta2| = {:.2e}", frobenius(&(&u * d1.delta() * u.transpose() - d2.delta())));
    println!("embedded polariser residual: {:.2e}", orth.polariser_residual(&abs)?);
    Ok(())
}
