//! Two Gaussian states with a common symplectic form: condition norms and the
//! chain of identities linking them.

use modspace::quasiequiv::{qe_corollary_chain, qe_theorem_norms, sample_pair};
use modspace::sampling;

fn main() -> modspace::Result<()> {
    let mut rng = sampling::rng(9);
    let (s1, s2) = sample_pair(&mut rng, 4)?;
    let norms = qe_theorem_norms(&s1, &s2)?;
    println!("condition a: {:.6} (brute force {:.6})", norms.t1_norm, norms.brute_t1_norm);
    println!("condition b: {:.6} (brute force {:.6})", norms.t2_norm, norms.brute_t2_norm);

    let chain = qe_corollary_chain(&s1, &s2)?;
    for c in &chain.criteria {
        println!("{:<40} {:.6}", c.criterion, c.value);
        for (name, r) in &c.identity_residuals {
            println!("    {name:<52} {r:.1e}");
        }
    }
    let same = qe_theorem_norms(&s1, &s1)?;
    println!("same state: a = {:.1e}, b = {:.1e}", same.t1_norm, same.t2_norm);
    Ok(())
}
