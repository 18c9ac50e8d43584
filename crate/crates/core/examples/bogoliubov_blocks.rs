//! Commutator blocks of extended symplectic maps in the frame `[Q, iJQ]`.

use modspace::bogoliubov::{innerness_blocks, random_symplectic, tilde_commutator_blocks};
use modspace::dilation::{orthogonal_dilation, AbstractSubspace};
use modspace::linalg::Mat;
use modspace::sampling;

fn main() -> modspace::Result<()> {
    let mut rng = sampling::rng(5);
    let abs = AbstractSubspace::sample(&mut rng, 4)?;
    let md = orthogonal_dilation(&abs)?.subspace.modular_data()?;
    let d = md.polariser();

    for scale in [0.0, 0.1, 0.4] {
        let t = random_symplectic(&mut rng, &d, scale)?;
        let blocks = tilde_commutator_blocks(&t, &md)?;
        println!(
            "scale {scale:.1}: |[T~,i]|_2 = {:.4}, condition a = {:.4}, condition b = {:.4}, closed-form residual {:.1e}",
            blocks.commutator_hs,
            blocks.cond_a,
            blocks.cond_b,
            blocks.worst_residual()
        );
    }

    let flow = tilde_commutator_blocks(&md.flow_on_h(0.7), &md)?;
    let norms: Vec<String> = flow.block_norms.iter().map(|v| format!("{v:.1e}")).collect();
    println!("modular flow s = 0.7: block norms [{}]", norms.join(", "));

    let t = random_symplectic(&mut rng, &d, 0.1)?;
    let x = t - Mat::identity(d.nrows(), d.nrows());
    let inner = innerness_blocks(&x, &md)?;
    println!("T = 1 + X: block norms {:.3?}", inner.block_norms);
    Ok(())
}
