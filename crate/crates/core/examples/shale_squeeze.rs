//! Single-mode squeezing: `‖T*T − 1‖₂` and `‖[T, i]‖₂` grow together, and
//! `[T, i] = T i (1 − T*T)` holds exactly.

use modspace::bogoliubov::{shale_defect, squeeze};
use modspace::realop::RealifiedSpace;

fn main() -> modspace::Result<()> {
    let space = RealifiedSpace::standard(1);
    println!("{:>6} {:>14} {:>14} {:>12}", "s", "|T*T - 1|_2", "|[T,i]|_2", "identity");
    for s in [1.0, 1.1, 1.5, 2.0, 4.0, 10.0] {
        let t = squeeze(1, s);
        let d = shale_defect(&space, &t)?;
        println!("{s:>6.1} {:>14.6} {:>14.6} {:>12.1e}", d.hs_defect, d.comm_defect, d.identity_residual);
    }
    Ok(())
}
