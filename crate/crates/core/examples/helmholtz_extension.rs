//! Self-adjoint extension of `-d²/dx²` on `(-1, 1)` induced by the resolvent of the
//! free Helmholtz operator on the line.

use modspace::helmholtz::{self, LineOperator};

fn main() -> modspace::Result<()> {
    let op = LineOperator::new(helmholtz::DEFAULT_BOX, helmholtz::DEFAULT_INTERVAL_POINTS)?;
    let refs = helmholtz::reference_extensions(&op);
    let mut exts = Vec::new();
    for m in [0.5, 1.0, 2.0, 5.0] {
        let ext = helmholtz::extension_am(&op, m)?;
        let k = helmholtz::robin_root(m);
        println!(
            "m = {m:>3}: lambda_1 = {:.6}, k^2 = {:.6}, Robin residual {:.1e}, cond(T) {:.1e}",
            ext.lambda1(),
            k * k,
            ext.robin_residual(),
            ext.cond_t
        );
        exts.push(ext);
    }
    helmholtz::write_spectrum_csv(&helmholtz::spectrum_rows(&exts, &refs, 4), std::io::stdout())?;

    let grid = op.interval_grid();
    let trials = helmholtz::trial_corpus(&grid, 5, 1);
    let order = helmholtz::form_order_check(&exts[1], &grid, &trials)?;
    for row in &order.rows {
        let q_max = row.q_max.map_or("inf".to_string(), |v| format!("{v:.4}"));
        println!("{:<18} {:>10.4} <= {:>10.4} <= {q_max:>10}", row.name, row.q_min, row.q_m);
    }
    Ok(())
}
