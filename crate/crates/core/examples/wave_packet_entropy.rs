//! Entropy of massless wave packets localised in `(-1, 1)`: the weighted-energy
//! integral against the symplectic pairing with the modular generator.

use modspace::qft1d::{self, Interval, SpectralGrid, WavePacket};

fn main() -> modspace::Result<()> {
    let grid = SpectralGrid::new(4096, qft1d::DEFAULT_BOX)?;
    let g = |x: f64| if x.abs() < 1.0 { x * (1.0 - x * x).powi(2) } else { 0.0 };
    let phi = WavePacket::from_fns(&grid, |_| 0.0, g);
    let rep = qft1d::entropy_report(&grid, &phi)?;
    println!("{}", serde_json::to_string_pretty(&rep)?);
    println!("256 pi / 9009 = {:.10}", 256.0 * std::f64::consts::PI / 9009.0);

    println!("\n{:<48} {:>12} {:>12}", "packet", "closed form", "modular");
    for (name, p) in qft1d::packet_corpus(&grid)? {
        let c = qft1d::entropy_closed_form(&grid, &p)?;
        let m = qft1d::entropy_modular_route(&grid, &p)?;
        println!("{name:<48} {c:>12.6} {:>12.6}", m.value);
    }

    let wide = Interval::new(0.5, 1.5)?;
    let moved = wide.transport(&grid, |_| 0.0, g);
    println!(
        "\ntransported to (-1, 2): {:.10} (unit interval {:.10})",
        qft1d::entropy_closed_form_on(&grid, &moved, wide)?,
        rep.closed_form
    );
    Ok(())
}
