//! Real-linear functional calculus of a skew operator.
//!
//! `K` skew on `ℝ^n` is complexified, `A = -ι Ǩ` is diagonalised and `f(A)` is
//! brought back. Odd real `f` lands on `ι f(A)`, even real `f` on `f(A)`.

use modspace::linalg::{frobenius, Mat};
use modspace::realop::{even_calculus, odd_calculus, polar_decompose};
use modspace::sampling;

fn main() -> modspace::Result<()> {
    let mut rng = sampling::rng(3);
    let d = sampling::random_polariser(&mut rng, 6, 0.2, 0.8);
    let n = d.nrows();

    // f(t) = t recovers K; f(t) = t² is -K².
    let same = odd_calculus(&d, |t| t)?;
    let sq = even_calculus(&d, |t| t * t)?;
    println!("odd f(t) = t:    |f(K) - K|    = {:.2e}", frobenius(&(same - &d)));
    println!("even f(t) = t^2: |f(K) + K^2|  = {:.2e}", frobenius(&(sq + &d * &d)));

    // √(1 + D²) two ways.
    let root = even_calculus(&d, |t| (1.0 - t * t).sqrt())?;
    let direct = modspace::linalg::sym_sqrt(&(Mat::identity(n, n) + &d * &d));
    println!("sqrt(1 + D^2):   calculus vs direct = {:.2e}", frobenius(&(root - direct)));

    // Phase of D is a complex structure when ker D = 0.
    let polar = polar_decompose(&d)?;
    let v2 = &polar.v * &polar.v + Mat::identity(n, n);
    println!("polar phase:     |V^2 + 1| = {:.2e}", frobenius(&v2));
    Ok(())
}
