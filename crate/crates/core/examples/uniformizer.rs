//! Laurent fit of Phi_a(c) = c + b_0 + b_{-1}/c + ... near infinity.
//!
//! cargo run --release --example uniformizer -- [radius]

use mandel_arith::greens::{uniformizer, uniformizer_series};
use mandel_arith::Degree;
use num_complex::Complex64;

fn main() -> mandel_arith::Result<()> {
    let radius: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1e4);
    let d = Degree::TWO;

    let mut constants = Vec::new();
    for a in [0.0, 1.0, -1.0, 2.0] {
        let fit = uniformizer_series(Complex64::new(a, 0.0), d, 8, radius)?;
        println!(
            "a = {a:>4}: b_1 = {:.9}, b_0 = {:.9}, residual {:.1e}, consistency {:.1e}",
            fit.leading(),
            fit.constant(),
            fit.fit_residual,
            fit.consistency
        );
        constants.push(fit.constant());
    }
    println!("b_0(1) - b_0(0) = {:.9}", constants[1] - constants[0]);

    let c = Complex64::new(3.0, 4.0);
    println!("Phi_0({c}) = {:.12}", uniformizer(Complex64::new(0.0, 0.0), c, d)?);
    Ok(())
}
