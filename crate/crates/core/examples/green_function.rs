//! G_a(c) against log|c| for large |c|, with the certified error.
//!
//! cargo run --release --example green_function -- [a] [d]

use mandel_arith::greens::{green_param_exact, GreenOptions};
use mandel_arith::numbers::parse_gauss;
use mandel_arith::Degree;

fn main() -> mandel_arith::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let a = parse_gauss(args.first().map_or("0", String::as_str))?;
    let d = Degree::new(args.get(1).and_then(|s| s.parse().ok()).unwrap_or(2))?;
    let opts = GreenOptions::default();

    println!("{:>8} {:>22} {:>12} {:>10}", "|c|", "G_a(c)", "G - log|c|", "error");
    for k in [1, 2, 4, 8] {
        let c = parse_gauss(&format!("1{}", "0".repeat(k)))?;
        let g = green_param_exact(&a, &c, d, 1e-12, &opts)?;
        let diff = g.value - (k as f64) * std::f64::consts::LN_10;
        println!("{:>8} {:>22.15} {:>12.3e} {:>10.1e}", format!("1e{k}"), g.value, diff, g.error);
    }

    // inside M_0: exact zero from the preperiodic pre-pass
    for c in ["-1", "-2", "i"] {
        let c = parse_gauss(c)?;
        let g = green_param_exact(&a, &c, d, 1e-12, &opts)?;
        println!("G_{a}({c}) = {} +- {:e}", g.value, g.error);
    }
    Ok(())
}
