//! Certified roots of g_l - g_m for the basepoint a.
//!
//! cargo run --release --example preperiodic_roots -- [a] [l] [m]

use mandel_arith::dyncore::DEFAULT_DEGREE_CAP;
use mandel_arith::numbers::parse_rational;
use mandel_arith::persolve::{difference_zpoly, recognize_exact, solve_preperiodic, SolveOptions};
use mandel_arith::Degree;

fn main() -> mandel_arith::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let a = parse_rational(args.first().map_or("0", String::as_str))?;
    let l: u32 = args.get(1).map_or(Ok(10), |s| s.parse()).unwrap_or(10);
    let m: u32 = args.get(2).map_or(Ok(1), |s| s.parse()).unwrap_or(1);
    let d = Degree::TWO;

    let opts = SolveOptions { max_bits: 1024, target_radius: Some(1e-20), ..SolveOptions::default() };
    let t = std::time::Instant::now();
    let rs = solve_preperiodic(&a, d, l, m, &opts)?;
    println!(
        "g_{l} - g_{m}: {} roots with multiplicity, {} distinct, {} bits, max radius {:.3e} ({:.1?})",
        rs.total_multiplicity(),
        rs.roots.len(),
        rs.precision_bits,
        rs.max_radius(),
        t.elapsed()
    );

    let p = difference_zpoly(&a, d, l, m, DEFAULT_DEGREE_CAP)?;
    for r in &rs.roots {
        if let Some(g) = recognize_exact(r, &p, 1 << 12) {
            println!("exact root {g} (multiplicity {})", r.multiplicity);
        }
    }
    Ok(())
}
