//! Parameters where two marked points are both preperiodic, up to a budget.
//!
//! cargo run --release --example common_preperiodic -- [a] [b] [lmax]

use mandel_arith::conjsearch::{common_preperiodic_params, verify_common};
use mandel_arith::dyncore::DEFAULT_DEGREE_CAP;
use mandel_arith::numbers::parse_rational;
use mandel_arith::Degree;

fn main() -> mandel_arith::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let arg = |i: usize, default: &str| args.get(i).cloned().unwrap_or_else(|| default.to_string());
    let a = parse_rational(&arg(0, "0"))?;
    let b = parse_rational(&arg(1, "1"))?;
    let lmax: u32 = arg(2, "10").parse().map_err(|e| mandel_arith::Error::Parse(format!("lmax: {e}")))?;

    let t = std::time::Instant::now();
    let report = common_preperiodic_params(&a, &b, Degree::TWO, lmax, DEFAULT_DEGREE_CAP)?;
    println!("a={a} b={b} lmax={lmax}: {} irreducible common factors ({:.1?})", report.factors.len(), t.elapsed());
    for f in &report.factors {
        println!("  {}   a: g_{}-g_{}   b: g_{}-g_{}", f.poly, f.source_a.0, f.source_a.1, f.source_b.0, f.source_b.1);
    }
    let roots: Vec<String> = report.rational_roots.iter().map(|r| r.to_string()).collect();
    println!("rational common roots: {{{}}}", roots.join(", "));

    let check = verify_common(&report);
    println!("independent re-check: {}", if check.all_pass { "pass" } else { "FAIL" });
    Ok(())
}
