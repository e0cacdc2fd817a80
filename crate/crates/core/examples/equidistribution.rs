//! Potential gap of the roots of g_l - g_m shrinking with l, and a
//! parameter separating M_a from M_b.
//!
//! cargo run --release --example equidistribution -- [a] [b]

use mandel_arith::equidist::{box_discrepancy, discriminate, potential_gap, BoxGrid, EmpiricalMeasure};
use mandel_arith::numbers::{parse_gauss, GaussRat};
use mandel_arith::persolve::{solve_preperiodic, SolveOptions};
use mandel_arith::Degree;

fn main() -> mandel_arith::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let a = parse_gauss(args.first().map_or("0", String::as_str))?;
    let b = parse_gauss(args.get(1).map_or("1", String::as_str))?;
    let d = Degree::TWO;

    for l in [3, 6, 9, 12] {
        let g = potential_gap(&a, d, l, 1, 4.0, 256)?;
        println!("l = {l:>2}: gap {:.3e} (log10 {:.2})", g.gap, g.log10_gap);
    }

    if a.is_real() && b.is_real() {
        let opts = SolveOptions::default();
        let mu_a = EmpiricalMeasure::from_roots(&solve_preperiodic(&a.re, d, 9, 1, &opts)?)?;
        let mu_b = EmpiricalMeasure::from_roots(&solve_preperiodic(&b.re, d, 9, 1, &opts)?)?;
        let grid = BoxGrid::default_for(a.to_complex64(), d);
        println!("box discrepancy at l = 9: {:.4}", box_discrepancy(&mu_a, &mu_b, &grid));
    }

    println!("{}", show(&a, &b, d));
    Ok(())
}

fn show(a: &GaussRat, b: &GaussRat, d: Degree) -> String {
    match discriminate(a, b, d, 64, 200) {
        mandel_arith::equidist::Discrimination::Distinguished { witness, kind, .. } => {
            format!("M_{a} != M_{b}: witness c = {witness} ({kind:?})")
        }
        other => format!("{other:?}"),
    }
}
