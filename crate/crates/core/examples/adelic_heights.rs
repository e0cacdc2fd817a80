//! Local Green's functions and the adelic height h_{M_a}(c) over Q.
//!
//! cargo run --release --example adelic_heights -- [a] [c]

use mandel_arith::adelic::{adelic_height, canonical_height_point, galois_orbit_height, local_green_nonarch};
use mandel_arith::dyncore::DEFAULT_DEGREE_CAP;
use mandel_arith::numbers::parse_rational;
use mandel_arith::persolve::difference_zpoly;
use mandel_arith::poly::factor_over_q;
use mandel_arith::Degree;
use rug::{Integer, Rational};

fn main() -> mandel_arith::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let a = parse_rational(args.first().map_or("0", String::as_str))?;
    let c = parse_rational(args.get(1).map_or("1/3", String::as_str))?;
    let d = Degree::TWO;

    println!("G_3 for a = {a}, c = {c}: {:?}", local_green_nonarch(&a, &c, &Integer::from(3), d));

    let h = adelic_height(&a, &c, d, 1e-12)?;
    println!("h_M_{a}({c}) = {:.12} +- {:.1e}", h.value, h.error);
    for p in &h.places {
        println!("  {p:?}");
    }
    let hh = canonical_height_point(&c, &a, d, 1e-12)?;
    println!("canonical height of {a} under z^2 + {c}: {:.12}, d * that = {:.12}", hh.value, 2.0 * hh.value);

    for c in ["0", "-1", "-2"] {
        let c = parse_rational(c)?;
        let h = adelic_height(&a, &c, d, 1e-12)?;
        println!("h_M_{a}({c}) exact zero: {}", h.is_exact_zero());
    }

    // Galois-orbit height of the non-rational period-3 centers
    let p = difference_zpoly(&Rational::new(), d, 4, 1, DEFAULT_DEGREE_CAP)?;
    for (f, _) in factor_over_q(&p) {
        if f.degree().unwrap_or(0) > 1 {
            let h = galois_orbit_height(&Rational::new(), &f, d, 1e-12)?;
            println!("degree {:?} factor: orbit height {:.3e} +- {:.1e}", f.degree(), h.value, h.error);
        }
    }
    Ok(())
}
