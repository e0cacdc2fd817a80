//! Heights over Q(t): exact rationals from valuations at each place.
//!
//! cargo run --example function_field -- [a] [c]

use mandel_arith::funcfield::{ff_canonical_height, ff_height, ff_preperiodic, ff_trivial_check, RatFunc};
use mandel_arith::Degree;

fn main() -> mandel_arith::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let a: RatFunc = args.first().map_or("0/1", String::as_str).parse()?;
    let c: RatFunc = args.get(1).map_or("t/1", String::as_str).parse()?;
    let d = Degree::TWO;

    let h = ff_height(&a, &c, d, 64);
    println!("h_M_{a}({c}) = {}{}", h.value, if h.partial { " (partial)" } else { "" });
    for p in &h.places {
        println!("  place {} weight {}: {:?} {:?}", p.place, p.weight, p.q.as_ref().map(|q| q.to_string()), p.status);
    }
    let hh = ff_canonical_height(&c, &a, d, 64);
    println!("canonical height of a: {}", hh.value);

    for s in ["1/(t^2+1)", "(t^2-1)/t", "-2/1"] {
        let c: RatFunc = s.parse()?;
        println!(
            "c = {c}: height {}, orbit {:?}, trivial {}",
            ff_height(&a, &c, d, 64).value,
            ff_preperiodic(&a, &c, d, 64),
            ff_trivial_check(&c)
        );
    }
    Ok(())
}
