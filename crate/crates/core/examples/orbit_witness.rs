//! c = i is preperiodic for a = 0 but escapes for a = 1, so M_0 != M_1.
//!
//! cargo run --example orbit_witness -- [a] [c]

use mandel_arith::dyncore::{detect_preperiodic_exact, orbit_numeric};
use mandel_arith::numbers::parse_gauss;
use mandel_arith::{Degree, OrbitStatus};

fn main() -> mandel_arith::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let d = Degree::TWO;
    let c = parse_gauss(args.get(1).map_or("i", String::as_str))?;

    let bases = match args.first() {
        Some(a) => vec![parse_gauss(a)?],
        None => vec![parse_gauss("0")?, parse_gauss("1")?],
    };
    for a in &bases {
        let exact = detect_preperiodic_exact(a, &c, d, 64);
        match exact.status {
            OrbitStatus::PreperiodicExact { tail, period } => {
                println!("a = {a}, c = {c}: preperiodic, tail {tail}, period {period}");
            }
            _ => {
                let r = orbit_numeric(a.to_complex64(), c.to_complex64(), d, 200, 128)?;
                println!("a = {a}, c = {c}: {:?}", r.status);
            }
        }
        if let Some(trace) = &exact.trace {
            let shown: Vec<String> = trace.iter().take(6).map(|(x, y)| format!("{x}{y:+}i")).collect();
            println!("  orbit {}", shown.join(", "));
        }
    }
    Ok(())
}
