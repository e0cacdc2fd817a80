//! Render M_a to a PPM, optionally marking the roots of g_l - g_1.
//!
//! cargo run --release --example render_figure -- [a] [out.ppm] [l]

use mandel_arith::numbers::parse_gauss;
use mandel_arith::persolve::{solve_preperiodic, SolveOptions};
use mandel_arith::renderio::{overlay, ppm_bytes, render_mset, Viewport};
use mandel_arith::Degree;

fn main() -> mandel_arith::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let a = parse_gauss(args.first().map_or("0", String::as_str))?;
    let out = args.get(1).cloned().unwrap_or_else(|| "mset.ppm".into());
    let d = Degree::TWO;

    let v = Viewport::default_for(&a, d);
    let t = std::time::Instant::now();
    let mut image = render_mset(&a, d, &v, 500, 16);
    println!("{}x{} render in {:.1?}", image.width, image.height, t.elapsed());

    if let Some(l) = args.get(2).and_then(|s| s.parse::<u32>().ok()) {
        if a.is_real() {
            let rs = solve_preperiodic(&a.re, d, l, 1, &SolveOptions::default())?;
            let n = overlay(&mut image, &v, &rs, [255, 40, 40]);
            println!("marked {n} of {} roots", rs.roots.len());
        }
    }
    std::fs::write(&out, ppm_bytes(&image))?;
    println!("wrote {out}");
    Ok(())
}
