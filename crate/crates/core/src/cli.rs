//! The `mandel-arith` command line: thin adapters over the library.
//!
//! Exit codes: 0 success, 2 precondition violated, 3 budget exhausted or
//! result unresolved (partial output is still written), 64 usage error.
//! `--config FILE` merges `key = value` lines as if they were flags given
//! first, so explicit flags win. `--threads` falls back to `MANDEL_ARITH_THREADS`.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rug::Rational;
use serde_json::{json, Value};

use crate::adelic::{adelic_height, canonical_height_point, HeightReport};
use crate::conjsearch::{common_preperiodic_params, verify_common};
use crate::dyncore::{detect_preperiodic_exact, orbit_numeric, Degree, OrbitStatus, DEFAULT_DEGREE_CAP};
use crate::equidist::{discriminate, potential_gap};
use crate::error::Error;
use crate::funcfield::{ff_height, RatFunc};
use crate::greens::{green_param_exact, GreenOptions};
use crate::numbers::{parse_gauss, parse_rational, GaussRat};
use crate::persolve::{solve_preperiodic, SolveOptions};
use crate::renderio::{export_roots, render_mset, write_ppm, RootFormat, Viewport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PRECONDITION: i32 = 2;
pub const EXIT_UNRESOLVED: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser, Debug)]
#[command(name = "mandel-arith", version, about = "Arithmetic dynamics of z^d + c")]
struct Cli {
    /// Worker threads (default: MANDEL_ARITH_THREADS, else all cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    threads: Option<u32>,
    /// key = value file merged before the command-line flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Render M_a as a binary PPM.
    Render(RenderArgs),
    /// Archimedean Green's function G_a(c).
    Green(GreenArgs),
    /// Certified roots of g_l - g_m.
    PreperSolve(SolveArgs),
    /// Exterior potential gap of g_l - g_m (optionally an M_a vs M_b witness).
    Equidist(EquidistArgs),
    /// Adelic height h_{M_a}(c) over Q.
    Height(HeightArgs),
    /// Height over Q(t).
    Ffheight(FfArgs),
    /// Common preperiodic parameters of a and b.
    ConjSearch(ConjArgs),
    /// Orbit of a under z^d + c.
    Orbit(OrbitArgs),
}

#[derive(Args, Debug)]
#[command(args_override_self = true)]
struct RenderArgs {
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    a: String,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(2..))]
    d: u32,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u32).range(1..))]
    max_iter: u32,
    #[arg(long, default_value_t = 16, value_parser = clap::value_parser!(u32).range(1..))]
    bands: u32,
    /// Viewport center (default: the standard one for a and d).
    #[arg(long, allow_hyphen_values = true)]
    center: Option<String>,
    #[arg(long)]
    width: Option<String>,
    #[arg(long)]
    height: Option<String>,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pixels_x: Option<u32>,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pixels_y: Option<u32>,
}

#[derive(Args, Debug)]
#[command(args_override_self = true)]
struct GreenArgs {
    #[arg(long, allow_hyphen_values = true)]
    a: String,
    #[arg(long, allow_hyphen_values = true)]
    c: String,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(2..))]
    d: u32,
    #[arg(long, allow_hyphen_values = true, default_value_t = 1e-12)]
    target: f64,
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u32).range(1..))]
    max_iter: u32,
    #[arg(long, default_value_t = 1024, value_parser = clap::value_parser!(u32).range(53..))]
    max_precision: u32,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
#[command(args_override_self = true)]
struct SolveArgs {
    #[arg(long, allow_hyphen_values = true)]
    a: String,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(2..))]
    d: u32,
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
    l: u32,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    m: u32,
    /// Starting precision in bits.
    #[arg(long, default_value_t = 128, value_parser = clap::value_parser!(u32).range(64..))]
    precision: u32,
    #[arg(long, default_value_t = 4096, value_parser = clap::value_parser!(u32).range(64..))]
    max_bits: u32,
    #[arg(long, allow_hyphen_values = true)]
    target_radius: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[command(args_override_self = true)]
struct EquidistArgs {
    #[arg(long, allow_hyphen_values = true)]
    a: String,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(2..))]
    d: u32,
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
    l: u32,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    m: u32,
    #[arg(long, allow_hyphen_values = true, default_value_t = 4.0)]
    radius: f64,
    #[arg(long, default_value_t = 256, value_parser = clap::value_parser!(u32).range(1..))]
    samples: u32,
    /// Also look for a parameter separating M_a from M_b.
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
    #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u32).range(1..))]
    budget: u32,
}

#[derive(Args, Debug)]
#[command(args_override_self = true)]
struct HeightArgs {
    #[arg(long, allow_hyphen_values = true)]
    a: String,
    #[arg(long, allow_hyphen_values = true)]
    c: String,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(2..))]
    d: u32,
    #[arg(long, allow_hyphen_values = true, default_value_t = 1e-12)]
    arch_error: f64,
    /// Canonical height of a under z^d + c instead.
    #[arg(long)]
    canonical: bool,
}

#[derive(Args, Debug)]
#[command(args_override_self = true)]
struct FfArgs {
    #[arg(long, allow_hyphen_values = true)]
    a: String,
    #[arg(long, allow_hyphen_values = true)]
    c: String,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(2..))]
    d: u32,
    #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u32).range(1..))]
    cap: u32,
}

#[derive(Args, Debug)]
#[command(args_override_self = true)]
struct ConjArgs {
    #[arg(long, allow_hyphen_values = true)]
    a: String,
    #[arg(long, allow_hyphen_values = true)]
    b: String,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(2..))]
    d: u32,
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
    lmax: u32,
    #[arg(long, default_value_t = DEFAULT_DEGREE_CAP)]
    degree_cap: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[command(args_override_self = true)]
struct OrbitArgs {
    #[arg(long, allow_hyphen_values = true)]
    a: String,
    #[arg(long, allow_hyphen_values = true)]
    c: String,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(2..))]
    d: u32,
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u32).range(1..))]
    max_iter: u32,
    #[arg(long, default_value_t = 128, value_parser = clap::value_parser!(u32).range(53..))]
    precision: u32,
    /// Exact iteration over Q(i) instead of ball arithmetic.
    #[arg(long)]
    exact: bool,
}

/// Command failure: an exit code plus a message for stderr.
struct Fail(i32, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parse(_) => EXIT_USAGE,
            Error::InvalidDegree(_) | Error::Precondition(_) => EXIT_PRECONDITION,
            Error::Io(_) => 1,
            _ => EXIT_UNRESOLVED,
        };
        Fail(code, e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> Fail {
    Fail(EXIT_USAGE, msg.into())
}

/// Parses `argv` (program name first), runs the command, prints to stdout.
pub fn dispatch<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    dispatch_to(args, &mut lock)
}

/// [`dispatch`] with the primary output sent to `out`.
pub fn dispatch_to<I, T, W>(args: I, out: &mut W) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
    W: Write,
{
    let argv: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let argv = match merge_config(argv) {
        Ok(a) => a,
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            return code;
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let threads = cli.threads.map(|t| t as usize).or_else(|| {
        std::env::var("MANDEL_ARITH_THREADS").ok().and_then(|s| s.trim().parse::<usize>().ok()).filter(|&n| n > 0)
    });
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: thread pool: {e}");
            return 1;
        }
    };
    let (result, buf) = pool.install(|| {
        let mut buf = Vec::new();
        (run(cli.cmd, &mut buf), buf)
    });
    if let Err(e) = out.write_all(&buf).and_then(|_| out.flush()) {
        eprintln!("error: {e}");
        return 1;
    }
    match result {
        Ok(code) => code,
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            code
        }
    }
}

/// Splices `key = value` lines from `--config FILE` in right after the
/// subcommand, so later (explicit) flags override them.
fn merge_config(argv: Vec<OsString>) -> Result<Vec<OsString>, Fail> {
    let mut path = None;
    let mut rest = Vec::with_capacity(argv.len());
    let mut it = argv.into_iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy().into_owned();
        if s == "--config" {
            path = Some(it.next().ok_or_else(|| usage("--config needs a path"))?);
        } else if let Some(p) = s.strip_prefix("--config=") {
            path = Some(OsString::from(p));
        } else {
            rest.push(a);
        }
    }
    let Some(path) = path else { return Ok(rest) };
    let text = std::fs::read_to_string(&path)
        .map_err(|e| usage(format!("cannot read config {}: {e}", path.to_string_lossy())))?;
    let mut extra = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| usage(format!("config line {}: expected key = value", n + 1)))?;
        let (k, v) = (k.trim().replace('_', "-"), v.trim().trim_matches('"'));
        match v {
            "true" => extra.push(OsString::from(format!("--{k}"))),
            "false" => {}
            _ => extra.push(OsString::from(format!("--{k}={v}"))),
        }
    }
    // program name, global flags, then the subcommand: insert after the first non-flag
    let mut sub = None;
    let mut i = 1;
    while i < rest.len() {
        let s = rest[i].to_string_lossy();
        if s == "--threads" {
            i += 2;
        } else if s.starts_with('-') {
            i += 1;
        } else {
            sub = Some(i);
            break;
        }
    }
    let sub = sub.ok_or_else(|| usage("missing subcommand"))?;
    let mut out: Vec<OsString> = rest[..=sub].to_vec();
    out.extend(extra);
    out.extend_from_slice(&rest[sub + 1..]);
    Ok(out)
}

fn degree(d: u32) -> Result<Degree, Fail> {
    Ok(Degree::new(d)?)
}

fn rational(s: &str, name: &str) -> Result<Rational, Fail> {
    parse_rational(s).map_err(|e| usage(format!("--{name}: {e}")))
}

fn gauss(s: &str, name: &str) -> Result<GaussRat, Fail> {
    parse_gauss(s).map_err(|e| usage(format!("--{name}: {e}")))
}

/// Exact zeros print as the integer 0.
fn num(x: f64) -> Value {
    if x == 0.0 {
        json!(0)
    } else {
        json!(x)
    }
}

fn emit<W: Write>(out: &mut W, v: &Value) -> Result<(), Fail> {
    let s = serde_json::to_string_pretty(v).expect("json values serialize");
    writeln!(out, "{s}").map_err(|e| Fail(1, e.to_string()))
}

fn write_file(path: &PathBuf, bytes: &[u8]) -> Result<(), Fail> {
    std::fs::write(path, bytes).map_err(|e| Fail(1, format!("{}: {e}", path.display())))
}

fn run<W: Write>(cmd: Command, out: &mut W) -> Result<i32, Fail> {
    match cmd {
        Command::Render(a) => render(a, out),
        Command::Green(a) => green(a, out),
        Command::PreperSolve(a) => preper_solve(a, out),
        Command::Equidist(a) => equidist(a, out),
        Command::Height(a) => height(a, out),
        Command::Ffheight(a) => ffheight(a, out),
        Command::ConjSearch(a) => conj_search(a, out),
        Command::Orbit(a) => orbit(a, out),
    }
}

fn render<W: Write>(args: RenderArgs, out: &mut W) -> Result<i32, Fail> {
    let a = gauss(&args.a, "a")?;
    let d = degree(args.d)?;
    let mut v = Viewport::default_for(&a, d);
    if let Some(c) = &args.center {
        v.center = gauss(c, "center")?;
    }
    if let Some(w) = &args.width {
        v.width = rational(w, "width")?;
    }
    if let Some(h) = &args.height {
        v.height = rational(h, "height")?;
    }
    v.pixels_x = args.pixels_x.map_or(v.pixels_x, |p| p as usize);
    v.pixels_y = args.pixels_y.map_or(v.pixels_y, |p| p as usize);
    let v = Viewport::new(v.center, v.width, v.height, v.pixels_x, v.pixels_y)?;
    let image = render_mset(&a, d, &v, args.max_iter, args.bands);
    let mut bytes = Vec::new();
    write_ppm(&image, &mut bytes)?;
    write_file(&args.out, &bytes)?;
    let interior = image.pixels.iter().filter(|p| **p == crate::renderio::INTERIOR).count();
    emit(out, &json!({
        "out": args.out.display().to_string(),
        "width": image.width,
        "height": image.height,
        "interior_pixels": interior,
    }))?;
    Ok(EXIT_OK)
}

fn green<W: Write>(args: GreenArgs, out: &mut W) -> Result<i32, Fail> {
    let (a, c) = (gauss(&args.a, "a")?, gauss(&args.c, "c")?);
    let opts = GreenOptions { max_iter: args.max_iter, max_precision: args.max_precision, ..GreenOptions::default() };
    let g = green_param_exact(&a, &c, degree(args.d)?, args.target, &opts)?;
    emit(out, &json!({"value": num(g.value), "error": num(g.error), "iterations_used": g.iterations_used}))?;
    Ok(EXIT_OK)
}

fn preper_solve<W: Write>(args: SolveArgs, out: &mut W) -> Result<i32, Fail> {
    let a = rational(&args.a, "a")?;
    let opts = SolveOptions {
        start_bits: args.precision,
        max_bits: args.max_bits,
        target_radius: args.target_radius,
        ..SolveOptions::default()
    };
    let rs = match solve_preperiodic(&a, degree(args.d)?, args.l, args.m, &opts) {
        Ok(rs) => rs,
        Err(Error::NonConvergence { sweeps, precision_bits, partial }) => {
            // partial output: the unconverged approximations
            let v = json!({"status": "non_convergence", "sweeps": sweeps, "precision_bits": precision_bits,
                "partial": partial.iter().map(|(re, im)| json!([re, im])).collect::<Vec<_>>()});
            emit(out, &v)?;
            return Ok(EXIT_UNRESOLVED);
        }
        Err(e) => return Err(e.into()),
    };
    let fmt = match args.format {
        Format::Csv => RootFormat::Csv,
        Format::Json => RootFormat::Json,
    };
    let bytes = export_roots(&rs, fmt);
    match &args.out {
        Some(p) => {
            write_file(p, &bytes)?;
            emit(out, &json!({
                "out": p.display().to_string(),
                "degree": rs.degree,
                "distinct_roots": rs.roots.len(),
                "precision_bits": rs.precision_bits,
                "max_radius": rs.max_radius(),
            }))?;
        }
        None => out.write_all(&bytes).map_err(|e| Fail(1, e.to_string()))?,
    }
    Ok(EXIT_OK)
}

fn equidist<W: Write>(args: EquidistArgs, out: &mut W) -> Result<i32, Fail> {
    let a = gauss(&args.a, "a")?;
    let d = degree(args.d)?;
    let gap = potential_gap(&a, d, args.l, args.m, args.radius, args.samples as usize)?;
    let mut v = json!({"gap": gap});
    let mut code = EXIT_OK;
    if let Some(b) = &args.b {
        let b = gauss(b, "b")?;
        let r = discriminate(&a, &b, d, 64, args.budget as usize);
        if matches!(r, crate::equidist::Discrimination::IndistinguishableAtBudget { .. }) {
            code = EXIT_UNRESOLVED;
        }
        v["discriminate"] = serde_json::to_value(&r).expect("serializable");
    }
    emit(out, &v)?;
    Ok(code)
}

fn height_json(h: &HeightReport) -> Value {
    json!({
        "value": num(h.value),
        "error": num(h.error),
        "partial": h.partial,
        "places": serde_json::to_value(&h.places).expect("serializable"),
    })
}

fn height<W: Write>(args: HeightArgs, out: &mut W) -> Result<i32, Fail> {
    let (a, c) = (rational(&args.a, "a")?, rational(&args.c, "c")?);
    let d = degree(args.d)?;
    let h = if args.canonical {
        canonical_height_point(&c, &a, d, args.arch_error)?
    } else {
        adelic_height(&a, &c, d, args.arch_error)?
    };
    emit(out, &height_json(&h))?;
    Ok(if h.partial { EXIT_UNRESOLVED } else { EXIT_OK })
}

fn ffheight<W: Write>(args: FfArgs, out: &mut W) -> Result<i32, Fail> {
    let a: RatFunc = args.a.parse().map_err(|e: Error| usage(format!("--a: {e}")))?;
    let c: RatFunc = args.c.parse().map_err(|e: Error| usage(format!("--c: {e}")))?;
    let h = ff_height(&a, &c, degree(args.d)?, args.cap);
    emit(out, &serde_json::to_value(&h).expect("serializable"))?;
    Ok(if h.partial { EXIT_UNRESOLVED } else { EXIT_OK })
}

fn conj_search<W: Write>(args: ConjArgs, out: &mut W) -> Result<i32, Fail> {
    let (a, b) = (rational(&args.a, "a")?, rational(&args.b, "b")?);
    let report = common_preperiodic_params(&a, &b, degree(args.d)?, args.lmax, args.degree_cap)?;
    let check = verify_common(&report);
    let mut v = serde_json::to_value(&report).expect("serializable");
    v["verified"] = json!(check.all_pass);
    if let Some(p) = &args.out {
        let mut bytes = serde_json::to_vec_pretty(&v).expect("serializable");
        bytes.push(b'\n');
        write_file(p, &bytes)?;
    }
    emit(out, &v)?;
    Ok(if report.coverage.complete { EXIT_OK } else { EXIT_UNRESOLVED })
}

fn orbit<W: Write>(args: OrbitArgs, out: &mut W) -> Result<i32, Fail> {
    let (a, c) = (gauss(&args.a, "a")?, gauss(&args.c, "c")?);
    let d = degree(args.d)?;
    let r = if args.exact {
        detect_preperiodic_exact(&a, &c, d, args.max_iter)
    } else {
        let z = |g: &GaussRat| -> Complex64 { g.to_complex64() };
        if GaussRat::from_complex64(z(&a)).as_ref() != Some(&a) || GaussRat::from_complex64(z(&c)).as_ref() != Some(&c) {
            return Err(Fail(EXIT_PRECONDITION, "ball orbits need inputs exact in binary; use --exact".into()));
        }
        orbit_numeric(z(&a), z(&c), d, args.max_iter, args.precision)?
    };
    emit(out, &json!({"status": serde_json::to_value(&r.status).expect("serializable")}))?;
    Ok(if matches!(r.status, OrbitStatus::BoundedUnresolved { .. }) { EXIT_UNRESOLVED } else { EXIT_OK })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_cli(args: &[&str]) -> (i32, String) {
        let mut out = Vec::new();
        let mut argv = vec!["mandel-arith"];
        argv.extend_from_slice(args);
        let code = dispatch_to(argv, &mut out);
        (code, String::from_utf8(out).unwrap())
    }

    #[test]
    fn height_prints_exact_zero() {
        let (code, s) = run_cli(&["height", "--a", "0", "--c", "-1", "--d", "2"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["value"], json!(0));
        assert_eq!(v["error"], json!(0));
        assert!(s.contains("\"value\": 0,"));
    }

    #[test]
    fn ffheight_example() {
        let (code, s) = run_cli(&["ffheight", "--a", "0/1", "--c", "t/1", "--d", "2"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["value"], json!("1"));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_cli(&["height", "--a", "0"]).0, EXIT_USAGE);
        assert_eq!(run_cli(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(run_cli(&["height", "--a", "x", "--c", "1"]).0, EXIT_USAGE);
        assert_eq!(run_cli(&["conj-search", "--a", "1", "--b", "-1", "--lmax", "3"]).0, EXIT_PRECONDITION);
        assert_eq!(run_cli(&["conj-search", "--a", "0", "--b", "1", "--lmax", "6", "--degree-cap", "8"]).0, EXIT_UNRESOLVED);
        assert_eq!(run_cli(&["green", "--a", "0", "--c", "1", "--d", "1"]).0, EXIT_USAGE);
        assert_eq!(run_cli(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn config_merges_and_flags_win() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("run.cfg");
        std::fs::write(&cfg, "# defaults\na = 0\nc = -2\nd = 2\n").unwrap();
        let cfg = cfg.to_str().unwrap();
        let (code, s) = run_cli(&["--config", cfg, "height"]);
        assert_eq!(code, 0, "{s}");
        assert_eq!(serde_json::from_str::<Value>(&s).unwrap()["value"], json!(0));
        let (code, s) = run_cli(&["--threads", "2", "--config", cfg, "height", "--c", "1"]);
        assert_eq!(code, 0);
        let v: f64 = serde_json::from_str::<Value>(&s).unwrap()["value"].as_f64().unwrap();
        assert!((v - 0.4073).abs() < 1e-3);
    }
}
