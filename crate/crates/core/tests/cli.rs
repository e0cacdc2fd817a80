//! The binary against direct library calls: same numbers, documented exit codes.

use std::process::{Command, Output};

use mandel_arith::adelic::adelic_height;
use mandel_arith::conjsearch::common_preperiodic_params;
use mandel_arith::dyncore::DEFAULT_DEGREE_CAP;
use mandel_arith::funcfield::{ff_height, RatFunc};
use mandel_arith::greens::{green_param_exact, GreenOptions};
use mandel_arith::numbers::{parse_gauss, parse_rational};
use mandel_arith::persolve::{solve_preperiodic, SolveOptions};
use mandel_arith::renderio::{export_roots, ppm_bytes, render_mset, RootFormat, Viewport};
use mandel_arith::Degree;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mandel-arith")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn height_matches_library() {
    let out = run(&["height", "--a", "0", "--c", "-1", "--d", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let s = String::from_utf8(out.stdout.clone()).unwrap();
    assert!(s.starts_with("{\n  \"value\": 0,\n  \"error\": 0,"), "{s}");

    for (a, c, d) in [("0", "1/3", "2"), ("1/2", "-7/5", "3"), ("2", "1", "2")] {
        let out = run(&["height", "--a", a, "--c", c, "--d", d]);
        assert_eq!(out.status.code(), Some(0));
        let v = json(&out);
        let h = adelic_height(&parse_rational(a).unwrap(), &parse_rational(c).unwrap(), Degree::new(d.parse().unwrap()).unwrap(), 1e-12)
            .unwrap();
        assert_eq!(v["value"].as_f64().unwrap(), h.value);
        assert_eq!(v["error"].as_f64().unwrap(), h.error);
    }
}

#[test]
fn green_matches_library() {
    let out = run(&["green", "--a", "1", "--c", "3-2i", "--d", "3", "--target", "1e-10"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let g = green_param_exact(&parse_gauss("1").unwrap(), &parse_gauss("3-2i").unwrap(), Degree::new(3).unwrap(), 1e-10, &GreenOptions::default())
        .unwrap();
    assert_eq!(v["value"].as_f64().unwrap(), g.value);
    assert_eq!(v["error"].as_f64().unwrap(), g.error);
    assert_eq!(v["iterations_used"].as_u64().unwrap(), u64::from(g.iterations_used));
}

#[test]
fn ffheight_prints_exact_rational() {
    let out = run(&["ffheight", "--a", "0/1", "--c", "t/1", "--d", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["value"], Value::from("1"));
    let c: RatFunc = "1/(t^2+1)".parse().unwrap();
    let h = ff_height(&RatFunc::zero(), &c, Degree::TWO, 64);
    let out = run(&["ffheight", "--a", "0", "--c", "1/(t^2+1)"]);
    assert_eq!(json(&out)["value"], Value::from(h.value.to_string()));
}

#[test]
fn preper_solve_csv_matches_export() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("roots.csv");
    let out = run(&["preper-solve", "--a", "0", "--d", "2", "--l", "4", "--m", "1", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let rs = solve_preperiodic(&parse_rational("0").unwrap(), Degree::TWO, 4, 1, &SolveOptions::default()).unwrap();
    assert_eq!(std::fs::read(&path).unwrap(), export_roots(&rs, RootFormat::Csv));
    assert_eq!(json(&out)["distinct_roots"].as_u64().unwrap(), rs.roots.len() as u64);

    let out = run(&["preper-solve", "--a", "0", "--l", "4", "--m", "1", "--format", "json"]);
    assert_eq!(out.stdout, export_roots(&rs, RootFormat::Json));
}

#[test]
fn conj_search_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = run(&["conj-search", "--a", "0", "--b", "1", "--d", "2", "--lmax", "10", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let file: Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(file, json(&out));
    let r = common_preperiodic_params(&parse_rational("0").unwrap(), &parse_rational("1").unwrap(), Degree::TWO, 10, DEFAULT_DEGREE_CAP).unwrap();
    let mut lib = serde_json::to_value(&r).unwrap();
    lib["verified"] = Value::from(true);
    assert_eq!(file, lib);

    // degree cap hit: partial report, exit 3
    let out = run(&["conj-search", "--a", "0", "--b", "1", "--lmax", "10", "--degree-cap", "64", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let file: Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(file["coverage"]["complete"], Value::from(false));
}

#[test]
fn render_is_byte_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let one = dir.path().join("one.ppm");
    let four = dir.path().join("four.ppm");
    let args = ["--pixels-x", "80", "--pixels-y", "60", "--max-iter", "200"];
    let mut a1 = vec!["render", "--a", "1", "--threads", "1", "--out", one.to_str().unwrap()];
    a1.extend(args);
    assert_eq!(run(&a1).status.code(), Some(0));
    let o4 = Command::new(env!("CARGO_BIN_EXE_mandel-arith"))
        .env("MANDEL_ARITH_THREADS", "4")
        .args(["render", "--a", "1", "--out", four.to_str().unwrap()])
        .args(args)
        .output()
        .unwrap();
    assert_eq!(o4.status.code(), Some(0));
    let a = parse_gauss("1").unwrap();
    let v = Viewport::default_for(&a, Degree::TWO);
    let v = Viewport::new(v.center, v.width, v.height, 80, 60).unwrap();
    let lib = ppm_bytes(&render_mset(&a, Degree::TWO, &v, 200, 16));
    assert_eq!(std::fs::read(&one).unwrap(), lib);
    assert_eq!(std::fs::read(&four).unwrap(), lib);
}

#[test]
fn orbit_and_equidist() {
    let out = run(&["orbit", "--a", "0", "--c", "i", "--exact"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["status"]["kind"], Value::from("PreperiodicExact"));
    let out = run(&["orbit", "--a", "1", "--c", "i"]);
    assert_eq!(json(&out)["status"]["kind"], Value::from("Escaped"));
    let out = run(&["orbit", "--a", "0", "--c", "i"]);
    assert_eq!(out.status.code(), Some(3));

    let out = run(&["equidist", "--a", "0", "--l", "6", "--b", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["gap"]["log10_gap"].as_f64().unwrap() < -10.0);
    assert!(v["discriminate"].is_object());
}

#[test]
fn exit_codes_and_config() {
    assert_eq!(run(&[]).status.code(), Some(64));
    assert_eq!(run(&["height", "--a", "0"]).status.code(), Some(64));
    assert_eq!(run(&["height", "--a", "0", "--c", "1", "--frob"]).status.code(), Some(64));
    assert_eq!(run(&["green", "--a", "0", "--c", "1", "--target", "-1"]).status.code(), Some(2));
    assert_eq!(run(&["preper-solve", "--a", "0", "--l", "2", "--m", "3"]).status.code(), Some(2));
    assert_eq!(run(&["--threads", "0", "height", "--a", "0", "--c", "1"]).status.code(), Some(64));

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("green.cfg");
    std::fs::write(&cfg, "a = 0\nc = 100\ntarget = 1e-6\n").unwrap();
    let from_cfg = json(&run(&["--config", cfg.to_str().unwrap(), "green"]));
    let explicit = json(&run(&["green", "--a", "0", "--c", "100", "--target", "1e-6"]));
    assert_eq!(from_cfg, explicit);
    let over = json(&run(&["green", "--config", cfg.to_str().unwrap(), "--c", "1000"]));
    assert!(over["value"].as_f64().unwrap() > from_cfg["value"].as_f64().unwrap());
}
