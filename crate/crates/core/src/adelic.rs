//! Local Green's functions at every place of `Q` and the heights built from
//! them.
//!
//! At a prime `p` the escape rate is exact: once `v(z) < 0` and
//! `d v(z) < v(c)` the ultrametric inequality pins `v(z_{k+1}) = d v(z_k)`
//! forever, so the limit is the rational `-v(z_k) / d^k` (in units of
//! `log p`). Only primes dividing a denominator of `a` or `c` can contribute.

use std::collections::HashMap;

use rayon::prelude::*;
use rug::ops::Pow;
use rug::{Complete, Integer, Rational};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::ball::Seed;
use crate::dyncore::Degree;
use crate::error::{Error, Result};
use crate::greens::{escape_rate, green_param_exact, green_seeded, GreenOptions, GreenValue, Start};
use crate::numbers::{factor_integer, valuation, GaussRat};
use crate::persolve::{recognize_exact, solve_zpoly, SolveOptions};
use crate::poly::{gcd_z, QPoly, ZPoly};

/// Exact iteration budget in the cancellation regime.
pub const CANCELLATION_CAP: u32 = 512;
/// Bit size at which exact iteration gives up, whatever the step count.
pub const CANCELLATION_BITS: u64 = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Archimedean,
    Prime(Integer),
}

impl Place {
    /// Every place of `Q` has weight 1.
    pub fn weight(&self) -> u32 {
        1
    }

    /// `log |x|_v` for nonzero `x`.
    pub fn log_abs(&self, x: &Rational) -> f64 {
        match self {
            Place::Archimedean => {
                let (n, d) = (x.numer(), x.denom());
                ln_integer(n) - ln_integer(d)
            }
            Place::Prime(p) => -(valuation(x, p).expect("nonzero") as f64) * ln_integer(p),
        }
    }

    /// The finitely many places where `log |x|_v` is nonzero.
    pub fn support(x: &Rational) -> Vec<Place> {
        let mut ps: Vec<Integer> = factor_integer(x.numer()).into_iter().map(|f| f.0).collect();
        ps.extend(factor_integer(x.denom()).into_iter().map(|f| f.0));
        ps.sort();
        ps.dedup();
        let mut out = vec![Place::Archimedean];
        out.extend(ps.into_iter().map(Place::Prime));
        out
    }
}

fn ln_integer(n: &Integer) -> f64 {
    let (m, e) = n.to_f64_exp();
    m.abs().ln() + f64::from(e) * std::f64::consts::LN_2
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LocalStatus {
    ExactZero,
    ExactPositive,
    NumericCertified,
    Unresolved,
}

/// Exact rational escape rate at a prime, in units of `log p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LocalGreen {
    Exact(Rational),
    Unresolved { steps: u32 },
}

impl LocalGreen {
    pub fn exact(&self) -> Option<&Rational> {
        match self {
            LocalGreen::Exact(q) => Some(q),
            LocalGreen::Unresolved { .. } => None,
        }
    }

    pub fn status(&self) -> LocalStatus {
        match self {
            LocalGreen::Exact(q) if q.cmp0().is_eq() => LocalStatus::ExactZero,
            LocalGreen::Exact(_) => LocalStatus::ExactPositive,
            LocalGreen::Unresolved { .. } => LocalStatus::Unresolved,
        }
    }
}

/// `lim d^-n max(0, -v_p(f_c^n(z0)))`.
fn point_escape_p(z0: &Rational, c: &Rational, p: &Integer, d: u32) -> LocalGreen {
    match point_escape_iter(z0, c, p, d) {
        LocalGreen::Unresolved { steps } => match disk_escape_p(z0, c, p, d) {
            Some(q) => LocalGreen::Exact(q),
            None => LocalGreen::Unresolved { steps },
        },
        g => g,
    }
}

fn point_escape_iter(z0: &Rational, c: &Rational, p: &Integer, d: u32) -> LocalGreen {
    let vc = valuation(c, p);
    let mut seen: HashMap<Rational, u32> = HashMap::new();
    let mut z = z0.clone();
    let mut dk = Integer::from(1);
    for k in 0..=CANCELLATION_CAP {
        let vz = valuation(&z, p);
        if vz.is_none_or(|v| v >= 0) && vc.is_none_or(|v| v >= 0) {
            return LocalGreen::Exact(Rational::new());
        }
        if let Some(v) = vz.filter(|&v| v < 0) {
            if vc.is_none_or(|w| i64::from(d) * v < w) {
                return LocalGreen::Exact(Rational::from((Integer::from(-v), dk)));
            }
        }
        if seen.contains_key(&z) {
            return LocalGreen::Exact(Rational::new());
        }
        if u64::from(z.numer().significant_bits() + z.denom().significant_bits()) > CANCELLATION_BITS {
            return LocalGreen::Unresolved { steps: k };
        }
        let next = Rational::from((&z).pow(d)) + c;
        seen.insert(std::mem::replace(&mut z, next), k);
        dk *= d;
    }
    LocalGreen::Unresolved { steps: CANCELLATION_CAP }
}

/// Step budget per precision in [`disk_escape_p`].
pub const DISK_CAP: u32 = 2048;

fn residue(y: &Rational, m: &Integer) -> Integer {
    if *m == 1 {
        return Integer::new();
    }
    let inv = y.denom().clone().invert(m).expect("denominator is a p-adic unit");
    (inv * y.numer()).div_rem_euc_ref(m).complete().1
}

/// Cancellation-regime fallback: iterates closed p-adic disks instead of the
/// point. With `v(c) = -d e` put `w = p^e z`, so `|z| <= |c|^(1/d)` becomes
/// `w in Z_p` and the map is `phi(w) = (w^d + c p^(de)) / p^((d-1)e)`. Disk
/// centers are reduced mod `p^k` and radii capped at `p^-s`, so the states
/// are finite. A repeated disk inside `Z_p` certifies a bounded orbit; an
/// image disk lying wholly at negative valuation certifies lock-in at that
/// step. `None` when every precision tried straddles the boundary.
fn disk_escape_p(z0: &Rational, c: &Rational, p: &Integer, d: u32) -> Option<Rational> {
    let vc = valuation(c, p)?;
    let dl = i64::from(d);
    if vc >= 0 || vc % dl != 0 {
        return None;
    }
    let e = -vc / dl;
    let pe = Integer::from(p.pow(e as u32));
    let cp = c * Rational::from(Integer::from((&pe).pow(d)));
    let shrink = Integer::from((&pe).pow(d - 1));
    let w0 = z0 * Rational::from(pe.clone());
    if valuation(&w0, p).is_some_and(|v| v < 0) {
        return None;
    }
    let binom_v: Vec<i64> = (0..=d).map(|j| valuation(&Rational::from(Integer::from(Integer::binomial_u(d, j))), p).unwrap_or(0)).collect();
    for s in [1i64, 2, 4, 8, 16, 32, 64] {
        let mut x = residue(&w0, &Integer::from(p.pow(s as u32)));
        let mut k = s;
        let mut seen = std::collections::HashSet::new();
        let mut dk = Integer::from(d);
        for _ in 0..DISK_CAP {
            if !seen.insert((x.clone(), k)) {
                return Some(Rational::new());
            }
            let vx = if x == 0 { None } else { valuation(&Rational::from(x.clone()), p) };
            let mut kmin = i64::MAX;
            for j in 1..=d {
                let t = match vx {
                    Some(v) => binom_v[j as usize] + i64::from(d - j) * v + i64::from(j) * k,
                    None if j == d => i64::from(d) * k,
                    None => continue,
                };
                kmin = kmin.min(t);
            }
            let k1 = (kmin - (dl - 1) * e).min(s);
            let y = (Rational::from(x.clone().pow(d)) + &cp) / Rational::from(shrink.clone());
            if let Some(vy) = valuation(&y, p).filter(|&vy| vy < 0 && vy < k1) {
                // every point of the image disk has v(z) = vy - e < -e
                return Some(Rational::from((Integer::from(e - vy), dk)));
            }
            if k1 < 0 {
                break;
            }
            x = residue(&y, &Integer::from(p.pow(k1 as u32)));
            k = k1;
            dk *= d;
        }
    }
    None
}

/// `G_{a,p}(c) = lim d^-n log+ |g_{n+1}(c)|_p` as `q` with value `q log p`.
pub fn local_green_nonarch(a: &Rational, c: &Rational, p: &Integer, d: Degree) -> LocalGreen {
    match point_escape_p(a, c, p, d.get()) {
        LocalGreen::Exact(q) => LocalGreen::Exact(q * d.get()),
        u => u,
    }
}

/// The local term at one place.
#[derive(Clone, Debug)]
pub enum LocalValue {
    /// `q`, meaning `q log p`.
    Exact(Rational),
    Green(GreenValue),
    Missing,
}

#[derive(Clone, Debug)]
pub struct PlaceReport {
    pub place: Place,
    pub local: LocalValue,
    pub status: LocalStatus,
}

impl PlaceReport {
    fn value(&self) -> f64 {
        match (&self.place, &self.local) {
            (Place::Prime(p), LocalValue::Exact(q)) => q.to_f64() * ln_integer(p),
            (_, LocalValue::Green(g)) => g.value,
            _ => 0.0,
        }
    }

    fn error(&self) -> f64 {
        match &self.local {
            LocalValue::Green(g) => g.error,
            _ => 0.0,
        }
    }
}

impl Serialize for PlaceReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(3))?;
        match &self.place {
            Place::Archimedean => m.serialize_entry("p", "inf")?,
            Place::Prime(p) => match p.to_u64() {
                Some(v) => m.serialize_entry("p", &v)?,
                None => m.serialize_entry("p", &p.to_string())?,
            },
        }
        match &self.local {
            LocalValue::Exact(q) => m.serialize_entry("q", &q.to_string())?,
            LocalValue::Green(g) => m.serialize_entry("q", g)?,
            LocalValue::Missing => m.serialize_entry("q", &())?,
        }
        m.serialize_entry("status", &self.status)?;
        m.end()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HeightReport {
    pub value: f64,
    /// The archimedean error; the non-archimedean terms are exact.
    pub error: f64,
    /// Some place is unresolved, so `value` is only a partial sum.
    pub partial: bool,
    pub places: Vec<PlaceReport>,
}

impl HeightReport {
    /// Every place is an exact zero.
    pub fn is_exact_zero(&self) -> bool {
        self.places.iter().all(|p| p.status == LocalStatus::ExactZero)
    }

    fn from_places(places: Vec<PlaceReport>) -> Self {
        let value = places.iter().map(PlaceReport::value).sum();
        let error = places.iter().map(PlaceReport::error).sum();
        let partial = places.iter().any(|p| p.status == LocalStatus::Unresolved);
        HeightReport { value, error, partial, places }
    }
}

fn denominator_primes(xs: &[&Rational]) -> Vec<Integer> {
    let mut ps: Vec<Integer> = xs.iter().flat_map(|x| factor_integer(x.denom())).map(|f| f.0).collect();
    ps.sort();
    ps.dedup();
    ps
}

fn arch_report(g: Result<GreenValue>) -> PlaceReport {
    match g {
        Ok(g) => {
            let status = if g.value == 0.0 && g.error == 0.0 { LocalStatus::ExactZero } else { LocalStatus::NumericCertified };
            PlaceReport { place: Place::Archimedean, local: LocalValue::Green(g), status }
        }
        Err(_) => PlaceReport { place: Place::Archimedean, local: LocalValue::Missing, status: LocalStatus::Unresolved },
    }
}

fn prime_report(p: Integer, g: LocalGreen) -> PlaceReport {
    let status = g.status();
    let local = match g {
        LocalGreen::Exact(q) => LocalValue::Exact(q),
        LocalGreen::Unresolved { .. } => LocalValue::Missing,
    };
    PlaceReport { place: Place::Prime(p), local, status }
}

/// `h_{M_a}(c)`: the sum of `G_{a,v}(c)` over all places.
pub fn adelic_height(a: &Rational, c: &Rational, d: Degree, arch_error: f64) -> Result<HeightReport> {
    let opts = GreenOptions::default();
    let (ga, gc) = (GaussRat::real(a.clone()), GaussRat::real(c.clone()));
    let arch = green_param_exact(&ga, &gc, d, arch_error, &opts);
    if let Err(Error::Precondition(m)) = arch {
        return Err(Error::Precondition(m));
    }
    let mut places = vec![arch_report(arch)];
    let primes = denominator_primes(&[a, c]);
    places.par_extend(primes.into_par_iter().map(|p| {
        let g = local_green_nonarch(a, c, &p, d);
        prime_report(p, g)
    }));
    Ok(HeightReport::from_places(places))
}

/// Canonical height of `a` under `f_c(z) = z^d + c`; `adelic_height(a, c) = d * this`.
pub fn canonical_height_point(c: &Rational, a: &Rational, d: Degree, arch_error: f64) -> Result<HeightReport> {
    let opts = GreenOptions::default();
    let (ga, gc) = (GaussRat::real(a.clone()), GaussRat::real(c.clone()));
    let arch = escape_rate(&ga, &gc, d, arch_error, &opts);
    if let Err(Error::Precondition(m)) = arch {
        return Err(Error::Precondition(m));
    }
    let mut places = vec![arch_report(arch)];
    let primes = denominator_primes(&[a, c]);
    places.par_extend(primes.into_par_iter().map(|p| {
        let g = point_escape_p(a, c, &p, d.get());
        prime_report(p, g)
    }));
    Ok(HeightReport::from_places(places))
}

/// Average of `G_{a,v}` over the roots of a monic squarefree `P`, summed over places.
///
/// The roots are algebraic integers, so only primes dividing the
/// denominator of `a` can contribute. Those use `v_p(Res(P, g_{n+1}))`,
/// accepted once the next resultant shows the exact ratio `d`.
pub fn galois_orbit_height(a: &Rational, p: &ZPoly, d: Degree, arch_error: f64) -> Result<HeightReport> {
    let n = p.degree().unwrap_or(0);
    if n == 0 || !p.is_monic() {
        return Err(Error::Precondition("P must be monic of positive degree".into()));
    }
    if gcd_z(p, &p.derivative()).degree() != Some(0) {
        return Err(Error::Precondition("P must be squarefree".into()));
    }
    let opts = GreenOptions::default();
    let ga = GaussRat::real(a.clone());
    let roots = solve_zpoly(p, &SolveOptions { target_radius: Some(1e-30), ..SolveOptions::default() })?;
    let greens: Vec<Result<GreenValue>> = roots
        .roots
        .par_iter()
        .map(|r| match recognize_exact(r, p, 1) {
            Some(c) => green_param_exact(&ga, &c, d, arch_error, &opts),
            None => green_seeded(
                &Seed::Exact(ga.clone()),
                &Seed::Disk(r.value.clone(), r.radius),
                d,
                Start::Param,
                arch_error,
                &opts,
            ),
        })
        .collect();
    let mut arch = Ok(GreenValue { value: 0.0, error: 0.0, iterations_used: 0 });
    for g in greens {
        arch = match (arch, g) {
            (Ok(acc), Ok(g)) => Ok(GreenValue {
                value: acc.value + g.value / n as f64,
                error: acc.error + g.error / n as f64,
                iterations_used: acc.iterations_used.max(g.iterations_used),
            }),
            (Err(e), _) | (_, Err(e)) => Err(e),
        };
    }
    let mut places = vec![arch_report(arch)];
    let primes = denominator_primes(&[a]);
    places.par_extend(primes.into_par_iter().map(|q| {
        let g = resultant_green(a, p, &q, d);
        prime_report(q, g)
    }));
    Ok(HeightReport::from_places(places))
}

fn resultant_green(a: &Rational, p: &ZPoly, prime: &Integer, d: Degree) -> LocalGreen {
    let dd = d.get();
    let n = p.degree().unwrap();
    let modulus = p.to_qpoly();
    let c = QPoly::x();
    // h_k = g_k mod P
    let mut h = (&QPoly::constant(Rational::from(a.pow(dd))) + &c).rem(&modulus);
    let mut prev: Option<i64> = None;
    let mut dn = Integer::from(1);
    for step in 0..8u32 {
        let v = resultant_monic(&modulus, &h).and_then(|r| valuation(&r, prime));
        if let (Some(v0), Some(v1)) = (prev, v) {
            if v0 < 0 && v1 == i64::from(dd) * v0 {
                // v0 belongs to g_{step}, i.e. index n+1 with d^n = dn / d
                let denom = Integer::from(&dn / dd) * n as u64;
                return LocalGreen::Exact(Rational::from((Integer::from(-v0), denom)));
            }
        }
        prev = v;
        h = (&h.pow(dd) + &c).rem(&modulus);
        dn *= dd;
        let _ = step;
    }
    LocalGreen::Unresolved { steps: 8 }
}

/// `Res(P, h) = prod h(alpha)` over the roots of monic `P`, as the
/// determinant of multiplication by `h` on `Q[c]/(P)`.
fn resultant_monic(p: &QPoly, h: &QPoly) -> Option<Rational> {
    let n = p.degree()?;
    let mut cols: Vec<QPoly> = Vec::with_capacity(n);
    let mut cur = h.rem(p);
    for _ in 0..n {
        cols.push(cur.clone());
        cur = (&cur * &QPoly::x()).rem(p);
    }
    let mut lcm = Integer::from(1);
    for col in &cols {
        lcm.lcm_mut(&col.denominator_lcm());
    }
    let mut m: Vec<Vec<Integer>> = (0..n)
        .map(|i| {
            cols.iter()
                .map(|col| {
                    let x = col.coeffs().get(i).cloned().unwrap_or_default() * Rational::from(&lcm);
                    x.into_numer_denom().0
                })
                .collect()
        })
        .collect();
    let det = bareiss(&mut m);
    Some(Rational::from((det, Integer::from((&lcm).pow(n as u32)))))
}

fn bareiss(m: &mut [Vec<Integer>]) -> Integer {
    let n = m.len();
    let mut sign = 1;
    let mut prev = Integer::from(1);
    for k in 0..n {
        if m[k][k].cmp0().is_eq() {
            match (k + 1..n).find(|&i| m[i][k].cmp0().is_ne()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return Integer::new(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = Integer::from(&m[k][k] * &m[i][j]) - Integer::from(&m[i][k] * &m[k][j]);
                m[i][j] = t / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    Integer::from(&m[n - 1][n - 1] * sign)
}
