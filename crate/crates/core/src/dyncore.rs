//! Iteration of `f_c(z) = z^d + c`: the iterate polynomials
//! `g_n(c) = f_c^n(a)`, rigorous numeric orbits and exact preperiodicity.

use std::collections::HashMap;
use std::fmt;

use num_complex::Complex64;
use rug::ops::Pow;
use rug::{Integer, Rational};
use serde::Serialize;

use crate::ball::{Ball, MpBall, Seed};
use crate::error::{Error, Result};
use crate::greens::escape_certificate;
use crate::numbers::GaussRat;
use crate::poly::{QPoly, ZPoly};

/// Largest `deg g_n = d^(n-1)` built unless the caller raises the cap.
pub const DEFAULT_DEGREE_CAP: u64 = 1 << 16;

/// Exact orbits stop once an iterate needs more bits than this.
pub const DEFAULT_BIT_CAP: u64 = 1 << 16;

/// The exponent `d >= 2` of `z^d + c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Degree(u32);

impl Degree {
    pub const TWO: Degree = Degree(2);
    pub const THREE: Degree = Degree(3);

    pub fn new(d: u32) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDegree(d));
        }
        Ok(Degree(d))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// `d^k`, or `None` on overflow.
    pub fn checked_pow(self, k: u32) -> Option<u64> {
        u64::from(self.0).checked_pow(k)
    }
}

impl TryFrom<u32> for Degree {
    type Error = Error;
    fn try_from(d: u32) -> Result<Self> {
        Degree::new(d)
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `g_n(c) = f_c^n(a)` as an exact polynomial in `c`, stored as `num / den`
/// with `num` in `Z[c]` and `den = q^(d^n)` for `a = p/q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IteratePoly {
    pub a: Rational,
    pub d: Degree,
    pub n: u32,
    num: ZPoly,
    den: Integer,
}

impl IteratePoly {
    pub fn degree(&self) -> usize {
        self.num.degree().unwrap_or(0)
    }

    pub fn numerator(&self) -> &ZPoly {
        &self.num
    }

    pub fn denominator(&self) -> &Integer {
        &self.den
    }

    /// Coefficients lowest degree first; integers whenever `a` is.
    pub fn coeffs(&self) -> Vec<Rational> {
        self.num
            .coeffs()
            .iter()
            .map(|c| Rational::from((c.clone(), self.den.clone())))
            .collect()
    }

    pub fn to_qpoly(&self) -> QPoly {
        QPoly::new(self.coeffs())
    }

    pub fn eval(&self, c: &Rational) -> Rational {
        self.num.eval(c) / Rational::from(&self.den)
    }

    /// `g_{n+1}` from `g_n`.
    pub fn next(&self) -> IteratePoly {
        let d = self.d.get();
        let den = Integer::from((&self.den).pow(d));
        let mut num = self.num.pow(d);
        let lin = ZPoly::new(vec![Integer::new(), den.clone()]);
        num = &num + &lin;
        IteratePoly { a: self.a.clone(), d: self.d, n: self.n + 1, num, den }
    }

    /// `self - other` as a polynomial over `Z` with positive leading
    /// coefficient, scaled by the common denominator (same roots).
    pub fn difference_z(&self, other: &IteratePoly) -> ZPoly {
        // the denominators are powers of the same integer, so one divides the other
        let diff = if self.den >= other.den {
            let k = Integer::from(&self.den / &other.den);
            &self.num - &other.num.scale(&k)
        } else {
            let k = Integer::from(&other.den / &self.den);
            &self.num.scale(&k) - &other.num
        };
        if diff.lc().is_some_and(|c| c.cmp0().is_lt()) {
            -diff
        } else {
            diff
        }
    }
}

impl fmt::Display for IteratePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}", self.to_qpoly())
        }
    }
}

/// Exact `g_n` for basepoint `a`, refusing degrees above [`DEFAULT_DEGREE_CAP`].
pub fn iterate_poly(a: &Rational, d: Degree, n: u32) -> Result<IteratePoly> {
    iterate_poly_capped(a, d, n, DEFAULT_DEGREE_CAP)
}

pub fn iterate_poly_capped(a: &Rational, d: Degree, n: u32, degree_cap: u64) -> Result<IteratePoly> {
    Ok(iterate_sequence(a, d, n, degree_cap)?.pop().expect("n >= 1"))
}

/// `[g_1, ..., g_n]`.
pub fn iterate_sequence(a: &Rational, d: Degree, n: u32, degree_cap: u64) -> Result<Vec<IteratePoly>> {
    if n == 0 {
        return Err(Error::Precondition("iterate index n must be at least 1".into()));
    }
    check_degree(d, n, degree_cap)?;
    let dd = d.get();
    let den = Integer::from(a.denom().pow(dd));
    let num0 = Integer::from(a.numer().pow(dd));
    let g1 = IteratePoly {
        a: a.clone(),
        d,
        n: 1,
        num: ZPoly::new(vec![num0, den.clone()]),
        den,
    };
    let mut out = vec![g1];
    while out.len() < n as usize {
        let next = out.last().unwrap().next();
        out.push(next);
    }
    Ok(out)
}

pub(crate) fn check_degree(d: Degree, n: u32, degree_cap: u64) -> Result<()> {
    match d.checked_pow(n - 1) {
        Some(deg) if deg <= degree_cap => Ok(()),
        Some(deg) => Err(Error::DegreeCap { degree: deg, cap: degree_cap }),
        None => Err(Error::DegreeCap { degree: u64::MAX, cap: degree_cap }),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum OrbitStatus {
    /// `z_step` is certified past the escape radius.
    Escaped { step: u32, modulus: f64 },
    /// No verdict within `cap` steps (or the exact iterates grew too large).
    BoundedUnresolved { cap: u32 },
    /// `z_tail = z_{tail + period}` with both minimal.
    PreperiodicExact { tail: u32, period: u32 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrbitResult {
    pub status: OrbitStatus,
    /// `z_0 = a, z_1, ...` (rounded to doubles for the exact orbit).
    pub trace: Option<Vec<(f64, f64)>>,
}

impl OrbitResult {
    pub fn is_escaped(&self) -> bool {
        matches!(self.status, OrbitStatus::Escaped { .. })
    }

    pub fn is_preperiodic(&self) -> bool {
        matches!(self.status, OrbitStatus::PreperiodicExact { .. })
    }
}

/// Orbit of `a` under `f_c` in ball arithmetic at `working_precision` bits.
///
/// Escaped only when a whole ball lies outside the radius from
/// [`escape_certificate`]; fails with `PrecisionExhausted` once a ball is
/// wider than that radius.
pub fn orbit_numeric(
    a: Complex64,
    c: Complex64,
    d: Degree,
    max_iter: u32,
    working_precision: u32,
) -> Result<OrbitResult> {
    if max_iter == 0 {
        return Err(Error::Precondition("max_iter must be at least 1".into()));
    }
    if working_precision < 53 {
        return Err(Error::Precondition("working precision must be at least 53 bits".into()));
    }
    let exact = |z: Complex64| {
        GaussRat::from_complex64(z).ok_or_else(|| Error::Precondition("non-finite input".into()))
    };
    let cb = MpBall::from_seed(&Seed::Exact(exact(c)?), working_precision);
    let mut z = MpBall::from_seed(&Seed::Exact(exact(a)?), working_precision);
    // pad so that rounding in (2|c|)^(1/d) cannot shrink the threshold
    let r_star = escape_certificate(c, d) * (1.0 + 1e-12);
    let ln_r = r_star.ln();
    let mut trace = Vec::new();
    for step in 0..=max_iter {
        trace.push((z.mid.re.to_f64(), z.mid.im.to_f64()));
        let (lo, _) = z.ln_abs_bounds();
        if lo > ln_r {
            let modulus = z.mid.abs().to_f64();
            return Ok(OrbitResult { status: OrbitStatus::Escaped { step, modulus }, trace: Some(trace) });
        }
        let rad = z.rad();
        if rad >= r_star {
            return Err(Error::PrecisionExhausted { step, radius: rad, margin: r_star });
        }
        if step < max_iter {
            z = z.pow(d.get()).add(&cb);
        }
    }
    Ok(OrbitResult { status: OrbitStatus::BoundedUnresolved { cap: max_iter }, trace: Some(trace) })
}

/// Exact orbit of `a` under `f_c` over `Q(i)`, at most `cap` steps.
pub fn detect_preperiodic_exact(a: &GaussRat, c: &GaussRat, d: Degree, cap: u32) -> OrbitResult {
    detect_preperiodic_exact_bits(a, c, d, cap, DEFAULT_BIT_CAP)
}

pub fn detect_preperiodic_exact_bits(a: &GaussRat, c: &GaussRat, d: Degree, cap: u32, bit_cap: u64) -> OrbitResult {
    let dd = d.get();
    let four_c2 = c.norm_sqr().square() * 4u32;
    let escaped = |z: &GaussRat| {
        let n = z.norm_sqr();
        n > 9 && Rational::from((&n).pow(dd)) > four_c2
    };
    let mut seen: HashMap<GaussRat, u32> = HashMap::new();
    let mut trace = Vec::new();
    let mut z = a.clone();
    for step in 0..=cap {
        let zc = z.to_complex64();
        trace.push((zc.re, zc.im));
        if escaped(&z) {
            return OrbitResult {
                status: OrbitStatus::Escaped { step, modulus: zc.norm() },
                trace: Some(trace),
            };
        }
        if let Some(&j) = seen.get(&z) {
            trace.pop();
            return OrbitResult {
                status: OrbitStatus::PreperiodicExact { tail: j, period: step - j },
                trace: Some(trace),
            };
        }
        if z.bit_size() > bit_cap || step == cap {
            return OrbitResult { status: OrbitStatus::BoundedUnresolved { cap: step }, trace: Some(trace) };
        }
        let next = &z.pow(dd) + c;
        seen.insert(std::mem::replace(&mut z, next), step);
    }
    unreachable!()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn iterate_poly_examples() {
        let g = iterate_poly(&q(0, 1), Degree::TWO, 3).unwrap();
        assert_eq!(g.numerator(), &ZPoly::from_i64s(&[0, 1, 1, 2, 1]));
        let g = iterate_poly(&q(1, 1), Degree::TWO, 2).unwrap();
        assert_eq!(g.numerator(), &ZPoly::from_i64s(&[1, 3, 1]));
        let g = iterate_poly(&q(0, 1), Degree::THREE, 2).unwrap();
        assert_eq!(g.numerator(), &ZPoly::from_i64s(&[0, 1, 0, 1]));
        assert_eq!(g.to_string(), "c^3+c");
        assert!(matches!(
            iterate_poly(&q(0, 1), Degree::TWO, 18),
            Err(Error::DegreeCap { degree: 131072, .. })
        ));
    }

    #[test]
    fn rational_basepoint_is_monic_over_q() {
        let g = iterate_poly(&q(1, 2), Degree::TWO, 3).unwrap();
        let co = g.coeffs();
        assert_eq!(co.len(), 5);
        assert_eq!(co[4], 1);
        // g_3(0) = f_0^3(1/2) = 1/256
        assert_eq!(g.eval(&q(0, 1)), q(1, 256));
    }

    #[test]
    fn orbit_numeric_examples() {
        let i = Complex64::new(0.0, 1.0);
        let r = orbit_numeric(Complex64::new(0.0, 0.0), i, Degree::TWO, 200, 128).unwrap();
        assert_eq!(r.status, OrbitStatus::BoundedUnresolved { cap: 200 });
        let r = orbit_numeric(Complex64::new(1.0, 0.0), i, Degree::TWO, 200, 128).unwrap();
        match r.status {
            OrbitStatus::Escaped { step, modulus } => {
                assert_eq!(step, 3);
                assert!((modulus - 82f64.sqrt()).abs() < 1e-12);
            }
            s => panic!("{s:?}"),
        }
        let r = orbit_numeric(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), Degree::TWO, 50, 64).unwrap();
        assert!(r.is_escaped());
    }

    #[test]
    fn exact_detection_examples() {
        let g = |re: i64| GaussRat::from_i64(re, 0);
        let r = detect_preperiodic_exact(&g(0), &g(-2), Degree::TWO, 100);
        assert_eq!(r.status, OrbitStatus::PreperiodicExact { tail: 2, period: 1 });
        let r = detect_preperiodic_exact(&g(1), &g(-3), Degree::TWO, 100);
        assert_eq!(r.status, OrbitStatus::PreperiodicExact { tail: 0, period: 2 });
        let r = detect_preperiodic_exact(&g(0), &GaussRat::i(), Degree::TWO, 100);
        assert_eq!(r.status, OrbitStatus::PreperiodicExact { tail: 2, period: 2 });
        let third = GaussRat::real(q(1, 3));
        let r = detect_preperiodic_exact(&g(0), &third, Degree::TWO, 100);
        assert!(r.is_escaped(), "{:?}", r.status);
        let r = detect_preperiodic_exact(&g(0), &GaussRat::real(q(-1, 4)), Degree::TWO, 20);
        assert!(matches!(r.status, OrbitStatus::BoundedUnresolved { .. }));
    }

    proptest! {
        #[test]
        fn recurrence_and_evaluation(an in -6i64..6, ad in 1i64..5, cn in -5i64..5, cd in 1i64..4, d in 2u32..4) {
            let a = q(an, ad);
            let c = q(cn, cd);
            let d = Degree::new(d).unwrap();
            let seq = iterate_sequence(&a, d, 4, DEFAULT_DEGREE_CAP).unwrap();
            let mut z = a.clone();
            for g in &seq {
                z = Rational::from((&z).pow(d.get())) + &c;
                prop_assert_eq!(g.eval(&c), z.clone());
                prop_assert_eq!(g.degree() as u64, d.checked_pow(g.n - 1).unwrap());
                let cs = g.coeffs();
                prop_assert_eq!(cs.last().unwrap(), &Rational::from(1));
            }
            for w in seq.windows(2) {
                let q1 = w[0].to_qpoly();
                let rebuilt = &q1.pow(d.get()) + &QPoly::x();
                prop_assert_eq!(rebuilt, w[1].to_qpoly());
            }
        }

        #[test]
        fn depends_on_a_power_only(an in -6i64..6, ad in 1i64..5) {
            let a = q(an, ad);
            let b = -a.clone();
            let ga = iterate_poly(&a, Degree::TWO, 4).unwrap();
            let gb = iterate_poly(&b, Degree::TWO, 4).unwrap();
            prop_assert_eq!(ga.to_qpoly(), gb.to_qpoly());
        }

        #[test]
        fn preperiodic_verdict_is_stable(cn in -3i64..2, an in -2i64..3) {
            let a = GaussRat::from_i64(an, 0);
            let c = GaussRat::from_i64(cn, 0);
            let r1 = detect_preperiodic_exact(&a, &c, Degree::TWO, 30);
            let r2 = detect_preperiodic_exact(&a, &c, Degree::TWO, 300);
            if r1.is_preperiodic() {
                prop_assert_eq!(r1.status, r2.status);
            }
        }
    }
}
