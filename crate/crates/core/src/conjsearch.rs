//! Parameters `c` at which two marked points `a` and `b` are both
//! preperiodic for `z^d + c`, up to an iterate budget.
//!
//! Every root of `g_l - g_m` is also a root of `g_{l+1} - g_{m+1}`, so the
//! pairs with `l <= L` are covered by the rows `g_L - g_m`, `1 <= m < L`.
//! The common parameters up to budget `L` are the roots of the pairwise
//! gcds of the `a`-rows with the `b`-rows. These gcds are small even when
//! the rows have degree in the hundreds, and they are factored exactly over `Q`.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use rug::ops::Pow;
use rug::Rational;
use serde::{Serialize, Serializer};

use crate::dyncore::{detect_preperiodic_exact, iterate_sequence, Degree};
use crate::error::{Error, Result};
use crate::numbers::GaussRat;
use crate::poly::{factor_over_q, gcd_q, gcd_z, QPoly, ZPoly};

/// Exact monic gcd over `Q[c]` (modular, trial-division verified).
pub fn difference_gcd(pa: &QPoly, pb: &QPoly) -> Result<QPoly> {
    if pa.is_zero() || pb.is_zero() {
        return Err(Error::Precondition("difference_gcd needs nonzero inputs".into()));
    }
    Ok(gcd_q(pa, pb))
}

#[derive(Clone, Debug, Serialize)]
pub struct CommonFactor {
    /// Irreducible, primitive, positive leading coefficient.
    #[serde(serialize_with = "ser_display")]
    pub poly: ZPoly,
    pub degree: usize,
    /// Smallest `(l, m)` with `poly | g_l - g_m`, for `a` and for `b`.
    pub source_a: (u32, u32),
    pub source_b: (u32, u32),
}

#[derive(Clone, Debug, Serialize)]
pub struct Coverage {
    /// Rows `g_L - g_m` actually processed on each side use this `L`.
    pub l_processed: u32,
    pub pairs_per_side: u32,
    /// False when the degree cap forced `l_processed < lmax`.
    pub complete: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CommonRootReport {
    #[serde(serialize_with = "ser_display")]
    pub a: Rational,
    #[serde(serialize_with = "ser_display")]
    pub b: Rational,
    pub d: Degree,
    pub lmax: u32,
    pub factors: Vec<CommonFactor>,
    #[serde(serialize_with = "ser_display_vec")]
    pub rational_roots: Vec<Rational>,
    pub coverage: Coverage,
}

fn ser_display<T: std::fmt::Display, S: Serializer>(x: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(x)
}

fn ser_display_vec<T: std::fmt::Display, S: Serializer>(xs: &[T], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(|x| x.to_string()))
}

impl CommonRootReport {
    /// The non-linear irreducible factors.
    pub fn algebraic_factors(&self) -> impl Iterator<Item = &CommonFactor> {
        self.factors.iter().filter(|f| f.degree > 1)
    }
}

/// Rows `g_L - g_m`, `m = 1..L-1`, as primitive integer polynomials.
fn rows(a: &Rational, d: Degree, l: u32, degree_cap: u64) -> Result<Vec<ZPoly>> {
    let seq = iterate_sequence(a, d, l, degree_cap)?;
    let top = &seq[l as usize - 1];
    Ok(seq[..l as usize - 1].par_iter().map(|g| top.difference_z(g).primitive_part()).collect())
}

/// Smallest `(l, m)`, `l > m >= 1`, with `g_l = g_m` modulo `f`.
fn provenance(a: &Rational, f: &ZPoly, d: Degree, lmax: u32) -> Option<(u32, u32)> {
    let modulus = f.to_qpoly();
    let c = QPoly::x();
    let mut h = (&QPoly::constant(Rational::from(a.pow(d.get()))) + &c).rem(&modulus);
    let mut seen: HashMap<QPoly, u32> = HashMap::new();
    for n in 1..=lmax {
        if let Some(&m) = seen.get(&h) {
            return Some((n, m));
        }
        let next = (&h.pow(d.get()) + &c).rem(&modulus);
        seen.insert(std::mem::replace(&mut h, next), n);
    }
    None
}

/// Common preperiodic parameters of `a` and `b` with both orbits inside the
/// budget `l, m < lmax` (indices as in `g_l - g_m`, `l <= lmax`).
pub fn common_preperiodic_params(a: &Rational, b: &Rational, d: Degree, lmax: u32, degree_cap: u64) -> Result<CommonRootReport> {
    if lmax < 2 {
        return Err(Error::Precondition("lmax must be at least 2".into()));
    }
    if Rational::from(a.pow(d.get())) == Rational::from(b.pow(d.get())) {
        return Err(Error::Precondition(format!(
            "a^d = b^d for a={a}, b={b}: the two sets coincide and the common parameters are infinite"
        )));
    }
    // largest L with d^(L-1) <= degree_cap
    let mut l = lmax;
    while l > 1 && d.checked_pow(l - 1).is_none_or(|deg| deg > degree_cap) {
        l -= 1;
    }
    if l < 2 {
        return Err(Error::DegreeCap { degree: u64::from(d.get()), cap: degree_cap });
    }
    let (ra, rb) = rayon::join(|| rows(a, d, l, degree_cap), || rows(b, d, l, degree_cap));
    let (ra, rb) = (ra?, rb?);
    let pairs: Vec<(usize, usize)> = (0..ra.len()).flat_map(|i| (0..rb.len()).map(move |j| (i, j))).collect();
    let gcds: Vec<ZPoly> = pairs.par_iter().map(|&(i, j)| gcd_z(&ra[i], &rb[j]).primitive_part()).collect();

    let mut distinct: BTreeMap<(usize, ZPoly), ()> = BTreeMap::new();
    for g in gcds.iter().filter(|g| g.degree().unwrap_or(0) > 0) {
        for (f, _) in factor_over_q(g) {
            distinct.insert((f.degree().unwrap(), f), ());
        }
    }
    let factors: Vec<CommonFactor> = distinct
        .into_keys()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(degree, poly)| {
            let source_a = provenance(a, &poly, d, l).expect("factor divides some a-row");
            let source_b = provenance(b, &poly, d, l).expect("factor divides some b-row");
            CommonFactor { poly, degree, source_a, source_b }
        })
        .collect();
    let mut rational_roots: Vec<Rational> = factors
        .iter()
        .filter(|f| f.degree == 1)
        .map(|f| Rational::from((-f.poly.coeffs()[0].clone(), f.poly.coeffs()[1].clone())))
        .collect();
    rational_roots.sort();
    Ok(CommonRootReport {
        a: a.clone(),
        b: b.clone(),
        d,
        lmax,
        factors,
        rational_roots,
        coverage: Coverage { l_processed: l, pairs_per_side: l - 1, complete: l == lmax },
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct RootCheck {
    #[serde(serialize_with = "ser_display")]
    pub root: Rational,
    pub a_preperiodic: bool,
    pub b_preperiodic: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FactorCheck {
    #[serde(serialize_with = "ser_display")]
    pub factor: ZPoly,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub roots: Vec<RootCheck>,
    pub factors: Vec<FactorCheck>,
    pub all_pass: bool,
}

/// Re-checks every rational root by exact iteration and every factor by
/// exact division into freshly built difference polynomials.
pub fn verify_common(report: &CommonRootReport) -> VerifyReport {
    let (a, b, d) = (GaussRat::real(report.a.clone()), GaussRat::real(report.b.clone()), report.d);
    let roots: Vec<RootCheck> = report
        .rational_roots
        .iter()
        .map(|r| {
            let c = GaussRat::real(r.clone());
            let a_preperiodic = detect_preperiodic_exact(&a, &c, d, 256).is_preperiodic();
            let b_preperiodic = detect_preperiodic_exact(&b, &c, d, 256).is_preperiodic();
            RootCheck { root: r.clone(), a_preperiodic, b_preperiodic, pass: a_preperiodic && b_preperiodic }
        })
        .collect();
    let fresh = |x: &Rational, (l, m): (u32, u32)| -> Option<ZPoly> {
        let seq = iterate_sequence(x, d, l, u64::MAX).ok()?;
        Some(seq[l as usize - 1].difference_z(&seq[m as usize - 1]))
    };
    let factors: Vec<FactorCheck> = report
        .factors
        .par_iter()
        .map(|f| {
            let ok = |x: &Rational, src| fresh(x, src).is_some_and(|p| f.poly.divides(&p));
            FactorCheck { factor: f.poly.clone(), pass: ok(&report.a, f.source_a) && ok(&report.b, f.source_b) }
        })
        .collect();
    let all_pass = roots.iter().all(|r| r.pass) && factors.iter().all(|f| f.pass);
    VerifyReport { roots, factors, all_pass }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyncore::DEFAULT_DEGREE_CAP;

    fn zp(c: &[i64]) -> ZPoly {
        ZPoly::from_i64s(c)
    }

    fn q(n: i64) -> Rational {
        Rational::from(n)
    }

    #[test]
    fn gcd_examples() {
        let pa = (&zp(&[0, 0, 1]) * &zp(&[1, 2, 1])).to_qpoly();
        let pb = (&(&zp(&[0, 1]) * &zp(&[1, 1])) * &(&zp(&[2, 1]) * &zp(&[3, 1]))).to_qpoly();
        assert_eq!(difference_gcd(&pa, &pb).unwrap(), zp(&[0, 1, 1]).to_qpoly());
        let p = zp(&[2, 0, 4]).to_qpoly();
        assert_eq!(difference_gcd(&p, &p).unwrap(), p.monic());
        assert_eq!(difference_gcd(&zp(&[0, 0, 1]).to_qpoly(), &zp(&[3, 1]).to_qpoly()).unwrap(), QPoly::one());
        assert!(difference_gcd(&QPoly::zero(), &p).is_err());
    }

    #[test]
    fn small_budget_search() {
        let r = common_preperiodic_params(&q(0), &q(1), Degree::TWO, 3, DEFAULT_DEGREE_CAP).unwrap();
        assert_eq!(r.rational_roots, vec![q(-2), q(-1), q(0)]);
        assert_eq!(r.algebraic_factors().count(), 0);
        let v = verify_common(&r);
        assert!(v.all_pass, "{v:?}");
        let back = common_preperiodic_params(&q(1), &q(0), Degree::TWO, 3, DEFAULT_DEGREE_CAP).unwrap();
        assert_eq!(back.rational_roots, r.rational_roots);
        // -2: 0 -> -2 -> 2 -> 2, so g_3 = g_2 for a = 0; 1 -> -1 -> -1, so h_2 = h_1
        let f = r.factors.iter().find(|f| f.poly == zp(&[2, 1])).unwrap();
        assert_eq!((f.source_a, f.source_b), ((3, 2), (2, 1)));
    }

    #[test]
    fn guarded_and_capped() {
        assert!(matches!(
            common_preperiodic_params(&q(0), &q(0), Degree::TWO, 2, DEFAULT_DEGREE_CAP),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            common_preperiodic_params(&q(1), &q(-1), Degree::TWO, 4, DEFAULT_DEGREE_CAP),
            Err(Error::Precondition(_))
        ));
        let r = common_preperiodic_params(&q(0), &q(1), Degree::TWO, 8, 16).unwrap();
        assert_eq!(r.coverage.l_processed, 5);
        assert!(!r.coverage.complete);
    }

    #[test]
    fn budget_monotone() {
        let mut prev: Vec<ZPoly> = Vec::new();
        for l in 2..=6 {
            let r = common_preperiodic_params(&q(0), &Rational::from((1, 2)), Degree::TWO, l, DEFAULT_DEGREE_CAP).unwrap();
            let now: Vec<ZPoly> = r.factors.iter().map(|f| f.poly.clone()).collect();
            assert!(prev.iter().all(|f| now.contains(f)));
            assert!(verify_common(&r).all_pass);
            prev = now;
        }
    }
}
