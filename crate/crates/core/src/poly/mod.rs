//! Dense univariate polynomials over `Z` and `Q`, lowest degree first.
//!
//! The variable is `c` in parameter space and `t` in the function field; the
//! types do not care which.

mod factor;
mod gcd;
pub(crate) mod modp;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::{Complete, Integer, Rational};

use crate::numbers::GaussRat;

pub use factor::{factor_over_q, rational_roots};
pub use gcd::{gcd_q, gcd_z, squarefree_decomposition};

/// Polynomial with integer coefficients. The zero polynomial has no coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZPoly {
    coeffs: Vec<Integer>,
}

impl ZPoly {
    pub fn new(mut coeffs: Vec<Integer>) -> Self {
        while coeffs.last().is_some_and(|c| c.cmp0().is_eq()) {
            coeffs.pop();
        }
        ZPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        ZPoly::new(coeffs.iter().map(|&c| Integer::from(c)).collect())
    }

    pub fn zero() -> Self {
        ZPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        ZPoly::constant(Integer::from(1))
    }

    pub fn constant(c: Integer) -> Self {
        ZPoly::new(vec![c])
    }

    /// `x - r`.
    pub fn linear_root(r: &Integer) -> Self {
        ZPoly::new(vec![Integer::from(-r), Integer::from(1)])
    }

    pub fn coeffs(&self) -> &[Integer] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Integer> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lc(&self) -> Option<&Integer> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.lc().is_some_and(|c| *c == 1)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == 1
    }

    pub fn derivative(&self) -> ZPoly {
        ZPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| Integer::from(c * k as u64))
                .collect(),
        )
    }

    pub fn content(&self) -> Integer {
        let mut g = Integer::new();
        for c in &self.coeffs {
            g.gcd_mut(c);
            if g == 1 {
                break;
            }
        }
        g
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive_part(&self) -> ZPoly {
        if self.is_zero() {
            return ZPoly::zero();
        }
        let mut g = self.content();
        if self.lc().is_some_and(|c| c.cmp0().is_lt()) {
            g = -g;
        }
        ZPoly::new(self.coeffs.iter().map(|c| c.div_exact_ref(&g).complete()).collect())
    }

    pub fn scale(&self, k: &Integer) -> ZPoly {
        ZPoly::new(self.coeffs.iter().map(|c| Integer::from(c * k)).collect())
    }

    pub fn pow(&self, k: u32) -> ZPoly {
        let mut acc = ZPoly::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = base.square();
            }
        }
        acc
    }

    /// Squaring with the symmetric-product shortcut (about half the multiplications).
    pub fn square(&self) -> ZPoly {
        let n = self.coeffs.len();
        if n == 0 {
            return ZPoly::zero();
        }
        let mut out = vec![Integer::new(); 2 * n - 1];
        for i in 0..n {
            for j in (i + 1)..n {
                out[i + j] += &self.coeffs[i] * &self.coeffs[j];
            }
        }
        for c in out.iter_mut() {
            *c <<= 1;
        }
        for i in 0..n {
            out[2 * i] += self.coeffs[i].square_ref();
        }
        ZPoly::new(out)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    pub fn eval_integer(&self, x: &Integer) -> Integer {
        let mut acc = Integer::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    pub fn eval_gauss(&self, x: &GaussRat) -> GaussRat {
        let mut acc = GaussRat::default();
        for c in self.coeffs.iter().rev() {
            acc = &acc * x;
            acc.re += c;
        }
        acc
    }

    /// Exact quotient `self / divisor` in `Z[x]`, or `None` when the division
    /// leaves a remainder or a non-integral quotient.
    pub fn div_exact(&self, divisor: &ZPoly) -> Option<ZPoly> {
        let dd = divisor.degree()?;
        if self.is_zero() {
            return Some(ZPoly::zero());
        }
        let nd = self.degree()?;
        if nd < dd {
            return None;
        }
        let lc = divisor.lc()?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Integer::new(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let top = &rem[k + dd];
            if top.cmp0().is_eq() {
                continue;
            }
            if !top.is_divisible(lc) {
                return None;
            }
            let q = top.div_exact_ref(lc).complete();
            for (i, dc) in divisor.coeffs.iter().enumerate() {
                rem[k + i] -= &q * dc;
            }
            quot[k] = q;
        }
        if rem.iter().any(|c| c.cmp0().is_ne()) {
            return None;
        }
        Some(ZPoly::new(quot))
    }

    pub fn divides(&self, other: &ZPoly) -> bool {
        other.div_exact(self).is_some()
    }

    /// Largest coefficient bit length.
    pub fn max_coeff_bits(&self) -> u32 {
        self.coeffs.iter().map(|c| c.significant_bits()).max().unwrap_or(0)
    }

    pub fn to_qpoly(&self) -> QPoly {
        QPoly::new(self.coeffs.iter().map(Rational::from).collect())
    }

    /// Taylor shift `p(x + s)` by an integer.
    pub fn shift(&self, s: &Integer) -> ZPoly {
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let t = Integer::from(&c[j + 1] * s);
                c[j] += t;
            }
        }
        ZPoly::new(c)
    }
}

impl<'a> Add<&'a ZPoly> for &'a ZPoly {
    type Output = ZPoly;
    fn add(self, rhs: &ZPoly) -> ZPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let mut c = self.coeffs.get(k).cloned().unwrap_or_default();
            if let Some(r) = rhs.coeffs.get(k) {
                c += r;
            }
            out.push(c);
        }
        ZPoly::new(out)
    }
}

impl<'a> Sub<&'a ZPoly> for &'a ZPoly {
    type Output = ZPoly;
    fn sub(self, rhs: &ZPoly) -> ZPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let mut c = self.coeffs.get(k).cloned().unwrap_or_default();
            if let Some(r) = rhs.coeffs.get(k) {
                c -= r;
            }
            out.push(c);
        }
        ZPoly::new(out)
    }
}

impl<'a> Mul<&'a ZPoly> for &'a ZPoly {
    type Output = ZPoly;
    fn mul(self, rhs: &ZPoly) -> ZPoly {
        if self.is_zero() || rhs.is_zero() {
            return ZPoly::zero();
        }
        let mut out = vec![Integer::new(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.cmp0().is_eq() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ZPoly::new(out)
    }
}

impl Neg for ZPoly {
    type Output = ZPoly;
    fn neg(self) -> ZPoly {
        ZPoly::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

/// A [`ZPoly`] printed in a chosen variable.
pub struct InVar<'a>(&'a ZPoly, &'a str);

impl fmt::Display for InVar<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(f, self.0.coeffs.iter().map(Rational::from), self.1)
    }
}

impl ZPoly {
    pub fn in_var<'a>(&'a self, var: &'a str) -> InVar<'a> {
        InVar(self, var)
    }
}

impl fmt::Display for ZPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(f, self.coeffs.iter().map(Rational::from), "c")
    }
}

/// Polynomial with rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct QPoly {
    coeffs: Vec<Rational>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.cmp0().is_eq()) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        QPoly::constant(Rational::from(1))
    }

    pub fn constant(c: Rational) -> Self {
        QPoly::new(vec![c])
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        QPoly::new(vec![Rational::new(), Rational::from(1)])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == 1
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lc(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn monic(&self) -> QPoly {
        match self.lc() {
            None => QPoly::zero(),
            Some(lc) => {
                let inv = Rational::from(lc.recip_ref());
                QPoly::new(self.coeffs.iter().map(|c| Rational::from(c * &inv)).collect())
            }
        }
    }

    pub fn scale(&self, k: &Rational) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| Rational::from(c * k)).collect())
    }

    pub fn derivative(&self) -> QPoly {
        QPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| Rational::from(c * Integer::from(k)))
                .collect(),
        )
    }

    pub fn pow(&self, k: u32) -> QPoly {
        let mut acc = QPoly::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    pub fn eval_gauss(&self, x: &GaussRat) -> GaussRat {
        let mut acc = GaussRat::default();
        for c in self.coeffs.iter().rev() {
            acc = &acc * x;
            acc.re += c;
        }
        acc
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &QPoly) -> (QPoly, QPoly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let Some(nd) = self.degree() else {
            return (QPoly::zero(), QPoly::zero());
        };
        if nd < dd {
            return (QPoly::zero(), self.clone());
        }
        let inv = Rational::from(divisor.coeffs[dd].recip_ref());
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::new(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            if rem[k + dd].cmp0().is_eq() {
                continue;
            }
            let q = Rational::from(&rem[k + dd] * &inv);
            for (i, dc) in divisor.coeffs.iter().enumerate() {
                rem[k + i] -= Rational::from(&q * dc);
            }
            quot[k] = q;
        }
        rem.truncate(dd);
        (QPoly::new(quot), QPoly::new(rem))
    }

    pub fn rem(&self, divisor: &QPoly) -> QPoly {
        self.div_rem(divisor).1
    }

    /// Clears denominators and content: the primitive integer polynomial with
    /// positive leading coefficient that is a rational multiple of `self`.
    pub fn primitive_zpoly(&self) -> ZPoly {
        let mut l = Integer::from(1);
        for c in &self.coeffs {
            l.lcm_mut(c.denom());
        }
        let z = ZPoly::new(
            self.coeffs
                .iter()
                .map(|c| c.numer() * Integer::from(&l / c.denom()))
                .collect(),
        );
        z.primitive_part()
    }

    /// The polynomial as an element of `Z[x]` when every coefficient is integral.
    pub fn to_zpoly(&self) -> Option<ZPoly> {
        if self.coeffs.iter().all(|c| *c.denom() == 1) {
            Some(ZPoly::new(self.coeffs.iter().map(|c| c.numer().clone()).collect()))
        } else {
            None
        }
    }

    /// Least common multiple of the coefficient denominators.
    pub fn denominator_lcm(&self) -> Integer {
        let mut l = Integer::from(1);
        for c in &self.coeffs {
            l.lcm_mut(c.denom());
        }
        l
    }
}

impl<'a> Add<&'a QPoly> for &'a QPoly {
    type Output = QPoly;
    fn add(self, rhs: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let mut c = self.coeffs.get(k).cloned().unwrap_or_default();
            if let Some(r) = rhs.coeffs.get(k) {
                c += r;
            }
            out.push(c);
        }
        QPoly::new(out)
    }
}

impl<'a> Sub<&'a QPoly> for &'a QPoly {
    type Output = QPoly;
    fn sub(self, rhs: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let mut c = self.coeffs.get(k).cloned().unwrap_or_default();
            if let Some(r) = rhs.coeffs.get(k) {
                c -= r;
            }
            out.push(c);
        }
        QPoly::new(out)
    }
}

impl<'a> Mul<&'a QPoly> for &'a QPoly {
    type Output = QPoly;
    fn mul(self, rhs: &QPoly) -> QPoly {
        if self.is_zero() || rhs.is_zero() {
            return QPoly::zero();
        }
        // Work over Z with a common denominator; much faster than summing rationals.
        let (za, da) = to_scaled(self);
        let (zb, db) = to_scaled(rhs);
        let prod = &za * &zb;
        let den = Integer::from(&da * &db);
        QPoly::new(
            prod.coeffs
                .into_iter()
                .map(|c| Rational::from((c, den.clone())))
                .collect(),
        )
    }
}

fn to_scaled(p: &QPoly) -> (ZPoly, Integer) {
    let l = p.denominator_lcm();
    let z = ZPoly::new(
        p.coeffs
            .iter()
            .map(|c| c.numer() * Integer::from(&l / c.denom()))
            .collect(),
    );
    (z, l)
}

impl Neg for QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        QPoly::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl From<&ZPoly> for QPoly {
    fn from(p: &ZPoly) -> QPoly {
        p.to_qpoly()
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(f, self.coeffs.iter().cloned(), "c")
    }
}

/// Writes a polynomial as `c^4+2*c^3-c+1` (highest degree first).
pub(crate) fn write_poly(
    f: &mut fmt::Formatter<'_>,
    coeffs: impl DoubleEndedIterator<Item = Rational> + ExactSizeIterator,
    var: &str,
) -> fmt::Result {
    let n = coeffs.len();
    if n == 0 {
        return write!(f, "0");
    }
    let mut first = true;
    for (k, c) in coeffs.enumerate().collect::<Vec<_>>().into_iter().rev() {
        if c.cmp0().is_eq() {
            continue;
        }
        let neg = c.cmp0().is_lt();
        let a = Rational::from(c.abs_ref());
        if neg {
            write!(f, "-")?;
        } else if !first {
            write!(f, "+")?;
        }
        first = false;
        match (k, a == 1) {
            (0, _) => write!(f, "{a}")?,
            (1, true) => write!(f, "{var}")?,
            (1, false) => write!(f, "{a}*{var}")?,
            (_, true) => write!(f, "{var}^{k}")?,
            (_, false) => write!(f, "{a}*{var}^{k}")?,
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn display_and_basic_ops() {
        let p = ZPoly::from_i64s(&[0, 1, 1, 2, 1]);
        assert_eq!(p.to_string(), "c^4+2*c^3+c^2+c");
        assert_eq!(ZPoly::zero().to_string(), "0");
        let q = ZPoly::from_i64s(&[1, -1]);
        assert_eq!(q.to_string(), "-c+1");
        assert_eq!((&p * &ZPoly::one()), p);
        assert_eq!(p.derivative(), ZPoly::from_i64s(&[1, 2, 6, 4]));
    }

    #[test]
    fn exact_division() {
        let a = ZPoly::from_i64s(&[0, 0, 1, 2, 1]); // c^2 (c+1)^2
        let b = ZPoly::from_i64s(&[0, 1, 1]); // c (c+1)
        assert_eq!(a.div_exact(&b).unwrap(), b);
        assert!(a.div_exact(&ZPoly::from_i64s(&[2, 1])).is_none());
        assert!(a.div_exact(&ZPoly::from_i64s(&[0, 2])).is_none());
    }

    #[test]
    fn qpoly_division() {
        let a = QPoly::from(&ZPoly::from_i64s(&[1, 0, 0, 1]));
        let b = QPoly::from(&ZPoly::from_i64s(&[1, 2]));
        let (q, r) = a.div_rem(&b);
        assert_eq!(&(&q * &b) + &r, a);
        assert!(r.degree().unwrap_or(0) == 0);
    }

    #[test]
    fn taylor_shift() {
        let p = ZPoly::from_i64s(&[0, 0, 1]);
        assert_eq!(p.shift(&Integer::from(1)), ZPoly::from_i64s(&[1, 2, 1]));
    }

    proptest! {
        #[test]
        fn mul_then_divide_roundtrips(a in proptest::collection::vec(-20i64..20, 1..8),
                                     b in proptest::collection::vec(-20i64..20, 1..6)) {
            let pa = ZPoly::from_i64s(&a);
            let pb = ZPoly::from_i64s(&b);
            prop_assume!(!pb.is_zero());
            let prod = &pa * &pb;
            prop_assert_eq!(prod.div_exact(&pb), Some(pa.clone()));
            prop_assert_eq!(pa.square(), &pa * &pa);
            let x = Rational::from((3, 7));
            prop_assert_eq!(prod.eval(&x), pa.eval(&x) * pb.eval(&x));
        }
    }
}
