//! Exact scalars: Gaussian rationals, rational parsing and integer factoring.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_complex::Complex64;
use rug::integer::IsPrime;
use rug::{Integer, Rational};

use crate::error::{Error, Result};

/// An element `re + im*i` of `Q(i)`, kept in lowest terms by `rug`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GaussRat {
    pub re: Rational,
    pub im: Rational,
}

impl GaussRat {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussRat { re, im }
    }

    pub fn real(re: Rational) -> Self {
        GaussRat { re, im: Rational::new() }
    }

    pub fn from_i64(re: i64, im: i64) -> Self {
        GaussRat::new(Rational::from(re), Rational::from(im))
    }

    pub fn i() -> Self {
        GaussRat::from_i64(0, 1)
    }

    /// Exact conversion of a double-precision complex number (every finite
    /// double is a dyadic rational).
    pub fn from_complex64(z: Complex64) -> Option<Self> {
        Some(GaussRat::new(
            Rational::from_f64(z.re)?,
            Rational::from_f64(z.im)?,
        ))
    }

    pub fn is_zero(&self) -> bool {
        self.re.cmp0().is_eq() && self.im.cmp0().is_eq()
    }

    pub fn is_real(&self) -> bool {
        self.im.cmp0().is_eq()
    }

    /// `re^2 + im^2`, exactly.
    pub fn norm_sqr(&self) -> Rational {
        Rational::from(&self.re * &self.re) + Rational::from(&self.im * &self.im)
    }

    pub fn pow(&self, k: u32) -> GaussRat {
        let mut acc = GaussRat::from_i64(1, 0);
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

    pub fn to_complex64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    /// Total bit length of numerators and denominators; a size measure for caps.
    pub fn bit_size(&self) -> u64 {
        let b = |q: &Rational| u64::from(q.numer().significant_bits() + q.denom().significant_bits());
        b(&self.re) + b(&self.im)
    }

    /// Least common denominator of both parts.
    pub fn denominator(&self) -> Integer {
        self.re.denom().clone().lcm(self.im.denom())
    }
}

impl<'a> Add<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn add(self, rhs: &GaussRat) -> GaussRat {
        GaussRat::new(
            Rational::from(&self.re + &rhs.re),
            Rational::from(&self.im + &rhs.im),
        )
    }
}

impl<'a> Sub<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn sub(self, rhs: &GaussRat) -> GaussRat {
        GaussRat::new(
            Rational::from(&self.re - &rhs.re),
            Rational::from(&self.im - &rhs.im),
        )
    }
}

impl<'a> Mul<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn mul(self, rhs: &GaussRat) -> GaussRat {
        if self.is_real() && rhs.is_real() {
            return GaussRat::real(Rational::from(&self.re * &rhs.re));
        }
        let re = Rational::from(&self.re * &rhs.re) - Rational::from(&self.im * &rhs.im);
        let im = Rational::from(&self.re * &rhs.im) + Rational::from(&self.im * &rhs.re);
        GaussRat::new(re, im)
    }
}

impl Neg for GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat::new(-self.re, -self.im)
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_real() {
            return write!(f, "{}", self.re);
        }
        if self.re.cmp0().is_eq() {
            return write!(f, "{}i", self.im);
        }
        if self.im.cmp0().is_lt() {
            write!(f, "{}-{}i", self.re, Rational::from(-&self.im))
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl serde::Serialize for GaussRat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Parses `"3"`, `"-1/3"` or a finite decimal such as `"0.25"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty rational".into()));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        if s.contains('/') {
            return Err(Error::Parse(format!("cannot mix '.' and '/' in {s:?}")));
        }
        let neg = int_part.starts_with('-');
        let digits = format!("{}{}", int_part.trim_start_matches(['-', '+']), frac_part);
        let num = Integer::from_str(if digits.is_empty() { "0" } else { &digits })
            .map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
        let den = Integer::from(Integer::u_pow_u(10, frac_part.len() as u32));
        let q = Rational::from((num, den));
        return Ok(if neg { -q } else { q });
    }
    Rational::from_str(s).map_err(|e| Error::Parse(format!("{s:?}: {e}")))
}

/// Parses a Gaussian rational such as `"1/2"`, `"i"`, `"-i"`, `"3i"`,
/// `"1+2i"`, `"-1/2-3/4i"`, or the pair form `"re,im"`.
pub fn parse_gauss(s: &str) -> Result<GaussRat> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Parse("empty number".into()));
    }
    if let Some((re, im)) = s.split_once(',') {
        return Ok(GaussRat::new(parse_rational(re)?, parse_rational(im)?));
    }
    if !s.ends_with('i') {
        return Ok(GaussRat::real(parse_rational(&s)?));
    }
    let body = &s[..s.len() - 1];
    // find the sign separating real and imaginary parts (not a leading sign, not after 'e')
    let split = body
        .char_indices()
        .skip(1)
        .filter(|&(_, ch)| ch == '+' || ch == '-')
        .map(|(i, _)| i)
        .last();
    let (re_str, im_str) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let im = match im_str {
        "" | "+" => Rational::from(1),
        "-" => Rational::from(-1),
        other => parse_rational(other.trim_start_matches('+'))?,
    };
    Ok(GaussRat::new(parse_rational(re_str)?, im))
}

/// Deterministic Miller–Rabin style primality (rug's probabilistic test with
/// enough rounds to be certain for every input this crate produces).
pub fn is_prime(n: &Integer) -> bool {
    n.is_probably_prime(32) != IsPrime::No
}

/// Factors `|n|` into primes with multiplicities, ascending.
pub fn factor_integer(n: &Integer) -> Vec<(Integer, u32)> {
    let mut n = Integer::from(n.abs_ref());
    let mut out: Vec<(Integer, u32)> = Vec::new();
    if n <= 1 {
        return out;
    }
    let push = |p: Integer, out: &mut Vec<(Integer, u32)>| {
        if let Some(last) = out.iter_mut().find(|(q, _)| *q == p) {
            last.1 += 1;
        } else {
            out.push((p, 1));
        }
    };
    let mut p = 2u32;
    while p < 10_000 {
        while n.is_divisible_u(p) {
            n /= p;
            push(Integer::from(p), &mut out);
        }
        if n == 1 {
            break;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime(&m) {
            push(m, &mut out);
            continue;
        }
        let f = pollard_brent(&m);
        let cofactor = Integer::from(&m / &f);
        stack.push(f);
        stack.push(cofactor);
    }
    out.sort();
    out
}

fn pollard_brent(n: &Integer) -> Integer {
    if n.is_even() {
        return Integer::from(2);
    }
    let mut seed = 1u32;
    loop {
        let c = Integer::from(seed);
        let f = |x: &Integer| Integer::from(x * x + &c) % n;
        let (mut x, mut y) = (Integer::from(2), Integer::from(2));
        let mut d = Integer::from(1);
        while d == 1 {
            x = f(&x);
            y = f(&f(&y));
            d = Integer::from(&x - &y).abs().gcd(n);
        }
        if &d != n {
            return d;
        }
        seed += 1;
    }
}

/// `v_p(q)` for nonzero `q`; `None` for zero (infinite valuation).
pub fn valuation(q: &Rational, p: &Integer) -> Option<i64> {
    if q.cmp0().is_eq() {
        return None;
    }
    let count = |z: &Integer| -> i64 {
        let mut z = z.clone();
        let mut k = 0;
        while z.is_divisible(p) {
            z /= p;
            k += 1;
        }
        k
    };
    Some(count(q.numer()) - count(q.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_gaussian_forms() {
        assert_eq!(parse_gauss("i").unwrap(), GaussRat::i());
        assert_eq!(parse_gauss("-i").unwrap(), GaussRat::from_i64(0, -1));
        assert_eq!(parse_gauss("1+2i").unwrap(), GaussRat::from_i64(1, 2));
        assert_eq!(parse_gauss("-1-i").unwrap(), GaussRat::from_i64(-1, -1));
        assert_eq!(parse_gauss("-3").unwrap(), GaussRat::from_i64(-3, 0));
        assert_eq!(parse_gauss("0,1").unwrap(), GaussRat::i());
        let q = parse_gauss("1/2-3/4i").unwrap();
        assert_eq!(q.re, Rational::from((1, 2)));
        assert_eq!(q.im, Rational::from((-3, 4)));
        assert_eq!(parse_rational("0.25").unwrap(), Rational::from((1, 4)));
        assert_eq!(parse_rational("-1.5").unwrap(), Rational::from((-3, 2)));
        assert!(parse_gauss("x").is_err());
    }

    #[test]
    fn gaussian_arithmetic() {
        let i = GaussRat::i();
        assert_eq!(i.pow(2), GaussRat::from_i64(-1, 0));
        assert_eq!(i.pow(4), GaussRat::from_i64(1, 0));
        let z = GaussRat::from_i64(-1, 1);
        assert_eq!(&z.pow(2) + &i, GaussRat::from_i64(0, -1));
        assert_eq!(z.norm_sqr(), Rational::from(2));
    }

    #[test]
    fn factors_integers() {
        let n = Integer::from(2u64 * 2 * 3 * 50_021 * 50_023);
        let f = factor_integer(&n);
        assert_eq!(
            f,
            vec![
                (Integer::from(2), 2),
                (Integer::from(3), 1),
                (Integer::from(50_021), 1),
                (Integer::from(50_023), 1)
            ]
        );
        assert!(factor_integer(&Integer::from(1)).is_empty());
    }

    #[test]
    fn valuations() {
        let q = Rational::from((12, 45));
        assert_eq!(valuation(&q, &Integer::from(3)), Some(-1));
        assert_eq!(valuation(&q, &Integer::from(2)), Some(2));
        assert_eq!(valuation(&Rational::new(), &Integer::from(2)), None);
    }
}
