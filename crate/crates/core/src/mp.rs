//! Multiprecision complex numbers on top of `rug::Float`.
//!
//! The system MPC library is not assumed, so this is a small rectangular
//! complex type with the handful of operations the root finder and the orbit
//! code need. All operations round to nearest at the precision of `self`.

use std::fmt;

use num_complex::Complex64;
use rug::ops::CompleteRound;
use rug::{Assign, Float};

use crate::numbers::GaussRat;

#[derive(Clone, Debug, PartialEq)]
pub struct MpComplex {
    pub re: Float,
    pub im: Float,
}

impl MpComplex {
    pub fn zero(prec: u32) -> Self {
        MpComplex { re: Float::new(prec), im: Float::new(prec) }
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> Self {
        MpComplex { re: Float::with_val(prec, re), im: Float::with_val(prec, im) }
    }

    pub fn from_complex64(prec: u32, z: Complex64) -> Self {
        MpComplex::from_f64(prec, z.re, z.im)
    }

    /// Nearest representable value to an exact Gaussian rational.
    pub fn from_gauss(prec: u32, z: &GaussRat) -> Self {
        MpComplex { re: Float::with_val(prec, &z.re), im: Float::with_val(prec, &z.im) }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    pub fn set_prec(&mut self, prec: u32) {
        self.re.set_prec(prec);
        self.im.set_prec(prec);
    }

    pub fn to_complex64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn abs(&self) -> Float {
        self.re.hypot_ref(&self.im).complete(self.prec())
    }

    pub fn norm_sqr(&self) -> Float {
        let p = self.prec();
        let mut n = self.re.square_ref().complete(p);
        n += self.im.square_ref().complete(p);
        n
    }

    pub fn add_assign(&mut self, o: &MpComplex) {
        self.re += &o.re;
        self.im += &o.im;
    }

    pub fn sub_assign(&mut self, o: &MpComplex) {
        self.re -= &o.re;
        self.im -= &o.im;
    }

    /// `self *= o`, with two scratch values so hot loops avoid allocation.
    pub fn mul_assign_with(&mut self, o: &MpComplex, t1: &mut Float, t2: &mut Float) {
        t1.assign(&self.re * &o.im);
        t2.assign(&self.im * &o.re);
        self.re *= &o.re;
        self.im *= &o.im;
        self.re -= &self.im;
        self.im.assign(&*t1 + &*t2);
    }

    pub fn mul(&self, o: &MpComplex) -> MpComplex {
        let p = self.prec();
        let re = Float::with_val(p, &self.re * &o.re) - Float::with_val(p, &self.im * &o.im);
        let im = Float::with_val(p, &self.re * &o.im) + Float::with_val(p, &self.im * &o.re);
        MpComplex { re, im }
    }

    pub fn sqr(&self) -> MpComplex {
        let p = self.prec();
        let re = self.re.square_ref().complete(p) - self.im.square_ref().complete(p);
        let mut im = Float::with_val(p, &self.re * &self.im);
        im *= 2u32;
        MpComplex { re, im }
    }

    pub fn pow_u(&self, k: u32) -> MpComplex {
        let mut acc = MpComplex::from_f64(self.prec(), 1.0, 0.0);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.sqr();
            }
        }
        acc
    }

    /// `1 / self`; infinite components for zero input.
    pub fn recip(&self) -> MpComplex {
        let n = self.norm_sqr();
        let re = Float::with_val(self.prec(), &self.re / &n);
        let mut im = Float::with_val(self.prec(), &self.im / &n);
        im = -im;
        MpComplex { re, im }
    }

    pub fn div(&self, o: &MpComplex) -> MpComplex {
        self.mul(&o.recip())
    }
}

impl fmt::Display for MpComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = Some(((self.prec() as f64) * std::f64::consts::LOG10_2).ceil() as usize);
        write!(
            f,
            "{} {} {}i",
            self.re.to_string_radix(10, digits),
            if self.im.is_sign_negative() { "-" } else { "+" },
            Float::with_val(self.prec(), self.im.abs_ref()).to_string_radix(10, digits)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_matches_f64() {
        let a = MpComplex::from_f64(128, 1.5, -2.0);
        let b = MpComplex::from_f64(128, -0.5, 3.0);
        let za = a.to_complex64();
        let zb = b.to_complex64();
        assert!((a.mul(&b).to_complex64() - za * zb).norm() < 1e-14);
        assert!((a.div(&b).to_complex64() - za / zb).norm() < 1e-14);
        assert!((a.pow_u(5).to_complex64() - za.powu(5)).norm() < 1e-11);
        let mut c = a.clone();
        let (mut t1, mut t2) = (Float::new(128), Float::new(128));
        c.mul_assign_with(&b, &mut t1, &mut t2);
        assert_eq!(c, a.mul(&b));
        assert!((a.abs().to_f64() - 2.5).abs() < 1e-15);
    }
}
