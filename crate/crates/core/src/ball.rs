//! Complex ball arithmetic: a midpoint plus a radius that encloses every
//! rounding error made so far. Two backends share one trait: plain `f64`
//! for the fast path and `rug::Float` when more bits (or exponent range)
//! are needed.

use std::cmp::Ordering;

use num_complex::Complex64;
use rug::float::Round;
use rug::ops::CompleteRound;
use rug::Float;

use crate::mp::MpComplex;
use crate::numbers::GaussRat;

/// An exactly known input, or a disk known to contain the input.
#[derive(Clone, Debug)]
pub(crate) enum Seed {
    Exact(GaussRat),
    Disk(MpComplex, f64),
}

pub(crate) trait Ball: Clone + Sized {
    fn from_seed(s: &Seed, prec: u32) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    /// Rigorous lower and upper bounds for `ln |z|` over the ball (the lower
    /// bound is `-inf` when the ball meets zero, the upper may be `+inf` on overflow).
    fn ln_abs_bounds(&self) -> (f64, f64);
    fn rad(&self) -> f64;

    fn pow(&self, d: u32) -> Self {
        let mut acc: Option<Self> = None;
        let mut base = self.clone();
        let mut k = d;
        while k > 0 {
            if k & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base),
                });
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc.expect("d >= 1")
    }
}

const U: f64 = f64::EPSILON; // twice the unit roundoff; every bound below is padded by it

#[inline]
fn up(x: f64) -> f64 {
    x * (1.0 + 4.0 * U) + f64::MIN_POSITIVE
}

/// `fl(x + y)` and whether it is exact (Knuth's two-sum).
#[inline]
fn two_sum(x: f64, y: f64) -> (f64, bool) {
    let s = x + y;
    let bb = s - x;
    let err = (x - (s - bb)) + (y - bb);
    (s, err == 0.0 && s.is_finite())
}

#[inline]
fn two_prod(x: f64, y: f64) -> (f64, bool) {
    let p = x * y;
    (p, x.mul_add(y, -p) == 0.0 && p.is_finite())
}

#[derive(Clone, Debug)]
pub(crate) struct Ball64 {
    pub mid: Complex64,
    pub rad: f64,
}

impl Ball for Ball64 {
    fn from_seed(s: &Seed, _prec: u32) -> Self {
        match s {
            Seed::Exact(z) => {
                let mid = z.to_complex64();
                let exact = mid.re.is_finite()
                    && mid.im.is_finite()
                    && GaussRat::from_complex64(mid).as_ref() == Some(z);
                let rad = if exact { 0.0 } else { up(2.0 * U * mid.norm()) };
                Ball64 { mid, rad }
            }
            Seed::Disk(m, r) => {
                let mid = m.to_complex64();
                Ball64 { mid, rad: up(r + 2.0 * U * mid.norm()) }
            }
        }
    }

    fn add(&self, o: &Self) -> Self {
        let (re, e1) = two_sum(self.mid.re, o.mid.re);
        let (im, e2) = two_sum(self.mid.im, o.mid.im);
        let mid = Complex64::new(re, im);
        let mut rad = self.rad + o.rad;
        if !(e1 && e2) {
            rad += U * mid.norm();
        }
        Ball64 { mid, rad: if rad == 0.0 { 0.0 } else { up(rad) } }
    }

    fn mul(&self, o: &Self) -> Self {
        let (a, b, c, d) = (self.mid.re, self.mid.im, o.mid.re, o.mid.im);
        let (ac, e1) = two_prod(a, c);
        let (bd, e2) = two_prod(b, d);
        let (ad, e3) = two_prod(a, d);
        let (bc, e4) = two_prod(b, c);
        let (re, e5) = two_sum(ac, -bd);
        let (im, e6) = two_sum(ad, bc);
        let exact = e1 && e2 && e3 && e4 && e5 && e6;
        let mid = Complex64::new(re, im);
        if exact && self.rad == 0.0 && o.rad == 0.0 {
            return Ball64 { mid, rad: 0.0 };
        }
        let na = up(self.mid.norm());
        let nb = up(o.mid.norm());
        let mut rad = na * o.rad + nb * self.rad + self.rad * o.rad;
        if !exact {
            rad += 3.0 * U * na * nb;
        }
        Ball64 { mid, rad: up(rad) }
    }

    fn ln_abs_bounds(&self) -> (f64, f64) {
        let m = self.mid.norm();
        let lo = m * (1.0 - 2.0 * U) - self.rad;
        let hi = up(m * (1.0 + 2.0 * U) + self.rad);
        let ln_lo = if lo > 0.0 { lo.ln() - 2.0 * U * lo.ln().abs() - 1e-300 } else { f64::NEG_INFINITY };
        let ln_hi = if hi.is_finite() { hi.ln() + 2.0 * U * hi.ln().abs() + 1e-300 } else { f64::INFINITY };
        (ln_lo, ln_hi)
    }

    fn rad(&self) -> f64 {
        if self.mid.re.is_finite() && self.mid.im.is_finite() {
            self.rad
        } else {
            f64::INFINITY
        }
    }
}

/// Radius bookkeeping precision for the multiprecision ball.
const RP: u32 = 64;

fn upf(x: Float) -> Float {
    // 64-bit round-to-nearest errs by at most 2^-64 relative; pad by 2^-60
    let pad = Float::with_val(RP, &x >> 60u32);
    x + pad
}

fn eps(prec: u32) -> Float {
    Float::with_val(RP, 1) >> (prec - 2)
}

#[derive(Clone, Debug)]
pub(crate) struct MpBall {
    pub mid: MpComplex,
    pub rad: Float,
}

impl MpBall {
    fn abs_mid(&self) -> Float {
        // hypot at 64 bits, padded for its own rounding and the midpoint's
        upf(self.mid.re.hypot_ref(&self.mid.im).complete(RP))
    }
}

impl Ball for MpBall {
    fn from_seed(s: &Seed, prec: u32) -> Self {
        match s {
            Seed::Exact(z) => {
                let mid = MpComplex::from_gauss(prec, z);
                let exact = mid.re == z.re && mid.im == z.im;
                let rad = if exact {
                    Float::new(RP)
                } else {
                    let m = upf(mid.re.hypot_ref(&mid.im).complete(RP));
                    upf(m * eps(prec))
                };
                MpBall { mid, rad }
            }
            Seed::Disk(m, r) => {
                let mut mid = m.clone();
                let widen = mid.prec() > prec;
                mid.set_prec(prec);
                let mut rad = Float::with_val(RP, *r);
                if widen {
                    let a = upf(mid.re.hypot_ref(&mid.im).complete(RP));
                    rad += a * eps(prec);
                }
                MpBall { mid, rad: upf(rad) }
            }
        }
    }

    fn add(&self, o: &Self) -> Self {
        let p = self.mid.prec();
        let (re, o1) = Float::with_val_round(p, &self.mid.re + &o.mid.re, Round::Nearest);
        let (im, o2) = Float::with_val_round(p, &self.mid.im + &o.mid.im, Round::Nearest);
        let out = MpBall { mid: MpComplex { re, im }, rad: Float::new(RP) };
        let mut rad = Float::with_val(RP, &self.rad + &o.rad);
        if o1 != Ordering::Equal || o2 != Ordering::Equal {
            rad += out.abs_mid() * eps(p);
        }
        MpBall { rad: upf(rad), ..out }
    }

    fn mul(&self, o: &Self) -> Self {
        let p = self.mid.prec();
        let (a, b) = (&self.mid.re, &self.mid.im);
        let (c, d) = (&o.mid.re, &o.mid.im);
        // track MPFR's ternary flags: exact products (cycles through Gaussian
        // integers, say) then add no rounding term at all
        let (ac, o1) = Float::with_val_round(p, a * c, Round::Nearest);
        let (bd, o2) = Float::with_val_round(p, b * d, Round::Nearest);
        let (ad, o3) = Float::with_val_round(p, a * d, Round::Nearest);
        let (bc, o4) = Float::with_val_round(p, b * c, Round::Nearest);
        let (re, o5) = Float::with_val_round(p, &ac - &bd, Round::Nearest);
        let (im, o6) = Float::with_val_round(p, &ad + &bc, Round::Nearest);
        let exact = [o1, o2, o3, o4, o5, o6].iter().all(|&o| o == Ordering::Equal);
        let mid = MpComplex { re, im };
        let mut rad = Float::new(RP);
        if self.rad.cmp0() != Some(Ordering::Equal) || o.rad.cmp0() != Some(Ordering::Equal) || !exact {
            let na = self.abs_mid();
            let nb = o.abs_mid();
            rad += Float::with_val(RP, &na * &o.rad);
            rad += Float::with_val(RP, &nb * &self.rad);
            rad += Float::with_val(RP, &self.rad * &o.rad);
            if !exact {
                rad += Float::with_val(RP, &na * &nb) * (eps(p) << 2u32);
            }
        }
        MpBall { mid, rad: upf(rad) }
    }

    fn ln_abs_bounds(&self) -> (f64, f64) {
        let m = self.mid.re.hypot_ref(&self.mid.im).complete(RP);
        let pad = Float::with_val(RP, &m >> 58u32) + eps(self.mid.prec()) * &m;
        let lo = Float::with_val(RP, &m - &pad) - &self.rad;
        let hi = upf(Float::with_val(RP, &m + &pad) + &self.rad);
        let ln_lo = if lo.cmp0() == Some(Ordering::Greater) {
            let l = lo.ln().to_f64();
            l - 4.0 * U * l.abs() - 1e-300
        } else {
            f64::NEG_INFINITY
        };
        let ln_hi = if hi.is_finite() {
            let l = hi.ln().to_f64();
            l + 4.0 * U * l.abs() + 1e-300
        } else {
            f64::INFINITY
        };
        (ln_lo, ln_hi)
    }

    fn rad(&self) -> f64 {
        if self.mid.is_finite() {
            self.rad.to_f64()
        } else {
            f64::INFINITY
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn encloses(b: &Ball64, z: Complex64) -> bool {
        (b.mid - z).norm() <= b.rad
    }

    #[test]
    fn f64_ball_encloses_exact_orbit() {
        // z -> z^2 + c from 0 at c = 1/3 + i/7, compared against exact rationals
        let c = GaussRat::new(rug::Rational::from((1, 3)), rug::Rational::from((1, 7)));
        let cb = Ball64::from_seed(&Seed::Exact(c.clone()), 53);
        let mut z = Ball64 { mid: Complex64::new(0.0, 0.0), rad: 0.0 };
        let mut exact = GaussRat::default();
        for _ in 0..6 {
            z = z.pow(2).add(&cb);
            exact = &exact.pow(2) + &c;
            assert!(encloses(&z, exact.to_complex64()));
        }
        let (lo, hi) = z.ln_abs_bounds();
        let t = exact.to_complex64().norm().ln();
        assert!(lo <= t && t <= hi);
    }

    #[test]
    fn mp_ball_tracks_huge_exponents() {
        let two = Seed::Exact(GaussRat::from_i64(2, 0));
        let mut z = MpBall::from_seed(&two, 128);
        for _ in 0..12 {
            z = z.mul(&z);
        }
        // 2^(2^12)
        let (lo, hi) = z.ln_abs_bounds();
        let t = 4096.0 * std::f64::consts::LN_2;
        assert!(lo <= t && t <= hi && hi - lo < 1e-9);
    }
}
