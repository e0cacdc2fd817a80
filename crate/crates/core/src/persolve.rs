//! All complex roots of `g_l - g_m`, with multiplicities from the exact
//! squarefree decomposition and certified inclusion disks.
//!
//! Each squarefree factor is solved by Aberth–Ehrlich iteration (Jacobi
//! sweeps, so the parallel update is deterministic) in `rug::Float`
//! arithmetic, starting from Newton-polygon circles. Disks
//! `D(z_i, n |W_i|)` with the Weierstrass corrections `W_i` are the
//! certificate: a connected union of `k` such disks holds exactly `k` roots,
//! so pairwise disjoint disks isolate every root. Precision doubles until
//! the disks are disjoint and small enough.

use std::cmp::Ordering;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use rug::ops::CompleteRound;
use rug::{Assign, Float, Integer, Rational};

use crate::dyncore::{check_degree, iterate_sequence, Degree, DEFAULT_DEGREE_CAP};
use crate::error::{Error, Result};
use crate::mp::MpComplex;
use crate::numbers::GaussRat;
use crate::poly::{squarefree_decomposition, QPoly, ZPoly};

/// One root with its multiplicity and certified inclusion radius.
#[derive(Clone, Debug)]
pub struct Root {
    pub value: MpComplex,
    pub multiplicity: usize,
    pub radius: f64,
}

impl Root {
    pub fn to_complex64(&self) -> Complex64 {
        self.value.to_complex64()
    }
}

#[derive(Clone, Debug)]
pub struct RootSet {
    /// Iterate indices when the set came from `g_l - g_m`, else zero.
    pub l: u32,
    pub m: u32,
    pub degree: usize,
    pub roots: Vec<Root>,
    pub precision_bits: u32,
}

impl RootSet {
    pub fn total_multiplicity(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }

    pub fn max_radius(&self) -> f64 {
        self.roots.iter().map(|r| r.radius).fold(0.0, f64::max)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    pub start_bits: u32,
    pub max_bits: u32,
    /// Sweeps allowed at each precision level.
    pub max_sweeps: u32,
    /// Keep raising precision until every radius is at most this.
    pub target_radius: Option<f64>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { start_bits: 128, max_bits: 4096, max_sweeps: 1000, target_radius: None }
    }
}

/// Exact `g_l - g_m` over `Q`; monic of degree `d^(l-1)`.
pub fn difference_poly(a: &Rational, d: Degree, l: u32, m: u32) -> Result<QPoly> {
    let z = difference_zpoly(a, d, l, m, DEFAULT_DEGREE_CAP)?;
    Ok(z.to_qpoly().monic())
}

/// `g_l - g_m` scaled to a primitive-content-free integer polynomial.
pub fn difference_zpoly(a: &Rational, d: Degree, l: u32, m: u32, degree_cap: u64) -> Result<ZPoly> {
    if !(l > m && m >= 1) {
        return Err(Error::Precondition(format!("need l > m >= 1, got l={l}, m={m}")));
    }
    check_degree(d, l, degree_cap)?;
    let seq = iterate_sequence(a, d, l, degree_cap)?;
    Ok(seq[l as usize - 1].difference_z(&seq[m as usize - 1]))
}

/// Roots of a monic polynomial, starting at `precision_bits`.
pub fn solve_roots(p: &QPoly, precision_bits: u32) -> Result<RootSet> {
    if p.is_zero() || !p.lc().is_some_and(|c| *c == 1) {
        return Err(Error::Precondition("solve_roots needs a nonzero monic polynomial".into()));
    }
    let opts = SolveOptions { start_bits: precision_bits.max(64), ..SolveOptions::default() };
    solve_zpoly(&p.primitive_zpoly(), &opts)
}

/// Roots of `g_l - g_m` for basepoint `a`.
pub fn solve_preperiodic(a: &Rational, d: Degree, l: u32, m: u32, opts: &SolveOptions) -> Result<RootSet> {
    let p = difference_zpoly(a, d, l, m, DEFAULT_DEGREE_CAP)?;
    let mut rs = solve_zpoly(&p, opts)?;
    rs.l = l;
    rs.m = m;
    Ok(rs)
}

/// Roots of an integer polynomial of positive degree.
pub fn solve_zpoly(p: &ZPoly, opts: &SolveOptions) -> Result<RootSet> {
    let degree = p.degree().unwrap_or(0);
    let mut roots = Vec::with_capacity(degree);
    let mut bits = opts.start_bits;
    for (q, mult) in squarefree_decomposition(p) {
        let mut q = q;
        if q.coeffs()[0].cmp0().is_eq() {
            roots.push(Root { value: MpComplex::zero(opts.start_bits), multiplicity: mult, radius: 0.0 });
            q = q.div_exact(&ZPoly::from_i64s(&[0, 1])).unwrap();
        }
        match q.degree() {
            Some(0) => {}
            Some(1) => {
                let r = Rational::from((-q.coeffs()[0].clone(), q.coeffs()[1].clone()));
                let (re, ord) = Float::with_val_round(opts.start_bits, &r, rug::float::Round::Nearest);
                let radius = if ord == Ordering::Equal {
                    0.0
                } else {
                    (Float::with_val(64, re.abs_ref()) >> (opts.start_bits - 1)).to_f64()
                };
                roots.push(Root { value: MpComplex { re, im: Float::new(opts.start_bits) }, multiplicity: mult, radius });
            }
            _ => {
                let (zs, used) = aberth_certified(&q, opts)?;
                bits = bits.max(used);
                roots.extend(zs.into_iter().map(|(value, radius)| Root { value, multiplicity: mult, radius }));
            }
        }
    }
    roots.sort_by(|x, y| {
        x.value
            .re
            .partial_cmp(&y.value.re)
            .unwrap_or(Ordering::Equal)
            .then(x.value.im.partial_cmp(&y.value.im).unwrap_or(Ordering::Equal))
    });
    let rs = RootSet { l: 0, m: 0, degree, roots, precision_bits: bits };
    debug_assert_eq!(rs.total_multiplicity(), degree);
    Ok(rs)
}

/// Starting points on the circles read off the upper convex hull of
/// `(k, log2 |q_k|)`, one circle per hull edge.
fn initial_guesses(q: &ZPoly) -> Vec<Complex64> {
    let n = q.degree().unwrap();
    let pts: Vec<(usize, f64)> = q
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| c.cmp0().is_ne())
        .map(|(k, c)| (k, log2_abs(c)))
        .collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &p in &pts {
        while hull.len() >= 2 {
            let (k1, y1) = hull[hull.len() - 2];
            let (k2, y2) = hull[hull.len() - 1];
            // drop the middle point unless it lies strictly above the chord
            let cross = (k2 as f64 - k1 as f64) * (p.1 - y1) - (y2 - y1) * (p.0 as f64 - k1 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut out = Vec::with_capacity(n);
    let sigma = 0.7;
    for (e, w) in hull.windows(2).enumerate() {
        let (k1, y1) = w[0];
        let (k2, y2) = w[1];
        let m = k2 - k1;
        let u = ((y1 - y2) / m as f64).exp2();
        for j in 0..m {
            let theta = 2.0 * PI * (j as f64) / m as f64 + 2.0 * PI * e as f64 / n as f64 + sigma;
            out.push(Complex64::from_polar(u, theta));
        }
    }
    out
}

fn log2_abs(c: &Integer) -> f64 {
    let f = Float::with_val(64, c);
    f.abs().log2().to_f64()
}

struct Poly {
    coeffs: Vec<Float>,
    abs: Vec<Float>,
    prec: u32,
}

impl Poly {
    fn new(q: &ZPoly, prec: u32) -> Self {
        Poly {
            coeffs: q.coeffs().iter().map(|c| Float::with_val(prec, c)).collect(),
            abs: q.coeffs().iter().map(|c| Float::with_val(64, c).abs()).collect(),
            prec,
        }
    }

    fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `(p(z), p'(z), noise)` where `noise` bounds the Horner rounding error.
    fn eval(&self, z: &MpComplex) -> (MpComplex, MpComplex, Float) {
        let prec = self.prec;
        let n = self.degree();
        let mut p = MpComplex { re: self.coeffs[n].clone(), im: Float::new(prec) };
        let mut dp = MpComplex::zero(prec);
        let (mut t1, mut t2) = (Float::new(prec), Float::new(prec));
        let za = Float::with_val(64, z.re.hypot_ref(&z.im));
        let mut acc = self.abs[n].clone();
        for k in (0..n).rev() {
            dp.mul_assign_with(z, &mut t1, &mut t2);
            dp.add_assign(&p);
            p.mul_assign_with(z, &mut t1, &mut t2);
            p.re += &self.coeffs[k];
            acc *= &za;
            acc += &self.abs[k];
        }
        let noise = (acc * (4 * n as u32 + 4)) >> (prec - 1);
        (p, dp, noise)
    }
}

fn aberth_certified(q: &ZPoly, opts: &SolveOptions) -> Result<(Vec<(MpComplex, f64)>, u32)> {
    let n = q.degree().unwrap();
    let mut prec = opts.start_bits;
    let mut z: Vec<MpComplex> = initial_guesses(q).into_iter().map(|g| MpComplex::from_complex64(prec, g)).collect();
    loop {
        let poly = Poly::new(q, prec);
        for zi in z.iter_mut() {
            zi.set_prec(prec);
        }
        let converged = aberth_sweeps(&poly, &mut z, opts.max_sweeps);
        if converged {
            let radii = inclusion_radii(&poly, &z);
            let disjoint = disks_disjoint(&z, &radii);
            let small = opts.target_radius.is_none_or(|t| radii.iter().all(|&r| r <= t));
            if disjoint && small && radii.iter().all(|r| r.is_finite()) {
                return Ok((z.into_iter().zip(radii).collect(), prec));
            }
        }
        if prec * 2 > opts.max_bits {
            if !converged {
                return Err(Error::NonConvergence {
                    sweeps: opts.max_sweeps,
                    precision_bits: prec,
                    partial: z.iter().map(|w| (w.re.to_f64(), w.im.to_f64())).collect(),
                });
            }
            return Err(Error::PrecisionInsufficient(prec));
        }
        prec *= 2;
        let _ = n;
    }
}

/// Runs Jacobi sweeps until every root sits at the noise floor; returns
/// whether that happened within `max_sweeps`.
fn aberth_sweeps(poly: &Poly, z: &mut [MpComplex], max_sweeps: u32) -> bool {
    let n = z.len();
    let prec = poly.prec;
    let mut done = vec![false; n];
    for _ in 0..max_sweeps {
        let snapshot: &[MpComplex] = z;
        let updates: Vec<Option<MpComplex>> = (0..n)
            .into_par_iter()
            .map(|i| {
                if done[i] {
                    return None;
                }
                let zi = &snapshot[i];
                let (p, dp, noise) = poly.eval(zi);
                if p.abs() <= noise {
                    return None;
                }
                // S = sum_{j != i} 1 / (z_i - z_j)
                let mut s = MpComplex::zero(prec);
                let mut diff = MpComplex::zero(prec);
                let mut nrm = Float::new(prec);
                let mut t = Float::new(prec);
                for (j, zj) in snapshot.iter().enumerate() {
                    if j == i {
                        continue;
                    }
                    diff.re.assign(&zi.re - &zj.re);
                    diff.im.assign(&zi.im - &zj.im);
                    nrm.assign(diff.re.square_ref());
                    t.assign(diff.im.square_ref());
                    nrm += &t;
                    t.assign(&diff.re / &nrm);
                    s.re += &t;
                    t.assign(&diff.im / &nrm);
                    s.im -= &t;
                }
                let ratio = p.div(&dp);
                let mut denom = ratio.mul(&s);
                denom.re = Float::with_val(prec, 1) - &denom.re;
                denom.im = -denom.im;
                let w = ratio.div(&denom);
                let mut next = zi.clone();
                next.sub_assign(&w);
                if !next.is_finite() {
                    return None;
                }
                Some(next)
            })
            .collect();
        let mut all_done = true;
        for (i, u) in updates.into_iter().enumerate() {
            match u {
                None => done[i] = true,
                Some(next) => {
                    // a correction below the working precision also counts as converged
                    let mut delta = next.clone();
                    delta.sub_assign(&z[i]);
                    let tiny = Float::with_val(64, z[i].abs()) >> (prec - 4);
                    if delta.abs() <= tiny {
                        done[i] = true;
                    } else {
                        all_done = false;
                    }
                    z[i] = next;
                }
            }
        }
        if all_done {
            return true;
        }
    }
    false
}

/// `n (|p(z_i)| + noise) / (|lc| prod_{j != i} |z_i - z_j|)`, padded.
fn inclusion_radii(poly: &Poly, z: &[MpComplex]) -> Vec<f64> {
    let n = z.len() as f64;
    let prec = poly.prec;
    let ln_lc = Float::with_val(64, poly.abs[poly.degree()].ln_ref()).to_f64();
    (0..z.len())
        .into_par_iter()
        .map(|i| {
            let (p, _, noise) = poly.eval(&z[i]);
            let num = Float::with_val(64, p.abs() + noise);
            let ln_num = num.ln().to_f64();
            let mut ln_prod = 0.0;
            let mut diff = MpComplex::zero(prec);
            for (j, zj) in z.iter().enumerate() {
                if j != i {
                    diff.re.assign(&z[i].re - &zj.re);
                    diff.im.assign(&z[i].im - &zj.im);
                    ln_prod += Float::with_val(64, diff.re.hypot_ref(&diff.im)).ln().to_f64();
                }
            }
            (n.ln() + ln_num - ln_lc - ln_prod).exp() * (1.0 + 1e-9)
        })
        .collect()
}

fn disks_disjoint(z: &[MpComplex], radii: &[f64]) -> bool {
    let prec = z.first().map(|w| w.prec()).unwrap_or(64);
    (0..z.len()).into_par_iter().all(|i| {
        let mut diff = MpComplex::zero(prec);
        (i + 1..z.len()).all(|j| {
            diff.re.assign(&z[i].re - &z[j].re);
            diff.im.assign(&z[i].im - &z[j].im);
            let dist = diff.re.hypot_ref(&diff.im).complete(64).to_f64();
            dist > radii[i] + radii[j]
        })
    })
}

/// Residual of `g_l - g_m` at a double-precision point, evaluated exactly.
#[derive(Clone, Debug, serde::Serialize)]
pub struct ResidualReport {
    pub residual: f64,
    pub derivative: f64,
    pub exact_zero: bool,
    pub passes: bool,
}

pub fn verify_root(a: &Rational, d: Degree, l: u32, m: u32, root: Complex64, tolerance: f64) -> Result<ResidualReport> {
    if !(l > m && m >= 1) {
        return Err(Error::Precondition(format!("need l > m >= 1, got l={l}, m={m}")));
    }
    let c = GaussRat::from_complex64(root).ok_or_else(|| Error::Precondition("non-finite root".into()))?;
    let dd = d.get();
    // z_n = g_n(c) and z'_n = g_n'(c) exactly
    let mut z = GaussRat::real(a.clone());
    let mut dz = GaussRat::default();
    let one = GaussRat::from_i64(1, 0);
    let (mut zm, mut dzm) = (GaussRat::default(), GaussRat::default());
    for n in 1..=l {
        let zd1 = z.pow(dd - 1);
        let dfac = &GaussRat::from_i64(i64::from(dd), 0) * &zd1;
        dz = &(&dfac * &dz) + &one;
        z = &(&zd1 * &z) + &c;
        if n == m {
            zm = z.clone();
            dzm = dz.clone();
        }
    }
    let r = &z - &zm;
    let dr = &dz - &dzm;
    let residual = r.norm_sqr().to_f64().sqrt();
    let derivative = dr.norm_sqr().to_f64().sqrt();
    let exact_zero = r.is_zero();
    Ok(ResidualReport { residual, derivative, exact_zero, passes: residual <= tolerance * derivative.max(1.0) })
}

/// The Gaussian rational with the smallest denominators (at most `max_den`)
/// inside the root's inclusion disk that is an exact root of `p`, if any.
pub fn recognize_exact(root: &Root, p: &ZPoly, max_den: u64) -> Option<GaussRat> {
    let radius = Rational::from_f64(root.radius.max(0.0))?;
    let re = best_rational(&root.value.re.to_rational()?, &radius, max_den)?;
    let im = best_rational(&root.value.im.to_rational()?, &radius, max_den)?;
    let g = GaussRat::new(re, im);
    p.eval_gauss(&g).is_zero().then_some(g)
}

/// First continued-fraction convergent of `x` within `tol`, denominators capped.
fn best_rational(x: &Rational, tol: &Rational, max_den: u64) -> Option<Rational> {
    let (mut h0, mut h1) = (Integer::from(0), Integer::from(1));
    let (mut k0, mut k1) = (Integer::from(1), Integer::from(0));
    let mut r = x.clone();
    for _ in 0..128 {
        let a = r.clone().floor().into_numer_denom().0;
        let h2 = Integer::from(&a * &h1) + &h0;
        let k2 = Integer::from(&a * &k1) + &k0;
        if k2 > max_den {
            return None;
        }
        let cand = Rational::from((h2.clone(), k2.clone()));
        if Rational::from(&cand - x).abs() <= *tol {
            return Some(cand);
        }
        let frac = Rational::from(&r - &a);
        if frac.cmp0().is_eq() {
            return None;
        }
        r = frac.recip();
        h0 = std::mem::replace(&mut h1, h2);
        k0 = std::mem::replace(&mut k1, k2);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zp(c: &[i64]) -> ZPoly {
        ZPoly::from_i64s(c)
    }

    fn mults(rs: &RootSet) -> Vec<(i64, usize)> {
        rs.roots.iter().map(|r| (r.to_complex64().re.round() as i64, r.multiplicity)).collect()
    }

    #[test]
    fn difference_poly_examples() {
        let q0 = Rational::from(0);
        assert_eq!(difference_poly(&q0, Degree::TWO, 2, 1).unwrap(), zp(&[0, 0, 1]).to_qpoly());
        assert_eq!(difference_poly(&q0, Degree::TWO, 3, 1).unwrap(), zp(&[0, 0, 1, 2, 1]).to_qpoly());
        let p = difference_poly(&Rational::from(1), Degree::TWO, 3, 1).unwrap();
        let want = &(&zp(&[0, 1]) * &zp(&[1, 1])) * &(&zp(&[2, 1]) * &zp(&[3, 1]));
        assert_eq!(p, want.to_qpoly());
    }

    #[test]
    fn solve_small_examples() {
        let rs = solve_roots(&zp(&[0, 0, 1, 2, 1]).to_qpoly(), 128).unwrap();
        assert_eq!(mults(&rs), vec![(-1, 2), (0, 2)]);
        let p = &(&zp(&[0, 1]) * &zp(&[1, 1])) * &(&zp(&[2, 1]) * &zp(&[3, 1]));
        let rs = solve_roots(&p.to_qpoly(), 128).unwrap();
        assert_eq!(mults(&rs), vec![(-3, 1), (-2, 1), (-1, 1), (0, 1)]);
        let rs = solve_roots(&zp(&[0, 0, 1]).to_qpoly(), 128).unwrap();
        assert_eq!(mults(&rs), vec![(0, 2)]);
    }

    #[test]
    fn certified_irrational_roots() {
        // period-3 centers: c^3 + 2c^2 + c + 1
        let q = zp(&[1, 1, 2, 1]);
        let opts = SolveOptions { target_radius: Some(1e-30), ..SolveOptions::default() };
        let rs = solve_zpoly(&q, &opts).unwrap();
        assert_eq!(rs.roots.len(), 3);
        assert!(rs.max_radius() <= 1e-30);
        let real = rs.roots.iter().find(|r| r.to_complex64().im.abs() < 1e-12).unwrap();
        assert!((real.to_complex64().re + 1.754_877_666_246_693).abs() < 1e-12);
    }

    #[test]
    fn verify_root_examples() {
        let q0 = Rational::from(0);
        let r = verify_root(&q0, Degree::TWO, 3, 2, Complex64::new(-2.0, 0.0), 1e-12).unwrap();
        assert!(r.exact_zero && r.passes);
        let r = verify_root(&q0, Degree::TWO, 2, 1, Complex64::new(0.0, 0.0), 1e-12).unwrap();
        assert!(r.exact_zero);
        let r = verify_root(&Rational::from(1), Degree::TWO, 2, 1, Complex64::new(-2.0, 0.0), 1e-12).unwrap();
        assert!(r.exact_zero);
        let r = verify_root(&q0, Degree::TWO, 2, 1, Complex64::new(0.5, 0.0), 1e-12).unwrap();
        assert!(!r.passes);
    }

    #[test]
    fn conjugation_closure_and_recognition() {
        let q0 = Rational::from(0);
        let opts = SolveOptions { target_radius: Some(1e-20), ..SolveOptions::default() };
        let rs = solve_preperiodic(&q0, Degree::TWO, 5, 2, &opts).unwrap();
        assert_eq!(rs.total_multiplicity(), 16);
        let p = difference_zpoly(&q0, Degree::TWO, 5, 2, DEFAULT_DEGREE_CAP).unwrap();
        for r in &rs.roots {
            let z = r.to_complex64();
            assert!(rs.roots.iter().any(|s| (s.to_complex64() - z.conj()).norm() < 1e-15 + r.radius + s.radius));
            if let Some(g) = recognize_exact(r, &p, 1 << 10) {
                let orbit = crate::dyncore::detect_preperiodic_exact(&GaussRat::default(), &g, Degree::TWO, 64);
                assert!(orbit.is_preperiodic());
            }
        }
        // -2 and 0 are rational roots of g_5 - g_2
        let exact: Vec<GaussRat> = rs.roots.iter().filter_map(|r| recognize_exact(r, &p, 1 << 10)).collect();
        assert!(exact.contains(&GaussRat::from_i64(-2, 0)) && exact.contains(&GaussRat::from_i64(0, 0)));
    }
}
