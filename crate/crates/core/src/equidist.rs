//! Equidistribution diagnostics for the parameters cut out by `g_l - g_m`.
//!
//! The root measure of `g_l - g_m` has logarithmic potential
//! `d^-(l-1) log|g_l - g_m|`, so its distance from the equilibrium measure
//! of `M_a` is probed on a circle outside `M_a` by comparing that potential
//! to `G_a` directly; no roots are needed. [`box_discrepancy`] compares two
//! discrete measures box by box, and [`discriminate`] looks for a parameter
//! separating `M_a` from `M_b`.

use num_complex::Complex64;
use rayon::prelude::*;
use rug::ops::Pow;
use rug::Float;
use serde::Serialize;

use crate::dyncore::{detect_preperiodic_exact, Degree};
use crate::error::{Error, Result};
use crate::greens::{escape_certificate, green_param_exact, GreenOptions};
use crate::mp::MpComplex;
use crate::numbers::GaussRat;
use crate::persolve::RootSet;

/// A finitely supported probability measure on `C`.
#[derive(Clone, Debug, Serialize)]
pub struct EmpiricalMeasure {
    points: Vec<(Complex64, f64)>,
}

impl EmpiricalMeasure {
    /// Normalizes positive weights to total mass one.
    pub fn new(points: Vec<(Complex64, f64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Precondition("empty measure".into()));
        }
        if points.iter().any(|&(z, w)| !(w > 0.0 && w.is_finite()) || !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Precondition("weights must be positive and points finite".into()));
        }
        let total: f64 = points.iter().map(|p| p.1).sum();
        Ok(EmpiricalMeasure { points: points.into_iter().map(|(z, w)| (z, w / total)).collect() })
    }

    pub fn point_mass(z: Complex64) -> Self {
        EmpiricalMeasure { points: vec![(z, 1.0)] }
    }

    /// Roots weighted by multiplicity.
    pub fn from_roots(rs: &RootSet) -> Result<Self> {
        Self::new(rs.roots.iter().map(|r| (r.to_complex64(), r.multiplicity as f64)).collect())
    }

    pub fn points(&self) -> &[(Complex64, f64)] {
        &self.points
    }

    pub fn total_weight(&self) -> f64 {
        self.points.iter().map(|p| p.1).sum()
    }
}

/// Sup over the sampled circle of `|d^-(l-1) log|g_l - g_m| - G_a|`.
#[derive(Clone, Debug, Serialize)]
pub struct GapReport {
    pub l: u32,
    pub m: u32,
    pub radius: f64,
    pub samples: usize,
    /// May underflow to zero; compare `log10_gap` instead.
    pub gap: f64,
    pub log10_gap: f64,
    /// Bound on the relative error of `gap`.
    pub rel_error: f64,
    pub argmax: (f64, f64),
}

const GAP_PREC: u32 = 192;

/// The gap is evaluated through the exact identity
/// `d^-(l-1) log|g_l - g_m| - G_a = d^-(l-1) log|1 - g_m/g_l| - sum_{k>=l} d^-k log|1 + c/g_k^d|`,
/// whose terms are tiny but carry full relative precision, at 192 bits.
pub fn potential_gap(a: &GaussRat, d: Degree, l: u32, m: u32, radius: f64, samples: usize) -> Result<GapReport> {
    if !(l > m && m >= 1) {
        return Err(Error::Precondition(format!("need l > m >= 1, got l={l}, m={m}")));
    }
    if samples == 0 || !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::Precondition("need a positive radius and at least one sample".into()));
    }
    let rows: Vec<Result<(Float, f64, Complex64)>> = (0..samples)
        .into_par_iter()
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / samples as f64;
            let z = Complex64::from_polar(radius, theta);
            let c = GaussRat::from_complex64(z).expect("finite sample");
            let g = green_param_exact(a, &c, d, 1e-6, &GreenOptions::default())?;
            if !g.is_positive() {
                return Err(Error::Precondition(format!(
                    "sample {z} is not certified outside M_a; enlarge the radius"
                )));
            }
            let (gap, rel) = gap_at(a, &c, d, l, m)
                .ok_or_else(|| Error::Precondition(format!("g_l - g_m vanishes at the sample {z}")))?;
            Ok((gap, rel, z))
        })
        .collect();
    let mut best: Option<(Float, Complex64)> = None;
    let mut rel_error: f64 = 0.0;
    for r in rows {
        let (gap, rel, z) = r?;
        rel_error = rel_error.max(rel);
        if best.as_ref().is_none_or(|(b, _)| gap > *b) {
            best = Some((gap, z));
        }
    }
    let (gap, z) = best.expect("samples > 0");
    let log10_gap = if gap.is_zero() { f64::NEG_INFINITY } else { Float::with_val(64, gap.log10_ref()).to_f64() };
    Ok(GapReport { l, m, radius, samples, gap: gap.to_f64(), log10_gap, rel_error, argmax: (z.re, z.im) })
}

/// `(|gap|, relative error bound)` at one parameter, or `None` if some
/// iterate vanishes.
fn gap_at(a: &GaussRat, c: &GaussRat, d: Degree, l: u32, m: u32) -> Option<(Float, f64)> {
    let p = GAP_PREC;
    let dd = d.get();
    let cz = MpComplex::from_gauss(p, c);
    let c_abs = cz.abs();
    let mut z = MpComplex::from_gauss(p, a).pow_u(dd);
    z.add_assign(&cz);
    let mut zm = z.clone();
    for n in 2..=l {
        if n == m + 1 {
            zm = z.clone();
        }
        z = z.pow_u(dd);
        z.add_assign(&cz);
    }
    // ln|1 + w| = ln_1p(2 Re w + |w|^2) / 2
    let half_ln_abs_1p = |w: &MpComplex| -> Float {
        let mut t = Float::with_val(p, &w.re * 2u32);
        t += w.norm_sqr();
        t.ln_1p() / 2u32
    };
    if z.norm_sqr().is_zero() {
        return None;
    }
    let mut r = zm.div(&z);
    r.re = -r.re;
    r.im = -r.im;
    let lead = half_ln_abs_1p(&r);
    if !lead.is_finite() {
        return None;
    }
    let df = Float::with_val(p, dd);
    let mut scale = Float::with_val(p, 1) / Float::with_val(p, (&df).pow(l - 1));
    let mut total = Float::with_val(p, &lead * &scale);
    let r_star = Float::with_val(p, escape_certificate(c.to_complex64(), d));
    for _ in 0..10_000 {
        // term for index k: d^-k ln|1 + c / g_k^d|
        scale /= &df;
        let zd = z.pow_u(dd);
        if zd.norm_sqr().is_zero() {
            return None;
        }
        let w = cz.div(&zd);
        let term = Float::with_val(p, half_ln_abs_1p(&w) * &scale);
        total -= &term;
        z = zd;
        z.add_assign(&cz);
        let za = z.abs();
        if za > r_star {
            // remaining terms sum to at most scale/d * (-ln(1-u)) * d/(d-1), u = |c|/|z|^d
            let u = Float::with_val(64, &c_abs / Float::with_val(64, (&za).pow(dd)));
            let tail = Float::with_val(64, &scale / (Float::with_val(64, &df) - 1u32)) * -Float::with_val(64, -u).ln_1p();
            let mag = Float::with_val(64, total.abs_ref());
            if mag.is_zero() {
                continue;
            }
            let rel = Float::with_val(64, &tail / &mag).to_f64();
            if rel < 1e-30 {
                return Some((total.abs(), rel + 1e-40));
            }
        }
    }
    None
}

/// A rectangle cut into `nx * ny` half-open boxes; everything else falls in
/// one extra outside box.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct BoxGrid {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub nx: usize,
    pub ny: usize,
}

impl BoxGrid {
    pub fn new(re: (f64, f64), im: (f64, f64), nx: usize, ny: usize) -> Result<Self> {
        if !(re.0 < re.1 && im.0 < im.1 && nx > 0 && ny > 0) {
            return Err(Error::Precondition("grid needs positive extents and box counts".into()));
        }
        Ok(BoxGrid { re_min: re.0, re_max: re.1, im_min: im.0, im_max: im.1, nx, ny })
    }

    /// `[-2.5, 1.5] x [-2, 2]` scaled by `max(1, |a|^d)`, 64 x 64 boxes.
    pub fn default_for(a: Complex64, d: Degree) -> Self {
        let s = a.norm().powi(d.get() as i32).max(1.0);
        BoxGrid { re_min: -2.5 * s, re_max: 1.5 * s, im_min: -2.0 * s, im_max: 2.0 * s, nx: 64, ny: 64 }
    }

    /// Box index, with `nx * ny` meaning outside.
    pub fn index(&self, z: Complex64) -> usize {
        let outside = self.nx * self.ny;
        let fx = (z.re - self.re_min) / (self.re_max - self.re_min) * self.nx as f64;
        let fy = (z.im - self.im_min) / (self.im_max - self.im_min) * self.ny as f64;
        if !(fx >= 0.0 && fy >= 0.0) {
            return outside;
        }
        let (ix, iy) = (fx.floor() as usize, fy.floor() as usize);
        if ix >= self.nx || iy >= self.ny {
            outside
        } else {
            iy * self.nx + ix
        }
    }

    fn masses(&self, mu: &EmpiricalMeasure) -> Vec<f64> {
        let mut out = vec![0.0; self.nx * self.ny + 1];
        for &(z, w) in mu.points() {
            out[self.index(z)] += w;
        }
        out
    }
}

/// `max_B |mu1(B) - mu2(B)|` over the grid boxes and the outside box.
pub fn box_discrepancy(mu1: &EmpiricalMeasure, mu2: &EmpiricalMeasure, grid: &BoxGrid) -> f64 {
    let m1 = grid.masses(mu1);
    let m2 = grid.masses(mu2);
    m1.iter().zip(&m2).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max).min(1.0)
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind")]
pub enum WitnessKind {
    /// The first point is exactly preperiodic while the second certifiably escapes.
    PreperiodicVsEscaping { preperiodic: char },
    /// Both escape, with certified different escape rates.
    GreenMismatch,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "result")]
pub enum Discrimination {
    /// `witness` lies in exactly one of the two sets, or the Green's
    /// functions differ there by at least `gap`.
    Distinguished { witness: GaussRat, kind: WitnessKind, gap: f64 },
    /// No witness among the first `tried` candidates; says nothing about equality.
    IndistinguishableAtBudget { tried: usize },
}

/// Gaussian integers by increasing Chebyshev ring, then `|c|^2`, `re`, `-im`.
pub fn candidate_parameters(count: usize) -> Vec<GaussRat> {
    let mut out = Vec::with_capacity(count);
    let mut ring: i64 = 0;
    while out.len() < count {
        let mut layer: Vec<(i64, i64)> = Vec::new();
        for x in -ring..=ring {
            for y in -ring..=ring {
                if x.abs().max(y.abs()) == ring {
                    layer.push((x, y));
                }
            }
        }
        layer.sort_by_key(|&(x, y)| (x * x + y * y, x, -y));
        out.extend(layer.into_iter().map(|(x, y)| GaussRat::from_i64(x, y)));
        ring += 1;
    }
    out.truncate(count);
    out
}

/// Looks for `c` with `c` in `M_a` but not `M_b` (or the reverse), trying
/// `budget` candidates; `orbit_cap` bounds the exact orbit length.
pub fn discriminate(a: &GaussRat, b: &GaussRat, d: Degree, orbit_cap: u32, budget: usize) -> Discrimination {
    let opts = GreenOptions { max_iter: 4000, ..GreenOptions::default() };
    let target = 1e-10;
    for c in candidate_parameters(budget) {
        let pa = detect_preperiodic_exact(a, &c, d, orbit_cap).is_preperiodic();
        let pb = detect_preperiodic_exact(b, &c, d, orbit_cap).is_preperiodic();
        let ga = if pa { None } else { green_param_exact(a, &c, d, target, &opts).ok() };
        let gb = if pb { None } else { green_param_exact(b, &c, d, target, &opts).ok() };
        match (pa, pb) {
            (true, true) => continue,
            (true, false) | (false, true) => {
                let g = if pa { gb } else { ga };
                if let Some(g) = g.filter(|g| g.is_positive()) {
                    let kind = WitnessKind::PreperiodicVsEscaping { preperiodic: if pa { 'a' } else { 'b' } };
                    return Discrimination::Distinguished { witness: c, kind, gap: g.value - g.error };
                }
            }
            (false, false) => {
                if let (Some(x), Some(y)) = (ga, gb) {
                    let sep = (x.value - y.value).abs() - x.error - y.error;
                    if sep > 0.0 {
                        return Discrimination::Distinguished { witness: c, kind: WitnessKind::GreenMismatch, gap: sep };
                    }
                }
            }
        }
    }
    Discrimination::IndistinguishableAtBudget { tried: budget }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discrepancy_basics() {
        let grid = BoxGrid::new((-0.5, 1.5), (-0.5, 0.5), 2, 1).unwrap();
        let p0 = EmpiricalMeasure::point_mass(Complex64::new(0.0, 0.0));
        let p1 = EmpiricalMeasure::point_mass(Complex64::new(1.0, 0.0));
        assert_eq!(box_discrepancy(&p0, &p0, &grid), 0.0);
        assert_eq!(box_discrepancy(&p0, &p1, &grid), 1.0);
        let far = EmpiricalMeasure::point_mass(Complex64::new(9.0, 0.0));
        assert_eq!(box_discrepancy(&far, &p1, &grid), 1.0);
    }

    #[test]
    fn measure_normalizes() {
        let mu = EmpiricalMeasure::new(vec![(Complex64::new(0.0, 0.0), 2.0), (Complex64::new(1.0, 0.0), 6.0)]).unwrap();
        assert!((mu.total_weight() - 1.0).abs() < 1e-12);
        assert!(EmpiricalMeasure::new(vec![(Complex64::new(0.0, 0.0), -1.0)]).is_err());
    }

    #[test]
    fn candidate_order() {
        let c = candidate_parameters(5);
        let want = [(0, 0), (-1, 0), (0, 1), (0, -1), (1, 0)];
        for (g, (x, y)) in c.iter().zip(want) {
            assert_eq!(*g, GaussRat::from_i64(x, y));
        }
    }

    #[test]
    fn discriminate_examples() {
        let (z0, z1, z2) = (GaussRat::from_i64(0, 0), GaussRat::from_i64(1, 0), GaussRat::from_i64(2, 0));
        match discriminate(&z0, &z1, Degree::TWO, 64, 50) {
            Discrimination::Distinguished { witness, .. } => assert_eq!(witness, GaussRat::i()),
            other => panic!("{other:?}"),
        }
        match discriminate(&z0, &z2, Degree::TWO, 64, 50) {
            Discrimination::Distinguished { witness, .. } => assert_eq!(witness, z0),
            other => panic!("{other:?}"),
        }
        let minus = GaussRat::from_i64(-1, 0);
        assert!(matches!(discriminate(&z1, &minus, Degree::TWO, 64, 30), Discrimination::IndistinguishableAtBudget { .. }));
    }

    #[test]
    fn gap_shrinks_and_ignores_roots_of_unity() {
        let a = GaussRat::from_i64(0, 0);
        let g2 = potential_gap(&a, Degree::TWO, 2, 1, 4.0, 64).unwrap();
        let g6 = potential_gap(&a, Degree::TWO, 6, 1, 4.0, 256).unwrap();
        let g12 = potential_gap(&a, Degree::TWO, 12, 1, 4.0, 256).unwrap();
        assert!(g2.gap.is_finite() && g2.gap > 0.0);
        assert!(g2.gap > 0.1 && g2.gap < 0.3);
        assert!(g6.log10_gap.is_finite() && g12.log10_gap.is_finite());
        assert!(g12.log10_gap + 1.0 < g6.log10_gap);
        let b = GaussRat::from_i64(1, 0);
        let bm = GaussRat::from_i64(-1, 0);
        let x = potential_gap(&b, Degree::TWO, 5, 2, 4.0, 32).unwrap();
        let y = potential_gap(&bm, Degree::TWO, 5, 2, 4.0, 32).unwrap();
        assert_eq!(x.gap, y.gap);
    }

    #[test]
    fn interior_circle_is_rejected() {
        let a = GaussRat::from_i64(0, 0);
        assert!(matches!(potential_gap(&a, Degree::TWO, 3, 1, 0.1, 8), Err(Error::Precondition(_))));
    }
}
