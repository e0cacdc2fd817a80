//! Archimedean Green's function `G_a(c)` of `M_a`, the escape radius, and
//! the uniformizer `Phi_a(c) = phi_c(a^d + c)` near infinity.
//!
//! `G_a(c) = lim d^-(n-1) log|g_n(c)|` is evaluated in ball arithmetic. Once
//! `|g_n| > R*` the remaining tail is bounded by
//! `d^-(n-1) * (-ln(1 - u)) / (d - 1)` with `u = |c| / |g_n|^d <= 1/2`; while
//! the orbit has not escaped, `G_a(c) <= d^-(n-1) * (ln max(|g_n|, R*) + ln 2 * d/(d-1))`,
//! which is what an unresolved (interior-looking) point reports as its error.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;
use serde::Serialize;

use crate::ball::{Ball, Ball64, MpBall, Seed};
use crate::dyncore::{detect_preperiodic_exact_bits, Degree};
use crate::error::{Error, Result};
use crate::numbers::GaussRat;

/// A Green's function value with a rigorous error radius.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GreenValue {
    pub value: f64,
    pub error: f64,
    pub iterations_used: u32,
}

impl GreenValue {
    pub fn exact_zero() -> Self {
        GreenValue { value: 0.0, error: 0.0, iterations_used: 0 }
    }

    /// True when the value is certified positive.
    pub fn is_positive(&self) -> bool {
        self.value - self.error > 0.0
    }
}

#[derive(Clone, Copy, Debug)]
pub struct GreenOptions {
    /// Iteration budget per precision level.
    pub max_iter: u32,
    /// Try exact preperiodicity first (exact zero) when inputs are exact.
    pub exact_check: bool,
    /// Escalate from doubles to multiprecision balls when doubles cannot certify.
    pub escalate: bool,
    pub max_precision: u32,
}

impl Default for GreenOptions {
    fn default() -> Self {
        GreenOptions { max_iter: 100_000, exact_check: true, escalate: true, max_precision: 1024 }
    }
}

impl GreenOptions {
    /// Doubles only, no exact pre-pass: the per-pixel setting for rendering.
    pub fn coarse(max_iter: u32) -> Self {
        GreenOptions { max_iter, exact_check: false, escalate: false, max_precision: 53 }
    }
}

/// `R* = max(3, (2|c|)^(1/d))`: once `|z| > R*`, `|f_c(z)| >= 1.5 |z|`.
pub fn escape_certificate(c: Complex64, d: Degree) -> f64 {
    (2.0 * c.norm()).powf(1.0 / f64::from(d.get())).max(3.0)
}

/// `G_a(c)` to within `target_error`, default options.
pub fn green_param(a: Complex64, c: Complex64, d: Degree, target_error: f64) -> Result<GreenValue> {
    let a = exact(a)?;
    let c = exact(c)?;
    green_param_exact(&a, &c, d, target_error, &GreenOptions::default())
}

/// `G_a(c)` for exact Gaussian-rational inputs.
pub fn green_param_exact(a: &GaussRat, c: &GaussRat, d: Degree, target_error: f64, opts: &GreenOptions) -> Result<GreenValue> {
    green_seeded(&Seed::Exact(a.clone()), &Seed::Exact(c.clone()), d, Start::Param, target_error, opts)
}

/// Escape rate `G_c(z) = lim d^-n log+|f_c^n(z)|` of a point; note
/// `G_a(c) = d * G_c(a)`.
pub fn escape_rate(z: &GaussRat, c: &GaussRat, d: Degree, target_error: f64, opts: &GreenOptions) -> Result<GreenValue> {
    green_seeded(&Seed::Exact(z.clone()), &Seed::Exact(c.clone()), d, Start::Point, target_error, opts)
}

fn exact(z: Complex64) -> Result<GaussRat> {
    GaussRat::from_complex64(z).ok_or_else(|| Error::Precondition(format!("non-finite input {z}")))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Start {
    /// Iterate from `g_1 = a^d + c`.
    Param,
    /// Iterate from the point itself.
    Point,
}

enum Core {
    Done(GreenValue),
    NeedPrecision { step: u32, radius: f64, margin: f64 },
}

pub(crate) fn green_seeded(a: &Seed, c: &Seed, d: Degree, start: Start, target: f64, opts: &GreenOptions) -> Result<GreenValue> {
    if !(target > 0.0) {
        return Err(Error::Precondition("target_error must be positive".into()));
    }
    if opts.exact_check {
        if let (Seed::Exact(ea), Seed::Exact(ec)) = (a, c) {
            if ea.bit_size() + ec.bit_size() <= 512 {
                let r = detect_preperiodic_exact_bits(ea, ec, d, 64, 4096);
                if r.is_preperiodic() {
                    return Ok(GreenValue::exact_zero());
                }
            }
        }
    }
    let mut last = match run::<Ball64>(a, c, d, start, target, opts.max_iter, 53)? {
        Core::Done(g) => return Ok(g),
        need => need,
    };
    if opts.escalate {
        let mut prec = 128;
        while prec <= opts.max_precision {
            last = match run::<MpBall>(a, c, d, start, target, opts.max_iter, prec)? {
                Core::Done(g) => return Ok(g),
                need => need,
            };
            prec *= 2;
        }
    }
    match last {
        Core::NeedPrecision { step, radius, margin } => Err(Error::PrecisionExhausted { step, radius, margin }),
        Core::Done(_) => unreachable!(),
    }
}

fn run<B: Ball>(a: &Seed, c: &Seed, d: Degree, start: Start, target: f64, max_iter: u32, prec: u32) -> Result<Core> {
    let dd = d.get();
    let df = f64::from(dd);
    let cb = B::from_seed(c, prec);
    let (_, ln_c_hi) = cb.ln_abs_bounds();
    let c_hi = ln_c_hi.exp() * (1.0 + 1e-12);
    let r_star = (2.0 * c_hi).powf(1.0 / df).max(3.0) * (1.0 + 1e-12);
    let ln_r = r_star.ln();
    let interior_const = LN_2 * df / (df - 1.0);

    let mut z = match start {
        Start::Param => B::from_seed(a, prec).pow(dd).add(&cb),
        Start::Point => B::from_seed(a, prec),
    };
    let mut scale = 1.0f64; // d^-k
    for k in 0..=max_iter {
        let (lo, hi) = z.ln_abs_bounds();
        let rad = z.rad();
        if !hi.is_finite() || !rad.is_finite() {
            return Ok(Core::NeedPrecision { step: k, radius: rad, margin: r_star });
        }
        if lo > ln_r {
            // certified escape at index k
            let ln_u = ln_c_hi + 1e-12 - df * lo;
            let u = ln_u.exp().min(0.5);
            let tail = scale * (-(-u).ln_1p()) * df / (df - 1.0);
            let mid = scale * 0.5 * (lo + hi);
            let width = scale * 0.5 * (hi - lo);
            let error = tail + width + 4.0 * f64::EPSILON * mid;
            if error <= target {
                return Ok(Core::Done(GreenValue { value: mid, error, iterations_used: k }));
            }
            if width + 4.0 * f64::EPSILON * mid > 0.5 * target {
                return Ok(Core::NeedPrecision { step: k, radius: rad, margin: r_star });
            }
        } else {
            let bound = scale * (hi.max(ln_r) + interior_const);
            if bound <= target {
                return Ok(Core::Done(GreenValue { value: 0.0, error: bound, iterations_used: k }));
            }
            if rad >= r_star {
                return Ok(Core::NeedPrecision { step: k, radius: rad, margin: r_star });
            }
        }
        if k < max_iter {
            z = z.pow(dd).add(&cb);
            scale /= df;
        }
    }
    Err(Error::BudgetExceeded(format!(
        "no escape and no error target {target:e} within {max_iter} iterations"
    )))
}

/// Laurent coefficients of `Phi_a(c) = b_1 c + b_0 + b_{-1}/c + ...` fitted on a circle.
#[derive(Clone, Debug, Serialize)]
pub struct LaurentFit {
    pub radius_used: f64,
    /// `[b_1, b_0, b_{-1}, ...]`, leading coefficient first.
    pub coefficients: Vec<(f64, f64)>,
    pub fit_residual: f64,
    /// Largest coefficient change against the half-radius refit.
    pub consistency: f64,
}

impl LaurentFit {
    pub fn leading(&self) -> Complex64 {
        Complex64::new(self.coefficients[0].0, self.coefficients[0].1)
    }

    pub fn constant(&self) -> Complex64 {
        Complex64::new(self.coefficients[1].0, self.coefficients[1].1)
    }
}

/// `phi_c(a^d + c)` by the Böttcher product with principal roots.
pub fn uniformizer(a: Complex64, c: Complex64, d: Degree) -> Result<Complex64> {
    let df = f64::from(d.get());
    let z0 = a.powu(d.get()) + c;
    let r_star = escape_certificate(c, d);
    if z0.norm() <= r_star {
        return Err(Error::Precondition(format!(
            "c = {c} too close to M_a: |a^d + c| = {} <= {r_star}",
            z0.norm()
        )));
    }
    let mut log_sum = Complex64::new(0.0, 0.0);
    let mut z = z0;
    let mut weight = 1.0 / df;
    for _ in 0..64 {
        let zd = z.powu(d.get());
        let w = c / zd;
        let factor = Complex64::new(1.0, 0.0) + w;
        if factor.norm() <= 0.5 {
            return Err(Error::BranchAmbiguity { modulus: factor.norm(), radius: c.norm() });
        }
        log_sum += factor.ln() * weight;
        if w.norm() * weight < 1e-20 {
            break;
        }
        z = zd + c;
        weight /= df;
    }
    Ok(z0 * log_sum.exp())
}

/// Fits `num_coeffs` Laurent coefficients of `Phi_a` on `|c| = radius`.
pub fn uniformizer_series(a: Complex64, d: Degree, num_coeffs: usize, radius: f64) -> Result<LaurentFit> {
    if num_coeffs < 2 {
        return Err(Error::Precondition("need at least two coefficients".into()));
    }
    let n = (4 * num_coeffs).next_power_of_two().max(64);
    let (coeffs, residual, scale) = fit_circle(a, d, num_coeffs, radius, n)?;
    let (half, half_residual, half_scale) = fit_circle(a, d, num_coeffs, radius / 2.0, n)?;
    // noise floor of coefficient j at radius R is about eps_R * R^(j-1)
    let mut consistency = 0.0f64;
    for j in 0..num_coeffs {
        let e = j as i32 - 1;
        let noise = (residual + 1e-15 * scale) * radius.powi(e)
            + (half_residual + 1e-15 * half_scale) * (radius / 2.0).powi(e);
        let diff = (coeffs[j] - half[j]).norm();
        let tol = 100.0 * noise + 1e-9 * coeffs[j].norm();
        if diff > tol {
            return Err(Error::FitInconsistent { discrepancy: diff, tolerance: tol });
        }
        if j < 2 {
            consistency = consistency.max(diff);
        }
    }
    Ok(LaurentFit {
        radius_used: radius,
        coefficients: coeffs.iter().map(|z| (z.re, z.im)).collect(),
        fit_residual: residual,
        consistency,
    })
}

fn fit_circle(a: Complex64, d: Degree, m: usize, radius: f64, n: usize) -> Result<(Vec<Complex64>, f64, f64)> {
    let samples: Vec<(Complex64, Complex64)> = (0..n)
        .map(|k| {
            let c = Complex64::from_polar(radius, 2.0 * PI * k as f64 / n as f64);
            uniformizer(a, c, d).map(|v| (c, v))
        })
        .collect::<Result<_>>()?;
    let scale = samples.iter().map(|(_, v)| v.norm()).fold(0.0, f64::max);
    // b_j multiplies c^(1-j); extract by the discrete Fourier sum in a fixed order
    let coeffs: Vec<Complex64> = (0..m)
        .map(|j| {
            let e = 1 - j as i32;
            let mut acc = Complex64::new(0.0, 0.0);
            for (c, v) in &samples {
                acc += v * c.powi(-e);
            }
            acc / n as f64
        })
        .collect();
    let residual = samples
        .iter()
        .map(|(c, v)| {
            let approx: Complex64 = coeffs.iter().enumerate().map(|(j, b)| b * c.powi(1 - j as i32)).sum();
            (approx - v).norm()
        })
        .fold(0.0, f64::max);
    Ok((coeffs, residual, scale))
}
