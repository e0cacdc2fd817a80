//! Pictures of `M_a` shaded by level sets of `G_a`, root overlays, and
//! CSV/JSON export of root sets.
//!
//! Pixel `(i, j)` samples the exact rational parameter at its top-left
//! corner, so parameters on the pixel lattice (with the default viewport,
//! `0, -1, -2, i`) are rendered exactly.

use std::cmp::Ordering;
use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use rug::Rational;
use serde::Serialize;

use crate::dyncore::Degree;
use crate::error::{Error, Result};
use crate::greens::{green_param_exact, GreenOptions};
use crate::numbers::GaussRat;
use crate::persolve::RootSet;

/// Per-pixel error target: pixels with `G_a` below this are drawn as interior.
pub const PIXEL_TARGET: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct Viewport {
    pub center: GaussRat,
    pub width: Rational,
    pub height: Rational,
    pub pixels_x: usize,
    pub pixels_y: usize,
}

impl Viewport {
    pub fn new(center: GaussRat, width: Rational, height: Rational, pixels_x: usize, pixels_y: usize) -> Result<Self> {
        if width.cmp0().is_le() || height.cmp0().is_le() || pixels_x == 0 || pixels_y == 0 {
            return Err(Error::Precondition("viewport needs positive extents and pixel counts".into()));
        }
        Ok(Viewport { center, width, height, pixels_x, pixels_y })
    }

    /// `[-2.5, 1.5] x [-2, 2]` at 400 x 400, scaled by `max(1, |a|^d)`.
    pub fn default_for(a: &GaussRat, d: Degree) -> Self {
        let s = a.to_complex64().norm().powi(d.get() as i32);
        let s = if s > 1.0 { Rational::from_f64(s).unwrap_or_else(|| Rational::from(1)) } else { Rational::from(1) };
        Viewport {
            center: GaussRat::new(Rational::from((-1, 2)) * &s, Rational::new()),
            width: Rational::from(4) * &s,
            height: Rational::from(4) * &s,
            pixels_x: 400,
            pixels_y: 400,
        }
    }

    fn left(&self) -> Rational {
        &self.center.re - Rational::from(&self.width / 2u32)
    }

    fn top(&self) -> Rational {
        &self.center.im + Rational::from(&self.height / 2u32)
    }

    /// Exact parameter at the top-left corner of pixel `(i, j)`.
    pub fn pixel_param(&self, i: usize, j: usize) -> GaussRat {
        let dx = Rational::from(&self.width / self.pixels_x as u64) * i as u64;
        let dy = Rational::from(&self.height / self.pixels_y as u64) * j as u64;
        GaussRat::new(self.left() + dx, self.top() - dy)
    }

    /// The pixel whose cell `[x, x + dx) x (y - dy, y]` contains `z`.
    pub fn pixel_of(&self, z: Complex64) -> Option<(usize, usize)> {
        let re = Rational::from_f64(z.re)?;
        let im = Rational::from_f64(z.im)?;
        let fx = (re - self.left()) / &self.width * self.pixels_x as u64;
        let fy = (self.top() - im) / &self.height * self.pixels_y as u64;
        let i = fx.floor().into_numer_denom().0.to_i64()?;
        let j = fy.floor().into_numer_denom().0.to_i64()?;
        (i >= 0 && j >= 0 && (i as usize) < self.pixels_x && (j as usize) < self.pixels_y).then_some((i as usize, j as usize))
    }
}

pub type Rgb = [u8; 3];

pub const INTERIOR: Rgb = [0, 0, 0];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Image {
    pub width: usize,
    pub height: usize,
    /// Row-major, top row first.
    pub pixels: Vec<Rgb>,
}

impl Image {
    pub fn filled(width: usize, height: usize, color: Rgb) -> Self {
        Image { width, height, pixels: vec![color; width * height] }
    }

    pub fn get(&self, i: usize, j: usize) -> Rgb {
        self.pixels[j * self.width + i]
    }

    pub fn set(&mut self, i: usize, j: usize, color: Rgb) {
        self.pixels[j * self.width + i] = color;
    }

    pub fn is_interior(&self, i: usize, j: usize) -> bool {
        self.get(i, j) == INTERIOR
    }
}

/// Band `k` holds `2^-(k+1) < G <= 2^-k`; colors alternate between two
/// tones so the level curves show, darkening with `k`. Never black.
fn band_color(g: f64, bands: u32) -> Rgb {
    let bands = bands.max(1);
    let k = (-g.log2()).floor().clamp(0.0, f64::from(bands - 1)) as u32;
    let v = (230 - (180 * k) / bands.max(2)) as u8;
    if k.is_multiple_of(2) {
        [v, v, 255]
    } else {
        [v / 2 + 20, v / 2 + 20, v]
    }
}

/// `M_a` in `viewport`: black where `G_a` is not certified above
/// [`PIXEL_TARGET`] within `max_iter` steps (or the double-precision balls give up).
pub fn render_mset(a: &GaussRat, d: Degree, viewport: &Viewport, max_iter: u32, shading_bands: u32) -> Image {
    let opts = GreenOptions::coarse(max_iter);
    let rows: Vec<Vec<Rgb>> = (0..viewport.pixels_y)
        .into_par_iter()
        .map(|j| {
            (0..viewport.pixels_x)
                .map(|i| {
                    let c = viewport.pixel_param(i, j);
                    match green_param_exact(a, &c, d, PIXEL_TARGET, &opts) {
                        Ok(g) if g.is_positive() => band_color(g.value, shading_bands),
                        _ => INTERIOR,
                    }
                })
                .collect()
        })
        .collect();
    Image { width: viewport.pixels_x, height: viewport.pixels_y, pixels: rows.concat() }
}

/// Binary PPM (P6, maxval 255).
pub fn write_ppm<W: Write>(image: &Image, out: &mut W) -> Result<()> {
    write!(out, "P6\n{} {}\n255\n", image.width, image.height)?;
    let bytes: Vec<u8> = image.pixels.iter().flatten().copied().collect();
    out.write_all(&bytes)?;
    Ok(())
}

pub fn ppm_bytes(image: &Image) -> Vec<u8> {
    let mut v = Vec::with_capacity(image.pixels.len() * 3 + 20);
    write_ppm(image, &mut v).expect("writing to a Vec");
    v
}

/// Marks every root inside the viewport.
pub fn overlay(image: &mut Image, viewport: &Viewport, roots: &RootSet, color: Rgb) -> usize {
    let mut n = 0;
    for r in &roots.roots {
        if let Some((i, j)) = viewport.pixel_of(r.to_complex64()) {
            image.set(i, j, color);
            n += 1;
        }
    }
    n
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootFormat {
    Csv,
    Json,
}

#[derive(Serialize)]
struct RootRecord {
    re: String,
    im: String,
    multiplicity: usize,
    inclusion_radius: f64,
}

fn records(rs: &RootSet) -> Vec<RootRecord> {
    let mut roots: Vec<_> = rs.roots.iter().collect();
    roots.sort_by(|x, y| {
        x.value
            .re
            .partial_cmp(&y.value.re)
            .unwrap_or(Ordering::Equal)
            .then(x.value.im.partial_cmp(&y.value.im).unwrap_or(Ordering::Equal))
    });
    let digits = Some(30);
    roots
        .into_iter()
        .map(|r| RootRecord {
            re: r.value.re.to_string_radix(10, digits),
            im: r.value.im.to_string_radix(10, digits),
            multiplicity: r.multiplicity,
            inclusion_radius: r.radius,
        })
        .collect()
}

/// CSV `re,im,multiplicity,inclusion_radius` or the same records as a JSON
/// array, sorted by `(re, im)`.
pub fn export_roots(rs: &RootSet, format: RootFormat) -> Vec<u8> {
    let recs = records(rs);
    match format {
        RootFormat::Csv => {
            let mut s = String::from("re,im,multiplicity,inclusion_radius\n");
            for r in &recs {
                s.push_str(&format!("{},{},{},{:e}\n", r.re, r.im, r.multiplicity, r.inclusion_radius));
            }
            s.into_bytes()
        }
        RootFormat::Json => {
            let mut v = serde_json::to_vec_pretty(&recs).expect("plain records serialize");
            v.push(b'\n');
            v
        }
    }
}
