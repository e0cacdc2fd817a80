//! Computational toolkit for the unicritical family `f_c(z) = z^d + c`.
//!
//! The crate covers the generalized Mandelbrot sets `M_a` (the parameters `c`
//! for which a marked point `a` stays bounded), their Green's functions and
//! uniformizers, the polynomials `g_n(c) = f_c^n(a)` whose differences cut out
//! the preperiodic parameters, equidistribution diagnostics for those root
//! sets, exact non-archimedean local Green's functions over `Q` and over the
//! rational function field `Q(t)`, adelic heights, and an exact search for
//! parameters at which two marked points are simultaneously preperiodic.
//!
//! Module map:
//!
//! * [`dyncore`]: iterate polynomials, numeric and exact orbits.
//! * [`greens`]: archimedean Green's function `G_a`, escape radius, uniformizer `Phi_a`.
//! * [`persolve`]: certified multiprecision roots of `g_l - g_m`.
//! * [`equidist`]: exterior-potential gaps, box discrepancy, `M_a` vs `M_b` witnesses.
//! * [`adelic`]: p-adic local Green's functions and heights over `Q`.
//! * [`funcfield`]: the same machinery over `Q(t)`.
//! * [`conjsearch`]: common preperiodic parameters of two points.
//! * [`renderio`]: PPM rendering and CSV/JSON export.
//! * [`cli`]: the `mandel-arith` command surface.
//!
//! Supporting algebra lives in [`poly`] (dense polynomials over `Z`, `Q`
//! and `Z/p`, modular gcd, factorization over `Q`) and [`numbers`].

pub mod adelic;
mod ball;
pub mod cli;
pub mod conjsearch;
pub mod dyncore;
pub mod equidist;
pub mod error;
pub mod funcfield;
pub mod greens;
pub mod mp;
pub mod numbers;
pub mod persolve;
pub mod poly;
pub mod renderio;

pub use dyncore::{Degree, IteratePoly, OrbitResult, OrbitStatus};
pub use error::{Error, Result};
pub use numbers::GaussRat;
