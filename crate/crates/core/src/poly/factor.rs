//! Factorization over `Q` by the Zassenhaus method: factor modulo a small
//! prime, Hensel-lift, then recombine lifted factors by trial division.
//!
//! Intended for polynomials of modest degree (the gcds met in this crate);
//! recombination is exponential in the number of modular factors.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::ops::Pow;
use rug::{Complete, Integer, Rational};

use super::gcd::squarefree_decomposition;
use super::modp::{is_small_prime, trim, Field};
use super::ZPoly;

/// Irreducible factors of `f` over `Q` with multiplicities, each primitive with
/// positive leading coefficient, sorted by degree then coefficients. The
/// content and sign of `f` are dropped.
pub fn factor_over_q(f: &ZPoly) -> Vec<(ZPoly, usize)> {
    let mut out = Vec::new();
    for (q, mult) in squarefree_decomposition(f) {
        for g in factor_squarefree(&q) {
            out.push((g, mult));
        }
    }
    out.sort_by(|(a, _), (b, _)| a.degree().cmp(&b.degree()).then_with(|| a.coeffs().cmp(b.coeffs())));
    out
}

/// Distinct rational roots of a nonzero polynomial, ascending.
pub fn rational_roots(f: &ZPoly) -> Vec<Rational> {
    let mut roots: Vec<Rational> = factor_over_q(f)
        .into_iter()
        .filter(|(g, _)| g.degree() == Some(1))
        .map(|(g, _)| Rational::from((-g.coeffs()[0].clone(), g.coeffs()[1].clone())))
        .collect();
    roots.sort();
    roots
}

fn factor_squarefree(f: &ZPoly) -> Vec<ZPoly> {
    let n = f.degree().unwrap_or(0);
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![f.primitive_part()];
    }
    // pull out the factor x first; it keeps the prime search simple
    if f.coeffs()[0].cmp0().is_eq() {
        let rest = f.div_exact(&ZPoly::from_i64s(&[0, 1])).unwrap();
        let mut v = vec![ZPoly::from_i64s(&[0, 1])];
        v.extend(factor_squarefree(&rest));
        return v;
    }

    let (p, modular) = choose_prime(f);
    if modular.len() == 1 {
        return vec![f.primitive_part()];
    }
    let lc = f.lc().unwrap().clone();
    let bound = (&lc.clone().abs() * mignotte_bound(f)) * 2u32;
    let mut k = 1u32;
    let mut modulus = Integer::from(p);
    while modulus <= bound {
        modulus *= p;
        k += 1;
    }
    let lifted = multifactor_lift(f, &modular, p, k);
    recombine(f, lifted, &modulus)
}

/// Coefficient bound for any integer factor of `f`: `2^deg * ||f||_2`.
fn mignotte_bound(f: &ZPoly) -> Integer {
    let sq: Integer = f.coeffs().iter().map(|c| c.square_ref().complete()).sum();
    let norm = sq.sqrt() + 1u32;
    norm << (f.degree().unwrap_or(0) as u32)
}

/// Factors mod a few admissible primes and keeps the one with fewest factors.
fn choose_prime(f: &ZPoly) -> (u64, Vec<Vec<u64>>) {
    let lc = f.lc().unwrap();
    let mut best: Option<(u64, Vec<Vec<u64>>)> = None;
    let mut tried = 0;
    let mut p = 3u64;
    while tried < 5 {
        if is_small_prime(p) {
            let fp = Field::new(p);
            let fbar = fp.reduce_poly(f);
            if fp.reduce(lc) != 0 && fp.gcd(&fbar, &fp.derivative(&fbar)).len() == 1 {
                tried += 1;
                let facs = factor_mod_p(fp, &fbar);
                let better = best.as_ref().is_none_or(|(_, b)| facs.len() < b.len());
                if better {
                    best = Some((p, facs));
                }
                if best.as_ref().unwrap().1.len() == 1 {
                    break;
                }
            }
        }
        p += 2;
    }
    best.unwrap()
}

/// Monic irreducible factors of a squarefree polynomial over `F_p`, `p` odd.
pub(crate) fn factor_mod_p(fp: Field, f: &[u64]) -> Vec<Vec<u64>> {
    let mut f = f.to_vec();
    fp.monic(&mut f);
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ fp.p);
    for (g, deg) in distinct_degree(fp, &f) {
        equal_degree(fp, &g, deg, &mut rng, &mut out);
    }
    out.sort();
    out
}

fn distinct_degree(fp: Field, f: &[u64]) -> Vec<(Vec<u64>, usize)> {
    let mut out = Vec::new();
    let mut rest = f.to_vec();
    let x = vec![0u64, 1];
    let mut h = x.clone();
    let p = Integer::from(fp.p);
    let mut i = 1;
    while rest.len() > 2 * i {
        h = fp.pow_mod(&h, &p, &rest);
        let g = fp.gcd(&rest, &fp.sub_poly(&h, &x));
        if g.len() > 1 {
            rest = fp.div_rem(&rest, &g).0;
            fp.rem_in_place(&mut h, &rest);
            out.push((g, i));
        }
        i += 1;
    }
    if rest.len() > 1 {
        let deg = rest.len() - 1;
        out.push((rest, deg));
    }
    out
}

fn equal_degree(fp: Field, f: &[u64], deg: usize, rng: &mut ChaCha8Rng, out: &mut Vec<Vec<u64>>) {
    let n = f.len() - 1;
    if n == deg {
        let mut g = f.to_vec();
        fp.monic(&mut g);
        out.push(g);
        return;
    }
    let e = (Integer::from(fp.p).pow(deg as u32) - 1u32) / 2u32;
    loop {
        let mut a: Vec<u64> = (0..n).map(|_| rng.gen_range(0..fp.p)).collect();
        trim(&mut a);
        if a.len() < 2 {
            continue;
        }
        let b = fp.pow_mod(&a, &e, f);
        let g = fp.gcd(f, &fp.sub_poly(&b, &[1]));
        if g.len() > 1 && g.len() < f.len() {
            let h = fp.div_rem(f, &g).0;
            equal_degree(fp, &g, deg, rng, out);
            equal_degree(fp, &h, deg, rng, out);
            return;
        }
    }
}

/// Lifts `f = lc * prod u_i (mod p)` to a factorization modulo `p^k`; the
/// returned factors are monic modulo `p^k`.
fn multifactor_lift(f: &ZPoly, factors: &[Vec<u64>], p: u64, k: u32) -> Vec<ZPoly> {
    let modulus = Integer::from(p).pow(k);
    let fp = Field::new(p);
    let mut target = f.clone();
    let mut out = Vec::new();
    for i in 0..factors.len() - 1 {
        let g0 = &factors[i];
        // h0 = lc * prod of the remaining factors, mod p
        let mut h0 = vec![fp.reduce(f.lc().unwrap())];
        for u in &factors[i + 1..] {
            h0 = fp.mul_poly(&h0, u);
        }
        let (g, h) = hensel_pair(&target, g0, &h0, p, k, &modulus);
        out.push(g);
        target = h;
    }
    // the last factor carries the leading coefficient; make it monic mod p^k
    let lc_inv = target.lc().unwrap().clone().invert(&modulus).expect("lc is a unit");
    out.push(reduce_sym(&target.scale(&lc_inv), &modulus));
    out
}

/// Linear Hensel lifting of `f = g h (mod p)` with `g` monic to modulus `p^k`.
fn hensel_pair(f: &ZPoly, g0: &[u64], h0: &[u64], p: u64, k: u32, modulus: &Integer) -> (ZPoly, ZPoly) {
    let fp = Field::new(p);
    let (one, s, t) = fp.xgcd(g0, h0);
    debug_assert_eq!(one, vec![1]);
    let to_z = |v: &[u64]| ZPoly::new(v.iter().map(|&c| Integer::from(c)).collect());
    let mut g = to_z(g0);
    let mut h = to_z(h0);
    // fix h's leading coefficient to lc(f) exactly so that deg(f - gh) < deg f
    let mut hc = h.clone().into_coeffs();
    *hc.last_mut().unwrap() = f.lc().unwrap().clone();
    h = reduce_sym(&ZPoly::new(hc), modulus);
    let mut pe = Integer::from(p);
    for _ in 1..k {
        let err = f - &(&g * &h);
        let delta: Vec<u64> = {
            let mut v: Vec<u64> = err
                .coeffs()
                .iter()
                .map(|c| fp.reduce(&c.div_exact_ref(&pe).complete()))
                .collect();
            trim(&mut v);
            v
        };
        if !delta.is_empty() {
            let td = fp.mul_poly(&t, &delta);
            let (q, ghat) = fp.div_rem(&td, g0);
            let hhat = fp.add_poly(&fp.mul_poly(&s, &delta), &fp.mul_poly(&q, &fp.reduce_poly(&h)));
            g = &g + &to_z(&ghat).scale(&pe);
            h = &h + &to_z(&hhat).scale(&pe);
        }
        pe *= p;
        g = reduce_sym(&g, modulus);
        h = reduce_sym(&h, modulus);
    }
    (g, h)
}

fn reduce_sym(f: &ZPoly, m: &Integer) -> ZPoly {
    let half = Integer::from(m >> 1);
    ZPoly::new(
        f.coeffs()
            .iter()
            .map(|c| {
                let mut r = c.clone() % m;
                if r < 0 {
                    r += m;
                }
                if r > half {
                    r -= m;
                }
                r
            })
            .collect(),
    )
}

fn recombine(f: &ZPoly, mut lifted: Vec<ZPoly>, modulus: &Integer) -> Vec<ZPoly> {
    let mut rest = f.primitive_part();
    let mut out = Vec::new();
    let mut s = 1;
    while 2 * s <= lifted.len() {
        let mut found = false;
        let r = lifted.len();
        let mut idx: Vec<usize> = (0..s).collect();
        loop {
            let lc = rest.lc().unwrap().clone();
            // cheap filter on the constant term before building the product
            let mut c0 = lc.clone();
            for &i in &idx {
                c0 = Integer::from(&c0 * &lifted[i].coeffs()[0]) % modulus;
            }
            let c0 = reduce_sym(&ZPoly::constant(c0), modulus);
            let c0 = c0.coeffs().first().cloned().unwrap_or_default();
            let plausible = c0.cmp0().is_eq() || Integer::from(&lc * &rest.coeffs()[0]).is_divisible(&c0);
            if plausible {
                let mut g = ZPoly::constant(lc.clone());
                for &i in &idx {
                    g = reduce_sym(&(&g * &lifted[i]), modulus);
                }
                let g = g.primitive_part();
                if let Some(q) = rest.div_exact(&g) {
                    out.push(g);
                    rest = q.primitive_part();
                    for &i in idx.iter().rev() {
                        lifted.remove(i);
                    }
                    found = true;
                    break;
                }
            }
            if !next_combination(&mut idx, r) {
                break;
            }
        }
        if !found {
            s += 1;
        }
    }
    if rest.degree().unwrap_or(0) > 0 {
        out.push(rest);
    }
    out
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
