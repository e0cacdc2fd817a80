//! Modular gcd over `Z[x]` and squarefree decomposition.

use rug::{Complete, Integer};

use super::modp::{word_primes, Field};
use super::{QPoly, ZPoly};

/// Gcd in `Z[x]`, normalized to positive leading coefficient.
///
/// Images modulo word-size primes are combined by CRT until the primitive
/// part of the symmetric lift stabilizes and divides both inputs exactly.
/// Primes dividing either leading coefficient are skipped; a prime whose
/// image has too large a degree is unlucky and dropped.
pub fn gcd_z(a: &ZPoly, b: &ZPoly) -> ZPoly {
    if a.is_zero() {
        return b.primitive_part().scale(&b.content());
    }
    if b.is_zero() {
        return a.primitive_part().scale(&a.content());
    }
    let cont = a.content().gcd(&b.content());
    let (pa, pb) = (a.primitive_part(), b.primitive_part());
    if pa.degree() == Some(0) || pb.degree() == Some(0) {
        return ZPoly::constant(cont);
    }
    if pa == pb {
        return pa.scale(&cont);
    }
    let g = primitive_gcd(&pa, &pb);
    g.scale(&cont)
}

fn primitive_gcd(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let la = a.lc().unwrap();
    let lb = b.lc().unwrap();
    let gamma = la.clone().gcd(lb);

    let mut best_deg = usize::MAX;
    let mut image: Vec<Integer> = Vec::new();
    let mut modulus = Integer::from(1);
    let mut last_candidate: Option<ZPoly> = None;

    for p in word_primes() {
        let f = Field::new(p);
        if f.reduce(la) == 0 || f.reduce(lb) == 0 {
            continue;
        }
        let mut g = f.gcd(&f.reduce_poly(a), &f.reduce_poly(b));
        let deg = g.len() - 1;
        if deg == 0 {
            return ZPoly::one();
        }
        if deg > best_deg {
            continue;
        }
        // scale to leading coefficient gamma so the images are consistent lifts
        g = f.scale_poly(&g, f.reduce(&gamma));
        if deg < best_deg {
            best_deg = deg;
            image = g.iter().map(|&c| Integer::from(c)).collect();
            modulus = Integer::from(p);
            last_candidate = None;
            continue;
        }
        crt_combine(&mut image, &mut modulus, &g, p);
        let candidate = ZPoly::new(symmetric(&image, &modulus)).primitive_part();
        if last_candidate.as_ref() == Some(&candidate)
            && candidate.divides(a) && candidate.divides(b) {
                return candidate;
            }
        last_candidate = Some(candidate);
    }
    unreachable!("ran out of word-size primes")
}

fn crt_combine(image: &mut [Integer], modulus: &mut Integer, residues: &[u64], p: u64) {
    let f = Field::new(p);
    let m_inv = f.inv(f.reduce(modulus));
    for (x, &r) in image.iter_mut().zip(residues) {
        let t = f.mul(f.sub(r, f.reduce(x)), m_inv);
        *x += Integer::from(&*modulus * t);
    }
    *modulus *= p;
}

fn symmetric(image: &[Integer], modulus: &Integer) -> Vec<Integer> {
    let half = Integer::from(modulus >> 1);
    image
        .iter()
        .map(|x| if *x > half { (x - modulus).complete() } else { x.clone() })
        .collect()
}

/// Monic gcd in `Q[x]`; zero when both inputs are zero.
pub fn gcd_q(a: &QPoly, b: &QPoly) -> QPoly {
    if a.is_zero() && b.is_zero() {
        return QPoly::zero();
    }
    gcd_z(&a.primitive_zpoly(), &b.primitive_zpoly()).to_qpoly().monic()
}

/// Yun's squarefree decomposition of a nonzero polynomial, content dropped.
///
/// Returns `(q_i, i)` for the nontrivial primitive factors, so that the input
/// equals a constant times `prod q_i^i` with the `q_i` squarefree and pairwise
/// coprime.
pub fn squarefree_decomposition(f: &ZPoly) -> Vec<(ZPoly, usize)> {
    let f = f.primitive_part();
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let df = f.derivative();
    let a0 = gcd_z(&f, &df).primitive_part();
    let mut b = f.div_exact(&a0).expect("gcd divides f");
    let c = df.div_exact(&a0).expect("gcd divides f'");
    let mut d = &c - &b.derivative();
    let mut i = 1;
    while b.degree().unwrap_or(0) > 0 {
        let a = gcd_z(&b, &d).primitive_part();
        if a.degree().unwrap_or(0) > 0 {
            out.push((a.clone(), i));
        }
        let nb = b.div_exact(&a).expect("Yun step");
        let nc = d.div_exact(&a).expect("Yun step");
        d = &nc - &nb.derivative();
        b = nb;
        i += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn z(c: &[i64]) -> ZPoly {
        ZPoly::from_i64s(c)
    }

    #[test]
    fn small_gcds() {
        // c^2 (c+1)^2 and c (c+1) (c+2) (c+3)
        let a = z(&[0, 0, 1, 2, 1]);
        let b = &(&z(&[0, 1]) * &z(&[1, 1])) * &(&z(&[2, 1]) * &z(&[3, 1]));
        assert_eq!(gcd_z(&a, &b), z(&[0, 1, 1]));
        assert_eq!(gcd_z(&z(&[0, 0, 1]), &z(&[3, 1])), z(&[1]));
        assert_eq!(gcd_z(&a, &a), a);
        assert_eq!(gcd_z(&z(&[6, 12]), &z(&[4, 8])), z(&[2, 4]));
    }

    #[test]
    fn non_monic_gcd() {
        let g = z(&[-3, 7, 5]);
        let a = &g * &z(&[1, 0, 4]);
        let b = &g * &z(&[2, 9]);
        assert_eq!(gcd_z(&a, &b), g);
    }

    #[test]
    fn yun_recovers_multiplicities() {
        let x = z(&[0, 1]);
        let xp1 = z(&[1, 1]);
        let q = z(&[1, 0, 1]);
        let f = &(&x * &xp1.pow(2)) * &q.pow(3);
        let sf = squarefree_decomposition(&f);
        assert_eq!(sf, vec![(x, 1), (xp1, 2), (q, 3)]);
    }

    proptest! {
        #[test]
        fn gcd_divides_and_is_maximal(
            g in proptest::collection::vec(-20i64..20, 1..5),
            u in proptest::collection::vec(-20i64..20, 1..6),
            v in proptest::collection::vec(-20i64..20, 1..6),
        ) {
            let (g, u, v) = (z(&g), z(&u), z(&v));
            prop_assume!(!g.is_zero() && !u.is_zero() && !v.is_zero());
            let a = &g * &u;
            let b = &g * &v;
            let h = gcd_z(&a, &b);
            prop_assert!(h.divides(&a) && h.divides(&b));
            // every common factor divides the gcd
            prop_assert!(g.primitive_part().divides(&h.primitive_part()));
        }
    }
}
