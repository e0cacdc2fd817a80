//! Polynomials over `Z/p` for word-size primes `p < 2^32`.
//!
//! Coefficients are `u64` in `[0, p)`, lowest degree first, trailing zeros trimmed.

use rug::Integer;

use super::ZPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Field {
    pub p: u64,
}

impl Field {
    pub fn new(p: u64) -> Self {
        debug_assert!((2..(1 << 32)).contains(&p));
        Field { p }
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn pow(self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    pub fn inv(self, a: u64) -> u64 {
        debug_assert!(!a.is_multiple_of(self.p));
        self.pow(a, self.p - 2)
    }

    pub fn reduce(self, z: &Integer) -> u64 {
        let r = z.mod_u(self.p as u32);
        u64::from(r)
    }

    pub fn reduce_poly(self, f: &ZPoly) -> Vec<u64> {
        let mut v: Vec<u64> = f.coeffs().iter().map(|c| self.reduce(c)).collect();
        trim(&mut v);
        v
    }

    pub fn monic(self, f: &mut [u64]) {
        if let Some(&lc) = f.last() {
            let inv = self.inv(lc);
            for c in f.iter_mut() {
                *c = self.mul(*c, inv);
            }
        }
    }

    pub fn mul_poly(self, a: &[u64], b: &[u64]) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        // Accumulate in u128-free fashion: products < 2^64, reduce after each add.
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % self.p;
            }
        }
        trim(&mut out);
        out
    }

    pub fn sub_poly(self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let n = a.len().max(b.len());
        let mut out: Vec<u64> = (0..n)
            .map(|k| self.sub(*a.get(k).unwrap_or(&0), *b.get(k).unwrap_or(&0)))
            .collect();
        trim(&mut out);
        out
    }

    pub fn add_poly(self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let n = a.len().max(b.len());
        let mut out: Vec<u64> = (0..n)
            .map(|k| self.add(*a.get(k).unwrap_or(&0), *b.get(k).unwrap_or(&0)))
            .collect();
        trim(&mut out);
        out
    }

    pub fn scale_poly(self, a: &[u64], k: u64) -> Vec<u64> {
        let mut out: Vec<u64> = a.iter().map(|&c| self.mul(c, k)).collect();
        trim(&mut out);
        out
    }

    /// Remainder of `a` modulo nonzero `b`, in place.
    pub fn rem_in_place(self, a: &mut Vec<u64>, b: &[u64]) {
        let db = b.len() - 1;
        let inv = self.inv(b[db]);
        while a.len() > db && !a.is_empty() {
            let k = a.len() - 1 - db;
            let q = self.mul(a[a.len() - 1], inv);
            if q != 0 {
                for (i, &bc) in b.iter().enumerate() {
                    a[k + i] = self.sub(a[k + i], self.mul(q, bc));
                }
            }
            a.pop();
            trim(a);
        }
    }

    pub fn div_rem(self, a: &[u64], b: &[u64]) -> (Vec<u64>, Vec<u64>) {
        let db = b.len() - 1;
        if a.len() <= db {
            return (Vec::new(), a.to_vec());
        }
        let inv = self.inv(b[db]);
        let mut rem = a.to_vec();
        let mut quot = vec![0u64; a.len() - db];
        for k in (0..quot.len()).rev() {
            let q = self.mul(rem[k + db], inv);
            quot[k] = q;
            if q != 0 {
                for (i, &bc) in b.iter().enumerate() {
                    rem[k + i] = self.sub(rem[k + i], self.mul(q, bc));
                }
            }
        }
        rem.truncate(db);
        trim(&mut rem);
        trim(&mut quot);
        (quot, rem)
    }

    /// Monic gcd; the gcd of two zero polynomials is zero.
    pub fn gcd(self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        while !y.is_empty() {
            self.rem_in_place(&mut x, &y);
            std::mem::swap(&mut x, &mut y);
        }
        self.monic(&mut x);
        x
    }

    /// Extended gcd: returns `(g, s, t)` with `s a + t b = g`, `g` monic.
    pub fn xgcd(self, a: &[u64], b: &[u64]) -> (Vec<u64>, Vec<u64>, Vec<u64>) {
        let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
        let (mut s0, mut s1) = (vec![1u64], Vec::new());
        let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
        while !r1.is_empty() {
            let (q, r) = self.div_rem(&r0, &r1);
            let s2 = self.sub_poly(&s0, &self.mul_poly(&q, &s1));
            let t2 = self.sub_poly(&t0, &self.mul_poly(&q, &t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        if let Some(&lc) = r0.last() {
            let inv = self.inv(lc);
            r0 = self.scale_poly(&r0, inv);
            s0 = self.scale_poly(&s0, inv);
            t0 = self.scale_poly(&t0, inv);
        }
        (r0, s0, t0)
    }

    pub fn derivative(self, a: &[u64]) -> Vec<u64> {
        let mut out: Vec<u64> = a
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| self.mul(c, k as u64 % self.p))
            .collect();
        trim(&mut out);
        out
    }

    /// `base^e mod m` with the exponent given as a big integer.
    pub fn pow_mod(self, base: &[u64], e: &Integer, m: &[u64]) -> Vec<u64> {
        let mut result = vec![1u64];
        self.rem_in_place(&mut result, m);
        let mut b = base.to_vec();
        self.rem_in_place(&mut b, m);
        let bits = e.significant_bits();
        for i in (0..bits).rev() {
            result = self.mul_poly(&result, &result);
            self.rem_in_place(&mut result, m);
            if e.get_bit(i) {
                result = self.mul_poly(&result, &b);
                self.rem_in_place(&mut result, m);
            }
        }
        result
    }
}

pub(crate) fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Odd primes below `2^31`, descending.
pub(crate) fn word_primes() -> impl Iterator<Item = u64> {
    (1u64..(1 << 31)).rev().filter(|&n| n % 2 == 1 && is_small_prime(n))
}

/// Deterministic Miller–Rabin for `n < 3.2e9` (bases 2, 3, 5, 7).
pub(crate) fn is_small_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    let f = Field { p: n };
    'witness: for a in [2u64, 3, 5, 7] {
        let mut x = f.pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = f.mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_mod_p() {
        let f = Field::new(101);
        // (x+1)(x+2) and (x+1)(x+3)
        let a = f.mul_poly(&[1, 1], &[2, 1]);
        let b = f.mul_poly(&[1, 1], &[3, 1]);
        assert_eq!(f.gcd(&a, &b), vec![1, 1]);
        let (g, s, t) = f.xgcd(&a, &b);
        let lhs = f.add_poly(&f.mul_poly(&s, &a), &f.mul_poly(&t, &b));
        assert_eq!(lhs, g);
    }

    #[test]
    fn first_word_primes() {
        let ps: Vec<u64> = word_primes().take(2).collect();
        assert_eq!(ps, vec![2_147_483_647, 2_147_483_629]);
    }
}
