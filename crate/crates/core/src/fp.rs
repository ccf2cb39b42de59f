//! Polynomial arithmetic and factorization over prime fields F_p (p in u64),
//! plus residue-field arithmetic F_q = F_p[t]/(g).
//!
//! Polynomials are little-endian coefficient vectors with no trailing zeros.

use crate::arith::{mul_mod_u64, pow_mod_u64};
use num_bigint::BigUint;

pub type FpPoly = Vec<u64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FpCtx {
    pub p: u64,
}

impl FpCtx {
    pub fn new(p: u64) -> Self {
        FpCtx { p }
    }

    pub fn trim(mut f: FpPoly) -> FpPoly {
        while f.last() == Some(&0) {
            f.pop();
        }
        f
    }

    pub fn deg(f: &FpPoly) -> Option<usize> {
        if f.is_empty() {
            None
        } else {
            Some(f.len() - 1)
        }
    }

    pub fn add(&self, a: &FpPoly, b: &FpPoly) -> FpPoly {
        let n = a.len().max(b.len());
        let mut out = vec![0u64; n];
        for i in 0..n {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            out[i] = (x + y) % self.p;
        }
        Self::trim(out)
    }

    pub fn sub(&self, a: &FpPoly, b: &FpPoly) -> FpPoly {
        let n = a.len().max(b.len());
        let mut out = vec![0u64; n];
        for i in 0..n {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            out[i] = (x + self.p - y) % self.p;
        }
        Self::trim(out)
    }

    pub fn mul(&self, a: &FpPoly, b: &FpPoly) -> FpPoly {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + mul_mod_u64(x, y, self.p)) % self.p;
            }
        }
        Self::trim(out)
    }

    pub fn scale(&self, a: &FpPoly, c: u64) -> FpPoly {
        Self::trim(a.iter().map(|&x| mul_mod_u64(x, c, self.p)).collect())
    }

    pub fn inv_scalar(&self, c: u64) -> u64 {
        pow_mod_u64(c, self.p - 2, self.p)
    }

    pub fn make_monic(&self, a: &FpPoly) -> FpPoly {
        match a.last() {
            None => vec![],
            Some(&lc) => self.scale(a, self.inv_scalar(lc)),
        }
    }

    pub fn divrem(&self, a: &FpPoly, b: &FpPoly) -> (FpPoly, FpPoly) {
        assert!(!b.is_empty(), "division by zero polynomial");
        let mut rem = a.clone();
        let db = b.len() - 1;
        let lc_inv = self.inv_scalar(*b.last().unwrap());
        if rem.len() <= db {
            return (vec![], Self::trim(rem));
        }
        let mut quot = vec![0u64; rem.len() - db];
        while rem.len() > db && !rem.is_empty() {
            let dr = rem.len() - 1;
            if dr < db {
                break;
            }
            let c = mul_mod_u64(*rem.last().unwrap(), lc_inv, self.p);
            quot[dr - db] = c;
            for (j, &bj) in b.iter().enumerate() {
                let idx = dr - db + j;
                rem[idx] = (rem[idx] + self.p - mul_mod_u64(c, bj, self.p)) % self.p;
            }
            rem = Self::trim(rem);
        }
        (Self::trim(quot), rem)
    }

    pub fn rem(&self, a: &FpPoly, b: &FpPoly) -> FpPoly {
        self.divrem(a, b).1
    }

    pub fn gcd(&self, a: &FpPoly, b: &FpPoly) -> FpPoly {
        let mut a = a.clone();
        let mut b = b.clone();
        while !b.is_empty() {
            let r = self.rem(&a, &b);
            a = b;
            b = r;
        }
        self.make_monic(&a)
    }

    pub fn derivative(&self, a: &FpPoly) -> FpPoly {
        if a.len() <= 1 {
            return vec![];
        }
        let mut out = vec![0u64; a.len() - 1];
        for i in 1..a.len() {
            out[i - 1] = mul_mod_u64(a[i], (i as u64) % self.p, self.p);
        }
        Self::trim(out)
    }

    pub fn pow_mod(&self, base: &FpPoly, exp: &BigUint, modulus: &FpPoly) -> FpPoly {
        let mut acc = vec![1u64];
        let mut b = self.rem(base, modulus);
        for i in 0..exp.bits() {
            if exp.bit(i) {
                acc = self.rem(&self.mul(&acc, &b), modulus);
            }
            b = self.rem(&self.mul(&b, &b), modulus);
        }
        acc
    }

    pub fn eval(&self, a: &FpPoly, x: u64) -> u64 {
        let mut acc = 0u64;
        for &c in a.iter().rev() {
            acc = (mul_mod_u64(acc, x, self.p) + c) % self.p;
        }
        acc
    }

    /// All roots of a in F_p, by gcd with x^p - x then deflation. Intended for
    /// small p; falls back to direct scan when p is tiny.
    pub fn roots(&self, a: &FpPoly) -> Vec<u64> {
        let mut out = Vec::new();
        if self.p <= 4096 {
            for x in 0..self.p {
                if self.eval(a, x) == 0 {
                    out.push(x);
                }
            }
            return out;
        }
        let xp = self.pow_mod(&vec![0, 1], &BigUint::from(self.p), a);
        let lin = self.gcd(&self.sub(&xp, &vec![0, 1]), a);
        for (g, _) in self.factor(&lin) {
            if g.len() == 2 {
                out.push((self.p - g[0]) % self.p);
            }
        }
        out.sort_unstable();
        out
    }

    /// Squarefree decomposition in characteristic p; returns (g, multiplicity)
    /// pairs with the g squarefree and pairwise coprime.
    fn squarefree_decomposition(&self, f: &FpPoly) -> Vec<(FpPoly, u32)> {
        let f = self.make_monic(f);
        if f.len() <= 1 {
            return vec![];
        }
        let df = self.derivative(&f);
        if df.is_empty() {
            // f = g(x^p) = (h(x))^p over F_p since coefficient Frobenius is identity
            let mut h = Vec::new();
            let p = self.p as usize;
            let mut i = 0;
            while i < f.len() {
                h.push(f[i]);
                i += p;
            }
            let inner = self.squarefree_decomposition(&Self::trim(h));
            return inner.into_iter().map(|(g, m)| (g, m * self.p as u32)).collect();
        }
        let mut out: Vec<(FpPoly, u32)> = Vec::new();
        let mut c = self.gcd(&f, &df);
        let mut w = self.divrem(&f, &c).0;
        let mut i = 1u32;
        while w.len() > 1 {
            let y = self.gcd(&w, &c);
            let fac = self.divrem(&w, &y).0;
            if fac.len() > 1 {
                out.push((self.make_monic(&fac), i));
            }
            w = y.clone();
            c = self.divrem(&c, &y).0;
            i += 1;
        }
        if c.len() > 1 {
            // remaining p-th power part
            let inner = self.squarefree_decomposition(&c);
            for (g, m) in inner {
                out.push((g, m));
            }
        }
        out
    }

    /// Distinct-degree factorization of a squarefree monic polynomial.
    fn distinct_degree(&self, f: &FpPoly) -> Vec<(FpPoly, usize)> {
        let mut out = Vec::new();
        let mut f = f.clone();
        let mut h = vec![0, 1]; // x
        let mut d = 0usize;
        while f.len() > 1 {
            d += 1;
            if 2 * d > f.len() - 1 {
                out.push((f.clone(), f.len() - 1));
                break;
            }
            h = self.pow_mod(&h, &BigUint::from(self.p), &f);
            let g = self.gcd(&self.sub(&h, &vec![0, 1]), &f);
            if g.len() > 1 {
                out.push((g.clone(), d));
                f = self.divrem(&f, &g).0;
                h = self.rem(&h, &f);
            }
        }
        out
    }

    /// Cantor-Zassenhaus equal-degree splitting; deterministic LCG so runs are
    /// reproducible.
    fn equal_degree(&self, f: &FpPoly, d: usize, out: &mut Vec<FpPoly>, seed: &mut u64) {
        let n = f.len() - 1;
        if n == d {
            out.push(self.make_monic(f));
            return;
        }
        loop {
            *seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let mut r: FpPoly = (0..n)
                .map(|i| {
                    let mut s = seed.wrapping_add((i as u64).wrapping_mul(0x9e3779b97f4a7c15));
                    s ^= s >> 29;
                    s = s.wrapping_mul(0xbf58476d1ce4e5b9);
                    s ^= s >> 32;
                    s % self.p
                })
                .collect();
            r = Self::trim(r);
            if r.len() <= 1 {
                continue;
            }
            let g = if self.p == 2 {
                // trace map r + r^2 + ... + r^(2^(d-1)) splits F_{2^d}-factors
                let mut t = r.clone();
                let mut total = r.clone();
                for _ in 1..d {
                    t = self.rem(&self.mul(&t, &t), f);
                    total = self.add(&total, &t);
                }
                self.gcd(&total, f)
            } else {
                let exp = (BigUint::from(self.p).pow(d as u32) - 1u32) / 2u32;
                let s = self.pow_mod(&r, &exp, f);
                self.gcd(&self.sub(&s, &vec![1]), f)
            };
            if g.len() > 1 && g.len() < f.len() {
                self.equal_degree(&g, d, out, seed);
                let rest = self.divrem(f, &g).0;
                self.equal_degree(&rest, d, out, seed);
                return;
            }
        }
    }

    /// Full factorization into monic irreducibles with multiplicities,
    /// sorted by (degree, coefficients).
    pub fn factor(&self, f: &FpPoly) -> Vec<(FpPoly, u32)> {
        let mut out: Vec<(FpPoly, u32)> = Vec::new();
        if f.len() <= 1 {
            return out;
        }
        for (sf, mult) in self.squarefree_decomposition(f) {
            for (block, d) in self.distinct_degree(&sf) {
                let mut irr = Vec::new();
                let mut seed = 0x5eed_0000 ^ (self.p << 8) ^ d as u64;
                self.equal_degree(&block, d, &mut irr, &mut seed);
                for g in irr {
                    out.push((g, mult));
                }
            }
        }
        out.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));
        out
    }

    pub fn is_irreducible(&self, f: &FpPoly) -> bool {
        if f.len() <= 1 {
            return false;
        }
        if f.len() == 2 {
            return true;
        }
        let facs = self.factor(f);
        facs.len() == 1 && facs[0].1 == 1
    }
}

/// Residue field F_q = F_p[t]/(g) with g monic irreducible.
#[derive(Debug, Clone)]
pub struct FqCtx {
    pub fp: FpCtx,
    pub modulus: FpPoly,
}

pub type FqElem = FpPoly;

impl FqCtx {
    pub fn new(p: u64, modulus: FpPoly) -> Self {
        FqCtx { fp: FpCtx::new(p), modulus }
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn order(&self) -> BigUint {
        BigUint::from(self.fp.p).pow(self.degree() as u32)
    }

    pub fn reduce(&self, a: &FpPoly) -> FqElem {
        self.fp.rem(a, &self.modulus)
    }

    pub fn is_zero(&self, a: &FqElem) -> bool {
        a.is_empty()
    }

    pub fn mul(&self, a: &FqElem, b: &FqElem) -> FqElem {
        self.fp.rem(&self.fp.mul(a, b), &self.modulus)
    }

    pub fn pow(&self, a: &FqElem, e: &BigUint) -> FqElem {
        self.fp.pow_mod(a, e, &self.modulus)
    }

    pub fn inv(&self, a: &FqElem) -> FqElem {
        assert!(!self.is_zero(a), "inverse of zero in residue field");
        let e = self.order() - 2u32;
        self.pow(a, &e)
    }

    /// Euler criterion: +1 if a is a nonzero square, -1 if a nonsquare.
    /// Requires odd q and a != 0.
    pub fn quadratic_character(&self, a: &FqElem) -> i8 {
        assert!(!self.is_zero(a));
        assert!(self.fp.p != 2);
        let e = (self.order() - 1u32) / 2u32;
        let r = self.pow(a, &e);
        if r == vec![1] {
            1
        } else {
            -1
        }
    }

    /// Is a a (q-1)/gcd-compatible n-th power in F_q^* (a != 0)?
    pub fn is_nth_power(&self, a: &FqElem, n: u32) -> bool {
        assert!(!self.is_zero(a));
        let q1 = self.order() - 1u32;
        let g = num_integer::Integer::gcd(&q1, &BigUint::from(n));
        if g == BigUint::from(1u32) {
            return true;
        }
        let e = &q1 / &g;
        self.pow(a, &e) == vec![1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divrem_gcd() {
        let ctx = FpCtx::new(7);
        // (x^2 + 1)(x + 3) = x^3 + 3x^2 + x + 3
        let prod = ctx.mul(&vec![1, 0, 1], &vec![3, 1]);
        assert_eq!(prod, vec![3, 1, 3, 1]);
        let (q, r) = ctx.divrem(&prod, &vec![1, 0, 1]);
        assert_eq!(q, vec![3, 1]);
        assert!(r.is_empty());
        assert_eq!(ctx.gcd(&prod, &vec![1, 0, 1]), vec![1, 0, 1]);
    }

    #[test]
    fn factor_x2_plus_5_mod_small_primes() {
        // x^2 + 5 mod 2 = (x+1)^2
        let f2 = FpCtx::new(2).factor(&vec![1, 0, 1]);
        assert_eq!(f2, vec![(vec![1, 1], 2)]);
        // mod 11: -5 = 6 is a quadratic nonresidue, so x^2 + 5 is irreducible
        let f11 = FpCtx::new(11).factor(&vec![5, 0, 1]);
        assert_eq!(f11.len(), 1);
        assert_eq!(f11[0].1, 1);
        assert_eq!(f11[0].0.len(), 3);
        // mod 7 splits: 3^2 = 2 = -5 mod 7
        let f7 = FpCtx::new(7).factor(&vec![5, 0, 1]);
        assert_eq!(f7.len(), 2);
        assert!(f7.iter().all(|(g, m)| g.len() == 2 && *m == 1));
        // mod 3: x^2 + 2 = x^2 - 1 = (x-1)(x+1)
        let f3 = FpCtx::new(3).factor(&vec![5 % 3, 0, 1]);
        assert_eq!(f3.len(), 2);
    }

    #[test]
    fn factor_char2_square() {
        // (x^2 + x + 1)^2 mod 2 = x^4 + x^2 + 1
        let ctx = FpCtx::new(2);
        let f = ctx.mul(&vec![1, 1, 1], &vec![1, 1, 1]);
        let fac = ctx.factor(&f);
        assert_eq!(fac, vec![(vec![1, 1, 1], 2)]);
    }

    #[test]
    fn irreducibility() {
        assert!(FpCtx::new(2).is_irreducible(&vec![1, 1, 1])); // x^2+x+1
        assert!(!FpCtx::new(5).is_irreducible(&vec![4, 0, 1])); // x^2-1
        assert!(FpCtx::new(7).is_irreducible(&vec![1, 1, 0, 1])); // x^3+x+1 mod 7
    }

    #[test]
    fn residue_field_character() {
        // F_9 = F_3[t]/(t^2+1); -1 = 2 is a square in F_9 (t^2 = -1)
        let fq = FqCtx::new(3, vec![1, 0, 1]);
        assert_eq!(fq.quadratic_character(&vec![2]), 1);
        // t is a nonsquare? t^4 = 1, (q-1)/2 = 4, t^4 = (t^2)^2 = 1 -> square
        assert_eq!(fq.quadratic_character(&vec![0, 1]), 1);
        // 1 + t: (1+t)^4 = (2t)^2 = 4 t^2 = -4 = 2 mod 3 ... compute via ctx
        let c = fq.quadratic_character(&vec![1, 1]);
        let sq_count = {
            let mut squares = std::collections::HashSet::new();
            for a0 in 0..3u64 {
                for a1 in 0..3u64 {
                    let v = FpCtx::trim(vec![a0, a1]);
                    if v.is_empty() {
                        continue;
                    }
                    squares.insert(fq.mul(&v, &v));
                }
            }
            squares.contains(&FpCtx::trim(vec![1, 1]))
        };
        assert_eq!(c == 1, sq_count);
    }

    #[test]
    fn roots_mod_p() {
        let ctx = FpCtx::new(13);
        // x^2 - 3 mod 13: 4^2 = 16 = 3, so roots 4 and 9
        assert_eq!(ctx.roots(&vec![10, 0, 1]), vec![4, 9]);
    }
}
