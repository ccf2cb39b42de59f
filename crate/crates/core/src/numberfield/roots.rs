//! Exact n-th root extraction in K and square testing.
//!
//! Strategy: cheap certified negatives first (real signs, ideal exponents,
//! n-th power residues at split primes), then construction of the root by
//! Hensel lifting at a totally split prime, Lagrange interpolation of the
//! candidate coordinates, rational reconstruction, and exact verification.
//! Every "yes" carries a verified witness; every "no" carries a residue or
//! valuation obstruction.

use super::{FieldElement, NumberField};
use crate::arith;
use crate::error::{Error, Result};
use crate::fp::FpCtx;
use crate::intpoly::zeval;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

const MAX_ROUNDS: u32 = 10;
const PRIMES_PER_ROUND: usize = 8;
const PRIME_SCAN_CAP: u64 = 100_000;

struct SplitPrimeData {
    p: u64,
    roots: Vec<u64>,
    /// values of x at each root mod p (all units)
    values: Vec<u64>,
}

impl NumberField {
    /// The exact n-th root of x in K, if one exists. `None` answers are
    /// certified by a sign, valuation, or residue obstruction. Errors only
    /// when the precision escalation limit is exhausted, which does not
    /// happen for inputs of bounded height.
    pub fn nth_root(&self, x: &FieldElement, n: u32) -> Result<Option<FieldElement>> {
        assert!(n >= 1);
        if n == 1 {
            return Ok(Some(x.clone()));
        }
        if x.is_zero() {
            return Ok(Some(self.zero()));
        }
        // rational fast path (positive certificates only)
        if let Some(r) = x.as_rational() {
            if let (Some(a), Some(b)) =
                (arith::integer_nth_root(r.numer(), n), arith::integer_nth_root(r.denom(), n))
            {
                return Ok(Some(self.from_rational(&BigRational::new(a, b))));
            }
        }
        // sign obstruction for even n
        if n % 2 == 0 {
            for i in 0..self.real_place_count() {
                if self.sign_at_real_place(x, i) < 0 {
                    return Ok(None);
                }
            }
        }
        // valuation obstruction: every prime exponent must be divisible by n
        let ideal = self.ideal_of(x)?;
        for (_, e) in ideal.iter() {
            if e.rem_euclid(n as i64) != 0 {
                return Ok(None);
            }
        }

        let (m, ycoords) = self.integral_scale(x);
        let ypoly = crate::intpoly::ztrim(ycoords);
        let mut scan = SplitScan::new(self, n, &m, &ypoly);
        let mut reconstruction_prime: Option<SplitPrimeData> = None;
        for round in 0..MAX_ROUNDS {
            for _ in 0..PRIMES_PER_ROUND {
                match scan.next_split_prime() {
                    Some(data) => {
                        if let Some(obstructed) = residue_obstruction(&data, n) {
                            if obstructed {
                                return Ok(None);
                            }
                        }
                        if reconstruction_prime.is_none() {
                            reconstruction_prime = Some(data);
                        }
                    }
                    None => break,
                }
            }
            if let Some(data) = &reconstruction_prime {
                let precision = 8u32 << round;
                if let Some(root) = self.try_reconstruct(x, n, &m, &ypoly, data, precision) {
                    return Ok(Some(root));
                }
            }
        }
        Err(Error::EscalationLimit(format!("nth_root(n={n}) of {}", self.format_element(x))))
    }

    /// Is x a square in K? Exact; panics only if the (practically
    /// unreachable) escalation limit is hit.
    pub fn is_global_square(&self, x: &FieldElement) -> bool {
        self.nth_root(x, 2)
            .expect("square decision exhausted its escalation budget")
            .is_some()
    }

    /// Smallest integer >= 2 that is not a square in K.
    pub fn find_nonsquare_integer(&self) -> i64 {
        (2i64..)
            .find(|&n| !self.is_global_square(&self.from_int(n)))
            .expect("some small integer is a nonsquare")
    }

    fn try_reconstruct(
        &self,
        x: &FieldElement,
        n: u32,
        m: &BigInt,
        ypoly: &crate::intpoly::ZPoly,
        data: &SplitPrimeData,
        precision: u32,
    ) -> Option<FieldElement> {
        let d = self.degree();
        let p = BigInt::from(data.p);
        let modulus = p.pow(precision);
        // lift the roots of f and evaluate x there
        let lifted: Vec<BigInt> = data
            .roots
            .iter()
            .map(|&r| lift_poly_root(self.min_poly(), &BigInt::from(r), &p, precision))
            .collect();
        let m_inv = mod_inverse(m, &modulus)?;
        let values: Vec<BigInt> = lifted
            .iter()
            .map(|a| (zeval(ypoly, a) * &m_inv).mod_floor(&modulus))
            .collect();
        // all n-th roots of each residue value mod p, by direct scan
        let root_sets: Vec<Vec<u64>> = data
            .values
            .iter()
            .map(|&v| {
                (1..data.p)
                    .filter(|&w| arith::pow_mod_u64(w, n as u64, data.p) == v)
                    .collect()
            })
            .collect();
        if root_sets.iter().any(|s| s.is_empty()) {
            return None;
        }
        let mut combo = vec![0usize; d];
        loop {
            // Hensel-lift each chosen residue root of t^n = value
            let mut ok = true;
            let mut lifted_roots: Vec<BigInt> = Vec::with_capacity(d);
            for i in 0..d {
                let w0 = BigInt::from(root_sets[i][combo[i]]);
                match lift_nth_root(&values[i], &w0, n, &p, precision) {
                    Some(w) => lifted_roots.push(w),
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                if let Some(cand) =
                    self.interpolate_and_reconstruct(&lifted, &lifted_roots, &p, &modulus)
                {
                    if let Ok(pw) = self.pow(&cand, n as i64) {
                        if pw == *x {
                            return Some(cand);
                        }
                    }
                }
            }
            // advance combination odometer
            let mut i = 0;
            loop {
                combo[i] += 1;
                if combo[i] < root_sets[i].len() {
                    break;
                }
                combo[i] = 0;
                i += 1;
                if i == d {
                    return None;
                }
            }
        }
    }

    /// Interpolate the unique poly of degree < d through (points, values)
    /// mod p^N, then rationally reconstruct its coefficients.
    fn interpolate_and_reconstruct(
        &self,
        points: &[BigInt],
        values: &[BigInt],
        p: &BigInt,
        modulus: &BigInt,
    ) -> Option<FieldElement> {
        let d = self.degree();
        let _ = p;
        // Lagrange basis, all arithmetic mod p^N
        let mut coeffs = vec![BigInt::zero(); d];
        for i in 0..d {
            let mut denom = BigInt::one();
            // numerator polynomial prod_{j != i} (x - a_j), little-endian
            let mut numer = vec![BigInt::one()];
            for j in 0..d {
                if i == j {
                    continue;
                }
                denom = (denom * (&points[i] - &points[j])).mod_floor(modulus);
                let mut next = vec![BigInt::zero(); numer.len() + 1];
                for (k, c) in numer.iter().enumerate() {
                    next[k + 1] = (&next[k + 1] + c).mod_floor(modulus);
                    next[k] = (&next[k] - c * &points[j]).mod_floor(modulus);
                }
                numer = next;
            }
            let scale = (values[i].clone() * mod_inverse(&denom, modulus)?).mod_floor(modulus);
            for (k, c) in numer.iter().enumerate() {
                coeffs[k] = (&coeffs[k] + c * &scale).mod_floor(modulus);
            }
        }
        let mut out = Vec::with_capacity(d);
        for c in coeffs {
            let (num, den) = arith::rational_reconstruct(&c, modulus)?;
            out.push(BigRational::new(num, den));
        }
        Some(FieldElement { coords: out })
    }
}

/// Does the split-prime data certify that x is not an n-th power?
/// Returns Some(true) for a certified obstruction, Some(false) if the prime
/// is informative but consistent, None if uninformative (gcd(n, p-1) = 1).
fn residue_obstruction(data: &SplitPrimeData, n: u32) -> Option<bool> {
    let g = arith::gcd_u64(n as u64, data.p - 1);
    if g == 1 {
        return None;
    }
    let e = (data.p - 1) / g;
    for &v in &data.values {
        if arith::pow_mod_u64(v, e, data.p) != 1 {
            return Some(true);
        }
    }
    Some(false)
}

struct SplitScan<'a> {
    field: &'a NumberField,
    n: u32,
    denominator: &'a BigInt,
    ypoly: &'a crate::intpoly::ZPoly,
    cursor: u64,
}

impl<'a> SplitScan<'a> {
    fn new(
        field: &'a NumberField,
        n: u32,
        denominator: &'a BigInt,
        ypoly: &'a crate::intpoly::ZPoly,
    ) -> Self {
        SplitScan { field, n, denominator, ypoly, cursor: 2 }
    }

    /// Next odd prime where f splits completely with distinct roots and x is
    /// a unit at every prime above p.
    fn next_split_prime(&mut self) -> Option<SplitPrimeData> {
        let d = self.field.degree();
        loop {
            self.cursor += 1;
            if self.cursor > PRIME_SCAN_CAP {
                return None;
            }
            let p = self.cursor;
            if !arith::is_prime_u64(p) || p == 2 {
                continue;
            }
            if self.n as u64 % p == 0 {
                continue;
            }
            let pb = BigInt::from(p);
            if (self.field.discriminant() % &pb).is_zero() {
                continue;
            }
            if (self.denominator % &pb).is_zero() {
                continue;
            }
            let ctx = FpCtx::new(p);
            let fbar = super::primes::reduce_zpoly(self.field.min_poly(), &pb);
            if fbar.len() != d + 1 {
                continue;
            }
            let roots = ctx.roots(&fbar);
            if roots.len() != d {
                continue;
            }
            let ybar = super::primes::reduce_zpoly(self.ypoly, &pb);
            let minv = arith::pow_mod_u64(
                self.denominator.mod_floor(&pb).to_u64().unwrap(),
                p - 2,
                p,
            );
            let values: Vec<u64> = roots
                .iter()
                .map(|&r| arith::mul_mod_u64(ctx.eval(&ybar, r), minv, p))
                .collect();
            if values.iter().any(|&v| v == 0) {
                continue;
            }
            return Some(SplitPrimeData { p, roots, values });
        }
    }
}

/// Newton-lift a simple root of f from mod p to mod p^precision.
fn lift_poly_root(f: &crate::intpoly::ZPoly, r0: &BigInt, p: &BigInt, precision: u32) -> BigInt {
    let deriv: crate::intpoly::ZPoly = (1..f.len()).map(|i| &f[i] * BigInt::from(i)).collect();
    let mut r = r0.mod_floor(p);
    let mut k = 1u32;
    while k < precision {
        k = (2 * k).min(precision);
        let modulus = p.pow(k);
        let fr = zeval(f, &r).mod_floor(&modulus);
        let dr = zeval(&deriv, &r).mod_floor(&modulus);
        let dinv = mod_inverse(&dr, &modulus).expect("simple root: derivative is a unit");
        r = (&r - fr * dinv).mod_floor(&modulus);
    }
    r
}

/// Newton-lift w0 with w0^n = v mod p to mod p^precision (p odd, p not
/// dividing n).
fn lift_nth_root(v: &BigInt, w0: &BigInt, n: u32, p: &BigInt, precision: u32) -> Option<BigInt> {
    let mut w = w0.mod_floor(p);
    let mut k = 1u32;
    let nbig = BigInt::from(n);
    while k < precision {
        k = (2 * k).min(precision);
        let modulus = p.pow(k);
        let wn = w.modpow(&(&nbig - 1), &modulus);
        let fw = (&wn * &w - v).mod_floor(&modulus);
        let dw = (&nbig * &wn).mod_floor(&modulus);
        let dinv = mod_inverse(&dw, &modulus)?;
        w = (&w - fw * dinv).mod_floor(&modulus);
    }
    Some(w)
}

fn mod_inverse(a: &BigInt, modulus: &BigInt) -> Option<BigInt> {
    let a = a.mod_floor(modulus);
    let eg = a.extended_gcd(modulus);
    if !eg.gcd.is_one() {
        return None;
    }
    Some(eg.x.mod_floor(modulus))
}

#[cfg(test)]
mod tests {
    use crate::numberfield::parse_field;
    use crate::rat::q;

    #[test]
    fn rational_squares() {
        let k = parse_field("Q").unwrap();
        assert!(k.is_global_square(&k.from_int(4)));
        assert!(k.is_global_square(&k.from_rational(&q(9, 16))));
        assert!(!k.is_global_square(&k.from_int(2)));
        assert!(!k.is_global_square(&k.from_int(-4)));
        assert_eq!(k.find_nonsquare_integer(), 2);
    }

    #[test]
    fn sqrt2_is_square_in_its_field() {
        let k = parse_field("Q(sqrt,2)").unwrap();
        assert!(k.is_global_square(&k.from_int(2)));
        let r = k.nth_root(&k.from_int(2), 2).unwrap().unwrap();
        assert_eq!(k.mul(&r, &r), k.from_int(2));
        assert!(!k.is_global_square(&k.from_int(3)));
        assert_eq!(k.find_nonsquare_integer(), 3);
    }

    #[test]
    fn nonsquare_in_imaginary_field() {
        let k = parse_field("Q(sqrt,-5)").unwrap();
        // theta^2 = -5, so -5 is a square here; -1 and 2 are not
        assert!(k.is_global_square(&k.from_int(-5)));
        assert!(!k.is_global_square(&k.from_int(-1)));
        assert!(k.is_global_square(&k.mul(&k.theta(), &k.theta())));
        assert_eq!(k.find_nonsquare_integer(), 2);
    }

    #[test]
    fn cube_roots() {
        let k = parse_field("Q").unwrap();
        assert!(k.nth_root(&k.from_int(27), 3).unwrap().is_some());
        assert!(k.nth_root(&k.from_int(-27), 3).unwrap().is_some());
        assert!(k.nth_root(&k.from_int(2), 3).unwrap().is_none());
        // x^3 - x - 1: theta^3 = theta + 1, so theta + 1 is a cube
        let k = parse_field("poly:[-1,-1,0,1]").unwrap();
        let target = k.add(&k.theta(), &k.one());
        let r = k.nth_root(&target, 3).unwrap().unwrap();
        assert_eq!(r, k.theta());
    }

    #[test]
    fn square_with_nontrivial_coords() {
        let k = parse_field("Q(sqrt,-5)").unwrap();
        let x = k.add(&k.from_int(3), &k.theta()); // 3 + sqrt(-5)
        let sq = k.mul(&x, &x);
        let r = k.nth_root(&sq, 2).unwrap().unwrap();
        assert!(r == x || r == k.neg(&x));
    }
}
