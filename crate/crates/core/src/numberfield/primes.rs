//! Prime ideals over a monogenic field: Kummer-Dedekind splitting, the
//! Dedekind index criterion, exact valuations via the two-generator
//! membership ladder, uniformizers, and fixed-precision quotient rings
//! Z[theta]/(p^N) used by the dyadic symbol searches.

use super::{FieldElement, NumberField};
use crate::error::{Error, Result};
use crate::fp::{FpCtx, FpPoly, FqCtx, FqElem};
use crate::intpoly::{ztrim, ZPoly};
use crate::linalg::{self, TriangularLattice};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// A prime ideal (p, g(theta)) of Z[theta].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PrimeIdeal {
    /// residue characteristic
    pub p: BigInt,
    /// monic irreducible factor of the minimal polynomial mod p,
    /// coefficients reduced to [0, p)
    pub g: FpPoly,
    /// ramification index
    pub e: u32,
    /// residue degree
    pub f_deg: u32,
}

impl PrimeIdeal {
    pub fn residue_field_order(&self) -> BigInt {
        self.p.pow(self.f_deg)
    }

    pub fn is_even(&self) -> bool {
        self.p == BigInt::from(2)
    }

    pub fn residue_ctx(&self) -> FqCtx {
        FqCtx::new(self.p.to_u64().expect("residue characteristic fits u64"), self.g.clone())
    }
}

/// Dedekind's criterion: does p fail to divide the index [O_K : Z[theta]]?
pub(crate) fn dedekind_criterion(f: &ZPoly, p: &BigInt) -> bool {
    let pu = p.to_u64().expect("criterion prime fits u64");
    let ctx = FpCtx::new(pu);
    let fbar = reduce_zpoly(f, p);
    let factors = ctx.factor(&fbar);
    // radical and cofactor
    let mut gbar: FpPoly = vec![1];
    let mut hbar: FpPoly = vec![1];
    for (gi, ei) in &factors {
        gbar = ctx.mul(&gbar, gi);
        for _ in 1..*ei {
            hbar = ctx.mul(&hbar, gi);
        }
    }
    // monic integer lifts with coefficients in [0, p)
    let glift = lift_fppoly(&gbar);
    let hlift = lift_fppoly(&hbar);
    let gh = zmul(&glift, &hlift);
    let mut diff = zsub(&gh, f);
    for c in diff.iter_mut() {
        debug_assert!((&*c % p).is_zero(), "g*h = f mod p by construction");
        *c = &*c / p;
    }
    let fbig = reduce_zpoly(&ztrim(diff), p);
    let g1 = ctx.gcd(&fbig, &gbar);
    let g2 = ctx.gcd(&g1, &hbar);
    g2 == vec![1]
}

pub(crate) fn reduce_zpoly(f: &ZPoly, p: &BigInt) -> FpPoly {
    let pu = p.to_u64().expect("prime fits u64");
    FpCtx::trim(f.iter().map(|c| c.mod_floor(p).to_u64().unwrap() % pu).collect())
}

fn lift_fppoly(f: &FpPoly) -> ZPoly {
    ztrim(f.iter().map(|&c| BigInt::from(c)).collect())
}

fn zmul(a: &ZPoly, b: &ZPoly) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            let v = &out[i + j] + x * y;
            out[i + j] = v;
        }
    }
    ztrim(out)
}

fn zsub(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let n = a.len().max(b.len());
    let mut out = vec![BigInt::zero(); n];
    for i in 0..n {
        let mut v = BigInt::zero();
        if i < a.len() {
            v += &a[i];
        }
        if i < b.len() {
            v -= &b[i];
        }
        out[i] = v;
    }
    ztrim(out)
}

/// Remainder of a by the monic integer polynomial m.
fn zrem_monic(a: &ZPoly, m: &ZPoly) -> ZPoly {
    let dm = m.len() - 1;
    let mut rem = a.clone();
    while rem.len() > dm {
        let dr = rem.len() - 1;
        let c = rem.last().unwrap().clone();
        for (j, mj) in m.iter().enumerate() {
            let idx = dr - dm + j;
            let v = &rem[idx] - &c * mj;
            rem[idx] = v;
        }
        rem = ztrim(rem);
    }
    rem
}

impl NumberField {
    /// All primes above the rational prime p, with their ramification
    /// indices, by Kummer-Dedekind factorization of the minimal polynomial.
    pub fn factor_rational_prime(&self, p: &BigInt) -> Vec<(PrimeIdeal, u32)> {
        assert!(crate::arith::is_prime(p), "factor_rational_prime needs a prime");
        let primes = self.cache_prime_split(p, || {
            let ctx = FpCtx::new(p.to_u64().expect("prime fits u64"));
            let fbar = reduce_zpoly(self.min_poly(), p);
            let factors = ctx.factor(&fbar);
            let out: Vec<PrimeIdeal> = factors
                .into_iter()
                .map(|(g, e)| PrimeIdeal {
                    p: p.clone(),
                    f_deg: (g.len() - 1) as u32,
                    g,
                    e,
                })
                .collect();
            debug_assert_eq!(
                out.iter().map(|q| (q.e * q.f_deg) as usize).sum::<usize>(),
                self.degree(),
                "sum of e*f over primes above p equals the degree"
            );
            out
        });
        primes.into_iter().map(|q| (q.clone(), q.e)).collect()
    }

    /// The element g(theta) for the prime's generator polynomial.
    pub fn second_generator(&self, prime: &PrimeIdeal) -> FieldElement {
        let gz = lift_fppoly(&prime.g);
        let reduced = zrem_monic(&gz, self.min_poly());
        let mut coords = vec![BigRational::zero(); self.degree()];
        for (i, c) in reduced.iter().enumerate() {
            coords[i] = BigRational::from_integer(c.clone());
        }
        FieldElement { coords }
    }

    /// Z-basis (as coordinate columns) of the ideal (p, g(theta))^k.
    pub(crate) fn prime_power_lattice(&self, prime: &PrimeIdeal, k: u32) -> TriangularLattice {
        let d = self.degree();
        if k == 0 {
            let cols = (0..d)
                .map(|i| {
                    let mut v = vec![BigInt::zero(); d];
                    v[i] = BigInt::one();
                    v
                })
                .collect::<Vec<_>>();
            return linalg::hnf(d, &cols).expect("identity lattice");
        }
        let gz = zrem_monic(&lift_fppoly(&prime.g), self.min_poly());
        let mut gpow: Vec<ZPoly> = vec![vec![BigInt::one()]]; // g^0
        for _ in 0..k {
            let next = zrem_monic(&zmul(gpow.last().unwrap(), &gz), self.min_poly());
            gpow.push(next);
        }
        let mut cols: Vec<Vec<BigInt>> = Vec::new();
        for j in 0..=k {
            let scale = prime.p.pow(k - j);
            // theta^i * g^j
            let mut shifted = gpow[j as usize].clone();
            for _ in 0..d {
                let mut col = vec![BigInt::zero(); d];
                for (i, c) in shifted.iter().enumerate() {
                    col[i] = c * &scale;
                }
                cols.push(col);
                // multiply by theta for the next i
                let mut next = vec![BigInt::zero()];
                next.extend(shifted.iter().cloned());
                shifted = zrem_monic(&ztrim(next), self.min_poly());
            }
        }
        linalg::hnf(d, &cols).expect("prime power ideal is full rank")
    }

    /// Membership x in P^k for integral x given by integer coordinates.
    pub(crate) fn in_prime_power(&self, coords: &[BigInt], prime: &PrimeIdeal, k: u32) -> bool {
        self.prime_power_lattice(prime, k).contains(coords)
    }

    /// Exact P-adic valuation of a nonzero element.
    pub fn valuation(&self, x: &FieldElement, prime: &PrimeIdeal) -> Result<i64> {
        if x.is_zero() {
            return Err(Error::ZeroInput);
        }
        let (m, ycoords) = self.integral_scale(x);
        let vm = crate::arith::ord_p(&m, &prime.p) as i64 * prime.e as i64;
        Ok(self.integral_valuation(&ycoords, prime) - vm)
    }

    /// Valuation of a nonzero integral element given by coordinates:
    /// the membership ladder x in P, P^2, ... with an a-priori norm cap.
    fn integral_valuation(&self, coords: &[BigInt], prime: &PrimeIdeal) -> i64 {
        let ypoly = ztrim(coords.to_vec());
        let norm = crate::intpoly::zresultant(self.min_poly(), &ypoly);
        debug_assert!(!norm.is_zero());
        let cap = crate::arith::ord_p(&norm, &prime.p) as i64;
        let mut k: i64 = 0;
        while k <= cap {
            if !self.in_prime_power(coords, prime, (k + 1) as u32) {
                return k;
            }
            k += 1;
        }
        unreachable!("valuation ladder exceeded its norm bound (cap {cap})")
    }

    /// A uniformizer: valuation exactly 1 at the prime. Chosen as g(theta)
    /// when that already works, else p + g(theta).
    pub fn uniformizer(&self, prime: &PrimeIdeal) -> FieldElement {
        self.cache_uniformizer(prime, || {
            let g = self.second_generator(prime);
            if !g.is_zero() && self.valuation(&g, prime).unwrap() == 1 {
                return g;
            }
            let cand = self.add(&self.from_rational(&BigRational::from_integer(prime.p.clone())), &g);
            let v = self.valuation(&cand, prime).expect("p + g(theta) is nonzero");
            assert_eq!(v, 1, "p + g(theta) must uniformize when g(theta) does not");
            cand
        })
    }

    /// Residue of an integral element in the residue field F_p[t]/(g).
    pub fn residue_integral(&self, coords: &[BigInt], prime: &PrimeIdeal) -> FqElem {
        let fq = prime.residue_ctx();
        let reduced = reduce_zpoly(&ztrim(coords.to_vec()), &prime.p);
        fq.reduce(&reduced)
    }

    /// Residue of a P-unit element (valuation 0) in the residue field.
    /// Clears denominators with a CRT multiplier that is a unit at P.
    pub fn residue_of_unit(&self, x: &FieldElement, prime: &PrimeIdeal) -> Result<FqElem> {
        if x.is_zero() {
            return Err(Error::ZeroInput);
        }
        debug_assert_eq!(self.valuation(x, prime)?, 0, "residue_of_unit needs a P-unit");
        let fq = prime.residue_ctx();
        let (m, ycoords) = self.integral_scale(x);
        let c = crate::arith::ord_p(&m, &prime.p);
        let m2 = &m / prime.p.pow(c);
        // x = (y / p^c) / m2 with p not dividing m2
        let unit_part: FqElem;
        if c == 0 {
            unit_part = self.residue_integral(&ycoords, prime);
        } else {
            // w = 1 at P, deep enough at the other primes above p, so that
            // y*w/p^c is integral with P-valuation 0
            let others: Vec<(PrimeIdeal, u32)> = self
                .factor_rational_prime(&prime.p)
                .into_iter()
                .filter(|(q, _)| q != prime)
                .collect();
            let y_elem = FieldElement {
                coords: ycoords.iter().map(|v| BigRational::from_integer(v.clone())).collect(),
            };
            let mut congruences = vec![super::Congruence {
                prime: prime.clone(),
                target: self.one(),
                exponent: 1,
            }];
            for (q, _) in &others {
                let vy = self.valuation(&y_elem, q).expect("y nonzero");
                let need = (c as i64 * q.e as i64 - vy).max(0) as u32;
                if need > 0 {
                    congruences.push(super::Congruence {
                        prime: q.clone(),
                        target: self.zero(),
                        exponent: need,
                    });
                }
            }
            let w = self
                .solve_congruences(&congruences)
                .expect("CRT denominator clearing is always solvable");
            let z = self.scale(
                &self.mul(&y_elem, &w),
                &BigRational::new(BigInt::one(), prime.p.pow(c)),
            );
            debug_assert!(z.is_integral());
            let (_, zc) = self.integral_scale(&z);
            let (_, wc) = self.integral_scale(&w);
            let znum = self.residue_integral(&zc, prime);
            let wres = self.residue_integral(&wc, prime);
            unit_part = fq.mul(&znum, &fq.inv(&wres));
        }
        // divide by the prime-to-p denominator m2
        if m2.is_one() {
            Ok(unit_part)
        } else {
            let m2res = fq.reduce(&vec![m2.mod_floor(&prime.p).to_u64().unwrap()]);
            Ok(fq.mul(&unit_part, &fq.inv(&m2res)))
        }
    }
}

/// Fixed-precision quotient ring Z[theta]/(p^n): cheap arithmetic for the
/// dyadic enumerations. Elements are coordinate vectors mod p^n.
pub struct PadicQuotient<'a> {
    pub field: &'a NumberField,
    pub p: BigInt,
    pub modulus: BigInt,
}

impl<'a> PadicQuotient<'a> {
    pub fn new(field: &'a NumberField, p: &BigInt, n: u32) -> Self {
        PadicQuotient { field, p: p.clone(), modulus: p.pow(n) }
    }

    pub fn reduce_integral(&self, coords: &[BigInt]) -> Vec<BigInt> {
        coords.iter().map(|c| c.mod_floor(&self.modulus)).collect()
    }

    pub fn from_element(&self, x: &FieldElement) -> Option<Vec<BigInt>> {
        if !x.is_integral() {
            return None;
        }
        let (_, coords) = self.field.integral_scale(x);
        Some(self.reduce_integral(&coords))
    }

    pub fn mul(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let pa = ztrim(a.to_vec());
        let pb = ztrim(b.to_vec());
        let prod = zmul(&pa, &pb);
        let red = zrem_monic(&prod, self.field.min_poly());
        let mut out = vec![BigInt::zero(); self.field.degree()];
        for (i, c) in red.iter().enumerate() {
            out[i] = c.mod_floor(&self.modulus);
        }
        out
    }

    pub fn sub(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x - y).mod_floor(&self.modulus))
            .collect()
    }

    pub fn add(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x + y).mod_floor(&self.modulus))
            .collect()
    }
}

/// Membership tester for P^M inside Z[theta]/(p^N), N*e >= M: precomputes
/// the image lattice of P^M + p^N Z[theta] and reduces candidates against it.
pub struct PrimePowerTester {
    lattice: TriangularLattice,
}

impl PrimePowerTester {
    pub fn new(field: &NumberField, prime: &PrimeIdeal, m: u32, n: u32) -> Self {
        assert!(n as u64 * prime.e as u64 >= m as u64, "p^N Z[theta] must sit inside P^M");
        let d = field.degree();
        let mut cols = field.prime_power_lattice(prime, m).cols;
        let pn = prime.p.pow(n);
        for i in 0..d {
            let mut v = vec![BigInt::zero(); d];
            v[i] = pn.clone();
            cols.push(v);
        }
        PrimePowerTester { lattice: linalg::hnf(d, &cols).expect("full rank") }
    }

    pub fn contains(&self, coords: &[BigInt]) -> bool {
        self.lattice.contains(coords)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numberfield::parse_field;
    use crate::rat::q;

    #[test]
    fn split_examples() {
        let k = parse_field("Q(sqrt,-5)").unwrap();
        let two = k.factor_rational_prime(&BigInt::from(2));
        assert_eq!(two.len(), 1);
        assert_eq!(two[0].1, 2);
        assert_eq!(two[0].0.f_deg, 1);
        assert_eq!(two[0].0.g, vec![1, 1]); // theta + 1

        // 3 and 7 split (-5 is a square mod both); 11 is inert since the
        // Legendre symbol (-5|11) = -1
        let three = k.factor_rational_prime(&BigInt::from(3));
        assert_eq!(three.len(), 2);
        assert!(three.iter().all(|(p, e)| *e == 1 && p.f_deg == 1));
        let eleven = k.factor_rational_prime(&BigInt::from(11));
        assert_eq!(eleven.len(), 1);
        assert_eq!((eleven[0].0.e, eleven[0].0.f_deg), (1, 2));

        let q7 = parse_field("Q").unwrap().factor_rational_prime(&BigInt::from(7));
        assert_eq!(q7.len(), 1);
        assert_eq!((q7[0].0.e, q7[0].0.f_deg), (1, 1));
    }

    #[test]
    fn valuation_examples() {
        let k = parse_field("Q").unwrap();
        let p2 = k.factor_rational_prime(&BigInt::from(2))[0].0.clone();
        let x = k.from_rational(&q(5, 8));
        assert_eq!(k.valuation(&x, &p2).unwrap(), -3);
        assert_eq!(k.valuation(&k.one(), &p2).unwrap(), 0);

        let k = parse_field("Q(sqrt,-5)").unwrap();
        let p2 = k.factor_rational_prime(&BigInt::from(2))[0].0.clone();
        let x = k.add(&k.one(), &k.theta());
        assert_eq!(k.valuation(&x, &p2).unwrap(), 1);
        // v_P(p) = e
        let two = k.from_int(2);
        assert_eq!(k.valuation(&two, &p2).unwrap(), 2);
    }

    #[test]
    fn uniformizer_has_valuation_one() {
        for spec in ["Q", "Q(sqrt,-5)", "Q(sqrt,2)", "poly:[-1,-1,0,1]"] {
            let k = parse_field(spec).unwrap();
            for p in [2i64, 3, 5, 7, 11] {
                for (prime, _) in k.factor_rational_prime(&BigInt::from(p)) {
                    let u = k.uniformizer(&prime);
                    assert_eq!(k.valuation(&u, &prime).unwrap(), 1, "{spec} p={p}");
                }
            }
        }
    }

    #[test]
    fn dedekind_criterion_known_cases() {
        // x^2 - 5: disc 20, p = 2 divides index (Z[sqrt5] is not maximal)
        let f: ZPoly = vec![BigInt::from(-5), BigInt::zero(), BigInt::one()];
        assert!(!dedekind_criterion(&f, &BigInt::from(2)));
        // x^2 + 5: disc -20, maximal at 2
        let g: ZPoly = vec![BigInt::from(5), BigInt::zero(), BigInt::one()];
        assert!(dedekind_criterion(&g, &BigInt::from(2)));
    }

    #[test]
    fn residue_of_unit_with_denominator() {
        let k = parse_field("Q").unwrap();
        let p3 = k.factor_rational_prime(&BigInt::from(3))[0].0.clone();
        // 5/7 mod 3 = 2 * 7^{-1} = 2 * 1 = 2 (7 = 1 mod 3)
        let x = k.from_rational(&q(5, 7));
        assert_eq!(k.residue_of_unit(&x, &p3).unwrap(), vec![2]);
    }
}
