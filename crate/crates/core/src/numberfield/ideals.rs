//! Fractional ideals in factored form.

use super::{FieldElement, NumberField, PrimeIdeal};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::BTreeMap;

/// A fractional ideal as a finite map prime -> nonzero exponent.
/// The zero ideal is not representable.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FractionalIdeal {
    exps: BTreeMap<PrimeIdeal, i64>,
}

impl FractionalIdeal {
    pub fn unit() -> Self {
        FractionalIdeal::default()
    }

    pub fn from_exponents(exps: impl IntoIterator<Item = (PrimeIdeal, i64)>) -> Self {
        let mut map = BTreeMap::new();
        for (p, e) in exps {
            if e != 0 {
                map.insert(p, e);
            }
        }
        FractionalIdeal { exps: map }
    }

    pub fn exponent(&self, prime: &PrimeIdeal) -> i64 {
        self.exps.get(prime).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PrimeIdeal, &i64)> {
        self.exps.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &PrimeIdeal> {
        self.exps.keys()
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.exps.is_empty()
    }

    /// Ideal product: exponentwise sum.
    pub fn mul(&self, other: &FractionalIdeal) -> FractionalIdeal {
        let mut out = self.exps.clone();
        for (p, e) in &other.exps {
            let v = out.entry(p.clone()).or_insert(0);
            *v += e;
            if *v == 0 {
                out.remove(p);
            }
        }
        FractionalIdeal { exps: out }
    }

    pub fn inv(&self) -> FractionalIdeal {
        FractionalIdeal {
            exps: self.exps.iter().map(|(p, e)| (p.clone(), -e)).collect(),
        }
    }

    /// gcd = pointwise minimum of exponents over the union of supports;
    /// this is the ideal (x, y) when the inputs are (x) and (y).
    pub fn gcd(&self, other: &FractionalIdeal) -> FractionalIdeal {
        let mut out = BTreeMap::new();
        for p in self.exps.keys().chain(other.exps.keys()) {
            if out.contains_key(p) {
                continue;
            }
            let m = self.exponent(p).min(other.exponent(p));
            if m != 0 {
                out.insert(p.clone(), m);
            }
        }
        FractionalIdeal { exps: out }
    }
}

impl NumberField {
    /// Principal fractional ideal (x), factored. Errors on x = 0.
    pub fn ideal_of(&self, x: &FieldElement) -> Result<FractionalIdeal> {
        if x.is_zero() {
            return Err(Error::ZeroInput);
        }
        let (m, ycoords) = self.integral_scale(x);
        let ypoly = crate::intpoly::ztrim(ycoords);
        let norm = crate::intpoly::zresultant(self.min_poly(), &ypoly);
        debug_assert!(!norm.is_zero());
        let mut rational_primes: Vec<BigInt> =
            crate::arith::factor(&norm).into_iter().map(|(p, _)| p).collect();
        for (p, _) in crate::arith::factor(&m) {
            if !rational_primes.contains(&p) {
                rational_primes.push(p);
            }
        }
        rational_primes.sort();
        let mut exps = BTreeMap::new();
        for p in rational_primes {
            for (prime, _) in self.factor_rational_prime(&p) {
                let v = self.valuation(x, &prime)?;
                if v != 0 {
                    exps.insert(prime, v);
                }
            }
        }
        Ok(FractionalIdeal { exps })
    }

    /// Exponent of P in (x1)(x0, x1)^{-1}: the local contact order with the
    /// divisor {x1 = 0} on the projective line.
    pub fn contact_exponent(
        &self,
        x0: &FieldElement,
        x1: &FieldElement,
        prime: &PrimeIdeal,
    ) -> Result<i64> {
        if x1.is_zero() {
            return Err(Error::ZeroInput);
        }
        let v1 = self.valuation(x1, prime)?;
        if x0.is_zero() {
            // (x0, x1) = (x1)
            return Ok(0);
        }
        let v0 = self.valuation(x0, prime)?;
        Ok(v1 - v0.min(v1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numberfield::parse_field;
    use crate::rat::q;

    #[test]
    fn ideal_of_rational() {
        let k = parse_field("Q").unwrap();
        let x = k.from_rational(&q(8, 5));
        let ideal = k.ideal_of(&x).unwrap();
        let p2 = k.factor_rational_prime(&BigInt::from(2))[0].0.clone();
        let p5 = k.factor_rational_prime(&BigInt::from(5))[0].0.clone();
        assert_eq!(ideal.exponent(&p2), 3);
        assert_eq!(ideal.exponent(&p5), -1);
        assert_eq!(ideal.exponent(&k.factor_rational_prime(&BigInt::from(3))[0].0), 0);
    }

    #[test]
    fn ideal_of_one_plus_theta() {
        // (1 + sqrt(-5)) = (2, theta+1) * (3, theta+1)
        let k = parse_field("Q(sqrt,-5)").unwrap();
        let x = k.add(&k.one(), &k.theta());
        let ideal = k.ideal_of(&x).unwrap();
        let entries: Vec<(BigInt, i64)> =
            ideal.iter().map(|(p, e)| (p.p.clone(), *e)).collect();
        assert_eq!(entries, vec![(BigInt::from(2), 1), (BigInt::from(3), 1)]);
        // both primes have the generator theta + 1
        for (p, _) in ideal.iter() {
            assert_eq!(p.g, vec![1, 1]);
        }
    }

    #[test]
    fn gcd_and_exponent() {
        let k = parse_field("Q").unwrap();
        let i8v = k.ideal_of(&k.from_int(8)).unwrap();
        let i5 = k.ideal_of(&k.from_int(5)).unwrap();
        let g = i8v.gcd(&i5);
        assert!(g.is_unit_ideal());
        // (8)(5,8)^{-1} = (8): exponent at 2 is 3
        let quotient = i8v.mul(&g.inv());
        let p2 = k.factor_rational_prime(&BigInt::from(2))[0].0.clone();
        assert_eq!(quotient.exponent(&p2), 3);
        // idempotence
        assert_eq!(i8v.gcd(&i8v), i8v);
    }

    #[test]
    fn product_is_exponent_sum() {
        let k = parse_field("Q(sqrt,-5)").unwrap();
        let x = k.add(&k.one(), &k.theta());
        let y = k.from_int(6);
        let ix = k.ideal_of(&x).unwrap();
        let iy = k.ideal_of(&y).unwrap();
        let ixy = k.ideal_of(&k.mul(&x, &y)).unwrap();
        assert_eq!(ix.mul(&iy), ixy);
    }
}
