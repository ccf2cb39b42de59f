//! Membership in the weighted valuation sets D_(K,S,n), intersection
//! multiplicities on the projective line, and the gcd-based rational oracle
//! used as an independent cross-check over Q.

use crate::error::{Error, Result};
use crate::numberfield::{FieldElement, NumberField, PrimeIdeal};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Divisor weight: a positive integer or infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weight {
    Finite(u32),
    Infinity,
}

impl Weight {
    pub fn finite(n: u32) -> Result<Weight> {
        if n == 0 {
            return Err(Error::MalformedQuery("weight must be >= 1".into()));
        }
        Ok(Weight::Finite(n))
    }

    /// Does the weight divide the multiplicity, with infinity dividing only
    /// zero?
    pub fn divides(&self, multiplicity: &Multiplicity) -> bool {
        match (self, multiplicity) {
            // a point on the divisor is always allowed
            (_, Multiplicity::Infinity) => true,
            (Weight::Infinity, Multiplicity::Finite(m)) => *m == 0,
            (Weight::Finite(n), Multiplicity::Finite(m)) => m.rem_euclid(*n as i64) == 0,
        }
    }

    /// The orbifold coefficient 1 - 1/n (1 for infinite weight).
    pub fn epsilon(&self) -> BigRational {
        match self {
            Weight::Infinity => BigRational::one(),
            Weight::Finite(n) => {
                BigRational::one() - BigRational::new(BigInt::one(), BigInt::from(*n))
            }
        }
    }

    /// Inverse of the epsilon dictionary: 1 - 1/n maps back to n, and 1 to
    /// infinity.
    pub fn from_epsilon(eps: &BigRational) -> Option<Weight> {
        if eps.is_one() {
            return Some(Weight::Infinity);
        }
        let gap = BigRational::one() - eps;
        if gap.is_negative() || gap.is_zero() {
            return None;
        }
        if !gap.numer().is_one() {
            return None;
        }
        let n = gap.denom();
        u32::try_from(n.clone()).ok().map(Weight::Finite)
    }
}

/// Local contact order with a divisor: a nonnegative integer, or infinity
/// when the point lies on the divisor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Multiplicity {
    Finite(i64),
    Infinity,
}

/// A point of the projective line with coordinates in K, not both zero.
#[derive(Debug, Clone)]
pub struct ProjectivePoint {
    pub x0: FieldElement,
    pub x1: FieldElement,
}

impl ProjectivePoint {
    pub fn new(x0: FieldElement, x1: FieldElement) -> Result<ProjectivePoint> {
        if x0.is_zero() && x1.is_zero() {
            return Err(Error::MalformedQuery("projective point needs a nonzero coordinate".into()));
        }
        Ok(ProjectivePoint { x0, x1 })
    }
}

impl NumberField {
    /// Membership in D_(K,S,n): r = 0, or v_P(r) in Z_{>=0} union n Z at
    /// every finite place P outside S (S-integrality when n is infinite).
    /// Only the finite support of r is inspected.
    pub fn in_darmon(&self, s: &[PrimeIdeal], n: Weight, r: &FieldElement) -> Result<bool> {
        if r.is_zero() {
            return Ok(true);
        }
        for (prime, v) in self.ideal_of(r)?.iter() {
            if s.contains(prime) {
                continue;
            }
            if *v >= 0 {
                continue;
            }
            match n {
                Weight::Infinity => return Ok(false),
                Weight::Finite(n) => {
                    if v.rem_euclid(n as i64) != 0 {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// Parameterized variant: S is the omega set of the 4-tuple (together
    /// with the archimedean places, which never constrain membership). The
    /// omega set is recomputed on every query.
    pub fn in_darmon_params(
        &self,
        params: (&FieldElement, &FieldElement, &FieldElement, &FieldElement),
        n: Weight,
        r: &FieldElement,
    ) -> Result<bool> {
        let omega = self.omega(params.0, params.1, params.2, params.3)?;
        let s: Vec<PrimeIdeal> = omega
            .iter()
            .map(|v| v.prime().expect("omega is finite").clone())
            .collect();
        self.in_darmon(&s, n, r)
    }

    /// Intersection multiplicity of P with the divisor {x1 = 0} at a prime:
    /// the exponent of the prime in (x1)(x0, x1)^{-1}; infinite on the
    /// divisor itself.
    pub fn intersection_multiplicity(
        &self,
        point: &ProjectivePoint,
        prime: &PrimeIdeal,
    ) -> Result<Multiplicity> {
        if point.x1.is_zero() {
            return Ok(Multiplicity::Infinity);
        }
        Ok(Multiplicity::Finite(self.contact_exponent(&point.x0, &point.x1, prime)?))
    }

    /// Is P a Darmon point of the orbifold with weights n0 on {x0 = 0} and
    /// n1 on {x1 = 0}, relative to S? Checks every prime outside S in the
    /// support of the coordinates; all other multiplicities vanish.
    pub fn is_darmon_point(
        &self,
        point: &ProjectivePoint,
        n0: Weight,
        n1: Weight,
        s: &[PrimeIdeal],
    ) -> Result<bool> {
        let mut support: Vec<PrimeIdeal> = Vec::new();
        for coord in [&point.x0, &point.x1] {
            if coord.is_zero() {
                continue;
            }
            for q in self.ideal_of(coord)?.support() {
                if !support.contains(q) {
                    support.push(q.clone());
                }
            }
        }
        let swapped = ProjectivePoint { x0: point.x1.clone(), x1: point.x0.clone() };
        for prime in support {
            if s.contains(&prime) {
                continue;
            }
            let m1 = self.intersection_multiplicity(point, &prime)?;
            let m0 = self.intersection_multiplicity(&swapped, &prime)?;
            if !n1.divides(&m1) || !n0.divides(&m0) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// gcd-based membership oracle over Q: r = a / b^n in lowest terms with a
/// perfect n-th power denominator. Fully independent of the valuation code.
pub fn rational_power_oracle(r: &BigRational, n: Weight) -> bool {
    if r.is_zero() {
        return true;
    }
    let den = r.denom();
    match n {
        Weight::Infinity => den.is_one(),
        Weight::Finite(n) => crate::arith::integer_nth_root(den, n).is_some(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numberfield::parse_field;
    use crate::rat::q;

    #[test]
    fn darmon_membership_examples() {
        let k = parse_field("Q").unwrap();
        let n3 = Weight::finite(3).unwrap();
        assert!(k.in_darmon(&[], n3, &k.from_rational(&q(5, 8))).unwrap());
        assert!(!k.in_darmon(&[], n3, &k.from_rational(&q(8, 5))).unwrap());
        assert!(k.in_darmon(&[], n3, &k.zero()).unwrap());
        // with S containing 5, the 8/5 failure goes away
        let p5 = k.factor_rational_prime(&BigInt::from(5))[0].0.clone();
        assert!(k.in_darmon(&[p5], n3, &k.from_rational(&q(8, 5))).unwrap());
    }

    #[test]
    fn weight_one_admits_everything() {
        let k = parse_field("Q").unwrap();
        let w = Weight::finite(1).unwrap();
        for r in [q(22, 7), q(-3, 125), q(1, 2)] {
            assert!(k.in_darmon(&[], w, &k.from_rational(&r)).unwrap());
        }
    }

    #[test]
    fn infinite_weight_is_integrality() {
        let k = parse_field("Q").unwrap();
        assert!(k.in_darmon(&[], Weight::Infinity, &k.from_int(7)).unwrap());
        assert!(!k.in_darmon(&[], Weight::Infinity, &k.from_rational(&q(1, 2))).unwrap());
    }

    #[test]
    fn multiplicity_examples() {
        let k = parse_field("Q").unwrap();
        let p2 = k.factor_rational_prime(&BigInt::from(2))[0].0.clone();
        let p = ProjectivePoint::new(k.from_int(5), k.from_int(8)).unwrap();
        assert_eq!(k.intersection_multiplicity(&p, &p2).unwrap(), Multiplicity::Finite(3));
        let unit = ProjectivePoint::new(k.zero(), k.one()).unwrap();
        assert_eq!(k.intersection_multiplicity(&unit, &p2).unwrap(), Multiplicity::Finite(0));
        let on_divisor = ProjectivePoint::new(k.one(), k.zero()).unwrap();
        assert_eq!(k.intersection_multiplicity(&on_divisor, &p2).unwrap(), Multiplicity::Infinity);
    }

    #[test]
    fn darmon_points_on_the_line() {
        let k = parse_field("Q").unwrap();
        let w1 = Weight::finite(1).unwrap();
        let w3 = Weight::finite(3).unwrap();
        let p = ProjectivePoint::new(k.from_int(5), k.from_int(8)).unwrap();
        assert!(k.is_darmon_point(&p, w1, w3, &[]).unwrap());
        // (a^n : 1) with the full weight on the other divisor
        let pow = ProjectivePoint::new(k.from_int(27), k.one()).unwrap();
        assert!(k.is_darmon_point(&pow, w3, Weight::Infinity, &[]).unwrap());
        // double infinite weight cuts out unit pairs: (2:3) meets {x1=0}
        // at 3 with multiplicity 1, so it fails; (1:1) passes
        let unitish = ProjectivePoint::new(k.from_int(2), k.from_int(3)).unwrap();
        assert!(!k.is_darmon_point(&unitish, Weight::Infinity, Weight::Infinity, &[]).unwrap());
        let one_one = ProjectivePoint::new(k.one(), k.from_int(-1)).unwrap();
        assert!(k.is_darmon_point(&one_one, Weight::Infinity, Weight::Infinity, &[]).unwrap());
        let half = ProjectivePoint::new(k.one(), k.from_int(2)).unwrap();
        assert!(!k.is_darmon_point(&half, Weight::Infinity, Weight::Infinity, &[]).unwrap());
        // weight pair (1, infinity) gives the S-integers
        assert!(k
            .is_darmon_point(
                &ProjectivePoint::new(k.from_int(7), k.one()).unwrap(),
                w1,
                Weight::Infinity,
                &[]
            )
            .unwrap());
        assert!(!k
            .is_darmon_point(&half, w1, Weight::Infinity, &[])
            .unwrap());
    }

    #[test]
    fn oracle_examples() {
        assert!(rational_power_oracle(&q(5, 8), Weight::Finite(3)));
        assert!(!rational_power_oracle(&q(5, 4), Weight::Finite(3)));
        assert!(rational_power_oracle(&q(7, 1), Weight::Finite(9)));
        assert!(rational_power_oracle(&q(0, 1), Weight::Finite(2)));
    }

    #[test]
    fn oracle_equivalence_spot() {
        let k = parse_field("Q").unwrap();
        for num in -20i64..=20 {
            for den in 1i64..=20 {
                let r = q(num, den);
                for n in [1u32, 2, 3, 4] {
                    let w = Weight::Finite(n);
                    assert_eq!(
                        k.in_darmon(&[], w, &k.from_rational(&r)).unwrap(),
                        rational_power_oracle(&r, w),
                        "r={num}/{den}, n={n}"
                    );
                }
            }
        }
    }

    #[test]
    fn epsilon_dictionary() {
        assert_eq!(Weight::Finite(3).epsilon(), q(2, 3));
        assert_eq!(Weight::Infinity.epsilon(), q(1, 1));
        assert_eq!(Weight::from_epsilon(&q(2, 3)), Some(Weight::Finite(3)));
        assert_eq!(Weight::from_epsilon(&q(1, 1)), Some(Weight::Infinity));
        assert_eq!(Weight::from_epsilon(&q(3, 4)), Some(Weight::Finite(4)));
        assert_eq!(Weight::from_epsilon(&q(5, 7)), None);
    }

    #[test]
    fn parameterized_set() {
        let k = parse_field("Q").unwrap();
        let two = k.from_int(2);
        let three = k.from_int(3);
        // omega(2,3,2,3) = {2,3}: 1/4 has v_2 = -2, allowed inside S
        let r = k.from_rational(&q(1, 4));
        assert!(k
            .in_darmon_params((&two, &three, &two, &three), Weight::Finite(3), &r)
            .unwrap());
        // but 1/5 fails at 5 with n = 3
        let r5 = k.from_rational(&q(1, 5));
        assert!(!k
            .in_darmon_params((&two, &three, &two, &three), Weight::Finite(3), &r5)
            .unwrap());
    }
}
