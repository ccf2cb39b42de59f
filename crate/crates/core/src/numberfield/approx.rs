//! Weak approximation: simultaneous congruences at prime ideals together
//! with sign requirements at real places.
//!
//! Congruences are solved by CRT idempotents built from integer lattice
//! algebra on the prime-power ideals; signs are then fixed by searching small
//! multiples of the joint modulus ideal, with a mandatory verification pass.

use super::{FieldElement, NumberField, PrimeIdeal};
use crate::error::{Error, Result};
use crate::linalg::{self, TriangularLattice};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Required sign of sigma(y) at a real place.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignReq {
    Positive,
    Negative,
}

/// One congruence: v_P(y - target) >= exponent.
#[derive(Debug, Clone)]
pub struct Congruence {
    pub prime: PrimeIdeal,
    pub target: FieldElement,
    pub exponent: u32,
}

impl NumberField {
    /// Solve the congruences alone (no sign constraints). Always solvable for
    /// distinct primes; the result is reduced modulo the joint ideal.
    pub fn solve_congruences(&self, congruences: &[Congruence]) -> Result<FieldElement> {
        self.weak_approximate(congruences, &[], 64)
    }

    /// Weak approximation with congruence and sign constraints.
    ///
    /// `bound` caps the sign-fixing lattice search radius; on exhaustion the
    /// error carries the attempted bound so callers can retry larger.
    pub fn weak_approximate(
        &self,
        congruences: &[Congruence],
        signs: &[(usize, SignReq)],
        bound: u64,
    ) -> Result<FieldElement> {
        for (i, a) in congruences.iter().enumerate() {
            for b in &congruences[i + 1..] {
                if a.prime == b.prime {
                    return Err(Error::MalformedQuery(
                        "weak approximation requires pairwise distinct primes".into(),
                    ));
                }
            }
        }
        for &(idx, _) in signs {
            if idx >= self.real_place_count() {
                return Err(Error::MalformedQuery(format!("no real place with index {idx}")));
            }
        }
        if congruences.is_empty() && signs.is_empty() {
            return Ok(self.one());
        }
        let d = self.degree();

        // Scale all targets integral: v(y - t) >= k  <=>  v(My - Mt) >= k + v(M).
        let mut mscale = BigInt::one();
        for c in congruences {
            let (m, _) = self.integral_scale(&c.target);
            mscale = num_integer::Integer::lcm(&mscale, &m);
        }
        let adjusted: Vec<(PrimeIdeal, Vec<BigInt>, u32)> = congruences
            .iter()
            .map(|c| {
                let t = self.scale(&c.target, &BigRational::from_integer(mscale.clone()));
                let (one, coords) = self.integral_scale(&t);
                debug_assert!(one.is_one());
                let extra = crate::arith::ord_p(&mscale, &c.prime.p) * c.prime.e;
                (c.prime.clone(), coords, c.exponent + extra)
            })
            .collect();

        // z = sum target_i * idempotent_i, reduced mod the joint ideal Q.
        let lattices: Vec<TriangularLattice> = adjusted
            .iter()
            .map(|(p, _, k)| self.prime_power_lattice(p, *k))
            .collect();
        let joint = self.product_lattice(&lattices);
        let mut zcoords = vec![BigInt::zero(); d];
        if !adjusted.is_empty() {
            for (i, (_, target, _)) in adjusted.iter().enumerate() {
                if target.iter().all(|c| c.is_zero()) {
                    continue;
                }
                let others: Vec<&TriangularLattice> = lattices
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .map(|(_, l)| l)
                    .collect();
                let idem = self.crt_idempotent(&others, &lattices[i]);
                let prod = mul_int_coords(self, &idem, target);
                for r in 0..d {
                    let v = &zcoords[r] + &prod[r];
                    zcoords[r] = v;
                }
            }
            zcoords = joint.reduce(&zcoords);
        }

        // Fix signs by adding lattice vectors of Q.
        let minv = BigRational::new(BigInt::one(), mscale.clone());
        let mut radius: u64 = 0;
        loop {
            'cand: for cand in box_candidates(d, radius) {
                let mut ycoords = zcoords.clone();
                for (j, c) in cand.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    for r in 0..d {
                        let v = &ycoords[r] + c * &joint.cols[j][r];
                        ycoords[r] = v;
                    }
                }
                let y = FieldElement {
                    coords: ycoords
                        .iter()
                        .map(|v| BigRational::from_integer(v.clone()) * &minv)
                        .collect(),
                };
                if y.is_zero() {
                    continue 'cand;
                }
                for &(idx, want) in signs {
                    let s = self.sign_at_real_place(&y, idx);
                    let ok = match want {
                        SignReq::Positive => s > 0,
                        SignReq::Negative => s < 0,
                    };
                    if !ok {
                        continue 'cand;
                    }
                }
                self.verify_weak_approximation(&y, congruences, signs)?;
                return Ok(y);
            }
            radius = if radius == 0 { 1 } else { radius * 2 };
            if radius > bound {
                return Err(Error::SearchExhausted {
                    what: "weak approximation sign fixing".into(),
                    bound,
                });
            }
        }
    }

    /// Mandatory post-check of a weak approximation result.
    fn verify_weak_approximation(
        &self,
        y: &FieldElement,
        congruences: &[Congruence],
        signs: &[(usize, SignReq)],
    ) -> Result<()> {
        for c in congruences {
            let diff = self.sub(y, &c.target);
            if diff.is_zero() {
                continue;
            }
            let v = self.valuation(&diff, &c.prime)?;
            if v < c.exponent as i64 {
                return Err(Error::Internal(format!(
                    "weak approximation verification failed: v = {v} < {}",
                    c.exponent
                )));
            }
        }
        for &(idx, want) in signs {
            let s = self.sign_at_real_place(y, idx);
            let ok = match want {
                SignReq::Positive => s > 0,
                SignReq::Negative => s < 0,
            };
            if !ok {
                return Err(Error::Internal("weak approximation sign verification failed".into()));
            }
        }
        Ok(())
    }

    /// Product of ideals as lattices (empty product = Z[theta]).
    fn product_lattice(&self, lattices: &[TriangularLattice]) -> TriangularLattice {
        let d = self.degree();
        let identity: Vec<Vec<BigInt>> = (0..d)
            .map(|i| {
                let mut v = vec![BigInt::zero(); d];
                v[i] = BigInt::one();
                v
            })
            .collect();
        let mut acc = linalg::hnf(d, &identity).expect("identity");
        for lat in lattices {
            let mut cols = Vec::new();
            for a in &acc.cols {
                for b in &lat.cols {
                    cols.push(mul_int_coords(self, a, b));
                }
            }
            acc = linalg::hnf(d, &cols).expect("ideal product is full rank");
        }
        acc
    }

    /// Element alpha with alpha = 1 mod `target` ideal-power and alpha inside
    /// all `others`. Solves 1 = alpha + beta on stacked generators.
    fn crt_idempotent(
        &self,
        others: &[&TriangularLattice],
        target: &TriangularLattice,
    ) -> Vec<BigInt> {
        let d = self.degree();
        if others.is_empty() {
            let mut one = vec![BigInt::zero(); d];
            one[0] = BigInt::one();
            return one;
        }
        let m = self.product_lattice(&others.iter().map(|l| (*l).clone()).collect::<Vec<_>>());
        let mut gens: Vec<Vec<BigInt>> = m.cols.clone();
        gens.extend(target.cols.iter().cloned());
        let mut e1 = vec![BigInt::zero(); d];
        e1[0] = BigInt::one();
        let sol = linalg::solve_integer(d, &gens, &e1)
            .expect("comaximal prime powers always solve 1 = alpha + beta");
        // alpha = sum of the M-block columns
        let mut alpha = vec![BigInt::zero(); d];
        for (j, c) in sol.iter().take(m.cols.len()).enumerate() {
            if c.is_zero() {
                continue;
            }
            for r in 0..d {
                let v = &alpha[r] + c * &m.cols[j][r];
                alpha[r] = v;
            }
        }
        alpha
    }
}

/// Multiply two integral elements given by integer coordinates.
fn mul_int_coords(field: &NumberField, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let ea = FieldElement {
        coords: a.iter().map(|c| BigRational::from_integer(c.clone())).collect(),
    };
    let eb = FieldElement {
        coords: b.iter().map(|c| BigRational::from_integer(c.clone())).collect(),
    };
    let prod = field.mul(&ea, &eb);
    prod.coords
        .iter()
        .map(|c| {
            debug_assert!(c.is_integer());
            c.to_integer()
        })
        .collect()
}

/// Integer vectors with max-norm exactly `radius`, in a fixed deterministic
/// order (radius 0 gives the zero vector).
fn box_candidates(dim: usize, radius: u64) -> Vec<Vec<BigInt>> {
    let r = radius as i64;
    let mut out = Vec::new();
    let side = 2 * r + 1;
    let total = (side as u128).pow(dim as u32);
    let mut idx: u128 = 0;
    while idx < total {
        let mut rem = idx;
        let mut v = Vec::with_capacity(dim);
        let mut maxabs = 0i64;
        for _ in 0..dim {
            let c = (rem % side as u128) as i64 - r;
            rem /= side as u128;
            maxabs = maxabs.max(c.abs());
            v.push(BigInt::from(c));
        }
        if maxabs == r {
            out.push(v);
        }
        idx += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numberfield::parse_field;
    use crate::rat::qi;

    #[test]
    fn rational_congruence_with_sign() {
        let k = parse_field("Q").unwrap();
        let p2 = k.factor_rational_prime(&BigInt::from(2))[0].0.clone();
        let y = k
            .weak_approximate(
                &[Congruence { prime: p2.clone(), target: k.from_int(2), exponent: 3 }],
                &[(0, SignReq::Positive)],
                1 << 12,
            )
            .unwrap();
        let diff = k.sub(&y, &k.from_int(2));
        assert!(diff.is_zero() || k.valuation(&diff, &p2).unwrap() >= 3);
        assert!(k.sign_at_real_place(&y, 0) > 0);
    }

    #[test]
    fn mixed_signs_real_quadratic() {
        let k = parse_field("Q(sqrt,2)").unwrap();
        let y = k
            .weak_approximate(&[], &[(0, SignReq::Negative), (1, SignReq::Positive)], 1 << 12)
            .unwrap();
        assert!(k.sign_at_real_place(&y, 0) < 0);
        assert!(k.sign_at_real_place(&y, 1) > 0);
    }

    #[test]
    fn empty_constraints_give_one() {
        let k = parse_field("Q(sqrt,-5)").unwrap();
        let y = k.weak_approximate(&[], &[], 4).unwrap();
        assert_eq!(y, k.one());
    }

    #[test]
    fn split_primes_same_characteristic() {
        let k = parse_field("Q(sqrt,-5)").unwrap();
        let threes = k.factor_rational_prime(&BigInt::from(3));
        assert_eq!(threes.len(), 2);
        let (p1, p2) = (threes[0].0.clone(), threes[1].0.clone());
        let y = k
            .solve_congruences(&[
                Congruence { prime: p1.clone(), target: k.one(), exponent: 2 },
                Congruence { prime: p2.clone(), target: k.from_int(3), exponent: 2 },
            ])
            .unwrap();
        assert!(k.valuation(&k.sub(&y, &k.one()), &p1).unwrap() >= 2);
        assert!(k.valuation(&k.sub(&y, &k.from_int(3)), &p2).unwrap() >= 2);
    }

    #[test]
    fn distinct_primes_required() {
        let k = parse_field("Q").unwrap();
        let p2 = k.factor_rational_prime(&BigInt::from(2))[0].0.clone();
        let r = k.solve_congruences(&[
            Congruence { prime: p2.clone(), target: k.one(), exponent: 1 },
            Congruence { prime: p2, target: k.zero(), exponent: 1 },
        ]);
        assert!(r.is_err());
        let _ = qi(0);
    }
}
