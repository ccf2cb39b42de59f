//! Sparse multivariate polynomials over Z with a namespaced variable set:
//! six parameter slots, one subject variable, and numbered bound variables.

use crate::error::{Error, Result};
use crate::numberfield::{FieldElement, NumberField};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Param {
    A,
    B,
    C,
    D,
    APrime,
    BPrime,
}

impl Param {
    pub fn name(&self) -> &'static str {
        match self {
            Param::A => "a",
            Param::B => "b",
            Param::C => "c",
            Param::D => "d",
            Param::APrime => "ap",
            Param::BPrime => "bp",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    Param(Param),
    Subject,
    Bound(u32),
}

impl Var {
    pub fn name(&self) -> String {
        match self {
            Var::Param(p) => p.name().to_string(),
            Var::Subject => "r".to_string(),
            Var::Bound(i) => format!("v{i}"),
        }
    }
}

/// Fresh bound-variable allocator; every binder in a formula tree draws from
/// one generator so bound names never collide.
#[derive(Debug, Default)]
pub struct VarGen {
    next: u32,
}

impl VarGen {
    pub fn new() -> VarGen {
        VarGen { next: 0 }
    }

    pub fn fresh(&mut self) -> Var {
        let v = Var::Bound(self.next);
        self.next += 1;
        v
    }

    pub fn fresh_block(&mut self, count: usize) -> Vec<Var> {
        (0..count).map(|_| self.fresh()).collect()
    }
}

/// Monomial: finite map variable -> positive exponent.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(pub BTreeMap<Var, u32>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial::default()
    }

    pub fn var(v: Var) -> Monomial {
        let mut m = BTreeMap::new();
        m.insert(v, 1);
        Monomial(m)
    }

    pub fn total_degree(&self) -> u64 {
        self.0.values().map(|&e| e as u64).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = self.0.clone();
        for (v, e) in &other.0 {
            *out.entry(*v).or_insert(0) += e;
        }
        Monomial(out)
    }
}

/// Sparse polynomial: monomial -> nonzero integer coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly {
    pub terms: BTreeMap<Monomial, BigInt>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly::default()
    }

    pub fn constant(c: i64) -> Poly {
        Poly::from_bigint(BigInt::from(c))
    }

    pub fn from_bigint(c: BigInt) -> Poly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        Poly { terms }
    }

    pub fn var(v: Var) -> Poly {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(v), BigInt::one());
        Poly { terms }
    }

    /// c * v^e
    pub fn monomial(c: i64, parts: &[(Var, u32)]) -> Poly {
        let mut m = BTreeMap::new();
        for (v, e) in parts {
            if *e > 0 {
                *m.entry(*v).or_insert(0) += e;
            }
        }
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(Monomial(m), BigInt::from(c));
        }
        Poly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> u64 {
        self.terms.keys().map(Monomial::total_degree).max().unwrap_or(0)
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut out: Vec<Var> = self
            .terms
            .keys()
            .flat_map(|m| m.0.keys().copied())
            .collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.terms.clone();
        for (m, c) in &other.terms {
            let entry = out.entry(m.clone()).or_insert_with(BigInt::zero);
            *entry += c;
            if entry.is_zero() {
                out.remove(m);
            }
        }
        Poly { terms: out }
    }

    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = m1.mul(m2);
                let entry = out.entry(m.clone()).or_insert_with(BigInt::zero);
                *entry += c1 * c2;
                if entry.is_zero() {
                    out.remove(&m);
                }
            }
        }
        Poly { terms: out }
    }

    pub fn scale(&self, c: &BigInt) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect() }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::constant(1);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Exact evaluation in K. Every variable of the polynomial must be
    /// assigned.
    pub fn eval(
        &self,
        field: &NumberField,
        assignment: &BTreeMap<Var, FieldElement>,
    ) -> Result<FieldElement> {
        let mut acc = field.zero();
        for (m, c) in &self.terms {
            let mut term = field.from_rational(&num_rational::BigRational::from_integer(c.clone()));
            for (v, e) in &m.0 {
                let val = assignment.get(v).ok_or_else(|| {
                    Error::MalformedQuery(format!("unassigned variable {}", v.name()))
                })?;
                term = field.mul(&term, &field.pow(val, *e as i64).expect("nonnegative power"));
            }
            acc = field.add(&acc, &term);
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numberfield::parse_field;

    #[test]
    fn arithmetic_and_degree() {
        let x = Poly::var(Var::Bound(0));
        let y = Poly::var(Var::Bound(1));
        let a = Poly::var(Var::Param(Param::A));
        // x^2 - a y^2
        let p = x.mul(&x).sub(&a.mul(&y.mul(&y)));
        assert_eq!(p.total_degree(), 3);
        assert_eq!(p.num_terms(), 2);
        let q = p.sub(&p);
        assert!(q.is_zero());
        assert_eq!(p.pow(2).total_degree(), 6);
    }

    #[test]
    fn eval_in_field() {
        let k = parse_field("Q").unwrap();
        let x = Poly::var(Var::Bound(0));
        let p = x.mul(&x).sub(&Poly::constant(2)); // x^2 - 2
        let mut asg = BTreeMap::new();
        asg.insert(Var::Bound(0), k.from_int(3));
        assert_eq!(p.eval(&k, &asg).unwrap(), k.from_int(7));
        let empty = BTreeMap::new();
        assert!(p.eval(&k, &empty).is_err());
    }
}
