//! Exact evaluation of quantifier-free formulas, bounded witness search for
//! existential blocks, and a three-valued bounded evaluator for quantified
//! sentences over the (infinite) field: searches can certify an existential
//! truth or a universal failure, and report everything else as unknown.

use super::ast::{Formula, Rel};
use super::poly::Var;
use crate::error::{Error, Result};
use crate::numberfield::{FieldElement, NumberField};
use std::collections::BTreeMap;

pub type Assignment = BTreeMap<Var, FieldElement>;

/// Outcome of a bounded quantifier evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundedTruth {
    True,
    False,
    Unknown,
}

impl BoundedTruth {
    pub fn is_conclusive(&self) -> bool {
        !matches!(self, BoundedTruth::Unknown)
    }

    fn not(self) -> BoundedTruth {
        match self {
            BoundedTruth::True => BoundedTruth::False,
            BoundedTruth::False => BoundedTruth::True,
            BoundedTruth::Unknown => BoundedTruth::Unknown,
        }
    }
}

impl NumberField {
    /// Exact truth of a quantifier-free formula under a total assignment.
    pub fn evaluate_qf(&self, f: &Formula, assignment: &Assignment) -> Result<bool> {
        match f {
            Formula::Atom(p, rel) => {
                let v = p.eval(self, assignment)?;
                Ok(match rel {
                    Rel::EqZero => v.is_zero(),
                    Rel::NeqZero => !v.is_zero(),
                })
            }
            Formula::And(fs) => {
                for g in fs {
                    if !self.evaluate_qf(g, assignment)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Formula::Or(fs) => {
                for g in fs {
                    if self.evaluate_qf(g, assignment)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            Formula::Not(g) => Ok(!self.evaluate_qf(g, assignment)?),
            Formula::Exists(_, _) | Formula::Forall(_, _) => Err(Error::MalformedQuery(
                "evaluate_qf expects a quantifier-free formula".into(),
            )),
        }
    }

    /// Bounded witness search for a formula of the shape
    /// Exists(vars, ... Exists(vars, quantifier-free)): enumerate candidate
    /// assignments in height order (capped) and return the first witness.
    pub fn bounded_search(
        &self,
        f: &Formula,
        base: &Assignment,
        height: u64,
        max_candidates: usize,
    ) -> Result<Option<Assignment>> {
        let mut vars: Vec<Var> = Vec::new();
        let mut inner = f;
        while let Formula::Exists(vs, body) = inner {
            vars.extend(vs.iter().copied());
            inner = body;
        }
        if !inner.is_quantifier_free() {
            return Err(Error::MalformedQuery(
                "bounded_search expects an existential block over a quantifier-free matrix".into(),
            ));
        }
        let candidates: Vec<FieldElement> = self.search_candidates(height);
        let total = candidates.len();
        let mut indices = vec![0usize; vars.len()];
        let mut tried = 0usize;
        loop {
            if tried >= max_candidates {
                return Ok(None);
            }
            tried += 1;
            let mut asg = base.clone();
            for (v, &i) in vars.iter().zip(&indices) {
                asg.insert(*v, candidates[i].clone());
            }
            if self.evaluate_qf(inner, &asg)? {
                return Ok(Some(asg));
            }
            // odometer over candidate indices
            let mut c = 0;
            loop {
                if c == indices.len() {
                    return Ok(None);
                }
                indices[c] += 1;
                if indices[c] < total {
                    break;
                }
                indices[c] = 0;
                c += 1;
            }
        }
    }

    /// Candidate elements for searches: rationals in height order for Q,
    /// small coordinate vectors otherwise.
    pub fn search_candidates(&self, height: u64) -> Vec<FieldElement> {
        if self.is_rationals() {
            crate::rat::rational_candidates(height)
                .into_iter()
                .map(|r| self.from_rational(&r))
                .collect()
        } else {
            crate::rat::vector_candidates(self.degree(), height.min(2))
                .into_iter()
                .map(|coords| FieldElement { coords })
                .collect()
        }
    }

    /// Three-valued bounded evaluation of an arbitrary formula: existential
    /// truths and universal failures are certified by explicit witnesses or
    /// counterexamples; everything that would need an exhaustive sweep of
    /// the infinite field is Unknown.
    pub fn bounded_truth(
        &self,
        f: &Formula,
        assignment: &Assignment,
        height: u64,
        max_candidates: usize,
    ) -> Result<BoundedTruth> {
        match f {
            Formula::Atom(_, _) => Ok(if self.evaluate_qf(f, assignment)? {
                BoundedTruth::True
            } else {
                BoundedTruth::False
            }),
            Formula::Not(g) => {
                Ok(self.bounded_truth(g, assignment, height, max_candidates)?.not())
            }
            Formula::And(fs) => {
                let mut out = BoundedTruth::True;
                for g in fs {
                    match self.bounded_truth(g, assignment, height, max_candidates)? {
                        BoundedTruth::False => return Ok(BoundedTruth::False),
                        BoundedTruth::Unknown => out = BoundedTruth::Unknown,
                        BoundedTruth::True => {}
                    }
                }
                Ok(out)
            }
            Formula::Or(fs) => {
                let mut out = BoundedTruth::False;
                for g in fs {
                    match self.bounded_truth(g, assignment, height, max_candidates)? {
                        BoundedTruth::True => return Ok(BoundedTruth::True),
                        BoundedTruth::Unknown => out = BoundedTruth::Unknown,
                        BoundedTruth::False => {}
                    }
                }
                Ok(out)
            }
            Formula::Exists(vs, body) => {
                let candidates = self.search_candidates(height);
                let mut tried = 0usize;
                let mut indices = vec![0usize; vs.len()];
                loop {
                    if tried >= max_candidates {
                        return Ok(BoundedTruth::Unknown);
                    }
                    tried += 1;
                    let mut asg = assignment.clone();
                    for (v, &i) in vs.iter().zip(&indices) {
                        asg.insert(*v, candidates[i].clone());
                    }
                    if self.bounded_truth(body, &asg, height, max_candidates)?
                        == BoundedTruth::True
                    {
                        return Ok(BoundedTruth::True);
                    }
                    let mut c = 0;
                    loop {
                        if c == indices.len() {
                            return Ok(BoundedTruth::Unknown);
                        }
                        indices[c] += 1;
                        if indices[c] < candidates.len() {
                            break;
                        }
                        indices[c] = 0;
                        c += 1;
                    }
                }
            }
            Formula::Forall(vs, body) => {
                let candidates = self.search_candidates(height);
                let mut tried = 0usize;
                let mut indices = vec![0usize; vs.len()];
                loop {
                    if tried >= max_candidates {
                        return Ok(BoundedTruth::Unknown);
                    }
                    tried += 1;
                    let mut asg = assignment.clone();
                    for (v, &i) in vs.iter().zip(&indices) {
                        asg.insert(*v, candidates[i].clone());
                    }
                    if self.bounded_truth(body, &asg, height, max_candidates)?
                        == BoundedTruth::False
                    {
                        return Ok(BoundedTruth::False);
                    }
                    let mut c = 0;
                    loop {
                        if c == indices.len() {
                            return Ok(BoundedTruth::Unknown);
                        }
                        indices[c] += 1;
                        if indices[c] < candidates.len() {
                            break;
                        }
                        indices[c] = 0;
                        c += 1;
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::poly::{Poly, VarGen};
    use crate::numberfield::parse_field;

    #[test]
    fn evaluate_and_search() {
        let k = parse_field("Q").unwrap();
        let mut gen = VarGen::new();
        let x = gen.fresh();
        // exists x: x^2 - 4 = 0
        let f = Formula::exists(
            vec![x],
            Formula::atom_eq(Poly::var(x).mul(&Poly::var(x)).sub(&Poly::constant(4))),
        );
        let found = k
            .bounded_search(&f, &Assignment::new(), 4, 10_000)
            .unwrap()
            .unwrap();
        let v = found.get(&x).unwrap();
        assert!(*v == k.from_int(2) || *v == k.from_int(-2));
        // exists x: x^2 + 1 = 0 has no rational witness
        let g = Formula::exists(
            vec![x],
            Formula::atom_eq(Poly::var(x).mul(&Poly::var(x)).add(&Poly::constant(1))),
        );
        assert!(k.bounded_search(&g, &Assignment::new(), 6, 10_000).unwrap().is_none());
    }

    #[test]
    fn bounded_truth_three_values() {
        let k = parse_field("Q").unwrap();
        let mut gen = VarGen::new();
        let x = gen.fresh();
        let sq_plus_one = Poly::var(x).mul(&Poly::var(x)).add(&Poly::constant(1));
        // forall x: x^2 + 1 != 0 is conclusively unprovable by search -> Unknown
        let f = Formula::forall(vec![x], Formula::atom_neq(sq_plus_one.clone()));
        assert_eq!(
            k.bounded_truth(&f, &Assignment::new(), 3, 1000).unwrap(),
            BoundedTruth::Unknown
        );
        // forall x: x != 0 is refuted by x = 0
        let g = Formula::forall(vec![x], Formula::atom_neq(Poly::var(x)));
        assert_eq!(
            k.bounded_truth(&g, &Assignment::new(), 3, 1000).unwrap(),
            BoundedTruth::False
        );
        // exists x: x - 3 = 0 is certified
        let h = Formula::exists(
            vec![x],
            Formula::atom_eq(Poly::var(x).sub(&Poly::constant(3))),
        );
        assert_eq!(
            k.bounded_truth(&h, &Assignment::new(), 3, 1000).unwrap(),
            BoundedTruth::True
        );
    }
}
