//! The two quantifier-rewrite identities used by the assemblies: both turn a
//! disjunction involving quantifier blocks into a single prenex formula with
//! one atom, with exact degree accounting.

use super::ast::{Formula, Rel};
use super::poly::{Poly, Var, VarGen};
use crate::error::{Error, Result};
use crate::numberfield::NumberField;
use num_bigint::BigInt;

/// Decompose a formula into (universal prefix, matrix) when it has the exact
/// shape Forall(xs, Atom) or Atom.
fn as_forall_atom(f: &Formula) -> Option<(Vec<Var>, &Poly, Rel)> {
    match f {
        Formula::Forall(vs, inner) => match inner.as_ref() {
            Formula::Atom(p, rel) => Some((vs.clone(), p, *rel)),
            _ => None,
        },
        Formula::Atom(p, rel) => Some((vec![], p, *rel)),
        _ => None,
    }
}

fn as_exists_atom(f: &Formula) -> Option<(Vec<Var>, &Poly, Rel)> {
    match f {
        Formula::Exists(vs, inner) => match inner.as_ref() {
            Formula::Atom(p, rel) => Some((vs.clone(), p, *rel)),
            _ => None,
        },
        Formula::Atom(p, rel) => Some((vec![], p, *rel)),
        _ => None,
    }
}

fn as_exists_forall_atom(f: &Formula) -> Option<(Vec<Var>, Vec<Var>, &Poly, Rel)> {
    match f {
        Formula::Exists(xs, inner) => {
            let (ys, p, rel) = as_forall_atom(inner)?;
            Some((xs.clone(), ys, p, rel))
        }
        _ => {
            let (ys, p, rel) = as_forall_atom(f)?;
            Some((vec![], ys, p, rel))
        }
    }
}

impl NumberField {
    /// Rewrite "forall xs (P != 0) or exists zs (Q = 0)" into the prenex
    /// "forall xs exists y exists zs ((y P - 1) Q = 0)". The new atom has
    /// degree deg P + 1 + deg Q.
    pub fn rewrite_universal_or_exists(
        &self,
        f: &Formula,
        gen: &mut VarGen,
    ) -> Result<Formula> {
        let Formula::Or(parts) = f else {
            return Err(Error::PatternMismatch("expected a two-part disjunction".into()));
        };
        if parts.len() != 2 {
            return Err(Error::PatternMismatch("expected exactly two disjuncts".into()));
        }
        let Some((xs, p, Rel::NeqZero)) = as_forall_atom(&parts[0]) else {
            return Err(Error::PatternMismatch(
                "first disjunct must be a universal block over a nonvanishing atom".into(),
            ));
        };
        let Some((zs, q, Rel::EqZero)) = as_exists_atom(&parts[1]) else {
            return Err(Error::PatternMismatch(
                "second disjunct must be an existential block over an equation".into(),
            ));
        };
        let y = gen.fresh();
        let atom = Poly::var(y).mul(p).sub(&Poly::constant(1)).mul(q);
        let mut evars = vec![y];
        evars.extend(zs);
        Ok(Formula::forall(xs, Formula::exists(evars, Formula::atom_eq(atom))))
    }

    /// Rewrite "exists xs forall ys (p != 0) or exists zs (q = 0)" into
    /// "exists xs exists zs forall ys forall u
    ///      (p^2 - n_K (u q - 1)^2 != 0)"
    /// for a certified nonsquare integer n_K. The new atom has degree
    /// 2 max(deg p, 1 + deg q).
    pub fn rewrite_existsforall_or_exists(
        &self,
        f: &Formula,
        n_k: i64,
        gen: &mut VarGen,
    ) -> Result<Formula> {
        if self.is_global_square(&self.from_int(n_k)) {
            return Err(Error::ExpectedNonsquare(n_k.to_string()));
        }
        let Formula::Or(parts) = f else {
            return Err(Error::PatternMismatch("expected a two-part disjunction".into()));
        };
        if parts.len() != 2 {
            return Err(Error::PatternMismatch("expected exactly two disjuncts".into()));
        }
        let Some((xs, ys, p, Rel::NeqZero)) = as_exists_forall_atom(&parts[0]) else {
            return Err(Error::PatternMismatch(
                "first disjunct must be exists-forall over a nonvanishing atom".into(),
            ));
        };
        let Some((zs, q, Rel::EqZero)) = as_exists_atom(&parts[1]) else {
            return Err(Error::PatternMismatch(
                "second disjunct must be an existential block over an equation".into(),
            ));
        };
        let u = gen.fresh();
        let uq_minus_1 = Poly::var(u).mul(q).sub(&Poly::constant(1));
        let atom = p.mul(p).sub(&uq_minus_1.mul(&uq_minus_1).scale(&BigInt::from(n_k)));
        let mut evars = xs;
        evars.extend(zs);
        let mut avars = ys;
        avars.push(u);
        Ok(Formula::exists(evars, Formula::forall(avars, Formula::atom_neq(atom))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::ast::Quant;
    use crate::numberfield::parse_field;

    #[test]
    fn footnote_one_shape_and_degree() {
        let k = parse_field("Q").unwrap();
        let mut gen = VarGen::new();
        let x = gen.fresh();
        let z = gen.fresh();
        let f = Formula::or(vec![
            Formula::forall(vec![x], Formula::atom_neq(Poly::var(x))),
            Formula::exists(vec![z], Formula::atom_eq(Poly::var(z))),
        ]);
        let rewritten = k.rewrite_universal_or_exists(&f, &mut gen).unwrap();
        assert_eq!(rewritten.degree(), 3);
        assert_eq!(
            rewritten.quantifier_shape(),
            vec![(Quant::Forall, 1), (Quant::Exists, 2)]
        );
    }

    #[test]
    fn footnote_two_shape_and_degree() {
        let k = parse_field("Q").unwrap();
        let mut gen = VarGen::new();
        let x = gen.fresh();
        let y = gen.fresh();
        let z = gen.fresh();
        let f = Formula::or(vec![
            Formula::exists(
                vec![x],
                Formula::forall(vec![y], Formula::atom_neq(Poly::var(y))),
            ),
            Formula::exists(vec![z], Formula::atom_eq(Poly::var(z))),
        ]);
        let rewritten = k.rewrite_existsforall_or_exists(&f, 2, &mut gen).unwrap();
        // atom: y^2 - 2 (u z - 1)^2, degree 4
        assert_eq!(rewritten.degree(), 4);
        assert_eq!(
            rewritten.quantifier_shape(),
            vec![(Quant::Exists, 2), (Quant::Forall, 2)]
        );
    }

    #[test]
    fn nonsquare_is_checked() {
        let k = parse_field("Q").unwrap();
        let mut gen = VarGen::new();
        let z = gen.fresh();
        let x = gen.fresh();
        let y = gen.fresh();
        let f = Formula::or(vec![
            Formula::exists(
                vec![x],
                Formula::forall(vec![y], Formula::atom_neq(Poly::var(y))),
            ),
            Formula::exists(vec![z], Formula::atom_eq(Poly::var(z))),
        ]);
        assert!(matches!(
            k.rewrite_existsforall_or_exists(&f, 4, &mut gen),
            Err(Error::ExpectedNonsquare(_))
        ));
    }

    #[test]
    fn pattern_mismatch_detected() {
        let k = parse_field("Q").unwrap();
        let mut gen = VarGen::new();
        let f = Formula::atom_eq(Poly::constant(1));
        assert!(matches!(
            k.rewrite_universal_or_exists(&f, &mut gen),
            Err(Error::PatternMismatch(_))
        ));
    }
}
