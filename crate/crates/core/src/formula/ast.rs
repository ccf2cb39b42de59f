//! First-order formula trees over sparse integer polynomials, prenex
//! normalization, quantifier-shape accounting, and the text/JSON export
//! formats.

use super::poly::{Poly, Var};
use crate::error::{Error, Result};
use num_traits::Zero;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rel {
    EqZero,
    NeqZero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quant {
    Forall,
    Exists,
}

impl Quant {
    fn flip(self) -> Quant {
        match self {
            Quant::Forall => Quant::Exists,
            Quant::Exists => Quant::Forall,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    Atom(Poly, Rel),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Not(Box<Formula>),
    Exists(Vec<Var>, Box<Formula>),
    Forall(Vec<Var>, Box<Formula>),
}

impl Formula {
    pub fn atom_eq(p: Poly) -> Formula {
        Formula::Atom(p, Rel::EqZero)
    }

    pub fn atom_neq(p: Poly) -> Formula {
        Formula::Atom(p, Rel::NeqZero)
    }

    pub fn exists(vars: Vec<Var>, body: Formula) -> Formula {
        if vars.is_empty() {
            body
        } else {
            Formula::Exists(vars, Box::new(body))
        }
    }

    pub fn forall(vars: Vec<Var>, body: Formula) -> Formula {
        if vars.is_empty() {
            body
        } else {
            Formula::Forall(vars, Box::new(body))
        }
    }

    pub fn and(parts: Vec<Formula>) -> Formula {
        match parts.len() {
            1 => parts.into_iter().next().unwrap(),
            _ => Formula::And(parts),
        }
    }

    pub fn or(parts: Vec<Formula>) -> Formula {
        match parts.len() {
            1 => parts.into_iter().next().unwrap(),
            _ => Formula::Or(parts),
        }
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::Atom(_, _) => true,
            Formula::And(fs) | Formula::Or(fs) => fs.iter().all(|f| f.is_quantifier_free()),
            Formula::Not(f) => f.is_quantifier_free(),
            Formula::Exists(_, _) | Formula::Forall(_, _) => false,
        }
    }

    /// Maximum total degree over all atoms.
    pub fn degree(&self) -> u64 {
        match self {
            Formula::Atom(p, _) => p.total_degree(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().map(|f| f.degree()).max().unwrap_or(0),
            Formula::Not(f) => f.degree(),
            Formula::Exists(_, f) | Formula::Forall(_, f) => f.degree(),
        }
    }

    /// All bound variables, in binder order.
    pub fn bound_vars(&self) -> Vec<Var> {
        let mut out = Vec::new();
        self.collect_bound(&mut out);
        out
    }

    fn collect_bound(&self, out: &mut Vec<Var>) {
        match self {
            Formula::Atom(_, _) => {}
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.collect_bound(out)),
            Formula::Not(f) => f.collect_bound(out),
            Formula::Exists(vs, f) | Formula::Forall(vs, f) => {
                out.extend(vs.iter().copied());
                f.collect_bound(out);
            }
        }
    }

    /// Prenex normal form: quantifiers pulled outward in left-to-right
    /// source order, negations pushed to the atoms. Bound variables are
    /// globally distinct by construction (one VarGen per build), so no
    /// renaming is needed; this is asserted.
    pub fn prenex(&self) -> Formula {
        let bound = self.bound_vars();
        let mut sorted = bound.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), bound.len(), "bound variables must be distinct");
        let (prefix, matrix) = self.pull(false);
        let mut out = matrix;
        for (q, vars) in prefix.into_iter().rev() {
            out = match q {
                Quant::Exists => Formula::exists(vars, out),
                Quant::Forall => Formula::forall(vars, out),
            };
        }
        out
    }

    fn pull(&self, negate: bool) -> (Vec<(Quant, Vec<Var>)>, Formula) {
        match self {
            Formula::Atom(p, rel) => {
                let rel = if negate {
                    match rel {
                        Rel::EqZero => Rel::NeqZero,
                        Rel::NeqZero => Rel::EqZero,
                    }
                } else {
                    *rel
                };
                (vec![], Formula::Atom(p.clone(), rel))
            }
            Formula::Not(f) => f.pull(!negate),
            Formula::And(fs) | Formula::Or(fs) => {
                let is_and = matches!(self, Formula::And(_)) != negate;
                let mut prefix = Vec::new();
                let mut parts = Vec::new();
                for f in fs {
                    let (p, m) = f.pull(negate);
                    prefix.extend(p);
                    parts.push(m);
                }
                let matrix = if is_and { Formula::and(parts) } else { Formula::or(parts) };
                (prefix, matrix)
            }
            Formula::Exists(vs, f) | Formula::Forall(vs, f) => {
                let mut q = if matches!(self, Formula::Exists(_, _)) {
                    Quant::Exists
                } else {
                    Quant::Forall
                };
                if negate {
                    q = q.flip();
                }
                let (mut prefix, matrix) = f.pull(negate);
                prefix.insert(0, (q, vs.clone()));
                (prefix, matrix)
            }
        }
    }

    /// Quantifier shape of the prenex form: alternating (quantifier, count)
    /// blocks with adjacent same-kind blocks merged.
    pub fn quantifier_shape(&self) -> Vec<(Quant, usize)> {
        let prenexed = self.prenex();
        let mut out: Vec<(Quant, usize)> = Vec::new();
        let mut cur = &prenexed;
        loop {
            match cur {
                Formula::Exists(vs, f) => {
                    push_shape(&mut out, Quant::Exists, vs.len());
                    cur = f;
                }
                Formula::Forall(vs, f) => {
                    push_shape(&mut out, Quant::Forall, vs.len());
                    cur = f;
                }
                _ => break,
            }
        }
        out
    }

    // ---- export ----

    pub fn to_sexp(&self) -> String {
        match self {
            Formula::Atom(p, rel) => {
                let op = match rel {
                    Rel::EqZero => "eq",
                    Rel::NeqZero => "neq",
                };
                format!("({op} {} 0)", poly_sexp(p))
            }
            Formula::And(fs) => sexp_list("and", fs),
            Formula::Or(fs) => sexp_list("or", fs),
            Formula::Not(f) => format!("(not {})", f.to_sexp()),
            Formula::Exists(vs, f) => {
                format!("(exists ({}) {})", var_list(vs), f.to_sexp())
            }
            Formula::Forall(vs, f) => {
                format!("(forall ({}) {})", var_list(vs), f.to_sexp())
            }
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        use serde_json::json;
        match self {
            Formula::Atom(p, rel) => json!({
                "type": "atom",
                "rel": match rel { Rel::EqZero => "eq0", Rel::NeqZero => "neq0" },
                "poly": poly_json(p),
            }),
            Formula::And(fs) => json!({
                "type": "and",
                "parts": fs.iter().map(|f| f.to_json()).collect::<Vec<_>>(),
            }),
            Formula::Or(fs) => json!({
                "type": "or",
                "parts": fs.iter().map(|f| f.to_json()).collect::<Vec<_>>(),
            }),
            Formula::Not(f) => json!({"type": "not", "body": f.to_json()}),
            Formula::Exists(vs, f) => json!({
                "type": "exists",
                "vars": vs.iter().map(|v| v.name()).collect::<Vec<_>>(),
                "body": f.to_json(),
            }),
            Formula::Forall(vs, f) => json!({
                "type": "forall",
                "vars": vs.iter().map(|v| v.name()).collect::<Vec<_>>(),
                "body": f.to_json(),
            }),
        }
    }
}

fn push_shape(out: &mut Vec<(Quant, usize)>, q: Quant, n: usize) {
    if n == 0 {
        return;
    }
    if let Some(last) = out.last_mut() {
        if last.0 == q {
            last.1 += n;
            return;
        }
    }
    out.push((q, n));
}

fn sexp_list(op: &str, fs: &[Formula]) -> String {
    let inner: Vec<String> = fs.iter().map(|f| f.to_sexp()).collect();
    format!("({op} {})", inner.join(" "))
}

fn var_list(vs: &[Var]) -> String {
    vs.iter().map(|v| v.name()).collect::<Vec<_>>().join(" ")
}

pub fn poly_sexp(p: &Poly) -> String {
    if p.is_zero() {
        return "(poly ())".to_string();
    }
    let terms: Vec<String> = p
        .terms
        .iter()
        .map(|(m, c)| {
            let vars: Vec<String> = m
                .0
                .iter()
                .map(|(v, e)| format!("({} {e})", v.name()))
                .collect();
            format!("({c} ({}))", vars.join(" "))
        })
        .collect();
    format!("(poly ({}))", terms.join(" "))
}

pub fn poly_json(p: &Poly) -> serde_json::Value {
    use serde_json::json;
    let terms: Vec<serde_json::Value> = p
        .terms
        .iter()
        .map(|(m, c)| {
            json!({
                "coeff": c.to_string(),
                "monomial": m.0.iter().map(|(v, e)| json!([v.name(), e])).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!(terms)
}

/// Parse a prenex shape specification like "A2 E2266 A1266" used by tests.
pub fn shape_to_string(shape: &[(Quant, usize)]) -> String {
    shape
        .iter()
        .map(|(q, n)| {
            let c = match q {
                Quant::Forall => 'A',
                Quant::Exists => 'E',
            };
            format!("{c}{n}")
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Zero polynomial guard used by callers that need nonzero atoms.
pub fn require_nonzero_poly(p: &Poly) -> Result<()> {
    if p.terms.values().all(|c| c.is_zero()) {
        return Err(Error::MalformedQuery("zero polynomial atom".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::poly::{Param, VarGen};

    #[test]
    fn prenex_and_shape() {
        let mut gen = VarGen::new();
        let x = gen.fresh();
        let y = gen.fresh();
        let z = gen.fresh();
        // forall x (exists y (P(x,y) = 0)) and exists z (Q(z) != 0)
        let p = Poly::var(x).add(&Poly::var(y));
        let q = Poly::var(z).sub(&Poly::constant(1));
        let f = Formula::and(vec![
            Formula::forall(vec![x], Formula::exists(vec![y], Formula::atom_eq(p))),
            Formula::exists(vec![z], Formula::atom_neq(q)),
        ]);
        let shape = f.quantifier_shape();
        assert_eq!(shape, vec![(Quant::Forall, 1), (Quant::Exists, 2)]);
    }

    #[test]
    fn negation_flips() {
        let mut gen = VarGen::new();
        let x = gen.fresh();
        let f = Formula::Not(Box::new(Formula::forall(
            vec![x],
            Formula::atom_neq(Poly::var(x)),
        )));
        let p = f.prenex();
        match p {
            Formula::Exists(vs, body) => {
                assert_eq!(vs, vec![x]);
                assert_eq!(*body, Formula::atom_eq(Poly::var(x)));
            }
            other => panic!("expected exists, got {other:?}"),
        }
    }

    #[test]
    fn sexp_round() {
        let p = Poly::var(Var::Param(Param::A)).mul(&Poly::var(Var::Subject));
        let f = Formula::exists(vec![Var::Bound(0)], Formula::atom_eq(p));
        let s = f.to_sexp();
        assert!(s.starts_with("(exists (v0)"));
        assert!(s.contains("(poly ((1 ((a 1) (r 1))))"));
    }
}
