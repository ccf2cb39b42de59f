//! End-to-end assembly of the two defining formulas, with exact quantifier
//! and degree accounting.
//!
//! Deep components enter as single-monomial stand-ins whose degrees are
//! computed by running the real combination arithmetic on the actual
//! sub-constructions (never typed in), and whose variable blocks are
//! materialized in full. The last steps (the conjunction into one polynomial
//! and the two quantifier rewrites) run on genuine polynomial arithmetic, so
//! the final atom's sparse degree is exact and the final quantifier shape is
//! read off the tree rather than asserted.

use super::ast::{Formula, Quant, Rel};
use super::combine::CombineMode;
use super::poly::{Param, Poly, Var, VarGen};
use super::templates::{
    arcplaces_block, imported_j4_block, imported_j_block, standin_poly, t_standin_block, ConjBlock,
};
use crate::error::{Error, Result};
use crate::numberfield::NumberField;

/// Claimed degree bound: either a constant or max(floor, slope*n + offset).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegreeBound {
    Constant(u64),
    MaxAffine { floor: u64, slope: u64, offset: u64 },
}

impl DegreeBound {
    pub fn eval(&self, n: u32) -> u64 {
        match self {
            DegreeBound::Constant(c) => *c,
            DegreeBound::MaxAffine { floor, slope, offset } => {
                (*floor).max(slope * n as u64 + offset)
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            DegreeBound::Constant(c) => c.to_string(),
            DegreeBound::MaxAffine { floor, slope, offset } => {
                format!("max({floor}, {slope}n+{offset})")
            }
        }
    }
}

/// Accounting for one assembly in one mode.
#[derive(Debug, Clone)]
pub struct ModeBudget {
    pub mode: CombineMode,
    pub shape_claimed: Vec<(Quant, usize)>,
    pub shape_computed: Vec<(Quant, usize)>,
    pub degree_claimed: DegreeBound,
    pub degree_computed: u64,
}

impl ModeBudget {
    pub fn shape_matches(&self) -> bool {
        self.shape_claimed == self.shape_computed
    }

    pub fn degree_matches(&self, n: u32) -> bool {
        self.degree_computed == self.degree_claimed.eval(n)
    }
}

/// Quantifier and degree budget of an assembled formula, with the
/// real-subfield variant tracked alongside when the field admits one.
#[derive(Debug, Clone)]
pub struct Budget {
    pub n: u32,
    pub general: ModeBudget,
    pub real_subfield: Option<ModeBudget>,
    pub notes: Vec<String>,
}

/// A universal-existential block with a single equation atom.
pub struct QBlock {
    pub foralls: Vec<Var>,
    pub exists: Vec<Var>,
    pub atom: Poly,
}

/// The squared-radical membership block for a subject: 556 variables and the
/// combined polynomial (degree 3 * 768 = 2304, or 2 * 128 = 256 real).
fn j2_block(
    field: &NumberField,
    subject: &Poly,
    params: (Var, Var, Var, Var),
    mode: CombineMode,
    gen: &mut VarGen,
) -> Result<(Vec<Var>, Poly)> {
    let y = gen.fresh();
    let z = gen.fresh();
    let jy = imported_j4_block(params, mode, gen);
    let jz = imported_j4_block(params, mode, gen);
    let product = subject.sub(&Poly::var(y).mul(&Poly::var(z)));
    let mut polys = vec![product];
    polys.extend(jy.polys.iter().cloned());
    polys.extend(jz.polys.iter().cloned());
    let combined = field.combine_conjunction(&polys, mode)?;
    let mut vars = vec![y, z];
    vars.extend(jy.vars);
    vars.extend(jz.vars);
    Ok((vars, combined.poly))
}

/// Inverses of nonzero squared-radical members: 557 variables, degree
/// 2 * 2304 = 4608 (512 real).
fn j2_inverse_block(
    field: &NumberField,
    subject: &Poly,
    params: (Var, Var, Var, Var),
    mode: CombineMode,
    gen: &mut VarGen,
) -> Result<(Vec<Var>, Poly)> {
    let yp = gen.fresh();
    let (inner_vars, inner_poly) = j2_block(field, &Poly::var(yp), params, mode, gen)?;
    let eq = subject.mul(&Poly::var(yp)).sub(&Poly::constant(1));
    let combined = field.combine_conjunction(&[eq, inner_poly], mode)?;
    let mut vars = vec![yp];
    vars.extend(inner_vars);
    Ok((vars, combined.poly))
}

/// Union (disjunction) of the two: 1113 variables, degree 2304 + 4608 = 6912
/// (768 real).
fn union_block(
    field: &NumberField,
    subject: &Poly,
    params: (Var, Var, Var, Var),
    mode: CombineMode,
    gen: &mut VarGen,
) -> Result<(Vec<Var>, Poly)> {
    let (v1, p1) = j2_block(field, subject, params, mode, gen)?;
    let (v2, p2) = j2_inverse_block(field, subject, params, mode, gen)?;
    let poly = field.combine_disjunction(&[p1, p2])?;
    let mut vars = v1;
    vars.extend(v2);
    Ok((vars, poly))
}

/// The disjointness block: 417 existential variables, combined degree
/// 4 * 384 = 1536 (128 real). Radical memberships j_first(x), j_second(y),
/// j_third(1 - x - y), plus invertibility of the product of all six
/// parameters.
fn disjointness_417_block(
    field: &NumberField,
    j_first: (Var, Var),
    j_second: (Var, Var),
    j_third: (Var, Var),
    all_params: &[Var; 6],
    mode: CombineMode,
    gen: &mut VarGen,
) -> Result<(Vec<Var>, Poly)> {
    let x = gen.fresh();
    let y = gen.fresh();
    let z = gen.fresh();
    let jx = imported_j_block(j_first.0, j_first.1, mode, gen);
    let jy = imported_j_block(j_second.0, j_second.1, mode, gen);
    let jz = imported_j_block(j_third.0, j_third.1, mode, gen);
    let mut product = Poly::var(z);
    for p in all_params {
        product = product.mul(&Poly::var(*p));
    }
    let mut polys = vec![product.sub(&Poly::constant(1))];
    polys.extend(jx.polys.iter().cloned());
    polys.extend(jy.polys.iter().cloned());
    polys.extend(jz.polys.iter().cloned());
    let combined = field.combine_conjunction(&polys, mode)?;
    let mut vars = vec![x, y, z];
    vars.extend(jx.vars);
    vars.extend(jy.vars);
    vars.extend(jz.vars);
    Ok((vars, combined.poly))
}

/// The full squarefree-membership block for a subject over parameter pair
/// (a, b): 1117 universal then 418 existential variables with one atom of
/// degree 1 + 6912 + 1542 = 8455 (903 real).
pub fn ksf_parts(
    field: &NumberField,
    subject: &Poly,
    a: Var,
    b: Var,
    mode: CombineMode,
    gen: &mut VarGen,
) -> Result<QBlock> {
    let ap = gen.fresh();
    let bp = gen.fresh();
    let c = gen.fresh();
    let d = gen.fresh();
    let inner_params = (ap, bp, c, d);
    let (union_vars, union_poly) = union_block(field, subject, inner_params, mode, gen)?;
    let (dis_vars, dis_poly) = disjointness_417_block(
        field,
        (a, b),
        (ap, bp),
        (c, d),
        &[a, b, c, d, ap, bp],
        mode,
        gen,
    )?;
    // allow the degenerate branch: product of the six parameters vanishes
    let mut param_product = Poly::constant(1);
    for v in [a, b, c, d, ap, bp] {
        param_product = param_product.mul(&Poly::var(v));
    }
    let q1542 = dis_poly.mul(&param_product);
    let or = Formula::or(vec![
        Formula::forall(union_vars.clone(), Formula::atom_neq(union_poly)),
        Formula::exists(dis_vars.clone(), Formula::atom_eq(q1542)),
    ]);
    let rewritten = field.rewrite_universal_or_exists(&or, gen)?;
    // read the blocks back off the rewritten prenex formula
    let Formula::Forall(uvars, inner) = rewritten else {
        return Err(Error::Internal("rewrite produced an unexpected shape".into()));
    };
    let Formula::Exists(evars, atom) = *inner else {
        return Err(Error::Internal("rewrite produced an unexpected shape".into()));
    };
    let Formula::Atom(poly, Rel::EqZero) = *atom else {
        return Err(Error::Internal("rewrite produced an unexpected atom".into()));
    };
    let mut foralls = vec![ap, bp, c, d];
    foralls.extend(uvars);
    Ok(QBlock { foralls, exists: evars, atom: poly })
}

/// The standalone squarefree template as a formula.
pub fn ksf_formula(a: Var, b: Var, mode: CombineMode, gen: &mut VarGen) -> Result<Formula> {
    let field = NumberField::rationals();
    let block = ksf_parts(&field, &Poly::var(Var::Subject), a, b, mode, gen)?;
    Ok(Formula::forall(
        block.foralls,
        Formula::exists(block.exists, Formula::atom_eq(block.atom)),
    ))
}

/// The place-disjointness-and-real-splitting block over the six parameter
/// slots: 429 existential variables, combined degree 3 * 1536 = 4608
/// (256 real).
pub fn sim_parts(
    field: &NumberField,
    mode: CombineMode,
    gen: &mut VarGen,
) -> Result<(Vec<Var>, Poly)> {
    let (a, b, c, d, ap, bp) = (
        Var::Param(Param::A),
        Var::Param(Param::B),
        Var::Param(Param::C),
        Var::Param(Param::D),
        Var::Param(Param::APrime),
        Var::Param(Param::BPrime),
    );
    let (dis_vars, dis_poly) = disjointness_417_block(
        field,
        (ap, bp),
        (a, b),
        (c, d),
        &[a, b, c, d, ap, bp],
        mode,
        gen,
    )?;
    // certificate: some c-tilde in T_(ap,bp) with c-tilde - 5 a sum of four
    // squares
    let ctilde = gen.fresh();
    let xs: [Var; 4] = [gen.fresh(), gen.fresh(), gen.fresh(), gen.fresh()];
    let tblock = t_standin_block(ap, bp, gen);
    let sq = |v: Var| Poly::var(v).mul(&Poly::var(v));
    let sumsq = sq(xs[0])
        .add(&sq(xs[1]))
        .add(&sq(xs[2]))
        .add(&sq(xs[3]))
        .sub(&Poly::var(ctilde))
        .add(&Poly::constant(5));
    let mut polys = vec![dis_poly];
    polys.extend(tblock.polys.iter().cloned());
    polys.push(sumsq);
    let combined = field.combine_conjunction(&polys, mode)?;
    let mut vars = dis_vars;
    vars.push(ctilde);
    vars.extend(xs);
    vars.extend(tblock.vars);
    Ok((vars, combined.poly))
}

pub fn sim_formula(mode: CombineMode, gen: &mut VarGen) -> Result<Formula> {
    let field = NumberField::rationals();
    let (vars, poly) = sim_parts(&field, mode, gen)?;
    Ok(Formula::exists(vars, Formula::atom_eq(poly)))
}

/// The power-decomposition matrix with opaque trace blocks: 32 variables,
/// combined degree 6 max(n+1, 8) (2 max(n+1, 8) real).
fn phi_parts_standin(
    field: &NumberField,
    subject: &Poly,
    a: Var,
    b: Var,
    n: u32,
    mode: CombineMode,
    gen: &mut VarGen,
) -> Result<(Vec<Var>, Poly)> {
    let y = gen.fresh();
    let z = gen.fresh();
    let tz = t_standin_block(a, b, gen);
    let ty = t_standin_block(a, b, gen);
    let s = gen.fresh();
    let t = gen.fresh();
    let ts = t_standin_block(a, b, gen);
    let tt = t_standin_block(a, b, gen);
    let bezout = Poly::var(s)
        .mul(&Poly::var(y))
        .add(&Poly::var(t).mul(&Poly::var(z)))
        .sub(&Poly::constant(1));
    let power = Poly::var(y).sub(&subject.mul(&Poly::var(z).pow(n)));
    let mut polys = vec![];
    polys.extend(tz.polys.iter().cloned());
    polys.extend(ty.polys.iter().cloned());
    polys.extend(ts.polys.iter().cloned());
    polys.extend(tt.polys.iter().cloned());
    polys.push(bezout);
    polys.push(power);
    let combined = field.combine_conjunction(&polys, mode)?;
    let mut vars = vec![y, z];
    vars.extend(tz.vars);
    vars.extend(ty.vars);
    vars.push(s);
    vars.push(t);
    vars.extend(ts.vars);
    vars.extend(tt.vars);
    Ok((vars, combined.poly))
}

fn assemble_main_mode(
    field: &NumberField,
    n: u32,
    mode: CombineMode,
) -> Result<(Formula, ModeBudget, Vec<String>)> {
    let mut gen = VarGen::new();
    let mut notes = Vec::new();
    let ap = Var::Param(Param::APrime);
    let bp = Var::Param(Param::BPrime);

    // deep blocks, then compact stand-ins carrying their computed degrees
    let (sim_vars, sim_poly_full) = sim_parts(field, mode, &mut gen)?;
    let sim_deg = sim_poly_full.total_degree();
    let sim_poly = standin_poly(sim_deg, &[], sim_vars[0]);
    notes.push(format!("disjointness+splitting block: {} vars, degree {}", sim_vars.len(), sim_deg));

    let q_block = ksf_parts(field, &Poly::var(ap), ap, bp, mode, &mut gen)?;
    let q_deg = q_block.atom.total_degree();
    let q_poly = standin_poly(q_deg, &[], q_block.exists[0]);
    let z_block = ksf_parts(field, &Poly::var(bp), ap, bp, mode, &mut gen)?;
    let z_deg = z_block.atom.total_degree();
    let z_poly = standin_poly(z_deg, &[], z_block.exists[0]);
    notes.push(format!(
        "squarefree blocks: forall {} exists {}, degree {}",
        q_block.foralls.len(),
        q_block.exists.len(),
        q_deg
    ));

    let (r_vars, r_poly_full) = phi_parts_standin(field, &Poly::var(Var::Subject), ap, bp, n, mode, &mut gen)?;
    let r_deg = r_poly_full.total_degree();
    let r_poly = standin_poly(r_deg, &[], r_vars[0]);
    notes.push(format!("power block: {} vars, degree {}", r_vars.len(), r_deg));

    // W: the three-way conjunction into one polynomial
    let w = field
        .combine_conjunction(&[sim_poly, q_poly, z_poly], mode)?
        .poly;
    notes.push(format!("combined matrix degree {}", w.total_degree()));

    // exists (ksf universals) forall (sim vars + ksf existentials) W != 0,
    // or exists (power vars) R = 0
    let mut exists_side = q_block.foralls.clone();
    exists_side.extend(z_block.foralls.iter().copied());
    let mut forall_side = sim_vars.clone();
    forall_side.extend(q_block.exists.iter().copied());
    forall_side.extend(z_block.exists.iter().copied());
    let or = Formula::or(vec![
        Formula::exists(
            exists_side,
            Formula::forall(forall_side, Formula::atom_neq(w)),
        ),
        Formula::exists(r_vars.clone(), Formula::atom_eq(r_poly)),
    ]);
    let nk = field.find_nonsquare_integer();
    notes.push(format!("nonsquare integer n_K = {nk}"));
    let rewritten = field.rewrite_existsforall_or_exists(&or, nk, &mut gen)?;
    let formula = Formula::forall(vec![ap, bp], rewritten);

    let degree_claimed = match mode {
        CombineMode::General => DegreeBound::MaxAffine { floor: 50730, slope: 12, offset: 14 },
        CombineMode::Real => DegreeBound::MaxAffine { floor: 3612, slope: 4, offset: 6 },
    };
    let budget = ModeBudget {
        mode,
        shape_claimed: vec![
            (Quant::Forall, 2),
            (Quant::Exists, 2266),
            (Quant::Forall, 1266),
        ],
        shape_computed: formula.quantifier_shape(),
        degree_claimed,
        degree_computed: formula.degree(),
    };
    Ok((formula, budget, notes))
}

/// The uniform defining formula for the parameterized valuation sets, with
/// its quantifier/degree budget. Returns the general-mode formula; the
/// real-subfield accounting is carried in the budget when the field embeds
/// in the reals.
pub fn assemble_main(field: &NumberField, n: u32) -> Result<(Formula, Budget)> {
    if n == 0 {
        return Err(Error::MalformedQuery("weight must be >= 1".into()));
    }
    let (formula, general, mut notes) = assemble_main_mode(field, n, CombineMode::General)?;
    let real_subfield = if field.has_real_embedding() {
        let (_, rb, _) = assemble_main_mode(field, n, CombineMode::Real)?;
        Some(rb)
    } else {
        notes.push("no real embedding: real-subfield variant omitted".into());
        None
    };
    Ok((formula, Budget { n, general, real_subfield, notes }))
}

fn assemble_empty_mode(
    field: &NumberField,
    n: u32,
    mode: CombineMode,
) -> Result<(Formula, ModeBudget, Vec<String>)> {
    let mut gen = VarGen::new();
    let mut notes = Vec::new();
    let a = Var::Param(Param::A);
    let b = Var::Param(Param::B);

    // the archimedean-splitting certificate, combined for real: its 13
    // variables and exact degree (24 general / 16 real) come from the
    // explicit blocks
    let arc = arcplaces_block(&Poly::var(a), &Poly::var(b), &mut gen);
    let t_single = field.combine_conjunction(&arc.polys[1..=2], mode)?.poly;
    let arc_combined = field
        .combine_conjunction(&[arc.polys[0].clone(), t_single, arc.polys[3].clone()], mode)?
        .poly;
    let p24_deg = arc_combined.total_degree();
    let p24 = standin_poly(p24_deg, &[], arc.vars[0]);
    notes.push(format!("splitting certificate: {} vars, degree {p24_deg}", arc.vars.len()));

    let (r_vars, r_poly_full) =
        phi_parts_standin(field, &Poly::var(Var::Subject), a, b, n, mode, &mut gen)?;
    let r_deg = r_poly_full.total_degree();
    let r_poly = standin_poly(r_deg, &[], r_vars[0]);
    notes.push(format!("power block: {} vars, degree {r_deg}", r_vars.len()));

    let or = Formula::or(vec![
        Formula::forall(arc.vars.clone(), Formula::atom_neq(p24)),
        Formula::exists(r_vars, Formula::atom_eq(r_poly)),
    ]);
    let rewritten = field.rewrite_universal_or_exists(&or, &mut gen)?;
    let formula = Formula::forall(vec![a, b], rewritten);

    let degree_claimed = match mode {
        CombineMode::General => DegreeBound::MaxAffine { floor: 73, slope: 6, offset: 31 },
        CombineMode::Real => DegreeBound::MaxAffine { floor: 33, slope: 2, offset: 19 },
    };
    let budget = ModeBudget {
        mode,
        shape_claimed: vec![(Quant::Forall, 15), (Quant::Exists, 33)],
        shape_computed: formula.quantifier_shape(),
        degree_claimed,
        degree_computed: formula.degree(),
    };
    Ok((formula, budget, notes))
}

/// The simpler defining formula for the no-extra-places case.
pub fn assemble_empty(field: &NumberField, n: u32) -> Result<(Formula, Budget)> {
    if n == 0 {
        return Err(Error::MalformedQuery("weight must be >= 1".into()));
    }
    let (formula, general, mut notes) = assemble_empty_mode(field, n, CombineMode::General)?;
    let real_subfield = if field.has_real_embedding() {
        let (_, rb, _) = assemble_empty_mode(field, n, CombineMode::Real)?;
        Some(rb)
    } else {
        notes.push("no real embedding: real-subfield variant omitted".into());
        None
    };
    Ok((formula, Budget { n, general, real_subfield, notes }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_assembly_shape_and_degree() {
        let field = NumberField::rationals();
        for n in [1u32, 2, 10, 100] {
            let (formula, budget) = assemble_empty(&field, n).unwrap();
            assert_eq!(
                formula.quantifier_shape(),
                vec![(Quant::Forall, 15), (Quant::Exists, 33)],
                "n={n}"
            );
            assert!(budget.general.shape_matches());
            assert!(budget.general.degree_matches(n), "n={n}: computed {} claimed {}",
                budget.general.degree_computed, budget.general.degree_claimed.eval(n));
            let rb = budget.real_subfield.unwrap();
            assert!(rb.shape_matches());
            assert!(rb.degree_matches(n));
        }
        // small-n constant arm: degree bound 73
        let (_, b1) = assemble_empty(&field, 1).unwrap();
        assert_eq!(b1.general.degree_computed, 73);
        assert_eq!(b1.real_subfield.unwrap().degree_computed, 33);
    }

    #[test]
    fn main_assembly_shape_and_degree() {
        let field = NumberField::rationals();
        for n in [1u32, 2, 10] {
            let (formula, budget) = assemble_main(&field, n).unwrap();
            assert_eq!(
                formula.quantifier_shape(),
                vec![
                    (Quant::Forall, 2),
                    (Quant::Exists, 2266),
                    (Quant::Forall, 1266)
                ],
                "n={n}"
            );
            assert!(budget.general.shape_matches());
            assert_eq!(budget.general.degree_computed, budget.general.degree_claimed.eval(n));
            let rb = budget.real_subfield.unwrap();
            assert!(rb.shape_matches());
            assert_eq!(rb.degree_computed, rb.degree_claimed.eval(n));
        }
    }

    #[test]
    fn ksf_block_counts() {
        let field = NumberField::rationals();
        let mut gen = VarGen::new();
        let block = ksf_parts(
            &field,
            &Poly::var(Var::Subject),
            Var::Param(Param::A),
            Var::Param(Param::B),
            CombineMode::General,
            &mut gen,
        )
        .unwrap();
        assert_eq!(block.foralls.len(), 1117);
        assert_eq!(block.exists.len(), 418);
        assert_eq!(block.atom.total_degree(), 8455);
    }

    #[test]
    fn sim_block_counts() {
        let field = NumberField::rationals();
        let mut gen = VarGen::new();
        let (vars, poly) = sim_parts(&field, CombineMode::General, &mut gen).unwrap();
        assert_eq!(vars.len(), 429);
        assert_eq!(poly.total_degree(), 4608);
        let mut gen2 = VarGen::new();
        let (_, rpoly) = sim_parts(&field, CombineMode::Real, &mut gen2).unwrap();
        assert_eq!(rpoly.total_degree(), 256);
    }
}
