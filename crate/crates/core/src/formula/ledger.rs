//! The complexity-accounting ledger: every quantifier-count and degree chain
//! reproduced as exact integer arithmetic, computed from the actual
//! constructions wherever one exists, with imported constants flagged and
//! the known internal discrepancy reported as an expected mismatch.

use super::assemble::{ksf_parts, sim_parts};
use super::combine::CombineMode;
use super::poly::{Param, Poly, Var, VarGen};
use super::templates::{
    arcplaces_block, gcd_block, ic_block, j42_own_block, j4_own_block, j_own_block, phi_block,
    t_block, tstar_block, IMPORTED_J4_DEGREE, IMPORTED_J4_DEGREE_REAL, IMPORTED_J4_QUANTIFIERS,
    IMPORTED_J_DEGREE, IMPORTED_J_DEGREE_REAL, IMPORTED_J_QUANTIFIERS, IMPORTED_T_DEGREE,
    IMPORTED_T_QUANTIFIERS,
};
use crate::error::Result;
use crate::numberfield::NumberField;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct LedgerRow {
    pub name: String,
    pub claimed: String,
    pub computed: String,
    pub matches: bool,
    pub imported: bool,
    /// true for rows where the source states two inconsistent values; the
    /// mismatch is expected and reported, not an error
    pub expected_mismatch: bool,
    pub note: String,
}

fn row(name: &str, claimed: impl ToString, computed: impl ToString, note: &str) -> LedgerRow {
    let claimed = claimed.to_string();
    let computed = computed.to_string();
    LedgerRow {
        matches: claimed == computed,
        name: name.to_string(),
        claimed,
        computed,
        imported: false,
        expected_mismatch: false,
        note: note.to_string(),
    }
}

fn imported_row(name: &str, value: impl ToString, note: &str) -> LedgerRow {
    let v = value.to_string();
    LedgerRow {
        name: name.to_string(),
        claimed: v.clone(),
        computed: v,
        matches: true,
        imported: true,
        expected_mismatch: false,
        note: note.to_string(),
    }
}

fn flagged_row(name: &str, stated: impl ToString, derived: impl ToString, note: &str) -> LedgerRow {
    LedgerRow {
        name: name.to_string(),
        claimed: stated.to_string(),
        computed: derived.to_string(),
        matches: false,
        imported: false,
        expected_mismatch: true,
        note: note.to_string(),
    }
}

/// Recompute every arithmetic chain of the accounting against the actual
/// constructions over the given field.
pub fn budget_ledger(field: &NumberField) -> Result<Vec<LedgerRow>> {
    let mut rows = Vec::new();
    let a = Var::Param(Param::A);
    let b = Var::Param(Param::B);
    let pa = Poly::var(a);
    let pb = Poly::var(b);
    let subject = Poly::var(Var::Subject);

    // imported constants
    rows.push(imported_row(
        "J quantifiers (imported)",
        IMPORTED_J_QUANTIFIERS,
        "pinned from prior work",
    ));
    rows.push(imported_row("J degree (imported)", IMPORTED_J_DEGREE, "pinned from prior work"));
    rows.push(imported_row(
        "J degree, real (imported)",
        IMPORTED_J_DEGREE_REAL,
        "pinned from prior work",
    ));
    rows.push(imported_row("J4 quantifiers (imported)", IMPORTED_J4_QUANTIFIERS, ""));
    rows.push(imported_row("J4 degree (imported)", IMPORTED_J4_DEGREE, ""));
    rows.push(imported_row("J4 degree, real (imported)", IMPORTED_J4_DEGREE_REAL, ""));

    // trace block: the explicit construction must reproduce the imported
    // 7-quantifier/degree-8 budget
    {
        let mut gen = VarGen::new();
        let block = t_block(&subject, &pa, &pb, &mut gen);
        rows.push(row("T quantifiers", IMPORTED_T_QUANTIFIERS, block.vars.len(), "trace-variable elimination"));
        let combined = field.combine_conjunction(&block.polys, CombineMode::General)?;
        rows.push(row("T degree", IMPORTED_T_DEGREE, combined.poly.total_degree(), "two degree-4 atoms combined"));
        let real = field.combine_conjunction(&block.polys, CombineMode::Real)?;
        rows.push(row("T degree, real", IMPORTED_T_DEGREE, real.poly.total_degree(), ""));
    }

    // own reconstruction of the radical sets, reported beside the imports
    {
        let mut gen = VarGen::new();
        rows.push(row(
            "T-star quantifiers (reconstruction)",
            15,
            tstar_block(&subject, &pa, &pb, &mut gen).vars.len(),
            "",
        ));
        let mut gen = VarGen::new();
        rows.push(row(
            "I^c quantifiers (reconstruction)",
            34,
            ic_block(&subject, &Poly::var(Var::Param(Param::C)), &pa, &pb, &mut gen).vars.len(),
            "",
        ));
        let mut gen = VarGen::new();
        let jown = j_own_block(&subject, &pa, &pb, &mut gen);
        rows.push(row(
            "J quantifiers (reconstruction)",
            IMPORTED_J_QUANTIFIERS,
            jown.vars.len(),
            "1 + 2*34 + 1 + 2*34: matches the imported count",
        ));
        let jdeg = field.combine_conjunction(&jown.polys, CombineMode::General)?;
        rows.push(LedgerRow {
            name: "J degree (reconstruction)".into(),
            claimed: IMPORTED_J_DEGREE.to_string(),
            computed: jdeg.poly.total_degree().to_string(),
            matches: u64::from(IMPORTED_J_DEGREE) == jdeg.poly.total_degree(),
            imported: false,
            expected_mismatch: true,
            note: "our flat combination gives a smaller bound than the imported chain".into(),
        });
        let mut gen = VarGen::new();
        let j4own = j4_own_block(
            &subject,
            &pa,
            &pb,
            &Poly::var(Var::Param(Param::C)),
            &Poly::var(Var::Param(Param::D)),
            &mut gen,
        );
        rows.push(row(
            "J4 quantifiers (reconstruction)",
            IMPORTED_J4_QUANTIFIERS,
            j4own.vars.len(),
            "1 + 2*138",
        ));
        let mut gen = VarGen::new();
        let j42own = j42_own_block(
            &subject,
            &pa,
            &pb,
            &Poly::var(Var::Param(Param::C)),
            &Poly::var(Var::Param(Param::D)),
            &mut gen,
        );
        rows.push(row("J42 quantifiers (reconstruction)", 556, j42own.vars.len(), "2 + 2*277"));
    }

    // quantifier chains, computed from the explicit blocks
    {
        let mut gen = VarGen::new();
        let y = gen.fresh();
        let z = gen.fresh();
        rows.push(row(
            "gcd block quantifiers",
            16,
            gcd_block(y, z, &pa, &pb, &mut gen).vars.len(),
            "2 + 7 + 7",
        ));
        let mut gen = VarGen::new();
        rows.push(row(
            "power formula quantifiers",
            32,
            phi_block(&subject, &pa, &pb, 3, &mut gen).vars.len(),
            "2 + 7 + 7 + 2 + 7 + 7",
        ));
        let mut gen = VarGen::new();
        rows.push(row(
            "splitting certificate quantifiers",
            13,
            arcplaces_block(&pa, &pb, &mut gen).vars.len(),
            "1 + 1 + 4 + 7",
        ));
    }

    // degree chains through the squarefree block (general and real)
    for (mode, tag, degrees) in [
        (CombineMode::General, "", [1536u64, 1542, 2304, 4608, 6912, 8455]),
        (CombineMode::Real, ", real", [128, 134, 256, 512, 768, 903]),
    ] {
        if mode == CombineMode::Real && !field.has_real_embedding() {
            continue;
        }
        let mut gen = VarGen::new();
        let block = ksf_parts(field, &subject, a, b, mode, &mut gen)?;
        // recover the interior chain from scratch for the ledger
        let probe = KsfProbe::collect(field, mode)?;
        rows.push(row(
            &format!("disjointness degree{tag} (4 x J)"),
            degrees[0],
            probe.dis417,
            "",
        ));
        rows.push(row(
            &format!("disjointness-or-degenerate degree{tag} (+6)"),
            degrees[1],
            probe.dis1542,
            "",
        ));
        rows.push(row(&format!("squared-radical degree{tag} (3 x J4)"), degrees[2], probe.j2, ""));
        rows.push(row(&format!("inverse-block degree{tag} (x2)"), degrees[3], probe.inv, ""));
        rows.push(row(&format!("union degree{tag} (sum)"), degrees[4], probe.union, ""));
        rows.push(row(
            &format!("squarefree degree{tag} (1 + union + disjunct)"),
            degrees[5],
            block.atom.total_degree(),
            "",
        ));
        rows.push(row(
            &format!("squarefree universals{tag}"),
            1117,
            block.foralls.len(),
            "4 + 1113",
        ));
        rows.push(row(
            &format!("squarefree existentials{tag}"),
            418,
            block.exists.len(),
            "1 + 417",
        ));
        let mut gen = VarGen::new();
        let (sim_vars, sim_poly) = sim_parts(field, mode, &mut gen)?;
        let claimed_sim = if mode == CombineMode::General { 4608 } else { 256 };
        rows.push(row(&format!("six-tuple block degree{tag} (3 x 1536)"), claimed_sim, sim_poly.total_degree(), ""));
        rows.push(row(&format!("six-tuple block quantifiers{tag}"), 429, sim_vars.len(), "417 + 5 + 7"));
    }

    // quantifier-count identities of the assemblies
    rows.push(row("main existential count", 2266, 1117 + 1117 + 32, "1117 + 1117 + 32"));
    rows.push(row("main universal count", 1266, 429 + 418 + 418 + 1, "429 + 418 + 418 + 1"));
    rows.push(row("empty-case universal count", 15, 2 + 13, "2 + 13"));
    rows.push(row("empty-case existential count", 33, 32 + 1, "32 + 1"));

    // degree chains of the final assemblies (n-free arms)
    rows.push(row("combined matrix degree (3 x 8455)", 25365, 3 * 8455, ""));
    rows.push(row("final degree floor (2 x 25365)", 50730, 2 * 25365, ""));
    if field.has_real_embedding() {
        rows.push(row("combined matrix degree, real (2 x 903)", 1806, 2 * 903, ""));
        rows.push(row("final degree floor, real (2 x 1806)", 3612, 2 * 1806, ""));
    }
    rows.push(row("empty-case degree floor (1 + 24 + 48)", 73, 1 + 24 + 6 * 8, ""));
    if field.has_real_embedding() {
        rows.push(row("empty-case degree floor, real (1 + 16 + 16)", 33, 1 + 16 + 2 * 8, ""));
    }

    // the statement-versus-proof discrepancy in the simpler case: stated with
    // 22 universals and degree max(6n+55, 97), proved with 15 universals and
    // degree max(6n+31, 73) (real: max(2n+35, 49) versus max(2n+19, 33))
    rows.push(flagged_row(
        "empty-case universal count, stated elsewhere",
        22,
        15,
        "known internal discrepancy; the proof gives 15",
    ));
    rows.push(flagged_row(
        "empty-case degree bound, stated elsewhere",
        "max(6n+55, 97)",
        "max(6n+31, 73)",
        "known internal discrepancy; the proof gives the smaller bound",
    ));
    rows.push(flagged_row(
        "empty-case degree bound (real), stated elsewhere",
        "max(2n+35, 49)",
        "max(2n+19, 33)",
        "known internal discrepancy; the proof gives the smaller bound",
    ));

    // quantifier-compressed variant: recorded for documentation only
    rows.push(imported_row(
        "compressed-variant existential count (documentation)",
        1758,
        "alternative construction without degree control; not assembled here",
    ));
    rows.push(imported_row(
        "compressed-variant universal count (documentation)",
        979,
        "alternative construction without degree control; not assembled here",
    ));

    Ok(rows)
}

struct KsfProbe {
    dis417: u64,
    dis1542: u64,
    j2: u64,
    inv: u64,
    union: u64,
}

impl KsfProbe {
    /// Rebuild the interior polynomials of the squarefree chain and read
    /// their exact degrees.
    fn collect(field: &NumberField, mode: CombineMode) -> Result<KsfProbe> {
        use super::templates::{imported_j4_block, imported_j_block};
        let mut gen = VarGen::new();
        let a = Var::Param(Param::A);
        let b = Var::Param(Param::B);
        let ap = gen.fresh();
        let bp = gen.fresh();
        let c = gen.fresh();
        let d = gen.fresh();
        let subject = Poly::var(Var::Subject);

        // disjointness
        let z = gen.fresh();
        let jx = imported_j_block(a, b, mode, &mut gen);
        let jy = imported_j_block(ap, bp, mode, &mut gen);
        let jz = imported_j_block(c, d, mode, &mut gen);
        let mut product = Poly::var(z);
        for v in [a, b, c, d, ap, bp] {
            product = product.mul(&Poly::var(v));
        }
        let mut polys = vec![product.sub(&Poly::constant(1))];
        polys.extend(jx.polys);
        polys.extend(jy.polys);
        polys.extend(jz.polys);
        let dis417 = field.combine_conjunction(&polys, mode)?.poly;
        let mut param_product = Poly::constant(1);
        for v in [a, b, c, d, ap, bp] {
            param_product = param_product.mul(&Poly::var(v));
        }
        let dis1542 = dis417.mul(&param_product);

        // squared radical and inverse
        let y1 = gen.fresh();
        let z1 = gen.fresh();
        let j4a = imported_j4_block((ap, bp, c, d), mode, &mut gen);
        let j4b = imported_j4_block((ap, bp, c, d), mode, &mut gen);
        let mut polys = vec![subject.sub(&Poly::var(y1).mul(&Poly::var(z1)))];
        polys.extend(j4a.polys);
        polys.extend(j4b.polys);
        let j2 = field.combine_conjunction(&polys, mode)?.poly;
        let yp = gen.fresh();
        let j4c = imported_j4_block((ap, bp, c, d), mode, &mut gen);
        let j4d = imported_j4_block((ap, bp, c, d), mode, &mut gen);
        let y2 = gen.fresh();
        let z2 = gen.fresh();
        let mut polys = vec![Poly::var(yp).sub(&Poly::var(y2).mul(&Poly::var(z2)))];
        polys.extend(j4c.polys);
        polys.extend(j4d.polys);
        let j2_inner = field.combine_conjunction(&polys, mode)?.poly;
        let inv = field
            .combine_conjunction(
                &[subject.mul(&Poly::var(yp)).sub(&Poly::constant(1)), j2_inner],
                mode,
            )?
            .poly;
        let union = field.combine_disjunction(&[j2.clone(), inv.clone()])?;
        Ok(KsfProbe {
            dis417: dis417.total_degree(),
            dis1542: dis1542.total_degree(),
            j2: j2.total_degree(),
            inv: inv.total_degree(),
            union: union.total_degree(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ledger_has_no_unexpected_mismatches() {
        let field = NumberField::rationals();
        let rows = budget_ledger(&field).unwrap();
        for r in &rows {
            if r.expected_mismatch {
                continue;
            }
            assert!(r.matches, "{}: claimed {} computed {}", r.name, r.claimed, r.computed);
        }
        // the three flagged discrepancies are present
        let flagged: Vec<&LedgerRow> = rows.iter().filter(|r| r.expected_mismatch).collect();
        assert!(flagged.len() >= 3);
        // imported constants are marked
        assert!(rows.iter().any(|r| r.imported && r.name.contains("J quantifiers")));
    }

    #[test]
    fn ledger_totally_complex_field_skips_real_rows() {
        let field = crate::numberfield::parse_field("Q(sqrt,-5)").unwrap();
        let rows = budget_ledger(&field).unwrap();
        assert!(!rows.iter().any(|r| r.name.contains(", real") && !r.imported));
    }
}
