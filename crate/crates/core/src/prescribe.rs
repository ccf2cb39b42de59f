//! Constructive realization of prescribed ramification sets: given a finite
//! place set S of even cardinality, produce (a, b) whose recomputed
//! ramification set is exactly S, with squarefree valuation bounds on the
//! realized odd-valuation part.
//!
//! The element a is assembled by weak approximation (valuation exactly 1 at
//! each finite place of S, negative at each requested real place); b is found
//! by a deterministic signed-product search over uniformizers and small
//! units, verified symbol by symbol, then reduced into the squarefree range
//! by a CRT division by a square.

use crate::error::{Error, Result};
use crate::localsymbols::PlaceSet;
use crate::numberfield::{Congruence, FieldElement, NumberField, Place, PrimeIdeal, SignReq};
use num_bigint::BigInt;
use num_traits::One;

/// Outcome of a prescription, with the realized sets recomputed from scratch.
#[derive(Debug, Clone)]
pub struct PrescriptionResult {
    pub a: FieldElement,
    pub b: FieldElement,
    pub realized_delta: PlaceSet,
    pub realized_delta_upper: PlaceSet,
    pub attempts: u64,
    pub pool_size: usize,
}

/// A single symbol requirement (a_index, place) -> sign.
#[derive(Debug, Clone)]
pub struct SymbolTarget {
    pub index: usize,
    pub place: Place,
    pub sign: i8,
}

impl NumberField {
    /// Realize a finite set of finite places of even cardinality as the
    /// odd-valuation ramification set of a pair (a, b), with
    /// |v_P(a)|, |v_P(b)| <= 1 on it.
    pub fn realize_finite(&self, places: &[PrimeIdeal]) -> Result<PrescriptionResult> {
        if places.len() % 2 != 0 {
            return Err(Error::MalformedQuery(
                "prescribed set must have even cardinality".into(),
            ));
        }
        let mut sorted = places.to_vec();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != places.len() {
            return Err(Error::MalformedQuery("prescribed places must be distinct".into()));
        }
        if sorted.is_empty() {
            return Ok(PrescriptionResult {
                a: self.one(),
                b: self.one(),
                realized_delta: vec![],
                realized_delta_upper: vec![],
                attempts: 0,
                pool_size: 0,
            });
        }
        let a = self.build_odd_valuation_element(&sorted, &[])?;
        let targets: Vec<SymbolTarget> = sorted
            .iter()
            .map(|p| SymbolTarget { index: 0, place: Place::Finite(p.clone()), sign: -1 })
            .collect();
        let (b, attempts, pool_size) = self.prescribe_symbols_counted(&[a.clone()], &targets)?;
        let b = self.squarefree_reduce(&b, &sorted)?;
        let realized_delta = self.delta(&a, &b)?;
        let realized_delta_upper = self.delta_upper(&a, &b)?;
        let requested: PlaceSet = sorted.iter().cloned().map(Place::Finite).collect();
        if realized_delta != requested || realized_delta_upper != requested {
            return Err(Error::Internal(format!(
                "prescription verification failed: requested {requested:?}, got delta {realized_delta:?} upper {realized_delta_upper:?}"
            )));
        }
        self.check_sf_bounds(&a, &b, &realized_delta_upper)?;
        Ok(PrescriptionResult { a, b, realized_delta, realized_delta_upper, attempts, pool_size })
    }

    /// Realize a set of places (finite and real, no complex) of even
    /// cardinality as the full ramification set.
    pub fn realize_with_real(&self, places: &PlaceSet) -> Result<PrescriptionResult> {
        if places.len() % 2 != 0 {
            return Err(Error::MalformedQuery(
                "prescribed set must have even cardinality".into(),
            ));
        }
        if places.iter().any(|v| matches!(v, Place::Complex(_))) {
            return Err(Error::MalformedQuery(
                "complex places can never ramify a quaternion pair".into(),
            ));
        }
        let mut finite: Vec<PrimeIdeal> = places
            .iter()
            .filter_map(|v| v.prime().cloned())
            .collect();
        finite.sort();
        finite.dedup();
        let mut real: Vec<usize> = places
            .iter()
            .filter_map(|v| match v {
                Place::Real(i) => Some(*i),
                _ => None,
            })
            .collect();
        real.sort();
        real.dedup();
        if finite.len() + real.len() != places.len() {
            return Err(Error::MalformedQuery("prescribed places must be distinct".into()));
        }
        if places.is_empty() {
            return Ok(PrescriptionResult {
                a: self.one(),
                b: self.one(),
                realized_delta: vec![],
                realized_delta_upper: vec![],
                attempts: 0,
                pool_size: 0,
            });
        }
        let a = self.build_odd_valuation_element(&finite, &real)?;
        let targets: Vec<SymbolTarget> = places
            .iter()
            .map(|v| SymbolTarget { index: 0, place: v.clone(), sign: -1 })
            .collect();
        let (b, attempts, pool_size) = self.prescribe_symbols_counted(&[a.clone()], &targets)?;
        let b = self.squarefree_reduce(&b, &finite)?;
        let realized_delta = self.delta(&a, &b)?;
        let realized_delta_upper = self.delta_upper(&a, &b)?;
        let mut requested = places.clone();
        requested.sort();
        if realized_delta != requested {
            return Err(Error::Internal(format!(
                "prescription verification failed: requested {requested:?}, got {realized_delta:?}"
            )));
        }
        let expected_upper: PlaceSet = finite.iter().cloned().map(Place::Finite).collect();
        if realized_delta_upper != expected_upper {
            return Err(Error::Internal(
                "odd-valuation part of the realized set is not the finite part".into(),
            ));
        }
        self.check_sf_bounds(&a, &b, &realized_delta_upper)?;
        Ok(PrescriptionResult { a, b, realized_delta, realized_delta_upper, attempts, pool_size })
    }

    /// Element with valuation exactly 1 at each listed prime and negative
    /// sign at each listed real place (positive at real places implicitly
    /// untouched by the per-place factors).
    fn build_odd_valuation_element(
        &self,
        primes: &[PrimeIdeal],
        real: &[usize],
    ) -> Result<FieldElement> {
        let mut a = self.one();
        for p in primes {
            let z = self.uniformizer(p);
            let mut congruences = vec![Congruence {
                prime: p.clone(),
                target: z,
                exponent: 2 * p.e.max(1) + 2,
            }];
            for q in primes {
                if q != p {
                    congruences.push(Congruence { prime: q.clone(), target: self.one(), exponent: 1 });
                }
            }
            let signs: Vec<(usize, SignReq)> =
                real.iter().map(|&i| (i, SignReq::Positive)).collect();
            let y = self.weak_approximate(&congruences, &signs, 1 << 16)?;
            debug_assert_eq!(self.valuation(&y, p)?, 1);
            a = self.mul(&a, &y);
        }
        for &sigma in real {
            let congruences: Vec<Congruence> = primes
                .iter()
                .map(|q| Congruence { prime: q.clone(), target: self.one(), exponent: 1 })
                .collect();
            let mut signs = vec![(sigma, SignReq::Negative)];
            for &other in real {
                if other != sigma {
                    signs.push((other, SignReq::Positive));
                }
            }
            let y = self.weak_approximate(&congruences, &signs, 1 << 16)?;
            a = self.mul(&a, &y);
        }
        for p in primes {
            debug_assert_eq!(self.valuation(&a, p)?, 1);
        }
        for &sigma in real {
            debug_assert!(self.sign_at_real_place(&a, sigma) < 0);
        }
        Ok(a)
    }

    /// Divide b by a square so that |v_P(b)| <= 1 at every listed prime,
    /// preserving all Hilbert symbols.
    fn squarefree_reduce(&self, b: &FieldElement, primes: &[PrimeIdeal]) -> Result<FieldElement> {
        let mut congruences = Vec::new();
        let mut nontrivial = false;
        for p in primes {
            let v = self.valuation(b, p)?;
            let half = v.div_euclid(2);
            if half != 0 {
                nontrivial = true;
            }
            if half > 0 {
                let pi = self.uniformizer(p);
                congruences.push(Congruence {
                    prime: p.clone(),
                    target: self.pow(&pi, half)?,
                    exponent: (half + 1) as u32,
                });
            } else {
                congruences.push(Congruence { prime: p.clone(), target: self.one(), exponent: 1 });
            }
        }
        if !nontrivial {
            return Ok(b.clone());
        }
        let x = self.solve_congruences(&congruences)?;
        let reduced = self.div(b, &self.mul(&x, &x))?;
        for p in primes {
            debug_assert!(self.valuation(&reduced, p)?.abs() <= 1);
        }
        Ok(reduced)
    }

    fn check_sf_bounds(
        &self,
        a: &FieldElement,
        b: &FieldElement,
        upper: &PlaceSet,
    ) -> Result<()> {
        for v in upper {
            let p = v.prime().expect("upper set is finite");
            if self.valuation(a, p)?.abs() > 1 || self.valuation(b, p)?.abs() > 1 {
                return Err(Error::Internal(
                    "squarefree valuation bound violated on realized set".into(),
                ));
            }
        }
        Ok(())
    }

    /// Find x with the prescribed Hilbert symbols (a_i, x)_v: -1 exactly at
    /// the listed targets, +1 everywhere else. Preconditions (finite
    /// support, per-index sign product one, local realizability) are checked
    /// before any search; every returned x is re-verified symbol by symbol.
    pub fn prescribe_symbols(
        &self,
        a_list: &[FieldElement],
        targets: &[SymbolTarget],
    ) -> Result<FieldElement> {
        self.prescribe_symbols_counted(a_list, targets).map(|(x, _, _)| x)
    }

    fn prescribe_symbols_counted(
        &self,
        a_list: &[FieldElement],
        targets: &[SymbolTarget],
    ) -> Result<(FieldElement, u64, usize)> {
        if a_list.iter().any(|a| a.is_zero()) {
            return Err(Error::ZeroInput);
        }
        for t in targets {
            if t.index >= a_list.len() {
                return Err(Error::MalformedQuery(format!("target index {} out of range", t.index)));
            }
            if t.sign != 1 && t.sign != -1 {
                return Err(Error::MalformedQuery("symbol targets must be +1 or -1".into()));
            }
        }
        // (a): finite support is structural; duplicate (index, place) pairs
        // would make the requirement ambiguous
        for (i, t) in targets.iter().enumerate() {
            for u in &targets[i + 1..] {
                if t.index == u.index && t.place == u.place {
                    return Err(Error::Unsatisfiable('a'));
                }
            }
        }
        // (b): per-index product of all signs must be +1
        for i in 0..a_list.len() {
            let minus: usize = targets
                .iter()
                .filter(|t| t.index == i && t.sign == -1)
                .count();
            if minus % 2 == 1 {
                return Err(Error::Unsatisfiable('b'));
            }
        }
        // (c): per-place joint realizability over the local square classes
        let mut places: Vec<Place> = targets.iter().map(|t| t.place.clone()).collect();
        places.sort();
        places.dedup();
        for v in &places {
            if !self.locally_realizable(a_list, targets, v)? {
                return Err(Error::Unsatisfiable('c'));
            }
        }
        if targets.iter().all(|t| t.sign == 1) {
            return Ok((self.one(), 0, 0));
        }

        // candidate pool: uniformizers of target primes, then growing prime
        // pool by residue characteristic, plus sign/unit elements
        let mut pool_primes: Vec<PrimeIdeal> = places
            .iter()
            .filter_map(|v| v.prime().cloned())
            .collect();
        pool_primes.sort();
        pool_primes.dedup();
        let mut extra_cursor: u64 = 1;
        let mut attempts: u64 = 0;
        for expansion in 0..8u32 {
            // grow the pool: a few more rational primes per round
            let mut added = 0;
            while added < 2 + 2 * expansion {
                extra_cursor += 1;
                if !crate::arith::is_prime_u64(extra_cursor) {
                    continue;
                }
                for (q, _) in self.factor_rational_prime(&BigInt::from(extra_cursor)) {
                    if !pool_primes.contains(&q) {
                        pool_primes.push(q);
                        added += 1;
                    }
                }
            }
            let mut pool: Vec<FieldElement> = vec![self.from_int(-1)];
            for p in &pool_primes {
                pool.push(self.uniformizer(p));
            }
            if self.degree() > 1 {
                for unit in [
                    self.theta(),
                    self.add(&self.theta(), &self.one()),
                    self.sub(&self.theta(), &self.one()),
                ] {
                    if !unit.is_zero() {
                        pool.push(unit);
                    }
                }
            }
            for sigma in 0..self.real_place_count() {
                let mut signs = vec![(sigma, SignReq::Negative)];
                for other in 0..self.real_place_count() {
                    if other != sigma {
                        signs.push((other, SignReq::Positive));
                    }
                }
                if let Ok(w) = self.weak_approximate(&[], &signs, 1 << 12) {
                    pool.push(w);
                }
            }
            // subsets by increasing size, lexicographic within a size
            let n = pool.len();
            for size in 1..=n.min(6) {
                let mut combo: Vec<usize> = (0..size).collect();
                loop {
                    let mut x = self.one();
                    for &i in &combo {
                        x = self.mul(&x, &pool[i]);
                    }
                    attempts += 1;
                    if self.verify_prescription(a_list, targets, &x)? {
                        return Ok((x, attempts, n));
                    }
                    // next combination
                    let mut i = size;
                    loop {
                        if i == 0 {
                            break;
                        }
                        i -= 1;
                        if combo[i] + 1 <= n - (size - i) {
                            combo[i] += 1;
                            for j in i + 1..size {
                                combo[j] = combo[j - 1] + 1;
                            }
                            break;
                        }
                        if i == 0 {
                            combo.clear();
                            break;
                        }
                    }
                    if combo.is_empty() {
                        break;
                    }
                }
            }
        }
        Err(Error::SearchExhausted { what: "symbol prescription".into(), bound: attempts })
    }

    /// Exhaustive verification: the prescribed symbols hold and every other
    /// candidate place is split for every index.
    fn verify_prescription(
        &self,
        a_list: &[FieldElement],
        targets: &[SymbolTarget],
        x: &FieldElement,
    ) -> Result<bool> {
        if x.is_zero() {
            return Ok(false);
        }
        for t in targets {
            if self.hilbert(&a_list[t.index], x, &t.place)? != t.sign {
                return Ok(false);
            }
        }
        for (i, a) in a_list.iter().enumerate() {
            for v in self.symbol_candidate_places(a, x)? {
                let expected = targets
                    .iter()
                    .find(|t| t.index == i && t.place == v)
                    .map(|t| t.sign)
                    .unwrap_or(1);
                if self.hilbert(a, x, &v)? != expected {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Condition (c): the target sign vector at v lies in the F2-span of the
    /// symbol vectors over local square-class representatives.
    fn locally_realizable(
        &self,
        a_list: &[FieldElement],
        targets: &[SymbolTarget],
        v: &Place,
    ) -> Result<bool> {
        let want: Vec<bool> = (0..a_list.len())
            .map(|i| {
                targets
                    .iter()
                    .find(|t| t.index == i && &t.place == v)
                    .map(|t| t.sign == -1)
                    .unwrap_or(false)
            })
            .collect();
        if want.iter().all(|w| !w) {
            return Ok(true);
        }
        let reps = self.local_square_class_reps(v)?;
        let mut basis: Vec<Vec<bool>> = Vec::new();
        for r in reps {
            let mut vec: Vec<bool> = Vec::with_capacity(a_list.len());
            for a in a_list {
                vec.push(self.hilbert(a, &r, v)? == -1);
            }
            basis.push(vec);
        }
        Ok(f2_in_span(&basis, &want))
    }

    /// Representatives covering all square classes of the completion K_v.
    fn local_square_class_reps(&self, v: &Place) -> Result<Vec<FieldElement>> {
        match v {
            Place::Complex(_) => Ok(vec![self.one()]),
            Place::Real(_) => Ok(vec![self.one(), self.from_int(-1)]),
            Place::Finite(prime) if !prime.is_even() => {
                let pi = self.uniformizer(prime);
                let fq = prime.residue_ctx();
                // a lift of a residue nonsquare
                let mut nonsquare = None;
                'search: for c in 2..200u64 {
                    let cand = self.from_int(c as i64);
                    if self.valuation(&cand, prime)? != 0 {
                        continue;
                    }
                    let res = self.residue_of_unit(&cand, prime)?;
                    if !fq.is_zero(&res) && fq.quadratic_character(&res) == -1 {
                        nonsquare = Some(cand);
                        break 'search;
                    }
                }
                let u = match nonsquare {
                    Some(u) => u,
                    None => {
                        // residue field where no small rational is a
                        // nonsquare: lift theta-coordinates instead
                        let mut found = None;
                        for coords in crate::rat::vector_candidates(self.degree(), 3) {
                            let cand = FieldElement { coords };
                            if cand.is_zero() || self.valuation(&cand, prime)? != 0 {
                                continue;
                            }
                            let res = self.residue_of_unit(&cand, prime)?;
                            if fq.quadratic_character(&res) == -1 {
                                found = Some(cand);
                                break;
                            }
                        }
                        found.ok_or_else(|| {
                            Error::Internal("no residue nonsquare found".into())
                        })?
                    }
                };
                Ok(vec![self.one(), u.clone(), pi.clone(), self.mul(&u, &pi)])
            }
            Place::Finite(prime) => {
                // dyadic: units mod P^(2 e2 + 1) cover the unit square
                // classes; multiply by the uniformizer for the rest
                let e2 = prime.e;
                let m = (2 * e2 + 1).div_ceil(prime.e);
                let pi = self.uniformizer(prime);
                let mut reps = Vec::new();
                for coords in dyadic_grid(self, m) {
                    let cand = FieldElement { coords };
                    if cand.is_zero() {
                        continue;
                    }
                    if self.valuation(&cand, prime)? != 0 {
                        continue;
                    }
                    reps.push(cand.clone());
                    reps.push(self.mul(&cand, &pi));
                }
                Ok(reps)
            }
        }
    }
}

fn dyadic_grid(field: &NumberField, m: u32) -> Vec<Vec<num_rational::BigRational>> {
    let modulus = BigInt::from(2).pow(m);
    let d = field.degree();
    let mut out = Vec::new();
    let mut idx = vec![BigInt::from(0); d];
    loop {
        out.push(
            idx.iter()
                .map(|c| num_rational::BigRational::from_integer(c.clone()))
                .collect(),
        );
        let mut c = 0;
        loop {
            idx[c] += 1;
            if idx[c] < modulus {
                break;
            }
            idx[c] = BigInt::from(0);
            c += 1;
            if c == d {
                return out;
            }
        }
    }
}

/// Is `target` in the F2-span of `vectors`?
fn f2_in_span(vectors: &[Vec<bool>], target: &[bool]) -> bool {
    let n = target.len();
    let mut rows: Vec<Vec<bool>> = vectors.to_vec();
    let mut goal = target.to_vec();
    let mut used = vec![false; rows.len()];
    for col in 0..n {
        let pivot = (0..rows.len()).find(|&r| !used[r] && rows[r][col]);
        let Some(p) = pivot else { continue };
        used[p] = true;
        let prow = rows[p].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != p && row[col] {
                for c in 0..n {
                    row[c] ^= prow[c];
                }
            }
        }
        if goal[col] {
            for c in 0..n {
                goal[c] ^= prow[c];
            }
        }
    }
    goal.iter().all(|&g| !g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numberfield::parse_field;

    fn primes_over(k: &NumberField, ps: &[i64]) -> Vec<PrimeIdeal> {
        ps.iter()
            .map(|&p| k.factor_rational_prime(&BigInt::from(p))[0].0.clone())
            .collect()
    }

    #[test]
    fn empty_set_is_trivial() {
        let k = parse_field("Q").unwrap();
        let r = k.realize_finite(&[]).unwrap();
        assert_eq!(r.a, k.one());
        assert_eq!(r.b, k.one());
        assert!(r.realized_delta.is_empty());
    }

    #[test]
    fn realize_two_and_three_over_q() {
        let k = parse_field("Q").unwrap();
        let s = primes_over(&k, &[2, 3]);
        let r = k.realize_finite(&s).unwrap();
        let expected: PlaceSet = s.iter().cloned().map(Place::Finite).collect();
        assert_eq!(r.realized_delta_upper, expected);
        assert_eq!(r.realized_delta, expected);
    }

    #[test]
    fn realize_with_archimedean_over_q() {
        let k = parse_field("Q").unwrap();
        let p2 = k.factor_rational_prime(&BigInt::from(2))[0].0.clone();
        let s: PlaceSet = vec![Place::Finite(p2), Place::Real(0)];
        let r = k.realize_with_real(&s).unwrap();
        let mut expected = s.clone();
        expected.sort();
        assert_eq!(r.realized_delta, expected);
    }

    #[test]
    fn odd_cardinality_rejected() {
        let k = parse_field("Q").unwrap();
        let s = primes_over(&k, &[2]);
        assert!(matches!(k.realize_finite(&s), Err(Error::MalformedQuery(_))));
    }

    #[test]
    fn parity_violation_detected_before_search() {
        let k = parse_field("Q").unwrap();
        let p2 = k.factor_rational_prime(&BigInt::from(2))[0].0.clone();
        let r = k.prescribe_symbols(
            &[k.from_int(6)],
            &[SymbolTarget { index: 0, place: Place::Finite(p2), sign: -1 }],
        );
        assert!(matches!(r, Err(Error::Unsatisfiable('b'))));
    }

    #[test]
    fn local_square_blocks_realizability() {
        let k = parse_field("Q").unwrap();
        let p7 = k.factor_rational_prime(&BigInt::from(7))[0].0.clone();
        let p3 = k.factor_rational_prime(&BigInt::from(3))[0].0.clone();
        // 2 is a square at 7, so (2, x)_7 = -1 is locally unrealizable
        let r = k.prescribe_symbols(
            &[k.from_int(2)],
            &[
                SymbolTarget { index: 0, place: Place::Finite(p7), sign: -1 },
                SymbolTarget { index: 0, place: Place::Finite(p3), sign: -1 },
            ],
        );
        assert!(matches!(r, Err(Error::Unsatisfiable('c'))));
    }

    #[test]
    fn prescribe_six_at_two_and_three() {
        let k = parse_field("Q").unwrap();
        let p2 = k.factor_rational_prime(&BigInt::from(2))[0].0.clone();
        let p3 = k.factor_rational_prime(&BigInt::from(3))[0].0.clone();
        let a = k.from_int(6);
        let x = k
            .prescribe_symbols(
                &[a.clone()],
                &[
                    SymbolTarget { index: 0, place: Place::Finite(p2.clone()), sign: -1 },
                    SymbolTarget { index: 0, place: Place::Finite(p3.clone()), sign: -1 },
                ],
            )
            .unwrap();
        assert_eq!(k.hilbert(&a, &x, &Place::Finite(p2)).unwrap(), -1);
        assert_eq!(k.hilbert(&a, &x, &Place::Finite(p3)).unwrap(), -1);
        assert!(k.reciprocity_check(&a, &x).unwrap());
    }

    #[test]
    fn all_plus_one_gives_one() {
        let k = parse_field("Q").unwrap();
        let x = k.prescribe_symbols(&[k.from_int(6)], &[]).unwrap();
        assert_eq!(x, k.one());
    }

    #[test]
    fn realize_in_imaginary_quadratic() {
        let k = parse_field("Q(sqrt,-5)").unwrap();
        let p2 = k.factor_rational_prime(&BigInt::from(2))[0].0.clone();
        let p3s = k.factor_rational_prime(&BigInt::from(3));
        let s = vec![p2, p3s[0].0.clone()];
        let r = k.realize_finite(&s).unwrap();
        let mut expected: PlaceSet = s.iter().cloned().map(Place::Finite).collect();
        expected.sort();
        assert_eq!(r.realized_delta_upper, expected);
    }
}
