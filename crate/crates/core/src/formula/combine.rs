//! Reduction of polynomial conjunctions and disjunctions to single
//! polynomials with exact zero sets, with the degree bookkeeping of each
//! strategy.
//!
//! Real mode: sum of squares (zero set exact whenever the field embeds in
//! the reals). General mode: a norm-form composition N(f_1, ..., f_n) for a
//! certified-irreducible x^n - m, anisotropic over K, so the composition
//! vanishes exactly on the common zero set; when no certificate is found a
//! nested two-at-a-time pairing with p^2 - n_K q^2 is used instead and the
//! true (larger) degree bound is reported. Disjunctions are plain products.

use super::poly::Poly;
use crate::error::{Error, Result};
use crate::numberfield::NumberField;
use num_bigint::BigInt;
use num_traits::{One, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CombineMode {
    General,
    Real,
}

/// What the combiner actually did, for honest degree reporting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CombineStrategy {
    Single,
    SumOfSquares,
    NormForm { extension_degree: u32, radicand: i64 },
    /// more inputs than one norm form takes: balanced recursion in chunks
    ChunkedNormForm { chunk: u32, radicand: i64, levels: u32 },
    PairedFallback { nonsquare: i64, rounds: u32 },
}

/// Largest extension degree used by a single norm form; longer conjunctions
/// recurse in chunks of this size.
pub const MAX_NORM_ARITY: usize = 6;

#[derive(Debug, Clone)]
pub struct Combined {
    pub poly: Poly,
    pub strategy: CombineStrategy,
    /// guaranteed degree bound of the strategy for inputs of max degree d
    pub degree_bound: u64,
}

impl NumberField {
    /// Combine a nonempty conjunction of polynomials into one polynomial
    /// whose zero set over K is exactly the common zero set.
    pub fn combine_conjunction(&self, polys: &[Poly], mode: CombineMode) -> Result<Combined> {
        if polys.is_empty() {
            return Err(Error::MalformedQuery("cannot combine an empty conjunction".into()));
        }
        let max_deg = polys.iter().map(Poly::total_degree).max().unwrap_or(0);
        if polys.len() == 1 {
            return Ok(Combined {
                poly: polys[0].clone(),
                strategy: CombineStrategy::Single,
                degree_bound: max_deg,
            });
        }
        match mode {
            CombineMode::Real => {
                if !self.has_real_embedding() {
                    return Err(Error::MalformedQuery(
                        "real-mode combination requires a real embedding".into(),
                    ));
                }
                let mut acc = Poly::zero();
                for p in polys {
                    acc = acc.add(&p.mul(p));
                }
                Ok(Combined {
                    poly: acc,
                    strategy: CombineStrategy::SumOfSquares,
                    degree_bound: 2 * max_deg,
                })
            }
            CombineMode::General => {
                if polys.len() > MAX_NORM_ARITY {
                    return self.combine_chunked(polys, max_deg);
                }
                let n = polys.len() as u32;
                if let Some(m) = self.certified_norm_radicand(n) {
                    let poly = norm_compose(polys, n, m);
                    Ok(Combined {
                        poly,
                        strategy: CombineStrategy::NormForm { extension_degree: n, radicand: m },
                        degree_bound: n as u64 * max_deg,
                    })
                } else {
                    // nested pairing p^2 - n_K q^2; each round doubles degree
                    let nk = self.find_nonsquare_integer();
                    let mut layer: Vec<Poly> = polys.to_vec();
                    let mut rounds = 0u32;
                    while layer.len() > 1 {
                        rounds += 1;
                        let mut next = Vec::new();
                        let mut iter = layer.chunks(2);
                        for chunk in &mut iter {
                            if chunk.len() == 2 {
                                let p2 = chunk[0].mul(&chunk[0]);
                                let q2 = chunk[1].mul(&chunk[1]).scale(&BigInt::from(nk));
                                next.push(p2.sub(&q2));
                            } else {
                                next.push(chunk[0].clone());
                            }
                        }
                        layer = next;
                    }
                    Ok(Combined {
                        poly: layer.into_iter().next().unwrap(),
                        strategy: CombineStrategy::PairedFallback { nonsquare: nk, rounds },
                        degree_bound: max_deg * (1u64 << rounds),
                    })
                }
            }
        }
    }

    /// Zero set of the product is the union of the zero sets; degree is the
    /// sum. Used for disjunctions of equations.
    pub fn combine_disjunction(&self, polys: &[Poly]) -> Result<Poly> {
        if polys.is_empty() {
            return Err(Error::MalformedQuery("cannot combine an empty disjunction".into()));
        }
        let mut acc = Poly::constant(1);
        for p in polys {
            acc = acc.mul(p);
        }
        Ok(acc)
    }

    /// Smallest integer m >= 2 with x^n - m irreducible over K, certified by
    /// the prime-power criterion: m is no l-th power in K for any prime l
    /// dividing n, and m is not -4 times a fourth power when 4 divides n.
    pub fn certified_norm_radicand(&self, n: u32) -> Option<i64> {
        assert!(n >= 2);
        let prime_divisors: Vec<u32> = (2..=n).filter(|l| n % l == 0 && is_prime_u32(*l)).collect();
        'candidates: for m in 2i64..=40 {
            let me = self.from_int(m);
            for &l in &prime_divisors {
                match self.nth_root(&me, l) {
                    Ok(None) => {}
                    Ok(Some(_)) => continue 'candidates,
                    Err(_) => continue 'candidates,
                }
            }
            if n % 4 == 0 {
                // m in -4 K^4 would break irreducibility
                let target = self.from_rational(&num_rational::BigRational::new(
                    BigInt::from(-m),
                    BigInt::from(4),
                ));
                match self.nth_root(&target, 4) {
                    Ok(None) => {}
                    _ => continue 'candidates,
                }
            }
            return Some(m);
        }
        None
    }
}

fn is_prime_u32(n: u32) -> bool {
    crate::arith::is_prime_u64(n as u64)
}

/// Norm-form composition: det of sum p_i C^i for the companion matrix C of
/// x^n - m, i.e. the field norm of p_1 + p_2 alpha + ... + p_n alpha^(n-1)
/// from K(alpha) for alpha = m^(1/n).
pub fn norm_compose(polys: &[Poly], n: u32, m: i64) -> Poly {
    let n = n as usize;
    assert_eq!(polys.len(), n);
    // companion powers: (C^i)[r][c] as integers
    let mut cpow: Vec<Vec<Vec<BigInt>>> = Vec::with_capacity(n);
    let mut id = vec![vec![BigInt::zero(); n]; n];
    for (r, row) in id.iter_mut().enumerate() {
        row[r] = BigInt::one();
    }
    cpow.push(id);
    let c = companion(n, m);
    for i in 1..n {
        cpow.push(mat_mul(&cpow[i - 1], &c));
    }
    // M[r][col] = sum_i p_i (C^i)[r][col]
    let mut matrix = vec![vec![Poly::zero(); n]; n];
    for (r, row) in matrix.iter_mut().enumerate() {
        for (col, cell) in row.iter_mut().enumerate() {
            let mut acc = Poly::zero();
            for (i, p) in polys.iter().enumerate() {
                let coeff = &cpow[i][r][col];
                if !coeff.is_zero() {
                    acc = acc.add(&p.scale(coeff));
                }
            }
            *cell = acc;
        }
    }
    det(&matrix)
}

fn companion(n: usize, m: i64) -> Vec<Vec<BigInt>> {
    // multiplication by alpha: e_i -> e_(i+1), e_(n-1) -> m e_0
    let mut c = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n - 1 {
        c[i + 1][i] = BigInt::one();
    }
    c[0][n - 1] = BigInt::from(m);
    c
}

fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    let mut out = vec![vec![BigInt::zero(); n]; n];
    for r in 0..n {
        for c in 0..n {
            let mut acc = BigInt::zero();
            for k in 0..n {
                acc += &a[r][k] * &b[k][c];
            }
            out[r][c] = acc;
        }
    }
    out
}

/// Determinant of a small polynomial matrix by Laplace expansion with
/// column-subset memoization.
fn det(matrix: &[Vec<Poly>]) -> Poly {
    let n = matrix.len();
    let mut memo: std::collections::HashMap<u32, Poly> = std::collections::HashMap::new();
    fn go(
        matrix: &[Vec<Poly>],
        row: usize,
        cols: u32,
        memo: &mut std::collections::HashMap<u32, Poly>,
    ) -> Poly {
        let n = matrix.len();
        if row == n {
            return Poly::constant(1);
        }
        if let Some(p) = memo.get(&cols) {
            return p.clone();
        }
        let mut acc = Poly::zero();
        let mut sign = 1i64;
        for c in 0..n {
            if cols & (1 << c) != 0 {
                continue;
            }
            let entry = &matrix[row][c];
            if !entry.is_zero() {
                let sub = go(matrix, row + 1, cols | (1 << c), memo);
                let term = entry.mul(&sub);
                acc = if sign > 0 { acc.add(&term) } else { acc.sub(&term) };
            }
            sign = -sign;
        }
        memo.insert(cols, acc.clone());
        acc
    }
    go(matrix, 0, 0, &mut memo)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::poly::{Var, VarGen};
    use crate::numberfield::parse_field;
    use num_rational::BigRational;
    use std::collections::BTreeMap;

    #[test]
    fn quadratic_norm_form() {
        // N(u + v sqrt(m)) = u^2 - m v^2
        let u = Poly::var(Var::Bound(0));
        let v = Poly::var(Var::Bound(1));
        let n = norm_compose(&[u.clone(), v.clone()], 2, 2);
        let expect = u.mul(&u).sub(&v.mul(&v).scale(&BigInt::from(2)));
        assert_eq!(n, expect);
    }

    #[test]
    fn cubic_norm_form() {
        // N(u + v c + w c^2) for c^3 = m: u^3 + m v^3 + m^2 w^3 - 3 m u v w
        let u = Poly::var(Var::Bound(0));
        let v = Poly::var(Var::Bound(1));
        let w = Poly::var(Var::Bound(2));
        let n = norm_compose(&[u.clone(), v.clone(), w.clone()], 3, 2);
        let expect = u
            .pow(3)
            .add(&v.pow(3).scale(&BigInt::from(2)))
            .add(&w.pow(3).scale(&BigInt::from(4)))
            .sub(&u.mul(&v).mul(&w).scale(&BigInt::from(6)));
        assert_eq!(n, expect);
    }

    #[test]
    fn real_mode_squares() {
        let k = parse_field("Q").unwrap();
        let x = Poly::var(Var::Bound(0));
        let y = Poly::var(Var::Bound(1));
        let c = k
            .combine_conjunction(&[x.clone(), y.clone()], CombineMode::Real)
            .unwrap();
        assert_eq!(c.poly, x.mul(&x).add(&y.mul(&y)));
        assert_eq!(c.degree_bound, 2);
        assert_eq!(c.strategy, CombineStrategy::SumOfSquares);
    }

    #[test]
    fn real_mode_needs_real_embedding() {
        let k = parse_field("Q(sqrt,-5)").unwrap();
        let x = Poly::var(Var::Bound(0));
        assert!(k
            .combine_conjunction(&[x.clone(), x.clone()], CombineMode::Real)
            .is_err());
    }

    #[test]
    fn general_mode_over_q() {
        let k = parse_field("Q").unwrap();
        let x = Poly::var(Var::Bound(0));
        let y = Poly::var(Var::Bound(1));
        let c = k
            .combine_conjunction(&[x.clone(), y.clone()], CombineMode::General)
            .unwrap();
        assert_eq!(
            c.strategy,
            CombineStrategy::NormForm { extension_degree: 2, radicand: 2 }
        );
        // x^2 - 2 y^2 vanishes only at x = y = 0 over Q
        assert_eq!(c.poly, x.mul(&x).sub(&y.mul(&y).scale(&BigInt::from(2))));
    }

    #[test]
    fn radicand_avoids_squares_in_the_field() {
        let k = parse_field("Q(sqrt,2)").unwrap();
        // 2 is a square in Q(sqrt 2), so the certificate must skip it
        assert_eq!(k.certified_norm_radicand(2), Some(3));
        let kq = parse_field("Q").unwrap();
        assert_eq!(kq.certified_norm_radicand(2), Some(2));
        assert_eq!(kq.certified_norm_radicand(3), Some(2));
        assert_eq!(kq.certified_norm_radicand(4), Some(2));
        assert_eq!(kq.certified_norm_radicand(6), Some(2));
    }

    #[test]
    fn zero_set_exactness_sampled() {
        let k = parse_field("Q").unwrap();
        let mut gen = VarGen::new();
        let x = gen.fresh();
        let y = gen.fresh();
        let f1 = Poly::var(x).mul(&Poly::var(x)).sub(&Poly::var(y)); // x^2 - y
        let f2 = Poly::var(y).sub(&Poly::constant(1)); // y - 1
        for mode in [CombineMode::General, CombineMode::Real] {
            let c = k.combine_conjunction(&[f1.clone(), f2.clone()], mode).unwrap();
            for xv in -4i64..=4 {
                for yv in -4i64..=4 {
                    let mut asg = BTreeMap::new();
                    asg.insert(x, k.from_int(xv));
                    asg.insert(y, k.from_int(yv));
                    let both = f1.eval(&k, &asg).unwrap().is_zero()
                        && f2.eval(&k, &asg).unwrap().is_zero();
                    let combined = c.poly.eval(&k, &asg).unwrap().is_zero();
                    assert_eq!(both, combined, "mode {mode:?} at ({xv},{yv})");
                }
            }
        }
        let _ = BigRational::from_integer(BigInt::one());
    }
}
