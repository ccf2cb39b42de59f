//! Integer lattice linear algebra: column-style Hermite normal form with
//! membership tests and integer solution recovery. Matrices are small
//! (dimension = field degree), so plain Euclidean column reduction suffices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// A full-rank sublattice of Z^d in triangular form: basis columns `cols`,
/// where `cols[i]` has its pivot at row i and zeros above.
#[derive(Debug, Clone)]
pub struct TriangularLattice {
    pub dim: usize,
    pub cols: Vec<Vec<BigInt>>,
}

/// Column HNF of the generator matrix (columns are generators). Returns the
/// triangular lattice basis, or None when the columns do not span a rank-d
/// lattice.
pub fn hnf(dim: usize, generators: &[Vec<BigInt>]) -> Option<TriangularLattice> {
    let mut cols: Vec<Vec<BigInt>> = generators
        .iter()
        .filter(|c| c.iter().any(|x| !x.is_zero()))
        .cloned()
        .collect();
    let mut basis: Vec<Vec<BigInt>> = Vec::with_capacity(dim);
    for row in 0..dim {
        // eliminate entries in `row` across remaining columns via gcd steps
        loop {
            let mut nonzero: Vec<usize> =
                (0..cols.len()).filter(|&j| !cols[j][row].is_zero()).collect();
            if nonzero.is_empty() {
                return None;
            }
            if nonzero.len() == 1 {
                break;
            }
            // pick the column with the smallest |entry| as pivot, reduce others
            nonzero.sort_by_key(|&j| cols[j][row].abs());
            let pivot = nonzero[0];
            for &j in &nonzero[1..] {
                let q = div_round(&cols[j][row], &cols[pivot][row]);
                if !q.is_zero() {
                    for i in 0..dim {
                        let v = &cols[j][i] - &q * &cols[pivot][i];
                        cols[j][i] = v;
                    }
                }
            }
            cols.retain(|c| c.iter().any(|x| !x.is_zero()));
        }
        let j = (0..cols.len()).find(|&j| !cols[j][row].is_zero()).unwrap();
        let mut col = cols.swap_remove(j);
        if col[row].is_negative() {
            for v in col.iter_mut() {
                *v = -std::mem::take(v);
            }
        }
        basis.push(col);
    }
    // triangularity: basis[i] can still have entries above row i from later
    // eliminations; clear them by reduction against earlier pivots
    for i in (0..dim).rev() {
        for k in (i + 1)..dim {
            let (q, _) = basis[i][k].div_mod_floor(&basis[k][k]);
            if !q.is_zero() {
                let sub: Vec<BigInt> = basis[k].iter().map(|v| v * &q).collect();
                for r in 0..dim {
                    let v = &basis[i][r] - &sub[r];
                    basis[i][r] = v;
                }
            }
        }
    }
    Some(TriangularLattice { dim, cols: basis })
}

fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    // rounded division keeps entries small during reduction
    let (q, r) = a.div_mod_floor(b);
    if &r * 2 > b.abs() {
        q + 1
    } else {
        q
    }
}

impl TriangularLattice {
    /// Is v in the lattice?
    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    /// Reduce v modulo the lattice (canonical representative with
    /// 0 <= r_i < pivot_i after elimination from the top row down).
    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        let mut w = v.to_vec();
        for i in 0..self.dim {
            let (q, _) = w[i].div_mod_floor(&self.cols[i][i]);
            if !q.is_zero() {
                for r in 0..self.dim {
                    let x = &w[r] - &q * &self.cols[i][r];
                    w[r] = x;
                }
            }
        }
        w
    }
}

/// Solve `A x = target` over the integers, where A's columns are `generators`.
/// Returns the coefficient vector over the original generators when solvable.
pub fn solve_integer(
    dim: usize,
    generators: &[Vec<BigInt>],
    target: &[BigInt],
) -> Option<Vec<BigInt>> {
    // HNF with transformation tracking: work on [A; I] stacked columns.
    let n = generators.len();
    let mut cols: Vec<(Vec<BigInt>, Vec<BigInt>)> = generators
        .iter()
        .enumerate()
        .map(|(j, c)| {
            let mut unit = vec![BigInt::zero(); n];
            unit[j] = BigInt::from(1);
            (c.clone(), unit)
        })
        .collect();
    let mut basis: Vec<(Vec<BigInt>, Vec<BigInt>)> = Vec::new();
    let mut pivot_rows: Vec<usize> = Vec::new();
    for row in 0..dim {
        loop {
            let mut nonzero: Vec<usize> =
                (0..cols.len()).filter(|&j| !cols[j].0[row].is_zero()).collect();
            if nonzero.len() <= 1 {
                break;
            }
            nonzero.sort_by_key(|&j| cols[j].0[row].abs());
            let pivot = nonzero[0];
            for &j in &nonzero[1..] {
                let q = div_round(&cols[j].0[row], &cols[pivot].0[row]);
                if !q.is_zero() {
                    for i in 0..dim {
                        let v = &cols[j].0[i] - &q * &cols[pivot].0[i];
                        cols[j].0[i] = v;
                    }
                    for i in 0..n {
                        let v = &cols[j].1[i] - &q * &cols[pivot].1[i];
                        cols[j].1[i] = v;
                    }
                }
            }
        }
        if let Some(j) = (0..cols.len()).find(|&j| !cols[j].0[row].is_zero()) {
            basis.push(cols.swap_remove(j));
            pivot_rows.push(row);
        }
    }
    // forward-substitute target against the triangular basis
    let mut w = target.to_vec();
    let mut coeffs: Vec<BigInt> = vec![BigInt::zero(); basis.len()];
    for (bi, &row) in pivot_rows.iter().enumerate() {
        let p = &basis[bi].0[row];
        let (q, r) = w[row].div_mod_floor(p);
        if !r.is_zero() {
            return None;
        }
        coeffs[bi] = q.clone();
        if !q.is_zero() {
            for i in 0..dim {
                let v = &w[i] - &q * &basis[bi].0[i];
                w[i] = v;
            }
        }
    }
    if w.iter().any(|x| !x.is_zero()) {
        return None;
    }
    let mut x = vec![BigInt::zero(); n];
    for (bi, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        for i in 0..n {
            let v = &x[i] + c * &basis[bi].1[i];
            x[i] = v;
        }
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vz(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn hnf_membership() {
        // lattice spanned by (2,0) and (1,2): index 4 in Z^2
        let lat = hnf(2, &[vz(&[2, 0]), vz(&[1, 2])]).unwrap();
        assert!(lat.contains(&vz(&[2, 0])));
        assert!(lat.contains(&vz(&[3, 2])));
        assert!(lat.contains(&vz(&[0, 4])));
        assert!(!lat.contains(&vz(&[1, 0])));
        assert!(!lat.contains(&vz(&[0, 2])));
    }

    #[test]
    fn hnf_rank_deficient() {
        assert!(hnf(2, &[vz(&[2, 4])]).is_none());
    }

    #[test]
    fn solve_tracks_generators() {
        let gens = vec![vz(&[2, 0]), vz(&[1, 2]), vz(&[0, 3])];
        let target = vz(&[1, -1]);
        let x = solve_integer(2, &gens, &target).unwrap();
        // verify A x = target
        let mut acc = vz(&[0, 0]);
        for (j, c) in x.iter().enumerate() {
            for i in 0..2 {
                let v = &acc[i] + c * &gens[j][i];
                acc[i] = v;
            }
        }
        assert_eq!(acc, target);
    }

    #[test]
    fn solve_unsolvable() {
        let gens = vec![vz(&[2, 0]), vz(&[0, 2])];
        assert!(solve_integer(2, &gens, &vz(&[1, 1])).is_none());
    }
}
