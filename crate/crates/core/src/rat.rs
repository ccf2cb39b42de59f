//! Rational-number helpers: parsing, heights, and deterministic
//! height-ordered enumeration used by the bounded searches.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Parse "p", "-p", or "p/q".
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let num: BigInt = n.trim().parse().ok()?;
        let den: BigInt = d.trim().parse().ok()?;
        if den.is_zero() {
            return None;
        }
        Some(BigRational::new(num, den))
    } else {
        let num: BigInt = s.parse().ok()?;
        Some(BigRational::from_integer(num))
    }
}

pub fn format_rational(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Height of a reduced rational: max(|numerator|, denominator).
pub fn height(x: &BigRational) -> BigInt {
    x.numer().abs().max(x.denom().clone())
}

/// All reduced rationals with height exactly h, ascending by (numer, denom).
fn rationals_of_height(h: u64) -> Vec<BigRational> {
    let mut out = Vec::new();
    if h == 0 {
        return out;
    }
    let hb = BigInt::from(h);
    if h == 1 {
        return vec![qi(-1), qi(0), qi(1)];
    }
    // |num| = h, den in 1..=h coprime; or den = h, |num| < h coprime
    for den in 1..=h {
        let d = BigInt::from(den);
        if hb.gcd(&d).is_one() {
            out.push(BigRational::new(hb.clone(), d.clone()));
            out.push(BigRational::new(-hb.clone(), d));
        }
    }
    for num in 1..h {
        let n = BigInt::from(num);
        if n.gcd(&hb).is_one() {
            out.push(BigRational::new(n.clone(), hb.clone()));
            out.push(BigRational::new(-n, hb.clone()));
        }
    }
    out.sort();
    out
}

/// Deterministic enumeration of all rationals in height order
/// (0, ±1, then height 2, 3, ...).
pub fn rational_candidates(max_height: u64) -> Vec<BigRational> {
    let mut out = vec![qi(0)];
    for h in 1..=max_height {
        let mut shell = rationals_of_height(h);
        shell.retain(|x| !x.is_zero());
        out.extend(shell);
    }
    out
}

/// Deterministic enumeration of d-coordinate rational vectors in height order
/// (height of a vector = max coordinate height), lexicographic within a shell.
pub fn vector_candidates(dim: usize, max_height: u64) -> Vec<Vec<BigRational>> {
    let per_coord = rational_candidates(max_height);
    let mut out: Vec<Vec<BigRational>> = Vec::new();
    let mut idx = vec![0usize; dim];
    loop {
        out.push(idx.iter().map(|&i| per_coord[i].clone()).collect());
        let mut c = dim;
        loop {
            if c == 0 {
                break;
            }
            c -= 1;
            idx[c] += 1;
            if idx[c] < per_coord.len() {
                break;
            }
            idx[c] = 0;
            if c == 0 {
                out.sort_by_key(|v| {
                    let h = v.iter().map(height).max().unwrap_or_else(BigInt::zero);
                    (h, v.clone())
                });
                return out;
            }
        }
        if out.len() > 2_000_000 {
            break;
        }
    }
    out.sort_by_key(|v| {
        let h = v.iter().map(height).max().unwrap_or_else(BigInt::zero);
        (h, v.clone())
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("5/8"), Some(q(5, 8)));
        assert_eq!(parse_rational("-3"), Some(qi(-3)));
        assert_eq!(parse_rational("4/-2"), Some(qi(-2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(format_rational(&q(5, 8)), "5/8");
        assert_eq!(format_rational(&qi(-2)), "-2");
    }

    #[test]
    fn candidates_height_ordered() {
        let cs = rational_candidates(3);
        assert_eq!(cs[0], qi(0));
        let hs: Vec<BigInt> = cs.iter().map(height).collect();
        for w in hs.windows(2).skip(1) {
            assert!(w[0] <= w[1]);
        }
        assert!(cs.contains(&q(3, 2)));
        assert!(cs.contains(&q(-1, 3)));
        // reduced only
        assert!(!cs.iter().any(|x| x.numer() == &BigInt::from(2) && x.denom() == &BigInt::from(4)));
    }
}
