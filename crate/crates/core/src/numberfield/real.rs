//! Exact real-embedding signs via Sturm-certified interval refinement.
//! No floating point participates in any decision.

use super::{FieldElement, NumberField};
use crate::error::{Error, Result};
use crate::intpoly::{self, z_to_q};
use num_rational::BigRational;
use num_traits::Signed;

impl NumberField {
    /// Sign of sigma_idx(x) for nonzero x: always +1 or -1 (an element of
    /// degree < d cannot vanish at a root of the irreducible minimal
    /// polynomial).
    pub fn sign_at_real_place(&self, x: &FieldElement, idx: usize) -> i8 {
        assert!(!x.is_zero(), "sign of zero element");
        let g = intpoly::qtrim(x.coords.clone());
        if self.degree() == 1 {
            // K = Q: the embedding is the identity on the constant coordinate
            return if x.coords[0].is_negative() { -1 } else { 1 };
        }
        intpoly::sign_at_root(&z_to_q(self.min_poly()), self.real_interval(idx), &g)
    }

    /// Signs of x at every real place, in the order of the isolating
    /// intervals (ascending roots). Errors on zero input.
    pub fn real_signs(&self, x: &FieldElement) -> Result<Vec<i8>> {
        if x.is_zero() {
            return Err(Error::ZeroInput);
        }
        Ok((0..self.real_place_count())
            .map(|i| self.sign_at_real_place(x, i))
            .collect())
    }

    /// sigma(x) >= 0 at every real place (vacuously true for totally complex
    /// fields; true for x = 0).
    pub fn is_totally_nonnegative(&self, x: &FieldElement) -> bool {
        if x.is_zero() {
            return true;
        }
        (0..self.real_place_count()).all(|i| self.sign_at_real_place(x, i) > 0)
    }

    /// Sign of sigma_idx(x) - c, with 0 for exact equality.
    pub fn cmp_with_rational_at(&self, x: &FieldElement, c: &BigRational, idx: usize) -> i8 {
        let shifted = self.sub(x, &self.from_rational(c));
        if shifted.is_zero() {
            return 0;
        }
        self.sign_at_real_place(&shifted, idx)
    }

    /// Is -4 <= sigma_idx(x) <= 4, decided exactly?
    pub fn in_archimedean_box(&self, x: &FieldElement, idx: usize) -> bool {
        let four = BigRational::from_integer(4.into());
        let upper = self.cmp_with_rational_at(x, &four, idx);
        if upper > 0 {
            return false;
        }
        let lower = self.cmp_with_rational_at(x, &(-four), idx);
        lower >= 0
    }
}

#[cfg(test)]
mod tests {
    use crate::numberfield::parse_field;
    use crate::rat::q;
    use num_traits::Signed;

    #[test]
    fn signs_in_real_quadratic() {
        let k = parse_field("Q(sqrt,2)").unwrap();
        // 1 - theta: positive at -sqrt2, negative at +sqrt2
        let x = k.sub(&k.one(), &k.theta());
        assert_eq!(k.real_signs(&x).unwrap(), vec![1, -1]);
        assert!(!k.is_totally_nonnegative(&x));
        assert!(k.is_totally_nonnegative(&k.from_int(4)));
        assert!(k.is_totally_nonnegative(&k.zero()));
    }

    #[test]
    fn totally_complex_has_no_signs() {
        let k = parse_field("Q(sqrt,-5)").unwrap();
        let x = k.add(&k.one(), &k.theta());
        assert_eq!(k.real_signs(&x).unwrap(), Vec::<i8>::new());
        assert!(k.is_totally_nonnegative(&x));
    }

    #[test]
    fn archimedean_box_examples() {
        let k = parse_field("Q").unwrap();
        assert!(k.in_archimedean_box(&k.from_int(4), 0));
        assert!(k.in_archimedean_box(&k.from_int(-4), 0));
        assert!(!k.in_archimedean_box(&k.from_rational(&q(9, 2)), 0));

        // theta + 3 over Q(sqrt,2): inside at sigma(theta) = -sqrt2,
        // outside at +sqrt2
        let k = parse_field("Q(sqrt,2)").unwrap();
        let x = k.add(&k.theta(), &k.from_int(3));
        assert!(k.in_archimedean_box(&x, 0));
        assert!(!k.in_archimedean_box(&x, 1));
    }

    #[test]
    fn norm_sign_consistency() {
        // product of real signs * (complex contribution, always positive)
        // matches the sign of the norm
        for spec in ["Q", "Q(sqrt,2)", "Q(sqrt,-5)", "poly:[-1,-1,0,1]"] {
            let k = parse_field(spec).unwrap();
            for coords in [[1i64, 2], [3, -1], [-2, 5], [7, 0]] {
                let mut x = k.from_int(coords[0]);
                if k.degree() > 1 {
                    x = k.add(&x, &k.scale(&k.theta(), &q(coords[1], 1)));
                }
                if x.is_zero() {
                    continue;
                }
                let sign_prod: i32 = k
                    .real_signs(&x)
                    .unwrap()
                    .iter()
                    .map(|&s| s as i32)
                    .product();
                let n = k.norm(&x);
                let norm_sign = if n.is_negative() { -1 } else { 1 };
                assert_eq!(sign_prod, norm_sign, "{spec} {coords:?}");
            }
        }
    }
}
