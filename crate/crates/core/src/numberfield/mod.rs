//! Monogenic number fields K = Q(theta) with exact arithmetic.
//!
//! Elements are rational coordinate vectors in the power basis
//! 1, theta, ..., theta^(d-1). The ring of integers is required to equal
//! Z[theta]; this is verified at construction with the Dedekind criterion at
//! every prime whose square divides the discriminant, which is exactly what
//! makes the Kummer-Dedekind prime splitting below valid at every prime.

mod approx;
mod ideals;
mod primes;
mod real;
mod roots;

pub use approx::{Congruence, SignReq};
pub use ideals::FractionalIdeal;
pub use primes::{PadicQuotient, PrimeIdeal, PrimePowerTester};

use crate::error::{Error, Result};
use crate::intpoly::{
    self, discriminant, is_irreducible_monic, isolate_real_roots, z_to_q, zdeg, ztrim, QPoly,
    ZPoly,
};
use crate::rat;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::HashMap;
use std::sync::Mutex;

/// A place of K: a prime ideal or an archimedean embedding.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Finite(PrimeIdeal),
    Real(usize),
    Complex(usize),
}

impl Place {
    pub fn is_finite(&self) -> bool {
        matches!(self, Place::Finite(_))
    }
    pub fn prime(&self) -> Option<&PrimeIdeal> {
        match self {
            Place::Finite(p) => Some(p),
            _ => None,
        }
    }
}

/// Element of K as rational coordinates in the power basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    pub coords: Vec<BigRational>,
}

impl FieldElement {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// Is the element in Z[theta]?
    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|c| c.is_integer())
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.coords[1..].iter().all(|c| c.is_zero()) {
            Some(&self.coords[0])
        } else {
            None
        }
    }

    /// Height: max height of the reduced coordinates.
    pub fn height(&self) -> BigInt {
        self.coords.iter().map(rat::height).max().unwrap_or_else(BigInt::zero)
    }

    fn to_qpoly(&self) -> QPoly {
        intpoly::qtrim(self.coords.clone())
    }
}

#[derive(Default)]
struct Caches {
    prime_splits: HashMap<BigInt, Vec<PrimeIdeal>>,
    uniformizers: HashMap<PrimeIdeal, FieldElement>,
}

/// A monogenic number field.
pub struct NumberField {
    min_poly: ZPoly,
    degree: usize,
    discriminant: BigInt,
    real_intervals: Vec<(BigRational, BigRational)>,
    complex_place_count: usize,
    spec_string: String,
    /// primes at which the Dedekind criterion was verified
    monogenic_certificate: Vec<BigInt>,
    caches: Mutex<Caches>,
}

impl std::fmt::Debug for NumberField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("NumberField")
            .field("spec", &self.spec_string)
            .field("degree", &self.degree)
            .field("discriminant", &self.discriminant)
            .finish()
    }
}

/// Parse a field spec: "Q", "Q(sqrt,d)" with d squarefree, or
/// "poly:[c0,...,1]" with a monic integer polynomial.
pub fn parse_field(spec: &str) -> Result<NumberField> {
    let spec = spec.trim();
    if spec == "Q" {
        return NumberField::from_min_poly(vec![BigInt::zero(), BigInt::one()], spec.to_string());
    }
    if let Some(rest) = spec.strip_prefix("Q(sqrt,").and_then(|s| s.strip_suffix(')')) {
        let d: BigInt = rest
            .trim()
            .parse()
            .map_err(|_| Error::InvalidFieldSpec(format!("bad integer in {spec:?}")))?;
        if d.is_zero() || d.is_one() {
            return Err(Error::InvalidFieldSpec("d must be squarefree and not 0 or 1".into()));
        }
        if crate::arith::factor(&d).iter().any(|(_, e)| *e >= 2) {
            return Err(Error::InvalidFieldSpec(format!("{d} is not squarefree")));
        }
        let one = BigInt::one();
        let four = BigInt::from(4);
        let f = if d.mod_floor(&four) == one {
            // x^2 - x + (1-d)/4 keeps the power basis equal to the full ring
            // of integers for d = 1 mod 4
            vec![(&one - &d) / &four, -&one, one.clone()]
        } else {
            vec![-&d, BigInt::zero(), one.clone()]
        };
        return NumberField::from_min_poly(f, spec.to_string());
    }
    if let Some(rest) = spec.strip_prefix("poly:") {
        let rest = rest.trim();
        let inner = rest
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| Error::InvalidFieldSpec(format!("expected poly:[c0,...,1] in {spec:?}")))?;
        let mut coeffs = Vec::new();
        for part in inner.split(',') {
            let c: BigInt = part
                .trim()
                .parse()
                .map_err(|_| Error::InvalidFieldSpec(format!("bad coefficient {part:?}")))?;
            coeffs.push(c);
        }
        let coeffs = ztrim(coeffs);
        if zdeg(&coeffs).unwrap_or(0) < 1 {
            return Err(Error::InvalidFieldSpec("polynomial must have degree >= 1".into()));
        }
        if !coeffs.last().unwrap().is_one() {
            return Err(Error::InvalidFieldSpec("polynomial must be monic".into()));
        }
        return NumberField::from_min_poly(coeffs, spec.to_string());
    }
    Err(Error::InvalidFieldSpec(format!("unrecognized field spec {spec:?}")))
}

impl NumberField {
    pub fn rationals() -> NumberField {
        parse_field("Q").expect("Q always parses")
    }

    fn from_min_poly(f: ZPoly, spec_string: String) -> Result<NumberField> {
        let d = zdeg(&f).expect("nonzero polynomial");
        if !is_irreducible_monic(&f) {
            return Err(Error::ReduciblePolynomial);
        }
        let disc = if d == 1 { BigInt::one() } else { discriminant(&f) };
        let mut certificate = Vec::new();
        for (p, e) in crate::arith::factor(&disc) {
            if e >= 2 {
                if !primes::dedekind_criterion(&f, &p) {
                    return Err(Error::NotMonogenic(p));
                }
                certificate.push(p);
            }
        }
        let real_intervals = isolate_real_roots(&z_to_q(&f));
        let r = real_intervals.len();
        debug_assert_eq!((d - r) % 2, 0);
        Ok(NumberField {
            min_poly: f,
            degree: d,
            discriminant: disc,
            real_intervals,
            complex_place_count: (d - r) / 2,
            spec_string,
            monogenic_certificate: certificate,
            caches: Mutex::new(Caches::default()),
        })
    }

    pub fn min_poly(&self) -> &ZPoly {
        &self.min_poly
    }
    pub fn degree(&self) -> usize {
        self.degree
    }
    pub fn discriminant(&self) -> &BigInt {
        &self.discriminant
    }
    pub fn spec_string(&self) -> &str {
        &self.spec_string
    }
    pub fn monogenic_certificate(&self) -> &[BigInt] {
        &self.monogenic_certificate
    }
    pub fn real_place_count(&self) -> usize {
        self.real_intervals.len()
    }
    pub fn complex_place_count(&self) -> usize {
        self.complex_place_count
    }
    pub fn is_rationals(&self) -> bool {
        self.degree == 1
    }
    /// Does K embed in the reals (i.e. is there at least one real place)?
    pub fn has_real_embedding(&self) -> bool {
        !self.real_intervals.is_empty()
    }

    pub(crate) fn real_interval(&self, idx: usize) -> &(BigRational, BigRational) {
        &self.real_intervals[idx]
    }

    /// All archimedean places.
    pub fn archimedean_places(&self) -> Vec<Place> {
        let mut out: Vec<Place> = (0..self.real_intervals.len()).map(Place::Real).collect();
        out.extend((0..self.complex_place_count).map(Place::Complex));
        out
    }

    // ---- element constructors ----

    pub fn zero(&self) -> FieldElement {
        FieldElement { coords: vec![BigRational::zero(); self.degree] }
    }

    pub fn one(&self) -> FieldElement {
        self.from_rational(&BigRational::one())
    }

    pub fn from_rational(&self, r: &BigRational) -> FieldElement {
        let mut coords = vec![BigRational::zero(); self.degree];
        coords[0] = r.clone();
        FieldElement { coords }
    }

    pub fn from_int(&self, n: i64) -> FieldElement {
        self.from_rational(&rat::qi(n))
    }

    pub fn theta(&self) -> FieldElement {
        let mut coords = vec![BigRational::zero(); self.degree];
        if self.degree >= 2 {
            coords[1] = BigRational::one();
        }
        FieldElement { coords }
    }

    pub fn element(&self, coords: Vec<BigRational>) -> Result<FieldElement> {
        if coords.len() != self.degree {
            return Err(Error::ElementParse(format!(
                "expected {} coordinates, got {}",
                self.degree,
                coords.len()
            )));
        }
        Ok(FieldElement { coords })
    }

    /// Parse "p/q" (a rational embedded in K) or "[c0,c1,...]" coordinates.
    pub fn parse_element(&self, s: &str) -> Result<FieldElement> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
            let mut coords = Vec::new();
            for part in inner.split(',') {
                let c = rat::parse_rational(part)
                    .ok_or_else(|| Error::ElementParse(format!("bad coordinate {part:?}")))?;
                coords.push(c);
            }
            while coords.len() < self.degree {
                coords.push(BigRational::zero());
            }
            return self.element(coords);
        }
        let r = rat::parse_rational(s)
            .ok_or_else(|| Error::ElementParse(format!("bad rational {s:?}")))?;
        Ok(self.from_rational(&r))
    }

    pub fn format_element(&self, x: &FieldElement) -> String {
        if let Some(r) = x.as_rational() {
            rat::format_rational(r)
        } else {
            let parts: Vec<String> = x.coords.iter().map(rat::format_rational).collect();
            format!("[{}]", parts.join(","))
        }
    }

    // ---- arithmetic ----

    fn from_qpoly(&self, p: &QPoly) -> FieldElement {
        let mut coords = p.clone();
        coords.resize(self.degree, BigRational::zero());
        FieldElement { coords }
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldElement {
            coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldElement {
            coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x - y).collect(),
        }
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        FieldElement { coords: a.coords.iter().map(|x| -x).collect() }
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let prod = intpoly::qmul(&a.to_qpoly(), &b.to_qpoly());
        let (_, rem) = intpoly::qdivrem(&prod, &z_to_q(&self.min_poly));
        self.from_qpoly(&rem)
    }

    pub fn scale(&self, a: &FieldElement, c: &BigRational) -> FieldElement {
        FieldElement { coords: a.coords.iter().map(|x| x * c).collect() }
    }

    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::ZeroInput);
        }
        let (g, s) = qextgcd_mod(&a.to_qpoly(), &z_to_q(&self.min_poly));
        debug_assert_eq!(g.len(), 1, "inverse exists: min poly is irreducible");
        let scale = &BigRational::one() / &g[0];
        let inv = s.iter().map(|c| c * &scale).collect::<QPoly>();
        let (_, rem) = intpoly::qdivrem(&inv, &z_to_q(&self.min_poly));
        Ok(self.from_qpoly(&rem))
    }

    pub fn div(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &FieldElement, n: i64) -> Result<FieldElement> {
        if n < 0 {
            return self.pow(&self.inv(a)?, -n);
        }
        let mut acc = self.one();
        let mut base = a.clone();
        let mut e = n as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        Ok(acc)
    }

    /// Field norm N(x) = product of the conjugates, as an exact rational.
    pub fn norm(&self, x: &FieldElement) -> BigRational {
        if x.is_zero() {
            return BigRational::zero();
        }
        intpoly::qresultant(&z_to_q(&self.min_poly), &x.to_qpoly())
    }

    /// Smallest positive integer m with m*x integral, and the integer
    /// coordinates of m*x.
    pub fn integral_scale(&self, x: &FieldElement) -> (BigInt, Vec<BigInt>) {
        let mut m = BigInt::one();
        for c in &x.coords {
            m = m.lcm(c.denom());
        }
        let coords = x
            .coords
            .iter()
            .map(|c| {
                let v = c * BigRational::from_integer(m.clone());
                debug_assert!(v.is_integer());
                v.to_integer()
            })
            .collect();
        (m, coords)
    }

}

/// Extended gcd over Q[x] returning (g, s) with s*a = g mod b.
fn qextgcd_mod(a: &QPoly, b: &QPoly) -> (QPoly, QPoly) {
    let mut r0 = b.clone();
    let mut r1 = a.clone();
    let mut s0: QPoly = vec![];
    let mut s1: QPoly = vec![BigRational::one()];
    while !r1.is_empty() {
        let (q, r) = intpoly::qdivrem(&r0, &r1);
        let s2 = intpoly::qsub(&s0, &intpoly::qmul(&q, &s1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
    }
    (r0, s0)
}

impl NumberField {
    pub(crate) fn cache_prime_split(
        &self,
        p: &BigInt,
        compute: impl FnOnce() -> Vec<PrimeIdeal>,
    ) -> Vec<PrimeIdeal> {
        {
            let guard = self.caches.lock().expect("cache mutex poisoned");
            if let Some(v) = guard.prime_splits.get(p) {
                return v.clone();
            }
        }
        let v = compute();
        let mut guard = self.caches.lock().expect("cache mutex poisoned");
        guard.prime_splits.entry(p.clone()).or_insert_with(|| v.clone());
        v
    }

    pub(crate) fn cache_uniformizer(
        &self,
        prime: &PrimeIdeal,
        compute: impl FnOnce() -> FieldElement,
    ) -> FieldElement {
        {
            let guard = self.caches.lock().expect("cache mutex poisoned");
            if let Some(v) = guard.uniformizers.get(prime) {
                return v.clone();
            }
        }
        let v = compute();
        let mut guard = self.caches.lock().expect("cache mutex poisoned");
        guard.uniformizers.entry(prime.clone()).or_insert_with(|| v.clone());
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{q, qi};

    #[test]
    fn parse_examples() {
        let k = parse_field("Q").unwrap();
        assert_eq!(k.degree(), 1);
        assert_eq!(k.discriminant(), &BigInt::one());
        assert_eq!(k.real_place_count(), 1);

        let k = parse_field("Q(sqrt,-5)").unwrap();
        assert_eq!(k.degree(), 2);
        assert_eq!(k.discriminant(), &BigInt::from(-20));
        assert_eq!(k.real_place_count(), 0);
        assert_eq!(k.complex_place_count(), 1);

        let k = parse_field("poly:[-1,-1,0,1]").unwrap();
        assert_eq!(k.real_place_count(), 1);
        assert_eq!(k.complex_place_count(), 1);
    }

    #[test]
    fn parse_half_integer_generator() {
        // 5 = 1 mod 4: x^2 - x - 1, disc 5
        let k = parse_field("Q(sqrt,5)").unwrap();
        assert_eq!(k.min_poly(), &vec![BigInt::from(-1), BigInt::from(-1), BigInt::one()]);
        assert_eq!(k.discriminant(), &BigInt::from(5));
        assert_eq!(k.real_place_count(), 2);
    }

    #[test]
    fn parse_rejects() {
        assert!(matches!(parse_field("Q(sqrt,4)"), Err(Error::InvalidFieldSpec(_))));
        assert!(matches!(parse_field("poly:[1,2,1]"), Err(Error::ReduciblePolynomial)));
        assert!(matches!(parse_field("poly:[2,0]"), Err(Error::InvalidFieldSpec(_))));
    }

    #[test]
    fn arithmetic_in_quadratic_field() {
        let k = parse_field("Q(sqrt,-5)").unwrap();
        let t = k.theta();
        let x = k.add(&k.one(), &t); // 1 + theta
        let n = k.norm(&x);
        assert_eq!(n, qi(6)); // (1+sqrt(-5))(1-sqrt(-5)) = 6
        let inv = k.inv(&x).unwrap();
        assert_eq!(k.mul(&x, &inv), k.one());
        // theta^2 = -5
        assert_eq!(k.mul(&t, &t), k.from_int(-5));
    }

    #[test]
    fn parse_element_forms() {
        let k = parse_field("Q(sqrt,2)").unwrap();
        let x = k.parse_element("[1/2,3]").unwrap();
        assert_eq!(x.coords, vec![q(1, 2), qi(3)]);
        assert_eq!(k.format_element(&x), "[1/2,3]");
        let y = k.parse_element("7/3").unwrap();
        assert_eq!(y.as_rational(), Some(&q(7, 3)));
        assert_eq!(k.format_element(&y), "7/3");
    }

    #[test]
    fn pow_and_integral_scale() {
        let k = parse_field("Q(sqrt,2)").unwrap();
        let x = k.parse_element("[1/2,1/3]").unwrap();
        let (m, coords) = k.integral_scale(&x);
        assert_eq!(m, BigInt::from(6));
        assert_eq!(coords, vec![BigInt::from(3), BigInt::from(2)]);
        let y = k.pow(&x, -2).unwrap();
        let z = k.pow(&x, 2).unwrap();
        assert_eq!(k.mul(&y, &z), k.one());
    }
}
