//! Exact univariate polynomial machinery over Z and Q: resultants,
//! discriminants, Sturm sequences, real root isolation, and irreducibility
//! certification for monic integer polynomials.

use crate::arith;
use crate::fp::FpCtx;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type ZPoly = Vec<BigInt>; // little-endian, no trailing zeros
pub type QPoly = Vec<BigRational>;

pub fn ztrim(mut f: ZPoly) -> ZPoly {
    while f.last().map(|c| c.is_zero()) == Some(true) {
        f.pop();
    }
    f
}

pub fn qtrim(mut f: QPoly) -> QPoly {
    while f.last().map(|c| c.is_zero()) == Some(true) {
        f.pop();
    }
    f
}

pub fn zdeg(f: &ZPoly) -> Option<usize> {
    if f.is_empty() {
        None
    } else {
        Some(f.len() - 1)
    }
}

pub fn z_to_q(f: &ZPoly) -> QPoly {
    f.iter().map(|c| BigRational::from_integer(c.clone())).collect()
}

pub fn qeval(f: &QPoly, x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in f.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

pub fn zeval(f: &ZPoly, x: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in f.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

pub fn qderivative(f: &QPoly) -> QPoly {
    if f.len() <= 1 {
        return vec![];
    }
    (1..f.len())
        .map(|i| &f[i] * BigRational::from_integer(BigInt::from(i)))
        .collect()
}

pub fn qmul(a: &QPoly, b: &QPoly) -> QPoly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    qtrim(out)
}

pub fn qadd(a: &QPoly, b: &QPoly) -> QPoly {
    let n = a.len().max(b.len());
    let mut out = vec![BigRational::zero(); n];
    for i in 0..n {
        if i < a.len() {
            out[i] += &a[i];
        }
        if i < b.len() {
            out[i] += &b[i];
        }
    }
    qtrim(out)
}

pub fn qsub(a: &QPoly, b: &QPoly) -> QPoly {
    let n = a.len().max(b.len());
    let mut out = vec![BigRational::zero(); n];
    for i in 0..n {
        if i < a.len() {
            out[i] += &a[i];
        }
        if i < b.len() {
            out[i] -= &b[i];
        }
    }
    qtrim(out)
}

pub fn qdivrem(a: &QPoly, b: &QPoly) -> (QPoly, QPoly) {
    assert!(!b.is_empty(), "polynomial division by zero");
    let mut rem = a.clone();
    let db = b.len() - 1;
    if rem.len() <= db {
        return (vec![], rem);
    }
    let mut quot = vec![BigRational::zero(); rem.len() - db];
    while rem.len() > db {
        let dr = rem.len() - 1;
        let c = rem.last().unwrap() / b.last().unwrap();
        quot[dr - db] = c.clone();
        for (j, bj) in b.iter().enumerate() {
            let idx = dr - db + j;
            let v = &rem[idx] - &c * bj;
            rem[idx] = v;
        }
        rem = qtrim(rem);
        if rem.len() <= db {
            break;
        }
    }
    (qtrim(quot), rem)
}

/// Monic gcd over Q.
pub fn qgcd(a: &QPoly, b: &QPoly) -> QPoly {
    let mut a = a.clone();
    let mut b = b.clone();
    while !b.is_empty() {
        let r = qdivrem(&a, &b).1;
        a = b;
        b = r;
    }
    if a.is_empty() {
        return a;
    }
    let lc = a.last().unwrap().clone();
    a.iter().map(|c| c / &lc).collect()
}

/// Resultant of two rational polynomials via the subresultant-free rational
/// Euclidean algorithm with multiplier tracking.
pub fn qresultant(a: &QPoly, b: &QPoly) -> BigRational {
    fn go(a: &QPoly, b: &QPoly) -> BigRational {
        if b.is_empty() {
            return if a.len() == 1 { BigRational::one() } else { BigRational::zero() };
        }
        if a.is_empty() {
            return BigRational::zero();
        }
        let da = a.len() - 1;
        let db = b.len() - 1;
        if db == 0 {
            return b[0].pow(da as i32);
        }
        let r = qdivrem(a, b).1;
        if r.is_empty() {
            return BigRational::zero();
        }
        let dr = r.len() - 1;
        let lb = b.last().unwrap();
        let sign = if (da * db) % 2 == 1 { -BigRational::one() } else { BigRational::one() };
        sign * lb.pow(da as i32 - dr as i32) * go(b, &r)
    }
    go(a, b)
}

pub fn zresultant(a: &ZPoly, b: &ZPoly) -> BigInt {
    let r = qresultant(&z_to_q(a), &z_to_q(b));
    assert!(r.is_integer(), "resultant of integer polynomials must be integral");
    r.to_integer()
}

/// Discriminant of a monic integer polynomial.
pub fn discriminant(f: &ZPoly) -> BigInt {
    let d = zdeg(f).expect("discriminant of zero polynomial");
    assert!(d >= 1);
    assert!(f.last().unwrap().is_one(), "discriminant expects monic input");
    let fq = z_to_q(f);
    let dfq = qderivative(&fq);
    let res = qresultant(&fq, &dfq);
    let sign = if (d * (d - 1) / 2) % 2 == 1 { -BigInt::one() } else { BigInt::one() };
    let r = res.to_integer();
    sign * r
}

fn qsign(x: &BigRational) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// Sturm chain of f (f assumed squarefree for exact root counting; for our
/// irreducible minimal polynomials this always holds).
pub fn sturm_chain(f: &QPoly) -> Vec<QPoly> {
    let mut chain = vec![f.clone(), qderivative(f)];
    loop {
        let n = chain.len();
        if chain[n - 1].is_empty() {
            chain.pop();
            break;
        }
        let r = qdivrem(&chain[n - 2], &chain[n - 1]).1;
        if r.is_empty() {
            break;
        }
        chain.push(r.iter().map(|c| -c).collect());
    }
    chain
}

pub fn sturm_variations(chain: &[QPoly], x: &BigRational) -> usize {
    let mut signs = Vec::new();
    for p in chain {
        let s = qsign(&qeval(p, x));
        if s != 0 {
            signs.push(s);
        }
    }
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Number of real roots of squarefree f in the half-open interval (a, b].
pub fn roots_in_interval(chain: &[QPoly], a: &BigRational, b: &BigRational) -> usize {
    sturm_variations(chain, a) - sturm_variations(chain, b)
}

/// Cauchy bound: all real roots lie in (-B, B).
pub fn root_bound(f: &QPoly) -> BigRational {
    let lc = f.last().expect("root bound of zero polynomial");
    let mut m = BigRational::zero();
    for c in &f[..f.len() - 1] {
        let a = (c / lc).abs();
        if a > m {
            m = a;
        }
    }
    m + BigRational::one()
}

/// Isolating intervals (a, b] for the real roots of a squarefree rational
/// polynomial, in increasing order, with f nonzero at both endpoints.
pub fn isolate_real_roots(f: &QPoly) -> Vec<(BigRational, BigRational)> {
    if f.len() <= 1 {
        return vec![];
    }
    let chain = sturm_chain(f);
    let bound = root_bound(f);
    // Cauchy bound is strict, so +-bound are never roots of f.
    let mut work = vec![(-bound.clone(), bound)];
    let mut found: Vec<(BigRational, BigRational)> = Vec::new();
    while let Some((a, b)) = work.pop() {
        let n = roots_in_interval(&chain, &a, &b);
        if n == 0 {
            continue;
        }
        if n == 1 {
            found.push((a, b));
            continue;
        }
        let mut mid = (&a + &b) / BigRational::from_integer(BigInt::from(2));
        // keep endpoints off the roots of f
        let mut adjust = (&b - &a) / BigRational::from_integer(BigInt::from(16));
        while qeval(f, &mid).is_zero() {
            mid += &adjust;
            adjust /= BigRational::from_integer(BigInt::from(4));
        }
        work.push((a, mid.clone()));
        work.push((mid, b));
    }
    found.sort_by(|x, y| x.0.cmp(&y.0));
    found
}

/// Bisect an isolating interval once, keeping exactly one root inside and
/// endpoints off the roots of f.
pub fn refine_interval(
    chain: &[QPoly],
    f: &QPoly,
    interval: &(BigRational, BigRational),
) -> (BigRational, BigRational) {
    let (a, b) = interval;
    let mut mid = (a + b) / BigRational::from_integer(BigInt::from(2));
    let mut adjust = (b - a) / BigRational::from_integer(BigInt::from(16));
    while qeval(f, &mid).is_zero() {
        mid += &adjust;
        adjust /= BigRational::from_integer(BigInt::from(4));
    }
    if roots_in_interval(chain, a, &mid) == 1 {
        (a.clone(), mid)
    } else {
        (mid, b.clone())
    }
}

/// Does f, squarefree with exactly one root r in (a, b], satisfy g(r) > 0 /
/// < 0? Requires gcd(f, g) = 1 so the sign is well defined. Returns +1 or -1.
pub fn sign_at_root(f: &QPoly, interval: &(BigRational, BigRational), g: &QPoly) -> i8 {
    assert!(!g.is_empty(), "sign of zero polynomial at a root");
    let fchain = sturm_chain(f);
    let gchain = sturm_chain(&squarefree_part(g));
    let mut iv = interval.clone();
    loop {
        // If g has no root in the closed interval and g(a) != 0, the sign of g
        // is constant there and equals the sign at either endpoint.
        let ga = qeval(g, &iv.0);
        let gb = qeval(g, &iv.1);
        if !ga.is_zero() && !gb.is_zero() && qsign(&ga) == qsign(&gb) {
            let inside = sturm_variations(&gchain, &iv.0) - sturm_variations(&gchain, &iv.1);
            if inside == 0 {
                return qsign(&ga);
            }
        }
        iv = refine_interval(&fchain, f, &iv);
    }
}

pub fn squarefree_part(f: &QPoly) -> QPoly {
    let g = qgcd(f, &qderivative(f));
    if g.len() <= 1 {
        return f.clone();
    }
    qdivrem(f, &g).0
}

/// Irreducibility over Q for monic integer polynomials.
///
/// Strategy: rational-root test settles degree <= 3; otherwise look for a
/// prime p not dividing the discriminant with f irreducible mod p, and
/// intersect feasible factor-degree sets mod several primes; if a nontrivial
/// degree stays feasible, run a Kronecker interpolation search which is
/// complete for the small inputs this crate supports.
pub fn is_irreducible_monic(f: &ZPoly) -> bool {
    let d = match zdeg(f) {
        None | Some(0) => return false,
        Some(d) => d,
    };
    assert!(f.last().unwrap().is_one(), "irreducibility test expects monic input");
    if d == 1 {
        return true;
    }
    if has_integer_root(f) {
        return false;
    }
    if d <= 3 {
        return true; // no linear factor => irreducible for degree 2, 3
    }
    let disc = discriminant(f);
    if disc.is_zero() {
        return false; // repeated factor
    }
    let mut feasible: Option<std::collections::BTreeSet<usize>> = None;
    let mut tested = 0u32;
    for p in arith::primes() {
        if tested >= 12 {
            break;
        }
        let pb = BigInt::from(p);
        if (&disc % &pb).is_zero() {
            continue;
        }
        tested += 1;
        let ctx = FpCtx::new(p);
        let fp: Vec<u64> = f
            .iter()
            .map(|c| {
                let r = c.mod_floor(&pb);
                r.to_u64().unwrap()
            })
            .collect();
        let factors = ctx.factor(&fp);
        if factors.len() == 1 && factors[0].1 == 1 {
            return true;
        }
        let degs: Vec<usize> = factors
            .iter()
            .flat_map(|(g, m)| std::iter::repeat(g.len() - 1).take(*m as usize))
            .collect();
        let sums = subset_sums(&degs);
        feasible = Some(match feasible {
            None => sums,
            Some(prev) => prev.intersection(&sums).copied().collect(),
        });
        if let Some(s) = &feasible {
            if s.iter().all(|&k| k == 0 || k == d) {
                return true;
            }
        }
    }
    let candidates: Vec<usize> = feasible
        .map(|s| s.into_iter().filter(|&k| k >= 1 && k <= d / 2).collect())
        .unwrap_or_else(|| (1..=d / 2).collect());
    for k in candidates {
        if kronecker_has_factor_of_degree(f, k) {
            return false;
        }
    }
    true
}

fn has_integer_root(f: &ZPoly) -> bool {
    // monic: any rational root is an integer dividing f(0)
    let c0 = &f[0];
    if c0.is_zero() {
        return true;
    }
    let divisors = all_divisors(c0);
    for t in divisors {
        if zeval(f, &t).is_zero() || zeval(f, &(-&t)).is_zero() {
            return true;
        }
    }
    false
}

fn all_divisors(n: &BigInt) -> Vec<BigInt> {
    let fac = arith::factor(n);
    let mut divs = vec![BigInt::one()];
    for (p, e) in fac {
        let mut next = Vec::new();
        for d in &divs {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        divs = next;
    }
    divs.sort();
    divs.dedup();
    divs
}

fn subset_sums(degs: &[usize]) -> std::collections::BTreeSet<usize> {
    let mut set = std::collections::BTreeSet::new();
    set.insert(0usize);
    for &d in degs {
        let mut next = set.clone();
        for s in &set {
            next.insert(s + d);
        }
        set = next;
    }
    set
}

/// Kronecker search: does f have a monic integer factor of degree exactly k?
/// Interpolates candidate factors through divisor tuples of f at k+1 points.
fn kronecker_has_factor_of_degree(f: &ZPoly, k: usize) -> bool {
    // evaluation points 0, 1, -1, 2, -2, ...
    let mut points: Vec<BigInt> = Vec::new();
    let mut t = BigInt::zero();
    while points.len() < k + 1 {
        if !zeval(f, &t).is_zero() {
            points.push(t.clone());
        }
        t = if t.is_positive() { -t } else { -t + 1 };
    }
    let values: Vec<Vec<BigInt>> = points
        .iter()
        .map(|x| {
            let v = zeval(f, x);
            let mut ds = all_divisors(&v);
            let negs: Vec<BigInt> = ds.iter().map(|d| -d).collect();
            ds.extend(negs);
            ds
        })
        .collect();
    let mut idx = vec![0usize; k + 1];
    loop {
        let tuple: Vec<BigInt> = idx.iter().zip(&values).map(|(&i, v)| v[i].clone()).collect();
        if let Some(g) = interpolate_integer_poly(&points, &tuple) {
            if g.len() == k + 1 && g.last().unwrap().is_one() && zdivides(&g, f) {
                return true;
            }
        }
        // odometer
        let mut i = 0;
        loop {
            idx[i] += 1;
            if idx[i] < values[i].len() {
                break;
            }
            idx[i] = 0;
            i += 1;
            if i > k {
                return false;
            }
        }
    }
}

fn interpolate_integer_poly(points: &[BigInt], values: &[BigInt]) -> Option<ZPoly> {
    // Lagrange over Q, then check integrality
    let n = points.len();
    let mut acc: QPoly = vec![];
    for i in 0..n {
        let mut term: QPoly = vec![BigRational::one()];
        let mut denom = BigRational::one();
        for j in 0..n {
            if i == j {
                continue;
            }
            term = qmul(
                &term,
                &vec![
                    BigRational::from_integer(-points[j].clone()),
                    BigRational::one(),
                ],
            );
            denom *= BigRational::from_integer(&points[i] - &points[j]);
        }
        let scale = BigRational::from_integer(values[i].clone()) / denom;
        let scaled: QPoly = term.iter().map(|c| c * &scale).collect();
        acc = qadd(&acc, &scaled);
    }
    let mut out = Vec::with_capacity(acc.len());
    for c in acc {
        if !c.is_integer() {
            return None;
        }
        out.push(c.to_integer());
    }
    Some(ztrim(out))
}

fn zdivides(g: &ZPoly, f: &ZPoly) -> bool {
    let (q, r) = qdivrem(&z_to_q(f), &z_to_q(g));
    let _ = q;
    r.is_empty()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zp(v: &[i64]) -> ZPoly {
        ztrim(v.iter().map(|&c| BigInt::from(c)).collect())
    }

    #[test]
    fn resultant_and_discriminant() {
        // disc(x^2+5) = -20
        assert_eq!(discriminant(&zp(&[5, 0, 1])), BigInt::from(-20));
        // disc(x^3 - x - 1) = -23
        assert_eq!(discriminant(&zp(&[-1, -1, 0, 1])), BigInt::from(-23));
        // disc(x^2 - x - 1) = 5
        assert_eq!(discriminant(&zp(&[-1, -1, 1])), BigInt::from(5));
        // Res(x^2+5, x+1) = f(-1) = 6
        assert_eq!(zresultant(&zp(&[5, 0, 1]), &zp(&[1, 1])), BigInt::from(6));
    }

    #[test]
    fn isolate_sqrt2() {
        let f = z_to_q(&zp(&[-2, 0, 1]));
        let roots = isolate_real_roots(&f);
        assert_eq!(roots.len(), 2);
        // second root is sqrt(2) ~ 1.414
        let (a, b) = &roots[1];
        assert!(*a < BigRational::from_integer(BigInt::from(2)));
        assert!(*b > BigRational::one());
    }

    #[test]
    fn sign_of_one_minus_theta() {
        // f = x^2 - 2; at root -sqrt2 the value of 1 - x is positive, at +sqrt2 negative
        let f = z_to_q(&zp(&[-2, 0, 1]));
        let roots = isolate_real_roots(&f);
        let g = z_to_q(&zp(&[1, -1]));
        assert_eq!(sign_at_root(&f, &roots[0], &g), 1);
        assert_eq!(sign_at_root(&f, &roots[1], &g), -1);
    }

    #[test]
    fn irreducibility_certificates() {
        assert!(is_irreducible_monic(&zp(&[5, 0, 1]))); // x^2+5
        assert!(is_irreducible_monic(&zp(&[-1, -1, 0, 1]))); // x^3-x-1
        assert!(is_irreducible_monic(&zp(&[1, 0, 0, 0, 1]))); // x^4+1
        assert!(is_irreducible_monic(&zp(&[1, 1, 1, 1, 1]))); // Phi_5
        assert!(!is_irreducible_monic(&zp(&[-1, 0, 1]))); // (x-1)(x+1)
        assert!(!is_irreducible_monic(&zp(&[4, 0, 5, 0, 1]))); // (x^2+1)(x^2+4)
        assert!(!is_irreducible_monic(&zp(&[1, 2, 3, 2, 1]))); // (x^2+x+1)^2
    }

    #[test]
    fn roots_count_quadratic_field_polys() {
        // x^2-x+(1-5)/4 = x^2-x-1 has two real roots
        let f = z_to_q(&zp(&[-1, -1, 1]));
        assert_eq!(isolate_real_roots(&f).len(), 2);
        // x^2+1 none
        assert_eq!(isolate_real_roots(&z_to_q(&zp(&[1, 0, 1]))).len(), 0);
    }
}
