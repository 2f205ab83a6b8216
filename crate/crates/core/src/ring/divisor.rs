//! Height-one primes of `R`, valuations, divisors, and factorization.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::field::{BaseField, Scalar};
use super::frac::{FieldElem, LocalElem, Valuation};
use super::poly::{default_var_names, gcd, Monomial, Poly};
use super::upoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Certification {
    Proven,
    Hinted,
}

/// An irreducible polynomial vanishing at the origin, i.e. a generator of a
/// height-one prime of `R`. Identity is the associate-canonical polynomial;
/// the certification flag does not take part in comparisons.
#[derive(Clone, Debug)]
pub struct PrimeElem {
    poly: Poly,
    certified: Certification,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FactorError {
    #[error("prime candidate {0} does not vanish at the origin")]
    NotAtOrigin(String),
    #[error("prime candidate {0} is zero or has a monomial factor")]
    NotIrreducible(String),
    #[error("hints {0} and {1} are associate or share a factor")]
    HintsNotCoprime(String, String),
    #[error("cofactor {0} is not a unit of the local ring and no hint covers it")]
    HintInsufficient(String),
    #[error("cannot factor zero")]
    Zero,
    #[error("element {0} is not in the local ring")]
    NotIntegral(String),
}

impl PrimeElem {
    /// Validates and certifies a prime candidate. Degree-one polynomials and
    /// polynomials whose restriction to some line stays irreducible of full
    /// degree (over `F_p`) are proven; everything else is marked hinted.
    pub fn new(poly: Poly) -> Result<Self, FactorError> {
        if poly.is_zero() || poly.is_constant() {
            return Err(FactorError::NotIrreducible(poly.to_string()));
        }
        if !poly.constant_term().is_zero() {
            return Err(FactorError::NotAtOrigin(poly.to_string()));
        }
        let poly = poly.canonical();
        let monomial_gcd = poly
            .terms()
            .map(|(m, _)| m.clone())
            .reduce(|a, b| Monomial(a.0.iter().zip(&b.0).map(|(x, y)| *x.min(y)).collect()))
            .unwrap();
        if !monomial_gcd.is_one() && poly.num_terms() > 1 {
            return Err(FactorError::NotIrreducible(poly.to_string()));
        }
        if poly.num_terms() == 1 && monomial_gcd.degree() != 1 {
            return Err(FactorError::NotIrreducible(poly.to_string()));
        }
        let certified = if poly.total_degree() == Some(1) || probe_irreducible(&poly) {
            Certification::Proven
        } else {
            Certification::Hinted
        };
        Ok(PrimeElem { poly, certified })
    }

    /// The coordinate prime `x_v`.
    pub fn variable(field: BaseField, nvars: usize, v: usize) -> Self {
        PrimeElem {
            poly: Poly::var(field, nvars, v),
            certified: Certification::Proven,
        }
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn certified(&self) -> Certification {
        self.certified
    }

    pub fn as_field(&self) -> FieldElem {
        FieldElem::from_poly(self.poly.clone())
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        self.poly.fmt_with(names)
    }

    /// Largest `m` with `self^m | a`; `None` for `a = 0`.
    pub fn multiplicity(&self, a: &Poly) -> Option<u32> {
        if a.is_zero() {
            return None;
        }
        let mut m = 0;
        let mut cur = a.clone();
        while let Some(q) = cur.div_exact(&self.poly) {
            cur = q;
            m += 1;
        }
        Some(m)
    }

    /// The valuation ring `R_p`.
    pub fn localize(&self) -> DvrView<'_> {
        DvrView { prime: self }
    }
}

impl PartialEq for PrimeElem {
    fn eq(&self, other: &Self) -> bool {
        self.poly == other.poly
    }
}

impl Eq for PrimeElem {}

impl std::hash::Hash for PrimeElem {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.poly.hash(state)
    }
}

/// Lower total degree first; among equal degrees the graded-lex larger
/// polynomial first, so coordinate primes come out as `x_1, x_2, ...`.
impl Ord for PrimeElem {
    fn cmp(&self, other: &Self) -> Ordering {
        self.poly
            .total_degree()
            .cmp(&other.poly.total_degree())
            .then_with(|| other.poly.cmp(&self.poly))
    }
}

impl PartialOrd for PrimeElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PrimeElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.poly.fmt(f)
    }
}

/// Restricts `f` to random lines through random points and asks whether the
/// univariate restriction is irreducible of the same degree. Only available
/// over `F_p`; returns `false` when no such line is found.
fn probe_irreducible(f: &Poly) -> bool {
    let p = match f.field() {
        BaseField::Prime(p) => p,
        BaseField::Rationals => return false,
    };
    let n = f.nvars();
    let deg = f.total_degree().unwrap_or(0) as usize;
    let field = f.field();
    if n == 1 {
        return upoly::is_irreducible(&to_dense(f, p), p);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(PROBE_SEED);
    let s = Poly::var(field, 1, 0);
    for _ in 0..64 {
        let images: Vec<Poly> = (0..n)
            .map(|_| {
                let a = field.from_int(rng.gen_range(0..p) as i64);
                let b = field.from_int(rng.gen_range(0..p) as i64);
                s.scale(&a).add(&Poly::constant(field, 1, b))
            })
            .collect();
        let r = f.substitute(&images);
        if r.total_degree() != Some(deg as u32) {
            continue;
        }
        if upoly::is_irreducible(&to_dense(&r, p), p) {
            return true;
        }
    }
    false
}

const PROBE_SEED: u64 = 0x177ed;

fn to_dense(f: &Poly, p: u64) -> Vec<u64> {
    let deg = f.degree_in(0).unwrap_or(0) as usize;
    let mut out = vec![0u64; deg + 1];
    for (m, c) in f.terms() {
        out[m.0[0] as usize] = scalar_to_u64(c, p);
    }
    while out.last() == Some(&0) {
        out.pop();
    }
    out
}

fn scalar_to_u64(c: &Scalar, p: u64) -> u64 {
    let v: BigInt = c.to_integer();
    (v % BigInt::from(p)).to_u64().unwrap_or(0)
}

fn from_dense(field: BaseField, a: &[u64]) -> Poly {
    Poly::from_terms(
        field,
        1,
        a.iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .map(|(i, c)| (vec![i as u32], field.from_int(*c as i64))),
    )
}

/// `ord_p(e)`; `Infinity` exactly for `e = 0`.
pub fn ord_at(p: &PrimeElem, e: &FieldElem) -> Valuation {
    if e.is_zero() {
        return Valuation::Infinity;
    }
    let a = p.multiplicity(e.num()).unwrap() as i64;
    let b = p.multiplicity(e.den()).unwrap() as i64;
    Valuation::Finite(a - b)
}

/// The discrete valuation ring `R_p` seen through `ord_p`.
#[derive(Clone, Copy, Debug)]
pub struct DvrView<'a> {
    prime: &'a PrimeElem,
}

impl DvrView<'_> {
    pub fn uniformizer(&self) -> &PrimeElem {
        self.prime
    }

    pub fn ord(&self, e: &FieldElem) -> Valuation {
        ord_at(self.prime, e)
    }

    pub fn is_unit(&self, e: &FieldElem) -> bool {
        self.ord(e) == Valuation::Finite(0)
    }

    pub fn contains(&self, e: &FieldElem) -> bool {
        self.ord(e) >= Valuation::Finite(0)
    }
}

/// Formal sum of primes with nonzero integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Divisor(BTreeMap<PrimeElem, i64>);

impl Divisor {
    pub fn new() -> Self {
        Divisor(BTreeMap::new())
    }

    pub fn single(p: PrimeElem, e: i64) -> Self {
        let mut d = Divisor::new();
        d.add_entry(p, e);
        d
    }

    pub fn add_entry(&mut self, p: PrimeElem, e: i64) {
        if e == 0 {
            return;
        }
        let v = self.0.entry(p).or_insert(0);
        *v += e;
        if *v == 0 {
            self.0.retain(|_, v| *v != 0);
        }
    }

    pub fn get(&self, p: &PrimeElem) -> i64 {
        self.0.get(p).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PrimeElem, i64)> {
        self.0.iter().map(|(p, e)| (p, *e))
    }

    pub fn primes(&self) -> Vec<PrimeElem> {
        self.0.keys().cloned().collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&self, other: &Divisor) -> Divisor {
        let mut out = self.clone();
        for (p, e) in other.iter() {
            out.add_entry(p.clone(), e);
        }
        out
    }

    pub fn sub(&self, other: &Divisor) -> Divisor {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, k: i64) -> Divisor {
        let mut out = Divisor::new();
        for (p, e) in self.iter() {
            out.add_entry(p.clone(), e * k);
        }
        out
    }

    pub fn is_effective(&self) -> bool {
        self.0.values().all(|&e| e > 0)
    }

    /// Entrywise `self <= other`.
    pub fn le(&self, other: &Divisor) -> bool {
        other.sub(self).is_effective()
    }

    /// Degree in the free abelian group: the sum of coefficients.
    pub fn total(&self) -> i64 {
        self.0.values().sum()
    }

    /// The element `prod p^e` of `K`.
    pub fn to_elem(&self, field: BaseField, nvars: usize) -> FieldElem {
        let mut acc = FieldElem::one(field, nvars);
        for (p, e) in self.iter() {
            acc = acc.mul(&p.as_field().pow(e));
        }
        acc
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        let parts: Vec<String> = self
            .iter()
            .map(|(p, e)| format!("{}:{}", p.fmt_with(names), e))
            .collect();
        format!("{{{}}}", parts.join(", "))
    }

    /// Exponents keyed by rendered prime, for serialization.
    pub fn to_map(&self, names: &[String]) -> BTreeMap<String, i64> {
        self.iter().map(|(p, e)| (p.fmt_with(names), e)).collect()
    }
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self
            .0
            .keys()
            .next()
            .map(|p| default_var_names(p.poly.nvars()))
            .unwrap_or_default();
        f.write_str(&self.fmt_with(&names))
    }
}

impl FromIterator<(PrimeElem, i64)> for Divisor {
    fn from_iter<I: IntoIterator<Item = (PrimeElem, i64)>>(iter: I) -> Self {
        let mut d = Divisor::new();
        for (p, e) in iter {
            d.add_entry(p, e);
        }
        d
    }
}

/// Result of [`factor_element`]: `e = unit * prod p^divisor(p)`.
#[derive(Clone, Debug)]
pub struct Factorization {
    pub divisor: Divisor,
    pub unit: LocalElem,
    /// For `d = 1`: the factorization of the numerator in `k[t]` as
    /// `(factor, multiplicity)` pairs, and whether it is complete (it is over
    /// `F_p`; over `Q` only the squarefree decomposition is computed).
    pub univariate: Option<(Vec<(Poly, u32)>, bool)>,
}

/// Factors a nonzero element of `R`.
///
/// With one variable the only prime of `R` is `t`, so no hints are needed.
/// With several variables each hint is divided out to its maximal power and
/// the remaining cofactor must be a unit of `R`; coordinate primes `x_i` are
/// always tried in addition to the hints.
pub fn factor_element(e: &LocalElem, hints: &[PrimeElem]) -> Result<Factorization, FactorError> {
    if e.is_zero() {
        return Err(FactorError::Zero);
    }
    let f = e.as_field();
    let (divisor, cofactor) = factor_poly(f.num(), hints)?;
    let unit = FieldElem::new(cofactor.clone(), f.den().clone())
        .and_then(|u| u.to_local())
        .expect("denominator is a unit");
    let univariate = if f.nvars() == 1 {
        Some(univariate_factors(f.num()))
    } else {
        None
    };
    let check = divisor.to_elem(f.field(), f.nvars()).mul(unit.as_field());
    assert_eq!(&check, f, "factorization round trip");
    Ok(Factorization {
        divisor,
        unit,
        univariate,
    })
}

/// Divisor of an arbitrary nonzero element of `K` over the primes of `R`.
pub fn field_divisor(e: &FieldElem, hints: &[PrimeElem]) -> Result<Divisor, FactorError> {
    if e.is_zero() {
        return Err(FactorError::Zero);
    }
    let (dn, _) = factor_poly(e.num(), hints)?;
    let (dd, _) = factor_poly(e.den(), hints)?;
    Ok(dn.sub(&dd))
}

/// Checks hints for pairwise coprimality.
pub fn check_hints(hints: &[PrimeElem]) -> Result<(), FactorError> {
    for (i, a) in hints.iter().enumerate() {
        for b in &hints[i + 1..] {
            if !gcd(a.poly(), b.poly()).is_constant() {
                return Err(FactorError::HintsNotCoprime(a.to_string(), b.to_string()));
            }
        }
    }
    Ok(())
}

fn factor_poly(a: &Poly, hints: &[PrimeElem]) -> Result<(Divisor, Poly), FactorError> {
    let field = a.field();
    let n = a.nvars();
    let mut primes: Vec<PrimeElem> = Vec::new();
    for h in hints {
        if !primes.contains(h) {
            primes.push(h.clone());
        }
    }
    for v in 0..n {
        let x = PrimeElem::variable(field, n, v);
        if !primes.contains(&x) {
            primes.push(x);
        }
    }
    let mut divisor = Divisor::new();
    let mut rest = a.clone();
    for p in &primes {
        let m = p.multiplicity(&rest).unwrap();
        if m > 0 {
            rest = rest.div_exact(&p.poly().pow(m)).unwrap();
            divisor.add_entry(p.clone(), m as i64);
        }
    }
    if rest.constant_term().is_zero() {
        return Err(FactorError::HintInsufficient(rest.to_string()));
    }
    Ok((divisor, rest))
}

fn univariate_factors(a: &Poly) -> (Vec<(Poly, u32)>, bool) {
    let field = a.field();
    match field {
        BaseField::Prime(p) => {
            let (_, fs) = upoly::factor(&to_dense(a, p), p);
            (
                fs.iter().map(|(g, m)| (from_dense(field, g), *m)).collect(),
                true,
            )
        }
        BaseField::Rationals => (squarefree_q(a), false),
    }
}

/// Squarefree decomposition in `Q[t]` (Yun).
fn squarefree_q(a: &Poly) -> Vec<(Poly, u32)> {
    let mut out = Vec::new();
    if a.is_constant() {
        return out;
    }
    let a = a.canonical();
    let da = a.derivative(0);
    let mut c = gcd(&a, &da);
    let mut w = a.div_exact(&c).unwrap();
    let mut i = 1;
    while !w.is_constant() {
        let y = gcd(&w, &c);
        let z = w.div_exact(&y).unwrap();
        if !z.is_constant() {
            out.push((z.canonical(), i));
        }
        c = c.div_exact(&y).unwrap();
        w = y;
        i += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> BaseField {
        BaseField::Prime(5)
    }

    fn fe(p: Poly) -> FieldElem {
        FieldElem::from_poly(p)
    }

    #[test]
    fn valuation_examples() {
        let x = Poly::var(f5(), 2, 0);
        let y = Poly::var(f5(), 2, 1);
        let one = Poly::one(f5(), 2);
        let px = PrimeElem::new(x.clone()).unwrap();
        let e = fe(x.pow(2).mul(&one.add(&y)));
        assert_eq!(ord_at(&px, &e), Valuation::Finite(2));
        let q = BaseField::Rationals;
        let (xq, yq) = (Poly::var(q, 2, 0), Poly::var(q, 2, 1));
        let pxy = PrimeElem::new(xq.add(&yq)).unwrap();
        assert_eq!(pxy.certified(), Certification::Proven);
        let e = fe(xq.pow(2).sub(&yq.pow(2)));
        assert_eq!(ord_at(&pxy, &e), Valuation::Finite(1));
        let cube = FieldElem::new(xq.add(&yq).pow(3), xq.clone()).unwrap();
        assert_eq!(pxy.localize().ord(&cube), Valuation::Finite(3));
        let t = PrimeElem::new(Poly::var(f5(), 1, 0)).unwrap();
        assert_eq!(ord_at(&t, &FieldElem::zero(f5(), 1)), Valuation::Infinity);
        let py = PrimeElem::new(y).unwrap();
        assert!(py.localize().is_unit(&fe(x)));
    }

    #[test]
    fn factor_examples() {
        let x = Poly::var(f5(), 2, 0);
        let y = Poly::var(f5(), 2, 1);
        let px = PrimeElem::new(x.clone()).unwrap();
        let py = PrimeElem::new(y.clone()).unwrap();
        let e = LocalElem::from_poly(x.pow(2).mul(&y));
        let fz = factor_element(&e, &[px.clone(), py.clone()]).unwrap();
        assert_eq!(fz.divisor.get(&px), 2);
        assert_eq!(fz.divisor.get(&py), 1);
        assert!(fz.unit.as_field().is_one());

        let t = Poly::var(f5(), 1, 0);
        let e = LocalElem::from_poly(t.pow(5).add(&t.pow(3)));
        let fz = factor_element(&e, &[]).unwrap();
        let pt = PrimeElem::new(t.clone()).unwrap();
        assert_eq!(fz.divisor, Divisor::single(pt, 3));
        assert_eq!(fz.unit.as_field().num(), &t.pow(2).add(&Poly::one(f5(), 1)));
        let (full, complete) = fz.univariate.unwrap();
        assert!(complete);
        assert_eq!(full.len(), 3);

        let q = BaseField::Rationals;
        let (xq, yq) = (Poly::var(q, 2, 0), Poly::var(q, 2, 1));
        let e = LocalElem::from_poly(xq.add(&yq).mul(&xq));
        let hx = PrimeElem::new(xq).unwrap();
        assert!(matches!(
            factor_element(&e, &[hx]),
            Err(FactorError::HintInsufficient(_))
        ));
    }

    #[test]
    fn rejects_bad_hints() {
        let x = Poly::var(f5(), 2, 0);
        let y = Poly::var(f5(), 2, 1);
        assert!(PrimeElem::new(x.mul(&y)).is_err());
        assert!(PrimeElem::new(x.add(&Poly::one(f5(), 2))).is_err());
        let a = PrimeElem::new(x.add(&y)).unwrap();
        let b = PrimeElem::new(x.add(&y).scale(&f5().from_int(3))).unwrap();
        assert!(check_hints(&[a, b]).is_err());
    }
}
