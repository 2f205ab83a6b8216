//! Sparse multivariate polynomials over a [`BaseField`].
//!
//! Terms are keyed by [`Monomial`] under graded-lex order, so the last entry
//! of the term map is the leading term.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::field::{lift, small, BaseField, Scalar};

/// Exponent vector; ordered graded-lex with `x_1 > x_2 > ... > x_d`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, v: usize, e: u32) -> Self {
        let mut m = vec![0; nvars];
        m[v] = e;
        Monomial(m)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            out.push(a.checked_sub(*b)?);
        }
        Some(Monomial(out))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly {
    field: BaseField,
    nvars: usize,
    terms: BTreeMap<Monomial, Scalar>,
}

/// Variable names used when none are supplied: `t` for one variable,
/// `x, y, z` up to three, `x1..xd` beyond.
pub fn default_var_names(nvars: usize) -> Vec<String> {
    match nvars {
        1 => vec!["t".into()],
        2 => vec!["x".into(), "y".into()],
        3 => vec!["x".into(), "y".into(), "z".into()],
        n => (1..=n).map(|i| format!("x{i}")).collect(),
    }
}

impl Poly {
    pub fn zero(field: BaseField, nvars: usize) -> Self {
        Poly {
            field,
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(field: BaseField, nvars: usize) -> Self {
        Self::constant(field, nvars, Scalar::one())
    }

    pub fn constant(field: BaseField, nvars: usize, c: Scalar) -> Self {
        Self::monomial(field, nvars, Monomial::one(nvars), c)
    }

    pub fn from_int(field: BaseField, nvars: usize, n: i64) -> Self {
        Self::constant(field, nvars, field.from_int(n))
    }

    pub fn var(field: BaseField, nvars: usize, v: usize) -> Self {
        Self::monomial(field, nvars, Monomial::var(nvars, v, 1), Scalar::one())
    }

    pub fn monomial(field: BaseField, nvars: usize, m: Monomial, c: Scalar) -> Self {
        let c = field.reduce(&c);
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly {
            field,
            nvars,
            terms,
        }
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs; repeated
    /// monomials are summed.
    pub fn from_terms(
        field: BaseField,
        nvars: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, Scalar)>,
    ) -> Self {
        let mut p = Poly::zero(field, nvars);
        for (m, c) in terms {
            assert_eq!(m.len(), nvars);
            p.add_term(Monomial(m), &c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: &Scalar) {
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                let c = self.field.reduce(c);
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = self.field.add(o.get(), c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn field(&self) -> BaseField {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn is_one(&self) -> bool {
        self.is_constant() && self.constant_term().is_one()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in increasing graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn leading(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Scalar {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(Scalar::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.leading().map(|(m, _)| m.degree())
    }

    pub fn constant_term(&self) -> Scalar {
        self.terms
            .get(&Monomial::one(self.nvars))
            .cloned()
            .unwrap_or_else(Scalar::zero)
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn contains_var(&self, v: usize) -> bool {
        self.terms.keys().any(|m| m.0[v] > 0)
    }

    pub fn degree_in(&self, v: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.0[v]).max()
    }

    /// Highest-index variable occurring in `self`.
    pub fn main_var(&self) -> Option<usize> {
        (0..self.nvars).rev().find(|&v| self.contains_var(v))
    }

    /// Coefficients with respect to `x_v`; entry `k` multiplies `x_v^k`.
    pub fn coeffs_in(&self, v: usize) -> Vec<Poly> {
        let deg = match self.degree_in(v) {
            Some(d) => d as usize,
            None => return Vec::new(),
        };
        let mut out = vec![Poly::zero(self.field, self.nvars); deg + 1];
        for (m, c) in &self.terms {
            let mut rest = m.0.clone();
            let k = rest[v] as usize;
            rest[v] = 0;
            out[k].terms.insert(Monomial(rest), c.clone());
        }
        out
    }

    pub fn from_coeffs_in(field: BaseField, nvars: usize, v: usize, coeffs: &[Poly]) -> Poly {
        let mut p = Poly::zero(field, nvars);
        for (k, c) in coeffs.iter().enumerate() {
            let shift = Monomial::var(nvars, v, k as u32);
            for (m, a) in &c.terms {
                p.add_term(m.mul(&shift), a);
            }
        }
        p
    }

    pub fn coeff_in(&self, v: usize, k: u32) -> Poly {
        let mut out = Poly::zero(self.field, self.nvars);
        for (m, c) in &self.terms {
            if m.0[v] == k {
                let mut rest = m.0.clone();
                rest[v] = 0;
                out.terms.insert(Monomial(rest), c.clone());
            }
        }
        out
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), &self.field.neg(c));
        }
        out
    }

    pub fn neg(&self) -> Poly {
        self.scale(&self.field.from_int(-1))
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        let c = self.field.reduce(c);
        if c.is_zero() {
            return Poly::zero(self.field, self.nvars);
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, a)| (m.clone(), self.field.mul(a, &c)))
            .collect();
        Poly {
            field: self.field,
            nvars: self.nvars,
            terms,
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Scalar) -> Poly {
        let mut out = Poly::zero(self.field, self.nvars);
        for (a, b) in &self.terms {
            out.add_term(a.mul(m), &self.field.mul(b, c));
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.field, self.nvars);
        }
        if let BaseField::Prime(p) = self.field {
            if let Some(out) = self.mul_small(other, p) {
                return out;
            }
        }
        let mut acc: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let prod = ca * cb;
                let e = acc.entry(m).or_insert_with(Scalar::zero);
                *e += prod;
            }
        }
        let mut out = Poly::zero(self.field, self.nvars);
        for (m, c) in acc {
            let c = self.field.reduce(&c);
            if !c.is_zero() {
                out.terms.insert(m, c);
            }
        }
        out
    }

    /// Product over `F_p` with machine-word coefficients; `None` if some
    /// coefficient is not a canonical residue.
    fn mul_small(&self, other: &Poly, p: u64) -> Option<Poly> {
        let a: Vec<(&Monomial, u64)> = self.terms.iter().map(|(m, c)| Some((m, small(c)?))).collect::<Option<_>>()?;
        let b: Vec<(&Monomial, u64)> = other.terms.iter().map(|(m, c)| Some((m, small(c)?))).collect::<Option<_>>()?;
        let mut acc: BTreeMap<Monomial, u64> = BTreeMap::new();
        for (ma, ca) in &a {
            for (mb, cb) in &b {
                let e = acc.entry(ma.mul(mb)).or_insert(0);
                *e = ((*e as u128 + *ca as u128 * *cb as u128) % p as u128) as u64;
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| *c != 0).map(|(m, c)| (m, lift(c))).collect();
        Some(Poly {
            field: self.field,
            nvars: self.nvars,
            terms,
        })
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(self.field, self.nvars);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(self.clone());
        }
        let (lm_d, lc_d) = d.leading().map(|(m, c)| (m.clone(), c.clone()))?;
        let inv = self.field.inv(&lc_d)?;
        if d.terms.len() == 1 {
            let mut out = Poly::zero(self.field, self.nvars);
            for (m, c) in &self.terms {
                out.terms.insert(m.div(&lm_d)?, self.field.mul(c, &inv));
            }
            return Some(out);
        }
        let mut rem = self.clone();
        let mut quot = Poly::zero(self.field, self.nvars);
        while let Some((lm, lc)) = rem.leading().map(|(m, c)| (m.clone(), c.clone())) {
            let qm = lm.div(&lm_d)?;
            let qc = self.field.mul(&lc, &inv);
            rem = rem.sub(&d.mul_monomial(&qm, &qc));
            quot.add_term(qm, &qc);
        }
        Some(quot)
    }

    pub fn divides(&self, other: &Poly) -> bool {
        other.div_exact(self).is_some()
    }

    /// Pseudo-remainder of `self` by `d` with respect to `x_v`. When the
    /// leading coefficient of `d` is a constant this is the ordinary remainder.
    pub fn prem(&self, d: &Poly, v: usize) -> Poly {
        let dd = d.degree_in(v).expect("nonzero divisor");
        let lc = d.coeff_in(v, dd);
        let field = self.field;
        if lc.is_constant() {
            let inv = field.inv(&lc.constant_term()).expect("nonzero");
            let mut r = self.clone();
            while let Some(dr) = r.degree_in(v) {
                if r.is_zero() || dr < dd {
                    break;
                }
                let lr = r.coeff_in(v, dr).scale(&inv);
                let shift = Poly::monomial(field, self.nvars, Monomial::var(self.nvars, v, dr - dd), Scalar::one());
                r = r.sub(&lr.mul(&shift).mul(d));
            }
            return r;
        }
        let mut r = self.clone();
        while let Some(dr) = r.degree_in(v) {
            if r.is_zero() || dr < dd {
                break;
            }
            let lr = r.coeff_in(v, dr);
            let shift = Poly::monomial(field, self.nvars, Monomial::var(self.nvars, v, dr - dd), Scalar::one());
            r = r.mul(&lc).sub(&lr.mul(&shift).mul(d));
        }
        r
    }

    /// gcd of the coefficients with respect to `x_v`.
    pub fn content_in(&self, v: usize) -> Poly {
        let mut g = Poly::zero(self.field, self.nvars);
        for c in self.coeffs_in(v) {
            if c.is_zero() {
                continue;
            }
            g = gcd(&g, &c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn primitive_part_in(&self, v: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let c = self.content_in(v);
        self.div_exact(&c).expect("content divides").canonical()
    }

    /// Splits `self = u * p` with `u` a nonzero scalar and `p` associate-canonical:
    /// monic over `F_p`, primitive with positive leading coefficient over `Q`.
    /// The zero polynomial maps to `(1, 0)`.
    pub fn normalize(&self) -> (Scalar, Poly) {
        if self.is_zero() {
            return (Scalar::one(), self.clone());
        }
        match self.field {
            BaseField::Prime(_) => {
                let lc = self.leading_coeff();
                let inv = self.field.inv(&lc).expect("nonzero");
                (lc, self.scale(&inv))
            }
            BaseField::Rationals => {
                let mut den_lcm = BigInt::one();
                let mut num_gcd = BigInt::zero();
                for c in self.terms.values() {
                    den_lcm = den_lcm.lcm(c.denom());
                    num_gcd = num_gcd.gcd(c.numer());
                }
                let mut factor = BigRational::new(den_lcm, num_gcd);
                if self.leading_coeff().is_negative() {
                    factor = -factor;
                }
                let p = self.scale(&factor);
                (factor.recip(), p)
            }
        }
    }

    pub fn canonical(&self) -> Poly {
        self.normalize().1
    }

    pub fn derivative(&self, v: usize) -> Poly {
        let mut out = Poly::zero(self.field, self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[v];
            if e == 0 {
                continue;
            }
            let mut mm = m.0.clone();
            mm[v] -= 1;
            out.add_term(Monomial(mm), &self.field.mul(c, &self.field.from_int(e as i64)));
        }
        out
    }

    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        assert_eq!(point.len(), self.nvars);
        let mut acc = Scalar::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                t = self.field.mul(&t, &self.field.pow(x, e as u64));
            }
            acc = self.field.add(&acc, &t);
        }
        acc
    }

    /// Substitutes `x_i -> images[i]`; the images may live in a ring with a
    /// different number of variables.
    pub fn substitute(&self, images: &[Poly]) -> Poly {
        assert_eq!(images.len(), self.nvars);
        let target = images
            .first()
            .map(|p| p.nvars)
            .unwrap_or(self.nvars);
        let mut acc = Poly::zero(self.field, target);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(self.field, target, c.clone());
            for (img, &e) in images.iter().zip(&m.0) {
                if e > 0 {
                    t = t.mul(&img.pow(e));
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Renders with the given variable names, highest term first.
    pub fn fmt_with(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let (neg, mag) = match self.field {
                BaseField::Rationals if c.is_negative() => (true, -c.clone()),
                _ => (false, c.clone()),
            };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors = Vec::new();
            if !mag.is_one() || m.is_one() {
                if mag.is_integer() || m.is_one() {
                    factors.push(mag.to_string());
                } else {
                    factors.push(format!("({})", mag));
                }
            }
            for (v, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(names[v].clone()),
                    _ => factors.push(format!("{}^{}", names[v], e)),
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_with(&default_var_names(self.nvars)))
    }
}

impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.nvars
            .cmp(&other.nvars)
            .then_with(|| self.terms.iter().rev().cmp(other.terms.iter().rev()))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Associate-canonical gcd by primitive PRS, recursing on the main variable.
/// `gcd(a, 0)` is `a` normalized; `gcd(0, 0)` is zero.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.canonical();
    }
    if b.is_zero() {
        return a.canonical();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one(a.field, a.nvars);
    }
    if a.terms.len() == 1 && b.terms.len() == 1 {
        let (ma, _) = a.leading().unwrap();
        let (mb, _) = b.leading().unwrap();
        let m = Monomial(ma.0.iter().zip(&mb.0).map(|(x, y)| *x.min(y)).collect());
        return Poly::monomial(a.field, a.nvars, m, Scalar::one());
    }
    if certify_coprime(a, b) {
        return Poly::one(a.field, a.nvars);
    }
    let v = a.main_var().max(b.main_var()).expect("non-constant");
    if !a.contains_var(v) {
        return gcd(a, &b.content_in(v));
    }
    if !b.contains_var(v) {
        return gcd(&a.content_in(v), b);
    }
    let ca = a.content_in(v);
    let cb = b.content_in(v);
    let c = gcd(&ca, &cb);
    let mut p = a.div_exact(&ca).unwrap().canonical();
    let mut q = b.div_exact(&cb).unwrap().canonical();
    if p.degree_in(v) < q.degree_in(v) {
        std::mem::swap(&mut p, &mut q);
    }
    loop {
        let r = p.prem(&q, v);
        if r.is_zero() {
            break;
        }
        if !r.contains_var(v) {
            q = Poly::one(a.field, a.nvars);
            break;
        }
        p = q;
        q = r.primitive_part_in(v);
    }
    c.mul(&q.primitive_part_in(v)).canonical()
}

/// Evaluation points tried by [`certify_coprime`].
const PROBES: usize = 3;

/// A sufficient test for `gcd(a, b) = 1` in two or more variables. A common
/// factor `h` involving `x_w` keeps positive `x_w`-degree after substituting
/// constants for the other variables at any point where the leading
/// `x_w`-coefficient of `a` does not vanish, so coprime univariate images
/// for every shared variable rule out every `h`.
fn certify_coprime(a: &Poly, b: &Poly) -> bool {
    let n = a.nvars;
    let used: Vec<usize> = (0..n).filter(|&v| a.contains_var(v) || b.contains_var(v)).collect();
    if used.len() < 2 {
        return false;
    }
    let field = a.field;
    let value = |k: usize, v: usize| -> Scalar {
        // small deterministic spread of nonzero values
        let raw = (1 + 3 * k + 5 * v + k * v) as u64;
        match field {
            BaseField::Prime(p) => lift(1 + raw % (p - 1)),
            BaseField::Rationals => Scalar::from_integer(BigInt::from(raw)),
        }
    };
    used.iter().all(|&w| {
        if !a.contains_var(w) || !b.contains_var(w) {
            return true;
        }
        let coeffs_a = a.coeffs_in(w);
        let coeffs_b = b.coeffs_in(w);
        (0..PROBES).any(|k| {
            let pt: Vec<Scalar> = (0..n).map(|v| value(k, v)).collect();
            let img = |cs: &[Poly]| -> Vec<Scalar> { cs.iter().map(|c| c.eval(&pt)).collect() };
            let ia = img(&coeffs_a);
            if ia.last().map_or(true, Zero::is_zero) {
                return false;
            }
            let ib = img(&coeffs_b);
            univariate_coprime(field, &ia, &ib)
        })
    })
}

/// Dense univariate gcd test; `a` has a nonzero leading coefficient.
fn univariate_coprime(field: BaseField, a: &[Scalar], b: &[Scalar]) -> bool {
    let trim = |mut v: Vec<Scalar>| {
        while v.last().map_or(false, Zero::is_zero) {
            v.pop();
        }
        v
    };
    let mut p = trim(a.to_vec());
    let mut q = trim(b.to_vec());
    loop {
        if q.is_empty() {
            return p.len() == 1;
        }
        if q.len() == 1 {
            return true;
        }
        // p mod q
        let inv = field.inv(q.last().unwrap()).expect("nonzero");
        while p.len() >= q.len() {
            let f = field.mul(p.last().unwrap(), &inv);
            let shift = p.len() - q.len();
            for (i, c) in q.iter().enumerate() {
                p[shift + i] = field.sub(&p[shift + i], &field.mul(&f, c));
            }
            p = trim(p);
        }
        std::mem::swap(&mut p, &mut q);
    }
}

/// Exact square root in `k[x]`, if `a` is a perfect square.
///
/// Terms of the root are produced from the top down under graded-lex order;
/// the root's leading coefficient is the canonical field square root.
pub fn poly_sqrt(a: &Poly) -> Option<Poly> {
    if a.is_zero() {
        return Some(a.clone());
    }
    let field = a.field;
    let (lm, lc) = a.leading()?;
    if lm.0.iter().any(|e| e % 2 != 0) {
        return None;
    }
    let root_m = Monomial(lm.0.iter().map(|e| e / 2).collect());
    let root_c = field.sqrt(lc)?;
    let two_lead = field.mul(&field.from_int(2), &root_c);
    let inv_two_lead = field.inv(&two_lead)?;
    let mut s = Poly::monomial(field, a.nvars, root_m.clone(), root_c);
    let mut last = root_m.clone();
    loop {
        let r = a.sub(&s.mul(&s));
        let Some((rm, rc)) = r.leading().map(|(m, c)| (m.clone(), c.clone())) else {
            return Some(s);
        };
        let tm = rm.div(&root_m)?;
        if tm >= last {
            return None;
        }
        let tc = field.mul(&rc, &inv_two_lead);
        s = s.add(&Poly::monomial(field, a.nvars, tm.clone(), tc));
        last = tm;
    }
}
