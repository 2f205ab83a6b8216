//! Elements of the fraction field `K` and of the local ring `R`.

use std::fmt;

use num_traits::{One, Zero};

use super::field::{BaseField, Scalar};
use super::poly::{default_var_names, gcd, Poly};

/// A reduced fraction `num / den` with `den` associate-canonical.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct FieldElem {
    num: Poly,
    den: Poly,
}

/// `(p / g, q / g)` for `g = gcd(p, q)`.
fn cancel(p: &Poly, q: &Poly) -> (Poly, Poly) {
    if p.is_constant() || q.is_constant() {
        return (p.clone(), q.clone());
    }
    let g = gcd(p, q);
    if g.is_constant() {
        (p.clone(), q.clone())
    } else {
        (p.div_exact(&g).unwrap(), q.div_exact(&g).unwrap())
    }
}

impl FieldElem {
    /// `None` when `den` is zero.
    pub fn new(num: Poly, den: Poly) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        Some(Self::reduce(num, den))
    }

    fn reduce(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return FieldElem {
                den: Poly::one(num.field(), num.nvars()),
                num,
            };
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = gcd(&num, &den);
            if g.is_one() {
                (num, den)
            } else {
                (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap())
            }
        };
        Self::normalized(num, den)
    }

    /// Normalizes the denominator of an already reduced fraction.
    fn normalized(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return FieldElem {
                den: Poly::one(num.field(), num.nvars()),
                num,
            };
        }
        let field = num.field();
        let (u, den) = den.normalize();
        let num = num.scale(&field.inv(&u).expect("nonzero unit"));
        FieldElem { num, den }
    }

    pub fn from_poly(p: Poly) -> Self {
        let den = Poly::one(p.field(), p.nvars());
        FieldElem { num: p, den }
    }

    pub fn zero(field: BaseField, nvars: usize) -> Self {
        Self::from_poly(Poly::zero(field, nvars))
    }

    pub fn one(field: BaseField, nvars: usize) -> Self {
        Self::from_poly(Poly::one(field, nvars))
    }

    pub fn from_int(field: BaseField, nvars: usize, n: i64) -> Self {
        Self::from_poly(Poly::from_int(field, nvars, n))
    }

    pub fn from_scalar(field: BaseField, nvars: usize, c: Scalar) -> Self {
        Self::from_poly(Poly::constant(field, nvars, c))
    }

    pub fn var(field: BaseField, nvars: usize, v: usize) -> Self {
        Self::from_poly(Poly::var(field, nvars, v))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn field(&self) -> BaseField {
        self.num.field()
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn add(&self, other: &FieldElem) -> FieldElem {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return Self::reduce(self.num.add(&other.num), self.den.clone());
        }
        // With g = gcd(b, d), any common factor of the sum and its
        // denominator already divides g.
        let g = if self.den.is_constant() || other.den.is_constant() {
            Poly::one(self.field(), self.nvars())
        } else {
            gcd(&self.den, &other.den)
        };
        if g.is_constant() {
            return Self::normalized(
                self.num.mul(&other.den).add(&other.num.mul(&self.den)),
                self.den.mul(&other.den),
            );
        }
        let b1 = self.den.div_exact(&g).unwrap();
        let d1 = other.den.div_exact(&g).unwrap();
        let num = self.num.mul(&d1).add(&other.num.mul(&b1));
        let (num, g) = cancel(&num, &g);
        Self::normalized(num, b1.mul(&d1).mul(&g))
    }

    pub fn sub(&self, other: &FieldElem) -> FieldElem {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> FieldElem {
        FieldElem {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &FieldElem) -> FieldElem {
        if self.den.is_one() && other.den.is_one() {
            return Self::from_poly(self.num.mul(&other.num));
        }
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.field(), self.nvars());
        }
        let (a, d) = cancel(&self.num, &other.den);
        let (c, b) = cancel(&other.num, &self.den);
        Self::normalized(a.mul(&c), b.mul(&d))
    }

    pub fn scale(&self, c: &Scalar) -> FieldElem {
        Self::reduce(self.num.scale(c), self.den.clone())
    }

    pub fn inv(&self) -> Option<FieldElem> {
        if self.is_zero() {
            return None;
        }
        Some(Self::reduce(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &FieldElem) -> Option<FieldElem> {
        other.inv().map(|i| self.mul(&i))
    }

    pub fn pow(&self, e: i64) -> FieldElem {
        let base = if e < 0 {
            self.inv().expect("negative power of zero")
        } else {
            self.clone()
        };
        FieldElem {
            num: base.num.pow(e.unsigned_abs() as u32),
            den: base.den.pow(e.unsigned_abs() as u32),
        }
    }

    /// Membership in `R`: the denominator does not vanish at the origin.
    pub fn is_integral(&self) -> bool {
        !self.den.constant_term().is_zero()
    }

    /// Unit of `R`: integral with numerator nonvanishing at the origin.
    pub fn is_local_unit(&self) -> bool {
        self.is_integral() && !self.num.constant_term().is_zero()
    }

    /// Image in the residue field `R / m`; `None` when not in `R`.
    pub fn residue(&self) -> Option<Scalar> {
        let d = self.den.constant_term();
        self.field().div(&self.num.constant_term(), &d)
    }

    pub fn to_local(&self) -> Option<LocalElem> {
        LocalElem::new(self.clone())
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        if self.den.is_one() {
            return self.num.fmt_with(names);
        }
        let n = self.num.fmt_with(names);
        let d = self.den.fmt_with(names);
        let n = if self.num.num_terms() > 1 { format!("({n})") } else { n };
        let d = if self.den.num_terms() > 1 || !self.den.is_constant() && d.contains('*') {
            format!("({d})")
        } else {
            d
        };
        format!("{n}/{d}")
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_with(&default_var_names(self.nvars())))
    }
}

/// An element of `R = k[x]_(x)`: a [`FieldElem`] whose denominator does
/// not vanish at the origin.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct LocalElem(FieldElem);

impl LocalElem {
    pub fn new(e: FieldElem) -> Option<Self> {
        if e.is_integral() {
            Some(LocalElem(e))
        } else {
            None
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        LocalElem(FieldElem::from_poly(p))
    }

    pub fn one(field: BaseField, nvars: usize) -> Self {
        LocalElem(FieldElem::one(field, nvars))
    }

    pub fn as_field(&self) -> &FieldElem {
        &self.0
    }

    pub fn into_field(self) -> FieldElem {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        !self.0.num.constant_term().is_zero()
    }

    pub fn residue(&self) -> Scalar {
        self.0.residue().expect("integral")
    }

    /// `(num, den)` rescaled so that `den` has constant term 1.
    pub fn origin_normalized(&self) -> (Poly, Poly) {
        let c = self.0.den.constant_term();
        let inv = self.0.field().inv(&c).expect("den(0) nonzero");
        (self.0.num.scale(&inv), self.0.den.scale(&inv))
    }

    pub fn mul(&self, other: &LocalElem) -> LocalElem {
        LocalElem(self.0.mul(&other.0))
    }

    pub fn add(&self, other: &LocalElem) -> LocalElem {
        LocalElem(self.0.add(&other.0))
    }

    pub fn sub(&self, other: &LocalElem) -> LocalElem {
        LocalElem(self.0.sub(&other.0))
    }
}

impl fmt::Display for LocalElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A valuation value: an integer or `+inf` (for zero).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => f.write_str("inf"),
        }
    }
}

/// Fractional gcd of a list of field elements: gcd of numerators over lcm of
/// denominators, both associate-canonical. Zero when every entry is zero.
pub fn fractional_gcd<'a>(items: impl IntoIterator<Item = &'a FieldElem>) -> Option<FieldElem> {
    let mut num: Option<Poly> = None;
    let mut den: Option<Poly> = None;
    let mut template = None;
    for e in items {
        template.get_or_insert_with(|| (e.field(), e.nvars()));
        if e.is_zero() {
            continue;
        }
        num = Some(match num {
            None => e.num.canonical(),
            Some(n) => gcd(&n, &e.num),
        });
        den = Some(match den {
            None => e.den.clone(),
            Some(d) => {
                let g = gcd(&d, &e.den);
                d.mul(&e.den).div_exact(&g).unwrap().canonical()
            }
        });
    }
    let (field, nvars) = template?;
    match (num, den) {
        (Some(n), Some(d)) => FieldElem::new(n, d),
        _ => Some(FieldElem::zero(field, nvars)),
    }
}

impl Zero for Valuation {
    fn zero() -> Self {
        Valuation::Finite(0)
    }

    fn is_zero(&self) -> bool {
        *self == Valuation::Finite(0)
    }
}

impl std::ops::Add for Valuation {
    type Output = Valuation;

    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinity,
        }
    }
}

impl FieldElem {
    /// The unit scalar `u` with `self = u * canonical(num) / den`.
    pub fn leading_unit(&self) -> Scalar {
        if self.is_zero() {
            return Scalar::one();
        }
        self.num.normalize().0
    }
}
