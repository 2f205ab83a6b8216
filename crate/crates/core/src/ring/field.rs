//! Coefficient fields: a prime field `F_p` with `p` odd, or the rationals.
//!
//! Scalars are stored as [`BigRational`] in both cases. Over `F_p` the
//! canonical representative is an integer in `0..p`, so structural equality
//! of scalars coincides with equality in the field.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub type Scalar = BigRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BaseField {
    /// `F_p`; `p` must be an odd prime.
    Prime(u64),
    Rationals,
}

impl BaseField {
    /// Validating constructor for `F_p`.
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        if p == 2 {
            return Err(FieldError::CharacteristicTwo);
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(BaseField::Prime(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            BaseField::Prime(p) => *p,
            BaseField::Rationals => 0,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, BaseField::Prime(_))
    }

    /// Brings an arbitrary rational into canonical form.
    ///
    /// Panics over `F_p` when the denominator is divisible by `p`.
    pub fn reduce(&self, x: &Scalar) -> Scalar {
        match self {
            BaseField::Rationals => x.clone(),
            BaseField::Prime(p) => {
                if let Some(v) = small(x) {
                    return if v < *p { x.clone() } else { lift(v % p) };
                }
                let p = BigInt::from(*p);
                let num = x.numer().mod_floor(&p);
                let den = x.denom().mod_floor(&p);
                assert!(!den.is_zero(), "denominator divisible by the characteristic");
                let inv = mod_inverse(&den, &p);
                BigRational::from_integer((num * inv).mod_floor(&p))
            }
        }
    }

    pub fn from_int(&self, n: i64) -> Scalar {
        self.reduce(&BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(&self, n: BigInt) -> Scalar {
        self.reduce(&BigRational::from_integer(n))
    }

    pub fn zero(&self) -> Scalar {
        Scalar::zero()
    }

    pub fn one(&self) -> Scalar {
        Scalar::one()
    }

    /// Canonical residues of `a` and `b` as machine integers, when both are.
    fn residues(&self, a: &Scalar, b: &Scalar) -> Option<(u64, u64, u64)> {
        match self {
            BaseField::Prime(p) => Some((small(a)?, small(b)?, *p)),
            BaseField::Rationals => None,
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match self.residues(a, b) {
            Some((x, y, p)) => lift(((x as u128 + y as u128) % p as u128) as u64),
            None => self.reduce(&(a + b)),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match self.residues(a, b) {
            Some((x, y, p)) => lift(((x as u128 + (p - y % p) as u128) % p as u128) as u64),
            None => self.reduce(&(a - b)),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match self.residues(a, b) {
            Some((x, y, p)) => lift(mul_mod(x, y, p)),
            None => self.reduce(&(a * b)),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match self.residues(a, a) {
            Some((x, _, p)) => lift((p - x % p) % p),
            None => self.reduce(&(-a)),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        if a.is_zero() {
            return None;
        }
        match self.residues(a, a) {
            Some((x, _, p)) => Some(lift(inv_mod(x, p))),
            None => Some(self.reduce(&a.recip())),
        }
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Option<Scalar> {
        self.inv(b).map(|ib| self.mul(a, &ib))
    }

    pub fn pow(&self, a: &Scalar, mut e: u64) -> Scalar {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// A square root, if one exists in the field.
    ///
    /// Over `F_p` the root with the smaller representative is returned; over
    /// the rationals the non-negative root.
    pub fn sqrt(&self, a: &Scalar) -> Option<Scalar> {
        if a.is_zero() {
            return Some(Scalar::zero());
        }
        match self {
            BaseField::Rationals => {
                if a.is_negative() {
                    return None;
                }
                let n = a.numer().sqrt();
                let d = a.denom().sqrt();
                if &(&n * &n) == a.numer() && &(&d * &d) == a.denom() {
                    Some(BigRational::new(n, d))
                } else {
                    None
                }
            }
            BaseField::Prime(p) => {
                let v = a.to_integer().to_u64()?;
                let r = sqrt_mod_prime(v, *p)?;
                let r = r.min(p - r);
                Some(BigRational::from_integer(BigInt::from(r)))
            }
        }
    }

    /// Deterministic total order on canonical scalars.
    pub fn cmp_canonical(&self, a: &Scalar, b: &Scalar) -> Ordering {
        a.cmp(b)
    }

    /// All field elements, in canonical order. `None` over the rationals.
    pub fn elements(&self) -> Option<Vec<Scalar>> {
        match self {
            BaseField::Prime(p) => Some(
                (0..*p)
                    .map(|i| BigRational::from_integer(BigInt::from(i)))
                    .collect(),
            ),
            BaseField::Rationals => None,
        }
    }
}

/// A non-negative integer scalar that fits in a machine word.
pub(crate) fn small(x: &Scalar) -> Option<u64> {
    if x.denom().is_one() {
        x.numer().to_u64()
    } else {
        None
    }
}

pub(crate) fn lift(v: u64) -> Scalar {
    BigRational::from_integer(BigInt::from(v))
}

impl fmt::Display for BaseField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseField::Prime(p) => write!(f, "F_{p}"),
            BaseField::Rationals => write!(f, "Q"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("residue characteristic two unsupported")]
    CharacteristicTwo,
    #[error("{0} is not a prime")]
    NotPrime(u64),
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    e.x.mod_floor(m)
}

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Tonelli–Shanks.
fn sqrt_mod_prime(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let mut q = p - 1;
    let mut s = 0;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_characteristic_two() {
        assert_eq!(BaseField::prime(2), Err(FieldError::CharacteristicTwo));
        assert_eq!(BaseField::prime(9), Err(FieldError::NotPrime(9)));
        assert!(BaseField::prime(5).is_ok());
    }

    #[test]
    fn reduction_mod_p() {
        let f = BaseField::Prime(5);
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(f.reduce(&half), f.from_int(3));
        assert_eq!(f.from_int(-1), f.from_int(4));
    }

    #[test]
    fn square_roots() {
        let f = BaseField::Prime(13);
        for a in 0..13 {
            let x = f.from_int(a);
            if let Some(r) = f.sqrt(&x) {
                assert_eq!(f.mul(&r, &r), x);
            }
        }
        assert!(f.sqrt(&f.from_int(2)).is_none());
        let q = BaseField::Rationals;
        let v = BigRational::new(BigInt::from(9), BigInt::from(4));
        assert_eq!(q.sqrt(&v), Some(BigRational::new(BigInt::from(3), BigInt::from(2))));
        assert!(q.sqrt(&BigRational::from_integer(BigInt::from(2))).is_none());
    }
}
