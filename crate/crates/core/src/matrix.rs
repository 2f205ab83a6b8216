//! 2×2 matrices over the fraction field `K`.

use std::fmt;

use crate::ring::{default_var_names, BaseField, FieldElem};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Matrix2 {
    e: [[FieldElem; 2]; 2],
}

/// A column vector in `K^2`.
pub type Vec2 = [FieldElem; 2];

impl Matrix2 {
    pub fn new(a: FieldElem, b: FieldElem, c: FieldElem, d: FieldElem) -> Self {
        Matrix2 { e: [[a, b], [c, d]] }
    }

    pub fn identity(field: BaseField, nvars: usize) -> Self {
        Self::diag(FieldElem::one(field, nvars), FieldElem::one(field, nvars))
    }

    pub fn diag(a: FieldElem, d: FieldElem) -> Self {
        let z = FieldElem::zero(a.field(), a.nvars());
        Self::new(a, z.clone(), z, d)
    }

    pub fn scalar(s: FieldElem) -> Self {
        Self::diag(s.clone(), s)
    }

    pub fn from_cols(c0: Vec2, c1: Vec2) -> Self {
        let [a, c] = c0;
        let [b, d] = c1;
        Self::new(a, b, c, d)
    }

    pub fn entry(&self, i: usize, j: usize) -> &FieldElem {
        &self.e[i][j]
    }

    pub fn entries(&self) -> impl Iterator<Item = &FieldElem> {
        self.e.iter().flatten()
    }

    pub fn a(&self) -> &FieldElem {
        &self.e[0][0]
    }

    pub fn b(&self) -> &FieldElem {
        &self.e[0][1]
    }

    pub fn c(&self) -> &FieldElem {
        &self.e[1][0]
    }

    pub fn d(&self) -> &FieldElem {
        &self.e[1][1]
    }

    pub fn col(&self, j: usize) -> Vec2 {
        [self.e[0][j].clone(), self.e[1][j].clone()]
    }

    pub fn field(&self) -> BaseField {
        self.e[0][0].field()
    }

    pub fn nvars(&self) -> usize {
        self.e[0][0].nvars()
    }

    pub fn mul(&self, o: &Matrix2) -> Matrix2 {
        let f = |i: usize, j: usize| self.e[i][0].mul(&o.e[0][j]).add(&self.e[i][1].mul(&o.e[1][j]));
        Matrix2::new(f(0, 0), f(0, 1), f(1, 0), f(1, 1))
    }

    pub fn apply(&self, v: &Vec2) -> Vec2 {
        [
            self.e[0][0].mul(&v[0]).add(&self.e[0][1].mul(&v[1])),
            self.e[1][0].mul(&v[0]).add(&self.e[1][1].mul(&v[1])),
        ]
    }

    pub fn add(&self, o: &Matrix2) -> Matrix2 {
        let f = |i: usize, j: usize| self.e[i][j].add(&o.e[i][j]);
        Matrix2::new(f(0, 0), f(0, 1), f(1, 0), f(1, 1))
    }

    pub fn sub(&self, o: &Matrix2) -> Matrix2 {
        let f = |i: usize, j: usize| self.e[i][j].sub(&o.e[i][j]);
        Matrix2::new(f(0, 0), f(0, 1), f(1, 0), f(1, 1))
    }

    pub fn scale(&self, s: &FieldElem) -> Matrix2 {
        let f = |i: usize, j: usize| self.e[i][j].mul(s);
        Matrix2::new(f(0, 0), f(0, 1), f(1, 0), f(1, 1))
    }

    pub fn det(&self) -> FieldElem {
        self.e[0][0]
            .mul(&self.e[1][1])
            .sub(&self.e[0][1].mul(&self.e[1][0]))
    }

    pub fn trace(&self) -> FieldElem {
        self.e[0][0].add(&self.e[1][1])
    }

    pub fn inv(&self) -> Option<Matrix2> {
        let di = self.det().inv()?;
        let m = Matrix2::new(
            self.e[1][1].clone(),
            self.e[0][1].neg(),
            self.e[1][0].neg(),
            self.e[0][0].clone(),
        );
        Some(m.scale(&di))
    }

    /// `p^-1 * self * p`.
    pub fn conj_by(&self, p: &Matrix2) -> Matrix2 {
        p.inv().expect("invertible change of basis").mul(self).mul(p)
    }

    /// All four entries lie in `R`.
    pub fn is_integral(&self) -> bool {
        self.entries().all(FieldElem::is_integral)
    }

    pub fn is_zero(&self) -> bool {
        self.entries().all(FieldElem::is_zero)
    }

    pub fn is_scalar(&self) -> bool {
        self.e[0][1].is_zero() && self.e[1][0].is_zero() && self.e[0][0] == self.e[1][1]
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        let s = |i: usize, j: usize| self.e[i][j].fmt_with(names);
        format!("[[{}, {}], [{}, {}]]", s(0, 0), s(0, 1), s(1, 0), s(1, 1))
    }

    /// Entries as strings, row by row.
    pub fn to_strings(&self, names: &[String]) -> [[String; 2]; 2] {
        let s = |i: usize, j: usize| self.e[i][j].fmt_with(names);
        [[s(0, 0), s(0, 1)], [s(1, 0), s(1, 1)]]
    }
}

impl fmt::Display for Matrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_with(&default_var_names(self.nvars())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_conjugation() {
        let f = BaseField::Prime(5);
        let x = FieldElem::var(f, 2, 0);
        let one = FieldElem::one(f, 2);
        let zero = FieldElem::zero(f, 2);
        let u = Matrix2::new(one.clone(), x.clone(), zero.clone(), one.clone());
        let ui = u.inv().unwrap();
        assert_eq!(u.mul(&ui), Matrix2::identity(f, 2));
        let p = Matrix2::diag(x.clone(), one.clone());
        let c = u.conj_by(&p);
        assert!(c.b().is_one());
        assert_eq!(c.trace(), u.trace());
    }
}
