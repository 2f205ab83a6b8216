//! Free rank-2 lattices in `K^2`.

use std::fmt;

use num_traits::Zero;

use crate::matrix::{Matrix2, Vec2};
use crate::repr::{RegularElementData, Representation, ResidueElem};
use crate::ring::{
    field_divisor, fractional_gcd, BaseField, Divisor, FactorError, FieldElem,
    PrimeElem, Scalar,
};

/// The `R`-span of the columns of an invertible basis matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    basis: Matrix2,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("basis matrix is singular")]
    Singular,
    #[error("sublattice is not contained in the superlattice")]
    NotContained,
    #[error("quotient is not cyclic")]
    NotCyclic,
    #[error("lattice is not stable under the regular element")]
    NotG0Stable,
    #[error("lattice is not stable under {0}")]
    NotStable(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Factor(#[from] FactorError),
}

impl Lattice {
    pub fn new(basis: Matrix2) -> Result<Self, LatticeError> {
        if basis.det().is_zero() {
            return Err(LatticeError::Singular);
        }
        Ok(Lattice { basis })
    }

    pub fn standard(field: BaseField, nvars: usize) -> Self {
        Lattice {
            basis: Matrix2::identity(field, nvars),
        }
    }

    pub fn basis(&self) -> &Matrix2 {
        &self.basis
    }

    pub fn scale(&self, s: &FieldElem) -> Lattice {
        Lattice {
            basis: self.basis.scale(s),
        }
    }

    /// `L * m`: the lattice spanned by the columns of `basis * m`.
    pub fn transform(&self, m: &Matrix2) -> Result<Lattice, LatticeError> {
        Lattice::new(self.basis.mul(m))
    }

    /// `g L` for a matrix `g` acting on `K^2`.
    pub fn image(&self, g: &Matrix2) -> Lattice {
        Lattice {
            basis: g.mul(&self.basis),
        }
    }

    pub fn coords(&self, v: &Vec2) -> Vec2 {
        self.basis.inv().unwrap().apply(v)
    }

    pub fn contains_vector(&self, v: &Vec2) -> bool {
        self.coords(v).iter().all(FieldElem::is_integral)
    }

    pub fn contains(&self, other: &Lattice) -> bool {
        self.basis.inv().unwrap().mul(&other.basis).is_integral()
    }

    /// Same lattice with the basis divided by the fractional gcd of its
    /// entries; used for display.
    pub fn primitive_representative(&self) -> Lattice {
        let g = fractional_gcd(self.basis.entries()).unwrap();
        Lattice {
            basis: self.basis.scale(&g.inv().unwrap()),
        }
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        let c0 = self.basis.col(0);
        let c1 = self.basis.col(1);
        format!(
            "span{{({}, {}), ({}, {})}}",
            c0[0].fmt_with(names),
            c0[1].fmt_with(names),
            c1[0].fmt_with(names),
            c1[1].fmt_with(names)
        )
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = crate::ring::default_var_names(self.basis.nvars());
        f.write_str(&self.fmt_with(&names))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub label: String,
    pub inverse: bool,
    /// Row and column of the offending entry of `basis^-1 g basis`.
    pub entry: (usize, usize),
    pub value: FieldElem,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{} entry ({},{}) = {} not in R",
            self.label,
            if self.inverse { "^-1" } else { "" },
            self.entry.0,
            self.entry.1,
            self.value
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stability {
    Stable,
    Violated(Violation),
}

impl Stability {
    pub fn is_stable(&self) -> bool {
        matches!(self, Stability::Stable)
    }
}

/// Stability under every generator and every generator inverse.
pub fn is_stable(l: &Lattice, rep: &Representation) -> Stability {
    let bi = l.basis.inv().unwrap();
    for g in rep.generators() {
        for (inverse, m) in [(false, &g.matrix), (true, &g.inverse)] {
            let c = bi.mul(m).mul(&l.basis);
            for i in 0..2 {
                for j in 0..2 {
                    if !c.entry(i, j).is_integral() {
                        return Stability::Violated(Violation {
                            label: g.label.clone(),
                            inverse,
                            entry: (i, j),
                            value: c.entry(i, j).clone(),
                        });
                    }
                }
            }
        }
    }
    Stability::Stable
}

/// A scalar `s` with `l2 = s * l1`, if the lattices are homothetic.
pub fn equal_up_to_homothety(l1: &Lattice, l2: &Lattice) -> Option<FieldElem> {
    let n = l1.basis.inv().unwrap().mul(&l2.basis);
    let g = fractional_gcd(n.entries())?;
    let u = n.scale(&g.inv()?);
    if !u.is_integral() || !u.det().is_local_unit() {
        return None;
    }
    if u.is_scalar() {
        return Some(g.mul(u.a()));
    }
    Some(g)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenSplit {
    pub gen_psi: FieldElem,
    pub gen_psi_prime: FieldElem,
    /// Each fractional ideal is generated by one of its two given elements.
    pub certified: bool,
    /// `L = gen_psi R v_psi + gen_psi' R v_psi'` verified by membership.
    pub equal: bool,
}

/// Splits `L` along the eigenlines of the regular element.
pub fn eigen_split(l: &Lattice, regular: &RegularElementData) -> Result<EigenSplit, LatticeError> {
    let (ep, eq) = &regular.idempotents;
    for k in 0..2 {
        let v = l.basis.col(k);
        if !l.contains_vector(&ep.apply(&v)) || !l.contains_vector(&eq.apply(&v)) {
            return Err(LatticeError::NotG0Stable);
        }
    }
    let pinv = regular.eigenbasis.inv().unwrap();
    let coords = pinv.mul(&l.basis);
    let alphas = [coords.entry(0, 0).clone(), coords.entry(0, 1).clone()];
    let betas = [coords.entry(1, 0).clone(), coords.entry(1, 1).clone()];
    let gp = fractional_gcd(alphas.iter()).unwrap();
    let gq = fractional_gcd(betas.iter()).unwrap();
    if gp.is_zero() || gq.is_zero() {
        return Err(LatticeError::Singular);
    }
    let generated = |xs: &[FieldElem; 2], g: &FieldElem| {
        xs.iter().any(|a| a.div(g).map(|q| q.is_local_unit()).unwrap_or(false))
    };
    let certified = generated(&alphas, &gp) && generated(&betas, &gq);
    let vp = regular.v_psi();
    let vq = regular.v_psi_prime();
    let pure_p = [vp[0].mul(&gp), vp[1].mul(&gp)];
    let pure_q = [vq[0].mul(&gq), vq[1].mul(&gq)];
    let equal = l.contains_vector(&pure_p) && l.contains_vector(&pure_q);
    Ok(EigenSplit {
        gen_psi: gp,
        gen_psi_prime: gq,
        certified,
        equal,
    })
}

#[derive(Clone, Debug)]
pub struct QuotientData {
    pub char_ideal: Divisor,
    /// `g -> chi(g)` per generator label; empty for the zero module.
    pub character: Vec<(String, ResidueElem)>,
    pub cyclic: bool,
    /// Index of the superlattice basis vector that generates the quotient.
    pub generator: Option<usize>,
}

/// The quotient `sup / sub`: characteristic ideal, cyclicity, and the
/// character by which the group acts on a cyclic generator, reduced modulo
/// `modulus`.
pub fn quotient_data(
    sub: &Lattice,
    sup: &Lattice,
    rep: &Representation,
    modulus: &Divisor,
    hints: &[PrimeElem],
) -> Result<QuotientData, LatticeError> {
    let si = sup.basis.inv().unwrap();
    let n = si.mul(&sub.basis);
    if !n.is_integral() {
        return Err(LatticeError::NotContained);
    }
    let det = n.det();
    let char_ideal = field_divisor(&det, hints)?;
    if det.is_local_unit() {
        return Ok(QuotientData {
            char_ideal,
            character: Vec::new(),
            cyclic: true,
            generator: None,
        });
    }
    // A unit entry N[i][j] eliminates coordinate i; e_k generates.
    let mut pivot = None;
    'outer: for i in 0..2 {
        for j in 0..2 {
            if n.entry(i, j).is_local_unit() {
                pivot = Some((i, j));
                break 'outer;
            }
        }
    }
    let (i, j) = pivot.ok_or(LatticeError::NotCyclic)?;
    let k = 1 - i;
    let ratio = n.entry(k, j).div(n.entry(i, j)).unwrap();
    let mut character = Vec::new();
    for g in rep.generators() {
        let m = si.mul(&g.matrix).mul(&sup.basis);
        let chi = m.entry(k, k).sub(&m.entry(i, k).mul(&ratio));
        character.push((
            g.label.clone(),
            ResidueElem {
                rep: chi,
                modulus: modulus.clone(),
            },
        ));
    }
    Ok(QuotientData {
        char_ideal,
        character,
        cyclic: true,
        generator: Some(k),
    })
}

#[derive(Clone, Debug)]
pub struct ResidualLine {
    /// Direction in `L / tL` with respect to the basis of `L`.
    pub direction: [Scalar; 2],
    /// Preimage of the line: an index-`t` sublattice.
    pub sublattice: Lattice,
}

fn residual_matrix(l: &Lattice, m: &Matrix2) -> Option<[[Scalar; 2]; 2]> {
    let c = l.basis.inv().unwrap().mul(m).mul(&l.basis);
    let r = |i, j| c.entry(i, j).residue();
    Some([[r(0, 0)?, r(0, 1)?], [r(1, 0)?, r(1, 1)?]])
}

fn fixes_line(f: BaseField, m: &[[Scalar; 2]; 2], w: &[Scalar; 2]) -> bool {
    let mw0 = f.add(&f.mul(&m[0][0], &w[0]), &f.mul(&m[0][1], &w[1]));
    let mw1 = f.add(&f.mul(&m[1][0], &w[0]), &f.mul(&m[1][1], &w[1]));
    f.sub(&f.mul(&w[0], &mw1), &f.mul(&w[1], &mw0)).is_zero()
}

/// Lines of `L / mL` fixed by every generator, as directions in the basis
/// of `L`. Works in any number of variables.
pub fn residual_lines(l: &Lattice, rep: &Representation) -> Result<Vec<[Scalar; 2]>, LatticeError> {
    let f = rep.field();
    let mats = residual_matrices(l, rep)?;
    let candidates: Vec<[Scalar; 2]> = match f.elements() {
        Some(elems) => {
            let mut c: Vec<[Scalar; 2]> = elems.into_iter().map(|a| [f.one(), a]).collect();
            c.push([f.zero(), f.one()]);
            c
        }
        None => {
            let m = mats
                .iter()
                .find(|m| !(m[0][1].is_zero() && m[1][0].is_zero() && m[0][0] == m[1][1]))
                .ok_or_else(|| {
                    LatticeError::Unsupported("every residual generator is scalar".into())
                })?;
            eigenlines_q(f, m)
        }
    };
    Ok(candidates
        .into_iter()
        .filter(|w| mats.iter().all(|m| fixes_line(f, m, w)))
        .collect())
}

fn residual_matrices(l: &Lattice, rep: &Representation) -> Result<Vec<[[Scalar; 2]; 2]>, LatticeError> {
    rep.generators()
        .iter()
        .map(|g| residual_matrix(l, &g.matrix).ok_or_else(|| LatticeError::NotStable(g.label.clone())))
        .collect()
}

/// Whether the reduction of `L` has a stable line on which some generator
/// acts by a different scalar than on the quotient, i.e. its
/// semisimplification is a sum of two distinct characters.
pub fn residual_split(l: &Lattice, rep: &Representation) -> Result<bool, LatticeError> {
    let f = rep.field();
    let mats = residual_matrices(l, rep)?;
    let lines = residual_lines(l, rep)?;
    Ok(lines.iter().any(|w| {
        mats.iter().any(|m| {
            let (a, b, c, d) = (&m[0][0], &m[0][1], &m[1][0], &m[1][1]);
            let lam = if w[0].is_zero() {
                d.clone()
            } else {
                f.add(a, &f.mul(b, &f.div(&w[1], &w[0]).unwrap()))
            };
            let det = f.sub(&f.mul(a, d), &f.mul(b, c));
            f.div(&det, &lam).map_or(true, |other| other != lam)
        })
    }))
}

/// Stable lines of `L / tL` together with their index-`t` preimages (one
/// variable only).
pub fn residual_stable_lines(l: &Lattice, rep: &Representation) -> Result<Vec<ResidualLine>, LatticeError> {
    let f = rep.field();
    if rep.nvars() != 1 {
        return Err(LatticeError::Unsupported(
            "residual lines need a discrete valuation ring (one variable)".into(),
        ));
    }
    let t = FieldElem::var(f, 1, 0);
    let fe = |s: &Scalar| FieldElem::from_scalar(f, 1, s.clone());
    let (zero, one) = (f.zero(), f.one());
    let mut out = Vec::new();
    for w in residual_lines(l, rep)? {
        let step = if w[0].is_zero() {
            Matrix2::new(fe(&zero), t.clone(), fe(&one), fe(&zero))
        } else {
            let c = f.div(&w[1], &w[0]).unwrap();
            Matrix2::new(fe(&one), fe(&zero), fe(&c), t.clone())
        };
        out.push(ResidualLine {
            direction: w,
            sublattice: l.transform(&step)?,
        });
    }
    Ok(out)
}

/// Rational eigenlines of a non-scalar 2×2 rational matrix.
fn eigenlines_q(f: BaseField, m: &[[Scalar; 2]; 2]) -> Vec<[Scalar; 2]> {
    let tr = f.add(&m[0][0], &m[1][1]);
    let det = f.sub(&f.mul(&m[0][0], &m[1][1]), &f.mul(&m[0][1], &m[1][0]));
    let disc = f.sub(&f.mul(&tr, &tr), &f.mul(&f.from_int(4), &det));
    let Some(s) = f.sqrt(&disc) else {
        return Vec::new();
    };
    let half = f.inv(&f.from_int(2)).unwrap();
    let mut roots = vec![f.mul(&f.add(&tr, &s), &half)];
    if !s.is_zero() {
        roots.push(f.mul(&f.sub(&tr, &s), &half));
    }
    let mut out = Vec::new();
    for lam in roots {
        let v = [m[0][1].clone(), f.sub(&lam, &m[0][0])];
        let v = if v[0].is_zero() && v[1].is_zero() {
            [f.sub(&lam, &m[1][1]), m[1][0].clone()]
        } else {
            v
        };
        let v = if v[0].is_zero() {
            [f.zero(), f.one()]
        } else {
            [f.one(), f.div(&v[1], &v[0]).unwrap()]
        };
        if !out.contains(&v) {
            out.push(v);
        }
    }
    out
}
