//! Divisor bookkeeping over symbolic prime tokens: the `H^0` ideal at a
//! vertex of the lattice box, the kernel/cokernel table of specialization
//! maps, Selmer-change multipliers, the lattice-independent one-variable
//! characteristic ideal, and the trivial-zero verdicts.
//!
//! Nothing arithmetic is computed. The Eisenstein ideal is declared as
//! `p_1^{n_1} ... p_r^{n_r}` and `a_p - 1` as a divisor over the same primes
//! plus an optional coprime remainder; everything else is an opaque token.

use std::collections::BTreeMap;
use std::fmt;

use crate::graph::build_rect;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Token {
    /// The `i`-th prime factor of the Eisenstein ideal.
    Prime(usize),
    /// The augmentation prime `gamma - 1`.
    GammaMinusOne,
    /// The part of `a_p - 1` coprime to every `p_i`.
    ApRemainder,
    /// The characteristic ideal of the minimal-lattice Selmer group.
    CharSelMin,
}

/// A formal sum of tokens with integer coefficients. Zero coefficients are
/// never stored, so equality is structural.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymbolicDivisor(BTreeMap<Token, i64>);

impl SymbolicDivisor {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(t: Token, e: i64) -> Self {
        let mut d = Self::new();
        d.add_entry(t, e);
        d
    }

    pub fn add_entry(&mut self, t: Token, e: i64) {
        let v = self.0.entry(t).or_insert(0);
        *v += e;
        if *v == 0 {
            self.0.remove(&t);
        }
    }

    pub fn get(&self, t: Token) -> i64 {
        self.0.get(&t).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Token, i64)> + '_ {
        self.0.iter().map(|(t, e)| (*t, *e))
    }

    /// The unit ideal.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut d = self.clone();
        for (t, e) in o.iter() {
            d.add_entry(t, e);
        }
        d
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(-1))
    }

    pub fn scale(&self, k: i64) -> Self {
        let mut d = Self::new();
        for (t, e) in self.iter() {
            d.add_entry(t, k * e);
        }
        d
    }

    pub fn is_effective(&self) -> bool {
        self.0.values().all(|&e| e >= 0)
    }

    /// Coefficientwise `self <= o`, i.e. `o` is divisible by `self`.
    pub fn le(&self, o: &Self) -> bool {
        self.0.keys().chain(o.0.keys()).all(|&t| self.get(t) <= o.get(t))
    }

    /// Multiplicative notation, e.g. `p1^2*p2*(gamma-1)`; `1` when empty.
    pub fn render(&self, ring: &TokenRing) -> String {
        if self.is_empty() {
            return "1".into();
        }
        self.iter()
            .map(|(t, e)| {
                let name = ring.token_name(t);
                if e == 1 {
                    name
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl FromIterator<(Token, i64)> for SymbolicDivisor {
    fn from_iter<I: IntoIterator<Item = (Token, i64)>>(iter: I) -> Self {
        let mut d = Self::new();
        for (t, e) in iter {
            d.add_entry(t, e);
        }
        d
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModuleExpr {
    Zero,
    /// The Pontryagin dual of `R / (generators)`, written `R^v[g_1, ...]`.
    DualTorsion(Vec<SymbolicDivisor>),
    /// `(R/p_i)^v[gamma - 1]`.
    DualCyclicKilledBy { prime: usize },
    /// A free module of rank one over `R/p_i`.
    FreeRankOne { prime: usize },
}

impl ModuleExpr {
    /// Canonical dual-torsion module: duplicate generators are dropped and
    /// a unit generator gives `Zero`.
    pub fn dual_torsion(mut gens: Vec<SymbolicDivisor>) -> ModuleExpr {
        if gens.iter().any(SymbolicDivisor::is_empty) {
            return ModuleExpr::Zero;
        }
        gens.sort();
        gens.dedup();
        ModuleExpr::DualTorsion(gens)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ModuleExpr::Zero)
    }

    pub fn render(&self, ring: &TokenRing) -> String {
        match self {
            ModuleExpr::Zero => "Zero".into(),
            ModuleExpr::DualTorsion(gens) => format!(
                "R^v[{}]",
                gens.iter().map(|g| g.render(ring)).collect::<Vec<_>>().join(", ")
            ),
            ModuleExpr::DualCyclicKilledBy { prime } => {
                format!("(R/{})^v[(gamma-1)]", ring.primes[*prime].label)
            }
            ModuleExpr::FreeRankOne { prime } => format!("R/{}", ring.primes[*prime].label),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IwasawaError {
    #[error("invalid token ring: {0}")]
    InvalidRing(String),
    #[error("vertex {vertex:?} lies outside the box {dims:?}")]
    OutOfBox { vertex: Vec<i64>, dims: Vec<i64> },
    #[error("negative exponent {value} at {token}")]
    NegativeExponent { token: String, value: i64 },
    #[error("no (pFour) declaration at {0}")]
    PFourNotDeclared(String),
    #[error("no prime with index {0}")]
    NoSuchPrime(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeToken {
    pub label: String,
    /// Exponent `n_i` in the Eisenstein ideal.
    pub multiplicity: i64,
    /// Declared order of `a_p - 1` at this prime.
    pub ap_order: i64,
    pub pfour: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TokenRing {
    pub primes: Vec<PrimeToken>,
    /// Whether `a_p - 1` has a nontrivial part coprime to the `p_i`.
    pub ap_remainder: bool,
}

impl TokenRing {
    pub fn new(primes: Vec<PrimeToken>, ap_remainder: bool) -> Result<Self, IwasawaError> {
        for (i, p) in primes.iter().enumerate() {
            if p.label.is_empty() {
                return Err(IwasawaError::InvalidRing("empty prime label".into()));
            }
            if primes[..i].iter().any(|q| q.label == p.label) {
                return Err(IwasawaError::InvalidRing(format!("duplicate prime {}", p.label)));
            }
            if p.multiplicity < 1 {
                return Err(IwasawaError::InvalidRing(format!(
                    "multiplicity of {} must be at least 1",
                    p.label
                )));
            }
            if p.ap_order < 0 {
                return Err(IwasawaError::InvalidRing(format!(
                    "order of a_p - 1 at {} is negative",
                    p.label
                )));
            }
            if p.pfour && p.ap_order != p.multiplicity {
                return Err(IwasawaError::InvalidRing(format!(
                    "(pFour) at {} needs ord(a_p - 1) = {}, got {}",
                    p.label, p.multiplicity, p.ap_order
                )));
            }
        }
        Ok(TokenRing {
            primes,
            ap_remainder,
        })
    }

    pub fn token_name(&self, t: Token) -> String {
        match t {
            Token::Prime(i) => self.primes[i].label.clone(),
            Token::GammaMinusOne => "(gamma-1)".into(),
            Token::ApRemainder => "u_ap".into(),
            Token::CharSelMin => "char(Sel_min)".into(),
        }
    }

    pub fn dims(&self) -> Vec<i64> {
        self.primes.iter().map(|p| p.multiplicity).collect()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.primes.iter().position(|p| p.label == label)
    }

    /// The Eisenstein ideal `sum n_i p_i`.
    pub fn j_divisor(&self) -> SymbolicDivisor {
        self.prime_divisor(&self.dims())
    }

    /// The declared divisor of `a_p - 1`, remainder included.
    pub fn ap_divisor(&self) -> SymbolicDivisor {
        let mut d = self.prime_divisor(&self.primes.iter().map(|p| p.ap_order).collect::<Vec<_>>());
        if self.ap_remainder {
            d.add_entry(Token::ApRemainder, 1);
        }
        d
    }

    /// `sum e_i p_i`.
    pub fn prime_divisor(&self, e: &[i64]) -> SymbolicDivisor {
        e.iter().enumerate().map(|(i, &k)| (Token::Prime(i), k)).collect()
    }

    /// Every vertex of the box, lexicographically.
    pub fn vertices(&self) -> Vec<Vec<i64>> {
        build_rect(&self.dims()).vertices
    }

    pub fn check_vertex(&self, v: &[i64]) -> Result<(), IwasawaError> {
        let dims = self.dims();
        if v.len() != dims.len() || v.iter().zip(&dims).any(|(j, n)| *j < 0 || j > n) {
            return Err(IwasawaError::OutOfBox {
                vertex: v.to_vec(),
                dims,
            });
        }
        Ok(())
    }

    fn codims(&self, v: &[i64]) -> Vec<i64> {
        self.dims().iter().zip(v).map(|(n, j)| n - j).collect()
    }
}

/// The module `H^0` at vertex `j`: `R^v[gamma - 1, prod p_i^{n_i - j_i}]` for
/// the trivial twist, and zero otherwise.
pub fn h0_ideal(ring: &TokenRing, vertex: &[i64], twist_trivial: bool) -> Result<ModuleExpr, IwasawaError> {
    ring.check_vertex(vertex)?;
    if !twist_trivial {
        return Ok(ModuleExpr::Zero);
    }
    Ok(ModuleExpr::dual_torsion(vec![
        SymbolicDivisor::single(Token::GammaMinusOne, 1),
        ring.prime_divisor(&ring.codims(vertex)),
    ]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpecializationCase {
    /// Kernel of an arithmetic specialization.
    Arith,
    /// The prime `gamma - 1`.
    Augmentation,
    /// The `i`-th prime factor of the Eisenstein ideal.
    Eisenstein(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ControlDefect {
    pub kernel: ModuleExpr,
    pub cokernel: ModuleExpr,
    pub injective: bool,
    pub surjective: bool,
}

impl ControlDefect {
    fn iso() -> Self {
        ControlDefect {
            kernel: ModuleExpr::Zero,
            cokernel: ModuleExpr::Zero,
            injective: true,
            surjective: true,
        }
    }
}

/// Kernel and cokernel of the restriction map on Selmer groups at the
/// prime `case`, for the lattice at `vertex`.
pub fn control_defect(
    ring: &TokenRing,
    vertex: &[i64],
    case: SpecializationCase,
    twist_trivial: bool,
) -> Result<ControlDefect, IwasawaError> {
    ring.check_vertex(vertex)?;
    if let SpecializationCase::Eisenstein(i) = case {
        if i >= ring.primes.len() {
            return Err(IwasawaError::NoSuchPrime(i));
        }
    }
    if !twist_trivial {
        return Ok(ControlDefect::iso());
    }
    match case {
        SpecializationCase::Arith => Ok(ControlDefect::iso()),
        SpecializationCase::Augmentation => {
            let g = ring.ap_divisor().sub(&ring.prime_divisor(&ring.codims(vertex)));
            if let Some((t, e)) = g.iter().find(|(_, e)| *e < 0) {
                return Err(IwasawaError::NegativeExponent {
                    token: ring.token_name(t),
                    value: e,
                });
            }
            let cokernel = ModuleExpr::dual_torsion(vec![g]);
            Ok(ControlDefect {
                kernel: ModuleExpr::Zero,
                surjective: cokernel.is_zero(),
                cokernel,
                injective: true,
            })
        }
        SpecializationCase::Eisenstein(i) => {
            if vertex[i] == ring.primes[i].multiplicity {
                Ok(ControlDefect::iso())
            } else {
                Ok(ControlDefect {
                    kernel: ModuleExpr::DualCyclicKilledBy { prime: i },
                    cokernel: ModuleExpr::Zero,
                    injective: false,
                    surjective: true,
                })
            }
        }
    }
}

/// `sum j_i p_i`: the factor by which the two-variable characteristic ideal
/// at `vertex` exceeds the one of the minimal lattice.
pub fn selmer_change_multiplier(ring: &TokenRing, vertex: &[i64]) -> Result<SymbolicDivisor, IwasawaError> {
    ring.check_vertex(vertex)?;
    Ok(ring.prime_divisor(vertex))
}

/// The one-variable characteristic ideal
/// `char(Sel_min) + sum j_i p_i + J - sum j_i p_i - (a_p - 1)`, simplified.
/// The vertex contribution cancels; the cancellation is checked.
pub fn one_var_char(ring: &TokenRing, vertex: &[i64]) -> Result<SymbolicDivisor, IwasawaError> {
    let shift = selmer_change_multiplier(ring, vertex)?;
    let base = SymbolicDivisor::single(Token::CharSelMin, 1);
    let full = base
        .add(&shift)
        .add(&ring.j_divisor())
        .sub(&ring.prime_divisor(vertex))
        .sub(&ring.ap_divisor());
    let simplified = base.add(&ring.j_divisor()).sub(&ring.ap_divisor());
    assert_eq!(full, simplified, "vertex terms failed to cancel");
    Ok(full)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Freeness {
    Free,
    /// Only the rank is known.
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrivialZeroVerdict {
    /// Torsion over `R/p_i` with characteristic ideal inside `(gamma - 1)`.
    TorsionInGammaMinusOne,
    RankOne(Freeness),
}

impl fmt::Display for TrivialZeroVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TrivialZeroVerdict::TorsionInGammaMinusOne => f.write_str("torsion, char in (gamma-1)"),
            TrivialZeroVerdict::RankOne(Freeness::Free) => f.write_str("rank one, free"),
            TrivialZeroVerdict::RankOne(Freeness::Unknown) => f.write_str("rank one, freeness unknown"),
        }
    }
}

/// Structure of the Selmer group of the reduction modulo `p_i` at `vertex`.
pub fn trivial_zero_verdict(
    ring: &TokenRing,
    vertex: &[i64],
    i: usize,
) -> Result<TrivialZeroVerdict, IwasawaError> {
    ring.check_vertex(vertex)?;
    let p = ring.primes.get(i).ok_or(IwasawaError::NoSuchPrime(i))?;
    if !p.pfour {
        return Err(IwasawaError::PFourNotDeclared(p.label.clone()));
    }
    Ok(match vertex[i] {
        0 => TrivialZeroVerdict::TorsionInGammaMinusOne,
        j if j == p.multiplicity => TrivialZeroVerdict::RankOne(Freeness::Free),
        _ => TrivialZeroVerdict::RankOne(Freeness::Unknown),
    })
}

/// The module a verdict describes, when it is determined.
pub fn verdict_module(i: usize, v: TrivialZeroVerdict) -> Option<ModuleExpr> {
    match v {
        TrivialZeroVerdict::RankOne(Freeness::Free) => Some(ModuleExpr::FreeRankOne { prime: i }),
        _ => None,
    }
}

/// All symbolic data at one vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexTable {
    pub vertex: Vec<i64>,
    pub h0: ModuleExpr,
    pub control: Vec<(SpecializationCase, ControlDefect)>,
    pub selmer_multiplier: SymbolicDivisor,
    pub one_var_char: SymbolicDivisor,
    pub verdicts: Vec<(usize, TrivialZeroVerdict)>,
}

pub fn vertex_table(ring: &TokenRing, vertex: &[i64], twist_trivial: bool) -> Result<VertexTable, IwasawaError> {
    let mut cases = vec![SpecializationCase::Arith, SpecializationCase::Augmentation];
    cases.extend((0..ring.primes.len()).map(SpecializationCase::Eisenstein));
    let control = cases
        .into_iter()
        .map(|c| control_defect(ring, vertex, c, twist_trivial).map(|d| (c, d)))
        .collect::<Result<_, _>>()?;
    let verdicts = (0..ring.primes.len())
        .filter(|&i| ring.primes[i].pfour)
        .map(|i| trivial_zero_verdict(ring, vertex, i).map(|v| (i, v)))
        .collect::<Result<_, _>>()?;
    Ok(VertexTable {
        vertex: vertex.to_vec(),
        h0: h0_ideal(ring, vertex, twist_trivial)?,
        control,
        selmer_multiplier: selmer_change_multiplier(ring, vertex)?,
        one_var_char: one_var_char(ring, vertex)?,
        verdicts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> TokenRing {
        TokenRing::new(
            vec![
                PrimeToken {
                    label: "p1".into(),
                    multiplicity: 2,
                    ap_order: 2,
                    pfour: true,
                },
                PrimeToken {
                    label: "p2".into(),
                    multiplicity: 1,
                    ap_order: 3,
                    pfour: false,
                },
            ],
            true,
        )
        .unwrap()
    }

    #[test]
    fn h0_examples() {
        let r = ring();
        let m = h0_ideal(&r, &[0, 0], true).unwrap();
        assert_eq!(m.render(&r), "R^v[p1^2*p2, (gamma-1)]");
        assert_eq!(h0_ideal(&r, &[2, 1], true).unwrap(), ModuleExpr::Zero);
        assert_eq!(h0_ideal(&r, &[1, 0], false).unwrap(), ModuleExpr::Zero);
        assert!(matches!(h0_ideal(&r, &[3, 0], true), Err(IwasawaError::OutOfBox { .. })));
    }

    #[test]
    fn control_examples() {
        let r = ring();
        let aug = control_defect(&r, &[0, 1], SpecializationCase::Augmentation, true).unwrap();
        assert_eq!(aug.cokernel.render(&r), "R^v[p2^3*u_ap]");
        let e = control_defect(&r, &[1, 1], SpecializationCase::Eisenstein(0), true).unwrap();
        assert_eq!(e.kernel.render(&r), "(R/p1)^v[(gamma-1)]");
        assert!(e.surjective && !e.injective);
        let e = control_defect(&r, &[2, 0], SpecializationCase::Eisenstein(0), true).unwrap();
        assert!(e.kernel.is_zero());
        let bad = TokenRing::new(
            vec![PrimeToken {
                label: "q".into(),
                multiplicity: 2,
                ap_order: 0,
                pfour: false,
            }],
            false,
        )
        .unwrap();
        assert!(matches!(
            control_defect(&bad, &[1], SpecializationCase::Augmentation, true),
            Err(IwasawaError::NegativeExponent { value: -1, .. })
        ));
    }

    #[test]
    fn one_var_and_verdicts() {
        let r = ring();
        let c = one_var_char(&r, &[1, 0]).unwrap();
        assert_eq!(c.render(&r), "p2^-2*u_ap^-1*char(Sel_min)");
        assert_eq!(
            trivial_zero_verdict(&r, &[0, 1], 0).unwrap(),
            TrivialZeroVerdict::TorsionInGammaMinusOne
        );
        assert_eq!(
            trivial_zero_verdict(&r, &[1, 1], 0).unwrap(),
            TrivialZeroVerdict::RankOne(Freeness::Unknown)
        );
        assert_eq!(
            trivial_zero_verdict(&r, &[2, 1], 0).unwrap(),
            TrivialZeroVerdict::RankOne(Freeness::Free)
        );
        assert_eq!(
            trivial_zero_verdict(&r, &[2, 1], 1),
            Err(IwasawaError::PFourNotDeclared("p2".into()))
        );
    }
}
