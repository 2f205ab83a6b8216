//! Representations given by generator matrices: word closure, regular
//! elements, the four standing hypotheses, and reducibility data.

use std::collections::HashSet;
use std::fmt;

use crate::matrix::{Matrix2, Vec2};
use crate::ring::{
    factor_element, fractional_gcd, gcd, ord_at, poly_sqrt, BaseField, Divisor, FactorError,
    FieldElem, LocalElem, Poly, PrimeElem, Scalar, Valuation,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClosurePolicy {
    /// Maximal word length `W`.
    pub word_bound: usize,
    /// Number `S` of consecutive lengths over which the gcds must not change.
    pub window: usize,
}

impl Default for ClosurePolicy {
    fn default() -> Self {
        ClosurePolicy {
            word_bound: 4,
            window: 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: usize,
    pub inverse: bool,
}

/// A word in the generators and their inverses.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn render(&self, labels: &[String]) -> String {
        if self.0.is_empty() {
            return "1".into();
        }
        self.0
            .iter()
            .map(|l| {
                if l.inverse {
                    format!("{}^-1", labels[l.gen])
                } else {
                    labels[l.gen].clone()
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

#[derive(Clone, Debug)]
pub struct Generator {
    pub label: String,
    pub matrix: Matrix2,
    pub inverse: Matrix2,
}

#[derive(Clone, Debug)]
pub struct Representation {
    field: BaseField,
    names: Vec<String>,
    generators: Vec<Generator>,
    policy: ClosurePolicy,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReprError {
    #[error("generator {0} is singular")]
    Singular(String),
    #[error("generator {0} has the wrong number of variables")]
    VariableMismatch(String),
    #[error("no regular element within word length {bound}: {}", render_candidates(.candidates))]
    NoRegularElement {
        bound: usize,
        candidates: Vec<(String, Obstruction)>,
    },
    #[error("representation is reducible: {0} vanishes on the sampled closure")]
    NotIrreducible(String),
    #[error("B*C = {0} is not in the local ring; traces are not integral")]
    NotIntegral(String),
    #[error(transparent)]
    Factor(#[from] FactorError),
}

fn render_candidates(c: &[(String, Obstruction)]) -> String {
    if c.is_empty() {
        return "no non-identity elements".into();
    }
    c.iter()
        .map(|(w, o)| format!("{w}: {o}"))
        .collect::<Vec<_>>()
        .join("; ")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Obstruction {
    DiscriminantNotSquare,
    EigenvaluesNotIntegral,
    ResiduallyEqualEigenvalues,
}

impl fmt::Display for Obstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Obstruction::DiscriminantNotSquare => "discriminant not a square",
            Obstruction::EigenvaluesNotIntegral => "eigenvalues not in R",
            Obstruction::ResiduallyEqualEigenvalues => "residually equal eigenvalues",
        })
    }
}

impl Representation {
    pub fn new(
        field: BaseField,
        names: Vec<String>,
        generators: Vec<(String, Matrix2)>,
        policy: ClosurePolicy,
    ) -> Result<Self, ReprError> {
        let mut gens = Vec::with_capacity(generators.len());
        for (label, matrix) in generators {
            if matrix.nvars() != names.len() {
                return Err(ReprError::VariableMismatch(label));
            }
            let inverse = matrix
                .inv()
                .ok_or_else(|| ReprError::Singular(label.clone()))?;
            gens.push(Generator {
                label,
                matrix,
                inverse,
            });
        }
        Ok(Representation {
            field,
            names,
            generators: gens,
            policy,
        })
    }

    pub fn field(&self) -> BaseField {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn labels(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.label.clone()).collect()
    }

    pub fn policy(&self) -> ClosurePolicy {
        self.policy
    }

    pub fn with_policy(mut self, policy: ClosurePolicy) -> Self {
        self.policy = policy;
        self
    }

    /// Letters in search order: `g_0, g_0^-1, g_1, g_1^-1, ...`.
    pub fn letters(&self) -> Vec<(Letter, &Matrix2)> {
        let mut out = Vec::with_capacity(2 * self.generators.len());
        for (i, g) in self.generators.iter().enumerate() {
            out.push((Letter { gen: i, inverse: false }, &g.matrix));
            out.push((Letter { gen: i, inverse: true }, &g.inverse));
        }
        out
    }

    pub fn identity(&self) -> Matrix2 {
        Matrix2::identity(self.field, self.nvars())
    }

    pub fn eval_word(&self, w: &Word) -> Matrix2 {
        let mut m = self.identity();
        for l in &w.0 {
            let g = &self.generators[l.gen];
            m = m.mul(if l.inverse { &g.inverse } else { &g.matrix });
        }
        m
    }

    /// The representation in the basis given by the columns of `p`.
    pub fn conjugate(&self, p: &Matrix2) -> Representation {
        let pi = p.inv().expect("invertible change of basis");
        let generators = self
            .generators
            .iter()
            .map(|g| Generator {
                label: g.label.clone(),
                matrix: pi.mul(&g.matrix).mul(p),
                inverse: pi.mul(&g.inverse).mul(p),
            })
            .collect();
        Representation {
            field: self.field,
            names: self.names.clone(),
            generators,
            policy: self.policy,
        }
    }

    pub fn render_word(&self, w: &Word) -> String {
        w.render(&self.labels())
    }
}

#[derive(Clone, Debug)]
pub struct ClosureElem {
    pub word: Word,
    pub matrix: Matrix2,
}

#[derive(Clone, Debug)]
pub struct Closure {
    /// Distinct matrices in shortlex order of their first word.
    pub elements: Vec<ClosureElem>,
    /// `layer_ends[l]` is the number of elements of word length at most `l`.
    pub layer_ends: Vec<usize>,
    /// No new matrices appeared at some length `<= W`.
    pub stabilized: bool,
}

impl Closure {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn layer(&self, l: usize) -> &[ClosureElem] {
        let start = if l == 0 { 0 } else { self.layer_ends[l - 1] };
        &self.elements[start..self.layer_ends[l]]
    }
}

/// Breadth-first enumeration of the closure, one word length at a time.
struct ClosureBuilder<'a> {
    rep: &'a Representation,
    closure: Closure,
    seen: HashSet<Matrix2>,
}

impl<'a> ClosureBuilder<'a> {
    fn new(rep: &'a Representation) -> Self {
        let id = rep.identity();
        let mut seen = HashSet::new();
        seen.insert(id.clone());
        ClosureBuilder {
            rep,
            closure: Closure {
                elements: vec![ClosureElem {
                    word: Word::default(),
                    matrix: id,
                }],
                layer_ends: vec![1],
                stabilized: false,
            },
            seen,
        }
    }

    /// Adds the next layer; returns `false` once nothing new appears.
    fn step(&mut self) -> bool {
        if self.closure.stabilized {
            return false;
        }
        let l = self.closure.layer_ends.len() - 1;
        let frontier: Vec<ClosureElem> = self.closure.layer(l).to_vec();
        let letters = self.rep.letters();
        let mut added = 0;
        for e in &frontier {
            for (letter, m) in &letters {
                let prod = e.matrix.mul(m);
                if self.seen.insert(prod.clone()) {
                    let mut w = e.word.clone();
                    w.0.push(*letter);
                    self.closure.elements.push(ClosureElem {
                        word: w,
                        matrix: prod,
                    });
                    added += 1;
                }
            }
        }
        self.closure.layer_ends.push(self.closure.elements.len());
        if added == 0 {
            self.closure.stabilized = true;
        }
        added > 0
    }
}

/// All products of generators and inverses of length at most `W`.
pub fn close_monoid(rep: &Representation) -> Closure {
    let mut b = ClosureBuilder::new(rep);
    for _ in 0..rep.policy.word_bound {
        if !b.step() {
            break;
        }
    }
    b.closure
}

#[derive(Clone, Debug)]
pub struct RegularElementData {
    pub word: Word,
    pub word_label: String,
    pub matrix: Matrix2,
    pub lambda_psi: LocalElem,
    pub lambda_psi_prime: LocalElem,
    /// Columns `v_psi`, `v_psi'`.
    pub eigenbasis: Matrix2,
    /// `(e_psi, e_psi')`.
    pub idempotents: (Matrix2, Matrix2),
}

impl RegularElementData {
    pub fn psi_residue(&self) -> Scalar {
        self.lambda_psi.residue()
    }

    pub fn psi_prime_residue(&self) -> Scalar {
        self.lambda_psi_prime.residue()
    }

    pub fn v_psi(&self) -> Vec2 {
        self.eigenbasis.col(0)
    }

    pub fn v_psi_prime(&self) -> Vec2 {
        self.eigenbasis.col(1)
    }

    /// Same eigen-data with the eigenvectors rescaled by `u` and `v`.
    pub fn rescaled(&self, u: &FieldElem, v: &FieldElem) -> Self {
        let c0 = self.eigenbasis.col(0);
        let c1 = self.eigenbasis.col(1);
        let mut out = self.clone();
        out.eigenbasis = Matrix2::from_cols(
            [c0[0].mul(u), c0[1].mul(u)],
            [c1[0].mul(v), c1[1].mul(v)],
        );
        out
    }

    /// `e^2 = e`, `e + e' = 1`, `e e' = 0`.
    pub fn idempotent_laws_hold(&self) -> bool {
        let (e, f) = &self.idempotents;
        let id = Matrix2::identity(e.field(), e.nvars());
        let zero = id.sub(&id);
        e.mul(e) == *e && f.mul(f) == *f && e.add(f) == id && e.mul(f) == zero && f.mul(e) == zero
    }

    /// `P^-1 g_0 P = diag(lambda_psi, lambda_psi')`.
    pub fn diagonalizes(&self) -> bool {
        self.matrix.conj_by(&self.eigenbasis)
            == Matrix2::diag(
                self.lambda_psi.as_field().clone(),
                self.lambda_psi_prime.as_field().clone(),
            )
    }
}

/// Scales `v` to a primitive polynomial vector whose first nonzero
/// coordinate is associate-canonical.
pub fn primitive_vector(v: &Vec2) -> Vec2 {
    let k = if v[0].is_zero() { 1 } else { 0 };
    let pivot = v[k].clone();
    let w = [v[0].div(&pivot).unwrap(), v[1].div(&pivot).unwrap()];
    let mut den = Poly::one(pivot.field(), pivot.nvars());
    for c in &w {
        let g = gcd(&den, c.den());
        den = den.mul(c.den()).div_exact(&g).unwrap().canonical();
    }
    let df = FieldElem::from_poly(den);
    let w = [w[0].mul(&df), w[1].mul(&df)];
    let g = gcd(w[0].num(), w[1].num());
    let gf = FieldElem::from_poly(g);
    [w[0].div(&gf).unwrap(), w[1].div(&gf).unwrap()]
}

fn eigenvector(m: &Matrix2, lambda: &FieldElem) -> Vec2 {
    let v = [m.b().clone(), lambda.sub(m.a())];
    let v = if v[0].is_zero() && v[1].is_zero() {
        [lambda.sub(m.d()), m.c().clone()]
    } else {
        v
    };
    primitive_vector(&v)
}

fn regular_data(rep: &Representation, e: &ClosureElem) -> Result<RegularElementData, Obstruction> {
    let m = &e.matrix;
    let field = rep.field();
    let tr = m.trace();
    let det = m.det();
    if !tr.is_integral() || !det.is_integral() {
        return Err(Obstruction::EigenvaluesNotIntegral);
    }
    let four = FieldElem::from_int(field, rep.nvars(), 4);
    let disc = tr.mul(&tr).sub(&four.mul(&det));
    if disc.is_zero() {
        return Err(Obstruction::ResiduallyEqualEigenvalues);
    }
    let sn = poly_sqrt(disc.num()).ok_or(Obstruction::DiscriminantNotSquare)?;
    let sd = poly_sqrt(disc.den()).ok_or(Obstruction::DiscriminantNotSquare)?;
    let s = FieldElem::new(sn, sd).unwrap();
    let half = FieldElem::from_int(field, rep.nvars(), 2).inv().unwrap();
    let l1 = tr.add(&s).mul(&half);
    let l2 = tr.sub(&s).mul(&half);
    let (Some(l1), Some(l2)) = (l1.to_local(), l2.to_local()) else {
        return Err(Obstruction::EigenvaluesNotIntegral);
    };
    let (r1, r2) = (l1.residue(), l2.residue());
    if r1 == r2 {
        return Err(Obstruction::ResiduallyEqualEigenvalues);
    }
    // psi is the root matching the residual (1,1) entry when exactly one
    // does; otherwise the root with the smaller residue.
    let a0 = m.a().residue();
    let first_is_psi = match a0 {
        Some(a) if (a == r1) != (a == r2) => a == r1,
        _ => r1 < r2,
    };
    let (lp, lq) = if first_is_psi { (l1, l2) } else { (l2, l1) };
    let vp = eigenvector(m, lp.as_field());
    let vq = eigenvector(m, lq.as_field());
    let eigenbasis = Matrix2::from_cols(vp, vq);
    let diff = lp.as_field().sub(lq.as_field());
    let id = rep.identity();
    let ep = m
        .sub(&Matrix2::scalar(lq.as_field().clone()))
        .scale(&diff.inv().unwrap());
    let eq = id.sub(&ep);
    Ok(RegularElementData {
        word: e.word.clone(),
        word_label: rep.render_word(&e.word),
        matrix: m.clone(),
        lambda_psi: lp,
        lambda_psi_prime: lq,
        eigenbasis,
        idempotents: (ep, eq),
    })
}

/// The first closure element, in shortlex word order, whose eigenvalues lie
/// in `R` with distinct residues.
pub fn find_regular(rep: &Representation) -> Result<RegularElementData, ReprError> {
    let mut b = ClosureBuilder::new(rep);
    let mut candidates = Vec::new();
    let mut checked = 1;
    for _ in 0..rep.policy.word_bound {
        if !b.step() {
            break;
        }
        let fresh: Vec<ClosureElem> = b.closure.elements[checked..].to_vec();
        checked = b.closure.elements.len();
        for e in &fresh {
            match regular_data(rep, e) {
                Ok(d) => return Ok(d),
                Err(o) => candidates.push((rep.render_word(&e.word), o)),
            }
        }
    }
    Err(ReprError::NoRegularElement {
        bound: rep.policy.word_bound,
        candidates,
    })
}

/// The closure conjugated into the eigenbasis with the running gcds of the
/// off-diagonal entries.
#[derive(Clone, Debug)]
pub struct EigenClosure {
    pub rep: Representation,
    pub closure: Closure,
    /// Fractional gcd of the `b(g)`; zero when they all vanish.
    pub b_gcd: FieldElem,
    pub c_gcd: FieldElem,
    /// `(B, C)` after each word length.
    pub history: Vec<(FieldElem, FieldElem)>,
    pub gcd_stabilized: bool,
}

pub fn eigen_closure(rep: &Representation, regular: &RegularElementData) -> EigenClosure {
    let erep = rep.conjugate(&regular.eigenbasis);
    let closure = close_monoid(&erep);
    let zero = FieldElem::zero(rep.field(), rep.nvars());
    let (mut bg, mut cg) = (zero.clone(), zero);
    let mut history = Vec::new();
    for l in 0..closure.layer_ends.len() {
        let layer = closure.layer(l);
        bg = fractional_gcd(std::iter::once(&bg).chain(layer.iter().map(|e| e.matrix.b()))).unwrap();
        cg = fractional_gcd(std::iter::once(&cg).chain(layer.iter().map(|e| e.matrix.c()))).unwrap();
        history.push((bg.clone(), cg.clone()));
    }
    let s = rep.policy.window;
    let gcd_stabilized = closure.stabilized
        || (history.len() > s && history[history.len() - 1 - s..].windows(2).all(|w| w[0] == w[1]));
    EigenClosure {
        rep: erep,
        closure,
        b_gcd: bg,
        c_gcd: cg,
        history,
        gcd_stabilized,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypothesisReport {
    pub trace_integral: bool,
    pub red: bool,
    pub g_dist: bool,
    pub ir: bool,
    pub failures: Vec<String>,
}

impl HypothesisReport {
    pub fn all_hold(&self) -> bool {
        self.trace_integral && self.red && self.g_dist && self.ir
    }
}

pub fn check_hypotheses(rep: &Representation, regular: &RegularElementData) -> HypothesisReport {
    check_hypotheses_from(&eigen_closure(rep, regular), regular)
}

pub fn check_hypotheses_from(ec: &EigenClosure, regular: &RegularElementData) -> HypothesisReport {
    let mut failures = Vec::new();
    let labels = ec.rep.labels();
    let mut trace_integral = true;
    for e in &ec.closure.elements {
        if !e.matrix.trace().is_integral() {
            trace_integral = false;
            failures.push(format!("trace of {} is not in R", e.word.render(&labels)));
            break;
        }
    }
    let ir = !ec.b_gcd.is_zero() && !ec.c_gcd.is_zero();
    if !ir {
        failures.push("off-diagonal gcd vanishes: a common eigenline exists".into());
    }
    let g_dist = regular.psi_residue() != regular.psi_prime_residue();
    if !g_dist {
        failures.push("residual characters coincide on every sampled element".into());
    }
    let red = trace_integral && residually_reducible(ec);
    if trace_integral && !red {
        failures.push("residual trace is not a sum of two characters".into());
    }
    HypothesisReport {
        trace_integral,
        red,
        g_dist,
        ir,
        failures,
    }
}

/// Whether `J` lies in the maximal ideal and the diagonal residues add up to
/// the residual trace.
fn residually_reducible(ec: &EigenClosure) -> bool {
    let field = ec.rep.field();
    let diag_ok = ec.closure.elements.iter().all(|e| {
        match (e.matrix.a().residue(), e.matrix.d().residue(), e.matrix.trace().residue()) {
            (Some(a), Some(d), Some(t)) => field.add(&a, &d) == t,
            _ => false,
        }
    });
    if !diag_ok {
        return false;
    }
    let (b, c) = (&ec.b_gcd, &ec.c_gcd);
    if b.is_zero() || c.is_zero() {
        return true;
    }
    let bc = b.mul(c);
    if !bc.is_local_unit() {
        return true;
    }
    let in_m = |x: &FieldElem| x.residue().map(|r| r == Scalar::from_integer(0.into())).unwrap_or(false);
    ec.closure.elements.iter().all(|e| in_m(&e.matrix.b().div(b).unwrap()))
        || ec.closure.elements.iter().all(|e| in_m(&e.matrix.c().div(c).unwrap()))
}

/// An element of `R / I` for the divisorial ideal `I = modulus`.
#[derive(Clone, Debug)]
pub struct ResidueElem {
    pub rep: FieldElem,
    pub modulus: Divisor,
}

impl ResidueElem {
    pub fn congruent(&self, other: &FieldElem) -> bool {
        congruent_mod(&self.rep, other, &self.modulus)
    }
}

impl PartialEq for ResidueElem {
    fn eq(&self, other: &Self) -> bool {
        self.modulus == other.modulus && self.congruent(&other.rep)
    }
}

/// `ord_p(a - b) >= e` for every `p^e` in `modulus`.
pub fn congruent_mod(a: &FieldElem, b: &FieldElem, modulus: &Divisor) -> bool {
    let diff = a.sub(b);
    modulus
        .iter()
        .all(|(p, e)| ord_at(p, &diff) >= Valuation::Finite(e))
}

#[derive(Clone, Debug)]
pub struct ReducibilityData {
    pub regular: RegularElementData,
    /// The representation in eigenbasis coordinates.
    pub eigen_rep: Representation,
    pub b: FieldElem,
    pub c: FieldElem,
    pub j_divisor: Divisor,
    /// `(p_i, n_i)` in divisor order.
    pub primes: Vec<(PrimeElem, i64)>,
    /// `g -> a(g) mod J` per generator label.
    pub theta: Vec<(String, ResidueElem)>,
    /// `g -> d(g) mod J` per generator label.
    pub theta_prime: Vec<(String, ResidueElem)>,
    pub stabilized: bool,
    pub closure_stabilized: bool,
    /// Primes available for factoring further elements.
    pub hints: Vec<PrimeElem>,
}

impl ReducibilityData {
    pub fn dims(&self) -> Vec<i64> {
        self.primes.iter().map(|(_, n)| *n).collect()
    }

    pub fn theta_of(&self, label: &str) -> Option<&ResidueElem> {
        self.theta.iter().find(|(l, _)| l == label).map(|(_, r)| r)
    }
}

pub fn analyze_reducibility(
    rep: &Representation,
    regular: &RegularElementData,
    hints: &[PrimeElem],
) -> Result<ReducibilityData, ReprError> {
    analyze_from(eigen_closure(rep, regular), regular, hints)
}

pub fn analyze_from(
    ec: EigenClosure,
    regular: &RegularElementData,
    hints: &[PrimeElem],
) -> Result<ReducibilityData, ReprError> {
    if ec.b_gcd.is_zero() {
        return Err(ReprError::NotIrreducible("b(g)".into()));
    }
    if ec.c_gcd.is_zero() {
        return Err(ReprError::NotIrreducible("c(g)".into()));
    }
    let bc = ec.b_gcd.mul(&ec.c_gcd);
    let bc_local = bc
        .to_local()
        .ok_or_else(|| ReprError::NotIntegral(bc.to_string()))?;
    let fz = factor_element(&bc_local, hints)?;
    let j_divisor = fz.divisor;
    let primes: Vec<(PrimeElem, i64)> = j_divisor.iter().map(|(p, e)| (p.clone(), e)).collect();
    let mut theta = Vec::new();
    let mut theta_prime = Vec::new();
    for g in ec.rep.generators() {
        theta.push((
            g.label.clone(),
            ResidueElem {
                rep: g.matrix.a().clone(),
                modulus: j_divisor.clone(),
            },
        ));
        theta_prime.push((
            g.label.clone(),
            ResidueElem {
                rep: g.matrix.d().clone(),
                modulus: j_divisor.clone(),
            },
        ));
    }
    let mut all_hints: Vec<PrimeElem> = hints.to_vec();
    for (p, _) in &primes {
        if !all_hints.contains(p) {
            all_hints.push(p.clone());
        }
    }
    Ok(ReducibilityData {
        regular: regular.clone(),
        b: ec.b_gcd.clone(),
        c: ec.c_gcd.clone(),
        j_divisor,
        primes,
        theta,
        theta_prime,
        stabilized: ec.gcd_stabilized,
        closure_stabilized: ec.closure.stabilized,
        eigen_rep: ec.rep,
        hints: all_hints,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::parse_expr;

    pub(crate) fn mat(f: BaseField, names: &[String], s: [&str; 4]) -> Matrix2 {
        let p = |x: &str| parse_expr(x, f, names).unwrap();
        Matrix2::new(p(s[0]), p(s[1]), p(s[2]), p(s[3]))
    }

    fn rep(f: BaseField, names: &[&str], gens: &[(&str, [&str; 4])], w: usize) -> Representation {
        let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        let gens = gens
            .iter()
            .map(|(l, m)| (l.to_string(), mat(f, &names, *m)))
            .collect();
        Representation::new(
            f,
            names,
            gens,
            ClosurePolicy {
                word_bound: w,
                window: 2,
            },
        )
        .unwrap()
    }

    const F5: BaseField = BaseField::Prime(5);

    #[test]
    fn closure_of_diagonal_generator() {
        let r = rep(F5, &["t"], &[("g0", ["2", "0", "0", "1"])], 4);
        let c = close_monoid(&r);
        assert_eq!(c.len(), 4);
        assert!(c.stabilized);
        let r = rep(F5, &["x", "y"], &[], 3);
        assert_eq!(close_monoid(&r).len(), 1);
        let r = rep(F5, &["x", "y"], &[("u", ["1", "x", "0", "1"])], 2);
        let c = close_monoid(&r);
        assert_eq!(c.len(), 5);
        assert!(!c.stabilized);
    }

    #[test]
    fn regular_element_examples() {
        let r = rep(F5, &["t"], &[("g0", ["2", "0", "0", "1"])], 4);
        let d = find_regular(&r).unwrap();
        assert_eq!(d.psi_residue(), F5.from_int(2));
        assert_eq!(d.eigenbasis, r.identity());
        assert!(d.idempotent_laws_hold() && d.diagonalizes());

        let r = rep(F5, &["t"], &[("g", ["1", "1", "0", "2"])], 4);
        let d = find_regular(&r).unwrap();
        assert_eq!(d.psi_residue(), F5.from_int(1));
        assert_eq!(d.eigenbasis.to_string(), "[[1, 1], [0, 1]]");

        let r = rep(F5, &["x", "y"], &[("u", ["1", "x", "0", "1"])], 3);
        match find_regular(&r) {
            Err(ReprError::NoRegularElement { candidates, .. }) => {
                assert!(candidates
                    .iter()
                    .all(|(_, o)| *o == Obstruction::ResiduallyEqualEigenvalues));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn reducibility_examples() {
        let ex2 = rep(
            F5,
            &["t"],
            &[
                ("g0", ["2", "0", "0", "1"]),
                ("u", ["1", "t^2", "0", "1"]),
                ("w", ["1", "0", "1", "1"]),
            ],
            4,
        );
        let reg = find_regular(&ex2).unwrap();
        assert!(check_hypotheses(&ex2, &reg).all_hold());
        let red = analyze_reducibility(&ex2, &reg, &[]).unwrap();
        assert_eq!(red.b.to_string(), "t^2");
        assert!(red.c.is_one());
        assert_eq!(red.dims(), vec![2]);

        let diag = rep(F5, &["t"], &[("g0", ["2", "0", "0", "1"])], 4);
        let reg = find_regular(&diag).unwrap();
        assert!(!check_hypotheses(&diag, &reg).ir);
        assert!(matches!(
            analyze_reducibility(&diag, &reg, &[]),
            Err(ReprError::NotIrreducible(_))
        ));

        let bad = rep(
            F5,
            &["x", "y"],
            &[("g0", ["2", "0", "0", "1"]), ("h", ["1/x", "0", "0", "1"])],
            2,
        );
        let reg = find_regular(&bad).unwrap();
        assert!(!check_hypotheses(&bad, &reg).trace_integral);
    }
}
