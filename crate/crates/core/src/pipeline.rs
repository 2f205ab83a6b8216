//! End-to-end runs: regular element, hypotheses, reducibility data, graph.

use num_traits::Zero;
use rand::Rng;

use crate::graph::{build_lattice_graph, GraphError, LatticeGraph};
use crate::matrix::Matrix2;
use crate::repr::{
    analyze_from, check_hypotheses_from, eigen_closure, find_regular, HypothesisReport,
    ReducibilityData, RegularElementData, ReprError, Representation,
};
use crate::ring::{BaseField, Divisor, FieldElem, Monomial, Poly, PrimeElem};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PipelineError {
    #[error(transparent)]
    Repr(#[from] ReprError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("hypothesis failed: {0}")]
    Hypothesis(String),
}

#[derive(Clone, Debug)]
pub struct Analysis {
    pub regular: RegularElementData,
    pub hypotheses: HypothesisReport,
    /// Present whenever the off-diagonal gcds are nonzero and factor.
    pub red: Result<ReducibilityData, ReprError>,
}

/// Finds `g_0`, checks the hypotheses, and computes the reducibility data.
pub fn analyze(rep: &Representation, hints: &[PrimeElem]) -> Result<Analysis, PipelineError> {
    let regular = find_regular(rep)?;
    Ok(analyze_with(rep, regular, hints))
}

/// As [`analyze`] with a prescribed regular element (for example one whose
/// eigenvectors were rescaled).
pub fn analyze_with(rep: &Representation, regular: RegularElementData, hints: &[PrimeElem]) -> Analysis {
    let ec = eigen_closure(rep, &regular);
    let hypotheses = check_hypotheses_from(&ec, &regular);
    let red = analyze_from(ec, &regular, hints);
    Analysis {
        regular,
        hypotheses,
        red,
    }
}

/// Builds the lattice graph once trace-integrality and irreducibility hold.
pub fn graph_from(analysis: &Analysis) -> Result<LatticeGraph, PipelineError> {
    if !analysis.hypotheses.trace_integral {
        return Err(PipelineError::Hypothesis("traces are not integral".into()));
    }
    let red = analysis.red.as_ref().map_err(|e| PipelineError::Repr(e.clone()))?;
    Ok(build_lattice_graph(red)?)
}

pub fn run_graph(rep: &Representation, hints: &[PrimeElem]) -> Result<(Analysis, LatticeGraph), PipelineError> {
    let a = analyze(rep, hints)?;
    let g = graph_from(&a)?;
    Ok((a, g))
}

/// A random polynomial of total degree at most `deg` with small coefficients.
pub fn random_poly<R: Rng>(field: BaseField, nvars: usize, deg: u32, rng: &mut R) -> Poly {
    let mut p = Poly::zero(field, nvars);
    let mut monos = vec![Monomial::one(nvars)];
    for _ in 0..deg {
        let mut next = Vec::new();
        for m in &monos {
            for v in 0..nvars {
                let mut e = m.0.clone();
                e[v] += 1;
                next.push(Monomial(e));
            }
        }
        monos.extend(next);
    }
    monos.sort();
    monos.dedup();
    for m in monos {
        let c = field.from_int(rng.gen_range(-3..=3));
        p = p.add(&Poly::monomial(field, nvars, m, c));
    }
    p
}

/// A random unit of `R`: a quotient of polynomials with nonzero constant terms.
pub fn random_unit<R: Rng>(field: BaseField, nvars: usize, rng: &mut R) -> FieldElem {
    let make = |rng: &mut R| loop {
        let p = random_poly(field, nvars, 1, rng);
        if !p.constant_term().is_zero() {
            return p;
        }
    };
    let n = make(rng);
    let d = make(rng);
    FieldElem::new(n, d).unwrap()
}

/// A random element of `GL_2(K)`.
pub fn random_gl2<R: Rng>(field: BaseField, nvars: usize, rng: &mut R) -> Matrix2 {
    loop {
        let mut e = || FieldElem::from_poly(random_poly(field, nvars, 1, rng));
        let (a, b, c, d) = (e(), e(), e(), e());
        let den = loop {
            let p = random_poly(field, nvars, 1, rng);
            if !p.is_zero() {
                break FieldElem::from_poly(p);
            }
        };
        let m = Matrix2::new(a.div(&den).unwrap(), b, c, d);
        if !m.det().is_zero() {
            return m;
        }
    }
}

/// Invariants compared by the basis-change check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphInvariants {
    pub dims: Vec<i64>,
    pub j_divisor: Divisor,
    pub edge_primes: Vec<PrimeElem>,
}

pub fn invariants(graph: &LatticeGraph) -> GraphInvariants {
    GraphInvariants {
        dims: graph.dims().to_vec(),
        j_divisor: graph.j_true(),
        edge_primes: graph.edge_primes(),
    }
}

/// Reruns the pipeline after conjugating by a random element of `GL_2(K)`
/// and rescaling the eigenvectors by random units.
pub fn conjugated_invariants<R: Rng>(
    rep: &Representation,
    hints: &[PrimeElem],
    rng: &mut R,
) -> Result<GraphInvariants, PipelineError> {
    let g = random_gl2(rep.field(), rep.nvars(), rng);
    let conj = rep.conjugate(&g);
    let regular = find_regular(&conj)?;
    let u = random_unit(rep.field(), rep.nvars(), rng);
    let v = random_unit(rep.field(), rep.nvars(), rng);
    let analysis = analyze_with(&conj, regular.rescaled(&u, &v), hints);
    let graph = graph_from(&analysis)?;
    Ok(invariants(&graph))
}
