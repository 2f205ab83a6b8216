//! Rectangle graphs, the lattice family realizing them, the one-variable
//! breadth-first oracle, and the verification harness.

use std::collections::BTreeSet;

use crate::lattice::{
    equal_up_to_homothety, is_stable, quotient_data, residual_split, residual_stable_lines, Lattice, LatticeError,
    Stability, Violation,
};
use crate::matrix::Matrix2;
use crate::repr::{ReducibilityData, Representation};
use crate::ring::{BaseField, Divisor, FieldElem, Poly, PrimeElem};

/// The grid graph on `prod [0, n_i]` with unit-step edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RectGraph {
    pub dims: Vec<i64>,
    /// Lexicographic order, first coordinate most significant.
    pub vertices: Vec<Vec<i64>>,
    /// `(lower, upper, direction)` with `upper = lower + e_direction`.
    pub edges: Vec<(usize, usize, usize)>,
}

impl RectGraph {
    pub fn index_of(&self, coords: &[i64]) -> Option<usize> {
        if coords.len() != self.dims.len() {
            return None;
        }
        let mut idx = 0usize;
        for (c, n) in coords.iter().zip(&self.dims) {
            if *c < 0 || c > n {
                return None;
            }
            idx = idx * (*n as usize + 1) + *c as usize;
        }
        Some(idx)
    }

    pub fn contains(&self, coords: &[i64]) -> bool {
        self.index_of(coords).is_some()
    }
}

pub fn build_rect(dims: &[i64]) -> RectGraph {
    assert!(dims.iter().all(|&n| n >= 0), "negative dimension");
    let mut vertices: Vec<Vec<i64>> = vec![Vec::new()];
    for &n in dims {
        vertices = vertices
            .into_iter()
            .flat_map(|v| {
                (0..=n).map(move |k| {
                    let mut w = v.clone();
                    w.push(k);
                    w
                })
            })
            .collect();
    }
    let mut rect = RectGraph {
        dims: dims.to_vec(),
        vertices,
        edges: Vec::new(),
    };
    let mut edges = Vec::new();
    for (i, v) in rect.vertices.iter().enumerate() {
        for s in 0..dims.len() {
            let mut w = v.clone();
            w[s] += 1;
            if let Some(j) = rect.index_of(&w) {
                edges.push((i, j, s));
            }
        }
    }
    rect.edges = edges;
    rect
}

/// Componentwise `a <= b`.
pub fn le(a: &[i64], b: &[i64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("no candidate lattice is stable")]
    NoStableLattice,
    #[error("stable candidates do not form a box: {0:?}")]
    NotABox(Vec<Vec<i64>>),
    #[error("breadth-first search found {found} classes, more than the bound {limit}")]
    NonTermination { found: usize, limit: usize },
    #[error("starting lattice is not stable: {0}")]
    UnstableStart(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Clone, Debug)]
pub struct Vertex {
    pub coords: Vec<i64>,
    /// Basis in the original coordinates.
    pub lattice: Lattice,
    /// Basis `diag(s_j, 1)` in eigenbasis coordinates.
    pub eigen_lattice: Lattice,
}

#[derive(Clone, Debug)]
pub struct LatticeGraph {
    pub red: ReducibilityData,
    pub rect: RectGraph,
    /// The primes `p_1..p_r` of the filtered box (those with `n_i >= 1`).
    pub primes: Vec<PrimeElem>,
    pub vertices: Vec<Vertex>,
    /// `B` divided by the lower corner of the surviving candidate box.
    pub b_true: FieldElem,
    pub candidate_dims: Vec<i64>,
    /// Lower corner of the surviving box inside the candidate box.
    pub box_offset: Vec<i64>,
    pub box_shrunk: bool,
    /// Candidate vertices rejected by the stability filter.
    pub rejected: Vec<(Vec<i64>, Violation)>,
}

impl LatticeGraph {
    pub fn base_point(&self) -> &Lattice {
        &self.vertices[0].lattice
    }

    pub fn dims(&self) -> &[i64] {
        &self.rect.dims
    }

    /// `J` of the filtered box, as a divisor.
    pub fn j_true(&self) -> Divisor {
        self.primes
            .iter()
            .cloned()
            .zip(self.rect.dims.iter().copied())
            .collect()
    }

    /// The eigen-coordinate scalar `s_j = B_true / prod p_i^{j_i}`; any
    /// integer coordinates are allowed, including ones outside the box.
    pub fn scalar_at(&self, coords: &[i64]) -> FieldElem {
        scalar_for(&self.b_true, &self.primes, coords)
    }

    /// The lattice `P diag(s_j, 1)` for arbitrary integer coordinates.
    pub fn lattice_at(&self, coords: &[i64]) -> Lattice {
        lattice_for(&self.red, &self.scalar_at(coords)).0
    }

    /// Edge primes as a sorted multiset.
    pub fn edge_primes(&self) -> Vec<PrimeElem> {
        let mut out: Vec<PrimeElem> = self
            .rect
            .edges
            .iter()
            .map(|(_, _, s)| self.primes[*s].clone())
            .collect();
        out.sort();
        out
    }
}

fn scalar_for(b: &FieldElem, primes: &[PrimeElem], coords: &[i64]) -> FieldElem {
    let mut s = b.clone();
    for (p, &j) in primes.iter().zip(coords) {
        s = s.mul(&p.as_field().pow(-j));
    }
    s
}

/// `(original, eigen)` lattices for the eigen-coordinate scalar `s`.
fn lattice_for(red: &ReducibilityData, s: &FieldElem) -> (Lattice, Lattice) {
    let one = FieldElem::one(s.field(), s.nvars());
    let d = Matrix2::diag(s.clone(), one);
    let eigen = Lattice::new(d.clone()).expect("nonzero scalar");
    let original = Lattice::new(red.regular.eigenbasis.mul(&d)).expect("invertible");
    (original, eigen)
}

/// Builds the candidate box from the sampled `B`, filters it by exact
/// stability, and re-derives the dimensions from the survivors.
pub fn build_lattice_graph(red: &ReducibilityData) -> Result<LatticeGraph, GraphError> {
    let primes: Vec<PrimeElem> = red.primes.iter().map(|(p, _)| p.clone()).collect();
    let candidate_dims = red.dims();
    let cand = build_rect(&candidate_dims);
    let mut stable = Vec::new();
    let mut rejected = Vec::new();
    for v in &cand.vertices {
        let s = scalar_for(&red.b, &primes, v);
        let (_, eigen) = lattice_for(red, &s);
        match is_stable(&eigen, &red.eigen_rep) {
            Stability::Stable => stable.push(v.clone()),
            Stability::Violated(why) => rejected.push((v.clone(), why)),
        }
    }
    if stable.is_empty() {
        return Err(GraphError::NoStableLattice);
    }
    let r = primes.len();
    let lo: Vec<i64> = (0..r).map(|i| stable.iter().map(|v| v[i]).min().unwrap()).collect();
    let hi: Vec<i64> = (0..r).map(|i| stable.iter().map(|v| v[i]).max().unwrap()).collect();
    let expected: usize = lo.iter().zip(&hi).map(|(l, h)| (h - l + 1) as usize).product();
    if expected != stable.len() {
        return Err(GraphError::NotABox(stable));
    }
    let box_shrunk = lo.iter().any(|&l| l > 0) || hi != candidate_dims;
    let b_true = scalar_for(&red.b, &primes, &lo);
    let mut kept_primes = Vec::new();
    let mut dims = Vec::new();
    for i in 0..r {
        if hi[i] > lo[i] {
            kept_primes.push(primes[i].clone());
            dims.push(hi[i] - lo[i]);
        }
    }
    let rect = build_rect(&dims);
    let vertices = rect
        .vertices
        .iter()
        .map(|c| {
            let (lattice, eigen_lattice) = lattice_for(red, &scalar_for(&b_true, &kept_primes, c));
            Vertex {
                coords: c.clone(),
                lattice,
                eigen_lattice,
            }
        })
        .collect();
    Ok(LatticeGraph {
        red: red.clone(),
        rect,
        primes: kept_primes,
        vertices,
        b_true,
        candidate_dims,
        box_offset: lo,
        box_shrunk,
        rejected,
    })
}

#[derive(Clone, Debug)]
pub struct SegmentBfs {
    pub classes: Vec<Lattice>,
    pub adjacency: Vec<(usize, usize)>,
}

/// Breadth-first search over homothety classes of stable lattices through
/// index-`t` neighbors (one variable). Fails once more than `limit` classes
/// have been found.
pub fn dvr_segment_bfs(
    rep: &Representation,
    start: &Lattice,
    limit: usize,
) -> Result<SegmentBfs, GraphError> {
    if let Stability::Violated(v) = is_stable(start, rep) {
        return Err(GraphError::UnstableStart(v.to_string()));
    }
    let t = FieldElem::var(rep.field(), 1, 0);
    let t_inv = t.inv().unwrap();
    let mut classes = vec![start.clone()];
    let mut adjacency = BTreeSet::new();
    let mut head = 0;
    while head < classes.len() {
        let l = classes[head].clone();
        let mut neighbors: Vec<Lattice> = residual_stable_lines(&l, rep)?
            .into_iter()
            .map(|r| r.sublattice)
            .collect();
        // Upward moves: lines of t^-1 L / L.
        neighbors.extend(
            residual_stable_lines(&l.scale(&t_inv), rep)?
                .into_iter()
                .map(|r| r.sublattice),
        );
        for n in neighbors {
            let idx = match classes
                .iter()
                .position(|c| equal_up_to_homothety(c, &n).is_some())
            {
                Some(i) => i,
                None => {
                    classes.push(n);
                    if classes.len() > limit {
                        return Err(GraphError::NonTermination {
                            found: classes.len(),
                            limit,
                        });
                    }
                    classes.len() - 1
                }
            };
            if idx != head {
                adjacency.insert((head.min(idx), head.max(idx)));
            }
        }
        head += 1;
    }
    Ok(SegmentBfs {
        classes,
        adjacency: adjacency.into_iter().collect(),
    })
}

/// All sublattices of `R^2` with determinant dividing `t^n` in one
/// variable over `F_p`, as column Hermite forms `[[t^a, 0], [c, t^b]]` with
/// `deg c < b`.
pub fn enumerate_sublattices(field: BaseField, n: u32) -> Vec<Lattice> {
    let elems = field.elements().expect("finite field");
    let t = Poly::var(field, 1, 0);
    let mut out = Vec::new();
    for b in 0..=n {
        // all polynomials of degree < b
        let mut polys = vec![Poly::zero(field, 1)];
        for k in 0..b {
            let mono = &t.pow(k);
            polys = polys
                .iter()
                .flat_map(|p| elems.iter().map(move |c| p.add(&mono.scale(c))))
                .collect();
        }
        for a in 0..=(n - b) {
            for c in &polys {
                let m = Matrix2::new(
                    FieldElem::from_poly(t.pow(a)),
                    FieldElem::zero(field, 1),
                    FieldElem::from_poly(c.clone()),
                    FieldElem::from_poly(t.pow(b)),
                );
                out.push(Lattice::new(m).unwrap());
            }
        }
    }
    out
}

/// Homothety classes of stable sublattices of `within` with index dividing
/// `t^n`, found by exhaustive enumeration.
pub fn brute_force_stable_classes(rep: &Representation, within: &Lattice, n: u32) -> Vec<Lattice> {
    let mut classes: Vec<Lattice> = Vec::new();
    for h in enumerate_sublattices(rep.field(), n) {
        let l = within.transform(h.basis()).expect("invertible");
        if !is_stable(&l, rep).is_stable() {
            continue;
        }
        if !classes.iter().any(|c| equal_up_to_homothety(c, &l).is_some()) {
            classes.push(l);
        }
    }
    classes
}

/// Two lists of lattices describe the same set of homothety classes.
pub fn same_classes(a: &[Lattice], b: &[Lattice]) -> bool {
    let covers = |x: &[Lattice], y: &[Lattice]| {
        x.iter()
            .all(|l| y.iter().any(|m| equal_up_to_homothety(l, m).is_some()))
    };
    covers(a, b) && covers(b, a)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub details: Vec<String>,
}

impl CheckOutcome {
    fn new(name: &str) -> Self {
        CheckOutcome {
            name: name.into(),
            passed: true,
            details: Vec::new(),
        }
    }

    fn fail(&mut self, msg: String) {
        self.passed = false;
        self.details.push(msg);
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub checks: Vec<CheckOutcome>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn coords_str(c: &[i64]) -> String {
    format!(
        "({})",
        c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
    )
}

fn divisor_between(graph: &LatticeGraph, lo: &[i64], hi: &[i64]) -> Divisor {
    graph
        .primes
        .iter()
        .cloned()
        .zip(lo.iter().zip(hi).map(|(a, b)| b - a))
        .collect()
}

/// Checks the quotient `L(hi) / L(lo)` against `sum (hi - lo) p` and `theta`.
fn check_quotient(
    graph: &LatticeGraph,
    rep: &Representation,
    lo: &[i64],
    hi: &[i64],
) -> Result<Divisor, String> {
    let expected = divisor_between(graph, lo, hi);
    let sub = graph.lattice_at(lo);
    let sup = graph.lattice_at(hi);
    let q = quotient_data(&sub, &sup, rep, &expected, &graph.red.hints)
        .map_err(|e| format!("{} < {}: {e}", coords_str(lo), coords_str(hi)))?;
    if q.char_ideal != expected {
        return Err(format!(
            "{} < {}: quotient divisor {} differs from {}",
            coords_str(lo),
            coords_str(hi),
            q.char_ideal,
            expected
        ));
    }
    for (label, chi) in &q.character {
        let theta = graph.red.theta_of(label).expect("label");
        if !chi.congruent(&theta.rep) {
            return Err(format!(
                "{} < {}: character at {label} is {} but theta is {}",
                coords_str(lo),
                coords_str(hi),
                chi.rep,
                theta.rep
            ));
        }
    }
    Ok(q.char_ideal)
}

/// Products `prod p_i^{e_i}` with each `e_i` in `-(n_i+1) ..= n_i+1`.
fn sample_scalars(graph: &LatticeGraph) -> Vec<FieldElem> {
    let ranges: Vec<i64> = graph.rect.dims.iter().map(|n| 2 * n + 3).collect();
    let grid = build_rect(&ranges.iter().map(|k| k - 1).collect::<Vec<_>>());
    grid.vertices
        .iter()
        .map(|v| {
            let shifted: Vec<i64> = v
                .iter()
                .zip(&graph.rect.dims)
                .map(|(e, n)| -(e - (n + 1)))
                .collect();
            scalar_for(
                &FieldElem::one(graph.b_true.field(), graph.b_true.nvars()),
                &graph.primes,
                &shifted,
            )
        })
        .collect()
}

/// Exact checks of the rectangle structure on a built graph.
pub fn verify_theorem_gal(graph: &LatticeGraph, rep: &Representation) -> VerificationReport {
    let mut checks = Vec::new();
    let verts = &graph.rect.vertices;

    let mut a = CheckOutcome::new("edge_quotients");
    for (i, j, s) in &graph.rect.edges {
        match check_quotient(graph, rep, &verts[*i], &verts[*j]) {
            Ok(d) => {
                if d != Divisor::single(graph.primes[*s].clone(), 1) {
                    a.fail(format!("edge {}: divisor {d}", coords_str(&verts[*i])));
                }
            }
            Err(e) => a.fail(e),
        }
    }
    checks.push(a);

    let mut b = CheckOutcome::new("comparable_pairs");
    for x in verts {
        for y in verts {
            if x != y && le(x, y) {
                if let Err(e) = check_quotient(graph, rep, x, y) {
                    b.fail(e);
                }
            }
        }
    }
    for x in verts {
        for y in verts.iter().filter(|y| le(x, y)) {
            for z in verts.iter().filter(|z| le(y, z)) {
                let d = divisor_between(graph, x, y).add(&divisor_between(graph, y, z));
                if d != divisor_between(graph, x, z) {
                    b.fail(format!("tower {} {} {} not additive", coords_str(x), coords_str(y), coords_str(z)));
                }
            }
        }
    }
    checks.push(b);

    let mut c = CheckOutcome::new("incomparable_pairs");
    let scalars = sample_scalars(graph);
    for x in verts {
        for y in verts {
            if le(x, y) || le(y, x) {
                continue;
            }
            let lx = graph.lattice_at(x);
            let ly = graph.lattice_at(y);
            for s in &scalars {
                let sub = lx.scale(s);
                if !ly.contains(&sub) {
                    continue;
                }
                let n = ly.basis().inv().unwrap().mul(sub.basis());
                let Ok(modulus) = crate::ring::field_divisor(&n.det(), &graph.red.hints) else {
                    continue;
                };
                if let Ok(q) = quotient_data(&sub, &ly, rep, &modulus, &graph.red.hints) {
                    let is_theta = q.character.iter().all(|(label, chi)| {
                        chi.congruent(&graph.red.theta_of(label).unwrap().rep)
                    });
                    if q.cyclic && is_theta {
                        c.fail(format!(
                            "{} and {} are incomparable but {} * L{} has a cyclic theta-quotient",
                            coords_str(x),
                            coords_str(y),
                            s,
                            coords_str(x)
                        ));
                    }
                }
            }
        }
    }
    checks.push(c);

    let mut d = CheckOutcome::new("box_boundary");
    for v in verts {
        for s in 0..v.len() {
            for step in [-1i64, 1] {
                let mut w = v.clone();
                w[s] += step;
                if graph.rect.contains(&w) {
                    continue;
                }
                match is_stable(&graph.lattice_at(&w), rep) {
                    Stability::Violated(why) => {
                        d.details.push(format!("{} rejected: {why}", coords_str(&w)));
                    }
                    Stability::Stable => d.fail(format!("out-of-box neighbor {} is stable", coords_str(&w))),
                }
            }
        }
    }
    checks.push(d);

    if rep.nvars() == 1 {
        let total: i64 = graph.rect.dims.iter().sum();
        let mut e = CheckOutcome::new("segment_oracle");
        let box_classes: Vec<Lattice> = graph.vertices.iter().map(|v| v.lattice.clone()).collect();
        match dvr_segment_bfs(rep, graph.base_point(), (total + 1) as usize) {
            Ok(bfs) => {
                if !same_classes(&bfs.classes, &box_classes) {
                    e.fail("breadth-first classes differ from the box".into());
                }
                if bfs.classes.len() as i64 != total + 1 {
                    e.fail(format!("{} classes but ord J + 1 = {}", bfs.classes.len(), total + 1));
                } else {
                    e.details.push(format!("{} = {} + 1", bfs.classes.len(), total));
                }
            }
            Err(err) => e.fail(err.to_string()),
        }
        checks.push(e);

        let mut f = CheckOutcome::new("residual_split");
        match residual_split(graph.base_point(), rep) {
            Ok(split) => {
                if (total > 0) != split {
                    f.fail(format!("J in (t): {}, residual split into distinct characters: {split}", total > 0));
                } else {
                    f.details.push(format!("J in (t): {}, residual split: {split}", total > 0));
                }
            }
            Err(err) => f.fail(err.to_string()),
        }
        checks.push(f);
    }
    VerificationReport { checks }
}
