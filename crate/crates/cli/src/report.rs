//! The report: a plain-data mirror of a run, serialized as JSON and as text.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use latticerect::graph::{LatticeGraph, VerificationReport};
use latticerect::iwasawa::{SpecializationCase, TokenRing, VertexTable};
use latticerect::repr::{HypothesisReport, ReducibilityData, RegularElementData};
use latticerect::ring::Divisor;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub field: String,
    pub variables: Vec<String>,
    pub generators: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub regular: Option<RegularSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hypotheses: Option<Hypotheses>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reducibility: Option<Reducibility>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphSummary>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iwasawa: Option<IwasawaSummary>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub errors: Vec<String>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularSummary {
    pub word: String,
    pub matrix: String,
    pub lambda_psi: String,
    pub lambda_psi_prime: String,
    pub eigenbasis: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypotheses {
    pub trace_integral: bool,
    pub red: bool,
    pub g_dist: bool,
    pub ir: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimePower {
    pub prime: String,
    pub exponent: i64,
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterValue {
    pub generator: String,
    pub theta: String,
    pub theta_prime: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reducibility {
    pub b: String,
    pub c: String,
    pub j: Vec<PrimePower>,
    pub characters: Vec<CharacterValue>,
    pub gcd_stabilized: bool,
    pub closure_stabilized: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexSummary {
    pub coords: Vec<i64>,
    pub basis: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeSummary {
    pub from: Vec<i64>,
    pub to: Vec<i64>,
    pub prime: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphSummary {
    pub primes: Vec<String>,
    pub dims: Vec<i64>,
    pub class_count: usize,
    pub vertices: Vec<VertexSummary>,
    pub edges: Vec<EdgeSummary>,
    pub candidate_dims: Vec<i64>,
    pub box_shrunk: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rejected: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub details: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ControlRow {
    pub case: String,
    pub kernel: String,
    pub cokernel: String,
    pub injective: bool,
    pub surjective: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IwasawaRow {
    pub vertex: Vec<i64>,
    pub h0: String,
    pub control: Vec<ControlRow>,
    pub selmer_multiplier: String,
    pub one_var_char: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub trivial_zero: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IwasawaSummary {
    pub j: String,
    pub ap_minus_1: String,
    pub twist_trivial: bool,
    pub declared: IwasawaRow,
    pub all_vertices: Vec<IwasawaRow>,
    pub one_var_char_independent: bool,
}

pub fn regular_summary(r: &RegularElementData, names: &[String]) -> RegularSummary {
    RegularSummary {
        word: r.word_label.clone(),
        matrix: r.matrix.fmt_with(names),
        lambda_psi: r.lambda_psi.as_field().fmt_with(names),
        lambda_psi_prime: r.lambda_psi_prime.as_field().fmt_with(names),
        eigenbasis: r.eigenbasis.fmt_with(names),
    }
}

pub fn hypotheses(h: &HypothesisReport) -> Hypotheses {
    Hypotheses {
        trace_integral: h.trace_integral,
        red: h.red,
        g_dist: h.g_dist,
        ir: h.ir,
        failures: h.failures.clone(),
    }
}

pub fn prime_powers(d: &Divisor, names: &[String]) -> Vec<PrimePower> {
    d.iter()
        .map(|(p, e)| PrimePower {
            prime: p.fmt_with(names),
            exponent: e,
            certified: p.certified() == latticerect::ring::Certification::Proven,
        })
        .collect()
}

pub fn reducibility(red: &ReducibilityData, names: &[String]) -> Reducibility {
    let characters = red
        .theta
        .iter()
        .zip(&red.theta_prime)
        .map(|((g, t), (_, tp))| CharacterValue {
            generator: g.clone(),
            theta: t.rep.fmt_with(names),
            theta_prime: tp.rep.fmt_with(names),
        })
        .collect();
    Reducibility {
        b: red.b.fmt_with(names),
        c: red.c.fmt_with(names),
        j: prime_powers(&red.j_divisor, names),
        characters,
        gcd_stabilized: red.stabilized,
        closure_stabilized: red.closure_stabilized,
    }
}

pub fn graph_summary(g: &LatticeGraph, names: &[String]) -> GraphSummary {
    let verts = &g.rect.vertices;
    GraphSummary {
        primes: g.primes.iter().map(|p| p.fmt_with(names)).collect(),
        dims: g.dims().to_vec(),
        class_count: g.vertices.len(),
        vertices: g
            .vertices
            .iter()
            .map(|v| VertexSummary {
                coords: v.coords.clone(),
                basis: v.lattice.primitive_representative().fmt_with(names),
            })
            .collect(),
        edges: g
            .rect
            .edges
            .iter()
            .map(|(i, j, s)| EdgeSummary {
                from: verts[*i].clone(),
                to: verts[*j].clone(),
                prime: g.primes[*s].fmt_with(names),
            })
            .collect(),
        candidate_dims: g.candidate_dims.clone(),
        box_shrunk: g.box_shrunk,
        rejected: g
            .rejected
            .iter()
            .map(|(c, v)| format!("{}: {v}", coords(c)))
            .collect(),
    }
}

pub fn checks(v: &VerificationReport) -> Vec<Check> {
    v.checks
        .iter()
        .map(|c| Check {
            name: c.name.clone(),
            passed: c.passed,
            details: c.details.clone(),
        })
        .collect()
}

fn case_name(ring: &TokenRing, c: SpecializationCase) -> String {
    match c {
        SpecializationCase::Arith => "arith".into(),
        SpecializationCase::Augmentation => "augmentation".into(),
        SpecializationCase::Eisenstein(i) => format!("eisenstein({})", ring.primes[i].label),
    }
}

pub fn iwasawa_row(ring: &TokenRing, t: &VertexTable) -> IwasawaRow {
    IwasawaRow {
        vertex: t.vertex.clone(),
        h0: t.h0.render(ring),
        control: t
            .control
            .iter()
            .map(|(c, d)| ControlRow {
                case: case_name(ring, *c),
                kernel: d.kernel.render(ring),
                cokernel: d.cokernel.render(ring),
                injective: d.injective,
                surjective: d.surjective,
            })
            .collect(),
        selmer_multiplier: t.selmer_multiplier.render(ring),
        one_var_char: t.one_var_char.render(ring),
        trivial_zero: t
            .verdicts
            .iter()
            .map(|(i, v)| (ring.primes[*i].label.clone(), v.to_string()))
            .collect(),
    }
}

pub fn coords(c: &[i64]) -> String {
    format!(
        "({})",
        c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
    )
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Report, serde_json::Error> {
        serde_json::from_str(s)
    }

    /// Human-readable rendering.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let w = &mut out;
        let _ = writeln!(w, "command: {}", self.command);
        let _ = writeln!(w, "field: {}, variables: {}", self.field, self.variables.join(", "));
        let _ = writeln!(w, "generators: {}", self.generators.join(", "));
        if let Some(r) = &self.regular {
            let _ = writeln!(w, "regular element: {} = {}", r.word, r.matrix);
            let _ = writeln!(w, "  eigenvalues: {}, {}", r.lambda_psi, r.lambda_psi_prime);
            let _ = writeln!(w, "  eigenbasis: {}", r.eigenbasis);
        }
        if let Some(h) = &self.hypotheses {
            let _ = writeln!(
                w,
                "hypotheses: traces integral {}, Red {}, G-dist {}, Ir {}",
                yes(h.trace_integral),
                yes(h.red),
                yes(h.g_dist),
                yes(h.ir)
            );
            for f in &h.failures {
                let _ = writeln!(w, "  {f}");
            }
        }
        if let Some(r) = &self.reducibility {
            let j: Vec<String> = r.j.iter().map(|p| format!("{}^{}", p.prime, p.exponent)).collect();
            let _ = writeln!(w, "B = {}, C = {}, J = {}", r.b, r.c, if j.is_empty() { "(1)".into() } else { j.join(" ") });
            let _ = writeln!(
                w,
                "  gcd sampling stabilized: {}, closure exhausted: {}",
                yes(r.gcd_stabilized),
                yes(r.closure_stabilized)
            );
            for c in &r.characters {
                let _ = writeln!(w, "  {}: theta = {}, theta' = {}", c.generator, c.theta, c.theta_prime);
            }
        }
        if let Some(g) = &self.graph {
            let _ = writeln!(
                w,
                "graph: dims {:?}, {} classes, {} edges, candidate box shrunk: {}",
                g.dims,
                g.class_count,
                g.edges.len(),
                yes(g.box_shrunk)
            );
            for v in &g.vertices {
                let _ = writeln!(w, "  {} {}", coords(&v.coords), v.basis);
            }
        }
        for c in &self.checks {
            let _ = writeln!(w, "check {}: {}", c.name, if c.passed { "pass" } else { "FAIL" });
            for d in &c.details {
                let _ = writeln!(w, "  {d}");
            }
        }
        if let Some(i) = &self.iwasawa {
            let _ = writeln!(w, "J = {}, a_p - 1 = {}, trivial twist: {}", i.j, i.ap_minus_1, yes(i.twist_trivial));
            let row = &i.declared;
            let _ = writeln!(w, "vertex {}", coords(&row.vertex));
            let _ = writeln!(w, "  H0: {}", row.h0);
            for c in &row.control {
                let _ = writeln!(w, "  {}: kernel {}, cokernel {}", c.case, c.kernel, c.cokernel);
            }
            let _ = writeln!(w, "  Selmer multiplier: {}", row.selmer_multiplier);
            let _ = writeln!(w, "  one-variable char: {}", row.one_var_char);
            for (p, v) in &row.trivial_zero {
                let _ = writeln!(w, "  trivial zero at {p}: {v}");
            }
            let _ = writeln!(
                w,
                "one-variable char independent of the vertex: {}",
                yes(i.one_var_char_independent)
            );
        }
        for e in &self.errors {
            let _ = writeln!(w, "error: {e}");
        }
        let _ = writeln!(w, "result: {}", if self.passed { "pass" } else { "FAIL" });
        out
    }
}
