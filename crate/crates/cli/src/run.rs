//! Command dispatch.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use latticerect::graph::{brute_force_stable_classes, same_classes, verify_theorem_gal, LatticeGraph};
use latticerect::iwasawa::{h0_ideal, vertex_table, ModuleExpr};
use latticerect::pipeline::{analyze, conjugated_invariants, graph_from, invariants, Analysis};
use latticerect::ring::BaseField;

use crate::dot::to_dot;
use crate::input::{InputError, Problem};
use crate::report::{self, Check, IwasawaSummary, Report};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Analyze,
    Graph,
    Verify,
    Iwasawa,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Analyze => "analyze",
            Command::Graph => "graph",
            Command::Verify => "verify",
            Command::Iwasawa => "iwasawa",
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct RunOptions {
    /// Seed for the randomized checks of `verify`.
    pub seed: u64,
}

/// Largest number of candidate sublattices the exhaustive oracle will try.
const BRUTE_FORCE_LIMIT: u64 = 5000;

/// Conjugations tried by the basis-invariance check.
const INVARIANCE_TRIALS: usize = 2;

#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: Report,
    pub dot: Option<String>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.report.passed {
            0
        } else {
            1
        }
    }
}

fn field_name(f: BaseField) -> String {
    match f {
        BaseField::Prime(p) => format!("F_{p}"),
        BaseField::Rationals => "Q".into(),
    }
}

pub fn run(cmd: Command, problem: &Problem, opts: RunOptions) -> Result<Outcome, InputError> {
    let rep = &problem.rep;
    let mut report = Report {
        command: cmd.name().into(),
        field: field_name(rep.field()),
        variables: rep.names().to_vec(),
        generators: rep.labels(),
        regular: None,
        hypotheses: None,
        reducibility: None,
        graph: None,
        checks: Vec::new(),
        iwasawa: None,
        errors: Vec::new(),
        passed: false,
    };
    if cmd == Command::Iwasawa {
        run_iwasawa(problem, &mut report)?;
        return Ok(Outcome { report, dot: None });
    }
    let names = rep.names();
    let analysis = match analyze(rep, &problem.hints) {
        Ok(a) => a,
        Err(e) => {
            report.errors.push(e.to_string());
            return Ok(Outcome { report, dot: None });
        }
    };
    report.regular = Some(report::regular_summary(&analysis.regular, names));
    report.hypotheses = Some(report::hypotheses(&analysis.hypotheses));
    match &analysis.red {
        Ok(red) => report.reducibility = Some(report::reducibility(red, names)),
        Err(e) => report.errors.push(e.to_string()),
    }
    let mut passed = analysis.hypotheses.all_hold() && analysis.red.is_ok();
    if cmd == Command::Analyze {
        report.passed = passed;
        return Ok(Outcome { report, dot: None });
    }
    let graph = match graph_from(&analysis) {
        Ok(g) => g,
        Err(e) => {
            report.errors.push(e.to_string());
            return Ok(Outcome { report, dot: None });
        }
    };
    let summary = report::graph_summary(&graph, names);
    let dot = to_dot(&summary);
    report.graph = Some(summary);
    if cmd == Command::Verify {
        let v = verify_theorem_gal(&graph, rep);
        report.checks = report::checks(&v);
        if let Some(c) = brute_force_check(problem, &graph) {
            report.checks.push(c);
        }
        report.checks.push(invariance_check(problem, &analysis, &graph, opts.seed));
        passed &= report.checks.iter().all(|c| c.passed);
    }
    report.passed = passed;
    Ok(Outcome {
        report,
        dot: Some(dot),
    })
}

/// Exhaustive enumeration below the base lattice, for one variable over a
/// small finite field.
fn brute_force_check(problem: &Problem, graph: &LatticeGraph) -> Option<Check> {
    let rep = &problem.rep;
    let BaseField::Prime(p) = rep.field() else {
        return None;
    };
    if rep.nvars() != 1 {
        return None;
    }
    let n = (graph.dims().iter().sum::<i64>() + 1) as u32;
    let mut check = Check {
        name: "brute_force".into(),
        passed: true,
        details: Vec::new(),
    };
    if p.checked_pow(n).map_or(true, |s| s > BRUTE_FORCE_LIMIT) {
        check.details.push(format!("skipped: {p}^{n} candidates exceed {BRUTE_FORCE_LIMIT}"));
        return Some(check);
    }
    let classes = brute_force_stable_classes(rep, graph.base_point(), n);
    let boxed: Vec<_> = graph.vertices.iter().map(|v| v.lattice.clone()).collect();
    if same_classes(&classes, &boxed) {
        check
            .details
            .push(format!("{} classes of index dividing t^{n} match the box", classes.len()));
    } else {
        check.passed = false;
        check.details.push(format!(
            "enumeration found {} classes, the box has {}",
            classes.len(),
            boxed.len()
        ));
    }
    Some(check)
}

/// Reruns the pipeline after random changes of basis and compares the
/// graph invariants.
fn invariance_check(problem: &Problem, analysis: &Analysis, graph: &LatticeGraph, seed: u64) -> Check {
    let mut check = Check {
        name: "basis_invariance".into(),
        passed: true,
        details: Vec::new(),
    };
    let expected = invariants(graph);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let hints = match &analysis.red {
        Ok(red) => red.hints.clone(),
        Err(_) => problem.hints.clone(),
    };
    for k in 0..INVARIANCE_TRIALS {
        match conjugated_invariants(&problem.rep, &hints, &mut rng) {
            Ok(inv) if inv == expected => {}
            Ok(inv) => {
                check.passed = false;
                check.details.push(format!("trial {k}: dims {:?} instead of {:?}", inv.dims, expected.dims));
            }
            Err(e) => {
                check.passed = false;
                check.details.push(format!("trial {k}: {e}"));
            }
        }
    }
    check.details.push(format!("seed {seed}, {INVARIANCE_TRIALS} conjugations"));
    check
}

fn run_iwasawa(problem: &Problem, report: &mut Report) -> Result<(), InputError> {
    let iw = problem
        .iwasawa
        .as_ref()
        .ok_or_else(|| InputError::Validation("the iwasawa command needs an \"iwasawa\" section".into()))?;
    let ring = &iw.ring;
    let tables = ring
        .vertices()
        .iter()
        .map(|v| vertex_table(ring, v, iw.twist_trivial))
        .collect::<Result<Vec<_>, _>>();
    let tables = match tables {
        Ok(t) => t,
        Err(e) => {
            report.errors.push(e.to_string());
            return Ok(());
        }
    };
    let declared = tables
        .iter()
        .find(|t| t.vertex == iw.vertex)
        .expect("declared vertex lies in the box");
    let independent = tables.iter().all(|t| t.one_var_char == declared.one_var_char);
    report.checks.push(Check {
        name: "one_var_char_independent".into(),
        passed: independent,
        details: Vec::new(),
    });
    let top = h0_ideal(ring, &ring.dims(), iw.twist_trivial).expect("top vertex");
    report.checks.push(Check {
        name: "h0_top_vertex_zero".into(),
        passed: top == ModuleExpr::Zero,
        details: vec![top.render(ring)],
    });
    report.iwasawa = Some(IwasawaSummary {
        j: ring.j_divisor().render(ring),
        ap_minus_1: ring.ap_divisor().render(ring),
        twist_trivial: iw.twist_trivial,
        declared: report::iwasawa_row(ring, declared),
        all_vertices: tables.iter().map(|t| report::iwasawa_row(ring, t)).collect(),
        one_var_char_independent: independent,
    });
    report.passed = report.checks.iter().all(|c| c.passed);
    Ok(())
}
