//! Graphviz output for the lattice graph.

use std::fmt::Write as _;

use crate::report::{coords, GraphSummary};

fn quote(s: &str) -> String {
    let mut q = String::with_capacity(s.len() + 2);
    q.push('"');
    for c in s.chars() {
        if c == '"' || c == '\\' {
            q.push('\\');
        }
        q.push(c);
    }
    q.push('"');
    q
}

/// An undirected DOT graph: one node per class labeled `j | basis`, one
/// edge per covering relation labeled with its prime.
pub fn to_dot(g: &GraphSummary) -> String {
    let mut out = String::from("graph lattices {\n  node [shape=box];\n");
    for (i, v) in g.vertices.iter().enumerate() {
        let label = format!("{} | {}", coords(&v.coords), v.basis);
        let _ = writeln!(out, "  n{i} [label={}];", quote(&label));
    }
    let index = |c: &Vec<i64>| g.vertices.iter().position(|v| &v.coords == c).expect("edge endpoint");
    for e in &g.edges {
        let _ = writeln!(out, "  n{} -- n{} [label={}];", index(&e.from), index(&e.to), quote(&e.prime));
    }
    out.push_str("}\n");
    out
}
