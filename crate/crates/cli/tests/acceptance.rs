//! One line per acceptance criterion. Runs without the libtest harness so
//! the output is exactly the criterion lines.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use latticerect::examples::{ex1, ex2, ex3};
use latticerect::graph::{
    brute_force_stable_classes, dvr_segment_bfs, enumerate_sublattices, same_classes, verify_theorem_gal,
};
use latticerect::iwasawa::{
    control_defect, h0_ideal, one_var_char, trivial_zero_verdict, verdict_module, Freeness, ModuleExpr,
    PrimeToken, SpecializationCase, Token, TokenRing, TrivialZeroVerdict,
};
use latticerect::lattice::{equal_up_to_homothety, residual_split, Lattice};
use latticerect::matrix::Matrix2;
use latticerect::pipeline::{conjugated_invariants, invariants, random_poly, run_graph};
use latticerect::ring::{factor_element, ord_at, BaseField, FieldElem, LocalElem, Poly, PrimeElem, Valuation};
use latticerect_cli::{parse_input, run, Command, InputError, Report, RunOptions};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, budget: Duration) -> Result<Duration, String> {
    let took = start.elapsed();
    ensure(took < budget, || format!("took {took:?}, budget {budget:?}"))?;
    Ok(took)
}

fn fixture(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name].iter().collect();
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn segment_count() -> Outcome {
    let start = Instant::now();
    let rep = ex2();
    let (_, g) = run_graph(&rep, &[]).map_err(|e| e.to_string())?;
    let ord_j: i64 = g.j_true().iter().map(|(_, e)| e).sum();
    let bfs = dvr_segment_bfs(&rep, g.base_point(), 10).map_err(|e| e.to_string())?;
    ensure(g.vertices.len() == 3 && bfs.classes.len() == 3, || {
        format!("box {} classes, search {}", g.vertices.len(), bfs.classes.len())
    })?;
    ensure(ord_j + 1 == 3, || format!("ord J = {ord_j}"))?;
    // every class on each side has a witness on the other, and the witness
    // really carries one lattice onto the other
    let witness = |a: &Lattice, bs: &[Lattice]| {
        bs.iter().any(|b| match equal_up_to_homothety(a, b) {
            Some(s) => a.scale(&s).contains(b) && b.contains(&a.scale(&s)),
            None => false,
        })
    };
    let boxed: Vec<Lattice> = g.vertices.iter().map(|v| v.lattice.clone()).collect();
    ensure(boxed.iter().all(|l| witness(l, &bfs.classes)), || "box class missing from search".into())?;
    ensure(bfs.classes.iter().all(|l| witness(l, &boxed)), || "search class missing from box".into())?;
    ensure(bfs.adjacency.len() == g.rect.edges.len(), || "adjacency differs from the segment".into())?;
    let took = within(start, Duration::from_secs(1))?;
    Ok(format!("3 classes = ord J + 1, witnesses both ways ({took:.2?})"))
}

fn brute_force() -> Outcome {
    let start = Instant::now();
    let rep = ex2();
    let f5 = BaseField::Prime(5);
    let (_, g) = run_graph(&rep, &[]).map_err(|e| e.to_string())?;
    let candidates = enumerate_sublattices(f5, 3).len();
    ensure(candidates == 194, || format!("{candidates} candidates"))?;
    let found = brute_force_stable_classes(&rep, &Lattice::standard(f5, 1), 3);
    let boxed: Vec<Lattice> = g.vertices.iter().map(|v| v.lattice.clone()).collect();
    ensure(same_classes(&found, &boxed), || {
        format!("enumeration gives {} classes, box {}", found.len(), boxed.len())
    })?;
    let took = within(start, Duration::from_secs(10))?;
    Ok(format!("{candidates} echelon sublattices, {} stable classes match ({took:.2?})", found.len()))
}

fn rectangle() -> Outcome {
    let start = Instant::now();
    let rep = ex1();
    let (_, g) = run_graph(&rep, &[]).map_err(|e| e.to_string())?;
    ensure(g.dims() == [1, 1], || format!("dims {:?}", g.dims()))?;
    ensure(g.vertices.len() == 4, || format!("{} classes", g.vertices.len()))?;
    ensure(g.rect.edges.len() == 4, || format!("{} edges", g.rect.edges.len()))?;
    for k in 0..4 {
        let degree = g.rect.edges.iter().filter(|(a, b, _)| *a == k || *b == k).count();
        ensure(degree == 2, || format!("vertex {k} has degree {degree}"))?;
    }
    for (i, v) in g.vertices.iter().enumerate() {
        for w in &g.vertices[i + 1..] {
            ensure(equal_up_to_homothety(&v.lattice, &w.lattice).is_none(), || "two vertices share a class".into())?;
        }
    }
    let report = verify_theorem_gal(&g, &rep);
    let boundary = report.get("box_boundary").ok_or("no boundary check")?;
    ensure(boundary.passed && boundary.details.len() == 8, || format!("{boundary:?}"))?;
    let labels = rep.labels();
    for d in &boundary.details {
        let why = d.split(" rejected: ").nth(1).unwrap_or("");
        ensure(labels.iter().any(|l| why.starts_with(l.as_str())), || format!("no generator named in '{d}'"))?;
    }
    let took = within(start, Duration::from_secs(5))?;
    Ok(format!("dims (1,1), 4-cycle, 8 boundary neighbors rejected ({took:.2?})"))
}

fn edge_quotients() -> Outcome {
    let mut seen = Vec::new();
    for (name, rep) in [("EX1", ex1()), ("EX2", ex2())] {
        let (_, g) = run_graph(&rep, &[]).map_err(|e| e.to_string())?;
        let report = verify_theorem_gal(&g, &rep);
        for check in ["edge_quotients", "comparable_pairs"] {
            let c = report.get(check).ok_or_else(|| format!("{name}: no {check}"))?;
            ensure(c.passed, || format!("{name} {check}: {:?}", c.details))?;
        }
        seen.push(format!("{name} {} edges", g.rect.edges.len()));
    }
    Ok(seen.join(", "))
}

fn unique_class() -> Outcome {
    let rep = ex3();
    let (a, g) = run_graph(&rep, &[]).map_err(|e| e.to_string())?;
    ensure(a.hypotheses.red, || "(Red) fails".into())?;
    ensure(g.vertices.len() == 1 && g.dims().is_empty(), || format!("{} classes", g.vertices.len()))?;
    let split = residual_split(g.base_point(), &rep).map_err(|e| e.to_string())?;
    ensure(split, || "reduction does not split".into())?;
    Ok("1 class, residual reduction splits, (Red) holds".into())
}

fn basis_invariance() -> Outcome {
    let mut trials = 0;
    for (name, rep) in [("EX1", ex1()), ("EX2", ex2())] {
        let (a, g) = run_graph(&rep, &[]).map_err(|e| e.to_string())?;
        let hints = a.red.as_ref().map_err(|e| e.to_string())?.hints.clone();
        let expected = invariants(&g);
        for seed in 0..5u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let got = conjugated_invariants(&rep, &hints, &mut rng).map_err(|e| format!("{name} seed {seed}: {e}"))?;
            ensure(got == expected, || format!("{name} seed {seed}: {got:?} vs {expected:?}"))?;
            trials += 1;
        }
    }
    Ok(format!("{trials} conjugations reproduce dims, J and edge primes"))
}

fn valuation_laws() -> Outcome {
    for rep in [ex1(), ex2(), ex3()] {
        let r = latticerect::repr::find_regular(&rep).map_err(|e| e.to_string())?;
        let (e, f) = &r.idempotents;
        let id = Matrix2::identity(rep.field(), rep.nvars());
        let zero = id.sub(&id);
        ensure(e.add(f) == id, || "e + e' != I".into())?;
        ensure(e.mul(e) == *e && f.mul(f) == *f, || "not idempotent".into())?;
        ensure(e.mul(f) == zero && f.mul(e) == zero, || "e e' != 0".into())?;
    }
    let f5 = BaseField::Prime(5);
    let x = Poly::var(f5, 2, 0);
    let y = Poly::var(f5, 2, 1);
    let primes = vec![
        PrimeElem::new(x.clone()).unwrap(),
        PrimeElem::new(y.clone()).unwrap(),
        PrimeElem::new(x.add(&y).add(&x.pow(2))).unwrap(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut n = 0;
    while n < 100 {
        let a = random_poly(f5, 2, 3, &mut rng);
        let b = random_poly(f5, 2, 3, &mut rng);
        if a.is_zero() || b.is_zero() {
            continue;
        }
        let (fa, fb) = (FieldElem::from_poly(a), FieldElem::from_poly(b));
        for p in &primes {
            let lhs = ord_at(p, &fa.mul(&fb));
            ensure(lhs == ord_at(p, &fa) + ord_at(p, &fb), || format!("ord not multiplicative at {}", p.poly()))?;
        }
        // unit times a random product of the primes
        let mut unit = random_poly(f5, 2, 2, &mut rng);
        let c = unit.constant_term();
        unit = unit.add(&Poly::constant(f5, 2, f5.sub(&f5.one(), &c)));
        let exps: Vec<u32> = primes.iter().map(|_| rng.gen_range(0..3)).collect();
        let mut e = unit.clone();
        for (p, k) in primes.iter().zip(&exps) {
            e = e.mul(&p.poly().pow(*k));
        }
        let fact = factor_element(&LocalElem::from_poly(e.clone()), &primes).map_err(|e| e.to_string())?;
        for (p, k) in primes.iter().zip(&exps) {
            ensure(fact.divisor.get(p) == *k as i64, || format!("exponent of {} in {e}", p.poly()))?;
            ensure(ord_at(p, &FieldElem::from_poly(e.clone())) == Valuation::Finite(*k as i64), || "ord mismatch".into())?;
        }
        let back = fact.divisor.to_elem(f5, 2).mul(fact.unit.as_field());
        ensure(fact.unit.is_unit() && back == FieldElem::from_poly(e.clone()), || format!("round trip of {e}"))?;
        n += 1;
    }
    Ok(format!("idempotents on EX1-EX3, {n} random elements"))
}

fn random_ring(rng: &mut ChaCha8Rng) -> TokenRing {
    let r = rng.gen_range(1..=3);
    let primes = (0..r)
        .map(|i| {
            let n = rng.gen_range(1..=3);
            let pfour = rng.gen_bool(0.5);
            PrimeToken {
                label: format!("p{}", i + 1),
                multiplicity: n,
                ap_order: if pfour { n } else { n + rng.gen_range(0..3) },
                pfour,
            }
        })
        .collect();
    TokenRing::new(primes, rng.gen_bool(0.5)).unwrap()
}

/// Exponent of each prime in the H0 generator that avoids `gamma - 1`.
fn h0_exponents(ring: &TokenRing, m: &ModuleExpr) -> Vec<i64> {
    let r = ring.primes.len();
    match m {
        ModuleExpr::Zero => vec![0; r],
        ModuleExpr::DualTorsion(gens) => {
            let g = gens.iter().find(|g| g.get(Token::GammaMinusOne) == 0).expect("prime generator");
            (0..r).map(|i| g.get(Token::Prime(i))).collect()
        }
        other => panic!("unexpected {other:?}"),
    }
}

fn iwasawa_suite() -> Outcome {
    // (a) and (b) on random boxes
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for k in 0..50 {
        let ring = random_ring(&mut rng);
        let verts = ring.vertices();
        let c0 = one_var_char(&ring, &verts[0]).unwrap();
        let expected = latticerect::iwasawa::SymbolicDivisor::single(Token::CharSelMin, 1)
            .add(&ring.j_divisor())
            .sub(&ring.ap_divisor());
        ensure(c0 == expected, || format!("ring {k}: one_var_char {}", c0.render(&ring)))?;
        for v in &verts {
            ensure(one_var_char(&ring, v).unwrap() == c0, || format!("ring {k}: one_var_char varies at {v:?}"))?;
        }
        ensure(h0_ideal(&ring, &ring.dims(), true).unwrap() == ModuleExpr::Zero, || format!("ring {k}: H0 at top"))?;
        for v in &verts {
            let hv = h0_exponents(&ring, &h0_ideal(&ring, v, true).unwrap());
            let codim: Vec<i64> = ring.dims().iter().zip(v).map(|(n, j)| n - j).collect();
            ensure(hv == codim, || format!("ring {k}: H0 exponents at {v:?}"))?;
            for w in &verts {
                if v.iter().zip(w).all(|(a, b)| a <= b) {
                    let hw = h0_exponents(&ring, &h0_ideal(&ring, w, true).unwrap());
                    ensure(hw.iter().zip(&hv).all(|(a, b)| a <= b), || format!("ring {k}: not antitone {v:?} {w:?}"))?;
                }
            }
        }
    }

    // (c) against a hand-written table on the (2,1) box, J = p1^2 p2 and
    // a_p - 1 = p1^2 p2 u
    let ring = TokenRing::new(
        vec![
            PrimeToken { label: "p1".into(), multiplicity: 2, ap_order: 2, pfour: true },
            PrimeToken { label: "p2".into(), multiplicity: 1, ap_order: 1, pfour: true },
        ],
        true,
    )
    .unwrap();
    let k1 = "(R/p1)^v[(gamma-1)]";
    let k2 = "(R/p2)^v[(gamma-1)]";
    // vertex, augmentation cokernel, eisenstein kernels
    let table: [([i64; 2], &str, &str, &str); 6] = [
        ([0, 0], "R^v[u_ap]", k1, k2),
        ([0, 1], "R^v[p2*u_ap]", k1, "Zero"),
        ([1, 0], "R^v[p1*u_ap]", k1, k2),
        ([1, 1], "R^v[p1*p2*u_ap]", k1, "Zero"),
        ([2, 0], "R^v[p1^2*u_ap]", "Zero", k2),
        ([2, 1], "R^v[p1^2*p2*u_ap]", "Zero", "Zero"),
    ];
    ensure(ring.vertices().len() == table.len(), || "box size".into())?;
    for (v, aug, e1, e2) in table {
        let arith = control_defect(&ring, &v, SpecializationCase::Arith, true).unwrap();
        ensure(arith.kernel.is_zero() && arith.cokernel.is_zero(), || format!("arith at {v:?}"))?;
        let a = control_defect(&ring, &v, SpecializationCase::Augmentation, true).unwrap();
        ensure(a.kernel.is_zero() && a.cokernel.render(&ring) == aug, || {
            format!("augmentation at {v:?}: {}", a.cokernel.render(&ring))
        })?;
        for (i, want) in [(0, e1), (1, e2)] {
            let d = control_defect(&ring, &v, SpecializationCase::Eisenstein(i), true).unwrap();
            ensure(d.kernel.render(&ring) == want && d.cokernel.is_zero() && d.surjective, || {
                format!("eisenstein({i}) at {v:?}: {}", d.kernel.render(&ring))
            })?;
        }
        for case in [SpecializationCase::Augmentation, SpecializationCase::Eisenstein(0)] {
            let d = control_defect(&ring, &v, case, false).unwrap();
            ensure(d.kernel.is_zero() && d.cokernel.is_zero(), || "nontrivial twist".into())?;
        }
    }

    // (d) the dichotomy at p1 along the box
    for (j, want) in [
        (0, TrivialZeroVerdict::TorsionInGammaMinusOne),
        (1, TrivialZeroVerdict::RankOne(Freeness::Unknown)),
        (2, TrivialZeroVerdict::RankOne(Freeness::Free)),
    ] {
        let got = trivial_zero_verdict(&ring, &[j, 0], 0).unwrap();
        ensure(got == want, || format!("verdict at j1 = {j}: {got}"))?;
    }
    let free = verdict_module(0, trivial_zero_verdict(&ring, &[2, 1], 0).unwrap());
    ensure(free == Some(ModuleExpr::FreeRankOne { prime: 0 }), || "free module at j = n".into())?;
    let no_flag = TokenRing::new(
        vec![PrimeToken { label: "p".into(), multiplicity: 1, ap_order: 3, pfour: false }],
        false,
    )
    .unwrap();
    ensure(trivial_zero_verdict(&no_flag, &[0], 0).is_err(), || "verdict without (pFour)".into())?;
    Ok("50 random boxes, (2,1) case table, verdict dichotomy".into())
}

fn parser_emitter() -> Outcome {
    let valid = ["ex1.json", "ex2.json", "ex3.json", "iwasawa.json"];
    for name in valid {
        parse_input(&fixture(name)).map_err(|e| format!("{name}: {e}"))?;
    }
    let invalid: [(&str, fn(&InputError) -> bool); 2] = [
        ("invalid_char2.json", |e| matches!(e, InputError::Validation(m) if m.contains("characteristic two"))),
        ("invalid_caret.json", |e| {
            matches!(e, InputError::Parse { path, .. } if path == "generators[1].matrix[0][1]")
        }),
    ];
    for (name, expected) in invalid {
        match parse_input(&fixture(name)) {
            Err(e) if expected(&e) => {}
            other => return Err(format!("{name}: {other:?}")),
        }
    }
    let f5 = BaseField::Prime(5);
    let vars = ["x".to_string(), "y".to_string()];
    for good in ["x^2 + 3*x*y - 1", "(x + 1)/(y - 2)", "-x", "2/3", "((y))^3*x"] {
        latticerect::ring::parse_expr(good, f5, &vars).map_err(|e| format!("'{good}': {e:?}"))?;
    }
    for bad in ["x^", "(x + 1", "x +", "z", "x / 0", "x $ y", ""] {
        ensure(latticerect::ring::parse_expr(bad, f5, &vars).is_err(), || format!("'{bad}' accepted"))?;
    }
    let opts = RunOptions { seed: 3 };
    for (name, cmd) in [("ex2.json", Command::Verify), ("ex1.json", Command::Graph), ("iwasawa.json", Command::Iwasawa)] {
        let problem = parse_input(&fixture(name)).unwrap();
        let first = run(cmd, &problem, opts).map_err(|e| e.to_string())?.report.to_json();
        let second = run(cmd, &parse_input(&fixture(name)).unwrap(), opts)
            .map_err(|e| e.to_string())?
            .report
            .to_json();
        ensure(first == second, || format!("{name}: reports differ between runs"))?;
        let back = Report::from_json(&first).map_err(|e| e.to_string())?;
        ensure(back.to_json() == first, || format!("{name}: JSON round trip"))?;
    }
    Ok("fixtures accepted and rejected as expected, reports byte-identical".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("segment count", segment_count),
        ("brute-force completeness", brute_force),
        ("rectangle structure", rectangle),
        ("edge quotients and order", edge_quotients),
        ("unique class", unique_class),
        ("basis invariance", basis_invariance),
        ("idempotent and valuation laws", valuation_laws),
        ("iwasawa symbolic suite", iwasawa_suite),
        ("parser and emitter", parser_emitter),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match result {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {why}", k + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
