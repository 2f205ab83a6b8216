use proptest::prelude::*;

use latticerect::iwasawa::{
    control_defect, h0_ideal, one_var_char, selmer_change_multiplier, ModuleExpr, PrimeToken,
    SpecializationCase, Token, TokenRing,
};
use latticerect::lattice::{equal_up_to_homothety, Lattice};
use latticerect::matrix::Matrix2;
use latticerect::ring::{
    factor_element, gcd, ord_at, poly_sqrt, BaseField, FieldElem, LocalElem, Poly, PrimeElem, Valuation,
};

const F5: BaseField = BaseField::Prime(5);

fn poly_from(nvars: usize, terms: &[(u32, u32, i64)]) -> Poly {
    Poly::from_terms(
        F5,
        nvars,
        terms.iter().map(|&(a, b, c)| {
            let e = if nvars == 1 { vec![a + b] } else { vec![a, b] };
            (e, F5.from_int(c))
        }),
    )
}

fn arb_poly(nvars: usize, max_deg: u32) -> impl Strategy<Value = Poly> {
    prop::collection::vec((0..=max_deg, 0..=max_deg, 0i64..5), 1..6).prop_map(move |ts| {
        let ts: Vec<_> = ts
            .into_iter()
            .filter(|(a, b, _)| a + b <= max_deg)
            .collect();
        poly_from(nvars, &ts)
    })
}

fn arb_nonzero(nvars: usize, max_deg: u32) -> impl Strategy<Value = Poly> {
    arb_poly(nvars, max_deg).prop_filter("nonzero", |p| !p.is_zero())
}

/// All monic polynomials in one variable of degree `1..=d` over `F_5`.
fn monic_upto(d: u32) -> Vec<Poly> {
    let mut out = Vec::new();
    for deg in 1..=d {
        let count = 5u32.pow(deg);
        for code in 0..count {
            let mut terms = vec![(vec![deg], F5.one())];
            let mut c = code;
            for k in 0..deg {
                terms.push((vec![k], F5.from_int((c % 5) as i64)));
                c /= 5;
            }
            out.push(Poly::from_terms(F5, 1, terms));
        }
    }
    out
}

fn coordinate_primes() -> Vec<PrimeElem> {
    let x = Poly::var(F5, 2, 0);
    let y = Poly::var(F5, 2, 1);
    vec![
        PrimeElem::new(x.clone()).unwrap(),
        PrimeElem::new(y.clone()).unwrap(),
        PrimeElem::new(x.add(&y.pow(2))).unwrap(),
        PrimeElem::new(y.sub(&x.pow(3))).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn univariate_gcd_matches_divisor_search(a in arb_nonzero(1, 4), b in arb_nonzero(1, 4)) {
        let g = gcd(&a, &b);
        let best = monic_upto(4)
            .into_iter()
            .filter(|d| d.divides(&a) && d.divides(&b))
            .max_by_key(|d| d.total_degree().unwrap_or(0));
        match best {
            Some(d) => prop_assert_eq!(g, d),
            None => prop_assert!(g.is_one()),
        }
    }

    #[test]
    fn bivariate_gcd_contains_planted_factor(
        g in arb_nonzero(2, 2),
        f1 in arb_nonzero(2, 2),
        f2 in arb_nonzero(2, 2),
    ) {
        let a = g.mul(&f1);
        let b = g.mul(&f2);
        let d = gcd(&a, &b);
        prop_assert!(d.divides(&a) && d.divides(&b));
        prop_assert!(g.divides(&d));
        prop_assert_eq!(gcd(&b, &a), d.clone());
        prop_assert!(gcd(&a.div_exact(&d).unwrap(), &b.div_exact(&d).unwrap()).is_one());
    }

    #[test]
    fn sqrt_of_square(f in arb_nonzero(2, 3)) {
        let sq = f.mul(&f);
        let r = poly_sqrt(&sq).expect("square");
        prop_assert_eq!(r.mul(&r), sq);
        prop_assert!(r == f || r == f.neg());
    }

    #[test]
    fn sqrt_is_exact_when_found(f in arb_nonzero(2, 3)) {
        if let Some(r) = poly_sqrt(&f) {
            prop_assert_eq!(r.mul(&r), f);
        }
    }

    #[test]
    fn valuation_laws(a in arb_nonzero(2, 3), b in arb_nonzero(2, 3)) {
        let fa = FieldElem::from_poly(a.clone());
        let fb = FieldElem::from_poly(b.clone());
        for p in coordinate_primes() {
            let (va, vb) = (ord_at(&p, &fa), ord_at(&p, &fb));
            prop_assert_eq!(ord_at(&p, &fa.mul(&fb)), va + vb);
            prop_assert!(ord_at(&p, &fa.add(&fb)) >= va.min(vb));
            let q = fa.div(&fb).unwrap();
            let (Valuation::Finite(x), Valuation::Finite(y)) = (va, vb) else { unreachable!() };
            prop_assert_eq!(ord_at(&p, &q), Valuation::Finite(x - y));
        }
    }

    #[test]
    fn factorization_round_trip(
        exps in prop::collection::vec(0u32..3, 4),
        unit in arb_poly(2, 2),
    ) {
        let primes = coordinate_primes();
        let one = Poly::one(F5, 2);
        let unit = unit.add(&one).add(&one); // nonzero constant term unless it cancels
        prop_assume!(!unit.constant_term().eq(&F5.zero()));
        let mut e = unit.clone();
        for (p, k) in primes.iter().zip(&exps) {
            e = e.mul(&p.poly().pow(*k));
        }
        let f = factor_element(&LocalElem::from_poly(e.clone()), &primes).unwrap();
        for (p, k) in primes.iter().zip(&exps) {
            prop_assert_eq!(f.divisor.get(p), *k as i64);
        }
        let back = f.divisor.to_elem(F5, 2).mul(f.unit.as_field());
        prop_assert_eq!(back, FieldElem::from_poly(e));
        prop_assert!(f.unit.is_unit());
    }

    #[test]
    fn homothety_detects_rescaled_bases(
        s_num in arb_nonzero(2, 2),
        s_den in arb_nonzero(2, 2),
        c in arb_poly(2, 2),
        k in 1u32..3,
    ) {
        let one = FieldElem::one(F5, 2);
        let zero = FieldElem::zero(F5, 2);
        let x = FieldElem::var(F5, 2, 0);
        let base = Lattice::new(Matrix2::new(x.clone(), zero.clone(), FieldElem::from_poly(c.clone()), one.clone())).unwrap();
        let s = FieldElem::new(s_num, s_den).unwrap();
        // a GL_2(R) change of basis with unit determinant
        let u = Matrix2::new(one.clone(), FieldElem::from_poly(c), zero.clone(), one.clone());
        let other = base.scale(&s).transform(&u).unwrap();
        let w = equal_up_to_homothety(&base, &other).expect("homothetic");
        prop_assert!(other.contains(&base.scale(&w)) && base.scale(&w).contains(&other));
        let squeezed = base.transform(&Matrix2::diag(x.pow(k as i64), one)).unwrap();
        prop_assert!(equal_up_to_homothety(&base, &squeezed).is_none());
    }
}

fn arb_ring() -> impl Strategy<Value = TokenRing> {
    prop::collection::vec((1i64..4, 0i64..3, any::<bool>()), 1..4)
        .prop_flat_map(|ps| {
            let n = ps.len();
            (Just(ps), prop::collection::vec(any::<bool>(), n), any::<bool>())
        })
        .prop_map(|(ps, pf, rem)| {
            let primes = ps
                .into_iter()
                .zip(pf)
                .enumerate()
                .map(|(i, ((n, extra, _), pfour))| PrimeToken {
                    label: format!("p{}", i + 1),
                    multiplicity: n,
                    ap_order: if pfour { n } else { n + extra },
                    pfour,
                })
                .collect();
            TokenRing::new(primes, rem).unwrap()
        })
}

fn h0_exponents(m: &ModuleExpr) -> Option<Vec<(Token, i64)>> {
    match m {
        ModuleExpr::Zero => None,
        ModuleExpr::DualTorsion(gens) => Some(
            gens.iter()
                .find(|g| g.get(Token::GammaMinusOne) == 0)
                .map(|g| g.iter().collect())
                .unwrap_or_default(),
        ),
        other => panic!("unexpected H0 shape {other:?}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn iwasawa_identities(ring in arb_ring()) {
        let verts = ring.vertices();
        let top = ring.dims();
        let c0 = one_var_char(&ring, &verts[0]).unwrap();
        prop_assert_eq!(h0_ideal(&ring, &top, true).unwrap(), ModuleExpr::Zero);
        for v in &verts {
            prop_assert_eq!(one_var_char(&ring, v).unwrap(), c0.clone());
            prop_assert_eq!(h0_ideal(&ring, v, false).unwrap(), ModuleExpr::Zero);
            let shift = selmer_change_multiplier(&ring, v).unwrap();
            prop_assert!(shift.is_effective() && shift.le(&ring.j_divisor()));
            for w in &verts {
                if v.iter().zip(w).all(|(a, b)| a <= b) {
                    // the ideal at w divides the ideal at v
                    let (hv, hw) = (h0_exponents(&h0_ideal(&ring, v, true).unwrap()), h0_exponents(&h0_ideal(&ring, w, true).unwrap()));
                    match (hv, hw) {
                        (_, None) => {}
                        (None, Some(_)) => prop_assert!(false, "zero below a nonzero module"),
                        (Some(a), Some(b)) => {
                            for (t, e) in b {
                                let ea = a.iter().find(|(s, _)| *s == t).map_or(0, |(_, e)| *e);
                                prop_assert!(e <= ea);
                            }
                        }
                    }
                }
            }
            for i in 0..ring.primes.len() {
                let d = control_defect(&ring, v, SpecializationCase::Eisenstein(i), true).unwrap();
                prop_assert_eq!(d.kernel.is_zero(), v[i] == top[i]);
            }
            let aug = control_defect(&ring, v, SpecializationCase::Augmentation, true).unwrap();
            let expected = ring.ap_divisor().sub(&ring.prime_divisor(&top.iter().zip(v).map(|(n, j)| n - j).collect::<Vec<_>>()));
            match aug.cokernel {
                ModuleExpr::Zero => prop_assert!(expected.is_empty()),
                ModuleExpr::DualTorsion(g) => prop_assert_eq!(g, vec![expected]),
                other => prop_assert!(false, "unexpected cokernel {:?}", other),
            }
        }
    }
}
