//! Small representations used throughout the tests and the guide.

use crate::matrix::Matrix2;
use crate::repr::{ClosurePolicy, Representation};
use crate::ring::{parse_expr, BaseField};

/// Builds a representation from generator entries written as expressions.
pub fn from_strings(
    field: BaseField,
    vars: &[&str],
    gens: &[(&str, [&str; 4])],
    policy: ClosurePolicy,
) -> Representation {
    let names: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
    let gens = gens
        .iter()
        .map(|(label, m)| {
            let p = |s: &str| parse_expr(s, field, &names).expect("valid entry");
            (label.to_string(), Matrix2::new(p(m[0]), p(m[1]), p(m[2]), p(m[3])))
        })
        .collect();
    Representation::new(field, names, gens, policy).expect("invertible generators")
}

const F5: BaseField = BaseField::Prime(5);

/// Two variables, `B = x`, `C = y`: a 1×1 square.
pub fn ex1() -> Representation {
    from_strings(
        F5,
        &["x", "y"],
        &[
            ("g0", ["2", "0", "0", "1"]),
            ("u", ["1", "x", "0", "1"]),
            ("w", ["1", "0", "y", "1"]),
        ],
        ClosurePolicy::default(),
    )
}

/// One variable, `B = t^2`, `C = 1`: a segment with three classes.
pub fn ex2() -> Representation {
    from_strings(
        F5,
        &["t"],
        &[
            ("g0", ["2", "0", "0", "1"]),
            ("u", ["1", "t^2", "0", "1"]),
            ("w", ["1", "0", "1", "1"]),
        ],
        ClosurePolicy::default(),
    )
}

/// Two variables with `B = gcd(x, y) = 1` and `C = 1`: a single class.
pub fn ex3() -> Representation {
    from_strings(
        F5,
        &["x", "y"],
        &[
            ("g0", ["2", "0", "0", "1"]),
            ("u", ["1", "x", "0", "1"]),
            ("w", ["1", "y", "0", "1"]),
            ("v", ["1", "0", "1", "1"]),
        ],
        ClosurePolicy::default(),
    )
}
