//! The input document: JSON with expression strings at the leaves.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use latticerect::iwasawa::{PrimeToken, TokenRing};
use latticerect::matrix::Matrix2;
use latticerect::repr::{ClosurePolicy, Representation};
use latticerect::ring::{check_hints, parse_expr, BaseField, FieldElem, PrimeElem};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", deny_unknown_fields)]
pub enum FieldSpec {
    Fp { p: u64 },
    Q,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    pub label: String,
    pub matrix: [[String; 2]; 2],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClosureSpec {
    #[serde(default = "default_word_bound")]
    pub word_bound: usize,
    #[serde(default = "default_window")]
    pub window: usize,
}

fn default_word_bound() -> usize {
    ClosurePolicy::default().word_bound
}

fn default_window() -> usize {
    ClosurePolicy::default().window
}

impl Default for ClosureSpec {
    fn default() -> Self {
        ClosureSpec {
            word_bound: default_word_bound(),
            window: default_window(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JEntry {
    pub prime_label: String,
    pub multiplicity: i64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ApSpec {
    /// Order of `a_p - 1` at each declared prime; missing primes count as 0.
    #[serde(default)]
    pub divisor: BTreeMap<String, i64>,
    #[serde(default)]
    pub remainder: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IwasawaSpec {
    #[serde(rename = "J")]
    pub j: Vec<JEntry>,
    #[serde(default)]
    pub ap_minus_1: ApSpec,
    #[serde(default)]
    pub pfour: Vec<String>,
    pub vertex: Vec<i64>,
    #[serde(default = "default_true")]
    pub twist_trivial: bool,
}

fn default_true() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputSpec {
    pub field: FieldSpec,
    pub variables: Vec<String>,
    pub generators: Vec<GeneratorSpec>,
    #[serde(default)]
    pub closure: ClosureSpec,
    #[serde(default)]
    pub prime_hints: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iwasawa: Option<IwasawaSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InputError {
    #[error("line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: column {column}: {message} at '{token}'")]
    Parse {
        path: String,
        column: usize,
        token: String,
        message: String,
    },
    #[error("{0}")]
    Validation(String),
}

/// A validated input.
#[derive(Clone, Debug)]
pub struct Problem {
    pub spec: InputSpec,
    pub rep: Representation,
    pub hints: Vec<PrimeElem>,
    pub iwasawa: Option<IwasawaProblem>,
}

#[derive(Clone, Debug)]
pub struct IwasawaProblem {
    pub ring: TokenRing,
    pub vertex: Vec<i64>,
    pub twist_trivial: bool,
}

/// Reads the JSON document without validating its contents.
pub fn parse_spec(text: &str) -> Result<InputSpec, InputError> {
    serde_json::from_str(text).map_err(|e| InputError::Json {
        line: e.line(),
        column: e.column(),
        message: strip_position(&e.to_string()),
    })
}

fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

pub fn parse_input(text: &str) -> Result<Problem, InputError> {
    validate(parse_spec(text)?)
}

fn is_identifier(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn expr(src: &str, path: String, field: BaseField, vars: &[String]) -> Result<FieldElem, InputError> {
    parse_expr(src, field, vars).map_err(|e| InputError::Parse {
        path,
        column: e.column,
        token: e.token,
        message: e.message,
    })
}

pub fn validate(spec: InputSpec) -> Result<Problem, InputError> {
    let invalid = |m: String| InputError::Validation(m);
    let field = match spec.field {
        FieldSpec::Fp { p } => BaseField::prime(p).map_err(|e| invalid(e.to_string()))?,
        FieldSpec::Q => BaseField::Rationals,
    };
    let vars = &spec.variables;
    if vars.is_empty() {
        return Err(invalid("at least one variable is required".into()));
    }
    for (i, v) in vars.iter().enumerate() {
        if !is_identifier(v) {
            return Err(invalid(format!("variable name '{v}' is not an identifier")));
        }
        if vars[..i].contains(v) {
            return Err(invalid(format!("variable '{v}' declared twice")));
        }
    }
    if spec.closure.word_bound == 0 {
        return Err(invalid("closure.word_bound must be positive".into()));
    }
    let mut gens = Vec::new();
    for (k, g) in spec.generators.iter().enumerate() {
        if g.label.is_empty() || spec.generators[..k].iter().any(|h| h.label == g.label) {
            return Err(invalid(format!("generator {k} needs a distinct nonempty label")));
        }
        let e = |i: usize, j: usize| {
            expr(
                &g.matrix[i][j],
                format!("generators[{k}].matrix[{i}][{j}]"),
                field,
                vars,
            )
        };
        let m = Matrix2::new(e(0, 0)?, e(0, 1)?, e(1, 0)?, e(1, 1)?);
        if m.det().is_zero() {
            return Err(invalid(format!("generator {} is singular", g.label)));
        }
        gens.push((g.label.clone(), m));
    }
    let policy = ClosurePolicy {
        word_bound: spec.closure.word_bound,
        window: spec.closure.window,
    };
    let rep = Representation::new(field, vars.clone(), gens, policy).map_err(|e| invalid(e.to_string()))?;
    let mut hints = Vec::new();
    for (k, h) in spec.prime_hints.iter().enumerate() {
        let e = expr(h, format!("prime_hints[{k}]"), field, vars)?;
        if !e.is_polynomial() {
            return Err(invalid(format!("prime hint {h} is not a polynomial")));
        }
        let p = PrimeElem::new(e.num().clone()).map_err(|err| invalid(format!("prime hint {h}: {err}")))?;
        hints.push(p);
    }
    check_hints(&hints).map_err(|e| invalid(e.to_string()))?;
    let iwasawa = spec.iwasawa.as_ref().map(validate_iwasawa).transpose()?;
    Ok(Problem {
        spec,
        rep,
        hints,
        iwasawa,
    })
}

fn validate_iwasawa(s: &IwasawaSpec) -> Result<IwasawaProblem, InputError> {
    let invalid = |m: String| InputError::Validation(m);
    for label in s.ap_minus_1.divisor.keys().chain(&s.pfour) {
        if !s.j.iter().any(|e| &e.prime_label == label) {
            return Err(invalid(format!("'{label}' is not a prime of J")));
        }
    }
    let primes = s
        .j
        .iter()
        .map(|e| PrimeToken {
            label: e.prime_label.clone(),
            multiplicity: e.multiplicity,
            ap_order: s.ap_minus_1.divisor.get(&e.prime_label).copied().unwrap_or(0),
            pfour: s.pfour.contains(&e.prime_label),
        })
        .collect();
    let ring = TokenRing::new(primes, s.ap_minus_1.remainder).map_err(|e| invalid(e.to_string()))?;
    ring.check_vertex(&s.vertex).map_err(|e| invalid(e.to_string()))?;
    Ok(IwasawaProblem {
        ring,
        vertex: s.vertex.clone(),
        twist_trivial: s.twist_trivial,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "field": {"type": "Fp", "p": 5},
        "variables": ["t"],
        "generators": [{"label": "g0", "matrix": [["2", "0"], ["0", "1"]]}]
    }"#;

    #[test]
    fn defaults_fill_in() {
        let p = parse_input(MINIMAL).unwrap();
        assert_eq!(p.spec.closure, ClosureSpec::default());
        assert!(p.hints.is_empty() && p.iwasawa.is_none());
        assert_eq!(p.rep.generators().len(), 1);
    }

    #[test]
    fn json_errors_have_positions() {
        match parse_input("{\n  \"field\": }") {
            Err(InputError::Json { line, column, .. }) => assert_eq!((line, column), (2, 12)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_variables() {
        let text = MINIMAL.replace(r#"["t"]"#, r#"["t", "t"]"#);
        assert!(matches!(parse_input(&text), Err(InputError::Validation(_))));
        let text = MINIMAL.replace(r#"["t"]"#, r#"["2t"]"#);
        assert!(matches!(parse_input(&text), Err(InputError::Validation(_))));
    }
}
