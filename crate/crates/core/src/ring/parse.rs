//! Recursive-descent parser for polynomial and rational-function strings.
//!
//! ```text
//! expression := term (('+' | '-') term)*
//! term       := unary (('*' | '/') unary)*
//! unary      := '-' unary | factor
//! factor     := atom ('^' nonneg-int)?
//! atom       := integer | variable | '(' expression ')'
//! ```

use num_bigint::BigInt;
use num_rational::BigRational;

use super::field::BaseField;
use super::frac::FieldElem;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("column {column}: {message} (at {token:?})")]
pub struct ParseError {
    /// 1-based character column.
    pub column: usize,
    pub token: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
    End,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    col: usize,
    text: String,
}

fn lex(src: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push(Spanned {
                tok: Tok::Int(text.parse().unwrap()),
                col,
                text,
            });
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push(Spanned {
                tok: Tok::Ident(text.clone()),
                col,
                text,
            });
        } else if "+-*/^()".contains(c) {
            out.push(Spanned {
                tok: Tok::Sym(c),
                col,
                text: c.to_string(),
            });
            i += 1;
        } else {
            return Err(ParseError {
                column: col,
                token: c.to_string(),
                message: "unexpected character".into(),
            });
        }
    }
    out.push(Spanned {
        tok: Tok::End,
        col: chars.len() + 1,
        text: "end of input".into(),
    });
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    field: BaseField,
    vars: &'a [String],
}

impl Parser<'_> {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, at: &Spanned, message: impl Into<String>) -> ParseError {
        ParseError {
            column: at.col,
            token: at.text.clone(),
            message: message.into(),
        }
    }

    fn expression(&mut self) -> Result<FieldElem, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek().tok {
                Tok::Sym('+') => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Tok::Sym('-') => {
                    self.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<FieldElem, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek().tok {
                Tok::Sym('*') => {
                    self.bump();
                    acc = acc.mul(&self.unary()?);
                }
                Tok::Sym('/') => {
                    let slash = self.bump();
                    let d = self.unary()?;
                    acc = acc
                        .div(&d)
                        .ok_or_else(|| self.err(&slash, "division by zero"))?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<FieldElem, ParseError> {
        if self.peek().tok == Tok::Sym('-') {
            self.bump();
            return Ok(self.unary()?.neg());
        }
        self.factor()
    }

    fn factor(&mut self) -> Result<FieldElem, ParseError> {
        let base = self.atom()?;
        if self.peek().tok != Tok::Sym('^') {
            return Ok(base);
        }
        let caret = self.bump();
        let exp = self.peek().clone();
        match exp.tok {
            Tok::Int(ref n) => {
                let e: i64 = n
                    .try_into()
                    .map_err(|_| self.err(&exp, "exponent too large"))?;
                if e > u32::MAX as i64 {
                    return Err(self.err(&exp, "exponent too large"));
                }
                self.bump();
                Ok(base.pow(e))
            }
            _ => Err(self.err(&caret, "expected a non-negative integer exponent after '^'")),
        }
    }

    fn atom(&mut self) -> Result<FieldElem, ParseError> {
        let t = self.bump();
        let n = self.vars.len();
        match t.tok {
            Tok::Int(ref v) => {
                let q = BigRational::from_integer(v.clone());
                Ok(FieldElem::from_scalar(self.field, n, self.field.reduce(&q)))
            }
            Tok::Ident(ref name) => match self.vars.iter().position(|v| v == name) {
                Some(i) => Ok(FieldElem::var(self.field, n, i)),
                None => Err(self.err(&t, "unknown variable")),
            },
            Tok::Sym('(') => {
                let e = self.expression()?;
                let close = self.bump();
                if close.tok != Tok::Sym(')') {
                    return Err(self.err(&close, "expected ')'"));
                }
                Ok(e)
            }
            _ => Err(self.err(&t, "expected a number, variable, or '('")),
        }
    }
}

/// Parses `src` as an element of `K = Frac(k[vars])`.
pub fn parse_expr(src: &str, field: BaseField, vars: &[String]) -> Result<FieldElem, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        field,
        vars,
    };
    let e = p.expression()?;
    let end = p.peek().clone();
    if end.tok != Tok::End {
        return Err(p.err(&end, "unexpected token"));
    }
    Ok(e)
}
