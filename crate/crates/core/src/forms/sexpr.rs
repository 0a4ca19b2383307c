//! Prefix S-expression text format for [`Expr`].
//!
//! ```text
//! expr   := number | "z" | "zbar" | "i" | "(" op expr* ")"
//! op     := add | mul | sub | neg | div | pow | exp | log | conj | complex
//! ```
//!
//! `(pow e n)` takes an integer literal exponent and `(complex re im)` two
//! real literals. The conjugate coordinate prints as `(conj z)`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use super::expr::{Expr, Node};
use super::FormsError;

/// Nesting limit for parsed input.
pub const MAX_DEPTH: usize = 200;

fn fmt_real(x: f64, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if x == 0.0 {
        // normalise -0
        write!(f, "0")
    } else {
        write!(f, "{x}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node() {
            Node::Const(c) => {
                if c.im == 0.0 {
                    fmt_real(c.re, f)
                } else {
                    write!(f, "(complex ")?;
                    fmt_real(c.re, f)?;
                    write!(f, " ")?;
                    fmt_real(c.im, f)?;
                    write!(f, ")")
                }
            }
            Node::Z => write!(f, "z"),
            Node::ZBar => write!(f, "(conj z)"),
            Node::Add(ts) => {
                write!(f, "(add")?;
                for t in ts {
                    write!(f, " {t}")?;
                }
                write!(f, ")")
            }
            Node::Mul(ts) => {
                write!(f, "(mul")?;
                for t in ts {
                    write!(f, " {t}")?;
                }
                write!(f, ")")
            }
            Node::Div(a, b) => write!(f, "(div {a} {b})"),
            Node::Pow(a, n) => write!(f, "(pow {a} {n})"),
            Node::Exp(a) => write!(f, "(exp {a})"),
            Node::Log(a) => write!(f, "(log {a})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token<'a> {
    Open(usize),
    Close(usize),
    Atom(&'a str, usize),
}

fn tokenize(src: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let bytes = src.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'(' => {
                out.push(Token::Open(i));
                i += 1;
            }
            b')' => {
                out.push(Token::Close(i));
                i += 1;
            }
            b if b.is_ascii_whitespace() => i += 1,
            _ => {
                let start = i;
                while i < bytes.len() && !matches!(bytes[i], b'(' | b')') && !bytes[i].is_ascii_whitespace() {
                    i += 1;
                }
                out.push(Token::Atom(&src[start..i], start));
            }
        }
    }
    out
}

struct Parser<'a> {
    tokens: Vec<Token<'a>>,
    pos: usize,
    len: usize,
}

fn err(offset: usize, message: impl Into<String>) -> FormsError {
    FormsError::Parse { offset, message: message.into() }
}

fn parse_real(s: &str, offset: usize) -> Result<f64, FormsError> {
    // Rust's float parser also accepts "inf"/"nan"; restrict to plain literals.
    if !s.bytes().all(|b| b.is_ascii_digit() || matches!(b, b'.' | b'-' | b'+' | b'e' | b'E')) {
        return Err(err(offset, format!("not a number: {s:?}")));
    }
    let x: f64 = s.parse().map_err(|_| err(offset, format!("not a number: {s:?}")))?;
    if !x.is_finite() {
        return Err(err(offset, "non-finite literal"));
    }
    Ok(x)
}

impl<'a> Parser<'a> {
    fn next(&mut self) -> Option<Token<'a>> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn peek(&self) -> Option<&Token<'a>> {
        self.tokens.get(self.pos)
    }

    fn expr(&mut self, depth: usize) -> Result<Expr, FormsError> {
        if depth > MAX_DEPTH {
            return Err(err(self.offset(), "nesting too deep"));
        }
        match self.next() {
            None => Err(err(self.len, "unexpected end of input")),
            Some(Token::Close(o)) => Err(err(o, "unexpected ')'")),
            Some(Token::Atom(a, o)) => match a {
                "z" => Ok(Expr::z()),
                "zbar" => Ok(Expr::zbar()),
                "i" => Ok(Expr::i()),
                _ => Ok(Expr::real(parse_real(a, o)?)),
            },
            Some(Token::Open(o)) => {
                let (op, op_off) = match self.next() {
                    Some(Token::Atom(a, off)) => (a, off),
                    _ => return Err(err(o, "expected operator after '('")),
                };
                let e = match op {
                    "pow" => {
                        let base = self.expr(depth + 1)?;
                        let (lit, off) = match self.next() {
                            Some(Token::Atom(a, off)) => (a, off),
                            _ => return Err(err(op_off, "pow expects an integer exponent")),
                        };
                        let n: i32 = lit.parse().map_err(|_| err(off, format!("bad exponent {lit:?}")))?;
                        base.powi(n)
                    }
                    "complex" => {
                        let mut parts = [0.0; 2];
                        for part in parts.iter_mut() {
                            match self.next() {
                                Some(Token::Atom(a, off)) => *part = parse_real(a, off)?,
                                _ => return Err(err(op_off, "complex expects two real literals")),
                            }
                        }
                        Expr::constant(Complex64::new(parts[0], parts[1]))
                    }
                    _ => {
                        let mut args = Vec::new();
                        while !matches!(self.peek(), Some(Token::Close(_)) | None) {
                            args.push(self.expr(depth + 1)?);
                        }
                        let arity = |k: usize| -> Result<(), FormsError> {
                            if args.len() == k {
                                Ok(())
                            } else {
                                Err(err(op_off, format!("{op} expects {k} argument(s), got {}", args.len())))
                            }
                        };
                        match op {
                            "add" => Expr::sum(args),
                            "mul" => Expr::product(args),
                            "sub" => match args.len() {
                                1 => args[0].neg(),
                                2 => args[0].sub(&args[1]),
                                n => return Err(err(op_off, format!("sub expects 1 or 2 arguments, got {n}"))),
                            },
                            "neg" => {
                                arity(1)?;
                                args[0].neg()
                            }
                            "div" => {
                                arity(2)?;
                                args[0].div(&args[1])
                            }
                            "exp" => {
                                arity(1)?;
                                args[0].exp()
                            }
                            "log" => {
                                arity(1)?;
                                args[0].ln()
                            }
                            "conj" => {
                                arity(1)?;
                                args[0].conj()
                            }
                            other => return Err(err(op_off, format!("unknown operator {other:?}"))),
                        }
                    }
                };
                match self.next() {
                    Some(Token::Close(_)) => Ok(e),
                    Some(Token::Open(off)) | Some(Token::Atom(_, off)) => Err(err(off, "expected ')'")),
                    None => Err(err(self.len, "unclosed '('")),
                }
            }
        }
    }

    fn offset(&self) -> usize {
        match self.peek() {
            Some(Token::Open(o)) | Some(Token::Close(o)) | Some(Token::Atom(_, o)) => *o,
            None => self.len,
        }
    }
}

/// Parse one expression; trailing input is an error.
pub fn parse(src: &str) -> Result<Expr, FormsError> {
    let mut p = Parser { tokens: tokenize(src), pos: 0, len: src.len() };
    let e = p.expr(0)?;
    if p.pos < p.tokens.len() {
        return Err(err(p.offset(), "trailing input"));
    }
    Ok(e)
}

impl FromStr for Expr {
    type Err = FormsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

impl serde::Serialize for Expr {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Expr {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn documented_format_parses() {
        let e = parse("(pow (add 1 (mul z (conj z))) -1)").unwrap();
        assert_eq!(e.to_string(), "(pow (add 1 (mul z (conj z))) -1)");
        assert_eq!(e.eval(Complex64::new(0.0, 0.0)).unwrap(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn literals() {
        assert_eq!(parse("i").unwrap().as_const(), Some(Complex64::new(0.0, 1.0)));
        assert_eq!(parse("(complex 1.5 -2)").unwrap().to_string(), "(complex 1.5 -2)");
        assert_eq!(parse("zbar").unwrap(), Expr::zbar());
        assert_eq!(parse("-0").unwrap().to_string(), "0");
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "(", ")", "(add 1", "(foo 1)", "(pow z x)", "(div 1)", "inf", "nan", "(complex 1)", "z z", "(1 2)"] {
            assert!(parse(bad).is_err(), "{bad:?} should fail");
        }
    }

    #[test]
    fn deep_nesting_is_rejected_not_overflowed() {
        let src = format!("{}z{}", "(exp ".repeat(10_000), ")".repeat(10_000));
        assert!(parse(&src).is_err());
    }

    pub(crate) fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            (-4i32..5).prop_map(|k| Expr::real(k as f64 * 0.5)),
            Just(Expr::z()),
            Just(Expr::zbar()),
            Just(Expr::i()),
        ];
        leaf.prop_recursive(4, 24, 3, |inner| {
            prop_oneof![
                prop::collection::vec(inner.clone(), 2..4).prop_map(Expr::sum),
                prop::collection::vec(inner.clone(), 2..4).prop_map(Expr::product),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| a.div(&b)),
                (inner.clone(), -3i32..4).prop_map(|(a, n)| a.powi(n)),
                inner.clone().prop_map(|a| a.exp()),
                inner.prop_map(|a| a.ln()),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_parse_roundtrip(e in arb_expr()) {
            let printed = e.to_string();
            let back = parse(&printed).unwrap();
            prop_assert_eq!(back.to_string(), printed);
        }
    }
}
