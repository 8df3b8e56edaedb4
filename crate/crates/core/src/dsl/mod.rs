//! A small text language for holomorphic functions.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary ('*' unary)*
//! unary := '-' unary | power
//! power := atom ('^' integer)?
//! atom  := number | number 'i' | 'i' | 'z' | param
//!        | 'exp' '(' expr ')' | 'reflect' '(' expr ')' | '(' expr ')'
//! ```
//!
//! Parameters are replaced by real literals before parsing. Exponents are
//! integers in `0..=64`.

mod source;

pub use source::{load_fn_file, parse_fn_sources, FnSource};

use num_complex::Complex64;
use std::collections::BTreeMap;

use crate::analytic::Expr;
use crate::error::{Error, ParseError, Result};

pub const MAX_EXPONENT: u32 = 64;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Imag(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    start: usize,
    end: usize,
}

const RESERVED: [&str; 4] = ["z", "i", "exp", "reflect"];

pub fn is_reserved(name: &str) -> bool {
    RESERVED.contains(&name)
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let ch = bytes[i];
        let start = i;
        let single = match ch {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'^' => Some(Tok::Caret),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            b'/' => {
                return Err(Error::UnsupportedConstruct {
                    construct: "division".into(),
                    position: i,
                })
            }
            _ => None,
        };
        if let Some(tok) = single {
            i += 1;
            out.push(Token { tok, start, end: i });
            continue;
        }
        if ch.is_ascii_digit() || ch == b'.' {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i < bytes.len() && bytes[i] == b'.' {
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
            }
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let lexeme = &text[start..i];
            let v: f64 = lexeme.parse().map_err(|_| {
                Error::Parse(ParseError {
                    position: start,
                    expected: "number".into(),
                    found: lexeme.to_string(),
                })
            })?;
            let imag = i < bytes.len()
                && bytes[i] == b'i'
                && !bytes
                    .get(i + 1)
                    .is_some_and(|b| b.is_ascii_alphanumeric() || *b == b'_');
            if imag {
                i += 1;
                out.push(Token {
                    tok: Tok::Imag(v),
                    start,
                    end: i,
                });
            } else {
                out.push(Token {
                    tok: Tok::Num(v),
                    start,
                    end: i,
                });
            }
            continue;
        }
        if ch.is_ascii_alphabetic() || ch == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Ident(text[start..i].to_string()),
                start,
                end: i,
            });
            continue;
        }
        let found: String = text[start..].chars().next().into_iter().collect();
        return Err(Error::Parse(ParseError {
            position: start,
            expected: "number, identifier, operator or parenthesis".into(),
            found,
        }));
    }
    out.push(Token {
        tok: Tok::End,
        start: text.len(),
        end: text.len(),
    });
    Ok(out)
}

struct Parser<'a> {
    text: &'a str,
    toks: Vec<Token>,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn error(&self, t: &Token, expected: &str) -> Error {
        let found = if t.tok == Tok::End {
            "end of input".to_string()
        } else {
            self.text[t.start..t.end].to_string()
        };
        Error::Parse(ParseError {
            position: t.start,
            expected: expected.to_string(),
            found,
        })
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<()> {
        let t = self.bump();
        if t.tok == tok {
            Ok(())
        } else {
            Err(self.error(&t, expected))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut acc = self.term()?;
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.bump();
                    acc = acc.add(self.term()?);
                }
                Tok::Minus => {
                    self.bump();
                    acc = acc.sub(self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut acc = self.unary()?;
        while self.peek().tok == Tok::Star {
            self.bump();
            acc = acc.mul(self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.peek().tok == Tok::Minus {
            self.bump();
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek().tok != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let t = self.bump();
        match t.tok {
            Tok::Num(v) if v.fract() == 0.0 && (0.0..=MAX_EXPONENT as f64).contains(&v) => {
                Ok(base.pow(v as u32))
            }
            Tok::Num(_) => Err(Error::UnsupportedConstruct {
                construct: format!("exponent must be an integer in 0..={MAX_EXPONENT}"),
                position: t.start,
            }),
            _ => Err(self.error(&t, "integer exponent")),
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let t = self.bump();
        match &t.tok {
            Tok::Num(v) => Ok(Expr::constant(Complex64::new(*v, 0.0))),
            Tok::Imag(v) => Ok(Expr::constant(Complex64::new(0.0, *v))),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Ident(name) => match name.as_str() {
                "z" => Ok(Expr::z()),
                "i" => Ok(Expr::constant(Complex64::new(0.0, 1.0))),
                "exp" | "reflect" => {
                    self.expect(Tok::LParen, "`(`")?;
                    let e = self.expr()?;
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(if name == "exp" { e.exp() } else { e.reflect() })
                }
                other => Err(Error::UnboundParam {
                    name: other.to_string(),
                    position: t.start,
                }),
            },
            _ => Err(self.error(&t, "number, `z`, `i`, parameter, `exp(`, `reflect(` or `(`")),
        }
    }
}

/// Parses DSL text into an expression tree, substituting `params`.
pub fn parse_expr(text: &str, params: &BTreeMap<String, f64>) -> Result<Expr> {
    let mut toks = lex(text)?;
    for t in &mut toks {
        if let Tok::Ident(name) = &t.tok {
            if !is_reserved(name) {
                match params.get(name) {
                    Some(v) => t.tok = Tok::Num(*v),
                    None => {
                        return Err(Error::UnboundParam {
                            name: name.clone(),
                            position: t.start,
                        })
                    }
                }
            }
        }
    }
    let mut p = Parser { text, toks, pos: 0 };
    let e = p.expr()?;
    let t = p.bump();
    if t.tok != Tok::End {
        return Err(p.error(&t, "operator or end of input"));
    }
    Ok(e)
}

/// Parses DSL text into a function on the unit disk.
pub fn parse_fn(text: &str, params: &BTreeMap<String, f64>) -> Result<crate::AnalyticFn> {
    Ok(crate::AnalyticFn::on_unit_disk(parse_expr(text, params)?))
}

/// Byte ranges of the tokens of `text`, for tooling and tests.
pub fn token_spans(text: &str) -> Result<Vec<(usize, usize)>> {
    Ok(lex(text)?
        .into_iter()
        .filter(|t| t.tok != Tok::End)
        .map(|t| (t.start, t.end))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn parse(s: &str) -> Result<Expr> {
        parse_expr(s, &BTreeMap::new())
    }

    #[test]
    fn examples() {
        assert_eq!(
            parse("exp(2*i*z)").unwrap(),
            Expr::poly(vec![c(0.0, 0.0), c(0.0, 2.0)]).exp()
        );
        let params = BTreeMap::from([("a".to_string(), 0.05), ("c".to_string(), 10.0)]);
        assert_eq!(
            parse_expr("(z - a)*c", &params).unwrap(),
            Expr::poly(vec![c(-0.5, 0.0), c(10.0, 0.0)])
        );
        assert!(matches!(
            parse("z/2"),
            Err(Error::UnsupportedConstruct { position: 1, .. })
        ));
    }

    #[test]
    fn literals() {
        assert_eq!(parse("1+2i").unwrap(), Expr::constant(c(1.0, 2.0)));
        assert_eq!(parse("0.5i").unwrap(), Expr::constant(c(0.0, 0.5)));
        assert_eq!(parse("1e-3").unwrap(), Expr::constant(c(1e-3, 0.0)));
        assert_eq!(parse("2.5E+2i").unwrap(), Expr::constant(c(0.0, 250.0)));
    }

    #[test]
    fn precedence() {
        // -z^2 is -(z^2)
        assert_eq!(parse("-z^2").unwrap(), Expr::poly(vec![c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]));
        assert_eq!(parse("2*z+1").unwrap(), parse("1 + (2*z)").unwrap());
        assert_eq!(parse("(z+1)^2").unwrap(), Expr::poly(vec![c(1.0, 0.0), c(2.0, 0.0), c(1.0, 0.0)]));
        assert_eq!(parse("2*-z").unwrap(), Expr::poly(vec![c(0.0, 0.0), c(-2.0, 0.0)]));
    }

    #[test]
    fn errors() {
        match parse("exp(z") {
            Err(Error::Parse(e)) => {
                assert_eq!(e.position, 5);
                assert_eq!(e.found, "end of input");
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse("k*z"), Err(Error::UnboundParam { position: 0, .. })));
        assert!(matches!(parse("z^65"), Err(Error::UnsupportedConstruct { position: 2, .. })));
        assert!(matches!(parse("z^1.5"), Err(Error::UnsupportedConstruct { .. })));
        assert!(matches!(parse("z^-1"), Err(Error::Parse(_))));
        assert!(matches!(parse("z z"), Err(Error::Parse(ParseError { position: 2, .. }))));
        assert!(matches!(parse("z $"), Err(Error::Parse(ParseError { position: 2, .. }))));
        assert!(matches!(parse(""), Err(Error::Parse(ParseError { position: 0, .. }))));
    }

    #[test]
    fn reflect_parses() {
        let e = parse("reflect(10*(0.05 - z))").unwrap();
        assert!(matches!(e, Expr::Reflect(_)));
    }

    #[test]
    fn exponent_param_substitutes() {
        let params = BTreeMap::from([("n".to_string(), 3.0)]);
        assert_eq!(parse_expr("z^n", &params).unwrap(), parse("z*z*z").unwrap());
    }

    #[test]
    fn printing_round_trips() {
        for s in [
            "exp(-1*i*10*z)",
            "reflect(10*(0.05 - z)) + 3",
            "exp(2i*z + z^2*1e-5) * (z - 0.1)^3",
            "(1.5 - 2i)*exp(exp(z))*z - 7",
            "0",
        ] {
            let e = parse(s).unwrap();
            let printed = e.to_string();
            assert_eq!(parse(&printed).unwrap(), e, "{s} -> {printed}");
        }
    }
}
