//! Text grammar for algebra elements.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' int)?
//! int    := '-'? DIGITS | '(' '-'? DIGITS ')'
//! atom   := DIGITS | 'q' | 'X' | 'Y' | 'Z' | 'Zi' | 'J' | '(' expr ')'
//! ```
//!
//! Division and negative powers are allowed on letter-free operands only
//! (plus `Z^-k` / `Zi^-k`), so rational numbers read as `num/den` and
//! coefficients may be any element of Q(q).

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{Letter, NcPoly, QCoeff};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let bytes: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = bytes[start..i].iter().collect();
            out.push((start, Tok::Num(s.parse().expect("digits"))));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push((start, Tok::Ident(bytes[start..i].iter().collect())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(Error::Parse {
                pos: i,
                msg: format!("unexpected character '{c}'"),
            });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.here(),
            msg: msg.into(),
        })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    fn expr(&mut self) -> Result<NcPoly> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<NcPoly> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.eat('/') {
                let at = self.here();
                let rhs = self.unary()?;
                let Some(c) = rhs.as_scalar() else {
                    return Err(Error::Parse {
                        pos: at,
                        msg: "divisor must not contain letters".into(),
                    });
                };
                let inv = c.inv().map_err(|_| Error::Parse {
                    pos: at,
                    msg: "division by zero".into(),
                })?;
                acc = acc.scale(&inv);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<NcPoly> {
        if self.eat('-') {
            return Ok(-&self.unary()?);
        }
        self.power()
    }

    fn int(&mut self) -> Result<i64> {
        let paren = self.eat('(');
        let neg = self.eat('-');
        let Some(Tok::Num(n)) = self.peek().cloned() else {
            return self.err("expected integer exponent");
        };
        self.pos += 1;
        if paren {
            self.expect(')')?;
        }
        let n: i64 = match i64::try_from(&n) {
            Ok(v) => v,
            Err(_) => return self.err("exponent too large"),
        };
        Ok(if neg { -n } else { n })
    }

    fn power(&mut self) -> Result<NcPoly> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let at = self.here();
        let k = self.int()?;
        if let Some(c) = base.as_scalar() {
            let p = c.pow(k).map_err(|_| Error::Parse {
                pos: at,
                msg: "zero to a negative power".into(),
            })?;
            return Ok(NcPoly::constant(p));
        }
        if k >= 0 {
            return Ok(base.pow(k as u32));
        }
        let inverse = if base == NcPoly::letter(Letter::Z) {
            Letter::Zinv
        } else if base == NcPoly::letter(Letter::Zinv) {
            Letter::Z
        } else {
            return Err(Error::Parse {
                pos: at,
                msg: "negative powers only apply to scalars, Z and Zi".into(),
            });
        };
        Ok(NcPoly::letter(inverse).pow(k.unsigned_abs() as u32))
    }

    fn atom(&mut self) -> Result<NcPoly> {
        let Some(tok) = self.peek().cloned() else {
            return self.err("unexpected end of input");
        };
        self.pos += 1;
        match tok {
            Tok::Num(n) => Ok(NcPoly::constant(QCoeff::from_rational(BigRational::from_integer(n)))),
            Tok::Ident(name) => Ok(match name.as_str() {
                "q" => NcPoly::constant(QCoeff::q_pow(1)),
                "X" => Letter::X.into(),
                "Y" => Letter::Y.into(),
                "Z" => Letter::Z.into(),
                "Zi" => Letter::Zinv.into(),
                "J" => Letter::J.into(),
                other => {
                    self.pos -= 1;
                    return self.err(format!("unknown identifier '{other}'"));
                }
            }),
            Tok::Op('(') => {
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(inner)
            }
            Tok::Op(c) => {
                self.pos -= 1;
                self.err(format!("unexpected '{c}'"))
            }
        }
    }
}

/// Parses an expression in the grammar above.
pub fn parse_expr(src: &str) -> Result<NcPoly> {
    let mut p = Parser {
        toks: tokenize(src)?,
        pos: 0,
        end: src.len(),
    };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(out)
}
