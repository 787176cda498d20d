//! Scalar literal grammar.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := power (('*'|'/') power)*
//! power  := unary ['^' digits]
//! unary  := '-' unary | atom
//! atom   := digits | 'i' | 'r' digits | 'z' digits | '(' expr ')'
//! ```
//!
//! `r<d>` is `√d`, `z<N>` is `e^{2πi/N}`. Whitespace is ignored.

use num_bigint::BigInt;
use thiserror::Error;

use super::{FieldTower, Rational, TowerScalar, GAUSSIAN};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("column {column}: {message}")]
pub struct ScalarParseError {
    /// 1-based character column in the literal.
    pub column: usize,
    pub message: String,
}

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    tower: &'a FieldTower,
}

/// Parses a literal, checking that every generator it uses lies in `tower`.
pub fn parse_scalar(src: &str, tower: &FieldTower) -> Result<TowerScalar, ScalarParseError> {
    let chars = src
        .chars()
        .enumerate()
        .filter(|(_, c)| !c.is_whitespace())
        .map(|(i, c)| (i + 1, c))
        .collect();
    let mut p = Parser {
        chars,
        pos: 0,
        tower,
    };
    if p.chars.is_empty() {
        return Err(ScalarParseError {
            column: 1,
            message: "empty scalar literal".into(),
        });
    }
    let v = p.expr()?;
    if p.pos < p.chars.len() {
        return Err(p.error(format!("unexpected '{}'", p.chars[p.pos].1)));
    }
    Ok(v)
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|(_, c)| *c)
    }

    fn column(&self) -> usize {
        self.chars
            .get(self.pos)
            .map(|(i, _)| *i)
            .unwrap_or_else(|| self.chars.last().map(|(i, _)| i + 1).unwrap_or(1))
    }

    fn error(&self, message: impl Into<String>) -> ScalarParseError {
        ScalarParseError {
            column: self.column(),
            message: message.into(),
        }
    }

    fn expr(&mut self) -> Result<TowerScalar, ScalarParseError> {
        let mut acc = match self.peek() {
            Some('+') => {
                self.pos += 1;
                self.term()?
            }
            Some('-') => {
                self.pos += 1;
                self.term()?.neg()
            }
            _ => self.term()?,
        };
        while let Some(c) = self.peek() {
            match c {
                '+' => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                '-' => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<TowerScalar, ScalarParseError> {
        let mut acc = self.power()?;
        while let Some(c) = self.peek() {
            match c {
                '*' => {
                    self.pos += 1;
                    acc = acc.mul(&self.power()?);
                }
                '/' => {
                    self.pos += 1;
                    let col = self.column();
                    let d = self.power()?;
                    acc = acc.div(&d).ok_or(ScalarParseError {
                        column: col,
                        message: "division by zero".into(),
                    })?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<TowerScalar, ScalarParseError> {
        let base = self.unary()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let e = self.digits()?;
            let e: u32 = e.try_into().map_err(|_| self.error("exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn unary(&mut self) -> Result<TowerScalar, ScalarParseError> {
        if self.peek() == Some('-') {
            self.pos += 1;
            return Ok(self.unary()?.neg());
        }
        self.atom()
    }

    fn digits(&mut self) -> Result<BigInt, ScalarParseError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected digits"));
        }
        let s: String = self.chars[start..self.pos].iter().map(|(_, c)| c).collect();
        Ok(s.parse().expect("ascii digits"))
    }

    fn small(&mut self, what: &str) -> Result<u64, ScalarParseError> {
        let col = self.column();
        let n = self.digits()?;
        u64::try_from(n).map_err(|_| ScalarParseError {
            column: col,
            message: format!("{what} too large"),
        })
    }

    fn atom(&mut self) -> Result<TowerScalar, ScalarParseError> {
        let col = self.column();
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let n = self.digits()?;
                Ok(TowerScalar::from_rational(Rational::from_integer(n)))
            }
            Some('i') => {
                self.pos += 1;
                Ok(TowerScalar::i())
            }
            Some('r') => {
                self.pos += 1;
                let d = self.small("radicand")?;
                if d == 0 || d > 1 << 40 {
                    return Err(ScalarParseError {
                        column: col,
                        message: format!("invalid radicand {d}"),
                    });
                }
                let s = TowerScalar::sqrt_int(self.tower.order(), d as i64);
                if !self.tower.contains(&s) {
                    return Err(ScalarParseError {
                        column: col,
                        message: format!("r{d} is not in the tower {}", self.tower),
                    });
                }
                Ok(s)
            }
            Some('z') => {
                self.pos += 1;
                let n = self.small("cyclotomic order")?;
                let order = self.tower.order() as u64;
                if n == 0 || !order.is_multiple_of(n) {
                    return Err(ScalarParseError {
                        column: col,
                        message: format!("z{n} is not in the tower {}", self.tower),
                    });
                }
                Ok(TowerScalar::zeta_power(order as u32, (order / n) as i64))
            }
            Some('(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) => Err(self.error(format!("unexpected '{c}'"))),
            None => Err(self.error("unexpected end of literal")),
        }
    }
}

impl TowerScalar {
    /// Parses a literal in the Gaussian base with any radicals allowed.
    pub fn parse_free(src: &str) -> Result<TowerScalar, ScalarParseError> {
        let v = parse_scalar(src, &PERMISSIVE.with(|t| t.clone()))?;
        Ok(v)
    }
}

thread_local! {
    static PERMISSIVE: FieldTower = FieldTower::new(GAUSSIAN, &[2, 3, 5, 7, 11, 13]).expect("primes are independent");
}
