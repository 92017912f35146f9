//! Recursive-descent parser for the polynomial input language.
//!
//! ```text
//! expr     := ['+'|'-'] term (('+'|'-') term)*
//! term     := factor ('*' factor)*
//! factor   := atom ('^' int)?
//! atom     := rational | var | '(' expr ')'
//! var      := 'x' index | 'x' index '(' index ')' | 'u' '[' index ',' index ']'
//! rational := int ('/' posint)?
//! ```
//!
//! Whitespace is insignificant. `x3(2)` is the jet variable `x_3^(2)` and
//! `u[3,2]` the log jet variable `u_{3,2}`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use super::{JetMode, JetMonomial, JetPoly, Rational, RingDescriptor};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {pos}: expected {expected}")]
    Syntax { pos: usize, expected: String },
    #[error("exponent error at {pos}: {message}")]
    Exponent { pos: usize, message: String },
    #[error("unknown variable at {pos}: {message}")]
    Variable { pos: usize, message: String },
}

pub fn parse_poly(text: &str, ring: RingDescriptor) -> Result<JetPoly, ParseError> {
    let mut parser = Parser {
        chars: text.chars().collect(),
        pos: 0,
        ring,
    };
    let p = parser.expr()?;
    parser.skip_ws();
    if parser.pos < parser.chars.len() {
        return Err(parser.expected("'+', '-', '*' or end of input"));
    }
    Ok(p)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    ring: RingDescriptor,
}

impl Parser {
    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.expected(&format!("'{c}'")))
        }
    }

    fn expected(&self, what: &str) -> ParseError {
        ParseError::Syntax {
            pos: self.pos,
            expected: what.to_string(),
        }
    }

    fn expr(&mut self) -> Result<JetPoly, ParseError> {
        let negate = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        let mut acc = self.term()?;
        if negate {
            acc = -acc;
        }
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

    fn term(&mut self) -> Result<JetPoly, ParseError> {
        let mut acc = self.factor()?;
        while self.eat('*') {
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<JetPoly, ParseError> {
        let atom_pos = {
            self.skip_ws();
            self.pos
        };
        let atom = self.atom()?;
        if !self.eat('^') {
            return Ok(atom);
        }
        let exp_pos = {
            self.skip_ws();
            self.pos
        };
        let negative = self.eat('-');
        let magnitude = self.digits()?;
        let e: u32 = magnitude.try_into().map_err(|_| ParseError::Exponent {
            pos: exp_pos,
            message: "exponent too large".into(),
        })?;
        if !negative {
            return Ok(atom.pow(e));
        }
        invert_monomial(&atom)
            .map(|inv| inv.pow(e))
            .ok_or_else(|| ParseError::Exponent {
                pos: atom_pos,
                message: if atom.len() == 1 && !atom.is_base() {
                    "negative exponent on a jet variable".into()
                } else {
                    "negative exponent on something other than a monomial in base variables".into()
                },
            })
    }

    fn atom(&mut self) -> Result<JetPoly, ParseError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(inner)
            }
            Some('x') => {
                let start = self.pos;
                self.pos += 1;
                let i = self.index()?;
                self.check_base_index(i, start)?;
                if self.eat('(') {
                    let j = self.index()?;
                    self.expect(')')?;
                    if self.ring.mode != JetMode::Ordinary && j > 0 {
                        return Err(ParseError::Variable {
                            pos: start,
                            message: format!("x{i}({j}) is not a variable of a log ring; use u[{i},{j}]"),
                        });
                    }
                    if j > self.ring.m {
                        return Err(ParseError::Variable {
                            pos: start,
                            message: format!("jet order {j} exceeds ring order {}", self.ring.m),
                        });
                    }
                    Ok(if j == 0 {
                        JetPoly::var(self.ring, i)
                    } else {
                        JetPoly::jet_var(self.ring, i, j)
                    })
                } else {
                    Ok(JetPoly::var(self.ring, i))
                }
            }
            Some('u') => {
                let start = self.pos;
                self.pos += 1;
                self.expect('[')?;
                let i = self.index()?;
                self.expect(',')?;
                let j = self.index()?;
                self.expect(']')?;
                if self.ring.mode != JetMode::Log {
                    return Err(ParseError::Variable {
                        pos: start,
                        message: format!("u[{i},{j}] is only a variable of a log ring"),
                    });
                }
                self.check_base_index(i, start)?;
                if j == 0 || j > self.ring.m {
                    return Err(ParseError::Variable {
                        pos: start,
                        message: format!("jet order {j} outside 1..={}", self.ring.m),
                    });
                }
                Ok(JetPoly::jet_var(self.ring, i, j))
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.digits_big()?;
                let value = if self.eat('/') {
                    let den_pos = self.pos;
                    let den = self.digits_big()?;
                    if den.is_zero() {
                        return Err(ParseError::Syntax {
                            pos: den_pos,
                            expected: "a positive denominator".into(),
                        });
                    }
                    Rational::new(num, den)
                } else {
                    Rational::from_integer(num)
                };
                Ok(JetPoly::constant(self.ring, value))
            }
            _ => Err(self.expected("a number, variable or '('")),
        }
    }

    fn check_base_index(&self, i: usize, pos: usize) -> Result<(), ParseError> {
        if i == 0 || i > self.ring.n {
            return Err(ParseError::Variable {
                pos,
                message: format!("variable index {i} outside 1..={}", self.ring.n),
            });
        }
        Ok(())
    }

    fn digits_span(&mut self) -> Result<String, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.expected("digits"));
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn digits(&mut self) -> Result<u64, ParseError> {
        let pos = self.pos;
        self.digits_span()?.parse().map_err(|_| ParseError::Syntax {
            pos,
            expected: "a smaller integer".into(),
        })
    }

    fn digits_big(&mut self) -> Result<BigInt, ParseError> {
        Ok(self.digits_span()?.parse().expect("ascii digits"))
    }

    fn index(&mut self) -> Result<usize, ParseError> {
        let pos = self.pos;
        usize::try_from(self.digits()?).map_err(|_| ParseError::Syntax {
            pos,
            expected: "a smaller index".into(),
        })
    }
}

/// Inverse of a single term whose monomial involves base variables only.
fn invert_monomial(p: &JetPoly) -> Option<JetPoly> {
    if p.len() != 1 || !p.is_base() {
        return None;
    }
    let (m, c) = p.terms().next()?;
    let base: Vec<i32> = m.base_exponents().iter().map(|e| -e).collect();
    let mono = JetMonomial::from_parts(base, m.jet_exponents().to_vec());
    Some(JetPoly::term(p.ring(), Rational::one() / c, mono))
}
