//! Polynomials with rational coefficients and zero constant term.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::exactnum::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("polynomial syntax error at byte {position}: {message}")]
pub struct PolynomialError {
    pub position: usize,
    pub message: String,
}

fn err(position: usize, message: impl Into<String>) -> PolynomialError {
    PolynomialError {
        position,
        message: message.into(),
    }
}

/// `a_1 x + a_2 x^2 + ... + a_d x^d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    /// `coefficients[j - 1] = a_j`; no trailing zeros.
    coefficients: Vec<Rational>,
}

impl Polynomial {
    /// Builds from `[a_1, ..., a_d]`.
    pub fn new(mut coefficients: Vec<Rational>) -> Self {
        while coefficients.last().is_some_and(Rational::is_zero) {
            coefficients.pop();
        }
        Polynomial { coefficients }
    }

    pub fn monomial(coefficient: Rational, degree: usize) -> Self {
        assert!(degree >= 1, "constant terms are not allowed");
        let mut c = vec![Rational::zero(); degree];
        c[degree - 1] = coefficient;
        Polynomial::new(c)
    }

    /// Largest `j` with `a_j != 0`; 0 for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.coefficients.len()
    }

    /// `a_j` for `j >= 1`, zero past the degree.
    pub fn coefficient(&self, j: usize) -> Rational {
        assert!(j >= 1);
        self.coefficients.get(j - 1).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        // Horner on a_1 + a_2 x + ..., then times x
        let inner = self
            .coefficients
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, a| acc * x + a);
        inner * x
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (idx, a) in self.coefficients.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            let j = idx + 1;
            let mag = a.abs();
            if first {
                if a.is_negative() {
                    f.write_str("-")?;
                }
            } else if a.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            first = false;
            if mag != Rational::one() {
                write!(f, "{mag}*")?;
            }
            f.write_str("x")?;
            if j > 1 {
                write!(f, "^{j}")?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

struct Lexer<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Lexer<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Option<&str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii digits"))
    }

    /// `digits ( "/" digits )?`
    fn rational(&mut self) -> Result<Option<Rational>, PolynomialError> {
        let at = self.pos;
        let Some(n) = self.digits().map(str::to_string) else {
            return Ok(None);
        };
        if self.eat(b'/') {
            let Some(d) = self.digits().map(str::to_string) else {
                return Err(err(self.pos, "expected a denominator"));
            };
            let text = format!("{n}/{d}");
            return text
                .parse()
                .map(Some)
                .map_err(|_| err(at, format!("bad coefficient {text}")));
        }
        Ok(Some(n.parse().map_err(|_| err(at, "bad coefficient"))?))
    }
}

impl FromStr for Polynomial {
    type Err = PolynomialError;

    /// Parses sums of terms `c*x^e`, `c x^e`, `x^e`, `c*x`, `x` with
    /// rational `c` and `e >= 1`. The lone term `0` denotes the zero
    /// polynomial; any other constant term is rejected.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut lx = Lexer {
            bytes: s.as_bytes(),
            pos: 0,
        };
        if lx.peek().is_none() {
            return Err(err(0, "empty polynomial"));
        }
        let mut coefficients: Vec<Rational> = Vec::new();
        let mut first = true;
        loop {
            let mut negative = false;
            match lx.peek() {
                Some(b'+') if !first => lx.pos += 1,
                Some(b'-') => {
                    lx.pos += 1;
                    negative = true;
                }
                Some(_) if first => {}
                Some(_) => return Err(err(lx.pos, "expected `+` or `-`")),
                None => break,
            }
            first = false;
            lx.skip_ws();
            let term_at = lx.pos;
            let coefficient = lx.rational()?;
            let has_star = lx.eat(b'*');
            let has_x = lx.eat(b'x');
            if has_star && !has_x {
                return Err(err(lx.pos, "expected `x` after `*`"));
            }
            if !has_x {
                match coefficient {
                    Some(c) if c.is_zero() && coefficients.is_empty() && lx.peek().is_none() => {
                        return Ok(Polynomial::new(Vec::new()));
                    }
                    Some(_) => return Err(err(term_at, "constant terms are not allowed")),
                    None => return Err(err(lx.pos, "expected a term")),
                }
            }
            let exponent = if lx.eat(b'^') {
                let at = lx.pos;
                let e: usize = lx
                    .digits()
                    .ok_or_else(|| err(at, "expected an exponent"))?
                    .parse()
                    .map_err(|_| err(at, "exponent too large"))?;
                if e == 0 {
                    return Err(err(at, "constant terms are not allowed"));
                }
                e
            } else {
                1
            };
            let mut c = coefficient.unwrap_or_else(Rational::one);
            if negative {
                c = -c;
            }
            if coefficients.len() < exponent {
                coefficients.resize(exponent, Rational::zero());
            }
            coefficients[exponent - 1] = &coefficients[exponent - 1] + &c;
        }
        Ok(Polynomial::new(coefficients))
    }
}

/// Parses a comma-separated list of polynomials.
pub fn parse_polynomials(text: &str) -> Result<Vec<Polynomial>, PolynomialError> {
    let mut out = Vec::new();
    let mut offset = 0;
    for piece in text.split(',') {
        out.push(piece.parse::<Polynomial>().map_err(|e| PolynomialError {
            position: e.position + offset,
            message: e.message,
        })?);
        offset += piece.len() + 1;
    }
    Ok(out)
}
