//! Deterministic finite colorings of the positive rationals.
//!
//! Grammar (whitespace is not allowed anywhere):
//!
//! ```text
//! coloring  := factor ( "*" factor )*
//! factor    := "constant:" color
//!            | "modsum:" r
//!            | "modnum:" r
//!            | "threshold:" rational
//!            | "interval:" r ":" rational ( "," rational )*
//! ```
//!
//! A product `f1*f2*...` is the common refinement of its factors: with
//! factor colors `c_i` out of `r_i`, the combined color is the mixed-radix
//! number `1 + sum (c_i - 1) * r_{i+1} * ... * r_m`, so the refinement has
//! `r_1 * ... * r_m` colors.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::exactnum::Rational;

/// A color index in `{1, ..., r}`.
pub type Color = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColoringError {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("parameter out of range: {0}")]
    Range(String),
    #[error("coloring is only defined on positive rationals, got {0}")]
    NonPositive(Rational),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColoringKind {
    /// Every point gets color `c`; the palette is `{1..c}`.
    Constant(Color),
    /// `((numerator + denominator) mod r) + 1`.
    ModSum(Color),
    /// `(numerator mod r) + 1`.
    ModNum(Color),
    /// 1 below the cut, 2 at or above it.
    Threshold(Rational),
    /// `1 + #{ q_i <= x }` for strictly increasing cuts in `(0, 1)`.
    Interval(Vec<Rational>),
}

impl ColoringKind {
    fn colors(&self) -> Color {
        match self {
            ColoringKind::Constant(c) => *c,
            ColoringKind::ModSum(r) | ColoringKind::ModNum(r) => *r,
            ColoringKind::Threshold(_) => 2,
            ColoringKind::Interval(cuts) => cuts.len() as Color + 1,
        }
    }

    fn color_of(&self, x: &Rational) -> Color {
        let residue = |n: BigInt, r: Color| -> Color {
            (n % BigInt::from(r))
                .to_u32()
                .expect("residue of a positive value fits in u32")
                + 1
        };
        match self {
            ColoringKind::Constant(c) => *c,
            ColoringKind::ModSum(r) => residue(x.numer() + x.denom(), *r),
            ColoringKind::ModNum(r) => residue(x.numer().clone(), *r),
            ColoringKind::Threshold(cut) => {
                if x < cut {
                    1
                } else {
                    2
                }
            }
            ColoringKind::Interval(cuts) => 1 + cuts.iter().filter(|q| *q <= x).count() as Color,
        }
    }
}

impl fmt::Display for ColoringKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColoringKind::Constant(c) => write!(f, "constant:{c}"),
            ColoringKind::ModSum(r) => write!(f, "modsum:{r}"),
            ColoringKind::ModNum(r) => write!(f, "modnum:{r}"),
            ColoringKind::Threshold(q) => write!(f, "threshold:{q}"),
            ColoringKind::Interval(cuts) => {
                write!(f, "interval:{}:", cuts.len() + 1)?;
                for (i, q) in cuts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{q}")?;
                }
                Ok(())
            }
        }
    }
}

/// A validated coloring: one factor, or the common refinement of several.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoringSpec {
    factors: Vec<ColoringKind>,
    colors: Color,
}

impl ColoringSpec {
    pub fn single(kind: ColoringKind) -> Result<Self, ColoringError> {
        Self::refine(vec![kind])
    }

    pub fn refine(factors: Vec<ColoringKind>) -> Result<Self, ColoringError> {
        if factors.is_empty() {
            return Err(ColoringError::Range("empty refinement".into()));
        }
        let mut colors: Color = 1;
        for kind in &factors {
            validate(kind)?;
            colors = colors
                .checked_mul(kind.colors())
                .ok_or_else(|| ColoringError::Range("too many colors".into()))?;
        }
        Ok(ColoringSpec { factors, colors })
    }

    pub fn constant(color: Color) -> Self {
        Self::single(ColoringKind::Constant(color)).expect("constant color must be >= 1")
    }

    /// The palette size `r`.
    pub fn colors(&self) -> Color {
        self.colors
    }

    pub fn factors(&self) -> &[ColoringKind] {
        &self.factors
    }

    pub fn color_of(&self, x: &Rational) -> Result<Color, ColoringError> {
        if !x.is_positive() {
            return Err(ColoringError::NonPositive(x.clone()));
        }
        Ok(self
            .factors
            .iter()
            .fold(0, |acc, kind| acc * kind.colors() + (kind.color_of(x) - 1))
            + 1)
    }
}

fn validate(kind: &ColoringKind) -> Result<(), ColoringError> {
    let zero = Rational::zero();
    let one = Rational::one();
    match kind {
        ColoringKind::Constant(0) | ColoringKind::ModSum(0) | ColoringKind::ModNum(0) => {
            Err(ColoringError::Range("number of colors must be at least 1".into()))
        }
        ColoringKind::Threshold(q) if !q.in_open_interval(&zero, &one) => {
            Err(ColoringError::Range(format!("threshold {q} must lie in (0, 1)")))
        }
        ColoringKind::Interval(cuts) => {
            if let Some(q) = cuts.iter().find(|q| !q.in_open_interval(&zero, &one)) {
                return Err(ColoringError::Range(format!("cut {q} must lie in (0, 1)")));
            }
            if cuts.windows(2).any(|w| w[0] >= w[1]) {
                return Err(ColoringError::Range("interval cuts must be strictly increasing".into()));
            }
            Ok(())
        }
        _ => Ok(()),
    }
}

impl fmt::Display for ColoringSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, kind) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            write!(f, "{kind}")?;
        }
        Ok(())
    }
}

impl FromStr for ColoringSpec {
    type Err = ColoringError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_coloring(s)
    }
}

fn syntax(position: usize, message: impl Into<String>) -> ColoringError {
    ColoringError::Syntax {
        position,
        message: message.into(),
    }
}

fn parse_count(text: &str, at: usize) -> Result<Color, ColoringError> {
    if text.is_empty() || !text.bytes().all(|b| b.is_ascii_digit()) {
        return Err(syntax(at, format!("expected a positive integer, found {text:?}")));
    }
    text.parse()
        .map_err(|_| ColoringError::Range(format!("integer {text} is too large")))
}

fn parse_rational(text: &str, at: usize) -> Result<Rational, ColoringError> {
    text.parse()
        .map_err(|_| syntax(at, format!("expected a rational, found {text:?}")))
}

fn parse_factor(text: &str, offset: usize) -> Result<ColoringKind, ColoringError> {
    let Some((name, rest)) = text.split_once(':') else {
        return Err(syntax(offset, format!("expected `<kind>:<params>`, found {text:?}")));
    };
    let at = offset + name.len() + 1;
    let kind = match name {
        "constant" => ColoringKind::Constant(parse_count(rest, at)?),
        "modsum" => ColoringKind::ModSum(parse_count(rest, at)?),
        "modnum" => ColoringKind::ModNum(parse_count(rest, at)?),
        "threshold" => ColoringKind::Threshold(parse_rational(rest, at)?),
        "interval" => {
            let Some((r, cuts)) = rest.split_once(':') else {
                return Err(syntax(at, "expected `interval:<r>:<q1,...>`"));
            };
            let r = parse_count(r, at)?;
            let mut pos = at + rest.len() - cuts.len();
            let mut parsed = Vec::new();
            for piece in cuts.split(',') {
                parsed.push(parse_rational(piece, pos)?);
                pos += piece.len() + 1;
            }
            if parsed.len() as u64 + 1 != r as u64 {
                return Err(ColoringError::Range(format!(
                    "interval:{r} needs {} cut points, found {}",
                    r.saturating_sub(1),
                    parsed.len()
                )));
            }
            ColoringKind::Interval(parsed)
        }
        other => return Err(syntax(offset, format!("unknown coloring kind {other:?}"))),
    };
    Ok(kind)
}

/// Parses a coloring in the grammar documented at module level.
pub fn parse_coloring(text: &str) -> Result<ColoringSpec, ColoringError> {
    if let Some(pos) = text.find(|c: char| c.is_whitespace()) {
        return Err(syntax(pos, "whitespace is not allowed"));
    }
    let mut factors = Vec::new();
    let mut offset = 0;
    for piece in text.split('*') {
        factors.push(parse_factor(piece, offset)?);
        offset += piece.len() + 1;
    }
    ColoringSpec::refine(factors)
}
