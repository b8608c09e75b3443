//! Near-zero reductions: hypercube witnesses are pushed into `(0, ε)`
//! through exact encodings and every resulting configuration is recolored
//! before it is returned.

mod direct;
mod encode;
mod near_zero;
mod polynomial;

use std::fmt;

use thiserror::Error;

use crate::coloring::{Color, ColoringError, ColoringSpec};
use crate::exactnum::{NumError, Rational};
use crate::phj::PhjError;
use crate::words::WordError;

pub use direct::direct_poly_witness;
pub use encode::{extract_geo_params, f_encode, geo_slice_word, sigma_encode, smallest_above, GeoParams, SigmaEncoder};
pub use near_zero::{
    ap_near_zero, ap_near_zero_with, geo_arith_near_zero, geo_arith_near_zero_with, poly_parameters,
    poly_vdw_near_zero, poly_vdw_near_zero_with, ApSearcher, BmSearcher, ExhaustiveSearch, GeoRun, PhjSearcher,
    PolyParameters, PolyRun,
};
pub use polynomial::{parse_polynomials, Polynomial, PolynomialError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PipelineError {
    #[error("epsilon must satisfy 0 < epsilon < 1, got {0}")]
    InvalidEpsilon(Rational),
    #[error("at least one polynomial is required")]
    NoPolynomials,
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("searcher returned a witness that does not verify: {0}")]
    Unverified(ReplayFailure),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Phj(#[from] PhjError),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error(transparent)]
    Num(#[from] NumError),
}

pub(crate) fn check_epsilon(epsilon: &Rational) -> Result<(), PipelineError> {
    if epsilon.in_open_interval(&Rational::zero(), &Rational::one()) {
        Ok(())
    } else {
        Err(PipelineError::InvalidEpsilon(epsilon.clone()))
    }
}

/// Why a configuration failed to replay.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReplayFailure {
    Empty,
    OutOfRange {
        index: usize,
        point: Rational,
    },
    ColorMismatch {
        index: usize,
        point: Rational,
        expected: Color,
        actual: Color,
    },
}

impl fmt::Display for ReplayFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReplayFailure::Empty => f.write_str("empty configuration"),
            ReplayFailure::OutOfRange { index, point } => {
                write!(f, "point #{index} = {point} is outside (0, epsilon)")
            }
            ReplayFailure::ColorMismatch {
                index,
                point,
                expected,
                actual,
            } => write!(f, "point #{index} = {point} has color {actual}, expected {expected}"),
        }
    }
}

/// Checks that every point lies in `(0, ε)` and that they share one color;
/// returns that color.
pub fn replay_points(points: &[Rational], spec: &ColoringSpec, epsilon: &Rational) -> Result<Color, ReplayFailure> {
    let zero = Rational::zero();
    let mut color = None;
    for (index, point) in points.iter().enumerate() {
        if !point.in_open_interval(&zero, epsilon) {
            return Err(ReplayFailure::OutOfRange {
                index,
                point: point.clone(),
            });
        }
        let actual = spec.color_of(point).expect("points in (0, epsilon) are positive");
        match color {
            None => color = Some(actual),
            Some(expected) if expected != actual => {
                return Err(ReplayFailure::ColorMismatch {
                    index,
                    point: point.clone(),
                    expected,
                    actual,
                })
            }
            Some(_) => {}
        }
    }
    color.ok_or(ReplayFailure::Empty)
}

pub(crate) fn dedup_in_order(points: impl IntoIterator<Item = Rational>) -> Vec<Rational> {
    let mut seen = std::collections::HashSet::new();
    points.into_iter().filter(|p| seen.insert(p.clone())).collect()
}

/// `{a, a + d, ..., a + kd}` with `a, d` in `(0, ε)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApWitness {
    pub a: Rational,
    pub d: Rational,
    pub k: usize,
    pub color: Color,
}

impl ApWitness {
    pub fn points(&self) -> Vec<Rational> {
        ap_points(&self.a, &self.d, self.k)
    }
}

pub fn ap_points(a: &Rational, d: &Rational, k: usize) -> Vec<Rational> {
    dedup_in_order((0..=k as i64).map(|i| a + &(d * &Rational::from(i))))
}

/// `{B (A + i D)^j : i, j in 0..=k}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeoWitness {
    pub b: Rational,
    pub a: Rational,
    pub d: Rational,
    pub k: usize,
    pub color: Color,
}

impl GeoWitness {
    pub fn points(&self) -> Vec<Rational> {
        geo_points(&self.b, &self.a, &self.d, self.k)
    }
}

/// Ordered by `i`, then `j`; repeated values are listed once.
pub fn geo_points(b: &Rational, a: &Rational, d: &Rational, k: usize) -> Vec<Rational> {
    let mut out = Vec::with_capacity((k + 1) * (k + 1));
    for i in 0..=k as i64 {
        let base = a + &(d * &Rational::from(i));
        for j in 0..=k as u32 {
            out.push(b * &base.pow(j));
        }
    }
    dedup_in_order(out)
}

/// `{a, a + P_1(α), ..., a + P_n(α)}` with `α != 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyWitness {
    pub a: Rational,
    pub alpha: Rational,
    pub polys: Vec<Polynomial>,
    pub color: Color,
}

impl PolyWitness {
    pub fn points(&self) -> Vec<Rational> {
        poly_points(&self.a, &self.alpha, &self.polys)
    }
}

pub fn poly_points(a: &Rational, alpha: &Rational, polys: &[Polynomial]) -> Vec<Rational> {
    dedup_in_order(std::iter::once(a.clone()).chain(polys.iter().map(|p| a + &p.eval(alpha))))
}
