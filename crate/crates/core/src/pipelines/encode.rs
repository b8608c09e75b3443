//! Exact encodings from the hypercube spaces into `(0, ε)`.

use num_bigint::BigInt;
use num_traits::{One, Pow};

use super::{check_epsilon, PipelineError};
use crate::exactnum::Rational;
use crate::phj::{Alphabet, PhjPoint};
use crate::words::{substitute, BmWitness, Word};

/// Smallest positive integer strictly greater than `x`.
pub fn smallest_above(x: &Rational) -> Result<u64, PipelineError> {
    let n = x.next_integer_above().max(BigInt::one());
    Rational::from_integer(n).to_u64().map_err(PipelineError::from)
}

/// `(1/P) · ∏_t (t/M)^{u_t}` without parameter checks.
pub(crate) fn f_value(word: &Word, p: u64, m: u64) -> Rational {
    let mut numer = BigInt::one();
    let mut total: u32 = 0;
    for (idx, &u) in word.letters().iter().enumerate() {
        if u > 0 {
            numer *= Pow::pow(BigInt::from(idx as u64 + 1), u as u32);
            total += u as u32;
        }
    }
    let denom = BigInt::from(p) * Pow::pow(BigInt::from(m), total);
    Rational::new(numer, denom).expect("P and M are positive")
}

fn check_f_parameters(n: usize, p: u64, m: u64, epsilon: &Rational) -> Result<(), PipelineError> {
    check_epsilon(epsilon)?;
    if p == 0 || m == 0 {
        return Err(PipelineError::InvalidParameters("P and M must be positive".into()));
    }
    let inv_p = Rational::new(1, p)?;
    let ratio = Rational::new(n as u64, m)?;
    if &inv_p >= epsilon {
        return Err(PipelineError::InvalidParameters(format!(
            "1/P = {inv_p} is not below {epsilon}"
        )));
    }
    if &ratio >= epsilon {
        return Err(PipelineError::InvalidParameters(format!(
            "N/M = {ratio} is not below {epsilon}"
        )));
    }
    Ok(())
}

/// `f(α) = (1/P) · ∏_{t ∈ [N]} (t/M)^{α(t)}`; requires `1/P < ε` and
/// `N/M < ε`, which puts every value in `(0, ε)`.
pub fn f_encode(word: &Word, p: u64, m: u64, epsilon: &Rational) -> Result<Rational, PipelineError> {
    check_f_parameters(word.len(), p, m, epsilon)?;
    Ok(f_value(word, p, m))
}

/// `α_{j,q} = w^{{a_1 + j b_1, a_2, ..., a_l}}(q)`.
pub fn geo_slice_word(wit: &BmWitness, j: usize, q: u8) -> Result<Word, PipelineError> {
    let aps = progressions(wit)?;
    let mut positions = vec![aps[0].0 + j * aps[0].1];
    positions.extend(aps[1..].iter().map(|(a, _)| *a));
    Ok(substitute(&wit.word, &positions, q)?)
}

fn progressions(wit: &BmWitness) -> Result<Vec<(usize, usize)>, PipelineError> {
    wit.validate()?;
    wit.blocks
        .iter()
        .map(|b| {
            b.as_ap(wit.k()).map(|ap| (ap.start, ap.step)).ok_or_else(|| {
                PipelineError::InvalidParameters(format!("block {{{b}}} is not a {}-term progression", wit.k() + 1))
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeoParams {
    pub b: Rational,
    pub a: Rational,
    pub d: Rational,
}

/// `B = (1/P) ∏_{t ∈ C} (t/M)^{u_t}`, `A = (a_1/M) ∏_{i>=2} (a_i/M)` and
/// `D = (b_1/M) ∏_{i>=2} (a_i/M)`, so that `f(α_{j,q}) = B (A + jD)^q`.
pub fn extract_geo_params(wit: &BmWitness, p: u64, m: u64) -> Result<GeoParams, PipelineError> {
    if p == 0 || m == 0 {
        return Err(PipelineError::InvalidParameters("P and M must be positive".into()));
    }
    let aps = progressions(wit)?;
    let over_m = |t: usize| Rational::new(t as u64, m).expect("M is positive");
    // u_t = 0 on every block, so the product over C is the product over [N]
    let b = f_value(&wit.word, p, m);
    let tail: Rational = aps[1..].iter().map(|(a, _)| over_m(*a)).product();
    let a = over_m(aps[0].0) * &tail;
    let d = over_m(aps[0].1) * &tail;
    Ok(GeoParams { b, a, d })
}

/// `σ(u) = r + Σ_j Σ_ī u_{j,ī}`.
pub fn sigma_encode(u: &PhjPoint, r: &Rational) -> Rational {
    r + &u.entry_sum()
}

/// `σ` on a fixed `Q(N)`, built only when `ε/4 < r < ε/2` and
/// `max|A| · Σ_{j=1}^d N^j < ε/4`.
#[derive(Debug, Clone)]
pub struct SigmaEncoder {
    r: Rational,
    epsilon: Rational,
    alphabet: Alphabet,
    d: usize,
    n: usize,
}

impl SigmaEncoder {
    pub fn new(
        alphabet: &Alphabet,
        d: usize,
        n: usize,
        r: Rational,
        epsilon: &Rational,
    ) -> Result<Self, PipelineError> {
        check_epsilon(epsilon)?;
        let quarter = epsilon * &Rational::new(1, 4)?;
        let half = epsilon * &Rational::new(1, 2)?;
        if !r.in_open_interval(&quarter, &half) {
            return Err(PipelineError::InvalidParameters(format!(
                "r = {r} must lie in ({quarter}, {half})"
            )));
        }
        let slots: u64 = (1..=d as u32).map(|j| (n as u64).pow(j)).sum();
        let bound = alphabet.max_abs() * Rational::from_integer(slots);
        if bound >= quarter {
            return Err(PipelineError::InvalidParameters(format!(
                "entry bound {bound} is not below epsilon/4 = {quarter}"
            )));
        }
        Ok(SigmaEncoder {
            r,
            epsilon: epsilon.clone(),
            alphabet: alphabet.clone(),
            d,
            n,
        })
    }

    pub fn r(&self) -> &Rational {
        &self.r
    }

    pub fn epsilon(&self) -> &Rational {
        &self.epsilon
    }

    pub fn encode(&self, u: &PhjPoint) -> Result<Rational, PipelineError> {
        if u.degree() != self.d || u.n() != self.n {
            return Err(PipelineError::InvalidParameters(format!(
                "point lives in Q({}) of degree {}, encoder expects Q({}) of degree {}",
                u.n(),
                u.degree(),
                self.n,
                self.d
            )));
        }
        u.entries_in(&self.alphabet)?;
        Ok(sigma_encode(u, &self.r))
    }
}
