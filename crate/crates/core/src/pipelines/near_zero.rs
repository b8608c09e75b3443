//! The three near-zero pipelines.
//!
//! Each pipeline picks its scaling parameters as the smallest integers
//! satisfying the required strict inequalities, runs a finite searcher on
//! the pulled-back coloring, decodes the witness into `(0, ε)` and replays
//! the decoded configuration against the coloring before returning it.
//! Searchers are pluggable so the replay gate can be exercised with
//! searchers that lie.

use std::ops::RangeInclusive;
use std::time::Instant;

use super::encode::{extract_geo_params, f_value, smallest_above, SigmaEncoder};
use super::{check_epsilon, replay_points, ApWitness, GeoWitness, PipelineError, PolyWitness, Polynomial};
use crate::coloring::{Color, ColoringSpec};
use crate::engine::{run_search, ColorCache, ExhaustReason, Exhausted, SearchBudget, SearchOutcome, Staged};
use crate::exactnum::Rational;
use crate::phj::{find_phj_witness, Alphabet, PhjError, PhjPoint, PhjSearchOptions, PhjWitness};
use crate::words::{find_ap_in_interval, find_bm_witness, ArithmeticProgressions, BmWitness, Word};

pub trait ApSearcher: Sync {
    /// Smallest `(a, d)` with a monochromatic `{a, ..., a + kd} ⊆ [1, n]`
    /// where `colors[i]` colors `i + 1`.
    fn find_ap(&self, colors: &[Color], k: usize) -> Option<(usize, usize)>;
}

pub trait BmSearcher {
    fn find_bm(
        &self,
        coloring: &(dyn Fn(&Word) -> Color + Sync),
        k: u8,
        n_range: RangeInclusive<usize>,
        budget: &SearchBudget,
    ) -> SearchOutcome<BmWitness>;
}

pub trait PhjSearcher {
    fn find_phj(
        &self,
        coloring: &(dyn Fn(&PhjPoint) -> Color + Sync),
        alphabet: &Alphabet,
        d: usize,
        n: usize,
        budget: &SearchBudget,
    ) -> Result<SearchOutcome<PhjWitness>, PhjError>;
}

/// The searchers of this crate.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExhaustiveSearch {
    pub phj: PhjSearchOptions,
}

impl ApSearcher for ExhaustiveSearch {
    fn find_ap(&self, colors: &[Color], k: usize) -> Option<(usize, usize)> {
        find_ap_in_interval(colors, k)
    }
}

impl BmSearcher for ExhaustiveSearch {
    fn find_bm(
        &self,
        coloring: &(dyn Fn(&Word) -> Color + Sync),
        k: u8,
        n_range: RangeInclusive<usize>,
        budget: &SearchBudget,
    ) -> SearchOutcome<BmWitness> {
        find_bm_witness(coloring, k, n_range, &ArithmeticProgressions, budget)
    }
}

impl PhjSearcher for ExhaustiveSearch {
    fn find_phj(
        &self,
        coloring: &(dyn Fn(&PhjPoint) -> Color + Sync),
        alphabet: &Alphabet,
        d: usize,
        n: usize,
        budget: &SearchBudget,
    ) -> Result<SearchOutcome<PhjWitness>, PhjError> {
        find_phj_witness(coloring, alphabet, d, n..=n, budget, self.phj)
    }
}

fn color_cached(cache: &ColorCache, spec: &ColoringSpec, x: &Rational) -> Color {
    cache.get_or_insert_with(x, || {
        spec.color_of(x).expect("encoded points are positive by construction")
    })
}

fn unverified<T>(failure: super::ReplayFailure) -> Result<T, PipelineError> {
    Err(PipelineError::Unverified(failure))
}

struct Depth(usize);

impl Staged for Depth {
    fn stage(&self) -> usize {
        self.0
    }
}

/// `M` for interval length `n`: the smallest integer with `n/M < ε`.
fn scale_for(n: usize, epsilon: &Rational) -> Result<u64, PipelineError> {
    smallest_above(&Rational::from_integer(n as u64).checked_div(epsilon)?)
}

pub fn ap_near_zero(
    spec: &ColoringSpec,
    k: usize,
    epsilon: &Rational,
    budget: &SearchBudget,
) -> Result<SearchOutcome<ApWitness>, PipelineError> {
    ap_near_zero_with(&ExhaustiveSearch::default(), spec, k, epsilon, budget)
}

/// For `n = 1, 2, ...`: colors `t ↦ φ(t/M)` on `[1, n]` with the smallest
/// `M > n/ε` and looks for a monochromatic `(k+1)`-term progression
/// `(a, d)`, giving the witness `(a/M, d/M)`.
pub fn ap_near_zero_with(
    searcher: &dyn ApSearcher,
    spec: &ColoringSpec,
    k: usize,
    epsilon: &Rational,
    budget: &SearchBudget,
) -> Result<SearchOutcome<ApWitness>, PipelineError> {
    check_epsilon(epsilon)?;
    scale_for(budget.max_n, epsilon)?;
    let accept = |n: &Depth| {
        let m = scale_for(n.0, epsilon).expect("bounded by the max_n check");
        let colors: Vec<Color> = (1..=n.0 as u64)
            .map(|t| {
                let x = Rational::new(t, m).expect("M is positive");
                spec.color_of(&x).expect("t/M is positive")
            })
            .collect();
        searcher.find_ap(&colors, k).map(|(a, d)| (m, a, d))
    };
    let outcome = run_search((1..).map(Depth), accept, budget);
    let SearchOutcome::Found {
        witness: (_, (m, a, d)),
        nodes_visited,
    } = outcome
    else {
        return Ok(outcome.map(|_| unreachable!()));
    };
    let a = Rational::new(a as u64, m)?;
    let d = Rational::new(d as u64, m)?;
    let points = super::ap_points(&a, &d, k);
    match replay_points(&points, spec, epsilon) {
        Ok(color) => Ok(SearchOutcome::Found {
            witness: ApWitness { a, d, k, color },
            nodes_visited,
        }),
        Err(failure) => unverified(failure),
    }
}

/// A verified geo-arithmetic witness together with the hypercube structure
/// it was decoded from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeoRun {
    pub witness: GeoWitness,
    pub bm: BmWitness,
    pub p: u64,
    pub m: u64,
}

pub fn geo_arith_near_zero(
    spec: &ColoringSpec,
    k: usize,
    epsilon: &Rational,
    budget: &SearchBudget,
) -> Result<SearchOutcome<GeoRun>, PipelineError> {
    geo_arith_near_zero_with(&ExhaustiveSearch::default(), spec, k, epsilon, budget)
}

/// Colors `{0..k}^N` by `φ ∘ f` with `P` the smallest integer with
/// `1/P < ε` and `M` the smallest with `N/M < ε`, finds a monochromatic
/// block structure over `(k+1)`-term progressions, and decodes it into
/// `(B, A, D)`.
pub fn geo_arith_near_zero_with(
    searcher: &dyn BmSearcher,
    spec: &ColoringSpec,
    k: usize,
    epsilon: &Rational,
    budget: &SearchBudget,
) -> Result<SearchOutcome<GeoRun>, PipelineError> {
    check_epsilon(epsilon)?;
    let k8 = u8::try_from(k).map_err(|_| PipelineError::InvalidParameters(format!("k = {k} is too large")))?;
    let p = smallest_above(&epsilon.recip()?)?;
    let scales: Vec<u64> = (0..=budget.max_n)
        .map(|n| scale_for(n, epsilon))
        .collect::<Result<_, _>>()?;
    let cache = ColorCache::default();
    let psi = |w: &Word| color_cached(&cache, spec, &f_value(w, p, scales[w.len()]));
    let outcome = searcher.find_bm(&psi, k8, 1..=budget.max_n, budget);
    let SearchOutcome::Found {
        witness: bm,
        nodes_visited,
    } = outcome
    else {
        return Ok(outcome.map(|_| unreachable!()));
    };
    if bm.k() != k8 {
        return Err(PipelineError::InvalidParameters(format!(
            "searcher returned words over {{0..{}}}, expected {{0..{k}}}",
            bm.k()
        )));
    }
    let m = scale_for(bm.n(), epsilon)?;
    let params = extract_geo_params(&bm, p, m)?;
    let points = super::geo_points(&params.b, &params.a, &params.d, k);
    match replay_points(&points, spec, epsilon) {
        Ok(color) => Ok(SearchOutcome::Found {
            witness: GeoRun {
                witness: GeoWitness {
                    b: params.b,
                    a: params.a,
                    d: params.d,
                    k,
                    color,
                },
                bm,
                p,
                m,
            },
            nodes_visited,
        }),
        Err(failure) => unverified(failure),
    }
}

/// The parameters the polynomial pipeline derives for one `N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyParameters {
    /// Largest degree (at least 1).
    pub d: usize,
    /// Largest coefficient magnitude.
    pub m: Rational,
    /// Smallest positive integer with `m · Σ_{j<=d} N^j / b < ε/4`.
    pub b: u64,
    /// `{a^i_j / b^j} ∪ {0}`.
    pub alphabet: Alphabet,
    /// `3ε/8`.
    pub r: Rational,
}

pub fn poly_parameters(polys: &[Polynomial], epsilon: &Rational, n: usize) -> Result<PolyParameters, PipelineError> {
    check_epsilon(epsilon)?;
    if polys.is_empty() {
        return Err(PipelineError::NoPolynomials);
    }
    let d = polys.iter().map(Polynomial::degree).max().unwrap_or(0).max(1);
    let m = polys
        .iter()
        .flat_map(|p| p.coefficients().iter().map(Rational::abs))
        .max()
        .unwrap_or_else(Rational::zero);
    let slots: u64 = (1..=d as u32)
        .map(|j| (n as u64).checked_pow(j))
        .sum::<Option<u64>>()
        .ok_or_else(|| PipelineError::InvalidParameters("N^d overflows".into()))?;
    let quarter = epsilon * &Rational::new(1, 4)?;
    let b = smallest_above(&(&m * &Rational::from_integer(slots)).checked_div(&quarter)?)?;
    let b_q = Rational::from_integer(b);
    let mut entries = vec![Rational::zero()];
    for p in polys {
        for (idx, a) in p.coefficients().iter().enumerate() {
            entries.push(a.checked_div(&b_q.pow(idx as u32 + 1))?);
        }
    }
    let alphabet = Alphabet::new(entries)?;
    let r = epsilon * &Rational::new(3, 8)?;
    Ok(PolyParameters { d, m, b, alphabet, r })
}

/// A verified polynomial witness with the point-space structure it was
/// decoded from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyRun {
    pub witness: PolyWitness,
    pub phj: PhjWitness,
    pub r: Rational,
    pub b: u64,
}

pub fn poly_vdw_near_zero(
    polys: &[Polynomial],
    spec: &ColoringSpec,
    epsilon: &Rational,
    budget: &SearchBudget,
) -> Result<SearchOutcome<PolyRun>, PipelineError> {
    poly_vdw_near_zero_with(&ExhaustiveSearch::default(), polys, spec, epsilon, budget)
}

/// For `N = 1, 2, ...`: derives `(d, m, b, A, r)`, colors `Q(N)` by
/// `φ ∘ σ` and searches for a monochromatic `⊕` structure `(u, γ)`. With
/// `c = |γ|` and `s` the sum of `u` off `γ^j`, the witness is
/// `a = r + s`, `α = c/b`.
pub fn poly_vdw_near_zero_with(
    searcher: &dyn PhjSearcher,
    polys: &[Polynomial],
    spec: &ColoringSpec,
    epsilon: &Rational,
    budget: &SearchBudget,
) -> Result<SearchOutcome<PolyRun>, PipelineError> {
    check_epsilon(epsilon)?;
    if polys.is_empty() {
        return Err(PipelineError::NoPolynomials);
    }
    let started = Instant::now();
    let cache = ColorCache::default();
    let mut used: u64 = 0;
    let mut reached = 0;
    for n in 1..=budget.max_n {
        let params = poly_parameters(polys, epsilon, n)?;
        let encoder = SigmaEncoder::new(&params.alphabet, params.d, n, params.r.clone(), epsilon)?;
        let coloring = |u: &PhjPoint| {
            let x = encoder.encode(u).expect("searched points live in the encoder's space");
            color_cached(&cache, spec, &x)
        };
        let mut step = budget.clone().with_max_n(n);
        step.max_nodes = budget.max_nodes - used;
        if let Some(limit) = budget.wall_time {
            step.wall_time = Some(limit.saturating_sub(started.elapsed()));
        }
        match searcher.find_phj(&coloring, &params.alphabet, params.d, n, &step)? {
            SearchOutcome::Found {
                witness: phj,
                nodes_visited,
            } => {
                let witness = decode_poly(&phj, &params, n, polys)?;
                return match replay_points(&witness.points(), spec, epsilon) {
                    Ok(color) => Ok(SearchOutcome::Found {
                        witness: PolyRun {
                            witness: PolyWitness { color, ..witness },
                            phj,
                            r: params.r,
                            b: params.b,
                        },
                        nodes_visited: used + nodes_visited,
                    }),
                    Err(failure) => unverified(failure),
                };
            }
            SearchOutcome::Exhausted(e) => {
                used += e.nodes_visited;
                reached = reached.max(e.max_n_reached);
                if e.reason != ExhaustReason::Depth {
                    return Ok(SearchOutcome::Exhausted(Exhausted {
                        nodes_visited: used,
                        max_n_reached: reached,
                        reason: e.reason,
                    }));
                }
            }
        }
    }
    Ok(SearchOutcome::Exhausted(Exhausted {
        nodes_visited: used,
        max_n_reached: reached,
        reason: ExhaustReason::Depth,
    }))
}

fn decode_poly(
    phj: &PhjWitness,
    params: &PolyParameters,
    n: usize,
    polys: &[Polynomial],
) -> Result<PolyWitness, PipelineError> {
    phj.validate()?;
    if phj.base.n() != n || phj.base.degree() != params.d || phj.alphabet != params.alphabet {
        return Err(PipelineError::InvalidParameters(
            "searcher answered for a different point space".into(),
        ));
    }
    // the base point is 0 on every γ^j, so its entry sum is the off-γ sum
    let s = phj.base.entry_sum();
    let c = phj.gamma_set().len() as u64;
    Ok(PolyWitness {
        a: &params.r + &s,
        alpha: Rational::new(c, params.b)?,
        polys: polys.to_vec(),
        color: phj.color,
    })
}
