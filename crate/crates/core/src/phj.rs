//! The polynomial Hales–Jewett point space
//! `Q(N) = A^N × A^{N×N} × ... × A^{N^d}`, the `⊕` substitution and its
//! searcher.
//!
//! A point holds one tensor per degree `j`, indexed by tuples in `[N]^j`
//! (1-indexed, lexicographic). Tensors of degree at most 2 are stored
//! densely; higher degrees are stored sparsely with an implicit 0.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::RangeInclusive;
use std::sync::Arc;

use thiserror::Error;

use crate::coloring::Color;
use crate::engine::{run_search, SearchBudget, SearchOutcome, Staged};
use crate::exactnum::Rational;

const DENSE_MAX_DEGREE: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PhjError {
    #[error("empty index set")]
    EmptyGamma,
    #[error("index {index} is outside [1, {n}]")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("expected {expected} substitution values, got {got}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("base point is nonzero on gamma^{degree} at {tuple:?}")]
    NonzeroOnGamma { degree: usize, tuple: Vec<usize> },
    #[error("the alphabet must contain 0")]
    AlphabetMissingZero,
    #[error("entry {0} is not in the alphabet")]
    NotInAlphabet(Rational),
    #[error("empty alphabet")]
    EmptyAlphabet,
}

/// A finite set of rationals. Zero sorts first; the remaining entries
/// follow the height order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    entries: Vec<Rational>,
}

impl Alphabet {
    pub fn new(mut entries: Vec<Rational>) -> Result<Self, PhjError> {
        if entries.is_empty() {
            return Err(PhjError::EmptyAlphabet);
        }
        entries.sort_by(|a, b| b.is_zero().cmp(&a.is_zero()).then_with(|| a.height_cmp(b)));
        entries.dedup();
        Ok(Alphabet { entries })
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.entries.contains(x)
    }

    pub fn contains_zero(&self) -> bool {
        self.entries.first().is_some_and(Rational::is_zero)
    }

    pub fn max_abs(&self) -> Rational {
        self.entries
            .iter()
            .map(Rational::abs)
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Tensor {
    Dense(Vec<Rational>),
    /// Only nonzero entries are stored.
    Sparse(BTreeMap<Vec<usize>, Rational>),
}

/// A point of `Q(N)` for degree `d = tensors.len()`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PhjPoint {
    n: usize,
    tensors: Vec<Tensor>,
}

fn flat_index(n: usize, tuple: &[usize]) -> usize {
    tuple.iter().fold(0, |acc, &i| acc * n + (i - 1))
}

fn unflatten(n: usize, j: usize, mut flat: usize) -> Vec<usize> {
    let mut tuple = vec![0; j];
    for slot in tuple.iter_mut().rev() {
        *slot = flat % n + 1;
        flat /= n;
    }
    tuple
}

/// All tuples in `set^j`, lexicographic.
pub fn tuples_over(set: &[usize], j: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..j {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                set.iter().map(move |&i| {
                    let mut t = prefix.clone();
                    t.push(i);
                    t
                })
            })
            .collect();
    }
    out
}

impl PhjPoint {
    pub fn zero(d: usize, n: usize) -> Self {
        let tensors = (1..=d)
            .map(|j| {
                if j <= DENSE_MAX_DEGREE {
                    Tensor::Dense(vec![Rational::zero(); n.pow(j as u32)])
                } else {
                    Tensor::Sparse(BTreeMap::new())
                }
            })
            .collect();
        PhjPoint { n, tensors }
    }

    pub fn degree(&self) -> usize {
        self.tensors.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn check_tuple(&self, j: usize, tuple: &[usize]) -> Result<(), PhjError> {
        if j == 0 || j > self.degree() || tuple.len() != j {
            return Err(PhjError::DegreeMismatch {
                expected: j,
                got: tuple.len(),
            });
        }
        if let Some(&index) = tuple.iter().find(|&&i| i == 0 || i > self.n) {
            return Err(PhjError::IndexOutOfRange { index, n: self.n });
        }
        Ok(())
    }

    /// Entry of tensor `j` at the 1-indexed tuple.
    pub fn get(&self, j: usize, tuple: &[usize]) -> Result<Rational, PhjError> {
        self.check_tuple(j, tuple)?;
        Ok(self.get_unchecked(j, tuple))
    }

    fn get_unchecked(&self, j: usize, tuple: &[usize]) -> Rational {
        match &self.tensors[j - 1] {
            Tensor::Dense(v) => v[flat_index(self.n, tuple)].clone(),
            Tensor::Sparse(m) => m.get(tuple).cloned().unwrap_or_else(Rational::zero),
        }
    }

    pub fn set(&mut self, j: usize, tuple: &[usize], value: Rational) -> Result<(), PhjError> {
        self.check_tuple(j, tuple)?;
        self.set_unchecked(j, tuple, value);
        Ok(())
    }

    fn set_unchecked(&mut self, j: usize, tuple: &[usize], value: Rational) {
        let n = self.n;
        match &mut self.tensors[j - 1] {
            Tensor::Dense(v) => v[flat_index(n, tuple)] = value,
            Tensor::Sparse(m) => {
                if value.is_zero() {
                    m.remove(tuple);
                } else {
                    m.insert(tuple.to_vec(), value);
                }
            }
        }
    }

    /// Nonzero entries as `(j, tuple, value)` in coordinate order.
    pub fn nonzero_entries(&self) -> Vec<(usize, Vec<usize>, Rational)> {
        let mut out = Vec::new();
        for (idx, tensor) in self.tensors.iter().enumerate() {
            let j = idx + 1;
            match tensor {
                Tensor::Dense(v) => {
                    for (flat, x) in v.iter().enumerate() {
                        if !x.is_zero() {
                            out.push((j, unflatten(self.n, j, flat), x.clone()));
                        }
                    }
                }
                Tensor::Sparse(m) => {
                    out.extend(m.iter().map(|(t, x)| (j, t.clone(), x.clone())));
                }
            }
        }
        out
    }

    /// Sum of every entry of every tensor.
    pub fn entry_sum(&self) -> Rational {
        self.tensors
            .iter()
            .flat_map(|t| -> Box<dyn Iterator<Item = &Rational>> {
                match t {
                    Tensor::Dense(v) => Box::new(v.iter()),
                    Tensor::Sparse(m) => Box::new(m.values()),
                }
            })
            .sum()
    }

    pub fn entries_in(&self, alphabet: &Alphabet) -> Result<(), PhjError> {
        // implicit zeros count as entries
        if !alphabet.contains_zero() {
            return Err(PhjError::AlphabetMissingZero);
        }
        match self
            .nonzero_entries()
            .into_iter()
            .find(|(_, _, x)| !alphabet.contains(x))
        {
            Some((_, _, x)) => Err(PhjError::NotInAlphabet(x)),
            None => Ok(()),
        }
    }
}

fn check_gamma(n: usize, gamma: &[usize]) -> Result<(), PhjError> {
    if gamma.is_empty() {
        return Err(PhjError::EmptyGamma);
    }
    if let Some(&index) = gamma.iter().find(|&&i| i == 0 || i > n) {
        return Err(PhjError::IndexOutOfRange { index, n });
    }
    Ok(())
}

/// `a ⊕ x_1 γ ⊕ x_2 (γ×γ) ⊕ ... ⊕ x_d γ^d`: entry `(j, ī)` becomes `x_j`
/// when `ī ∈ γ^j` and keeps its value otherwise.
pub fn oplus(a: &PhjPoint, gamma: &[usize], xs: &[Rational]) -> Result<PhjPoint, PhjError> {
    check_gamma(a.n, gamma)?;
    if xs.len() != a.degree() {
        return Err(PhjError::DegreeMismatch {
            expected: a.degree(),
            got: xs.len(),
        });
    }
    let mut gamma = gamma.to_vec();
    gamma.sort_unstable();
    gamma.dedup();
    Ok(oplus_unchecked(a, &gamma, xs))
}

fn oplus_unchecked(a: &PhjPoint, gamma: &[usize], xs: &[Rational]) -> PhjPoint {
    let mut b = a.clone();
    for (idx, x) in xs.iter().enumerate() {
        let j = idx + 1;
        for tuple in tuples_over(gamma, j) {
            b.set_unchecked(j, &tuple, x.clone());
        }
    }
    b
}

fn check_witness_structure(a: &PhjPoint, gamma: &[usize], alphabet: &Alphabet) -> Result<(), PhjError> {
    check_gamma(a.n, gamma)?;
    a.entries_in(alphabet)?;
    for j in 1..=a.degree() {
        for tuple in tuples_over(gamma, j) {
            if !a.get_unchecked(j, &tuple).is_zero() {
                return Err(PhjError::NonzeroOnGamma { degree: j, tuple });
            }
        }
    }
    Ok(())
}

/// Visits `a ⊕ x_1 γ ⊕ ... ⊕ x_d γ^d` for every `(x_1..x_d)` in
/// `alphabet^d`, lexicographically. Stops early when `visit` returns false.
fn for_each_generated(
    a: &PhjPoint,
    gamma: &[usize],
    alphabet: &Alphabet,
    mut visit: impl FnMut(&PhjPoint) -> bool,
) -> bool {
    let d = a.degree();
    let letters = alphabet.entries();
    let mut choice = vec![0usize; d];
    loop {
        let xs: Vec<Rational> = choice.iter().map(|&c| letters[c].clone()).collect();
        if !visit(&oplus_unchecked(a, gamma, &xs)) {
            return false;
        }
        let mut i = d;
        loop {
            if i == 0 {
                return true;
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < letters.len() {
                break;
            }
            choice[i] = 0;
        }
    }
}

/// The set of all `a ⊕ x_1 γ ⊕ ... ⊕ x_d γ^d` with each `x_j` in the
/// alphabet.
pub fn phj_generated_set(a: &PhjPoint, gamma: &[usize], alphabet: &Alphabet) -> Result<BTreeSet<PhjPoint>, PhjError> {
    check_witness_structure(a, gamma, alphabet)?;
    let gamma = sorted(gamma);
    let mut out = BTreeSet::new();
    for_each_generated(a, &gamma, alphabet, |p| {
        out.insert(p.clone());
        true
    });
    Ok(out)
}

fn sorted(gamma: &[usize]) -> Vec<usize> {
    let mut g = gamma.to_vec();
    g.sort_unstable();
    g.dedup();
    g
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhjWitness {
    pub base: PhjPoint,
    /// Sorted, nonempty subset of `[N]`.
    pub gamma: Vec<usize>,
    pub alphabet: Alphabet,
    pub color: Color,
}

impl PhjWitness {
    /// Checks that `γ ⊆ [N]` is nonempty, the base point takes values in
    /// the alphabet and vanishes on every `γ^j`.
    pub fn validate(&self) -> Result<(), PhjError> {
        check_witness_structure(&self.base, &self.gamma, &self.alphabet)
    }

    /// `γ` sorted with repeats removed.
    pub fn gamma_set(&self) -> Vec<usize> {
        sorted(&self.gamma)
    }

    pub fn generated_set(&self) -> Result<BTreeSet<PhjPoint>, PhjError> {
        phj_generated_set(&self.base, &self.gamma, &self.alphabet)
    }

    /// Recolors every generated point and checks they all get `self.color`.
    pub fn replay<F: Fn(&PhjPoint) -> Color>(&self, coloring: F) -> Result<bool, PhjError> {
        check_witness_structure(&self.base, &self.gamma, &self.alphabet)?;
        let gamma = sorted(&self.gamma);
        Ok(for_each_generated(&self.base, &gamma, &self.alphabet, |p| {
            coloring(p) == self.color
        }))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PhjSearchOptions {
    /// Base points may be nonzero only on the last `support_window`
    /// coordinates outside `γ^1 ∪ ... ∪ γ^d`.
    pub support_window: usize,
}

impl Default for PhjSearchOptions {
    fn default() -> Self {
        PhjSearchOptions { support_window: 4 }
    }
}

#[derive(Debug, Clone)]
struct PhjCandidate {
    gamma: Arc<[usize]>,
    base: PhjPoint,
}

impl Staged for PhjCandidate {
    fn stage(&self) -> usize {
        self.base.n
    }
}

/// Size-`c` subsets of `[n]` in lexicographic order.
fn combinations(n: usize, c: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, c: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == c {
            out.push(prefix.clone());
            return;
        }
        for i in start..=n {
            prefix.push(i);
            rec(i + 1, n, c, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(1, n, c, &mut Vec::new(), &mut out);
    out
}

/// Coordinates `(j, tuple)` outside `γ^j`, in coordinate order.
fn free_coordinates(d: usize, n: usize, gamma: &[usize]) -> Vec<(usize, Vec<usize>)> {
    let all: Vec<usize> = (1..=n).collect();
    let mut out = Vec::new();
    for j in 1..=d {
        for t in tuples_over(&all, j) {
            if !t.iter().all(|i| gamma.binary_search(i).is_ok()) {
                out.push((j, t));
            }
        }
    }
    out
}

fn phj_candidates(
    alphabet: Alphabet,
    d: usize,
    n_range: RangeInclusive<usize>,
    options: PhjSearchOptions,
) -> impl Iterator<Item = PhjCandidate> {
    n_range.flat_map(move |n| {
        let alphabet = alphabet.clone();
        (1..=n).flat_map(move |c| combinations(n, c)).flat_map(move |gamma| {
            let free = free_coordinates(d, n, &gamma);
            let window: Vec<(usize, Vec<usize>)> = free[free.len().saturating_sub(options.support_window)..].to_vec();
            let gamma: Arc<[usize]> = gamma.into();
            let letters = alphabet.entries().to_vec();
            let mut choice = Some(vec![0usize; window.len()]);
            std::iter::from_fn(move || {
                let current = choice.take()?;
                let mut base = PhjPoint::zero(d, n);
                for ((j, t), &c) in window.iter().zip(&current) {
                    base.set_unchecked(*j, t, letters[c].clone());
                }
                let mut next = current;
                for slot in next.iter_mut().rev() {
                    *slot += 1;
                    if *slot < letters.len() {
                        choice = Some(next);
                        break;
                    }
                    *slot = 0;
                }
                Some(PhjCandidate {
                    gamma: Arc::clone(&gamma),
                    base,
                })
            })
        })
    })
}

/// Searches for the canonically smallest monochromatic `⊕` structure
/// (order: `N`, then `|γ|`, then `γ`, then base point lexicographic in the
/// alphabet order).
pub fn find_phj_witness<F>(
    coloring: F,
    alphabet: &Alphabet,
    d: usize,
    n_range: RangeInclusive<usize>,
    budget: &SearchBudget,
    options: PhjSearchOptions,
) -> Result<SearchOutcome<PhjWitness>, PhjError>
where
    F: Fn(&PhjPoint) -> Color + Sync,
{
    if !alphabet.contains_zero() {
        return Err(PhjError::AlphabetMissingZero);
    }
    if d == 0 {
        return Err(PhjError::DegreeMismatch { expected: 1, got: 0 });
    }
    let n_range = (*n_range.start()).max(1)..=*n_range.end();
    let accept = |c: &PhjCandidate| {
        let color = coloring(&c.base);
        for_each_generated(&c.base, &c.gamma, alphabet, |p| coloring(p) == color).then_some(color)
    };
    let candidates = phj_candidates(alphabet.clone(), d, n_range, options);
    Ok(run_search(candidates, accept, budget).map(|(c, color)| PhjWitness {
        base: c.base,
        gamma: c.gamma.to_vec(),
        alphabet: alphabet.clone(),
        color,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn alpha(xs: &[&str]) -> Alphabet {
        Alphabet::new(xs.iter().map(|s| q(s)).collect()).unwrap()
    }

    #[test]
    fn alphabet_orders_zero_first() {
        let a = alpha(&["1/3", "-1", "1/2", "0", "1/2"]);
        let shown: Vec<String> = a.entries().iter().map(|x| x.to_string()).collect();
        assert_eq!(shown, ["0", "-1", "1/2", "1/3"]);
        assert!(a.contains_zero());
        assert_eq!(a.max_abs(), q("1"));
    }

    #[test]
    fn oplus_degree_one() {
        let a = PhjPoint::zero(1, 2);
        let b = oplus(&a, &[2], &[q("1/2")]).unwrap();
        assert_eq!(b.get(1, &[1]).unwrap(), q("0"));
        assert_eq!(b.get(1, &[2]).unwrap(), q("1/2"));
    }

    #[test]
    fn oplus_degree_two() {
        let a = PhjPoint::zero(2, 2);
        let b = oplus(&a, &[1], &[q("1/2"), q("1/3")]).unwrap();
        assert_eq!(
            b.nonzero_entries(),
            vec![(1, vec![1], q("1/2")), (2, vec![1, 1], q("1/3"))]
        );
    }

    #[test]
    fn oplus_identity_and_errors() {
        let mut a = PhjPoint::zero(3, 3);
        a.set(1, &[3], q("1/5")).unwrap();
        a.set(3, &[1, 2, 3], q("1/7")).unwrap();
        let zeros = vec![Rational::zero(); 3];
        assert_eq!(oplus(&a, &[1, 2], &zeros).unwrap(), a);
        assert_eq!(oplus(&a, &[], &zeros), Err(PhjError::EmptyGamma));
        assert_eq!(
            oplus(&a, &[1], &zeros[..2]),
            Err(PhjError::DegreeMismatch { expected: 3, got: 2 })
        );
        assert_eq!(
            oplus(&a, &[4], &zeros),
            Err(PhjError::IndexOutOfRange { index: 4, n: 3 })
        );
    }

    #[test]
    fn oplus_is_idempotent() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let letters = ["0", "1/2", "-1/3", "2/7"];
        for _ in 0..100 {
            let d = rng.gen_range(1..=3);
            let n = rng.gen_range(1..=3);
            let mut a = PhjPoint::zero(d, n);
            let all: Vec<usize> = (1..=n).collect();
            for j in 1..=d {
                for t in tuples_over(&all, j) {
                    a.set(j, &t, q(letters[rng.gen_range(0..4)])).unwrap();
                }
            }
            let gamma: Vec<usize> = (1..=n).filter(|_| rng.gen_bool(0.5)).collect();
            if gamma.is_empty() {
                continue;
            }
            let xs: Vec<Rational> = (0..d).map(|_| q(letters[rng.gen_range(0..4)])).collect();
            let once = oplus(&a, &gamma, &xs).unwrap();
            assert_eq!(oplus(&once, &gamma, &xs).unwrap(), once);
        }
    }

    #[test]
    fn sparse_storage_round_trips() {
        let mut a = PhjPoint::zero(4, 2);
        a.set(4, &[2, 1, 2, 2], q("3/4")).unwrap();
        a.set(4, &[2, 1, 2, 2], q("0")).unwrap();
        assert_eq!(a, PhjPoint::zero(4, 2));
        a.set(3, &[1, 1, 2], q("1/9")).unwrap();
        assert_eq!(a.get(3, &[1, 1, 2]).unwrap(), q("1/9"));
        assert_eq!(a.entry_sum(), q("1/9"));
    }

    #[test]
    fn generated_set_examples() {
        let a = PhjPoint::zero(1, 1);
        assert_eq!(phj_generated_set(&a, &[1], &alpha(&["0", "1/2"])).unwrap().len(), 2);
        let one = phj_generated_set(&a, &[1], &alpha(&["0"])).unwrap();
        assert_eq!(one.into_iter().collect::<Vec<_>>(), [a]);
        let b = PhjPoint::zero(2, 2);
        assert_eq!(phj_generated_set(&b, &[1, 2], &alpha(&["0", "1/2"])).unwrap().len(), 4);
    }

    #[test]
    fn generated_set_contains_base_and_checks_structure() {
        let mut a = PhjPoint::zero(2, 3);
        a.set(2, &[3, 1], q("1/2")).unwrap();
        let al = alpha(&["0", "1/2", "1/4"]);
        let set = phj_generated_set(&a, &[1, 2], &al).unwrap();
        assert!(set.contains(&a));
        assert_eq!(set.len(), 9);
        assert_eq!(
            phj_generated_set(&a, &[1, 3], &al),
            Err(PhjError::NonzeroOnGamma {
                degree: 2,
                tuple: vec![3, 1]
            })
        );
        assert_eq!(
            phj_generated_set(&a, &[1], &alpha(&["0", "1/4"])),
            Err(PhjError::NotInAlphabet(q("1/2")))
        );
        assert_eq!(
            phj_generated_set(&a, &[1], &alpha(&["1/2"])),
            Err(PhjError::AlphabetMissingZero)
        );
    }

    fn budget() -> SearchBudget {
        SearchBudget::default().with_workers(1).with_max_n(3)
    }

    #[test]
    fn constant_coloring_accepts_zero_point() {
        let al = alpha(&["0", "1/2", "1/3"]);
        let wit = find_phj_witness(|_| 1, &al, 1, 1..=3, &budget(), PhjSearchOptions::default())
            .unwrap()
            .found()
            .unwrap();
        assert_eq!(wit.base, PhjPoint::zero(1, 1));
        assert_eq!(wit.gamma, [1]);
    }

    fn parity_of_sum(p: &PhjPoint) -> Color {
        let s = p.entry_sum();
        let v = s.numer() + s.denom();
        if (v % 2u32) == 0u32.into() {
            1
        } else {
            2
        }
    }

    /// Independent oracle: plain nested enumeration of (N, γ, every base
    /// point over the whole space) checking monochromaticity through
    /// `phj_generated_set`.
    fn naive_phj(
        coloring: impl Fn(&PhjPoint) -> Color,
        al: &Alphabet,
        d: usize,
        max_n: usize,
    ) -> Option<(usize, Vec<usize>, PhjPoint)> {
        for n in 1..=max_n {
            let all: Vec<usize> = (1..=n).collect();
            let coords: Vec<(usize, Vec<usize>)> = (1..=d)
                .flat_map(|j| tuples_over(&all, j).into_iter().map(move |t| (j, t)))
                .collect();
            for c in 1..=n {
                for gamma in combinations(n, c) {
                    let total = al.len().pow(coords.len() as u32);
                    for code in 0..total {
                        let mut a = PhjPoint::zero(d, n);
                        let mut rest = code;
                        for (j, t) in coords.iter().rev() {
                            a.set(*j, t, al.entries()[rest % al.len()].clone()).unwrap();
                            rest /= al.len();
                        }
                        let Ok(set) = phj_generated_set(&a, &gamma, al) else {
                            continue;
                        };
                        let c0 = coloring(&a);
                        if set.iter().all(|p| coloring(p) == c0) {
                            return Some((n, gamma, a));
                        }
                    }
                }
            }
        }
        None
    }

    #[test]
    fn parity_coloring_matches_oracle() {
        let al = alpha(&["0", "1/2"]);
        let expected = naive_phj(parity_of_sum, &al, 1, 3).expect("oracle finds a witness at N <= 3");
        // the oracle covers the full space, the searcher only a window; a
        // window covering every free coordinate makes them comparable
        let options = PhjSearchOptions { support_window: 16 };
        for workers in [1, 3] {
            let wit = find_phj_witness(parity_of_sum, &al, 1, 1..=3, &budget().with_workers(workers), options)
                .unwrap()
                .found()
                .unwrap();
            assert_eq!((wit.base.n(), wit.gamma.clone(), wit.base.clone()), expected);
            assert!(wit.replay(parity_of_sum).unwrap());
        }
        // sums 0 (0+1) and 1/2 (1+2) are both odd, so N = 1 already works
        assert_eq!(expected, (1, vec![1], PhjPoint::zero(1, 1)));
    }

    #[test]
    fn search_agrees_with_oracle_on_assorted_colorings() {
        let half = q("1/2");
        #[allow(clippy::type_complexity)]
        let colorings: Vec<Box<dyn Fn(&PhjPoint) -> Color + Sync>> = vec![
            Box::new(move |p: &PhjPoint| if p.entry_sum() < half { 1 } else { 2 }),
            Box::new(|p: &PhjPoint| {
                let s = p.entry_sum();
                let r = (s.numer() % 3u32 + 3u32) % 3u32;
                if r == 0u32.into() {
                    1
                } else {
                    2
                }
            }),
            Box::new(|p: &PhjPoint| {
                if p.nonzero_entries().len().is_multiple_of(2) {
                    1
                } else {
                    2
                }
            }),
        ];
        let options = PhjSearchOptions { support_window: 64 };
        for (al, d, max_n) in [(alpha(&["0", "1/2"]), 1, 3), (alpha(&["0", "1/3"]), 2, 2)] {
            for col in &colorings {
                let naive = naive_phj(col, &al, d, max_n);
                let got = find_phj_witness(col, &al, d, 1..=max_n, &budget().with_max_n(max_n), options)
                    .unwrap()
                    .found()
                    .map(|w| (w.base.n(), w.gamma, w.base));
                assert_eq!(got, naive);
            }
        }
    }

    #[test]
    fn zero_budget_and_bad_alphabet() {
        let al = alpha(&["0", "1/2"]);
        let out = find_phj_witness(
            |_| 1,
            &al,
            1,
            1..=3,
            &budget().with_max_nodes(0),
            PhjSearchOptions::default(),
        )
        .unwrap();
        assert!(!out.is_found());
        assert!(find_phj_witness(
            |_| 1,
            &alpha(&["1/2"]),
            1,
            1..=3,
            &budget(),
            PhjSearchOptions::default()
        )
        .is_err());
    }

    #[test]
    fn window_enumeration_is_lexicographic_prefix() {
        let al = alpha(&["0", "1/2"]);
        let got: Vec<Vec<(usize, Vec<usize>, Rational)>> =
            phj_candidates(al, 1, 2..=2, PhjSearchOptions { support_window: 1 })
                .take(3)
                .map(|c| c.base.nonzero_entries())
                .collect();
        // γ = {1}: free coordinate (1,[2]) toggles; then γ = {2}
        assert_eq!(got, vec![vec![], vec![(1, vec![2], q("1/2"))], vec![]]);
    }
}
