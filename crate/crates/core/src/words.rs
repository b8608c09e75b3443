//! Words over `{0, ..., k}^N`, variable-word substitution and the
//! block-structured Hales–Jewett searcher.
//!
//! Positions are 1-indexed everywhere in the public API.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::RangeInclusive;
use std::sync::Arc;

use thiserror::Error;

use crate::coloring::Color;
use crate::engine::{run_search, SearchBudget, SearchOutcome, Staged};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("letter {letter} is outside the alphabet {{0..{k}}}")]
    LetterOutOfRange { letter: u8, k: u8 },
    #[error("position {position} is outside [1, {len}]")]
    PositionOutOfRange { position: usize, len: usize },
    #[error("position {0} carries a nonzero letter")]
    NonzeroPosition(usize),
    #[error("empty position set")]
    EmptyPositionSet,
    #[error("blocks are not strictly increasing")]
    BlocksNotIncreasing,
    #[error("malformed word {0:?}")]
    Malformed(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
}

/// A word `u_1 u_2 ... u_N` with letters in `{0..k}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    k: u8,
    letters: Vec<u8>,
}

impl Word {
    pub fn new(k: u8, letters: Vec<u8>) -> Result<Self, WordError> {
        if let Some(&letter) = letters.iter().find(|&&l| l > k) {
            return Err(WordError::LetterOutOfRange { letter, k });
        }
        Ok(Word { k, letters })
    }

    pub fn zeros(k: u8, n: usize) -> Self {
        Word { k, letters: vec![0; n] }
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    /// Letter at 1-indexed `position`.
    pub fn at(&self, position: usize) -> u8 {
        self.letters[position - 1]
    }

    /// Parses a digit string such as `"0210"` (requires `k <= 9`).
    pub fn parse(k: u8, text: &str) -> Result<Self, WordError> {
        if k > 9 || !text.bytes().all(|b| b.is_ascii_digit()) {
            return Err(WordError::Malformed(text.to_string()));
        }
        Word::new(k, text.bytes().map(|b| b - b'0').collect())
    }

    fn check_positions(&self, positions: &[usize]) -> Result<(), WordError> {
        if positions.is_empty() {
            return Err(WordError::EmptyPositionSet);
        }
        for &p in positions {
            if p == 0 || p > self.len() {
                return Err(WordError::PositionOutOfRange {
                    position: p,
                    len: self.len(),
                });
            }
            if self.at(p) != 0 {
                return Err(WordError::NonzeroPosition(p));
            }
        }
        Ok(())
    }

    /// `w^α(t)` without precondition checks.
    fn with_letter_at(&self, positions: &[usize], t: u8) -> Word {
        let mut letters = self.letters.clone();
        for &p in positions {
            letters[p - 1] = t;
        }
        Word { k: self.k, letters }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k <= 9 {
            for l in &self.letters {
                write!(f, "{l}")?;
            }
        } else {
            for (i, l) in self.letters.iter().enumerate() {
                if i > 0 {
                    f.write_str(".")?;
                }
                write!(f, "{l}")?;
            }
        }
        Ok(())
    }
}

/// The word obtained from `w` by writing `t` at every position of `alpha`.
/// Each position of `alpha` must carry 0 in `w`.
pub fn substitute(w: &Word, alpha: &[usize], t: u8) -> Result<Word, WordError> {
    w.check_positions(alpha)?;
    if t > w.k {
        return Err(WordError::LetterOutOfRange { letter: t, k: w.k });
    }
    Ok(w.with_letter_at(alpha, t))
}

/// `{a, a + b, ..., a + k b}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ApBlock {
    pub start: usize,
    pub step: usize,
    /// Number of terms, `k + 1`.
    pub len: usize,
}

impl ApBlock {
    pub fn positions(&self) -> Vec<usize> {
        (0..self.len).map(|j| self.start + j * self.step).collect()
    }

    pub fn last(&self) -> usize {
        self.start + (self.len - 1) * self.step
    }

    pub fn to_block(&self) -> Block {
        Block {
            positions: self.positions(),
        }
    }
}

/// All `(k+1)`-term progressions inside `[n]`, in lexicographic
/// `(start, step)` order. With `k = 0` the step is irrelevant and fixed at 1.
pub fn ap_blocks(n: usize, k: u8) -> Vec<ApBlock> {
    let len = k as usize + 1;
    let mut out = Vec::new();
    for start in 1..=n {
        if k == 0 {
            out.push(ApBlock { start, step: 1, len });
            continue;
        }
        let mut step = 1;
        while start + k as usize * step <= n {
            out.push(ApBlock { start, step, len });
            step += 1;
        }
    }
    out
}

/// A member of a partition-regular family: a nonempty increasing set of
/// positions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Block {
    positions: Vec<usize>,
}

impl Block {
    pub fn new(mut positions: Vec<usize>) -> Result<Self, WordError> {
        positions.sort_unstable();
        positions.dedup();
        if positions.is_empty() {
            return Err(WordError::EmptyPositionSet);
        }
        if positions[0] == 0 {
            return Err(WordError::PositionOutOfRange { position: 0, len: 0 });
        }
        Ok(Block { positions })
    }

    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    pub fn first(&self) -> usize {
        self.positions[0]
    }

    pub fn last(&self) -> usize {
        *self.positions.last().expect("blocks are nonempty")
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Reads the block back as a `(k+1)`-term progression, if it is one.
    pub fn as_ap(&self, k: u8) -> Option<ApBlock> {
        let len = k as usize + 1;
        if self.positions.len() != len {
            return None;
        }
        let start = self.positions[0];
        if len == 1 {
            return Some(ApBlock { start, step: 1, len });
        }
        let step = self.positions[1] - start;
        let ap = ApBlock { start, step, len };
        (ap.positions() == self.positions).then_some(ap)
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.positions.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// The partition-regular family supplying the blocks of a witness. The
/// returned order is the canonical order used to compare block tuples.
pub trait BlockFamily: Sync {
    fn blocks(&self, n: usize, k: u8) -> Vec<Block>;
}

/// `(k+1)`-term arithmetic progressions.
#[derive(Debug, Clone, Copy, Default)]
pub struct ArithmeticProgressions;

impl BlockFamily for ArithmeticProgressions {
    fn blocks(&self, n: usize, k: u8) -> Vec<Block> {
        ap_blocks(n, k).iter().map(ApBlock::to_block).collect()
    }
}

fn check_structure(w: &Word, blocks: &[Block]) -> Result<(), WordError> {
    if blocks.is_empty() {
        return Err(WordError::EmptyPositionSet);
    }
    if blocks.windows(2).any(|p| p[0].last() >= p[1].first()) {
        return Err(WordError::BlocksNotIncreasing);
    }
    for b in blocks {
        w.check_positions(b.positions())?;
    }
    Ok(())
}

/// Calls `visit` on every word `w^{{j_1..j_l}}(t)` with one `j_i` per
/// block; the `t = 0` word is visited once. Stops early when `visit`
/// returns false.
fn for_each_generated(w: &Word, blocks: &[Block], mut visit: impl FnMut(&Word) -> bool) -> bool {
    if !visit(w) {
        return false;
    }
    let mut choice = vec![0usize; blocks.len()];
    let mut positions = vec![0usize; blocks.len()];
    for t in 1..=w.k {
        choice.iter_mut().for_each(|c| *c = 0);
        'tuples: loop {
            for (slot, (b, &c)) in positions.iter_mut().zip(blocks.iter().zip(&choice)) {
                *slot = b.positions()[c];
            }
            if !visit(&w.with_letter_at(&positions, t)) {
                return false;
            }
            // odometer, last block fastest
            let mut i = blocks.len();
            loop {
                if i == 0 {
                    break 'tuples;
                }
                i -= 1;
                choice[i] += 1;
                if choice[i] < blocks[i].len() {
                    break;
                }
                choice[i] = 0;
            }
        }
    }
    true
}

/// The full set `{ w^{{j_1..j_l}}(t) : j_i ∈ β_i, 0 <= t <= k }`.
pub fn bm_generated_set(w: &Word, blocks: &[Block]) -> Result<BTreeSet<Word>, WordError> {
    check_structure(w, blocks)?;
    let mut out = BTreeSet::new();
    for_each_generated(w, blocks, |x| {
        out.insert(x.clone());
        true
    });
    Ok(out)
}

/// A monochromatic block structure: base word, increasing blocks, and the
/// color shared by every generated word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BmWitness {
    pub word: Word,
    pub blocks: Vec<Block>,
    pub color: Color,
}

impl BmWitness {
    pub fn n(&self) -> usize {
        self.word.len()
    }

    pub fn k(&self) -> u8 {
        self.word.k()
    }

    /// Checks the structural invariants: increasing blocks inside `[N]`
    /// and a base word that is 0 on every block.
    pub fn validate(&self) -> Result<(), WordError> {
        check_structure(&self.word, &self.blocks)
    }

    pub fn generated_set(&self) -> Result<BTreeSet<Word>, WordError> {
        bm_generated_set(&self.word, &self.blocks)
    }

    /// Recolors every generated word and checks they all get `self.color`.
    pub fn replay<F: Fn(&Word) -> Color>(&self, coloring: F) -> Result<bool, WordError> {
        check_structure(&self.word, &self.blocks)?;
        Ok(for_each_generated(&self.word, &self.blocks, |x| {
            coloring(x) == self.color
        }))
    }
}

#[derive(Debug, Clone)]
struct BmCandidate {
    blocks: Arc<[Block]>,
    word: Word,
}

impl Staged for BmCandidate {
    fn stage(&self) -> usize {
        self.word.len()
    }
}

/// Strictly increasing `l`-tuples of blocks in lexicographic order of
/// block indices.
struct IncreasingTuples {
    blocks: Arc<Vec<Block>>,
    l: usize,
    stack: Vec<usize>,
    started: bool,
    done: bool,
}

impl IncreasingTuples {
    fn new(blocks: Arc<Vec<Block>>, l: usize) -> Self {
        IncreasingTuples {
            blocks,
            l,
            stack: Vec::with_capacity(l),
            started: false,
            done: false,
        }
    }

    fn next_valid(&self, from: usize) -> Option<usize> {
        let floor = self.stack.last().map_or(0, |&i| self.blocks[i].last());
        (from..self.blocks.len()).find(|&i| self.blocks[i].first() > floor)
    }

    fn complete(&mut self, mut from: usize) -> bool {
        loop {
            if self.stack.len() == self.l {
                return true;
            }
            match self.next_valid(from) {
                Some(i) => {
                    self.stack.push(i);
                    from = 0;
                }
                None => match self.stack.pop() {
                    Some(prev) => from = prev + 1,
                    None => return false,
                },
            }
        }
    }
}

impl Iterator for IncreasingTuples {
    type Item = Vec<Block>;

    fn next(&mut self) -> Option<Vec<Block>> {
        if self.done {
            return None;
        }
        let ok = if !self.started {
            self.started = true;
            self.complete(0)
        } else {
            match self.stack.pop() {
                Some(last) => self.complete(last + 1),
                None => false,
            }
        };
        if ok {
            Some(self.stack.iter().map(|&i| self.blocks[i].clone()).collect())
        } else {
            self.done = true;
            None
        }
    }
}

/// Largest number of pairwise increasing blocks (earliest-finish greedy).
fn max_chain(blocks: &[Block]) -> usize {
    let mut ends: Vec<(usize, usize)> = blocks.iter().map(|b| (b.last(), b.first())).collect();
    ends.sort_unstable();
    let mut count = 0;
    let mut last = 0;
    for (max, min) in ends {
        if min > last {
            count += 1;
            last = max;
        }
    }
    count
}

/// Words of length `n` over `{0..k}` that are 0 outside `free`, in
/// lexicographic order.
fn words_free_on(k: u8, n: usize, free: Vec<usize>) -> impl Iterator<Item = Word> {
    let mut current = Some(Word::zeros(k, n));
    std::iter::from_fn(move || {
        let out = current.take()?;
        let mut next = out.clone();
        for &p in free.iter().rev() {
            if next.letters[p - 1] < k {
                next.letters[p - 1] += 1;
                current = Some(next);
                break;
            }
            next.letters[p - 1] = 0;
        }
        Some(out)
    })
}

fn bm_candidates<'a>(
    family: &'a dyn BlockFamily,
    k: u8,
    n_range: RangeInclusive<usize>,
) -> impl Iterator<Item = BmCandidate> + 'a {
    n_range.flat_map(move |n| {
        let blocks = Arc::new(family.blocks(n, k));
        let max_l = max_chain(&blocks);
        (1..=max_l).flat_map(move |l| {
            IncreasingTuples::new(Arc::clone(&blocks), l).flat_map(move |tuple| {
                let covered: BTreeSet<usize> = tuple.iter().flat_map(|b| b.positions().iter().copied()).collect();
                let free: Vec<usize> = (1..=n).filter(|p| !covered.contains(p)).collect();
                let tuple: Arc<[Block]> = tuple.into();
                words_free_on(k, n, free).map(move |word| BmCandidate {
                    blocks: Arc::clone(&tuple),
                    word,
                })
            })
        })
    })
}

/// Searches for the canonically smallest monochromatic block structure
/// (order: `N`, then `l`, then block tuple, then base word).
pub fn find_bm_witness<F>(
    coloring: F,
    k: u8,
    n_range: RangeInclusive<usize>,
    family: &dyn BlockFamily,
    budget: &SearchBudget,
) -> SearchOutcome<BmWitness>
where
    F: Fn(&Word) -> Color + Sync,
{
    let n_range = (*n_range.start()).max(1)..=*n_range.end();
    let accept = |c: &BmCandidate| {
        let color = coloring(&c.word);
        for_each_generated(&c.word, &c.blocks, |x| coloring(x) == color).then_some(color)
    };
    run_search(bm_candidates(family, k, n_range), accept, budget).map(|(c, color)| BmWitness {
        word: c.word,
        blocks: c.blocks.to_vec(),
        color,
    })
}

/// Lexicographically smallest `(a, d)` such that
/// `{a, a+d, ..., a+kd} ⊆ [1, n]` is monochromatic, where `colors[i]` is
/// the color of `i + 1`.
pub fn find_ap_in_interval(colors: &[Color], k: usize) -> Option<(usize, usize)> {
    let n = colors.len();
    if n == 0 {
        return None;
    }
    if k == 0 {
        return Some((1, 1));
    }
    for a in 1..=n {
        let mut d = 1;
        while a + k * d <= n {
            let c = colors[a - 1];
            if (1..=k).all(|j| colors[a + j * d - 1] == c) {
                return Some((a, d));
            }
            d += 1;
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VdwError {
    #[error("no n <= {cap} forces a monochromatic progression")]
    CapExceeded { cap: usize },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
}

/// Backtracking search for an `r`-coloring of `[n]` with no monochromatic
/// `(k+1)`-term progression. The first position is pinned to color 0.
pub fn avoiding_coloring(n: usize, k: usize, r: usize) -> Option<Vec<usize>> {
    if r == 0 {
        return None;
    }
    if n == 0 {
        return Some(Vec::new());
    }
    if k == 0 {
        return None;
    }
    let closes_progression = |colors: &[usize], p: usize| {
        // p is 0-indexed and colors[p] has just been set
        let c = colors[p];
        let mut d = 1;
        while k * d <= p {
            if (1..=k).all(|j| colors[p - j * d] == c) {
                return true;
            }
            d += 1;
        }
        false
    };
    let mut colors = vec![0usize; n];
    let mut p = 0usize;
    // colors[p] = candidate color at p; backtrack by incrementing
    loop {
        let limit = if p == 0 { 1 } else { r };
        if colors[p] < limit && !closes_progression(&colors, p) {
            if p + 1 == n {
                return Some(colors);
            }
            p += 1;
            colors[p] = 0;
            continue;
        }
        // advance current position, backtracking as needed
        loop {
            colors[p] += 1;
            let limit = if p == 0 { 1 } else { r };
            if colors[p] < limit {
                break;
            }
            if p == 0 {
                return None;
            }
            p -= 1;
        }
    }
}

/// Least `n <= cap` such that every `r`-coloring of `[n]` contains a
/// monochromatic `(k+1)`-term progression.
pub fn vdw_number(k: usize, r: usize, cap: usize) -> Result<usize, VdwError> {
    if r == 0 {
        return Err(VdwError::InvalidParameters("r must be at least 1".into()));
    }
    (1..=cap)
        .find(|&n| avoiding_coloring(n, k, r).is_none())
        .ok_or(VdwError::CapExceeded { cap })
}
