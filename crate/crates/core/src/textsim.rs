//! Jaro and Jaro-Winkler similarity, and their aggregation from sentence
//! pairs up to whole documents.
//!
//! Two matchers compute the Jaro quantities `m` and `t`:
//!
//! * [`match_stats`] is the production path. The second string is compiled
//!   into per-character position bitmasks ([`PreparedText`]), so finding the
//!   first unconsumed match inside the window is a handful of word operations.
//!   Matrix computations go one step further and encode every sentence over
//!   a shared [`Alphabet`], so the per-character lookup is one indexed load.
//! * [`match_stats_bruteforce`] is a direct nested-loop reading of the window
//!   rule, kept only as a test oracle for the first.
//!
//! Matching is greedy: characters of `s1` are visited left to right and each
//! takes the smallest unconsumed equal position of `s2` inside the window
//! `max(floor(max(|s1|, |s2|) / 2) - 1, 0)`.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::SimilarityMatrix;
use crate::corpus::{Document, NormalizedSentence};
use crate::error::{Error, Result};

/// Longest input accepted by [`match_stats_bruteforce`].
pub const BRUTEFORCE_MAX_LEN: usize = 16;

/// The quantities Jaro similarity is computed from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatchStats {
    /// Matching characters.
    pub m: usize,
    /// Twice the transposition count, i.e. the number of matched positions
    /// whose characters disagree. Kept as an integer since `t` may be
    /// half-integral.
    pub twice_t: usize,
    pub len1: usize,
    pub len2: usize,
}

impl MatchStats {
    pub fn transpositions(&self) -> f64 {
        self.twice_t as f64 / 2.0
    }

    /// `(m/|s1| + m/|s2| + (m - t)/m) / 3`, or 0 when nothing matched.
    pub fn jaro(&self) -> f64 {
        if self.m == 0 {
            return 0.0;
        }
        let m = self.m as f64;
        let order = (2 * self.m - self.twice_t) as f64 / (2 * self.m) as f64;
        (m / self.len1 as f64 + m / self.len2 as f64 + order) / 3.0
    }
}

/// Winkler prefix bonus settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JaroWinklerParams {
    prefix_scale: f64,
    max_prefix: usize,
}

impl Default for JaroWinklerParams {
    fn default() -> Self {
        JaroWinklerParams {
            prefix_scale: 0.1,
            max_prefix: 4,
        }
    }
}

impl JaroWinklerParams {
    /// `prefix_scale` must lie in `[0, 0.25]` and `prefix_scale * max_prefix`
    /// must not exceed 1, otherwise scores could leave `[0, 1]`.
    pub fn new(prefix_scale: f64, max_prefix: usize) -> Result<Self> {
        if !(0.0..=0.25).contains(&prefix_scale) {
            return Err(Error::InvalidParameter(format!(
                "prefix scale {prefix_scale} outside [0, 0.25]"
            )));
        }
        if prefix_scale * max_prefix as f64 > 1.0 {
            return Err(Error::InvalidParameter(format!(
                "prefix scale {prefix_scale} times max prefix {max_prefix} exceeds 1"
            )));
        }
        Ok(JaroWinklerParams {
            prefix_scale,
            max_prefix,
        })
    }

    pub fn prefix_scale(&self) -> f64 {
        self.prefix_scale
    }

    pub fn max_prefix(&self) -> usize {
        self.max_prefix
    }

    /// `jaro + l * p * (1 - jaro)` with `l` capped at `max_prefix`.
    pub fn apply_prefix(&self, jaro: f64, common_prefix: usize) -> f64 {
        let l = common_prefix.min(self.max_prefix) as f64;
        jaro + l * self.prefix_scale * (1.0 - jaro)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AggregationKind {
    /// Mean of every score.
    MeanOfBest,
    /// Mean of the `k` largest scores.
    TopKMean,
}

/// How per-sentence scores are reduced to one number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AggregationPolicy {
    kind: AggregationKind,
    k: usize,
}

pub const DEFAULT_TOP_K: usize = 5;

impl Default for AggregationPolicy {
    fn default() -> Self {
        Self::mean_of_best()
    }
}

impl AggregationPolicy {
    pub fn new(kind: AggregationKind, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("k must be at least 1".into()));
        }
        Ok(AggregationPolicy { kind, k })
    }

    pub fn mean_of_best() -> Self {
        AggregationPolicy {
            kind: AggregationKind::MeanOfBest,
            k: DEFAULT_TOP_K,
        }
    }

    pub fn top_k_mean(k: usize) -> Result<Self> {
        Self::new(AggregationKind::TopKMean, k)
    }

    pub fn kind(&self) -> AggregationKind {
        self.kind
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Reduce `scores` (given in sentence-index order).
    ///
    /// `TopKMean` ranks by value descending, then index ascending, and
    /// averages the first `k` (all of them when fewer than `k`). Sums run in
    /// a fixed order so the result does not depend on scheduling. Empty input
    /// yields 0.
    pub fn aggregate(&self, scores: &[f64]) -> f64 {
        if scores.is_empty() {
            return 0.0;
        }
        match self.kind {
            AggregationKind::MeanOfBest => scores.iter().sum::<f64>() / scores.len() as f64,
            AggregationKind::TopKMean => {
                let mut ranked: Vec<(usize, f64)> = scores.iter().copied().enumerate().collect();
                ranked.sort_by(|a, b| {
                    b.1.partial_cmp(&a.1)
                        .unwrap_or(Ordering::Equal)
                        .then(a.0.cmp(&b.0))
                });
                let take = self.k.min(ranked.len());
                ranked[..take].iter().map(|(_, v)| v).sum::<f64>() / take as f64
            }
        }
    }
}

/// A string compiled for repeated use as the second argument of the matcher:
/// for every distinct character, a bitmask of the positions it occupies.
#[derive(Debug, Clone)]
pub struct PreparedText {
    chars: Vec<char>,
    blocks: usize,
    // ASCII character -> slot + 1; 0 means absent
    ascii_slots: [u16; 128],
    // sorted non-ASCII characters and their slots
    other_slots: Vec<(char, usize)>,
    masks: Vec<u64>,
}

impl PreparedText {
    pub fn new(text: &str) -> Self {
        let chars: Vec<char> = text.chars().collect();
        // at least two blocks so short strings can be read as one u128
        let blocks = chars.len().div_ceil(64).max(2);
        let mut ascii_slots = [0u16; 128];
        let mut other_slots: Vec<(char, usize)> = Vec::new();
        let mut masks: Vec<u64> = Vec::new();
        for (pos, &c) in chars.iter().enumerate() {
            let slot = if c.is_ascii() {
                let entry = &mut ascii_slots[c as usize];
                if *entry == 0 {
                    masks.resize(masks.len() + blocks, 0);
                    *entry = (masks.len() / blocks) as u16;
                }
                *entry as usize - 1
            } else {
                match other_slots.binary_search_by(|(k, _)| k.cmp(&c)) {
                    Ok(i) => other_slots[i].1,
                    Err(i) => {
                        let slot = masks.len() / blocks;
                        masks.resize(masks.len() + blocks, 0);
                        other_slots.insert(i, (c, slot));
                        slot
                    }
                }
            };
            masks[slot * blocks + pos / 64] |= 1u64 << (pos % 64);
        }
        PreparedText {
            chars,
            blocks,
            ascii_slots,
            other_slots,
            masks,
        }
    }

    pub fn len(&self) -> usize {
        self.chars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chars.is_empty()
    }

    pub fn chars(&self) -> &[char] {
        &self.chars
    }

    fn positions(&self, c: char) -> Option<&[u64]> {
        let slot = if c.is_ascii() {
            match self.ascii_slots[c as usize] {
                0 => return None,
                s => s as usize - 1,
            }
        } else {
            let i = self.other_slots.binary_search_by(|(k, _)| k.cmp(&c)).ok()?;
            self.other_slots[i].1
        };
        Some(&self.masks[slot * self.blocks..(slot + 1) * self.blocks])
    }
}

/// Reusable buffers for [`match_prepared`].
#[derive(Debug, Default)]
pub struct Scratch {
    consumed: Vec<u64>,
    matched: Vec<char>,
}

/// Jaro matching of `s1` against a prepared `s2`.
pub fn match_prepared(s1: &[char], s2: &PreparedText, scratch: &mut Scratch) -> MatchStats {
    if s1.len() <= 128 && s2.len() <= 128 {
        match_short(s1, s2)
    } else {
        match_blocks(s1, s2, scratch)
    }
}

// Both strings fit in a u128: one word holds the consumed positions of `s2`
// and another the matched positions of `s1`.
fn match_short(s1: &[char], s2: &PreparedText) -> MatchStats {
    let len1 = s1.len();
    let len2 = s2.len();
    let mut stats = MatchStats {
        m: 0,
        twice_t: 0,
        len1,
        len2,
    };
    if len1 == 0 || len2 == 0 {
        return stats;
    }
    let window = (len1.max(len2) / 2).saturating_sub(1);
    let mut consumed = 0u128;
    let mut matched = 0u128;
    for (i, &c) in s1.iter().enumerate() {
        let Some(pm) = s2.positions(c) else {
            continue;
        };
        let lo = i.saturating_sub(window);
        let hi = (i + window + 1).min(len2);
        if lo >= hi {
            continue;
        }
        let width = hi - lo;
        let in_window = if width == 128 {
            !0u128
        } else {
            ((1u128 << width) - 1) << lo
        };
        let positions = (pm[1] as u128) << 64 | pm[0] as u128;
        let candidates = positions & !consumed & in_window;
        if candidates != 0 {
            consumed |= candidates & candidates.wrapping_neg();
            matched |= 1u128 << i;
        }
    }
    stats.m = matched.count_ones() as usize;
    while matched != 0 {
        let i = matched.trailing_zeros() as usize;
        let j = consumed.trailing_zeros() as usize;
        if s1[i] != s2.chars[j] {
            stats.twice_t += 1;
        }
        matched &= matched - 1;
        consumed &= consumed - 1;
    }
    stats
}

#[doc(hidden)]
pub fn match_blocks(s1: &[char], s2: &PreparedText, scratch: &mut Scratch) -> MatchStats {
    let len1 = s1.len();
    let len2 = s2.len();
    let mut stats = MatchStats {
        m: 0,
        twice_t: 0,
        len1,
        len2,
    };
    if len1 == 0 || len2 == 0 {
        return stats;
    }
    let window = (len1.max(len2) / 2).saturating_sub(1);
    scratch.consumed.clear();
    scratch.consumed.resize(s2.blocks, 0);
    scratch.matched.clear();

    for (i, &c) in s1.iter().enumerate() {
        let Some(pm) = s2.positions(c) else {
            continue;
        };
        let lo = i.saturating_sub(window);
        let hi = (i + window + 1).min(len2);
        if lo >= hi {
            continue;
        }
        let (first, last) = (lo / 64, (hi - 1) / 64);
        for b in first..=last {
            let mut bits = pm[b] & !scratch.consumed[b];
            if b == first {
                bits &= !0u64 << (lo % 64);
            }
            if b == last {
                bits &= !0u64 >> (63 - (hi - 1) % 64);
            }
            if bits != 0 {
                scratch.consumed[b] |= bits & bits.wrapping_neg();
                scratch.matched.push(c);
                break;
            }
        }
    }

    stats.m = scratch.matched.len();
    let mut k = 0;
    for (b, &word) in scratch.consumed.iter().enumerate() {
        let mut bits = word;
        while bits != 0 {
            let j = b * 64 + bits.trailing_zeros() as usize;
            if s2.chars[j] != scratch.matched[k] {
                stats.twice_t += 1;
            }
            k += 1;
            bits &= bits - 1;
        }
    }
    stats
}

/// Matching characters and transpositions of a string pair.
pub fn match_stats(s1: &str, s2: &str) -> MatchStats {
    let a: Vec<char> = s1.chars().collect();
    match_prepared(&a, &PreparedText::new(s2), &mut Scratch::default())
}

/// Unoptimized reference implementation of [`match_stats`] for inputs of at
/// most [`BRUTEFORCE_MAX_LEN`] characters.
pub fn match_stats_bruteforce(s1: &str, s2: &str) -> Result<MatchStats> {
    let a: Vec<char> = s1.chars().collect();
    let b: Vec<char> = s2.chars().collect();
    for len in [a.len(), b.len()] {
        if len > BRUTEFORCE_MAX_LEN {
            return Err(Error::OracleLimit {
                len,
                limit: BRUTEFORCE_MAX_LEN,
            });
        }
    }
    let longer = a.len().max(b.len()) as i64;
    let window = (longer / 2 - 1).max(0);

    let mut a_hit = vec![false; a.len()];
    let mut b_hit = vec![false; b.len()];
    for i in 0..a.len() {
        for j in 0..b.len() {
            let distance = (i as i64 - j as i64).abs();
            if distance <= window && !b_hit[j] && a[i] == b[j] {
                a_hit[i] = true;
                b_hit[j] = true;
                break;
            }
        }
    }

    let from_a: Vec<char> = (0..a.len()).filter(|&i| a_hit[i]).map(|i| a[i]).collect();
    let from_b: Vec<char> = (0..b.len()).filter(|&j| b_hit[j]).map(|j| b[j]).collect();
    let mut out_of_order = 0;
    for n in 0..from_a.len() {
        if from_a[n] != from_b[n] {
            out_of_order += 1;
        }
    }
    Ok(MatchStats {
        m: from_a.len(),
        twice_t: out_of_order,
        len1: a.len(),
        len2: b.len(),
    })
}

fn jaro_chars(s1: &[char], s2: &PreparedText, scratch: &mut Scratch) -> f64 {
    match (s1.is_empty(), s2.is_empty()) {
        (true, true) => 1.0,
        (true, false) | (false, true) => 0.0,
        _ => match_prepared(s1, s2, scratch).jaro(),
    }
}

fn common_prefix(a: &[char], b: &[char]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// Jaro-Winkler between two prepared strings, reusing `scratch`.
pub fn jaro_winkler_prepared(
    s1: &PreparedText,
    s2: &PreparedText,
    params: &JaroWinklerParams,
    scratch: &mut Scratch,
) -> f64 {
    let j = jaro_chars(&s1.chars, s2, scratch);
    params.apply_prefix(j, common_prefix(&s1.chars, &s2.chars))
}

/// Jaro similarity. Two empty strings score 1, one empty string scores 0.
pub fn jaro(s1: &str, s2: &str) -> f64 {
    let a: Vec<char> = s1.chars().collect();
    jaro_chars(&a, &PreparedText::new(s2), &mut Scratch::default())
}

pub fn jaro_winkler(s1: &str, s2: &str, params: &JaroWinklerParams) -> f64 {
    let a: Vec<char> = s1.chars().collect();
    let b = PreparedText::new(s2);
    let j = jaro_chars(&a, &b, &mut Scratch::default());
    params.apply_prefix(j, common_prefix(&a, &b.chars))
}

/// Highest Jaro-Winkler score of `query` against any of `targets`.
pub fn sentence_best_score(
    query: &NormalizedSentence,
    targets: &[NormalizedSentence],
    params: &JaroWinklerParams,
) -> Result<f64> {
    if targets.is_empty() {
        return Err(Error::EmptyTargets);
    }
    let q = PreparedText::new(&query.text);
    let mut scratch = Scratch::default();
    Ok(targets
        .iter()
        .map(|t| jaro_winkler_prepared(&q, &PreparedText::new(&t.text), params, &mut scratch))
        .fold(0.0, f64::max))
}

/// Dense ids for the characters of a fixed set of texts. Texts encoded
/// against a shared alphabet take a faster matching path.
#[derive(Debug, Clone, Default)]
pub struct Alphabet {
    ids: HashMap<char, u8>,
}

impl Alphabet {
    /// Ids are assigned in character order; at most 256 characters get one.
    pub fn from_texts<'a, I>(texts: I) -> Self
    where
        I: IntoIterator<Item = &'a str>,
    {
        let chars: BTreeSet<char> = texts.into_iter().flat_map(str::chars).collect();
        Alphabet {
            ids: chars
                .into_iter()
                .take(256)
                .enumerate()
                .map(|(i, c)| (c, i as u8))
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn encode(&self, text: &str) -> EncodedText {
        let prepared = PreparedText::new(text);
        let fast = (prepared.len() <= 128)
            .then(|| {
                prepared
                    .chars
                    .iter()
                    .map(|c| self.ids.get(c).copied())
                    .collect::<Option<Vec<u8>>>()
            })
            .flatten()
            .map(|ids| {
                let mut masks = vec![0u128; self.len()];
                let mut counts = vec![0u8; self.len()];
                for (pos, &id) in ids.iter().enumerate() {
                    masks[id as usize] |= 1u128 << pos;
                    counts[id as usize] += 1;
                }
                FastText { ids, masks, counts }
            });
        EncodedText { prepared, fast }
    }
}

/// A string encoded against an [`Alphabet`].
#[derive(Debug, Clone)]
pub struct EncodedText {
    prepared: PreparedText,
    // None for texts over 128 characters or with characters outside the
    // alphabet
    fast: Option<FastText>,
}

#[derive(Debug, Clone)]
struct FastText {
    ids: Vec<u8>,
    // per-id position masks and occurrence counts
    masks: Vec<u128>,
    counts: Vec<u8>,
}

impl EncodedText {
    pub fn prepared(&self) -> &PreparedText {
        &self.prepared
    }

    pub fn has_fast_path(&self) -> bool {
        self.fast.is_some()
    }
}

// Matched positions of s1 and consumed positions of s2.
fn match_flags(s1: &[u8], s2: &[u8], s2_masks: &[u128]) -> (u128, u128) {
    let len1 = s1.len();
    let len2 = s2.len();
    let window = (len1.max(len2) / 2).saturating_sub(1);
    // positions [i - window, i + window] of s2, slid one step per character
    let first_hi = (window + 1).min(len2);
    let mut in_window: u128 = if first_hi == 128 {
        !0
    } else {
        (1u128 << first_hi) - 1
    };
    let mut consumed = 0u128;
    let mut matched = 0u128;
    for (i, &id) in s1.iter().enumerate() {
        if i > 0 {
            if i + window < len2 {
                in_window |= 1u128 << (i + window);
            }
            if i > window {
                in_window &= !(1u128 << (i - window - 1));
            }
        }
        let candidates = s2_masks[id as usize] & !consumed & in_window;
        if candidates != 0 {
            consumed |= candidates & candidates.wrapping_neg();
            matched |= 1u128 << i;
        }
    }
    (matched, consumed)
}

fn count_disagreements(s1: &[u8], s2: &[u8], mut matched: u128, mut consumed: u128) -> usize {
    let mut n = 0;
    while matched != 0 {
        let i = matched.trailing_zeros() as usize;
        let j = consumed.trailing_zeros() as usize;
        if s1[i] != s2[j] {
            n += 1;
        }
        matched &= matched - 1;
        consumed &= consumed - 1;
    }
    n
}

fn common_prefix_ids(a: &[u8], b: &[u8]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// Jaro-Winkler between two texts encoded against the same alphabet.
pub fn jaro_winkler_encoded(
    s1: &EncodedText,
    s2: &EncodedText,
    params: &JaroWinklerParams,
    scratch: &mut Scratch,
) -> f64 {
    match (&s1.fast, &s2.fast) {
        (Some(x), Some(y)) if !x.ids.is_empty() && !y.ids.is_empty() => {
            let (a, b) = (&x.ids, &y.ids);
            let (matched, consumed) = match_flags(a, b, &y.masks);
            let stats = MatchStats {
                m: matched.count_ones() as usize,
                twice_t: count_disagreements(a, b, matched, consumed),
                len1: a.len(),
                len2: b.len(),
            };
            params.apply_prefix(stats.jaro(), common_prefix_ids(a, b))
        }
        _ => jaro_winkler_prepared(&s1.prepared, &s2.prepared, params, scratch),
    }
}

fn encode_sentences(doc: &Document, alphabet: &Alphabet) -> Result<Vec<EncodedText>> {
    if doc.sentences.is_empty() {
        return Err(Error::NoSentences(doc.id.clone()));
    }
    Ok(doc
        .sentences
        .iter()
        .map(|s| alphabet.encode(&s.text))
        .collect())
}

fn sentence_texts<'a>(
    docs: impl IntoIterator<Item = &'a Document>,
) -> impl Iterator<Item = &'a str> {
    docs.into_iter()
        .flat_map(|d| d.sentences.iter().map(|s| s.text.as_str()))
}

// Upper bound on the Jaro-Winkler of a fast-path pair: every match pairs
// equal characters, and the best case has no transpositions. The prefix
// bonus is non-decreasing in the Jaro score.
fn score_bound(x: &FastText, y: &FastText, params: &JaroWinklerParams) -> f64 {
    let shared: usize = x
        .counts
        .iter()
        .zip(&y.counts)
        .map(|(&p, &q)| p.min(q) as usize)
        .sum();
    optimistic_score(x, y, shared, params)
}

fn optimistic_score(x: &FastText, y: &FastText, m: usize, params: &JaroWinklerParams) -> f64 {
    let stats = MatchStats {
        m,
        twice_t: 0,
        len1: x.ids.len(),
        len2: y.ids.len(),
    };
    params.apply_prefix(stats.jaro(), common_prefix_ids(&x.ids, &y.ids))
}

// Jaro-Winkler of a fast-path pair, or None when it provably cannot exceed
// `floor`.
fn bounded_score(
    x: &FastText,
    y: &FastText,
    params: &JaroWinklerParams,
    floor: f64,
) -> Option<f64> {
    let (a, b) = (&x.ids, &y.ids);
    let (matched, consumed) = match_flags(a, b, &y.masks);
    let m = matched.count_ones() as usize;
    if optimistic_score(x, y, m, params) <= floor {
        return None;
    }
    let stats = MatchStats {
        m,
        twice_t: count_disagreements(a, b, matched, consumed),
        len1: a.len(),
        len2: b.len(),
    };
    Some(params.apply_prefix(stats.jaro(), common_prefix_ids(a, b)))
}

// Both directed scores from one pass over the sentence pairs. Pairs that
// cannot raise either running maximum are skipped; each row visits its most
// promising pairs first so the maxima rise early. The maxima do not depend on
// visiting order, so results are exact.
fn encoded_similarity(
    a: &[EncodedText],
    b: &[EncodedText],
    params: &JaroWinklerParams,
    policy: &AggregationPolicy,
    scratch: &mut Scratch,
) -> f64 {
    let mut best_a = vec![0.0f64; a.len()];
    let mut best_b = vec![0.0f64; b.len()];
    let mut order: Vec<(f64, usize)> = Vec::with_capacity(b.len());
    for (i, sa) in a.iter().enumerate() {
        order.clear();
        order.extend(
            b.iter()
                .enumerate()
                .map(|(j, sb)| match (&sa.fast, &sb.fast) {
                    (Some(x), Some(y)) if !x.ids.is_empty() && !y.ids.is_empty() => {
                        (score_bound(x, y, params), j)
                    }
                    _ => (f64::INFINITY, j),
                }),
        );
        order.sort_unstable_by(|p, q| q.0.total_cmp(&p.0).then(p.1.cmp(&q.1)));
        for &(bound, j) in &order {
            let floor = best_a[i].min(best_b[j]);
            if bound <= floor {
                continue;
            }
            let sb = &b[j];
            let s = match (&sa.fast, &sb.fast) {
                (Some(x), Some(y)) if !x.ids.is_empty() && !y.ids.is_empty() => {
                    match bounded_score(x, y, params, floor) {
                        Some(s) => s,
                        None => continue,
                    }
                }
                _ => jaro_winkler_prepared(&sa.prepared, &sb.prepared, params, scratch),
            };
            if s > best_a[i] {
                best_a[i] = s;
            }
            if s > best_b[j] {
                best_b[j] = s;
            }
        }
    }
    (policy.aggregate(&best_a) + policy.aggregate(&best_b)) / 2.0
}

/// Symmetrized directed similarity: each sentence of one document is scored
/// by its best match in the other, the per-sentence bests are reduced with
/// `policy`, and the two directions are averaged.
pub fn document_similarity(
    a: &Document,
    b: &Document,
    params: &JaroWinklerParams,
    policy: &AggregationPolicy,
) -> Result<f64> {
    let alphabet = Alphabet::from_texts(sentence_texts([a, b]));
    let pa = encode_sentences(a, &alphabet)?;
    let pb = encode_sentences(b, &alphabet)?;
    Ok(encoded_similarity(
        &pa,
        &pb,
        params,
        policy,
        &mut Scratch::default(),
    ))
}

/// Document-by-document similarity over documents sorted by id. The upper
/// triangle is computed (in parallel) and mirrored; the diagonal is 1.
pub fn similarity_matrix(
    docs: &[Document],
    params: &JaroWinklerParams,
    policy: &AggregationPolicy,
) -> Result<SimilarityMatrix> {
    if docs.len() < 2 {
        return Err(Error::TooFewDocuments {
            required: 2,
            actual: docs.len(),
        });
    }
    let mut sorted: Vec<&Document> = docs.iter().collect();
    sorted.sort_by(|a, b| a.id.cmp(&b.id));
    let alphabet = Alphabet::from_texts(sentence_texts(sorted.iter().copied()));
    let encoded = sorted
        .iter()
        .map(|d| encode_sentences(d, &alphabet))
        .collect::<Result<Vec<_>>>()?;

    let n = sorted.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let scores: Vec<f64> = pairs
        .par_iter()
        .map_init(Scratch::default, |scratch, &(i, j)| {
            encoded_similarity(&encoded[i], &encoded[j], params, policy, scratch)
        })
        .collect();

    let mut values = vec![0.0; n * n];
    for i in 0..n {
        values[i * n + i] = 1.0;
    }
    for (&(i, j), &s) in pairs.iter().zip(&scores) {
        values[i * n + j] = s;
        values[j * n + i] = s;
    }
    let labels: Vec<String> = sorted.iter().map(|d| d.id.clone()).collect();
    SimilarityMatrix::new(labels.clone(), labels, values)
}
