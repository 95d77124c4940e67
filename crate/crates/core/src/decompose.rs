//! ADE and sign classification of weight sequences, minimal multiset
//! partitions `h(d)`, `q(d)`, and the Rouquier dimension bounds they give.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use thiserror::Error;

use crate::weightcalc::WeightSequence;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AdeType {
    A(u64),
    D4,
    E6,
    E8,
}

impl AdeType {
    /// Number of vertices of the Dynkin diagram.
    pub fn rank(self) -> usize {
        match self {
            AdeType::A(m) => m as usize,
            AdeType::D4 => 4,
            AdeType::E6 => 6,
            AdeType::E8 => 8,
        }
    }
}

impl fmt::Display for AdeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AdeType::A(m) => write!(f, "A{m}"),
            AdeType::D4 => write!(f, "D4"),
            AdeType::E6 => write!(f, "E6"),
            AdeType::E8 => write!(f, "E8"),
        }
    }
}

/// `(2,...,2,a) -> A_{a-1}`, `(2,...,2,3,b) -> D4/E6/E8` for `b = 3/4/5`.
pub fn classify_ade(d: &WeightSequence) -> Option<AdeType> {
    classify_entries(d.entries())
}

fn classify_entries(sorted: &[u64]) -> Option<AdeType> {
    let rest: Vec<u64> = sorted.iter().copied().filter(|&x| x != 2).collect();
    match rest.as_slice() {
        [] => Some(AdeType::A(1)),
        [a] => Some(AdeType::A(a - 1)),
        [3, 3] => Some(AdeType::D4),
        [3, 4] => Some(AdeType::E6),
        [3, 5] => Some(AdeType::E8),
        _ => None,
    }
}

/// `Σ 1/d_i <= 1`.
pub fn is_nonpositive(d: &WeightSequence) -> bool {
    reciprocal_sum(d.entries()) <= BigRational::one()
}

fn reciprocal_sum(entries: &[u64]) -> BigRational {
    entries.iter().map(|&x| BigRational::new(BigInt::one(), BigInt::from(x))).sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PartPredicate {
    Ade,
    Nonpositive,
}

impl PartPredicate {
    pub fn as_str(self) -> &'static str {
        match self {
            PartPredicate::Ade => "ADE",
            PartPredicate::Nonpositive => "nonpositive",
        }
    }

    fn holds(self, sorted: &[u64]) -> bool {
        match self {
            PartPredicate::Ade => classify_entries(sorted).is_some(),
            PartPredicate::Nonpositive => reciprocal_sum(sorted) <= BigRational::one(),
        }
    }

    /// No partition of `sorted` into valid parts has fewer parts than this.
    fn lower_bound(self, sorted: &[u64]) -> usize {
        if sorted.is_empty() {
            return 0;
        }
        let lb = match self {
            PartPredicate::Ade => {
                // a part holds at most two entries other than 2, and then one of them is a 3
                let m = sorted.iter().filter(|&&x| x != 2).count();
                let threes = sorted.iter().filter(|&&x| x == 3).count();
                m - threes.min(m / 2)
            }
            PartPredicate::Nonpositive => {
                let s = reciprocal_sum(sorted);
                s.ceil().to_integer().to_usize().unwrap_or(usize::MAX)
            }
        };
        lb.max(1)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub memo_entries: usize,
    /// Relaxation bound at the root.
    pub root_lower_bound: usize,
    /// True when the search hit the node limit and fell back to a greedy cover.
    pub truncated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionCertificate {
    pub parts: Vec<WeightSequence>,
    pub predicate: PartPredicate,
    pub size: usize,
    pub minimal: bool,
    pub stats: SearchStats,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchLimits {
    pub node_limit: u64,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { node_limit: 5_000_000 }
    }
}

pub fn min_partition(d: &WeightSequence, predicate: PartPredicate) -> PartitionCertificate {
    min_partition_with(d, predicate, SearchLimits::default())
}

pub fn min_partition_with(d: &WeightSequence, predicate: PartPredicate, limits: SearchLimits) -> PartitionCertificate {
    let mut s = Search::new(d.entries(), predicate, limits);
    let full = s.counts.clone();
    let root_lower_bound = predicate.lower_bound(d.entries());
    let parts = match s.best(&full) {
        Some(_) => s.reconstruct(full),
        None => s.greedy(full),
    };
    let truncated = s.exhausted;
    let size = parts.len();
    PartitionCertificate {
        parts: parts.into_iter().map(|p| WeightSequence::new(p).expect("parts are nonempty")).collect(),
        predicate,
        size,
        minimal: !truncated || size == root_lower_bound,
        stats: SearchStats { nodes: s.nodes, memo_entries: s.memo.len(), root_lower_bound, truncated },
    }
}

type Counts = Vec<u32>;

struct Search {
    values: Vec<u64>,
    counts: Counts,
    predicate: PartPredicate,
    memo: HashMap<Counts, usize>,
    valid: HashMap<Counts, bool>,
    nodes: u64,
    limit: u64,
    exhausted: bool,
}

impl Search {
    fn new(sorted: &[u64], predicate: PartPredicate, limits: SearchLimits) -> Self {
        let mut values: Vec<u64> = sorted.to_vec();
        values.dedup();
        let counts = values.iter().map(|v| sorted.iter().filter(|&x| x == v).count() as u32).collect();
        Search {
            values,
            counts,
            predicate,
            memo: HashMap::new(),
            valid: HashMap::new(),
            nodes: 0,
            limit: limits.node_limit,
            exhausted: false,
        }
    }

    fn expand(&self, c: &[u32]) -> Vec<u64> {
        c.iter().zip(&self.values).flat_map(|(&k, &v)| std::iter::repeat_n(v, k as usize)).collect()
    }

    fn is_valid(&mut self, part: &Counts) -> bool {
        if let Some(&b) = self.valid.get(part) {
            return b;
        }
        let b = self.predicate.holds(&self.expand(part));
        self.valid.insert(part.clone(), b);
        b
    }

    /// Sub-multisets of `state` that are valid parts; with `anchor` they must
    /// contain one copy of the smallest remaining value. Larger parts first.
    fn candidate_parts(&mut self, state: &Counts, anchor: bool) -> Vec<Counts> {
        let first = state.iter().position(|&k| k > 0);
        let mut out = Vec::new();
        let mut cur = vec![0u32; state.len()];
        if anchor {
            let Some(f) = first else { return out };
            cur[f] = 1;
        }
        self.enumerate(state, 0, &mut cur, first, anchor, &mut out);
        out.sort_by_key(|p| std::cmp::Reverse(p.iter().sum::<u32>()));
        out
    }

    fn enumerate(
        &mut self,
        state: &Counts,
        i: usize,
        cur: &mut Counts,
        first: Option<usize>,
        anchor: bool,
        out: &mut Vec<Counts>,
    ) {
        if i == state.len() {
            if cur.iter().any(|&k| k > 0) && self.is_valid(cur) {
                out.push(cur.clone());
            }
            return;
        }
        let lo = if anchor && Some(i) == first { 1 } else { 0 };
        for k in lo..=state[i] {
            cur[i] = k;
            self.enumerate(state, i + 1, cur, first, anchor, out);
        }
        cur[i] = lo;
    }

    /// Exact minimum number of parts, or `None` once the node limit is hit.
    fn best(&mut self, state: &Counts) -> Option<usize> {
        if state.iter().all(|&k| k == 0) {
            return Some(0);
        }
        if let Some(&v) = self.memo.get(state) {
            return Some(v);
        }
        self.nodes += 1;
        if self.nodes > self.limit {
            self.exhausted = true;
            return None;
        }
        let lb = self.predicate.lower_bound(&self.expand(state));
        let mut best = usize::MAX;
        for part in self.candidate_parts(state, true) {
            let rest: Counts = state.iter().zip(&part).map(|(a, b)| a - b).collect();
            if best != usize::MAX && 1 + self.predicate.lower_bound(&self.expand(&rest)) >= best {
                continue;
            }
            let sub = self.best(&rest)?;
            best = best.min(1 + sub);
            if best == lb {
                break;
            }
        }
        self.memo.insert(state.clone(), best);
        Some(best)
    }

    /// Lexicographically smallest sorted list among the optimal partitions.
    fn reconstruct(&mut self, mut state: Counts) -> Vec<Vec<u64>> {
        let mut parts = Vec::new();
        while state.iter().any(|&k| k > 0) {
            let target = self.best(&state).expect("already computed") - 1;
            let mut options: Vec<(Vec<u64>, Counts)> = Vec::new();
            for part in self.candidate_parts(&state, false) {
                let rest: Counts = state.iter().zip(&part).map(|(a, b)| a - b).collect();
                self.limit = u64::MAX;
                if self.best(&rest) == Some(target) {
                    options.push((self.expand(&part), rest));
                }
            }
            let (part, rest) = options.into_iter().min().expect("an optimal part exists");
            parts.push(part);
            state = rest;
        }
        parts
    }

    /// Repeatedly removes the largest valid part containing the smallest entry.
    fn greedy(&mut self, mut state: Counts) -> Vec<Vec<u64>> {
        let mut parts = Vec::new();
        while state.iter().any(|&k| k > 0) {
            let part = self.candidate_parts(&state, true).into_iter().next().expect("singletons are valid");
            parts.push(self.expand(&part));
            state = state.iter().zip(&part).map(|(a, b)| a - b).collect();
        }
        parts.sort();
        parts
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RouquierVerdict {
    pub n_plus_1: usize,
    pub lower: i64,
    pub upper: i64,
    pub exact: Option<i64>,
    pub conjecture_holds: bool,
    pub q_certificate: PartitionCertificate,
    pub h_certificate: PartitionCertificate,
}

pub fn rouquier_verdict(d: &WeightSequence) -> RouquierVerdict {
    rouquier_verdict_with(d, SearchLimits::default())
}

pub fn rouquier_verdict_with(d: &WeightSequence, limits: SearchLimits) -> RouquierVerdict {
    let q_certificate = min_partition_with(d, PartPredicate::Nonpositive, limits);
    let h_certificate = min_partition_with(d, PartPredicate::Ade, limits);
    let n_plus_1 = d.len();
    let (h, q) = (h_certificate.size as i64, q_certificate.size as i64);
    let lower = n_plus_1 as i64 - 2 * q;
    let upper = h - 1;
    let exact = (lower == upper).then_some(lower);
    RouquierVerdict {
        n_plus_1,
        lower,
        upper,
        exact,
        conjecture_holds: n_plus_1 as i64 == h + 2 * q - 1,
        q_certificate,
        h_certificate,
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundError {
    #[error("no generation times given")]
    Empty,
    #[error("count {count} does not match {len} generation times")]
    CountMismatch { count: usize, len: usize },
}

/// Generation time of `⊕ G_i` for a decomposition with pieces of the given
/// generation times: `Σ t_i + s - 1`.
pub fn sum_generator_bound(times: &[i64], s: usize) -> Result<i64, BoundError> {
    if times.is_empty() {
        return Err(BoundError::Empty);
    }
    if s != times.len() {
        return Err(BoundError::CountMismatch { count: s, len: times.len() });
    }
    Ok(times.iter().sum::<i64>() + s as i64 - 1)
}

/// The Dynkin type of each part, in order.
pub fn part_types(cert: &PartitionCertificate) -> Vec<Option<AdeType>> {
    cert.parts.iter().map(classify_ade).collect()
}
