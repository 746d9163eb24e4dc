//! Exhaustive enumeration of preference lists that park under a rule.
//!
//! The search walks `[n]^n` depth-first in lexicographic order, placing one
//! car per level. A car that cannot park kills every completion of the
//! current prefix, so dead prefixes are pruned without changing the result.
//! Monotone filters restrict the candidate range at each level, so only
//! monotone tuples are ever built.
//!
//! Parallel runs split the tree at a fixed prefix depth, scan each prefix
//! independently and merge in prefix order. Results are therefore identical
//! for every worker count.

use std::ops::RangeInclusive;
use std::sync::Arc;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rule::{simulate, PreferenceList, RuleKind};

/// Environment variable holding the worker count.
pub const THREADS_ENV: &str = "VPF_THREADS";

/// Widest street the bitmask search supports.
const MAX_SEARCH_N: usize = 63;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EnumFilter {
    #[default]
    All,
    NonDecreasing,
    NonIncreasing,
}

impl EnumFilter {
    pub fn accepts(self, prefs: &[usize]) -> bool {
        match self {
            EnumFilter::All => true,
            EnumFilter::NonDecreasing => prefs.windows(2).all(|w| w[0] <= w[1]),
            EnumFilter::NonIncreasing => prefs.windows(2).all(|w| w[1] <= w[0]),
        }
    }
}

/// Size ceilings for the exhaustive operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Largest `n` for unfiltered scans (cost grows like `n^n`).
    pub brute_all: usize,
    /// Largest `n` for monotone scans.
    pub brute_monotone: usize,
    /// Largest `n` for the permutation-invariance scan.
    pub invariant_scan: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            brute_all: 9,
            brute_monotone: 22,
            invariant_scan: 6,
        }
    }
}

impl Limits {
    fn check_scan(&self, n: usize, filter: EnumFilter) -> Result<()> {
        let (what, ceiling) = match filter {
            EnumFilter::All => ("exhaustive scan", self.brute_all),
            _ => ("monotone scan", self.brute_monotone),
        };
        let ceiling = ceiling.min(MAX_SEARCH_N);
        if n > ceiling {
            return Err(Error::ResourceGuard { what, n, ceiling });
        }
        Ok(())
    }
}

/// Per-car tallies of which car ends in the last spot, for the 1-vacillating
/// rule. Index `i - 1` holds the value for car `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetTally {
    pub n: usize,
    /// Car `i` prefers spot `n` and parks there.
    pub by_paren: Vec<BigUint>,
    /// Car `i` prefers spot `n - 1` and parks in spot `n`.
    pub by_bracket: Vec<BigUint>,
}

impl SubsetTally {
    pub fn paren(&self, i: usize) -> &BigUint {
        &self.by_paren[i - 1]
    }

    pub fn bracket(&self, i: usize) -> &BigUint {
        &self.by_bracket[i - 1]
    }

    /// Lists where car `i` occupies spot `n`.
    pub fn spot(&self, i: usize) -> BigUint {
        self.paren(i) + self.bracket(i)
    }

    pub fn by_spot(&self) -> Vec<BigUint> {
        (1..=self.n).map(|i| self.spot(i)).collect()
    }

    pub fn total(&self) -> BigUint {
        self.by_paren.iter().chain(&self.by_bracket).sum()
    }
}

/// Members of `VPF_n(k)` all of whose rearrangements also park.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantScan {
    pub n: usize,
    pub k: usize,
    pub members: Vec<PreferenceList>,
}

impl InvariantScan {
    pub fn count(&self) -> usize {
        self.members.len()
    }
}

/// A prefix of placed cars.
#[derive(Clone, Debug)]
struct Partial {
    prefs: Vec<usize>,
    spots: Vec<usize>,
    occupied: u64,
}

impl Partial {
    fn empty(n: usize) -> Self {
        Self {
            prefs: Vec::with_capacity(n),
            spots: Vec::with_capacity(n),
            occupied: 0,
        }
    }

    fn push(&mut self, pref: usize, spot: usize) {
        self.prefs.push(pref);
        self.spots.push(spot);
        self.occupied |= 1 << spot;
    }

    fn pop(&mut self) {
        self.prefs.pop();
        if let Some(spot) = self.spots.pop() {
            self.occupied &= !(1 << spot);
        }
    }

    fn len(&self) -> usize {
        self.prefs.len()
    }
}

#[derive(Clone, Copy, Debug)]
struct Search {
    n: usize,
    rule: RuleKind,
    filter: EnumFilter,
}

impl Search {
    fn candidates(&self, partial: &Partial) -> RangeInclusive<usize> {
        let last = partial.prefs.last().copied();
        match self.filter {
            EnumFilter::All => 1..=self.n,
            EnumFilter::NonDecreasing => last.unwrap_or(1)..=self.n,
            EnumFilter::NonIncreasing => 1..=last.unwrap_or(self.n),
        }
    }

    fn place(&self, partial: &Partial, pref: usize) -> Option<usize> {
        let occupied = partial.occupied;
        self.rule
            .choose_spot(pref, self.n, |s| occupied & (1 << s) == 0)
    }
}

/// Depth-first walker over live prefixes, yielding each prefix of length
/// `target` in lexicographic order. It never backtracks below its seed.
struct Walker {
    search: Search,
    partial: Partial,
    base: usize,
    target: usize,
    // next candidate preference for each open level above `base`
    next: Vec<usize>,
    at_leaf: bool,
    done: bool,
}

impl Walker {
    fn new(search: Search, seed: Partial, target: usize) -> Self {
        let base = seed.len();
        let mut walker = Self {
            search,
            partial: seed,
            base,
            target,
            next: Vec::with_capacity(target.saturating_sub(base)),
            at_leaf: false,
            done: false,
        };
        if base < target {
            let lo = *walker.search.candidates(&walker.partial).start();
            walker.next.push(lo);
        }
        walker
    }

    fn advance(&mut self) -> Option<&Partial> {
        if self.done {
            return None;
        }
        if self.base == self.target {
            self.done = true;
            return Some(&self.partial);
        }
        if self.at_leaf {
            self.partial.pop();
            self.at_leaf = false;
        }
        while let Some(&pref) = self.next.last() {
            let hi = *self.search.candidates(&self.partial).end();
            if pref > hi {
                self.next.pop();
                if self.next.is_empty() {
                    self.done = true;
                    return None;
                }
                self.partial.pop();
                continue;
            }
            *self.next.last_mut().unwrap() += 1;
            if let Some(spot) = self.search.place(&self.partial, pref) {
                self.partial.push(pref, spot);
                if self.partial.len() == self.target {
                    self.at_leaf = true;
                    return Some(&self.partial);
                }
                let lo = *self.search.candidates(&self.partial).start();
                self.next.push(lo);
            }
        }
        self.done = true;
        None
    }
}

/// Lazy lexicographic stream of parking preference lists.
pub struct Lexicographic {
    walker: Walker,
}

impl Iterator for Lexicographic {
    type Item = PreferenceList;

    fn next(&mut self) -> Option<PreferenceList> {
        self.walker
            .advance()
            .map(|p| PreferenceList::from_trusted(p.prefs.clone()))
    }
}

/// Exhaustive enumerator with a fixed worker pool and size ceilings.
#[derive(Clone)]
pub struct Enumerator {
    threads: usize,
    limits: Limits,
    pool: Arc<rayon::ThreadPool>,
}

impl std::fmt::Debug for Enumerator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Enumerator")
            .field("threads", &self.threads)
            .field("limits", &self.limits)
            .finish()
    }
}

impl Default for Enumerator {
    fn default() -> Self {
        Self::from_env()
    }
}

/// Worker count from [`THREADS_ENV`], falling back to the number of
/// logical processors.
pub fn threads_from_env() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&t| t > 0)
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|p| p.get())
                .unwrap_or(1)
        })
}

impl Enumerator {
    pub fn new(threads: usize) -> Self {
        Self::with_limits(threads, Limits::default())
    }

    pub fn with_limits(threads: usize, limits: Limits) -> Self {
        let threads = threads.max(1);
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .thread_name(|i| format!("vpf-worker-{i}"))
            .build()
            .expect("failed to build worker pool");
        Self {
            threads,
            limits,
            pool: Arc::new(pool),
        }
    }

    pub fn from_env() -> Self {
        Self::new(threads_from_env())
    }

    pub fn threads(&self) -> usize {
        self.threads
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }

    fn search(&self, n: usize, rule: RuleKind, filter: EnumFilter) -> Result<Search> {
        rule.validate(n)?;
        self.limits.check_scan(n, filter)?;
        Ok(Search { n, rule, filter })
    }

    /// Smallest depth `d <= n` with `n^d >= threads * 64`.
    fn split_depth(&self, n: usize) -> usize {
        let want = (self.threads * 64) as u128;
        let mut cells = 1u128;
        let mut depth = 0;
        while depth < n && cells < want {
            cells *= n as u128;
            depth += 1;
        }
        depth
    }

    /// Folds every parking list with `leaf`, one accumulator per prefix
    /// cell, returned in prefix order.
    fn fold_cells<T, I, F>(&self, search: Search, init: I, leaf: F) -> Vec<T>
    where
        T: Send,
        I: Fn() -> T + Sync,
        F: Fn(&mut T, &Partial) + Sync,
    {
        let n = search.n;
        let scan = |seed: Partial| {
            let mut acc = init();
            let mut walker = Walker::new(search, seed, n);
            while let Some(p) = walker.advance() {
                leaf(&mut acc, p);
            }
            acc
        };
        if self.threads == 1 {
            return vec![scan(Partial::empty(n))];
        }
        let depth = self.split_depth(n);
        let mut frontier = Vec::new();
        let mut walker = Walker::new(search, Partial::empty(n), depth);
        while let Some(p) = walker.advance() {
            frontier.push(p.clone());
        }
        self.pool
            .install(|| frontier.into_par_iter().map(scan).collect())
    }

    /// Number of lists in `[n]^n` that pass `filter` and park under `rule`.
    pub fn count_brute(&self, n: usize, rule: RuleKind, filter: EnumFilter) -> Result<BigUint> {
        let search = self.search(n, rule, filter)?;
        let cells = self.fold_cells(search, || 0u64, |acc, _| *acc += 1);
        Ok(cells.into_iter().map(BigUint::from).sum())
    }

    /// Sequential lazy stream of passing lists in lexicographic order.
    pub fn iter(&self, n: usize, rule: RuleKind, filter: EnumFilter) -> Result<Lexicographic> {
        let search = self.search(n, rule, filter)?;
        Ok(Lexicographic {
            walker: Walker::new(search, Partial::empty(n), n),
        })
    }

    /// All passing lists in lexicographic order, truncated at `limit`.
    pub fn enumerate(
        &self,
        n: usize,
        rule: RuleKind,
        filter: EnumFilter,
        limit: Option<usize>,
    ) -> Result<Vec<PreferenceList>> {
        if let Some(limit) = limit {
            return Ok(self.iter(n, rule, filter)?.take(limit).collect());
        }
        let search = self.search(n, rule, filter)?;
        let cells = self.fold_cells(search, Vec::new, |acc, p| {
            acc.push(PreferenceList::from_trusted(p.prefs.clone()))
        });
        Ok(cells.into_iter().flatten().collect())
    }

    /// Tallies, for the 1-vacillating rule, which car ends in spot `n` and
    /// whether it preferred `n` or `n - 1`.
    pub fn tally_subsets(&self, n: usize) -> Result<SubsetTally> {
        if n == 0 {
            return Err(Error::LengthTooSmall { n, min: 1 });
        }
        let search = self.search(n, RuleKind::Vacillating(1), EnumFilter::All)?;
        let cells = self.fold_cells(
            search,
            || (vec![0u64; n], vec![0u64; n]),
            |(paren, bracket), p| {
                let car = p
                    .spots
                    .iter()
                    .position(|&s| s == n)
                    .expect("a parked list fills spot n");
                if p.prefs[car] == n {
                    paren[car] += 1;
                } else {
                    bracket[car] += 1;
                }
            },
        );
        let mut by_paren = vec![BigUint::default(); n];
        let mut by_bracket = vec![BigUint::default(); n];
        for (paren, bracket) in cells {
            for i in 0..n {
                by_paren[i] += paren[i];
                by_bracket[i] += bracket[i];
            }
        }
        Ok(SubsetTally {
            n,
            by_paren,
            by_bracket,
        })
    }

    /// Lists in `VPF_n(k)` whose every rearrangement is also in `VPF_n(k)`.
    ///
    /// Invariance only depends on the multiset of entries, so each sorted
    /// representative is tested once and, when invariant, contributes all of
    /// its distinct rearrangements.
    pub fn permutation_invariant_scan(&self, n: usize, k: usize) -> Result<InvariantScan> {
        let rule = RuleKind::Vacillating(k);
        rule.validate(n)?;
        let ceiling = self.limits.invariant_scan.min(MAX_SEARCH_N);
        if n > ceiling {
            return Err(Error::ResourceGuard {
                what: "permutation-invariance scan",
                n,
                ceiling,
            });
        }
        let mut members = Vec::new();
        // a multiset whose sorted order fails cannot be invariant
        for sorted in self.iter(n, rule, EnumFilter::NonDecreasing)? {
            let arrangements = distinct_permutations(sorted.prefs());
            let all_park = arrangements.iter().all(|prefs| {
                let list = PreferenceList::from_trusted(prefs.clone());
                simulate(&list, rule)
                    .map(|o| o.is_success())
                    .unwrap_or(false)
            });
            if all_park {
                members.extend(arrangements.into_iter().map(PreferenceList::from_trusted));
            }
        }
        members.sort();
        Ok(InvariantScan { n, k, members })
    }
}

/// Distinct rearrangements of `items`, in lexicographic order.
fn distinct_permutations(items: &[usize]) -> Vec<Vec<usize>> {
    let mut current = items.to_vec();
    current.sort_unstable();
    let mut out = vec![current.clone()];
    while next_permutation(&mut current) {
        out.push(current.clone());
    }
    out
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(pivot) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let pivot = pivot - 1;
    let swap = (pivot + 1..v.len())
        .rev()
        .find(|&j| v[j] > v[pivot])
        .expect("a larger element exists right of the pivot");
    v.swap(pivot, swap);
    v[pivot + 1..].reverse();
    true
}
