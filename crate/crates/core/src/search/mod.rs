//! Search engines for factorizations: anchored searches with fixed end
//! factors, the compatibility-graph search, generic normalized
//! backtracking, refutation, and the strategy cascade.

pub mod anchored;
pub mod cascade;
pub mod case3;
pub mod generic;
pub mod independent;
pub mod refute;

use std::sync::atomic::{AtomicBool, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::certify::{CertifyError, Certificate};

pub use anchored::{case1_search, case2_search, case2_search_reversed, end_pair_candidates};
pub use case3::{case3_search, CompatibilityGraph};
pub use generic::{generic_search, GenericOptions, DEFAULT_GENERIC_CAP};
pub use refute::{refute, RefuteReport, RefuteVerdict};

/// Default wall-clock budget per task.
pub const DEFAULT_BUDGET: Duration = Duration::from_secs(30 * 60);

/// Work units handed to the thread pool per round.
const CHUNK: usize = 512;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("invalid anchors: {0}")]
    AnchorInvalid(String),
    #[error("block product A·B·D has repeated elements")]
    PrefixCollision,
    #[error("group order {order} exceeds the generic search cap {cap}")]
    TooLarge { order: usize, cap: usize },
    #[error("pattern {0:?} does not multiply out to the group order")]
    BadPattern(Vec<usize>),
    #[error("engine produced an invalid certificate: {0}")]
    Certify(#[from] CertifyError),
    #[error("could not build thread pool: {0}")]
    ThreadPool(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    FindFirst,
    FindAll,
}

#[derive(Debug, Clone)]
pub struct Limits {
    pub budget: Option<Duration>,
    pub max_solutions: Option<usize>,
    /// `None` uses every core.
    pub threads: Option<usize>,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            budget: Some(DEFAULT_BUDGET),
            max_solutions: None,
            threads: None,
        }
    }
}

impl Limits {
    pub fn with_budget(mut self, budget: Duration) -> Self {
        self.budget = Some(budget);
        self
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = Some(threads);
        self
    }
}

/// Work counters. `candidates` counts every candidate tuple of the search
/// space, including those discarded wholesale with a pruned prefix, so a
/// finished find-all run reports exactly the size of the space.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub candidates: u64,
    pub checks: u64,
    pub pruned_prefixes: u64,
    pub graph_builds: u64,
    pub nodes: u64,
}

impl SearchStats {
    pub(crate) fn add(&mut self, o: &SearchStats) {
        self.candidates += o.candidates;
        self.checks += o.checks;
        self.pruned_prefixes += o.pruned_prefixes;
        self.graph_builds += o.graph_builds;
        self.nodes += o.nodes;
    }
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub strategy: &'static str,
    pub solutions: Vec<Certificate>,
    pub stats: SearchStats,
    /// Size of the search space predicted by the counting formula.
    pub formula_candidates: Option<u64>,
    /// True only if the whole space was covered without hitting a limit or
    /// stopping at a first solution.
    pub exhaustive: bool,
    pub elapsed: Duration,
}

/// Wall-clock deadline shared by all workers of one task.
pub struct Budget {
    deadline: Option<Instant>,
    expired: AtomicBool,
}

impl Budget {
    pub fn new(limit: Option<Duration>) -> Self {
        Budget {
            deadline: limit.map(|d| Instant::now() + d),
            expired: AtomicBool::new(false),
        }
    }

    pub fn unlimited() -> Self {
        Self::new(None)
    }

    pub fn expired(&self) -> bool {
        if self.expired.load(Ordering::Relaxed) {
            return true;
        }
        match self.deadline {
            Some(d) if Instant::now() >= d => {
                self.expired.store(true, Ordering::Relaxed);
                true
            }
            _ => false,
        }
    }
}

/// What one work unit produced.
pub(crate) struct UnitResult<T> {
    pub found: Vec<T>,
    pub stats: SearchStats,
    pub complete: bool,
}

impl<T> UnitResult<T> {
    pub fn new() -> Self {
        UnitResult {
            found: Vec::new(),
            stats: SearchStats::default(),
            complete: true,
        }
    }
}

pub(crate) struct ScanResult<T> {
    pub found: Vec<T>,
    pub stats: SearchStats,
    pub exhaustive: bool,
}

/// Runs `work` over `units` in ordered chunks on the current pool.
///
/// Results are consumed in unit order, so find-first returns the first
/// solution in enumeration order and its counters cover exactly the units
/// up to it, whatever the thread count.
pub(crate) fn scan<W, T, I, F>(units: I, mode: Mode, max_solutions: Option<usize>, budget: &Budget, work: F) -> ScanResult<T>
where
    W: Send,
    T: Send,
    I: IntoIterator<Item = W>,
    F: Fn(W) -> UnitResult<T> + Sync,
{
    let mut units = units.into_iter();
    let mut out = ScanResult {
        found: Vec::new(),
        stats: SearchStats::default(),
        exhaustive: true,
    };
    let cap = match mode {
        Mode::FindFirst => Some(1),
        Mode::FindAll => max_solutions,
    };
    loop {
        if budget.expired() {
            out.exhaustive = false;
            return out;
        }
        let chunk: Vec<W> = units.by_ref().take(CHUNK).collect();
        if chunk.is_empty() {
            return out;
        }
        let results: Vec<UnitResult<T>> = chunk.into_par_iter().map(&work).collect();
        for r in results {
            out.stats.add(&r.stats);
            out.found.extend(r.found);
            if !r.complete {
                out.exhaustive = false;
                return out;
            }
            if let Some(c) = cap {
                if out.found.len() >= c {
                    out.found.truncate(c);
                    out.exhaustive = false;
                    return out;
                }
            }
        }
    }
}

/// Runs `f` on a pool with the requested thread count.
pub(crate) fn in_pool<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> Result<R, SearchError> {
    match threads {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| SearchError::ThreadPool(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

/// `n choose k`, saturating at `u64::MAX`.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// `k`-subsets of `0..n` as increasing vectors, in lexicographic order.
pub struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        Combinations {
            n,
            current: (k <= n).then(|| (0..k).collect()),
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let k = out.len();
        let mut next = out.clone();
        let mut i = k;
        while i > 0 {
            i -= 1;
            if next[i] < self.n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                break;
            }
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(26, 6), 230_230);
        assert_eq!(binomial(84, 1), 84);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(3, 4), 0);
        assert!(binomial(26, 1) * binomial(144, 6) > 289_000_000_000);
        assert!(binomial(34, 2) * binomial(324, 4) > 252_000_000_000);
    }

    #[test]
    fn combinations_match_binomial() {
        for n in 0..9 {
            for k in 0..=n + 1 {
                let all: Vec<Vec<usize>> = Combinations::new(n, k).collect();
                assert_eq!(all.len() as u64, binomial(n, k), "n={n} k={k}");
                assert!(all.windows(2).all(|w| w[0] < w[1]));
            }
        }
    }

    #[test]
    fn scan_find_first_is_order_stable() {
        let budget = Budget::unlimited();
        let r = scan(0..5000u32, Mode::FindFirst, None, &budget, |x| {
            let mut u = UnitResult::new();
            u.stats.candidates = 1;
            if x % 977 == 5 {
                u.found.push(x);
            }
            u
        });
        assert_eq!(r.found, vec![5]);
        assert_eq!(r.stats.candidates, 6);
    }
}
