//! Normalized backtracking over all factor tuples of a pattern.
//!
//! Every factor contains `e` and the rest of each factor is chosen in
//! increasing index order. The first and last factors are fixed before the
//! middle ones; each new middle element `x` adds the block `P·x·A_k`, where
//! `P` is the product of the factors already completed, and that block
//! must miss everything covered so far.

use std::sync::Arc;
use std::time::Instant;

use fixedbitset::FixedBitSet;

use super::anchored::place_block;
use super::{in_pool, scan, Budget, Combinations, Limits, Mode, SearchError, SearchOutcome, UnitResult};
use crate::certify::{divisibility_prune, CertifyError, Certificate, End};
use crate::factor_set::FactorSet;
use crate::group::GroupTable;

/// Largest group order searched without an explicit override.
pub const DEFAULT_GENERIC_CAP: usize = 60;

#[derive(Debug, Clone, Copy)]
pub struct GenericOptions {
    pub cap: usize,
    /// Only try first factors that are least among their conjugates.
    /// Conjugating a factorization factor by factor gives another one, so
    /// this keeps existence intact but changes find-all counts.
    pub conjugacy_reduction: bool,
}

impl Default for GenericOptions {
    fn default() -> Self {
        GenericOptions {
            cap: DEFAULT_GENERIC_CAP,
            conjugacy_reduction: false,
        }
    }
}

fn end_choices(g: &GroupTable, size: usize, end: End) -> impl Iterator<Item = Vec<usize>> + '_ {
    let n = g.order();
    Combinations::new(n - 1, size - 1).filter_map(move |comb| {
        let set: Vec<usize> = std::iter::once(0).chain(comb.into_iter().map(|i| i + 1)).collect();
        divisibility_prune(g, &FactorSet::new(n, set.iter().copied()), end).then_some(set)
    })
}

/// Whether the sorted set is lexicographically least among its conjugates.
pub(crate) fn least_conjugate(g: &GroupTable, set: &[usize]) -> bool {
    let mut conj = Vec::with_capacity(set.len());
    (0..g.order()).all(|x| {
        conj.clear();
        conj.extend(set.iter().map(|&s| g.conjugate(s, x)));
        conj.sort_unstable();
        set <= conj.as_slice()
    })
}

struct Dfs<'a> {
    g: &'a GroupTable,
    sizes: &'a [usize],
    last: &'a [usize],
    budget: &'a Budget,
    first_only: bool,
    covered: FixedBitSet,
    factors: Vec<Vec<usize>>,
    scratch: Vec<usize>,
    out: UnitResult<Vec<Vec<usize>>>,
}

impl Dfs<'_> {
    /// Extends middle factor `f` (position in `sizes`) whose elements after
    /// `e` must exceed `floor`. Returns true when the search must stop.
    fn rec(&mut self, prefix: &[usize], f: usize, floor: usize) -> bool {
        self.out.stats.nodes += 1;
        if self.out.stats.nodes.is_multiple_of(4096) && self.budget.expired() {
            self.out.complete = false;
            return true;
        }
        let k = self.sizes.len();
        if f == k - 1 {
            let mut sol = self.factors.clone();
            sol.push(self.last.to_vec());
            self.out.stats.candidates += 1;
            self.out.found.push(sol);
            return self.first_only;
        }
        if self.factors[f].len() == self.sizes[f] {
            let g = self.g;
            let next: Vec<usize> = prefix
                .iter()
                .flat_map(|&p| self.factors[f].iter().map(move |&y| g.mul(p, y)))
                .collect();
            if f + 1 == k - 1 {
                return self.rec(&next, f + 1, 0);
            }
            self.factors.push(vec![0]);
            let stop = self.rec(&next, f + 1, 0);
            self.factors.pop();
            return stop;
        }
        let n = self.g.order();
        let need = self.sizes[f] - self.factors[f].len();
        for x in floor + 1..n {
            if n - x < need {
                break;
            }
            if self.covered.contains(x) {
                continue;
            }
            if !self.try_add(prefix, f, x) {
                continue;
            }
            let stop = self.rec(prefix, f, x);
            self.remove_last(prefix, f);
            if stop {
                return true;
            }
        }
        false
    }

    fn try_add(&mut self, prefix: &[usize], f: usize, x: usize) -> bool {
        let g = self.g;
        let last = self.last;
        self.out.stats.checks += 1;
        let block = prefix.iter().flat_map(|&p| {
            let px = g.mul(p, x);
            last.iter().map(move |&y| g.mul(px, y))
        });
        if place_block(&mut self.covered, block, &mut self.scratch) {
            self.factors[f].push(x);
            true
        } else {
            false
        }
    }

    fn remove_last(&mut self, prefix: &[usize], f: usize) {
        let g = self.g;
        let x = self.factors[f].pop().expect("element to remove");
        for &p in prefix {
            let px = g.mul(p, x);
            for &y in self.last {
                self.covered.set(g.mul(px, y), false);
            }
        }
    }
}

/// Exhaustive normalized search for factorizations with the given pattern.
pub fn generic_search(
    g: &Arc<GroupTable>,
    pattern: &[usize],
    mode: Mode,
    limits: &Limits,
    options: GenericOptions,
) -> Result<SearchOutcome, SearchError> {
    let start = Instant::now();
    let n = g.order();
    if pattern.is_empty() || pattern.contains(&0) || pattern.iter().product::<usize>() != n {
        return Err(SearchError::BadPattern(pattern.to_vec()));
    }
    if n > options.cap {
        return Err(SearchError::TooLarge { order: n, cap: options.cap });
    }
    if pattern.len() == 1 {
        return Ok(SearchOutcome {
            strategy: "generic",
            solutions: vec![Certificate::whole(g)],
            stats: Default::default(),
            formula_candidates: None,
            exhaustive: mode == Mode::FindAll,
            elapsed: start.elapsed(),
        });
    }
    let k = pattern.len();
    let budget = Budget::new(limits.budget);
    let gt: &GroupTable = g;
    let firsts = end_choices(gt, pattern[0], End::First)
        .filter(|f| !options.conjugacy_reduction || least_conjugate(gt, f));
    // A unit is a first factor, a last factor, and when the first middle
    // factor is nontrivial, its least non-identity element.
    let pivots: Vec<Option<usize>> = if k > 2 && pattern[1] > 1 { (1..n).map(Some).collect() } else { vec![None] };
    let units = firsts.flat_map(|first| {
        let pivots = pivots.clone();
        end_choices(gt, pattern[k - 1], End::Last).flat_map(move |last| {
            let first = first.clone();
            pivots.clone().into_iter().map(move |p| (first.clone(), last.clone(), p))
        })
    });
    let first_only = mode == Mode::FindFirst;

    let work = |(first, last, pivot): (Vec<usize>, Vec<usize>, Option<usize>)| -> UnitResult<Vec<Vec<usize>>> {
        let mut dfs = Dfs {
            g: gt,
            sizes: pattern,
            last: &last,
            budget: &budget,
            first_only,
            covered: FixedBitSet::with_capacity(n),
            factors: vec![first.clone()],
            scratch: Vec::new(),
            out: UnitResult::new(),
        };
        let block = first.iter().flat_map(|&p| last.iter().map(move |&y| gt.mul(p, y)));
        dfs.out.stats.checks += 1;
        if !place_block(&mut dfs.covered, block, &mut Vec::new()) {
            dfs.out.stats.pruned_prefixes += 1;
            return dfs.out;
        }
        match pivot {
            None => {
                if k > 2 {
                    dfs.factors.push(vec![0]);
                }
                dfs.rec(&first, 1, 0);
            }
            Some(x) => {
                dfs.factors.push(vec![0]);
                if !dfs.covered.contains(x) && dfs.try_add(&first, 1, x) {
                    dfs.rec(&first, 1, x);
                } else {
                    dfs.out.stats.pruned_prefixes += 1;
                }
            }
        }
        dfs.out
    };

    let scanned = in_pool(limits.threads, || scan(units, mode, limits.max_solutions, &budget, work))?;
    let mut solutions = Vec::with_capacity(scanned.found.len());
    for factors in scanned.found {
        let sets = factors.into_iter().map(|f| FactorSet::new(n, f)).collect();
        let cert = Certificate::new(Arc::clone(g), sets)?;
        let verdict = cert.verify();
        if !verdict.is_valid() {
            return Err(CertifyError::ConstructionFailed(verdict).into());
        }
        solutions.push(cert);
    }
    Ok(SearchOutcome {
        strategy: "generic",
        solutions,
        stats: scanned.stats,
        formula_candidates: None,
        exhaustive: scanned.exhaustive,
        elapsed: start.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(degree: usize, gens: &[&str]) -> Arc<GroupTable> {
        Arc::new(GroupTable::from_cycle_strings(degree, gens).unwrap())
    }

    /// Independent oracle: all normalized tuples by plain enumeration.
    fn brute_count(g: &GroupTable, pattern: &[usize]) -> usize {
        let n = g.order();
        let choices: Vec<Vec<Vec<usize>>> = pattern
            .iter()
            .map(|&m| {
                Combinations::new(n - 1, m - 1)
                    .map(|c| std::iter::once(0).chain(c.into_iter().map(|i| i + 1)).collect())
                    .collect()
            })
            .collect();
        let mut count = 0;
        let mut idx = vec![0; pattern.len()];
        'outer: loop {
            let mut seen = vec![false; n];
            let mut prods = vec![0usize];
            let mut ok = true;
            for (f, &i) in idx.iter().enumerate() {
                prods = prods
                    .iter()
                    .flat_map(|&p| choices[f][i].iter().map(move |&y| g.mul(p, y)))
                    .collect();
            }
            for &p in &prods {
                if seen[p] {
                    ok = false;
                    break;
                }
                seen[p] = true;
            }
            count += ok as usize;
            for f in (0..idx.len()).rev() {
                idx[f] += 1;
                if idx[f] < choices[f].len() {
                    continue 'outer;
                }
                idx[f] = 0;
            }
            break;
        }
        count
    }

    #[test]
    fn counts_match_plain_enumeration() {
        let s3 = table(3, &["(1,2,3)", "(1,2)"]);
        let c6 = table(6, &["(1,2,3,4,5,6)"]);
        let a4 = table(4, &["(1,2,3)", "(2,3,4)"]);
        for (g, p) in [(&s3, vec![2, 3]), (&s3, vec![3, 2]), (&c6, vec![2, 3]), (&a4, vec![4, 3]), (&a4, vec![2, 2, 3])] {
            let out = generic_search(g, &p, Mode::FindAll, &Limits::default(), GenericOptions::default()).unwrap();
            assert!(out.exhaustive);
            assert_eq!(out.solutions.len(), brute_count(g, &p), "{p:?}");
        }
    }

    #[test]
    fn s4_has_two_three_four() {
        let s4 = table(4, &["(1,2,3,4)", "(1,2)"]);
        let out = generic_search(&s4, &[2, 3, 4], Mode::FindFirst, &Limits::default(), GenericOptions::default()).unwrap();
        assert_eq!(out.solutions.len(), 1);
        assert_eq!(out.solutions[0].pattern(), vec![2, 3, 4]);
    }

    #[test]
    fn a4_has_no_two_three_two() {
        let a4 = table(4, &["(1,2,3)", "(2,3,4)"]);
        let out = generic_search(&a4, &[2, 3, 2], Mode::FindAll, &Limits::default(), GenericOptions::default()).unwrap();
        assert!(out.exhaustive);
        assert!(out.solutions.is_empty());
    }

    #[test]
    fn whole_group_pattern() {
        let a4 = table(4, &["(1,2,3)", "(2,3,4)"]);
        let out = generic_search(&a4, &[12], Mode::FindAll, &Limits::default(), GenericOptions::default()).unwrap();
        assert_eq!(out.solutions[0].pattern(), vec![12]);
    }

    #[test]
    fn find_first_ignores_thread_count() {
        let s4 = table(4, &["(1,2,3,4)", "(1,2)"]);
        let one = generic_search(&s4, &[2, 2, 3, 2], Mode::FindFirst, &Limits::default().with_threads(1), GenericOptions::default()).unwrap();
        let many = generic_search(&s4, &[2, 2, 3, 2], Mode::FindFirst, &Limits::default().with_threads(4), GenericOptions::default()).unwrap();
        assert_eq!(one.solutions[0].key(), many.solutions[0].key());
        assert_eq!(one.stats, many.stats);
    }

    #[test]
    fn cap_is_enforced() {
        let a5 = table(5, &["(1,2,3,4,5)", "(1,2,3)"]);
        let opts = GenericOptions { cap: 24, ..Default::default() };
        assert_eq!(
            generic_search(&a5, &[2, 30], Mode::FindFirst, &Limits::default(), opts).unwrap_err(),
            SearchError::TooLarge { order: 60, cap: 24 }
        );
    }
}
