//! Strategy cascade for one prime word, and the multifold driver.
//!
//! For a word `w` the cascade tries, in order: catalog recipes listing `w`
//! or its reverse; sandwiches over pairs of named subgroups; transversal
//! and quotient lifts from named subgroups; the catalog's anchored search
//! configurations; generic search when the group is small enough.
//! Certificates of subgroups are found by the same cascade on the
//! subgroup's own table, and all results are memoized.

use std::collections::HashMap;
use std::sync::Arc;
use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use super::{generic_search, GenericOptions, Limits, Mode};
use crate::catalog::{sandwich, transport, transversal_lift, Catalog, CatalogGroup, CatalogSet, Entry};
use crate::certify::{lift_by_quotient, refine_by_subgroup, Certificate};
use crate::group::GroupTable;
use crate::patterns::{is_prime, prime_index_discard, PatternPlan, PrimeWord};
use crate::perm::Perm;
use crate::structure::{quotient_group, Subgroup};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CascadeError {
    #[error("no strategy produced a certificate for {word:?}: {}", diagnostics.join("; "))]
    AllStrategiesFailed { word: Vec<usize>, diagnostics: Vec<String> },
}

#[derive(Debug, Clone)]
pub struct CascadeOptions {
    /// Largest order handed to generic search.
    pub generic_cap: usize,
    /// Wall-clock limit for each generic search call.
    pub generic_budget: Duration,
    /// Overall deadline for everything the cascade does.
    pub budget: Option<Duration>,
    pub threads: Option<usize>,
}

impl Default for CascadeOptions {
    fn default() -> Self {
        CascadeOptions {
            generic_cap: super::DEFAULT_GENERIC_CAP,
            generic_budget: Duration::from_secs(60),
            budget: Some(super::DEFAULT_BUDGET),
            threads: None,
        }
    }
}

/// A certificate with the chain of strategies that produced it, outermost
/// first; nested steps are indented.
#[derive(Debug, Clone)]
pub struct Solved {
    pub certificate: Certificate,
    pub provenance: Vec<String>,
}

type MemoKey = (Vec<Perm>, Vec<usize>);

pub struct Cascade<'c> {
    catalog: &'c Catalog,
    options: CascadeOptions,
    deadline: Option<Instant>,
    memo: HashMap<MemoKey, Option<Solved>>,
    identified: HashMap<Vec<Perm>, Option<Arc<CatalogGroup>>>,
}

fn word_str(w: &[usize]) -> String {
    let parts: Vec<String> = w.iter().map(usize::to_string).collect();
    format!("({})", parts.join(","))
}

impl<'c> Cascade<'c> {
    pub fn new(catalog: &'c Catalog, options: CascadeOptions) -> Self {
        let deadline = options.budget.map(|b| Instant::now() + b);
        Cascade {
            catalog,
            options,
            deadline,
            memo: HashMap::new(),
            identified: HashMap::new(),
        }
    }

    fn remaining(&self) -> Option<Duration> {
        self.deadline.map(|d| d.saturating_duration_since(Instant::now()))
    }

    fn out_of_time(&self) -> bool {
        self.remaining().is_some_and(|r| r.is_zero())
    }

    /// A certificate of `g` with pattern `word`.
    pub fn solve(&mut self, g: &Arc<GroupTable>, word: &[usize]) -> Result<Solved, CascadeError> {
        let mut diagnostics = Vec::new();
        match self.solve_inner(g, word, &mut diagnostics) {
            Some(s) => Ok(s),
            None => Err(CascadeError::AllStrategiesFailed {
                word: word.to_vec(),
                diagnostics,
            }),
        }
    }

    fn identify(&mut self, g: &GroupTable) -> Option<Arc<CatalogGroup>> {
        let key = g.elements().to_vec();
        if let Some(hit) = self.identified.get(&key) {
            return hit.clone();
        }
        let found = self.catalog.identify(g);
        self.identified.insert(key, found.clone());
        found
    }

    fn solve_inner(&mut self, g: &Arc<GroupTable>, word: &[usize], diag: &mut Vec<String>) -> Option<Solved> {
        let n = g.order();
        if word.iter().product::<usize>() != n || word.contains(&1) {
            diag.push(format!("{} does not multiply out to {n}", word_str(word)));
            return None;
        }
        if word.len() <= 1 {
            return Some(Solved {
                certificate: Certificate::whole(g),
                provenance: vec!["whole group".into()],
            });
        }
        let key = (g.elements().to_vec(), word.to_vec());
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        let solved = self.run_strategies(g, word, diag);
        if let Some(s) = &solved {
            debug_assert!(s.certificate.verify().is_valid());
        }
        self.memo.insert(key, solved.clone());
        solved
    }

    /// Certificate of `h` over its own table, for refining a factor.
    fn solve_sub(&mut self, h: &Subgroup, word: &[usize], trail: &mut Vec<String>) -> Option<Certificate> {
        let (table, _) = h.table().ok()?;
        let mut diag = Vec::new();
        let s = self.solve_inner(&table, word, &mut diag)?;
        trail.push(format!("order {} {}: {}", h.order(), word_str(word), s.provenance[0]));
        trail.extend(s.provenance[1..].iter().map(|p| format!("  {p}")));
        Some(s.certificate)
    }

    fn run_strategies(&mut self, g: &Arc<GroupTable>, word: &[usize], diag: &mut Vec<String>) -> Option<Solved> {
        let rev: Vec<usize> = word.iter().rev().copied().collect();
        let cg = self.identify(g);
        if let Some(cg) = &cg {
            if cg.refuted.iter().any(|r| r == word || *r == rev) {
                diag.push(format!("{} is refuted for {}", word_str(word), cg.id));
                return None;
            }
            let catalog = self.catalog;
            let ids = catalog.entries_of(&cg.id);
            let entries: Vec<Entry> = ids.iter().filter_map(|id| catalog.load(id).ok()).collect();

            // Catalog recipes that list this word.
            for e in entries.iter().filter(|e| e.words.iter().any(|w| *w == word || *w == rev)) {
                if let Some(s) = self.via_catalog(g, cg, e, word) {
                    return Some(s);
                }
            }
            if self.out_of_time() {
                diag.push("budget exhausted".into());
                return None;
            }

            // Sandwiches over named subgroups.
            for (na, a) in &cg.subgroups {
                for (nb, b) in &cg.subgroups {
                    if na == nb || a.order() * b.order() > g.order() {
                        continue;
                    }
                    let mut trail = Vec::new();
                    let made = sandwich(a, b, word, &mut |h, w| self.solve_sub(h, w, &mut trail));
                    if let Some(c) = made.and_then(|c| transport(&c, g)) {
                        let mut provenance = vec![format!("sandwich {na}·T·{nb} in {}", cg.id)];
                        provenance.extend(trail.into_iter().map(|t| format!("  {t}")));
                        return Some(Solved { certificate: c, provenance });
                    }
                }
            }

            // Lifts from named subgroups.
            for (name, h) in &cg.subgroups {
                let mut trail = Vec::new();
                let lifted = if is_prime(h.index() as u64) {
                    transversal_lift(h, word, &mut |s, w| self.solve_sub(s, w, &mut trail))
                } else {
                    None
                };
                if let Some(c) = lifted.and_then(|c| transport(&c, g)) {
                    let mut provenance = vec![format!("transversal lift from {name} (index {}) in {}", h.index(), cg.id)];
                    provenance.extend(trail.into_iter().map(|t| format!("  {t}")));
                    return Some(Solved { certificate: c, provenance });
                }
                if h.order() > 1 && h.index() > 1 && h.is_normal() {
                    if let Some(s) = self.quotient_lift(h, word) {
                        if let Some(c) = transport(&s.certificate, g) {
                            let mut provenance = vec![format!("quotient lift over {name} in {}", cg.id)];
                            provenance.extend(s.provenance.into_iter().map(|t| format!("  {t}")));
                            return Some(Solved { certificate: c, provenance });
                        }
                    }
                }
            }

            // Anchored searches from the catalog.
            for e in entries.iter().filter(|e| e.search.is_some()) {
                if let Some(s) = self.via_search(g, cg, e, word) {
                    return Some(s);
                }
            }
        }

        if self.out_of_time() {
            diag.push("budget exhausted".into());
            return None;
        }
        if g.order() > self.options.generic_cap {
            diag.push(format!("order {} is above the generic cap {}", g.order(), self.options.generic_cap));
            return None;
        }
        let budget = match self.remaining() {
            Some(r) => r.min(self.options.generic_budget),
            None => self.options.generic_budget,
        };
        let limits = Limits {
            budget: Some(budget),
            max_solutions: None,
            threads: self.options.threads,
        };
        let options = GenericOptions {
            cap: self.options.generic_cap,
            conjugacy_reduction: true,
        };
        match generic_search(g, word, Mode::FindFirst, &limits, options) {
            Ok(out) => match out.solutions.into_iter().next() {
                Some(c) => Some(Solved {
                    certificate: c,
                    provenance: vec![format!("generic search on order {} ({} nodes)", g.order(), out.stats.nodes)],
                }),
                None => {
                    let what = if out.exhaustive { "no factorization exists" } else { "budget hit" };
                    diag.push(format!("generic search on order {}: {what}", g.order()));
                    None
                }
            },
            Err(e) => {
                diag.push(format!("generic search: {e}"));
                None
            }
        }
    }

    fn via_catalog(&mut self, g: &Arc<GroupTable>, cg: &CatalogGroup, e: &Entry, word: &[usize]) -> Option<Solved> {
        let mut trail = Vec::new();
        let made = self
            .catalog
            .realize(e, word, &mut |h, w| self.solve_sub(h, w, &mut trail))
            .ok()
            .flatten()?;
        let c = transport(&made, g)?;
        let mut provenance = vec![format!("catalog {} in {}", e.id, cg.id)];
        provenance.extend(trail.into_iter().map(|t| format!("  {t}")));
        Some(Solved { certificate: c, provenance })
    }

    /// Runs a catalog search configuration in find-first mode and refines
    /// its subgroup anchors.
    fn via_search(&mut self, g: &Arc<GroupTable>, cg: &CatalogGroup, e: &Entry, word: &[usize]) -> Option<Solved> {
        let spec = e.search.as_ref()?;
        let limits = Limits {
            budget: Some(Duration::from_secs(spec.budget_secs).min(self.remaining().unwrap_or(Duration::MAX))),
            max_solutions: None,
            threads: self.options.threads,
        };
        // Check the shape before paying for a search.
        let mut probe = e.clone();
        let c_size = spec.c.unwrap_or(0);
        for (name, set) in probe.sets.iter_mut() {
            if *name != spec.first && *name != spec.last {
                let size = if probe.certificate_order.iter().position(|n| n == name) == Some(1) { spec.b } else { c_size };
                *set = CatalogSet::Elements(crate::factor_set::FactorSet::new(size.max(1), 0..size.max(1)));
            }
        }
        let sizes: Vec<usize> = probe.certificate_order.iter().map(|n| probe.sets[n].set().len()).collect();
        let fits = fits_shape(&probe, &sizes, word) || fits_shape(&probe, &sizes, &word.iter().rev().copied().collect::<Vec<_>>());
        if !fits {
            return None;
        }
        let out = e.run_search(Mode::FindFirst, &limits)?.ok()?;
        let out_strategy = out.strategy;
        let found = out.solutions.into_iter().next()?;
        let mut filled = e.clone();
        filled.recipe = None;
        let factors = found.factors();
        if factors.len() != filled.certificate_order.len() {
            return None;
        }
        for (name, f) in filled.certificate_order.clone().iter().zip(factors) {
            if *name != spec.first && *name != spec.last {
                filled.sets.insert(name.clone(), CatalogSet::Elements(f.clone()));
            }
        }
        let mut s = self.via_catalog(g, cg, &filled, word)?;
        s.provenance[0] = format!("{} search from {} in {}", out_strategy, e.id, cg.id);
        Some(s)
    }

    /// `G/N` certified for the word with one run of letters removed, then
    /// pulled back with `N` inserted and refined.
    fn quotient_lift(&mut self, n: &Subgroup, word: &[usize]) -> Option<Solved> {
        let q = quotient_group(n).ok()?;
        for start in 0..word.len() {
            let mut p = 1;
            for end in start..word.len() {
                p *= word[end];
                if p > n.order() {
                    break;
                }
                if p != n.order() {
                    continue;
                }
                let rest: Vec<usize> = word[..start].iter().chain(&word[end + 1..]).copied().collect();
                let mut diag = Vec::new();
                let Some(qs) = self.solve_inner(&q.table, &rest, &mut diag) else { continue };
                let Ok(base) = lift_by_quotient(&qs.certificate, n, start) else { continue };
                let mut trail = Vec::new();
                let Some(nc) = self.solve_sub(n, &word[start..=end], &mut trail) else { continue };
                let Ok(c) = refine_by_subgroup(&base, start, &nc) else { continue };
                let mut provenance = vec![format!("quotient of order {} {}: {}", q.table.order(), word_str(&rest), qs.provenance[0])];
                provenance.extend(trail);
                return Some(Solved { certificate: c, provenance });
            }
        }
        None
    }
}

fn fits_shape(e: &Entry, sizes: &[usize], word: &[usize]) -> bool {
    let mut pos = 0;
    for (name, &m) in e.certificate_order.iter().zip(sizes) {
        match &e.sets[name] {
            CatalogSet::Subgroup(_) => {
                let mut p = 1;
                while p < m && pos < word.len() {
                    p *= word[pos];
                    pos += 1;
                }
                if p != m {
                    return false;
                }
            }
            CatalogSet::Product { parts, .. } => {
                for part in parts {
                    if word.get(pos) != Some(&part.len()) {
                        return false;
                    }
                    pos += 1;
                }
            }
            CatalogSet::Elements(_) if m == 1 => {}
            CatalogSet::Elements(_) => {
                if word.get(pos) != Some(&m) {
                    return false;
                }
                pos += 1;
            }
        }
    }
    pos == word.len()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING-KEBAB-CASE")]
pub enum MultifoldVerdict {
    MultifoldCertified,
    Incomplete,
}

#[derive(Debug, Clone)]
pub struct ClassResult {
    pub word: PrimeWord,
    /// Set when a prime-index license already accounts for the class.
    pub discarded_by: Option<String>,
    pub solved: Option<Solved>,
    pub failure: Option<String>,
    pub elapsed: Duration,
}

#[derive(Debug, Clone)]
pub struct MultifoldReport {
    pub order: usize,
    pub plan: Option<PatternPlan>,
    pub classes: Vec<ClassResult>,
    pub verdict: MultifoldVerdict,
    pub elapsed: Duration,
}

impl MultifoldReport {
    pub fn certified(&self) -> usize {
        self.classes.iter().filter(|c| c.solved.is_some()).count()
    }
}

/// Tries to certify one word from every reversal class of `|G|`. Classes
/// removed by a catalog license are still certified, by the lift itself.
pub fn multifold(catalog: &Catalog, g: &Arc<GroupTable>, options: CascadeOptions) -> MultifoldReport {
    let start = Instant::now();
    let n = g.order();
    if n < 2 {
        return MultifoldReport {
            order: n,
            plan: None,
            classes: Vec::new(),
            verdict: MultifoldVerdict::MultifoldCertified,
            elapsed: start.elapsed(),
        };
    }
    let mut plan = PatternPlan::new(n as u64).expect("order at least 2");
    if let Some(cg) = catalog.identify(g) {
        for (_, index) in &cg.licenses {
            if let Ok(p) = prime_index_discard(&plan, *index as u64, true) {
                plan = p;
            }
        }
    }
    let mut words: Vec<(PrimeWord, Option<String>)> = plan.classes.iter().map(|w| (w.clone(), None)).collect();
    words.extend(plan.discarded.iter().map(|d| (d.word.clone(), Some(d.reason.clone()))));
    words.sort_by(|a, b| a.0.cmp(&b.0));

    let mut cascade = Cascade::new(catalog, options);
    let mut classes = Vec::with_capacity(words.len());
    for (word, discarded_by) in words {
        let t = Instant::now();
        let result = cascade.solve(g, &word.as_sizes());
        let (solved, failure) = match result {
            Ok(s) => (Some(s), None),
            Err(e) => (None, Some(e.to_string())),
        };
        classes.push(ClassResult {
            word,
            discarded_by,
            solved,
            failure,
            elapsed: t.elapsed(),
        });
    }
    let verdict = if classes.iter().all(|c| c.solved.is_some()) {
        MultifoldVerdict::MultifoldCertified
    } else {
        MultifoldVerdict::Incomplete
    };
    MultifoldReport {
        order: n,
        plan: Some(plan),
        classes,
        verdict,
        elapsed: start.elapsed(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_word_needs_no_catalog() {
        let cat = Catalog::builtin();
        let g = Arc::new(GroupTable::from_cycle_strings(5, &["(1,2,3,4,5)"]).unwrap());
        let s = Cascade::new(&cat, CascadeOptions::default()).solve(&g, &[5]).unwrap();
        assert_eq!(s.certificate.pattern(), vec![5]);
    }

    #[test]
    fn lemma_3_2_word_by_sandwich() {
        let cat = Catalog::builtin();
        let g = Arc::clone(&cat.group("group-168").unwrap().table);
        let s = Cascade::new(&cat, CascadeOptions::default()).solve(&g, &[2, 2, 2, 7, 3]).unwrap();
        assert!(s.certificate.verify().is_valid());
        assert_eq!(s.certificate.pattern(), vec![2, 2, 2, 7, 3]);
        assert!(s.provenance[0].contains("lemma-3.2"), "{:?}", s.provenance);
    }

    #[test]
    fn refuted_words_fail_fast() {
        let cat = Catalog::builtin();
        let g = Arc::clone(&cat.group("a4").unwrap().table);
        let err = Cascade::new(&cat, CascadeOptions::default()).solve(&g, &[2, 3, 2]).unwrap_err();
        assert!(matches!(err, CascadeError::AllStrategiesFailed { .. }));
    }

    #[test]
    fn s4_is_multifold() {
        let cat = Catalog::builtin();
        let g = Arc::clone(&cat.group("s4").unwrap().table);
        let r = multifold(&cat, &g, CascadeOptions::default());
        assert_eq!(r.verdict, MultifoldVerdict::MultifoldCertified);
        assert_eq!(r.classes.len(), 2);
        for c in &r.classes {
            assert!(c.solved.as_ref().unwrap().provenance[0].starts_with("generic"));
        }
    }

    #[test]
    fn quotient_lift_in_s4() {
        let cat = Catalog::builtin();
        let g = Arc::new(GroupTable::from_cycle_strings(4, &["(1,2,3,4)", "(1,2)"]).unwrap());
        let v4 = Subgroup::from_perms(&g, &[Perm::parse("(1,2)(3,4)", 4).unwrap(), Perm::parse("(1,3)(2,4)", 4).unwrap()]).unwrap();
        let mut c = Cascade::new(&cat, CascadeOptions::default());
        let s = c.quotient_lift(&v4, &[2, 2, 2, 3]).unwrap();
        assert!(s.certificate.verify().is_valid());
        assert_eq!(s.certificate.pattern(), vec![2, 2, 2, 3]);
    }
}
