//! Exhaustive nonexistence proofs.
//!
//! Patterns `(2, n/4, 2)` in groups whose even-order elements are all
//! involutions get a parity argument: with `A = {e, a}` a subgroup and
//! `C = {e, c}`, the set `S = AB` is a union of orbits `{x, ax}` and
//! `G = S ⊔ Sc`, i.e. exactly one of `y`, `yc⁻¹` lies in `S` for every `y`.
//! That is a 2-colouring of the orbits, solved per pair `(a, c)`. Every
//! other pattern goes to the generic search with the first factor reduced
//! up to conjugacy.

use std::collections::VecDeque;
use std::sync::Arc;
use std::time::{Duration, Instant};

use serde::Serialize;

use super::generic::least_conjugate;
use super::{generic_search, in_pool, scan, Budget, GenericOptions, Limits, Mode, SearchError, SearchStats, UnitResult};
use crate::certify::Certificate;
use crate::factor_set::FactorSet;
use crate::group::GroupTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum RefuteVerdict {
    /// The whole space was searched and nothing exists.
    None,
    /// A certificate exists.
    Found,
    /// A limit was hit first.
    Unknown,
}

#[derive(Debug, Clone)]
pub struct RefuteReport {
    pub pattern: Vec<usize>,
    pub verdict: RefuteVerdict,
    pub method: &'static str,
    pub certificate: Option<Certificate>,
    pub stats: SearchStats,
    pub elapsed: Duration,
}

/// Whether every element of even order is an involution.
fn even_order_means_involution(g: &GroupTable) -> bool {
    (0..g.order()).all(|x| g.element_order(x) % 2 == 1 || g.element_order(x) == 2)
}

pub fn refute(g: &Arc<GroupTable>, pattern: &[usize], limits: &Limits, options: GenericOptions) -> Result<RefuteReport, SearchError> {
    let n = g.order();
    if pattern.is_empty() || pattern.iter().product::<usize>() != n {
        return Err(SearchError::BadPattern(pattern.to_vec()));
    }
    if pattern.len() == 3 && pattern[0] == 2 && pattern[2] == 2 && even_order_means_involution(g) {
        return two_colouring(g, pattern, limits);
    }
    let start = Instant::now();
    let opts = GenericOptions {
        conjugacy_reduction: true,
        ..options
    };
    let out = generic_search(g, pattern, Mode::FindFirst, limits, opts)?;
    let certificate = out.solutions.into_iter().next();
    let verdict = match (&certificate, out.exhaustive) {
        (Some(_), _) => RefuteVerdict::Found,
        (None, true) => RefuteVerdict::None,
        (None, false) => RefuteVerdict::Unknown,
    };
    Ok(RefuteReport {
        pattern: pattern.to_vec(),
        verdict,
        method: "normalized-backtracking",
        certificate,
        stats: out.stats,
        elapsed: start.elapsed(),
    })
}

fn two_colouring(g: &Arc<GroupTable>, pattern: &[usize], limits: &Limits) -> Result<RefuteReport, SearchError> {
    let start = Instant::now();
    let n = g.order();
    let budget = Budget::new(limits.budget);
    let involutions: Vec<usize> = (1..n)
        .filter(|&a| g.element_order(a) == 2 && least_conjugate(g, &[a]))
        .collect();
    let units = involutions.iter().flat_map(|&a| (1..n).map(move |c| (a, c)));
    let gt: &GroupTable = g;
    let work = |(a, c): (usize, usize)| -> UnitResult<(usize, Vec<usize>, usize)> {
        let mut res = UnitResult::new();
        res.stats.candidates += 1;
        if let Some(s) = colour(gt, a, c, &mut res.stats) {
            let b: Vec<usize> = (0..n).filter(|&y| s[y] && y < gt.mul(a, y)).collect();
            res.found.push((a, b, c));
        }
        res
    };
    let scanned = in_pool(limits.threads, || scan(units, Mode::FindFirst, None, &budget, work))?;
    let certificate = match scanned.found.into_iter().next() {
        Some((a, b, c)) => {
            let cert = Certificate::new(
                Arc::clone(g),
                vec![FactorSet::new(n, [0, a]), FactorSet::new(n, b), FactorSet::new(n, [0, c])],
            )?;
            if !cert.verify().is_valid() {
                return Err(crate::certify::CertifyError::ConstructionFailed(cert.verify()).into());
            }
            Some(cert)
        }
        None => None,
    };
    let verdict = match (&certificate, scanned.exhaustive) {
        (Some(_), _) => RefuteVerdict::Found,
        (None, true) => RefuteVerdict::None,
        (None, false) => RefuteVerdict::Unknown,
    };
    Ok(RefuteReport {
        pattern: pattern.to_vec(),
        verdict,
        method: "involution-two-colouring",
        certificate,
        stats: scanned.stats,
        elapsed: start.elapsed(),
    })
}

/// Membership vector of a set `S` with `aS = S` and `G = S ⊔ Sc`, if any.
fn colour(g: &GroupTable, a: usize, c: usize, stats: &mut SearchStats) -> Option<Vec<bool>> {
    let n = g.order();
    let cinv = g.inv(c);
    let orbit = |y: usize| y.min(g.mul(a, y));
    // Constraint graph on orbit representatives: y and yc⁻¹ differ.
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for y in 0..n {
        stats.checks += 1;
        let (u, v) = (orbit(y), orbit(g.mul(y, cinv)));
        if u == v {
            return None;
        }
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut side: Vec<Option<bool>> = vec![None; n];
    for root in (0..n).filter(|&y| orbit(y) == y) {
        if side[root].is_some() {
            continue;
        }
        side[root] = Some(true);
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            stats.nodes += 1;
            let su = side[u].expect("coloured");
            for &v in &adj[u] {
                match side[v] {
                    None => {
                        side[v] = Some(!su);
                        queue.push_back(v);
                    }
                    Some(sv) if sv == su => return None,
                    Some(_) => {}
                }
            }
        }
    }
    Some((0..n).map(|y| side[orbit(y)] == Some(true)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(degree: usize, gens: &[&str]) -> Arc<GroupTable> {
        Arc::new(GroupTable::from_cycle_strings(degree, gens).unwrap())
    }

    #[test]
    fn a4_two_three_two_is_refuted() {
        let a4 = table(4, &["(1,2,3)", "(2,3,4)"]);
        let r = refute(&a4, &[2, 3, 2], &Limits::default(), GenericOptions::default()).unwrap();
        assert_eq!(r.verdict, RefuteVerdict::None);
        assert_eq!(r.method, "involution-two-colouring");
        let r = refute(&a4, &[2, 2, 3], &Limits::default(), GenericOptions::default()).unwrap();
        assert_eq!(r.verdict, RefuteVerdict::Found);
    }

    #[test]
    fn cyclic_six_is_found() {
        let c6 = table(6, &["(1,2,3,4,5,6)"]);
        let r = refute(&c6, &[2, 3], &Limits::default(), GenericOptions::default()).unwrap();
        assert_eq!(r.verdict, RefuteVerdict::Found);
        assert!(r.certificate.unwrap().verify().is_valid());
    }

    /// The parity reduction and plain backtracking agree wherever both apply.
    #[test]
    fn colouring_agrees_with_backtracking() {
        let groups = [
            table(4, &["(1,2,3)", "(2,3,4)"]),
            table(3, &["(1,2,3)", "(1,2)"]),
            table(4, &["(1,2)(3,4)", "(1,3)(2,4)"]),
            table(6, &["(1,2)", "(3,4)", "(5,6)"]),
            table(5, &["(1,2,3,4,5)", "(2,5)(3,4)"]),
        ];
        for g in &groups {
            let n = g.order();
            if n % 4 != 0 {
                continue;
            }
            let p = [2, n / 4, 2];
            let fast = refute(g, &p, &Limits::default(), GenericOptions::default()).unwrap();
            let slow = generic_search(g, &p, Mode::FindFirst, &Limits::default(), GenericOptions::default()).unwrap();
            assert_eq!(fast.verdict == RefuteVerdict::Found, !slow.solutions.is_empty());
        }
    }

    #[test]
    fn unknown_when_out_of_time() {
        let a5 = table(5, &["(1,2,3,4,5)", "(1,2,3)"]);
        let r = refute(&a5, &[2, 3, 5, 2], &Limits::default().with_budget(Duration::ZERO), GenericOptions::default()).unwrap();
        assert_eq!(r.verdict, RefuteVerdict::Unknown);
    }
}
