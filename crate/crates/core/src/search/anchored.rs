//! Searches for `G = A·B·C·D` with the end factors fixed.
//!
//! `A` is a subgroup, so `B` only matters through the right cosets `Ab`
//! and is drawn from a right transversal with the cosets `Ax`, `x ∈ D`,
//! removed. Case 1 (both ends subgroups) draws `C` from a left transversal
//! of `D` likewise; case 2 draws it from `G ∖ ABD`. When only the last
//! factor is a subgroup the task is reversed and searched instead.

use std::sync::Arc;
use std::time::Instant;

use fixedbitset::FixedBitSet;

use super::{binomial, in_pool, scan, Budget, Combinations, Limits, Mode, SearchError, SearchOutcome, UnitResult};
use crate::certify::{reverse, CertifyError, Certificate};
use crate::factor_set::FactorSet;
use crate::group::GroupTable;
use crate::structure::{conjugate_intersection_trivial, Subgroup};

/// Candidates `d` for a two-element end factor `{e, d}` opposite the
/// subgroup `a`. `d` needs even order and must lie outside `a`; an
/// involution is dropped when some conjugate of `a` contains it, since
/// then no `A·X·{e, d}` exists. With `order_four_only` the list is cut to
/// elements of order 4 when there are any.
pub fn end_pair_candidates(a: &Subgroup, order_four_only: bool) -> Vec<usize> {
    let g = a.group();
    let mut out: Vec<usize> = (1..g.order())
        .filter(|&d| g.element_order(d).is_multiple_of(2) && !a.contains(d))
        .filter(|&d| g.element_order(d) != 2 || conjugate_intersection_trivial(a, &Subgroup::generated(g, &[d])))
        .collect();
    if order_four_only && out.iter().any(|&d| g.element_order(d) == 4) {
        out.retain(|&d| g.element_order(d) == 4);
    }
    out
}

enum Pool {
    /// Fixed candidate list for `C`.
    Fixed(Vec<usize>),
    /// `G ∖ ABD`, recomputed for each `B`.
    Complement,
}

struct Plan {
    group: Arc<GroupTable>,
    a: FactorSet,
    d: FactorSet,
    w_prime: Vec<usize>,
    b_size: usize,
    c_size: usize,
    pool: Pool,
    /// Size of the `C` pool whenever `ABD` has no repeats.
    nominal_pool: usize,
}

/// Both end factors subgroups with `A ∩ D = {e}`.
pub fn case1_search(
    a: &Subgroup,
    d: &Subgroup,
    b_size: usize,
    c_size: usize,
    mode: Mode,
    limits: &Limits,
) -> Result<SearchOutcome, SearchError> {
    check_sizes(a.group(), a.order(), b_size, c_size, d.order())?;
    let g = a.group();
    let w_prime = trimmed_right_transversal(a, d.members())?;
    let v_prime = trimmed_left_transversal(g, d, a.members())?;
    let nominal_pool = v_prime.len();
    let plan = Plan {
        group: Arc::clone(g),
        a: a.members().clone(),
        d: d.members().clone(),
        w_prime,
        b_size,
        c_size,
        pool: Pool::Fixed(v_prime),
        nominal_pool,
    };
    run(&plan, "case1", mode, limits)
}

/// First factor a subgroup, last factor a set containing `e`.
pub fn case2_search(
    a: &Subgroup,
    d: &FactorSet,
    b_size: usize,
    c_size: usize,
    mode: Mode,
    limits: &Limits,
) -> Result<SearchOutcome, SearchError> {
    let g = a.group();
    if d.universe() != g.order() {
        return Err(SearchError::AnchorInvalid("last factor belongs to another group".into()));
    }
    check_sizes(g, a.order(), b_size, c_size, d.len())?;
    let w_prime = trimmed_right_transversal(a, d)?;
    let nominal_pool = g.order() - a.order() * b_size * d.len();
    let plan = Plan {
        group: Arc::clone(g),
        a: a.members().clone(),
        d: d.clone(),
        w_prime,
        b_size,
        c_size,
        pool: Pool::Complement,
        nominal_pool,
    };
    run(&plan, "case2", mode, limits)
}

/// First factor a set containing `e`, last factor a subgroup. Searches
/// `G = D·C⁻¹·B⁻¹·A⁻¹` and reverses every solution.
pub fn case2_search_reversed(
    a: &FactorSet,
    d: &Subgroup,
    b_size: usize,
    c_size: usize,
    mode: Mode,
    limits: &Limits,
) -> Result<SearchOutcome, SearchError> {
    let g = d.group();
    if a.universe() != g.order() {
        return Err(SearchError::AnchorInvalid("first factor belongs to another group".into()));
    }
    let mut out = case2_search(d, &a.inverse(g), c_size, b_size, mode, limits)?;
    out.solutions = out
        .solutions
        .iter()
        .map(reverse)
        .collect::<Result<Vec<_>, CertifyError>>()?;
    out.strategy = "case2-reversed";
    Ok(out)
}

fn check_sizes(g: &GroupTable, a: usize, b: usize, c: usize, d: usize) -> Result<(), SearchError> {
    if b == 0 || c == 0 || a * b * c * d != g.order() {
        return Err(SearchError::AnchorInvalid(format!(
            "sizes ({a},{b},{c},{d}) do not multiply out to {}",
            g.order()
        )));
    }
    Ok(())
}

/// Right transversal of `A` without the representatives of `Ax`, `x ∈ D`.
fn trimmed_right_transversal(a: &Subgroup, d: &FactorSet) -> Result<Vec<usize>, SearchError> {
    if !d.contains_identity() {
        return Err(SearchError::AnchorInvalid("last factor must contain the identity".into()));
    }
    let ids = a.right_coset_ids();
    let mut excluded: Vec<usize> = d.iter().map(|x| ids[x]).collect();
    excluded.sort_unstable();
    excluded.dedup();
    if excluded.len() != d.len() {
        return Err(SearchError::AnchorInvalid("cosets Ax, x in D, are not distinct".into()));
    }
    Ok(a.right_transversal()
        .into_iter()
        .filter(|&r| excluded.binary_search(&ids[r]).is_err())
        .collect())
}

/// Left transversal of `D` without the representatives of `xD`, `x ∈ A`.
fn trimmed_left_transversal(g: &GroupTable, d: &Subgroup, a: &FactorSet) -> Result<Vec<usize>, SearchError> {
    let n = g.order();
    let mut ids = vec![usize::MAX; n];
    let mut next = 0;
    for x in 0..n {
        if ids[x] == usize::MAX {
            for y in d.members().iter() {
                ids[g.mul(x, y)] = next;
            }
            next += 1;
        }
    }
    let mut excluded: Vec<usize> = a.iter().map(|x| ids[x]).collect();
    excluded.sort_unstable();
    excluded.dedup();
    if excluded.len() != a.len() {
        return Err(SearchError::AnchorInvalid("cosets xD, x in A, are not distinct".into()));
    }
    Ok(d.left_transversal()
        .into_iter()
        .filter(|&r| excluded.binary_search(&ids[r]).is_err())
        .collect())
}

/// Inserts every element of `block` into `covered`; on a repeat, undoes the
/// insertions and returns false.
pub(crate) fn place_block(covered: &mut FixedBitSet, block: impl Iterator<Item = usize>, scratch: &mut Vec<usize>) -> bool {
    scratch.clear();
    for z in block {
        if covered.put(z) {
            for &y in scratch.iter() {
                covered.set(y, false);
            }
            return false;
        }
        scratch.push(z);
    }
    true
}

struct Unit<'a> {
    plan: &'a Plan,
    x: Vec<usize>,
    pool: Vec<usize>,
    first_only: bool,
    budget: &'a Budget,
    scratch: Vec<usize>,
    chosen: Vec<usize>,
    out: UnitResult<Vec<usize>>,
}

impl Unit<'_> {
    /// Chooses `need` more elements of `C` from `pool[start..]`. Returns
    /// true when the search must stop.
    fn dfs(&mut self, covered: &mut FixedBitSet, start: usize, need: usize) -> bool {
        if need == 0 {
            self.out.stats.candidates += 1;
            self.out.found.push(self.chosen.clone());
            return self.first_only;
        }
        let plan = self.plan;
        let g = &plan.group;
        let d = &plan.d;
        for i in start..self.pool.len() {
            let rest = self.pool.len() - i - 1;
            if rest + 1 < need {
                break;
            }
            self.out.stats.nodes += 1;
            if self.out.stats.nodes.is_multiple_of(4096) && self.budget.expired() {
                self.out.complete = false;
                return true;
            }
            let c = self.pool[i];
            self.out.stats.checks += 1;
            let block = self.x.iter().flat_map(|&p| {
                let pc = g.mul(p, c);
                d.iter().map(move |y| g.mul(pc, y))
            });
            if !place_block(covered, block, &mut self.scratch) {
                self.out.stats.candidates += binomial(rest, need - 1);
                continue;
            }
            self.chosen.push(c);
            let stop = self.dfs(covered, i + 1, need - 1);
            self.chosen.pop();
            let block = self.x.iter().flat_map(|&p| {
                let pc = g.mul(p, c);
                d.iter().map(move |y| g.mul(pc, y))
            });
            for z in block {
                covered.set(z, false);
            }
            if stop {
                return true;
            }
        }
        false
    }
}

type Solution = (Vec<usize>, Vec<usize>);

fn run(plan: &Plan, strategy: &'static str, mode: Mode, limits: &Limits) -> Result<SearchOutcome, SearchError> {
    let start = Instant::now();
    let g = &plan.group;
    let n = g.order();
    let c_space = binomial(plan.nominal_pool, plan.c_size - 1);
    let formula = binomial(plan.w_prime.len(), plan.b_size - 1).saturating_mul(c_space);
    let budget = Budget::new(limits.budget);
    let first_only = mode == Mode::FindFirst;

    let work = |comb: Vec<usize>| -> UnitResult<Solution> {
        let mut res: UnitResult<Vec<usize>> = UnitResult::new();
        let b: Vec<usize> = std::iter::once(0).chain(comb.iter().map(|&i| plan.w_prime[i])).collect();
        let x: Vec<usize> = plan
            .a
            .iter()
            .flat_map(|p| b.iter().map(move |&q| g.mul(p, q)))
            .collect();
        let mut covered = FixedBitSet::with_capacity(n);
        res.stats.checks += 1;
        let mut scratch = Vec::new();
        let block = x.iter().flat_map(|&p| plan.d.iter().map(move |y| g.mul(p, y)));
        if !place_block(&mut covered, block, &mut scratch) {
            res.stats.candidates += c_space;
            res.stats.pruned_prefixes += 1;
            return UnitResult { found: Vec::new(), stats: res.stats, complete: true };
        }
        let pool = match &plan.pool {
            Pool::Fixed(v) => v.clone(),
            Pool::Complement => (0..n).filter(|&z| !covered.contains(z)).collect(),
        };
        let mut unit = Unit {
            plan,
            x,
            pool,
            first_only,
            budget: &budget,
            scratch,
            chosen: Vec::new(),
            out: res,
        };
        unit.dfs(&mut covered, 0, plan.c_size - 1);
        let res = unit.out;
        UnitResult {
            found: res.found.into_iter().map(|c| (b.clone(), c)).collect(),
            stats: res.stats,
            complete: res.complete,
        }
    };

    let units = Combinations::new(plan.w_prime.len(), plan.b_size - 1);
    let scanned = in_pool(limits.threads, || scan(units, mode, limits.max_solutions, &budget, work))?;

    let mut solutions = Vec::with_capacity(scanned.found.len());
    for (b, c) in scanned.found {
        let factors = vec![
            plan.a.clone(),
            FactorSet::new(n, b),
            FactorSet::new(n, std::iter::once(0).chain(c)),
            plan.d.clone(),
        ];
        let cert = Certificate::new(Arc::clone(g), factors)?.strip_singletons();
        let verdict = cert.verify();
        if !verdict.is_valid() {
            return Err(CertifyError::ConstructionFailed(verdict).into());
        }
        solutions.push(cert);
    }
    Ok(SearchOutcome {
        strategy,
        solutions,
        stats: scanned.stats,
        formula_candidates: Some(formula),
        exhaustive: scanned.exhaustive,
        elapsed: start.elapsed(),
    })
}
