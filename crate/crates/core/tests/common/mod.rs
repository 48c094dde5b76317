//! Random cases for the certificate transformations and search duality,
//! shared by the property tests and the acceptance run.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, OnceLock};
use std::time::Duration;

use factorix::catalog::Catalog;
use factorix::certify::{compose_sandwich, lift_by_quotient, lift_by_transversal, normalize, reverse, Certificate, CertifyError, Side};
use factorix::group::GroupTable;
use factorix::patterns::enumerate_ordered_factorizations;
use factorix::search::cascade::{Cascade, CascadeOptions};
use factorix::search::{case2_search, case2_search_reversed, generic_search, GenericOptions, Limits, Mode};
use factorix::factor_set::FactorSet;
use factorix::structure::{conjugate_intersection_trivial, double_cosets, quotient_group, Subgroup};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Groups of order at most 60.
const POOL: &[(usize, &[&str])] = &[
    (3, &["(1,2,3)", "(1,2)"]),
    (4, &["(1,2,3,4)", "(1,3)"]),
    (8, &["(1,2,3,4)(5,6,7,8)", "(1,5,3,7)(2,8,4,6)"]),
    (4, &["(1,2,3)", "(2,3,4)"]),
    (4, &["(1,2,3,4)", "(1,2)"]),
    (6, &["(1,2)", "(3,4)", "(5,6)"]),
    (6, &["(1,2,3,4,5,6)"]),
    (6, &["(1,2,3,4,5,6)", "(2,6)(3,5)"]),
    (5, &["(1,2,3,4,5)", "(2,5)(3,4)"]),
    (5, &["(1,2,3,4,5)", "(2,3,5,4)"]),
    (7, &["(1,2,3,4,5,6,7)", "(2,3,5)(4,7,6)"]),
    (6, &["(1,2,3)", "(4,5,6)", "(1,2)(4,5)"]),
    (6, &["(1,2,3)", "(2,3,4)", "(5,6)"]),
    (6, &["(1,2,3)", "(1,2)", "(4,5,6)", "(4,5)"]),
    (7, &["(1,2,3)", "(4,5,6,7)"]),
    (5, &["(1,2,3,4,5)", "(1,2,3)"]),
];

pub fn pool() -> &'static [Arc<GroupTable>] {
    static P: OnceLock<Vec<Arc<GroupTable>>> = OnceLock::new();
    P.get_or_init(|| {
        POOL.iter()
            .map(|(d, gens)| Arc::new(GroupTable::from_cycle_strings(*d, gens).unwrap()))
            .collect()
    })
}

pub fn catalog() -> &'static Catalog {
    static C: OnceLock<Catalog> = OnceLock::new();
    C.get_or_init(Catalog::builtin)
}

fn cascade_options() -> CascadeOptions {
    CascadeOptions {
        generic_budget: Duration::from_secs(5),
        budget: Some(Duration::from_secs(20)),
        ..CascadeOptions::default()
    }
}

/// Some pattern of `n`; prime words only above 24 so that searches stay short.
fn random_pattern(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    if n == 1 {
        return vec![1];
    }
    let mut all = Vec::new();
    for k in 1..=20 {
        let Ok(ps) = enumerate_ordered_factorizations(n as u64, k) else { break };
        if ps.is_empty() && k > 1 {
            break;
        }
        all.extend(ps);
    }
    if n > 24 {
        let longest = all.iter().map(Vec::len).max().unwrap_or(1);
        all.retain(|p| p.len() == longest);
    }
    let p = all.choose(rng).expect("n > 1 has a pattern");
    p.iter().map(|&x| x as usize).collect()
}

/// A certificate of `g` for some random pattern, if the cascade finds one.
fn random_certificate(rng: &mut ChaCha8Rng, g: &Arc<GroupTable>) -> Option<Certificate> {
    for _ in 0..4 {
        let p = random_pattern(rng, g.order());
        if p == [1] {
            return Some(Certificate::whole(g));
        }
        if let Ok(s) = Cascade::new(catalog(), cascade_options()).solve(g, &p) {
            return Some(s.certificate);
        }
    }
    None
}

/// Translates factors so the product is the same set but identities move.
fn scramble(rng: &mut ChaCha8Rng, c: &Certificate) -> Certificate {
    let g = c.group();
    let n = g.order();
    let mut factors = c.factors().to_vec();
    let mut carry = rng.gen_range(0..n);
    for f in factors.iter_mut() {
        let right = rng.gen_range(0..n);
        *f = f.translate(g, carry, right);
        carry = g.inv(right);
    }
    Certificate::new(Arc::clone(g), factors).unwrap()
}

/// Cases that got past their skip conditions, per property.
pub static EXERCISED: [AtomicUsize; 5] = [const { AtomicUsize::new(0) }; 5];

fn exercised(i: usize) {
    EXERCISED[i].fetch_add(1, Ordering::Relaxed);
}

fn check(cond: bool, what: &str) -> Result<(), TestCaseError> {
    if cond {
        Ok(())
    } else {
        Err(TestCaseError::fail(what.to_string()))
    }
}

fn group_of(seed: u64) -> (ChaCha8Rng, Arc<GroupTable>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = Arc::clone(pool().choose(&mut rng).unwrap());
    (rng, g)
}

pub fn reverse_and_normalize(seed: u64) -> Result<(), TestCaseError> {
    let (mut rng, g) = group_of(seed);
    let Some(c) = random_certificate(&mut rng, &g) else { return Ok(()) };
    exercised(0);
    let s = scramble(&mut rng, &c);
    check(s.verify().is_valid(), "scrambled certificate is invalid")?;
    let r = reverse(&s).unwrap();
    check(r.verify().is_valid(), "reverse does not verify")?;
    let mut p = s.pattern();
    p.reverse();
    check(r.pattern() == p, "reverse changed sizes")?;
    let n = normalize(&s).unwrap();
    check(n.verify().is_valid(), "normalize does not verify")?;
    check(n.is_normalized(), "normalize left a factor without identity")?;
    check(n.pattern() == s.pattern(), "normalize changed sizes")
}

fn random_subgroup(rng: &mut ChaCha8Rng, g: &Arc<GroupTable>) -> Subgroup {
    let k = rng.gen_range(1..=2);
    let gens: Vec<usize> = (0..k).map(|_| rng.gen_range(0..g.order())).collect();
    Subgroup::generated(g, &gens)
}

pub fn transversal_lift(seed: u64) -> Result<(), TestCaseError> {
    let (mut rng, g) = group_of(seed);
    let h = random_subgroup(&mut rng, &g);
    if h.order() == g.order() {
        return Ok(());
    }
    let (ht, _) = h.table().unwrap();
    let Some(hc) = random_certificate(&mut rng, &ht) else { return Ok(()) };
    exercised(1);
    let side = if rng.gen() { Side::Left } else { Side::Right };
    let lifted = lift_by_transversal(&hc, &h, side).unwrap();
    check(lifted.verify().is_valid(), "transversal lift does not verify")?;
    let mut want: Vec<usize> = hc.pattern().into_iter().filter(|&m| m > 1).collect();
    match side {
        Side::Left => want.insert(0, h.index()),
        Side::Right => want.push(h.index()),
    }
    check(lifted.pattern() == want, "transversal lift has the wrong pattern")
}

pub fn quotient_lift(seed: u64) -> Result<(), TestCaseError> {
    let (mut rng, g) = group_of(seed);
    let x = rng.gen_range(1..g.order());
    let conjugates: Vec<usize> = (0..g.order()).map(|y| g.conjugate(x, y)).collect();
    let n = Subgroup::generated(&g, &conjugates);
    if n.order() == g.order() {
        return Ok(());
    }
    let Ok(q) = quotient_group(&n) else { return Ok(()) };
    let Some(qc) = random_certificate(&mut rng, &q.table) else { return Ok(()) };
    exercised(2);
    let pos = rng.gen_range(0..=qc.factors().len());
    let lifted = lift_by_quotient(&qc, &n, pos).unwrap();
    check(lifted.verify().is_valid(), "quotient lift does not verify")?;
    check(lifted.factors().iter().any(|f| f == n.members()), "normal subgroup is not a factor")
}

pub fn sandwich(seed: u64) -> Result<(), TestCaseError> {
    let (mut rng, g) = group_of(seed);
    let a = Subgroup::generated(&g, &[rng.gen_range(0..g.order())]);
    let b = Subgroup::generated(&g, &[rng.gen_range(0..g.order())]);
    let (at, _) = a.table().unwrap();
    let (bt, _) = b.table().unwrap();
    let (Some(ac), Some(bc)) = (random_certificate(&mut rng, &at), random_certificate(&mut rng, &bt)) else {
        return Ok(());
    };
    exercised(3);
    let t = double_cosets(&a, &b).unwrap().representatives;
    let made = compose_sandwich(&a, &ac, &t, &b, &bc);
    if conjugate_intersection_trivial(&a, &b) {
        let c = made.unwrap();
        check(c.verify().is_valid(), "sandwich does not verify")
    } else {
        check(matches!(made, Err(CertifyError::ConditionFailed)), "sandwich accepted a bad pair")
    }
}

fn keys(cs: &[Certificate]) -> BTreeSet<Vec<Vec<usize>>> {
    cs.iter().map(Certificate::key).collect()
}

fn reversed_keys(cs: &[Certificate]) -> BTreeSet<Vec<Vec<usize>>> {
    cs.iter().map(|c| reverse(c).unwrap().key()).collect()
}

/// Generic search for a pattern and for its reverse agree up to reversal,
/// and so do the two anchored engines.
pub fn reversal_duality(seed: u64) -> Result<(), TestCaseError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let small: Vec<&Arc<GroupTable>> = pool().iter().filter(|g| g.order() <= 12).collect();
    let g = Arc::clone(small.choose(&mut rng).unwrap());
    let n = g.order();
    let opts = GenericOptions {
        conjugacy_reduction: false,
        ..GenericOptions::default()
    };
    let limits = Limits::default();
    let p = loop {
        let p = random_pattern(&mut rng, n);
        if p.len() <= 3 {
            break p;
        }
    };
    let rp: Vec<usize> = p.iter().rev().copied().collect();
    exercised(4);
    let fwd = generic_search(&g, &p, Mode::FindAll, &limits, opts).unwrap();
    let bwd = generic_search(&g, &rp, Mode::FindAll, &limits, opts).unwrap();
    check(fwd.exhaustive && bwd.exhaustive, "generic search hit a limit")?;
    check(keys(&fwd.solutions) == reversed_keys(&bwd.solutions), "generic search breaks reversal duality")?;

    // G = A·B·C·D with A = <x> and D = {e, d}, against the reversed task.
    let x = rng.gen_range(1..n);
    let a = Subgroup::generated(&g, &[x]);
    let d = rng.gen_range(1..n);
    if a.contains(d) || n % (2 * a.order()) != 0 || a.order() == 1 {
        return Ok(());
    }
    let rest = n / (2 * a.order());
    let divisors: Vec<usize> = (1..=rest).filter(|b| rest.is_multiple_of(*b)).collect();
    let b = *divisors.choose(&mut rng).unwrap();
    let c = rest / b;
    let dset = FactorSet::new(n, [0, d]);
    let fwd = case2_search(&a, &dset, b, c, Mode::FindAll, &limits).unwrap();
    let bwd = case2_search_reversed(&dset.inverse(&g), &a, c, b, Mode::FindAll, &limits).unwrap();
    check(keys(&fwd.solutions) == reversed_keys(&bwd.solutions), "anchored search breaks reversal duality")
}

type Property = fn(u64) -> Result<(), TestCaseError>;

/// Runs every property on `cases` seeds; returns how many cases of each
/// were not skipped.
pub fn run_all(cases: u32) -> Result<[usize; 5], String> {
    let props: [(&str, Property); 5] = [
        ("reverse/normalize", reverse_and_normalize),
        ("lift_by_transversal", transversal_lift),
        ("lift_by_quotient", quotient_lift),
        ("compose_sandwich", sandwich),
        ("reversal duality", reversal_duality),
    ];
    for (name, f) in props {
        let mut runner = proptest::test_runner::TestRunner::new(ProptestConfig {
            cases,
            failure_persistence: None,
            ..ProptestConfig::default()
        });
        runner.run(&any::<u64>(), f).map_err(|e| format!("{name}: {e}"))?;
    }
    Ok(std::array::from_fn(|i| EXERCISED[i].load(Ordering::Relaxed)))
}
