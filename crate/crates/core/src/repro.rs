//! Replays catalog configurations against their recorded expectations.
//!
//! Each entry yields one or more checks: stated certificates verify,
//! recipes realize every listed word, double-coset counts match, searches
//! reproduce solution counts and candidate spaces, refutations reach their
//! verdicts. Groups with an expected class count get a multifold check.
//! Reports carry no timing outside `wall_time_secs` fields.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::catalog::{Catalog, CatalogError, Entry, Recipe};
use crate::patterns::reversal_class_count;
use crate::search::cascade::{multifold, Cascade, CascadeOptions, MultifoldVerdict};
use crate::search::{refute, GenericOptions, Limits, Mode, RefuteVerdict, DEFAULT_GENERIC_CAP};
use crate::structure::double_cosets;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    Certificate,
    Recipe,
    DoubleCosets,
    SearchCount,
    SearchSpace,
    Refute,
    Multifold,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub id: String,
    pub kind: CheckKind,
    pub expected: String,
    pub observed: String,
    pub pass: bool,
    /// Set when a budget cut the work short.
    pub budget_exhausted: bool,
    pub detail: Vec<String>,
    pub wall_time_secs: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReproReport {
    pub scope: String,
    pub passed: usize,
    pub failed: usize,
    pub checks: Vec<Check>,
}

impl ReproReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    pub fn budget_exhausted(&self) -> bool {
        self.checks.iter().any(|c| !c.pass && c.budget_exhausted)
    }
}

#[derive(Debug, Clone, Default)]
pub struct ReproOptions {
    pub threads: Option<usize>,
    /// Caps every per-check budget from the catalog.
    pub budget: Option<Duration>,
    pub generic_cap: Option<usize>,
}

impl ReproOptions {
    fn limits(&self, catalog_secs: u64) -> Limits {
        let mut b = Duration::from_secs(catalog_secs);
        if let Some(cap) = self.budget {
            b = b.min(cap);
        }
        Limits {
            budget: Some(b),
            max_solutions: None,
            threads: self.threads,
        }
    }

    fn cascade(&self) -> CascadeOptions {
        CascadeOptions {
            generic_cap: self.generic_cap.unwrap_or(DEFAULT_GENERIC_CAP),
            budget: self.budget.or(CascadeOptions::default().budget),
            threads: self.threads,
            ..CascadeOptions::default()
        }
    }
}

fn words_str(w: &[usize]) -> String {
    let parts: Vec<String> = w.iter().map(usize::to_string).collect();
    format!("({})", parts.join(","))
}

/// Runs `scope`: `all`, an entry id, or a group id (its multifold check).
pub fn repro(catalog: &Catalog, scope: &str, options: &ReproOptions) -> Result<ReproReport, CatalogError> {
    let mut checks = Vec::new();
    if scope == "all" {
        let ids: Vec<String> = catalog.entry_ids().map(str::to_string).collect();
        for id in ids {
            checks.extend(entry_checks(catalog, &catalog.load(&id)?, options));
        }
        let groups: Vec<String> = catalog.group_ids().map(str::to_string).collect();
        for id in groups {
            checks.extend(multifold_check(catalog, &id, options)?);
        }
    } else if catalog.group_ids().any(|g| g == scope) {
        checks.extend(multifold_check(catalog, scope, options)?);
        if checks.is_empty() {
            return Err(CatalogError::Malformed {
                entry: scope.to_string(),
                reason: "group has no expectations to replay".into(),
            });
        }
    } else {
        checks.extend(entry_checks(catalog, &catalog.load(scope)?, options));
    }
    let passed = checks.iter().filter(|c| c.pass).count();
    Ok(ReproReport {
        scope: scope.to_string(),
        passed,
        failed: checks.len() - passed,
        checks,
    })
}

struct Timer(Instant);

impl Timer {
    fn start() -> Self {
        Timer(Instant::now())
    }

    fn secs(&self) -> f64 {
        self.0.elapsed().as_secs_f64()
    }
}

fn check(id: &str, kind: CheckKind, expected: String, observed: String, pass: bool, t: &Timer) -> Check {
    Check {
        id: id.to_string(),
        kind,
        expected,
        observed,
        pass,
        budget_exhausted: false,
        detail: Vec::new(),
        wall_time_secs: t.secs(),
    }
}

pub fn entry_checks(catalog: &Catalog, e: &Entry, options: &ReproOptions) -> Vec<Check> {
    let mut out = Vec::new();
    if let Some(c) = certificate_check(e) {
        out.push(c);
    }
    if let Some(dc) = &e.double_cosets {
        let t = Timer::start();
        let observed = match (e.set(&dc.left).map(|s| s.subgroup().cloned()), e.set(&dc.right).map(|s| s.subgroup().cloned())) {
            (Ok(Some(a)), Ok(Some(b))) => double_cosets(&a, &b).map(|d| d.count().to_string()).unwrap_or_else(|err| err.to_string()),
            _ => "anchors are not subgroups".into(),
        };
        let pass = observed == dc.count.to_string();
        out.push(check(&e.id, CheckKind::DoubleCosets, dc.count.to_string(), observed, pass, &t));
    }
    if let Some(r) = &e.recipe {
        out.extend(recipe_checks(catalog, e, r, options));
    }
    if e.search.is_some() {
        out.extend(search_checks(e, options));
    }
    if let Some(spec) = &e.refute {
        let t = Timer::start();
        let limits = options.limits(spec.budget_secs);
        let generic = GenericOptions {
            cap: options.generic_cap.unwrap_or(DEFAULT_GENERIC_CAP),
            ..GenericOptions::default()
        };
        let mut c = match refute(&e.group.table, &spec.pattern, &limits, generic) {
            Ok(r) => {
                let observed = serde_json::to_value(r.verdict).expect("verdict serializes");
                let observed = observed.as_str().unwrap_or_default().to_string();
                let mut c = check(&e.id, CheckKind::Refute, spec.verdict.clone(), observed.clone(), observed == spec.verdict, &t);
                c.budget_exhausted = r.verdict == RefuteVerdict::Unknown;
                c.detail.push(format!("{} {} via {}", e.group.id, words_str(&spec.pattern), r.method));
                c.detail.push(format!("{} candidates, {} nodes", r.stats.candidates, r.stats.nodes));
                c
            }
            Err(err) => check(&e.id, CheckKind::Refute, spec.verdict.clone(), err.to_string(), false, &t),
        };
        c.wall_time_secs = t.secs();
        out.push(c);
    }
    out
}

fn certificate_check(e: &Entry) -> Option<Check> {
    let t = Timer::start();
    let cert = e.certificate()?;
    let pattern = cert.pattern();
    let stated = e.pattern.clone().unwrap_or_else(|| pattern.clone());
    let v = cert.verify();
    let observed = if v.is_valid() {
        format!("valid {}", words_str(&pattern))
    } else {
        format!("{v:?} {}", words_str(&pattern))
    };
    let expected = format!("valid {}", words_str(&stated));
    let pass = observed == expected;
    let mut c = check(&e.id, CheckKind::Certificate, expected, observed, pass, &t);
    c.detail.extend(e.notes.iter().cloned());
    Some(c)
}

fn recipe_checks(catalog: &Catalog, e: &Entry, r: &Recipe, options: &ReproOptions) -> Vec<Check> {
    let mut out = Vec::new();
    if let Recipe::Sandwich {
        left,
        right,
        double_cosets: expected,
    } = r
    {
        let t = Timer::start();
        let observed = match (e.group.subgroups.get(left), e.group.subgroups.get(right)) {
            (Some(a), Some(b)) => double_cosets(a, b).map(|d| d.count().to_string()).unwrap_or_else(|err| err.to_string()),
            _ => "unknown subgroup".into(),
        };
        let pass = observed == expected.to_string();
        let mut c = check(&e.id, CheckKind::DoubleCosets, expected.to_string(), observed, pass, &t);
        c.detail.push(format!("{left} \\ {} / {right}", e.group.id));
        out.push(c);
    }
    let t = Timer::start();
    let mut cascade = Cascade::new(catalog, options.cascade());
    let mut done = 0;
    let mut detail = Vec::new();
    for w in &e.words {
        let mut trail = Vec::new();
        let made = catalog.realize(e, w, &mut |h, sw| {
            let (table, _) = h.table().ok()?;
            let s = cascade.solve(&table, sw).ok()?;
            trail.push(format!("order {} {}: {}", h.order(), words_str(sw), s.provenance[0]));
            Some(s.certificate)
        });
        match made {
            Ok(Some(c)) if c.verify().is_valid() && c.pattern() == *w => {
                done += 1;
                detail.push(format!("{}: {}", words_str(w), if trail.is_empty() { "direct".into() } else { trail.join("; ") }));
            }
            Ok(_) => detail.push(format!("{}: not realized", words_str(w))),
            Err(err) => detail.push(format!("{}: {err}", words_str(w))),
        }
    }
    let n = e.words.len();
    let mut c = check(&e.id, CheckKind::Recipe, format!("{n}/{n} words"), format!("{done}/{n} words"), done == n, &t);
    c.detail = detail;
    out.push(c);
    out
}

fn search_checks(e: &Entry, options: &ReproOptions) -> Vec<Check> {
    let spec = e.search.as_ref().expect("caller checked");
    let t = Timer::start();
    let limits = options.limits(spec.budget_secs);
    let mode = if spec.solutions.is_some() { Mode::FindAll } else { Mode::FindFirst };
    let out = match e.run_search(mode, &limits).expect("has search") {
        Ok(o) => o,
        Err(err) => return vec![check(&e.id, CheckKind::SearchCount, "a completed search".into(), err.to_string(), false, &t)],
    };
    let found = out.solutions.len();
    let all_valid = out.solutions.iter().all(|c| c.verify().is_valid());
    let hit_budget = mode == Mode::FindAll && !out.exhaustive || found == 0 && !out.exhaustive;
    let mut checks = Vec::new();

    let (expected, pass) = match (spec.solutions, spec.min_solutions) {
        (Some(n), _) => (format!("exactly {n} solutions"), found == n && out.exhaustive),
        (None, Some(n)) => (format!("at least {n} solutions"), found >= n),
        (None, None) => ("a completed search".to_string(), out.exhaustive),
    };
    let mut observed = format!("{found} solutions");
    if mode == Mode::FindAll {
        observed.push_str(if out.exhaustive { ", exhaustive" } else { ", budget hit" });
    }
    let mut c = check(&e.id, CheckKind::SearchCount, expected, observed, pass && all_valid, &t);
    c.budget_exhausted = hit_budget;
    c.detail.push(format!("{} strategy, pattern {}", out.strategy, words_str(&e.pattern.clone().unwrap_or_default())));
    if !all_valid {
        c.detail.push("an emitted certificate failed verification".into());
    }
    if let Some(max) = spec.max_graph_builds {
        c.detail.push(format!("{} graph builds, limit {max}", out.stats.graph_builds));
        if out.stats.graph_builds > max {
            c.pass = false;
        }
    }
    if found > 0 && mode == Mode::FindAll {
        // How many distinct sets fill each searched slot.
        let k = out.solutions[0].factors().len();
        for slot in 1..k.saturating_sub(1) {
            let distinct: BTreeSet<Vec<usize>> = out.solutions.iter().map(|s| s.factors()[slot].indices().to_vec()).collect();
            c.detail.push(format!("factor {} takes {} distinct values", slot + 1, distinct.len()));
        }
    }
    c.wall_time_secs = t.secs();
    checks.push(c);

    if let Some(expected) = spec.candidates {
        let formula = out.formula_candidates.map_or("none".to_string(), |f| f.to_string());
        let observed = format!("formula {formula}, examined {}", out.stats.candidates);
        let pass = out.formula_candidates == Some(expected) && out.stats.candidates == expected;
        let mut c = check(&e.id, CheckKind::SearchSpace, format!("formula {expected}, examined {expected}"), observed, pass, &t);
        c.budget_exhausted = hit_budget;
        checks.push(c);
    }
    checks
}

fn multifold_check(catalog: &Catalog, id: &str, options: &ReproOptions) -> Result<Option<Check>, CatalogError> {
    let g = catalog.group(id)?;
    let Some(expected) = g.multifold_classes else {
        return Ok(None);
    };
    let t = Timer::start();
    let r = multifold(catalog, &g.table, options.cascade());
    let total = r.classes.len();
    let formula = reversal_class_count(g.table.order() as u64).ok();
    let verdict = match r.verdict {
        MultifoldVerdict::MultifoldCertified => "MULTIFOLD-CERTIFIED",
        MultifoldVerdict::Incomplete => "INCOMPLETE",
    };
    let observed = format!("{}/{total} classes, {verdict}", r.certified());
    let pass = r.verdict == MultifoldVerdict::MultifoldCertified && total == expected && formula == Some(expected as u128);
    let mut c = check(id, CheckKind::Multifold, format!("{expected}/{expected} classes, MULTIFOLD-CERTIFIED"), observed, pass, &t);
    c.budget_exhausted = r.classes.iter().any(|k| k.failure.as_deref().is_some_and(|f| f.contains("budget")));
    for k in &r.classes {
        let how = match (&k.solved, &k.failure) {
            (Some(s), _) => s.provenance[0].clone(),
            (None, Some(f)) => f.clone(),
            (None, None) => "unsolved".into(),
        };
        let tag = k.discarded_by.as_deref().map(|d| format!(" [{d}]")).unwrap_or_default();
        c.detail.push(format!("{}{tag}: {how}", words_str(&k.word.as_sizes())));
    }
    Ok(Some(c))
}
