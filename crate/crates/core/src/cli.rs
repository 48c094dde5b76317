//! Command-line surface.
//!
//! Exit codes: 0 success, 1 negative verdict, 2 input error, 3 budget
//! exhausted. Output is JSON unless `--human` is given.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::catalog::{Catalog, CatalogError, Entry, CATALOG_ENV};
use crate::certify::Certificate;
use crate::group::GroupTable;
use crate::patterns::{prime_index_discard, PatternPlan};
use crate::report::{set_strings, CertificateJson, GroupJson, RefuteJson, ReportError, SearchReport, TaskJson, VerifyReport};
use crate::repro::{repro, ReproOptions};
use crate::search::cascade::{multifold, CascadeOptions, MultifoldVerdict};
use crate::search::{generic_search, refute, GenericOptions, Limits, Mode, RefuteVerdict, DEFAULT_BUDGET, DEFAULT_GENERIC_CAP};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "factorix", version, about = "Factorizations of finite permutation groups into products of subsets")]
pub struct Cli {
    /// Worker threads; all cores by default.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Wall-clock budget in seconds.
    #[arg(long, global = true)]
    pub budget: Option<f64>,
    /// Enumerate every solution instead of stopping at the first.
    #[arg(long, global = true)]
    pub find_all: bool,
    /// JSON output (the default).
    #[arg(long, global = true, conflicts_with = "human")]
    pub json: bool,
    /// Readable output with permutations in cycle notation.
    #[arg(long, global = true)]
    pub human: bool,
    /// Catalog file to use instead of the built-in one.
    #[arg(long, global = true, env = CATALOG_ENV)]
    pub catalog: Option<PathBuf>,
    /// Largest group order handed to generic search.
    #[arg(long, global = true)]
    pub cap_generic: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a certificate file ("-" reads stdin).
    Verify { file: PathBuf },
    /// Run a catalog search configuration, or generic search on a group.
    Search {
        /// Catalog entry with a search configuration.
        entry: Option<String>,
        #[command(flatten)]
        group: GroupArgs,
        /// Pattern for generic search, e.g. 2,3,2.
        #[arg(long, value_delimiter = ',')]
        pattern: Vec<usize>,
    },
    /// Decide whether a pattern has a factorization at all.
    Refute {
        /// Catalog entry with a refutation target.
        entry: Option<String>,
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, value_delimiter = ',')]
        pattern: Vec<usize>,
    },
    /// Prime words of n up to reversal, optionally after prime-index discards.
    Patterns {
        n: u64,
        /// Discard classes starting or ending with this prime index.
        #[arg(long)]
        discard: Vec<u64>,
    },
    /// Try to certify one word of every reversal class of |G|.
    Multifold {
        #[command(flatten)]
        group: GroupArgs,
    },
    /// Replay catalog expectations: "all", an entry id or a group id.
    Repro {
        #[arg(default_value = "all")]
        scope: String,
    },
}

/// A group given by catalog id or by generators.
#[derive(Debug, Args)]
pub struct GroupArgs {
    /// Catalog group id, e.g. group-168.
    #[arg(long)]
    pub group: Option<String>,
    /// Generator in cycle notation; repeat for more.
    #[arg(long = "gen")]
    pub generators: Vec<String>,
    /// Degree; defaults to the largest point named.
    #[arg(long)]
    pub degree: Option<usize>,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Report(#[from] ReportError),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

struct Ctx {
    human: bool,
    limits: Limits,
    cap: usize,
    catalog: Option<PathBuf>,
}

impl Ctx {
    fn catalog(&self) -> Result<Catalog, CliError> {
        Ok(Catalog::locate(self.catalog.as_deref())?)
    }
}

/// Output of one command with its exit code.
struct Outcome {
    code: i32,
    json: Value,
    human: String,
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let mut stdout = std::io::stdout().lock();
    execute(cli, &mut stdout)
}

/// Runs a parsed command, writing its report to `out`.
pub fn execute(cli: Cli, out: &mut dyn Write) -> i32 {
    let budget = match cli.budget {
        Some(b) if !(b.is_finite() && b >= 0.0) => {
            eprintln!("error: --budget must be a non-negative number of seconds");
            return EXIT_INPUT;
        }
        Some(b) => Duration::from_secs_f64(b),
        None => DEFAULT_BUDGET,
    };
    let ctx = Ctx {
        human: cli.human,
        limits: Limits {
            budget: Some(budget),
            max_solutions: None,
            threads: cli.threads,
        },
        cap: cli.cap_generic.unwrap_or(DEFAULT_GENERIC_CAP),
        catalog: cli.catalog.clone(),
    };
    let mode = if cli.find_all { Mode::FindAll } else { Mode::FindFirst };
    let result = match cli.command {
        Command::Verify { file } => cmd_verify(&file),
        Command::Search { entry, group, pattern } => cmd_search(&ctx, entry.as_deref(), &group, &pattern, mode),
        Command::Refute { entry, group, pattern } => cmd_refute(&ctx, entry.as_deref(), &group, &pattern),
        Command::Patterns { n, discard } => cmd_patterns(n, &discard),
        Command::Multifold { group } => cmd_multifold(&ctx, &group, cli.budget.map(|_| budget)),
        Command::Repro { scope } => cmd_repro(&ctx, &scope, cli.budget.map(|_| budget)),
    };
    match result {
        Ok(o) => {
            let text = if ctx.human {
                o.human
            } else {
                serde_json::to_string_pretty(&o.json).expect("report serializes")
            };
            let _ = writeln!(out, "{text}");
            o.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT
        }
    }
}

fn envelope(command: &str, inputs: Value, result: impl Serialize) -> Value {
    json!({
        "command": command,
        "version": env!("CARGO_PKG_VERSION"),
        "inputs": inputs,
        "result": result,
    })
}

fn read_input(file: &PathBuf) -> Result<String, CliError> {
    if file.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(file).map_err(|e| CliError::Input(format!("cannot read {}: {e}", file.display())))
    }
}

fn cmd_verify(file: &PathBuf) -> Result<Outcome, CliError> {
    let text = read_input(file)?;
    let parsed = CertificateJson::parse(&text)?;
    let r = match parsed.to_certificate() {
        Ok(cert) => VerifyReport::of(&cert),
        // A repeated element makes two products coincide.
        Err(e @ ReportError::Repeated { .. }) => VerifyReport {
            pattern: parsed.pattern.clone(),
            verdict: "INVALID",
            valid: false,
            detail: Some(e.to_string()),
            normalized: false,
        },
        Err(e) => return Err(e.into()),
    };
    let human = format!(
        "{} {}{}",
        r.verdict,
        pattern_str(&r.pattern),
        r.detail.as_deref().map(|d| format!(": {d}")).unwrap_or_default()
    );
    Ok(Outcome {
        code: if r.valid { EXIT_OK } else { EXIT_NEGATIVE },
        json: envelope("verify", json!({ "file": file }), &r),
        human,
    })
}

fn resolve_group(ctx: &Ctx, args: &GroupArgs) -> Result<Arc<GroupTable>, CliError> {
    match (&args.group, args.generators.is_empty()) {
        (Some(id), true) => Ok(Arc::clone(&ctx.catalog()?.group(id)?.table)),
        (None, false) => {
            let degree = match args.degree {
                Some(d) => d,
                None => args
                    .generators
                    .iter()
                    .flat_map(|g| g.split(|c: char| !c.is_ascii_digit()))
                    .filter_map(|t| t.parse::<usize>().ok())
                    .max()
                    .unwrap_or(1),
            };
            Ok(GroupJson {
                degree,
                generators: args.generators.clone(),
            }
            .build()?)
        }
        (Some(_), false) => Err(CliError::Input("give either --group or --gen, not both".into())),
        (None, true) => Err(CliError::Input("no group given: use --group ID or --gen CYCLES".into())),
    }
}

fn pattern_str(w: &[usize]) -> String {
    let parts: Vec<String> = w.iter().map(usize::to_string).collect();
    format!("({})", parts.join(","))
}

fn human_certificate(c: &Certificate) -> String {
    let g = c.group();
    let mut s = String::new();
    for (i, f) in c.factors().iter().enumerate() {
        s.push_str(&format!("  A{} = {{{}}}\n", i + 1, set_strings(g, f).join(", ")));
    }
    s
}

fn check_pattern(g: &GroupTable, pattern: &[usize]) -> Result<(), CliError> {
    if pattern.is_empty() {
        return Err(CliError::Input("--pattern is required".into()));
    }
    if pattern.iter().product::<usize>() != g.order() || pattern.contains(&0) {
        return Err(CliError::Input(format!(
            "pattern {} does not multiply to the group order {}",
            pattern_str(pattern),
            g.order()
        )));
    }
    Ok(())
}

fn anchors_of(e: &Entry) -> BTreeMap<String, Vec<String>> {
    let spec = e.search.as_ref().expect("entry has a search");
    let g = &e.group.table;
    [&spec.first, &spec.last]
        .into_iter()
        .filter_map(|n| e.sets.get(n).map(|s| (n.clone(), set_strings(g, s.set()))))
        .collect()
}

fn cmd_search(ctx: &Ctx, entry: Option<&str>, group: &GroupArgs, pattern: &[usize], mode: Mode) -> Result<Outcome, CliError> {
    let mode_name = if mode == Mode::FindAll { "find-all" } else { "find-first" };
    let budget_secs = ctx.limits.budget.map(|b| b.as_secs_f64());
    let (task, out) = if let Some(id) = entry {
        let catalog = ctx.catalog()?;
        let e = catalog.load(id)?;
        let Some(spec) = &e.search else {
            return Err(CliError::Input(format!("{id} has no search configuration")));
        };
        let out = e.run_search(mode, &ctx.limits).expect("has search")?;
        let task = TaskJson {
            group: GroupJson::of(&e.group.table),
            pattern: e.pattern.clone().unwrap_or_default(),
            strategy: serde_json::to_value(spec.engine).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default(),
            mode: mode_name,
            anchors: anchors_of(&e),
            budget_secs,
        };
        (task, out)
    } else {
        let g = resolve_group(ctx, group)?;
        check_pattern(&g, pattern)?;
        let options = GenericOptions {
            cap: ctx.cap,
            ..GenericOptions::default()
        };
        let out = generic_search(&g, pattern, mode, &ctx.limits, options).map_err(|e| CliError::Input(e.to_string()))?;
        let task = TaskJson {
            group: GroupJson::of(&g),
            pattern: pattern.to_vec(),
            strategy: "generic".into(),
            mode: mode_name,
            anchors: BTreeMap::new(),
            budget_secs,
        };
        (task, out)
    };
    let report = SearchReport::new(task, &out);
    let code = match (out.solutions.is_empty(), out.exhaustive) {
        (_, true) if mode == Mode::FindAll => EXIT_OK,
        (false, _) if mode == Mode::FindFirst => EXIT_OK,
        (true, true) => EXIT_NEGATIVE,
        _ => EXIT_BUDGET,
    };
    let mut human = format!(
        "{} {} ({}): {} solution(s), {} candidates{}, {}, {:.3} s\n",
        out.strategy,
        pattern_str(&report.task.pattern),
        mode_name,
        out.solutions.len(),
        out.stats.candidates,
        out.formula_candidates.map(|f| format!(" (formula {f})")).unwrap_or_default(),
        if out.exhaustive { "exhaustive" } else { "not exhaustive" },
        out.elapsed.as_secs_f64()
    );
    for (i, c) in out.solutions.iter().enumerate() {
        human.push_str(&format!("solution {}:\n{}", i + 1, human_certificate(c)));
    }
    Ok(Outcome {
        code,
        json: envelope("search", json!({ "entry": entry, "mode": mode_name }), &report),
        human: human.trim_end().to_string(),
    })
}

fn cmd_refute(ctx: &Ctx, entry: Option<&str>, group: &GroupArgs, pattern: &[usize]) -> Result<Outcome, CliError> {
    let (g, pattern) = if let Some(id) = entry {
        let catalog = ctx.catalog()?;
        let e = catalog.load(id)?;
        let Some(spec) = &e.refute else {
            return Err(CliError::Input(format!("{id} has no refutation target")));
        };
        (Arc::clone(&e.group.table), spec.pattern.clone())
    } else {
        let g = resolve_group(ctx, group)?;
        (g, pattern.to_vec())
    };
    check_pattern(&g, &pattern)?;
    let options = GenericOptions {
        cap: ctx.cap,
        ..GenericOptions::default()
    };
    let r = refute(&g, &pattern, &ctx.limits, options).map_err(|e| CliError::Input(e.to_string()))?;
    let code = match r.verdict {
        RefuteVerdict::None => EXIT_OK,
        RefuteVerdict::Found => EXIT_NEGATIVE,
        RefuteVerdict::Unknown => EXIT_BUDGET,
    };
    let report = RefuteJson::of(&r, &g);
    let mut human = format!(
        "{} for {} in a group of order {} ({}, {:.3} s)",
        format!("{:?}", r.verdict).to_uppercase(),
        pattern_str(&pattern),
        g.order(),
        r.method,
        r.elapsed.as_secs_f64()
    );
    if let Some(c) = &r.certificate {
        human.push_str(&format!("\n{}", human_certificate(c).trim_end()));
    }
    Ok(Outcome {
        code,
        json: envelope("refute", json!({ "entry": entry, "pattern": pattern }), &report),
        human,
    })
}

fn cmd_patterns(n: u64, discard: &[u64]) -> Result<Outcome, CliError> {
    let mut plan = PatternPlan::new(n).map_err(|e| CliError::Input(e.to_string()))?;
    for &p in discard {
        plan = prime_index_discard(&plan, p, true).map_err(|e| CliError::Input(e.to_string()))?;
    }
    let mut human = format!("n = {n}, Omega = {}, {} classes to solve\n", plan.omega, plan.classes.len());
    for w in &plan.classes {
        human.push_str(&format!("  {}\n", pattern_str(&w.as_sizes())));
    }
    for d in &plan.discarded {
        human.push_str(&format!("  {} discarded: {}\n", pattern_str(&d.word.as_sizes()), d.reason));
    }
    let json: Value = serde_json::from_str(&plan.to_json()).expect("plan is JSON");
    Ok(Outcome {
        code: EXIT_OK,
        json: envelope("patterns", json!({ "n": n, "discard": discard }), json),
        human: human.trim_end().to_string(),
    })
}

#[derive(Serialize)]
struct ClassJson {
    word: Vec<usize>,
    status: &'static str,
    discarded_by: Option<String>,
    provenance: Vec<String>,
    failure: Option<String>,
    certificate: Option<CertificateJson>,
    wall_time_secs: f64,
}

fn cmd_multifold(ctx: &Ctx, group: &GroupArgs, budget: Option<Duration>) -> Result<Outcome, CliError> {
    let g = resolve_group(ctx, group)?;
    let catalog = ctx.catalog()?;
    let options = CascadeOptions {
        generic_cap: ctx.cap,
        budget: budget.or(CascadeOptions::default().budget),
        threads: ctx.limits.threads,
        ..CascadeOptions::default()
    };
    let r = multifold(&catalog, &g, options);
    let verdict = match r.verdict {
        MultifoldVerdict::MultifoldCertified => "MULTIFOLD-CERTIFIED",
        MultifoldVerdict::Incomplete => "INCOMPLETE",
    };
    let classes: Vec<ClassJson> = r
        .classes
        .iter()
        .map(|c| ClassJson {
            word: c.word.as_sizes(),
            status: if c.solved.is_some() { "certified" } else { "failed" },
            discarded_by: c.discarded_by.clone(),
            provenance: c.solved.as_ref().map(|s| s.provenance.clone()).unwrap_or_default(),
            failure: c.failure.clone(),
            certificate: c.solved.as_ref().map(|s| CertificateJson::of(&s.certificate)),
            wall_time_secs: c.elapsed.as_secs_f64(),
        })
        .collect();
    let code = match r.verdict {
        MultifoldVerdict::MultifoldCertified => EXIT_OK,
        MultifoldVerdict::Incomplete if classes.iter().any(|c| c.failure.as_deref().is_some_and(|f| f.contains("budget"))) => EXIT_BUDGET,
        MultifoldVerdict::Incomplete => EXIT_NEGATIVE,
    };
    let mut human = format!(
        "order {}: {verdict}, {}/{} classes certified, {:.3} s\n",
        r.order,
        r.certified(),
        r.classes.len(),
        r.elapsed.as_secs_f64()
    );
    for c in &classes {
        let how = c.provenance.first().or(c.failure.as_ref()).cloned().unwrap_or_default();
        human.push_str(&format!("  {} {}: {how}\n", pattern_str(&c.word), c.status));
    }
    let result = json!({
        "group": GroupJson::of(&g),
        "order": r.order,
        "omega": r.plan.as_ref().map(|p| p.omega),
        "verdict": verdict,
        "certified": r.certified(),
        "classes": classes,
        "wall_time_secs": r.elapsed.as_secs_f64(),
    });
    Ok(Outcome {
        code,
        json: envelope("multifold", json!({ "group": group.group, "generators": group.generators }), result),
        human: human.trim_end().to_string(),
    })
}

fn cmd_repro(ctx: &Ctx, scope: &str, budget: Option<Duration>) -> Result<Outcome, CliError> {
    let catalog = ctx.catalog()?;
    let options = ReproOptions {
        threads: ctx.limits.threads,
        budget,
        generic_cap: Some(ctx.cap),
    };
    let r = repro(&catalog, scope, &options)?;
    let code = if r.all_passed() {
        EXIT_OK
    } else if r.budget_exhausted() {
        EXIT_BUDGET
    } else {
        EXIT_NEGATIVE
    };
    let mut human = String::new();
    for c in &r.checks {
        human.push_str(&format!(
            "{} {:<20} {:<13} expected {}; observed {}\n",
            if c.pass { "PASS" } else { "FAIL" },
            c.id,
            serde_json::to_value(c.kind).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default(),
            c.expected,
            c.observed
        ));
    }
    human.push_str(&format!("{} passed, {} failed", r.passed, r.failed));
    Ok(Outcome {
        code,
        json: envelope("repro", json!({ "scope": scope }), &r),
        human,
    })
}
