//! Named groups, subgroups, sets and search configurations.
//!
//! The data lives in `data/catalog.json`, compiled in as the default and
//! replaceable at run time by a file of the same format. Every
//! permutation is parsed and located in its group on load.

use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::certify::{compose_sandwich, lift_by_transversal, refine_by_subgroup, reverse, CertifyError, Certificate, Side};
use crate::factor_set::FactorSet;
use crate::group::{GroupError, GroupTable};
use crate::perm::{Perm, PermError};
use crate::search::{case1_search, case2_search, case2_search_reversed, case3_search, Limits, Mode, SearchError, SearchOutcome};
use crate::structure::{double_cosets, find_subgroup_of_order, sylow_subgroup, StructureError, Subgroup};

/// Environment variable naming a catalog file to use instead of the
/// built-in one.
pub const CATALOG_ENV: &str = "FACTORIX_CATALOG";

const BUILTIN: &str = include_str!("../data/catalog.json");

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("unknown catalog id {0:?}")]
    UnknownId(String),
    #[error("{entry}: {element} is not an element of {group}")]
    ElementNotInGroup { entry: String, group: String, element: String },
    #[error("{entry}: {what} has order {actual}, expected {expected}")]
    OrderMismatch {
        entry: String,
        what: String,
        expected: usize,
        actual: usize,
    },
    #[error("{entry}: {reason}")]
    Malformed { entry: String, reason: String },
    #[error("cannot read catalog {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("catalog is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Certify(#[from] CertifyError),
    #[error("{0}: {1}")]
    Search(String, SearchError),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct CatalogFile {
    groups: BTreeMap<String, GroupSpec>,
    entries: BTreeMap<String, EntrySpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupSpec {
    degree: usize,
    generators: Vec<String>,
    order: usize,
    #[serde(default)]
    subgroups: BTreeMap<String, SubgroupSpec>,
    #[serde(default)]
    licenses: Vec<LicenseSpec>,
    #[serde(default)]
    refuted: Vec<Vec<usize>>,
    #[serde(default)]
    multifold_classes: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct SubgroupSpec {
    #[serde(default)]
    generators: Option<Vec<String>>,
    #[serde(default)]
    sylow: Option<usize>,
    #[serde(default)]
    order_search: Option<usize>,
    order: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct LicenseSpec {
    subgroup: String,
    index: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntrySpec {
    group: String,
    #[serde(default)]
    description: String,
    #[serde(default)]
    sets: BTreeMap<String, SetSpec>,
    #[serde(default)]
    certificate: Vec<String>,
    #[serde(default)]
    pattern: Option<Vec<usize>>,
    #[serde(default)]
    words: Vec<Vec<usize>>,
    #[serde(default)]
    search: Option<SearchSpec>,
    #[serde(default)]
    recipe: Option<Recipe>,
    #[serde(default)]
    refute: Option<RefuteSpec>,
    #[serde(default)]
    double_cosets: Option<DoubleCosetSpec>,
    #[serde(default)]
    notes: Vec<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct SetSpec {
    /// A named subgroup of the entry's group.
    #[serde(default)]
    subgroup: Option<String>,
    /// The subgroup generated by these permutations.
    #[serde(default)]
    generators: Option<Vec<String>>,
    #[serde(default)]
    elements: Option<Vec<String>>,
    /// The product of these sets, which must have no repeats.
    #[serde(default)]
    product: Option<Vec<Vec<String>>>,
}

/// An anchored search configuration with its expected outcome.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchSpec {
    pub engine: Engine,
    pub first: String,
    pub last: String,
    pub b: usize,
    #[serde(default)]
    pub c: Option<usize>,
    /// Exact number of solutions in find-all mode.
    #[serde(default)]
    pub solutions: Option<usize>,
    #[serde(default)]
    pub min_solutions: Option<usize>,
    /// Expected size of the candidate space.
    #[serde(default)]
    pub candidates: Option<u64>,
    #[serde(default)]
    pub max_graph_builds: Option<u64>,
    pub budget_secs: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Engine {
    Case1,
    Case2,
    Case2Reversed,
    Case3,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Recipe {
    /// `G = A·T·B` over the double cosets of two named subgroups.
    Sandwich { left: String, right: String, double_cosets: usize },
    /// Refine the subgroup factors of another entry's certificate.
    Template { entry: String },
    /// Transversal lift from a named subgroup of prime index.
    Lift { subgroup: String },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RefuteSpec {
    pub pattern: Vec<usize>,
    pub verdict: String,
    pub budget_secs: u64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DoubleCosetSpec {
    pub left: String,
    pub right: String,
    pub count: usize,
}

/// A catalog group with its named subgroups resolved.
#[derive(Debug)]
pub struct CatalogGroup {
    pub id: String,
    pub table: Arc<GroupTable>,
    pub subgroups: BTreeMap<String, Subgroup>,
    /// Named subgroups of prime index vouched multifold-factorizable.
    pub licenses: Vec<(String, usize)>,
    /// Patterns with no factorization.
    pub refuted: Vec<Vec<usize>>,
    /// Reversal classes the multifold driver is expected to certify.
    pub multifold_classes: Option<usize>,
}

/// A resolved set of a catalog entry.
#[derive(Debug, Clone)]
pub enum CatalogSet {
    Subgroup(Subgroup),
    Elements(FactorSet),
    /// A product set kept together with its factors.
    Product { set: FactorSet, parts: Vec<FactorSet> },
}

impl CatalogSet {
    pub fn set(&self) -> &FactorSet {
        match self {
            CatalogSet::Subgroup(s) => s.members(),
            CatalogSet::Elements(s) => s,
            CatalogSet::Product { set, .. } => set,
        }
    }

    pub fn subgroup(&self) -> Option<&Subgroup> {
        match self {
            CatalogSet::Subgroup(s) => Some(s),
            _ => None,
        }
    }
}

/// A catalog entry with every element resolved to an index.
#[derive(Debug, Clone)]
pub struct Entry {
    pub id: String,
    pub description: String,
    pub group: Arc<CatalogGroup>,
    pub sets: BTreeMap<String, CatalogSet>,
    /// Names of the sets whose product is claimed to be the group.
    pub certificate_order: Vec<String>,
    pub pattern: Option<Vec<usize>>,
    pub words: Vec<Vec<usize>>,
    pub search: Option<SearchSpec>,
    pub recipe: Option<Recipe>,
    pub refute: Option<RefuteSpec>,
    pub double_cosets: Option<DoubleCosetSpec>,
    pub notes: Vec<String>,
}

impl Entry {
    /// The stated factorization, if the entry has one. Not verified here.
    pub fn certificate(&self) -> Option<Certificate> {
        if self.certificate_order.is_empty() {
            return None;
        }
        let factors = self.certificate_order.iter().map(|n| self.sets[n].set().clone()).collect();
        Certificate::new(Arc::clone(&self.group.table), factors).ok()
    }

    pub fn set(&self, name: &str) -> Result<&CatalogSet, CatalogError> {
        self.sets.get(name).ok_or_else(|| CatalogError::Malformed {
            entry: self.id.clone(),
            reason: format!("no set named {name}"),
        })
    }

    /// Runs the entry's search configuration with its anchors, if it has one.
    pub fn run_search(&self, mode: Mode, limits: &Limits) -> Option<Result<SearchOutcome, CatalogError>> {
        let spec = self.search.as_ref()?;
        Some(self.run_search_spec(spec, mode, limits))
    }

    fn run_search_spec(&self, spec: &SearchSpec, mode: Mode, limits: &Limits) -> Result<SearchOutcome, CatalogError> {
        let first = self.set(&spec.first)?;
        let last = self.set(&spec.last)?;
        fn subgroup<'s>(e: &Entry, s: &'s CatalogSet, name: &str) -> Result<&'s Subgroup, CatalogError> {
            s.subgroup().ok_or_else(|| CatalogError::Malformed {
                entry: e.id.clone(),
                reason: format!("{name} must be a subgroup for this engine"),
            })
        }
        let c = || {
            spec.c.ok_or_else(|| CatalogError::Malformed {
                entry: self.id.clone(),
                reason: "this engine needs c".into(),
            })
        };
        let out = match spec.engine {
            Engine::Case1 => case1_search(subgroup(self, first, &spec.first)?, subgroup(self, last, &spec.last)?, spec.b, c()?, mode, limits),
            Engine::Case2 => case2_search(subgroup(self, first, &spec.first)?, last.set(), spec.b, c()?, mode, limits),
            Engine::Case2Reversed => case2_search_reversed(first.set(), subgroup(self, last, &spec.last)?, spec.b, c()?, mode, limits),
            Engine::Case3 => case3_search(subgroup(self, first, &spec.first)?, last.set(), spec.b, mode, limits),
        };
        out.map_err(|e| CatalogError::Search(self.id.clone(), e))
    }
}

/// A parsed catalog. Groups are built on first use and cached.
pub struct Catalog {
    file: CatalogFile,
    source: String,
    groups: Mutex<HashMap<String, Arc<CatalogGroup>>>,
}

impl std::fmt::Debug for Catalog {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Catalog").field("source", &self.source).finish()
    }
}

impl Catalog {
    pub fn builtin() -> Self {
        Self::parse(BUILTIN, "builtin").expect("built-in catalog parses")
    }

    pub fn parse(json: &str, source: &str) -> Result<Self, CatalogError> {
        Ok(Catalog {
            file: serde_json::from_str(json)?,
            source: source.to_string(),
            groups: Mutex::new(HashMap::new()),
        })
    }

    pub fn from_path(path: &Path) -> Result<Self, CatalogError> {
        let text = std::fs::read_to_string(path).map_err(|source| CatalogError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text, &path.display().to_string())
    }

    /// An explicit path wins, then `FACTORIX_CATALOG`, then the built-in data.
    pub fn locate(path: Option<&Path>) -> Result<Self, CatalogError> {
        match path {
            Some(p) => Self::from_path(p),
            None => match std::env::var_os(CATALOG_ENV) {
                Some(p) if !p.is_empty() => Self::from_path(Path::new(&p)),
                _ => Ok(Self::builtin()),
            },
        }
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn group_ids(&self) -> impl Iterator<Item = &str> {
        self.file.groups.keys().map(String::as_str)
    }

    pub fn entry_ids(&self) -> impl Iterator<Item = &str> {
        self.file.entries.keys().map(String::as_str)
    }

    pub fn group(&self, id: &str) -> Result<Arc<CatalogGroup>, CatalogError> {
        if let Some(g) = self.groups.lock().expect("cache lock").get(id) {
            return Ok(Arc::clone(g));
        }
        let spec = self.file.groups.get(id).ok_or_else(|| CatalogError::UnknownId(id.to_string()))?;
        let built = Arc::new(build_group(id, spec)?);
        self.groups
            .lock()
            .expect("cache lock")
            .insert(id.to_string(), Arc::clone(&built));
        Ok(built)
    }

    /// Resolves an entry. A group id loads as an entry holding only the group.
    pub fn load(&self, id: &str) -> Result<Entry, CatalogError> {
        let Some(spec) = self.file.entries.get(id) else {
            if self.file.groups.contains_key(id) {
                return Ok(Entry {
                    id: id.to_string(),
                    description: String::new(),
                    group: self.group(id)?,
                    sets: BTreeMap::new(),
                    certificate_order: Vec::new(),
                    pattern: None,
                    words: Vec::new(),
                    search: None,
                    recipe: None,
                    refute: None,
                    double_cosets: None,
                    notes: Vec::new(),
                });
            }
            return Err(CatalogError::UnknownId(id.to_string()));
        };
        let group = self.group(&spec.group)?;
        let mut sets = BTreeMap::new();
        for (name, s) in &spec.sets {
            sets.insert(name.clone(), resolve_set(id, &group, name, s)?);
        }
        for name in &spec.certificate {
            if !sets.contains_key(name) {
                return Err(CatalogError::Malformed {
                    entry: id.to_string(),
                    reason: format!("certificate names unknown set {name}"),
                });
            }
        }
        Ok(Entry {
            id: id.to_string(),
            description: spec.description.clone(),
            group,
            sets,
            certificate_order: spec.certificate.clone(),
            pattern: spec.pattern.clone(),
            words: spec.words.clone(),
            search: spec.search.clone(),
            recipe: spec.recipe.clone(),
            refute: spec.refute.clone(),
            double_cosets: spec.double_cosets.clone(),
            notes: spec.notes.clone(),
        })
    }

    /// Entries of a group, in id order.
    pub fn entries_of(&self, group_id: &str) -> Vec<&str> {
        self.file
            .entries
            .iter()
            .filter(|(_, e)| e.group == group_id)
            .map(|(k, _)| k.as_str())
            .collect()
    }

    /// The catalog group whose elements are exactly those of `table`, up to
    /// the degree the permutations are written in.
    pub fn identify(&self, table: &GroupTable) -> Option<Arc<CatalogGroup>> {
        for (id, spec) in &self.file.groups {
            if spec.order != table.order() {
                continue;
            }
            let Ok(g) = self.group(id) else { continue };
            if transport_table(&g.table, table).is_some() {
                return Some(g);
            }
        }
        None
    }

    /// Builds a certificate of `word` from an entry's recipe, taking
    /// certificates of subgroups from `sub`. Reversed words are handled by
    /// reversing the result.
    pub fn realize<F>(&self, entry: &Entry, word: &[usize], sub: &mut F) -> Result<Option<Certificate>, CatalogError>
    where
        F: FnMut(&Subgroup, &[usize]) -> Option<Certificate>,
    {
        if let Some(c) = self.realize_forward(entry, word, sub)? {
            return Ok(Some(c));
        }
        let rev: Vec<usize> = word.iter().rev().copied().collect();
        match self.realize_forward(entry, &rev, sub)? {
            Some(c) => Ok(Some(reverse(&c)?)),
            None => Ok(None),
        }
    }

    fn realize_forward<F>(&self, entry: &Entry, word: &[usize], sub: &mut F) -> Result<Option<Certificate>, CatalogError>
    where
        F: FnMut(&Subgroup, &[usize]) -> Option<Certificate>,
    {
        let g = &entry.group;
        match &entry.recipe {
            Some(Recipe::Sandwich { left, right, .. }) => {
                let a = named(entry, g, left)?;
                let b = named(entry, g, right)?;
                Ok(sandwich(a, b, word, sub))
            }
            Some(Recipe::Lift { subgroup }) => {
                let h = named(entry, g, subgroup)?;
                Ok(transversal_lift(h, word, sub))
            }
            Some(Recipe::Template { entry: inner }) => {
                let inner = self.load(inner)?;
                Ok(template(&inner, word, sub)?)
            }
            None => Ok(template(entry, word, sub)?),
        }
    }
}

fn named<'a>(entry: &Entry, g: &'a CatalogGroup, name: &str) -> Result<&'a Subgroup, CatalogError> {
    g.subgroups.get(name).ok_or_else(|| CatalogError::Malformed {
        entry: entry.id.clone(),
        reason: format!("group {} has no subgroup {name}", g.id),
    })
}

/// Splits `word` as `left ++ [s] ++ right` (or `left ++ right` when there
/// is a single double coset) and refines both subgroups.
pub fn sandwich<F>(a: &Subgroup, b: &Subgroup, word: &[usize], sub: &mut F) -> Option<Certificate>
where
    F: FnMut(&Subgroup, &[usize]) -> Option<Certificate>,
{
    let (ka, kb) = (split_point(word, a.order())?, split_point_rev(word, b.order())?);
    let middle = &word[ka..word.len() - kb];
    let dc = double_cosets(a, b).ok()?;
    let fits = match middle {
        [] => dc.count() == 1,
        [s] => dc.count() == *s,
        _ => false,
    };
    if !fits {
        return None;
    }
    let ca = sub(a, &word[..ka])?;
    let cb = sub(b, &word[word.len() - kb..])?;
    compose_sandwich(a, &ca, &dc.representatives, b, &cb).ok()
}

/// `word = sub-word ++ [index]` by a right transversal, or the mirror
/// image by a left one.
pub fn transversal_lift<F>(h: &Subgroup, word: &[usize], sub: &mut F) -> Option<Certificate>
where
    F: FnMut(&Subgroup, &[usize]) -> Option<Certificate>,
{
    let idx = h.index();
    let k = word.len();
    if k >= 2 && word[k - 1] == idx {
        if let Some(c) = sub(h, &word[..k - 1]) {
            return lift_by_transversal(&c, h, Side::Right).ok();
        }
    }
    if k >= 2 && word[0] == idx {
        if let Some(c) = sub(h, &word[1..]) {
            return lift_by_transversal(&c, h, Side::Left).ok();
        }
    }
    None
}

/// Matches `word` against the entry's certificate: plain sets take one
/// letter equal to their size, product sets one letter per part, and
/// subgroups a run of letters that is then solved inside the subgroup.
fn template<F>(entry: &Entry, word: &[usize], sub: &mut F) -> Result<Option<Certificate>, CertifyError>
where
    F: FnMut(&Subgroup, &[usize]) -> Option<Certificate>,
{
    let Some(base) = entry.certificate() else { return Ok(None) };
    let mut pos = 0;
    // (factor position in the expanded certificate, subgroup, sub-word)
    let mut refinements = Vec::new();
    let mut factors = Vec::new();
    for name in &entry.certificate_order {
        let s = &entry.sets[name];
        match s {
            CatalogSet::Subgroup(h) => {
                let Some(len) = word.get(pos..).and_then(|w| split_point(w, h.order())) else {
                    return Ok(None);
                };
                refinements.push((factors.len(), h, pos..pos + len));
                factors.push(h.members().clone());
                pos += len;
            }
            CatalogSet::Elements(set) => {
                if word.get(pos) != Some(&set.len()) {
                    return Ok(None);
                }
                factors.push(set.clone());
                pos += 1;
            }
            CatalogSet::Product { parts, .. } => {
                for p in parts {
                    if word.get(pos) != Some(&p.len()) {
                        return Ok(None);
                    }
                    factors.push(p.clone());
                    pos += 1;
                }
            }
        }
    }
    if pos != word.len() {
        return Ok(None);
    }
    let mut cert = Certificate::new(Arc::clone(base.group()), factors)?;
    // Refine from the right so earlier positions stay valid.
    for (at, h, range) in refinements.into_iter().rev() {
        let Some(c) = sub(h, &word[range]) else { return Ok(None) };
        cert = refine_by_subgroup(&cert, at, &c)?;
    }
    Ok(Some(cert))
}

/// Number of leading letters whose product is `m`.
fn split_point(word: &[usize], m: usize) -> Option<usize> {
    let mut p = 1;
    for (i, &x) in word.iter().enumerate() {
        if p == m {
            return Some(i);
        }
        p *= x;
        if p > m {
            return None;
        }
    }
    (p == m).then_some(word.len())
}

fn split_point_rev(word: &[usize], m: usize) -> Option<usize> {
    let rev: Vec<usize> = word.iter().rev().copied().collect();
    split_point(&rev, m)
}

fn build_group(id: &str, spec: &GroupSpec) -> Result<CatalogGroup, CatalogError> {
    let table = Arc::new(GroupTable::from_cycle_strings(spec.degree, &spec.generators)?);
    if table.order() != spec.order {
        return Err(CatalogError::OrderMismatch {
            entry: id.to_string(),
            what: "group".into(),
            expected: spec.order,
            actual: table.order(),
        });
    }
    let mut subgroups = BTreeMap::new();
    for (name, s) in &spec.subgroups {
        let h = match (&s.generators, s.sylow, s.order_search) {
            (Some(gens), None, None) => generated(id, &table, gens)?,
            (None, Some(p), None) => sylow_subgroup(&table, p)?,
            (None, None, Some(m)) => find_subgroup_of_order(&table, m).ok_or_else(|| CatalogError::Malformed {
                entry: id.to_string(),
                reason: format!("no subgroup of order {m}"),
            })?,
            _ => {
                return Err(CatalogError::Malformed {
                    entry: id.to_string(),
                    reason: format!("subgroup {name} needs exactly one of generators, sylow, order_search"),
                })
            }
        };
        if h.order() != s.order {
            return Err(CatalogError::OrderMismatch {
                entry: id.to_string(),
                what: name.clone(),
                expected: s.order,
                actual: h.order(),
            });
        }
        subgroups.insert(name.clone(), h);
    }
    for l in &spec.licenses {
        let ok = subgroups.get(&l.subgroup).is_some_and(|h| h.index() == l.index);
        if !ok {
            return Err(CatalogError::Malformed {
                entry: id.to_string(),
                reason: format!("license names {} with index {}", l.subgroup, l.index),
            });
        }
    }
    Ok(CatalogGroup {
        id: id.to_string(),
        table,
        subgroups,
        licenses: spec.licenses.iter().map(|l| (l.subgroup.clone(), l.index)).collect(),
        refuted: spec.refuted.clone(),
        multifold_classes: spec.multifold_classes,
    })
}

fn element(entry: &str, g: &GroupTable, text: &str) -> Result<usize, CatalogError> {
    let not_in = || CatalogError::ElementNotInGroup {
        entry: entry.to_string(),
        group: format!("the group of order {}", g.order()),
        element: text.to_string(),
    };
    let p = Perm::parse(text, g.degree()).map_err(|e| match e {
        PermError::PointOutOfRange { .. } => not_in(),
        e => e.into(),
    })?;
    g.index_of(&p).ok_or_else(not_in)
}

fn elements(entry: &str, g: &GroupTable, texts: &[String]) -> Result<FactorSet, CatalogError> {
    let idx = texts.iter().map(|t| element(entry, g, t)).collect::<Result<Vec<_>, _>>()?;
    let set = FactorSet::new(g.order(), idx.iter().copied());
    if set.len() != idx.len() {
        return Err(CatalogError::Malformed {
            entry: entry.to_string(),
            reason: "repeated element in a set".into(),
        });
    }
    Ok(set)
}

fn generated(entry: &str, g: &Arc<GroupTable>, gens: &[String]) -> Result<Subgroup, CatalogError> {
    let idx = gens.iter().map(|t| element(entry, g, t)).collect::<Result<Vec<_>, _>>()?;
    Ok(Subgroup::generated(g, &idx))
}

fn resolve_set(entry: &str, group: &CatalogGroup, name: &str, s: &SetSpec) -> Result<CatalogSet, CatalogError> {
    let g = &group.table;
    let malformed = |reason: String| CatalogError::Malformed {
        entry: entry.to_string(),
        reason,
    };
    match (&s.subgroup, &s.generators, &s.elements, &s.product) {
        (Some(n), None, None, None) => group
            .subgroups
            .get(n)
            .cloned()
            .map(CatalogSet::Subgroup)
            .ok_or_else(|| malformed(format!("set {name} names unknown subgroup {n}"))),
        (None, Some(gens), None, None) => Ok(CatalogSet::Subgroup(generated(entry, g, gens)?)),
        (None, None, Some(els), None) => Ok(CatalogSet::Elements(elements(entry, g, els)?)),
        (None, None, None, Some(parts)) => {
            let parts = parts.iter().map(|p| elements(entry, g, p)).collect::<Result<Vec<_>, _>>()?;
            let mut set = parts[0].clone();
            for p in &parts[1..] {
                set = crate::certify::product_distinct(g, &set, p)
                    .map_err(|_| malformed(format!("product set {name} has repeats")))?;
            }
            Ok(CatalogSet::Product { set, parts })
        }
        _ => Err(malformed(format!("set {name} needs exactly one of subgroup, generators, elements, product"))),
    }
}

/// Index map from `from` to `to` when both tables hold the same
/// permutations, possibly written in different degrees.
pub fn transport_table(from: &GroupTable, to: &GroupTable) -> Option<Vec<usize>> {
    if from.order() != to.order() {
        return None;
    }
    from.elements()
        .iter()
        .map(|p| p.with_degree(to.degree()).ok().and_then(|q| to.index_of(&q)))
        .collect()
}

/// Re-expresses a certificate over another table with the same elements.
pub fn transport(c: &Certificate, to: &Arc<GroupTable>) -> Option<Certificate> {
    let map = transport_table(c.group(), to)?;
    let factors = c
        .factors()
        .iter()
        .map(|f| FactorSet::new(to.order(), f.iter().map(|x| map[x])))
        .collect();
    Certificate::new(Arc::clone(to), factors).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn groups_have_their_stated_orders() {
        let cat = Catalog::builtin();
        let ids: Vec<String> = cat.group_ids().map(String::from).collect();
        for id in ids {
            cat.group(&id).unwrap();
        }
        assert_eq!(cat.group("group-168").unwrap().table.order(), 168);
    }

    #[test]
    fn every_entry_loads() {
        let cat = Catalog::builtin();
        let ids: Vec<String> = cat.entry_ids().map(String::from).collect();
        for id in ids {
            cat.load(&id).unwrap_or_else(|e| panic!("{id}: {e}"));
        }
    }

    #[test]
    fn lemma_4_4_sets() {
        let e = Catalog::builtin().load("lemma-4.4").unwrap();
        assert_eq!(e.set("A").unwrap().subgroup().unwrap().order(), 18);
        assert_eq!(e.set("B").unwrap().set().len(), 5);
        assert_eq!(e.certificate().unwrap().pattern(), vec![18, 5, 2, 2]);
    }

    #[test]
    fn unknown_id_and_foreign_element() {
        let cat = Catalog::builtin();
        assert!(matches!(cat.load("lemma-9.9"), Err(CatalogError::UnknownId(_))));
        let bad = BUILTIN.replacen("\"(1,5)(6,7)\"", "\"(1,2)\"", 1);
        let cat = Catalog::parse(&bad, "test").unwrap();
        assert!(matches!(cat.load("lemma-3.6"), Err(CatalogError::ElementNotInGroup { .. })));
    }

    #[test]
    fn identify_across_degrees() {
        let cat = Catalog::builtin();
        let a6 = cat.group("a6").unwrap();
        let (sub, _) = a6.subgroups["A5"].table().unwrap();
        assert_eq!(sub.degree(), 6);
        assert_eq!(cat.identify(&sub).unwrap().id, "a5");
    }
}
