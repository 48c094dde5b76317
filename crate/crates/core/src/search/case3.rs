//! `G = A·B·C·D` with `C` found as an independent set.
//!
//! For fixed `A`, `B`, `D` with `|ABD| = m`, a candidate `x` is usable when
//! the block `ABxD` has `m` elements, and two candidates clash when their
//! blocks meet. Any `|G|/m` pairwise compatible candidates form `C`.

use std::sync::Arc;
use std::time::Instant;

use fixedbitset::FixedBitSet;

use super::independent::{greedy_independent_set, independent_sets_of_size, MustHit};
use super::{binomial, in_pool, scan, Budget, Combinations, Limits, Mode, SearchError, SearchOutcome, UnitResult};
use crate::certify::{CertifyError, Certificate};
use crate::factor_set::FactorSet;
use crate::group::GroupTable;
use crate::structure::Subgroup;

/// Candidates for `C` and their clashes.
#[derive(Debug, Clone)]
pub struct CompatibilityGraph {
    /// Element index of each vertex, ascending.
    pub vertices: Vec<usize>,
    /// Adjacency over vertex positions.
    pub adjacency: Vec<FixedBitSet>,
    /// The block `ABxD` of each vertex, over the group.
    pub blocks: Vec<FixedBitSet>,
    /// `|A|·|B|·|D|`.
    pub m: usize,
}

impl CompatibilityGraph {
    pub fn build(a: &Subgroup, b: &FactorSet, d: &FactorSet) -> Result<Self, SearchError> {
        let g = a.group();
        let ab: Vec<usize> = a
            .members()
            .iter()
            .flat_map(|x| b.iter().map(move |y| g.mul(x, y)))
            .collect();
        let m = ab.len() * d.len();
        if block(g, &ab, 0, d).is_none() {
            return Err(SearchError::PrefixCollision);
        }
        Ok(Self::from_prefix(g, &ab, d, m))
    }

    fn from_prefix(g: &GroupTable, ab: &[usize], d: &FactorSet, m: usize) -> Self {
        let mut vertices = Vec::new();
        let mut blocks = Vec::new();
        for x in 0..g.order() {
            if let Some(bits) = block(g, ab, x, d) {
                vertices.push(x);
                blocks.push(bits);
            }
        }
        let k = vertices.len();
        let mut adjacency = vec![FixedBitSet::with_capacity(k); k];
        for i in 0..k {
            for j in i + 1..k {
                if !blocks[i].is_disjoint(&blocks[j]) {
                    adjacency[i].insert(j);
                    adjacency[j].insert(i);
                }
            }
        }
        CompatibilityGraph {
            vertices,
            adjacency,
            blocks,
            m,
        }
    }

    /// For each group element, the vertices whose block contains it.
    fn element_cliques(&self, n: usize) -> Vec<FixedBitSet> {
        let mut cliques = vec![FixedBitSet::with_capacity(self.vertices.len()); n];
        for (v, bits) in self.blocks.iter().enumerate() {
            for z in bits.ones() {
                cliques[z].insert(v);
            }
        }
        cliques
    }

    /// Independent sets of `s` vertices, as element indices. Since
    /// `s·m = |G|` such sets cover the group, so branching on the element
    /// with the fewest candidate blocks is complete.
    pub fn solve(&self, n: usize, s: usize, limit: Option<usize>, budget: &Budget) -> (Vec<Vec<usize>>, bool, u64) {
        if limit == Some(1) {
            let seed = greedy_independent_set(&self.adjacency);
            if seed.len() == s {
                return (vec![self.to_elements(&seed)], true, 1);
            }
        }
        let cliques = self.element_cliques(n);
        let hint = (s * self.m == n).then_some(MustHit {
            cliques: &cliques,
            membership: &self.blocks,
        });
        let found = independent_sets_of_size(&self.adjacency, hint, s, limit, budget);
        let sets = found.sets.iter().map(|set| self.to_elements(set)).collect();
        (sets, found.complete, found.nodes)
    }

    fn to_elements(&self, set: &[usize]) -> Vec<usize> {
        set.iter().map(|&v| self.vertices[v]).collect()
    }
}

/// The block `ab·x·D` as a bitset, or `None` if it has repeats.
fn block(g: &GroupTable, ab: &[usize], x: usize, d: &FactorSet) -> Option<FixedBitSet> {
    let mut bits = FixedBitSet::with_capacity(g.order());
    for &p in ab {
        let px = g.mul(p, x);
        for y in d.iter() {
            if bits.put(g.mul(px, y)) {
                return None;
            }
        }
    }
    Some(bits)
}

/// Loops over `B = {e} ∪ B′` with `B′` drawn from a right transversal of
/// `A` minus the cosets `Ax`, `x ∈ D`, and looks for `C` in each graph.
pub fn case3_search(a: &Subgroup, d: &FactorSet, b_size: usize, mode: Mode, limits: &Limits) -> Result<SearchOutcome, SearchError> {
    let start = Instant::now();
    let g = a.group();
    let n = g.order();
    if d.universe() != n || !d.contains_identity() {
        return Err(SearchError::AnchorInvalid("last factor must be a set of this group containing e".into()));
    }
    let m = a.order() * b_size * d.len();
    if b_size == 0 || !n.is_multiple_of(m) {
        return Err(SearchError::AnchorInvalid(format!("{m} does not divide {n}")));
    }
    let s = n / m;
    let ids = a.right_coset_ids();
    let mut excluded: Vec<usize> = d.iter().map(|x| ids[x]).collect();
    excluded.sort_unstable();
    excluded.dedup();
    if excluded.len() != d.len() {
        return Err(SearchError::AnchorInvalid("cosets Ax, x in D, are not distinct".into()));
    }
    let w_prime: Vec<usize> = a
        .right_transversal()
        .into_iter()
        .filter(|&r| excluded.binary_search(&ids[r]).is_err())
        .collect();
    let formula = binomial(w_prime.len(), b_size - 1);
    let budget = Budget::new(limits.budget);
    let per_graph = match mode {
        Mode::FindFirst => Some(1),
        Mode::FindAll => limits.max_solutions,
    };

    let work = |comb: Vec<usize>| -> UnitResult<(Vec<usize>, Vec<usize>)> {
        let mut res = UnitResult::new();
        res.stats.candidates += 1;
        let b: Vec<usize> = std::iter::once(0).chain(comb.iter().map(|&i| w_prime[i])).collect();
        let ab: Vec<usize> = a
            .members()
            .iter()
            .flat_map(|x| b.iter().map(move |&y| g.mul(x, y)))
            .collect();
        res.stats.checks += 1;
        if block(g, &ab, 0, d).is_none() {
            res.stats.pruned_prefixes += 1;
            return res;
        }
        let graph = CompatibilityGraph::from_prefix(g, &ab, d, m);
        res.stats.graph_builds += 1;
        let (sets, complete, nodes) = graph.solve(n, s, per_graph, &budget);
        res.stats.nodes += nodes;
        res.complete = complete;
        res.found = sets.into_iter().map(|c| (b.clone(), c)).collect();
        res
    };

    let units = Combinations::new(w_prime.len(), b_size - 1);
    let scanned = in_pool(limits.threads, || scan(units, mode, limits.max_solutions, &budget, work))?;
    let mut solutions = Vec::with_capacity(scanned.found.len());
    for (b, c) in scanned.found {
        let factors = vec![a.members().clone(), FactorSet::new(n, b), FactorSet::new(n, c), d.clone()];
        let cert = Certificate::new(Arc::clone(g), factors)?.strip_singletons();
        let verdict = cert.verify();
        if !verdict.is_valid() {
            return Err(CertifyError::ConstructionFailed(verdict).into());
        }
        solutions.push(cert);
    }
    Ok(SearchOutcome {
        strategy: "case3",
        solutions,
        stats: scanned.stats,
        formula_candidates: Some(formula),
        exhaustive: scanned.exhaustive,
        elapsed: start.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Perm;

    fn s4() -> Arc<GroupTable> {
        Arc::new(GroupTable::from_cycle_strings(4, &["(1,2,3,4)", "(1,2)"]).unwrap())
    }

    #[test]
    fn trivial_b_and_d_give_coset_multipartite_graph() {
        let g = s4();
        let a = Subgroup::from_perms(&g, &[Perm::parse("(1,2,3)", 4).unwrap()]).unwrap();
        let e = FactorSet::singleton(24, 0);
        let graph = CompatibilityGraph::build(&a, &e, &e).unwrap();
        assert_eq!(graph.vertices.len(), 24);
        let ids = a.right_coset_ids();
        for i in 0..24 {
            for j in 0..24 {
                if i != j {
                    assert_eq!(graph.adjacency[i].contains(j), ids[i] == ids[j]);
                }
            }
        }
        let (sets, complete, _) = graph.solve(24, 8, None, &Budget::unlimited());
        assert!(complete);
        assert_eq!(sets.len(), 3usize.pow(8));
    }

    #[test]
    fn vertex_rule_excludes_short_blocks() {
        let g = s4();
        let a = Subgroup::from_perms(&g, &[Perm::parse("(1,2)", 4).unwrap()]).unwrap();
        let t = g.index_of(&Perm::parse("(1,2)", 4).unwrap()).unwrap();
        let e = FactorSet::singleton(24, 0);
        let u = g.index_of(&Perm::parse("(3,4)", 4).unwrap()).unwrap();
        let d = FactorSet::new(24, [0, u]);
        let graph = CompatibilityGraph::build(&a, &e, &d).unwrap();
        // A·x·D repeats exactly when x⁻¹tx = u.
        for x in 0..24 {
            assert_eq!(graph.vertices.contains(&x), g.conjugate(t, x) != u);
        }
        assert_eq!(graph.vertices.len(), 20);
    }

    #[test]
    fn prefix_collision_is_reported() {
        let g = s4();
        let a = Subgroup::from_perms(&g, &[Perm::parse("(1,2)", 4).unwrap()]).unwrap();
        let b = FactorSet::new(24, [0, g.index_of(&Perm::parse("(1,2)", 4).unwrap()).unwrap()]);
        let e = FactorSet::singleton(24, 0);
        assert!(matches!(CompatibilityGraph::build(&a, &b, &e), Err(SearchError::PrefixCollision)));
    }

    #[test]
    fn solutions_are_independent_and_full_blocks() {
        let g = s4();
        let a = Subgroup::from_perms(&g, &[Perm::parse("(1,2,3)", 4).unwrap()]).unwrap();
        let d = FactorSet::new(24, [0, g.index_of(&Perm::parse("(1,2,3,4)", 4).unwrap()).unwrap()]);
        let out = case3_search(&a, &d, 2, Mode::FindAll, &Limits::default()).unwrap();
        assert!(out.exhaustive);
        assert!(!out.solutions.is_empty());
        for cert in &out.solutions {
            let f = cert.factors();
            let graph = CompatibilityGraph::build(&a, &f[1], &f[3]).unwrap();
            let pos: Vec<usize> = f[2].iter().map(|c| graph.vertices.binary_search(&c).unwrap()).collect();
            for &i in &pos {
                assert_eq!(graph.blocks[i].count_ones(..), graph.m);
                assert!(pos.iter().all(|&j| !graph.adjacency[i].contains(j)));
            }
        }
    }
}
