//! Independent sets of a prescribed size in small dense graphs.
//!
//! A greedy pass supplies a quick seed. The exact search is a bitset
//! branch and bound whose bound is a greedy clique cover of the live
//! vertices. When the caller knows a family of cliques that every target
//! set must meet, the search branches on the clique with the fewest live
//! vertices, which turns exact-cover-like instances into short searches.

use fixedbitset::FixedBitSet;

use super::Budget;

/// Hints for covering-style instances.
pub struct MustHit<'a> {
    /// `cliques[j]`: vertices of clique `j`.
    pub cliques: &'a [FixedBitSet],
    /// `membership[v]`: cliques containing vertex `v`.
    pub membership: &'a [FixedBitSet],
}

#[derive(Debug, Clone, Default)]
pub struct IndependentSets {
    pub sets: Vec<Vec<usize>>,
    pub complete: bool,
    pub nodes: u64,
}

/// Repeatedly deletes a vertex of maximum remaining degree until the rest
/// is independent. Ties go to the lower index.
pub fn greedy_independent_set(adjacency: &[FixedBitSet]) -> Vec<usize> {
    let n = adjacency.len();
    let mut live = FixedBitSet::with_capacity(n);
    live.insert_range(..);
    loop {
        let mut worst = None;
        let mut worst_deg = 0;
        for v in live.ones() {
            let deg = adjacency[v].intersection(&live).count();
            if deg > worst_deg {
                worst_deg = deg;
                worst = Some(v);
            }
        }
        match worst {
            Some(v) => live.set(v, false),
            None => return live.ones().collect(),
        }
    }
}

/// Upper bound on the independence number of the subgraph on `live`: the
/// number of cliques in a greedy clique cover.
pub fn clique_cover_bound(adjacency: &[FixedBitSet], live: &FixedBitSet) -> usize {
    // Each entry is the set of vertices adjacent to every member so far.
    let mut commons: Vec<FixedBitSet> = Vec::new();
    for v in live.ones() {
        match commons.iter_mut().find(|c| c.contains(v)) {
            Some(c) => c.intersect_with(&adjacency[v]),
            None => commons.push(adjacency[v].clone()),
        }
    }
    commons.len()
}

struct Search<'a> {
    adjacency: &'a [FixedBitSet],
    hint: Option<MustHit<'a>>,
    size: usize,
    limit: Option<usize>,
    budget: &'a Budget,
    chosen: Vec<usize>,
    out: IndependentSets,
}

impl Search<'_> {
    /// Returns true when the search must stop.
    fn rec(&mut self, live: &FixedBitSet, hit: &FixedBitSet) -> bool {
        self.out.nodes += 1;
        if self.out.nodes.is_multiple_of(1024) && self.budget.expired() {
            self.out.complete = false;
            return true;
        }
        if self.chosen.len() == self.size {
            let mut set = self.chosen.clone();
            set.sort_unstable();
            self.out.sets.push(set);
            return self.limit.is_some_and(|l| self.out.sets.len() >= l);
        }
        let need = self.size - self.chosen.len();
        if live.count_ones(..) < need || clique_cover_bound(self.adjacency, live) < need {
            return false;
        }
        let branch: Vec<usize> = match &self.hint {
            Some(h) => {
                let mut best: Option<(usize, usize)> = None;
                for j in (0..h.cliques.len()).filter(|&j| !hit.contains(j)) {
                    let k = h.cliques[j].intersection(live).count();
                    if best.is_none_or(|(_, bk)| k < bk) {
                        best = Some((j, k));
                        if k == 0 {
                            break;
                        }
                    }
                }
                match best {
                    Some((j, _)) => h.cliques[j].intersection(live).collect(),
                    None => live.ones().collect(),
                }
            }
            None => live.ones().take(1).collect(),
        };
        let with_hint = self.hint.is_some();
        let mut rest = live.clone();
        for v in branch {
            let mut next = rest.clone();
            next.difference_with(&self.adjacency[v]);
            next.set(v, false);
            let mut next_hit = hit.clone();
            if let Some(h) = &self.hint {
                next_hit.union_with(&h.membership[v]);
            }
            self.chosen.push(v);
            let stop = self.rec(&next, &next_hit);
            self.chosen.pop();
            if stop {
                return true;
            }
            if !with_hint {
                // Binary branching: v in, then v out.
                rest.set(v, false);
                return self.rec(&rest, hit);
            }
            // Members of a clique are mutually exclusive, so once v has been
            // tried, later branches need not consider it again.
            rest.set(v, false);
        }
        false
    }
}

/// Independent sets of exactly `size` vertices, at most `limit` of them,
/// in the search's branching order. With a hint, only sets meeting every
/// hinted clique are produced.
pub fn independent_sets_of_size(
    adjacency: &[FixedBitSet],
    hint: Option<MustHit<'_>>,
    size: usize,
    limit: Option<usize>,
    budget: &Budget,
) -> IndependentSets {
    let n = adjacency.len();
    let mut live = FixedBitSet::with_capacity(n);
    live.insert_range(..);
    let hit_len = hint.as_ref().map_or(0, |h| h.cliques.len());
    let mut s = Search {
        adjacency,
        hint,
        size,
        limit,
        budget,
        chosen: Vec::new(),
        out: IndependentSets {
            complete: true,
            ..Default::default()
        },
    };
    s.rec(&live, &FixedBitSet::with_capacity(hit_len));
    s.out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn graph(n: usize, edges: &[(usize, usize)]) -> Vec<FixedBitSet> {
        let mut adj = vec![FixedBitSet::with_capacity(n); n];
        for &(a, b) in edges {
            adj[a].insert(b);
            adj[b].insert(a);
        }
        adj
    }

    fn brute(adj: &[FixedBitSet], size: usize) -> Vec<Vec<usize>> {
        let n = adj.len();
        let mut out = Vec::new();
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize != size {
                continue;
            }
            let vs: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
            if vs.iter().all(|&a| vs.iter().all(|&b| !adj[a].contains(b))) {
                out.push(vs);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn five_cycle() {
        let adj = graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        let b = Budget::unlimited();
        assert_eq!(independent_sets_of_size(&adj, None, 2, None, &b).sets.len(), 5);
        assert!(independent_sets_of_size(&adj, None, 3, None, &b).sets.is_empty());
        assert_eq!(greedy_independent_set(&adj).len(), 2);
        let mut all = FixedBitSet::with_capacity(5);
        all.insert_range(..);
        assert!(clique_cover_bound(&adj, &all) >= 2);
    }

    proptest! {
        #[test]
        fn exact_search_matches_brute_force(n in 1usize..11, seed in prop::collection::vec(any::<bool>(), 55), size in 1usize..5) {
            let mut edges = Vec::new();
            let mut k = 0;
            for a in 0..n {
                for b in a + 1..n {
                    if seed[k % seed.len()] {
                        edges.push((a, b));
                    }
                    k += 1;
                }
            }
            let adj = graph(n, &edges);
            let mut got = independent_sets_of_size(&adj, None, size, None, &Budget::unlimited()).sets;
            got.sort();
            prop_assert_eq!(got, brute(&adj, size));
            let greedy = greedy_independent_set(&adj);
            prop_assert!(greedy.iter().all(|&a| greedy.iter().all(|&b| !adj[a].contains(b))));
        }
    }
}
