//! Subgroups, cosets, double cosets, conjugation and quotients.

use std::collections::HashSet;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::factor_set::{closure, FactorSet};
use crate::group::{GroupError, GroupTable};
use crate::perm::Perm;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructureError {
    #[error("subgroups live in different groups")]
    DifferentParents,
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("{0} is not a prime dividing the group order")]
    NoSuchPrime(usize),
    #[error("element set is not a subgroup")]
    NotASubgroup,
    #[error("quotient of order {0} has no permutation representation of degree at most 16")]
    QuotientTooLarge(usize),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A subgroup of a shared parent table.
#[derive(Clone)]
pub struct Subgroup {
    group: Arc<GroupTable>,
    members: FactorSet,
    generators: Vec<usize>,
}

impl Subgroup {
    pub fn generated(group: &Arc<GroupTable>, gens: &[usize]) -> Self {
        let members = FactorSet::from_bits(closure(group, gens));
        let mut generators: Vec<usize> = gens.iter().copied().filter(|&x| x != 0).collect();
        generators.dedup();
        Subgroup {
            group: Arc::clone(group),
            members,
            generators,
        }
    }

    pub fn from_perms(group: &Arc<GroupTable>, gens: &[Perm]) -> Option<Self> {
        let idx = gens
            .iter()
            .map(|p| group.index_of(p))
            .collect::<Option<Vec<_>>>()?;
        Some(Self::generated(group, &idx))
    }

    /// Wraps an element set after checking that it is a subgroup.
    pub fn from_members(group: &Arc<GroupTable>, members: FactorSet) -> Result<Self, StructureError> {
        if !members.contains_identity() {
            return Err(StructureError::NotASubgroup);
        }
        for a in members.iter() {
            if !members.contains(group.inv(a)) {
                return Err(StructureError::NotASubgroup);
            }
            for b in members.iter() {
                if !members.contains(group.mul(a, b)) {
                    return Err(StructureError::NotASubgroup);
                }
            }
        }
        let generators = members.iter().filter(|&x| x != 0).collect();
        Ok(Subgroup {
            group: Arc::clone(group),
            members,
            generators,
        })
    }

    pub fn whole(group: &Arc<GroupTable>) -> Self {
        Subgroup {
            group: Arc::clone(group),
            members: FactorSet::whole(group.order()),
            generators: group
                .generators()
                .iter()
                .filter_map(|p| group.index_of(p))
                .collect(),
        }
    }

    pub fn trivial(group: &Arc<GroupTable>) -> Self {
        Self::generated(group, &[])
    }

    pub fn group(&self) -> &Arc<GroupTable> {
        &self.group
    }

    pub fn members(&self) -> &FactorSet {
        &self.members
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn index(&self) -> usize {
        self.group.order() / self.order()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.contains(x)
    }

    pub fn is_normal(&self) -> bool {
        let g = &self.group;
        (0..g.order()).all(|x| self.members.iter().all(|h| self.contains(g.conjugate(h, x))))
    }

    /// One representative per right coset `Hx`: the least index in the coset.
    pub fn right_transversal(&self) -> Vec<usize> {
        self.transversal(|h, x| self.group.mul(h, x))
    }

    /// One representative per left coset `xH`: the least index in the coset.
    pub fn left_transversal(&self) -> Vec<usize> {
        self.transversal(|h, x| self.group.mul(x, h))
    }

    fn transversal(&self, act: impl Fn(usize, usize) -> usize) -> Vec<usize> {
        let n = self.group.order();
        let mut covered = FixedBitSet::with_capacity(n);
        let mut reps = Vec::with_capacity(self.index());
        for x in 0..n {
            if covered.contains(x) {
                continue;
            }
            reps.push(x);
            for h in self.members.iter() {
                covered.insert(act(h, x));
            }
        }
        reps
    }

    /// Position of each element's right coset `Hx` in [`Self::right_transversal`].
    pub fn right_coset_ids(&self) -> Vec<usize> {
        let n = self.group.order();
        let mut ids = vec![usize::MAX; n];
        let mut next = 0;
        for x in 0..n {
            if ids[x] != usize::MAX {
                continue;
            }
            for h in self.members.iter() {
                ids[self.group.mul(h, x)] = next;
            }
            next += 1;
        }
        ids
    }

    /// The subgroup as a table of its own, with the embedding of its
    /// indices into the parent. The embedding is increasing because both
    /// tables sort by image arrays.
    pub fn table(&self) -> Result<(Arc<GroupTable>, Vec<usize>), StructureError> {
        let g = &self.group;
        let elements = self.members.iter().map(|x| *g.element(x)).collect();
        let gens = self.generators.iter().map(|&x| *g.element(x)).collect();
        let table = GroupTable::from_elements(g.degree(), elements, gens)?;
        Ok((Arc::new(table), self.members.indices().to_vec()))
    }

    /// `x⁻¹ H x`.
    pub fn conjugate_by(&self, x: usize) -> Subgroup {
        let g = &self.group;
        Subgroup {
            group: Arc::clone(g),
            members: FactorSet::new(g.order(), self.members.iter().map(|h| g.conjugate(h, x))),
            generators: self.generators.iter().map(|&h| g.conjugate(h, x)).collect(),
        }
    }
}

impl std::fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let gens: Vec<String> = self
            .generators
            .iter()
            .map(|&x| self.group.element(x).to_string())
            .collect();
        f.debug_struct("Subgroup")
            .field("order", &self.order())
            .field("generators", &gens)
            .finish()
    }
}

pub(crate) fn same_parent(a: &GroupTable, b: &GroupTable) -> bool {
    std::ptr::eq(a, b) || a.elements() == b.elements()
}

/// The decomposition `G = A t₁ B ∪ … ∪ A t_s B`.
#[derive(Debug, Clone)]
pub struct DoubleCosetDecomposition {
    pub left: Subgroup,
    pub right: Subgroup,
    /// Least element of each double coset, ascending.
    pub representatives: Vec<usize>,
    pub coset_sizes: Vec<usize>,
}

impl DoubleCosetDecomposition {
    pub fn count(&self) -> usize {
        self.representatives.len()
    }
}

pub fn double_cosets(a: &Subgroup, b: &Subgroup) -> Result<DoubleCosetDecomposition, StructureError> {
    if !same_parent(a.group(), b.group()) {
        return Err(StructureError::DifferentParents);
    }
    let g = a.group();
    let n = g.order();
    let mut covered = FixedBitSet::with_capacity(n);
    let mut representatives = Vec::new();
    let mut coset_sizes = Vec::new();
    for t in 0..n {
        if covered.contains(t) {
            continue;
        }
        let mut size = 0;
        for x in a.members().iter() {
            let xt = g.mul(x, t);
            for y in b.members().iter() {
                if !covered.put(g.mul(xt, y)) {
                    size += 1;
                }
            }
        }
        representatives.push(t);
        coset_sizes.push(size);
    }
    debug_assert_eq!(coset_sizes.iter().sum::<usize>(), n);
    Ok(DoubleCosetDecomposition {
        left: a.clone(),
        right: b.clone(),
        representatives,
        coset_sizes,
    })
}

/// Whether `x⁻¹ A x ∩ B = {e}` for every `x` in the parent group.
pub fn conjugate_intersection_trivial(a: &Subgroup, b: &Subgroup) -> bool {
    let g = a.group();
    (0..g.order()).all(|x| {
        a.members()
            .iter()
            .filter(|&h| h != 0)
            .all(|h| !b.contains(g.conjugate(h, x)))
    })
}

/// `G/N` realised as the permutation action of `G` on the right cosets of
/// `N`; for trivial `N` this is `G` itself.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub table: Arc<GroupTable>,
    /// Element index of `G` to element index of the quotient.
    pub projection: Vec<usize>,
    /// Least element of `G` in each coset, by quotient index.
    pub least_representative: Vec<usize>,
}

pub fn quotient_group(n: &Subgroup) -> Result<Quotient, StructureError> {
    if !n.is_normal() {
        return Err(StructureError::NotNormal);
    }
    let g = n.group();
    if n.order() == 1 {
        return Ok(Quotient {
            table: Arc::clone(g),
            projection: (0..g.order()).collect(),
            least_representative: (0..g.order()).collect(),
        });
    }
    let index = n.index();
    if index > crate::perm::MAX_DEGREE {
        return Err(StructureError::QuotientTooLarge(index));
    }
    let reps = n.right_transversal();
    let ids = n.right_coset_ids();
    let action = |x: usize| -> Perm {
        let images: Vec<usize> = reps.iter().map(|&r| ids[g.mul(r, x)] + 1).collect();
        Perm::from_images(&images).expect("coset action is a permutation")
    };
    let perms: Vec<Perm> = (0..g.order()).map(action).collect();
    let gens = g.generators().iter().filter_map(|p| g.index_of(p)).map(&action).collect();
    let mut distinct = perms.clone();
    distinct.sort();
    distinct.dedup();
    let table = GroupTable::from_elements(index, distinct, gens)?;
    let projection: Vec<usize> = perms.iter().map(|p| table.index_of(p).expect("image lies in quotient")).collect();
    let mut least_representative = vec![usize::MAX; table.order()];
    for (x, &q) in projection.iter().enumerate() {
        if least_representative[q] == usize::MAX {
            least_representative[q] = x;
        }
    }
    Ok(Quotient {
        table: Arc::new(table),
        projection,
        least_representative,
    })
}

/// Subgroup discovery by closure: cyclic subgroups first, then subgroups
/// generated by one more element, level by level. Levels are cached.
pub struct SubgroupSearch {
    group: Arc<GroupTable>,
    /// `levels[k]` holds the distinct subgroups first reached with `k + 1` generators.
    levels: Vec<Vec<(FixedBitSet, Vec<usize>)>>,
    seen: HashSet<FixedBitSet>,
}

impl SubgroupSearch {
    pub fn new(group: &Arc<GroupTable>) -> Self {
        SubgroupSearch {
            group: Arc::clone(group),
            levels: Vec::new(),
            seen: HashSet::new(),
        }
    }

    /// The least subgroup of order `m` (comparing sorted member lists)
    /// among those found at the first level that contains one.
    pub fn find_of_order(&mut self, m: usize) -> Option<Subgroup> {
        self.all_of_order(m, 1).into_iter().next()
    }

    /// Up to `limit` subgroups of order `m` in canonical order, taken from
    /// the first level that yields any.
    pub fn all_of_order(&mut self, m: usize, limit: usize) -> Vec<Subgroup> {
        let n = self.group.order();
        if m == 0 || !n.is_multiple_of(m) {
            return Vec::new();
        }
        if m == 1 {
            return vec![Subgroup::trivial(&self.group)];
        }
        let mut level = 0;
        loop {
            if level == self.levels.len() && !self.grow(m) {
                return Vec::new();
            }
            let mut hits: Vec<&(FixedBitSet, Vec<usize>)> = self.levels[level]
                .iter()
                .filter(|(bits, _)| bits.count_ones(..) == m)
                .collect();
            if !hits.is_empty() {
                hits.sort_by(|a, b| a.0.ones().cmp(b.0.ones()));
                return hits
                    .into_iter()
                    .take(limit)
                    .map(|(bits, gens)| Subgroup {
                        group: Arc::clone(&self.group),
                        members: FactorSet::from_bits(bits.clone()),
                        generators: gens.clone(),
                    })
                    .collect();
            }
            level += 1;
        }
    }

    /// Adds the next level, extending only subgroups whose order divides
    /// `m`. Returns false when nothing new appears.
    fn grow(&mut self, m: usize) -> bool {
        let g = Arc::clone(&self.group);
        let n = g.order();
        let mut next = Vec::new();
        if self.levels.is_empty() {
            for x in 1..n {
                let bits = closure(&g, &[x]);
                if self.seen.insert(bits.clone()) {
                    next.push((bits, vec![x]));
                }
            }
        } else {
            // Everything found so far whose order divides m is a candidate seed.
            let seeds: Vec<(FixedBitSet, Vec<usize>)> = self
                .levels
                .iter()
                .flatten()
                .filter(|(b, _)| {
                    let k = b.count_ones(..);
                    k < m && m.is_multiple_of(k)
                })
                .cloned()
                .collect();
            for (bits, gens) in seeds {
                for x in 1..n {
                    if bits.contains(x) {
                        continue;
                    }
                    let mut ext = gens.clone();
                    ext.push(x);
                    let new_bits = closure(&g, &ext);
                    if self.seen.insert(new_bits.clone()) {
                        next.push((new_bits, ext));
                    }
                }
            }
        }
        let grew = !next.is_empty();
        self.levels.push(next);
        grew
    }
}

pub fn find_subgroup_of_order(g: &Arc<GroupTable>, m: usize) -> Option<Subgroup> {
    SubgroupSearch::new(g).find_of_order(m)
}

fn is_prime(p: usize) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// A Sylow `p`-subgroup, grown greedily from p-elements in index order.
pub fn sylow_subgroup(g: &Arc<GroupTable>, p: usize) -> Result<Subgroup, StructureError> {
    let n = g.order();
    if !is_prime(p) || !n.is_multiple_of(p) {
        return Err(StructureError::NoSuchPrime(p));
    }
    let mut target = 1;
    let mut rest = n;
    while rest.is_multiple_of(p) {
        rest /= p;
        target *= p;
    }
    let is_p_power = |mut k: usize| {
        while k.is_multiple_of(p) {
            k /= p;
        }
        k == 1
    };
    let p_elements: Vec<usize> = (1..n).filter(|&x| is_p_power(g.element_order(x))).collect();
    let mut gens: Vec<usize> = Vec::new();
    let mut current = closure(g, &gens);
    while current.count_ones(..) < target {
        let mut extended = false;
        for &x in &p_elements {
            if current.contains(x) {
                continue;
            }
            let mut trial = gens.clone();
            trial.push(x);
            let bits = closure(g, &trial);
            if is_p_power(bits.count_ones(..)) {
                gens = trial;
                current = bits;
                extended = true;
                break;
            }
        }
        // A p-subgroup that is not Sylow always has a p-element of its
        // normalizer outside it, so the greedy step cannot stall.
        assert!(extended, "Sylow growth stalled");
    }
    Ok(Subgroup::generated(g, &gens))
}
