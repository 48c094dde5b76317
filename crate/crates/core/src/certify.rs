//! Certificates `G = A₁⋯A_k`, their verifier, and the transformations that
//! build new certificates from old ones.
//!
//! Every constructor here ends by running [`verify_certificate`]; nothing is
//! trusted because of how it was built.

use std::sync::Arc;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::factor_set::FactorSet;
use crate::group::GroupTable;
use crate::structure::{
    conjugate_intersection_trivial, quotient_group, same_parent, StructureError, Subgroup,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertifyError {
    #[error("certificate has no factors")]
    Empty,
    #[error("factor {0} is empty")]
    EmptyFactor(usize),
    #[error("factor {0} does not belong to this group")]
    WrongUniverse(usize),
    #[error("certificate and subgroup live in different groups")]
    DifferentParents,
    #[error("input certificate is not valid: {0:?}")]
    InvalidInput(Verdict),
    #[error("constructed certificate failed verification: {0:?}")]
    ConstructionFailed(Verdict),
    #[error("position {position} is out of range for {len} factors")]
    InvalidPosition { position: usize, len: usize },
    #[error("some conjugate of the left subgroup meets the right subgroup nontrivially")]
    ConditionFailed,
    #[error("replacement factors do not multiply out to factor {0}")]
    NotAFactorization(usize),
    #[error(transparent)]
    Structure(#[from] StructureError),
}

/// Outcome of [`verify_certificate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    /// The product of the first `prefix_len` factors already repeats an element.
    Collision { prefix_len: usize },
    /// All products are distinct but only `covered` elements are reached.
    Incomplete { covered: usize },
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }
}

/// Signals that `|ST| < |S|·|T|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Collision;

/// The set `ST`, provided every product is distinct.
pub fn product_distinct(g: &GroupTable, s: &FactorSet, t: &FactorSet) -> Result<FactorSet, Collision> {
    let mut bits = FixedBitSet::with_capacity(g.order());
    for x in s.iter() {
        for y in t.iter() {
            if bits.put(g.mul(x, y)) {
                return Err(Collision);
            }
        }
    }
    Ok(FactorSet::from_bits(bits))
}

/// An ordered list of factors claimed to multiply out to the whole group.
#[derive(Clone)]
pub struct Certificate {
    group: Arc<GroupTable>,
    factors: Vec<FactorSet>,
}

impl Certificate {
    pub fn new(group: Arc<GroupTable>, factors: Vec<FactorSet>) -> Result<Self, CertifyError> {
        if factors.is_empty() {
            return Err(CertifyError::Empty);
        }
        for (i, f) in factors.iter().enumerate() {
            if f.universe() != group.order() {
                return Err(CertifyError::WrongUniverse(i));
            }
            if f.is_empty() {
                return Err(CertifyError::EmptyFactor(i));
            }
        }
        Ok(Certificate { group, factors })
    }

    /// The single-factor certificate `[G]`.
    pub fn whole(group: &Arc<GroupTable>) -> Self {
        Certificate {
            group: Arc::clone(group),
            factors: vec![FactorSet::whole(group.order())],
        }
    }

    pub fn group(&self) -> &Arc<GroupTable> {
        &self.group
    }

    pub fn factors(&self) -> &[FactorSet] {
        &self.factors
    }

    pub fn into_factors(self) -> Vec<FactorSet> {
        self.factors
    }

    pub fn pattern(&self) -> Vec<usize> {
        self.factors.iter().map(FactorSet::len).collect()
    }

    pub fn verify(&self) -> Verdict {
        verify_certificate(self)
    }

    pub fn is_normalized(&self) -> bool {
        self.factors.iter().all(FactorSet::contains_identity)
    }

    /// Folds singleton factors into a neighbour so that every reported
    /// factor has more than one element. The product set is unchanged.
    pub fn strip_singletons(mut self) -> Self {
        let g = Arc::clone(&self.group);
        let mut i = 0;
        while self.factors.len() > 1 && i < self.factors.len() {
            if self.factors[i].len() != 1 {
                i += 1;
                continue;
            }
            let x = self.factors[i].indices()[0];
            self.factors.remove(i);
            if i < self.factors.len() {
                self.factors[i] = self.factors[i].translate(&g, x, 0);
            } else {
                self.factors[i - 1] = self.factors[i - 1].translate(&g, 0, x);
            }
        }
        self
    }

    /// Maps the certificate into a larger table holding the same
    /// permutations. Returns `None` if some element is missing there.
    pub fn embed(&self, parent: &Arc<GroupTable>) -> Option<Certificate> {
        let factors = self
            .factors
            .iter()
            .map(|f| embed_set(&self.group, parent, f))
            .collect::<Option<Vec<_>>>()?;
        Some(Certificate {
            group: Arc::clone(parent),
            factors,
        })
    }

    /// Canonical comparison key: sorted element indices of each factor.
    pub fn key(&self) -> Vec<Vec<usize>> {
        self.factors.iter().map(|f| f.indices().to_vec()).collect()
    }
}

impl std::fmt::Debug for Certificate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Certificate")
            .field("order", &self.group.order())
            .field("pattern", &self.pattern())
            .finish()
    }
}

pub(crate) fn embed_set(from: &GroupTable, to: &GroupTable, f: &FactorSet) -> Option<FactorSet> {
    let idx = f
        .iter()
        .map(|x| to.index_of(from.element(x)))
        .collect::<Option<Vec<_>>>()?;
    Some(FactorSet::new(to.order(), idx))
}

/// Left fold of [`product_distinct`]; reports the shortest colliding prefix.
pub fn verify_certificate(c: &Certificate) -> Verdict {
    let g = &c.group;
    let mut acc = c.factors[0].clone();
    for (i, f) in c.factors.iter().enumerate().skip(1) {
        match product_distinct(g, &acc, f) {
            Ok(next) => acc = next,
            Err(Collision) => return Verdict::Collision { prefix_len: i + 1 },
        }
    }
    if acc.len() == g.order() {
        Verdict::Valid
    } else {
        Verdict::Incomplete { covered: acc.len() }
    }
}

fn require_valid(c: &Certificate) -> Result<(), CertifyError> {
    match c.verify() {
        Verdict::Valid => Ok(()),
        v => Err(CertifyError::InvalidInput(v)),
    }
}

fn finish(c: Certificate) -> Result<Certificate, CertifyError> {
    match c.verify() {
        Verdict::Valid => Ok(c),
        v => Err(CertifyError::ConstructionFailed(v)),
    }
}

/// Shifts a valid certificate so that every factor contains the identity:
/// `Bᵢ = cᵢ₋₁ Aᵢ cᵢ⁻¹` with `cᵢ = a₁⋯aᵢ`, taking `aᵢ` as the least element
/// of `Aᵢ`.
pub fn normalize(c: &Certificate) -> Result<Certificate, CertifyError> {
    require_valid(c)?;
    let g = &c.group;
    let mut prev = 0;
    let mut factors = Vec::with_capacity(c.factors.len());
    for f in &c.factors {
        let a = f.indices()[0];
        let next = g.mul(prev, a);
        factors.push(f.translate(g, prev, g.inv(next)));
        prev = next;
    }
    finish(Certificate {
        group: Arc::clone(g),
        factors,
    })
}

/// `G = A_k⁻¹ ⋯ A₁⁻¹`.
pub fn reverse(c: &Certificate) -> Result<Certificate, CertifyError> {
    require_valid(c)?;
    let g = &c.group;
    let factors = c.factors.iter().rev().map(|f| f.inverse(g)).collect();
    finish(Certificate {
        group: Arc::clone(g),
        factors,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `G = V·H` with `V` a left transversal.
    Left,
    /// `G = H·W` with `W` a right transversal.
    Right,
}

/// Extends a certificate of `H` (over `H`'s own table) to one of `G` by a
/// transversal of `H`.
pub fn lift_by_transversal(c: &Certificate, h: &Subgroup, side: Side) -> Result<Certificate, CertifyError> {
    require_valid(c)?;
    let g = h.group();
    if c.group.order() != h.order() {
        return Err(CertifyError::DifferentParents);
    }
    let inner = c.embed(g).ok_or(CertifyError::DifferentParents)?;
    if !inner.factors.iter().all(|f| f.iter().all(|x| h.contains(x))) {
        return Err(CertifyError::DifferentParents);
    }
    let mut factors = inner.factors;
    match side {
        Side::Right => factors.push(FactorSet::new(g.order(), h.right_transversal())),
        Side::Left => factors.insert(0, FactorSet::new(g.order(), h.left_transversal())),
    }
    finish(
        Certificate {
            group: Arc::clone(g),
            factors,
        }
        .strip_singletons(),
    )
}

/// Pulls a certificate of `G/N` back to `G` through least coset
/// representatives and inserts `N` itself before factor `position`
/// (`position == k` appends it).
pub fn lift_by_quotient(c: &Certificate, n: &Subgroup, position: usize) -> Result<Certificate, CertifyError> {
    let k = c.factors.len();
    if position > k {
        return Err(CertifyError::InvalidPosition { position, len: k });
    }
    let q = quotient_group(n)?;
    if !q.table.same_elements(&c.group) {
        return Err(CertifyError::DifferentParents);
    }
    require_valid(c)?;
    let g = n.group();
    let mut factors: Vec<FactorSet> = c
        .factors
        .iter()
        .map(|f| {
            let reps = f.iter().map(|x| {
                let qx = q.table.index_of(c.group.element(x)).expect("same quotient elements");
                q.least_representative[qx]
            });
            FactorSet::new(g.order(), reps)
        })
        .collect();
    factors.insert(position, n.members().clone());
    let built = Certificate {
        group: Arc::clone(g),
        factors,
    }
    .strip_singletons();
    let verdict = built.verify();
    if !verdict.is_valid() {
        log::warn!("quotient lift at position {position} failed verification: {verdict:?}");
        return Err(CertifyError::ConstructionFailed(verdict));
    }
    Ok(built)
}

/// `G = A·T·B` from certificates of the subgroups `A` and `B` (each over
/// its own table) and a list `T` of double coset representatives.
pub fn compose_sandwich(
    a: &Subgroup,
    a_cert: &Certificate,
    t: &[usize],
    b: &Subgroup,
    b_cert: &Certificate,
) -> Result<Certificate, CertifyError> {
    if !same_parent(a.group(), b.group()) {
        return Err(CertifyError::DifferentParents);
    }
    if !conjugate_intersection_trivial(a, b) {
        return Err(CertifyError::ConditionFailed);
    }
    require_valid(a_cert)?;
    require_valid(b_cert)?;
    let g = a.group();
    let left = a_cert.embed(g).ok_or(CertifyError::DifferentParents)?;
    let right = b_cert.embed(g).ok_or(CertifyError::DifferentParents)?;
    if t.is_empty() || t.iter().any(|&x| x >= g.order()) {
        return Err(CertifyError::EmptyFactor(left.factors.len()));
    }
    let mut factors = left.factors;
    factors.push(FactorSet::new(g.order(), t.iter().copied()));
    factors.extend(right.factors);
    finish(
        Certificate {
            group: Arc::clone(g),
            factors,
        }
        .strip_singletons(),
    )
}

/// Replaces factor `position` by `parts`, which must multiply out to it
/// with every product distinct.
pub fn substitute_factor(c: &Certificate, position: usize, parts: &[FactorSet]) -> Result<Certificate, CertifyError> {
    let k = c.factors.len();
    if position >= k {
        return Err(CertifyError::InvalidPosition { position, len: k });
    }
    let g = &c.group;
    let mut acc = parts
        .first()
        .cloned()
        .ok_or(CertifyError::NotAFactorization(position))?;
    for p in &parts[1..] {
        acc = product_distinct(g, &acc, p).map_err(|_| CertifyError::NotAFactorization(position))?;
    }
    if acc != c.factors[position] {
        return Err(CertifyError::NotAFactorization(position));
    }
    let mut factors = c.factors.clone();
    factors.splice(position..=position, parts.iter().cloned());
    finish(Certificate {
        group: Arc::clone(g),
        factors,
    })
}

/// Refines a subgroup factor by a certificate of that subgroup over its
/// own table.
pub fn refine_by_subgroup(c: &Certificate, position: usize, sub_cert: &Certificate) -> Result<Certificate, CertifyError> {
    let inner = sub_cert.embed(&c.group).ok_or(CertifyError::DifferentParents)?;
    substitute_factor(c, position, &inner.factors)
}

/// Merges factors `i` and `i + 1` of a valid certificate into their product.
pub fn merge_adjacent(c: &Certificate, i: usize) -> Result<Certificate, CertifyError> {
    let k = c.factors.len();
    if i + 1 >= k {
        return Err(CertifyError::InvalidPosition { position: i, len: k });
    }
    require_valid(c)?;
    let g = &c.group;
    let merged = product_distinct(g, &c.factors[i], &c.factors[i + 1])
        .map_err(|_| CertifyError::InvalidInput(Verdict::Collision { prefix_len: i + 2 }))?;
    let mut factors = c.factors.clone();
    factors.splice(i..=i + 1, [merged]);
    finish(Certificate {
        group: Arc::clone(g),
        factors,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum End {
    First,
    Last,
}

/// Necessary condition on an end factor: `|⟨S⟩|` must be a multiple of
/// `|S|`. For `S = {e, a}` this says `a` has even order.
pub fn divisibility_prune(g: &GroupTable, s: &FactorSet, _end: End) -> bool {
    s.generated_order(g).is_multiple_of(s.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Perm;
    use crate::structure::{double_cosets, find_subgroup_of_order, sylow_subgroup};

    fn table(degree: usize, gens: &[&str]) -> Arc<GroupTable> {
        Arc::new(GroupTable::from_cycle_strings(degree, gens).unwrap())
    }

    fn set(g: &GroupTable, elems: &[&str]) -> FactorSet {
        FactorSet::new(
            g.order(),
            elems.iter().map(|s| g.index_of(&Perm::parse(s, g.degree()).unwrap()).unwrap()),
        )
    }

    fn sub(g: &Arc<GroupTable>, gens: &[&str]) -> Subgroup {
        let perms: Vec<Perm> = gens.iter().map(|s| Perm::parse(s, g.degree()).unwrap()).collect();
        Subgroup::from_perms(g, &perms).unwrap()
    }

    fn g168() -> Arc<GroupTable> {
        table(7, &["(3,4)(5,6)", "(1,2,3)(4,5,7)"])
    }

    fn lemma_6_7_2_2() -> Certificate {
        let g = g168();
        let a = sub(&g, &["(2,3,4)(5,6,7)", "(3,4)(5,6)"]);
        let b = set(
            &g,
            &[
                "()",
                "(3,5)(4,6)",
                "(1,2)(3,6)",
                "(1,2,3)(4,5,7)",
                "(1,2,5)(3,7,6)",
                "(1,5,3)(2,4,6)",
                "(1,6,3)(4,7,5)",
            ],
        );
        let c = set(&g, &["()", "(1,6,3,5,2,4,7)"]);
        let d = set(&g, &["()", "(2,7)(3,4,5,6)"]);
        Certificate::new(Arc::clone(&g), vec![a.members().clone(), b, c, d]).unwrap()
    }

    /// Counts how many k-tuples map to each element; valid iff all are 1.
    fn brute_force_unique(c: &Certificate) -> bool {
        let g = c.group();
        let mut counts = vec![0usize; g.order()];
        let mut partial = vec![0usize];
        for f in c.factors() {
            partial = partial.iter().flat_map(|&p| f.iter().map(move |x| (p, x))).map(|(p, x)| g.mul(p, x)).collect();
        }
        for x in partial {
            counts[x] += 1;
        }
        counts.iter().all(|&k| k == 1)
    }

    #[test]
    fn product_distinct_cases() {
        let g = g168();
        let e = FactorSet::singleton(g.order(), 0);
        let t = set(&g, &["()", "(3,4)(5,6)"]);
        assert_eq!(product_distinct(&g, &e, &t).unwrap(), t);
        assert_eq!(product_distinct(&g, &t, &t), Err(Collision));

        let s4 = find_subgroup_of_order(&g, 24).unwrap();
        let w = FactorSet::new(g.order(), s4.right_transversal());
        assert_eq!(product_distinct(&g, s4.members(), &w).unwrap().len(), 168);
    }

    #[test]
    fn known_certificate_verifies() {
        let c = lemma_6_7_2_2();
        assert_eq!(c.verify(), Verdict::Valid);
        assert_eq!(c.pattern(), vec![6, 7, 2, 2]);
        assert!(brute_force_unique(&c));
        assert_eq!(Certificate::whole(c.group()).verify(), Verdict::Valid);
    }

    #[test]
    fn verifier_reports_shortest_colliding_prefix() {
        let g = g168();
        let t = set(&g, &["()", "(3,4)(5,6)"]);
        let c = Certificate::new(Arc::clone(&g), vec![t.clone(), t.clone(), FactorSet::whole(168)]).unwrap();
        assert_eq!(c.verify(), Verdict::Collision { prefix_len: 2 });
        let c = Certificate::new(Arc::clone(&g), vec![t]).unwrap();
        assert_eq!(c.verify(), Verdict::Incomplete { covered: 2 });
    }

    #[test]
    fn reverse_is_an_involution() {
        let c = lemma_6_7_2_2();
        let r = reverse(&c).unwrap();
        assert_eq!(r.pattern(), vec![2, 2, 7, 6]);
        assert!(brute_force_unique(&r));
        assert_eq!(reverse(&r).unwrap().key(), c.key());
    }

    #[test]
    fn normalize_restores_identity() {
        let c = lemma_6_7_2_2();
        let n = normalize(&c).unwrap();
        assert_eq!(n.key(), c.key());

        // Translate the first factor away from the identity.
        let g = Arc::clone(c.group());
        let x = g.index_of(&Perm::parse("(1,2,3)(4,5,7)", 7).unwrap()).unwrap();
        let mut factors = c.factors().to_vec();
        factors[0] = factors[0].translate(&g, 0, x);
        factors[1] = factors[1].translate(&g, g.inv(x), 0);
        let shifted = Certificate::new(Arc::clone(&g), factors).unwrap();
        assert!(shifted.verify().is_valid());
        assert!(!shifted.factors()[0].contains_identity());
        let n = normalize(&shifted).unwrap();
        assert!(n.is_normalized());
        assert_eq!(n.pattern(), vec![6, 7, 2, 2]);
    }

    #[test]
    fn normalize_two_factor_shift() {
        let g = table(3, &["(1,2,3)", "(1,2)"]);
        let x = 3;
        let a = FactorSet::singleton(6, x);
        let b = FactorSet::new(6, (0..6).map(|h| g.mul(g.inv(x), h)));
        let c = Certificate::new(Arc::clone(&g), vec![a, b]).unwrap();
        let n = normalize(&c).unwrap();
        assert!(n.is_normalized());
    }

    #[test]
    fn lift_by_right_transversal() {
        let g = g168();
        let s4 = find_subgroup_of_order(&g, 24).unwrap();
        let (t, _) = s4.table().unwrap();
        let p = sylow_subgroup(&t, 2).unwrap();
        let c3 = find_subgroup_of_order(&t, 3).unwrap();
        // S4 = P·C3 as subgroups with trivial intersection.
        let s4_cert = Certificate::new(Arc::clone(&t), vec![p.members().clone(), c3.members().clone()]).unwrap();
        assert!(s4_cert.verify().is_valid());
        let lifted = lift_by_transversal(&s4_cert, &s4, Side::Right).unwrap();
        assert_eq!(lifted.pattern(), vec![8, 3, 7]);
        let lifted = lift_by_transversal(&s4_cert, &s4, Side::Left).unwrap();
        assert_eq!(lifted.pattern(), vec![7, 8, 3]);
    }

    #[test]
    fn lift_by_whole_group_is_identity() {
        let g = table(3, &["(1,2,3)", "(1,2)"]);
        let whole = Subgroup::whole(&g);
        let c3 = find_subgroup_of_order(&g, 3).unwrap();
        let t = FactorSet::new(6, c3.right_transversal());
        let c = Certificate::new(Arc::clone(&g), vec![c3.members().clone(), t]).unwrap();
        let lifted = lift_by_transversal(&c, &whole, Side::Right).unwrap();
        assert_eq!(lifted.key(), c.key());
    }

    #[test]
    fn quotient_lifts_of_s4() {
        let g = table(4, &["(1,2,3,4)", "(1,2)"]);
        let v4 = sub(&g, &["(1,2)(3,4)", "(1,3)(2,4)"]);
        let q = quotient_group(&v4).unwrap();
        let qt = &q.table;
        let c2 = find_subgroup_of_order(qt, 2).unwrap();
        let c3 = find_subgroup_of_order(qt, 3).unwrap();
        let qc = Certificate::new(Arc::clone(qt), vec![c2.members().clone(), c3.members().clone()]).unwrap();
        assert!(qc.verify().is_valid());
        let patterns: Vec<Vec<usize>> = (0..=2)
            .map(|pos| lift_by_quotient(&qc, &v4, pos).unwrap().pattern())
            .collect();
        assert_eq!(patterns, vec![vec![4, 2, 3], vec![2, 4, 3], vec![2, 3, 4]]);
        assert!(matches!(lift_by_quotient(&qc, &v4, 3), Err(CertifyError::InvalidPosition { .. })));

        let trivial = Subgroup::trivial(&g);
        let whole_q = quotient_group(&trivial).unwrap();
        let tc = Certificate::whole(&whole_q.table);
        assert_eq!(lift_by_quotient(&tc, &trivial, 0).unwrap().pattern(), vec![24]);
    }

    #[test]
    fn quotient_lift_requires_normality() {
        let a4 = table(4, &["(1,2,3)", "(2,3,4)"]);
        let c3 = sub(&a4, &["(1,2,3)"]);
        let dummy = Certificate::whole(&a4);
        assert_eq!(
            lift_by_quotient(&dummy, &c3, 0).unwrap_err(),
            CertifyError::Structure(StructureError::NotNormal)
        );
    }

    #[test]
    fn sandwich_in_a6() {
        let g = table(6, &["(1,2,3)", "(2,3,4,5,6)"]);
        let s4 = sub(&g, &["(1,2,3)", "(1,2,3,4)(5,6)"]);
        let c5 = sub(&g, &["(1,2,3,4,5)"]);
        let (s4t, _) = s4.table().unwrap();
        let (c5t, _) = c5.table().unwrap();
        let s4_cert = {
            let p = sylow_subgroup(&s4t, 2).unwrap();
            let c3 = find_subgroup_of_order(&s4t, 3).unwrap();
            Certificate::new(Arc::clone(&s4t), vec![p.members().clone(), c3.members().clone()]).unwrap()
        };
        let dc = double_cosets(&s4, &c5).unwrap();
        let c = compose_sandwich(&s4, &s4_cert, &dc.representatives, &c5, &Certificate::whole(&c5t)).unwrap();
        assert_eq!(c.pattern(), vec![8, 3, 3, 5]);

        let t = sub(&g, &["(1,2)(3,4)"]);
        let (tt, _) = t.table().unwrap();
        let tc = Certificate::whole(&tt);
        let dc = double_cosets(&t, &t).unwrap();
        assert_eq!(
            compose_sandwich(&t, &tc, &dc.representatives, &t, &tc).unwrap_err(),
            CertifyError::ConditionFailed
        );
    }

    #[test]
    fn divisibility() {
        let g = g168();
        let s4 = find_subgroup_of_order(&g, 24).unwrap();
        assert!(divisibility_prune(&g, s4.members(), End::First));
        let three = set(&g, &["()", "(1,2,3)(4,5,7)"]);
        assert!(!divisibility_prune(&g, &three, End::First));
        let four = set(&g, &["()", "(2,7)(3,4,5,6)"]);
        assert!(divisibility_prune(&g, &four, End::Last));
    }

    #[test]
    fn substitution_and_merging() {
        let c = lemma_6_7_2_2();
        let g = Arc::clone(c.group());
        let a = Subgroup::from_members(&g, c.factors()[0].clone()).unwrap();
        let (at, _) = a.table().unwrap();
        let c2 = find_subgroup_of_order(&at, 2).unwrap();
        let c3 = find_subgroup_of_order(&at, 3).unwrap();
        let sub_cert = Certificate::new(Arc::clone(&at), vec![c2.members().clone(), c3.members().clone()]).unwrap();
        let refined = refine_by_subgroup(&c, 0, &sub_cert).unwrap();
        assert_eq!(refined.pattern(), vec![2, 3, 7, 2, 2]);
        let merged = merge_adjacent(&refined, 2).unwrap();
        assert_eq!(merged.pattern(), vec![2, 3, 14, 2]);
        let bad = vec![c2.members().clone(), c2.members().clone()];
        assert!(substitute_factor(&c, 0, &bad).is_err());
    }

    #[test]
    fn singletons_are_stripped() {
        let g = table(3, &["(1,2,3)", "(1,2)"]);
        let c3 = find_subgroup_of_order(&g, 3).unwrap();
        let t = FactorSet::new(6, c3.right_transversal());
        let c = Certificate::new(
            Arc::clone(&g),
            vec![FactorSet::singleton(6, 0), c3.members().clone(), FactorSet::singleton(6, 4), t],
        )
        .unwrap();
        let before = c.verify();
        let stripped = c.strip_singletons();
        assert_eq!(stripped.pattern(), vec![3, 2]);
        assert_eq!(before, stripped.verify());
    }
}
