use std::fmt;

use fixedbitset::FixedBitSet;

use crate::group::GroupTable;

/// A nonempty set of element indices of some group, kept both as a sorted
/// list and as a bitset over the whole group.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FactorSet {
    indices: Vec<usize>,
    bits: FixedBitSet,
}

impl FactorSet {
    /// Builds a set from arbitrary indices; duplicates are merged.
    ///
    /// Panics if an index is out of range for `universe`.
    pub fn new(universe: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut bits = FixedBitSet::with_capacity(universe);
        for i in indices {
            bits.insert(i);
        }
        Self::from_bits(bits)
    }

    pub fn from_bits(bits: FixedBitSet) -> Self {
        FactorSet {
            indices: bits.ones().collect(),
            bits,
        }
    }

    pub fn singleton(universe: usize, x: usize) -> Self {
        Self::new(universe, [x])
    }

    pub fn whole(universe: usize) -> Self {
        Self::new(universe, 0..universe)
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn bits(&self) -> &FixedBitSet {
        &self.bits
    }

    pub fn contains(&self, x: usize) -> bool {
        self.bits.contains(x)
    }

    pub fn contains_identity(&self) -> bool {
        self.bits.contains(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.indices.iter().copied()
    }

    /// Elementwise inverses.
    pub fn inverse(&self, g: &GroupTable) -> FactorSet {
        FactorSet::new(self.universe(), self.iter().map(|x| g.inv(x)))
    }

    /// `{x·s·y : s ∈ self}`.
    pub fn translate(&self, g: &GroupTable, left: usize, right: usize) -> FactorSet {
        FactorSet::new(self.universe(), self.iter().map(|s| g.mul(g.mul(left, s), right)))
    }

    /// Order of the subgroup generated by the set.
    pub fn generated_order(&self, g: &GroupTable) -> usize {
        closure(g, &self.indices).count_ones(..)
    }

    pub fn display<'a>(&'a self, g: &'a GroupTable) -> DisplaySet<'a> {
        DisplaySet { set: self, group: g }
    }
}

/// Bitset of the subgroup generated by `gens`.
pub(crate) fn closure(g: &GroupTable, gens: &[usize]) -> FixedBitSet {
    let mut bits = FixedBitSet::with_capacity(g.order());
    bits.insert(0);
    let mut frontier = vec![0usize];
    while let Some(x) = frontier.pop() {
        for &s in gens {
            let y = g.mul(x, s);
            if !bits.put(y) {
                frontier.push(y);
            }
        }
    }
    bits
}

impl fmt::Debug for FactorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.indices.iter()).finish()
    }
}

pub struct DisplaySet<'a> {
    set: &'a FactorSet,
    group: &'a GroupTable,
}

impl fmt::Display for DisplaySet<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, x) in self.set.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}", self.group.element(x))?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn views_agree() {
        let s = FactorSet::new(10, [7, 2, 2, 5]);
        assert_eq!(s.indices(), &[2, 5, 7]);
        assert_eq!(s.bits().count_ones(..), 3);
        assert!(s.contains(5) && !s.contains(0));
        assert_eq!(s.universe(), 10);
    }

    #[test]
    fn generated_order_of_three_cycle() {
        let g = GroupTable::from_cycle_strings(4, &["(1,2,3)", "(2,3,4)"]).unwrap();
        let c = g.index_of(&crate::perm::Perm::parse("(1,2,3)", 4).unwrap()).unwrap();
        assert_eq!(FactorSet::new(g.order(), [0, c]).generated_order(&g), 3);
        assert_eq!(FactorSet::whole(g.order()).generated_order(&g), 12);
    }
}
