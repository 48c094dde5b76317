//! Finite permutation groups enumerated outright into an indexed table.

use std::collections::{HashMap, VecDeque};

use thiserror::Error;

use crate::perm::{Perm, PermError};

/// Default cap on the number of elements produced by closure.
pub const DEFAULT_ORDER_CAP: usize = 10_000;

/// Groups up to this order get a full multiplication table.
pub const TABLE_THRESHOLD: usize = 4096;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error("closure exceeded {cap} elements")]
    OrderCapExceeded { cap: usize },
    #[error("element list is not closed under multiplication")]
    NotClosed,
}

/// A fully enumerated finite group.
///
/// Elements are sorted by their image arrays, so index 0 is the identity
/// and indexing does not depend on the generator list.
#[derive(Clone)]
pub struct GroupTable {
    degree: usize,
    elements: Vec<Perm>,
    index: HashMap<Perm, u32>,
    mul: Option<Vec<u32>>,
    inv: Vec<u32>,
    order_of: Vec<u32>,
    generators: Vec<Perm>,
}

impl GroupTable {
    /// Breadth-first closure of `gens` on `degree` points.
    pub fn generate(degree: usize, gens: &[Perm]) -> Result<Self, GroupError> {
        Self::generate_with_cap(degree, gens, DEFAULT_ORDER_CAP)
    }

    pub fn generate_with_cap(degree: usize, gens: &[Perm], cap: usize) -> Result<Self, GroupError> {
        let identity = Perm::identity(degree)?;
        let gens = gens
            .iter()
            .map(|g| {
                if g.degree() == degree {
                    Ok(*g)
                } else {
                    Err(GroupError::Perm(PermError::DegreeMismatch(degree, g.degree())))
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut seen: HashMap<Perm, ()> = HashMap::new();
        let mut queue = VecDeque::new();
        let mut elements = Vec::new();
        seen.insert(identity, ());
        queue.push_back(identity);
        while let Some(x) = queue.pop_front() {
            elements.push(x);
            for g in &gens {
                let y = x.then(g);
                if seen.insert(y, ()).is_none() {
                    if seen.len() > cap {
                        return Err(GroupError::OrderCapExceeded { cap });
                    }
                    queue.push_back(y);
                }
            }
        }
        Ok(Self::build(degree, elements, gens))
    }

    /// Parses generator cycle strings and closes them.
    pub fn from_cycle_strings<S: AsRef<str>>(degree: usize, gens: &[S]) -> Result<Self, GroupError> {
        let perms = gens
            .iter()
            .map(|s| Perm::parse(s.as_ref(), degree))
            .collect::<Result<Vec<_>, _>>()?;
        Self::generate(degree, &perms)
    }

    /// Builds a table from an element list that is already a group.
    pub fn from_elements(degree: usize, elements: Vec<Perm>, generators: Vec<Perm>) -> Result<Self, GroupError> {
        let elements = elements
            .into_iter()
            .map(|p| p.with_degree(degree))
            .collect::<Result<Vec<_>, _>>()?;
        let generators = generators
            .into_iter()
            .map(|p| p.with_degree(degree))
            .collect::<Result<Vec<_>, _>>()?;
        let mut table = Self::build(degree, elements, generators);
        let n = table.order();
        if table.elements.len() != table.index.len() || !table.elements[0].is_identity() {
            return Err(GroupError::NotClosed);
        }
        for a in 0..n {
            for b in 0..n {
                let prod = table.elements[a].then(&table.elements[b]);
                if !table.index.contains_key(&prod) {
                    return Err(GroupError::NotClosed);
                }
            }
        }
        if table.generators.is_empty() && n > 1 {
            table.generators = table.greedy_generators();
        }
        Ok(table)
    }

    fn build(degree: usize, mut elements: Vec<Perm>, generators: Vec<Perm>) -> Self {
        elements.sort();
        elements.dedup();
        let n = elements.len();
        let index: HashMap<Perm, u32> = elements
            .iter()
            .enumerate()
            .map(|(i, p)| (*p, i as u32))
            .collect();
        let lookup = |p: &Perm| index.get(p).copied();
        let mul = (n <= TABLE_THRESHOLD && index.len() == n).then(|| {
            let mut table = vec![0u32; n * n];
            for a in 0..n {
                for b in 0..n {
                    // Missing products only occur for non-closed input, which
                    // `from_elements` rejects afterwards.
                    table[a * n + b] = lookup(&elements[a].then(&elements[b])).unwrap_or(u32::MAX);
                }
            }
            table
        });
        let inv = elements
            .iter()
            .map(|p| lookup(&p.inverse()).unwrap_or(u32::MAX))
            .collect();
        let order_of = elements.iter().map(|p| p.order() as u32).collect();
        GroupTable {
            degree,
            elements,
            index,
            mul,
            inv,
            order_of,
            generators,
        }
    }

    /// Least-index elements that together generate the group.
    fn greedy_generators(&self) -> Vec<Perm> {
        let n = self.order();
        let mut covered = vec![false; n];
        covered[0] = true;
        let mut gens: Vec<usize> = Vec::new();
        while let Some(x) = (0..n).find(|&x| !covered[x]) {
            gens.push(x);
            covered = vec![false; n];
            covered[0] = true;
            let mut stack = vec![0usize];
            while let Some(y) = stack.pop() {
                for &s in &gens {
                    let z = self.mul(y, s);
                    if !covered[z] {
                        covered[z] = true;
                        stack.push(z);
                    }
                }
            }
        }
        gens.into_iter().map(|x| self.elements[x]).collect()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn element(&self, x: usize) -> &Perm {
        &self.elements[x]
    }

    /// Index of a permutation, re-embedding it in this table's degree.
    pub fn index_of(&self, p: &Perm) -> Option<usize> {
        let p = if p.degree() == self.degree {
            *p
        } else {
            p.with_degree(self.degree).ok()?
        };
        self.index.get(&p).map(|&i| i as usize)
    }

    pub fn has_mul_table(&self) -> bool {
        self.mul.is_some()
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.mul {
            Some(t) => t[a * self.elements.len() + b] as usize,
            None => self.index[&self.elements[a].then(&self.elements[b])] as usize,
        }
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    /// `x⁻¹ a x`.
    pub fn conjugate(&self, a: usize, x: usize) -> usize {
        self.mul(self.mul(self.inv(x), a), x)
    }

    pub fn element_order(&self, x: usize) -> usize {
        self.order_of[x] as usize
    }

    /// Whether `other` holds exactly the same permutations, ignoring degree.
    pub fn same_elements(&self, other: &GroupTable) -> bool {
        self.order() == other.order()
            && other.elements.iter().all(|p| self.index_of(p).is_some())
    }
}

impl std::fmt::Debug for GroupTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GroupTable")
            .field("degree", &self.degree)
            .field("order", &self.order())
            .field("generators", &self.generators)
            .finish()
    }
}

/// Closes the cyclic subgroup powers of each generator; used by the tests
/// as an independent route to group orders.
#[cfg(test)]
pub(crate) fn naive_closure(gens: &[Perm], degree: usize) -> std::collections::BTreeSet<Perm> {
    let mut set = std::collections::BTreeSet::new();
    set.insert(Perm::identity(degree).unwrap());
    loop {
        let snapshot: Vec<Perm> = set.iter().copied().collect();
        let mut grew = false;
        for a in &snapshot {
            for b in snapshot.iter().chain(gens.iter()) {
                grew |= set.insert(a.compose(b).unwrap());
            }
        }
        if !grew {
            return set;
        }
    }
}
