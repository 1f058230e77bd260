use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use super::CanonicalTree;
use crate::error::{domain, Error, Result};

/// Largest size [`enumerate_trees`] will build (`T_14 = 32973`).
pub const ENUMERATION_CAP: usize = 14;

/// All canonical trees of one size, sorted ascending by encoding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeTable {
    size: usize,
    trees: Vec<CanonicalTree>,
    index: HashMap<CanonicalTree, usize>,
}

impl TreeTable {
    /// Builds a table from trees of the given size; sorts and rejects
    /// duplicates or size mismatches.
    pub fn from_trees(size: usize, mut trees: Vec<CanonicalTree>) -> Result<Self> {
        if size == 0 {
            return Err(domain("tree size must be at least 1"));
        }
        if let Some(t) = trees.iter().find(|t| t.size() != size) {
            return Err(Error::Malformed(format!(
                "{t} does not have {size} vertices"
            )));
        }
        trees.sort_unstable();
        if let Some(w) = trees.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Malformed(format!("duplicate tree {}", w[0])));
        }
        let index = trees
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
        Ok(Self { size, trees, index })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    pub fn trees(&self) -> &[CanonicalTree] {
        &self.trees
    }

    pub fn get(&self, i: usize) -> Option<&CanonicalTree> {
        self.trees.get(i)
    }

    pub fn index_of(&self, t: &CanonicalTree) -> Option<usize> {
        self.index.get(t).copied()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, CanonicalTree> {
        self.trees.iter()
    }

    /// Trees of size `size + 1` reachable by attaching one leaf, sorted.
    fn grown(&self) -> Result<Self> {
        let mut next = BTreeSet::new();
        for t in &self.trees {
            for (child, _) in crate::operators::grow(t) {
                next.insert(child);
            }
        }
        Self::from_trees(self.size + 1, next.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a TreeTable {
    type Item = &'a CanonicalTree;
    type IntoIter = std::slice::Iter<'a, CanonicalTree>;

    fn into_iter(self) -> Self::IntoIter {
        self.trees.iter()
    }
}

/// All rooted trees on `n` vertices, for `1 <= n <= ENUMERATION_CAP`.
pub fn enumerate_trees(n: usize) -> Result<TreeTable> {
    enumerate_trees_with_cap(n, ENUMERATION_CAP)
}

/// As [`enumerate_trees`] with a caller-chosen size cap.
pub fn enumerate_trees_with_cap(n: usize, cap: usize) -> Result<TreeTable> {
    Ok(Arc::unwrap_or_clone(
        Catalog::with_cap(n, cap)?.tables.pop().unwrap(),
    ))
}

/// Tables for every size `1..=max_size`, each grown from the previous one.
#[derive(Clone, Debug)]
pub struct Catalog {
    tables: Vec<Arc<TreeTable>>,
}

impl Catalog {
    /// Enumerates sizes `1..=max_size` under [`ENUMERATION_CAP`].
    pub fn up_to(max_size: usize) -> Result<Self> {
        Self::with_cap(max_size, ENUMERATION_CAP)
    }

    pub fn with_cap(max_size: usize, cap: usize) -> Result<Self> {
        if max_size == 0 {
            return Err(domain("tree size must be at least 1"));
        }
        if max_size > cap {
            return Err(Error::ResourceLimit {
                what: "enumeration",
                n: max_size,
                cap,
            });
        }
        let first = TreeTable::from_trees(1, vec![CanonicalTree::single()])?;
        let mut tables = vec![Arc::new(first)];
        while tables.len() < max_size {
            let next = tables.last().unwrap().grown()?;
            tables.push(Arc::new(next));
        }
        Ok(Self { tables })
    }

    pub fn max_size(&self) -> usize {
        self.tables.len()
    }

    /// Table of trees with `n` vertices.
    pub fn table(&self, n: usize) -> Result<&Arc<TreeTable>> {
        if n == 0 || n > self.tables.len() {
            return Err(domain(format!(
                "size {n} is outside the catalog range 1..={}",
                self.tables.len()
            )));
        }
        Ok(&self.tables[n - 1])
    }

    /// Fails unless the catalog reaches size `n`.
    pub(crate) fn require(&self, n: usize) -> Result<()> {
        self.table(n).map(|_| ())
    }
}
