//! Growth and pruning operators.
//!
//! `G` sends a tree of size `n` to the formal sum of trees obtained by
//! attaching one leaf, weighted by the number of attachment vertices giving
//! each result. `P` sends a tree to the sum of trees obtained by deleting
//! one terminal vertex, weighted by the number of terminal vertices giving
//! each result. Matrices are row-indexed by the domain tree, so operator
//! composition "first `A` then `B`" is the matrix product `A * B`.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{domain, Result};
use crate::tree::{CanonicalTree, Catalog};

/// Trees obtained by attaching one new terminal vertex to `t`, with the
/// number of vertices of `t` at which the attachment gives each of them.
pub fn grow(t: &CanonicalTree) -> BTreeMap<CanonicalTree, BigUint> {
    let s = t.encoding();
    let mut out: BTreeMap<CanonicalTree, BigUint> = BTreeMap::new();
    for (i, b) in s.bytes().enumerate() {
        if b != b'(' {
            continue;
        }
        let mut spliced = String::with_capacity(s.len() + 2);
        spliced.push_str(&s[..=i]);
        spliced.push_str("()");
        spliced.push_str(&s[i + 1..]);
        let grown = CanonicalTree::from_balanced(&spliced).expect("splice keeps balance");
        *out.entry(grown).or_default() += 1u32;
    }
    out
}

/// Trees obtained by deleting one terminal vertex of `t`, with the number of
/// terminal vertices whose removal gives each of them. Empty for the single
/// vertex.
pub fn prune(t: &CanonicalTree) -> BTreeMap<CanonicalTree, BigUint> {
    let s = t.encoding();
    let mut out: BTreeMap<CanonicalTree, BigUint> = BTreeMap::new();
    if t.size() < 2 {
        return out;
    }
    for (i, w) in s.as_bytes().windows(2).enumerate() {
        if w != b"()" {
            continue;
        }
        let mut cut = String::with_capacity(s.len() - 2);
        cut.push_str(&s[..i]);
        cut.push_str(&s[i + 2..]);
        let pruned = CanonicalTree::from_balanced(&cut).expect("removing a leaf keeps balance");
        *out.entry(pruned).or_default() += 1u32;
    }
    out
}

/// Sparse matrix of positive big integers between two tree tables.
///
/// `row_size`/`col_size` are the tree sizes indexing rows and columns; the
/// indices refer to positions in the corresponding [`Catalog`] tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountMatrix {
    row_size: usize,
    col_size: usize,
    rows: Vec<BTreeMap<usize, BigUint>>,
    n_cols: usize,
}

impl CountMatrix {
    pub fn zeros(row_size: usize, col_size: usize, n_rows: usize, n_cols: usize) -> Self {
        Self {
            row_size,
            col_size,
            rows: vec![BTreeMap::new(); n_rows],
            n_cols,
        }
    }

    pub fn identity(size: usize, dim: usize) -> Self {
        let mut m = Self::zeros(size, size, dim, dim);
        for i in 0..dim {
            m.rows[i].insert(i, BigUint::one());
        }
        m
    }

    pub fn row_size(&self) -> usize {
        self.row_size
    }

    pub fn col_size(&self) -> usize {
        self.col_size
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(BTreeMap::len).sum()
    }

    /// Entry at `(i, j)`, zero when absent.
    pub fn get(&self, i: usize, j: usize) -> BigUint {
        self.rows[i].get(&j).cloned().unwrap_or_default()
    }

    pub fn row(&self, i: usize) -> &BTreeMap<usize, BigUint> {
        &self.rows[i]
    }

    /// Adds `v` to entry `(i, j)`.
    pub fn add(&mut self, i: usize, j: usize, v: BigUint) {
        assert!(
            i < self.rows.len() && j < self.n_cols,
            "index ({i}, {j}) out of range"
        );
        if v.is_zero() {
            return;
        }
        *self.rows[i].entry(j).or_default() += v;
    }

    /// Stored entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &BigUint)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |(&j, v)| (i, j, v)))
    }

    pub fn row_sums(&self) -> Vec<BigUint> {
        self.rows.iter().map(|r| r.values().sum()).collect()
    }

    /// Matrix product; `self` is applied first.
    pub fn mul(&self, other: &CountMatrix) -> CountMatrix {
        assert_eq!(
            self.n_cols,
            other.rows.len(),
            "dimension mismatch in count matrix product"
        );
        let mut out =
            CountMatrix::zeros(self.row_size, other.col_size, self.rows.len(), other.n_cols);
        for (i, row) in self.rows.iter().enumerate() {
            let acc = &mut out.rows[i];
            for (&k, a) in row {
                for (&j, b) in &other.rows[k] {
                    *acc.entry(j).or_default() += a * b;
                }
            }
        }
        out
    }

    /// `self + k I`; square matrices only.
    pub fn plus_identity(&self, k: usize) -> CountMatrix {
        assert_eq!(
            self.n_rows(),
            self.n_cols,
            "plus_identity needs a square matrix"
        );
        let mut out = self.clone();
        for i in 0..self.n_cols {
            out.add(i, i, BigUint::from(k));
        }
        out
    }
}

/// `G` from size `n` to size `n + 1`, shape `T_n x T_(n+1)`.
pub fn growth_matrix(catalog: &Catalog, n: usize) -> Result<CountMatrix> {
    let from = catalog.table(n)?;
    let to = catalog.table(n + 1)?;
    let mut m = CountMatrix::zeros(n, n + 1, from.len(), to.len());
    for (i, t) in from.iter().enumerate() {
        for (grown, count) in grow(t) {
            let j = to
                .index_of(&grown)
                .expect("grown tree is in the next table");
            m.add(i, j, count);
        }
    }
    Ok(m)
}

/// `P` from size `n` to size `n - 1`, shape `T_n x T_(n-1)`. For `n = 1`
/// this is the empty `1 x 0` matrix.
pub fn pruning_matrix(catalog: &Catalog, n: usize) -> Result<CountMatrix> {
    let from = catalog.table(n)?;
    if n == 1 {
        return Ok(CountMatrix::zeros(1, 0, from.len(), 0));
    }
    let to = catalog.table(n - 1)?;
    let mut m = CountMatrix::zeros(n, n - 1, from.len(), to.len());
    for (i, t) in from.iter().enumerate() {
        for (pruned, count) in prune(t) {
            let j = to
                .index_of(&pruned)
                .expect("pruned tree is in the previous table");
            m.add(i, j, count);
        }
    }
    Ok(m)
}

/// `G^k` from size `n`; entry `(s, t)` is `n(s, t)`.
pub fn growth_power(catalog: &Catalog, n: usize, k: usize) -> Result<CountMatrix> {
    let dim = catalog.table(n)?.len();
    catalog.require(n + k)?;
    let mut acc = CountMatrix::identity(n, dim);
    for step in 0..k {
        acc = acc.mul(&growth_matrix(catalog, n + step)?);
    }
    Ok(acc)
}

/// `P^k` from size `n`; entry `(t, s)` is `m(s, t)`.
pub fn pruning_power(catalog: &Catalog, n: usize, k: usize) -> Result<CountMatrix> {
    let dim = catalog.table(n)?.len();
    if k >= n {
        return Err(domain(format!(
            "P^{k} from size {n} would go below one vertex"
        )));
    }
    let mut acc = CountMatrix::identity(n, dim);
    for step in 0..k {
        acc = acc.mul(&pruning_matrix(catalog, n - step)?);
    }
    Ok(acc)
}

/// `(G^k, P^k)` from size `n`, requiring `n - k >= 1`.
pub fn k_step_counts(catalog: &Catalog, n: usize, k: usize) -> Result<(CountMatrix, CountMatrix)> {
    let p = pruning_power(catalog, n, k)?;
    let g = growth_power(catalog, n, k)?;
    Ok((g, p))
}

/// Whether `PG - GP = n I` on trees of size `n`, exactly.
pub fn commutator_check(catalog: &Catalog, n: usize) -> Result<bool> {
    let g_n = growth_matrix(catalog, n)?;
    let p_up = pruning_matrix(catalog, n + 1)?;
    let pg = g_n.mul(&p_up);
    let gp = if n == 1 {
        CountMatrix::zeros(1, 1, 1, 1)
    } else {
        pruning_matrix(catalog, n)?.mul(&growth_matrix(catalog, n - 1)?)
    };
    Ok(pg == gp.plus_identity(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tree(s: &str) -> CanonicalTree {
        CanonicalTree::parse(s).unwrap()
    }

    fn counts(pairs: &[(&str, u32)]) -> BTreeMap<CanonicalTree, BigUint> {
        pairs
            .iter()
            .map(|&(s, c)| (tree(s), BigUint::from(c)))
            .collect()
    }

    #[test]
    fn grow_examples() {
        assert_eq!(grow(&tree("()")), counts(&[("(())", 1)]));
        assert_eq!(
            grow(&tree("((()))")),
            counts(&[("(((())))", 1), ("((()()))", 1), ("((())())", 1)])
        );
        assert_eq!(
            grow(&tree("(()())")),
            counts(&[("((())())", 2), ("(()()())", 1)])
        );
    }

    #[test]
    fn prune_examples() {
        assert_eq!(prune(&tree("((()()))")), counts(&[("((()))", 2)]));
        assert_eq!(prune(&tree("(())")), counts(&[("()", 1)]));
        assert_eq!(
            prune(&tree("((())())")),
            counts(&[("(()())", 1), ("((()))", 1)])
        );
        assert!(prune(&tree("()")).is_empty());
    }

    #[test]
    fn small_matrices() {
        let cat = Catalog::up_to(5).unwrap();
        let g1 = growth_matrix(&cat, 1).unwrap();
        assert_eq!((g1.n_rows(), g1.n_cols()), (1, 1));
        assert_eq!(g1.get(0, 0), BigUint::one());

        let p1 = pruning_matrix(&cat, 1).unwrap();
        assert_eq!((p1.n_rows(), p1.n_cols(), p1.nnz()), (1, 0, 0));

        let p4 = pruning_matrix(&cat, 4).unwrap();
        let star3 = cat.table(3).unwrap().index_of(&tree("(()())")).unwrap();
        let star4 = cat.table(4).unwrap().index_of(&tree("(()()())")).unwrap();
        assert_eq!(p4.row(star4).len(), 1);
        assert_eq!(p4.get(star4, star3), BigUint::from(3u32));
    }

    #[test]
    fn k_step_examples() {
        let cat = Catalog::up_to(7).unwrap();
        let (g0, p0) = k_step_counts(&cat, 4, 0).unwrap();
        assert_eq!(g0, CountMatrix::identity(4, 4));
        assert_eq!(p0, CountMatrix::identity(4, 4));

        let t4 = cat.table(4).unwrap();
        let g3 = growth_power(&cat, 1, 3).unwrap();
        assert_eq!(
            g3.get(0, t4.index_of(&tree("((())())")).unwrap()),
            BigUint::from(3u32)
        );
        assert_eq!(
            g3.get(0, t4.index_of(&tree("(()()())")).unwrap()),
            BigUint::from(1u32)
        );

        let p3 = pruning_power(&cat, 4, 3).unwrap();
        assert_eq!(
            p3.get(t4.index_of(&tree("((()()))")).unwrap(), 0),
            BigUint::from(2u32)
        );

        assert!(k_step_counts(&cat, 4, 4).is_err());
        assert!(growth_power(&cat, 5, 3).is_err());
    }

    #[test]
    fn commutator_small() {
        let cat = Catalog::up_to(6).unwrap();
        for n in 1..=5 {
            assert!(commutator_check(&cat, n).unwrap(), "n = {n}");
        }
        assert!(commutator_check(&cat, 6).is_err());
    }
}
