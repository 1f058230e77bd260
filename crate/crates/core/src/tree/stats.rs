use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;

use super::CanonicalTree;

/// Per-tree counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeStats {
    /// Number of ways to take the tree apart by removing terminal vertices
    /// one at a time: `size! / prod h(v)`.
    pub m: BigUint,
    /// Number of ways to build the tree from the single vertex by attaching
    /// leaves one at a time: `m / sg_order`.
    pub n_weight: BigUint,
    /// Order of the symmetry group: the product over vertices of `k!` for
    /// every class of `k` isomorphic child subtrees.
    pub sg_order: BigUint,
    /// Subtree size `h(v)` of every vertex, in encoding order.
    pub subtree_sizes: Vec<usize>,
}

impl TreeStats {
    /// `prod h(v)` over all vertices.
    pub fn hook_product(&self) -> BigUint {
        self.subtree_sizes
            .iter()
            .fold(BigUint::one(), |acc, &h| acc * BigUint::from(h))
    }
}

pub(crate) fn factorial(n: usize) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

pub fn tree_stats(t: &CanonicalTree) -> TreeStats {
    let bytes = t.encoding().as_bytes();
    let parents = t.to_parents();
    let n = parents.len();

    let mut sizes = vec![1usize; n];
    for v in (1..n).rev() {
        let p = parents[v].expect("only vertex 0 is the root");
        sizes[p] += sizes[v];
    }

    // Opening byte of each vertex; a vertex's canonical subtree encoding is
    // the slice of length 2 h(v) starting there.
    let starts: Vec<usize> = bytes
        .iter()
        .enumerate()
        .filter(|(_, &b)| b == b'(')
        .map(|(i, _)| i)
        .collect();
    let subtree = |v: usize| &bytes[starts[v]..starts[v] + 2 * sizes[v]];

    let mut children = vec![Vec::new(); n];
    for (v, p) in parents.iter().enumerate() {
        if let Some(p) = *p {
            children[p].push(v);
        }
    }

    let mut sg_order = BigUint::one();
    for kids in &children {
        // Children appear in sorted order, so equal subtrees are adjacent.
        let mut run = 1usize;
        for pair in kids.windows(2) {
            if subtree(pair[0]) == subtree(pair[1]) {
                run += 1;
            } else {
                sg_order *= factorial(run);
                run = 1;
            }
        }
        sg_order *= factorial(run);
    }

    let hooks = sizes
        .iter()
        .fold(BigUint::one(), |acc, &h| acc * BigUint::from(h));
    let (m, rem) = factorial(n).div_rem(&hooks);
    debug_assert!(rem == BigUint::ZERO);
    let (n_weight, rem) = m.div_rem(&sg_order);
    debug_assert!(rem == BigUint::ZERO, "|SG| must divide m for {t}");

    TreeStats {
        m,
        n_weight,
        sg_order,
        subtree_sizes: sizes,
    }
}
