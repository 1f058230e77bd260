//! Rooted unlabeled trees in canonical balanced-parenthesis form.
//!
//! A tree is written as `(` followed by the encodings of its children and
//! then `)`. The canonical form sorts the children's encodings ascending
//! byte-wise at every vertex, so two trees are isomorphic exactly when their
//! canonical encodings are equal. Vertices are numbered in encoding order,
//! i.e. by the position of their opening parenthesis (a preorder).

mod otter;
mod stats;
mod table;

use std::fmt;

use crate::error::{Error, Result};

pub use otter::{count_trees, count_trees_up_to};
pub use stats::{tree_stats, TreeStats};
pub use table::{enumerate_trees, enumerate_trees_with_cap, Catalog, TreeTable, ENUMERATION_CAP};

const OPEN: u8 = b'(';
const CLOSE: u8 = b')';

/// A rooted unlabeled tree stored as its canonical encoding.
///
/// Ordering is byte-wise on the encoding, which is the table order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalTree {
    encoding: String,
}

impl CanonicalTree {
    /// The single vertex `()`.
    pub fn single() -> Self {
        Self {
            encoding: "()".to_owned(),
        }
    }

    /// The path with `n` vertices (the unique tree with one terminal vertex).
    pub fn path(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("a tree needs at least one vertex".into()));
        }
        let mut encoding = "(".repeat(n);
        encoding.push_str(&")".repeat(n));
        Ok(Self { encoding })
    }

    /// The star with `n` vertices: a root with `n - 1` leaf children.
    pub fn star(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("a tree needs at least one vertex".into()));
        }
        let mut encoding = String::with_capacity(2 * n);
        encoding.push('(');
        for _ in 1..n {
            encoding.push_str("()");
        }
        encoding.push(')');
        Ok(Self { encoding })
    }

    /// Parses an encoding that must already be canonical.
    pub fn parse(s: &str) -> Result<Self> {
        let canonical = Self::from_balanced(s)?;
        if canonical.encoding != s {
            return Err(Error::Malformed(format!(
                "{s:?} is not canonical (canonical form is {:?})",
                canonical.encoding
            )));
        }
        Ok(canonical)
    }

    /// Canonicalizes any balanced single-rooted parenthesis string, in which
    /// the children may appear in any order.
    pub fn from_balanced(s: &str) -> Result<Self> {
        let parents = parse_parents(s.as_bytes())?;
        Ok(Self {
            encoding: encode_preordered(&parents),
        })
    }

    /// Canonicalizes a parent list: `parents[v]` is the parent of vertex `v`,
    /// or `None` for the root.
    pub fn from_parents(parents: &[Option<usize>]) -> Result<Self> {
        canonicalize(parents)
    }

    pub fn encoding(&self) -> &str {
        &self.encoding
    }

    /// Number of vertices.
    pub fn size(&self) -> usize {
        self.encoding.len() / 2
    }

    /// Parent list in encoding order. Vertex 0 is the root.
    pub fn to_parents(&self) -> Vec<Option<usize>> {
        parse_parents(self.encoding.as_bytes()).expect("canonical encodings are well formed")
    }

    /// Number of terminal vertices. The single vertex counts as terminal.
    pub fn terminal_count(&self) -> usize {
        self.encoding
            .as_bytes()
            .windows(2)
            .filter(|w| w == b"()")
            .count()
    }
}

impl fmt::Display for CanonicalTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encoding)
    }
}

impl fmt::Debug for CanonicalTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalTree({})", self.encoding)
    }
}

impl std::str::FromStr for CanonicalTree {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

/// Returns the canonical encoding of the rooted tree described by a parent
/// list, with the root marked `None`.
pub fn canonicalize(parents: &[Option<usize>]) -> Result<CanonicalTree> {
    let n = parents.len();
    if n == 0 {
        return Err(Error::Malformed("empty parent list".into()));
    }
    let mut root = None;
    let mut children = vec![Vec::new(); n];
    for (v, p) in parents.iter().enumerate() {
        match *p {
            None if root.is_some() => {
                return Err(Error::Malformed("more than one root (forest)".into()))
            }
            None => root = Some(v),
            Some(p) if p >= n => {
                return Err(Error::Malformed(format!(
                    "vertex {v} has parent {p} out of range"
                )))
            }
            Some(p) if p == v => {
                return Err(Error::Malformed(format!("vertex {v} is its own parent")))
            }
            Some(p) => children[p].push(v),
        }
    }
    let root = root.ok_or_else(|| Error::Malformed("no root (cycle)".into()))?;

    // Reorder into a preorder so children follow their parent.
    let mut order = Vec::with_capacity(n);
    let mut stack = vec![root];
    while let Some(v) = stack.pop() {
        order.push(v);
        stack.extend(children[v].iter().rev().copied());
    }
    if order.len() != n {
        return Err(Error::Malformed(
            "some vertices are unreachable from the root (cycle)".into(),
        ));
    }
    let mut position = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    let preordered: Vec<Option<usize>> = order
        .iter()
        .map(|&v| parents[v].map(|p| position[p]))
        .collect();
    Ok(CanonicalTree {
        encoding: encode_preordered(&preordered),
    })
}

/// Parses a balanced string with a single outermost pair into a preorder
/// parent list.
fn parse_parents(bytes: &[u8]) -> Result<Vec<Option<usize>>> {
    if bytes.is_empty() {
        return Err(Error::Malformed("empty encoding".into()));
    }
    let mut parents = Vec::with_capacity(bytes.len() / 2);
    let mut stack: Vec<usize> = Vec::new();
    for (i, &b) in bytes.iter().enumerate() {
        match b {
            OPEN => {
                if stack.is_empty() && !parents.is_empty() {
                    return Err(Error::Malformed(format!(
                        "second top-level vertex at byte {i} (forest)"
                    )));
                }
                parents.push(stack.last().copied());
                stack.push(parents.len() - 1);
            }
            CLOSE => {
                if stack.pop().is_none() {
                    return Err(Error::Malformed(format!("unbalanced ')' at byte {i}")));
                }
            }
            other => {
                return Err(Error::Malformed(format!(
                    "unexpected byte {:?} at {i}",
                    other as char
                )))
            }
        }
    }
    if !stack.is_empty() {
        return Err(Error::Malformed("unclosed '('".into()));
    }
    Ok(parents)
}

/// Canonical encoding of a preorder parent list (every parent index is
/// smaller than its child's).
fn encode_preordered(parents: &[Option<usize>]) -> String {
    let n = parents.len();
    let mut children: Vec<Vec<String>> = vec![Vec::new(); n];
    let mut done: Vec<String> = vec![String::new(); n];
    for v in (0..n).rev() {
        let mut kids = std::mem::take(&mut children[v]);
        kids.sort_unstable();
        let len = 2 + kids.iter().map(String::len).sum::<usize>();
        let mut s = String::with_capacity(len);
        s.push('(');
        for k in &kids {
            s.push_str(k);
        }
        s.push(')');
        match parents[v] {
            Some(p) => children[p].push(s),
            None => done[v] = s,
        }
    }
    std::mem::take(&mut done[0])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_vertex() {
        assert_eq!(canonicalize(&[None]).unwrap().encoding(), "()");
        assert_eq!(CanonicalTree::single().size(), 1);
    }

    #[test]
    fn children_sorted_in_either_order() {
        // root 0; path-of-2 is 1 -> 2; leaf 3
        let a = canonicalize(&[None, Some(0), Some(1), Some(0)]).unwrap();
        // leaf first, then the path
        let b = canonicalize(&[None, Some(0), Some(0), Some(2)]).unwrap();
        assert_eq!(a.encoding(), "((())())");
        assert_eq!(a, b);
    }

    #[test]
    fn root_need_not_be_vertex_zero() {
        let t = canonicalize(&[Some(1), Some(2), Some(3), None]).unwrap();
        assert_eq!(t.encoding(), "(((())))");
        assert_eq!(t, CanonicalTree::path(4).unwrap());
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(canonicalize(&[]), Err(Error::Malformed(_))));
        assert!(matches!(
            canonicalize(&[None, None]),
            Err(Error::Malformed(_))
        ));
        assert!(matches!(
            canonicalize(&[Some(1), Some(0)]),
            Err(Error::Malformed(_))
        ));
        // root plus a detached 2-cycle
        assert!(matches!(
            canonicalize(&[None, Some(2), Some(1)]),
            Err(Error::Malformed(_))
        ));
        assert!(matches!(
            canonicalize(&[None, Some(7)]),
            Err(Error::Malformed(_))
        ));
        assert!(matches!(
            canonicalize(&[None, Some(1)]),
            Err(Error::Malformed(_))
        ));
    }

    #[test]
    fn parse_rejects_bad_strings() {
        for bad in ["", "(", ")", "()()", "(()", "())(", "(x)", "(()(()))"] {
            assert!(CanonicalTree::parse(bad).is_err(), "{bad:?}");
        }
        assert_eq!(
            CanonicalTree::from_balanced("(()(()))").unwrap().encoding(),
            "((())())"
        );
    }

    #[test]
    fn parents_round_trip() {
        let t = CanonicalTree::parse("((()())(())())").unwrap();
        let parents = t.to_parents();
        assert_eq!(parents[0], None);
        assert_eq!(canonicalize(&parents).unwrap(), t);
    }

    #[test]
    fn terminal_counts() {
        assert_eq!(CanonicalTree::single().terminal_count(), 1);
        assert_eq!(CanonicalTree::path(5).unwrap().terminal_count(), 1);
        assert_eq!(CanonicalTree::star(5).unwrap().terminal_count(), 4);
        assert_eq!(
            CanonicalTree::star(2).unwrap(),
            CanonicalTree::path(2).unwrap()
        );
    }
}
