//! Canonical forms for graphs: exact labeled codes for cycle detection and
//! isomorphism-invariant codes for trees (used to deduplicate enumerated
//! trees into isomorphism classes).

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::graph::{Graph, GraphError, Vertex};

/// Which canonical form to compute.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CodeKind {
    /// Exact labeled representation: two graphs get the same code iff they
    /// have the same vertex count and the same edge set.
    Labeled,
    /// Isomorphism-invariant tree code (rooted at the centroid); two trees
    /// get the same code iff they are isomorphic. Errors on non-trees.
    UnlabeledTree,
}

/// A canonical byte string; comparable only within the same [`CodeKind`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalCode {
    pub kind: CodeKind,
    pub bytes: Vec<u8>,
}

impl CanonicalCode {
    /// Short hex digest of the code, for human-readable state labels.
    pub fn digest_hex(&self) -> String {
        format!("{:016x}", fnv1a64(&self.bytes))
    }
}

/// 64-bit FNV-1a hash; stable across platforms and runs.
pub(crate) fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Computes the canonical code of `g` for the requested kind.
pub fn canonical(g: &Graph, kind: CodeKind) -> Result<CanonicalCode, GraphError> {
    let bytes = match kind {
        CodeKind::Labeled => labeled_bytes(g),
        CodeKind::UnlabeledTree => {
            if !g.is_tree() {
                return Err(GraphError::NotATree);
            }
            unlabeled_tree_bytes(g)
        }
    };
    Ok(CanonicalCode { kind, bytes })
}

fn labeled_bytes(g: &Graph) -> Vec<u8> {
    let mut out = Vec::with_capacity(5 + 8 * g.edge_count());
    out.push(b'L');
    out.extend_from_slice(&(g.n() as u32).to_le_bytes());
    for (u, v) in g.edges() {
        out.extend_from_slice(&(u as u32).to_le_bytes());
        out.extend_from_slice(&(v as u32).to_le_bytes());
    }
    out
}

fn unlabeled_tree_bytes(g: &Graph) -> Vec<u8> {
    let cents = centroids(g);
    let structure = match cents.as_slice() {
        [c] => rooted_code(g, *c, None),
        [c1, c2] => {
            // Root each half at its centroid endpoint, excluding the centroid
            // edge, and join the two halves under a virtual root. Together
            // with the vertex-count prefix this cannot collide with a
            // single-centroid code of the same size.
            let a = rooted_code(g, *c1, Some(*c2));
            let b = rooted_code(g, *c2, Some(*c1));
            let (x, y) = if a <= b { (a, b) } else { (b, a) };
            let mut joined = Vec::with_capacity(x.len() + y.len() + 2);
            joined.push(b'(');
            joined.extend_from_slice(&x);
            joined.extend_from_slice(&y);
            joined.push(b')');
            joined
        }
        _ => unreachable!("a tree has one or two centroids"),
    };
    let mut out = Vec::with_capacity(5 + structure.len());
    out.push(b'T');
    out.extend_from_slice(&(g.n() as u32).to_le_bytes());
    out.extend_from_slice(&structure);
    out
}

/// Classic rooted-tree code: children codes sorted and concatenated inside
/// parentheses. Equal codes iff the rooted trees are isomorphic.
fn rooted_code(g: &Graph, v: Vertex, parent: Option<Vertex>) -> Vec<u8> {
    let mut child_codes: Vec<Vec<u8>> = g
        .neighbors(v)
        .iter()
        .copied()
        .filter(|&c| Some(c) != parent)
        .map(|c| rooted_code(g, c, Some(v)))
        .collect();
    child_codes.sort();
    let mut out = Vec::with_capacity(2 + child_codes.iter().map(Vec::len).sum::<usize>());
    out.push(b'(');
    for c in child_codes {
        out.extend_from_slice(&c);
    }
    out.push(b')');
    out
}

/// Centroid(s) of a tree: the one or two vertices left after repeatedly
/// stripping all current leaves at once.
pub fn centroids(g: &Graph) -> Vec<Vertex> {
    let n = g.n();
    if n == 1 {
        return vec![0];
    }
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut alive = vec![true; n];
    let mut remaining = n;
    let mut layer: Vec<Vertex> = (0..n).filter(|&v| deg[v] == 1).collect();
    while remaining > 2 {
        let mut next = Vec::new();
        for &leaf in &layer {
            alive[leaf] = false;
            remaining -= 1;
            for &x in g.neighbors(leaf) {
                if alive[x] {
                    deg[x] -= 1;
                    if deg[x] == 1 {
                        next.push(x);
                    }
                }
            }
        }
        layer = next;
    }
    (0..n).filter(|&v| alive[v]).collect()
}

/// Decodes a Prüfer sequence into the labeled tree it encodes.
///
/// A sequence of length `n - 2` over `0..n` yields a tree on `n ≥ 2`
/// vertices; the map is a bijection onto labeled trees.
pub fn prufer_decode(seq: &[usize]) -> Result<Graph, GraphError> {
    let n = seq.len() + 2;
    for &s in seq {
        if s >= n {
            return Err(GraphError::VertexOutOfRange { v: s, n });
        }
    }
    let mut deg = vec![1usize; n];
    for &s in seq {
        deg[s] += 1;
    }
    let mut heap: BinaryHeap<Reverse<Vertex>> =
        (0..n).filter(|&v| deg[v] == 1).map(Reverse).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &s in seq {
        let leaf = loop {
            let Reverse(x) = heap.pop().expect("prufer invariant: a leaf always exists");
            if deg[x] == 1 {
                break x;
            }
        };
        edges.push((leaf, s));
        deg[leaf] = 0;
        deg[s] -= 1;
        if deg[s] == 1 {
            heap.push(Reverse(s));
        }
    }
    let mut last = (0..n).filter(|&v| deg[v] == 1);
    let a = last.next().expect("prufer invariant: two vertices remain");
    let b = last.next().expect("prufer invariant: two vertices remain");
    edges.push((a, b));
    Graph::new(n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn path(n: usize) -> Graph {
        Graph::new(n, (0..n - 1).map(|i| (i, i + 1))).unwrap()
    }

    fn star(n: usize) -> Graph {
        Graph::new(n, (1..n).map(|v| (0, v))).unwrap()
    }

    #[test]
    fn centroid_of_path_and_star() {
        assert_eq!(centroids(&path(5)), vec![2]);
        assert_eq!(centroids(&path(4)), vec![1, 2]);
        assert_eq!(centroids(&star(7)), vec![0]);
        assert_eq!(centroids(&path(2)), vec![0, 1]);
        assert_eq!(centroids(&Graph::new(1, []).unwrap()), vec![0]);
    }

    #[test]
    fn unlabeled_code_ignores_labels() {
        // The same 5-vertex "chair" under two labelings.
        let a = Graph::new(5, [(0, 1), (1, 2), (2, 3), (2, 4)]).unwrap();
        let b = Graph::new(5, [(4, 3), (3, 0), (0, 2), (0, 1)]).unwrap();
        assert_eq!(
            canonical(&a, CodeKind::UnlabeledTree).unwrap(),
            canonical(&b, CodeKind::UnlabeledTree).unwrap()
        );
        assert_ne!(
            canonical(&a, CodeKind::Labeled).unwrap(),
            canonical(&b, CodeKind::Labeled).unwrap()
        );
    }

    #[test]
    fn unlabeled_code_separates_nonisomorphic_trees() {
        assert_ne!(
            canonical(&path(5), CodeKind::UnlabeledTree).unwrap(),
            canonical(&star(5), CodeKind::UnlabeledTree).unwrap()
        );
        // Bicentroid vs centroid trees of adjacent sizes stay distinct.
        assert_ne!(
            canonical(&path(4), CodeKind::UnlabeledTree).unwrap(),
            canonical(&path(5), CodeKind::UnlabeledTree).unwrap()
        );
    }

    #[test]
    fn unlabeled_code_requires_tree() {
        let cycle = Graph::new(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(
            canonical(&cycle, CodeKind::UnlabeledTree),
            Err(GraphError::NotATree)
        );
    }

    #[test]
    fn labeled_code_round_trips_edge_set() {
        let g = Graph::new(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let h = Graph::new(4, [(2, 3), (1, 2), (0, 1)]).unwrap();
        assert_eq!(
            canonical(&g, CodeKind::Labeled).unwrap(),
            canonical(&h, CodeKind::Labeled).unwrap()
        );
    }

    #[test]
    fn prufer_small_cases() {
        // Empty sequence: the single edge on two vertices.
        let g = prufer_decode(&[]).unwrap();
        assert_eq!(g.n(), 2);
        assert!(g.has_edge(0, 1));
        // Constant sequence: a star centered at that vertex.
        let g = prufer_decode(&[3, 3, 3]).unwrap();
        assert_eq!(
            canonical(&g, CodeKind::UnlabeledTree).unwrap(),
            canonical(&star(5), CodeKind::UnlabeledTree).unwrap()
        );
        assert_eq!(g.degree(3), 4);
    }

    #[test]
    fn prufer_degree_matches_multiplicity() {
        let seq = [4, 1, 4, 2, 1];
        let g = prufer_decode(&seq).unwrap();
        assert!(g.is_tree());
        for v in 0..g.n() {
            let mult = seq.iter().filter(|&&s| s == v).count();
            assert_eq!(g.degree(v), mult + 1, "vertex {v}");
        }
    }

    #[test]
    fn prufer_is_injective_on_n5() {
        let mut labeled = BTreeSet::new();
        for a in 0..5 {
            for b in 0..5 {
                for c in 0..5 {
                    let g = prufer_decode(&[a, b, c]).unwrap();
                    assert!(g.is_tree());
                    labeled.insert(canonical(&g, CodeKind::Labeled).unwrap().bytes);
                }
            }
        }
        assert_eq!(labeled.len(), 125, "Cayley count 5^3 for n = 5");
    }

    #[test]
    fn digest_is_stable() {
        let g = path(4);
        let c = canonical(&g, CodeKind::Labeled).unwrap();
        assert_eq!(c.digest_hex(), c.digest_hex());
        assert_eq!(c.digest_hex().len(), 16);
    }
}
