//! Uniform hypergraphs on dense vertex ids `0..n`. Graphs are the
//! 2-uniform case.

use std::fmt::Write as _;
use std::path::Path;

use fixedbitset::FixedBitSet;
use rustc_hash::FxHashSet;

use crate::combinatorics::{binomial, RankTable};
use crate::error::{Error, Result};

/// Above this many possible edges membership switches from a rank bitmap to hashing.
const DENSE_MEMBERSHIP_LIMIT: u128 = 1 << 28;

#[derive(Debug, Clone)]
enum Membership {
    Dense { table: RankTable, bits: FixedBitSet },
    Packed(FxHashSet<u128>),
    Boxed(FxHashSet<Box<[u32]>>),
}

fn pack(sorted: &[u32]) -> u128 {
    sorted.iter().fold(0u128, |acc, &v| (acc << 32) | v as u128)
}

impl Membership {
    fn build(r: usize, n: usize, flat: &[u32]) -> Self {
        let possible = binomial(n as u64, r as u64);
        if possible <= DENSE_MEMBERSHIP_LIMIT {
            let table = RankTable::new(n, r);
            let mut bits = FixedBitSet::with_capacity(possible as usize);
            for e in flat.chunks_exact(r) {
                bits.insert(table.rank(e) as usize);
            }
            Membership::Dense { table, bits }
        } else if r <= 4 {
            Membership::Packed(flat.chunks_exact(r).map(pack).collect())
        } else {
            Membership::Boxed(flat.chunks_exact(r).map(|e| e.to_vec().into_boxed_slice()).collect())
        }
    }

    #[inline]
    fn contains(&self, sorted: &[u32]) -> bool {
        match self {
            Membership::Dense { table, bits } => bits.contains(table.rank(sorted) as usize),
            Membership::Packed(set) => set.contains(&pack(sorted)),
            Membership::Boxed(set) => set.contains(sorted),
        }
    }
}

/// A `k`-uniform hypergraph with canonical (lexicographically sorted) edges.
///
/// Immutable after construction. For graphs the per-vertex lists hold sorted
/// neighbours; for `k >= 3` they hold indices of incident edges.
#[derive(Debug, Clone)]
pub struct Hypergraph {
    k: usize,
    n: usize,
    edges: Vec<u32>,
    membership: Membership,
    lists: Vec<Vec<u32>>,
}

impl PartialEq for Hypergraph {
    fn eq(&self, other: &Self) -> bool {
        self.k == other.k && self.n == other.n && self.edges == other.edges
    }
}

impl Eq for Hypergraph {}

impl Hypergraph {
    /// Builds a hypergraph from arbitrary edge lists; each edge is sorted and checked.
    pub fn new<I, E>(k: usize, n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = E>,
        E: AsRef<[u32]>,
    {
        if k < 1 {
            return Err(Error::invalid("uniformity must be at least 1"));
        }
        let mut rows: Vec<Vec<u32>> = Vec::new();
        for e in edges {
            let e = e.as_ref();
            if e.len() != k {
                return Err(Error::UniformityMismatch { expected: k, found: e.len() });
            }
            let mut e = e.to_vec();
            e.sort_unstable();
            if e.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::invalid(format!("edge {e:?} repeats a vertex")));
            }
            if let Some(&v) = e.last() {
                if v as usize >= n {
                    return Err(Error::invalid(format!("vertex {v} out of range for n = {n}")));
                }
            }
            rows.push(e);
        }
        rows.sort_unstable();
        if rows.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid("duplicate edge"));
        }
        Ok(Self::from_sorted_flat(k, n, rows.concat()))
    }

    /// Trusted constructor: `flat` must hold sorted, distinct, lexicographically ordered edges.
    pub(crate) fn from_sorted_flat(k: usize, n: usize, edges: Vec<u32>) -> Self {
        debug_assert!(edges.len().is_multiple_of(k));
        debug_assert!(edges.chunks_exact(k).all(|e| e.windows(2).all(|w| w[0] < w[1])));
        debug_assert!(edges.chunks_exact(k).zip(edges.chunks_exact(k).skip(1)).all(|(a, b)| a < b));
        let membership = Membership::build(k, n, &edges);
        let mut lists = vec![Vec::new(); n];
        if k == 2 {
            // lexicographic edge order keeps both directions ascending
            for e in edges.chunks_exact(2) {
                lists[e[0] as usize].push(e[1]);
                lists[e[1] as usize].push(e[0]);
            }
        } else {
            for (i, e) in edges.chunks_exact(k).enumerate() {
                for &v in e {
                    lists[v as usize].push(i as u32);
                }
            }
        }
        Hypergraph { k, n, edges, membership, lists }
    }

    /// Builds from a list of edges that is already sorted and deduplicated in any order.
    pub(crate) fn from_sorted_edges(k: usize, n: usize, mut rows: Vec<Vec<u32>>) -> Self {
        rows.sort_unstable();
        rows.dedup();
        Self::from_sorted_flat(k, n, rows.concat())
    }

    pub fn empty(k: usize, n: usize) -> Self {
        Self::from_sorted_flat(k, n, Vec::new())
    }

    /// The complete `k`-graph on `n` vertices.
    pub fn complete(k: usize, n: usize) -> Self {
        let mut flat = Vec::new();
        crate::combinatorics::for_each_combination(n, k, |c| flat.extend_from_slice(c));
        Self::from_sorted_flat(k, n, flat)
    }

    #[inline]
    pub fn uniformity(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges.len() / self.k
    }

    pub fn is_graph(&self) -> bool {
        self.k == 2
    }

    /// Edges in canonical order.
    pub fn edges(&self) -> std::slice::ChunksExact<'_, u32> {
        self.edges.chunks_exact(self.k)
    }

    pub fn edge(&self, i: usize) -> &[u32] {
        &self.edges[i * self.k..(i + 1) * self.k]
    }

    /// Membership test for an edge given in increasing order.
    #[inline]
    pub fn contains_sorted(&self, sorted: &[u32]) -> bool {
        debug_assert!(sorted.windows(2).all(|w| w[0] < w[1]));
        if sorted.len() != self.k || sorted.last().is_some_and(|&v| v as usize >= self.n) {
            return false;
        }
        self.membership.contains(sorted)
    }

    /// Membership test for a vertex set in any order.
    pub fn contains_edge(&self, vertices: &[u32]) -> bool {
        if vertices.len() != self.k {
            return false;
        }
        let mut buf = [0u32; 16];
        if self.k <= buf.len() {
            let e = &mut buf[..self.k];
            e.copy_from_slice(vertices);
            e.sort_unstable();
            e.windows(2).all(|w| w[0] < w[1]) && self.contains_sorted(e)
        } else {
            let mut e = vertices.to_vec();
            e.sort_unstable();
            e.windows(2).all(|w| w[0] < w[1]) && self.contains_sorted(&e)
        }
    }

    #[inline]
    pub fn has_pair(&self, u: u32, v: u32) -> bool {
        debug_assert_eq!(self.k, 2);
        match u.cmp(&v) {
            std::cmp::Ordering::Less => self.contains_sorted(&[u, v]),
            std::cmp::Ordering::Greater => self.contains_sorted(&[v, u]),
            std::cmp::Ordering::Equal => false,
        }
    }

    /// Sorted neighbours of `v`. Only meaningful for graphs.
    pub fn neighbors(&self, v: u32) -> &[u32] {
        assert_eq!(self.k, 2, "neighbors() is defined for graphs only");
        &self.lists[v as usize]
    }

    /// Indices of edges containing `v`, ascending. Only for `k >= 3`.
    pub fn incident_edge_ids(&self, v: u32) -> &[u32] {
        assert!(self.k != 2, "graphs store neighbour lists, use neighbors()");
        &self.lists[v as usize]
    }

    pub fn degree(&self, v: u32) -> usize {
        self.lists[v as usize].len()
    }

    /// Calls `f` with every edge containing `v`, in canonical order for `k >= 3`.
    pub fn for_each_incident(&self, v: u32, mut f: impl FnMut(&[u32])) {
        if self.k == 2 {
            for &w in &self.lists[v as usize] {
                let e = if v < w { [v, w] } else { [w, v] };
                f(&e);
            }
        } else {
            for &i in &self.lists[v as usize] {
                f(self.edge(i as usize));
            }
        }
    }

    /// Sub-hypergraph keeping the edges for which `keep` returns true.
    pub fn filter_edges(&self, mut keep: impl FnMut(&[u32]) -> bool) -> Hypergraph {
        let mut flat = Vec::new();
        for e in self.edges() {
            if keep(e) {
                flat.extend_from_slice(e);
            }
        }
        Self::from_sorted_flat(self.k, self.n, flat)
    }

    /// Induced sub-hypergraph on `vertices`, relabelled to `0..vertices.len()` in the given order.
    pub fn induced(&self, vertices: &[u32]) -> Hypergraph {
        let mut pos = vec![u32::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            pos[v as usize] = i as u32;
        }
        let mut rows = Vec::new();
        for e in self.edges() {
            if e.iter().all(|&v| pos[v as usize] != u32::MAX) {
                let mut r: Vec<u32> = e.iter().map(|&v| pos[v as usize]).collect();
                r.sort_unstable();
                rows.push(r);
            }
        }
        Self::from_sorted_edges(self.k, vertices.len(), rows)
    }

    /// Number of vertices lying in at least one edge.
    pub fn spanned_vertex_count(&self) -> usize {
        self.lists.iter().filter(|l| !l.is_empty()).count()
    }

    /// Serializes in the `k n m` text format.
    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(self.edges.len() * 6 + 32);
        let _ = writeln!(s, "{} {} {}", self.k, self.n, self.edge_count());
        for e in self.edges() {
            for (i, v) in e.iter().enumerate() {
                if i > 0 {
                    s.push(' ');
                }
                let _ = write!(s, "{v}");
            }
            s.push('\n');
        }
        s
    }

    /// Parses the `k n m` text format. Edge lines must be strictly increasing.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty input".into()))?;
        let nums = parse_numbers(header)?;
        let [k, n, m] = nums[..] else {
            return Err(Error::Parse(format!("header must be `k n m`, got {header:?}")));
        };
        let (k, n, m) = (k as usize, n as usize, m as usize);
        let mut rows = Vec::with_capacity(m);
        for line in lines {
            let e = parse_numbers(line)?;
            if e.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Parse(format!("edge line not strictly increasing: {line:?}")));
            }
            rows.push(e);
        }
        if rows.len() != m {
            return Err(Error::Parse(format!("header promises {m} edges, found {}", rows.len())));
        }
        Self::new(k, n, rows)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_text(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}

pub(crate) fn parse_numbers(line: &str) -> Result<Vec<u32>> {
    line.split_whitespace().map(|t| t.parse::<u32>().map_err(|_| Error::Parse(format!("bad integer {t:?}")))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order_and_membership() {
        let g = Hypergraph::new(2, 4, [[3, 1], [0, 2], [1, 0]]).unwrap();
        let edges: Vec<_> = g.edges().map(|e| e.to_vec()).collect();
        assert_eq!(edges, vec![vec![0, 1], vec![0, 2], vec![1, 3]]);
        assert!(g.contains_edge(&[3, 1]));
        assert!(!g.contains_edge(&[2, 3]));
        assert_eq!(g.neighbors(0), &[1, 2]);
        assert_eq!(g.neighbors(1), &[0, 3]);
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(Hypergraph::new(2, 3, [[0, 3]]).is_err());
        assert!(Hypergraph::new(2, 3, [[1, 1]]).is_err());
        assert!(Hypergraph::new(2, 3, [[0, 1], [1, 0]]).is_err());
        assert!(matches!(
            Hypergraph::new(3, 3, [vec![0, 1]]),
            Err(Error::UniformityMismatch { expected: 3, found: 2 })
        ));
    }

    #[test]
    fn text_round_trip() {
        let g = Hypergraph::complete(3, 5);
        let text = g.to_text();
        assert!(text.starts_with("3 5 10\n0 1 2\n"));
        assert_eq!(Hypergraph::from_text(&text).unwrap(), g);
        assert!(Hypergraph::from_text("2 3 1\n1 0\n").is_err());
        assert!(Hypergraph::from_text("2 3 2\n0 1\n").is_err());
    }

    #[test]
    fn hashed_membership_agrees_with_dense() {
        // C(3000, 4) is far above the dense limit
        let edges = [[5u32, 17, 900, 2999], [0, 1, 2, 3]];
        let g = Hypergraph::new(4, 3000, edges).unwrap();
        assert!(matches!(g.membership, Membership::Packed(_)));
        assert!(g.contains_edge(&[2999, 17, 5, 900]));
        assert!(!g.contains_edge(&[0, 1, 2, 4]));
        let h = Hypergraph::new(5, 200, [[0u32, 1, 2, 3, 199]]).unwrap();
        assert!(matches!(h.membership, Membership::Boxed(_)));
        assert!(h.contains_edge(&[199, 0, 1, 2, 3]));
    }

    #[test]
    fn incidence_for_hypergraphs() {
        let h = Hypergraph::complete(3, 4);
        assert_eq!(h.degree(0), 3);
        let mut seen = Vec::new();
        h.for_each_incident(3, |e| seen.push(e.to_vec()));
        assert_eq!(seen, vec![vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]]);
    }

    #[test]
    fn induced_relabels() {
        let g = Hypergraph::complete(2, 5);
        let s = g.induced(&[4, 1, 2]);
        assert_eq!(s.edge_count(), 3);
        assert_eq!(s.vertex_count(), 3);
    }
}
