//! Vertex tuples, vertex sets and template embeddings.

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

/// Ordered tuple of distinct vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct VertexTuple(Vec<u32>);

impl VertexTuple {
    pub fn new(vertices: Vec<u32>) -> Result<Self> {
        let mut seen = vertices.clone();
        seen.sort_unstable();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid(format!("tuple {vertices:?} repeats a vertex")));
        }
        Ok(VertexTuple(vertices))
    }

    pub(crate) fn from_vec_unchecked(vertices: Vec<u32>) -> Self {
        debug_assert!(VertexTuple::new(vertices.clone()).is_ok());
        VertexTuple(vertices)
    }

    pub fn empty() -> Self {
        VertexTuple(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<u32> {
        self.0
    }

    pub fn reversed(&self) -> Self {
        let mut v = self.0.clone();
        v.reverse();
        VertexTuple(v)
    }

    pub fn contains(&self, v: u32) -> bool {
        self.0.contains(&v)
    }

    /// True when the two tuples share no vertex.
    pub fn is_disjoint(&self, other: &VertexTuple) -> bool {
        self.0.iter().all(|v| !other.0.contains(v))
    }
}

impl std::ops::Deref for VertexTuple {
    type Target = [u32];
    fn deref(&self) -> &[u32] {
        &self.0
    }
}

/// A set of host vertices backed by a bitset; iteration is ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexSet {
    bits: FixedBitSet,
}

impl VertexSet {
    pub fn new(n: usize) -> Self {
        VertexSet { bits: FixedBitSet::with_capacity(n) }
    }

    pub fn from_iter(n: usize, vertices: impl IntoIterator<Item = u32>) -> Self {
        let mut s = Self::new(n);
        for v in vertices {
            s.insert(v);
        }
        s
    }

    pub fn full(n: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(n);
        bits.insert_range(..);
        VertexSet { bits }
    }

    /// Capacity, i.e. the host vertex count.
    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    #[inline]
    pub fn contains(&self, v: u32) -> bool {
        self.bits.contains(v as usize)
    }

    pub fn insert(&mut self, v: u32) {
        self.bits.grow(v as usize + 1);
        self.bits.insert(v as usize);
    }

    pub fn remove(&mut self, v: u32) {
        if (v as usize) < self.bits.len() {
            self.bits.set(v as usize, false);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.bits.ones().map(|v| v as u32)
    }

    pub fn to_vec(&self) -> Vec<u32> {
        self.iter().collect()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.bits.is_disjoint(&other.bits)
    }

    pub fn difference_with(&mut self, other: &VertexSet) {
        self.bits.difference_with(&other.bits);
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        self.bits.union_with(&other.bits);
    }
}

/// Injective map from template vertices `0..v(F)` to host vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Embedding(Vec<u32>);

impl Embedding {
    pub fn new(images: Vec<u32>) -> Self {
        Embedding(images)
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    #[inline]
    pub fn image(&self, template_vertex: usize) -> u32 {
        self.0[template_vertex]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn map_tuple(&self, t: &[u32]) -> Vec<u32> {
        t.iter().map(|&v| self.0[v as usize]).collect()
    }

    pub fn is_injective(&self) -> bool {
        let mut s = self.0.clone();
        s.sort_unstable();
        s.windows(2).all(|w| w[0] != w[1])
    }
}

/// True iff `f` is injective and maps every edge of `f_template` to an edge of `host`.
pub fn is_embedding(f_template: &Hypergraph, host: &Hypergraph, f: &Embedding) -> Result<bool> {
    if f_template.uniformity() != host.uniformity() {
        return Err(Error::UniformityMismatch { expected: host.uniformity(), found: f_template.uniformity() });
    }
    if f.len() != f_template.vertex_count() || !f.is_injective() {
        return Ok(false);
    }
    if f.images().iter().any(|&v| v as usize >= host.vertex_count()) {
        return Ok(false);
    }
    let mut buf = Vec::with_capacity(host.uniformity());
    Ok(f_template.edges().all(|e| {
        buf.clear();
        buf.extend(e.iter().map(|&v| f.image(v as usize)));
        host.contains_edge(&buf)
    }))
}
