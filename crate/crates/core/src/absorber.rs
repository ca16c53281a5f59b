//! Backbone gadgets, single-vertex absorbers and chained absorbers.
//!
//! Backbone labels: `x = 0`, and `w_{i,j} = 1 + (i - 1) 2k + (j - 1)` for
//! blocks `i = 1..=ℓ` and positions `j = 1..=2k`. The tuple `w_i^a` is the
//! first half of block `i`, `w_i^b` the second half.

use std::fmt;

use crate::certificate::is_k_path;
use crate::embedding::{is_embedding, Embedding, VertexSet, VertexTuple};
use crate::error::{Error, Result};
use crate::factor::disjoint_copies;
use crate::hypergraph::Hypergraph;
use crate::matcher::{connect_paths, ConnectOptions};
use crate::templates::{connector_template, Mode};

/// Construction phase named in failure reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AbsorberPhase {
    Factor,
    IntraConnect,
    ChainConnect,
}

impl fmt::Display for AbsorberPhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AbsorberPhase::Factor => "factor",
            AbsorberPhase::IntraConnect => "intra-connect",
            AbsorberPhase::ChainConnect => "chain-connect",
        })
    }
}

/// The backbone template together with its labelling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Backbone {
    pub k: usize,
    pub ell: usize,
    pub mode: Mode,
    pub template: Hypergraph,
}

impl Backbone {
    pub fn vertex_count(&self) -> usize {
        1 + 2 * self.k * self.ell
    }

    pub fn x(&self) -> u32 {
        0
    }

    pub fn wa(&self, i: usize) -> Vec<u32> {
        block(self.k, i, 1)
    }

    pub fn wb(&self, i: usize) -> Vec<u32> {
        block(self.k, i, self.k + 1)
    }
}

fn block(k: usize, i: usize, from: usize) -> Vec<u32> {
    (from..from + k).map(|j| (1 + (i - 1) * 2 * k + (j - 1)) as u32).collect()
}

fn rev(mut v: Vec<u32>) -> Vec<u32> {
    v.reverse();
    v
}

fn cat(parts: &[&[u32]]) -> Vec<u32> {
    parts.concat()
}

/// Edges of a `k`-path (power mode) or tight path (tight mode) along `seq`.
fn path_edges(seq: &[u32], k: usize, mode: Mode) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    match mode {
        Mode::Power => {
            for i in 0..seq.len() {
                for j in i + 1..seq.len().min(i + k + 1) {
                    out.push(vec![seq[i].min(seq[j]), seq[i].max(seq[j])]);
                }
            }
        }
        Mode::Tight => {
            for w in seq.windows(k + 1) {
                let mut e = w.to_vec();
                e.sort_unstable();
                out.push(e);
            }
        }
    }
    out
}

/// The five path groups of the backbone, as vertex sequences.
fn backbone_sequences(k: usize, ell: usize) -> Vec<Vec<u32>> {
    let wa = |i| block(k, i, 1);
    let wb = |i| block(k, i, k + 1);
    let mut seqs = vec![cat(&[&wa(1), &[0], &wb(1)])];
    for i in 2..=ell {
        seqs.push(cat(&[&wa(i), &wb(i)]));
    }
    seqs.push(cat(&[&wa(2), &rev(wa(1))]));
    for i in 1..=ell - 2 {
        seqs.push(cat(&[&wa(i + 2), &wb(i)]));
    }
    seqs.push(cat(&[&rev(wb(ell)), &wb(ell - 1)]));
    seqs
}

/// Backbone for any `k >= 1`, `ℓ >= 3`. Used directly by the density checks.
pub fn backbone_graph(k: usize, ell: usize, mode: Mode) -> Result<Backbone> {
    if k < 1 || ell < 3 {
        return Err(Error::invalid(format!("backbone needs k >= 1 and ell >= 3, got k={k}, ell={ell}")));
    }
    let mut rows: Vec<Vec<u32>> = backbone_sequences(k, ell).iter().flat_map(|s| path_edges(s, k, mode)).collect();
    rows.sort_unstable();
    if mode == Mode::Tight {
        let before = rows.len();
        rows.dedup();
        assert_eq!(before, rows.len(), "tight backbone groups must be edge-disjoint");
    }
    let template = Hypergraph::from_sorted_edges(mode.host_uniformity(k), 1 + 2 * k * ell, rows);
    Ok(Backbone { k, ell, mode, template })
}

/// The backbone `B^k_ℓ` (power) or `BH^k_ℓ` (tight); `ℓ` must be odd and at least 5.
pub fn backbone_template(k: usize, ell: usize, mode: Mode) -> Result<Backbone> {
    if ell < 5 || ell.is_multiple_of(2) {
        return Err(Error::invalid(format!("backbone length must be odd and at least 5, got {ell}")));
    }
    backbone_graph(k, ell, mode)
}

/// The ordering `x, w̄_1^a, (w̄_i^a, w_i^b) for even i, w_ℓ^b, w̄_ℓ^a,
/// (w_i^b, w̄_i^a) for odd i descending from ℓ - 2 to 3, w_1^b`.
pub fn backbone_ordering(k: usize, ell: usize) -> Result<VertexTuple> {
    if ell < 3 || ell.is_multiple_of(2) || k < 1 {
        return Err(Error::invalid(format!("ordering needs odd ell >= 3, got {ell}")));
    }
    let wa = |i| block(k, i, 1);
    let wb = |i| block(k, i, k + 1);
    let mut order = vec![0u32];
    order.extend(rev(wa(1)));
    for i in (2..ell).step_by(2) {
        order.extend(rev(wa(i)));
        order.extend(wb(i));
    }
    order.extend(wb(ell));
    order.extend(rev(wa(ell)));
    for i in (3..=ell - 2).rev().step_by(2) {
        order.extend(wb(i));
        order.extend(rev(wa(i)));
    }
    order.extend(wb(1));
    VertexTuple::new(order)
}

/// Number of internal vertices of a connector of length `ell`.
pub fn connector_internal(k: usize, ell: usize) -> usize {
    ell.saturating_sub(2 * k)
}

/// Vertex count of a chain of `t` absorbers with backbone length `lb` and connector length `lc`.
pub fn chain_absorber_size(k: usize, lb: usize, lc: usize, t: usize) -> usize {
    if t == 0 {
        return 0;
    }
    t * (1 + 2 * k * lb) + (t * (lb - 1) + (t - 1)) * connector_internal(k, lc)
}

/// A backbone copy plus connectors `U_1..U_{ℓ-1}`, absorbing the image of `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingleVertexAbsorber {
    pub k: usize,
    pub ell: usize,
    pub mode: Mode,
    /// Backbone labels to host vertices.
    pub embedding: Embedding,
    /// Internal vertices of `U_i`, running from `w_i^b` towards `w_{i+1}^a`.
    pub connectors: Vec<Vec<u32>>,
}

impl SingleVertexAbsorber {
    fn wa(&self, i: usize) -> Vec<u32> {
        self.embedding.map_tuple(&block(self.k, i, 1))
    }

    fn wb(&self, i: usize) -> Vec<u32> {
        self.embedding.map_tuple(&block(self.k, i, self.k + 1))
    }

    pub fn x(&self) -> u32 {
        self.embedding.image(0)
    }

    pub fn a(&self) -> Vec<u32> {
        self.wa(1)
    }

    pub fn b(&self) -> Vec<u32> {
        self.wb(self.ell)
    }

    pub fn vertices(&self) -> Vec<u32> {
        let mut v = self.embedding.images().to_vec();
        v.extend(self.connectors.iter().flatten());
        v
    }

    /// Checks the backbone embedding, every connector and vertex-disjointness.
    pub fn check(&self, g: &Hypergraph, connector_len: usize) -> Result<()> {
        let backbone = backbone_graph(self.k, self.ell, self.mode)?;
        if !is_embedding(&backbone.template, g, &self.embedding)? {
            return Err(Error::pre("backbone copy is not embedded"));
        }
        if self.connectors.len() != self.ell - 1 {
            return Err(Error::pre("wrong number of connectors"));
        }
        let template = connector_template(self.mode, self.k, connector_len)?;
        for (j, u) in self.connectors.iter().enumerate() {
            let path = cat(&[&self.wb(j + 1), u, &self.wa(j + 2)]);
            if !is_embedding(&template, g, &Embedding::new(path))? {
                return Err(Error::pre(format!("connector {} is not embedded", j + 1)));
            }
        }
        let all = self.vertices();
        if VertexSet::from_iter(g.vertex_count(), all.iter().copied()).len() != all.len() {
            return Err(Error::pre("absorber parts overlap"));
        }
        Ok(())
    }
}

/// Vertex order of the path through a single absorber; it visits `x` iff `include_x`.
pub fn absorb_single(a: &SingleVertexAbsorber, include_x: bool) -> Vec<u32> {
    let ell = a.ell;
    let mut out = a.wa(1);
    if include_x {
        out.push(a.x());
        out.extend(a.wb(1));
        for i in 1..ell {
            out.extend(&a.connectors[i - 1]);
            out.extend(a.wa(i + 1));
            out.extend(a.wb(i + 1));
        }
    } else {
        for i in 1..ell {
            out.extend(rev(a.wa(i + 1)));
            out.extend(a.connectors[i - 1].iter().rev());
            out.extend(rev(a.wb(i)));
        }
        out.extend(a.wb(ell));
    }
    out
}

/// Absorbers `A_1..A_t` chained by connectors `Q_i` from `b_i` to `a_{i+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainAbsorber {
    pub k: usize,
    pub mode: Mode,
    pub connector_len: usize,
    pub parts: Vec<SingleVertexAbsorber>,
    /// Internal vertices of `Q_i`.
    pub links: Vec<Vec<u32>>,
}

impl ChainAbsorber {
    pub fn a(&self) -> Vec<u32> {
        self.parts[0].a()
    }

    pub fn b(&self) -> Vec<u32> {
        self.parts[self.parts.len() - 1].b()
    }

    /// The absorbable set `X`, one vertex per part.
    pub fn absorbable(&self) -> Vec<u32> {
        self.parts.iter().map(SingleVertexAbsorber::x).collect()
    }

    pub fn vertices(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.parts.iter().flat_map(SingleVertexAbsorber::vertices).collect();
        v.extend(self.links.iter().flatten());
        v
    }

    pub fn vertex_count(&self) -> usize {
        self.parts.iter().map(|p| p.embedding.len() + p.connectors.iter().map(Vec::len).sum::<usize>()).sum::<usize>()
            + self.links.iter().map(Vec::len).sum::<usize>()
    }

    /// Structural check of every component against `g`.
    pub fn check(&self, g: &Hypergraph) -> Result<()> {
        for p in &self.parts {
            p.check(g, self.connector_len)?;
        }
        let template = connector_template(self.mode, self.k, self.connector_len)?;
        for (i, q) in self.links.iter().enumerate() {
            let path = cat(&[&self.parts[i].b(), q, &self.parts[i + 1].a()]);
            if !is_embedding(&template, g, &Embedding::new(path))? {
                return Err(Error::pre(format!("chain connector {} is not embedded", i + 1)));
            }
        }
        let all = self.vertices();
        if VertexSet::from_iter(g.vertex_count(), all.iter().copied()).len() != all.len() {
            return Err(Error::pre("chain components overlap"));
        }
        Ok(())
    }
}

/// Path from `a` to `b` through exactly `V(A) \ X'`.
pub fn absorb(a: &ChainAbsorber, x_prime: &[u32]) -> Result<Vec<u32>> {
    let xs = a.absorbable();
    if let Some(v) = x_prime.iter().find(|v| !xs.contains(v)) {
        return Err(Error::invalid(format!("vertex {v} is not absorbable")));
    }
    let mut out = Vec::with_capacity(a.vertex_count());
    for (i, part) in a.parts.iter().enumerate() {
        out.extend(absorb_single(part, !x_prime.contains(&part.x())));
        if let Some(q) = a.links.get(i) {
            out.extend(q);
        }
    }
    Ok(out)
}

/// Construction knobs for a chain absorber.
#[derive(Debug, Clone, Copy)]
pub struct AbsorberConfig {
    pub backbone_len: usize,
    pub connector_len: usize,
    /// Number of single-vertex absorbers, i.e. `|X|`.
    pub count: usize,
    pub rounds: usize,
    pub connect: ConnectOptions,
    pub factor_budget: Option<u64>,
}

/// Residue classes `v mod 3` of the vertex set.
pub fn equipartition(n: usize) -> [Vec<u32>; 3] {
    let mut parts: [Vec<u32>; 3] = Default::default();
    for v in 0..n as u32 {
        parts[(v % 3) as usize].push(v);
    }
    parts
}

fn phase(phase: AbsorberPhase) -> impl FnOnce(Error) -> Error {
    move |e| Error::AbsorberFailed { phase, source: Box::new(e) }
}

/// Backbone copies in `W_1`, their connectors through `W_2`, chain connectors through `W_3`.
pub fn build_chain_absorber(g1: &Hypergraph, k: usize, mode: Mode, cfg: &AbsorberConfig) -> Result<ChainAbsorber> {
    let expected = mode.host_uniformity(k);
    if g1.uniformity() != expected {
        return Err(Error::UniformityMismatch { expected, found: g1.uniformity() });
    }
    let n = g1.vertex_count();
    let t = cfg.count;
    if t == 0 {
        return Err(Error::pre("the absorbable set would be empty"));
    }
    let backbone = backbone_template(k, cfg.backbone_len, mode)?;
    let size = chain_absorber_size(k, cfg.backbone_len, cfg.connector_len, t);
    if 2 * size > n {
        return Err(Error::pre(format!("absorber on {size} vertices exceeds n/2 for n = {n}")));
    }
    let [w1, w2, w3] = equipartition(n);

    let copies = disjoint_copies(g1, &backbone.template, &w1, t, cfg.factor_budget)?;
    if copies.len() < t {
        return Err(phase(AbsorberPhase::Factor)(Error::FactorFailed { found: copies.len(), quota: t }));
    }
    let ell = cfg.backbone_len;
    let backbone = &backbone;
    let intra: Vec<(VertexTuple, VertexTuple)> = copies
        .iter()
        .flat_map(|c| {
            (1..ell).map(move |j| {
                (
                    VertexTuple::from_vec_unchecked(c.map_tuple(&backbone.wb(j))),
                    VertexTuple::from_vec_unchecked(c.map_tuple(&backbone.wa(j + 1))),
                )
            })
        })
        .collect();
    let intra_paths = connect_paths(g1, &intra, &w2, k, cfg.connector_len, mode, cfg.rounds, &cfg.connect)
        .map_err(phase(AbsorberPhase::IntraConnect))?;
    let inner = |p: &Embedding| p.images()[k..p.len() - k].to_vec();
    let mut parts = Vec::with_capacity(t);
    let mut it = intra_paths.iter();
    for c in copies {
        let connectors = (1..ell).map(|_| inner(it.next().unwrap())).collect();
        parts.push(SingleVertexAbsorber { k, ell, mode, embedding: c, connectors });
    }
    let chain: Vec<(VertexTuple, VertexTuple)> = parts
        .windows(2)
        .map(|w| (VertexTuple::from_vec_unchecked(w[0].b()), VertexTuple::from_vec_unchecked(w[1].a())))
        .collect();
    let links = connect_paths(g1, &chain, &w3, k, cfg.connector_len, mode, cfg.rounds, &cfg.connect)
        .map_err(phase(AbsorberPhase::ChainConnect))?
        .iter()
        .map(inner)
        .collect();
    let absorber = ChainAbsorber { k, mode, connector_len: cfg.connector_len, parts, links };
    debug_assert!(absorber.check(g1).is_ok());
    Ok(absorber)
}

/// A chain absorber laid out on fresh vertices `0..N`, together with the host
/// consisting of exactly its edges. Useful for exhaustive soundness checks.
pub fn fresh_chain_absorber(
    k: usize,
    ell: usize,
    mode: Mode,
    t: usize,
    connector_len: usize,
) -> Result<(Hypergraph, ChainAbsorber)> {
    let backbone = backbone_template(k, ell, mode)?;
    let conn = connector_template(mode, k, connector_len)?;
    let c = connector_internal(k, connector_len);
    let mut next = 0u32;
    let mut fresh = |m: usize| {
        let v: Vec<u32> = (next..next + m as u32).collect();
        next += m as u32;
        v
    };
    let mut parts = Vec::with_capacity(t);
    for _ in 0..t {
        let embedding = Embedding::new(fresh(backbone.vertex_count()));
        let connectors = (1..ell).map(|_| fresh(c)).collect();
        parts.push(SingleVertexAbsorber { k, ell, mode, embedding, connectors });
    }
    let links: Vec<Vec<u32>> = (1..t).map(|_| fresh(c)).collect();
    let n = next as usize;
    let mut rows: Vec<Vec<u32>> = Vec::new();
    let mut add = |template: &Hypergraph, f: &[u32]| {
        for e in template.edges() {
            let mut r: Vec<u32> = e.iter().map(|&v| f[v as usize]).collect();
            r.sort_unstable();
            rows.push(r);
        }
    };
    for p in &parts {
        add(&backbone.template, p.embedding.images());
        for (j, u) in p.connectors.iter().enumerate() {
            add(&conn, &cat(&[&p.wb(j + 1), u, &p.wa(j + 2)]));
        }
    }
    for (i, q) in links.iter().enumerate() {
        add(&conn, &cat(&[&parts[i].b(), q, &parts[i + 1].a()]));
    }
    let host = Hypergraph::from_sorted_edges(mode.host_uniformity(k), n, rows);
    Ok((host, ChainAbsorber { k, mode, connector_len, parts, links }))
}

/// True when `order` is a `k`-path (tight path) of `g` from `a` to `b`.
pub fn is_path_between(g: &Hypergraph, order: &[u32], a: &[u32], b: &[u32], mode: Mode, k: usize) -> bool {
    order.len() >= a.len().max(b.len()) && order.starts_with(a) && order.ends_with(b) && is_k_path(g, order, mode, k)
}
