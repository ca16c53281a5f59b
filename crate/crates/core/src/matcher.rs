//! Rooted copy search and the round-based greedy connecting algorithm.

use crate::certificate::is_k_path;
use crate::density::RootedTemplate;
use crate::embedding::{Embedding, VertexSet, VertexTuple};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::templates::{connector_root, connector_template, Mode};

/// Result of a budgeted search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(Embedding),
    NotFound,
    BudgetExhausted,
}

/// Static search plan for a rooted template: the order in which template
/// vertices are placed and the edges each placement must close.
#[derive(Debug, Clone)]
pub struct SearchPlan {
    rt: RootedTemplate,
    // internal template vertices in placement order
    order: Vec<u32>,
    // for order[i]: edges (as template vertex lists) whose other vertices are placed earlier
    closing: Vec<Vec<Vec<u32>>>,
    // edges inside the root
    root_edges: Vec<Vec<u32>>,
}

impl SearchPlan {
    pub fn new(rt: &RootedTemplate) -> Self {
        let f = &rt.template;
        let v = f.vertex_count();
        let mut placed = vec![false; v];
        for &x in rt.root.iter() {
            placed[x as usize] = true;
        }
        let root_edges: Vec<Vec<u32>> =
            f.edges().filter(|e| e.iter().all(|&u| placed[u as usize])).map(|e| e.to_vec()).collect();
        let mut order = Vec::new();
        let mut closing = Vec::new();
        let mut remaining = rt.internal_vertices();
        while !remaining.is_empty() {
            // most closed edges, then most edges touching placed vertices, then smallest id
            let mut best: Option<(usize, usize, usize)> = None;
            for (idx, &u) in remaining.iter().enumerate() {
                let mut closes = 0;
                let mut touches = 0;
                f.for_each_incident(u, |e| {
                    let others_placed = e.iter().filter(|&&w| w != u).all(|&w| placed[w as usize]);
                    let any_placed = e.iter().any(|&w| w != u && placed[w as usize]);
                    closes += others_placed as usize;
                    touches += any_placed as usize;
                });
                let better = match best {
                    None => true,
                    Some((c, t, _)) => (closes, touches) > (c, t),
                };
                if better {
                    best = Some((closes, touches, idx));
                }
            }
            let u = remaining.remove(best.unwrap().2);
            let mut closes = Vec::new();
            f.for_each_incident(u, |e| {
                if e.iter().filter(|&&w| w != u).all(|&w| placed[w as usize]) {
                    closes.push(e.to_vec());
                }
            });
            placed[u as usize] = true;
            order.push(u);
            closing.push(closes);
        }
        SearchPlan { rt: rt.clone(), order, closing, root_edges }
    }

    pub fn template(&self) -> &RootedTemplate {
        &self.rt
    }

    /// Placement order of the internal vertices.
    pub fn order(&self) -> &[u32] {
        &self.order
    }
}

struct Search<'a> {
    g: &'a Hypergraph,
    plan: &'a SearchPlan,
    allowed: &'a VertexSet,
    allowed_len: usize,
    images: Vec<u32>,
    nodes: u64,
    budget: u64,
    buf: Vec<u32>,
}

const UNSET: u32 = u32::MAX;

impl Search<'_> {
    fn closes_all(&mut self, depth: usize, w: u32) -> bool {
        let u = self.plan.order[depth];
        for e in &self.plan.closing[depth] {
            self.buf.clear();
            self.buf.extend(e.iter().map(|&t| if t == u { w } else { self.images[t as usize] }));
            if !self.g.contains_edge(&self.buf) {
                return false;
            }
        }
        true
    }

    fn is_used(&self, w: u32) -> bool {
        self.images.contains(&w)
    }

    /// Ascending candidate list for the vertex at `depth`, already satisfying every closing edge.
    fn candidates(&mut self, depth: usize) -> Vec<u32> {
        let u = self.plan.order[depth];
        let closing = &self.plan.closing[depth];
        let mut out = Vec::new();
        if closing.is_empty() {
            out.extend(self.allowed.iter().filter(|&w| !self.images.contains(&w)));
            return out;
        }
        // pivot: the placed image of smallest host degree over all closing edges
        let mut pivot = UNSET;
        let mut pivot_edge = 0;
        for (i, e) in closing.iter().enumerate() {
            for &t in e {
                if t != u {
                    let img = self.images[t as usize];
                    if pivot == UNSET || self.g.degree(img) < self.g.degree(pivot) {
                        pivot = img;
                        pivot_edge = i;
                    }
                }
            }
        }
        if self.allowed_len <= self.g.degree(pivot) {
            let pool: Vec<u32> = self.allowed.iter().collect();
            for w in pool {
                if !self.is_used(w) && self.closes_all(depth, w) {
                    out.push(w);
                }
            }
            return out;
        }
        if self.g.is_graph() {
            for &w in self.g.neighbors(pivot) {
                if self.allowed.contains(w) && !self.is_used(w) {
                    out.push(w);
                }
            }
        } else {
            let others: Vec<u32> =
                closing[pivot_edge].iter().filter(|&&t| t != u).map(|&t| self.images[t as usize]).collect();
            for &id in self.g.incident_edge_ids(pivot) {
                let e = self.g.edge(id as usize);
                if others.iter().all(|o| e.contains(o)) {
                    if let Some(&w) = e.iter().find(|w| !others.contains(w)) {
                        if self.allowed.contains(w) && !self.is_used(w) {
                            out.push(w);
                        }
                    }
                }
            }
            out.sort_unstable();
            out.dedup();
        }
        out.retain(|&w| {
            // re-check every closing edge (the pivot edge is already satisfied)
            let u = self.plan.order[depth];
            self.plan.closing[depth].iter().all(|e| {
                let img: Vec<u32> = e.iter().map(|&t| if t == u { w } else { self.images[t as usize] }).collect();
                self.g.contains_edge(&img)
            })
        });
        out
    }

    fn dfs(&mut self, depth: usize) -> Option<bool> {
        if depth == self.plan.order.len() {
            return Some(true);
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return None;
        }
        let u = self.plan.order[depth] as usize;
        for w in self.candidates(depth) {
            self.images[u] = w;
            match self.dfs(depth + 1) {
                Some(true) => return Some(true),
                Some(false) => {}
                None => {
                    self.images[u] = UNSET;
                    return None;
                }
            }
        }
        self.images[u] = UNSET;
        Some(false)
    }
}

fn check_root_image(g: &Hypergraph, rt: &RootedTemplate, y: &[u32], allowed: &VertexSet) -> Result<()> {
    if g.uniformity() != rt.template.uniformity() {
        return Err(Error::UniformityMismatch { expected: g.uniformity(), found: rt.template.uniformity() });
    }
    if y.len() != rt.root.len() {
        return Err(Error::invalid(format!("root image has {} vertices, root has {}", y.len(), rt.root.len())));
    }
    VertexTuple::new(y.to_vec())?;
    if let Some(&v) = y.iter().find(|&&v| v as usize >= g.vertex_count()) {
        return Err(Error::invalid(format!("root image vertex {v} out of range")));
    }
    if y.iter().any(|&v| allowed.contains(v)) {
        return Err(Error::pre("root image meets the allowed set"));
    }
    Ok(())
}

/// Budgeted rooted copy search with a precomputed plan. The budget counts search nodes.
pub fn find_rooted_copy_with_plan(
    g: &Hypergraph,
    plan: &SearchPlan,
    y: &[u32],
    allowed: &VertexSet,
    budget: Option<u64>,
) -> Result<SearchOutcome> {
    let rt = &plan.rt;
    check_root_image(g, rt, y, allowed)?;
    let mut images = vec![UNSET; rt.template.vertex_count()];
    for (&x, &w) in rt.root.iter().zip(y) {
        images[x as usize] = w;
    }
    for e in &plan.root_edges {
        let img: Vec<u32> = e.iter().map(|&t| images[t as usize]).collect();
        if !g.contains_edge(&img) {
            return Ok(SearchOutcome::NotFound);
        }
    }
    let mut s = Search {
        g,
        plan,
        allowed,
        allowed_len: allowed.len(),
        images,
        nodes: 0,
        budget: budget.unwrap_or(u64::MAX),
        buf: Vec::with_capacity(g.uniformity()),
    };
    Ok(match s.dfs(0) {
        Some(true) => SearchOutcome::Found(Embedding::new(s.images)),
        Some(false) => SearchOutcome::NotFound,
        None => SearchOutcome::BudgetExhausted,
    })
}

/// Complete search for a copy of `rt.template` sending the root onto `y` with
/// every other vertex in `allowed`. Returns the first assignment in search order.
pub fn find_rooted_copy(
    g: &Hypergraph,
    rt: &RootedTemplate,
    y: &[u32],
    allowed: &VertexSet,
) -> Result<Option<Embedding>> {
    let plan = SearchPlan::new(rt);
    Ok(match find_rooted_copy_with_plan(g, &plan, y, allowed, None)? {
        SearchOutcome::Found(f) => Some(f),
        _ => None,
    })
}

/// Splits `w` (ascending) into consecutive blocks of sizes
/// `floor(max(|W| / 2^{i+1}, |W| / (2 rounds)))`, `i = 1..=rounds`.
pub fn partition_reservoir(w: &[u32], rounds: usize) -> Result<Vec<Vec<u32>>> {
    if w.is_empty() {
        return Err(Error::invalid("empty reservoir"));
    }
    if rounds == 0 {
        return Err(Error::invalid("at least one round is needed"));
    }
    let size = w.len() as f64;
    let sizes: Vec<usize> = (1..=rounds)
        .map(|i| {
            let halving = if i + 1 < 64 { size / (1u64 << (i + 1)) as f64 } else { 0.0 };
            halving.max(size / (2.0 * rounds as f64)).floor() as usize
        })
        .collect();
    let total: usize = sizes.iter().sum();
    if total > w.len() {
        return Err(Error::invalid(format!("round sizes total {total} exceed |W| = {}", w.len())));
    }
    let mut sorted = w.to_vec();
    sorted.sort_unstable();
    let mut out = Vec::with_capacity(rounds);
    let mut at = 0;
    for s in sizes {
        out.push(sorted[at..at + s].to_vec());
        at += s;
    }
    Ok(out)
}

/// Default number of rounds: `ceil(log2 n)`, at least one.
pub fn default_rounds(n: usize) -> usize {
    (n.max(2) as f64).log2().ceil().max(1.0) as usize
}

/// Which size hypothesis `connect_family` enforces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hypothesis {
    /// `t (v(F) - r) <= |W| / 4`, or `t <= |W| / (4 ℓ)` for paths.
    Strict,
    /// Only `t (v(F) - r) <= |W|`.
    Relaxed,
}

#[derive(Debug, Clone, Copy)]
pub struct ConnectOptions {
    pub hypothesis: Hypothesis,
    /// After the regular rounds, one more sweep over every unused reservoir vertex.
    pub sweep: bool,
    /// Search node budget per copy; exhausted searches count as failures.
    pub node_budget: Option<u64>,
}

impl Default for ConnectOptions {
    fn default() -> Self {
        ConnectOptions { hypothesis: Hypothesis::Strict, sweep: false, node_budget: None }
    }
}

impl ConnectOptions {
    pub fn relaxed(node_budget: Option<u64>) -> Self {
        ConnectOptions { hypothesis: Hypothesis::Relaxed, sweep: true, node_budget }
    }
}

#[derive(Debug, Clone)]
pub struct ConnectionRequest {
    pub template: RootedTemplate,
    pub family: Vec<VertexTuple>,
    pub reservoir: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedMatching {
    pub copies: Vec<Embedding>,
    /// Number of unmatched requests after each round (including the sweep).
    pub residuals: Vec<usize>,
}

/// Diagnostic report for an incomplete matching.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectFailure {
    pub requested: usize,
    pub unmatched: Vec<usize>,
    pub residuals: Vec<usize>,
    pub reservoirs: Vec<Vec<u32>>,
    pub partial: Vec<Option<Embedding>>,
}

fn validate_request(g: &Hypergraph, req: &ConnectionRequest) -> Result<VertexSet> {
    let n = g.vertex_count();
    let r = req.template.root.len();
    let mut seen = VertexSet::new(n);
    for y in &req.family {
        if y.len() != r {
            return Err(Error::invalid(format!("tuple of length {} for a root of length {r}", y.len())));
        }
        for &v in y.iter() {
            if v as usize >= n || seen.contains(v) {
                return Err(Error::invalid(format!("vertex {v} repeated across tuples or out of range")));
            }
            seen.insert(v);
        }
    }
    let mut w = VertexSet::new(n);
    for &v in &req.reservoir {
        if v as usize >= n || w.contains(v) {
            return Err(Error::invalid(format!("reservoir vertex {v} repeated or out of range")));
        }
        if seen.contains(v) {
            return Err(Error::invalid(format!("reservoir vertex {v} lies in a root tuple")));
        }
        w.insert(v);
    }
    Ok(w)
}

/// Greedy round-based `(F, x, Y)`-matching.
pub fn connect_family(
    g: &Hypergraph,
    req: &ConnectionRequest,
    rounds: usize,
    opts: &ConnectOptions,
) -> Result<RootedMatching> {
    let w_set = validate_request(g, req)?;
    let t = req.family.len();
    if t == 0 {
        return Ok(RootedMatching { copies: Vec::new(), residuals: Vec::new() });
    }
    let internal = req.template.template.vertex_count() - req.template.root.len();
    let need = t * internal;
    let ok = match opts.hypothesis {
        Hypothesis::Strict => 4 * need <= req.reservoir.len(),
        Hypothesis::Relaxed => need <= req.reservoir.len(),
    };
    if !ok {
        return Err(Error::pre(format!(
            "{t} copies with {internal} internal vertices do not fit a reservoir of {}",
            req.reservoir.len()
        )));
    }
    let plan = SearchPlan::new(&req.template);
    let mut reservoirs = partition_reservoir(&req.reservoir, rounds)?;
    let mut used = VertexSet::new(g.vertex_count());
    let mut found: Vec<Option<Embedding>> = vec![None; t];
    let mut unmatched: Vec<usize> = (0..t).collect();
    let mut residuals = Vec::new();
    if opts.sweep {
        reservoirs.push(req.reservoir.clone());
    }
    for wj in &reservoirs {
        let mut avail = VertexSet::from_iter(g.vertex_count(), wj.iter().copied());
        avail.difference_with(&used);
        let mut still = Vec::new();
        for &i in &unmatched {
            match find_rooted_copy_with_plan(g, &plan, &req.family[i], &avail, opts.node_budget)? {
                SearchOutcome::Found(f) => {
                    for &x in plan.order() {
                        let v = f.image(x as usize);
                        avail.remove(v);
                        used.insert(v);
                    }
                    found[i] = Some(f);
                }
                _ => still.push(i),
            }
        }
        debug_assert!(still.len() <= unmatched.len());
        unmatched = still;
        residuals.push(unmatched.len());
        if unmatched.is_empty() {
            break;
        }
    }
    debug_assert!(found.iter().flatten().all(|f| f
        .images()
        .iter()
        .all(|&v| w_set.contains(v) || req.template.root.iter().any(|&x| f.image(x as usize) == v))));
    if unmatched.is_empty() {
        Ok(RootedMatching { copies: found.into_iter().map(Option::unwrap).collect(), residuals })
    } else {
        Err(Error::ConnectionFailed(Box::new(ConnectFailure {
            requested: t,
            unmatched,
            residuals,
            reservoirs,
            partial: found,
        })))
    }
}

/// Host vertex sequence of a path embedding, in template order.
pub fn path_vertices(f: &Embedding) -> Vec<u32> {
    f.images().to_vec()
}

/// Vertex-disjoint connecting paths from `a_i` to `b_i` with internal vertices in `w`.
/// Each returned embedding lists the path `a_i, internal…, b_i`.
#[allow(clippy::too_many_arguments)]
pub fn connect_paths(
    g: &Hypergraph,
    pairs: &[(VertexTuple, VertexTuple)],
    w: &[u32],
    k: usize,
    ell: usize,
    mode: Mode,
    rounds: usize,
    opts: &ConnectOptions,
) -> Result<Vec<Embedding>> {
    let expected = mode.host_uniformity(k);
    if g.uniformity() != expected {
        return Err(Error::UniformityMismatch { expected, found: g.uniformity() });
    }
    let template = connector_template(mode, k, ell)?;
    if pairs.is_empty() {
        return Ok(Vec::new());
    }
    if pairs.iter().any(|(a, b)| a.len() != k || b.len() != k) {
        return Err(Error::invalid(format!("endpoint tuples must have {k} vertices")));
    }
    if opts.hypothesis == Hypothesis::Strict && 4 * ell * pairs.len() > w.len() {
        return Err(Error::pre(format!("{} paths of length {ell} need |W| >= {}", pairs.len(), 4 * ell * pairs.len())));
    }
    let rt = RootedTemplate::new(template, connector_root(k, ell))?;
    let family: Vec<VertexTuple> = pairs
        .iter()
        .map(|(a, b)| VertexTuple::new(a.iter().chain(b.iter()).copied().collect()))
        .collect::<Result<_>>()?;
    let req = ConnectionRequest { template: rt, family, reservoir: w.to_vec() };
    let mut relaxed = *opts;
    // the per-path hypothesis above is the corollary's; the family-level one is implied
    if relaxed.hypothesis == Hypothesis::Strict {
        relaxed.hypothesis = Hypothesis::Relaxed;
    }
    let m = connect_family(g, &req, rounds, &relaxed)?;
    debug_assert!(m.copies.iter().all(|f| is_k_path(g, f.images(), mode, k) || mode == Mode::Power));
    Ok(m.copies)
}
