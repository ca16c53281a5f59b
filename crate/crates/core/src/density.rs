//! Exact `m1` and rooted densities, plus degeneracy orderings.
//!
//! Densities are maxima over vertex subsets `S` of `e(F[S]) / (|S| - c)`.
//! Taking induced subgraphs loses nothing: dropping edges or adding isolated
//! vertices can only lower the ratio.

use std::collections::BTreeSet;

use num_rational::Ratio;

use crate::embedding::VertexTuple;
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

pub type Rational = Ratio<i64>;

/// Default cap on the number of free vertices for exact enumeration.
pub const DEFAULT_VERTEX_BUDGET: usize = 24;

/// Formats as `num/den`, including a denominator of one.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// A template together with a tuple of root vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedTemplate {
    pub template: Hypergraph,
    pub root: VertexTuple,
}

impl RootedTemplate {
    pub fn new(template: Hypergraph, root: Vec<u32>) -> Result<Self> {
        let root = VertexTuple::new(root)?;
        if let Some(&v) = root.iter().find(|&&v| v as usize >= template.vertex_count()) {
            return Err(Error::invalid(format!("root vertex {v} outside the template")));
        }
        Ok(RootedTemplate { template, root })
    }

    pub fn unrooted(template: Hypergraph) -> Self {
        RootedTemplate { template, root: VertexTuple::empty() }
    }

    /// True when no template edge lies inside the root set.
    pub fn is_independent(&self) -> bool {
        !self.template.edges().any(|e| e.iter().all(|v| self.root.contains(*v)))
    }

    /// Template vertices outside the root, ascending.
    pub fn internal_vertices(&self) -> Vec<u32> {
        (0..self.template.vertex_count() as u32).filter(|v| !self.root.contains(*v)).collect()
    }
}

/// Best ratio seen so far, compared exactly.
#[derive(Clone, Copy)]
struct Best {
    num: i64,
    den: i64,
}

impl Best {
    fn offer(&mut self, num: i64, den: i64) {
        if den > 0 && num > 0 && (self.den == 0 || num * self.den > self.num * den) {
            self.num = num;
            self.den = den;
        }
    }
}

/// Enumerates every `S = forced ∪ T` with `T ⊆ free`, calling `visit(e(S), |T|)`.
struct SubsetWalk<'a> {
    // edge masks keyed by the free vertex that completes them
    closing: Vec<Vec<u64>>,
    visit: &'a mut dyn FnMut(i64, i64),
}

impl SubsetWalk<'_> {
    fn run(f: &Hypergraph, forced: &[u32], free: &[u32], visit: &mut dyn FnMut(i64, i64)) {
        let mut pos = vec![usize::MAX; f.vertex_count()];
        for (i, &v) in forced.iter().chain(free).enumerate() {
            pos[v as usize] = i;
        }
        let mut closing = vec![Vec::new(); free.len()];
        let mut base = 0i64;
        for e in f.edges() {
            if e.iter().any(|&v| pos[v as usize] == usize::MAX) {
                continue;
            }
            let top = e.iter().map(|&v| pos[v as usize]).max().unwrap();
            if top < forced.len() {
                base += 1;
            } else {
                let mask = e.iter().fold(0u64, |m, &v| m | 1 << pos[v as usize]);
                closing[top - forced.len()].push(mask);
            }
        }
        let start = if forced.len() == 64 { u64::MAX } else { (1u64 << forced.len()) - 1 };
        let mut walk = SubsetWalk { closing, visit };
        walk.step(0, forced.len(), start, base, 0);
    }

    fn step(&mut self, i: usize, offset: usize, mask: u64, edges: i64, chosen: i64) {
        if i == self.closing.len() {
            (self.visit)(edges, chosen);
            return;
        }
        self.step(i + 1, offset, mask, edges, chosen);
        let with = mask | 1 << (offset + i);
        let gained = self.closing[i].iter().filter(|&&m| m & with == m).count() as i64;
        self.step(i + 1, offset, with, edges + gained, chosen + 1);
    }
}

fn check_enumerable(f: &Hypergraph, free: usize, budget: usize) -> Result<()> {
    if f.edge_count() == 0 {
        return Err(Error::Edgeless);
    }
    if f.vertex_count() > 64 || free > budget {
        let (d, _) = degeneracy(f);
        return Err(Error::BudgetExceeded(format!(
            "{free} free vertices exceed the budget of {budget}; degeneracy gives m1 <= {d}"
        )));
    }
    Ok(())
}

fn spanned(f: &Hypergraph) -> Vec<u32> {
    (0..f.vertex_count() as u32).filter(|&v| f.degree(v) > 0).collect()
}

/// `max e(H) / (v(H) - 1)` over subgraphs with at least one edge.
pub fn m1_density(f: &Hypergraph) -> Result<Rational> {
    m1_density_with_budget(f, DEFAULT_VERTEX_BUDGET)
}

pub fn m1_density_with_budget(f: &Hypergraph, budget: usize) -> Result<Rational> {
    let free = spanned(f);
    check_enumerable(f, free.len(), budget)?;
    let mut best = Best { num: 0, den: 0 };
    SubsetWalk::run(f, &[], &free, &mut |e, s| {
        if e > 0 {
            best.offer(e, s - 1);
        }
    });
    Ok(Rational::new(best.num, best.den))
}

/// Rooted density: the maximum of `e(F') / (v(F') - max(1, |V(F') ∩ X|))` over
/// subgraphs that contain the whole root or avoid it.
///
/// Roots spanning edges are accepted; subgraphs whose denominator vanishes are skipped.
pub fn m_density(rt: &RootedTemplate) -> Result<Rational> {
    m_density_with_budget(rt, DEFAULT_VERTEX_BUDGET)
}

pub fn m_density_with_budget(rt: &RootedTemplate, budget: usize) -> Result<Rational> {
    let f = &rt.template;
    if rt.root.is_empty() {
        return m1_density_with_budget(f, budget);
    }
    if f.vertex_count() <= rt.root.len() {
        return Err(Error::pre("template needs a vertex outside the root"));
    }
    let free = rt.internal_vertices();
    check_enumerable(f, free.len(), budget)?;
    let mut best = Best { num: 0, den: 0 };
    // subgraphs avoiding the root
    SubsetWalk::run(f, &[], &free, &mut |e, s| {
        if e > 0 {
            best.offer(e, s - 1);
        }
    });
    // subgraphs containing the root; the denominator is the number of added vertices
    SubsetWalk::run(f, rt.root.as_slice(), &free, &mut |e, s| {
        if e > 0 {
            best.offer(e, s);
        }
    });
    if best.den == 0 {
        return Err(Error::pre("every subgraph with edges has a vanishing denominator"));
    }
    Ok(Rational::new(best.num, best.den))
}

/// True iff every vertex closes at most `k` edges among its predecessors in `ordering`.
pub fn is_degenerate_ordering(f: &Hypergraph, ordering: &[u32], k: usize) -> Result<bool> {
    let pos = positions(f.vertex_count(), ordering)?;
    let mut closed = vec![0usize; f.vertex_count()];
    for e in f.edges() {
        let last = *e.iter().max_by_key(|&&v| pos[v as usize]).unwrap();
        closed[last as usize] += 1;
    }
    Ok(closed.iter().all(|&c| c <= k))
}

fn positions(n: usize, ordering: &[u32]) -> Result<Vec<usize>> {
    if ordering.len() != n {
        return Err(Error::NotPermutation(format!("{} entries for {n} vertices", ordering.len())));
    }
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in ordering.iter().enumerate() {
        match pos.get_mut(v as usize) {
            Some(p) if *p == usize::MAX => *p = i,
            _ => return Err(Error::NotPermutation(format!("bad or repeated vertex {v}"))),
        }
    }
    Ok(pos)
}

/// Degeneracy by min-degree peeling. Returns `d` and an ordering in which every
/// vertex closes at most `d` edges. Hence `m1(F) <= d`.
pub fn degeneracy(f: &Hypergraph) -> (usize, Vec<u32>) {
    let n = f.vertex_count();
    let mut deg: Vec<usize> = (0..n as u32).map(|v| f.degree(v)).collect();
    let mut alive_edge = vec![true; f.edge_count()];
    let mut removed = vec![false; n];
    let mut queue: BTreeSet<(usize, u32)> = (0..n as u32).map(|v| (deg[v as usize], v)).collect();
    let mut peel = Vec::with_capacity(n);
    let mut d = 0;
    // edge ids per vertex, built once for both graph and hypergraph hosts
    let mut incident = vec![Vec::new(); n];
    for (i, e) in f.edges().enumerate() {
        for &v in e {
            incident[v as usize].push(i);
        }
    }
    while let Some((dv, v)) = queue.pop_first() {
        d = d.max(dv);
        removed[v as usize] = true;
        peel.push(v);
        for &i in &incident[v as usize] {
            if !alive_edge[i] {
                continue;
            }
            alive_edge[i] = false;
            for &w in f.edge(i) {
                if w != v && !removed[w as usize] {
                    queue.remove(&(deg[w as usize], w));
                    deg[w as usize] -= 1;
                    queue.insert((deg[w as usize], w));
                }
            }
        }
    }
    peel.reverse();
    (d, peel)
}

/// The explicit ordering of the backbone vertices used to bound its density.
pub fn backbone_degeneracy_ordering(k: usize, ell: usize) -> Result<VertexTuple> {
    crate::absorber::backbone_ordering(k, ell)
}
