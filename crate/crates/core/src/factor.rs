//! Greedy almost-factors and window factors.
//!
//! Thresholds for when these succeed are the caller's business; the greedy
//! procedures themselves take no constants.

use crate::density::RootedTemplate;
use crate::embedding::{Embedding, VertexSet};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::matcher::{find_rooted_copy_with_plan, SearchOutcome, SearchPlan};

/// Disjoint copies of `f` covering all but fewer than `ceil(εn)` vertices.
///
/// While at least `εn` vertices remain, a copy is sought among the lowest
/// `ceil(εn)` remaining vertices; its vertices are then removed.
pub fn almost_factor(g: &Hypergraph, h: &Hypergraph, epsilon: f64) -> Result<Vec<Embedding>> {
    almost_factor_with_budget(g, h, epsilon, None)
}

pub fn almost_factor_with_budget(
    g: &Hypergraph,
    h: &Hypergraph,
    epsilon: f64,
    budget: Option<u64>,
) -> Result<Vec<Embedding>> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::invalid(format!("epsilon {epsilon} outside (0, 1)")));
    }
    if g.uniformity() != h.uniformity() {
        return Err(Error::UniformityMismatch { expected: g.uniformity(), found: h.uniformity() });
    }
    let n = g.vertex_count();
    let threshold = epsilon * n as f64;
    let window = threshold.ceil() as usize;
    if h.vertex_count() > window {
        return Err(Error::invalid(format!(
            "template on {} vertices cannot fit a window of {window}",
            h.vertex_count()
        )));
    }
    let plan = SearchPlan::new(&RootedTemplate::unrooted(h.clone()));
    let mut remaining: Vec<u32> = (0..n as u32).collect();
    let mut copies = Vec::new();
    while remaining.len() as f64 >= threshold && remaining.len() >= window {
        let allowed = VertexSet::from_iter(n, remaining[..window].iter().copied());
        match find_rooted_copy_with_plan(g, &plan, &[], &allowed, budget)? {
            SearchOutcome::Found(f) => {
                let used = VertexSet::from_iter(n, f.images().iter().copied());
                remaining.retain(|&v| !used.contains(v));
                copies.push(f);
            }
            _ => return Err(Error::WindowEmpty { window: copies.len() }),
        }
    }
    Ok(copies)
}

/// Up to `count` vertex-disjoint copies of `f` inside `w`, greedily in canonical order.
/// Returns whatever was found; the caller checks the count.
pub fn disjoint_copies(
    g: &Hypergraph,
    f: &Hypergraph,
    w: &[u32],
    count: usize,
    budget: Option<u64>,
) -> Result<Vec<Embedding>> {
    if g.uniformity() != f.uniformity() {
        return Err(Error::UniformityMismatch { expected: g.uniformity(), found: f.uniformity() });
    }
    let plan = SearchPlan::new(&RootedTemplate::unrooted(f.clone()));
    let mut allowed = VertexSet::from_iter(g.vertex_count(), w.iter().copied());
    let mut copies = Vec::new();
    while copies.len() < count && allowed.len() >= f.vertex_count() {
        match find_rooted_copy_with_plan(g, &plan, &[], &allowed, budget)? {
            SearchOutcome::Found(e) => {
                for &v in e.images() {
                    allowed.remove(v);
                }
                copies.push(e);
            }
            _ => break,
        }
    }
    Ok(copies)
}

/// At least `floor(|W| / (4 v(F)))` disjoint copies of `f` inside `w`.
pub fn factor_in_window(g: &Hypergraph, f: &Hypergraph, w: &[u32]) -> Result<Vec<Embedding>> {
    factor_in_window_with_budget(g, f, w, None)
}

pub fn factor_in_window_with_budget(
    g: &Hypergraph,
    f: &Hypergraph,
    w: &[u32],
    budget: Option<u64>,
) -> Result<Vec<Embedding>> {
    let v = f.vertex_count();
    if w.len() < 4 * v {
        return Err(Error::invalid(format!("window of {} is below 4 v(F) = {}", w.len(), 4 * v)));
    }
    let quota = w.len() / (4 * v);
    let copies = disjoint_copies(g, f, w, quota, budget)?;
    if copies.len() < quota {
        return Err(Error::FactorFailed { found: copies.len(), quota });
    }
    Ok(copies)
}
