//! Covering a vertex set by transversal paths, one bipartite perfect matching per step.

use std::fmt;
use std::str::FromStr;

use crate::bipartite::{maximum_matching, perfect_matching};
use crate::embedding::VertexSet;
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::random::BipartiteGraph;
use crate::templates::Mode;

/// How the parts `U_1..U_t` are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoverStrategy {
    /// Consecutive chunks fixed up front; one perfect matching per step.
    Fixed,
    /// Each part is whatever a left-saturating matching into all remaining
    /// vertices picks, preferring vertices of low remaining degree.
    Adaptive,
}

impl fmt::Display for CoverStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CoverStrategy::Fixed => "fixed",
            CoverStrategy::Adaptive => "adaptive",
        })
    }
}

impl FromStr for CoverStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fixed" => Ok(CoverStrategy::Fixed),
            "adaptive" => Ok(CoverStrategy::Adaptive),
            _ => Err(Error::Parse(format!("unknown cover strategy {s:?}"))),
        }
    }
}

/// Vertex-disjoint paths `Q_1..Q_s`, each meeting every part `U_1..U_t` exactly once,
/// in part order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverFamily {
    pub k: usize,
    pub parts: Vec<Vec<u32>>,
    pub paths: Vec<Vec<u32>>,
}

impl CoverFamily {
    /// `a_i`: the first `k` vertices of `Q_i`.
    pub fn start(&self, i: usize) -> &[u32] {
        &self.paths[i][..self.k]
    }

    /// `b_i`: the last `k` vertices of `Q_i`.
    pub fn end(&self, i: usize) -> &[u32] {
        let p = &self.paths[i];
        &p[p.len() - self.k..]
    }

    pub fn is_transversal(&self) -> bool {
        self.paths.iter().all(|q| {
            q.len() == self.parts.len() && q.iter().zip(&self.parts).all(|(v, part)| part.binary_search(v).is_ok())
        })
    }
}

/// Splits `vertices` (sorted) into `t` consecutive chunks of equal size.
pub fn equitable_parts(vertices: &[u32], t: usize) -> Result<Vec<Vec<u32>>> {
    if t == 0 || !vertices.len().is_multiple_of(t) {
        return Err(Error::invalid(format!("{} vertices do not split into {t} equal parts", vertices.len())));
    }
    let s = vertices.len() / t;
    if s == 0 {
        return Ok(vec![Vec::new(); t]);
    }
    let mut sorted = vertices.to_vec();
    sorted.sort_unstable();
    Ok(sorted.chunks(s).map(<[u32]>::to_vec).collect())
}

fn may_extend(g: &Hypergraph, path: &[u32], u: u32, k: usize, mode: Mode, window: &mut Vec<u32>) -> bool {
    match mode {
        Mode::Power => path[path.len().saturating_sub(k)..].iter().all(|&v| g.has_pair(v, u)),
        Mode::Tight => {
            if path.len() < k {
                return true;
            }
            window.clear();
            window.extend_from_slice(&path[path.len() - k..]);
            window.push(u);
            g.contains_edge(window)
        }
    }
}

fn cover_vertices(g2: &Hypergraph, u: &[u32], u_x: &[u32], k: usize, mode: Mode) -> Result<Vec<u32>> {
    let expected = mode.host_uniformity(k);
    if g2.uniformity() != expected {
        return Err(Error::UniformityMismatch { expected, found: g2.uniformity() });
    }
    let mut all = u.to_vec();
    all.extend_from_slice(u_x);
    all.sort_unstable();
    if all.windows(2).any(|w| w[0] == w[1]) || all.last().is_some_and(|&v| v as usize >= g2.vertex_count()) {
        return Err(Error::invalid("cover vertices repeat or fall outside the host"));
    }
    Ok(all)
}

/// Extends one-vertex paths in `U_1` part by part; step `j + 1` matches the
/// current paths to `U_{j+1}` using only edges between `U_{j+1}` and the last
/// `k` parts.
pub fn cover_with_paths(
    g2: &Hypergraph,
    u: &[u32],
    u_x: &[u32],
    t: usize,
    k: usize,
    mode: Mode,
) -> Result<CoverFamily> {
    let all = cover_vertices(g2, u, u_x, k, mode)?;
    let parts = equitable_parts(&all, t)?;
    if all.is_empty() {
        return Err(Error::invalid("nothing to cover"));
    }
    let s = parts[0].len();
    let mut paths: Vec<Vec<u32>> = parts[0].iter().map(|&v| vec![v]).collect();
    let mut window = Vec::with_capacity(k + 1);
    for (j, next) in parts.iter().enumerate().skip(1) {
        let mut edges = Vec::new();
        for (i, q) in paths.iter().enumerate() {
            for (r, &v) in next.iter().enumerate() {
                if may_extend(g2, q, v, k, mode, &mut window) {
                    edges.push((i as u32, r as u32));
                }
            }
        }
        let b = BipartiteGraph::new(s, s, edges)?;
        let m = perfect_matching(&b)?.ok_or(Error::CoverFailed { step: j + 1 })?;
        for (q, r) in paths.iter_mut().zip(m) {
            q.push(next[r as usize]);
        }
    }
    let family = CoverFamily { k, parts, paths };
    debug_assert!(family.is_transversal());
    Ok(family)
}

/// Same contract as [`cover_with_paths`], but the parts are not fixed in
/// advance. At every step the paths are matched into all vertices not yet
/// used, scanning candidates by ascending degree inside the unused set so
/// that poorly connected vertices are placed while there is still choice.
/// The chosen vertices become the next part.
pub fn cover_adaptive(g2: &Hypergraph, u: &[u32], u_x: &[u32], t: usize, k: usize, mode: Mode) -> Result<CoverFamily> {
    let all = cover_vertices(g2, u, u_x, k, mode)?;
    if t == 0 || all.len() % t != 0 {
        return Err(Error::invalid(format!("{} vertices do not split into {t} equal parts", all.len())));
    }
    if all.is_empty() {
        return Err(Error::invalid("nothing to cover"));
    }
    let n = g2.vertex_count();
    let s = all.len() / t;
    let mut left = VertexSet::from_iter(n, all.iter().copied());
    let mut degree = vec![0usize; n];
    for &v in &all {
        degree[v as usize] = match mode {
            Mode::Power => g2.neighbors(v).iter().filter(|&&w| left.contains(w)).count(),
            Mode::Tight => g2.degree(v),
        };
    }
    let take = |chosen: &[u32], left: &mut VertexSet, degree: &mut [usize]| {
        for &v in chosen {
            left.remove(v);
        }
        if mode == Mode::Power {
            for &v in chosen {
                for &w in g2.neighbors(v) {
                    if left.contains(w) {
                        degree[w as usize] -= 1;
                    }
                }
            }
        }
    };
    let ranked = |left: &VertexSet, degree: &[usize]| {
        let mut r = left.to_vec();
        r.sort_by_key(|&v| (degree[v as usize], v));
        r
    };
    let first: Vec<u32> = ranked(&left, &degree)[..s].to_vec();
    take(&first, &mut left, &mut degree);
    let mut paths: Vec<Vec<u32>> = first.iter().map(|&v| vec![v]).collect();
    let mut parts = vec![sorted(first)];
    let mut window = Vec::with_capacity(k + 1);
    for step in 2..=t {
        let candidates = ranked(&left, &degree);
        let adj: Vec<Vec<u32>> = paths
            .iter()
            .map(|q| {
                (0..candidates.len() as u32)
                    .filter(|&r| may_extend(g2, q, candidates[r as usize], k, mode, &mut window))
                    .collect()
            })
            .collect();
        let m = maximum_matching(&BipartiteGraph::from_adjacency(candidates.len(), adj));
        let picks: Vec<u32> = m
            .into_iter()
            .map(|r| r.map(|r| candidates[r as usize]))
            .collect::<Option<_>>()
            .ok_or(Error::CoverFailed { step })?;
        for (q, &v) in paths.iter_mut().zip(&picks) {
            q.push(v);
        }
        take(&picks, &mut left, &mut degree);
        parts.push(sorted(picks));
    }
    let family = CoverFamily { k, parts, paths };
    debug_assert!(family.is_transversal());
    Ok(family)
}

fn sorted(mut v: Vec<u32>) -> Vec<u32> {
    v.sort_unstable();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificate::is_k_path;

    #[test]
    fn single_part() {
        let g = Hypergraph::empty(2, 6);
        let c = cover_with_paths(&g, &[1, 3, 5], &[], 1, 2, Mode::Power).unwrap();
        assert_eq!(c.paths, vec![vec![1], vec![3], vec![5]]);
    }

    #[test]
    fn complete_hosts() {
        for mode in [Mode::Power, Mode::Tight] {
            for k in 1..=3 {
                let g = Hypergraph::complete(mode.host_uniformity(k), 40);
                let u: Vec<u32> = (0..30).collect();
                let c = cover_with_paths(&g, &u, &[35, 36], 8, k, mode).unwrap();
                assert_eq!(c.paths.len(), 4);
                assert!(c.is_transversal());
                for q in &c.paths {
                    assert!(is_k_path(&g, q, mode, k));
                }
            }
        }
    }

    #[test]
    fn adaptive_on_complete_hosts() {
        for mode in [Mode::Power, Mode::Tight] {
            for k in 1..=3 {
                let g = Hypergraph::complete(mode.host_uniformity(k), 40);
                let u: Vec<u32> = (0..30).collect();
                let c = cover_adaptive(&g, &u, &[35, 36], 8, k, mode).unwrap();
                assert_eq!(c.paths.len(), 4);
                assert!(c.is_transversal());
                assert!(c.paths.iter().all(|q| is_k_path(&g, q, mode, k)));
            }
        }
    }

    #[test]
    fn adaptive_failures() {
        let h = Hypergraph::new(2, 4, [[0, 2], [1, 3]]).unwrap();
        let c = cover_adaptive(&h, &[0, 1, 2, 3], &[], 2, 1, Mode::Power).unwrap();
        assert!(c.paths.iter().all(|q| h.has_pair(q[0], q[1])));
        let empty = Hypergraph::empty(2, 4);
        assert!(matches!(
            cover_adaptive(&empty, &[0, 1, 2, 3], &[], 2, 1, Mode::Power),
            Err(Error::CoverFailed { step: 2 })
        ));
        assert!(cover_adaptive(&h, &[0, 1, 2], &[], 2, 1, Mode::Power).is_err());
        assert!(cover_adaptive(&h, &[], &[], 2, 1, Mode::Power).is_err());
    }

    #[test]
    fn failures() {
        let g = Hypergraph::empty(2, 10);
        assert!(matches!(
            cover_with_paths(&g, &[0, 1, 2, 3], &[], 2, 1, Mode::Power),
            Err(Error::CoverFailed { step: 2 })
        ));
        assert!(cover_with_paths(&g, &[0, 1, 2], &[], 2, 1, Mode::Power).is_err());
        assert!(matches!(cover_with_paths(&g, &[0, 1], &[], 2, 2, Mode::Tight), Err(Error::UniformityMismatch { .. })));
        assert!(cover_with_paths(&g, &[0, 1], &[1], 1, 1, Mode::Power).is_err());
    }
}
