//! Janson parameters for families of lexicographic copies.
//!
//! A lexicographic copy of `H` on a vertex set `Q` maps the `i`-th template
//! vertex to the `i`-th smallest element of `Q`, so each `v(H)`-set carries
//! exactly one copy.

use rustc_hash::FxHashMap;

use crate::combinatorics::{binomial, for_each_combination, ln_binomial, log_sum_exp, RankTable};
use crate::density::{m1_density, m_density, RootedTemplate};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

/// Largest copy family the exact oracle will enumerate.
pub const EXACT_COPY_BUDGET: u128 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JansonParams {
    pub mu: f64,
    pub delta: f64,
    pub gamma: f64,
    pub bound: f64,
}

impl JansonParams {
    pub fn new(mu: f64, delta: f64, gamma: f64) -> Result<Self> {
        let mut p = JansonParams { mu, delta, gamma, bound: 1.0 };
        p.bound = lower_tail_bound(&p)?;
        Ok(p)
    }
}

/// `exp(-γ²μ² / (2(μ + δ)))`, or 1 when `μ = 0`.
pub fn lower_tail_bound(params: &JansonParams) -> Result<f64> {
    let JansonParams { mu, delta, gamma, .. } = *params;
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::invalid(format!("gamma {gamma} outside (0, 1)")));
    }
    if !(mu >= 0.0 && delta >= 0.0) {
        return Err(Error::invalid("mu and delta must be non-negative"));
    }
    if mu == 0.0 {
        return Ok(1.0);
    }
    Ok((-(gamma * gamma * mu * mu) / (2.0 * (mu + delta))).exp())
}

fn check_p(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid(format!("probability {p} outside [0, 1]")));
    }
    Ok(())
}

// ln(p^e), with 0^0 = 1
fn ln_pow(p: f64, e: f64) -> f64 {
    if e == 0.0 {
        0.0
    } else {
        e * p.ln()
    }
}

/// `μ = C(n, v(H)) p^{e(H)}`.
pub fn expected_lex_copies(n: usize, h: &Hypergraph, p: f64) -> Result<f64> {
    check_p(p)?;
    let v = h.vertex_count();
    if v > n {
        return Err(Error::invalid(format!("template has {v} vertices, host only {n}")));
    }
    Ok((ln_binomial(n as u64, v as u64) + ln_pow(p, h.edge_count() as f64)).exp())
}

/// `Σ_{j=k}^{v(H)-1} C(n,j) C(n-j, v(H)-j)² p^{2e(H) - (j-1) m1(H)}`.
pub fn delta_upper_bound(n: usize, h: &Hypergraph, p: f64) -> Result<f64> {
    check_p(p)?;
    let m1 = m1_density(h)?;
    let m1 = *m1.numer() as f64 / *m1.denom() as f64;
    let (v, e, k) = (h.vertex_count(), h.edge_count() as f64, h.uniformity());
    let terms: Vec<f64> = (k..v)
        .filter(|&j| j <= n && v - j <= n - j)
        .map(|j| {
            ln_binomial(n as u64, j as u64)
                + 2.0 * ln_binomial((n - j) as u64, (v - j) as u64)
                + ln_pow(p, 2.0 * e - (j as f64 - 1.0) * m1)
        })
        .collect();
    Ok(log_sum_exp(&terms).exp())
}

/// Copy family as edge-rank lists, one per copy.
fn copy_edge_ranks(copies: &[Vec<u32>], h: &Hypergraph, table: &RankTable) -> Vec<Vec<u64>> {
    let mut buf = Vec::with_capacity(h.uniformity());
    copies
        .iter()
        .map(|images| {
            let mut ranks: Vec<u64> = h
                .edges()
                .map(|e| {
                    buf.clear();
                    buf.extend(e.iter().map(|&v| images[v as usize]));
                    buf.sort_unstable();
                    table.rank(&buf)
                })
                .collect();
            ranks.sort_unstable();
            ranks
        })
        .collect()
}

/// `μ` and `δ` over an explicit family of copies, given by their vertex images.
fn family_mu_delta(n: usize, h: &Hypergraph, copies: &[Vec<u32>], p: f64) -> (f64, f64) {
    let table = RankTable::new(n, h.uniformity());
    let ranks = copy_edge_ranks(copies, h, &table);
    let e = h.edge_count() as i32;
    let mu = copies.len() as f64 * p.powi(e);
    let mut by_edge: FxHashMap<u64, Vec<u32>> = FxHashMap::default();
    for (i, r) in ranks.iter().enumerate() {
        for &x in r {
            by_edge.entry(x).or_default().push(i as u32);
        }
    }
    let mut delta = 0.0;
    let mut shared: FxHashMap<u32, i32> = FxHashMap::default();
    for (i, r) in ranks.iter().enumerate() {
        shared.clear();
        for x in r {
            for &j in &by_edge[x] {
                if j as usize != i {
                    *shared.entry(j).or_default() += 1;
                }
            }
        }
        let mut counts: Vec<i32> = shared.values().copied().collect();
        counts.sort_unstable();
        delta += counts.iter().map(|&c| p.powi(2 * e - c)).sum::<f64>();
    }
    (mu, delta)
}

/// Exact `μ` and `δ` (ordered pairs of distinct copies sharing an edge) by enumeration.
pub fn exact_mu_delta(n: usize, h: &Hypergraph, p: f64) -> Result<(f64, f64)> {
    check_p(p)?;
    let v = h.vertex_count();
    if v > n {
        return Err(Error::invalid(format!("template has {v} vertices, host only {n}")));
    }
    let count = binomial(n as u64, v as u64);
    if count > EXACT_COPY_BUDGET {
        return Err(Error::BudgetExceeded(format!("{count} copies exceed {EXACT_COPY_BUDGET}")));
    }
    let mut copies = Vec::with_capacity(count as usize);
    for_each_combination(n, v, |c| copies.push(c.to_vec()));
    Ok(family_mu_delta(n, h, &copies, p))
}

/// Expected size of the rooted family: `t C(s, v - r) p^{e}`.
pub fn expected_rooted_copies(rt: &RootedTemplate, s: usize, t: usize, p: f64) -> Result<f64> {
    check_p(p)?;
    let free = rt.template.vertex_count() - rt.root.len();
    Ok(t as f64 * (ln_binomial(s as u64, free as u64) + ln_pow(p, rt.template.edge_count() as f64)).exp())
}

/// The two sums bounding `δ` for a rooted family: `t` disjoint root images and a
/// reservoir of `s` vertices. Returns `(δ₁, δ₂)`; `δ₂ = 0` for an empty root.
pub fn delta_rooted_bound(rt: &RootedTemplate, n: usize, s: usize, t: usize, p: f64) -> Result<(f64, f64)> {
    check_p(p)?;
    let r = rt.root.len();
    if s + t * r > n {
        return Err(Error::invalid(format!("reservoir {s} plus {t} roots exceed n = {n}")));
    }
    let m = m_density(rt)?;
    let m = *m.numer() as f64 / *m.denom() as f64;
    let free = rt.template.vertex_count() - r;
    let e2 = 2.0 * rt.template.edge_count() as f64;
    let ln_t = (t as f64).ln();
    let mut d1 = Vec::new();
    let mut d2 = Vec::new();
    for j in 1..=free.min(s) {
        let base = ln_binomial(s as u64, j as u64) + 2.0 * ln_binomial((s - j) as u64, (free - j) as u64);
        if j >= 2 {
            d1.push(base + 2.0 * ln_t + ln_pow(p, e2 - (j as f64 - 1.0) * m));
        }
        if r > 0 {
            d2.push(base + ln_t + ln_pow(p, e2 - j as f64 * m));
        }
    }
    Ok((log_sum_exp(&d1).exp(), log_sum_exp(&d2).exp()))
}

/// Exact `μ` and `δ` of the rooted family on the canonical host: root images
/// `y_i = (i r, …, i r + r - 1)` and reservoir `t r .. t r + s`.
pub fn exact_rooted_mu_delta(rt: &RootedTemplate, s: usize, t: usize, p: f64) -> Result<(f64, f64)> {
    check_p(p)?;
    let r = rt.root.len();
    let internal = rt.internal_vertices();
    let count = binomial(s as u64, internal.len() as u64) * t as u128;
    if count > EXACT_COPY_BUDGET {
        return Err(Error::BudgetExceeded(format!("{count} copies exceed {EXACT_COPY_BUDGET}")));
    }
    let n = t * r + s;
    let mut copies = Vec::new();
    for i in 0..t {
        for_each_combination(s, internal.len(), |q| {
            let mut images = vec![0u32; rt.template.vertex_count()];
            for (slot, &x) in rt.root.iter().enumerate() {
                images[x as usize] = (i * r + slot) as u32;
            }
            for (&u, &w) in internal.iter().zip(q) {
                images[u as usize] = (t * r) as u32 + w;
            }
            copies.push(images);
        });
    }
    Ok(family_mu_delta(n, &rt.template, &copies, p))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Hypergraph {
        Hypergraph::complete(2, 3)
    }

    #[test]
    fn mu_examples() {
        assert!((expected_lex_copies(5, &triangle(), 0.5).unwrap() - 1.25).abs() < 1e-12);
        assert!((expected_lex_copies(7, &triangle(), 1.0).unwrap() - 35.0).abs() < 1e-9);
        let edge = Hypergraph::complete(2, 2);
        assert!((expected_lex_copies(4, &edge, 0.5).unwrap() - 3.0).abs() < 1e-12);
        assert!(expected_lex_copies(2, &triangle(), 0.5).is_err());
    }

    #[test]
    fn exact_triangle() {
        let (mu, delta) = exact_mu_delta(5, &triangle(), 0.5).unwrap();
        assert!((mu - 1.25).abs() < 1e-12);
        assert!((delta - 1.875).abs() < 1e-12);
        let (_, d) = exact_mu_delta(3, &triangle(), 0.5).unwrap();
        assert_eq!(d, 0.0);
        let (mu, delta) = exact_mu_delta(5, &triangle(), 1.0).unwrap();
        assert_eq!((mu, delta), (10.0, 60.0));
    }

    #[test]
    fn delta_bound_examples() {
        assert_eq!(delta_upper_bound(10, &Hypergraph::complete(2, 2), 0.5).unwrap(), 0.0);
        let b = delta_upper_bound(5, &triangle(), 0.5).unwrap();
        assert!(b >= 1.875, "{b}");
        assert!(delta_upper_bound(50, &triangle(), 1e-9).unwrap() < 1e-6);
    }

    #[test]
    fn tail_examples() {
        let p = JansonParams::new(1.25, 1.875, 0.5).unwrap();
        assert!((p.bound - (-0.0625f64).exp()).abs() < 1e-12);
        assert_eq!(JansonParams::new(0.0, 3.0, 0.5).unwrap().bound, 1.0);
        let p = JansonParams::new(8.0, 0.0, 0.5).unwrap();
        assert!((p.bound - (-1f64).exp()).abs() < 1e-12);
        assert!(JansonParams::new(1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn rooted_bounds_dominate_exact() {
        let edge = RootedTemplate::new(Hypergraph::complete(2, 2), vec![0]).unwrap();
        let cherry = RootedTemplate::new(Hypergraph::new(2, 3, [[0, 1], [1, 2]]).unwrap(), vec![0, 2]).unwrap();
        for rt in [edge, cherry] {
            for p in [0.3, 0.5, 0.9] {
                let (s, t) = (8, 2);
                let (d1, d2) = delta_rooted_bound(&rt, s + t * rt.root.len(), s, t, p).unwrap();
                let (_, exact) = exact_rooted_mu_delta(&rt, s, t, p).unwrap();
                assert!(d1 + d2 >= exact - 1e-9, "{d1} + {d2} < {exact}");
            }
        }
        let unrooted = RootedTemplate::unrooted(triangle());
        let (_, d2) = delta_rooted_bound(&unrooted, 10, 10, 1, 0.5).unwrap();
        assert_eq!(d2, 0.0);
        let (d1, _) = delta_rooted_bound(&unrooted, 10, 10, 1, 1e-9).unwrap();
        assert!(d1 < 1e-6);
    }
}
