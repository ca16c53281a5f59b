//! Seeded random models: `G^(k)(n, p)`, bipartite `G(n, n, p)` and the
//! three-round exposure helpers.
//!
//! Every sampler draws from ChaCha8 seeded with `seed_from_u64`, so samples are
//! identical across platforms. One 53-bit uniform variate is consumed per
//! candidate edge, candidates visited in lexicographic order.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::combinatorics::{binomial, for_each_combination, unrank_lex};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

pub type Seed = u64;

/// Default seed used by the CLI when none is given.
pub const DEFAULT_SEED: Seed = 0x5EED_CAFE;

/// SplitMix64 finalizer.
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Seed for the `i`-th derived stream: `splitmix64(base + i * golden)`.
pub fn derive_seed(base: Seed, i: u64) -> Seed {
    splitmix64(base.wrapping_add(i.wrapping_mul(0x9E37_79B9_7F4A_7C15)))
}

pub fn rng(seed: Seed) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform in `[0, 1)` with 53 bits of precision.
#[inline]
pub fn uniform01(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform integer in `0..bound` without modulo bias.
pub fn uniform_below(rng: &mut impl RngCore, bound: u64) -> u64 {
    assert!(bound > 0);
    let zone = u64::MAX - u64::MAX % bound;
    loop {
        let x = rng.next_u64();
        if x < zone {
            return x % bound;
        }
    }
}

/// Fisher–Yates shuffle.
pub fn shuffle<T>(rng: &mut impl RngCore, items: &mut [T]) {
    for i in (1..items.len()).rev() {
        let j = uniform_below(rng, i as u64 + 1) as usize;
        items.swap(i, j);
    }
}

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid(format!("probability {p} outside [0, 1]")));
    }
    Ok(())
}

/// `G^(k)(n, p)` by the canonical one-variate-per-candidate sampler.
pub fn sample_uniform_hypergraph(k: usize, n: usize, p: f64, seed: Seed) -> Result<Hypergraph> {
    check_probability(p)?;
    if k < 1 || n < k {
        return Err(Error::invalid(format!("need n >= k >= 1, got k={k}, n={n}")));
    }
    let mut r = rng(seed);
    let mut flat = Vec::new();
    for_each_combination(n, k, |c| {
        if uniform01(&mut r) < p {
            flat.extend_from_slice(c);
        }
    });
    Ok(Hypergraph::from_sorted_flat(k, n, flat))
}

/// `G(n, p)`.
pub fn sample_gnp(n: usize, p: f64, seed: Seed) -> Result<Hypergraph> {
    sample_uniform_hypergraph(2, n, p, seed)
}

/// Same law as [`sample_uniform_hypergraph`] using geometric skips; fast for small `p`
/// but not bitwise identical to the canonical sampler.
pub fn sample_uniform_hypergraph_skip(k: usize, n: usize, p: f64, seed: Seed) -> Result<Hypergraph> {
    check_probability(p)?;
    if k < 1 || n < k {
        return Err(Error::invalid(format!("need n >= k >= 1, got k={k}, n={n}")));
    }
    if p >= 1.0 {
        return Ok(Hypergraph::complete(k, n));
    }
    let total = binomial(n as u64, k as u64);
    let mut flat = Vec::new();
    if p > 0.0 {
        let mut r = rng(seed);
        let log_q = (-p).ln_1p();
        let mut idx: u128 = 0;
        loop {
            let u = 1.0 - uniform01(&mut r);
            let skip = (u.ln() / log_q).floor();
            if !skip.is_finite() || skip >= (total - idx) as f64 {
                break;
            }
            idx += skip as u128;
            if idx >= total {
                break;
            }
            flat.extend(unrank_lex(n, k, idx));
            idx += 1;
        }
    }
    Ok(Hypergraph::from_sorted_flat(k, n, flat))
}

/// Per-round rate `q` with `1 - (1 - q)^3 = p`.
pub fn three_round_rate(p: f64) -> Result<f64> {
    check_probability(p)?;
    Ok(-(1.0 - p).cbrt() + 1.0)
}

/// Fraction of present edges among all `C(n, k)` candidates.
pub fn estimate_edge_rate(g: &Hypergraph) -> f64 {
    let total = binomial(g.vertex_count() as u64, g.uniformity() as u64);
    if total == 0 {
        0.0
    } else {
        g.edge_count() as f64 / total as f64
    }
}

/// Splits the edges of `g` (thought of as a sample of rate `p`) into three parts.
/// Each edge draws three Bernoulli(q) indicators, redrawn until one succeeds,
/// and lands in every part whose indicator fired.
pub fn split_edges_three(g: &Hypergraph, p: f64, seed: Seed) -> Result<[Hypergraph; 3]> {
    let q = three_round_rate(p)?;
    let (k, n) = (g.uniformity(), g.vertex_count());
    let mut parts: [Vec<u32>; 3] = Default::default();
    if g.edge_count() > 0 && q <= 0.0 {
        return Err(Error::invalid("a non-empty graph cannot come from rate 0"));
    }
    let mut r = rng(seed);
    for e in g.edges() {
        loop {
            let hits = [uniform01(&mut r) < q, uniform01(&mut r) < q, uniform01(&mut r) < q];
            if hits.iter().any(|&h| h) {
                for (part, hit) in parts.iter_mut().zip(hits) {
                    if hit {
                        part.extend_from_slice(e);
                    }
                }
                break;
            }
        }
    }
    Ok(parts.map(|flat| Hypergraph::from_sorted_flat(k, n, flat)))
}

/// Bipartite graph with sides `0..left` and `0..right`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    left: usize,
    right: usize,
    adj: Vec<Vec<u32>>,
}

impl BipartiteGraph {
    pub fn new(left: usize, right: usize, edges: impl IntoIterator<Item = (u32, u32)>) -> Result<Self> {
        let mut adj = vec![Vec::new(); left];
        for (a, b) in edges {
            if a as usize >= left || b as usize >= right {
                return Err(Error::invalid(format!("edge ({a}, {b}) out of range")));
            }
            adj[a as usize].push(b);
        }
        for list in &mut adj {
            list.sort_unstable();
            let before = list.len();
            list.dedup();
            if list.len() != before {
                return Err(Error::invalid("duplicate bipartite edge"));
            }
        }
        Ok(BipartiteGraph { left, right, adj })
    }

    /// Trusted constructor from sorted adjacency lists.
    pub(crate) fn from_adjacency(right: usize, adj: Vec<Vec<u32>>) -> Self {
        debug_assert!(adj.iter().all(|l| l.windows(2).all(|w| w[0] < w[1])));
        BipartiteGraph { left: adj.len(), right, adj }
    }

    pub fn left(&self) -> usize {
        self.left
    }

    pub fn right(&self) -> usize {
        self.right
    }

    pub fn neighbors(&self, a: u32) -> &[u32] {
        &self.adj[a as usize]
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum()
    }

    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.adj.iter().enumerate().flat_map(|(a, l)| l.iter().map(move |&b| (a as u32, b)))
    }
}

/// `G(s, s, p)`.
pub fn sample_bipartite(s: usize, p: f64, seed: Seed) -> Result<BipartiteGraph> {
    check_probability(p)?;
    let mut r = rng(seed);
    let adj = (0..s).map(|_| (0..s as u32).filter(|_| uniform01(&mut r) < p).collect()).collect();
    Ok(BipartiteGraph::from_adjacency(s, adj))
}
