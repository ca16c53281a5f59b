//! End-to-end search: three-round exposure, chain absorber, path cover,
//! merge through the absorbable set, absorption of the leftovers.
//!
//! Nothing leaves [`find_hamilton`] without passing the verifier against the
//! original host.

use std::fmt;
use std::str::FromStr;

use crate::absorber::{
    absorb, build_chain_absorber, chain_absorber_size, connector_internal, AbsorberConfig, AbsorberPhase, ChainAbsorber,
};
use crate::certificate::{verify_certificate, CycleCertificate};
use crate::cover::{cover_adaptive, cover_with_paths, CoverFamily, CoverStrategy};
use crate::embedding::{Embedding, VertexSet, VertexTuple};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::matcher::{connect_paths, default_rounds, ConnectOptions, Hypothesis};
use crate::random::{
    derive_seed, estimate_edge_rate, sample_uniform_hypergraph, split_edges_three, three_round_rate, Seed, DEFAULT_SEED,
};
use crate::templates::Mode;

/// Where parameter defaults come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Profile {
    /// Sizes chosen so that `n` in the low thousands is workable.
    #[default]
    Desk,
    /// The asymptotic choices: `ℓ ≈ log n`, `|X| = n / (16 log² n)`, `t = log⁴ n`.
    Asymptotic,
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Profile::Desk => "desk",
            Profile::Asymptotic => "asymptotic",
        })
    }
}

impl FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "desk" => Ok(Profile::Desk),
            "asymptotic" => Ok(Profile::Asymptotic),
            _ => Err(Error::Parse(format!("unknown profile {s:?}"))),
        }
    }
}

/// Configuration of one search. `None` fields fall back to the profile.
#[derive(Debug, Clone)]
pub struct Parameters {
    pub k: usize,
    pub mode: Mode,
    pub profile: Profile,
    pub backbone_len: Option<usize>,
    pub connector_len: Option<usize>,
    pub rounds: Option<usize>,
    /// Override for `|X|`.
    pub absorb_size: Option<usize>,
    /// Override for the number of cover parts.
    pub t_cover: Option<usize>,
    pub cover: Option<CoverStrategy>,
    /// Share of `W_1` the backbone copies may occupy.
    pub factor_fill: f64,
    /// Share of `X \ U_X` the closing connectors may use.
    pub merge_fill: f64,
    /// Constant in the reported threshold `C log⁸ n / n`.
    pub c: f64,
    pub retries: usize,
    /// Search node budget per copy.
    pub node_budget: Option<u64>,
    pub seed: Seed,
}

impl Parameters {
    pub fn new(k: usize, mode: Mode) -> Self {
        Parameters {
            k,
            mode,
            profile: Profile::Desk,
            backbone_len: None,
            connector_len: None,
            rounds: None,
            absorb_size: None,
            t_cover: None,
            cover: None,
            factor_fill: 0.9,
            merge_fill: 0.75,
            c: 1.0,
            retries: 0,
            node_budget: Some(1_000_000),
            seed: DEFAULT_SEED,
        }
    }

    pub fn connect_options(&self) -> ConnectOptions {
        match self.profile {
            Profile::Desk => ConnectOptions::relaxed(self.node_budget),
            Profile::Asymptotic => {
                ConnectOptions { hypothesis: Hypothesis::Strict, sweep: false, node_budget: self.node_budget }
            }
        }
    }
}

/// Shortest connector whose root is independent: `3k` for powers, `2k + 1` for tight paths.
pub fn minimal_connector_len(mode: Mode, k: usize) -> usize {
    match mode {
        Mode::Power => 3 * k,
        Mode::Tight => 2 * k + 1,
    }
}

fn log2(n: usize) -> f64 {
    (n.max(2) as f64).log2()
}

fn smallest_odd_at_least(x: usize) -> usize {
    if x % 2 == 1 {
        x
    } else {
        x + 1
    }
}

/// Concrete sizes for one host order `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Plan {
    pub n: usize,
    pub k: usize,
    pub mode: Mode,
    pub backbone_len: usize,
    pub connector_len: usize,
    pub rounds: usize,
    /// `|X|`.
    pub absorb_count: usize,
    pub absorber_size: usize,
    /// `|U| = n - v(A)`.
    pub uncovered: usize,
    /// Number of cover paths `s`.
    pub paths: usize,
    /// Number of cover parts `t`, the length of every cover path.
    pub cover_len: usize,
    /// `|U_X|`.
    pub u_x: usize,
    pub cover: CoverStrategy,
}

impl Plan {
    pub fn derive(n: usize, params: &Parameters) -> Result<Plan> {
        let (k, mode) = (params.k, params.mode);
        if k < 1 {
            return Err(Error::invalid("k must be at least 1"));
        }
        let lb = match (params.backbone_len, params.profile) {
            (Some(l), _) => l,
            (None, Profile::Desk) => 5,
            (None, Profile::Asymptotic) => smallest_odd_at_least((log2(n).ceil() as usize).max(5)),
        };
        let lc = match (params.connector_len, params.profile) {
            (Some(l), _) => l,
            (None, Profile::Desk) => minimal_connector_len(mode, k),
            (None, Profile::Asymptotic) => lb.max(minimal_connector_len(mode, k)),
        };
        if lb < 5 || lb % 2 == 0 {
            return Err(Error::invalid(format!("backbone length must be odd and at least 5, got {lb}")));
        }
        if lc < minimal_connector_len(mode, k) {
            return Err(Error::invalid(format!(
                "connector length {lc} is below {} for {mode} k={k}",
                minimal_connector_len(mode, k)
            )));
        }
        let rounds = params.rounds.unwrap_or_else(|| default_rounds(n)).max(1);
        let c_int = connector_internal(k, lc);
        let v_b = 1 + 2 * k * lb;
        let class = |r: usize| (n + 2 - r) / 3;
        let fits = |t: usize| {
            t * v_b <= (params.factor_fill * class(0) as f64) as usize
                && 2 * chain_absorber_size(k, lb, lc, t) <= n
                && 2 * t * (lb - 1) * c_int <= class(1)
                && 2 * t.saturating_sub(1) * c_int <= class(2)
        };
        let absorb_count = match (params.absorb_size, params.profile) {
            (Some(t), _) => t,
            (None, Profile::Desk) => (1..).take_while(|&t| fits(t)).last().unwrap_or(0),
            (None, Profile::Asymptotic) => (n as f64 / (16.0 * log2(n).powi(2))).floor() as usize,
        };
        if absorb_count == 0 {
            return Err(Error::pre(format!("n = {n} is too small for an absorber")));
        }
        let absorber_size = chain_absorber_size(k, lb, lc, absorb_count);
        if 2 * absorber_size > n {
            return Err(Error::pre(format!("absorber on {absorber_size} vertices exceeds n/2 for n = {n}")));
        }
        let uncovered = n - absorber_size;
        let shape = |s: usize| {
            let t = uncovered.div_ceil(s);
            (t, s * t - uncovered)
        };
        let budget = |u_x: usize| (params.merge_fill * absorb_count.saturating_sub(u_x) as f64).floor() as usize;
        let (paths, cover_len) = match (params.t_cover, params.profile) {
            (Some(t), _) => (uncovered.div_ceil(t.max(1)), t),
            (None, Profile::Desk) => {
                let s = (1..=uncovered / (2 * k))
                    .rev()
                    .find(|&s| {
                        let (t, u_x) = shape(s);
                        t >= 2 * k && u_x <= absorb_count && (s + 1) * c_int <= budget(u_x)
                    })
                    .unwrap_or(1);
                (s, shape(s).0)
            }
            (None, Profile::Asymptotic) => {
                let t = (log2(n).powi(4).ceil() as usize).min(n / (8 * lb)).max(1);
                (uncovered.div_ceil(t), t)
            }
        };
        let u_x = paths * cover_len - uncovered;
        let cover = params.cover.unwrap_or(match params.profile {
            Profile::Desk => CoverStrategy::Adaptive,
            Profile::Asymptotic => CoverStrategy::Fixed,
        });
        let plan = Plan {
            n,
            k,
            mode,
            backbone_len: lb,
            connector_len: lc,
            rounds,
            absorb_count,
            absorber_size,
            uncovered,
            paths,
            cover_len,
            u_x,
            cover,
        };
        if cover_len < 2 * k {
            return Err(Error::pre(format!("cover paths of length {cover_len} are shorter than 2k = {}", 2 * k)));
        }
        if u_x > absorb_count || (paths + 1) * c_int > absorb_count - u_x {
            return Err(Error::pre(format!(
                "{} closing connectors with {c_int} internal vertices do not fit |X \\ U_X| = {}",
                paths + 1,
                absorb_count.saturating_sub(u_x)
            )));
        }
        Ok(plan)
    }

    pub fn merge_reservoir(&self) -> usize {
        self.absorb_count - self.u_x
    }
}

impl fmt::Display for Plan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n = {}, {} k = {}", self.n, self.mode, self.k)?;
        writeln!(
            f,
            "backbone length {}, connector length {}, rounds {}",
            self.backbone_len, self.connector_len, self.rounds
        )?;
        writeln!(f, "|X| = {}, v(A) = {}, |U| = {}", self.absorb_count, self.absorber_size, self.uncovered)?;
        write!(
            f,
            "{} cover paths over {} {} parts, |U_X| = {}, merge reservoir {}",
            self.paths,
            self.cover_len,
            self.cover,
            self.u_x,
            self.merge_reservoir()
        )
    }
}

/// The asymptotic threshold and the desk-scale quantities that actually govern a run.
pub fn threshold_report(plan: &Plan, p: f64, c: f64) -> String {
    let n = plan.n as f64;
    let l = log2(plan.n);
    let q = three_round_rate(p.clamp(0.0, 1.0)).unwrap_or(0.0);
    let mut s = String::new();
    match plan.mode {
        Mode::Power => {
            let thr = (c * l.powi(8) / n).powf(1.0 / plan.k as f64);
            s += &format!("threshold p^k >= C log^8 n / n gives p >= {thr:.4e} (C = {c})\n");
        }
        Mode::Tight => {
            let thr = c * l.powi(8) / n;
            s += &format!("threshold p >= C log^8 n / n gives p >= {thr:.4e} (C = {c})\n");
        }
    }
    let per_step = match plan.mode {
        Mode::Power => q.powi(plan.k as i32),
        Mode::Tight => q,
    };
    let sp = plan.paths as f64 * per_step;
    s += &format!(
        "p = {p}, per-round q = {q:.6}; cover matchings are G(s, s, {per_step:.4}) with s = {}, s*r - ln s = {:.3}",
        plan.paths,
        sp - (plan.paths as f64).ln()
    );
    s
}

/// Phase in which an attempt failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    Plan,
    Split,
    Absorber(AbsorberPhase),
    Cover,
    Merge,
    Absorb,
    Verify,
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Phase::Plan => f.write_str("plan"),
            Phase::Split => f.write_str("split"),
            Phase::Absorber(p) => p.fmt(f),
            Phase::Cover => f.write_str("cover"),
            Phase::Merge => f.write_str("merge"),
            Phase::Absorb => f.write_str("absorb"),
            Phase::Verify => f.write_str("verify"),
        }
    }
}

/// Phase a returned error belongs to.
pub fn failed_phase(e: &Error) -> Phase {
    match e {
        Error::Exhausted { phase, .. } => *phase,
        Error::AbsorberFailed { phase, .. } => Phase::Absorber(*phase),
        Error::CoverFailed { .. } => Phase::Cover,
        Error::Unverified => Phase::Verify,
        _ => Phase::Plan,
    }
}

#[derive(Debug, Clone, Copy)]
pub enum Input<'a> {
    Graph(&'a Hypergraph),
    /// Sample `G^(r)(n, p)` as three independent rounds of rate `q`.
    Model {
        n: usize,
        p: f64,
    },
}

#[derive(Debug, Clone)]
pub struct Found {
    pub certificate: CycleCertificate,
    /// Attempts used, counting the successful one.
    pub attempts: usize,
    pub plan: Plan,
    /// The sampled host when the input was a model.
    pub host: Option<Hypergraph>,
}

fn merge_sorted(a: &Hypergraph, b: &Hypergraph) -> Hypergraph {
    let r = a.uniformity();
    let mut flat = Vec::with_capacity((a.edge_count() + b.edge_count()) * r);
    let (mut x, mut y) = (a.edges().peekable(), b.edges().peekable());
    loop {
        let next = match (x.peek(), y.peek()) {
            (Some(e), Some(f)) if e == f => {
                y.next();
                x.next()
            }
            (Some(e), Some(f)) if e < f => x.next(),
            (Some(_), Some(_)) | (None, Some(_)) => y.next(),
            (Some(_), None) => x.next(),
            (None, None) => break,
        };
        flat.extend_from_slice(next.unwrap());
    }
    Hypergraph::from_sorted_flat(r, a.vertex_count(), flat)
}

/// Three independent `q`-rounds with `1 - (1 - q)^3 = p`, and their union.
pub fn sample_three_rounds(r: usize, n: usize, p: f64, seed: Seed) -> Result<(Hypergraph, [Hypergraph; 3])> {
    let q = three_round_rate(p)?;
    let rounds = [0, 1, 2].map(|i| sample_uniform_hypergraph(r, n, q, derive_seed(seed ^ 0x3_2011, i)));
    let [g1, g2, g3] = rounds;
    let rounds = [g1?, g2?, g3?];
    let union = merge_sorted(&merge_sorted(&rounds[0], &rounds[1]), &rounds[2]);
    Ok((union, rounds))
}

fn inner(f: &Embedding, k: usize) -> &[u32] {
    &f.images()[k..f.len() - k]
}

type Attempt<T> = std::result::Result<T, (Phase, Error)>;

fn tag(phase: Phase) -> impl FnOnce(Error) -> (Phase, Error) {
    move |e| (phase, e)
}

/// Closing connectors `b → a_1`, `b_i → a_{i+1}`, `b_s → a`.
fn merge_pairs(absorber: &ChainAbsorber, cover: &CoverFamily) -> Vec<(VertexTuple, VertexTuple)> {
    let s = cover.paths.len();
    let mut ends = vec![absorber.b()];
    ends.extend((0..s).map(|i| cover.end(i).to_vec()));
    let mut starts: Vec<Vec<u32>> = (0..s).map(|i| cover.start(i).to_vec()).collect();
    starts.push(absorber.a());
    ends.into_iter()
        .zip(starts)
        .map(|(b, a)| (VertexTuple::from_vec_unchecked(b), VertexTuple::from_vec_unchecked(a)))
        .collect()
}

/// One pass of the construction on a fixed split.
pub fn attempt(g: &Hypergraph, split: &[Hypergraph; 3], plan: &Plan, params: &Parameters) -> Attempt<CycleCertificate> {
    let (n, k, mode) = (plan.n, plan.k, plan.mode);
    let [g1, g2, g3] = split;
    let connect = params.connect_options();
    let cfg = AbsorberConfig {
        backbone_len: plan.backbone_len,
        connector_len: plan.connector_len,
        count: plan.absorb_count,
        rounds: plan.rounds,
        connect,
        factor_budget: params.node_budget,
    };
    let absorber = build_chain_absorber(g1, k, mode, &cfg).map_err(|e| (failed_phase(&e), e))?;

    let mut xs = absorber.absorbable();
    xs.sort_unstable();
    let (u_x, w) = xs.split_at(plan.u_x);
    let in_a = VertexSet::from_iter(n, absorber.vertices());
    let u: Vec<u32> = (0..n as u32).filter(|&v| !in_a.contains(v)).collect();
    debug_assert_eq!(u.len(), plan.uncovered);
    let cover = match plan.cover {
        CoverStrategy::Fixed => cover_with_paths(g2, &u, u_x, plan.cover_len, k, mode),
        CoverStrategy::Adaptive => cover_adaptive(g2, &u, u_x, plan.cover_len, k, mode),
    }
    .map_err(tag(Phase::Cover))?;

    let pairs = merge_pairs(&absorber, &cover);
    let z =
        connect_paths(g3, &pairs, w, k, plan.connector_len, mode, plan.rounds, &connect).map_err(tag(Phase::Merge))?;

    let mut x_prime = u_x.to_vec();
    x_prime.extend(z.iter().flat_map(|f| inner(f, k)));
    let mut order = absorb(&absorber, &x_prime).map_err(tag(Phase::Absorb))?;
    for (i, q) in cover.paths.iter().enumerate() {
        order.extend_from_slice(inner(&z[i], k));
        order.extend_from_slice(q);
    }
    order.extend_from_slice(inner(&z[cover.paths.len()], k));
    if order.len() != n {
        return Err((Phase::Absorb, Error::pre(format!("cycle has {} vertices, host has {n}", order.len()))));
    }
    let cert = CycleCertificate::new(mode, k, order).map_err(tag(Phase::Absorb))?;
    match verify_certificate(g, &cert) {
        Ok(true) => Ok(cert),
        Ok(false) => Err((Phase::Verify, Error::Unverified)),
        Err(e) => Err((Phase::Verify, e)),
    }
}

/// Searches for the `k`-th power of a Hamilton cycle (power mode) or a tight
/// Hamilton cycle (tight mode). Attempt `i` uses seed `derive_seed(seed, i)`;
/// attempt 0 on a model input keeps the three sampled rounds, every other
/// attempt re-splits the host.
pub fn find_hamilton(input: Input<'_>, params: &Parameters) -> Result<Found> {
    let r = params.mode.host_uniformity(params.k);
    let (n, p, sampled) = match input {
        Input::Graph(g) => (g.vertex_count(), None, None),
        Input::Model { n, p } => {
            if n < r {
                return Err(Error::invalid(format!("n = {n} is below the uniformity {r}")));
            }
            (n, Some(p), Some(sample_three_rounds(r, n, p, params.seed)?))
        }
    };
    let plan = Plan::derive(n, params)?;
    let (host, mut first) = match sampled {
        Some((g, rounds)) => (Some(g), Some(rounds)),
        None => (None, None),
    };
    let g = match (input, host.as_ref()) {
        (Input::Graph(g), _) => g,
        (_, Some(g)) => g,
        _ => unreachable!(),
    };
    if g.uniformity() != r {
        return Err(Error::UniformityMismatch { expected: r, found: g.uniformity() });
    }
    let p = p.unwrap_or_else(|| estimate_edge_rate(g));
    let mut last = (Phase::Plan, Error::pre("no attempts"));
    for i in 0..=params.retries {
        let split = match first.take() {
            Some(rounds) => rounds,
            None => match split_edges_three(g, p, derive_seed(params.seed, i as u64)) {
                Ok(s) => s,
                Err(e) => {
                    last = (Phase::Split, e);
                    continue;
                }
            },
        };
        match attempt(g, &split, &plan, params) {
            Ok(certificate) => {
                return Ok(Found { certificate, attempts: i + 1, plan, host });
            }
            Err(f) => last = f,
        }
    }
    Err(Error::Exhausted { attempts: params.retries + 1, phase: last.0, source: Box::new(last.1) })
}
