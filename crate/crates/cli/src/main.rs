use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use hamabsorb::absorber::{absorb, absorb_single, fresh_chain_absorber, is_path_between};
use hamabsorb::cover::CoverStrategy;
use hamabsorb::density::{
    format_rational, m1_density_with_budget, m_density_with_budget, RootedTemplate, DEFAULT_VERTEX_BUDGET,
};
use hamabsorb::experiment::{run_experiment, summarize, to_csv, Execution, ExperimentConfig};
use hamabsorb::factor::almost_factor;
use hamabsorb::janson::{delta_upper_bound, exact_mu_delta, expected_lex_copies, JansonParams};
use hamabsorb::pipeline::{find_hamilton, threshold_report, Input, Parameters, Plan, Profile};
use hamabsorb::random::{rng, sample_bipartite, sample_uniform_hypergraph, uniform01, DEFAULT_SEED};
use hamabsorb::templates::{power_path_template, Mode};
use hamabsorb::{verify_certificate, CycleCertificate, Hypergraph};

#[derive(Parser)]
#[command(
    name = "hamabsorb",
    version,
    about = "Powers of Hamilton cycles and tight Hamilton cycles in random (hyper)graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a random graph, hypergraph or bipartite graph.
    Gen(GenArgs),
    /// Search for a Hamilton k-th power (power mode) or tight Hamilton cycle (tight mode).
    Find(FindArgs),
    /// Check a certificate against a host.
    Verify(VerifyArgs),
    /// Exact m1-density, or rooted density with --root.
    Density(DensityArgs),
    /// Janson parameters and lower-tail bound for lexicographic copies.
    Janson(JansonArgs),
    /// Greedy (H, epsilon)-factor.
    Factor(FactorArgs),
    /// Chain absorber on a host made of exactly its own edges.
    Absorber(AbsorberArgs),
    /// Monte-Carlo success rates over an (n, p) grid.
    Experiment(ExperimentArgs),
}

#[derive(Args)]
struct GenArgs {
    /// gnp, hgnp or bip.
    #[arg(long)]
    model: String,
    /// Uniformity for hgnp.
    #[arg(long, default_value_t = 3)]
    k: usize,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    p: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Clone)]
struct SearchArgs {
    /// Power of the cycle (power mode) or uniformity minus one (tight mode).
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, default_value = "power")]
    mode: Mode,
    #[arg(long, default_value = "desk")]
    profile: Profile,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    retries: usize,
    /// Override |X|, the number of absorbable vertices.
    #[arg(long)]
    absorb_size: Option<usize>,
    /// Override the number of cover parts.
    #[arg(long)]
    t_cover: Option<usize>,
    /// fixed or adaptive; defaults to adaptive for desk, fixed for asymptotic.
    #[arg(long)]
    cover: Option<CoverStrategy>,
    #[arg(long)]
    backbone_len: Option<usize>,
    #[arg(long)]
    connector_len: Option<usize>,
    #[arg(long)]
    rounds: Option<usize>,
    /// Share of the merge reservoir the closing connectors may use.
    #[arg(long)]
    merge_fill: Option<f64>,
    /// Constant C in the reported threshold.
    #[arg(long, default_value_t = 1.0)]
    c: f64,
}

impl SearchArgs {
    fn params(&self) -> Parameters {
        let mut p = Parameters::new(self.k, self.mode);
        p.profile = self.profile;
        p.seed = self.seed;
        p.retries = self.retries;
        p.absorb_size = self.absorb_size;
        p.t_cover = self.t_cover;
        p.cover = self.cover;
        p.backbone_len = self.backbone_len;
        p.connector_len = self.connector_len;
        p.rounds = self.rounds;
        p.c = self.c;
        if let Some(f) = self.merge_fill {
            p.merge_fill = f;
        }
        p
    }
}

#[derive(Args)]
struct FindArgs {
    #[arg(long, conflicts_with = "model")]
    graph: Option<PathBuf>,
    /// gnp or hgnp; the uniformity follows from --mode and --k.
    #[arg(long, requires_all = ["n", "p"])]
    model: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    #[command(flatten)]
    search: SearchArgs,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Where to write the sampled host when --model is used.
    #[arg(long)]
    graph_out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    cert: PathBuf,
}

#[derive(Args)]
struct DensityArgs {
    #[arg(long)]
    input: PathBuf,
    /// Comma-separated root vertices.
    #[arg(long, value_delimiter = ',')]
    root: Option<Vec<u32>>,
    #[arg(long, default_value_t = DEFAULT_VERTEX_BUDGET)]
    budget: usize,
}

#[derive(Args)]
struct JansonArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    p: f64,
    /// A file, builtin:triangle or builtin:path-K-L.
    #[arg(long)]
    template: String,
    #[arg(long, default_value_t = 0.5)]
    gamma: f64,
    /// Enumerate copies instead of using the analytic bound for delta.
    #[arg(long)]
    exact: bool,
}

#[derive(Args)]
struct FactorArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    template: PathBuf,
    #[arg(long)]
    epsilon: f64,
}

#[derive(Args)]
struct AbsorberArgs {
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, default_value_t = 5)]
    ell: usize,
    #[arg(long, default_value = "power")]
    mode: Mode,
    /// Number of chained single-vertex absorbers.
    #[arg(long, default_value_t = 4)]
    count: usize,
    #[arg(long)]
    connector_len: Option<usize>,
    /// Print both traversals of the first absorber.
    #[arg(long)]
    demo: bool,
    /// Check this many random subsets X'.
    #[arg(long)]
    validate: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Args)]
struct ExperimentArgs {
    #[command(flatten)]
    search: SearchArgs,
    #[arg(long, value_delimiter = ',', required = true)]
    n_list: Vec<usize>,
    #[arg(long, value_delimiter = ',', required = true)]
    p_grid: Vec<f64>,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Worker threads; 1 runs sequentially, 0 uses every core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Record wall-clock runtimes (otherwise written as 0).
    #[arg(long)]
    timing: bool,
}

/// Outcome of a subcommand that ran to completion.
enum Status {
    Ok,
    Failed,
}

fn write_or_print(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn gen(a: GenArgs) -> anyhow::Result<Status> {
    let text = match a.model.as_str() {
        "gnp" => sample_uniform_hypergraph(2, a.n, a.p, a.seed)?.to_text(),
        "hgnp" => sample_uniform_hypergraph(a.k, a.n, a.p, a.seed)?.to_text(),
        "bip" => {
            let b = sample_bipartite(a.n, a.p, a.seed)?;
            let mut s = format!("{} {} {}\n", b.left(), b.right(), b.edge_count());
            for (x, y) in b.edges() {
                s += &format!("{x} {y}\n");
            }
            s
        }
        other => bail!("unknown model {other:?}; expected gnp, hgnp or bip"),
    };
    eprintln!("seed {}", a.seed);
    fs::write(&a.out, text).with_context(|| format!("writing {}", a.out.display()))?;
    Ok(Status::Ok)
}

fn find(a: FindArgs) -> anyhow::Result<Status> {
    let params = a.search.params();
    let r = params.mode.host_uniformity(params.k);
    let loaded;
    let (input, p) = match (&a.graph, &a.model) {
        (Some(path), None) => {
            loaded = Hypergraph::read(path).with_context(|| format!("reading {}", path.display()))?;
            (Input::Graph(&loaded), hamabsorb::random::estimate_edge_rate(&loaded))
        }
        (None, Some(model)) => {
            match (model.as_str(), r) {
                ("gnp", 2) | ("hgnp", _) => {}
                ("gnp", _) => bail!("gnp samples graphs, but {} k={} needs a {r}-uniform host", params.mode, params.k),
                (other, _) => bail!("unknown model {other:?}; expected gnp or hgnp"),
            }
            let (n, p) = (a.n.unwrap(), a.p.unwrap());
            (Input::Model { n, p }, p)
        }
        _ => bail!("give exactly one of --graph or --model"),
    };
    let n = match input {
        Input::Graph(g) => g.vertex_count(),
        Input::Model { n, .. } => n,
    };
    eprintln!("seed {}", params.seed);
    if let Ok(plan) = Plan::derive(n, &params) {
        eprintln!("{plan}");
        eprintln!("{}", threshold_report(&plan, p, params.c));
    }
    match find_hamilton(input, &params) {
        Ok(found) => {
            if let (Some(path), Some(host)) = (&a.graph_out, &found.host) {
                host.write(path).with_context(|| format!("writing {}", path.display()))?;
            }
            eprintln!("verified cycle after {} attempt(s)", found.attempts);
            write_or_print(a.out.as_deref(), &found.certificate.to_text())?;
            Ok(Status::Ok)
        }
        Err(e) => {
            eprintln!("no cycle: {e}");
            Ok(Status::Failed)
        }
    }
}

fn verify(a: VerifyArgs) -> anyhow::Result<Status> {
    let g = Hypergraph::read(&a.graph).with_context(|| format!("reading {}", a.graph.display()))?;
    let cert = CycleCertificate::read(&a.cert).with_context(|| format!("reading {}", a.cert.display()))?;
    if verify_certificate(&g, &cert)? {
        println!("valid");
        Ok(Status::Ok)
    } else {
        println!("invalid");
        Ok(Status::Failed)
    }
}

fn density(a: DensityArgs) -> anyhow::Result<Status> {
    let f = Hypergraph::read(&a.input).with_context(|| format!("reading {}", a.input.display()))?;
    let d = match a.root {
        Some(root) => m_density_with_budget(&RootedTemplate::new(f, root)?, a.budget)?,
        None => m1_density_with_budget(&f, a.budget)?,
    };
    println!("{}", format_rational(&d));
    Ok(Status::Ok)
}

fn builtin_template(spec: &str) -> anyhow::Result<Hypergraph> {
    if spec == "builtin:triangle" {
        return Ok(Hypergraph::complete(2, 3));
    }
    if let Some(rest) = spec.strip_prefix("builtin:path-") {
        let (k, l) = rest.split_once('-').context("expected builtin:path-K-L")?;
        return Ok(power_path_template(k.parse()?, l.parse()?)?);
    }
    Hypergraph::read(spec).with_context(|| format!("reading {spec}"))
}

fn janson(a: JansonArgs) -> anyhow::Result<Status> {
    let h = builtin_template(&a.template)?;
    let (mu, delta, label) = if a.exact {
        let (mu, delta) = exact_mu_delta(a.n, &h, a.p)?;
        (mu, delta, "delta")
    } else {
        (expected_lex_copies(a.n, &h, a.p)?, delta_upper_bound(a.n, &h, a.p)?, "delta_bound")
    };
    let params = JansonParams::new(mu, delta, a.gamma)?;
    println!("mu {mu}");
    println!("{label} {delta}");
    println!("tail_bound {}", params.bound);
    Ok(Status::Ok)
}

fn factor(a: FactorArgs) -> anyhow::Result<Status> {
    let g = Hypergraph::read(&a.graph).with_context(|| format!("reading {}", a.graph.display()))?;
    let h = Hypergraph::read(&a.template).with_context(|| format!("reading {}", a.template.display()))?;
    match almost_factor(&g, &h, a.epsilon) {
        Ok(copies) => {
            println!("copies {}", copies.len());
            println!("leftover {}", g.vertex_count() - copies.len() * h.vertex_count());
            Ok(Status::Ok)
        }
        Err(hamabsorb::Error::WindowEmpty { window }) => {
            println!("copies {window}");
            eprintln!("window {window} holds no copy");
            Ok(Status::Failed)
        }
        Err(e) => Err(e.into()),
    }
}

fn join(v: &[u32]) -> String {
    v.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")
}

fn absorber(a: AbsorberArgs) -> anyhow::Result<Status> {
    let lc = a.connector_len.unwrap_or(hamabsorb::pipeline::minimal_connector_len(a.mode, a.k));
    let (host, chain) = fresh_chain_absorber(a.k, a.ell, a.mode, a.count, lc)?;
    chain.check(&host)?;
    println!("absorber with {} vertices, X = {}", chain.vertex_count(), join(&chain.absorbable()));
    if a.demo {
        let first = &chain.parts[0];
        println!("with x:    {}", join(&absorb_single(first, true)));
        println!("without x: {}", join(&absorb_single(first, false)));
    }
    if let Some(runs) = a.validate {
        let xs = chain.absorbable();
        let mut r = rng(a.seed);
        let mut bad = 0;
        for _ in 0..runs {
            let subset: Vec<u32> = xs.iter().copied().filter(|_| uniform01(&mut r) < 0.5).collect();
            let path = absorb(&chain, &subset)?;
            let ok = is_path_between(&host, &path, &chain.a(), &chain.b(), a.mode, a.k)
                && path.len() + subset.len() == chain.vertex_count()
                && subset.iter().all(|x| !path.contains(x));
            bad += usize::from(!ok);
        }
        println!("validated {} subsets, {bad} rejected", runs);
        if bad > 0 {
            return Ok(Status::Failed);
        }
    }
    Ok(Status::Ok)
}

fn experiment(a: ExperimentArgs) -> anyhow::Result<Status> {
    let params = a.search.params();
    eprintln!("seed {}", params.seed);
    let execution = if a.jobs == 1 { Execution::Sequential } else { Execution::Parallel { jobs: a.jobs } };
    let cfg = ExperimentConfig { params, n_list: a.n_list, p_grid: a.p_grid, trials: a.trials, execution };
    let records = run_experiment(&cfg);
    for (n, p, ok, total) in summarize(&records) {
        eprintln!("n = {n}, p = {p}: {ok}/{total}");
    }
    write_or_print(a.csv.as_deref(), &to_csv(&records, a.timing))?;
    Ok(Status::Ok)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Gen(a) => gen(a),
        Command::Find(a) => find(a),
        Command::Verify(a) => verify(a),
        Command::Density(a) => density(a),
        Command::Janson(a) => janson(a),
        Command::Factor(a) => factor(a),
        Command::Absorber(a) => absorber(a),
        Command::Experiment(a) => experiment(a),
    };
    match result {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Failed) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
