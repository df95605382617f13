//! `verify`: run a predefined suite or a single check.
//!
//! Suites write `report.jsonl`, `report.csv` and SVG plots into the output
//! directory; single checks print their reports as JSON lines. The exit
//! status is 0 iff every asserted check passed, 1 on a failed check or a
//! runtime error, 2 on a usage error.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use riesz_core::lattice::{build_lattice, SampleOrder, DEFAULT_PROBES};
use riesz_core::riesz::RieszConfig;
use riesz_core::suite::{run_suite, SuiteConfig};
use riesz_core::verify::{self, CheckReport, Family, RieszMethod};
use riesz_core::{BandLimited, Generator, Manifold, NormParams};

#[derive(Parser)]
#[command(
    name = "verify",
    version,
    about = "Numerical checks of Bernstein and Nikolskii type inequalities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Circle and torus suite.
    CircleCore(SuiteArgs),
    /// Sphere suite.
    SphereCore(SuiteArgs),
    /// Lattice sampling suite.
    Sampling(SuiteArgs),
    /// Fejer exponent fits and constant stability.
    Asymptotics(SuiteArgs),
    /// Suite named by `--name` or by the config file.
    Suite(NamedSuiteArgs),
    /// `||D^k f||_p <= n^k ||f||_p`.
    Bernstein(DerivArgs),
    /// Bernstein-Nikolskii `||D^k f||_q` against `n^{k+m/p-m/q} ||f||_p`.
    Bn(BnArgs),
    /// Sampling chain on the circle with `N` equispaced nodes.
    NikolskiiSampling(SamplingArgs),
    /// `sum_{|a|=k} ||D^a f||_2^2 = ||L^{k/2} f||_2^2` on the sphere.
    Parseval(ParsevalArgs),
    /// `L f = -sum D_j^2 f`.
    Laplacian(FunctionArgs),
    /// `||D_j f||_p <= eps ||D_j^2 f||_p + (2/eps) ||f||_p`.
    Landau(LandauArgs),
    /// Growth exponent of Fejer kernel norms.
    FejerFit(FejerArgs),
    /// Riesz reconstruction of `D_j f` against the exact derivative.
    RieszExactness(RieszArgs),
    /// `-sum R_j R_j f` against the exact Laplacian.
    RieszLaplacian(RieszLaplacianArgs),
    /// Embeddings between Bernstein and eigenvalue spaces.
    Embedding(EmbeddingArgs),
    /// Empirical Nikolskii constant `||f||_q / (omega^{m/p-m/q} ||f||_p)`.
    NikolskiiPq(PqArgs),
    /// Lattice sampling chain on a manifold.
    ManifoldChain(ChainArgs),
    /// Disjointness, cover and multiplicity of a greedy lattice.
    Lattice(LatticeArgs),
}

#[derive(Args)]
struct SuiteArgs {
    /// JSON config; omitted fields take the suite defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    output_dir: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct NamedSuiteArgs {
    #[arg(long)]
    name: Option<String>,
    #[command(flatten)]
    common: SuiteArgs,
}

#[derive(Args)]
struct FunctionArgs {
    /// circle, torus<m> (e.g. torus2) or sphere2.
    #[arg(long)]
    manifold: Manifold,
    /// Degree of the test function.
    #[arg(long)]
    n: usize,
    /// monomial, fejer, zonal, kernel, random, real_random or polynomial.
    #[arg(long = "f", default_value = "random")]
    family: Family,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    stream: u64,
}

impl FunctionArgs {
    fn build(&self) -> Result<BandLimited> {
        Ok(self.family.build(self.manifold, self.n, self.seed, self.stream)?)
    }

    fn tag(&self, mut r: CheckReport) -> CheckReport {
        let mut p = r.params.text("f", self.family.to_string());
        if self.family.is_random() {
            p = p.int("seed", self.seed as i64).int("stream", self.stream as i64);
        }
        r.params = p;
        r
    }
}

#[derive(Args)]
struct DerivArgs {
    #[command(flatten)]
    f: FunctionArgs,
    #[arg(long)]
    p: NormParams,
    /// Order of the derivative.
    #[arg(long)]
    k: usize,
    /// Generator indices, e.g. `1,3`; defaults to `k` copies of 1.
    #[arg(long, value_delimiter = ',')]
    indices: Option<Vec<usize>>,
}

impl DerivArgs {
    fn indices(&self) -> Result<Vec<Generator>> {
        match &self.indices {
            None => Ok(vec![Generator(1); self.k]),
            Some(v) if v.len() == self.k => Ok(v.iter().map(|&j| Generator(j)).collect()),
            Some(v) => bail!("--indices has {} entries but --k is {}", v.len(), self.k),
        }
    }
}

#[derive(Args)]
struct BnArgs {
    #[command(flatten)]
    d: DerivArgs,
    #[arg(long)]
    q: NormParams,
}

#[derive(Args)]
struct SamplingArgs {
    /// Degree of the trigonometric polynomial.
    #[arg(long)]
    n: usize,
    /// Number of sampling nodes `N`.
    #[arg(long)]
    samples: usize,
    #[arg(long)]
    p: NormParams,
    #[arg(long = "f", default_value = "random")]
    family: Family,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    stream: u64,
}

#[derive(Args)]
struct ParsevalArgs {
    /// Use the spherical harmonic `Y_l^m` ...
    #[arg(long, requires = "m", conflicts_with = "n")]
    l: Option<usize>,
    #[arg(long, requires = "l", allow_hyphen_values = true)]
    m: Option<i64>,
    /// ... or a random sphere function of degree `n`.
    #[arg(long, required_unless_present = "l")]
    n: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    stream: u64,
    /// Derivative order, 1 or 2.
    #[arg(long)]
    k: usize,
}

#[derive(Args)]
struct LandauArgs {
    #[command(flatten)]
    f: FunctionArgs,
    #[arg(long, default_value_t = 1)]
    j: usize,
    #[arg(long, value_delimiter = ',', required = true)]
    eps: Vec<f64>,
    #[arg(long)]
    p: NormParams,
}

#[derive(Args)]
struct FejerArgs {
    #[arg(long)]
    p: NormParams,
    #[arg(long)]
    q: NormParams,
    #[arg(long)]
    k: usize,
    #[arg(long, value_delimiter = ',', default_value = "8,16,32,64,128")]
    n: Vec<usize>,
}

#[derive(Args)]
struct RieszArgs {
    #[command(flatten)]
    f: FunctionArgs,
    #[arg(long, default_value_t = 1)]
    j: usize,
    /// `finite` (circle only) or `series`.
    #[arg(long, default_value = "series")]
    method: String,
    /// Series terms per side.
    #[arg(long = "K", default_value_t = 1000)]
    big_k: usize,
}

#[derive(Args)]
struct RieszLaplacianArgs {
    #[command(flatten)]
    f: FunctionArgs,
    #[arg(long = "K", default_value_t = 1000)]
    big_k: usize,
}

#[derive(Args)]
struct EmbeddingArgs {
    /// circle, torus<m> (e.g. torus2) or sphere2.
    #[arg(long)]
    manifold: Manifold,
    #[arg(long)]
    omega: f64,
    /// Largest degree of the eigenbasis.
    #[arg(long)]
    degree_cap: usize,
}

#[derive(Args)]
struct PqArgs {
    #[command(flatten)]
    f: FunctionArgs,
    /// Band limit; defaults to the degree.
    #[arg(long)]
    omega: Option<f64>,
    #[arg(long)]
    p: NormParams,
    #[arg(long)]
    q: NormParams,
}

#[derive(Args)]
struct ChainArgs {
    #[command(flatten)]
    f: FunctionArgs,
    /// Band limit; defaults to the degree.
    #[arg(long)]
    omega: Option<f64>,
    /// Lattice radius; defaults to `1.6 / omega`.
    #[arg(long)]
    r: Option<f64>,
    #[arg(long)]
    p: NormParams,
    /// One or more exponents, e.g. `2,inf`.
    #[arg(long, value_delimiter = ',', required = true)]
    q: Vec<NormParams>,
    /// Exponent `l > m/p` of the constant; defaults to `2m`.
    #[arg(long)]
    l: Option<u32>,
    /// Group grid size.
    #[arg(long, default_value_t = 8)]
    grid: usize,
    /// Sample points `g . x_i` (translated) or `g_i g . o` (composed).
    #[arg(long, default_value = "translated")]
    order: String,
}

#[derive(Args)]
struct LatticeArgs {
    /// circle, torus<m> (e.g. torus2) or sphere2.
    #[arg(long)]
    manifold: Manifold,
    #[arg(long)]
    r: f64,
    #[arg(long, default_value_t = DEFAULT_PROBES)]
    probes: usize,
}

fn suite_config(name: Option<&str>, args: &SuiteArgs) -> Result<SuiteConfig> {
    let mut cfg = match (&args.config, name) {
        (Some(path), name) => {
            let cfg = SuiteConfig::from_file(path).with_context(|| format!("reading config {}", path.display()))?;
            if let Some(name) = name {
                if cfg.suite != name {
                    bail!("config {} is for suite {:?}, not {name:?}", path.display(), cfg.suite);
                }
            }
            cfg
        }
        (None, Some(name)) => SuiteConfig::default_for(name)?,
        (None, None) => bail!("give --name or --config"),
    };
    cfg.apply_env_seed()?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(dir) = &args.output_dir {
        cfg.output_dir = dir.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn suite(name: Option<&str>, args: &SuiteArgs) -> Result<i32> {
    let cfg = suite_config(name, args)?;
    let outcome = run_suite(&cfg)?;
    let asserted = outcome.reports.iter().filter(|r| r.asserted).count();
    eprintln!(
        "{}: {} reports, {} asserted, {} failed, seed {}, written to {}",
        cfg.suite,
        outcome.reports.len(),
        asserted,
        outcome.failures,
        cfg.seed,
        cfg.output_dir.display()
    );
    for r in outcome.reports.iter().filter(|r| r.is_failure()) {
        eprintln!("FAILED {} {} ratio {}", r.check_name, r.params.flatten(), r.ratio);
    }
    Ok(outcome.exit_code())
}

fn emit(reports: Vec<CheckReport>) -> Result<i32> {
    print!("{}", verify::to_jsonl(&reports)?);
    Ok(if reports.iter().any(CheckReport::is_failure) {
        1
    } else {
        0
    })
}

fn run(cli: Cli) -> Result<i32> {
    let reports = match cli.command {
        Command::CircleCore(a) => return suite(Some("circle-core"), &a),
        Command::SphereCore(a) => return suite(Some("sphere-core"), &a),
        Command::Sampling(a) => return suite(Some("sampling"), &a),
        Command::Asymptotics(a) => return suite(Some("asymptotics"), &a),
        Command::Suite(a) => return suite(a.name.as_deref(), &a.common),
        Command::Bernstein(a) => {
            let f = a.f.build()?;
            vec![a.f.tag(verify::bernstein_check(&f, a.f.n, a.p, &a.indices()?)?)]
        }
        Command::Bn(a) => {
            let f = a.d.f.build()?;
            vec![a.d.f.tag(verify::bn_check(&f, a.d.f.n, a.d.p, a.q, &a.d.indices()?)?)]
        }
        Command::NikolskiiSampling(a) => {
            let f = FunctionArgs {
                manifold: Manifold::Circle,
                n: a.n,
                family: a.family,
                seed: a.seed,
                stream: a.stream,
            };
            let t = f.build()?;
            verify::nikolskii_sampling_check(&t, a.n, a.samples, a.p)?
                .into_iter()
                .map(|r| f.tag(r))
                .collect()
        }
        Command::Parseval(a) => {
            let (f, tag) = match (a.l, a.m, a.n) {
                (Some(l), Some(m), _) => (BandLimited::spherical_harmonic(l, l, m)?, format!("Y_{l}^{m}")),
                (_, _, Some(n)) => (
                    Family::Random.build(Manifold::Sphere2, n, a.seed, a.stream)?,
                    "random".to_string(),
                ),
                _ => bail!("give --l and --m, or --n"),
            };
            let mut r = verify::parseval_check(&f, a.k)?;
            r.params = r.params.text("f", tag);
            if a.l.is_none() {
                r.params = r.params.int("seed", a.seed as i64).int("stream", a.stream as i64);
            }
            vec![r]
        }
        Command::Laplacian(a) => vec![a.tag(verify::laplacian_check(&a.build()?)?)],
        Command::Landau(a) => {
            let f = a.f.build()?;
            verify::landau_sweep(&f, Generator(a.j), &a.eps, a.p)?
                .into_iter()
                .map(|r| a.f.tag(r))
                .collect()
        }
        Command::FejerFit(a) => vec![verify::fejer_exponent_fit(a.p, a.q, a.k, &a.n)?],
        Command::RieszExactness(a) => {
            let method = match a.method.as_str() {
                "finite" => RieszMethod::Finite,
                "series" => RieszMethod::Series { k: a.big_k },
                other => bail!("unknown method {other:?}; use finite or series"),
            };
            let f = a.f.build()?;
            vec![a.f.tag(verify::riesz_exactness_check(&f, Generator(a.j), method)?)]
        }
        Command::RieszLaplacian(a) => {
            let f = a.f.build()?;
            let cfg = RieszConfig::new(a.f.n.max(1) as f64, a.big_k)?;
            vec![a.f.tag(verify::riesz_laplacian_check(&f, &cfg)?)]
        }
        Command::Embedding(a) => vec![verify::embedding_check(a.manifold, a.omega, a.degree_cap)?],
        Command::NikolskiiPq(a) => {
            let f = a.f.build()?;
            let omega = a.omega.unwrap_or(a.f.n.max(1) as f64);
            vec![a.f.tag(verify::nikolskii_pq_check(&f, omega, a.p, a.q)?)]
        }
        Command::ManifoldChain(a) => {
            let f = a.f.build()?;
            let omega = a.omega.unwrap_or(a.f.n.max(1) as f64);
            let lat = build_lattice(a.f.manifold, a.r.unwrap_or(1.6 / omega))?;
            let l = a.l.unwrap_or(2 * a.f.manifold.dim() as u32);
            let order = match a.order.as_str() {
                "translated" => SampleOrder::Translated,
                "composed" => SampleOrder::Composed,
                other => bail!("unknown order {other:?}; use translated or composed"),
            };
            verify::manifold_chain_sweep_ordered(&f, &lat, omega, a.p, &a.q, l, a.grid, order)?
                .into_iter()
                .map(|r| a.f.tag(r))
                .collect()
        }
        Command::Lattice(a) => {
            let lat = build_lattice(a.manifold, a.r)?;
            vec![verify::lattice_check(&lat, a.probes)?]
        }
    };
    emit(reports)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
