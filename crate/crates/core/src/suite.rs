//! Predefined suites and their report files.
//!
//! A suite expands a [`SuiteConfig`] into independent check jobs, runs
//! them (in parallel under the `parallel` feature; the report order does
//! not depend on it) and writes `report.jsonl`, `report.csv` and one SVG
//! log-log plot per check name into the output directory.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::bandlimited::BandLimited;
use crate::error::{invalid, Result};
use crate::geometry::{Generator, Manifold};
use crate::lattice::build_lattice;
use crate::norms::NormParams;
use crate::riesz::{RieszConfig, RieszOperator};
use crate::verify::{self, CheckReport, Family, Params, RieszMethod};

pub const SUITES: [&str; 4] = ["circle-core", "sphere-core", "sampling", "asymptotics"];

/// Environment variable that overrides the configured seed.
pub const SEED_ENV: &str = "RIESZ_SEED";

/// Parameter sweeps. Each suite reads the lists it needs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweeps {
    pub n: Vec<usize>,
    pub p: Vec<NormParams>,
    pub q: Vec<NormParams>,
    pub k: Vec<usize>,
    pub r: Vec<f64>,
    #[serde(rename = "K")]
    pub big_k: Vec<usize>,
    pub omega: Vec<f64>,
    pub eps: Vec<f64>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweeps {
    n: Option<Vec<usize>>,
    p: Option<Vec<NormParams>>,
    q: Option<Vec<NormParams>>,
    k: Option<Vec<usize>>,
    r: Option<Vec<f64>>,
    #[serde(rename = "K")]
    big_k: Option<Vec<usize>>,
    omega: Option<Vec<f64>>,
    eps: Option<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    pub suite: String,
    /// Restricts the suite to checks on one manifold.
    pub manifold: Option<Manifold>,
    /// Seed of every random test function; below `2^63`.
    pub seed: u64,
    pub output_dir: PathBuf,
    pub sweeps: Sweeps,
    /// Random test functions per sweep point.
    pub functions: usize,
    /// Group grid size for suprema over the group (at least 8).
    pub group_grid: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    suite: String,
    manifold: Option<Manifold>,
    seed: Option<u64>,
    output_dir: Option<PathBuf>,
    sweeps: Option<RawSweeps>,
    functions: Option<usize>,
    group_grid: Option<usize>,
}

const P123: [NormParams; 3] = [NormParams::ONE, NormParams::TWO, NormParams::INF];
const EPS: [f64; 4] = [0.01, 0.1, 1.0, 10.0];
const OMEGAS: [f64; 4] = [4.0, 8.0, 16.0, 32.0];

impl SuiteConfig {
    /// The default configuration of a named suite.
    pub fn default_for(suite: &str) -> Result<Self> {
        let sweeps = match suite {
            "circle-core" => Sweeps {
                n: vec![1, 2, 3, 4, 6, 8, 12, 16, 24, 32, 48, 64],
                p: P123.to_vec(),
                q: vec![NormParams::TWO, NormParams::INF],
                k: vec![0, 1, 2, 3],
                r: vec![0.1],
                big_k: vec![100, 1000, 10_000],
                omega: OMEGAS.to_vec(),
                eps: EPS.to_vec(),
            },
            "sphere-core" => Sweeps {
                n: vec![2, 5, 10, 20],
                p: P123.to_vec(),
                q: vec![NormParams::INF],
                k: vec![1, 2, 3],
                r: vec![0.1],
                big_k: vec![100, 1000, 10_000],
                omega: vec![0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0],
                eps: EPS.to_vec(),
            },
            "sampling" => Sweeps {
                n: vec![8],
                p: vec![NormParams::TWO],
                q: vec![NormParams::TWO, NormParams::INF],
                k: vec![0],
                r: vec![0.05, 0.1, 0.2],
                big_k: vec![1000],
                omega: OMEGAS.to_vec(),
                eps: EPS.to_vec(),
            },
            "asymptotics" => Sweeps {
                n: vec![8, 16, 32, 64, 128],
                p: vec![NormParams::ONE, NormParams::TWO],
                q: vec![NormParams::TWO, NormParams::INF],
                k: vec![0, 1],
                r: vec![0.1],
                big_k: vec![1000],
                omega: OMEGAS.to_vec(),
                eps: EPS.to_vec(),
            },
            other => {
                return Err(invalid(format!(
                    "unknown suite {other:?}; known: {}",
                    SUITES.join(", ")
                )))
            }
        };
        Ok(SuiteConfig {
            suite: suite.to_string(),
            manifold: None,
            seed: 1,
            output_dir: PathBuf::from(format!("reports/{suite}")),
            sweeps,
            functions: 2,
            group_grid: 8,
        })
    }

    /// Parses a JSON config; omitted fields take the suite's defaults.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawConfig = serde_json::from_str(text)?;
        let mut cfg = SuiteConfig::default_for(&raw.suite)?;
        cfg.manifold = raw.manifold;
        if let Some(s) = raw.seed {
            cfg.seed = s;
        }
        if let Some(d) = raw.output_dir {
            cfg.output_dir = d;
        }
        if let Some(f) = raw.functions {
            cfg.functions = f;
        }
        if let Some(g) = raw.group_grid {
            cfg.group_grid = g;
        }
        if let Some(s) = raw.sweeps {
            let w = &mut cfg.sweeps;
            macro_rules! take {
                ($($field:ident),*) => {$(if let Some(v) = s.$field { w.$field = v; })*};
            }
            take!(n, p, q, k, r, big_k, omega, eps);
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Replaces the seed with `RIESZ_SEED` when that variable is set.
    pub fn apply_env_seed(&mut self) -> Result<()> {
        if let Ok(v) = std::env::var(SEED_ENV) {
            self.seed = v
                .trim()
                .parse()
                .map_err(|_| invalid(format!("{SEED_ENV} must be an unsigned integer, got {v:?}")))?;
            self.validate()?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if !SUITES.contains(&self.suite.as_str()) {
            return Err(invalid(format!("unknown suite {:?}", self.suite)));
        }
        if self.seed > i64::MAX as u64 {
            return Err(invalid("seed must be below 2^63"));
        }
        let s = &self.sweeps;
        let lens = [
            ("n", s.n.len()),
            ("p", s.p.len()),
            ("q", s.q.len()),
            ("k", s.k.len()),
            ("r", s.r.len()),
            ("K", s.big_k.len()),
            ("omega", s.omega.len()),
            ("eps", s.eps.len()),
        ];
        if let Some((name, _)) = lens.iter().find(|(_, l)| *l == 0) {
            return Err(invalid(format!("sweep {name} is empty")));
        }
        if s.omega
            .iter()
            .chain(&s.eps)
            .chain(&s.r)
            .any(|v| !(*v > 0.0) || !v.is_finite())
        {
            return Err(invalid("omega, eps and r must be positive and finite"));
        }
        if s.big_k.contains(&0) {
            return Err(invalid("K must be positive"));
        }
        if self.functions == 0 {
            return Err(invalid("functions must be positive"));
        }
        if self.group_grid < 8 {
            return Err(invalid("group_grid must be at least 8"));
        }
        Ok(())
    }

    fn wants(&self, m: Manifold) -> bool {
        self.manifold.is_none_or(|x| x == m)
    }
}

type Job<'a> = Box<dyn Fn() -> Result<Vec<CheckReport>> + Send + Sync + 'a>;

/// A test function with the provenance recorded in its reports.
struct Member {
    family: Family,
    stream: u64,
    f: BandLimited,
}

impl Member {
    fn tag(&self, mut r: CheckReport, seed: u64) -> CheckReport {
        let mut p = r.params.text("f", self.family.to_string());
        if self.family.is_random() {
            p = p.int("seed", seed as i64).int("stream", self.stream as i64);
        }
        r.params = p;
        r
    }
}

fn stream_id(tag: u64, n: usize, i: usize) -> u64 {
    (tag << 40) | ((n as u64) << 16) | i as u64
}

struct Ctx<'a> {
    cfg: &'a SuiteConfig,
}

impl Ctx<'_> {
    fn member(&self, family: Family, m: Manifold, n: usize, stream: u64) -> Result<Member> {
        Ok(Member {
            family,
            stream,
            f: family.build(m, n, self.cfg.seed, stream)?,
        })
    }

    /// The fixed families followed by `functions` draws of `random`.
    fn members(&self, m: Manifold, n: usize, fixed: &[Family], random: Family, tag: u64) -> Result<Vec<Member>> {
        let mut out: Vec<Member> = fixed.iter().map(|&f| self.member(f, m, n, 0)).collect::<Result<_>>()?;
        for i in 0..self.cfg.functions {
            out.push(self.member(random, m, n, stream_id(tag, n, i))?);
        }
        Ok(out)
    }
}

fn pairs(ps: &[NormParams], qs: &[NormParams]) -> Vec<(NormParams, NormParams)> {
    let mut out = Vec::new();
    for &p in ps {
        for &q in qs {
            if p.p() <= q.p() {
                out.push((p, q));
            }
        }
    }
    out
}

fn cyclic_indices(d: usize, k: usize) -> Vec<Generator> {
    (0..k).map(|i| Generator(i % d + 1)).collect()
}

fn bernstein_jobs<'a>(
    ctx: &'a Ctx<'a>,
    m: Manifold,
    ns: Vec<usize>,
    tag: u64,
    fixed: &'a [Family],
    random: Family,
) -> Vec<Job<'a>> {
    let cfg = ctx.cfg;
    ns.into_iter()
        .map(move |n| -> Job<'a> {
            Box::new(move || {
                let mut out = Vec::new();
                for mem in ctx.members(m, n, fixed, random, tag)? {
                    for &k in &cfg.sweeps.k {
                        let idx = cyclic_indices(m.generator_count(), k);
                        for &p in &cfg.sweeps.p {
                            out.push(mem.tag(verify::bernstein_check(&mem.f, n, p, &idx)?, cfg.seed));
                        }
                    }
                }
                Ok(out)
            })
        })
        .collect()
}

fn landau_jobs<'a>(ctx: &'a Ctx<'a>, m: Manifold, n: usize, count: usize, tag: u64) -> Vec<Job<'a>> {
    let cfg = ctx.cfg;
    (0..count)
        .map(move |i| -> Job<'a> {
            Box::new(move || {
                let mem = ctx.member(Family::Random, m, n, stream_id(tag, n, i))?;
                let mut out = Vec::new();
                for j in m.generators() {
                    for &p in &cfg.sweeps.p {
                        for r in verify::landau_sweep(&mem.f, j, &cfg.sweeps.eps, p)? {
                            out.push(mem.tag(r, cfg.seed));
                        }
                    }
                }
                Ok(out)
            })
        })
        .collect()
}

fn circle_core<'a>(ctx: &'a Ctx<'a>) -> Vec<Job<'a>> {
    let cfg = ctx.cfg;
    let s = &cfg.sweeps;
    let mut jobs: Vec<Job<'a>> = Vec::new();
    if cfg.wants(Manifold::Circle) {
        let c = Manifold::Circle;
        const FIXED: [Family; 2] = [Family::Monomial, Family::Fejer];
        jobs.extend(bernstein_jobs(ctx, c, s.n.clone(), 1, &FIXED, Family::Random));
        for &n in &s.n {
            jobs.push(Box::new(move || {
                let mut out = Vec::new();
                for mem in ctx.members(c, n, &FIXED, Family::Random, 2)? {
                    for &k in &s.k {
                        for (p, q) in pairs(&s.p, &s.q) {
                            out.push(mem.tag(verify::bn_check(&mem.f, n, p, q, &vec![Generator(1); k])?, cfg.seed));
                        }
                    }
                }
                Ok(out)
            }));
        }
        for &n in s.n.iter().filter(|&&n| n <= 32) {
            let mut counts = vec![n, 2 * n, 2 * n + 1, 4 * n, 8 * n];
            counts.sort_unstable();
            counts.dedup();
            for big_n in counts {
                jobs.push(Box::new(move || {
                    let mut out = Vec::new();
                    for mem in ctx.members(c, n, &FIXED, Family::Random, 3)?.iter().take(3) {
                        for &p in &s.p {
                            for r in verify::nikolskii_sampling_check(&mem.f, n, big_n, p)? {
                                out.push(mem.tag(r, cfg.seed));
                            }
                        }
                    }
                    Ok(out)
                }));
            }
        }
        for &n in &s.n {
            jobs.push(Box::new(move || {
                let mut out = Vec::new();
                for mem in ctx.members(c, n, &[Family::Monomial], Family::Random, 4)? {
                    out.push(mem.tag(
                        verify::riesz_exactness_check(&mem.f, Generator(1), RieszMethod::Finite)?,
                        cfg.seed,
                    ));
                    for &k in &s.big_k {
                        let r = verify::riesz_exactness_check(&mem.f, Generator(1), RieszMethod::Series { k })?;
                        out.push(mem.tag(r, cfg.seed));
                    }
                }
                Ok(out)
            }));
        }
        jobs.extend(landau_jobs(ctx, c, 8, cfg.functions, 5));
    }
    let t2 = Manifold::Torus(2);
    if cfg.wants(t2) {
        let ns: Vec<usize> = s.n.iter().cloned().filter(|&n| n <= 8).collect();
        jobs.extend(bernstein_jobs(
            ctx,
            t2,
            ns.clone(),
            6,
            &[Family::Monomial],
            Family::Random,
        ));
        jobs.extend(landau_jobs(ctx, t2, 4, cfg.functions, 7));
        for n in ns {
            jobs.push(Box::new(move || {
                let mut out = Vec::new();
                for mem in ctx.members(t2, n, &[], Family::Random, 8)? {
                    out.push(mem.tag(verify::laplacian_check(&mem.f)?, cfg.seed));
                    for k in 1..=2 {
                        out.push(mem.tag(verify::parseval_check(&mem.f, k)?, cfg.seed));
                    }
                }
                Ok(out)
            }));
        }
    }
    jobs
}

/// Index tuples used by the sphere Bernstein sweep: every tuple for
/// `k <= 2`; for `k = 3` the pure powers and the permutations of `(1,2,3)`.
pub fn sphere_tuples(k: usize) -> Vec<Vec<Generator>> {
    let all = verify::index_tuples(3, k);
    if k <= 2 {
        return all;
    }
    all.into_iter()
        .filter(|t| {
            let mut s: Vec<usize> = t.iter().map(|g| g.0).collect();
            s.sort_unstable();
            s.dedup();
            s.len() == 1 || s.len() == t.len()
        })
        .collect()
}

fn sphere_core<'a>(ctx: &'a Ctx<'a>) -> Vec<Job<'a>> {
    let cfg = ctx.cfg;
    let s = &cfg.sweeps;
    let m = Manifold::Sphere2;
    let mut jobs: Vec<Job<'a>> = Vec::new();
    if !cfg.wants(m) {
        return jobs;
    }
    for &n in &s.n {
        jobs.push(Box::new(move || {
            let mut out = Vec::new();
            for mem in ctx.members(m, n, &[], Family::Random, 10)? {
                out.push(mem.tag(verify::laplacian_check(&mem.f)?, cfg.seed));
                if n <= 10 {
                    for k in 1..=2 {
                        out.push(mem.tag(verify::parseval_check(&mem.f, k)?, cfg.seed));
                    }
                }
            }
            Ok(out)
        }));
        for &k in &s.k {
            for idx in sphere_tuples(k) {
                jobs.push(Box::new(move || {
                    let mut out = Vec::new();
                    for mem in ctx.members(m, n, &[], Family::Polynomial, 11)? {
                        for &p in &s.p {
                            out.push(mem.tag(verify::bernstein_check(&mem.f, n, p, &idx)?, cfg.seed));
                        }
                    }
                    Ok(out)
                }));
            }
            jobs.push(Box::new(move || {
                let mem = ctx.member(Family::Monomial, m, n, 0)?;
                s.p.iter()
                    .map(|&p| Ok(mem.tag(verify::bernstein_check(&mem.f, n, p, &vec![Generator(3); k])?, cfg.seed)))
                    .collect()
            }));
        }
    }
    let cap = s.n.iter().cloned().max().unwrap_or(0);
    for &w in &s.omega {
        jobs.push(Box::new(move || Ok(vec![verify::embedding_check(m, w, cap)?])));
    }
    for l in 1..=8usize {
        for &k in &s.big_k {
            jobs.push(Box::new(move || {
                let rc = RieszConfig::new(l as f64, k)?;
                let ops = m
                    .generators()
                    .map(|j| RieszOperator::assemble(m, l, j, &rc))
                    .collect::<Result<Vec<_>>>()?;
                let mut out = Vec::new();
                for mm in -(l as i64)..=l as i64 {
                    let y = BandLimited::spherical_harmonic(l, l, mm)?;
                    let tag = |r: CheckReport| {
                        let p = r.params.text("f", "harmonic").int("m", mm);
                        CheckReport { params: p, ..r }
                    };
                    for op in &ops {
                        out.push(tag(verify::riesz_exactness_with(&y, op)?));
                    }
                    out.push(tag(verify::riesz_laplacian_check_with(&y, &ops)?));
                }
                Ok(out)
            }));
        }
    }
    jobs.extend(landau_jobs(ctx, m, 6, cfg.functions, 12));
    jobs
}

/// Stability of the `ratio` of each report group.
fn stability(name: &str, params: Params, reports: &[CheckReport]) -> Result<CheckReport> {
    let values: Vec<f64> = reports.iter().map(|r| r.ratio).collect();
    verify::stability_check(name, params, &values)
}

fn sampling<'a>(ctx: &'a Ctx<'a>) -> Vec<Job<'a>> {
    let cfg = ctx.cfg;
    let s = &cfg.sweeps;
    let mut jobs: Vec<Job<'a>> = Vec::new();
    let grid = cfg.group_grid;
    for m in [Manifold::Circle, Manifold::Sphere2]
        .into_iter()
        .filter(|&m| cfg.wants(m))
    {
        let dim = m.dim();
        let mut radii: Vec<f64> = s.r.clone();
        radii.extend(s.omega.iter().map(|w| 1.6 / w));
        for r in radii {
            jobs.push(Box::new(move || {
                Ok(vec![verify::lattice_check(&build_lattice(m, r)?, 20_000)?])
            }));
        }
        let fixed: &'static [Family] = match m {
            Manifold::Sphere2 => &[Family::Monomial, Family::Zonal],
            _ => &[Family::Monomial, Family::Fejer],
        };
        for &r in &s.r {
            for &n in &s.n {
                jobs.push(Box::new(move || {
                    let lat = build_lattice(m, r)?;
                    let p = s.p[0];
                    let mut out = Vec::new();
                    let qs: Vec<NormParams> = s.q.iter().cloned().filter(|q| q.p() >= p.p()).collect();
                    for mem in ctx.members(m, n, fixed, Family::RealRandom, 20)? {
                        for rep in
                            verify::manifold_chain_sweep(&mem.f, &lat, n.max(1) as f64, p, &qs, 2 * dim as u32, grid)?
                        {
                            out.push(mem.tag(rep, cfg.seed));
                        }
                    }
                    Ok(out)
                }));
            }
        }
        // constants along omega: the extremal family of each manifold
        let (family, p) = match m {
            Manifold::Sphere2 => (Family::Zonal, NormParams::TWO),
            _ => (Family::Fejer, NormParams::ONE),
        };
        jobs.push(Box::new(move || {
            let mut chain = Vec::new();
            let mut pq = Vec::new();
            for &w in &s.omega {
                let n = w.floor() as usize;
                let mem = ctx.member(family, m, n, 0)?;
                let lat = build_lattice(m, 1.6 / w)?;
                let reps = verify::manifold_chain_check(&mem.f, &lat, w, p, NormParams::INF, 2 * dim as u32, grid)?;
                chain.extend(reps.into_iter().map(|r| mem.tag(r, cfg.seed)));
                pq.push(mem.tag(verify::nikolskii_pq_check(&mem.f, w, p, NormParams::INF)?, cfg.seed));
            }
            let base = Params::new()
                .text("manifold", m.to_string())
                .text("f", family.to_string())
                .norm("p", p)
                .norm("q", NormParams::INF);
            let constants: Vec<CheckReport> = chain
                .iter()
                .filter(|r| r.check_name == "manifold_chain_constant")
                .cloned()
                .collect();
            let c_stab = stability(
                "manifold_chain_stability",
                base.clone().real("r_omega", 1.6).int("l", 2 * dim as i64),
                &constants,
            )?;
            let pq_stab = stability("nikolskii_pq_stability", base, &pq)?;
            let mut out = chain;
            out.push(c_stab);
            out.extend(pq);
            out.push(pq_stab);
            Ok(out)
        }));
    }
    jobs
}

fn asymptotics<'a>(ctx: &'a Ctx<'a>) -> Vec<Job<'a>> {
    let cfg = ctx.cfg;
    let s = &cfg.sweeps;
    let mut jobs: Vec<Job<'a>> = Vec::new();
    if cfg.wants(Manifold::Circle) {
        for &k in &s.k {
            for (p, q) in pairs(&s.p, &s.q) {
                jobs.push(Box::new(move || Ok(vec![verify::fejer_exponent_fit(p, q, k, &s.n)?])));
            }
        }
    }
    let m = Manifold::Sphere2;
    if cfg.wants(m) {
        for &k in &s.k {
            jobs.push(Box::new(move || {
                let idx = vec![Generator(1); k];
                let mut out = Vec::new();
                for &w in &s.omega {
                    let n = w.floor().max(1.0) as usize;
                    let mem = ctx.member(Family::Kernel, m, n, 0)?;
                    out.push(mem.tag(
                        verify::bn_check(&mem.f, n, NormParams::TWO, NormParams::INF, &idx)?,
                        cfg.seed,
                    ));
                }
                let params = Params::new()
                    .text("manifold", m.to_string())
                    .text("f", "kernel")
                    .norm("p", NormParams::TWO)
                    .norm("q", NormParams::INF)
                    .int("k", k as i64);
                let stab = stability("bn_stability", params, &out)?;
                out.push(stab);
                Ok(out)
            }));
        }
    }
    jobs
}

/// All reports of a suite, in a fixed order.
pub fn run_checks(cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    cfg.validate()?;
    let ctx = Ctx { cfg };
    let jobs = match cfg.suite.as_str() {
        "circle-core" => circle_core(&ctx),
        "sphere-core" => sphere_core(&ctx),
        "sampling" => sampling(&ctx),
        "asymptotics" => asymptotics(&ctx),
        other => return Err(invalid(format!("unknown suite {other:?}"))),
    };
    if jobs.is_empty() {
        return Err(invalid(format!(
            "suite {} has no checks on {}",
            cfg.suite,
            cfg.manifold.map(|m| m.to_string()).unwrap_or_default()
        )));
    }
    let results = crate::par::map_slice(&jobs, |job| job());
    let mut out = Vec::new();
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}

/// Outcome of [`run_suite`].
#[derive(Clone, Debug)]
pub struct SuiteOutcome {
    pub reports: Vec<CheckReport>,
    /// Asserted reports that failed.
    pub failures: usize,
    pub files: Vec<PathBuf>,
}

impl SuiteOutcome {
    /// Process exit status: 0 iff every asserted check passed.
    pub fn exit_code(&self) -> i32 {
        if self.failures == 0 {
            0
        } else {
            1
        }
    }
}

/// Runs a suite and writes its report files once all checks completed.
pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteOutcome> {
    let reports = run_checks(cfg)?;
    let files = write_reports(&reports, &cfg.output_dir)?;
    let failures = reports.iter().filter(|r| r.is_failure()).count();
    Ok(SuiteOutcome {
        reports,
        failures,
        files,
    })
}

/// Writes `report.jsonl`, `report.csv` and the SVG plots.
pub fn write_reports(reports: &[CheckReport], dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut files = Vec::new();
    let jsonl = dir.join("report.jsonl");
    verify::write_atomic(&jsonl, verify::to_jsonl(reports)?.as_bytes())?;
    files.push(jsonl);
    let mut csv = Vec::new();
    verify::write_csv(reports, &mut csv)?;
    let csv_path = dir.join("report.csv");
    verify::write_atomic(&csv_path, &csv)?;
    files.push(csv_path);
    for (name, svg) in plots(reports) {
        let path = dir.join(format!("{name}.svg"));
        verify::write_atomic(&path, svg.as_bytes())?;
        files.push(path);
    }
    Ok(files)
}

const X_KEYS: [&str; 6] = ["n", "omega", "K", "N", "r", "eps"];

/// One log-log plot of `ratio` per check name, against the first of
/// `n, omega, K, N, r, eps` present in that check's parameters, or against
/// the position in the report when none is.
pub fn plots(reports: &[CheckReport]) -> Vec<(String, String)> {
    let mut groups: BTreeMap<&str, Vec<&CheckReport>> = BTreeMap::new();
    for r in reports {
        groups.entry(&r.check_name).or_default().push(r);
    }
    groups
        .into_iter()
        .filter_map(|(name, rs)| {
            let key = X_KEYS.iter().find(|k| rs[0].params.get(k).is_some()).copied();
            let pts: Vec<(f64, f64, bool)> = rs
                .iter()
                .enumerate()
                .filter_map(|(i, r)| {
                    let x = match key.map(|k| r.params.get(k)) {
                        None => (i + 1) as f64,
                        Some(Some(verify::ParamValue::Int(v))) => *v as f64,
                        Some(Some(verify::ParamValue::Real(v))) => *v,
                        Some(_) => return None,
                    };
                    let ok = x > 0.0 && r.ratio > 0.0 && x.is_finite() && r.ratio.is_finite();
                    ok.then_some((x.log10(), r.ratio.log10(), r.passed || !r.asserted))
                })
                .collect();
            if pts.is_empty() {
                return None;
            }
            Some((name.to_string(), render_svg(name, key.unwrap_or("index"), &pts)))
        })
        .collect()
}

fn render_svg(title: &str, xkey: &str, pts: &[(f64, f64, bool)]) -> String {
    const W: f64 = 640.0;
    const H: f64 = 420.0;
    const M: f64 = 60.0;
    let span = |f: fn(&(f64, f64, bool)) -> f64| {
        let lo = pts.iter().map(f).fold(f64::INFINITY, f64::min);
        let hi = pts.iter().map(f).fold(f64::NEG_INFINITY, f64::max);
        if hi - lo < 1e-9 {
            (lo - 0.5, hi + 0.5)
        } else {
            (lo, hi)
        }
    };
    let (x0, x1) = span(|p| p.0);
    let (y0, y1) = span(|p| p.1);
    let sx = |x: f64| M + (x - x0) / (x1 - x0) * (W - 2.0 * M);
    let sy = |y: f64| H - M - (y - y0) / (y1 - y0) * (H - 2.0 * M);
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    );
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="24" font-family="sans-serif" font-size="16" text-anchor="middle">{title}: ratio vs {xkey} (log-log)</text>"#,
        W / 2.0
    );
    let _ = writeln!(
        s,
        r#"<path d="M{M} {M} V{b} H{r}" fill="none" stroke="black"/>"#,
        b = H - M,
        r = W - M
    );
    if (y0..=y1).contains(&0.0) {
        let y = sy(0.0);
        let _ = writeln!(
            s,
            r#"<line x1="{M}" y1="{y:.2}" x2="{}" y2="{y:.2}" stroke="grey" stroke-dasharray="4 3"/>"#,
            W - M
        );
    }
    for (v, anchor, x, y) in [(x0, "start", M, H - M + 18.0), (x1, "end", W - M, H - M + 18.0)] {
        let _ = writeln!(
            s,
            r#"<text x="{x}" y="{y}" font-family="sans-serif" font-size="11" text-anchor="{anchor}">{:.3e}</text>"#,
            10f64.powf(v)
        );
    }
    for (v, y) in [(y0, H - M), (y1, M)] {
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{y}" font-family="sans-serif" font-size="11" text-anchor="end">{:.3e}</text>"#,
            M - 4.0,
            10f64.powf(v)
        );
    }
    for &(x, y, ok) in pts {
        let colour = if ok { "steelblue" } else { "crimson" };
        let _ = writeln!(
            s,
            r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="{colour}" fill-opacity="0.6"/>"#,
            sx(x),
            sy(y)
        );
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        for s in SUITES {
            SuiteConfig::default_for(s).unwrap().validate().unwrap();
        }
        assert!(SuiteConfig::default_for("nope").is_err());
    }

    #[test]
    fn json_overrides_defaults() {
        let cfg = SuiteConfig::from_json(
            r#"{"suite": "asymptotics", "seed": 7, "output_dir": "x", "sweeps": {"n": [4, 8, 16], "p": ["inf"], "q": ["inf"]}}"#,
        )
        .unwrap();
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.sweeps.n, vec![4, 8, 16]);
        assert_eq!(cfg.sweeps.p, vec![NormParams::INF]);
        assert_eq!(cfg.sweeps.k, vec![0, 1]);
        assert!(SuiteConfig::from_json(r#"{"suite": "asymptotics", "bogus": 1}"#).is_err());
        assert!(SuiteConfig::from_json(r#"{"suite": "asymptotics", "sweeps": {"n": []}}"#).is_err());
        assert!(SuiteConfig::from_json(r#"{"suite": "unknown"}"#).is_err());
    }

    #[test]
    fn sphere_tuple_selection() {
        assert_eq!(sphere_tuples(2).len(), 9);
        assert_eq!(sphere_tuples(3).len(), 9);
    }

    #[test]
    fn small_suite_writes_files() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = SuiteConfig::default_for("asymptotics").unwrap();
        cfg.sweeps.omega = vec![2.0, 4.0];
        cfg.output_dir = dir.path().to_path_buf();
        let out = run_suite(&cfg).unwrap();
        assert_eq!(
            out.exit_code(),
            0,
            "{:?}",
            out.reports.iter().filter(|r| r.is_failure()).collect::<Vec<_>>()
        );
        assert!(out.files.iter().any(|f| f.ends_with("fejer_exponent.svg")));
        let back = verify::read_jsonl_file(&dir.path().join("report.jsonl")).unwrap();
        assert_eq!(back, out.reports);
    }
}
