//! Command-line front end: `mapface <enumerate|sample|bounds|configmodel|gnp> ...`.

use crate::bounds::{self, Provenance};
use crate::configmodel::{self, DegreeSequence, FixedRotation};
use crate::embed_random::{self, Estimate, Sampler};
use crate::enumerate::{self, CensusJob, FaceCensus};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::substream;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use std::ffi::OsString;
use std::fmt::Write as _;
use std::time::Instant;

pub const EXIT_OK: i32 = 0;
pub const EXIT_REFUSAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "mapface", version, about = "Faces of random orientable graph embeddings")]
pub struct Cli {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[arg(long, value_enum, default_value_t = OutFormat::Csv, global = true)]
    pub out: OutFormat,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutFormat {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exhaustive face and genus census over all rotation systems.
    Enumerate(EnumerateArgs),
    /// Monte Carlo sampling of random embeddings.
    Sample(SampleArgs),
    /// Closed-form and inductive bounds on E[F(K_n)].
    Bounds(BoundsArgs),
    /// Configuration model with a fixed rotation.
    Configmodel(ConfigArgs),
    /// Faces of random embeddings of G(n, p).
    Gnp(GnpArgs),
}

#[derive(Args, Debug)]
pub struct EnumerateArgs {
    /// kn:N, gnp:N:P or file:PATH
    #[arg(long)]
    pub graph: String,
    /// Fix the rotation at the first vertex and rescale.
    #[arg(long)]
    pub fix_first: bool,
    /// Accept --fix-first on a graph asserted to be vertex-transitive.
    #[arg(long)]
    pub assume_symmetric: bool,
    /// Shard as INDEX/TOTAL (0-based index).
    #[arg(long)]
    pub shard: Option<String>,
    /// Also count faces with k distinct vertices and k edges.
    #[arg(long)]
    pub short_faces: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ProcessArg {
    Uniform,
    #[value(name = "A", alias = "a")]
    A,
    #[value(name = "B", alias = "b")]
    B,
}

#[derive(Args, Debug)]
pub struct SampleArgs {
    #[arg(long)]
    pub graph: String,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = ProcessArg::Uniform)]
    pub process: ProcessArg,
    /// Omit the per-trial rows.
    #[arg(long)]
    pub summary_only: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundsMode {
    Logsq,
    Beta,
    Lower,
    Envelope,
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    #[arg(long, value_enum)]
    pub mode: BoundsMode,
    #[arg(long)]
    pub n_max: usize,
    #[arg(long)]
    pub n_min: Option<usize>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ConfigAction {
    Exact,
    Formula,
    Sample,
}

#[derive(Args, Debug)]
pub struct ConfigArgs {
    /// Comma-separated degrees, optionally prefixed `degrees:`.
    #[arg(long)]
    pub degrees: String,
    #[arg(value_enum)]
    pub action: ConfigAction,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    /// Rejection-sample simple graphs.
    #[arg(long)]
    pub simple: bool,
    #[arg(long, default_value_t = 1_000_000)]
    pub max_attempts: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct GnpArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub p: f64,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub connected_only: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub argv: Vec<String>,
    pub seed: Option<u64>,
    pub version: String,
    pub wall_time_ms: u128,
    pub output_sha256: String,
}

/// Parsed graph specifier.
pub fn parse_graph(spec: &str, seed: u64) -> Result<Graph> {
    let bad = || Error::Parse(format!("bad graph spec `{spec}` (use kn:N, gnp:N:P, file:PATH)"));
    let (kind, rest) = spec.split_once(':').ok_or_else(bad)?;
    match kind {
        "kn" => Ok(Graph::complete(rest.parse().map_err(|_| bad())?)),
        "gnp" => {
            let (n, p) = rest.split_once(':').ok_or_else(bad)?;
            let n: usize = n.parse().map_err(|_| bad())?;
            let p: f64 = p.parse().map_err(|_| bad())?;
            Graph::gnp(n, p, &mut substream(seed, u64::MAX))
        }
        "file" => {
            let text = std::fs::read_to_string(rest).map_err(|e| Error::Parse(format!("{rest}: {e}")))?;
            Graph::from_edge_list(&text)
        }
        "degrees" => Err(Error::Parse("degrees: specifies a configuration model; use the configmodel subcommand".into())),
        _ => Err(bad()),
    }
}

fn parse_degrees(s: &str) -> Result<DegreeSequence> {
    DegreeSequence::parse(s.strip_prefix("degrees:").unwrap_or(s))
}

fn parse_shard(s: &str) -> Result<(u64, u64)> {
    let bad = || Error::Parse(format!("bad shard `{s}`, expected INDEX/TOTAL"));
    let (i, t) = s.split_once('/').ok_or_else(bad)?;
    let (i, t): (u64, u64) = (i.parse().map_err(|_| bad())?, t.parse().map_err(|_| bad())?);
    if t == 0 || i >= t {
        return Err(bad());
    }
    Ok((i, t))
}

fn budget_override() -> Result<Option<u64>> {
    match std::env::var("MAPFACE_BUDGET") {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::Parse(format!("MAPFACE_BUDGET=`{v}` is not an integer"))),
        Err(_) => Ok(None),
    }
}

struct Output {
    csv: String,
    json: Value,
    seed: Option<u64>,
}

fn census_json(c: &FaceCensus) -> Value {
    json!({
        "by_faces": c.by_faces,
        "by_genus": c.by_genus,
        "total": c.total,
        "expected_faces": c.expected_faces().to_string(),
        "expected_faces_f64": c.expected_faces_f64(),
        "expected_genus": c.expected_genus().to_string(),
        "expected_genus_f64": c.expected_genus_f64(),
        "short_faces": c.short_faces,
    })
}

fn run_enumerate(a: &EnumerateArgs) -> Result<Output> {
    let graph = parse_graph(&a.graph, a.seed)?;
    let mut job = CensusJob::new(graph).fix_first(a.fix_first);
    job.assume_symmetric = a.assume_symmetric;
    if let Some(s) = &a.shard {
        let (i, t) = parse_shard(s)?;
        job = job.shard(i, t);
    }
    if let Some(b) = budget_override()? {
        job = job.budget(b);
    }
    if a.short_faces {
        job = job.with_short_faces();
    }
    let c = enumerate::run_census(&job)?;
    let mut csv = String::from("view,value,count\n");
    for (f, n) in &c.by_faces {
        writeln!(csv, "faces,{f},{n}").unwrap();
    }
    for (g, n) in &c.by_genus {
        writeln!(csv, "genus,{g},{n}").unwrap();
    }
    for (k, n) in &c.short_faces {
        writeln!(csv, "short_faces,{k},{n}").unwrap();
    }
    writeln!(csv, "# total={}", c.total).unwrap();
    writeln!(csv, "# E(F)={} ~ {:.6}", c.expected_faces(), c.expected_faces_f64()).unwrap();
    writeln!(csv, "# E(g)={} ~ {:.6}", c.expected_genus(), c.expected_genus_f64()).unwrap();
    Ok(Output {
        csv,
        json: census_json(&c),
        seed: None,
    })
}

fn estimate_json(e: &Estimate) -> Value {
    serde_json::to_value(e).expect("estimate serializes")
}

fn run_sample(a: &SampleArgs) -> Result<Output> {
    let graph = parse_graph(&a.graph, a.seed)?;
    let sampler = match a.process {
        ProcessArg::Uniform => Sampler::Uniform,
        ProcessArg::A => Sampler::ProcessA,
        ProcessArg::B => Sampler::ProcessB,
    };
    if sampler != Sampler::Uniform && !(graph.is_complete() && graph.n() >= 3) {
        return Err(Error::Domain("processes A and B run on kn:N with N >= 3".into()));
    }
    if a.trials == 0 {
        return Err(Error::Domain("need at least one trial".into()));
    }
    let faces = embed_random::trial_values(a.trials, a.seed, |rng| {
        embed_random::sample_with(sampler, &graph, rng).count_faces() as u64
    });
    let (m, n, k) = (graph.m(), graph.n(), graph.components().0);
    let genus: Vec<u64> = faces
        .iter()
        .map(|&f| crate::combmap::genus_from_counts(m, n, f as usize, k).map(|g| g as u64))
        .collect::<Result<_>>()?;
    let moments = |v: &[u64]| {
        v.iter()
            .fold((0u128, 0u128), |(s, s2), &x| (s + x as u128, s2 + (x as u128) * (x as u128)))
    };
    let (sf, sf2) = moments(&faces);
    let (sg, sg2) = moments(&genus);
    let ef = Estimate::from_sums(sf, sf2, a.trials, a.seed);
    let eg = Estimate::from_sums(sg, sg2, a.trials, a.seed);
    let mut csv = String::from("trial,faces,genus\n");
    if !a.summary_only {
        for (i, (f, g)) in faces.iter().zip(&genus).enumerate() {
            writeln!(csv, "{i},{f},{g}").unwrap();
        }
    }
    writeln!(csv, "mean,{},{}", ef.mean, eg.mean).unwrap();
    writeln!(csv, "stderr,{},{}", ef.stderr, eg.stderr).unwrap();
    writeln!(csv, "ci95_lo,{},{}", ef.ci95.0, eg.ci95.0).unwrap();
    writeln!(csv, "ci95_hi,{},{}", ef.ci95.1, eg.ci95.1).unwrap();
    let mut j = json!({ "faces": estimate_json(&ef), "genus": estimate_json(&eg) });
    if !a.summary_only {
        j["trials"] = json!(faces);
    }
    Ok(Output {
        csv,
        json: j,
        seed: Some(a.seed),
    })
}

fn run_bounds(a: &BoundsArgs) -> Result<Output> {
    let header = "n,bound,mode,nu,mu,ref_5ln,ref_5ln_plus5,ref_lower\n";
    let mut csv = String::from(header);
    let refs = |n: usize| {
        let l = (n as f64).ln();
        (5.0 * l, 5.0 * l + 5.0, 0.5 * l - 2.0)
    };
    let row = |csv: &mut String, n: usize, b: f64, mode: &str, nu: Option<f64>, mu: Option<f64>| {
        let (r1, r2, r3) = refs(n);
        let opt = |x: Option<f64>| x.map_or(String::new(), |v| v.to_string());
        writeln!(csv, "{n},{b},{mode},{},{},{r1},{r2},{r3}", opt(nu), opt(mu)).unwrap();
    };
    let mut rows = Vec::new();
    match a.mode {
        BoundsMode::Logsq => {
            let h = bounds::Harmonics::new(a.n_max);
            for n in a.n_min.unwrap_or(4).max(4)..=a.n_max {
                let b = h.logsq_upper(n)?;
                row(&mut csv, n, b, "logsq", None, None);
                rows.push(json!({"n": n, "bound": b}));
            }
        }
        BoundsMode::Lower => {
            for n in a.n_min.unwrap_or(3).max(3)..=a.n_max {
                let b = bounds::lower_bound(n)?;
                row(&mut csv, n, b, "lower", None, None);
                rows.push(json!({"n": n, "bound": b}));
            }
        }
        BoundsMode::Envelope => {
            for n in a.n_min.unwrap_or(4158).max(4158)..=a.n_max {
                let b = bounds::asymptotic_upper(n as f64)?;
                row(&mut csv, n, b, "envelope", None, None);
                rows.push(json!({"n": n, "bound": b}));
            }
        }
        BoundsMode::Beta => {
            let t = bounds::beta_table(a.n_max)?;
            for e in &t.entries {
                if e.n < a.n_min.unwrap_or(2) {
                    continue;
                }
                let (mode, nu, mu) = match &e.provenance {
                    Provenance::Exact { .. } => ("exact", None, None),
                    Provenance::Published => ("published", None, None),
                    Provenance::Logsq => ("logsq", None, None),
                    Provenance::Decomposition { nu, mu, .. } => ("decomposition", Some(*nu), Some(*mu)),
                };
                row(&mut csv, e.n, e.beta, mode, nu, mu);
            }
            return Ok(Output {
                csv,
                json: serde_json::to_value(&t).expect("table serializes"),
                seed: None,
            });
        }
    }
    Ok(Output {
        csv,
        json: json!({"mode": a.mode, "rows": rows}),
        seed: None,
    })
}

fn run_configmodel(a: &ConfigArgs) -> Result<Output> {
    let ds = parse_degrees(&a.degrees)?;
    let r = FixedRotation::canonical(&ds);
    let budget = budget_override()?.unwrap_or(configmodel::DEFAULT_MATCHING_BUDGET);
    let m = ds.m();
    let (lo, hi) = configmodel::multigraph_bounds(m);
    let stats = configmodel::simple_statistics(&ds, None);
    let mut csv;
    let json;
    match a.action {
        ConfigAction::Exact => {
            let e = configmodel::expected_faces_exact_cm(&r, budget)?;
            csv = String::from("quantity,value,float\n");
            writeln!(csv, "expected_faces,{e},{}", e.to_f64().unwrap_or(f64::NAN)).unwrap();
            writeln!(csv, "lower_bound,{lo},{}", lo.to_f64().unwrap_or(f64::NAN)).unwrap();
            writeln!(csv, "upper_bound,{hi},{}", hi.to_f64().unwrap_or(f64::NAN)).unwrap();
            writeln!(csv, "matchings,{},", configmodel::conjugacy_class_size(m)).unwrap();
            json = json!({
                "expected_faces": e.to_string(),
                "lower_bound": lo.to_string(),
                "upper_bound": hi.to_string(),
                "matchings": configmodel::conjugacy_class_size(m).to_string(),
            });
        }
        ConfigAction::Formula => {
            let o = configmodel::possible_faces(&r, m, budget)?;
            let f = configmodel::expected_faces_formula(&o.h, m);
            csv = String::from("k,h_k,g_k,h_s,g_s\n");
            for k in 1..=m {
                let get = |map: &std::collections::BTreeMap<usize, u64>| map.get(&k).copied().unwrap_or(0);
                writeln!(csv, "{k},{},{},{},{}", get(&o.h), get(&o.g), get(&o.h_s), get(&o.g_s)).unwrap();
            }
            writeln!(csv, "# formula={f} ~ {:.6}", f.to_f64().unwrap_or(f64::NAN)).unwrap();
            json = json!({"oracle": o, "formula": f.to_string()});
        }
        ConfigAction::Sample => {
            if a.trials == 0 {
                return Err(Error::Domain("need at least one trial".into()));
            }
            let lambda = stats.lambda.to_f64().unwrap_or(f64::NAN);
            if a.simple {
                let attempts = embed_random::trial_values(a.trials, a.seed, |rng| {
                    configmodel::sample_simple_map(&ds, rng, a.max_attempts).map_or(0, |s| s.attempts)
                });
                if attempts.contains(&0) {
                    return Err(Error::Exhausted(a.max_attempts));
                }
                let total: u64 = attempts.iter().sum();
                let rate = a.trials as f64 / total as f64;
                csv = String::from("quantity,value\n");
                writeln!(csv, "accepted,{}", a.trials).unwrap();
                writeln!(csv, "attempts,{total}").unwrap();
                writeln!(csv, "acceptance_rate,{rate}").unwrap();
                writeln!(csv, "lambda,{lambda}").unwrap();
                writeln!(csv, "reference_exp_minus_lambda_lambda2,{}", stats.simple_probability_reference).unwrap();
                json = json!({
                    "accepted": a.trials, "attempts": total, "acceptance_rate": rate,
                    "lambda": stats.lambda.to_string(),
                    "reference": stats.simple_probability_reference,
                });
            } else {
                let est = embed_random::monte_carlo(a.trials, a.seed, |rng| {
                    let l = configmodel::sample_matching(&ds, rng);
                    r.cycles_with(l.partners()) as u64
                });
                csv = String::from("quantity,value\n");
                writeln!(csv, "mean_faces,{}", est.mean).unwrap();
                writeln!(csv, "stderr,{}", est.stderr).unwrap();
                writeln!(csv, "ci95_lo,{}", est.ci95.0).unwrap();
                writeln!(csv, "ci95_hi,{}", est.ci95.1).unwrap();
                json = json!({"faces": estimate_json(&est)});
            }
        }
    }
    Ok(Output {
        csv,
        json,
        seed: Some(a.seed),
    })
}

fn run_gnp(a: &GnpArgs) -> Result<Output> {
    if a.trials == 0 {
        return Err(Error::Domain("need at least one trial".into()));
    }
    let rep = embed_random::gnp_experiment(a.n, a.p, a.trials, a.seed, a.connected_only)?;
    let mut csv = String::from("n,p,trials,mean,stderr,reference_ln_pn2,ratio,rejected\n");
    writeln!(
        csv,
        "{},{},{},{},{},{},{},{}",
        a.n, a.p, a.trials, rep.estimate.mean, rep.estimate.stderr, rep.reference, rep.ratio, rep.rejected
    )
    .unwrap();
    Ok(Output {
        csv,
        json: serde_json::to_value(&rep).expect("report serializes"),
        seed: Some(a.seed),
    })
}

fn dispatch(cli: &Cli) -> Result<(String, Output)> {
    Ok(match &cli.command {
        Command::Enumerate(a) => ("enumerate".into(), run_enumerate(a)?),
        Command::Sample(a) => ("sample".into(), run_sample(a)?),
        Command::Bounds(a) => ("bounds".into(), run_bounds(a)?),
        Command::Configmodel(a) => ("configmodel".into(), run_configmodel(a)?),
        Command::Gnp(a) => ("gnp".into(), run_gnp(a)?),
    })
}

/// Run with the given argv, writing the result to stdout; returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    match run_to_string(&argv) {
        Ok(s) => {
            print!("{s}");
            EXIT_OK
        }
        Err((code, msg)) => {
            eprint!("{msg}");
            if code == EXIT_OK {
                // --help / --version
                return EXIT_OK;
            }
            code
        }
    }
}

/// Like [`run`] but returns the rendered output, or `(exit code, message)`.
pub fn run_to_string(argv: &[OsString]) -> std::result::Result<String, (i32, String)> {
    let start = Instant::now();
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            return Err((code, e.render().to_string()));
        }
    };
    if let Some(t) = cli.threads {
        // ignore failure when a global pool already exists (repeated in-process runs)
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build_global();
    }
    let (sub, out) = match dispatch(&cli) {
        Ok(v) => v,
        Err(e) => {
            let code = if e.is_refusal() || matches!(e, Error::Consistency(_)) {
                EXIT_REFUSAL
            } else {
                EXIT_USAGE
            };
            return Err((code, format!("error: {e}\n")));
        }
    };
    let body = match cli.out {
        OutFormat::Csv => out.csv,
        OutFormat::Json => serde_json::to_string_pretty(&out.json).expect("json serializes"),
    };
    let manifest = RunManifest {
        subcommand: sub,
        argv: argv.iter().map(|a| a.to_string_lossy().into_owned()).collect(),
        seed: out.seed,
        version: env!("CARGO_PKG_VERSION").to_string(),
        wall_time_ms: start.elapsed().as_millis(),
        output_sha256: hex_digest(body.as_bytes()),
    };
    Ok(match cli.out {
        OutFormat::Csv => format!("{body}# manifest {}\n", serde_json::to_string(&manifest).unwrap()),
        OutFormat::Json => {
            let doc = json!({"result": serde_json::from_str::<Value>(&body).unwrap(), "manifest": manifest});
            format!("{}\n", serde_json::to_string_pretty(&doc).unwrap())
        }
    })
}

fn hex_digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}
