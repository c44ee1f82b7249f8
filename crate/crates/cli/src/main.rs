use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use steiner_qubo::config::{Format, Interp, Overlap, Overrides, RunConfig, Sampler};
use steiner_qubo::emit::to_dot;
use steiner_qubo::pipeline::{self, ModelCounts};
use steiner_qubo::stp::write_stp;
use steiner_qubo_core::generate::RandomInstance;

#[derive(Parser)]
#[command(
    name = "steiner-qubo",
    version,
    about = "Steiner trees as QUBO models, solved by annealing"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a random connected instance in STP format.
    Gen(GenArgs),
    /// Assemble the QUBO and write it in the sparse model format.
    Build(RunArgs),
    /// Sample the model and report the decoded tree of the best sample.
    Solve(RunArgs),
    /// Report the exact optimum.
    Verify(RunArgs),
    /// Repeat solve with derived seeds and compare against the optimum.
    Bench(BenchArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value_t = 11)]
    n: usize,
    /// Number of terminals, vertex 0 included.
    #[arg(long, default_value_t = 3)]
    m: usize,
    #[arg(long, default_value_t = 100)]
    wmin: i64,
    #[arg(long, default_value_t = 1000)]
    wmax: i64,
    /// Fraction of vertex pairs joined by an edge.
    #[arg(long, default_value_t = 0.3)]
    density: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    name: Option<String>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    /// TOML file with run settings; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    instance: Option<PathBuf>,
    /// Horizon; defaults to the vertex count.
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    lambda: Option<i64>,
    /// Weight of a missing edge.
    #[arg(long)]
    big: Option<i64>,
    #[arg(long)]
    slack_bits: Option<usize>,
    #[arg(long, value_enum)]
    overlap: Option<Overlap>,
    #[arg(long, value_enum)]
    sampler: Option<Sampler>,
    #[arg(long)]
    reads: Option<usize>,
    #[arg(long)]
    sweeps: Option<usize>,
    /// Inverse temperature start and end.
    #[arg(long, num_args = 2, value_names = ["START", "END"])]
    beta: Option<Vec<f64>>,
    #[arg(long, value_enum)]
    beta_interpolation: Option<Interp>,
    /// Transverse field start and end.
    #[arg(long, num_args = 2, value_names = ["START", "END"])]
    gamma: Option<Vec<f64>>,
    #[arg(long, value_enum)]
    gamma_interpolation: Option<Interp>,
    #[arg(long)]
    trotter: Option<usize>,
    /// Energy unit for beta and gamma; defaults to lambda / 10.
    #[arg(long)]
    energy_scale: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Reduce the decoded edge set to a minimal tree before reporting.
    #[arg(long)]
    prune: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    run: RunArgs,
    #[arg(long, default_value_t = 10)]
    runs: usize,
}

impl RunArgs {
    fn overrides(&self) -> Overrides {
        let pair = |v: &Option<Vec<f64>>| v.as_ref().map(|v| [v[0], v[1]]);
        Overrides {
            instance: self.instance.clone(),
            steps: self.steps,
            lambda: self.lambda,
            big: self.big,
            slack_bits: self.slack_bits,
            overlap: self.overlap,
            sampler: self.sampler,
            reads: self.reads,
            sweeps: self.sweeps,
            beta: pair(&self.beta),
            beta_interpolation: self.beta_interpolation,
            gamma: pair(&self.gamma),
            gamma_interpolation: self.gamma_interpolation,
            trotter: self.trotter,
            energy_scale: self.energy_scale,
            seed: self.seed,
            format: self.format,
            prune: self.prune.then_some(true),
        }
    }

    fn resolve(&self) -> anyhow::Result<RunConfig> {
        let file = self.config.as_deref().map(Overrides::load).transpose()?;
        RunConfig::resolve(file.as_ref(), &self.overrides())
    }
}

fn emit(output: Option<&PathBuf>, text: &str) -> anyhow::Result<()> {
    match output {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn load(cfg: &RunConfig) -> anyhow::Result<(String, steiner_qubo_core::Graph)> {
    let path = cfg
        .instance
        .as_deref()
        .context("no instance given (use --instance)")?;
    pipeline::load_instance(path)
}

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("report serializes") + "\n"
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Gen(a) => {
            let gen = RandomInstance {
                n: a.n,
                m: a.m,
                wmin: a.wmin,
                wmax: a.wmax,
                density: a.density,
            };
            let g = gen.generate(&mut ChaCha8Rng::seed_from_u64(a.seed))?;
            let name = a
                .name
                .unwrap_or_else(|| format!("random-n{}-m{}-s{}", a.n, a.m, a.seed));
            emit(a.output.as_ref(), &write_stp(&g, Some(&name)))?;
        }
        Command::Build(a) => {
            let cfg = a.resolve()?;
            let (name, g) = load(&cfg)?;
            let q = pipeline::formulate(&g, &cfg)?;
            for w in q.warnings() {
                eprintln!("warning: {w}");
            }
            let c = ModelCounts::of(&q);
            eprintln!(
                "{} variables ({} path, {} slack, {} overlap), {} linear and {} quadratic terms",
                c.num_vars,
                c.path_vars,
                c.slack_vars,
                c.overlap_vars,
                c.linear_terms,
                c.quadratic_terms
            );
            emit(a.output.as_ref(), &pipeline::model_text(&name, &q))?;
        }
        Command::Solve(a) => {
            let cfg = a.resolve()?;
            let (name, g) = load(&cfg)?;
            let q = pipeline::formulate(&g, &cfg)?;
            let solved = pipeline::solve(&name, &q, &cfg)?;
            let text = match cfg.format {
                Format::Json => solved.report.to_json(),
                Format::Dot => to_dot(&name, &g, &solved.solution),
            };
            emit(a.output.as_ref(), &text)?;
            let r = &solved.report;
            if !r.feasible {
                eprintln!("best sample violates constraints: {:?}", r.violations);
                return Ok(ExitCode::from(2));
            }
            if !r.verified {
                eprintln!("best sample satisfies every constraint but its edges do not form a Steiner tree");
                return Ok(ExitCode::from(2));
            }
        }
        Command::Verify(a) => {
            let cfg = a.resolve()?;
            let (name, g) = load(&cfg)?;
            emit(a.output.as_ref(), &json(&pipeline::verify(&name, &g)?))?;
        }
        Command::Bench(b) => {
            let cfg = b.run.resolve()?;
            let (name, g) = load(&cfg)?;
            let q = pipeline::formulate(&g, &cfg)?;
            emit(
                b.run.output.as_ref(),
                &json(&pipeline::bench(&name, &q, &cfg, b.runs)?),
            )?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
