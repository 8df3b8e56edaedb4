use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use normfam_core::{Error, LabConfig, Verdict};

mod commands;
mod parse;
mod runner;

use runner::{Outcome, Task};

#[derive(Parser, Debug)]
#[command(name = "normfam", version, about = "Numerical checks for normal families of holomorphic functions")]
struct Cli {
    /// JSON config with grid densities and tolerances.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Omit timing fields so repeated runs are byte-identical.
    #[arg(long, global = true)]
    deterministic: bool,
    /// Worker threads for independent checks.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

/// A function picked from a fn-file.
#[derive(Args, Debug, Clone)]
pub struct FnArgs {
    #[arg(long = "fn", value_name = "FILE")]
    pub file: PathBuf,
    #[arg(long)]
    pub name: String,
    /// Parameter override, `name=value`; repeatable.
    #[arg(long = "param", value_parser = parse::param)]
    pub params: Vec<(String, f64)>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Landau constant, feasibility of the disk-theorem constant, and its critical value.
    Constants {
        #[arg(long, default_value_t = 50)]
        digits: u32,
        #[arg(long = "C", value_delimiter = ',')]
        c: Vec<f64>,
        /// Bisect for the critical constant to this tolerance.
        #[arg(long)]
        bisect: Option<f64>,
    },
    /// Count (and optionally locate) solutions of f(z) = a in a disk.
    Count {
        #[command(flatten)]
        f: FnArgs,
        #[arg(long, default_value = "0", value_parser = parse::complex)]
        a: normfam_core::Complex64,
        #[arg(long, value_parser = parse::disk)]
        disk: normfam_core::Disk,
        #[arg(long)]
        locate: bool,
    },
    /// Rescaling certificate at a point, or a sequence over an index parameter.
    Rescale {
        #[command(flatten)]
        f: FnArgs,
        #[arg(long, default_value = "0", value_parser = parse::complex)]
        a: normfam_core::Complex64,
        /// Search radius for a single certificate.
        #[arg(long)]
        eps: Option<f64>,
        /// Sequence indices; switches to sequence mode.
        #[arg(long, value_delimiter = ',')]
        ks: Vec<f64>,
        #[arg(long, default_value = "k")]
        index_param: String,
    },
    /// Extract the exponential form of a zero-free function and check its bounds.
    Form {
        #[command(flatten)]
        f: FnArgs,
        #[arg(long)]
        radius: Option<f64>,
        #[arg(long)]
        strict: bool,
    },
    /// Zero/1-point dichotomy check on D(0, r).
    Lemma7 {
        #[command(flatten)]
        f: FnArgs,
        #[arg(long)]
        r: f64,
    },
    /// Poisson–Jensen residual on D(b, r).
    Pj {
        #[command(flatten)]
        f: FnArgs,
        #[arg(long, default_value = "0", value_parser = parse::complex)]
        b: normfam_core::Complex64,
        #[arg(long)]
        r: f64,
    },
    /// Landau-type derivative bound at the centre of D(a, r).
    Landau {
        #[command(flatten)]
        f: FnArgs,
        #[arg(long, default_value = "0", value_parser = parse::complex)]
        a: normfam_core::Complex64,
        #[arg(long)]
        r: f64,
        /// Use the spherical-derivative variant with the configured B.
        #[arg(long)]
        spherical: bool,
    },
    /// Minimum-modulus witness check for the disk theorem at radius r.
    Witness {
        #[command(flatten)]
        f: FnArgs,
        #[arg(long)]
        r: f64,
    },
    /// Bundled scenario by id, or `all`.
    Scenario {
        id: String,
        #[arg(long, value_delimiter = ',')]
        ks: Vec<f64>,
        #[arg(long, value_delimiter = ',')]
        radii: Vec<f64>,
    },
    /// Sample |f| and f# on a square grid clipped to a disk and write CSV.
    Grid {
        #[command(flatten)]
        f: FnArgs,
        #[arg(long, default_value = "0", value_parser = parse::complex)]
        center: normfam_core::Complex64,
        #[arg(long)]
        radius: f64,
        /// Points per axis.
        #[arg(long, default_value_t = 101)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match &cli.config {
        Some(p) => match LabConfig::load(p) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("error: config {}: {e}", p.display());
                return ExitCode::from(2);
            }
        },
        None => LabConfig::default(),
    };
    if cli.jobs == 0 {
        eprintln!("error: --jobs must be at least 1");
        return ExitCode::from(2);
    }
    let tasks = match build_tasks(cli.command, &cfg) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let outcomes = runner::run(tasks, cli.jobs);
    ExitCode::from(emit(outcomes, &cfg, cli.deterministic))
}

fn build_tasks(cmd: Command, cfg: &LabConfig) -> anyhow::Result<Vec<Task>> {
    Ok(match cmd {
        Command::Constants { digits, c, bisect } => commands::constants(digits, &c, bisect)?,
        Command::Count { f, a, disk, locate } => vec![commands::count(load(&f)?, a, disk, locate, cfg.clone())],
        Command::Rescale { f, a, eps, ks, index_param } => {
            if ks.is_empty() {
                let eps = eps.context("--eps is required without --ks")?;
                vec![commands::rescale_point(load(&f)?, a, eps, cfg.clone())]
            } else {
                vec![commands::rescale_sequence(source(&f)?, index_param, a, ks, cfg.clone())]
            }
        }
        Command::Form { f, radius, strict } => {
            let r = radius.unwrap_or(cfg.form_radius);
            vec![commands::form(load(&f)?, r, strict, cfg.clone())]
        }
        Command::Lemma7 { f, r } => vec![commands::lemma7(load(&f)?, r, cfg.clone())],
        Command::Pj { f, b, r } => vec![commands::pj(load(&f)?, b, r, cfg.clone())],
        Command::Landau { f, a, r, spherical } => vec![commands::landau(load(&f)?, a, r, spherical, cfg.b_used)],
        Command::Witness { f, r } => vec![commands::witness(load(&f)?, r)],
        Command::Scenario { id, ks, radii } => commands::scenario(&id, ks, radii, cfg.clone())?,
        Command::Grid { f, center, radius, n, out } => vec![commands::grid(load(&f)?, center, radius, n, out)],
    })
}

fn source(f: &FnArgs) -> anyhow::Result<normfam_core::dsl::FnSource> {
    let mut sources = normfam_core::dsl::load_fn_file(&f.file)
        .map_err(|e| anyhow::anyhow!("reading {}: {e}", f.file.display()))?;
    let pos = sources
        .iter()
        .position(|s| s.name == f.name)
        .with_context(|| format!("no function named `{}` in {}", f.name, f.file.display()))?;
    let mut src = sources.swap_remove(pos);
    for (k, v) in &f.params {
        src.params.insert(k.clone(), *v);
    }
    Ok(src)
}

fn load(f: &FnArgs) -> anyhow::Result<normfam_core::AnalyticFn> {
    Ok(source(f)?.build()?)
}

/// Prints one JSON line per outcome and folds the exit code.
fn emit(outcomes: Vec<Outcome>, cfg: &LabConfig, deterministic: bool) -> u8 {
    let hash = cfg.hash();
    let mut codes = Vec::new();
    for o in outcomes {
        let mut report = match o.result {
            Ok(r) => r,
            Err(e) if e.is_input_error() => {
                eprintln!("error: {}: {e}", o.check);
                codes.push(2);
                continue;
            }
            Err(e) => {
                let mut r = normfam_core::CheckReport::from_error(o.check.clone(), &e);
                if let Some(exp) = o.expected {
                    let matches = r.verdict == exp;
                    r = r.meta("expected", exp).meta("matches_expected", matches);
                }
                r
            }
        };
        report.config_hash = Some(hash.clone());
        report.timing_ms = if deterministic { None } else { Some(o.elapsed_ms) };
        println!("{}", report.to_json_line());
        codes.push(exit_code(report.verdict, o.expected));
    }
    [2, 1, 3].into_iter().find(|c| codes.contains(c)).unwrap_or(0)
}

fn exit_code(v: Verdict, expected: Option<Verdict>) -> u8 {
    match (v, expected) {
        (v, Some(e)) if v == e => 0,
        (Verdict::Indeterminate, _) => 3,
        (Verdict::Pass, None) => 0,
        _ => 1,
    }
}

pub(crate) fn timed(check: &str, expected: Option<Verdict>, f: impl FnOnce() -> Result<normfam_core::CheckReport, Error>) -> Outcome {
    let t = Instant::now();
    let result = f();
    Outcome {
        check: check.to_string(),
        result,
        expected,
        elapsed_ms: t.elapsed().as_secs_f64() * 1e3,
    }
}
