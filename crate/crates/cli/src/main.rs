use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use zeta_core::harness::{reproduction_suite, Algorithm, Construction, Variant};
use zeta_core::{
    build_instance, build_intersection_graph, generate_zeta_witness, independent_kissing_number, run_experiment,
    run_suite, verify_instance, verify_kissing_configuration, ExperimentSpec, Family, Instance, Params, SuiteOptions,
    Tolerance,
};

#[derive(Parser)]
#[command(name = "zeta", version, about = "Online dominating-set experiments on geometric intersection graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct FamilyArgs {
    /// unit-disk, fixed-square, arbitrary-square, fixed-cube, arbitrary-cube,
    /// unit-ball, triangle, fixed-polygon, arbitrary-polygon (or abstract)
    family: String,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Print an independent kissing configuration as JSON.
    Witness {
        #[command(flatten)]
        family: FamilyArgs,
    },
    /// Print an instance document (objects, arrival order, structure).
    Instance {
        #[command(flatten)]
        family: FamilyArgs,
        /// witness, block, path, adaptive, cycles or random
        construction: String,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        /// opt1 or general
        #[arg(long)]
        variant: Option<String>,
        /// Algorithm the arrival order is meant for (gds, gcds, greedy_is).
        #[arg(long, default_value = "gcds")]
        algorithm: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one experiment spec and print its report.
    Run { spec: PathBuf },
    /// Run a list of specs and write a CSV report.
    Suite {
        /// JSON array of experiment specs.
        specs: Option<PathBuf>,
        /// Run the built-in reproduction suite instead of a spec file.
        #[arg(long, conflicts_with = "specs")]
        reproduction: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        parallel: bool,
        /// Fill the runtime_ms column (makes the report non-reproducible).
        #[arg(long)]
        timing: bool,
    },
    /// Check an instance document against its declared structure.
    Verify { instance: PathBuf },
}

fn parse_enum<T: serde::de::DeserializeOwned>(what: &str, s: &str) -> Result<T> {
    serde_json::from_value(serde_json::Value::String(s.into())).with_context(|| format!("unknown {what} `{s}`"))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut stdout = io::stdout().lock();
            let newline = if text.ends_with('\n') { "" } else { "\n" };
            match write!(stdout, "{text}{newline}").and_then(|_| stdout.flush()) {
                Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(e).context("writing to stdout"),
                _ => Ok(()),
            }
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    let tol = Tolerance::default();
    match cli.command {
        Command::Witness { family: a } => {
            let family = Family::from_name(&a.family, a.d, a.k)?;
            let w = generate_zeta_witness(family, &Params { eps: a.eps, seed: a.seed })?;
            let g = build_intersection_graph(&w.objects(), tol)?;
            let mut doc = serde_json::to_value(&w)?;
            doc["zeta"] = independent_kissing_number(&g)?.into();
            doc["verified"] = verify_kissing_configuration(&w, tol).ok.into();
            emit(&serde_json::to_string_pretty(&doc)?, None)?;
            Ok(true)
        }
        Command::Instance { family: a, construction, m, n, variant, algorithm, out } => {
            let spec = ExperimentSpec {
                family: a.family,
                construction: parse_enum::<Construction>("construction", &construction)?,
                algorithm: parse_enum::<Algorithm>("algorithm", &algorithm)?,
                variant: variant.map(|v| parse_enum::<Variant>("variant", &v)).transpose()?,
                d: a.d,
                k: a.k,
                m,
                n,
                eps: a.eps,
                seed: a.seed,
            };
            emit(&build_instance(&spec)?.to_json(), out.as_deref())?;
            Ok(true)
        }
        Command::Run { spec } => {
            let spec: ExperimentSpec = serde_json::from_str(&read(&spec)?).context("parsing spec")?;
            let report = run_experiment(&spec);
            let doc = serde_json::json!({ "spec": spec, "report": report });
            emit(&serde_json::to_string_pretty(&doc)?, None)?;
            Ok(report.bound_satisfied)
        }
        Command::Suite { specs, reproduction, out, parallel, timing } => {
            let specs: Vec<ExperimentSpec> = match (specs, reproduction) {
                (Some(p), false) => serde_json::from_str(&read(&p)?).context("parsing spec list")?,
                (None, true) => reproduction_suite(),
                _ => bail!("give a spec file or --reproduction"),
            };
            let report = run_suite(&specs, SuiteOptions { parallel, timing });
            emit(&report.to_csv(), out.as_deref())?;
            Ok(report.all_satisfied())
        }
        Command::Verify { instance } => {
            let inst = Instance::from_json(&read(&instance)?)?;
            let verdict = verify_instance(&inst, tol);
            emit(&serde_json::to_string(&verdict)?, None)?;
            Ok(verdict.ok)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
