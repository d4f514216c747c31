use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use triband::experiments::records::write_csv;
use triband::experiments::sweep::{run_sweep, SweepAxis, SweepSpec};
use triband::oracle::{optimal_completed, tiny_instance};
use triband::{ExperimentConfig, SchemeKind};

/// Run scheduling sweeps and write one CSV row per (scheme, value, seed).
#[derive(Debug, Parser)]
#[command(name = "triband", version)]
struct Args {
    /// TOML file overriding scenario defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Parameter to sweep: flows, slots, dref or threshold.
    #[arg(long)]
    sweep: Option<SweepAxis>,
    /// Comma-separated axis values; defaults to the axis' standard grid.
    #[arg(long, value_delimiter = ',')]
    values: Option<Vec<f64>>,
    /// Comma-separated schemes: triple, single, dual, mqis.
    #[arg(long, value_delimiter = ',')]
    scheme: Option<Vec<SchemeKind>>,
    /// Comma-separated seeds.
    #[arg(long, value_delimiter = ',')]
    seed: Option<Vec<u64>>,
    /// Output CSV path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Check every schedule against the feasibility constraints.
    #[arg(long)]
    validate: bool,
    /// Compare the greedy scheduler with the exhaustive optimum on N random
    /// tiny instances instead of sweeping.
    #[arg(long, value_name = "N")]
    tiny_oracle: Option<u64>,
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(args: Args) -> Result<ExitCode, Box<dyn std::error::Error>> {
    if let Some(n) = args.tiny_oracle {
        return tiny_oracle(n);
    }

    let cfg = match &args.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    let (axis, default_values) = match args.sweep {
        Some(axis) => (axis, axis.default_values()),
        None => (
            SweepAxis::Flows,
            vec![SweepAxis::Flows.current(&cfg.params)],
        ),
    };
    let spec = SweepSpec {
        schemes: args.scheme.unwrap_or(cfg.schemes),
        axis,
        values: args.values.unwrap_or(default_values),
        seeds: args.seed.unwrap_or(cfg.seeds),
        base: cfg.params,
        validate: args.validate,
    };
    let report = run_sweep(&spec)?;

    match &args.out {
        Some(p) => write_csv(&report.records, BufWriter::new(File::create(p)?))?,
        None => write_csv(&report.records, io::stdout().lock())?,
    }

    if !report.violations.is_empty() {
        let mut err = io::stderr().lock();
        for v in &report.violations {
            writeln!(
                err,
                "{} value={} seed={}: {}",
                v.scheme, v.value, v.seed, v.violation
            )?;
        }
        return Ok(ExitCode::FAILURE);
    }
    Ok(ExitCode::SUCCESS)
}

fn tiny_oracle(n: u64) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let mut out = io::stdout().lock();
    writeln!(out, "seed,flows,slots,heuristic,optimum")?;
    let (mut matched, mut exceeded) = (0u64, 0u64);
    for seed in 0..n {
        let inst = tiny_instance(seed);
        let sc = inst.scenario();
        let h = SchemeKind::TripleBand.run(sc).completed_count();
        let opt = optimal_completed(&inst).completed;
        matched += u64::from(h == opt);
        exceeded += u64::from(h > opt);
        writeln!(
            out,
            "{seed},{},{},{h},{opt}",
            sc.flows().len(),
            sc.frame().num_slots
        )?;
    }
    eprintln!("optimal on {matched}/{n} instances");
    if exceeded > 0 {
        eprintln!("heuristic exceeded the optimum on {exceeded} instances");
        return Ok(ExitCode::FAILURE);
    }
    Ok(ExitCode::SUCCESS)
}
