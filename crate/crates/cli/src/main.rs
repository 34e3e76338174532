//! `rydpol`: dressed-state spectra, EIT simulation, and RF polarization
//! inversion from the command line.
//!
//! Exit status: 0 success, 1 output i/o, 2 usage, 3 validation, 4 numerical.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(a < b)` also rejects NaN.

mod args;
mod commands;
mod error;
mod manifest;
mod output;
mod schema;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::{eit, invert, roundtrip, spectrogram, wigner, Ctx, Job};
use error::{CliError, Result};
use manifest::Manifest;

fn init_threads() -> Result<()> {
    let Ok(v) = std::env::var("RYDPOL_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("RYDPOL_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(format!("RYDPOL_THREADS: {e}")))
}

fn resolve(command: &Command, ctx: &Ctx) -> Result<(Job, Vec<String>)> {
    Ok(match command {
        Command::Spectrogram(a) => (Job::Spectrogram(spectrogram::resolve(a)?), Vec::new()),
        Command::Envelopes(a) => (Job::Envelopes(spectrogram::resolve_envelopes(a)?), Vec::new()),
        Command::Eit(a) => {
            let (job, inputs) = eit::resolve(a, ctx)?;
            (Job::Eit(job), inputs)
        }
        Command::Invert(a) => {
            let job = invert::resolve(a)?;
            let mut inputs = job.inputs.clone();
            inputs.extend(a.scenario.iter().map(|p| p.display().to_string()));
            (Job::Invert(job), inputs)
        }
        Command::Roundtrip(a) => (Job::Roundtrip(roundtrip::resolve(a, ctx)?), Vec::new()),
        Command::Wigner(a) => (Job::Wigner(wigner::resolve(a)?), Vec::new()),
        Command::Replay(_) | Command::Schema(_) => unreachable!("handled before resolution"),
    })
}

fn execute(job: Job, ctx: &Ctx, inputs: Vec<String>, out_dir: &std::path::Path) -> Result<()> {
    let mut outputs = job.run(ctx)?;
    let manifest = Manifest::new(job, ctx, inputs, &outputs);
    outputs.add(manifest.file_name(), output::to_json(&manifest)?);
    outputs.commit(out_dir)?;
    for w in &outputs.warnings {
        eprintln!("warning: {w}");
    }
    for line in &outputs.summary {
        println!("{line}");
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    init_threads()?;
    match &cli.command {
        Command::Schema(a) => {
            print!("{}", schema::text(a.name));
            Ok(())
        }
        Command::Replay(a) => {
            let m = Manifest::load(&a.manifest)?;
            let ctx = Ctx { degrees: m.degrees };
            execute(m.job, &ctx, m.inputs, &cli.out)
        }
        command => {
            let ctx = Ctx { degrees: cli.degrees };
            let (job, inputs) = resolve(command, &ctx)?;
            execute(job, &ctx, inputs, &cli.out)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
