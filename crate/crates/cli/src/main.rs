use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qsdc_core::noise::load_profile;
use qsdc_core::protocol::StateFamily;
use qsdc_core::scenario::{run_file, sweep};
use qsdc_core::{Error, Result};

/// Superdense coding with automated error correction: scenario runner.
#[derive(Debug, Parser)]
#[command(name = "qsdc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one scenario file and write its histogram (and tomography).
    Run {
        file: PathBuf,
        /// Override the scenario's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory [default: out/<scenario name>].
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print a text bar chart of the histogram.
        #[arg(long)]
        bars: bool,
    },
    /// Every message against the standard error grid, as CSV.
    Sweep {
        #[arg(long)]
        family: String,
        /// Device profile JSON for noisy sampling.
        #[arg(long)]
        noise: Option<PathBuf>,
        #[arg(long, default_value_t = 1024)]
        shots: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the CSV here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run {
            file,
            seed,
            out,
            bars,
        } => run(&file, seed, out, bars),
        Command::Sweep {
            family,
            noise,
            shots,
            seed,
            out,
        } => run_sweep(&family, noise.as_deref(), shots, seed, out.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qsdc: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(file: &Path, seed: Option<u64>, out: Option<PathBuf>, bars: bool) -> Result<()> {
    let out = out.unwrap_or_else(|| {
        let stem = file.file_stem().map(|s| s.to_string_lossy().into_owned());
        Path::new("out").join(stem.unwrap_or_else(|| "scenario".into()))
    });
    let report = run_file(file, seed, &out)?;
    let decoded = report
        .decoded
        .as_ref()
        .map(|m| m.to_string())
        .unwrap_or_else(|| "(tie)".into());
    println!(
        "shots={} decoded={} expected={}",
        report.histogram.shots(),
        decoded,
        report.expected
    );
    if bars {
        print!("{}", report.histogram.render(40));
    }
    if let Some(t) = &report.tomography {
        println!(
            "tomography: {} settings x {} shots, fidelity {:.6}",
            t.settings_used, t.shots_per_setting, t.fidelity_vs_ideal
        );
    }
    for f in &report.files {
        println!("wrote {}", f.display());
    }
    Ok(())
}

fn run_sweep(family: &str, noise: Option<&Path>, shots: u64, seed: u64, out: Option<&Path>) -> Result<()> {
    let family: StateFamily = family
        .parse()
        .map_err(|e: Error| Error::Validation(e.to_string()))?;
    let profile = noise
        .map(|p| load_profile(p).map_err(|e| Error::Validation(e.to_string())))
        .transpose()?;
    let report = sweep(family, profile.as_ref(), shots, seed)?;
    let csv = report.to_csv();
    match out {
        Some(path) => std::fs::write(path, csv).map_err(|e| Error::Io {
            path: path.display().to_string(),
            source: e,
        })?,
        None => print!("{csv}"),
    }
    eprintln!(
        "{family}: {}/{} cases decoded correctly, success rate {:.4}",
        report.successes(),
        report.rows.len(),
        report.success_rate()
    );
    Ok(())
}
