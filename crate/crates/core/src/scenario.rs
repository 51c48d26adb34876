//! Scenario files and the experiment runner behind the `qsdc` binary.
//!
//! A scenario names a resource family, a message, channel errors and
//! correction stages, plus sampling and output settings. Everything is
//! validated before any file is written.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::aec::{self, ChannelErrorSpec, Pipeline, StageSelection};
use crate::circuit::{ErrorEvent, ErrorKind};
use crate::error::{Error, Result};
use crate::histogram::Histogram;
use crate::noise::{self, load_profile, DeviceProfile, NoiseConfig};
use crate::protocol::{self, Message, StateFamily};
use crate::tomography::{self, TomographyResult, DEFAULT_SHOTS_PER_SETTING};

pub const SCENARIO_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioError {
    pub qubit: usize,
    /// `X` / `BIT_FLIP`, `Z` / `PHASE_FLIP`, or `P` / `PHASE_SHIFT` with `theta`.
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
}

impl ScenarioError {
    pub fn to_event(&self) -> Result<ErrorEvent> {
        let kind = match self.kind.to_ascii_uppercase().as_str() {
            "X" | "BIT_FLIP" => ErrorKind::BitFlip,
            "Z" | "PHASE_FLIP" => ErrorKind::PhaseFlip,
            "P" | "PHASE" | "PHASE_SHIFT" => ErrorKind::PhaseShift {
                theta: self.theta.ok_or_else(|| {
                    Error::validation(format!("phase error on q{} needs theta", self.qubit))
                })?,
            },
            other => return Err(Error::validation(format!("unknown error kind {other:?}"))),
        };
        if self.theta.is_some() && !matches!(kind, ErrorKind::PhaseShift { .. }) {
            return Err(Error::validation(format!(
                "theta given for {} error on q{}",
                self.kind, self.qubit
            )));
        }
        Ok(ErrorEvent {
            qubit: self.qubit,
            kind,
        })
    }
}

fn default_histogram_path() -> String {
    "histogram.json".into()
}

fn default_tomography_shots() -> u64 {
    DEFAULT_SHOTS_PER_SETTING
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    /// Relative to the output directory.
    #[serde(default = "default_histogram_path")]
    pub histogram: String,
    #[serde(default)]
    pub tomography: bool,
    #[serde(default = "default_tomography_shots")]
    pub tomography_shots: u64,
}

impl Default for Outputs {
    fn default() -> Self {
        Self {
            histogram: default_histogram_path(),
            tomography: false,
            tomography_shots: default_tomography_shots(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub family: String,
    pub message: String,
    #[serde(default)]
    pub errors: Vec<ScenarioError>,
    #[serde(default)]
    pub stages: StageSelection,
    pub shots: u64,
    pub seed: u64,
    /// Relative to the scenario file's directory.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise_profile: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qubit_assignment: Option<Vec<usize>>,
    #[serde(default)]
    pub outputs: Outputs,
}

/// A scenario that passed validation, with its profile loaded.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub scenario: Scenario,
    pub pipeline: Pipeline,
    pub noise: Option<NoiseConfig>,
}

impl Scenario {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::validation(format!("scenario: {e}")))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::validation(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn events(&self) -> Result<ChannelErrorSpec> {
        Ok(ChannelErrorSpec::new(
            self.errors.iter().map(|e| e.to_event()).collect::<Result<_>>()?,
        ))
    }

    /// Validates everything and builds the pipeline. `base` resolves a
    /// relative `noise_profile`.
    pub fn prepare(&self, base: &Path) -> Result<Prepared> {
        if self.version != SCENARIO_VERSION {
            return Err(Error::validation(format!(
                "unsupported scenario version {} (expected {SCENARIO_VERSION})",
                self.version
            )));
        }
        if self.shots == 0 {
            return Err(Error::validation("shots must be at least 1"));
        }
        let family: StateFamily = self.family.parse().map_err(to_validation)?;
        let message = Message::for_family(family, &self.message).map_err(to_validation)?;
        let errors = self.events()?;
        let pipeline = aec::assemble_pipeline(family, &message, &errors, self.stages)?;
        if self.outputs.tomography {
            if self.outputs.tomography_shots == 0 {
                return Err(Error::validation("tomography_shots must be at least 1"));
            }
            tomography::tomography_settings(family.data_qubits())?;
        }
        if self.outputs.histogram.trim().is_empty() {
            return Err(Error::validation("outputs.histogram is empty"));
        }
        let n = pipeline.layout.num_qubits;
        let noise = match &self.noise_profile {
            None => {
                if self.qubit_assignment.is_some() {
                    return Err(Error::validation("qubit_assignment given without noise_profile"));
                }
                None
            }
            Some(p) => {
                let profile = load_profile(base.join(p)).map_err(to_validation)?;
                let assignment = match &self.qubit_assignment {
                    Some(a) => {
                        if a.len() != n {
                            return Err(Error::validation(format!(
                                "qubit_assignment has {} entries, circuit has {n} qubits",
                                a.len()
                            )));
                        }
                        a.clone()
                    }
                    None => (0..n).collect(),
                };
                Some(NoiseConfig::new(profile, assignment, self.seed)?)
            }
        };
        Ok(Prepared {
            scenario: self.clone(),
            pipeline,
            noise,
        })
    }
}

fn to_validation(e: Error) -> Error {
    match e {
        Error::Validation(_) => e,
        other => Error::Validation(other.to_string()),
    }
}

/// Histogram file contents.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HistogramReport {
    pub shots: u64,
    pub counts: BTreeMap<String, u64>,
    pub decoded: Option<String>,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub histogram: Histogram,
    /// Message decoded from the plurality outcome; `None` on a tie.
    pub decoded: Option<Message>,
    pub expected: Message,
    pub tomography: Option<TomographyResult>,
    pub files: Vec<PathBuf>,
}

impl RunReport {
    pub fn histogram_json(&self) -> Result<String> {
        let r = HistogramReport {
            shots: self.histogram.shots(),
            counts: self.histogram.counts().clone(),
            decoded: self.decoded.as_ref().map(|m| m.to_string()),
        };
        Ok(serde_json::to_string_pretty(&r)? + "\n")
    }
}

impl Prepared {
    /// Samples and reconstructs without touching the filesystem.
    pub fn execute(&self) -> Result<RunReport> {
        let s = &self.scenario;
        let p = &self.pipeline;
        let register = p.data_register();
        let histogram = match &self.noise {
            None => p.circuit.run()?.sample_register(&register, s.shots, s.seed)?,
            Some(cfg) => noise::noisy_simulate_register(&p.circuit, cfg, &register, s.shots)?,
        };
        let decoded = histogram
            .plurality()
            .map(|bits| protocol::decode_message(bits, p.family))
            .transpose()?;
        let tomography = if s.outputs.tomography {
            let ideal = p.circuit.run()?.density().partial_trace(&register)?;
            let data = tomography::measure_circuit(
                &p.circuit,
                &register,
                self.noise.as_ref(),
                s.outputs.tomography_shots,
                s.seed ^ 0x746f_6d6f,
            )?;
            Some(tomography::reconstruct(&data, &ideal)?)
        } else {
            None
        };
        Ok(RunReport {
            histogram,
            decoded,
            expected: p.message.clone(),
            tomography,
            files: Vec::new(),
        })
    }
}

/// Loads, validates, runs and writes outputs under `out_dir`.
pub fn run_file(path: impl AsRef<Path>, seed: Option<u64>, out_dir: &Path) -> Result<RunReport> {
    let path = path.as_ref();
    let mut scenario = Scenario::load(path)?;
    if let Some(seed) = seed {
        scenario.seed = seed;
    }
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    let prepared = scenario.prepare(base)?;
    let mut report = prepared.execute()?;

    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let hist_path = out_dir.join(&scenario.outputs.histogram);
    write_file(&hist_path, &report.histogram_json()?)?;
    report.files.push(hist_path.clone());
    if let Some(t) = &report.tomography {
        let json = hist_path.with_file_name("tomography.json");
        let csv = hist_path.with_file_name("tomography.csv");
        write_file(&json, &t.to_json()?)?;
        write_file(&csv, &t.to_csv())?;
        report.files.push(json);
        report.files.push(csv);
    }
    Ok(report)
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub message: Message,
    pub error_case: String,
    pub success: bool,
    /// Noiseless: |⟨target|out⟩|² on the data register. Noisy: observed
    /// frequency of the expected readout.
    pub fidelity: f64,
    pub syndrome: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub family: StateFamily,
    pub noisy: bool,
    pub rows: Vec<SweepRow>,
}

impl SweepReport {
    pub fn successes(&self) -> usize {
        self.rows.iter().filter(|r| r.success).count()
    }

    /// Noiseless: fraction of corrected rows. Noisy: fraction of all shots
    /// that read out the expected message (mean of the fidelity column).
    pub fn success_rate(&self) -> f64 {
        if self.rows.is_empty() {
            return 0.0;
        }
        if self.noisy {
            self.rows.iter().map(|r| r.fidelity).sum::<f64>() / self.rows.len() as f64
        } else {
            self.successes() as f64 / self.rows.len() as f64
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("message,error_case,success,fidelity,syndrome\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{:.9},{}",
                r.message, r.error_case, r.success, r.fidelity, r.syndrome
            );
        }
        out
    }
}

/// Overlap tolerance for a noiseless sweep row to count as corrected.
pub const SWEEP_TOLERANCE: f64 = 1e-9;

/// Every message against the standard error grid with all stages enabled.
/// Noiseless rows are exact; with a profile each row samples `shots`
/// shots and succeeds when the plurality outcome decodes to the message.
pub fn sweep(
    family: StateFamily,
    profile: Option<&DeviceProfile>,
    shots: u64,
    seed: u64,
) -> Result<SweepReport> {
    family.validate()?;
    if shots == 0 {
        return Err(Error::validation("shots must be at least 1"));
    }
    let grid = aec::error_grid(family);
    let jobs: Vec<(Message, usize)> = Message::all(family.capacity())
        .flat_map(|m| (0..grid.len()).map(move |k| (m.clone(), k)))
        .collect();
    let row = |(job, (m, k)): (usize, &(Message, usize))| -> Result<SweepRow> {
        let case = &grid[*k];
        let p = aec::assemble_pipeline(family, m, &case.spec, StageSelection::ALL)?;
        let ideal = p.evaluate()?;
        let (success, fidelity) = match profile {
            None => (ideal.success(m, SWEEP_TOLERANCE), ideal.overlap.powi(2)),
            Some(profile) => {
                let cfg = NoiseConfig::identity(
                    profile.clone(),
                    p.layout.num_qubits,
                    seed.wrapping_add(job as u64),
                )?;
                let h = noise::noisy_simulate_register(&p.circuit, &cfg, &p.data_register(), shots)?;
                let decoded = h
                    .plurality()
                    .map(|b| protocol::decode_message(b, family))
                    .transpose()?;
                let expected = protocol::expected_readout(family, m)?;
                let key = crate::state::bitstring(expected, family.data_qubits());
                (decoded.as_ref() == Some(m), h.frequency(&key))
            }
        };
        Ok(SweepRow {
            message: m.clone(),
            error_case: case.name.clone(),
            success,
            fidelity,
            syndrome: ideal.syndrome.to_string(),
        })
    };
    let rows = match profile {
        None => noise::with_pool(|| jobs.par_iter().enumerate().map(row).collect::<Result<Vec<_>>>())?,
        Some(_) => jobs.iter().enumerate().map(row).collect::<Result<Vec<_>>>()?,
    };
    Ok(SweepReport {
        family,
        noisy: profile.is_some(),
        rows,
    })
}
