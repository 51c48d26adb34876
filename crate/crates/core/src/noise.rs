//! Stochastic Pauli-trajectory emulation of a superconducting device.
//!
//! Every shot replays the circuit's gate stream. After each single-qubit
//! gate a random X, Y or Z hits the qubit with probability `id_error`;
//! after each two-qubit gate one of the 15 non-identity two-qubit Paulis
//! hits the pair with probability `cnot_error`. Measured bits are then
//! flipped independently with probability `readout_error`.
//!
//! The measurement draw of shot `k` uses the same RNG stream as
//! [`StateVector::sample_register`], and all noise decisions come from a
//! separate stream, so a noise-free profile reproduces ideal sampling
//! exactly.

use std::collections::BTreeMap;
use std::path::Path;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, StandardResolver};
use crate::error::{Error, Result};
use crate::gate::{GateKind, GateOp};
use crate::histogram::Histogram;
use crate::state::{extract_bits, measurement_rng, Sampler, StateVector};

/// Readout error assumed when a profile leaves it out.
pub const DEFAULT_READOUT_ERROR: f64 = 0.02;

const NOISE_SALT: u64 = 0x6e6f_6973_655f_7273;

fn default_readout_error() -> f64 {
    DEFAULT_READOUT_ERROR
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QubitProperties {
    pub id: usize,
    /// GHz.
    #[serde(default)]
    pub frequency: f64,
    /// GHz.
    #[serde(default)]
    pub anharmonicity: f64,
    /// ns.
    #[serde(default)]
    pub readout_length: f64,
    pub id_error: f64,
    #[serde(default = "default_readout_error")]
    pub readout_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairProperties {
    pub control: usize,
    pub target: usize,
    pub cnot_error: f64,
    /// ns.
    #[serde(default)]
    pub gate_time: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviceProfile {
    #[serde(default)]
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub qubits: Vec<QubitProperties>,
    #[serde(default)]
    pub pairs: Vec<PairProperties>,
    /// Two-qubit error for pairs the profile does not list in either
    /// direction. Falls back to the mean of the listed pairs when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub default_cnot_error: Option<f64>,
}

fn check_probability(what: &str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(Error::validation(format!("{what} = {p} is not a probability")));
    }
    Ok(())
}

impl DeviceProfile {
    /// A profile with `n` qubits and every error probability zero.
    pub fn noiseless(n: usize) -> Self {
        Self {
            name: "noiseless".into(),
            description: None,
            qubits: (0..n)
                .map(|id| QubitProperties {
                    id,
                    frequency: 0.0,
                    anharmonicity: 0.0,
                    readout_length: 0.0,
                    id_error: 0.0,
                    readout_error: 0.0,
                })
                .collect(),
            pairs: Vec::new(),
            default_cnot_error: Some(0.0),
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let p: DeviceProfile = serde_json::from_str(s)?;
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.qubits.is_empty() {
            return Err(Error::validation("profile lists no qubits"));
        }
        for (k, q) in self.qubits.iter().enumerate() {
            if q.id != k {
                return Err(Error::validation(format!(
                    "profile qubit entry {k} has id {} (ids must be 0..n in order)",
                    q.id
                )));
            }
            check_probability(&format!("Q{k}.id_error"), q.id_error)?;
            check_probability(&format!("Q{k}.readout_error"), q.readout_error)?;
        }
        for p in &self.pairs {
            if p.control >= self.qubits.len() || p.target >= self.qubits.len() || p.control == p.target {
                return Err(Error::validation(format!(
                    "pair {}_{} does not name two distinct profile qubits",
                    p.control, p.target
                )));
            }
            check_probability(&format!("pair {}_{}.cnot_error", p.control, p.target), p.cnot_error)?;
        }
        if let Some(d) = self.default_cnot_error {
            check_probability("default_cnot_error", d)?;
        }
        Ok(())
    }

    pub fn num_qubits(&self) -> usize {
        self.qubits.len()
    }

    pub fn qubit(&self, id: usize) -> Option<&QubitProperties> {
        self.qubits.get(id)
    }

    /// Directed pair if listed, else the reverse pair, else
    /// `default_cnot_error`, else the mean over listed pairs (0 if none).
    pub fn cnot_error(&self, control: usize, target: usize) -> f64 {
        let find = |c: usize, t: usize| {
            self.pairs
                .iter()
                .find(|p| p.control == c && p.target == t)
                .map(|p| p.cnot_error)
        };
        find(control, target)
            .or_else(|| find(target, control))
            .or(self.default_cnot_error)
            .unwrap_or_else(|| {
                if self.pairs.is_empty() {
                    0.0
                } else {
                    self.pairs.iter().map(|p| p.cnot_error).sum::<f64>() / self.pairs.len() as f64
                }
            })
    }

    /// Every error probability multiplied by `factor` and clamped to 1.
    pub fn scaled(&self, factor: f64) -> Self {
        let s = |p: f64| (p * factor).clamp(0.0, 1.0);
        let mut out = self.clone();
        for q in &mut out.qubits {
            q.id_error = s(q.id_error);
            q.readout_error = s(q.readout_error);
        }
        for p in &mut out.pairs {
            p.cnot_error = s(p.cnot_error);
        }
        out.default_cnot_error = out.default_cnot_error.map(s);
        out
    }
}

pub fn load_profile(path: impl AsRef<Path>) -> Result<DeviceProfile> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    DeviceProfile::from_json(&text)
        .map_err(|e| Error::validation(format!("profile {}: {e}", path.display())))
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoiseConfig {
    pub profile: DeviceProfile,
    /// `qubit_assignment[k]` is the profile qubit that runs circuit qubit `k`.
    pub qubit_assignment: Vec<usize>,
    pub seed: u64,
}

impl NoiseConfig {
    pub fn new(profile: DeviceProfile, qubit_assignment: Vec<usize>, seed: u64) -> Result<Self> {
        profile.validate()?;
        let mut seen = BTreeMap::new();
        for (k, &p) in qubit_assignment.iter().enumerate() {
            if p >= profile.num_qubits() {
                return Err(Error::validation(format!(
                    "circuit qubit {k} assigned to profile qubit {p}, profile has {}",
                    profile.num_qubits()
                )));
            }
            if let Some(prev) = seen.insert(p, k) {
                return Err(Error::validation(format!(
                    "circuit qubits {prev} and {k} both assigned to profile qubit {p}"
                )));
            }
        }
        Ok(Self {
            profile,
            qubit_assignment,
            seed,
        })
    }

    /// Circuit qubit `k` on profile qubit `k`.
    pub fn identity(profile: DeviceProfile, num_qubits: usize, seed: u64) -> Result<Self> {
        Self::new(profile, (0..num_qubits).collect(), seed)
    }

    fn check_covers(&self, n: usize) -> Result<()> {
        if self.qubit_assignment.len() < n {
            return Err(Error::validation(format!(
                "circuit qubit {} has no profile qubit assigned",
                self.qubit_assignment.len()
            )));
        }
        Ok(())
    }
}

/// Worker count: `QSDC_THREADS` when set to a positive integer, otherwise
/// rayon's default.
pub fn thread_count() -> usize {
    std::env::var("QSDC_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(rayon::current_num_threads)
}

/// Runs `f` on a pool capped by [`thread_count`].
pub fn with_pool<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    match rayon::ThreadPoolBuilder::new().num_threads(thread_count()).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

fn noise_rng(seed: u64, shot: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ NOISE_SALT);
    rng.set_stream(shot);
    rng
}

const PAULIS: [Option<GateKind>; 4] = [None, Some(GateKind::X), Some(GateKind::Y), Some(GateKind::Z)];

struct NoisyGate {
    op: GateOp,
    prob: f64,
}

/// Pauli hits injected after gate `after`.
struct Event {
    after: usize,
    ops: Vec<GateOp>,
}

fn draw_events(gates: &[NoisyGate], rng: &mut ChaCha8Rng) -> Vec<Event> {
    let mut events = Vec::new();
    for (k, g) in gates.iter().enumerate() {
        if g.prob <= 0.0 || rng.gen::<f64>() >= g.prob {
            continue;
        }
        let qs = &g.op.qubits;
        let ops = if qs.len() == 1 {
            let kind = PAULIS[rng.gen_range(1..4)].expect("non-identity");
            vec![GateOp::single(kind, qs[0])]
        } else {
            let pick = rng.gen_range(1..16);
            [(pick & 3, qs[0]), (pick >> 2, qs[1])]
                .into_iter()
                .filter_map(|(p, q)| PAULIS[p].map(|kind| GateOp::single(kind, q)))
                .collect()
        };
        events.push(Event { after: k, ops });
    }
    events
}

/// Full-register noisy sampling.
pub fn noisy_simulate(c: &Circuit, cfg: &NoiseConfig, shots: u64) -> Result<Histogram> {
    let all: Vec<usize> = (0..c.num_qubits()).collect();
    noisy_simulate_register(c, cfg, &all, shots)
}

/// Noisy sampling of `register` after running `c` from |0…0⟩. Channel error
/// markers resolve to their gates, which pick up device noise like any
/// other gate.
pub fn noisy_simulate_register(
    c: &Circuit,
    cfg: &NoiseConfig,
    register: &[usize],
    shots: u64,
) -> Result<Histogram> {
    if shots == 0 {
        return Err(Error::validation("shots must be at least 1"));
    }
    let n = c.num_qubits();
    cfg.check_covers(n)?;
    for &q in register {
        if q >= n {
            return Err(Error::validation(format!("register qubit {q} out of range")));
        }
    }
    let phys = &cfg.qubit_assignment;
    let gates: Vec<NoisyGate> = c
        .resolved_gates(&StandardResolver)
        .into_iter()
        .map(|op| {
            let prob = match op.qubits.as_slice() {
                [q] => cfg.profile.qubits[phys[*q]].id_error,
                [a, b] => cfg.profile.cnot_error(phys[*a], phys[*b]),
                _ => 0.0,
            };
            NoisyGate { op, prob }
        })
        .collect();
    let flips: Vec<f64> = register
        .iter()
        .map(|&q| cfg.profile.qubits[phys[q]].readout_error)
        .collect();

    let mut ideal = StateVector::zero(n)?;
    for g in &gates {
        ideal.apply_op(&g.op)?;
    }
    let ideal_sampler = Sampler::new(&ideal);
    let seed = cfg.seed;

    let one_shot = |shot: u64| -> Result<usize> {
        let mut nrng = noise_rng(seed, shot);
        let events = draw_events(&gates, &mut nrng);
        let idx = if events.is_empty() {
            ideal_sampler.draw(&mut measurement_rng(seed, shot))
        } else {
            let mut state = StateVector::zero(n)?;
            let mut next = events.iter().peekable();
            for (k, g) in gates.iter().enumerate() {
                state.apply_op(&g.op)?;
                while let Some(ev) = next.next_if(|e| e.after == k) {
                    for op in &ev.ops {
                        state.apply_op(op)?;
                    }
                }
            }
            Sampler::new(&state).draw(&mut measurement_rng(seed, shot))
        };
        let mut value = extract_bits(idx, register);
        for (k, &p) in flips.iter().enumerate() {
            if p > 0.0 && nrng.gen::<f64>() < p {
                value ^= 1 << k;
            }
        }
        Ok(value)
    };

    let values: Vec<usize> =
        with_pool(|| (0..shots).into_par_iter().map(one_shot).collect::<Result<Vec<_>>>())?;
    let mut hist = Histogram::new(register.len());
    for v in values {
        hist.record(v, 1);
    }
    Ok(hist)
}
