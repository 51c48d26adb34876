//! Pauli-basis state tomography by linear inversion.
//!
//! A register of `n ≤ 5` qubits is measured in all `3^n` settings over
//! `{X, Y, Z}`. Each of the `4^n` Pauli expectations is estimated by pooling
//! every setting that agrees with it on its non-identity positions, and
//! `ρ = 2^{-n} Σ_P ⟨P⟩ P` is then clipped to the nearest physical state.

use std::f64::consts::FRAC_PI_2;
use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::json;

use crate::circuit::Circuit;
use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::gate::{GateKind, GateOp};
use crate::histogram::Histogram;
use crate::noise::{self, NoiseConfig};
use crate::state::{parse_bitstring, Pauli, PauliString, StateVector};

pub const MAX_TOMOGRAPHY_QUBITS: usize = 5;

/// Shots per setting used when a scenario does not say.
pub const DEFAULT_SHOTS_PER_SETTING: u64 = 8192;

/// All `3^n` measurement settings, lexicographic in X < Y < Z with
/// position 0 most significant.
pub fn tomography_settings(n: usize) -> Result<Vec<PauliString>> {
    if n == 0 || n > MAX_TOMOGRAPHY_QUBITS {
        return Err(Error::validation(format!(
            "tomography supports 1..={MAX_TOMOGRAPHY_QUBITS} qubits, got {n}"
        )));
    }
    const LETTERS: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];
    Ok((0..3usize.pow(n as u32))
        .map(|mut k| {
            let mut v = vec![Pauli::Z; n];
            for slot in v.iter_mut().rev() {
                *slot = LETTERS[k % 3];
                k /= 3;
            }
            PauliString(v)
        })
        .collect())
}

/// Pre-measurement rotation mapping the setting's eigenbasis to the
/// computational basis. `register[k]` is measured in `setting[k]`.
pub fn rotation_ops(setting: &PauliString, register: &[usize]) -> Vec<GateOp> {
    let mut ops = Vec::new();
    for (p, &q) in setting.iter().zip(register) {
        match p {
            Pauli::X => ops.push(GateOp::h(q)),
            Pauli::Y => {
                ops.push(GateOp::single(GateKind::Phase(-FRAC_PI_2), q));
                ops.push(GateOp::h(q));
            }
            Pauli::Z | Pauli::I => {}
        }
    }
    ops
}

/// Counts for every setting, in [`tomography_settings`] order.
#[derive(Debug, Clone, PartialEq)]
pub struct TomographyData {
    pub num_qubits: usize,
    pub counts: Vec<(PauliString, Histogram)>,
}

impl TomographyData {
    pub fn shots_per_setting(&self) -> u64 {
        self.counts.iter().map(|(_, h)| h.shots()).min().unwrap_or(0)
    }
}

fn setting_seed(seed: u64, index: usize) -> u64 {
    seed.wrapping_add((index as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// Ideal sampling of `register` of `state` in every setting.
pub fn measure_state(
    state: &StateVector,
    register: &[usize],
    shots: u64,
    seed: u64,
) -> Result<TomographyData> {
    let settings = tomography_settings(register.len())?;
    let counts = noise::with_pool(|| {
        settings
            .par_iter()
            .enumerate()
            .map(|(k, s)| {
                let mut rotated = state.clone();
                for op in rotation_ops(s, register) {
                    rotated.apply_op(&op)?;
                }
                Ok((s.clone(), rotated.sample_register(register, shots, setting_seed(seed, k))?))
            })
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(TomographyData {
        num_qubits: register.len(),
        counts,
    })
}

/// Runs `c` once per setting with the rotation appended, sampling
/// `register` ideally or under `noise`.
pub fn measure_circuit(
    c: &Circuit,
    register: &[usize],
    noise: Option<&NoiseConfig>,
    shots: u64,
    seed: u64,
) -> Result<TomographyData> {
    let Some(cfg) = noise else {
        return measure_state(&c.run()?, register, shots, seed);
    };
    let settings = tomography_settings(register.len())?;
    let mut counts = Vec::with_capacity(settings.len());
    for (k, s) in settings.iter().enumerate() {
        let mut rotated = c.clone();
        rotated.gates(rotation_ops(s, register))?;
        let cfg = NoiseConfig {
            seed: setting_seed(seed, k),
            ..cfg.clone()
        };
        counts.push((s.clone(), noise::noisy_simulate_register(&rotated, &cfg, register, shots)?));
    }
    Ok(TomographyData {
        num_qubits: register.len(),
        counts,
    })
}

/// Estimated ⟨P⟩ for every P in [`PauliString::all`] order.
pub fn estimate_expectations(data: &TomographyData) -> Result<Vec<f64>> {
    let n = data.num_qubits;
    let settings = tomography_settings(n)?;
    if data.counts.len() != settings.len() {
        return Err(Error::validation(format!(
            "expected {} settings, got {}",
            settings.len(),
            data.counts.len()
        )));
    }
    for (want, (got, h)) in settings.iter().zip(&data.counts) {
        if want != got {
            return Err(Error::validation(format!("missing setting {want} (found {got})")));
        }
        if h.shots() == 0 {
            return Err(Error::validation(format!("setting {want} has no shots")));
        }
    }
    // Parsed outcomes per setting, so the inner loop only does bit tests.
    let parsed: Vec<Vec<(usize, u64)>> = data
        .counts
        .iter()
        .map(|(_, h)| {
            h.counts()
                .iter()
                .map(|(k, &v)| Ok((parse_bitstring(k)?, v)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    let mut out = Vec::with_capacity(4usize.pow(n as u32));
    for p in PauliString::all(n) {
        let mask = p
            .iter()
            .enumerate()
            .filter(|(_, &l)| l != Pauli::I)
            .fold(0usize, |m, (k, _)| m | (1 << k));
        let mut sum = 0i64;
        let mut total = 0u64;
        for ((s, _), outcomes) in data.counts.iter().zip(&parsed) {
            let compatible = p.iter().zip(s.iter()).all(|(a, b)| *a == Pauli::I || a == b);
            if !compatible {
                continue;
            }
            for &(value, count) in outcomes {
                let sign = if (value & mask).count_ones() % 2 == 0 { 1 } else { -1 };
                sum += sign * count as i64;
                total += count;
            }
        }
        out.push(sum as f64 / total as f64);
    }
    Ok(out)
}

/// Exact ⟨P⟩ of the reduced state of `register`, [`PauliString::all`] order.
pub fn exact_expectations(state: &StateVector, register: &[usize]) -> Result<Vec<f64>> {
    let n = register.len();
    if n == 0 || n > MAX_TOMOGRAPHY_QUBITS {
        return Err(Error::validation(format!("register of {n} qubits is not supported")));
    }
    PauliString::all(n)
        .into_iter()
        .map(|p| {
            let mut full = vec![Pauli::I; state.num_qubits()];
            for (l, &q) in p.iter().zip(register) {
                if q >= full.len() {
                    return Err(Error::validation(format!("register qubit {q} out of range")));
                }
                full[q] = *l;
            }
            state.pauli_expectation(&PauliString(full))
        })
        .collect()
}

/// `2^{-n} Σ_P ⟨P⟩ P`, without any positivity projection.
pub fn linear_inversion(n: usize, expectations: &[f64]) -> Result<DensityMatrix> {
    let paulis = PauliString::all(n);
    if expectations.len() != paulis.len() {
        return Err(Error::validation(format!(
            "need {} expectations for {n} qubits, got {}",
            paulis.len(),
            expectations.len()
        )));
    }
    let d = 1usize << n;
    let scale = 1.0 / d as f64;
    let mut m = DMatrix::from_element(d, d, Complex64::new(0.0, 0.0));
    for (p, &e) in paulis.iter().zip(expectations) {
        if e == 0.0 {
            continue;
        }
        let flip = p
            .iter()
            .enumerate()
            .filter(|(_, l)| matches!(l, Pauli::X | Pauli::Y))
            .fold(0usize, |acc, (k, _)| acc | (1 << k));
        for col in 0..d {
            let mut phase = Complex64::new(e * scale, 0.0);
            for (k, l) in p.iter().enumerate() {
                let bit = (col >> k) & 1;
                phase *= match (l, bit) {
                    (Pauli::Z, 1) => Complex64::new(-1.0, 0.0),
                    (Pauli::Y, 0) => Complex64::new(0.0, 1.0),
                    (Pauli::Y, _) => Complex64::new(0.0, -1.0),
                    _ => Complex64::new(1.0, 0.0),
                };
            }
            m[(col ^ flip, col)] += phase;
        }
    }
    DensityMatrix::from_matrix(m)
}

#[derive(Debug, Clone)]
pub struct TomographyResult {
    /// Physical estimate after eigenvalue clipping.
    pub rho: DensityMatrix,
    /// Linear-inversion estimate before projection.
    pub raw: DensityMatrix,
    pub fidelity_vs_ideal: f64,
    pub settings_used: usize,
    pub shots_per_setting: u64,
}

pub fn reconstruct(data: &TomographyData, ideal: &DensityMatrix) -> Result<TomographyResult> {
    let raw = linear_inversion(data.num_qubits, &estimate_expectations(data)?)?;
    let rho = raw.project_physical()?;
    let fidelity_vs_ideal = rho.fidelity_with(ideal)?;
    Ok(TomographyResult {
        rho,
        raw,
        fidelity_vs_ideal,
        settings_used: data.counts.len(),
        shots_per_setting: data.shots_per_setting(),
    })
}

impl TomographyResult {
    pub fn to_json(&self) -> Result<String> {
        let (re, im) = self.rho.to_rows();
        let v = json!({
            "num_qubits": self.rho.num_qubits(),
            "settings_used": self.settings_used,
            "shots_per_setting": self.shots_per_setting,
            "fidelity_vs_ideal": self.fidelity_vs_ideal,
            "real": re,
            "imag": im,
        });
        Ok(serde_json::to_string_pretty(&v)? + "\n")
    }

    /// One `row,col,real,imag` line per entry.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("row,col,real,imag\n");
        let d = self.rho.dim();
        for r in 0..d {
            for c in 0..d {
                let z = self.rho.get(r, c);
                let _ = writeln!(out, "{r},{c},{},{}", z.re, z.im);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn setting_counts() {
        assert_eq!(tomography_settings(1).unwrap().len(), 3);
        assert_eq!(tomography_settings(2).unwrap().len(), 9);
        assert_eq!(tomography_settings(4).unwrap().len(), 81);
        assert!(tomography_settings(6).is_err());
        assert!(tomography_settings(0).is_err());
        assert_eq!(tomography_settings(2).unwrap()[1].to_string(), "XY");
    }

    #[test]
    fn rotations_send_eigenstates_to_zero() {
        // +1 eigenstates of X and Y.
        let plus = StateVector::zero(1).unwrap().applied(GateKind::H, &[0]).unwrap();
        let plus_i = plus.clone().applied(GateKind::Phase(FRAC_PI_2), &[0]).unwrap();
        for (state, letter) in [(plus, "X"), (plus_i, "Y")] {
            let mut s = state;
            for op in rotation_ops(&letter.parse().unwrap(), &[0]) {
                s.apply_op(&op).unwrap();
            }
            assert!((s.probabilities()[0] - 1.0).abs() < 1e-12, "{letter}");
        }
    }

    #[test]
    fn exact_zero_state() {
        let z = StateVector::zero(1).unwrap();
        let rho = linear_inversion(1, &exact_expectations(&z, &[0]).unwrap()).unwrap();
        assert!((rho.get(0, 0).re - 1.0).abs() < 1e-12);
        assert!(rho.get(1, 1).norm() < 1e-12);
        assert!(rho.get(0, 1).norm() < 1e-12);
    }

    #[test]
    fn missing_setting_rejected() {
        let z = StateVector::zero(1).unwrap();
        let mut data = measure_state(&z, &[0], 16, 1).unwrap();
        data.counts.pop();
        assert!(estimate_expectations(&data).is_err());
    }

    #[test]
    fn sampled_zero_state_fidelity() {
        let z = StateVector::zero(2).unwrap();
        let data = measure_state(&z, &[0, 1], 8192, 9).unwrap();
        let res = reconstruct(&data, &z.density()).unwrap();
        assert_eq!(res.settings_used, 9);
        assert_eq!(res.shots_per_setting, 8192);
        assert!(res.fidelity_vs_ideal > 0.98, "{}", res.fidelity_vs_ideal);
        res.rho.validate().unwrap();
        assert!(res.to_csv().starts_with("row,col,real,imag\n0,0,"));
    }
}
