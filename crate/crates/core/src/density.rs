//! Density matrices for reduced states and tomography output.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::StateVector;

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    num_qubits: usize,
    entries: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn from_pure(state: &StateVector) -> Self {
        let amps = state.amplitudes();
        let d = amps.len();
        let entries = DMatrix::from_fn(d, d, |r, c| amps[r] * amps[c].conj());
        Self {
            num_qubits: state.num_qubits(),
            entries,
        }
    }

    /// Wraps a square matrix without checking physicality. Use
    /// [`validate`](Self::validate) or [`project_physical`](Self::project_physical)
    /// as appropriate.
    pub fn from_matrix(entries: DMatrix<Complex64>) -> Result<Self> {
        let d = entries.nrows();
        if d != entries.ncols() || d < 2 || !d.is_power_of_two() {
            return Err(Error::validation(format!(
                "density matrix must be square with power-of-two dimension, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        Ok(Self {
            num_qubits: d.trailing_zeros() as usize,
            entries,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[(row, col)]
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.trace()
    }

    pub fn purity(&self) -> f64 {
        (&self.entries * &self.entries).trace().re
    }

    /// Eigenvalues in ascending order (the matrix is treated as Hermitian).
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self.hermitian_part().symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| a.total_cmp(b));
        ev
    }

    /// Checks Hermiticity and unit trace within 1e-10 and eigenvalues ≥ -1e-9.
    pub fn validate(&self) -> Result<()> {
        let herm = (&self.entries - self.entries.adjoint()).camax();
        if herm > 1e-10 {
            return Err(Error::validation(format!("not Hermitian (deviation {herm:e})")));
        }
        let tr = self.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > 1e-10 {
            return Err(Error::validation(format!("trace is {tr}, expected 1")));
        }
        let min = self.eigenvalues().first().copied().unwrap_or(0.0);
        if min < -1e-9 {
            return Err(Error::validation(format!("negative eigenvalue {min:e}")));
        }
        Ok(())
    }

    /// ⟨b|ρ|b⟩.
    pub fn fidelity(&self, pure: &StateVector) -> Result<f64> {
        if pure.num_qubits() != self.num_qubits {
            return Err(Error::Dimension {
                left: self.num_qubits,
                right: pure.num_qubits(),
            });
        }
        let b = pure.amplitudes();
        let d = self.dim();
        let mut acc = Complex64::new(0.0, 0.0);
        for r in 0..d {
            if b[r] == Complex64::new(0.0, 0.0) {
                continue;
            }
            let row: Complex64 = (0..d).map(|c| self.entries[(r, c)] * b[c]).sum();
            acc += b[r].conj() * row;
        }
        Ok(acc.re.clamp(0.0, 1.0))
    }

    /// Uhlmann fidelity (tr √(√σ ρ √σ))² against `other`.
    pub fn fidelity_with(&self, other: &DensityMatrix) -> Result<f64> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::Dimension {
                left: self.num_qubits,
                right: other.num_qubits,
            });
        }
        let s = psd_sqrt(&other.hermitian_part());
        let inner = &s * &self.entries * &s;
        let inner = (&inner + inner.adjoint()) * Complex64::new(0.5, 0.0);
        let root: f64 = inner
            .symmetric_eigenvalues()
            .iter()
            .map(|&l| l.max(0.0).sqrt())
            .sum();
        Ok((root * root).clamp(0.0, 1.0))
    }

    /// Reduced state on `keep` (position k of the result is qubit `keep[k]`).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        if keep.is_empty() {
            return Err(Error::validation("partial trace needs a nonempty keep set"));
        }
        for (k, &q) in keep.iter().enumerate() {
            if q >= self.num_qubits {
                return Err(Error::validation(format!("keep qubit {q} out of range")));
            }
            if keep[..k].contains(&q) {
                return Err(Error::validation(format!("keep qubit {q} listed twice")));
            }
        }
        let env: Vec<usize> = (0..self.num_qubits).filter(|q| !keep.contains(q)).collect();
        let scatter = |value: usize, qubits: &[usize]| -> usize {
            qubits
                .iter()
                .enumerate()
                .fold(0, |acc, (k, &q)| acc | (((value >> k) & 1) << q))
        };
        let dk = 1usize << keep.len();
        let de = 1usize << env.len();
        let mut out = DMatrix::from_element(dk, dk, Complex64::new(0.0, 0.0));
        for r in 0..dk {
            let rf = scatter(r, keep);
            for c in 0..dk {
                let cf = scatter(c, keep);
                let mut acc = Complex64::new(0.0, 0.0);
                for e in 0..de {
                    let ef = scatter(e, &env);
                    acc += self.entries[(rf | ef, cf | ef)];
                }
                out[(r, c)] = acc;
            }
        }
        Ok(DensityMatrix {
            num_qubits: keep.len(),
            entries: out,
        })
    }

    /// Nearest positive-semidefinite unit-trace matrix by eigenvalue clipping
    /// followed by renormalization.
    pub fn project_physical(&self) -> Result<DensityMatrix> {
        let eig = self.hermitian_part().symmetric_eigen();
        let clipped: Vec<f64> = eig.eigenvalues.iter().map(|&l| l.max(0.0)).collect();
        let total: f64 = clipped.iter().sum();
        if total <= 0.0 || !total.is_finite() {
            return Err(Error::validation(
                "matrix has no positive spectrum to project onto",
            ));
        }
        let v = &eig.eigenvectors;
        let d = self.dim();
        let mut out = DMatrix::from_element(d, d, Complex64::new(0.0, 0.0));
        for (k, &l) in clipped.iter().enumerate() {
            if l == 0.0 {
                continue;
            }
            let col = v.column(k);
            out += (&col * col.adjoint()) * Complex64::new(l / total, 0.0);
        }
        Ok(DensityMatrix {
            num_qubits: self.num_qubits,
            entries: out,
        })
    }

    /// Largest entrywise modulus of the difference.
    pub fn max_abs_diff(&self, other: &DensityMatrix) -> Result<f64> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::Dimension {
                left: self.num_qubits,
                right: other.num_qubits,
            });
        }
        Ok((&self.entries - &other.entries)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max))
    }

    /// Row-major real and imaginary parts.
    pub fn to_rows(&self) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
        let d = self.dim();
        let re = (0..d).map(|r| (0..d).map(|c| self.entries[(r, c)].re).collect()).collect();
        let im = (0..d).map(|r| (0..d).map(|c| self.entries[(r, c)].im).collect()).collect();
        (re, im)
    }

    fn hermitian_part(&self) -> DMatrix<Complex64> {
        (&self.entries + self.entries.adjoint()) * Complex64::new(0.5, 0.0)
    }
}

fn psd_sqrt(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let eig = m.clone().symmetric_eigen();
    let d = m.nrows();
    let mut out = DMatrix::from_element(d, d, Complex64::new(0.0, 0.0));
    for (k, &l) in eig.eigenvalues.iter().enumerate() {
        if l <= 0.0 {
            continue;
        }
        let col = eig.eigenvectors.column(k);
        out += (&col * col.adjoint()) * Complex64::new(l.sqrt(), 0.0);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gate::GateKind;

    fn bell() -> StateVector {
        StateVector::zero(2)
            .unwrap()
            .applied(GateKind::H, &[0])
            .unwrap()
            .applied(GateKind::CX, &[0, 1])
            .unwrap()
    }

    #[test]
    fn density_of_zero() {
        let rho = StateVector::zero(1).unwrap().density();
        assert_eq!(rho.get(0, 0), Complex64::new(1.0, 0.0));
        assert_eq!(rho.get(0, 1), Complex64::new(0.0, 0.0));
        assert_eq!(rho.get(1, 1), Complex64::new(0.0, 0.0));
        rho.validate().unwrap();
    }

    #[test]
    fn bell_reduces_to_maximally_mixed() {
        let red = bell().density().partial_trace(&[0]).unwrap();
        assert!((red.get(0, 0).re - 0.5).abs() < 1e-12);
        assert!((red.get(1, 1).re - 0.5).abs() < 1e-12);
        assert!(red.get(0, 1).norm() < 1e-12);
        assert!((red.purity() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn partial_trace_rejects_empty_keep() {
        assert!(bell().density().partial_trace(&[]).is_err());
        assert!(bell().density().partial_trace(&[2]).is_err());
    }

    #[test]
    fn projection_clips_negative_eigenvalues() {
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(1.1, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(-0.1, 0.0),
            ],
        );
        let rho = DensityMatrix::from_matrix(m).unwrap();
        assert!(rho.validate().is_err());
        let p = rho.project_physical().unwrap();
        p.validate().unwrap();
        assert!((p.get(0, 0).re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fidelity_against_pure() {
        let rho = bell().density();
        assert!((rho.fidelity(&bell()).unwrap() - 1.0).abs() < 1e-12);
        let minus = bell().applied(GateKind::Z, &[1]).unwrap();
        assert!(rho.fidelity(&minus).unwrap() < 1e-12);
        assert!(rho.fidelity(&StateVector::zero(1).unwrap()).is_err());
    }

    #[test]
    fn uhlmann_matches_pure_overlap() {
        let rho = bell().density();
        let plus = StateVector::zero(2)
            .unwrap()
            .applied(GateKind::H, &[0])
            .unwrap();
        let f = rho.fidelity_with(&plus.density()).unwrap();
        assert!((f - rho.fidelity(&plus).unwrap()).abs() < 1e-9);
        let mixed = rho.partial_trace(&[0]).unwrap();
        let zero = StateVector::zero(1).unwrap().density();
        assert!((mixed.fidelity_with(&zero).unwrap() - 0.5).abs() < 1e-9);
    }
}
