//! The fixed gate set used by every circuit in the toolkit.
//!
//! Two-qubit gates take their qubits in control-then-target order. Matrices
//! are written in the basis `|control, target>` with the control as the high
//! bit, i.e. CX = diag(I, X).

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateKind {
    I,
    X,
    Y,
    Z,
    H,
    /// diag(1, e^{iθ}), θ in radians.
    Phase(f64),
    CX,
    CZ,
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

impl GateKind {
    pub fn arity(&self) -> usize {
        match self {
            GateKind::CX | GateKind::CZ => 2,
            _ => 1,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            GateKind::I => "I",
            GateKind::X => "X",
            GateKind::Y => "Y",
            GateKind::Z => "Z",
            GateKind::H => "H",
            GateKind::Phase(_) => "PHASE",
            GateKind::CX => "CX",
            GateKind::CZ => "CZ",
        }
    }

    pub fn from_name(name: &str, theta: Option<f64>) -> Result<Self> {
        let kind = match name.to_ascii_uppercase().as_str() {
            "I" => GateKind::I,
            "X" => GateKind::X,
            "Y" => GateKind::Y,
            "Z" => GateKind::Z,
            "H" => GateKind::H,
            "PHASE" | "P" => {
                let theta =
                    theta.ok_or_else(|| Error::Parse("PHASE gate requires theta".into()))?;
                if !theta.is_finite() {
                    return Err(Error::Parse(format!("non-finite phase angle {theta}")));
                }
                GateKind::Phase(theta)
            }
            "CX" | "CNOT" => GateKind::CX,
            "CZ" => GateKind::CZ,
            other => return Err(Error::Parse(format!("unknown gate {other:?}"))),
        };
        if theta.is_some() && !matches!(kind, GateKind::Phase(_)) {
            return Err(Error::Parse(format!("gate {name} takes no angle")));
        }
        Ok(kind)
    }

    pub fn theta(&self) -> Option<f64> {
        match self {
            GateKind::Phase(t) => Some(*t),
            _ => None,
        }
    }

    /// Hermitian conjugate. Everything but `Phase` is self-adjoint.
    pub fn adjoint(&self) -> Self {
        match self {
            GateKind::Phase(t) => GateKind::Phase(-t),
            other => *other,
        }
    }

    /// Row-major unitary of dimension `2^arity`.
    pub fn matrix(&self) -> Vec<Complex64> {
        let i = Complex64::i();
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        match self {
            GateKind::I => vec![ONE, ZERO, ZERO, ONE],
            GateKind::X => vec![ZERO, ONE, ONE, ZERO],
            GateKind::Y => vec![ZERO, -i, i, ZERO],
            GateKind::Z => vec![ONE, ZERO, ZERO, -ONE],
            GateKind::H => vec![h, h, h, -h],
            GateKind::Phase(t) => vec![ONE, ZERO, ZERO, Complex64::from_polar(1.0, *t)],
            GateKind::CX => {
                let mut m = vec![ZERO; 16];
                m[0] = ONE;
                m[5] = ONE;
                m[11] = ONE;
                m[14] = ONE;
                m
            }
            GateKind::CZ => {
                let mut m = vec![ZERO; 16];
                m[0] = ONE;
                m[5] = ONE;
                m[10] = ONE;
                m[15] = -ONE;
                m
            }
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateKind::Phase(t) => write!(f, "PHASE({t})"),
            other => f.write_str(other.name()),
        }
    }
}

/// A gate bound to concrete qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct GateOp {
    pub kind: GateKind,
    pub qubits: Vec<usize>,
}

impl GateOp {
    pub fn new(kind: GateKind, qubits: impl Into<Vec<usize>>) -> Self {
        Self {
            kind,
            qubits: qubits.into(),
        }
    }

    pub fn single(kind: GateKind, q: usize) -> Self {
        Self::new(kind, vec![q])
    }

    pub fn cx(control: usize, target: usize) -> Self {
        Self::new(GateKind::CX, vec![control, target])
    }

    pub fn cz(control: usize, target: usize) -> Self {
        Self::new(GateKind::CZ, vec![control, target])
    }

    pub fn h(q: usize) -> Self {
        Self::single(GateKind::H, q)
    }

    pub fn adjoint(&self) -> Self {
        Self::new(self.kind.adjoint(), self.qubits.clone())
    }

    /// Checks arity, distinctness and range against a register of `n` qubits.
    pub fn validate(&self, n: usize) -> Result<()> {
        if self.qubits.len() != self.kind.arity() {
            return Err(Error::validation(format!(
                "{} expects {} qubit(s), got {}",
                self.kind,
                self.kind.arity(),
                self.qubits.len()
            )));
        }
        for (k, &q) in self.qubits.iter().enumerate() {
            if q >= n {
                return Err(Error::validation(format!(
                    "{}: qubit {q} out of range for {n}-qubit register",
                    self.kind
                )));
            }
            if self.qubits[..k].contains(&q) {
                return Err(Error::validation(format!(
                    "{}: qubit {q} used twice",
                    self.kind
                )));
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct GateOpRepr {
    gate: String,
    qubits: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    theta: Option<f64>,
}

impl Serialize for GateOp {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GateOpRepr {
            gate: self.kind.name().to_string(),
            qubits: self.qubits.clone(),
            theta: self.kind.theta(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GateOp {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = GateOpRepr::deserialize(d)?;
        let kind = GateKind::from_name(&repr.gate, repr.theta).map_err(serde::de::Error::custom)?;
        Ok(GateOp {
            kind,
            qubits: repr.qubits,
        })
    }
}
