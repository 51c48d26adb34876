//! Circuit representation with party ownership.
//!
//! A [`Circuit`] is a registry of typed qubits plus an ordered op stream.
//! Besides gates the stream carries [`TransferEvent`]s, which move qubits
//! between parties (and through the `Channel`), and [`ErrorMarker`]s, the
//! attachment point for deliberate channel errors. Neither touches
//! amplitudes directly: transfers are no-ops and markers are expanded into
//! gates by an [`ErrorResolver`] at simulation time.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gate::{GateKind, GateOp};
use crate::state::StateVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Party {
    Alice,
    Bob,
    Charlie,
    Channel,
}

impl fmt::Display for Party {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Role {
    Data,
    PhaseAncilla,
    ParityAncilla,
    CorrectionAncilla,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QubitRef {
    pub index: usize,
    pub role: Role,
    /// Owner at circuit start.
    pub owner: Party,
    /// Entangled block this qubit belongs to or protects.
    pub block: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ErrorKind {
    BitFlip,
    PhaseFlip,
    PhaseShift { theta: f64 },
}

impl ErrorKind {
    pub fn gate(&self) -> GateKind {
        match self {
            ErrorKind::BitFlip => GateKind::X,
            ErrorKind::PhaseFlip => GateKind::Z,
            ErrorKind::PhaseShift { theta } => GateKind::Phase(*theta),
        }
    }
}

impl fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ErrorKind::BitFlip => f.write_str("X"),
            ErrorKind::PhaseFlip => f.write_str("Z"),
            ErrorKind::PhaseShift { theta } => write!(f, "P({theta:.6})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorEvent {
    pub qubit: usize,
    #[serde(flatten)]
    pub kind: ErrorKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransferEvent {
    pub qubits: Vec<usize>,
    pub from: Party,
    pub to: Party,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorMarker {
    pub events: Vec<ErrorEvent>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum Op {
    Gate(GateOp),
    Transfer(TransferEvent),
    Error(ErrorMarker),
}

impl Op {
    fn qubits(&self) -> Vec<usize> {
        match self {
            Op::Gate(g) => g.qubits.clone(),
            Op::Transfer(t) => t.qubits.clone(),
            Op::Error(e) => e.events.iter().map(|ev| ev.qubit).collect(),
        }
    }
}

/// Expands an error event into the gates that realize it.
pub trait ErrorResolver {
    fn resolve(&self, event: &ErrorEvent) -> Vec<GateOp>;
}

/// X for bit flips, Z for phase flips, Phase(θ) for phase shifts.
#[derive(Debug, Clone, Copy, Default)]
pub struct StandardResolver;

impl ErrorResolver for StandardResolver {
    fn resolve(&self, event: &ErrorEvent) -> Vec<GateOp> {
        vec![GateOp::single(event.kind.gate(), event.qubit)]
    }
}

/// Drops every error marker.
#[derive(Debug, Clone, Copy, Default)]
pub struct IgnoreErrors;

impl ErrorResolver for IgnoreErrors {
    fn resolve(&self, _event: &ErrorEvent) -> Vec<GateOp> {
        Vec::new()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    registry: Vec<QubitRef>,
    ops: Vec<Op>,
    /// Free-form notes, e.g. where a builder departs from a literal
    /// transcription of the protocol equations.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    metadata: BTreeMap<String, String>,
}

/// First op that breaks party locality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalityViolation {
    pub op_index: usize,
    pub reason: String,
}

impl fmt::Display for LocalityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "op {}: {}", self.op_index, self.reason)
    }
}

impl Circuit {
    /// Empty circuit over `registry`. Registry entry `k` must have index `k`.
    pub fn new(registry: Vec<QubitRef>) -> Result<Self> {
        for (k, q) in registry.iter().enumerate() {
            if q.index != k {
                return Err(Error::validation(format!(
                    "registry entry {k} carries index {}",
                    q.index
                )));
            }
        }
        if registry.is_empty() {
            return Err(Error::validation("registry is empty"));
        }
        Ok(Self {
            registry,
            ops: Vec::new(),
            metadata: BTreeMap::new(),
        })
    }

    pub fn registry(&self) -> &[QubitRef] {
        &self.registry
    }

    pub fn ops(&self) -> &[Op] {
        &self.ops
    }

    pub fn metadata(&self) -> &BTreeMap<String, String> {
        &self.metadata
    }

    pub fn num_qubits(&self) -> usize {
        self.registry.len()
    }

    pub fn push(&mut self, op: Op) -> Result<()> {
        self.check_op(&op)?;
        self.ops.push(op);
        Ok(())
    }

    pub fn gate(&mut self, op: GateOp) -> Result<()> {
        self.push(Op::Gate(op))
    }

    pub fn gates(&mut self, ops: impl IntoIterator<Item = GateOp>) -> Result<()> {
        ops.into_iter().try_for_each(|g| self.gate(g))
    }

    pub fn transfer(&mut self, qubits: Vec<usize>, from: Party, to: Party) -> Result<()> {
        self.push(Op::Transfer(TransferEvent { qubits, from, to }))
    }

    pub fn error_marker(&mut self, events: Vec<ErrorEvent>) -> Result<()> {
        self.push(Op::Error(ErrorMarker { events }))
    }

    pub fn note(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.metadata.insert(key.into(), value.into());
    }

    pub fn gate_ops(&self) -> impl Iterator<Item = &GateOp> {
        self.ops.iter().filter_map(|op| match op {
            Op::Gate(g) => Some(g),
            _ => None,
        })
    }

    pub fn is_gate_only(&self) -> bool {
        self.ops.iter().all(|op| matches!(op, Op::Gate(_)))
    }

    fn check_op(&self, op: &Op) -> Result<()> {
        let n = self.num_qubits();
        match op {
            Op::Gate(g) => g.validate(n),
            other => {
                for q in other.qubits() {
                    if q >= n {
                        return Err(Error::validation(format!(
                            "op references unregistered qubit {q}"
                        )));
                    }
                }
                Ok(())
            }
        }
    }

    /// Registry invariants: one phase ancilla per block that has any ancilla.
    pub fn validate_registry(&self) -> Result<()> {
        let mut blocks: BTreeMap<usize, (usize, bool)> = BTreeMap::new();
        for q in &self.registry {
            let entry = blocks.entry(q.block).or_insert((0, false));
            match q.role {
                Role::PhaseAncilla => entry.0 += 1,
                Role::ParityAncilla | Role::CorrectionAncilla => entry.1 = true,
                Role::Data => {}
            }
        }
        for (block, (phase, other)) in blocks {
            let protected = phase > 0 || other;
            if protected && phase != 1 {
                return Err(Error::validation(format!(
                    "block {block} has {phase} phase ancillas, expected exactly 1"
                )));
            }
        }
        Ok(())
    }

    /// `a` followed by `b`. Registries must agree on index, role and block;
    /// initial owners are taken from `a`.
    pub fn compose(a: &Circuit, b: &Circuit) -> Result<Circuit> {
        let same = a.registry.len() == b.registry.len()
            && a
                .registry
                .iter()
                .zip(&b.registry)
                .all(|(x, y)| x.index == y.index && x.role == y.role && x.block == y.block);
        if !same {
            return Err(Error::validation("cannot compose circuits with different registries"));
        }
        let mut out = a.clone();
        out.ops.extend(b.ops.iter().cloned());
        for (k, v) in &b.metadata {
            out.metadata.entry(k.clone()).or_insert_with(|| v.clone());
        }
        Ok(out)
    }

    /// Reversed op order with every gate replaced by its adjoint.
    pub fn inverse(&self) -> Result<Circuit> {
        let mut ops = Vec::with_capacity(self.ops.len());
        for (k, op) in self.ops.iter().enumerate().rev() {
            match op {
                Op::Gate(g) => ops.push(Op::Gate(g.adjoint())),
                _ => {
                    return Err(Error::validation(format!(
                        "cannot invert op {k}: only gate circuits are invertible"
                    )))
                }
            }
        }
        Ok(Circuit {
            registry: self.registry.clone(),
            ops,
            metadata: self.metadata.clone(),
        })
    }

    /// Replays the op stream tracking ownership. Every gate must act on
    /// qubits held by a single non-channel party, transfers must move
    /// qubits their `from` party holds, and error markers may only touch
    /// qubits in the channel.
    pub fn locality_check(&self) -> std::result::Result<(), LocalityViolation> {
        let mut owner: Vec<Party> = self.registry.iter().map(|q| q.owner).collect();
        for (k, op) in self.ops.iter().enumerate() {
            let fail = |reason: String| {
                Err(LocalityViolation {
                    op_index: k,
                    reason,
                })
            };
            match op {
                Op::Gate(g) => {
                    let first = owner[g.qubits[0]];
                    if let Some(&q) = g.qubits.iter().find(|&&q| owner[q] != first) {
                        return fail(format!(
                            "{} spans {} (q{}) and {} (q{q})",
                            g.kind, first, g.qubits[0], owner[q]
                        ));
                    }
                    if first == Party::Channel {
                        return fail(format!("{} applied to a qubit in transit", g.kind));
                    }
                }
                Op::Transfer(t) => {
                    if t.from == t.to {
                        return fail(format!("transfer from {} to itself", t.from));
                    }
                    if let Some(&q) = t.qubits.iter().find(|&&q| owner[q] != t.from) {
                        return fail(format!(
                            "transfer of q{q} from {} but it is held by {}",
                            t.from, owner[q]
                        ));
                    }
                    for &q in &t.qubits {
                        owner[q] = t.to;
                    }
                }
                Op::Error(e) => {
                    if let Some(ev) = e.events.iter().find(|ev| owner[ev.qubit] != Party::Channel) {
                        return fail(format!(
                            "channel error on q{} held by {}",
                            ev.qubit, owner[ev.qubit]
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// Applies the op stream to `initial`.
    pub fn simulate(&self, initial: &StateVector, resolver: &dyn ErrorResolver) -> Result<StateVector> {
        if initial.num_qubits() != self.num_qubits() {
            return Err(Error::Dimension {
                left: self.num_qubits(),
                right: initial.num_qubits(),
            });
        }
        let mut state = initial.clone();
        for op in &self.ops {
            match op {
                Op::Gate(g) => state.apply_op(g)?,
                Op::Transfer(_) => {}
                Op::Error(marker) => {
                    for ev in &marker.events {
                        for g in resolver.resolve(ev) {
                            state.apply_op(&g)?;
                        }
                    }
                }
            }
        }
        Ok(state)
    }

    /// Simulates from |0…0⟩ with the standard error resolver.
    pub fn run(&self) -> Result<StateVector> {
        self.simulate(&StateVector::zero(self.num_qubits())?, &StandardResolver)
    }

    /// Flattens the op stream into the gate sequence the simulator applies.
    pub fn resolved_gates(&self, resolver: &dyn ErrorResolver) -> Vec<GateOp> {
        let mut out = Vec::new();
        for op in &self.ops {
            match op {
                Op::Gate(g) => out.push(g.clone()),
                Op::Transfer(_) => {}
                Op::Error(marker) => {
                    for ev in &marker.events {
                        out.extend(resolver.resolve(ev));
                    }
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Parses and re-validates a circuit.
    pub fn from_json(s: &str) -> Result<Circuit> {
        let raw: Circuit = serde_json::from_str(s)?;
        let mut c = Circuit::new(raw.registry)?;
        c.metadata = raw.metadata;
        for op in raw.ops {
            c.push(op)?;
        }
        Ok(c)
    }
}
