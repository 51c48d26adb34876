//! Measurement-free error correction for GBS superdense coding.
//!
//! Each protected block of `n` data qubits `d[0..n]` carries a phase
//! ancilla `ϕ`, parity ancillas `p[0..n-1]` (`p[k]` watches the pair
//! `d[k], d[k+1]`) and one fresh ancilla `a` held by Bob.
//!
//! The pipeline runs, per block:
//!
//! 1. Alice, phase discrimination: `H(ϕ)`, `CX(ϕ→d[j])` for her qubits.
//! 2. Alice, parity discrimination: complete pairs into `p[0..n-2]`, and
//!    the first half of the last pair into `p[n-2]`.
//! 3. Bob completes both: `CX(ϕ→d[n-1])`, `H(ϕ)`, `CX(d[n-1]→p[n-2])`.
//!    `ϕ` now holds the encoded sign bit, `p` the encoded pair parities,
//!    whatever the channel did to Alice's qubits.
//! 4. Arbitrary phase: `H(a)`, `CX(a→d[j])` for all `j`, `CX(d[n-1]→a)`.
//!    The relative phase moves into `a` and the data sign becomes `+`.
//! 5. Phase flip: `H(ϕ)`, `CX(ϕ→d[j])`, `H(ϕ)`, `CZ(ϕ,d[n-1])`. The
//!    kickback XORs the current sign into `ϕ`, which then drives the CZ.
//! 6. Bit flip: for each pair, `CX(d[k]→p[k])`, `CX(d[k+1]→p[k])`,
//!    `CX(p[k]→d[k+1])`, in ascending `k`.
//!
//! Step 4 always leaves the data with a `+` sign, so selecting the
//! arbitrary-phase stage also runs step 5 to restore the encoded sign.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, ErrorEvent, ErrorKind, Party, QubitRef, Role, StandardResolver};
use crate::error::{Error, Result};
use crate::gate::GateOp;
use crate::protocol::{self, Message, StateFamily};
use crate::state::{bitstring, StateVector};

/// Deterministic in-flight errors on transmitted data qubits, applied in
/// list order.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ChannelErrorSpec {
    pub events: Vec<ErrorEvent>,
}

impl ChannelErrorSpec {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn new(events: Vec<ErrorEvent>) -> Self {
        Self { events }
    }

    pub fn with(mut self, qubit: usize, kind: ErrorKind) -> Self {
        self.events.push(ErrorEvent { qubit, kind });
        self
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Targets must be data qubits Alice transmits; ancillas and Bob's
    /// qubits are outside the channel error model.
    pub fn validate(&self, family: StateFamily) -> Result<()> {
        let allowed = family.transmitted_qubits();
        for ev in &self.events {
            if !allowed.contains(&ev.qubit) {
                return Err(Error::validation(format!(
                    "channel error on q{} but {family} only transmits data qubits {allowed:?}",
                    ev.qubit
                )));
            }
            if let ErrorKind::PhaseShift { theta } = ev.kind {
                if !theta.is_finite() {
                    return Err(Error::validation("phase shift angle must be finite"));
                }
            }
        }
        Ok(())
    }

    /// Short label such as `X@0+Z@0`, or `none`.
    pub fn label(&self) -> String {
        if self.events.is_empty() {
            return "none".into();
        }
        self.events
            .iter()
            .map(|e| format!("{}@{}", e.kind, e.qubit))
            .collect::<Vec<_>>()
            .join("+")
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageSelection {
    #[serde(default)]
    pub arbitrary_phase: bool,
    #[serde(default)]
    pub phase_flip: bool,
    #[serde(default)]
    pub bit_flip: bool,
}

impl StageSelection {
    pub const NONE: Self = Self {
        arbitrary_phase: false,
        phase_flip: false,
        bit_flip: false,
    };
    pub const ALL: Self = Self {
        arbitrary_phase: true,
        phase_flip: true,
        bit_flip: true,
    };
    pub const ARBITRARY_PHASE: Self = Self {
        arbitrary_phase: true,
        ..Self::NONE
    };
    pub const PHASE_FLIP: Self = Self {
        phase_flip: true,
        ..Self::NONE
    };
    pub const BIT_FLIP: Self = Self {
        bit_flip: true,
        ..Self::NONE
    };

    /// No correction stage: plain superdense coding without discrimination.
    pub fn is_plain(&self) -> bool {
        !(self.arbitrary_phase || self.phase_flip || self.bit_flip)
    }

    pub fn runs_step4(&self) -> bool {
        self.arbitrary_phase
    }

    pub fn runs_step5(&self) -> bool {
        self.arbitrary_phase || self.phase_flip
    }

    pub fn runs_step6(&self) -> bool {
        self.bit_flip
    }
}

impl fmt::Display for StageSelection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_plain() {
            return f.write_str("plain");
        }
        let names: Vec<&str> = [
            (self.arbitrary_phase, "arbitrary_phase"),
            (self.phase_flip, "phase_flip"),
            (self.bit_flip, "bit_flip"),
        ]
        .into_iter()
        .filter_map(|(on, n)| on.then_some(n))
        .collect();
        f.write_str(&names.join("+"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AncillaBudget {
    pub phase_count: usize,
    pub parity_count: usize,
    pub fresh_count: usize,
}

impl AncillaBudget {
    pub fn for_block(n: usize) -> Self {
        Self {
            phase_count: 1,
            parity_count: n - 1,
            fresh_count: 1,
        }
    }

    pub fn total(&self) -> usize {
        self.phase_count + self.parity_count + self.fresh_count
    }
}

/// Qubit indices of one protected block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockLayout {
    pub data: Vec<usize>,
    pub phase: usize,
    pub parity: Vec<usize>,
    pub fresh: usize,
}

impl BlockLayout {
    pub fn size(&self) -> usize {
        self.data.len()
    }

    fn last(&self) -> usize {
        self.data[self.data.len() - 1]
    }

    pub fn budget(&self) -> AncillaBudget {
        AncillaBudget {
            phase_count: 1,
            parity_count: self.parity.len(),
            fresh_count: 1,
        }
    }
}

/// Data register first (in block order), then each block's ancillas as
/// `ϕ, p…, a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProtectedLayout {
    pub family: StateFamily,
    pub blocks: Vec<BlockLayout>,
    pub num_qubits: usize,
}

impl ProtectedLayout {
    pub fn new(family: StateFamily) -> Result<Self> {
        family.validate()?;
        let mut next = family.data_qubits();
        let mut blocks = Vec::new();
        for data in family.block_data() {
            let n = data.len();
            let phase = next;
            let parity: Vec<usize> = (phase + 1..phase + n).collect();
            let fresh = phase + n;
            next = fresh + 1;
            blocks.push(BlockLayout {
                data,
                phase,
                parity,
                fresh,
            });
        }
        Ok(Self {
            family,
            blocks,
            num_qubits: next,
        })
    }

    pub fn data_register(&self) -> Vec<usize> {
        (0..self.family.data_qubits()).collect()
    }

    /// Initial owners: Charlie holds the data until distribution, Alice the
    /// discrimination ancillas, Bob the fresh ancillas.
    pub fn registry(&self) -> Vec<QubitRef> {
        let mut reg = Vec::with_capacity(self.num_qubits);
        for (b, block) in self.blocks.iter().enumerate() {
            for &q in &block.data {
                reg.push(QubitRef {
                    index: q,
                    role: Role::Data,
                    owner: Party::Charlie,
                    block: b,
                });
            }
        }
        for (b, block) in self.blocks.iter().enumerate() {
            let anc = |index, role, owner| QubitRef {
                index,
                role,
                owner,
                block: b,
            };
            reg.push(anc(block.phase, Role::PhaseAncilla, Party::Alice));
            for &p in &block.parity {
                reg.push(anc(p, Role::ParityAncilla, Party::Alice));
            }
            reg.push(anc(block.fresh, Role::CorrectionAncilla, Party::Bob));
        }
        reg
    }

    fn discrimination_ancillas(&self) -> Vec<usize> {
        self.blocks
            .iter()
            .flat_map(|b| std::iter::once(b.phase).chain(b.parity.iter().copied()))
            .collect()
    }
}

pub(crate) fn step1_ops(b: &BlockLayout) -> Vec<GateOp> {
    let n = b.size();
    let mut ops = vec![GateOp::h(b.phase)];
    ops.extend(b.data[..n - 1].iter().map(|&d| GateOp::cx(b.phase, d)));
    ops
}

pub(crate) fn step2_ops(b: &BlockLayout) -> Vec<GateOp> {
    let n = b.size();
    let mut ops = Vec::new();
    for k in 0..n - 2 {
        ops.push(GateOp::cx(b.data[k], b.parity[k]));
        ops.push(GateOp::cx(b.data[k + 1], b.parity[k]));
    }
    ops.push(GateOp::cx(b.data[n - 2], b.parity[n - 2]));
    ops
}

pub(crate) fn step3_ops(b: &BlockLayout) -> Vec<GateOp> {
    vec![
        GateOp::cx(b.phase, b.last()),
        GateOp::h(b.phase),
        GateOp::cx(b.last(), b.parity[b.parity.len() - 1]),
    ]
}

pub(crate) fn step4_ops(b: &BlockLayout) -> Vec<GateOp> {
    let mut ops = vec![GateOp::h(b.fresh)];
    ops.extend(b.data.iter().map(|&d| GateOp::cx(b.fresh, d)));
    ops.push(GateOp::cx(b.last(), b.fresh));
    ops
}

pub(crate) fn step5_ops(b: &BlockLayout) -> Vec<GateOp> {
    let mut ops = vec![GateOp::h(b.phase)];
    ops.extend(b.data.iter().map(|&d| GateOp::cx(b.phase, d)));
    ops.push(GateOp::h(b.phase));
    ops.push(GateOp::cz(b.phase, b.last()));
    ops
}

pub(crate) fn step6_ops(b: &BlockLayout) -> Vec<GateOp> {
    let mut ops = Vec::new();
    for k in 0..b.size() - 1 {
        ops.push(GateOp::cx(b.data[k], b.parity[k]));
        ops.push(GateOp::cx(b.data[k + 1], b.parity[k]));
        ops.push(GateOp::cx(b.parity[k], b.data[k + 1]));
    }
    ops
}

fn single_block(n: usize, build: fn(&BlockLayout) -> Vec<GateOp>) -> Result<Circuit> {
    if n < 2 {
        return Err(Error::validation(format!("block size {n} < 2")));
    }
    let layout = ProtectedLayout::new(StateFamily::Gbs(n))?;
    let mut c = Circuit::new(layout.registry())?;
    c.gates(build(&layout.blocks[0]))?;
    Ok(c)
}

/// Step 1 on the standard single-block registry of GBS(n).
pub fn alice_phase_discrimination(n: usize) -> Result<Circuit> {
    single_block(n, step1_ops)
}

/// Step 2 (complete pairs, then the half-pair Bob finishes).
pub fn alice_parity_discrimination(n: usize) -> Result<Circuit> {
    single_block(n, step2_ops)
}

/// Step 3.
pub fn bob_complete_discrimination(n: usize) -> Result<Circuit> {
    single_block(n, step3_ops)
}

/// Step 4.
pub fn bob_arbitrary_phase_correction(n: usize) -> Result<Circuit> {
    single_block(n, step4_ops)
}

/// Step 5.
pub fn bob_phase_flip_correction(n: usize) -> Result<Circuit> {
    single_block(n, step5_ops)
}

/// Step 6.
pub fn bob_bit_flip_correction(n: usize) -> Result<Circuit> {
    single_block(n, step6_ops)
}

fn push_channel(
    c: &mut Circuit,
    shipped: Vec<usize>,
    spec: &ChannelErrorSpec,
) -> Result<()> {
    c.transfer(shipped.clone(), Party::Alice, Party::Channel)?;
    if !spec.is_empty() {
        c.error_marker(spec.events.clone())?;
    }
    c.transfer(shipped, Party::Channel, Party::Bob)
}

/// Channel segment on the protected registry of `family`: Alice ships her
/// data qubits and discrimination ancillas, the errors strike the data in
/// transit, Bob receives. Ownership in the returned registry is as it
/// stands just before the transfer.
pub fn inject_errors(family: StateFamily, spec: &ChannelErrorSpec) -> Result<Circuit> {
    spec.validate(family)?;
    let layout = ProtectedLayout::new(family)?;
    let mut registry = layout.registry();
    for q in registry.iter_mut() {
        if q.role == Role::Data {
            q.owner = family.data_owner(q.index);
        }
    }
    let mut c = Circuit::new(registry)?;
    let mut shipped = family.transmitted_qubits();
    shipped.extend(layout.discrimination_ancillas());
    push_channel(&mut c, shipped, spec)?;
    Ok(c)
}

/// Post-correction ancilla readings of one block, as P(ancilla = 1).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockSyndrome {
    pub phase: f64,
    pub parity: Vec<f64>,
    pub fresh: f64,
}

/// Informational only; the protocol never branches on these values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SyndromeRecord {
    pub blocks: Vec<BlockSyndrome>,
}

impl fmt::Display for SyndromeRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fmt_p = |p: f64| {
            if p < 1e-9 {
                "0".to_string()
            } else if p > 1.0 - 1e-9 {
                "1".to_string()
            } else {
                format!("{p:.3}")
            }
        };
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|b| {
                let parity: Vec<String> = b.parity.iter().map(|&p| fmt_p(p)).collect();
                format!(
                    "phi={} p={} a={}",
                    fmt_p(b.phase),
                    parity.join(""),
                    fmt_p(b.fresh)
                )
            })
            .collect();
        f.write_str(&parts.join(" | "))
    }
}

/// An assembled end-to-end protocol run.
#[derive(Debug, Clone)]
pub struct Pipeline {
    pub family: StateFamily,
    pub message: Message,
    pub errors: ChannelErrorSpec,
    pub stages: StageSelection,
    pub layout: ProtectedLayout,
    pub circuit: Circuit,
}

#[derive(Debug, Clone)]
pub struct PipelineOutcome {
    pub state: StateVector,
    /// Marginal distribution of the data register.
    pub data_probabilities: Vec<f64>,
    /// Most likely data readout.
    pub readout: usize,
    pub decoded: Message,
    /// √P(data register = expected readout), i.e. the overlap of the output
    /// with the target basis state of the data register.
    pub overlap: f64,
    pub syndrome: SyndromeRecord,
}

impl PipelineOutcome {
    pub fn success(&self, message: &Message, tol: f64) -> bool {
        &self.decoded == message && self.overlap >= 1.0 - tol
    }
}

/// prepare → encode → Steps 1–2 → channel → Step 3 → selected corrections
/// (4, 5, 6) → decode. With no stage selected the discrimination steps are
/// skipped as well and only the data qubits cross the channel.
pub fn assemble_pipeline(
    family: StateFamily,
    message: &Message,
    errors: &ChannelErrorSpec,
    stages: StageSelection,
) -> Result<Pipeline> {
    family.validate()?;
    message.check(family)?;
    errors.validate(family)?;
    let layout = ProtectedLayout::new(family)?;
    let mut c = Circuit::new(layout.registry())?;
    c.validate_registry()?;

    c.gates(protocol::prep_ops(family))?;
    c.transfer(family.transmitted_qubits(), Party::Charlie, Party::Alice)?;
    let bob: Vec<usize> = layout.blocks.iter().map(|b| b.last()).collect();
    c.transfer(bob, Party::Charlie, Party::Bob)?;

    c.gates(protocol::encode_ops(family, message)?)?;

    let protected = !stages.is_plain();
    let mut shipped = family.transmitted_qubits();
    if protected {
        for b in &layout.blocks {
            c.gates(step1_ops(b))?;
            c.gates(step2_ops(b))?;
        }
        shipped.extend(layout.discrimination_ancillas());
    }

    push_channel(&mut c, shipped, errors)?;

    if protected {
        let mut steps: Vec<fn(&BlockLayout) -> Vec<GateOp>> = vec![step3_ops];
        if stages.runs_step4() {
            steps.push(step4_ops);
        }
        if stages.runs_step5() {
            steps.push(step5_ops);
        }
        if stages.runs_step6() {
            steps.push(step6_ops);
        }
        for step in steps {
            for b in &layout.blocks {
                c.gates(step(b))?;
            }
        }
        c.note(
            "step3_order",
            "CX(phase->last data) then H(phase): H first leaves the phase ancilla entangled",
        );
        c.note(
            "step5_order",
            "phase kickback H,CX..,H then CZ(phase,last data): correct with or without step 4",
        );
        if stages.arbitrary_phase && !stages.phase_flip {
            c.note("stage_policy", "arbitrary_phase implies step 5 to restore the sign bit");
        }
    }

    c.gates(protocol::decode_ops(family))?;

    Ok(Pipeline {
        family,
        message: message.clone(),
        errors: errors.clone(),
        stages,
        layout,
        circuit: c,
    })
}

impl Pipeline {
    pub fn data_register(&self) -> Vec<usize> {
        self.layout.data_register()
    }

    pub fn expected_readout(&self) -> usize {
        protocol::expected_readout(self.family, &self.message).expect("message checked at assembly")
    }

    pub fn evaluate(&self) -> Result<PipelineOutcome> {
        let zero = StateVector::zero(self.layout.num_qubits)?;
        let state = self.circuit.simulate(&zero, &StandardResolver)?;
        self.outcome(state)
    }

    pub fn outcome(&self, state: StateVector) -> Result<PipelineOutcome> {
        let register = self.data_register();
        let probs = state.register_probabilities(&register)?;
        let (readout, _) = probs
            .iter()
            .copied()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(&b.1).then(b.0.cmp(&a.0)))
            .expect("nonempty register");
        let decoded =
            protocol::decode_message(&bitstring(readout, register.len()), self.family)?;
        let overlap = probs[self.expected_readout()].min(1.0).sqrt();
        let marginal = |q: usize| -> Result<f64> { Ok(state.register_probabilities(&[q])?[1]) };
        let mut blocks = Vec::new();
        for b in &self.layout.blocks {
            blocks.push(BlockSyndrome {
                phase: marginal(b.phase)?,
                parity: b.parity.iter().map(|&p| marginal(p)).collect::<Result<_>>()?,
                fresh: marginal(b.fresh)?,
            });
        }
        Ok(PipelineOutcome {
            state,
            data_probabilities: probs,
            readout,
            decoded,
            overlap,
            syndrome: SyndromeRecord { blocks },
        })
    }
}

/// Angles used by the standard error grid.
pub const GRID_ANGLES: [(&str, f64); 3] = [("pi/7", PI / 7.0), ("pi/3", PI / 3.0), ("2.1", 2.1)];

/// One row of the error grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorCase {
    pub name: String,
    pub spec: ChannelErrorSpec,
}

/// `none`, plus for every transmitted qubit: X, Z, X·Z, Phase(θ) and
/// X·Z·Phase(θ) for each grid angle (9 cases per qubit).
pub fn error_grid(family: StateFamily) -> Vec<ErrorCase> {
    let mut cases = vec![ErrorCase {
        name: "none".into(),
        spec: ChannelErrorSpec::none(),
    }];
    for q in family.transmitted_qubits() {
        let spec = || ChannelErrorSpec::none();
        cases.push(ErrorCase {
            name: format!("X@{q}"),
            spec: spec().with(q, ErrorKind::BitFlip),
        });
        cases.push(ErrorCase {
            name: format!("Z@{q}"),
            spec: spec().with(q, ErrorKind::PhaseFlip),
        });
        cases.push(ErrorCase {
            name: format!("XZ@{q}"),
            spec: spec().with(q, ErrorKind::BitFlip).with(q, ErrorKind::PhaseFlip),
        });
        for (label, theta) in GRID_ANGLES {
            cases.push(ErrorCase {
                name: format!("P({label})@{q}"),
                spec: spec().with(q, ErrorKind::PhaseShift { theta }),
            });
        }
        for (label, theta) in GRID_ANGLES {
            cases.push(ErrorCase {
                name: format!("XZP({label})@{q}"),
                spec: spec()
                    .with(q, ErrorKind::BitFlip)
                    .with(q, ErrorKind::PhaseFlip)
                    .with(q, ErrorKind::PhaseShift { theta }),
            });
        }
    }
    cases
}

#[cfg(test)]
mod tests {
    use super::*;

    fn msg(s: &str) -> Message {
        s.parse().unwrap()
    }

    #[test]
    fn layout_for_gbs4() {
        let l = ProtectedLayout::new(StateFamily::Gbs(4)).unwrap();
        assert_eq!(l.num_qubits, 9);
        let b = &l.blocks[0];
        assert_eq!(b.data, vec![0, 1, 2, 3]);
        assert_eq!(b.phase, 4);
        assert_eq!(b.parity, vec![5, 6, 7]);
        assert_eq!(b.fresh, 8);
        assert_eq!(b.budget(), AncillaBudget::for_block(4));
    }

    #[test]
    fn ghz_epr_layout_has_twelve_qubits() {
        let l = ProtectedLayout::new(StateFamily::GhzEpr(2)).unwrap();
        assert_eq!(l.num_qubits, 12);
        assert_eq!(l.blocks[1].data, vec![3, 4]);
        let total: usize = l.blocks.iter().map(|b| b.budget().total()).sum();
        assert_eq!(total, 7);
    }

    #[test]
    fn errors_on_ancillas_or_bob_are_rejected() {
        let bad = ChannelErrorSpec::none().with(1, ErrorKind::BitFlip);
        assert!(bad.validate(StateFamily::Epr).is_err());
        let anc = ChannelErrorSpec::none().with(2, ErrorKind::PhaseFlip);
        assert!(anc.validate(StateFamily::Epr).is_err());
        assert!(inject_errors(StateFamily::Epr, &anc).is_err());
        let ok = ChannelErrorSpec::none().with(0, ErrorKind::PhaseFlip);
        assert!(ok.validate(StateFamily::Epr).is_ok());
    }

    #[test]
    fn empty_spec_is_identity_channel() {
        let c = inject_errors(StateFamily::Gbs(3), &ChannelErrorSpec::none()).unwrap();
        assert_eq!(c.gate_ops().count(), 0);
        assert_eq!(c.ops().len(), 2);
        assert_eq!(c.locality_check(), Ok(()));
    }

    #[test]
    fn plain_pipeline_decodes() {
        for m in Message::all(2) {
            let p = assemble_pipeline(StateFamily::Epr, &m, &ChannelErrorSpec::none(), StageSelection::NONE)
                .unwrap();
            let out = p.evaluate().unwrap();
            assert!(out.success(&m, 1e-9), "{m}");
        }
    }

    #[test]
    fn epr_combined_errors_corrected() {
        let spec = ChannelErrorSpec::none()
            .with(0, ErrorKind::BitFlip)
            .with(0, ErrorKind::PhaseFlip)
            .with(0, ErrorKind::PhaseShift { theta: 1.1 });
        let m = msg("11");
        let p = assemble_pipeline(StateFamily::Epr, &m, &spec, StageSelection::ALL).unwrap();
        let out = p.evaluate().unwrap();
        assert!(out.success(&m, 1e-9));
        assert!((out.data_probabilities[p.expected_readout()] - 1.0).abs() < 1e-12);
        assert_eq!(p.circuit.locality_check(), Ok(()));
    }

    #[test]
    fn bit_flip_syndrome_fires() {
        let spec = ChannelErrorSpec::none().with(0, ErrorKind::BitFlip);
        let m = msg("00");
        let p = assemble_pipeline(StateFamily::Epr, &m, &spec, StageSelection::BIT_FLIP).unwrap();
        let out = p.evaluate().unwrap();
        assert!(out.success(&m, 1e-9));
        assert!((out.syndrome.blocks[0].parity[0] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn grid_sizes() {
        assert_eq!(error_grid(StateFamily::Epr).len(), 10);
        assert_eq!(error_grid(StateFamily::Gbs(4)).len(), 28);
    }

    #[test]
    fn stage_policy() {
        assert!(StageSelection::ARBITRARY_PHASE.runs_step5());
        assert!(!StageSelection::PHASE_FLIP.runs_step4());
        assert!(StageSelection::NONE.is_plain());
        assert_eq!(StageSelection::ALL.to_string(), "arbitrary_phase+phase_flip+bit_flip");
    }
}
