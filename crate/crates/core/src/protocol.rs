//! Superdense-coding codecs for the EPR, GBS(N) and GHZ-EPR families.
//!
//! Every family is a list of independent GBS blocks: EPR is one block of 2,
//! GBS(N) one block of N, and GHZ-EPR(N) a 3-qubit GHZ block followed by N−1
//! EPR blocks. Data qubits occupy indices `0..data_qubits()` in block order,
//! and in every block Alice holds all qubits but the last, which is Bob's.
//!
//! Per-block encoding of the message bits `b1 b2 … bn` (display order):
//! `X^{b2}` then `Z^{b1}` on the block's first qubit, and `X^{b(k+1)}` on
//! qubit `k−1` for `k = 2..n−1`. For a 2-qubit block this is the familiar
//! table 00→I, 01→X, 10→Z, 11→ZX.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Party, QubitRef, Role};
use crate::error::{Error, Result};
use crate::gate::{GateKind, GateOp};
use crate::state::{bitstring, parse_bitstring, StateVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum StateFamily {
    Epr,
    Gbs(usize),
    GhzEpr(usize),
}

impl StateFamily {
    pub fn validate(&self) -> Result<()> {
        match *self {
            StateFamily::Gbs(n) if n < 2 => {
                Err(Error::validation(format!("GBS({n}) needs at least 2 qubits")))
            }
            StateFamily::GhzEpr(0) => Err(Error::validation("GHZ-EPR(N) needs N ≥ 1")),
            _ => Ok(()),
        }
    }

    /// Data-qubit count of each entangled block.
    pub fn block_sizes(&self) -> Vec<usize> {
        match *self {
            StateFamily::Epr => vec![2],
            StateFamily::Gbs(n) => vec![n],
            StateFamily::GhzEpr(n) => {
                let mut v = vec![3];
                v.extend(std::iter::repeat(2).take(n.saturating_sub(1)));
                v
            }
        }
    }

    pub fn data_qubits(&self) -> usize {
        self.block_sizes().iter().sum()
    }

    /// Classical bits carried per use, which equals the number of data qubits
    /// (log₂ of the dimension).
    pub fn capacity(&self) -> usize {
        match *self {
            StateFamily::Epr => 2,
            StateFamily::Gbs(n) => n,
            StateFamily::GhzEpr(n) => 2 * n + 1,
        }
    }

    /// Data-qubit indices of each block.
    pub fn block_data(&self) -> Vec<Vec<usize>> {
        let mut next = 0;
        self.block_sizes()
            .into_iter()
            .map(|n| {
                let v: Vec<usize> = (next..next + n).collect();
                next += n;
                v
            })
            .collect()
    }

    /// Data qubits Alice ships to Bob: every block's qubits but the last.
    pub fn transmitted_qubits(&self) -> Vec<usize> {
        self.block_data()
            .into_iter()
            .flat_map(|b| {
                let n = b.len();
                b.into_iter().take(n - 1)
            })
            .collect()
    }

    pub fn data_owner(&self, qubit: usize) -> Party {
        let last = self.block_data().iter().any(|b| b.last() == Some(&qubit));
        if last {
            Party::Bob
        } else {
            Party::Alice
        }
    }
}

impl fmt::Display for StateFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateFamily::Epr => f.write_str("EPR"),
            StateFamily::Gbs(n) => write!(f, "GBS({n})"),
            StateFamily::GhzEpr(n) => write!(f, "GHZ-EPR({n})"),
        }
    }
}

impl FromStr for StateFamily {
    type Err = Error;

    /// Accepts `EPR`, `GBS(4)` / `gbs4`, `GHZ-EPR(2)` / `ghzepr2`.
    fn from_str(s: &str) -> Result<Self> {
        let norm: String = s
            .chars()
            .filter(|c| !matches!(c, '-' | '_' | ' ' | '(' | ')'))
            .collect::<String>()
            .to_ascii_uppercase();
        let arg = |prefix: &str| -> Result<usize> {
            norm[prefix.len()..]
                .parse()
                .map_err(|_| Error::Parse(format!("bad family size in {s:?}")))
        };
        let fam = if norm == "EPR" {
            StateFamily::Epr
        } else if norm.starts_with("GHZEPR") {
            StateFamily::GhzEpr(arg("GHZEPR")?)
        } else if norm.starts_with("GBS") {
            StateFamily::Gbs(arg("GBS")?)
        } else {
            return Err(Error::Parse(format!("unknown state family {s:?}")));
        };
        fam.validate()?;
        Ok(fam)
    }
}

impl TryFrom<String> for StateFamily {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<StateFamily> for String {
    fn from(f: StateFamily) -> String {
        f.to_string()
    }
}

/// Classical message, displayed `b1 b2 … bk` left to right.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Message {
    bits: Vec<bool>,
}

impl Message {
    pub fn new(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    /// Parses and checks the length against the family's capacity.
    pub fn for_family(family: StateFamily, s: &str) -> Result<Self> {
        let m: Message = s.parse()?;
        m.check(family)?;
        Ok(m)
    }

    pub fn check(&self, family: StateFamily) -> Result<()> {
        if self.bits.len() != family.capacity() {
            return Err(Error::validation(format!(
                "message {self} has {} bits but {family} carries {}",
                self.bits.len(),
                family.capacity()
            )));
        }
        Ok(())
    }

    /// Message whose display bit `k` is bit `k` of `value`.
    pub fn from_value(value: usize, len: usize) -> Self {
        Self {
            bits: (0..len).map(|k| (value >> k) & 1 == 1).collect(),
        }
    }

    pub fn value(&self) -> usize {
        self.bits
            .iter()
            .enumerate()
            .fold(0, |acc, (k, &b)| acc | ((b as usize) << k))
    }

    /// Every message of `len` bits, ordered by [`value`](Self::value).
    pub fn all(len: usize) -> impl Iterator<Item = Message> {
        (0..1usize << len).map(move |v| Message::from_value(v, len))
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }
}

impl fmt::Display for Message {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&bitstring(self.value(), self.bits.len()))
    }
}

impl FromStr for Message {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let v = parse_bitstring(s)?;
        Ok(Message::from_value(v, s.len()))
    }
}

/// Label of the GBS (|x⟩ ± |x̄⟩)/√2 with bit k of `x` on qubit k. The
/// canonical representative has the last qubit's bit clear.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GbsLabel {
    pub x: usize,
    pub negative: bool,
}

impl GbsLabel {
    /// Label an `n`-qubit block lands on after encoding `bits`.
    pub fn encoded(n: usize, bits: &[bool]) -> Self {
        assert_eq!(bits.len(), n, "block message length");
        let x = (0..n - 1).fold(0, |acc, j| acc | ((bits[j + 1] as usize) << j));
        Self {
            x,
            negative: bits[0],
        }
    }

    pub fn state(&self, n: usize) -> Result<StateVector> {
        if self.x >> (n - 1) != 0 {
            return Err(Error::validation(format!(
                "label x={} has the top bit set for {n} qubits",
                self.x
            )));
        }
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let xbar = self.x ^ ((1 << n) - 1);
        let mut amps = vec![num_complex::Complex64::new(0.0, 0.0); 1 << n];
        amps[self.x] = num_complex::Complex64::new(h, 0.0);
        amps[xbar] = num_complex::Complex64::new(if self.negative { -h } else { h }, 0.0);
        StateVector::from_amplitudes(amps)
    }
}

/// Charlie's preparation on one block: H on the first qubit, then a CX chain.
pub(crate) fn block_prep_ops(data: &[usize]) -> Vec<GateOp> {
    let mut ops = vec![GateOp::h(data[0])];
    ops.extend(data.windows(2).map(|w| GateOp::cx(w[0], w[1])));
    ops
}

pub(crate) fn prep_ops(family: StateFamily) -> Vec<GateOp> {
    family.block_data().iter().flat_map(|b| block_prep_ops(b)).collect()
}

pub(crate) fn block_encode_ops(data: &[usize], bits: &[bool]) -> Vec<GateOp> {
    let n = data.len();
    let mut ops = Vec::new();
    if bits[1] {
        ops.push(GateOp::single(GateKind::X, data[0]));
    }
    for k in 2..n {
        if bits[k] {
            ops.push(GateOp::single(GateKind::X, data[k - 1]));
        }
    }
    if bits[0] {
        ops.push(GateOp::single(GateKind::Z, data[0]));
    }
    ops
}

pub(crate) fn encode_ops(family: StateFamily, m: &Message) -> Result<Vec<GateOp>> {
    m.check(family)?;
    let mut offset = 0;
    let mut ops = Vec::new();
    for block in family.block_data() {
        let n = block.len();
        ops.extend(block_encode_ops(&block, &m.bits[offset..offset + n]));
        offset += n;
    }
    Ok(ops)
}

pub(crate) fn decode_ops(family: StateFamily) -> Vec<GateOp> {
    prep_ops(family).iter().rev().map(GateOp::adjoint).collect()
}

fn data_registry(family: StateFamily, owner: impl Fn(usize) -> Party) -> Vec<QubitRef> {
    family
        .block_data()
        .iter()
        .enumerate()
        .flat_map(|(block, qs)| {
            qs.iter()
                .map(|&index| QubitRef {
                    index,
                    role: Role::Data,
                    owner: owner(index),
                    block,
                })
                .collect::<Vec<_>>()
        })
        .collect()
}

/// Charlie prepares every block from |0…0⟩ and distributes it: Alice gets
/// all but the last qubit of each block, Bob the last.
pub fn prepare(family: StateFamily) -> Result<Circuit> {
    family.validate()?;
    let mut c = Circuit::new(data_registry(family, |_| Party::Charlie))?;
    c.gates(prep_ops(family))?;
    c.transfer(family.transmitted_qubits(), Party::Charlie, Party::Alice)?;
    let bob: Vec<usize> = family.block_data().iter().map(|b| b[b.len() - 1]).collect();
    c.transfer(bob, Party::Charlie, Party::Bob)?;
    Ok(c)
}

/// Gate-only preparation unitary, without the distribution transfers.
pub fn preparation_unitary(family: StateFamily) -> Result<Circuit> {
    family.validate()?;
    let mut c = Circuit::new(data_registry(family, |_| Party::Charlie))?;
    c.gates(prep_ops(family))?;
    Ok(c)
}

/// Alice's local encoding of `m`, on the distributed registry.
pub fn encode(family: StateFamily, m: &Message) -> Result<Circuit> {
    family.validate()?;
    let mut c = Circuit::new(data_registry(family, |q| family.data_owner(q)))?;
    c.gates(encode_ops(family, m)?)?;
    Ok(c)
}

/// Bob's decoder: the inverse of the preparation unitary.
pub fn decode_circuit(family: StateFamily) -> Result<Circuit> {
    let inverse = preparation_unitary(family)?.inverse()?;
    let mut c = Circuit::new(data_registry(family, |_| Party::Bob))?;
    c.gates(inverse.gate_ops().cloned())?;
    Ok(c)
}

/// Data-register readout (as a register value) produced by decoding `m`.
pub fn expected_readout(family: StateFamily, m: &Message) -> Result<usize> {
    m.check(family)?;
    let mut value = 0;
    let mut offset = 0;
    for block in family.block_data() {
        let n = block.len();
        let bits = &m.bits[offset..offset + n];
        let flip = |j: usize| if j + 1 < n { bits[j + 1] } else { false };
        let mut out = vec![bits[0]];
        out.extend((1..n).map(|k| flip(k) ^ flip(k - 1)));
        for (k, b) in out.into_iter().enumerate() {
            value |= (b as usize) << (offset + k);
        }
        offset += n;
    }
    Ok(value)
}

/// Inverse of [`expected_readout`]: maps a decoded data-register bitstring
/// back to the message.
pub fn decode_message(bits: &str, family: StateFamily) -> Result<Message> {
    family.validate()?;
    let width = family.data_qubits();
    if bits.len() != width {
        return Err(Error::validation(format!(
            "readout {bits:?} has {} bits, {family} has {width} data qubits",
            bits.len()
        )));
    }
    let value = parse_bitstring(bits)?;
    let mut out = Vec::with_capacity(width);
    let mut offset = 0;
    for block in family.block_data() {
        let n = block.len();
        let d = |k: usize| (value >> (offset + k)) & 1 == 1;
        // flip[j] for j = 0..n-1, with flip[n-1] = 0.
        let mut flip = vec![false; n];
        for k in (1..n).rev() {
            flip[k - 1] = d(k) ^ flip[k];
        }
        out.push(d(0));
        out.extend(flip.iter().take(n - 1));
        offset += n;
    }
    Ok(Message::new(out))
}

/// Builds the readout table by simulating prepare → encode → decode for
/// every message. Entry `v` is the message for readout value `v`.
pub fn readout_table(family: StateFamily) -> Result<Vec<Message>> {
    family.validate()?;
    let d = family.data_qubits();
    let mut table: Vec<Option<Message>> = vec![None; 1 << d];
    for m in Message::all(family.capacity()) {
        let mut state = StateVector::zero(d)?;
        for g in prep_ops(family)
            .into_iter()
            .chain(encode_ops(family, &m)?)
            .chain(decode_ops(family))
        {
            state.apply_op(&g)?;
        }
        let probs = state.probabilities();
        let (idx, p) = probs
            .iter()
            .copied()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("nonempty");
        if (p - 1.0).abs() > 1e-9 {
            return Err(Error::Internal(format!(
                "message {m} does not decode to a basis state (max prob {p})"
            )));
        }
        if let Some(prev) = &table[idx] {
            return Err(Error::Internal(format!(
                "messages {prev} and {m} both decode to {}",
                bitstring(idx, d)
            )));
        }
        table[idx] = Some(m);
    }
    table
        .into_iter()
        .enumerate()
        .map(|(v, m)| {
            m.ok_or_else(|| Error::Internal(format!("readout {} unmapped", bitstring(v, d))))
        })
        .collect()
}

/// Pure state after preparing and encoding `m` on the data register.
pub fn encoded_state(family: StateFamily, m: &Message) -> Result<StateVector> {
    let mut state = StateVector::zero(family.data_qubits())?;
    for g in prep_ops(family).into_iter().chain(encode_ops(family, m)?) {
        state.apply_op(&g)?;
    }
    Ok(state)
}
