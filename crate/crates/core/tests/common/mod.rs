//! Brute-force reference simulator for the integration tests.
//!
//! Every gate is expanded into a full 2^n x 2^n operator built from
//! explicit Kronecker products (q_{n-1} ⊗ … ⊗ q_0) and multiplied into the
//! state. Matrices are stored sparsely so 12-qubit pipelines stay cheap;
//! [`dense_unitary`] builds the full product for small circuits.
//!
//! Nothing here calls the library's kernels, gate matrices or codec.
#![allow(dead_code)]

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64 as C;
use qsdc_core::circuit::{Circuit, ErrorKind, Op};
use qsdc_core::gate::{GateKind, GateOp};
use qsdc_core::protocol::StateFamily;

pub type M2 = [[C; 2]; 2];

const Z0: C = C::new(0.0, 0.0);
const ONE: C = C::new(1.0, 0.0);

pub fn m_id() -> M2 {
    [[ONE, Z0], [Z0, ONE]]
}
pub fn m_x() -> M2 {
    [[Z0, ONE], [ONE, Z0]]
}
pub fn m_y() -> M2 {
    [[Z0, C::new(0.0, -1.0)], [C::new(0.0, 1.0), Z0]]
}
pub fn m_z() -> M2 {
    [[ONE, Z0], [Z0, -ONE]]
}
pub fn m_h() -> M2 {
    let s = C::new(FRAC_1_SQRT_2, 0.0);
    [[s, s], [s, -s]]
}
pub fn m_phase(theta: f64) -> M2 {
    [[ONE, Z0], [Z0, C::from_polar(1.0, theta)]]
}
pub fn proj0() -> M2 {
    [[ONE, Z0], [Z0, Z0]]
}
pub fn proj1() -> M2 {
    [[Z0, Z0], [Z0, ONE]]
}

/// Sparse operator as a list of (row, col, value); duplicates add.
#[derive(Debug, Clone, Default)]
pub struct Sparse {
    pub dim: usize,
    pub entries: Vec<(usize, usize, C)>,
}

/// Kronecker product over all `n` qubits, identity where `factors` is silent.
pub fn kron(n: usize, factors: &[(usize, M2)]) -> Sparse {
    let mut acc = vec![(0usize, 0usize, ONE)];
    for q in (0..n).rev() {
        let m = factors
            .iter()
            .find(|(fq, _)| *fq == q)
            .map(|(_, m)| *m)
            .unwrap_or_else(m_id);
        let mut next = Vec::with_capacity(acc.len() * 2);
        for &(r, c, v) in &acc {
            for (a, row) in m.iter().enumerate() {
                for (b, &w) in row.iter().enumerate() {
                    if w != Z0 {
                        next.push((r * 2 + a, c * 2 + b, v * w));
                    }
                }
            }
        }
        acc = next;
    }
    Sparse {
        dim: 1 << n,
        entries: acc,
    }
}

pub fn sum(terms: Vec<Sparse>) -> Sparse {
    let dim = terms[0].dim;
    Sparse {
        dim,
        entries: terms.into_iter().flat_map(|t| t.entries).collect(),
    }
}

fn single(kind: &GateKind) -> M2 {
    match kind {
        GateKind::I => m_id(),
        GateKind::X => m_x(),
        GateKind::Y => m_y(),
        GateKind::Z => m_z(),
        GateKind::H => m_h(),
        GateKind::Phase(t) => m_phase(*t),
        GateKind::CX | GateKind::CZ => panic!("two-qubit gate"),
    }
}

/// Full-register operator for one gate.
pub fn embed(n: usize, op: &GateOp) -> Sparse {
    match op.kind {
        GateKind::CX | GateKind::CZ => {
            let (c, t) = (op.qubits[0], op.qubits[1]);
            let target = if op.kind == GateKind::CX { m_x() } else { m_z() };
            sum(vec![kron(n, &[(c, proj0())]), kron(n, &[(c, proj1()), (t, target)])])
        }
        ref k => kron(n, &[(op.qubits[0], single(k))]),
    }
}

pub fn error_matrix(kind: &ErrorKind) -> M2 {
    match kind {
        ErrorKind::BitFlip => m_x(),
        ErrorKind::PhaseFlip => m_z(),
        ErrorKind::PhaseShift { theta } => m_phase(*theta),
    }
}

pub fn matvec(m: &Sparse, v: &[C]) -> Vec<C> {
    let mut out = vec![Z0; m.dim];
    for &(r, c, w) in &m.entries {
        out[r] += w * v[c];
    }
    out
}

/// Every operator the circuit applies, in order.
pub fn operators(c: &Circuit) -> Vec<Sparse> {
    let n = c.num_qubits();
    let mut out = Vec::new();
    for op in c.ops() {
        match op {
            Op::Gate(g) => out.push(embed(n, g)),
            Op::Transfer(_) => {}
            Op::Error(marker) => {
                for ev in &marker.events {
                    out.push(kron(n, &[(ev.qubit, error_matrix(&ev.kind))]));
                }
            }
        }
    }
    out
}

pub fn zero(n: usize) -> Vec<C> {
    let mut v = vec![Z0; 1 << n];
    v[0] = ONE;
    v
}

pub fn run_from(c: &Circuit, init: Vec<C>) -> Vec<C> {
    operators(c).iter().fold(init, |v, m| matvec(m, &v))
}

pub fn run(c: &Circuit) -> Vec<C> {
    run_from(c, zero(c.num_qubits()))
}

/// Dense product of every operator (rightmost acts first); n ≤ 6.
pub fn dense_unitary(c: &Circuit) -> Vec<Vec<C>> {
    let n = c.num_qubits();
    assert!(n <= 6, "dense oracle is for small circuits");
    let d = 1 << n;
    let mut u: Vec<Vec<C>> = (0..d)
        .map(|r| (0..d).map(|k| if r == k { ONE } else { Z0 }).collect())
        .collect();
    for m in operators(c) {
        let mut dense = vec![vec![Z0; d]; d];
        for &(r, k, w) in &m.entries {
            dense[r][k] += w;
        }
        u = (0..d)
            .map(|r| (0..d).map(|k| (0..d).map(|j| dense[r][j] * u[j][k]).sum()).collect())
            .collect();
    }
    u
}

pub fn max_diff(a: &[C], b: &[C]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn inner(a: &[C], b: &[C]) -> C {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// P(register reads `value`), register position k = bit k of `value`.
pub fn marginal(v: &[C], register: &[usize], value: usize) -> f64 {
    v.iter()
        .enumerate()
        .filter(|(i, _)| register.iter().enumerate().all(|(k, &q)| (i >> q) & 1 == (value >> k) & 1))
        .map(|(_, a)| a.norm_sqr())
        .sum()
}

/// Block sizes of each family, restated here so the oracle does not lean on
/// the library's layout code.
pub fn blocks(family: StateFamily) -> Vec<usize> {
    match family {
        StateFamily::Epr => vec![2],
        StateFamily::Gbs(n) => vec![n],
        StateFamily::GhzEpr(n) => {
            let mut v = vec![3];
            v.extend(std::iter::repeat(2).take(n - 1));
            v
        }
    }
}

/// Data amplitudes of the encoded message: per block of size n with bits
/// b1..bn, the state (-1)^{b1·x_0}|x⟩ + (-1)^{b1·(1-x_0)}|x̄⟩ over √2, where
/// x_j = b_{j+2} for j ≤ n-2 and x_{n-1} = 0.
pub fn encoded_amplitudes(family: StateFamily, bits: &[bool]) -> Vec<C> {
    let sizes = blocks(family);
    let total: usize = sizes.iter().sum();
    assert_eq!(bits.len(), total);
    let mut state = vec![ONE];
    let mut offset = 0;
    for &n in &sizes {
        let b = &bits[offset..offset + n];
        let mut x = 0usize;
        for j in 0..n - 1 {
            if b[j + 1] {
                x |= 1 << j;
            }
        }
        let xbar = !x & ((1 << n) - 1);
        let sign = |v: usize| if b[0] && v & 1 == 1 { -1.0 } else { 1.0 };
        let mut block = vec![Z0; 1 << n];
        block[x] = C::new(sign(x) * FRAC_1_SQRT_2, 0.0);
        block[xbar] = C::new(sign(xbar) * FRAC_1_SQRT_2, 0.0);
        // Earlier blocks occupy the low bits.
        let mut next = vec![Z0; state.len() << n];
        for (hi, &bv) in block.iter().enumerate() {
            for (lo, &sv) in state.iter().enumerate() {
                next[(hi << offset) | lo] = bv * sv;
            }
        }
        state = next;
        offset += n;
    }
    state
}

/// Bob's readout after inverse preparation (CX chain undone, then H on the
/// block's first qubit), computed by running the oracle gates.
pub fn expected_readout(family: StateFamily, bits: &[bool]) -> usize {
    let sizes = blocks(family);
    let total: usize = sizes.iter().sum();
    let mut v = encoded_amplitudes(family, bits);
    let mut offset = 0;
    for &n in &sizes {
        for k in (0..n - 1).rev() {
            let c = offset + k;
            let t = offset + k + 1;
            let cx = sum(vec![kron(total, &[(c, proj0())]), kron(total, &[(c, proj1()), (t, m_x())])]);
            v = matvec(&cx, &v);
        }
        v = matvec(&kron(total, &[(offset, m_h())]), &v);
        offset += n;
    }
    let (idx, p) = v
        .iter()
        .enumerate()
        .map(|(i, a)| (i, a.norm_sqr()))
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap();
    assert!((p - 1.0).abs() < 1e-12, "oracle decode is not a basis state");
    idx
}

/// All messages of `len` bits, b1 first.
pub fn all_messages(len: usize) -> Vec<Vec<bool>> {
    (0..1usize << len)
        .map(|v| (0..len).map(|k| (v >> (len - 1 - k)) & 1 == 1).collect())
        .collect()
}

pub fn bits_to_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}
