//! Dense state-vector backend.
//!
//! Qubit `i` is bit `i` of the basis-state index. Bitstrings are displayed
//! with qubit 0 leftmost, so index 1 of a 3-qubit register prints as `100`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::gate::{GateKind, GateOp};
use crate::histogram::Histogram;

pub const MAX_QUBITS: usize = 24;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// |0…0⟩ on `n` qubits.
    pub fn zero(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::Size(n));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Ok(Self {
            num_qubits: n,
            amplitudes,
        })
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(n: usize, index: usize) -> Result<Self> {
        let mut s = Self::zero(n)?;
        if index >= s.amplitudes.len() {
            return Err(Error::validation(format!(
                "basis index {index} out of range for {n} qubits"
            )));
        }
        s.amplitudes[0] = Complex64::new(0.0, 0.0);
        s.amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(s)
    }

    /// Wraps raw amplitudes. The length must be a power of two and the
    /// vector must already be normalized to within 1e-10.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::validation(format!(
                "amplitude vector length {len} is not a power of two >= 2"
            )));
        }
        let n = len.trailing_zeros() as usize;
        if n > MAX_QUBITS {
            return Err(Error::Size(n));
        }
        let s = Self {
            num_qubits: n,
            amplitudes,
        };
        let norm = s.norm_sqr();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::validation(format!("state norm² is {norm}, expected 1")));
        }
        Ok(s)
    }

    /// Normalizes arbitrary nonzero amplitudes.
    pub fn normalized(mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::validation("cannot normalize a zero vector"));
        }
        amplitudes.iter_mut().for_each(|a| *a /= norm);
        Self::from_amplitudes(amplitudes)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Applies `gate` to `qubits` in place.
    pub fn apply(&mut self, gate: GateKind, qubits: &[usize]) -> Result<()> {
        let op = GateOp::new(gate, qubits.to_vec());
        self.apply_op(&op)
    }

    pub fn apply_op(&mut self, op: &GateOp) -> Result<()> {
        op.validate(self.num_qubits)?;
        let q = &op.qubits;
        match op.kind {
            GateKind::I => {}
            GateKind::X => self.apply_x(q[0]),
            GateKind::Z => self.apply_diag(q[0], Complex64::new(-1.0, 0.0)),
            GateKind::Phase(t) => self.apply_diag(q[0], Complex64::from_polar(1.0, t)),
            GateKind::Y | GateKind::H => {
                let m = op.kind.matrix();
                self.apply_single(q[0], [m[0], m[1], m[2], m[3]]);
            }
            GateKind::CX => self.apply_cx(q[0], q[1]),
            GateKind::CZ => self.apply_cz(q[0], q[1]),
        }
        Ok(())
    }

    /// Functional form of [`apply`](Self::apply).
    pub fn applied(mut self, gate: GateKind, qubits: &[usize]) -> Result<Self> {
        self.apply(gate, qubits)?;
        Ok(self)
    }

    // Stride walk over amplitude pairs (i, i | mask) with bit q of i clear.
    fn apply_single(&mut self, q: usize, m: [Complex64; 4]) {
        let mask = 1usize << q;
        let amps = &mut self.amplitudes;
        for base in (0..amps.len()).step_by(mask << 1) {
            for i in base..base + mask {
                let a0 = amps[i];
                let a1 = amps[i | mask];
                amps[i] = m[0] * a0 + m[1] * a1;
                amps[i | mask] = m[2] * a0 + m[3] * a1;
            }
        }
    }

    fn apply_x(&mut self, q: usize) {
        let mask = 1usize << q;
        let amps = &mut self.amplitudes;
        for base in (0..amps.len()).step_by(mask << 1) {
            for i in base..base + mask {
                amps.swap(i, i | mask);
            }
        }
    }

    fn apply_diag(&mut self, q: usize, phase: Complex64) {
        let mask = 1usize << q;
        for (i, a) in self.amplitudes.iter_mut().enumerate() {
            if i & mask != 0 {
                *a *= phase;
            }
        }
    }

    fn apply_cx(&mut self, control: usize, target: usize) {
        let cmask = 1usize << control;
        let tmask = 1usize << target;
        for i in 0..self.amplitudes.len() {
            if i & cmask != 0 && i & tmask == 0 {
                self.amplitudes.swap(i, i | tmask);
            }
        }
    }

    fn apply_cz(&mut self, a: usize, b: usize) {
        let mask = (1usize << a) | (1usize << b);
        for (i, amp) in self.amplitudes.iter_mut().enumerate() {
            if i & mask == mask {
                *amp = -*amp;
            }
        }
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        self.check_dims(other.num_qubits)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// |⟨self|other⟩|².
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr().min(1.0))
    }

    /// Exact ⟨ψ|P|ψ⟩.
    pub fn pauli_expectation(&self, pauli: &PauliString) -> Result<f64> {
        self.check_dims(pauli.len())?;
        let mut image = self.clone();
        for (q, p) in pauli.iter().enumerate() {
            if let Some(g) = p.gate() {
                image.apply(g, &[q])?;
            }
        }
        Ok(self.inner(&image)?.re)
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::from_pure(self)
    }

    /// Probability distribution of `register` (qubit list, first entry is
    /// the leftmost display bit) with all other qubits marginalized.
    pub fn register_probabilities(&self, register: &[usize]) -> Result<Vec<f64>> {
        for &q in register {
            if q >= self.num_qubits {
                return Err(Error::validation(format!("register qubit {q} out of range")));
            }
        }
        let mut out = vec![0.0; 1 << register.len()];
        for (i, a) in self.amplitudes.iter().enumerate() {
            out[extract_bits(i, register)] += a.norm_sqr();
        }
        Ok(out)
    }

    /// `shots` i.i.d. draws over the full register.
    pub fn sample(&self, shots: u64, seed: u64) -> Result<Histogram> {
        let all: Vec<usize> = (0..self.num_qubits).collect();
        self.sample_register(&all, shots, seed)
    }

    /// Draws full basis indices and reports only the bits of `register`.
    /// Shot `k` uses its own RNG stream derived from `(seed, k)`.
    pub fn sample_register(&self, register: &[usize], shots: u64, seed: u64) -> Result<Histogram> {
        if shots == 0 {
            return Err(Error::validation("shots must be at least 1"));
        }
        let sampler = Sampler::new(self);
        let mut hist = Histogram::new(register.len());
        for shot in 0..shots {
            let idx = sampler.draw(&mut measurement_rng(seed, shot));
            hist.record(extract_bits(idx, register), 1);
        }
        Ok(hist)
    }

    fn check_dims(&self, n: usize) -> Result<()> {
        if self.num_qubits != n {
            return Err(Error::Dimension {
                left: self.num_qubits,
                right: n,
            });
        }
        Ok(())
    }
}

/// Packs the listed bits of `index` into a register value where register
/// position `k` becomes bit `k`.
pub fn extract_bits(index: usize, register: &[usize]) -> usize {
    register
        .iter()
        .enumerate()
        .fold(0, |acc, (k, &q)| acc | (((index >> q) & 1) << k))
}

/// Display form of a register value: position 0 leftmost.
pub fn bitstring(value: usize, width: usize) -> String {
    (0..width)
        .map(|k| if (value >> k) & 1 == 1 { '1' } else { '0' })
        .collect()
}

pub fn parse_bitstring(s: &str) -> Result<usize> {
    if s.is_empty() {
        return Err(Error::Parse("empty bitstring".into()));
    }
    s.chars().enumerate().try_fold(0usize, |acc, (k, c)| match c {
        '0' => Ok(acc),
        '1' => Ok(acc | (1 << k)),
        other => Err(Error::Parse(format!("invalid bit {other:?} in {s:?}"))),
    })
}

/// RNG for the measurement draw of shot `shot`.
pub(crate) fn measurement_rng(seed: u64, shot: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shot);
    rng
}

/// Inverse-CDF sampler over basis indices.
pub(crate) struct Sampler {
    cdf: Vec<f64>,
}

impl Sampler {
    pub(crate) fn new(state: &StateVector) -> Self {
        let mut acc = 0.0;
        let cdf = state
            .amplitudes
            .iter()
            .map(|a| {
                acc += a.norm_sqr();
                acc
            })
            .collect();
        Self { cdf }
    }

    pub(crate) fn draw<R: Rng>(&self, rng: &mut R) -> usize {
        let total = *self.cdf.last().expect("nonempty state");
        let u: f64 = rng.gen::<f64>() * total;
        // First index with cdf > u; it always carries positive probability.
        let idx = self.cdf.partition_point(|&c| c <= u);
        if idx < self.cdf.len() {
            return idx;
        }
        // u rounded up to the total: fall back to the last nonzero entry.
        (0..self.cdf.len())
            .rev()
            .find(|&j| j == 0 || self.cdf[j] > self.cdf[j - 1])
            .unwrap_or(0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn gate(&self) -> Option<GateKind> {
        match self {
            Pauli::I => None,
            Pauli::X => Some(GateKind::X),
            Pauli::Y => Some(GateKind::Y),
            Pauli::Z => Some(GateKind::Z),
        }
    }

    pub fn letter(&self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_letter(c: char) -> Result<Self> {
        match c {
            'I' => Ok(Pauli::I),
            'X' => Ok(Pauli::X),
            'Y' => Ok(Pauli::Y),
            'Z' => Ok(Pauli::Z),
            other => Err(Error::Parse(format!("invalid Pauli letter {other:?}"))),
        }
    }
}

/// Per-qubit Pauli letters; position 0 acts on qubit 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString(pub Vec<Pauli>);

impl PauliString {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Pauli> {
        self.0.iter()
    }

    /// All 4^n strings in lexicographic I < X < Y < Z order.
    pub fn all(n: usize) -> Vec<PauliString> {
        const LETTERS: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
        (0..4usize.pow(n as u32))
            .map(|mut k| {
                let mut v = vec![Pauli::I; n];
                for slot in v.iter_mut().rev() {
                    *slot = LETTERS[k % 4];
                    k /= 4;
                }
                PauliString(v)
            })
            .collect()
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars().map(Pauli::from_letter).collect::<Result<_>>().map(PauliString)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|p| write!(f, "{}", p.letter()))
    }
}
