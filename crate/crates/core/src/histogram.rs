use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::state::bitstring;

/// Measured outcome counts keyed by display bitstring (qubit 0 leftmost).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Histogram {
    #[serde(skip)]
    num_qubits: usize,
    shots: u64,
    counts: BTreeMap<String, u64>,
}

impl Histogram {
    pub fn new(num_qubits: usize) -> Self {
        Self {
            num_qubits,
            shots: 0,
            counts: BTreeMap::new(),
        }
    }

    pub fn record(&mut self, value: usize, count: u64) {
        if count == 0 {
            return;
        }
        *self
            .counts
            .entry(bitstring(value, self.num_qubits))
            .or_insert(0) += count;
        self.shots += count;
    }

    pub fn merge(&mut self, other: &Histogram) {
        for (k, v) in &other.counts {
            *self.counts.entry(k.clone()).or_insert(0) += v;
        }
        self.shots += other.shots;
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn counts(&self) -> &BTreeMap<String, u64> {
        &self.counts
    }

    pub fn count(&self, key: &str) -> u64 {
        self.counts.get(key).copied().unwrap_or(0)
    }

    pub fn frequency(&self, key: &str) -> f64 {
        if self.shots == 0 {
            return 0.0;
        }
        self.count(key) as f64 / self.shots as f64
    }

    /// Most frequent key, or `None` when the top count is tied or the
    /// histogram is empty.
    pub fn plurality(&self) -> Option<&str> {
        let max = *self.counts.values().max()?;
        let mut winners = self.counts.iter().filter(|(_, &v)| v == max);
        let (key, _) = winners.next()?;
        if winners.next().is_some() {
            None
        } else {
            Some(key)
        }
    }

    /// Plain-text bar chart, one line per outcome.
    pub fn render(&self, width: usize) -> String {
        let mut out = String::new();
        let max = self.counts.values().copied().max().unwrap_or(0).max(1);
        for (key, &n) in &self.counts {
            let bar = (n as f64 / max as f64 * width as f64).round() as usize;
            let _ = writeln!(
                out,
                "{key} | {:<width$} {n} ({:.4})",
                "#".repeat(bar),
                self.frequency(key)
            );
        }
        out
    }
}
