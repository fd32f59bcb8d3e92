use num_complex::Complex64;

use super::basis::{modes_of, signed_permutations, SystemShape};
use super::state::FermionState;
use super::tensor::{dense_len, digits, index_of};
use crate::error::Result;

/// State vector on the product space of N distinguishable slots, `d^N` entries.
///
/// Index layout: slot 1 is the most significant base-`d` digit.
#[derive(Debug, Clone, PartialEq)]
pub struct FirstQuantizedVector {
    shape: SystemShape,
    entries: Vec<Complex64>,
}

impl FirstQuantizedVector {
    pub fn shape(&self) -> SystemShape {
        self.shape
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Complex64> {
        self.entries
    }

    pub fn norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Exchange particle slots `i` and `j` (0-based).
    pub fn swap_slots(&self, i: usize, j: usize) -> Self {
        let (d, n) = (self.shape.modes(), self.shape.particles());
        let mut out = vec![Complex64::new(0.0, 0.0); self.entries.len()];
        for (idx, &v) in self.entries.iter().enumerate() {
            let mut ds = digits(idx, d, n);
            ds.swap(i, j);
            out[index_of(&ds, d)] = v;
        }
        Self {
            shape: self.shape,
            entries: out,
        }
    }
}

/// Antisymmetrized product-space vector: every occupied tuple contributes
/// `a / sqrt(N!) * sum_P sign(P) |P(tuple)>`.
pub fn embed_first_quantized(state: &FermionState) -> Result<FirstQuantizedVector> {
    let shape = state.shape();
    let (d, n) = (shape.modes(), shape.particles());
    let mut entries = vec![Complex64::new(0.0, 0.0); dense_len(shape)?];
    let perms = signed_permutations(n);
    let scale = 1.0 / (perms.len() as f64).sqrt();
    for (mask, a) in state.nonzero() {
        let modes: Vec<usize> = modes_of(mask).iter().map(|m| m - 1).collect();
        for (perm, sign) in &perms {
            let permuted: Vec<usize> = perm.iter().map(|&p| modes[p]).collect();
            entries[index_of(&permuted, d)] = a * (sign * scale);
        }
    }
    Ok(FirstQuantizedVector { shape, entries })
}
