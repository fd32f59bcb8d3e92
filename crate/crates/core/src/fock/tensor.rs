//! Dense antisymmetric coefficient tensors.
//!
//! A state can also be written as `sum over all index tuples of
//! w[i1..iN] f†_{i1} ... f†_{iN} |0>` with `w` fully antisymmetric. Every
//! ordered tuple then appears `N!` times with the same sign-adjusted value, so
//! the occupation amplitude is `a(i1<..<iN) = N! * w[i1..iN]` and the tensor
//! norm is `sum |w|^2 = 1/N!`.

use num_complex::Complex64;

use super::basis::{lex_rank, sequence_sign, signed_permutations, SystemShape};
use super::state::FermionState;
use crate::error::{Error, Result};

/// Largest dense tensor (`d^N` entries) the crate will allocate.
pub const MAX_DENSE_LEN: usize = 1 << 24;

#[derive(Debug, Clone, PartialEq)]
pub struct AntisymTensor {
    shape: SystemShape,
    entries: Vec<Complex64>,
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

pub(crate) fn dense_len(shape: SystemShape) -> Result<usize> {
    let len = (shape.modes() as u128).pow(shape.particles() as u32);
    if len > MAX_DENSE_LEN as u128 {
        return Err(Error::DimensionTooLarge {
            dim: usize::try_from(len).unwrap_or(usize::MAX),
            limit: MAX_DENSE_LEN,
        });
    }
    Ok(len as usize)
}

/// Digits (0-based mode indices) of a product-basis index, slot 1 most significant.
pub(crate) fn digits(mut index: usize, d: usize, n: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for slot in (0..n).rev() {
        out[slot] = index % d;
        index /= d;
    }
    out
}

pub(crate) fn index_of(digits: &[usize], d: usize) -> usize {
    digits.iter().fold(0, |acc, &x| acc * d + x)
}

impl AntisymTensor {
    /// Validate antisymmetry and the `1/N!` normalization.
    pub fn new(shape: SystemShape, entries: Vec<Complex64>, tol: f64) -> Result<Self> {
        let (d, n) = (shape.modes(), shape.particles());
        let len = dense_len(shape)?;
        if entries.len() != len {
            return Err(Error::Parameter(format!(
                "expected {len} tensor entries, got {}",
                entries.len()
            )));
        }
        let mut worst = 0.0f64;
        for (idx, w) in entries.iter().enumerate() {
            let ds = digits(idx, d, n);
            let mut sorted = ds.clone();
            sorted.sort_unstable();
            let repeated = sorted.windows(2).any(|p| p[0] == p[1]);
            let expected = if repeated {
                Complex64::new(0.0, 0.0)
            } else {
                entries[index_of(&sorted, d)] * sequence_sign(&ds)
            };
            worst = worst.max((w - expected).norm());
        }
        if worst > tol {
            return Err(Error::Antisymmetry(worst));
        }
        let sum: f64 = entries.iter().map(|w| w.norm_sqr()).sum();
        let expected = 1.0 / factorial(n);
        if (sum - expected).abs() > tol {
            return Err(Error::Norm {
                expected,
                found: sum,
            });
        }
        Ok(Self { shape, entries })
    }

    pub fn shape(&self) -> SystemShape {
        self.shape
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// Entry at 1-based indices `(i1, ..., iN)`.
    pub fn get(&self, indices: &[usize]) -> Complex64 {
        let zero_based: Vec<usize> = indices.iter().map(|i| i - 1).collect();
        self.entries[index_of(&zero_based, self.shape.modes())]
    }
}

/// Antisymmetric tensor of a state: `w(sorted tuple) = a / N!`, spread over permutations with sign.
pub fn to_antisym_tensor(state: &FermionState) -> Result<AntisymTensor> {
    let shape = state.shape();
    let (d, n) = (shape.modes(), shape.particles());
    let mut entries = vec![Complex64::new(0.0, 0.0); dense_len(shape)?];
    let scale = 1.0 / factorial(n);
    let perms = signed_permutations(n);
    for (mask, a) in state.nonzero() {
        let modes: Vec<usize> = super::basis::modes_of(mask).iter().map(|m| m - 1).collect();
        for (perm, sign) in &perms {
            let permuted: Vec<usize> = perm.iter().map(|&p| modes[p]).collect();
            entries[index_of(&permuted, d)] = a * (sign * scale);
        }
    }
    Ok(AntisymTensor { shape, entries })
}

/// Occupation amplitudes `a = N! * w` read off the ascending entries of the tensor.
pub fn from_antisym_tensor(tensor: &AntisymTensor) -> Result<FermionState> {
    let shape = tensor.shape;
    let d = shape.modes();
    let scale = factorial(shape.particles());
    let basis = super::basis::enumerate_basis(shape)?;
    let mut amps = vec![Complex64::new(0.0, 0.0); shape.dim()];
    for &mask in basis.masks() {
        let modes: Vec<usize> = super::basis::modes_of(mask).iter().map(|m| m - 1).collect();
        amps[lex_rank(d, mask)] = tensor.entries[index_of(&modes, d)] * scale;
    }
    FermionState::new(shape, amps)
}
