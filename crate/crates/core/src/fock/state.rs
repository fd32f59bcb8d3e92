use num_complex::Complex64;

use super::basis::{lex_rank, lex_unrank, mask_of, sequence_sign, Mask, SystemShape};
use crate::error::{Error, Result};

/// Norm tolerance applied when a state is constructed.
pub const NORM_TOLERANCE: f64 = 1e-10;

/// Pure N-fermion state in the occupation basis.
///
/// The amplitude stored at the tuple `(i1 < ... < iN)` is the coefficient of
/// `f†_{i1} ... f†_{iN} |0>` with the creation operators applied in ascending
/// mode order.
#[derive(Debug, Clone, PartialEq)]
pub struct FermionState {
    shape: SystemShape,
    amplitudes: Vec<Complex64>,
}

impl FermionState {
    /// Wrap amplitudes that are already normalized.
    pub fn new(shape: SystemShape, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_len(shape, amplitudes.len())?;
        let norm = l2_norm(&amplitudes);
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::Norm {
                expected: 1.0,
                found: norm,
            });
        }
        Ok(Self { shape, amplitudes })
    }

    /// Scale arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(shape: SystemShape, mut amplitudes: Vec<Complex64>) -> Result<Self> {
        check_len(shape, amplitudes.len())?;
        let norm = l2_norm(&amplitudes);
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::Norm {
                expected: 1.0,
                found: norm,
            });
        }
        for a in amplitudes.iter_mut() {
            *a /= norm;
        }
        Ok(Self { shape, amplitudes })
    }

    /// Normalized superposition of Slater determinants given as
    /// `(coefficient, modes)` terms. Mode lists may be in any order; each term
    /// picks up the sign of sorting its modes.
    pub fn from_terms(shape: SystemShape, terms: &[(Complex64, Vec<usize>)]) -> Result<Self> {
        let mut amps = vec![Complex64::new(0.0, 0.0); shape.dim()];
        for (c, modes) in terms {
            let (mask, sign) = sorted_mask(shape, modes)?;
            amps[lex_rank(shape.modes(), mask)] += c * sign;
        }
        Self::normalized(shape, amps)
    }

    pub fn shape(&self) -> SystemShape {
        self.shape
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        l2_norm(&self.amplitudes)
    }

    /// Amplitude of an ascending tuple of 1-based labels.
    pub fn amplitude(&self, tuple: &[usize]) -> Result<Complex64> {
        let (mask, sign) = sorted_mask(self.shape, tuple)?;
        Ok(self.amplitudes[lex_rank(self.shape.modes(), mask)] * sign)
    }

    pub fn amplitude_of_mask(&self, mask: Mask) -> Complex64 {
        self.amplitudes[lex_rank(self.shape.modes(), mask)]
    }

    /// Nonzero amplitudes with their occupation masks, in basis order.
    pub fn nonzero(&self) -> Vec<(Mask, Complex64)> {
        let d = self.shape.modes();
        let n = self.shape.particles();
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm_sqr() > 0.0)
            .map(|(k, &a)| (lex_unrank(d, n, k as u64), a))
            .collect()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &FermionState) -> Result<Complex64> {
        if self.shape != other.shape {
            return Err(Error::ShapeMismatch);
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }
}

/// Slater determinant `f†_{m1} ... f†_{mN} |0>` for modes in the given order.
pub fn slater_state(shape: SystemShape, modes: &[usize]) -> Result<FermionState> {
    let (mask, sign) = sorted_mask(shape, modes)?;
    let mut amps = vec![Complex64::new(0.0, 0.0); shape.dim()];
    amps[lex_rank(shape.modes(), mask)] = Complex64::new(sign, 0.0);
    Ok(FermionState {
        shape,
        amplitudes: amps,
    })
}

fn sorted_mask(shape: SystemShape, modes: &[usize]) -> Result<(Mask, f64)> {
    if modes.len() != shape.particles() {
        return Err(Error::Mode(format!(
            "expected {} modes, got {}",
            shape.particles(),
            modes.len()
        )));
    }
    let mask = mask_of(modes, shape.modes())?;
    Ok((mask, sequence_sign(modes)))
}

fn check_len(shape: SystemShape, len: usize) -> Result<()> {
    if len != shape.dim() {
        return Err(Error::Parameter(format!(
            "expected {} amplitudes for {shape}, got {len}",
            shape.dim()
        )));
    }
    Ok(())
}

pub(crate) fn l2_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}
