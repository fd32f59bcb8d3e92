//! Seeded random states and unitaries.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::basis::{enumerate_basis, modes_of, SystemShape};
use super::state::FermionState;
use super::unitary::minor;
use crate::error::Result;

/// Generator for `seed`.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent generator for trial `index` of a campaign seeded with `seed`.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> DMatrix<Complex64> {
    // column-major fill keeps the draw order independent of nalgebra internals
    let data: Vec<Complex64> = (0..rows * cols).map(|_| complex_gaussian(rng)).collect();
    DMatrix::from_vec(rows, cols, data)
}

/// Uniformly distributed unit vector in the `binomial(d, N)`-dimensional state space.
pub fn random_state_with<R: Rng + ?Sized>(shape: SystemShape, rng: &mut R) -> Result<FermionState> {
    let amps = (0..shape.dim()).map(|_| complex_gaussian(rng)).collect();
    FermionState::normalized(shape, amps)
}

pub fn random_state(shape: SystemShape, seed: u64) -> Result<FermionState> {
    random_state_with(shape, &mut seeded_rng(seed))
}

/// Orthonormal `d x k` frame from Gaussian columns.
pub fn random_frame<R: Rng + ?Sized>(d: usize, k: usize, rng: &mut R) -> DMatrix<Complex64> {
    let g = gaussian_matrix(d, k, rng);
    let qr = g.qr();
    let q = qr.q();
    let r = qr.r();
    // fix column phases so the frame is Haar distributed
    let mut frame = q;
    for c in 0..k {
        let rc = r[(c, c)];
        let phase = if rc.norm() > 0.0 {
            rc / rc.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for row in 0..d {
            frame[(row, c)] *= phase;
        }
    }
    frame
}

/// Haar random `d x d` unitary.
pub fn random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DMatrix<Complex64> {
    random_frame(d, d, rng)
}

/// Wedge product of the columns of an orthonormal `d x N` frame: `a(J) = det(frame[J, :])`.
pub fn slater_from_frame(shape: SystemShape, frame: &DMatrix<Complex64>) -> Result<FermionState> {
    let basis = enumerate_basis(shape)?;
    let cols: Vec<usize> = (0..shape.particles()).collect();
    let amps = basis
        .masks()
        .iter()
        .map(|&m| {
            let rows: Vec<usize> = modes_of(m).iter().map(|x| x - 1).collect();
            minor(frame, &rows, &cols)
        })
        .collect();
    FermionState::normalized(shape, amps)
}

pub fn random_slater_state_with<R: Rng + ?Sized>(
    shape: SystemShape,
    rng: &mut R,
) -> Result<FermionState> {
    let frame = random_frame(shape.modes(), shape.particles(), rng);
    slater_from_frame(shape, &frame)
}

pub fn random_slater_state(shape: SystemShape, seed: u64) -> Result<FermionState> {
    random_slater_state_with(shape, &mut seeded_rng(seed))
}
