//! M-particle reduced density matrices of pure N-fermion states.
//!
//! Splitting the N particles into the first M and the remaining N-M, a
//! normalized antisymmetric basis vector decomposes as
//!
//! ```text
//! |I> = binomial(N, M)^(-1/2) * sum over k ⊂ I, |k| = M of sign(k, I\k) |k> ⊗ |I\k>
//! ```
//!
//! where `sign(k, m)` is the parity of sorting the concatenation `k ++ m`.
//! Tracing out the trailing block gives, in the M-particle occupation basis,
//!
//! ```text
//! rho_M[k, l] = binomial(N, M)^-1 * sum over m disjoint from k and l of
//!               sign(k, m) sign(l, m) a(k ∪ m) conj(a(l ∪ m))
//! ```
//!
//! which has unit trace without further normalization.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;
use twofloat::TwoFloat;

use crate::error::{Error, Result};
use crate::fock::basis::{binomial, enumerate_basis, lex_rank, merge_sign, Mask, OccupationBasis};
use crate::fock::{FermionState, SystemShape};

/// Eigenvalues above `-EIGEN_FLOOR` are reported as nonnegative.
pub const EIGEN_FLOOR: f64 = 1e-10;

/// Basis in which a reduced density matrix is expressed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RdmBasis {
    /// `binomial(d, M)` ascending M-tuples.
    Occupation { modes: usize, particles: usize },
    /// `d^M` product states of M distinguishable slots.
    FirstQuantized { modes: usize, particles: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    basis: RdmBasis,
    matrix: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn new(basis: RdmBasis, matrix: DMatrix<Complex64>) -> Result<Self> {
        let expected = match basis {
            RdmBasis::Occupation { modes, particles } => binomial(modes, particles) as usize,
            RdmBasis::FirstQuantized { modes, particles } => modes.pow(particles as u32),
        };
        if matrix.nrows() != expected || matrix.ncols() != expected {
            return Err(Error::Parameter(format!(
                "density matrix must be {expected}x{expected}, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(Self { basis, matrix })
    }

    pub fn basis(&self) -> RdmBasis {
        self.basis
    }

    pub fn particles(&self) -> usize {
        match self.basis {
            RdmBasis::Occupation { particles, .. } | RdmBasis::FirstQuantized { particles, .. } => {
                particles
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.matrix[(i, i)].re).collect()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for r in 0..n {
            for c in r..n {
                worst = worst.max((self.matrix[(r, c)] - self.matrix[(c, r)].conj()).norm());
            }
        }
        worst
    }

    /// Ascending eigenvalues; values in `[-1e-10, 0)` are reported as 0.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let herm = (&self.matrix + self.matrix.adjoint()) * Complex64::new(0.5, 0.0);
        let mut values: Vec<f64> = herm
            .symmetric_eigenvalues()
            .iter()
            .map(|&v| {
                if (-EIGEN_FLOOR..0.0).contains(&v) {
                    0.0
                } else {
                    v
                }
            })
            .collect();
        values.sort_by(|a, b| a.total_cmp(b));
        values
    }

    /// Check Hermiticity, unit trace and positivity.
    pub fn validate(&self, hermitian_tol: f64, trace_tol: f64) -> Result<()> {
        let h = self.hermiticity_defect();
        if h > hermitian_tol {
            return Err(Error::Parameter(format!(
                "density matrix not Hermitian ({h:e})"
            )));
        }
        let tr = self.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > trace_tol {
            return Err(Error::Norm {
                expected: 1.0,
                found: tr.re,
            });
        }
        if let Some(&min) = self.eigenvalues().first() {
            if min < -EIGEN_FLOOR {
                return Err(Error::Parameter(format!("negative eigenvalue {min:e}")));
            }
        }
        Ok(())
    }
}

fn check_range(shape: SystemShape, m: usize) -> Result<()> {
    let n = shape.particles();
    if m < 1 || m + 1 > n {
        return Err(Error::Range {
            m,
            max: n.saturating_sub(1),
        });
    }
    Ok(())
}

fn sub_basis(shape: SystemShape, particles: usize) -> Result<OccupationBasis> {
    enumerate_basis(shape.with_particles(particles)?)
}

/// Column of the `k x m` coefficient matrix for a fixed trailing tuple `m`:
/// `(rank of k, sign(k, m) a(k ∪ m))` over leading tuples `k` disjoint from `m`.
fn split_column(
    state: &FermionState,
    leading: &OccupationBasis,
    trailing_mask: Mask,
) -> Vec<(usize, Complex64)> {
    let d = state.shape().modes();
    let amps = state.amplitudes();
    leading
        .masks()
        .iter()
        .enumerate()
        .filter(|(_, &k)| k & trailing_mask == 0)
        .filter_map(|(i, &k)| {
            let a = amps[lex_rank(d, k | trailing_mask)];
            (a.norm_sqr() > 0.0).then(|| (i, a * merge_sign(k, trailing_mask)))
        })
        .collect()
}

/// Reduced density matrix of the first `m` particles, in the M-particle occupation basis.
pub fn reduce(state: &FermionState, m: usize) -> Result<DensityMatrix> {
    let shape = state.shape();
    check_range(shape, m)?;
    let leading = sub_basis(shape, m)?;
    let trailing = sub_basis(shape, shape.particles() - m)?;
    let norm = 1.0 / binomial(shape.particles(), m) as f64;
    let mut rho = DMatrix::<Complex64>::zeros(leading.len(), leading.len());
    for &tm in trailing.masks() {
        let col = split_column(state, &leading, tm);
        for &(i, x) in &col {
            for &(j, y) in &col {
                rho[(i, j)] += x * y.conj();
            }
        }
    }
    rho *= Complex64::new(norm, 0.0);
    DensityMatrix::new(
        RdmBasis::Occupation {
            modes: shape.modes(),
            particles: m,
        },
        rho,
    )
}

/// `Tr rho^2`.
pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.matrix.iter().map(|x| x.norm_sqr()).sum()
}

/// `Tr rho_M^2` without forming `rho_M`: the squared overlaps of the
/// trailing-tuple columns of the coefficient matrix, i.e. the purity of the
/// complementary `(N-M)`-particle reduction.
pub fn purity_direct(state: &FermionState, m: usize) -> Result<f64> {
    let shape = state.shape();
    check_range(shape, m)?;
    let leading = sub_basis(shape, m)?;
    let trailing = sub_basis(shape, shape.particles() - m)?;
    let columns: Vec<DVector<Complex64>> = trailing
        .masks()
        .iter()
        .map(|&tm| {
            let mut v = DVector::<Complex64>::zeros(leading.len());
            for (i, x) in split_column(state, &leading, tm) {
                v[i] = x;
            }
            v
        })
        .filter(|v| v.iter().any(|x| x.norm_sqr() > 0.0))
        .collect();
    let mut total = 0.0;
    for a in &columns {
        for b in &columns {
            total += a.dotc(b).norm_sqr();
        }
    }
    let c = binomial(shape.particles(), m) as f64;
    Ok(total / (c * c))
}

/// `1 - binomial(N, M) Tr rho_M^2`, evaluated in double-double arithmetic
/// from the homogeneous form `(sum |a|^2)^2 - binomial(N, M) Tr rho_M^2`
/// divided by `(sum |a|^2)^2`.
///
/// The numerator vanishes to second order at Slater determinants, so for
/// states that are one within rounding the result stays near `1e-30`
/// instead of the `1e-15` left by subtracting rounded purities.
pub fn purity_deficit(state: &FermionState, m: usize) -> Result<f64> {
    let shape = state.shape();
    check_range(shape, m)?;
    let leading = sub_basis(shape, m)?;
    let trailing = sub_basis(shape, shape.particles() - m)?;
    let columns: Vec<Vec<Complex64>> = trailing
        .masks()
        .iter()
        .map(|&tm| {
            let mut v = vec![Complex64::new(0.0, 0.0); leading.len()];
            for (i, x) in split_column(state, &leading, tm) {
                v[i] = x;
            }
            v
        })
        .filter(|v| v.iter().any(|x| x.norm_sqr() > 0.0))
        .collect();
    let zero = TwoFloat::from(0.0);
    let norm_sq = state.amplitudes().iter().fold(zero, |acc, a| {
        acc + TwoFloat::new_mul(a.re, a.re) + TwoFloat::new_mul(a.im, a.im)
    });
    let mut gram_sq = zero;
    for (p, a) in columns.iter().enumerate() {
        for (q, b) in columns.iter().enumerate().skip(p) {
            let (mut re, mut im) = (zero, zero);
            for (x, y) in a.iter().zip(b) {
                re += TwoFloat::new_mul(x.re, y.re) + TwoFloat::new_mul(x.im, y.im);
                im += TwoFloat::new_mul(x.re, y.im) - TwoFloat::new_mul(x.im, y.re);
            }
            let g = re * re + im * im;
            gram_sq += if p == q { g } else { g * 2.0 };
        }
    }
    let c = binomial(shape.particles(), m) as f64;
    let norm4 = norm_sq * norm_sq;
    Ok(f64::from((norm4 - gram_sq / c) / norm4))
}

/// Diagonal of `rho_M` from occupation weights, with the sum-of-squares decomposition.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagonalReport {
    pub m: usize,
    /// `G_k` over ascending M-tuples, lexicographic order.
    pub diagonal: Vec<f64>,
    /// `max |G_k - rho_M[k, k]|` against [`reduce`].
    pub residual: f64,
    /// `max over occupied I of |sum_k g_kI^2 - 1/binomial(N, M)|`.
    pub g_identity_deviation: f64,
    /// `sum_k G_k^2`.
    pub sum_of_squares: f64,
    /// `sum over I < I' of w_I w_I' sum_k (g_kI - g_kI')^2`.
    pub subtracted_term: f64,
    /// `1/binomial(N, M) - subtracted_term`.
    pub decomposition_rhs: f64,
    pub decomposition_residual: f64,
    pub occupied_sets: usize,
}

/// Closed-form diagonal of `rho_M` in the mode basis.
///
/// With occupation weights `w_I = |a_I|^2` (summing to one) and
/// `g_kI = M!(N-M)!/N!` when the M-tuple `k` is contained in the N-tuple `I`
/// (zero otherwise), the diagonal is `G_k = sum_I w_I g_kI` and
///
/// ```text
/// sum_k G_k^2 = 1/binomial(N, M) - sum over I < I' of w_I w_I' sum_k (g_kI - g_kI')^2
/// ```
pub fn diagonal_via_appendix(state: &FermionState, m: usize) -> Result<DiagonalReport> {
    let shape = state.shape();
    check_range(shape, m)?;
    let n = shape.particles();
    let leading = sub_basis(shape, m)?;
    let inv_c = 1.0 / binomial(n, m) as f64;
    let g_value = factorial(m) * factorial(n - m) / factorial(n);

    let occupied: Vec<(Mask, f64)> = state
        .nonzero()
        .into_iter()
        .map(|(mask, a)| (mask, a.norm_sqr()))
        .collect();
    let g = |k: Mask, i: Mask| if k & !i == 0 { g_value } else { 0.0 };

    let diagonal: Vec<f64> = leading
        .masks()
        .iter()
        .map(|&k| occupied.iter().map(|&(i, w)| w * g(k, i)).sum())
        .collect();

    let rho = reduce(state, m)?;
    let residual = diagonal
        .iter()
        .zip(rho.diagonal())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);

    let g_identity_deviation = occupied
        .iter()
        .map(|&(i, _)| {
            let s: f64 = leading.masks().iter().map(|&k| g(k, i).powi(2)).sum();
            (s - inv_c).abs()
        })
        .fold(0.0, f64::max);

    let sum_of_squares: f64 = diagonal.iter().map(|x| x * x).sum();
    let mut subtracted_term = 0.0;
    for (p, &(i, wi)) in occupied.iter().enumerate() {
        for &(j, wj) in &occupied[p + 1..] {
            let spread: f64 = leading
                .masks()
                .iter()
                .map(|&k| (g(k, i) - g(k, j)).powi(2))
                .sum();
            subtracted_term += wi * wj * spread;
        }
    }
    let decomposition_rhs = inv_c - subtracted_term;
    Ok(DiagonalReport {
        m,
        diagonal,
        residual,
        g_identity_deviation,
        sum_of_squares,
        subtracted_term,
        decomposition_rhs,
        decomposition_residual: (sum_of_squares - decomposition_rhs).abs(),
        occupied_sets: occupied.len(),
    })
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concurrence::fghz_state;
    use crate::fock::{random_slater_state, random_state, slater_state};

    #[test]
    fn slater_pair_single_particle_matrix() {
        let s = slater_state(SystemShape::new(4, 2).unwrap(), &[1, 2]).unwrap();
        let rho = reduce(&s, 1).unwrap();
        let expected = [0.5, 0.5, 0.0, 0.0];
        for r in 0..4 {
            for c in 0..4 {
                let want = if r == c { expected[r] } else { 0.0 };
                assert!((rho.matrix()[(r, c)] - Complex64::new(want, 0.0)).norm() < 1e-15);
            }
        }
        assert!((purity(&rho) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn fghz_single_particle_is_maximally_mixed() {
        let rho = reduce(&fghz_state(), 1).unwrap();
        for r in 0..6 {
            for c in 0..6 {
                let want = if r == c { 1.0 / 6.0 } else { 0.0 };
                assert!((rho.matrix()[(r, c)] - Complex64::new(want, 0.0)).norm() < 1e-15);
            }
        }
        assert!((purity(&rho) - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn fghz_two_particle_is_mixture_of_slater_projectors() {
        let rho = reduce(&fghz_state(), 2).unwrap();
        let basis = enumerate_basis(SystemShape::new(6, 2).unwrap()).unwrap();
        let support: Vec<usize> = [[1, 2], [1, 3], [2, 3], [4, 5], [4, 6], [5, 6]]
            .iter()
            .map(|t| basis.rank(t).unwrap())
            .collect();
        for r in 0..basis.len() {
            for c in 0..basis.len() {
                let want = if r == c && support.contains(&r) {
                    1.0 / 6.0
                } else {
                    0.0
                };
                assert!((rho.matrix()[(r, c)] - Complex64::new(want, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn out_of_range_subsystem() {
        let s = fghz_state();
        assert!(matches!(reduce(&s, 0), Err(Error::Range { .. })));
        assert!(matches!(reduce(&s, 3), Err(Error::Range { .. })));
        assert!(matches!(purity_direct(&s, 3), Err(Error::Range { .. })));
        assert!(matches!(
            diagonal_via_appendix(&s, 0),
            Err(Error::Range { .. })
        ));
    }

    #[test]
    fn reduced_matrices_are_valid_states() {
        let shape = SystemShape::new(7, 4).unwrap();
        for seed in 0..5 {
            let s = random_state(shape, seed).unwrap();
            for m in 1..4 {
                let rho = reduce(&s, m).unwrap();
                rho.validate(1e-12, 1e-10).unwrap();
            }
        }
    }

    #[test]
    fn direct_purity_matches_and_is_complement_symmetric() {
        let fghz = fghz_state();
        assert!((purity_direct(&fghz, 1).unwrap() - 1.0 / 6.0).abs() < 1e-14);
        assert!((purity_direct(&fghz, 2).unwrap() - 1.0 / 6.0).abs() < 1e-14);
        for (d, n) in [(4, 2), (6, 3), (7, 3), (8, 4)] {
            let shape = SystemShape::new(d, n).unwrap();
            for seed in 0..4 {
                let s = random_state(shape, seed).unwrap();
                for m in 1..n {
                    let direct = purity_direct(&s, m).unwrap();
                    let via = purity(&reduce(&s, m).unwrap());
                    assert!((direct - via).abs() < 1e-10);
                    assert!((direct - purity_direct(&s, n - m).unwrap()).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn random_slater_hits_the_bound() {
        let shape = SystemShape::new(7, 3).unwrap();
        for seed in 0..5 {
            let s = random_slater_state(shape, seed).unwrap();
            assert!((purity(&reduce(&s, 1).unwrap()) - 1.0 / 3.0).abs() < 1e-10);
            assert!((purity(&reduce(&s, 2).unwrap()) - 1.0 / 3.0).abs() < 1e-10);
        }
    }

    #[test]
    fn deficit_matches_purity() {
        let shape = SystemShape::new(7, 4).unwrap();
        for seed in 0..4 {
            let s = random_state(shape, seed).unwrap();
            for m in 1..4 {
                let c = binomial(4, m) as f64;
                let p = purity(&reduce(&s, m).unwrap());
                assert!((purity_deficit(&s, m).unwrap() - (1.0 - c * p)).abs() < 1e-13);
            }
        }
        assert!(purity_deficit(&random_state(shape, 0).unwrap(), 4).is_err());
    }

    #[test]
    fn deficit_of_slater_is_second_order_small() {
        for (d, n) in [(4, 2), (7, 3), (8, 4)] {
            let shape = SystemShape::new(d, n).unwrap();
            for seed in 0..10 {
                let s = random_slater_state(shape, seed).unwrap();
                for m in 1..n {
                    assert!(purity_deficit(&s, m).unwrap().abs() < 1e-25);
                }
            }
        }
    }

    #[test]
    fn appendix_diagonal_for_single_slater() {
        let s = slater_state(SystemShape::new(6, 3).unwrap(), &[1, 2, 3]).unwrap();
        let rep = diagonal_via_appendix(&s, 1).unwrap();
        let third = 1.0 / 3.0;
        let want = [third, third, third, 0.0, 0.0, 0.0];
        for (g, w) in rep.diagonal.iter().zip(want) {
            assert!((g - w).abs() < 1e-15);
        }
        assert_eq!(rep.occupied_sets, 1);
        assert_eq!(rep.subtracted_term, 0.0);
        assert!(rep.decomposition_residual < 1e-15);
    }

    #[test]
    fn appendix_diagonal_for_fghz() {
        let rep = diagonal_via_appendix(&fghz_state(), 1).unwrap();
        assert!(rep.diagonal.iter().all(|g| (g - 1.0 / 6.0).abs() < 1e-15));
        assert!(rep.residual < 1e-12);
        assert!(rep.g_identity_deviation < 1e-12);
        // two disjoint triples: 1/4 * 6 * (1/3)^2
        assert!((rep.subtracted_term - 1.0 / 6.0).abs() < 1e-15);
    }
}
