use nalgebra::DMatrix;
use num_complex::Complex64;

use super::basis::{enumerate_basis, modes_of};
use super::state::FermionState;
use crate::error::{Error, Result};

/// Single-particle unitaries are accepted when `max |U†U - I| <= UNITARITY_TOLERANCE`.
pub const UNITARITY_TOLERANCE: f64 = 1e-10;

pub fn unitarity_defect(u: &DMatrix<Complex64>) -> f64 {
    let n = u.nrows();
    let gram = u.adjoint() * u;
    let mut worst = 0.0f64;
    for r in 0..n {
        for c in 0..n {
            let id = if r == c { 1.0 } else { 0.0 };
            worst = worst.max((gram[(r, c)] - Complex64::new(id, 0.0)).norm());
        }
    }
    worst
}

/// Determinant of the submatrix of `m` with the given rows and columns (0-based).
pub(crate) fn minor(m: &DMatrix<Complex64>, rows: &[usize], cols: &[usize]) -> Complex64 {
    DMatrix::from_fn(rows.len(), cols.len(), |r, c| m[(rows[r], cols[c])]).determinant()
}

/// Transform a state under the mode map `f†_i -> sum_j U[j][i] f†_j`.
///
/// The new amplitude of tuple `J` is `sum_I a(I) det(U[J, I])`.
pub fn apply_mode_unitary(state: &FermionState, u: &DMatrix<Complex64>) -> Result<FermionState> {
    let shape = state.shape();
    let d = shape.modes();
    if u.nrows() != d || u.ncols() != d {
        return Err(Error::Parameter(format!(
            "unitary must be {d}x{d}, got {}x{}",
            u.nrows(),
            u.ncols()
        )));
    }
    let defect = unitarity_defect(u);
    if defect > UNITARITY_TOLERANCE {
        return Err(Error::Unitarity(defect));
    }
    let basis = enumerate_basis(shape)?;
    let rows: Vec<Vec<usize>> = basis
        .masks()
        .iter()
        .map(|&m| modes_of(m).iter().map(|x| x - 1).collect())
        .collect();
    let mut out = vec![Complex64::new(0.0, 0.0); shape.dim()];
    for (mask, a) in state.nonzero() {
        let cols: Vec<usize> = modes_of(mask).iter().map(|x| x - 1).collect();
        for (j, r) in rows.iter().enumerate() {
            out[j] += a * minor(u, r, &cols);
        }
    }
    FermionState::normalized(shape, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::basis::SystemShape;
    use crate::fock::state::slater_state;

    #[test]
    fn identity_leaves_state_alone() {
        let shape = SystemShape::new(5, 2).unwrap();
        let s = FermionState::from_terms(
            shape,
            &[
                (Complex64::new(0.6, 0.0), vec![1, 2]),
                (Complex64::new(0.0, 0.8), vec![3, 5]),
            ],
        )
        .unwrap();
        let t = apply_mode_unitary(&s, &DMatrix::identity(5, 5)).unwrap();
        for (a, b) in s.amplitudes().iter().zip(t.amplitudes()) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn permutation_moves_slater_modes() {
        // cyclic shift 1->2->3->4->1
        let shape = SystemShape::new(4, 2).unwrap();
        let mut u = DMatrix::<Complex64>::zeros(4, 4);
        for i in 0..4 {
            u[((i + 1) % 4, i)] = Complex64::new(1.0, 0.0);
        }
        let s = slater_state(shape, &[3, 4]).unwrap();
        let t = apply_mode_unitary(&s, &u).unwrap();
        // f†_3 f†_4 -> f†_4 f†_1 = -f†_1 f†_4
        assert!((t.amplitude(&[1, 4]).unwrap() + 1.0).norm() < 1e-15);
    }

    #[test]
    fn rejects_non_unitary() {
        let shape = SystemShape::new(3, 1).unwrap();
        let s = slater_state(shape, &[1]).unwrap();
        let u = DMatrix::<Complex64>::identity(3, 3) * Complex64::new(1.1, 0.0);
        assert!(matches!(
            apply_mode_unitary(&s, &u),
            Err(Error::Unitarity(_))
        ));
    }
}
