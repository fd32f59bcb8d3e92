//! Separability criteria and concurrences for pure fermionic states.
//!
//! For every bipartition `M : N-M` the purity of the M-particle reduction obeys
//! `1/d_M <= Tr rho_M^2 <= 1/binomial(N, M)` with `d_M = binomial(d, min(M, N-M))`,
//! and the upper bound is reached exactly by single Slater determinants. The
//! multipartite concurrence aggregates the purity deficits over all cuts:
//!
//! ```text
//! C = sqrt(alpha_N * [(N-1) - sum_M binomial(N, M) Tr rho_M^2])
//! alpha_N = 1 / [(N-1) - sum_M binomial(N, M) / d_M]
//! ```

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::basis::binomial;
use crate::fock::tensor::to_antisym_tensor;
use crate::fock::{slater_from_frame, FermionState, SystemShape};
use crate::rdm::{purity, purity_deficit, reduce, DensityMatrix, RdmBasis};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Separable,
    Entangled,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BipartitionRecord {
    pub m: usize,
    pub purity: f64,
    /// `1/d_M`
    pub lower_bound: f64,
    /// `1/binomial(N, M)`
    pub upper_bound: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConcurrenceReport {
    pub shape: SystemShape,
    pub records: Vec<BipartitionRecord>,
    /// `None` when the shape is degenerate (`d = N`).
    pub alpha: Option<f64>,
    /// `(N-1) - sum_M binomial(N, M) Tr rho_M^2` after clamping, accumulated
    /// from [`purity_deficit`] rather than the rounded purities.
    pub bracket: f64,
    pub value: f64,
    pub degenerate: bool,
}

impl ConcurrenceReport {
    pub fn all_separable(&self) -> bool {
        self.records.iter().all(|r| r.verdict == Verdict::Separable)
    }
}

/// A concurrence value that is forced to zero on shapes with a single state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FlaggedValue {
    pub value: f64,
    pub degenerate: bool,
}

/// Dimension `d_M = binomial(d, min(M, N-M))` bounding the rank of `rho_M`.
pub fn effective_dim(shape: SystemShape, m: usize) -> u64 {
    binomial(shape.modes(), m.min(shape.particles() - m))
}

/// Normalization `alpha_N` that makes the maximal concurrence equal to one.
pub fn alpha(particles: usize, modes: usize) -> Result<f64> {
    if particles < 2 {
        return Err(Error::Shape {
            modes,
            particles,
            reason: "the multipartite concurrence needs N >= 2".into(),
        });
    }
    let shape = SystemShape::new(modes, particles)?;
    let denominator: f64 = (1..particles)
        .map(|m| 1.0 - binomial(particles, m) as f64 / effective_dim(shape, m) as f64)
        .sum();
    if denominator <= 1e-12 {
        return Err(Error::DegenerateShape {
            modes,
            particles,
            reason: "every state is a single Slater determinant".into(),
        });
    }
    Ok(1.0 / denominator)
}

fn classify_purity(shape: SystemShape, m: usize, p: f64, tol: &Tolerances) -> Result<Verdict> {
    let upper = 1.0 / binomial(shape.particles(), m) as f64;
    let lower = 1.0 / effective_dim(shape, m) as f64;
    if p > upper + tol.invariant {
        return Err(Error::BoundViolation {
            m,
            purity: p,
            bound: upper,
        });
    }
    if p < lower - tol.invariant {
        return Err(Error::BoundViolation {
            m,
            purity: p,
            bound: lower,
        });
    }
    Ok(if (p - upper).abs() <= tol.separability {
        Verdict::Separable
    } else {
        Verdict::Entangled
    })
}

/// Separable iff `Tr rho_M^2` sits on its upper bound `1/binomial(N, M)`.
pub fn classify_bipartition(state: &FermionState, m: usize) -> Result<Verdict> {
    classify_bipartition_with(state, m, &Tolerances::default())
}

pub fn classify_bipartition_with(
    state: &FermionState,
    m: usize,
    tol: &Tolerances,
) -> Result<Verdict> {
    let p = purity(&reduce(state, m)?);
    classify_purity(state.shape(), m, p, tol)
}

pub fn multipartite_concurrence(state: &FermionState) -> Result<ConcurrenceReport> {
    multipartite_concurrence_with(state, &Tolerances::default())
}

pub fn multipartite_concurrence_with(
    state: &FermionState,
    tol: &Tolerances,
) -> Result<ConcurrenceReport> {
    let shape = state.shape();
    let n = shape.particles();
    if n < 2 {
        return Err(Error::Shape {
            modes: shape.modes(),
            particles: n,
            reason: "the multipartite concurrence needs N >= 2".into(),
        });
    }
    let mut records = Vec::with_capacity(n - 1);
    let mut bracket = 0.0;
    for m in 1..n {
        let p = purity(&reduce(state, m)?);
        let c = binomial(n, m) as f64;
        records.push(BipartitionRecord {
            m,
            purity: p,
            lower_bound: 1.0 / effective_dim(shape, m) as f64,
            upper_bound: 1.0 / c,
            verdict: classify_purity(shape, m, p, tol)?,
        });
        bracket += purity_deficit(state, m)?;
    }
    let bracket = clamp_bracket(bracket, tol.clamp);
    let (alpha, value, degenerate) = match alpha(n, shape.modes()) {
        Ok(a) => (Some(a), (a * bracket).sqrt(), false),
        Err(Error::DegenerateShape { .. }) => (None, 0.0, true),
        Err(e) => return Err(e),
    };
    Ok(ConcurrenceReport {
        shape,
        records,
        alpha,
        bracket,
        value,
        degenerate,
    })
}

fn clamp_bracket(bracket: f64, clamp: f64) -> f64 {
    if bracket < 0.0 && bracket >= -clamp {
        0.0
    } else {
        bracket.max(0.0)
    }
}

fn require_pair(shape: SystemShape) -> Result<()> {
    if shape.particles() != 2 {
        return Err(Error::Shape {
            modes: shape.modes(),
            particles: shape.particles(),
            reason: "two-fermion measure needs N = 2".into(),
        });
    }
    Ok(())
}

/// Two-fermion concurrence `sqrt(2d/(d-2) * (1/2 - Tr rho_1^2))`.
pub fn c_ff_purity(state: &FermionState) -> Result<FlaggedValue> {
    let shape = state.shape();
    require_pair(shape)?;
    let d = shape.modes() as f64;
    if shape.modes() == 2 {
        return Ok(FlaggedValue {
            value: 0.0,
            degenerate: true,
        });
    }
    let bracket = clamp_bracket(0.5 * purity_deficit(state, 1)?, Tolerances::default().clamp);
    Ok(FlaggedValue {
        value: (2.0 * d / (d - 2.0) * bracket).sqrt(),
        degenerate: false,
    })
}

/// Two fermions in four modes: `8 |Pf w| = 8 |w12 w34 - w13 w24 + w14 w23|`
/// with `w` the antisymmetric coefficient matrix (`Tr w w† = 1/2`).
pub fn c_ff_wedge(state: &FermionState) -> Result<f64> {
    let shape = state.shape();
    if shape.particles() != 2 || shape.modes() != 4 {
        return Err(Error::Shape {
            modes: shape.modes(),
            particles: shape.particles(),
            reason: "the wedge formula needs N = 2, d = 4".into(),
        });
    }
    let t = to_antisym_tensor(state)?;
    let w = |i: usize, j: usize| t.get(&[i, j]);
    Ok(8.0 * (w(1, 2) * w(3, 4) - w(1, 3) * w(2, 4) + w(1, 4) * w(2, 3)).norm())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlaterRankResult {
    pub rank: usize,
    /// Magnitudes `|z_p|` of the canonical form `sum_p z_p f†_{2p-1} f†_{2p} |0>`
    /// in a suitable mode basis, nonincreasing; their squares sum to one.
    pub pair_weights: Vec<f64>,
}

/// Slater rank of a two-fermion state from the singular values of its
/// antisymmetric coefficient matrix, which come in equal pairs.
pub fn slater_rank_two_fermions(state: &FermionState) -> Result<SlaterRankResult> {
    slater_rank_two_fermions_with(state, &Tolerances::default())
}

pub fn slater_rank_two_fermions_with(
    state: &FermionState,
    tol: &Tolerances,
) -> Result<SlaterRankResult> {
    let shape = state.shape();
    require_pair(shape)?;
    let d = shape.modes();
    let t = to_antisym_tensor(state)?;
    let w = DMatrix::from_fn(d, d, |r, c| t.get(&[r + 1, c + 1]));
    let mut sv: Vec<f64> = w.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    let cutoff = tol.rank * sv.first().copied().unwrap_or(0.0);
    let above = sv.iter().filter(|&&s| s > cutoff).count();
    // a = 2w, so each pair of singular values s contributes |z| = 2s
    let pair_weights = sv.iter().step_by(2).take(d / 2).map(|s| 2.0 * s).collect();
    Ok(SlaterRankResult {
        rank: above.div_ceil(2),
        pair_weights,
    })
}

/// Overlap `|<phi|psi>|` with the Slater determinant `phi` built from the N
/// dominant eigenvectors of `rho_1`. Equals one exactly for Slater determinants.
pub fn natural_orbital_fidelity(state: &FermionState) -> Result<f64> {
    let shape = state.shape();
    let (d, n) = (shape.modes(), shape.particles());
    if n == d {
        return Ok(1.0);
    }
    let rho = if n == 1 {
        let a = nalgebra::DVector::from_column_slice(state.amplitudes());
        &a * a.adjoint()
    } else {
        reduce(state, 1)?.matrix().clone()
    };
    let herm = (&rho + rho.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = herm.symmetric_eigen();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let frame = DMatrix::from_fn(d, n, |r, c| eig.eigenvectors[(r, order[c])]);
    let phi = slater_from_frame(shape, &frame)?;
    Ok(phi.inner(state)?.norm())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MixtureMethod {
    /// Diagonal in the occupation basis: a mixture of basis determinants.
    Diagonal,
    /// Diagonal once rewritten in the natural orbitals of its one-body reduction.
    NaturalOrbitals,
    /// Every eigenvector with nonzero weight is a single determinant.
    Eigenvectors,
}

/// Explicit decomposition of a reduced state into single determinants.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlaterMixture {
    pub method: MixtureMethod,
    /// Nonzero mixing weights, nonincreasing.
    pub weights: Vec<f64>,
}

fn max_off_diagonal(m: &DMatrix<Complex64>) -> f64 {
    let n = m.nrows();
    (0..n)
        .flat_map(|r| (0..n).filter(move |&c| c != r).map(move |c| (r, c)))
        .map(|(r, c)| m[(r, c)].norm())
        .fold(0.0, f64::max)
}

fn nonzero_sorted(w: impl IntoIterator<Item = f64>, floor: f64) -> Vec<f64> {
    let mut w: Vec<f64> = w.into_iter().filter(|&x| x > floor).collect();
    w.sort_by(|a, b| b.total_cmp(a));
    w
}

/// Look for a decomposition of `rho` as a mixture of Slater determinants.
///
/// Only a sufficient test: `None` means none of the tried bases gives such a
/// decomposition, not that none exists.
pub fn slater_mixture(rho: &DensityMatrix, tol: &Tolerances) -> Result<Option<SlaterMixture>> {
    let RdmBasis::Occupation { modes, particles } = rho.basis() else {
        return Err(Error::Parameter(
            "mixture test needs the occupation basis".into(),
        ));
    };
    let shape = SystemShape::new(modes, particles)?;
    let m = rho.matrix();
    let diagonal_mixture = |mat: &DMatrix<Complex64>, method| {
        (max_off_diagonal(mat) <= tol.invariant).then(|| SlaterMixture {
            method,
            weights: nonzero_sorted(mat.diagonal().iter().map(|z| z.re), tol.invariant),
        })
    };
    if let Some(mix) = diagonal_mixture(m, MixtureMethod::Diagonal) {
        return Ok(Some(mix));
    }
    let herm = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = herm.symmetric_eigen();
    let mut components = Vec::new();
    for (k, &w) in eig.eigenvalues.iter().enumerate() {
        if w > tol.invariant {
            let v: Vec<Complex64> = eig.eigenvectors.column(k).iter().copied().collect();
            components.push((w, FermionState::normalized(shape, v)?));
        }
    }
    if particles >= 2 && particles < modes {
        let mut one_body = DMatrix::<Complex64>::zeros(modes, modes);
        for (w, v) in &components {
            one_body += reduce(v, 1)?.matrix() * Complex64::new(*w, 0.0);
        }
        let orbitals = ((&one_body + one_body.adjoint()) * Complex64::new(0.5, 0.0))
            .symmetric_eigen()
            .eigenvectors
            .adjoint();
        let mut rotated = DMatrix::<Complex64>::zeros(m.nrows(), m.ncols());
        for (w, v) in &components {
            let r = nalgebra::DVector::from_column_slice(
                crate::fock::apply_mode_unitary(v, &orbitals)?.amplitudes(),
            );
            rotated += &r * r.adjoint() * Complex64::new(*w, 0.0);
        }
        if let Some(mix) = diagonal_mixture(&rotated, MixtureMethod::NaturalOrbitals) {
            return Ok(Some(mix));
        }
    }
    for (_, v) in &components {
        if natural_orbital_fidelity(v)? < 1.0 - tol.separability {
            return Ok(None);
        }
    }
    Ok(Some(SlaterMixture {
        method: MixtureMethod::Eigenvectors,
        weights: nonzero_sorted(components.iter().map(|c| c.0), tol.invariant),
    }))
}

/// `(f†1 f†2 f†3 + f†4 f†5 f†6)|0> / sqrt(2)` on six modes.
pub fn fghz_state() -> FermionState {
    let shape = SystemShape::new(6, 3).expect("valid shape");
    let h = Complex64::new(0.5f64.sqrt(), 0.0);
    FermionState::from_terms(shape, &[(h, vec![1, 2, 3]), (h, vec![4, 5, 6])]).expect("valid terms")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{random_slater_state, random_state, slater_state};

    fn pair_state(d: usize, pairs: usize) -> FermionState {
        let shape = SystemShape::new(d, 2).unwrap();
        let terms: Vec<_> = (0..pairs)
            .map(|k| (Complex64::new(1.0, 0.0), vec![2 * k + 1, 2 * k + 2]))
            .collect();
        FermionState::from_terms(shape, &terms).unwrap()
    }

    #[test]
    fn alpha_values() {
        assert!((alpha(3, 6).unwrap() - 1.0).abs() < 1e-15);
        assert!((alpha(2, 4).unwrap() - 2.0).abs() < 1e-15);
        assert!(matches!(alpha(3, 3), Err(Error::DegenerateShape { .. })));
        assert!(matches!(alpha(2, 2), Err(Error::DegenerateShape { .. })));
        assert!(matches!(alpha(1, 4), Err(Error::Shape { .. })));
    }

    #[test]
    fn fghz_is_maximal_with_separable_two_fermion_cut() {
        let rep = multipartite_concurrence(&fghz_state()).unwrap();
        assert!((rep.value - 1.0).abs() < 1e-10);
        assert!(rep.records.iter().all(|r| r.verdict == Verdict::Entangled));
        for r in &rep.records {
            assert!((r.purity - r.lower_bound).abs() < 1e-12);
        }
    }

    #[test]
    fn slater_concurrence_is_zero() {
        let s = slater_state(SystemShape::new(6, 3).unwrap(), &[2, 4, 5]).unwrap();
        let rep = multipartite_concurrence(&s).unwrap();
        assert_eq!(rep.value, 0.0);
        assert!(rep.all_separable());
    }

    #[test]
    fn rotated_slater_concurrence_stays_at_rounding_level() {
        for (d, n) in [(4, 2), (7, 3), (8, 4)] {
            let shape = SystemShape::new(d, n).unwrap();
            for seed in 0..20 {
                let s = random_slater_state(shape, seed).unwrap();
                assert!(multipartite_concurrence(&s).unwrap().value < 1e-12);
            }
        }
        let s = random_slater_state(SystemShape::new(6, 2).unwrap(), 3).unwrap();
        assert!(c_ff_purity(&s).unwrap().value < 1e-12);
    }

    #[test]
    fn two_pair_state() {
        let s = pair_state(4, 2);
        assert!((multipartite_concurrence(&s).unwrap().value - 1.0).abs() < 1e-12);
        assert!((c_ff_purity(&s).unwrap().value - 1.0).abs() < 1e-12);
        assert!((c_ff_wedge(&s).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(slater_rank_two_fermions(&s).unwrap().rank, 2);
    }

    #[test]
    fn three_pair_state_in_six_modes() {
        let s = pair_state(6, 3);
        assert!((c_ff_purity(&s).unwrap().value - 1.0).abs() < 1e-12);
        let r = slater_rank_two_fermions(&s).unwrap();
        assert_eq!(r.rank, 3);
        for w in &r.pair_weights {
            assert!((w - 1.0 / 3f64.sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn wedge_matches_purity_form_on_random_pairs() {
        let shape = SystemShape::new(4, 2).unwrap();
        for seed in 0..200 {
            let s = random_state(shape, seed).unwrap();
            let gap = c_ff_wedge(&s).unwrap() - c_ff_purity(&s).unwrap().value;
            assert!(gap.abs() < 1e-12, "seed {seed}: {gap}");
        }
    }

    #[test]
    fn slater_pair_measures() {
        let s = slater_state(SystemShape::new(4, 2).unwrap(), &[1, 2]).unwrap();
        assert_eq!(c_ff_purity(&s).unwrap().value, 0.0);
        assert_eq!(c_ff_wedge(&s).unwrap(), 0.0);
        let r = slater_rank_two_fermions(&s).unwrap();
        assert_eq!(r.rank, 1);
        assert!((r.pair_weights[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn two_fermion_shape_errors() {
        let fghz = fghz_state();
        assert!(matches!(c_ff_purity(&fghz), Err(Error::Shape { .. })));
        assert!(matches!(c_ff_wedge(&fghz), Err(Error::Shape { .. })));
        assert!(matches!(
            slater_rank_two_fermions(&fghz),
            Err(Error::Shape { .. })
        ));
        let s5 = pair_state(5, 2);
        assert!(matches!(c_ff_wedge(&s5), Err(Error::Shape { .. })));
        let d2 = slater_state(SystemShape::new(2, 2).unwrap(), &[1, 2]).unwrap();
        let v = c_ff_purity(&d2).unwrap();
        assert!(v.degenerate && v.value == 0.0);
    }

    #[test]
    fn degenerate_shape_reports_zero() {
        let s = slater_state(SystemShape::new(3, 3).unwrap(), &[1, 2, 3]).unwrap();
        let rep = multipartite_concurrence(&s).unwrap();
        assert!(rep.degenerate);
        assert_eq!(rep.value, 0.0);
        assert!(rep.alpha.is_none());
    }

    #[test]
    fn classification() {
        let s = slater_state(SystemShape::new(6, 3).unwrap(), &[1, 2, 3]).unwrap();
        assert_eq!(classify_bipartition(&s, 1).unwrap(), Verdict::Separable);
        assert_eq!(
            classify_bipartition(&fghz_state(), 1).unwrap(),
            Verdict::Entangled
        );
        let shape = SystemShape::new(7, 3).unwrap();
        for seed in 0..5 {
            let s = random_slater_state(shape, seed).unwrap();
            for m in 1..3 {
                assert_eq!(classify_bipartition(&s, m).unwrap(), Verdict::Separable);
            }
        }
    }

    #[test]
    fn natural_orbital_fidelity_detects_slater() {
        let shape = SystemShape::new(7, 3).unwrap();
        for seed in 0..5 {
            let s = random_slater_state(shape, seed).unwrap();
            assert!((natural_orbital_fidelity(&s).unwrap() - 1.0).abs() < 1e-10);
            let r = random_state(shape, seed).unwrap();
            assert!(natural_orbital_fidelity(&r).unwrap() < 0.99);
        }
        assert!(natural_orbital_fidelity(&fghz_state()).unwrap() < 0.8);
    }

    #[test]
    fn fghz_reductions_are_slater_mixtures() {
        let tol = Tolerances::default();
        for m in 1..3 {
            let mix = slater_mixture(&reduce(&fghz_state(), m).unwrap(), &tol)
                .unwrap()
                .unwrap();
            assert_eq!(mix.method, MixtureMethod::Diagonal);
            assert_eq!(mix.weights.len(), 6);
            assert!(mix.weights.iter().all(|w| (w - 1.0 / 6.0).abs() < 1e-14));
        }
    }

    #[test]
    fn rotated_slater_reductions_are_certified_in_natural_orbitals() {
        let tol = Tolerances::default();
        let s = random_slater_state(SystemShape::new(7, 4).unwrap(), 3).unwrap();
        for m in 1..4 {
            let mix = slater_mixture(&reduce(&s, m).unwrap(), &tol)
                .unwrap()
                .unwrap();
            let expected = if m == 1 {
                MixtureMethod::Eigenvectors
            } else {
                MixtureMethod::NaturalOrbitals
            };
            assert_eq!(mix.method, expected);
            assert_eq!(mix.weights.len(), binomial(4, m) as usize);
            assert!((mix.weights.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn generic_two_body_reduction_is_inconclusive() {
        let s = random_state(SystemShape::new(6, 3).unwrap(), 4).unwrap();
        let tol = Tolerances::default();
        assert_eq!(slater_mixture(&reduce(&s, 2).unwrap(), &tol).unwrap(), None);
        // one-body states are always determinants
        assert!(slater_mixture(&reduce(&s, 1).unwrap(), &tol)
            .unwrap()
            .is_some());
    }
}
