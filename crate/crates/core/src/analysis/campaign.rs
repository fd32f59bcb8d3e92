use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::concurrence::{effective_dim, natural_orbital_fidelity};
use crate::error::{Error, Result};
use crate::fock::basis::binomial;
use crate::fock::{
    random_slater_state, random_slater_state_with, random_state_with, slater_state, trial_rng,
    FermionState, SystemShape,
};
use crate::rdm::{diagonal_via_appendix, purity, reduce};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    /// Largest observed value of the checked quantity; passes when `<= tolerance`.
    pub worst: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CheckRecord {
    fn new(name: &str, worst: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            worst,
            tolerance,
            passed: worst <= tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CampaignReport {
    pub shape: SystemShape,
    pub trials: usize,
    pub seed: Option<u64>,
    pub checks: Vec<CheckRecord>,
    /// Largest excursion of any purity outside `[1/d_M, 1/binomial(N, M)]`, or zero.
    pub max_bound_violation: f64,
    /// Largest residual among the non-bound checks.
    pub max_oracle_residual: f64,
    pub pass: bool,
}

impl CampaignReport {
    fn assemble(
        shape: SystemShape,
        trials: usize,
        seed: Option<u64>,
        checks: Vec<CheckRecord>,
        bound_checks: &[&str],
    ) -> Self {
        let mut max_bound_violation = 0.0f64;
        let mut max_oracle_residual = 0.0f64;
        for c in &checks {
            if bound_checks.contains(&c.name.as_str()) {
                max_bound_violation = max_bound_violation.max(c.worst);
            } else {
                max_oracle_residual = max_oracle_residual.max(c.worst);
            }
        }
        let pass = checks.iter().all(|c| c.passed);
        Self {
            shape,
            trials,
            seed,
            checks,
            max_bound_violation,
            max_oracle_residual,
            pass,
        }
    }

    pub fn check(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn require_bipartitions(shape: SystemShape) -> Result<()> {
    if shape.particles() < 2 {
        return Err(Error::Shape {
            modes: shape.modes(),
            particles: shape.particles(),
            reason: "no M : N-M bipartition exists for N < 2".into(),
        });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, Default)]
struct TrialOutcome {
    upper_excess: f64,
    lower_excess: f64,
    slater_deviation: f64,
    rdm_defect: f64,
}

impl TrialOutcome {
    fn merge(self, o: TrialOutcome) -> TrialOutcome {
        TrialOutcome {
            upper_excess: self.upper_excess.max(o.upper_excess),
            lower_excess: self.lower_excess.max(o.lower_excess),
            slater_deviation: self.slater_deviation.max(o.slater_deviation),
            rdm_defect: self.rdm_defect.max(o.rdm_defect),
        }
    }
}

fn run_trial(shape: SystemShape, seed: u64, index: u64) -> Result<TrialOutcome> {
    let mut rng = trial_rng(seed, index);
    let state = random_state_with(shape, &mut rng)?;
    let slater = random_slater_state_with(shape, &mut rng)?;
    let n = shape.particles();
    let mut out = TrialOutcome {
        upper_excess: f64::NEG_INFINITY,
        lower_excess: f64::NEG_INFINITY,
        ..Default::default()
    };
    for m in 1..n {
        let upper = 1.0 / binomial(n, m) as f64;
        let lower = 1.0 / effective_dim(shape, m) as f64;
        let rho = reduce(&state, m)?;
        let p = purity(&rho);
        out.upper_excess = out.upper_excess.max(p - upper);
        out.lower_excess = out.lower_excess.max(lower - p);
        out.rdm_defect = out
            .rdm_defect
            .max(rho.hermiticity_defect())
            .max((rho.trace() - Complex64::new(1.0, 0.0)).norm());
        let ps = purity(&reduce(&slater, m)?);
        out.slater_deviation = out.slater_deviation.max((ps - upper).abs());
    }
    Ok(out)
}

/// Purity bounds on `trials` random states and the equality case on as many
/// random Slater determinants. Trial `i` draws from `trial_rng(seed, i)`, so
/// the report does not depend on scheduling.
pub fn inequality_campaign(shape: SystemShape, trials: usize, seed: u64) -> Result<CampaignReport> {
    require_bipartitions(shape)?;
    if trials == 0 {
        return Err(Error::Parameter("trials must be at least 1".into()));
    }
    let outcomes = (0..trials as u64)
        .into_par_iter()
        .map(|i| run_trial(shape, seed, i))
        .collect::<Result<Vec<_>>>()?;
    let worst = outcomes
        .into_iter()
        .reduce(TrialOutcome::merge)
        .expect("at least one trial");
    let tol = Tolerances::default();
    let checks = vec![
        CheckRecord::new("upper_bound", worst.upper_excess.max(0.0), tol.invariant),
        CheckRecord::new("lower_bound", worst.lower_excess.max(0.0), tol.invariant),
        CheckRecord::new("slater_equality", worst.slater_deviation, tol.invariant),
        CheckRecord::new("rdm_validity", worst.rdm_defect, tol.invariant),
    ];
    Ok(CampaignReport::assemble(
        shape,
        trials,
        Some(seed),
        checks,
        &["upper_bound", "lower_bound"],
    ))
}

fn sits_on_upper_bound(state: &FermionState, tol: f64) -> Result<bool> {
    let n = state.shape().particles();
    for m in 1..n {
        let p = purity(&reduce(state, m)?);
        if (p - 1.0 / binomial(n, m) as f64).abs() > tol {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Slater rank one, decided independently of the purities.
fn is_single_determinant(state: &FermionState, tol: f64) -> Result<bool> {
    Ok(natural_orbital_fidelity(state)? >= 1.0 - tol)
}

/// Constructed cases for the equality statement: (state, is a single determinant).
fn reference_cases(shape: SystemShape) -> Result<Vec<(FermionState, bool)>> {
    let (d, n) = (shape.modes(), shape.particles());
    let first: Vec<usize> = (1..=n).collect();
    let mut cases = vec![
        (slater_state(shape, &first)?, true),
        (random_slater_state(shape, 0)?, true),
    ];
    if d >= n + 2 {
        // differs from `first` in two modes, so the sum has Slater rank two
        let mut second = first.clone();
        second[n - 2] = d - 1;
        second[n - 1] = d;
        let w = [0.9f64.sqrt(), 0.1f64.sqrt()];
        let terms = [
            (Complex64::new(w[0], 0.0), first.clone()),
            (Complex64::new(w[1], 0.0), second),
        ];
        cases.push((FermionState::from_terms(shape, &terms)?, false));
        // a rank-two sum rotated out of the computational basis
        let mixed: Vec<Complex64> = random_slater_state(shape, 1)?
            .amplitudes()
            .iter()
            .zip(random_slater_state(shape, 2)?.amplitudes())
            .map(|(a, b)| a + b)
            .collect();
        cases.push((FermionState::normalized(shape, mixed)?, false));
    }
    Ok(cases)
}

/// Closed-form diagonal identities for every `M`, the bounds on `s`, and
/// the equality-iff-single-determinant statement on `s` and constructed cases.
pub fn appendix_verify(s: &FermionState) -> Result<CampaignReport> {
    let shape = s.shape();
    require_bipartitions(shape)?;
    let tol = Tolerances::default();
    let n = shape.particles();
    let mut diag_residual = 0.0f64;
    let mut g_identity = 0.0f64;
    let mut decomposition = 0.0f64;
    let mut negative_subtracted = 0.0f64;
    let mut upper_excess = 0.0f64;
    let mut lower_excess = 0.0f64;
    for m in 1..n {
        let r = diagonal_via_appendix(s, m)?;
        diag_residual = diag_residual.max(r.residual);
        g_identity = g_identity.max(r.g_identity_deviation);
        decomposition = decomposition.max(r.decomposition_residual);
        negative_subtracted = negative_subtracted.max(-r.subtracted_term);
        let p = purity(&reduce(s, m)?);
        upper_excess = upper_excess.max(p - 1.0 / binomial(n, m) as f64);
        lower_excess = lower_excess.max(1.0 / effective_dim(shape, m) as f64 - p);
    }

    let mut cases = reference_cases(shape)?;
    cases.push((s.clone(), is_single_determinant(s, tol.separability)?));
    let mut mismatches = 0usize;
    for (state, single) in &cases {
        if sits_on_upper_bound(state, tol.invariant)? != *single {
            mismatches += 1;
        }
    }

    let checks = vec![
        CheckRecord::new("diagonal_residual", diag_residual, tol.exact),
        CheckRecord::new("g_identity", g_identity, tol.exact),
        CheckRecord::new("decomposition_residual", decomposition, tol.invariant),
        CheckRecord::new("subtracted_term_sign", negative_subtracted, tol.exact),
        CheckRecord::new("upper_bound", upper_excess, tol.invariant),
        CheckRecord::new("lower_bound", lower_excess, tol.invariant),
        CheckRecord::new("equality_iff_single_determinant", mismatches as f64, 0.0),
    ];
    Ok(CampaignReport::assemble(
        shape,
        1,
        None,
        checks,
        &["upper_bound", "lower_bound"],
    ))
}
