use num_complex::Complex64;
use serde::Serialize;

use crate::concurrence::multipartite_concurrence;
use crate::error::{Error, Result};
use crate::fock::{random_state, FermionState};
use crate::two_copy::{expectation, observable_af, CopyPair, DoubledOperator};

/// Gaps at or below this are treated as rounding noise.
pub const GAP_FLOOR: f64 = 1e-13;

/// Consecutive direction seeds tried before giving up.
pub const MAX_DIRECTION_ATTEMPTS: u64 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SensitivityRecord {
    pub epsilon: f64,
    /// `sqrt(<psi ⊗ psi'| A_f |psi ⊗ psi'>)`
    pub c_exp: f64,
    /// `(C(psi) + C(psi')) / 2`
    pub c_mean: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SensitivityStudy {
    /// Seed of the direction actually used.
    pub direction_seed: u64,
    pub records: Vec<SensitivityRecord>,
    /// Least-squares slope of `log gap` against `log epsilon`.
    pub slope: Option<f64>,
}

/// `points` values spaced evenly in `log` between `min` and `max` inclusive.
pub fn log_spaced(min: f64, max: f64, points: usize) -> Result<Vec<f64>> {
    if !(min > 0.0 && max >= min && min.is_finite() && max.is_finite()) {
        return Err(Error::Parameter(format!("bad range [{min}, {max}]")));
    }
    match points {
        0 => Err(Error::Parameter("need at least one point".into())),
        1 => Ok(vec![min]),
        _ => {
            let (a, b) = (min.ln(), max.ln());
            let step = (b - a) / (points - 1) as f64;
            Ok((0..points)
                .map(|i| {
                    if i == points - 1 {
                        max
                    } else {
                        (a + step * i as f64).exp()
                    }
                })
                .collect())
        }
    }
}

/// Least-squares slope of `log y` on `log x` over points with `y > GAP_FLOOR`.
/// `None` with fewer than two usable points.
pub fn fit_loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|&&(x, y)| x > 0.0 && y > GAP_FLOOR)
        .map(|&(x, y)| (x.ln(), y.ln()))
        .collect();
    if logs.len() < 2 {
        return None;
    }
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}

/// Unit direction orthogonal to `s`, from the random state drawn with `seed`.
pub fn orthogonal_direction(s: &FermionState, seed: u64) -> Result<FermionState> {
    let shape = s.shape();
    let draw = random_state(shape, seed)?;
    let overlap = s.inner(&draw)?;
    let projected: Vec<Complex64> = draw
        .amplitudes()
        .iter()
        .zip(s.amplitudes())
        .map(|(x, p)| x - overlap * p)
        .collect();
    let norm = projected.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    if norm < 1e-8 {
        return Err(Error::DegenerateDirection);
    }
    FermionState::normalized(shape, projected)
}

fn direction_from(s: &FermionState, seed: u64) -> Result<(u64, FermionState)> {
    for k in 0..MAX_DIRECTION_ATTEMPTS {
        let candidate = seed.wrapping_add(k);
        match orthogonal_direction(s, candidate) {
            Ok(dir) => return Ok((candidate, dir)),
            Err(Error::DegenerateDirection) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::DegenerateDirection)
}

fn check_epsilons(epsilons: &[f64]) -> Result<Vec<f64>> {
    if epsilons.is_empty() {
        return Err(Error::Parameter("no epsilon values".into()));
    }
    if let Some(e) = epsilons.iter().find(|&&e| !(e > 0.0 && e <= 0.5)) {
        return Err(Error::Parameter(format!("epsilon {e} outside (0, 0.5]")));
    }
    let mut sorted = epsilons.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(sorted)
}

fn records_along(
    s: &FermionState,
    direction: &FermionState,
    af: &DoubledOperator,
    epsilons: &[f64],
) -> Result<Vec<SensitivityRecord>> {
    let c0 = multipartite_concurrence(s)?.value;
    epsilons
        .iter()
        .map(|&eps| {
            let keep = (1.0 - eps * eps).sqrt();
            let amps = s
                .amplitudes()
                .iter()
                .zip(direction.amplitudes())
                .map(|(p, q)| p * keep + q * eps)
                .collect();
            let shifted = FermionState::normalized(s.shape(), amps)?;
            let pair = CopyPair::new(s.clone(), shifted.clone())?;
            let c_exp = expectation(af, &pair)?.value.max(0.0).sqrt();
            let c_mean = 0.5 * (c0 + multipartite_concurrence(&shifted)?.value);
            Ok(SensitivityRecord {
                epsilon: eps,
                c_exp,
                c_mean,
                gap: (c_exp - c_mean).abs(),
            })
        })
        .collect()
}

/// Copy-mismatch sweep: the second copy is `sqrt(1-eps^2) psi + eps dpsi`
/// with `dpsi` a random unit direction orthogonal to `psi`. Records are
/// sorted by `eps`.
pub fn sensitivity_sweep(
    s: &FermionState,
    direction_seed: u64,
    epsilons: &[f64],
) -> Result<Vec<SensitivityRecord>> {
    let epsilons = check_epsilons(epsilons)?;
    let af = observable_af(s.shape())?;
    let (_, direction) = direction_from(s, direction_seed)?;
    records_along(s, &direction, &af, &epsilons)
}

/// [`sensitivity_sweep`] with the fitted slope. A direction whose gaps all
/// vanish is replaced by the next seed.
pub fn sensitivity_study(
    s: &FermionState,
    direction_seed: u64,
    epsilons: &[f64],
) -> Result<SensitivityStudy> {
    let epsilons = check_epsilons(epsilons)?;
    let af = observable_af(s.shape())?;
    let mut seed = direction_seed;
    for _ in 0..MAX_DIRECTION_ATTEMPTS {
        let (used, direction) = direction_from(s, seed)?;
        let records = records_along(s, &direction, &af, &epsilons)?;
        if records.iter().any(|r| r.gap > GAP_FLOOR) {
            let pts: Vec<(f64, f64)> = records.iter().map(|r| (r.epsilon, r.gap)).collect();
            return Ok(SensitivityStudy {
                direction_seed: used,
                slope: fit_loglog_slope(&pts),
                records,
            });
        }
        seed = used.wrapping_add(1);
    }
    Err(Error::DegenerateDirection)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concurrence::fghz_state;
    use crate::fock::SystemShape;

    #[test]
    fn log_spacing() {
        let e = log_spaced(1e-3, 1e-1, 3).unwrap();
        assert_eq!(e.len(), 3);
        assert!((e[0] - 1e-3).abs() < 1e-18);
        assert!((e[1] - 1e-2).abs() < 1e-15);
        assert_eq!(e[2], 1e-1);
        assert!(log_spaced(0.0, 1.0, 3).is_err());
        assert!(log_spaced(1e-3, 1e-1, 0).is_err());
    }

    #[test]
    fn slope_of_power_law() {
        let pts: Vec<(f64, f64)> = [1e-3, 1e-2, 1e-1]
            .iter()
            .map(|&x| (x, 3.0 * x * x))
            .collect();
        assert!((fit_loglog_slope(&pts).unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(fit_loglog_slope(&[(1e-3, 0.0), (1e-2, 1e-14)]), None);
    }

    #[test]
    fn direction_is_orthogonal_unit() {
        let s = fghz_state();
        let d = orthogonal_direction(&s, 3).unwrap();
        assert!(s.inner(&d).unwrap().norm() < 1e-14);
        assert!((d.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn single_state_space_has_no_direction() {
        let shape = SystemShape::new(3, 3).unwrap();
        let s = random_state(shape, 0).unwrap();
        assert_eq!(orthogonal_direction(&s, 0), Err(Error::DegenerateDirection));
    }

    #[test]
    fn tiny_epsilon_matches_base_value() {
        let s = random_state(SystemShape::new(6, 3).unwrap(), 2).unwrap();
        let c = multipartite_concurrence(&s).unwrap().value;
        let r = sensitivity_sweep(&s, 5, &[1e-7]).unwrap()[0];
        assert!((r.c_exp - c).abs() < 1e-6);
        assert!((r.c_mean - c).abs() < 1e-6);
        assert!(r.gap < 1e-10);
    }

    #[test]
    fn fghz_gap_is_quadratic() {
        let eps = log_spaced(1e-3, 1e-1, 9).unwrap();
        let study = sensitivity_study(&fghz_state(), 1, &eps).unwrap();
        let slope = study.slope.unwrap();
        assert!((1.7..=2.3).contains(&slope), "slope {slope}");
        for r in &study.records {
            assert!(r.gap <= 10.0 * r.epsilon * r.epsilon);
        }
    }

    #[test]
    fn zero_concurrence_base_gives_linear_gap() {
        // with d = N + 1 every state is a single determinant
        let s = random_state(SystemShape::new(4, 3).unwrap(), 1).unwrap();
        let eps = log_spaced(1e-3, 1e-1, 5).unwrap();
        let slope = sensitivity_study(&s, 0, &eps).unwrap().slope.unwrap();
        assert!((slope - 1.0).abs() < 0.05, "slope {slope}");
    }

    #[test]
    fn records_are_sorted_and_validated() {
        let s = fghz_state();
        let r = sensitivity_sweep(&s, 0, &[0.1, 0.01]).unwrap();
        assert!(r[0].epsilon < r[1].epsilon);
        assert!(sensitivity_sweep(&s, 0, &[0.6]).is_err());
        assert!(sensitivity_sweep(&s, 0, &[0.0]).is_err());
        assert!(sensitivity_sweep(&s, 0, &[]).is_err());
    }
}
