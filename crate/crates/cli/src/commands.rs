use std::io::Read;

use fermiconc::analysis::{appendix_verify, inequality_campaign, log_spaced, sensitivity_study};
use fermiconc::concurrence::{
    effective_dim, multipartite_concurrence_with, slater_mixture, FlaggedValue, SlaterMixture,
    SlaterRankResult,
};
use fermiconc::fock::{random_slater_state, random_state, slater_state, StateFile};
use fermiconc::two_copy::{
    expectation, observable_a, observable_a_tilde, observable_af_prime, observable_af_with_sign,
    observable_o_nm, CopyPair, Sign,
};
use fermiconc::{
    alpha, c_ff_purity, c_ff_wedge, fghz_state, purity, reduce, slater_rank_two_fermions,
    ConcurrenceReport, FermionState, SystemShape, Tolerances,
};
use serde::Serialize;

use crate::report::{Failure, Report};
use crate::{
    ConcurrenceArgs, Format, GenArgs, Input, Kind, Observable, SensitivityArgs, SignArg,
    TwocopyArgs, VerifyArgs,
};

/// Output text, or a failure with any report that should still be printed.
type Outcome = Result<String, (Option<String>, Failure)>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn read_source(path: &str) -> Result<String, Failure> {
    let mut text = String::new();
    if path == "-" {
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| usage(format!("cannot read standard input: {e}")))?;
    } else {
        text =
            std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {path}: {e}")))?;
    }
    Ok(text)
}

fn load(path: &str, renormalize: bool) -> Result<FermionState, Failure> {
    let file = StateFile::parse(&read_source(path)?)?;
    Ok(file.to_state(renormalize)?)
}

fn load_input(input: &Input) -> Result<FermionState, Failure> {
    load(&input.file, input.renormalize)
}

pub fn gen(a: &GenArgs) -> Result<String, Failure> {
    let need =
        |v: Option<usize>, flag: &str| v.ok_or_else(|| usage(format!("--{flag} is required")));
    let state = match a.kind {
        Kind::Slater => {
            let modes = a
                .modes
                .as_ref()
                .ok_or_else(|| usage("--modes is required"))?;
            if let Some(n) = a.n {
                if n != modes.len() {
                    return Err(usage(format!(
                        "--n {n} disagrees with {} modes",
                        modes.len()
                    )));
                }
            }
            slater_state(SystemShape::new(need(a.d, "d")?, modes.len())?, modes)?
        }
        Kind::Fghz => {
            if a.d.is_some_and(|d| d != 6) || a.n.is_some_and(|n| n != 3) || a.modes.is_some() {
                return Err(usage("fghz is fixed at d = 6, N = 3"));
            }
            fghz_state()
        }
        Kind::Random | Kind::RandomSlater => {
            if a.modes.is_some() {
                return Err(usage("--modes only applies to slater"));
            }
            let shape = SystemShape::new(need(a.d, "d")?, need(a.n, "n")?)?;
            let seed = a.seed.unwrap_or(0);
            if a.kind == Kind::Random {
                random_state(shape, seed)?
            } else {
                random_slater_state(shape, seed)?
            }
        }
    };
    Ok(StateFile::from_state(&state).to_text())
}

#[derive(Debug, Serialize)]
struct TwoFermion {
    c_ff_purity: FlaggedValue,
    /// Only for d = 4.
    c_ff_wedge: Option<f64>,
    slater_rank: SlaterRankResult,
}

#[derive(Debug, Serialize)]
struct Reduction {
    m: usize,
    /// Purity within `tol.separability` of its minimum `1/d_M`.
    purity_at_minimum: bool,
    /// Decomposition into single determinants, when one was found.
    slater_mixture: Option<SlaterMixture>,
}

#[derive(Debug, Serialize)]
struct ConcurrenceResult {
    #[serde(flatten)]
    report: ConcurrenceReport,
    reductions: Vec<Reduction>,
    two_fermion: Option<TwoFermion>,
}

fn concurrence_result(s: &FermionState, tol: &Tolerances) -> Result<ConcurrenceResult, Failure> {
    let report = multipartite_concurrence_with(s, tol)?;
    let two_fermion = if s.shape().particles() == 2 {
        Some(TwoFermion {
            c_ff_purity: c_ff_purity(s)?,
            c_ff_wedge: if s.shape().modes() == 4 {
                Some(c_ff_wedge(s)?)
            } else {
                None
            },
            slater_rank: slater_rank_two_fermions(s)?,
        })
    } else {
        None
    };
    let mut reductions = Vec::new();
    for r in &report.records {
        let rho = reduce(s, r.m)?;
        let floor = 1.0 / effective_dim(s.shape(), r.m) as f64;
        reductions.push(Reduction {
            m: r.m,
            purity_at_minimum: (purity(&rho) - floor).abs() <= tol.separability,
            slater_mixture: slater_mixture(&rho, tol)?,
        });
    }
    Ok(ConcurrenceResult {
        report,
        reductions,
        two_fermion,
    })
}

pub fn concurrence(a: &ConcurrenceArgs, argv: &[String]) -> Outcome {
    let mut tol = Tolerances::default();
    if let Some(t) = a.tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err((None, usage("--tol must be positive")));
        }
        tol.separability = t;
    }
    let s = load_input(&a.input).map_err(|f| (None, f))?;
    let result = concurrence_result(&s, &tol).map_err(|f| (None, f))?;
    let degenerate = result.report.degenerate;
    let text = Report::new(argv, None, tol, s.shape(), result).to_json();
    if degenerate {
        let msg = format!(
            "degenerate shape {}: every state is a single determinant",
            s.shape()
        );
        return Err((Some(text), Failure::Degenerate(msg)));
    }
    Ok(text)
}

#[derive(Debug, Serialize)]
struct TwoCopyResult {
    observable: String,
    m: Option<usize>,
    sign: Sign,
    expectation: f64,
    imaginary: f64,
    /// `sqrt(max(0, expectation))` for the concurrence observables.
    sqrt: Option<f64>,
    /// Value the expectation (or its square root) should reproduce.
    reference: f64,
    reference_source: &'static str,
    difference: f64,
}

pub fn twocopy(a: &TwocopyArgs, argv: &[String]) -> Result<String, Failure> {
    let s = load_input(&a.input)?;
    let shape = s.shape();
    let sign = match a.sign {
        SignArg::Plus => Sign::Plus,
        SignArg::Minus => Sign::Minus,
    };
    if a.m.is_some() && a.observable != Observable::Onm {
        return Err(usage("--m only applies to onm"));
    }
    let n = shape.particles();
    let concurrence = || -> Result<f64, Failure> {
        Ok(multipartite_concurrence_with(&s, &Tolerances::default())?.value)
    };
    // identical copies: <A> = (C^2/alpha - (1 + N - 2^N)) / 2^(N-2)
    let predicted_a = || -> Result<f64, Failure> {
        let c = concurrence()?;
        let al = alpha(n, shape.modes())?;
        let two_n = 2f64.powi(n as i32);
        Ok((c * c / al - (1.0 + n as f64 - two_n)) / (two_n / 4.0))
    };
    let (op, m, reference, source) = match a.observable {
        Observable::Af => (
            observable_af_with_sign(shape, sign)?,
            None,
            concurrence()?,
            "concurrence",
        ),
        Observable::Afprime => (
            observable_af_prime(shape)?,
            None,
            concurrence()?,
            "concurrence",
        ),
        Observable::A => (observable_a(shape)?, None, predicted_a()?, "concurrence"),
        Observable::Atilde => (
            observable_a_tilde(shape)?,
            None,
            predicted_a()?,
            "concurrence",
        ),
        Observable::Onm => {
            let m = a.m.ok_or_else(|| usage("--m is required for onm"))?;
            let op = observable_o_nm(shape, m, sign)?;
            (op, Some(m), purity(&reduce(&s, m)?), "purity")
        }
    };
    let e = expectation(&op, &CopyPair::identical(&s))?;
    let sqrt = matches!(a.observable, Observable::Af | Observable::Afprime)
        .then(|| e.value.max(0.0).sqrt());
    let compared = sqrt.unwrap_or(e.value);
    let result = TwoCopyResult {
        observable: op.label().to_string(),
        m,
        sign,
        expectation: e.value,
        imaginary: e.imaginary,
        sqrt,
        reference,
        reference_source: source,
        difference: (compared - reference).abs(),
    };
    Ok(Report::new(argv, None, Tolerances::default(), shape, result).to_json())
}

fn parse_campaign_shape(text: &str) -> Result<SystemShape, Failure> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let [n, d] = parts.as_slice() else {
        return Err(usage(format!("--campaign expects N,d, got {text:?}")));
    };
    let n: usize = n
        .parse()
        .map_err(|_| usage(format!("bad particle count {n:?}")))?;
    let d: usize = d
        .parse()
        .map_err(|_| usage(format!("bad mode count {d:?}")))?;
    Ok(SystemShape::new(d, n)?)
}

pub fn verify(a: &VerifyArgs, argv: &[String]) -> Outcome {
    let (report, seed) = match (&a.file, &a.campaign) {
        (Some(path), None) => {
            let s = load(path, a.renormalize).map_err(|f| (None, f))?;
            (appendix_verify(&s).map_err(|e| (None, e.into()))?, None)
        }
        (None, Some(text)) => {
            let shape = parse_campaign_shape(text).map_err(|f| (None, f))?;
            let r = inequality_campaign(shape, a.trials, a.seed).map_err(|e| (None, e.into()))?;
            (r, Some(a.seed))
        }
        _ => {
            return Err((None, usage("give either a state file or --campaign N,d")));
        }
    };
    let pass = report.pass;
    let text = Report::new(argv, seed, Tolerances::default(), report.shape, report).to_json();
    if pass {
        Ok(text)
    } else {
        Err((Some(text), Failure::Verification(None)))
    }
}

pub fn sensitivity(a: &SensitivityArgs, argv: &[String]) -> Result<String, Failure> {
    if !(a.eps_min > 0.0 && a.eps_min < a.eps_max && a.eps_max <= 0.5) {
        return Err(usage("need 0 < --eps-min < --eps-max <= 0.5"));
    }
    if a.points < 2 {
        return Err(usage("--points must be at least 2"));
    }
    let s = load_input(&a.input)?;
    let eps = log_spaced(a.eps_min, a.eps_max, a.points)?;
    let study = sensitivity_study(&s, a.seed, &eps)?;
    Ok(match a.format {
        Format::Csv => {
            let mut out = String::from("epsilon,c_exp,c_mean,gap\n");
            for r in &study.records {
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    r.epsilon, r.c_exp, r.c_mean, r.gap
                ));
            }
            out
        }
        Format::Report => {
            Report::new(argv, Some(a.seed), Tolerances::default(), s.shape(), study).to_json()
        }
    })
}
