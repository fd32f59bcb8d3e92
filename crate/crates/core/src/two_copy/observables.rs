//! Two-copy observables whose expectation values on `|psi> ⊗ |psi>` give
//! reduced-state purities and the multipartite concurrence.
//!
//! For a block `B` of particle slots, `O_B` exchanges those slots between the
//! copies and `P±(B) = (I ± O_B)/2`. On identical copies
//! `<O_B> = Tr rho_A^2` where `A` is the complementary block, so both
//! `2 P+ - I` and `-2 P- + I` on the trailing `N-M` slots measure `Tr rho_M^2`.

use serde::Serialize;

use super::operator::DoubledOperator;
use crate::concurrence::alpha;
use crate::error::{Error, Result};
use crate::fock::basis::binomial;
use crate::fock::SystemShape;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// Validate 1-based slot labels and return them 0-based and sorted.
fn block_slots(shape: SystemShape, block: &[usize]) -> Result<Vec<usize>> {
    let n = shape.particles();
    let fail = |reason: String| Error::Block {
        particles: n,
        reason,
    };
    if block.is_empty() {
        return Err(fail("empty block".into()));
    }
    let mut slots: Vec<usize> = Vec::with_capacity(block.len());
    for &s in block {
        if s < 1 || s > n {
            return Err(fail(format!("slot {s} out of range")));
        }
        if slots.contains(&(s - 1)) {
            return Err(fail(format!("slot {s} repeated")));
        }
        slots.push(s - 1);
    }
    slots.sort_unstable();
    Ok(slots)
}

/// `O_B`: exchange the slots of `block` (1-based) between copy 1 and copy 2.
pub fn swap_operator(shape: SystemShape, block: &[usize]) -> Result<DoubledOperator> {
    DoubledOperator::swap(shape, block_slots(shape, block)?)
}

fn projector(shape: SystemShape, block: &[usize], sign: Sign) -> Result<DoubledOperator> {
    let swap = swap_operator(shape, block)?;
    let label = format!(
        "P{}{}",
        if sign == Sign::Plus { "+" } else { "-" },
        &swap.label()[1..]
    );
    Ok(DoubledOperator::combination(
        shape,
        vec![
            (0.5, DoubledOperator::identity(shape)?),
            (0.5 * sign.value(), swap),
        ],
    )?
    .with_label(label))
}

/// `P+(B) = (I + O_B)/2`.
pub fn sym_projector(shape: SystemShape, block: &[usize]) -> Result<DoubledOperator> {
    projector(shape, block, Sign::Plus)
}

/// `P-(B) = (I - O_B)/2`.
pub fn antisym_projector(shape: SystemShape, block: &[usize]) -> Result<DoubledOperator> {
    projector(shape, block, Sign::Minus)
}

/// `±2 P±(B) ∓ I` on an arbitrary block.
pub fn purity_observable_on_block(
    shape: SystemShape,
    block: &[usize],
    sign: Sign,
) -> Result<DoubledOperator> {
    let s = sign.value();
    DoubledOperator::combination(
        shape,
        vec![
            (2.0 * s, projector(shape, block, sign)?),
            (-s, DoubledOperator::identity(shape)?),
        ],
    )
}

/// `O^(N-M) = ±2 P± ∓ I` on the trailing slots `M+1..N`; its identical-copy
/// expectation is `Tr rho_M^2`.
pub fn observable_o_nm(shape: SystemShape, m: usize, sign: Sign) -> Result<DoubledOperator> {
    let n = shape.particles();
    if m < 1 || m + 1 > n {
        return Err(Error::Range {
            m,
            max: n.saturating_sub(1),
        });
    }
    let block: Vec<usize> = (m + 1..=n).collect();
    Ok(purity_observable_on_block(shape, &block, sign)?.with_label(format!("O^({})", n - m)))
}

/// `A_f = alpha_N [(N-1) I - sum_M binomial(N, M) O^(N-M)]`.
pub fn observable_af(shape: SystemShape) -> Result<DoubledOperator> {
    observable_af_with_sign(shape, Sign::Plus)
}

pub fn observable_af_with_sign(shape: SystemShape, sign: Sign) -> Result<DoubledOperator> {
    let n = shape.particles();
    let a = alpha(n, shape.modes())?;
    let mut terms = vec![(a * (n - 1) as f64, DoubledOperator::identity(shape)?)];
    for m in 1..n {
        terms.push((-a * binomial(n, m) as f64, observable_o_nm(shape, m, sign)?));
    }
    Ok(DoubledOperator::combination(shape, terms)?.with_label("A_f"))
}

/// Sign patterns with an even, nonzero number of minus signs.
pub fn even_minus_patterns(n: usize) -> Vec<Vec<Sign>> {
    (1u32..(1 << n))
        .filter(|bits| bits.count_ones() % 2 == 0)
        .map(|bits| {
            (0..n)
                .map(|j| {
                    if bits >> j & 1 == 1 {
                        Sign::Minus
                    } else {
                        Sign::Plus
                    }
                })
                .collect()
        })
        .collect()
}

fn require_two(shape: SystemShape) -> Result<()> {
    if shape.particles() < 2 {
        return Err(Error::Shape {
            modes: shape.modes(),
            particles: shape.particles(),
            reason: "two-copy concurrence observables need N >= 2".into(),
        });
    }
    Ok(())
}

/// Per-slot projector products `P^1_{s1} ⊗ ... ⊗ P^N_{sN}`.
fn slot_product(shape: SystemShape, signs: &[Sign]) -> Result<DoubledOperator> {
    let factors = signs
        .iter()
        .enumerate()
        .map(|(j, &s)| projector(shape, &[j + 1], s))
        .collect::<Result<Vec<_>>>()?;
    DoubledOperator::product(shape, factors, true)
}

/// `A = 4 sum over even-minus patterns of P^1_{s1} ⊗ ... ⊗ P^N_{sN}`, the
/// distinguishable-party multipartite concurrence observable.
pub fn observable_a(shape: SystemShape) -> Result<DoubledOperator> {
    require_two(shape)?;
    let terms = even_minus_patterns(shape.particles())
        .iter()
        .map(|p| Ok((4.0, slot_product(shape, p)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(DoubledOperator::combination(shape, terms)?.with_label("A"))
}

/// `A'_f = alpha_N (1 + N - 2^N + 2^(N-2) A)`.
pub fn observable_af_prime(shape: SystemShape) -> Result<DoubledOperator> {
    require_two(shape)?;
    let n = shape.particles();
    let a = alpha(n, shape.modes())?;
    let two_n = 2f64.powi(n as i32);
    Ok(DoubledOperator::combination(
        shape,
        vec![
            (
                a * (1.0 + n as f64 - two_n),
                DoubledOperator::identity(shape)?,
            ),
            (a * two_n / 4.0, observable_a(shape)?),
        ],
    )?
    .with_label("A'_f"))
}

/// `Ã = 4 (I - P+^1 ⊗ ... ⊗ P+^N)`.
pub fn observable_a_tilde(shape: SystemShape) -> Result<DoubledOperator> {
    require_two(shape)?;
    let all_plus = vec![Sign::Plus; shape.particles()];
    Ok(DoubledOperator::combination(
        shape,
        vec![
            (4.0, DoubledOperator::identity(shape)?),
            (-4.0, slot_product(shape, &all_plus)?),
        ],
    )?
    .with_label("A~"))
}
