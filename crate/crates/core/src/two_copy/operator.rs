use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::fock::{embed_first_quantized, random::complex_gaussian, FermionState, SystemShape};

/// Largest two-copy vector (`d^(2N)` entries) an operator may act on.
pub const MAX_DOUBLED_DIM: usize = 1 << 22;

/// Dimension `d^(2N)` of the two-copy product space.
pub fn doubled_dim(shape: SystemShape) -> Result<usize> {
    let dim = (shape.modes() as u128).pow(2 * shape.particles() as u32);
    if dim > MAX_DOUBLED_DIM as u128 {
        return Err(Error::DimensionTooLarge {
            dim: usize::try_from(dim).unwrap_or(usize::MAX),
            limit: MAX_DOUBLED_DIM,
        });
    }
    Ok(dim as usize)
}

/// Operator expression over slot swaps between the two copies.
#[derive(Debug, Clone, PartialEq)]
enum Expr {
    Identity,
    /// Exchange the listed (0-based) particle slots of copy 1 with those of copy 2.
    Swap(Vec<usize>),
    Scale(f64, Box<Expr>),
    Sum(Vec<Expr>),
    /// Applied right to left.
    Product(Vec<Expr>),
}

/// Hermitian operator on two copies of the first-quantized N-particle space,
/// applied to vectors without ever forming its matrix.
///
/// Vector layout: the N slots of copy 1 are the most significant base-`d`
/// digits, followed by the N slots of copy 2.
#[derive(Debug, Clone, PartialEq)]
pub struct DoubledOperator {
    shape: SystemShape,
    expr: Expr,
    hermitian: bool,
    label: String,
}

impl DoubledOperator {
    pub fn identity(shape: SystemShape) -> Result<Self> {
        doubled_dim(shape)?;
        Ok(Self {
            shape,
            expr: Expr::Identity,
            hermitian: true,
            label: "I".into(),
        })
    }

    /// Block swap from already validated 0-based slots.
    pub(crate) fn swap(shape: SystemShape, slots: Vec<usize>) -> Result<Self> {
        doubled_dim(shape)?;
        let label = format!(
            "O[{}]",
            slots
                .iter()
                .map(|s| (s + 1).to_string())
                .collect::<Vec<_>>()
                .join(",")
        );
        Ok(Self {
            shape,
            expr: Expr::Swap(slots),
            hermitian: true,
            label,
        })
    }

    pub fn shape(&self) -> SystemShape {
        self.shape
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn dim(&self) -> usize {
        doubled_dim(self.shape).expect("checked at construction")
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn scaled(self, c: f64) -> Self {
        Self {
            shape: self.shape,
            label: format!("{c}*({})", self.label),
            hermitian: self.hermitian,
            expr: Expr::Scale(c, Box::new(self.expr)),
        }
    }

    /// Linear combination `sum_i c_i op_i` with real coefficients.
    pub fn combination(shape: SystemShape, terms: Vec<(f64, DoubledOperator)>) -> Result<Self> {
        if terms.iter().any(|(_, op)| op.shape != shape) {
            return Err(Error::ShapeMismatch);
        }
        doubled_dim(shape)?;
        let hermitian = terms.iter().all(|(_, op)| op.hermitian);
        let label = terms
            .iter()
            .map(|(c, op)| format!("{c}*{}", op.label))
            .collect::<Vec<_>>()
            .join(" + ");
        let expr = Expr::Sum(
            terms
                .into_iter()
                .map(|(c, op)| Expr::Scale(c, Box::new(op.expr)))
                .collect(),
        );
        Ok(Self {
            shape,
            expr,
            hermitian,
            label,
        })
    }

    /// Composition `ops[0] * ops[1] * ...`. Hermitian only when the caller
    /// asserts the factors commute.
    pub fn product(shape: SystemShape, ops: Vec<DoubledOperator>, commuting: bool) -> Result<Self> {
        if ops.iter().any(|op| op.shape != shape) {
            return Err(Error::ShapeMismatch);
        }
        doubled_dim(shape)?;
        let hermitian = commuting && ops.iter().all(|op| op.hermitian);
        let label = ops
            .iter()
            .map(|op| format!("({})", op.label))
            .collect::<Vec<_>>()
            .join("");
        Ok(Self {
            shape,
            expr: Expr::Product(ops.into_iter().map(|op| op.expr).collect()),
            hermitian,
            label,
        })
    }

    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.dim() {
            return Err(Error::Parameter(format!(
                "vector of length {} does not match two-copy dimension {}",
                v.len(),
                self.dim()
            )));
        }
        Ok(eval(&self.expr, self.shape, v))
    }
}

fn eval(expr: &Expr, shape: SystemShape, v: &[Complex64]) -> Vec<Complex64> {
    match expr {
        Expr::Identity => v.to_vec(),
        Expr::Swap(slots) => apply_swap(shape, slots, v),
        Expr::Scale(c, inner) => {
            let mut out = eval(inner, shape, v);
            out.iter_mut().for_each(|x| *x *= *c);
            out
        }
        Expr::Sum(terms) => {
            let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
            for t in terms {
                for (o, x) in out.iter_mut().zip(eval(t, shape, v)) {
                    *o += x;
                }
            }
            out
        }
        Expr::Product(factors) => {
            let mut out = v.to_vec();
            for f in factors.iter().rev() {
                out = eval(f, shape, &out);
            }
            out
        }
    }
}

fn apply_swap(shape: SystemShape, slots: &[usize], v: &[Complex64]) -> Vec<Complex64> {
    let (d, n) = (shape.modes(), shape.particles());
    // (stride of slot j in copy 1, stride of slot j in copy 2)
    let strides: Vec<(usize, usize)> = slots
        .iter()
        .map(|&j| (d.pow((2 * n - 1 - j) as u32), d.pow((n - 1 - j) as u32)))
        .collect();
    let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
    for (x, &val) in v.iter().enumerate() {
        let mut y = x;
        for &(s1, s2) in &strides {
            let a = (x / s1) % d;
            let b = (x / s2) % d;
            y = y + b * s1 + a * s2 - a * s1 - b * s2;
        }
        out[y] = val;
    }
    out
}

/// Two copies of a state, not necessarily identical.
#[derive(Debug, Clone, PartialEq)]
pub struct CopyPair {
    first: FermionState,
    second: FermionState,
}

impl CopyPair {
    pub fn new(first: FermionState, second: FermionState) -> Result<Self> {
        if first.shape() != second.shape() {
            return Err(Error::ShapeMismatch);
        }
        Ok(Self { first, second })
    }

    pub fn identical(state: &FermionState) -> Self {
        Self {
            first: state.clone(),
            second: state.clone(),
        }
    }

    pub fn shape(&self) -> SystemShape {
        self.first.shape()
    }

    pub fn first(&self) -> &FermionState {
        &self.first
    }

    pub fn second(&self) -> &FermionState {
        &self.second
    }

    /// `|psi1> ⊗ |psi2>` with both copies embedded in first quantization.
    pub fn product_vector(&self) -> Result<Vec<Complex64>> {
        doubled_dim(self.shape())?;
        let a = embed_first_quantized(&self.first)?.into_entries();
        let b = embed_first_quantized(&self.second)?.into_entries();
        Ok(kron(&a, &b))
    }
}

pub(crate) fn kron(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(x * y);
        }
    }
    out
}

/// `<x|y>`.
pub fn inner(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Expectation {
    pub value: f64,
    /// Imaginary part of `<psi1 psi2| Op |psi1 psi2>`; zero up to rounding for Hermitian operators.
    pub imaginary: f64,
}

/// `<psi1 ⊗ psi2| Op |psi1 ⊗ psi2>`, computed by applying the operator to the product vector.
pub fn expectation(op: &DoubledOperator, pair: &CopyPair) -> Result<Expectation> {
    if op.shape() != pair.shape() {
        return Err(Error::ShapeMismatch);
    }
    let x = pair.product_vector()?;
    let y = op.apply(&x)?;
    let e = inner(&x, &y);
    Ok(Expectation {
        value: e.re,
        imaginary: e.im,
    })
}

/// Largest `|<x|Op y> - conj(<y|Op x>)|` over random unit probe pairs.
pub fn hermiticity_defect<R: Rng + ?Sized>(
    op: &DoubledOperator,
    probes: usize,
    rng: &mut R,
) -> Result<f64> {
    let dim = op.dim();
    let mut worst = 0.0f64;
    let unit = |rng: &mut R| {
        let mut v: Vec<Complex64> = (0..dim).map(|_| complex_gaussian(rng)).collect();
        let norm = inner(&v, &v).re.sqrt();
        v.iter_mut().for_each(|x| *x /= norm);
        v
    };
    for _ in 0..probes {
        let x = unit(rng);
        let y = unit(rng);
        let xy = inner(&x, &op.apply(&y)?);
        let yx = inner(&y, &op.apply(&x)?);
        worst = worst.max((xy - yx.conj()).norm());
    }
    Ok(worst)
}
