//! Brute-force reference implementations in first quantization. Nothing here
//! calls into the library beyond reading shapes and amplitudes.

#![allow(dead_code)]

use fermiconc::FermionState;
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Ascending k-subsets of `1..=d` in lexicographic order.
pub fn combinations(d: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, d: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..=d {
            cur.push(v);
            go(v + 1, d, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, d, k, &mut Vec::new(), &mut out);
    out
}

/// All orderings of `items` with the sign of the permutation, by inversion count.
pub fn signed_orderings(items: &[usize]) -> Vec<(Vec<usize>, f64)> {
    fn go(rest: &mut Vec<usize>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(cur.clone());
            return;
        }
        for i in 0..rest.len() {
            let v = rest.remove(i);
            cur.push(v);
            go(rest, cur, out);
            cur.pop();
            rest.insert(i, v);
        }
    }
    let mut all = Vec::new();
    go(&mut items.to_vec(), &mut Vec::new(), &mut all);
    all.into_iter()
        .map(|p| {
            let inversions = (0..p.len())
                .flat_map(|i| (i + 1..p.len()).map(move |j| (i, j)))
                .filter(|&(i, j)| p[i] > p[j])
                .count();
            let sign = if inversions % 2 == 0 { 1.0 } else { -1.0 };
            (p, sign)
        })
        .collect()
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Product-basis index of a 1-based mode sequence, first slot most significant.
pub fn product_index(seq: &[usize], d: usize) -> usize {
    seq.iter().fold(0, |acc, &m| acc * d + (m - 1))
}

/// Normalized antisymmetric vector of the ascending tuple `modes` in `d^len` dimensions.
pub fn antisym_ket(modes: &[usize], d: usize) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(0.0, 0.0); d.pow(modes.len() as u32)];
    let scale = 1.0 / factorial(modes.len()).sqrt();
    for (p, sign) in signed_orderings(modes) {
        v[product_index(&p, d)] += Complex64::new(sign * scale, 0.0);
    }
    v
}

/// First-quantized vector of `s`: amplitudes over ascending tuples times their antisymmetric kets.
pub fn embed(s: &FermionState) -> Vec<Complex64> {
    let (d, n) = (s.shape().modes(), s.shape().particles());
    let mut v = vec![Complex64::new(0.0, 0.0); d.pow(n as u32)];
    for (a, tuple) in s.amplitudes().iter().zip(combinations(d, n)) {
        if a.norm() == 0.0 {
            continue;
        }
        for (idx, c) in antisym_support(&tuple, d) {
            v[idx] += a * c;
        }
    }
    v
}

/// Nonzero entries of [`antisym_ket`] as (product index, coefficient).
fn antisym_support(modes: &[usize], d: usize) -> Vec<(usize, f64)> {
    let scale = 1.0 / factorial(modes.len()).sqrt();
    signed_orderings(modes)
        .into_iter()
        .map(|(p, sign)| (product_index(&p, d), sign * scale))
        .collect()
}

/// Trace out slots `m+1..N` of the product-space density matrix and
/// express the result in the antisymmetric M-particle basis.
pub fn partial_trace_rdm(s: &FermionState, m: usize) -> DMatrix<Complex64> {
    let (d, n) = (s.shape().modes(), s.shape().particles());
    let psi = embed(s);
    let rows = d.pow(m as u32);
    let cols = d.pow((n - m) as u32);
    // psi reshaped with the kept slots as row index
    let mat = DMatrix::from_fn(rows, cols, |r, c| psi[r * cols + c]);
    let rho_full = &mat * mat.adjoint();
    let kets: Vec<Vec<(usize, f64)>> = combinations(d, m)
        .iter()
        .map(|k| antisym_support(k, d))
        .collect();
    let dim = kets.len();
    DMatrix::from_fn(dim, dim, |i, j| {
        let mut acc = Complex64::new(0.0, 0.0);
        for &(r, x) in &kets[i] {
            for &(c, y) in &kets[j] {
                acc += rho_full[(r, c)] * (x * y);
            }
        }
        acc
    })
}

/// `Tr rho^2` of a dense matrix, `sum |rho_ij|^2` for Hermitian input.
pub fn dense_purity(rho: &DMatrix<Complex64>) -> f64 {
    (rho * rho).trace().re
}

/// Fraction of weight of the product-space density matrix outside the
/// antisymmetric sector; zero for a genuine fermionic state.
pub fn leakage(s: &FermionState, m: usize) -> f64 {
    let (d, n) = (s.shape().modes(), s.shape().particles());
    let psi = embed(s);
    let rows = d.pow(m as u32);
    let cols = d.pow((n - m) as u32);
    let mat = DMatrix::from_fn(rows, cols, |r, c| psi[r * cols + c]);
    let full_trace = (&mat * mat.adjoint()).trace().re;
    let sector_trace = partial_trace_rdm(s, m).trace().re;
    (full_trace - sector_trace).abs()
}
