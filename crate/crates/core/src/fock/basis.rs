//! Occupation basis of Slater determinants.
//!
//! An N-fermion basis element is an ascending tuple of mode labels
//! `(i1 < i2 < ... < iN)` drawn from `1..=d`. Internally a tuple is stored as a
//! [`Mask`] with bit `i - 1` set for every occupied mode, which caps the
//! mode count at [`MAX_MODES`]. Tuples are ordered lexicographically and ranked with the
//! combinatorial number system, so `rank` and `unrank` never need a lookup table.

use serde::Serialize;

use crate::error::{Error, Result};

/// Bit set of occupied modes.
pub type Mask = u128;

pub const MAX_MODES: usize = Mask::BITS as usize;

/// Largest basis the crate will enumerate.
pub const MAX_BASIS_LEN: u64 = 1 << 26;

/// Number of modes `d` and number of particles `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SystemShape {
    #[serde(rename = "d")]
    modes: usize,
    #[serde(rename = "n")]
    particles: usize,
}

impl SystemShape {
    pub fn new(modes: usize, particles: usize) -> Result<Self> {
        let fail = |reason: &str| Error::Shape {
            modes,
            particles,
            reason: reason.to_string(),
        };
        if particles < 1 {
            return Err(fail("at least one particle is required"));
        }
        if particles > modes {
            return Err(fail("an antisymmetric state needs N <= d"));
        }
        if modes > MAX_MODES {
            return Err(fail("at most 128 modes are supported"));
        }
        if binomial(modes, particles) > MAX_BASIS_LEN {
            return Err(fail(&format!(
                "binomial(d, N) exceeds {MAX_BASIS_LEN} basis states"
            )));
        }
        Ok(Self { modes, particles })
    }

    /// Mode count `d`.
    pub fn modes(&self) -> usize {
        self.modes
    }

    /// Particle count `N`.
    pub fn particles(&self) -> usize {
        self.particles
    }

    /// Dimension `binomial(d, N)` of the antisymmetric N-particle space.
    pub fn dim(&self) -> usize {
        binomial(self.modes, self.particles) as usize
    }

    /// Same mode count with `particles` fermions.
    pub fn with_particles(&self, particles: usize) -> Result<Self> {
        Self::new(self.modes, particles)
    }
}

impl std::fmt::Display for SystemShape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(N={}, d={})", self.particles, self.modes)
    }
}

/// Binomial coefficient; zero when `k > n`, `u64::MAX` when it does not fit.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by i + 1; saturate instead of overflowing
        match acc.checked_mul((n - i) as u128) {
            Some(x) if x / (i + 1) as u128 <= u64::MAX as u128 => acc = x / (i + 1) as u128,
            _ => return u64::MAX,
        }
    }
    acc as u64
}

/// Bit mask of a list of 1-based mode labels. Fails on repeats or labels outside `1..=d`.
pub fn mask_of(modes: &[usize], d: usize) -> Result<Mask> {
    let mut mask: Mask = 0;
    for &m in modes {
        if m < 1 || m > d {
            return Err(Error::Mode(format!("mode {m} outside 1..={d}")));
        }
        let bit: Mask = 1 << (m - 1);
        if mask & bit != 0 {
            return Err(Error::Mode(format!("mode {m} repeated")));
        }
        mask |= bit;
    }
    Ok(mask)
}

/// Ascending 1-based labels of the set bits.
pub fn modes_of(mut mask: Mask) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    while mask != 0 {
        let bit = mask.trailing_zeros() as usize;
        out.push(bit + 1);
        mask &= mask - 1;
    }
    out
}

/// Sign of the permutation that sorts the concatenation `left ++ right`
/// of two disjoint ascending tuples.
pub fn merge_sign(left: Mask, right: Mask) -> f64 {
    debug_assert_eq!(left & right, 0);
    let mut inversions = 0u32;
    let mut r = right;
    while r != 0 {
        let bit = r.trailing_zeros();
        inversions += (left >> bit).count_ones();
        r &= r - 1;
    }
    if inversions.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Parity sign of an arbitrary sequence of distinct values (+1 even, -1 odd).
pub fn sequence_sign(seq: &[usize]) -> f64 {
    let mut inversions = 0usize;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                inversions += 1;
            }
        }
    }
    if inversions.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// All permutations of `0..n` paired with their sign, via Heap's algorithm.
pub fn signed_permutations(n: usize) -> Vec<(Vec<usize>, f64)> {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut sign = 1.0;
    let mut out = vec![(perm.clone(), sign)];
    let mut c = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            sign = -sign;
            out.push((perm.clone(), sign));
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// Lexicographic rank of the ascending tuple encoded by `mask` among all
/// `binomial(d, n)` tuples, where `n = mask.count_ones()`.
pub fn lex_rank(d: usize, mask: Mask) -> usize {
    let n = mask.count_ones() as usize;
    let mut rank = 0u64;
    let mut prev = 0usize; // last label used, 1-based; 0 before the first
    for (j, label) in modes_of(mask).into_iter().enumerate() {
        // tuples agreeing on the first j entries but with a smaller (j+1)-th entry
        for v in prev + 1..label {
            rank += binomial(d - v, n - j - 1);
        }
        prev = label;
    }
    rank as usize
}

/// Inverse of [`lex_rank`].
pub fn lex_unrank(d: usize, n: usize, mut rank: u64) -> Mask {
    let mut mask: Mask = 0;
    let mut v = 1usize;
    for j in 0..n {
        loop {
            let block = binomial(d - v, n - j - 1);
            if rank < block {
                break;
            }
            rank -= block;
            v += 1;
        }
        mask |= 1 << (v - 1);
        v += 1;
    }
    mask
}

/// The ordered list of occupation tuples for a shape.
#[derive(Debug, Clone, PartialEq)]
pub struct OccupationBasis {
    shape: SystemShape,
    masks: Vec<Mask>,
}

impl OccupationBasis {
    pub fn shape(&self) -> SystemShape {
        self.shape
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    pub fn masks(&self) -> &[Mask] {
        &self.masks
    }

    pub fn mask(&self, rank: usize) -> Mask {
        self.masks[rank]
    }

    /// 1-based mode labels of the tuple at `rank`.
    pub fn tuple(&self, rank: usize) -> Vec<usize> {
        modes_of(self.masks[rank])
    }

    pub fn tuples(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        self.masks.iter().map(|&m| modes_of(m))
    }

    /// Rank of an ascending tuple of 1-based labels.
    pub fn rank(&self, tuple: &[usize]) -> Result<usize> {
        if tuple.len() != self.shape.particles {
            return Err(Error::Mode(format!(
                "expected {} modes, got {}",
                self.shape.particles,
                tuple.len()
            )));
        }
        if tuple.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Mode(format!("{tuple:?} is not strictly increasing")));
        }
        let mask = mask_of(tuple, self.shape.modes)?;
        Ok(lex_rank(self.shape.modes, mask))
    }

    pub fn rank_of_mask(&self, mask: Mask) -> usize {
        lex_rank(self.shape.modes, mask)
    }

    pub fn unrank(&self, rank: usize) -> Vec<usize> {
        modes_of(lex_unrank(
            self.shape.modes,
            self.shape.particles,
            rank as u64,
        ))
    }
}

/// Enumerate every ascending N-tuple over `1..=d` in lexicographic order.
pub fn enumerate_basis(shape: SystemShape) -> Result<OccupationBasis> {
    let (d, n) = (shape.modes, shape.particles);
    let len = binomial(d, n);
    if len > MAX_BASIS_LEN {
        return Err(Error::Shape {
            modes: d,
            particles: n,
            reason: format!("basis of {len} tuples is too large"),
        });
    }
    let mut masks = Vec::with_capacity(len as usize);
    let mut idx: Vec<usize> = (0..n).collect();
    loop {
        masks.push(idx.iter().fold(0, |m: Mask, &i| m | (1 << i)));
        // advance to the next combination in lexicographic order
        let mut j = n;
        while j > 0 && idx[j - 1] == d - n + j - 1 {
            j -= 1;
        }
        if j == 0 {
            break;
        }
        idx[j - 1] += 1;
        for t in j..n {
            idx[t] = idx[t - 1] + 1;
        }
    }
    Ok(OccupationBasis { shape, masks })
}

/// Iterate over the masks of all `k`-subsets of the set bits of `mask`.
pub fn submasks_of_size(mask: Mask, k: usize) -> Vec<Mask> {
    let bits = modes_of(mask);
    let n = bits.len();
    let mut out = Vec::with_capacity(binomial(n, k) as usize);
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.iter().fold(0, |m: Mask, &i| m | (1 << (bits[i] - 1))));
        let mut j = k;
        while j > 0 && idx[j - 1] == n - k + j - 1 {
            j -= 1;
        }
        if j == 0 {
            break;
        }
        idx[j - 1] += 1;
        for t in j..k {
            idx[t] = idx[t - 1] + 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_choose_two_in_lexicographic_order() {
        let basis = enumerate_basis(SystemShape::new(4, 2).unwrap()).unwrap();
        let tuples: Vec<Vec<usize>> = basis.tuples().collect();
        assert_eq!(
            tuples,
            vec![
                vec![1, 2],
                vec![1, 3],
                vec![1, 4],
                vec![2, 3],
                vec![2, 4],
                vec![3, 4]
            ]
        );
    }

    #[test]
    fn six_choose_three_has_twenty() {
        let basis = enumerate_basis(SystemShape::new(6, 3).unwrap()).unwrap();
        assert_eq!(basis.len(), 20);
    }

    #[test]
    fn too_many_particles_is_a_shape_error() {
        assert!(matches!(SystemShape::new(3, 4), Err(Error::Shape { .. })));
        assert!(matches!(SystemShape::new(3, 0), Err(Error::Shape { .. })));
    }

    #[test]
    fn rank_matches_enumeration_position() {
        for d in 1..=9 {
            for n in 1..=d {
                let basis = enumerate_basis(SystemShape::new(d, n).unwrap()).unwrap();
                assert_eq!(basis.len() as u64, binomial(d, n));
                for (k, t) in basis.tuples().enumerate() {
                    assert!(t.windows(2).all(|w| w[0] < w[1]));
                    assert_eq!(basis.rank(&t).unwrap(), k);
                    assert_eq!(basis.unrank(k), t);
                }
            }
        }
    }

    #[test]
    fn rank_rejects_bad_tuples() {
        let basis = enumerate_basis(SystemShape::new(5, 2).unwrap()).unwrap();
        assert!(basis.rank(&[2, 1]).is_err());
        assert!(basis.rank(&[1, 6]).is_err());
        assert!(basis.rank(&[1]).is_err());
    }

    #[test]
    fn merge_sign_counts_crossings() {
        // (2) ++ (1) needs one transposition
        assert_eq!(merge_sign(0b10, 0b01), -1.0);
        assert_eq!(merge_sign(0b01, 0b10), 1.0);
        // (3,4) ++ (1,2): four crossings
        assert_eq!(merge_sign(0b1100, 0b0011), 1.0);
        // (2,4) ++ (1,3): 3 crossings
        assert_eq!(merge_sign(0b1010, 0b0101), -1.0);
    }

    #[test]
    fn heap_permutations_are_complete_and_signed() {
        let perms = signed_permutations(4);
        assert_eq!(perms.len(), 24);
        let mut seen = std::collections::HashSet::new();
        for (p, s) in &perms {
            assert_eq!(*s, sequence_sign(p));
            assert!(seen.insert(p.clone()));
        }
    }

    #[test]
    fn submasks_enumerate_all_subsets() {
        let subs = submasks_of_size(0b10110, 2);
        assert_eq!(subs.len(), 3);
        assert!(subs
            .iter()
            .all(|s| s & !0b10110 == 0 && s.count_ones() == 2));
    }

    #[test]
    fn modes_beyond_sixty_four() {
        let shape = SystemShape::new(100, 2).unwrap();
        let basis = enumerate_basis(shape).unwrap();
        assert_eq!(basis.len(), 4950);
        assert_eq!(basis.tuple(basis.len() - 1), vec![99, 100]);
        let r = basis.rank(&[64, 100]).unwrap();
        assert_eq!(basis.unrank(r), vec![64, 100]);
        assert!(SystemShape::new(128, 1).is_ok());
        assert!(SystemShape::new(129, 1).is_err());
        assert!(SystemShape::new(40, 20).is_err());
        assert!(SystemShape::new(128, 64).is_err());
    }

    #[test]
    fn binomial_saturates() {
        assert_eq!(binomial(100, 2), 4950);
        assert_eq!(binomial(67, 33), 14226520737620288370);
        assert_eq!(binomial(128, 64), u64::MAX);
    }
}
