//! Dense bit vectors and matrices over GF(2).
//!
//! Matrices are stored column-major because every consumer here (boundary
//! operators, span membership, rank) works on columns: a column of `∂₁` is an
//! edge, a column of `∂₂` is a triangle.

use std::fmt;

const WORD_BITS: usize = 64;

/// A fixed-length vector over GF(2), packed into 64-bit words.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; len.div_ceil(WORD_BITS)],
        }
    }

    /// Builds a vector of length `len` with ones at `indices`. Repeated indices
    /// cancel, as they would in a sum mod 2.
    ///
    /// Panics if an index is out of range.
    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in indices {
            v.flip(i);
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        Self::from_indices(
            bits.len(),
            bits.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i),
        )
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// In-place addition over GF(2).
    ///
    /// Panics on length mismatch.
    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "GF(2) vector length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &BitVector) -> BitVector {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    /// True iff the two vectors share a set bit.
    pub fn intersects(&self, other: &BitVector) -> bool {
        assert_eq!(self.len, other.len, "GF(2) vector length mismatch");
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn and(&self, other: &BitVector) -> BitVector {
        assert_eq!(self.len, other.len, "GF(2) vector length mismatch");
        BitVector {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    /// Index of the highest set bit.
    pub fn highest_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, w)| **w != 0)
            .map(|(k, w)| k * WORD_BITS + (WORD_BITS - 1 - w.leading_zeros() as usize))
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &BitVector) -> bool {
        assert_eq!(self.len, other.len, "GF(2) vector length mismatch");
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum::<u32>()
            % 2
            == 1
    }

    /// Indices of set bits in increasing order.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut word = w;
            std::iter::from_fn(move || {
                if word == 0 {
                    None
                } else {
                    let t = word.trailing_zeros() as usize;
                    word &= word - 1;
                    Some(k * WORD_BITS + t)
                }
            })
        })
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector[")?;
        for i in 0..self.len {
            write!(f, "{}", u8::from(self.get(i)))?;
        }
        write!(f, "]")
    }
}

/// A `rows × cols` matrix over GF(2), stored by columns.
#[derive(Clone, PartialEq, Eq)]
pub struct Gf2Matrix {
    rows: usize,
    columns: Vec<BitVector>,
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            columns: vec![BitVector::zeros(rows); cols],
        }
    }

    /// Panics if any column length differs from `rows`.
    pub fn from_columns(rows: usize, columns: Vec<BitVector>) -> Self {
        assert!(
            columns.iter().all(|c| c.len() == rows),
            "column length disagrees with row count"
        );
        Self { rows, columns }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.columns[col].get(row)
    }

    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        self.columns[col].set(row, value);
    }

    pub fn column(&self, col: usize) -> &BitVector {
        &self.columns[col]
    }

    pub fn columns(&self) -> &[BitVector] {
        &self.columns
    }

    /// Matrix-vector product `self · x`.
    ///
    /// Panics if `x.len() != self.cols()`.
    pub fn apply(&self, x: &BitVector) -> BitVector {
        assert_eq!(x.len(), self.cols(), "vector length disagrees with column count");
        let mut out = BitVector::zeros(self.rows);
        for j in x.ones() {
            out.xor_assign(&self.columns[j]);
        }
        out
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &Gf2Matrix) -> Gf2Matrix {
        assert_eq!(self.cols(), other.rows(), "inner dimensions disagree");
        Gf2Matrix {
            rows: self.rows,
            columns: other.columns.iter().map(|c| self.apply(c)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(BitVector::is_zero)
    }

    /// Rank over GF(2). The matrix itself is left untouched.
    pub fn rank(&self) -> usize {
        let mut basis = EchelonBasis::new(self.rows);
        self.columns.iter().filter(|c| basis.insert(c)).count()
    }
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Gf2Matrix {}x{}", self.rows, self.cols())?;
        for r in 0..self.rows {
            for c in 0..self.cols() {
                write!(f, "{}", u8::from(self.get(r, c)))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Incrementally built basis of a subspace of GF(2)^n, kept in echelon form
/// keyed by each vector's highest set bit.
///
/// Insertion reduces the candidate against existing pivots, the same move as
/// column reduction of a boundary matrix.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    dim: usize,
    // pivots[p] holds the reduced vector whose highest one is at p
    pivots: Vec<Option<BitVector>>,
    rank: usize,
}

impl EchelonBasis {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            pivots: vec![None; dim],
            rank: 0,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    fn reduce(&self, v: &BitVector) -> BitVector {
        let mut r = v.clone();
        while let Some(p) = r.highest_one() {
            match &self.pivots[p] {
                Some(b) => r.xor_assign(b),
                None => break,
            }
        }
        r
    }

    /// Adds `v` to the spanning set. Returns true iff the rank went up.
    pub fn insert(&mut self, v: &BitVector) -> bool {
        assert_eq!(v.len(), self.dim, "vector length disagrees with basis dimension");
        let r = self.reduce(v);
        match r.highest_one() {
            Some(p) => {
                self.pivots[p] = Some(r);
                self.rank += 1;
                true
            }
            None => false,
        }
    }

    pub fn contains(&self, v: &BitVector) -> bool {
        assert_eq!(v.len(), self.dim, "vector length disagrees with basis dimension");
        self.reduce(v).is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn ones_iterates_across_word_boundaries() {
        let v = BitVector::from_indices(200, [0, 63, 64, 130, 199]);
        assert_eq!(v.ones().collect::<Vec<_>>(), vec![0, 63, 64, 130, 199]);
        assert_eq!(v.highest_one(), Some(199));
        assert_eq!(v.count_ones(), 5);
    }

    #[test]
    fn repeated_indices_cancel() {
        let v = BitVector::from_indices(4, [1, 2, 1]);
        assert_eq!(v.ones().collect::<Vec<_>>(), vec![2]);
    }

    #[test]
    fn zero_matrix_has_rank_zero() {
        assert_eq!(Gf2Matrix::zeros(3, 3).rank(), 0);
        assert_eq!(Gf2Matrix::zeros(0, 5).rank(), 0);
    }

    #[test]
    fn identity_rank() {
        let cols = (0..70).map(|i| BitVector::from_indices(70, [i])).collect();
        assert_eq!(Gf2Matrix::from_columns(70, cols).rank(), 70);
    }

    #[test]
    fn echelon_membership() {
        let mut b = EchelonBasis::new(4);
        assert!(b.insert(&BitVector::from_indices(4, [0, 1])));
        assert!(b.insert(&BitVector::from_indices(4, [1, 2])));
        assert!(!b.insert(&BitVector::from_indices(4, [0, 2])));
        assert!(b.contains(&BitVector::from_indices(4, [0, 2])));
        assert!(!b.contains(&BitVector::from_indices(4, [3])));
        assert_eq!(b.rank(), 2);
    }

    fn brute_rank(rows: usize, cols: &[u32]) -> usize {
        // size of the span, by enumeration of all column subsets
        let mut span = std::collections::HashSet::new();
        for mask in 0u32..(1 << cols.len()) {
            let mut acc = 0u32;
            for (j, c) in cols.iter().enumerate() {
                if mask >> j & 1 == 1 {
                    acc ^= c;
                }
            }
            span.insert(acc);
        }
        let _ = rows;
        span.len().trailing_zeros() as usize
    }

    proptest! {
        #[test]
        fn rank_matches_span_enumeration(rows in 1usize..8, cols in prop::collection::vec(0u32..256, 0..8)) {
            let cols: Vec<u32> = cols.into_iter().map(|c| c & ((1 << rows) - 1)).collect();
            let m = Gf2Matrix::from_columns(
                rows,
                cols.iter()
                    .map(|c| BitVector::from_indices(rows, (0..rows).filter(|i| c >> i & 1 == 1)))
                    .collect(),
            );
            prop_assert_eq!(m.rank(), brute_rank(rows, &cols));
        }

        #[test]
        fn apply_is_linear(a in prop::collection::vec(any::<bool>(), 6), b in prop::collection::vec(any::<bool>(), 6), seed in any::<u64>()) {
            let cols = (0..6)
                .map(|j| BitVector::from_indices(5, (0..5).filter(|i| (seed >> (j * 5 + i)) & 1 == 1)))
                .collect();
            let m = Gf2Matrix::from_columns(5, cols);
            let (a, b) = (BitVector::from_bools(&a), BitVector::from_bools(&b));
            prop_assert_eq!(m.apply(&a.xor(&b)), m.apply(&a).xor(&m.apply(&b)));
        }
    }
}
