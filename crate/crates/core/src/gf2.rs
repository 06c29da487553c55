//! Dense GF(2) linear algebra packed 64 columns to the word, plus the
//! constructors that turn multiplication in the squarefree quotient
//! ring into matrices over the graded monomial bases.

use crate::error::{Error, Result};
use crate::ring::{choose64, Element, GradedBasisIndex};

/// Absolute ceiling on matrix size (in bits) regardless of any
/// user-supplied budget; 2^38 bits is 32 GiB.
pub const HARD_BIT_CAP: u64 = 1 << 38;

pub(crate) fn check_hard_cap(rows: u64, cols: u64, degree: usize) -> Result<()> {
    let bits = rows.saturating_mul(cols);
    if bits > HARD_BIT_CAP {
        return Err(Error::ResourceLimit {
            degree,
            rows,
            cols,
            limit_bits: HARD_BIT_CAP,
        });
    }
    Ok(())
}

/// A fixed-length bit vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len);
        let w = &mut self.words[i / 64];
        if value {
            *w |= 1u64 << (i % 64);
        } else {
            *w &= !(1u64 << (i % 64));
        }
    }

    pub fn xor_in(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Indices of the set bits, ascending.
    pub fn ones(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (wi, &w) in self.words.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                out.push(wi * 64 + w.trailing_zeros() as usize);
                w &= w - 1;
            }
        }
        out
    }
}

/// A dense row-major GF(2) matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        let stride = cols.div_ceil(64);
        BitMatrix {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols);
        self.data[r * self.stride + c / 64] >> (c % 64) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols);
        let w = &mut self.data[r * self.stride + c / 64];
        if value {
            *w |= 1u64 << (c % 64);
        } else {
            *w &= !(1u64 << (c % 64));
        }
    }

    pub fn transposed(&self) -> BitMatrix {
        let mut t = BitMatrix::new(self.cols, self.rows);
        for r in 0..self.rows {
            let base = r * self.stride;
            for (wi, &word) in self.data[base..base + self.stride].iter().enumerate() {
                let mut w = word;
                while w != 0 {
                    let c = wi * 64 + w.trailing_zeros() as usize;
                    t.set(c, r, true);
                    w &= w - 1;
                }
            }
        }
        t
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let (a, b) = (a.min(b), a.max(b));
        let (head, tail) = self.data.split_at_mut(b * self.stride);
        head[a * self.stride..(a + 1) * self.stride].swap_with_slice(&mut tail[..self.stride]);
    }

    fn xor_row_into(&mut self, src: usize, dst: usize) {
        debug_assert_ne!(src, dst);
        let (lo, hi) = (src.min(dst), src.max(dst));
        let (head, tail) = self.data.split_at_mut(hi * self.stride);
        let lo_row = &head[lo * self.stride..(lo + 1) * self.stride];
        let hi_row = &mut tail[..self.stride];
        if src < dst {
            for (d, s) in hi_row.iter_mut().zip(lo_row) {
                *d ^= s;
            }
        } else {
            // dst is the low row: xor the high row into the low one.
            let lo_row = &mut head[lo * self.stride..(lo + 1) * self.stride];
            for (d, s) in lo_row.iter_mut().zip(tail[..self.stride].iter()) {
                *d ^= s;
            }
        }
    }

    /// Row echelon form in place, pivots chosen left to right with row
    /// swaps only. Returns the pivot column per eliminated row. With
    /// `reduced` set, pivot columns are cleared above as well.
    fn echelon(&mut self, reduced: bool) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0usize;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let mut pivot = None;
            for i in r..self.rows {
                if self.get(i, c) {
                    pivot = Some(i);
                    break;
                }
            }
            let Some(p) = pivot else { continue };
            self.swap_rows(r, p);
            let lo = if reduced { 0 } else { r + 1 };
            for i in lo..self.rows {
                if i != r && self.get(i, c) {
                    self.xor_row_into(r, i);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Rank over GF(2). The elimination itself touches rows * cols words
    /// in the worst case, so the work copy is transposed first whenever
    /// that makes the row count the smaller dimension.
    pub fn rank(&self) -> usize {
        let mut work = if self.rows > self.cols {
            self.transposed()
        } else {
            self.clone()
        };
        work.echelon(false).len()
    }

    /// A basis of the right kernel: one vector per free column of the
    /// reduced echelon form, in ascending free-column order.
    pub fn kernel_basis(&self) -> Vec<BitVec> {
        let mut work = self.clone();
        let pivots = work.echelon(true);
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::with_capacity(self.cols - pivots.len());
        for (f, _) in is_pivot.iter().enumerate().filter(|(_, &p)| !p) {
            let mut v = BitVec::zeros(self.cols);
            v.set(f, true);
            for (r, &p) in pivots.iter().enumerate() {
                if work.get(r, f) {
                    v.set(p, true);
                }
            }
            basis.push(v);
        }
        basis
    }

    /// Matrix-vector product over GF(2).
    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), self.cols);
        let mut out = BitVec::zeros(self.rows);
        for r in 0..self.rows {
            let base = r * self.stride;
            let mut acc = 0u64;
            for (w, vw) in self.data[base..base + self.stride].iter().zip(&v.words) {
                acc ^= w & vw;
            }
            out.set(r, acc.count_ones() % 2 == 1);
        }
        out
    }
}

/// Matrix of multiplication by `lambda` from the graded piece of degree
/// `k` into the piece of degree `k + deg(lambda)`. Columns are indexed
/// by the source basis, rows by the target basis, both in colex order.
pub fn mult_map_matrix(lambda: &Element, k: usize) -> Result<BitMatrix> {
    let n = lambda.n();
    let d = lambda.degree();
    if k > n || k + d > n {
        return Err(Error::DegreeOutOfRange { degree: k + d, n });
    }
    let source = GradedBasisIndex::new(n, k)?;
    let target = GradedBasisIndex::new(n, k + d)?;
    check_hard_cap(target.count(), source.count(), k + d)?;
    let mut m = BitMatrix::new(target.count() as usize, source.count() as usize);
    for (col, mu) in source.iter_masks().enumerate() {
        for &s in lambda.support_masks() {
            if s & mu == 0 {
                let row = target.rank_mask(s | mu) as usize;
                m.set(row, col, true);
            }
        }
    }
    Ok(m)
}

/// Horizontal stack of the multiplication maps of all generators into
/// the graded piece of degree `k`: rows are the degree-`k` basis, and
/// each generator of degree `d_i <= k` contributes a block of columns
/// indexed by the degree-`(k - d_i)` basis. Generators of larger degree
/// contribute nothing at this degree and are skipped. The column space
/// is the degree-`k` piece of the generated ideal.
pub fn stacked_ideal_matrix(n: usize, gens: &[Element], k: usize) -> Result<BitMatrix> {
    if k > n {
        return Err(Error::DegreeOutOfRange { degree: k, n });
    }
    for g in gens {
        if g.n() != n {
            return Err(Error::DimensionMismatch {
                left: n,
                right: g.n(),
            });
        }
    }
    let target = GradedBasisIndex::new(n, k)?;
    let mut total_cols = 0u64;
    for g in gens {
        if g.degree() <= k {
            total_cols += choose64(n, k - g.degree());
        }
    }
    check_hard_cap(target.count(), total_cols, k)?;
    let mut m = BitMatrix::new(target.count() as usize, total_cols as usize);
    let mut offset = 0usize;
    for g in gens {
        let d = g.degree();
        if d > k {
            continue;
        }
        let source = GradedBasisIndex::new(n, k - d)?;
        for (j, mu) in source.iter_masks().enumerate() {
            for &s in g.support_masks() {
                if s & mu == 0 {
                    let row = target.rank_mask(s | mu) as usize;
                    m.set(row, offset + j, true);
                }
            }
        }
        offset += source.count() as usize;
    }
    Ok(m)
}
