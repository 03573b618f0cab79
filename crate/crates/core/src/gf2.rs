//! Dense GF(2) vectors and matrices packed into `u64` words.

use std::fmt;

use crate::error::Gf2Error;

const WORD: usize = 64;

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// Fixed-length bit vector. Bits beyond `len` are always zero.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector { len, words: vec![0; words_for(len)] }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Parses a string of `0`/`1` characters; the leftmost character is index 0.
    pub fn parse(s: &str) -> Result<Self, Gf2Error> {
        let mut v = Self::zeros(s.chars().count());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => v.set(i, true),
                other => return Err(Gf2Error::BadBitString(format!("unexpected character {other:?} in {s:?}"))),
            }
        }
        Ok(v)
    }

    pub fn to_bit_string(&self) -> String {
        (0..self.len).map(|i| if self.get(i) { '1' } else { '0' }).collect()
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
        debug_assert!(i < self.len, "bit index {i} out of range {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, b: bool) {
        debug_assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD);
        if b {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "xor of bit vectors with different lengths");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &BitVector) -> BitVector {
        let mut r = self.clone();
        r.xor_assign(other);
        r
    }

    pub fn and(&self, other: &BitVector) -> BitVector {
        assert_eq!(self.len, other.len);
        BitVector {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    /// Number of positions where both vectors are one.
    pub fn and_count(&self, other: &BitVector) -> usize {
        assert_eq!(self.len, other.len);
        self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones() as usize).sum()
    }

    /// Inner product over GF(2).
    #[inline]
    pub fn dot(&self, other: &BitVector) -> bool {
        self.and_count(other) % 2 == 1
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn first_one(&self) -> Option<usize> {
        for (k, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(k * WORD + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(k * WORD + t)
                }
            })
        })
    }

    pub fn concat(&self, other: &BitVector) -> BitVector {
        let mut r = BitVector::zeros(self.len + other.len);
        for i in self.iter_ones() {
            r.set(i, true);
        }
        for i in other.iter_ones() {
            r.set(self.len + i, true);
        }
        r
    }

    pub fn slice(&self, start: usize, end: usize) -> BitVector {
        assert!(start <= end && end <= self.len);
        let mut r = BitVector::zeros(end - start);
        for i in self.iter_ones().filter(|&i| i >= start && i < end) {
            r.set(i - start, true);
        }
        r
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({})", self.to_bit_string())
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bit_string())
    }
}

/// Dense row-major binary matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinMatrix {
    cols: usize,
    rows: Vec<BitVector>,
}

/// Result of reducing a matrix to reduced row echelon form.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: BinMatrix,
    /// Pivot column of each nonzero row, in row order.
    pub pivots: Vec<usize>,
}

impl BinMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BinMatrix { cols, rows: vec![BitVector::zeros(cols); rows] }
    }

    pub fn identity(n: usize) -> Self {
        BinMatrix { cols: n, rows: (0..n).map(|i| BitVector::unit(n, i)).collect() }
    }

    pub fn from_rows(cols: usize, rows: Vec<BitVector>) -> Result<Self, Gf2Error> {
        if let Some(r) = rows.iter().find(|r| r.len() != cols) {
            return Err(Gf2Error::DimensionMismatch(format!("row of length {} in matrix with {cols} columns", r.len())));
        }
        Ok(BinMatrix { cols, rows })
    }

    /// Builds a matrix from `0`/`1` row strings.
    pub fn parse_rows<S: AsRef<str>>(rows: &[S]) -> Result<Self, Gf2Error> {
        let parsed = rows.iter().map(|s| BitVector::parse(s.as_ref())).collect::<Result<Vec<_>, _>>()?;
        let cols = parsed.first().map_or(0, |r| r.len());
        Self::from_rows(cols, parsed)
    }

    pub fn to_row_strings(&self) -> Vec<String> {
        self.rows.iter().map(|r| r.to_bit_string()).collect()
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if f(i, j) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    #[inline]
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.nrows() == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, b: bool) {
        self.rows[i].set(j, b)
    }

    pub fn row(&self, i: usize) -> &BitVector {
        &self.rows[i]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut BitVector {
        &mut self.rows[i]
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<BitVector> {
        self.rows
    }

    pub fn column(&self, j: usize) -> BitVector {
        let mut c = BitVector::zeros(self.nrows());
        for (i, r) in self.rows.iter().enumerate() {
            if r.get(j) {
                c.set(i, true);
            }
        }
        c
    }

    /// `row[dst] ^= row[src]`.
    pub fn add_row(&mut self, src: usize, dst: usize) {
        assert_ne!(src, dst);
        let s = self.rows[src].clone();
        self.rows[dst].xor_assign(&s);
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        self.rows.swap(a, b);
    }

    /// `col[dst] ^= col[src]`.
    pub fn add_col(&mut self, src: usize, dst: usize) {
        for r in &mut self.rows {
            if r.get(src) {
                r.flip(dst);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        for r in &mut self.rows {
            let (x, y) = (r.get(a), r.get(b));
            r.set(a, y);
            r.set(b, x);
        }
    }

    pub fn transpose(&self) -> BinMatrix {
        let mut t = BinMatrix::zeros(self.cols, self.nrows());
        for (i, r) in self.rows.iter().enumerate() {
            for j in r.iter_ones() {
                t.set(j, i, true);
            }
        }
        t
    }

    pub fn mul(&self, other: &BinMatrix) -> Result<BinMatrix, Gf2Error> {
        if self.cols != other.nrows() {
            return Err(Gf2Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.nrows(),
                self.cols,
                other.nrows(),
                other.cols
            )));
        }
        let mut out = BinMatrix::zeros(self.nrows(), other.cols);
        for (i, r) in self.rows.iter().enumerate() {
            for k in r.iter_ones() {
                out.rows[i].xor_assign(&other.rows[k]);
            }
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn left_mul_vec(&self, v: &BitVector) -> BitVector {
        assert_eq!(v.len(), self.nrows());
        let mut out = BitVector::zeros(self.cols);
        for k in v.iter_ones() {
            out.xor_assign(&self.rows[k]);
        }
        out
    }

    /// Matrix times column vector.
    pub fn mul_vec(&self, v: &BitVector) -> BitVector {
        assert_eq!(v.len(), self.cols);
        BitVector::from_bools(&self.rows.iter().map(|r| r.dot(v)).collect::<Vec<_>>())
    }

    pub fn add(&self, other: &BinMatrix) -> Result<BinMatrix, Gf2Error> {
        if self.nrows() != other.nrows() || self.cols != other.cols {
            return Err(Gf2Error::DimensionMismatch("matrix sum".into()));
        }
        Ok(BinMatrix { cols: self.cols, rows: self.rows.iter().zip(&other.rows).map(|(a, b)| a.xor(b)).collect() })
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && self.rows.iter().enumerate().all(|(i, r)| r.count_ones() == 1 && r.get(i))
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && *self == self.transpose()
    }

    pub fn is_upper_unitriangular(&self) -> bool {
        self.is_square()
            && self.rows.iter().enumerate().all(|(i, r)| r.get(i) && r.iter_ones().all(|j| j >= i))
    }

    pub fn is_lower_unitriangular(&self) -> bool {
        self.is_square()
            && self.rows.iter().enumerate().all(|(i, r)| r.get(i) && r.iter_ones().all(|j| j <= i))
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &BinMatrix) -> Result<BinMatrix, Gf2Error> {
        if self.nrows() != other.nrows() {
            return Err(Gf2Error::DimensionMismatch("hstack".into()));
        }
        Ok(BinMatrix {
            cols: self.cols + other.cols,
            rows: self.rows.iter().zip(&other.rows).map(|(a, b)| a.concat(b)).collect(),
        })
    }

    /// Vertical concatenation.
    pub fn vstack(&self, other: &BinMatrix) -> Result<BinMatrix, Gf2Error> {
        if self.cols != other.cols {
            return Err(Gf2Error::DimensionMismatch("vstack".into()));
        }
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Ok(BinMatrix { cols: self.cols, rows })
    }

    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> BinMatrix {
        BinMatrix { cols: c1 - c0, rows: self.rows[r0..r1].iter().map(|r| r.slice(c0, c1)).collect() }
    }

    /// Reduced row echelon form by Gauss-Jordan elimination.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let pivots = m.rref_in_place(|_, _| {});
        Rref { matrix: m, pivots }
    }

    /// Reduces in place, reporting each row operation as it is applied.
    pub(crate) fn rref_in_place(&mut self, mut on_op: impl FnMut(RowOp, &mut Self)) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.nrows() {
                break;
            }
            let Some(p) = (r..self.nrows()).find(|&i| self.rows[i].get(c)) else { continue };
            if p != r {
                self.rows.swap(p, r);
                on_op(RowOp::Swap(p, r), self);
            }
            for i in 0..self.nrows() {
                if i != r && self.rows[i].get(c) {
                    let s = self.rows[r].clone();
                    self.rows[i].xor_assign(&s);
                    on_op(RowOp::Add { src: r, dst: i }, self);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Inverse of a square matrix. On failure reports the first row that is
    /// dependent on the rows above it.
    pub fn inverse(&self) -> Result<BinMatrix, Gf2Error> {
        if !self.is_square() {
            return Err(Gf2Error::DimensionMismatch(format!("inverse of {}x{} matrix", self.nrows(), self.cols)));
        }
        let n = self.cols;
        let mut aug = self.hstack(&BinMatrix::identity(n))?;
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| aug.rows[i].get(c)) else {
                return Err(Gf2Error::Singular { row: self.first_dependent_row() });
            };
            aug.rows.swap(p, c);
            for i in 0..n {
                if i != c && aug.rows[i].get(c) {
                    let s = aug.rows[c].clone();
                    aug.rows[i].xor_assign(&s);
                }
            }
        }
        Ok(aug.submatrix(0, n, n, 2 * n))
    }

    fn first_dependent_row(&self) -> usize {
        let mut basis: Vec<BitVector> = Vec::new();
        let mut pivots: Vec<usize> = Vec::new();
        for (i, r) in self.rows.iter().enumerate() {
            let mut v = r.clone();
            for (b, &p) in basis.iter().zip(&pivots) {
                if v.get(p) {
                    v.xor_assign(b);
                }
            }
            match v.first_one() {
                None => return i,
                Some(p) => {
                    basis.push(v);
                    pivots.push(p);
                }
            }
        }
        self.nrows()
    }

    /// Solves `self · x = b` for a column vector `x`. Free variables are set to
    /// zero, so the result is the lexicographically smallest particular solution
    /// in back-substitution order. Returns `None` when the system is inconsistent.
    pub fn solve(&self, b: &BitVector) -> Option<BitVector> {
        assert_eq!(b.len(), self.nrows());
        let mut aug = self.clone();
        let mut rhs = b.clone();
        let pivots = aug.rref_in_place(|op, _| match op {
            RowOp::Swap(p, r) => {
                let (x, y) = (rhs.get(p), rhs.get(r));
                rhs.set(p, y);
                rhs.set(r, x);
            }
            RowOp::Add { src, dst } => {
                if rhs.get(src) {
                    rhs.flip(dst);
                }
            }
        });
        if (pivots.len()..self.nrows()).any(|i| rhs.get(i)) {
            return None;
        }
        let mut x = BitVector::zeros(self.cols);
        for (i, &c) in pivots.iter().enumerate() {
            x.set(c, rhs.get(i));
        }
        Some(x)
    }

    /// Factorization `self = P · L · U` with `L` lower and `U` upper unitriangular.
    pub fn plu(&self) -> Result<(Permutation, BinMatrix, BinMatrix), Gf2Error> {
        if !self.is_square() {
            return Err(Gf2Error::DimensionMismatch("plu of non-square matrix".into()));
        }
        let n = self.cols;
        let mut w = self.clone();
        let mut l = BinMatrix::zeros(n, n);
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| w.get(i, k)) else {
                return Err(Gf2Error::Singular { row: self.first_dependent_row() });
            };
            if p != k {
                w.rows.swap(p, k);
                l.rows.swap(p, k);
                perm.swap(p, k);
            }
            for i in k + 1..n {
                if w.get(i, k) {
                    w.add_row(k, i);
                    l.set(i, k, true);
                }
            }
        }
        for i in 0..n {
            l.set(i, i, true);
        }
        // rows of w are the rows of A indexed by perm, so A = P(perm)^{-1} L U
        Ok((Permutation::from_vec(perm).expect("valid permutation").inverse(), l, w))
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) enum RowOp {
    Swap(usize, usize),
    Add { src: usize, dst: usize },
}

impl fmt::Debug for BinMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BinMatrix {}x{} [", self.nrows(), self.cols)?;
        for r in &self.rows {
            writeln!(f, "  {}", r.to_bit_string())?;
        }
        write!(f, "]")
    }
}

/// Permutation of `0..n`. Maps `i` to `map[i]`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { map: (0..n).collect() }
    }

    pub fn from_vec(map: Vec<usize>) -> Result<Self, Gf2Error> {
        let mut seen = vec![false; map.len()];
        for &m in &map {
            if m >= map.len() || seen[m] {
                return Err(Gf2Error::BadPermutation(format!("{map:?}")));
            }
            seen[m] = true;
        }
        Ok(Permutation { map })
    }

    /// Builds from 1-based images.
    pub fn from_one_based(map: &[usize]) -> Result<Self, Gf2Error> {
        if map.contains(&0) {
            return Err(Gf2Error::BadPermutation(format!("{map:?} is not 1-based")));
        }
        Self::from_vec(map.iter().map(|&m| m - 1).collect())
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.map.iter().map(|&m| m + 1).collect()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.map.len()];
        for (i, &m) in self.map.iter().enumerate() {
            inv[m] = i;
        }
        Permutation { map: inv }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.len(), other.len());
        Permutation { map: other.map.iter().map(|&i| self.map[i]).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &m)| i == m)
    }

    pub fn swap(n: usize, a: usize, b: usize) -> Permutation {
        let mut p = Self::identity(n);
        p.map.swap(a, b);
        p
    }

    /// Matrix with a one at `(i, map[i])` in every row.
    pub fn matrix(&self) -> BinMatrix {
        let n = self.len();
        BinMatrix::from_fn(n, n, |i, j| self.map[i] == j)
    }
}
