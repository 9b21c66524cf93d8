//! Dense linear algebra over the two-element field.

use std::fmt;

use crate::error::{Error, Result};

const WORD: usize = 64;

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// A fixed-length vector of bits.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self { len, words: vec![0; words_for(len)] }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self::zeros(len);
        for i in 0..len {
            v.set(i, true);
        }
        v
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    /// The low `len` bits of `value`, bit `i` at position `i`.
    pub fn from_u64(value: u64, len: usize) -> Self {
        assert!(len <= WORD);
        let mut v = Self::zeros(len);
        if len > 0 {
            v.words[0] = if len == WORD { value } else { value & ((1 << len) - 1) };
        }
        v
    }

    /// Packs a vector of at most 64 bits into an integer.
    pub fn to_u64(&self) -> u64 {
        assert!(self.len <= WORD, "vector of {} bits does not fit in u64", self.len);
        self.words.first().copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn xor_assign(&mut self, other: &Self) {
        assert_eq!(self.len, other.len, "length mismatch");
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

    /// Inner product.
    pub fn dot(&self, other: &Self) -> bool {
        assert_eq!(self.len, other.len, "length mismatch");
        let ones: u32 = self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones()).sum();
        ones % 2 == 1
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(|i| self.get(i))
    }

    pub fn ones_positions(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(|&i| self.get(i))
    }

    /// Keeps the listed coordinates, in the listed order.
    pub fn select(&self, positions: &[usize]) -> Self {
        let mut v = Self::zeros(positions.len());
        for (k, &p) in positions.iter().enumerate() {
            v.set(k, self.get(p));
        }
        v
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut v = Self::zeros(self.len + other.len);
        for (k, b) in self.iter().chain(other.iter()).enumerate() {
            v.set(k, b);
        }
        v
    }
}

/// Written as a string of `0`/`1` characters, position zero first.
impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl std::str::FromStr for BitVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::DimensionMismatch(format!("not a bit: {other:?}"))),
            })
            .collect::<Result<Vec<bool>>>()?;
        Ok(Self::from_bools(&bits))
    }
}

/// A row-major bit matrix. A matrix may have zero rows or zero columns.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVector>,
}

/// Row-reduced echelon form together with its pivot columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Echelon {
    pub matrix: BitMatrix,
    pub pivots: Vec<usize>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { cols, rows: vec![BitVector::zeros(cols); rows] }
    }

    pub fn identity(n: usize) -> Self {
        Self { cols: n, rows: (0..n).map(|i| BitVector::unit(n, i)).collect() }
    }

    pub fn from_rows(cols: usize, rows: Vec<BitVector>) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch(format!(
                "row of length {} in a matrix with {cols} columns",
                bad.len()
            )));
        }
        Ok(Self { cols, rows })
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &BitVector {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.rows[i].set(j, value);
    }

    pub fn push_row(&mut self, row: BitVector) {
        assert_eq!(row.len(), self.cols, "row length");
        self.rows.push(row);
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "column count");
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Self { cols: self.cols, rows }
    }

    pub fn mul_vec(&self, x: &BitVector) -> BitVector {
        assert_eq!(x.len(), self.cols, "vector length");
        let mut y = BitVector::zeros(self.rows.len());
        for (i, r) in self.rows.iter().enumerate() {
            if r.dot(x) {
                y.set(i, true);
            }
        }
        y
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows.len());
        for (i, r) in self.rows.iter().enumerate() {
            for j in r.ones_positions() {
                t.set(j, i, true);
            }
        }
        t
    }

    pub fn echelon(&self) -> Echelon {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            let Some(p) = (r..m.rows.len()).find(|&i| m.rows[i].get(c)) else {
                continue;
            };
            m.rows.swap(r, p);
            let pivot = m.rows[r].clone();
            for (i, row) in m.rows.iter_mut().enumerate() {
                if i != r && row.get(c) {
                    row.xor_assign(&pivot);
                }
            }
            pivots.push(c);
            r += 1;
            if r == m.rows.len() {
                break;
            }
        }
        m.rows.truncate(r);
        Echelon { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// A basis of `{x : self·x = 0}`, one vector per free column.
    pub fn kernel(&self) -> Vec<BitVector> {
        let Echelon { matrix, pivots } = self.echelon();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = BitVector::unit(self.cols, f);
                for (row, &p) in matrix.rows.iter().zip(&pivots) {
                    if row.get(f) {
                        v.set(p, true);
                    }
                }
                v
            })
            .collect()
    }

    /// Some `x` with `self·x = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &BitVector) -> Option<BitVector> {
        assert_eq!(b.len(), self.rows.len(), "right-hand side length");
        let mut aug = BitMatrix::zeros(self.rows.len(), self.cols + 1);
        for (i, row) in self.rows.iter().enumerate() {
            for j in row.ones_positions() {
                aug.set(i, j, true);
            }
            aug.set(i, self.cols, b.get(i));
        }
        let Echelon { matrix, pivots } = aug.echelon();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = BitVector::zeros(self.cols);
        for (row, &p) in matrix.rows.iter().zip(&pivots) {
            x.set(p, row.get(self.cols));
        }
        Some(x)
    }

    /// Keeps the listed columns, in the listed order.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        Self { cols: cols.len(), rows: self.rows.iter().map(|r| r.select(cols)).collect() }
    }

    /// Whether `v` lies in the row space.
    pub fn spans(&self, v: &BitVector) -> bool {
        self.transpose().solve(v).is_some()
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self.rows.iter().map(|r| r.to_string()).collect();
        write!(f, "BitMatrix({}x{} [{}])", self.rows.len(), self.cols, rows.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&str], cols: usize) -> BitMatrix {
        BitMatrix::from_rows(cols, rows.iter().map(|r| r.parse().unwrap()).collect()).unwrap()
    }

    #[test]
    fn vector_basics() {
        let v: BitVector = "1011".parse().unwrap();
        assert_eq!(v.count_ones(), 3);
        assert_eq!(v.to_u64(), 0b1101);
        assert_eq!(BitVector::from_u64(0b1101, 4), v);
        assert!(!v.dot(&"0011".parse().unwrap()));
        assert_eq!(v.to_string(), "1011");
        let long = BitVector::ones(130);
        assert_eq!(long.count_ones(), 130);
        assert!("10x".parse::<BitVector>().is_err());
    }

    #[test]
    fn rank_kernel_and_solve() {
        let a = m(&["110", "011", "101"], 3);
        assert_eq!(a.rank(), 2);
        let k = a.kernel();
        assert_eq!(k, vec!["111".parse().unwrap()]);
        assert!(a.mul_vec(&k[0]).is_zero());
        let b: BitVector = "110".parse().unwrap();
        let x = a.solve(&b).unwrap();
        assert_eq!(a.mul_vec(&x), b);
        assert!(a.solve(&"100".parse().unwrap()).is_none());
    }

    #[test]
    fn echelon_pivots() {
        let a = m(&["0110", "0011"], 4);
        let e = a.echelon();
        assert_eq!(e.pivots, vec![1, 2]);
        assert_eq!(e.matrix, m(&["0101", "0011"], 4));
        assert!(a.spans(&"0101".parse().unwrap()));
        assert!(!a.spans(&"1000".parse().unwrap()));
    }

    #[test]
    fn degenerate_shapes() {
        let empty = BitMatrix::zeros(0, 3);
        assert_eq!(empty.rank(), 0);
        assert_eq!(empty.kernel().len(), 3);
        let no_cols = BitMatrix::zeros(2, 0);
        assert_eq!(no_cols.kernel().len(), 0);
        assert_eq!(no_cols.mul_vec(&BitVector::zeros(0)), BitVector::zeros(2));
        assert!(BitMatrix::from_rows(2, vec![BitVector::zeros(3)]).is_err());
    }
}
