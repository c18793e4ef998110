//! Prime field arithmetic and dense matrices over GF(p).
//!
//! Residues are stored as `u32` and every product goes through a `u64`
//! intermediate, which is exact for any modulus up to 2^31.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

const MAX_PRIME: u64 = 1 << 31;

/// A validated prime modulus `p <= 2^31`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Prime(u32);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if !(2..=MAX_PRIME).contains(&p) || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Prime(p as u32))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    /// Reduces an arbitrary integer into `[0, p)`.
    pub fn reduce(self, v: i64) -> u32 {
        v.rem_euclid(self.0 as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.0 as u64) as u32
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.0 as u64 - b as u64) % self.0 as u64) as u32
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    pub fn inv(self, a: u32) -> Result<u32> {
        if a.is_multiple_of(self.0) {
            return Err(Error::ZeroInverse);
        }
        Ok(self.pow(a, self.0 as u64 - 2))
    }

    pub fn pow(self, base: u32, mut exp: u64) -> u32 {
        let p = self.0 as u64;
        let mut acc = 1 % p;
        let mut b = base as u64 % p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * b % p;
            }
            b = b * b % p;
            exp >>= 1;
        }
        acc as u32
    }

    pub fn check(self, value: u64) -> Result<u32> {
        if value >= self.0 as u64 {
            return Err(Error::ResidueOutOfRange { value, p: self.0 });
        }
        Ok(value as u32)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// An element of GF(p).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FpScalar {
    value: u32,
    p: Prime,
}

impl FpScalar {
    pub fn new(value: u64, p: Prime) -> Result<Self> {
        Ok(FpScalar {
            value: p.check(value)?,
            p,
        })
    }

    pub fn zero(p: Prime) -> Self {
        FpScalar { value: 0, p }
    }

    pub fn one(p: Prime) -> Self {
        FpScalar { value: 1, p }
    }

    #[inline]
    pub fn value(self) -> u32 {
        self.value
    }

    #[inline]
    pub fn prime(self) -> Prime {
        self.p
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn inv(self) -> Result<Self> {
        fp_inv(self)
    }

    /// Every element of the field in increasing residue order.
    pub fn all(p: Prime) -> impl Iterator<Item = FpScalar> {
        (0..p.get()).map(move |value| FpScalar { value, p })
    }
}

/// Multiplicative inverse in GF(p).
pub fn fp_inv(a: FpScalar) -> Result<FpScalar> {
    Ok(FpScalar {
        value: a.p.inv(a.value)?,
        p: a.p,
    })
}

impl Add for FpScalar {
    type Output = FpScalar;
    fn add(self, rhs: FpScalar) -> FpScalar {
        assert_eq!(self.p, rhs.p, "scalars from different fields");
        FpScalar {
            value: self.p.add(self.value, rhs.value),
            p: self.p,
        }
    }
}

impl Sub for FpScalar {
    type Output = FpScalar;
    fn sub(self, rhs: FpScalar) -> FpScalar {
        assert_eq!(self.p, rhs.p, "scalars from different fields");
        FpScalar {
            value: self.p.sub(self.value, rhs.value),
            p: self.p,
        }
    }
}

impl Mul for FpScalar {
    type Output = FpScalar;
    fn mul(self, rhs: FpScalar) -> FpScalar {
        assert_eq!(self.p, rhs.p, "scalars from different fields");
        FpScalar {
            value: self.p.mul(self.value, rhs.value),
            p: self.p,
        }
    }
}

impl Neg for FpScalar {
    type Output = FpScalar;
    fn neg(self) -> FpScalar {
        FpScalar {
            value: self.p.neg(self.value),
            p: self.p,
        }
    }
}

impl fmt::Display for FpScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Dense row-major matrix of residues mod `p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    p: Prime,
    rows: usize,
    cols: usize,
    entries: Vec<u32>,
}

impl FpMatrix {
    pub fn new(p: Prime, rows: usize, cols: usize, entries: Vec<u32>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        for &e in &entries {
            p.check(e as u64)?;
        }
        Ok(FpMatrix {
            p,
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(p: Prime, rows: usize, cols: usize) -> Self {
        FpMatrix {
            p,
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    pub fn identity(p: Prime, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.entries[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from row slices, each of length `cols`.
    pub fn from_rows<R: AsRef<[u32]>>(p: Prime, cols: usize, rows: &[R]) -> Result<Self> {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            entries.extend_from_slice(r);
        }
        Self::new(p, rows.len(), cols, entries)
    }

    #[inline]
    pub fn prime(&self) -> Prime {
        self.p
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.entries[r * self.cols + c]
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[u32] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[u32]> {
        // chunks_exact panics on a zero chunk size
        (0..self.rows).map(move |r| self.row(r))
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &FpMatrix) -> Result<FpMatrix> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch {
                expected: self.p.get(),
                found: other.p.get(),
            });
        }
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.cols,
            });
        }
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Ok(FpMatrix {
            p: self.p,
            rows: self.rows + other.rows,
            cols: self.cols,
            entries,
        })
    }

    /// Keeps only the rows in `range`.
    pub fn row_slice(&self, range: std::ops::Range<usize>) -> FpMatrix {
        FpMatrix {
            p: self.p,
            rows: range.len(),
            cols: self.cols,
            entries: self.entries[range.start * self.cols..range.end * self.cols].to_vec(),
        }
    }

    /// Keeps only the columns in `range`.
    pub fn col_slice(&self, range: std::ops::Range<usize>) -> FpMatrix {
        let cols = range.len();
        let mut entries = Vec::with_capacity(self.rows * cols);
        for r in 0..self.rows {
            entries.extend_from_slice(&self.row(r)[range.clone()]);
        }
        FpMatrix {
            p: self.p,
            rows: self.rows,
            cols,
            entries,
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn scale_row(&mut self, r: usize, factor: u32) {
        let p = self.p;
        for e in &mut self.entries[r * self.cols..(r + 1) * self.cols] {
            *e = p.mul(*e, factor);
        }
    }

    /// row[target] -= factor * row[source]
    fn sub_row_multiple(&mut self, target: usize, source: usize, factor: u32) {
        let p = self.p;
        let cols = self.cols;
        for c in 0..cols {
            let s = self.entries[source * cols + c];
            let t = &mut self.entries[target * cols + c];
            *t = p.sub(*t, p.mul(factor, s));
        }
    }
}

impl fmt::Display for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.row_iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            write!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Reduced row echelon form with its rank and pivot columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    pub matrix: FpMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl Rref {
    /// The nonzero rows of the reduced matrix.
    pub fn basis(&self) -> FpMatrix {
        self.matrix.row_slice(0..self.rank)
    }
}

/// Gauss-Jordan elimination. Pivots are scaled to 1 and cleared above and
/// below, so the result is the unique RREF of the row space.
pub fn rref(m: &FpMatrix) -> Rref {
    let mut a = m.clone();
    let p = a.p;
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..a.cols {
        if row == a.rows {
            break;
        }
        // topmost nonzero candidate
        let Some(pivot_row) = (row..a.rows).find(|&r| a.get(r, col) != 0) else {
            continue;
        };
        a.swap_rows(row, pivot_row);
        let inv = p.inv(a.get(row, col)).expect("pivot is nonzero");
        a.scale_row(row, inv);
        for r in 0..a.rows {
            if r != row {
                let factor = a.get(r, col);
                if factor != 0 {
                    a.sub_row_multiple(r, row, factor);
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    Rref {
        matrix: a,
        rank: row,
        pivots,
    }
}

pub fn rank(m: &FpMatrix) -> usize {
    rref(m).rank
}

/// Expresses `v` in terms of the rows of an RREF basis without zero rows.
///
/// Because each basis row has a 1 in its pivot column and zeros in every
/// other pivot column, the only candidate coefficients are the entries of `v`
/// at the pivot columns; the candidate is then checked against `v`.
pub fn solve_membership(basis: &FpMatrix, v: &[u32]) -> Result<Option<Vec<u32>>> {
    if v.len() != basis.cols {
        return Err(Error::DimensionMismatch {
            expected: basis.cols,
            found: v.len(),
        });
    }
    let p = basis.p;
    for &x in v {
        p.check(x as u64)?;
    }
    let mut residual = v.to_vec();
    let mut coeffs = Vec::with_capacity(basis.rows);
    for r in 0..basis.rows {
        let row = basis.row(r);
        let Some(pivot) = row.iter().position(|&x| x != 0) else {
            // zero rows violate the precondition; they carry no information
            coeffs.push(0);
            continue;
        };
        let c = p.mul(residual[pivot], p.inv(row[pivot])?);
        if c != 0 {
            for (x, &b) in residual.iter_mut().zip(row) {
                *x = p.sub(*x, p.mul(c, b));
            }
        }
        coeffs.push(c);
    }
    if residual.iter().all(|&x| x == 0) {
        Ok(Some(coeffs))
    } else {
        Ok(None)
    }
}

/// Finds the first row that lies in the span of the rows before it and returns
/// a dependence relation `c` with `c · rows = 0`, `c[j] = 1` at that row and
/// zeros after it. Returns `None` when the rows are linearly independent.
pub fn first_dependency(m: &FpMatrix) -> Option<Vec<u32>> {
    let p = m.p;
    let n = m.rows;
    // echelon rows: (pivot column, normalized row, combination of input rows)
    let mut echelon: Vec<(usize, Vec<u32>, Vec<u32>)> = Vec::new();
    for j in 0..n {
        let mut v = m.row(j).to_vec();
        let mut combo = vec![0u32; n];
        combo[j] = 1;
        for (pivot, row, row_combo) in &echelon {
            let f = v[*pivot];
            if f != 0 {
                for (x, &b) in v.iter_mut().zip(row) {
                    *x = p.sub(*x, p.mul(f, b));
                }
                for (x, &b) in combo.iter_mut().zip(row_combo) {
                    *x = p.sub(*x, p.mul(f, b));
                }
            }
        }
        match v.iter().position(|&x| x != 0) {
            None => return Some(combo),
            Some(pivot) => {
                let inv = p.inv(v[pivot]).expect("nonzero");
                for x in v.iter_mut().chain(combo.iter_mut()) {
                    *x = p.mul(*x, inv);
                }
                echelon.push((pivot, v, combo));
            }
        }
    }
    None
}
