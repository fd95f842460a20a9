//! Dense matrices over finite fields and exact Gaussian elimination.

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::field::Field;
use crate::error::{Error, Result};
use crate::limits;

#[derive(Clone)]
pub struct FFMatrix {
    field: &'static Field,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl PartialEq for FFMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.rows == other.rows && self.cols == other.cols && self.data == other.data
    }
}
impl Eq for FFMatrix {}

impl fmt::Debug for FFMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}x{} over {:?}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows.min(24) {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl FFMatrix {
    pub fn zeros(field: &'static Field, rows: usize, cols: usize) -> Self {
        FFMatrix { field, rows, cols, data: vec![0; rows * cols] }
    }

    /// Like [`FFMatrix::zeros`] but refuses shapes beyond the dimension cap.
    pub fn zeros_capped(field: &'static Field, rows: usize, cols: usize) -> Result<Self> {
        limits::check_dim("matrix rows", rows)?;
        limits::check_dim("matrix cols", cols)?;
        Ok(Self::zeros(field, rows, cols))
    }

    pub fn identity(field: &'static Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_vec(field: &'static Field, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        assert_eq!(data.len(), rows * cols, "entries length must be rows x cols");
        debug_assert!(data.iter().all(|&x| x < field.order()));
        FFMatrix { field, rows, cols, data }
    }

    pub fn from_rows(field: &'static Field, rows: &[Vec<u32>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row.iter().map(|&x| x % field.order()));
        }
        FFMatrix { field, rows: r, cols: c, data }
    }

    /// Matrix with integer entries reduced into the prime subfield.
    pub fn from_i64_rows(field: &'static Field, rows: &[Vec<i64>]) -> Self {
        let conv: Vec<Vec<u32>> = rows.iter().map(|r| r.iter().map(|&x| field.from_i64(x)).collect()).collect();
        Self::from_rows(field, &conv)
    }

    /// Column vector.
    pub fn column(field: &'static Field, entries: Vec<u32>) -> Self {
        let n = entries.len();
        Self::from_vec(field, n, 1, entries)
    }

    #[inline]
    pub fn field(&self) -> &'static Field {
        self.field
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
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }
    #[inline]
    pub fn data(&self) -> &[u32] {
        &self.data
    }
    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }
    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v;
    }
    #[inline]
    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }
    #[inline]
    pub fn row_mut(&mut self, r: usize) -> &mut [u32] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| self.row(r).iter().enumerate().all(|(c, &x)| x == u32::from(r == c)))
    }

    pub fn nonzero_count(&self) -> usize {
        self.data.iter().filter(|&&x| x != 0).count()
    }

    pub fn same_field(&self, other: &FFMatrix) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                p1: self.field.characteristic(),
                e1: self.field.degree(),
                p2: other.field.characteristic(),
                e2: other.field.degree(),
            });
        }
        Ok(())
    }

    /// Product `self * rhs`; skips zero entries of `self`, so sparse left
    /// factors are cheap.
    pub fn mul(&self, rhs: &FFMatrix) -> FFMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        assert!(self.field == rhs.field, "matrix product field mismatch");
        let f = self.field;
        let mut out = FFMatrix::zeros(f, self.rows, rhs.cols);
        if rhs.cols == 0 {
            return out;
        }
        for i in 0..self.rows {
            let (lo, hi) = (i * rhs.cols, (i + 1) * rhs.cols);
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a != 0 {
                    f.axpy(&mut out.data[lo..hi], rhs.row(k), a);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(self.cols, v.len());
        let f = self.field;
        (0..self.rows)
            .map(|i| {
                self.row(i).iter().zip(v).fold(0, |acc, (&a, &b)| if a == 0 || b == 0 { acc } else { f.add(acc, f.mul(a, b)) })
            })
            .collect()
    }

    pub fn add(&self, rhs: &FFMatrix) -> FFMatrix {
        assert_eq!(self.shape(), rhs.shape(), "matrix sum shape mismatch");
        let f = self.field;
        let data = self.data.iter().zip(&rhs.data).map(|(&a, &b)| f.add(a, b)).collect();
        FFMatrix { field: f, rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, rhs: &FFMatrix) -> FFMatrix {
        assert_eq!(self.shape(), rhs.shape(), "matrix difference shape mismatch");
        let f = self.field;
        let data = self.data.iter().zip(&rhs.data).map(|(&a, &b)| f.sub(a, b)).collect();
        FFMatrix { field: f, rows: self.rows, cols: self.cols, data }
    }

    pub fn add_assign(&mut self, rhs: &FFMatrix) {
        assert_eq!(self.shape(), rhs.shape());
        let f = self.field;
        f.axpy(&mut self.data, &rhs.data, 1);
    }

    /// `self += c * rhs`
    pub fn axpy(&mut self, c: u32, rhs: &FFMatrix) {
        assert_eq!(self.shape(), rhs.shape());
        let f = self.field;
        f.axpy(&mut self.data, &rhs.data, c);
    }

    pub fn scale(&self, c: u32) -> FFMatrix {
        let mut out = self.clone();
        let f = self.field;
        f.scale_slice(&mut out.data, c);
        out
    }

    pub fn neg(&self) -> FFMatrix {
        let f = self.field;
        FFMatrix { field: f, rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| f.neg(a)).collect() }
    }

    pub fn transpose(&self) -> FFMatrix {
        let mut out = FFMatrix::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        out
    }

    /// Kronecker product, row index `i * rhs.rows + k`, column `j * rhs.cols + l`.
    pub fn kron(&self, rhs: &FFMatrix) -> FFMatrix {
        assert!(self.field == rhs.field);
        let f = self.field;
        let (r, c) = (self.rows * rhs.rows, self.cols * rhs.cols);
        let mut out = FFMatrix::zeros(f, r, c);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a == 0 {
                    continue;
                }
                for k in 0..rhs.rows {
                    let base = (i * rhs.rows + k) * c + j * rhs.cols;
                    f.axpy(&mut out.data[base..base + rhs.cols], rhs.row(k), a);
                }
            }
        }
        out
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> FFMatrix {
        let mut out = FFMatrix::zeros(self.field, rows.len(), cols.len());
        for (oi, r) in rows.enumerate() {
            out.row_mut(oi).copy_from_slice(&self.row(r)[cols.clone()]);
        }
        out
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, block: &FFMatrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for r in 0..block.rows {
            let start = (r0 + r) * self.cols + c0;
            self.data[start..start + block.cols].copy_from_slice(block.row(r));
        }
    }

    pub fn select_rows(&self, idx: &[usize]) -> FFMatrix {
        let mut out = FFMatrix::zeros(self.field, idx.len(), self.cols);
        for (o, &r) in idx.iter().enumerate() {
            out.row_mut(o).copy_from_slice(self.row(r));
        }
        out
    }

    pub fn select_cols(&self, idx: &[usize]) -> FFMatrix {
        let mut out = FFMatrix::zeros(self.field, self.rows, idx.len());
        for r in 0..self.rows {
            for (o, &c) in idx.iter().enumerate() {
                out.data[r * idx.len() + o] = self.data[r * self.cols + c];
            }
        }
        out
    }

    pub fn hstack(parts: &[&FFMatrix]) -> FFMatrix {
        let field = parts[0].field;
        let rows = parts[0].rows;
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = FFMatrix::zeros(field, rows, cols);
        let mut c0 = 0;
        for m in parts {
            assert_eq!(m.rows, rows);
            out.set_block(0, c0, m);
            c0 += m.cols;
        }
        out
    }

    pub fn vstack(parts: &[&FFMatrix]) -> FFMatrix {
        let field = parts[0].field;
        let cols = parts[0].cols;
        let mut data = Vec::new();
        let mut rows = 0;
        for m in parts {
            assert_eq!(m.cols, cols);
            data.extend_from_slice(&m.data);
            rows += m.rows;
        }
        FFMatrix { field, rows, cols, data }
    }

    /// Reinterprets entries in an extension field of the same characteristic.
    pub fn embed(&self, field: &'static Field) -> FFMatrix {
        assert_eq!(field.characteristic(), self.field.characteristic());
        assert!(self.field.is_prime_field() || self.field == field, "only base-field matrices embed");
        FFMatrix { field, rows: self.rows, cols: self.cols, data: self.data.clone() }
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let f = self.field;
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(pr) = (r..rows).find(|&i| self.data[i * cols + c] != 0) else { continue };
            if pr != r {
                for k in 0..cols {
                    self.data.swap(pr * cols + k, r * cols + k);
                }
            }
            let inv = f.inv(self.data[r * cols + c]).unwrap();
            f.scale_slice(&mut self.data[r * cols..(r + 1) * cols], inv);
            let pivot_row = self.data[r * cols..(r + 1) * cols].to_vec();
            for i in 0..rows {
                if i == r {
                    continue;
                }
                let a = self.data[i * cols + c];
                if a != 0 {
                    f.axpy(&mut self.data[i * cols..(i + 1) * cols], &pivot_row, f.neg(a));
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rref(&self) -> (FFMatrix, Vec<usize>) {
        let mut m = self.clone();
        let piv = m.rref_in_place();
        (m, piv)
    }

    pub fn rank(&self) -> usize {
        if self.rows <= self.cols {
            self.rref().1.len()
        } else {
            self.transpose().rref().1.len()
        }
    }

    /// Right kernel as the columns of a `cols x nullity` matrix (canonical RREF basis).
    pub fn kernel(&self) -> FFMatrix {
        let (r, piv) = self.rref();
        kernel_from_rref(&r, &piv)
    }

    pub fn inverse(&self) -> Option<FFMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let aug = FFMatrix::hstack(&[self, &FFMatrix::identity(self.field, n)]);
        let (r, piv) = aug.rref();
        if piv.len() < n || piv[n - 1] != n - 1 {
            return None;
        }
        Some(r.submatrix(0..n, n..2 * n))
    }

    /// Solves `self * X = rhs` exactly.
    pub fn solve(&self, rhs: &FFMatrix) -> Result<Solution> {
        solve_linear(self, rhs)
    }
}

fn kernel_from_rref(r: &FFMatrix, piv: &[usize]) -> FFMatrix {
    let f = r.field;
    let cols = r.cols;
    let mut is_piv = vec![false; cols];
    for &c in piv {
        is_piv[c] = true;
    }
    let free: Vec<usize> = (0..cols).filter(|&c| !is_piv[c]).collect();
    let mut k = FFMatrix::zeros(f, cols, free.len());
    for (j, &fc) in free.iter().enumerate() {
        k.set(fc, j, 1);
        for (i, &pc) in piv.iter().enumerate() {
            let a = r.get(i, fc);
            if a != 0 {
                k.set(pc, j, f.neg(a));
            }
        }
    }
    k
}

/// Outcome of [`solve_linear`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub rank: usize,
    /// `None` when the system is inconsistent.
    pub particular: Option<FFMatrix>,
    /// Columns span the right kernel of the coefficient matrix.
    pub kernel: FFMatrix,
}

impl Solution {
    pub fn is_consistent(&self) -> bool {
        self.particular.is_some()
    }
}

/// Exact solution of `a * X = b` over a finite field: particular solution (if
/// any), kernel basis and rank.
pub fn solve_linear(a: &FFMatrix, b: &FFMatrix) -> Result<Solution> {
    a.same_field(b)?;
    if a.rows != b.rows {
        return Err(Error::ShapeMismatch(format!("A is {}x{}, b has {} rows", a.rows, a.cols, b.rows)));
    }
    let n = a.cols;
    let aug = FFMatrix::hstack(&[a, b]);
    let (r, piv) = aug.rref();
    let rank = piv.iter().take_while(|&&c| c < n).count();
    let consistent = piv.len() == rank;
    let kernel = {
        let coeff = r.submatrix(0..r.rows, 0..n);
        kernel_from_rref(&coeff, &piv[..rank])
    };
    let particular = consistent.then(|| {
        let mut x = FFMatrix::zeros(a.field, n, b.cols);
        for (i, &pc) in piv[..rank].iter().enumerate() {
            for j in 0..b.cols {
                x.set(pc, j, r.get(i, n + j));
            }
        }
        x
    });
    Ok(Solution { rank, particular, kernel })
}

/// Incrementally maintained reduced row echelon basis of a row space.
#[derive(Clone, Debug)]
pub struct RowEchelon {
    field: &'static Field,
    width: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
    pivot_of_col: Vec<Option<usize>>,
}

impl RowEchelon {
    pub fn new(field: &'static Field, width: usize) -> Self {
        RowEchelon { field, width, rows: Vec::new(), pivots: Vec::new(), pivot_of_col: vec![None; width] }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.width
    }

    /// Reduces `v` against the current basis in place.
    pub fn reduce(&self, v: &mut [u32]) {
        let f = self.field;
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let a = v[pc];
            if a != 0 {
                f.axpy(v, row, f.neg(a));
            }
        }
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }

    /// Inserts `v`; returns true when the rank grew.
    pub fn insert(&mut self, mut v: Vec<u32>) -> bool {
        assert_eq!(v.len(), self.width);
        self.reduce(&mut v);
        let Some(pc) = v.iter().position(|&x| x != 0) else { return false };
        let f = self.field;
        let inv = f.inv(v[pc]).unwrap();
        f.scale_slice(&mut v, inv);
        for row in self.rows.iter_mut() {
            let a = row[pc];
            if a != 0 {
                f.axpy(row, &v, f.neg(a));
            }
        }
        self.pivot_of_col[pc] = Some(self.rows.len());
        self.rows.push(v);
        self.pivots.push(pc);
        true
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis_rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    /// Kernel of the row space viewed as a system of equations, as column vectors.
    pub fn null_space(&self) -> Vec<Vec<u32>> {
        let f = self.field;
        let mut out = Vec::new();
        for fc in 0..self.width {
            if self.pivot_of_col[fc].is_some() {
                continue;
            }
            let mut v = vec![0u32; self.width];
            v[fc] = 1;
            for (row, &pc) in self.rows.iter().zip(&self.pivots) {
                let a = row[fc];
                if a != 0 {
                    v[pc] = f.neg(a);
                }
            }
            out.push(v);
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    p: u32,
    ext_degree: u32,
    rows: usize,
    cols: usize,
    entries: Vec<Vec<u32>>,
}

impl Serialize for FFMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixRepr {
            p: self.field.characteristic(),
            ext_degree: self.field.degree(),
            rows: self.rows,
            cols: self.cols,
            entries: (0..self.rows).map(|r| self.row(r).to_vec()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FFMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = MatrixRepr::deserialize(d)?;
        let field = Field::get(repr.p, repr.ext_degree).map_err(D::Error::custom)?;
        if repr.entries.len() != repr.rows || repr.entries.iter().any(|r| r.len() != repr.cols) {
            return Err(D::Error::custom("matrix entries do not match the declared shape"));
        }
        if repr.entries.iter().flatten().any(|&x| x >= field.order()) {
            return Err(D::Error::custom("matrix entry not reduced"));
        }
        let data = repr.entries.into_iter().flatten().collect();
        Ok(FFMatrix { field, rows: repr.rows, cols: repr.cols, data })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> &'static Field {
        Field::prime(3).unwrap()
    }

    #[test]
    fn identity_system_has_unique_solution() {
        let a = FFMatrix::identity(f3(), 2);
        let b = FFMatrix::from_rows(f3(), &[vec![2], vec![1]]);
        let s = solve_linear(&a, &b).unwrap();
        assert_eq!(s.rank, 2);
        assert_eq!(s.particular.unwrap(), b);
        assert_eq!(s.kernel.cols(), 0);
    }

    #[test]
    fn zero_system_kernel_is_everything() {
        let a = FFMatrix::zeros(f3(), 2, 3);
        let b = FFMatrix::zeros(f3(), 2, 1);
        let s = solve_linear(&a, &b).unwrap();
        assert_eq!(s.rank, 0);
        assert_eq!(s.kernel.cols(), 3);
        assert!(s.is_consistent());
    }

    #[test]
    fn singular_mod_three() {
        // det = 1 - 4 = -3
        let a = FFMatrix::from_rows(f3(), &[vec![1, 2], vec![2, 1]]);
        assert_eq!(a.rank(), 1);
        let b = FFMatrix::from_rows(f3(), &[vec![1], vec![0]]);
        let s = solve_linear(&a, &b).unwrap();
        assert!(!s.is_consistent());
        assert_eq!(s.kernel.cols(), 1);
        assert!(a.mul(&s.kernel).is_zero());
    }

    #[test]
    fn mismatches_are_errors() {
        let a = FFMatrix::identity(f3(), 2);
        let b = FFMatrix::zeros(f3(), 3, 1);
        assert!(matches!(solve_linear(&a, &b), Err(Error::ShapeMismatch(_))));
        let c = FFMatrix::zeros(Field::prime(5).unwrap(), 2, 1);
        assert!(matches!(solve_linear(&a, &c), Err(Error::FieldMismatch { .. })));
    }

    #[test]
    fn inverse_round_trip() {
        let f = Field::get(3, 2).unwrap();
        let a = FFMatrix::from_rows(f, &[vec![1, 4], vec![7, 2]]);
        if let Some(inv) = a.inverse() {
            assert!(a.mul(&inv).is_identity());
        } else {
            assert!(a.rank() < 2);
        }
    }

    #[test]
    fn row_echelon_null_space() {
        let f = Field::prime(5).unwrap();
        let mut e = RowEchelon::new(f, 3);
        assert!(e.insert(vec![1, 1, 0]));
        assert!(!e.insert(vec![2, 2, 0]));
        assert!(e.insert(vec![0, 1, 1]));
        let ns = e.null_space();
        assert_eq!(ns.len(), 1);
        let v = &ns[0];
        assert_eq!(f.add(v[0], v[1]), 0);
        assert_eq!(f.add(v[1], v[2]), 0);
    }

    #[test]
    fn serde_round_trip() {
        let a = FFMatrix::from_rows(f3(), &[vec![1, 2, 0], vec![0, 1, 2]]);
        let s = serde_json::to_string(&a).unwrap();
        let b: FFMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(a, b);
        assert_eq!(s, serde_json::to_string(&b).unwrap());
    }
}
