//! Dense exact linear algebra: ranks, kernels, determinants, adjugates.
//!
//! Ranks never use thresholds. Over [`crate::field::Rationals`] elimination
//! is fraction-free (Bareiss); over prime fields it is ordinary Gaussian
//! elimination on canonical residues.

mod subspace;

use std::fmt;

use crate::error::{Error, Result};
use crate::field::Field;

pub use subspace::Subspace;

/// A dense matrix over `K`, stored row-major, with descriptive labels for
/// its row and column spaces.
#[derive(Clone)]
pub struct LinMap<K: Field> {
    field: K,
    rows: usize,
    cols: usize,
    data: Vec<K::Elem>,
    row_label: String,
    col_label: String,
}

impl<K: Field> fmt::Debug for LinMap<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "LinMap {}x{} ({} <- {}) over {}",
            self.rows,
            self.cols,
            self.row_label,
            self.col_label,
            self.field.tag()
        )?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| self.field.format(x)).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl<K: Field> PartialEq for LinMap<K> {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.data == other.data
    }
}

impl<K: Field> LinMap<K> {
    pub fn new(field: &K, rows: usize, cols: usize, data: Vec<K::Elem>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(LinMap {
            field: field.clone(),
            rows,
            cols,
            data,
            row_label: String::new(),
            col_label: String::new(),
        })
    }

    pub fn zeros(field: &K, rows: usize, cols: usize) -> Self {
        LinMap::new(field, rows, cols, vec![field.zero(); rows * cols]).expect("sized")
    }

    pub fn identity(field: &K, n: usize) -> Self {
        let mut m = LinMap::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_fn(field: &K, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> K::Elem) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        LinMap::new(field, rows, cols, data).expect("sized")
    }

    pub fn from_rows(field: &K, rows: Vec<Vec<K::Elem>>, cols: usize) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch(format!(
                "row of length {} in a matrix with {cols} columns",
                bad.len()
            )));
        }
        LinMap::new(field, n, cols, rows.into_iter().flatten().collect())
    }

    /// Integer-valued matrix, convenient in tests and constructors.
    pub fn from_i64(field: &K, rows: &[&[i64]]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&v| field.from_i64(v)).collect())
            .collect();
        LinMap::from_rows(field, rows, cols)
    }

    /// Diagonal matrix with the given entries.
    pub fn diagonal(field: &K, diag: &[K::Elem]) -> Self {
        let n = diag.len();
        LinMap::from_fn(field, n, n, |i, j| if i == j { diag[i].clone() } else { field.zero() })
    }

    /// Permutation matrix sending basis vector `e_j` to `e_{perm[j]}`.
    pub fn permutation(field: &K, perm: &[usize]) -> Result<Self> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &p in perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidArgument(format!("{perm:?} is not a permutation")));
            }
        }
        let mut m = LinMap::zeros(field, n, n);
        for (j, &i) in perm.iter().enumerate() {
            m.set(i, j, field.one());
        }
        Ok(m)
    }

    pub fn with_labels(mut self, row_label: impl Into<String>, col_label: impl Into<String>) -> Self {
        self.row_label = row_label.into();
        self.col_label = col_label.into();
        self
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row_label(&self) -> &str {
        &self.row_label
    }

    pub fn col_label(&self) -> &str {
        &self.col_label
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &K::Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: K::Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[K::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<K::Elem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[K::Elem] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<K::Elem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    pub fn transpose(&self) -> Self {
        LinMap::from_fn(&self.field, self.cols, self.rows, |i, j| self.get(j, i).clone())
            .with_labels(self.col_label.clone(), self.row_label.clone())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = LinMap::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for (l, a) in self.row(i).iter().enumerate() {
                if f.is_zero(a) {
                    continue;
                }
                let neg = f.neg(a);
                f.sub_scaled(dst, &neg, other.row(l));
            }
        }
        Ok(out.with_labels(self.row_label.clone(), other.col_label.clone()))
    }

    pub fn apply(&self, v: &[K::Elem]) -> Result<Vec<K::Elem>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} for a map with {} columns",
                v.len(),
                self.cols
            )));
        }
        let f = &self.field;
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(f.zero(), |acc, (a, b)| f.add(&acc, &f.mul(a, b)))
            })
            .collect())
    }

    fn zip_with(&self, other: &Self, op: impl Fn(&K::Elem, &K::Elem) -> K::Elem) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| op(a, b)).collect();
        Ok(LinMap { data, ..self.clone() })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| self.field.add(a, b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| self.field.sub(a, b))
    }

    pub fn scale(&self, s: &K::Elem) -> Self {
        let data = self.data.iter().map(|x| self.field.mul(s, x)).collect();
        LinMap { data, ..self.clone() }
    }

    /// Exact rank.
    pub fn rank(&self) -> usize {
        let mut rows = self.to_rows();
        self.field.echelon(&mut rows, self.cols).len()
    }

    /// Basis of `{x : Mx = 0}`; its dimension is `cols - rank`.
    pub fn kernel_basis(&self) -> Subspace<K> {
        let f = &self.field;
        let mut rows = self.to_rows();
        let pivots = f.echelon(&mut rows, self.cols);
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::with_capacity(self.cols - pivots.len());
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut x = vec![f.zero(); self.cols];
            x[free] = f.one();
            for (t, &c) in pivots.iter().enumerate().rev() {
                let row = &rows[t];
                let mut acc = f.zero();
                for j in c + 1..self.cols {
                    if !f.is_zero(&row[j]) && !f.is_zero(&x[j]) {
                        acc = f.add(&acc, &f.mul(&row[j], &x[j]));
                    }
                }
                if !f.is_zero(&acc) {
                    x[c] = f.neg(&f.div(&acc, &row[c]).expect("pivot is nonzero"));
                }
            }
            basis.push(x);
        }
        Subspace::from_independent(f, self.cols, basis, format!("ker({})", self.col_label))
    }

    fn require_square(&self) -> Result<usize> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        Ok(self.rows)
    }

    pub fn det(&self) -> Result<K::Elem> {
        let n = self.require_square()?;
        let f = &self.field;
        let mut rows = self.to_rows();
        let mut det = f.one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&i| !f.is_zero(&rows[i][col])) else {
                return Ok(f.zero());
            };
            if p != col {
                rows.swap(p, col);
                det = f.neg(&det);
            }
            det = f.mul(&det, &rows[col][col]);
            let inv = f.inv(&rows[col][col])?;
            let (head, tail) = rows.split_at_mut(col + 1);
            for row in tail.iter_mut() {
                if !f.is_zero(&row[col]) {
                    let factor = f.mul(&row[col], &inv);
                    f.sub_scaled(&mut row[col..], &factor, &head[col][col..]);
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.require_square()?;
        let f = &self.field;
        let mut rows: Vec<Vec<K::Elem>> = (0..n)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend((0..n).map(|j| if i == j { f.one() } else { f.zero() }));
                r
            })
            .collect();
        for col in 0..n {
            let p = (col..n)
                .find(|&i| !f.is_zero(&rows[i][col]))
                .ok_or_else(|| Error::Singular(format!("{n}x{n} matrix has rank < {n}")))?;
            rows.swap(p, col);
            let inv = f.inv(&rows[col][col])?;
            rows[col] = rows[col].iter().map(|x| f.mul(x, &inv)).collect();
            let pivot = rows[col].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != col && !f.is_zero(&row[col]) {
                    let factor = row[col].clone();
                    f.sub_scaled(row, &factor, &pivot);
                }
            }
        }
        let data = rows.into_iter().flat_map(|r| r.into_iter().skip(n)).collect();
        Ok(LinMap::new(f, n, n, data)?.with_labels(self.col_label.clone(), self.row_label.clone()))
    }

    /// The adjugate (transposed cofactor matrix): `M * adj(M) = det(M) * Id`.
    pub fn adjugate(&self) -> Result<Self> {
        let n = self.require_square()?;
        let f = &self.field;
        if n == 0 {
            return Ok(self.clone());
        }
        if n == 1 {
            return Ok(LinMap::identity(f, 1));
        }
        let det = self.det()?;
        if !f.is_zero(&det) {
            return Ok(self.inverse()?.scale(&det));
        }
        if self.rank() < n - 1 {
            return Ok(LinMap::zeros(f, n, n));
        }
        let mut adj = LinMap::zeros(f, n, n);
        for i in 0..n {
            for j in 0..n {
                let minor = LinMap::from_fn(f, n - 1, n - 1, |r, c| {
                    let r = if r < i { r } else { r + 1 };
                    let c = if c < j { c } else { c + 1 };
                    self.get(r, c).clone()
                });
                let d = minor.det()?;
                let cof = if (i + j) % 2 == 0 { d } else { f.neg(&d) };
                adj.set(j, i, cof);
            }
        }
        Ok(adj)
    }
}

/// Stack matrices with the same number of columns.
pub fn vstack<K: Field>(field: &K, blocks: &[&LinMap<K>]) -> Result<LinMap<K>> {
    let cols = blocks.first().map_or(0, |b| b.ncols());
    let mut rows = Vec::new();
    for b in blocks {
        if b.ncols() != cols {
            return Err(Error::DimensionMismatch("vstack with differing column counts".into()));
        }
        rows.extend(b.to_rows());
    }
    LinMap::from_rows(field, rows, cols)
}

/// Place matrices with the same number of rows side by side.
pub fn hstack<K: Field>(field: &K, blocks: &[&LinMap<K>]) -> Result<LinMap<K>> {
    let rows = blocks.first().map_or(0, |b| b.nrows());
    if blocks.iter().any(|b| b.nrows() != rows) {
        return Err(Error::DimensionMismatch("hstack with differing row counts".into()));
    }
    let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut data = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        for b in blocks {
            data.extend_from_slice(b.row(r));
        }
    }
    LinMap::new(field, rows, cols, data)
}
