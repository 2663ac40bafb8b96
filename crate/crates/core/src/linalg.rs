//! Exact linear algebra over the coefficient field.
//!
//! Ranks come from fraction-free (Bareiss) elimination on denominator-cleared
//! rows; kernels, spans and quotient coordinates from reduced row echelon
//! form over the field. Both routes agree, which the tests check.

use crate::error::{Error, Result};
use crate::field::{gcd, Coeff, Poly};

pub type Vector = Vec<Coeff>;

pub fn zero_vector(n: usize) -> Vector {
    vec![Coeff::zero(); n]
}

pub fn is_zero_vector(v: &[Coeff]) -> bool {
    v.iter().all(Coeff::is_zero)
}

pub fn add_scaled(acc: &mut [Coeff], v: &[Coeff], s: &Coeff) {
    if s.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a = &*a + &(x * s);
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Coeff>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Coeff::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Coeff::one());
        }
        m
    }

    /// Builds a `rows x columns.len()` matrix whose columns are given.
    pub fn from_columns(rows: usize, columns: &[Vector]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length");
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn from_rows(cols: usize, rows: &[Vector]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "row length");
            for (j, x) in row.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows: Vec<Vector> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Coeff::from_int(x)).collect())
            .collect();
        Self::from_rows(cols, &rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Coeff {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Coeff) {
        self.data[i * self.cols + j] = x;
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn row(&self, i: usize) -> Vector {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Coeff::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.cols != rhs.rows {
            return Err(Error::Shape(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + &(a * b);
                        out.set(i, j, v);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::Shape("matrix sum".into()));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, rhs: &Matrix) -> Result<Matrix> {
        self.add(&rhs.scale(&Coeff::from_int(-1)))
    }

    pub fn scale(&self, s: &Coeff) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn apply(&self, v: &[Coeff]) -> Vector {
        assert_eq!(v.len(), self.cols, "vector length");
        let mut out = zero_vector(self.rows);
        for (j, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                let a = self.get(i, j);
                if !a.is_zero() {
                    *o = &*o + &(a * x);
                }
            }
        }
        out
    }

    /// Stacks matrices with equal column counts on top of each other.
    pub fn vstack(blocks: &[&Matrix]) -> Result<Matrix> {
        let cols = blocks.first().map_or(0, |b| b.cols);
        if blocks.iter().any(|b| b.cols != cols) {
            return Err(Error::Shape("vstack column counts".into()));
        }
        let mut data = Vec::new();
        let mut rows = 0;
        for b in blocks {
            data.extend(b.data.iter().cloned());
            rows += b.rows;
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn hstack(blocks: &[&Matrix]) -> Result<Matrix> {
        let rows = blocks.first().map_or(0, |b| b.rows);
        if blocks.iter().any(|b| b.rows != rows) {
            return Err(Error::Shape("hstack row counts".into()));
        }
        let columns: Vec<Vector> = blocks.iter().flat_map(|b| b.columns()).collect();
        Ok(Matrix::from_columns(rows, &columns))
    }

    pub fn power(&self, k: u32) -> Result<Matrix> {
        let mut acc = Matrix::identity(self.rows);
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let best = (r..m.rows)
                .filter(|&i| !m.get(i, c).is_zero())
                .min_by_key(|&i| m.get(i, c).complexity());
            let Some(p) = best else { continue };
            m.swap_rows(r, p);
            let inv = m.get(r, c).inv().expect("nonzero pivot");
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            let pivot_row = m.row(r);
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    if pivot_row[j].is_zero() {
                        continue;
                    }
                    let v = m.get(i, j) - &(&f * &pivot_row[j]);
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rank_fraction_free()
    }

    /// Rank by Bareiss elimination over the polynomial ring after clearing
    /// denominators row by row. Every division is exact.
    pub fn rank_fraction_free(&self) -> usize {
        let mut rows: Vec<Vec<Poly>> = (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let mut l = Poly::one();
                for x in &row {
                    if !x.is_zero() && !x.denominator().is_constant() {
                        let d = x.denominator();
                        let g = gcd(&l, d);
                        l = l.mul(d).div_exact(&g).expect("gcd divides");
                    }
                }
                row.iter()
                    .map(|x| {
                        x.numerator()
                            .mul(&l.div_exact(x.denominator()).expect("lcm is a multiple"))
                    })
                    .collect()
            })
            .collect();
        let (nr, nc) = (self.rows, self.cols);
        let mut prev = Poly::one();
        let mut r = 0;
        for c in 0..nc {
            if r == nr {
                break;
            }
            let Some(p) = (r..nr)
                .filter(|&i| !rows[i][c].is_zero())
                .min_by_key(|&i| rows[i][c].num_terms())
            else {
                continue;
            };
            rows.swap(r, p);
            let pivot = rows[r][c].clone();
            for i in r + 1..nr {
                let f = rows[i][c].clone();
                for j in c + 1..nc {
                    let v = pivot.mul(&rows[i][j]).sub(&f.mul(&rows[r][j]));
                    rows[i][j] = v.div_exact(&prev).expect("Bareiss division is exact");
                }
                rows[i][c] = Poly::zero();
            }
            prev = pivot;
            r += 1;
        }
        r
    }

    /// Basis of the null space, one vector per free column.
    pub fn kernel(&self) -> Vec<Vector> {
        let (red, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = zero_vector(self.cols);
                v[f] = Coeff::one();
                for (r, &pc) in pivots.iter().enumerate() {
                    let x = red.get(r, f);
                    if !x.is_zero() {
                        v[pc] = -x;
                    }
                }
                v
            })
            .collect()
    }

    /// Independent columns of `self` spanning its image (pivot columns).
    pub fn column_space(&self) -> Vec<Vector> {
        let (_, pivots) = self.rref();
        pivots.iter().map(|&j| self.column(j)).collect()
    }

    /// Some `x` with `self * x = b`, if one exists.
    pub fn solve(&self, b: &[Coeff]) -> Option<Vector> {
        assert_eq!(b.len(), self.rows, "rhs length");
        let aug = Matrix::hstack(&[self, &Matrix::from_columns(self.rows, &[b.to_vec()])])
            .expect("same row count");
        let (red, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = zero_vector(self.cols);
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = red.get(r, self.cols).clone();
        }
        Some(x)
    }
}

/// Subspace of `K^n` with an independent basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Span {
    ambient: usize,
    basis: Vec<Vector>,
}

impl Span {
    pub fn zero(ambient: usize) -> Self {
        Span {
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Self::from_basis_unchecked(ambient, Matrix::identity(ambient).columns())
    }

    /// Keeps the first maximal independent subfamily of `vectors`.
    pub fn new(ambient: usize, vectors: Vec<Vector>) -> Self {
        if vectors.is_empty() {
            return Self::zero(ambient);
        }
        let m = Matrix::from_columns(ambient, &vectors);
        let (_, pivots) = m.rref();
        let basis = pivots.iter().map(|&j| vectors[j].clone()).collect();
        Span { ambient, basis }
    }

    fn from_basis_unchecked(ambient: usize, basis: Vec<Vector>) -> Self {
        Span { ambient, basis }
    }

    pub fn kernel_of(m: &Matrix) -> Self {
        Self::from_basis_unchecked(m.cols(), m.kernel())
    }

    pub fn image_of(m: &Matrix) -> Self {
        Self::from_basis_unchecked(m.rows(), m.column_space())
    }

    /// Image of this span under `m`.
    pub fn map(&self, m: &Matrix) -> Self {
        Self::new(m.rows(), self.basis.iter().map(|v| m.apply(v)).collect())
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn matrix(&self) -> Matrix {
        Matrix::from_columns(self.ambient, &self.basis)
    }

    pub fn contains(&self, v: &[Coeff]) -> bool {
        if is_zero_vector(v) {
            return true;
        }
        if self.basis.is_empty() {
            return false;
        }
        self.matrix().solve(v).is_some()
    }

    pub fn contains_span(&self, other: &Span) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn same_as(&self, other: &Span) -> bool {
        self.dim() == other.dim() && self.contains_span(other)
    }

    pub fn sum(&self, other: &Span) -> Span {
        let mut v = self.basis.clone();
        v.extend(other.basis.iter().cloned());
        Span::new(self.ambient, v)
    }

    pub fn intersect(&self, other: &Span) -> Span {
        if self.basis.is_empty() || other.basis.is_empty() {
            return Span::zero(self.ambient);
        }
        let a = self.matrix();
        let b = other.matrix().scale(&Coeff::from_int(-1));
        let k = Matrix::hstack(&[&a, &b]).expect("same ambient").kernel();
        let vectors = k
            .into_iter()
            .map(|x| a.apply(&x[..self.dim()]))
            .collect();
        Span::new(self.ambient, vectors)
    }

    /// Coordinates of `v` in this basis.
    pub fn coordinates(&self, v: &[Coeff]) -> Option<Vector> {
        if self.basis.is_empty() {
            return is_zero_vector(v).then(Vec::new);
        }
        self.matrix().solve(v)
    }
}

/// `numerator / denominator` with echelon representatives for the quotient.
#[derive(Clone, Debug)]
pub struct Quotient {
    numerator: Span,
    denominator: Span,
    reps: Vec<Vector>,
}

impl Quotient {
    pub fn new(numerator: Span, denominator: Span) -> Result<Self> {
        if !numerator.contains_span(&denominator) {
            return Err(Error::ModelInconsistency(
                "quotient denominator is not contained in numerator".into(),
            ));
        }
        let mut cols = denominator.basis().to_vec();
        cols.extend(numerator.basis().iter().cloned());
        let reps = if cols.is_empty() {
            Vec::new()
        } else {
            let (_, pivots) = Matrix::from_columns(numerator.ambient(), &cols).rref();
            pivots
                .into_iter()
                .filter(|&j| j >= denominator.dim())
                .map(|j| cols[j].clone())
                .collect()
        };
        Ok(Quotient {
            numerator,
            denominator,
            reps,
        })
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn numerator(&self) -> &Span {
        &self.numerator
    }

    pub fn denominator(&self) -> &Span {
        &self.denominator
    }

    pub fn representatives(&self) -> &[Vector] {
        &self.reps
    }

    /// Class of `v` in representative coordinates; `None` when `v` is not
    /// in the numerator.
    pub fn class_of(&self, v: &[Coeff]) -> Option<Vector> {
        if is_zero_vector(v) {
            return Some(zero_vector(self.dim()));
        }
        let mut cols = self.denominator.basis().to_vec();
        cols.extend(self.reps.iter().cloned());
        if cols.is_empty() {
            return None;
        }
        let x = Matrix::from_columns(self.numerator.ambient(), &cols).solve(v)?;
        Some(x[self.denominator.dim()..].to_vec())
    }

    pub fn is_zero_class(&self, v: &[Coeff]) -> bool {
        self.denominator.contains(v)
    }
}
