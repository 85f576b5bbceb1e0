use std::ops::{Index, IndexMut};

use super::Field;
use crate::error::{Error, Result};

/// Dense row-major matrix over an exact field.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = F::one();
        }
        m
    }

    /// Builds from rows; all rows must share one length. `cols` covers the
    /// zero-row case.
    pub fn from_rows(rows: Vec<Vec<F>>, cols: usize) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, got: r.len() });
            }
            data.extend(r);
        }
        Ok(Matrix { rows: n, cols, data })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<F>], rows: usize) -> Result<Self> {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            if c.len() != rows {
                return Err(Error::DimensionMismatch { expected: rows, got: c.len() });
            }
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[F]) -> Result<Vec<F>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, got: v.len() });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(F::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect())
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Fraction-free (Bareiss) forward elimination. Returns the echelon form,
    /// pivot columns, and the number of row swaps performed.
    fn bareiss(&self) -> (Self, Vec<usize>, usize) {
        let mut a = self.clone();
        let mut prev = F::one();
        let mut pivots = Vec::new();
        let mut swaps = 0;
        let mut r = 0;
        for c in 0..a.cols {
            if r == a.rows {
                break;
            }
            let Some(p) = (r..a.rows).find(|&i| !a[(i, c)].is_zero()) else {
                continue;
            };
            if p != r {
                a.swap_rows(p, r);
                swaps += 1;
            }
            let piv = a[(r, c)].clone();
            for i in r + 1..a.rows {
                let f = a[(i, c)].clone();
                let f_zero = f.is_zero();
                for j in c + 1..a.cols {
                    let x_zero = a[(i, j)].is_zero();
                    let y_zero = a[(r, j)].is_zero();
                    if x_zero && (f_zero || y_zero) {
                        continue;
                    }
                    let mut v = if x_zero { F::zero() } else { piv.clone() * a[(i, j)].clone() };
                    if !f_zero && !y_zero {
                        v = v - f.clone() * a[(r, j)].clone();
                    }
                    a[(i, j)] = v / prev.clone();
                }
                a[(i, c)] = F::zero();
            }
            prev = piv;
            pivots.push(c);
            r += 1;
        }
        (a, pivots, swaps)
    }

    /// Rank by forward elimination, choosing the sparsest available pivot
    /// row. Bareiss minors grow like d^k on the structured class matrices,
    /// while ordinary elimination keeps entries small there.
    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        let mut r = 0;
        for c in 0..a.cols {
            if r == a.rows {
                break;
            }
            let weight = |a: &Self, i: usize| a.row(i)[c..].iter().filter(|x| !x.is_zero()).count();
            let Some(p) = (r..a.rows).filter(|&i| !a[(i, c)].is_zero()).min_by_key(|&i| weight(&a, i))
            else {
                continue;
            };
            a.swap_rows(p, r);
            let piv = a[(r, c)].clone();
            let support: Vec<usize> = (c + 1..a.cols).filter(|&j| !a[(r, j)].is_zero()).collect();
            for i in r + 1..a.rows {
                if a[(i, c)].is_zero() {
                    continue;
                }
                let f = a[(i, c)].clone() / piv.clone();
                for &j in &support {
                    let v = a[(i, j)].clone() - f.clone() * a[(r, j)].clone();
                    a[(i, j)] = v;
                }
                a[(i, c)] = F::zero();
            }
            r += 1;
        }
        r
    }

    /// Rank from the fraction-free echelon form.
    pub fn rank_bareiss(&self) -> usize {
        self.bareiss().1.len()
    }

    pub fn determinant(&self) -> Result<F> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch { expected: self.rows, got: self.cols });
        }
        if self.rows == 0 {
            return Ok(F::one());
        }
        let (a, pivots, swaps) = self.bareiss();
        if pivots.len() < self.rows {
            return Ok(F::zero());
        }
        let d = a[(self.rows - 1, self.cols - 1)].clone();
        Ok(if swaps % 2 == 1 { -d } else { d })
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..a.cols {
            if r == a.rows {
                break;
            }
            let Some(p) = (r..a.rows).find(|&i| !a[(i, c)].is_zero()) else {
                continue;
            };
            a.swap_rows(p, r);
            let inv = F::one() / a[(r, c)].clone();
            for j in c..a.cols {
                if !a[(r, j)].is_zero() {
                    a[(r, j)] = a[(r, j)].clone() * inv.clone();
                }
            }
            for i in 0..a.rows {
                if i == r || a[(i, c)].is_zero() {
                    continue;
                }
                let f = a[(i, c)].clone();
                for j in c..a.cols {
                    if a[(r, j)].is_zero() {
                        continue;
                    }
                    let v = a[(i, j)].clone() - f.clone() * a[(r, j)].clone();
                    a[(i, j)] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }
}

impl<F> Index<(usize, usize)> for Matrix<F> {
    type Output = F;
    fn index(&self, (i, j): (usize, usize)) -> &F {
        &self.data[i * self.cols + j]
    }
}

impl<F> IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut F {
        &mut self.data[i * self.cols + j]
    }
}

pub fn rank<F: Field>(m: &Matrix<F>) -> usize {
    m.rank()
}

/// Basis of {v : m·v = 0}, one vector per free column.
pub fn kernel_basis<F: Field>(m: &Matrix<F>) -> Vec<Vec<F>> {
    let (r, pivots) = m.rref();
    let mut out = Vec::new();
    for f in (0..m.cols()).filter(|c| !pivots.contains(c)) {
        let mut v = vec![F::zero(); m.cols()];
        v[f] = F::one();
        for (k, &pc) in pivots.iter().enumerate() {
            v[pc] = -r[(k, f)].clone();
        }
        out.push(v);
    }
    out
}

/// Decides whether `v` is a combination of `vectors`; returns one coefficient
/// vector when it is.
/// `in_span` for many targets with a single elimination.
pub fn in_span_many<F: Field>(vectors: &[Vec<F>], targets: &[Vec<F>]) -> Result<Vec<Option<Vec<F>>>> {
    let Some(n) = vectors.first().or(targets.first()).map(Vec::len) else {
        return Ok(Vec::new());
    };
    for w in vectors.iter().chain(targets) {
        if w.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: w.len() });
        }
    }
    let k = vectors.len();
    let cols: Vec<Vec<F>> = vectors.iter().chain(targets).cloned().collect();
    let (r, pivots) = Matrix::from_columns(&cols, n)?.rref();
    let p = pivots.iter().take_while(|&&c| c < k).count();
    Ok((0..targets.len())
        .map(|t| {
            if (p..n).any(|row| !r[(row, k + t)].is_zero()) {
                return None;
            }
            let mut coeffs = vec![F::zero(); k];
            for (row, &pc) in pivots[..p].iter().enumerate() {
                coeffs[pc] = r[(row, k + t)].clone();
            }
            Some(coeffs)
        })
        .collect())
}

pub fn in_span<F: Field>(vectors: &[Vec<F>], v: &[F]) -> Result<Option<Vec<F>>> {
    let n = v.len();
    for w in vectors {
        if w.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: w.len() });
        }
    }
    let k = vectors.len();
    let mut aug = Matrix::zeros(n, k + 1);
    for (j, w) in vectors.iter().enumerate() {
        for i in 0..n {
            aug[(i, j)] = w[i].clone();
        }
    }
    for i in 0..n {
        aug[(i, k)] = v[i].clone();
    }
    let (r, pivots) = aug.rref();
    if pivots.last() == Some(&k) {
        return Ok(None);
    }
    let mut coeffs = vec![F::zero(); k];
    for (row, &pc) in pivots.iter().enumerate() {
        coeffs[pc] = r[(row, k)].clone();
    }
    Ok(Some(coeffs))
}
