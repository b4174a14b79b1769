use std::ops::{Add, Index, IndexMut, Mul, Sub};

use crate::error::{Error, Result};
use crate::scalar::{cr, is_finite, Cplx, Real};

use super::{check_dims, digits, flat_index, ComplexVector};

/// Dense complex matrix in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix<T: Real> {
    rows: usize,
    cols: usize,
    data: Vec<Cplx<T>>,
}

impl<T: Real> ComplexMatrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<Cplx<T>>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch("matrix dimensions must be positive".into()));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if !data.iter().all(is_finite) {
            return Err(Error::NonFinite("matrix"));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<Cplx<T>>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::new(r, c, rows.concat())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Cplx<T>) -> Self {
        assert!(rows > 0 && cols > 0);
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| cr(T::zero()))
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { cr(T::one()) } else { cr(T::zero()) })
    }

    pub fn from_real_diagonal(diag: &[T]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| if i == j { cr(diag[i]) } else { cr(T::zero()) })
    }

    /// Outer product |a⟩⟨b|.
    pub fn outer(a: &ComplexVector<T>, b: &ComplexVector<T>) -> Self {
        Self::from_fn(a.dim(), b.dim(), |i, j| a[i] * b[j].conj())
    }

    /// Projector |v⟩⟨v|.
    pub fn projector(v: &ComplexVector<T>) -> Self {
        Self::outer(v, v)
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[ComplexVector<T>]) -> Result<Self> {
        let Some(n) = cols.first().map(ComplexVector::dim) else {
            return Err(Error::DimensionMismatch("no columns".into()));
        };
        if cols.iter().any(|v| v.dim() != n) {
            return Err(Error::DimensionMismatch("columns of unequal length".into()));
        }
        Ok(Self::from_fn(n, cols.len(), |i, j| cols[j][i]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Cplx<T>] {
        &self.data
    }

    pub fn column(&self, j: usize) -> ComplexVector<T> {
        ComplexVector::new((0..self.rows).map(|i| self[(i, j)]).collect())
            .expect("column of a valid matrix")
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: Cplx<T>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn trace(&self) -> Cplx<T> {
        (0..self.rows.min(self.cols)).fold(cr(T::zero()), |acc, i| acc + self[(i, i)])
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    /// Frobenius norm of `self - other`.
    pub fn distance(&self, other: &Self) -> T {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<T>()
            .sqrt()
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] = out.data[i * rhs.cols + j] + a * rhs[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &ComplexVector<T>) -> Result<ComplexVector<T>> {
        if self.cols != v.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix applied to vector of dim {}",
                self.rows,
                self.cols,
                v.dim()
            )));
        }
        let out = (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v.iter())
                    .fold(cr(T::zero()), |acc, (a, b)| acc + a * b)
            })
            .collect();
        ComplexVector::new(out)
    }

    /// ⟨a|self|b⟩.
    pub fn sandwich(&self, a: &ComplexVector<T>, b: &ComplexVector<T>) -> Result<Cplx<T>> {
        Ok(a.inner(&self.apply(b)?))
    }

    /// Kronecker product; block `(i, j)` of the result is `self[i, j] * other`.
    pub fn tensor(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        Self::from_fn(rows, cols, |i, j| {
            self[(i / other.rows, j / other.cols)] * other[(i % other.rows, j % other.cols)]
        })
    }

    /// Traces out every factor not listed in `keep`.
    ///
    /// `dims` lists the factor dimensions, leftmost factor first. The kept
    /// factors appear in the result in ascending index order.
    pub fn partial_trace(&self, dims: &[usize], keep: &[usize]) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("partial trace of a non-square matrix".into()));
        }
        check_dims(dims, self.rows)?;
        let kept = normalize_subset(keep, dims.len())?;
        let traced: Vec<usize> = (0..dims.len()).filter(|i| !kept.contains(i)).collect();
        let kept_dims: Vec<usize> = kept.iter().map(|&i| dims[i]).collect();
        let traced_dims: Vec<usize> = traced.iter().map(|&i| dims[i]).collect();
        let n_keep: usize = kept_dims.iter().product();
        let n_trace: usize = traced_dims.iter().product();

        let full_index = |keep_idx: usize, trace_idx: usize| {
            let kd = digits(keep_idx, &kept_dims);
            let td = digits(trace_idx, &traced_dims);
            let mut all = vec![0; dims.len()];
            for (k, &f) in kept.iter().enumerate() {
                all[f] = kd[k];
            }
            for (k, &f) in traced.iter().enumerate() {
                all[f] = td[k];
            }
            flat_index(&all, dims)
        };

        let mut out = Self::zeros(n_keep, n_keep);
        for t in 0..n_trace {
            let idx: Vec<usize> = (0..n_keep).map(|k| full_index(k, t)).collect();
            for (i, &fi) in idx.iter().enumerate() {
                for (j, &fj) in idx.iter().enumerate() {
                    out.data[i * n_keep + j] = out.data[i * n_keep + j] + self[(fi, fj)];
                }
            }
        }
        Ok(out)
    }

    /// Lifts an operator acting on the `target` factors (in the listed order)
    /// to the full tensor space, acting as identity elsewhere.
    pub fn embed(&self, dims: &[usize], target: &[usize]) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("cannot embed a non-square operator".into()));
        }
        if target.is_empty() || target.iter().any(|&t| t >= dims.len()) {
            return Err(Error::DimensionMismatch(format!("bad target factors {target:?}")));
        }
        for (k, t) in target.iter().enumerate() {
            if target[..k].contains(t) {
                return Err(Error::DimensionMismatch(format!("repeated target factor {t}")));
            }
        }
        let target_dims: Vec<usize> = target.iter().map(|&t| dims[t]).collect();
        let op_dim: usize = target_dims.iter().product();
        if op_dim != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "operator of dim {} on factors of total dim {op_dim}",
                self.rows
            )));
        }
        let n: usize = dims.iter().product();
        let split = |idx: usize| {
            let d = digits(idx, dims);
            let local: Vec<usize> = target.iter().map(|&t| d[t]).collect();
            let mut rest = d;
            for &t in target {
                rest[t] = 0;
            }
            (flat_index(&local, &target_dims), rest)
        };
        let parts: Vec<(usize, Vec<usize>)> = (0..n).map(split).collect();
        Ok(Self::from_fn(n, n, |i, j| {
            let (li, ri) = &parts[i];
            let (lj, rj) = &parts[j];
            if ri == rj {
                self[(*li, *lj)]
            } else {
                cr(T::zero())
            }
        }))
    }

    pub fn hermitian_residual(&self) -> T {
        if !self.is_square() {
            return T::infinity();
        }
        self.distance(&self.adjoint())
    }

    /// `‖U†U − I‖_F`, or infinity for non-square input.
    pub fn unitary_residual(&self) -> T {
        if !self.is_square() {
            return T::infinity();
        }
        let prod = self.adjoint().matmul(self).expect("square");
        prod.distance(&Self::identity(self.rows))
    }
}

impl<T: Real> Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Cplx<T>;

    fn index(&self, (i, j): (usize, usize)) -> &Cplx<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T: Real> IndexMut<(usize, usize)> for ComplexMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Cplx<T> {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Real> Add for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn add(self, rhs: Self) -> ComplexMatrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<T: Real> Sub for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn sub(self, rhs: Self) -> ComplexMatrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<T: Real> Mul for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn mul(self, rhs: Self) -> ComplexMatrix<T> {
        self.matmul(rhs).expect("matrix product dimension mismatch")
    }
}

fn normalize_subset(keep: &[usize], n: usize) -> Result<Vec<usize>> {
    if keep.is_empty() {
        return Err(Error::DimensionMismatch("must keep at least one factor".into()));
    }
    let mut kept = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if kept.len() != keep.len() || kept.iter().any(|&k| k >= n) {
        return Err(Error::DimensionMismatch(format!("bad factor subset {keep:?} of {n}")));
    }
    Ok(kept)
}
