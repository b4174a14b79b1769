use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::{cr, is_finite, Cplx, Real};

use super::{check_dims, digits, flat_index};

/// Dense complex column vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector<T: Real> {
    data: Vec<Cplx<T>>,
}

impl<T: Real> ComplexVector<T> {
    pub fn new(data: Vec<Cplx<T>>) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::DimensionMismatch("vector must be non-empty".into()));
        }
        if !data.iter().all(is_finite) {
            return Err(Error::NonFinite("vector"));
        }
        Ok(Self { data })
    }

    /// Builds a vector from real amplitudes.
    pub fn from_reals(values: &[T]) -> Result<Self> {
        Self::new(values.iter().map(|&x| cr(x)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "vector dimension must be positive");
        Self {
            data: vec![Cplx::new(T::zero(), T::zero()); dim],
        }
    }

    /// Standard basis vector `e_index`.
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim, "basis index {index} out of range for dim {dim}");
        let mut v = Self::zeros(dim);
        v.data[index] = cr(T::one());
        v
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn as_slice(&self) -> &[Cplx<T>] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<Cplx<T>> {
        self.data
    }

    pub fn iter(&self) -> impl Iterator<Item = &Cplx<T>> {
        self.data.iter()
    }

    /// Inner product ⟨self|other⟩, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> Cplx<T> {
        assert_eq!(self.dim(), other.dim(), "inner product of unequal dims");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .fold(cr(T::zero()), |acc, z| acc + z)
    }

    pub fn norm_sqr(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    /// Returns `None` when the norm is below `T::rank_eps()`.
    pub fn normalized(&self) -> Option<Self> {
        let n = self.norm();
        if n <= T::rank_eps() {
            return None;
        }
        Some(self.scale(cr(T::one() / n)))
    }

    pub fn scale(&self, s: Cplx<T>) -> Self {
        Self {
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    /// Kronecker product; `self` is the leftmost factor.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut data = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.data {
            for b in &other.data {
                data.push(a * b);
            }
        }
        Self { data }
    }

    /// Maximum entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!(self.dim(), other.dim());
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(T::zero(), T::max)
    }

    /// Reorders tensor factors. New factor `k` is old factor `order[k]`.
    pub fn permute_factors(&self, dims: &[usize], order: &[usize]) -> Result<Self> {
        check_dims(dims, self.dim())?;
        if order.len() != dims.len() {
            return Err(Error::DimensionMismatch(format!(
                "permutation of length {} for {} factors",
                order.len(),
                dims.len()
            )));
        }
        let mut seen = vec![false; dims.len()];
        for &o in order {
            if o >= dims.len() || seen[o] {
                return Err(Error::DimensionMismatch(format!("{order:?} is not a permutation")));
            }
            seen[o] = true;
        }
        let new_dims: Vec<usize> = order.iter().map(|&o| dims[o]).collect();
        let mut out = vec![cr(T::zero()); self.dim()];
        let mut new_digits = vec![0; dims.len()];
        for (old, z) in self.data.iter().enumerate() {
            let old_digits = digits(old, dims);
            for (k, &o) in order.iter().enumerate() {
                new_digits[k] = old_digits[o];
            }
            out[flat_index(&new_digits, &new_dims)] = *z;
        }
        Ok(Self { data: out })
    }
}

impl<T: Real> Index<usize> for ComplexVector<T> {
    type Output = Cplx<T>;

    fn index(&self, i: usize) -> &Cplx<T> {
        &self.data[i]
    }
}

impl<T: Real> IndexMut<usize> for ComplexVector<T> {
    fn index_mut(&mut self, i: usize) -> &mut Cplx<T> {
        &mut self.data[i]
    }
}

impl<T: Real> Add for &ComplexVector<T> {
    type Output = ComplexVector<T>;

    fn add(self, rhs: Self) -> ComplexVector<T> {
        assert_eq!(self.dim(), rhs.dim());
        ComplexVector {
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<T: Real> Sub for &ComplexVector<T> {
    type Output = ComplexVector<T>;

    fn sub(self, rhs: Self) -> ComplexVector<T> {
        assert_eq!(self.dim(), rhs.dim());
        ComplexVector {
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<T: Real> Neg for &ComplexVector<T> {
    type Output = ComplexVector<T>;

    fn neg(self) -> ComplexVector<T> {
        ComplexVector {
            data: self.data.iter().map(|z| -z).collect(),
        }
    }
}

impl<T: Real> Mul<Cplx<T>> for &ComplexVector<T> {
    type Output = ComplexVector<T>;

    fn mul(self, s: Cplx<T>) -> ComplexVector<T> {
        self.scale(s)
    }
}
