//! Dense complex vectors and matrices for small Hilbert spaces.
//!
//! Everything here is immutable once built. Basis conventions used by the
//! rest of the crate: for a qubit index 0 is spin up and 1 is spin down; for
//! the three-box system indices 0, 1, 2 are boxes A, B, C. Tensor products
//! use Kronecker order, so the left factor carries the most significant
//! index digit.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Amplitude = Complex64;

/// Largest supported Hilbert-space dimension.
pub const MAX_DIM: usize = 4096;

/// Tolerance for structural checks (normalization, Hermiticity, projectors).
pub const STRUCTURE_TOL: f64 = 1e-9;

/// Tolerance for algebraic identities in tests.
pub const IDENTITY_TOL: f64 = 1e-12;

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 || dim > MAX_DIM {
        return Err(Error::DimensionOutOfRange { dim, max: MAX_DIM });
    }
    Ok(())
}

fn check_finite(values: &[Amplitude]) -> Result<()> {
    match values.iter().position(|z| !z.is_finite()) {
        Some(index) => Err(Error::NonFinite { index }),
        None => Ok(()),
    }
}

fn check_same(expected: usize, actual: usize) -> Result<()> {
    if expected != actual {
        return Err(Error::DimensionMismatch { expected, actual });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<Amplitude>,
}

impl StateVector {
    /// Builds a vector from raw amplitudes. No normalization is imposed.
    pub fn new(amps: Vec<Amplitude>) -> Result<Self> {
        check_dim(amps.len())?;
        check_finite(&amps)?;
        Ok(Self { amps })
    }

    /// Builds a vector and rejects it unless its norm is within
    /// [`STRUCTURE_TOL`] of one.
    pub fn normalized(amps: Vec<Amplitude>) -> Result<Self> {
        let v = Self::new(amps)?;
        v.ensure_normalized()?;
        Ok(v)
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&x| Amplitude::new(x, 0.0)).collect())
    }

    /// Computational basis vector `|index⟩`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        check_dim(dim)?;
        if index >= dim {
            return Err(Error::DimensionMismatch { expected: dim, actual: index + 1 });
        }
        let mut amps = vec![Amplitude::new(0.0, 0.0); dim];
        amps[index] = Amplitude::new(1.0, 0.0);
        Ok(Self { amps })
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[Amplitude] {
        &self.amps
    }

    pub fn amp(&self, index: usize) -> Amplitude {
        self.amps[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm() - 1.0).abs() <= STRUCTURE_TOL
    }

    pub fn ensure_normalized(&self) -> Result<()> {
        if self.is_normalized() {
            Ok(())
        } else {
            Err(Error::NotNormalized { norm: self.norm() })
        }
    }

    /// Returns the unit vector along `self`. Fails on the zero vector.
    pub fn normalize(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::NotNormalized { norm: n });
        }
        Self::new(self.amps.iter().map(|z| z / n).collect())
    }

    pub fn scale(&self, factor: Amplitude) -> Result<Self> {
        Self::new(self.amps.iter().map(|z| z * factor).collect())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_same(self.dim(), other.dim())?;
        Self::new(self.amps.iter().zip(&other.amps).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        check_same(self.dim(), other.dim())?;
        Self::new(self.amps.iter().zip(&other.amps).map(|(a, b)| a - b).collect())
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        check_same(self.dim(), other.dim())?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

/// `⟨bra|ket⟩`, conjugate-linear in `bra`.
pub fn inner(bra: &StateVector, ket: &StateVector) -> Result<Amplitude> {
    check_same(bra.dim(), ket.dim())?;
    Ok(bra.amps.iter().zip(&ket.amps).map(|(b, k)| b.conj() * k).sum())
}

/// Square complex matrix in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    dim: usize,
    entries: Vec<Amplitude>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Validation {
    Hermitian,
    Projector,
}

impl Operator {
    pub fn new(dim: usize, entries: Vec<Amplitude>) -> Result<Self> {
        check_dim(dim)?;
        if entries.len() != dim * dim {
            return Err(Error::BadOperatorShape { dim, len: entries.len() });
        }
        check_finite(&entries)?;
        Ok(Self { dim, entries })
    }

    pub fn from_rows(rows: &[Vec<Amplitude>]) -> Result<Self> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::BadOperatorShape { dim, len: row.len() * dim });
            }
            entries.extend_from_slice(row);
        }
        Self::new(dim, entries)
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        Self::new(dim, vec![Amplitude::new(0.0, 0.0); dim * dim])
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut op = Self::zeros(dim)?;
        for i in 0..dim {
            op.entries[i * dim + i] = Amplitude::new(1.0, 0.0);
        }
        Ok(op)
    }

    /// Diagonal operator with real entries.
    pub fn diagonal(values: &[f64]) -> Result<Self> {
        let mut op = Self::zeros(values.len())?;
        for (i, &v) in values.iter().enumerate() {
            op.entries[i * values.len() + i] = Amplitude::new(v, 0.0);
        }
        check_finite(&op.entries)?;
        Ok(op)
    }

    /// Rank-one projector `|v⟩⟨v|` onto the direction of `v`.
    pub fn projector_onto(v: &StateVector) -> Result<Self> {
        let u = v.normalize()?;
        let dim = u.dim();
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(u.amps[i] * u.amps[j].conj());
            }
        }
        Self::new(dim, entries)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Amplitude] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Amplitude {
        self.entries[row * self.dim + col]
    }

    pub fn dagger(&self) -> Self {
        let n = self.dim;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(self.get(j, i).conj());
            }
        }
        Self { dim: n, entries }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_same(self.dim, other.dim)?;
        Self::new(self.dim, self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        check_same(self.dim, other.dim)?;
        Self::new(self.dim, self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, factor: Amplitude) -> Result<Self> {
        Self::new(self.dim, self.entries.iter().map(|z| z * factor).collect())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        check_same(self.dim, other.dim)?;
        let n = self.dim;
        let mut entries = vec![Amplitude::new(0.0, 0.0); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a == Amplitude::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    entries[i * n + j] += a * other.entries[k * n + j];
                }
            }
        }
        Self::new(n, entries)
    }

    pub fn apply(&self, v: &StateVector) -> Result<StateVector> {
        check_same(self.dim, v.dim())?;
        let n = self.dim;
        let amps = (0..n)
            .map(|i| {
                self.entries[i * n..(i + 1) * n]
                    .iter()
                    .zip(v.amps())
                    .map(|(m, a)| m * a)
                    .sum()
            })
            .collect();
        StateVector::new(amps)
    }

    /// `⟨bra|self|ket⟩`.
    pub fn sandwich(&self, bra: &StateVector, ket: &StateVector) -> Result<Amplitude> {
        check_same(bra.dim(), self.dim)?;
        inner(bra, &self.apply(ket)?)
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        check_same(self.dim, other.dim)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        let n = self.dim;
        (0..n).all(|i| (i..n).all(|j| (self.get(i, j) - self.get(j, i).conj()).norm() <= tol))
    }

    /// Hermitian and idempotent within `tol`.
    pub fn is_projector(&self, tol: f64) -> bool {
        if !self.is_hermitian(tol) {
            return false;
        }
        match self.matmul(self) {
            Ok(sq) => sq.max_abs_diff(self).is_ok_and(|d| d <= tol),
            Err(_) => false,
        }
    }
}

pub fn validate(op: &Operator, kind: Validation, tol: f64) -> bool {
    match kind {
        Validation::Hermitian => op.is_hermitian(tol),
        Validation::Projector => op.is_projector(tol),
    }
}

/// Kronecker product. Entry `(i, j)` of the pair maps to index `i * dim(b) + j`.
pub trait Tensor: Sized {
    fn tensor(&self, other: &Self) -> Result<Self>;
}

impl Tensor for StateVector {
    fn tensor(&self, other: &Self) -> Result<Self> {
        let dim = self.dim().saturating_mul(other.dim());
        check_dim(dim)?;
        let amps = self
            .amps
            .iter()
            .flat_map(|a| other.amps.iter().map(move |b| a * b))
            .collect();
        StateVector::new(amps)
    }
}

impl Tensor for Operator {
    fn tensor(&self, other: &Self) -> Result<Self> {
        let (na, nb) = (self.dim, other.dim);
        let n = na.saturating_mul(nb);
        check_dim(n)?;
        let mut entries = vec![Amplitude::new(0.0, 0.0); n * n];
        for ia in 0..na {
            for ja in 0..na {
                let a = self.get(ia, ja);
                for ib in 0..nb {
                    for jb in 0..nb {
                        entries[(ia * nb + ib) * n + ja * nb + jb] = a * other.get(ib, jb);
                    }
                }
            }
        }
        Operator::new(n, entries)
    }
}

pub fn tensor<T: Tensor>(a: &T, b: &T) -> Result<T> {
    a.tensor(b)
}

/// Tensor product of a non-empty sequence, left factor most significant.
pub fn tensor_all<T: Tensor + Clone>(factors: &[T]) -> Result<T> {
    let (first, rest) = factors
        .split_first()
        .ok_or(Error::DimensionOutOfRange { dim: 0, max: MAX_DIM })?;
    rest.iter().try_fold(first.clone(), |acc, f| acc.tensor(f))
}

pub fn pauli_x() -> Operator {
    let o = Amplitude::new(0.0, 0.0);
    let l = Amplitude::new(1.0, 0.0);
    Operator { dim: 2, entries: vec![o, l, l, o] }
}

pub fn pauli_y() -> Operator {
    let o = Amplitude::new(0.0, 0.0);
    Operator { dim: 2, entries: vec![o, Amplitude::new(0.0, -1.0), Amplitude::new(0.0, 1.0), o] }
}

pub fn pauli_z() -> Operator {
    let o = Amplitude::new(0.0, 0.0);
    Operator { dim: 2, entries: vec![Amplitude::new(1.0, 0.0), o, o, Amplitude::new(-1.0, 0.0)] }
}
