use super::matrix::Matrix;
use super::scalar::Field;
use crate::error::{Error, Result};

/// A linear subspace of `F^d`, held as a matrix whose columns form a basis.
///
/// On the exact backend the basis is the unique column-reduced echelon
/// basis, so two exact subspaces are equal iff their bases are equal. The
/// zero subspace has a `d×0` basis.
#[derive(Clone, PartialEq)]
pub struct Subspace<T> {
    basis: Matrix<T>,
}

impl<T: Field> Subspace<T> {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            basis: Matrix::zeros(ambient_dim, 0),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace::span(&Matrix::identity(ambient_dim))
    }

    /// Column space of `m`.
    pub fn span(m: &Matrix<T>) -> Self {
        Subspace {
            basis: T::image_basis(m, None),
        }
    }

    /// Null space of `m`.
    pub fn kernel(m: &Matrix<T>) -> Self {
        let basis = T::kernel_basis(m, None);
        // kernel_basis of an r×0 matrix has no rows to inherit from.
        if basis.rows() != m.cols() {
            return Subspace::zero(m.cols());
        }
        Subspace { basis }
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &Matrix<T> {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim()
    }

    fn same_ambient(&self, other: &Self, op: &str) -> Result<()> {
        if self.ambient_dim() != other.ambient_dim() {
            return Err(Error::dims(format!(
                "{op} of subspaces of R^{} and R^{}",
                self.ambient_dim(),
                other.ambient_dim()
            )));
        }
        Ok(())
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.same_ambient(other, "sum")?;
        Ok(Subspace::span(&self.basis.hstack(&other.basis)?))
    }

    /// Solves `V a = W b` through the kernel of `[V | −W]`.
    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.same_ambient(other, "intersection")?;
        if self.is_zero() || other.is_zero() {
            return Ok(Subspace::zero(self.ambient_dim()));
        }
        let stacked = self.basis.hstack(&-&other.basis)?;
        let coeffs = Subspace::kernel(&stacked);
        let head = coeffs.basis.block(0, 0, self.dim(), coeffs.dim());
        Ok(Subspace::span(&(&self.basis * &head)))
    }

    /// Matrix whose kernel is exactly this subspace.
    pub fn annihilator(&self) -> Matrix<T> {
        let d = self.ambient_dim();
        if self.is_zero() {
            return Matrix::identity(d);
        }
        Subspace::kernel(&self.basis.transpose()).basis.transpose()
    }

    /// `{x : a x ∈ self}`.
    pub fn preimage(&self, a: &Matrix<T>) -> Result<Self> {
        if a.rows() != self.ambient_dim() {
            return Err(Error::dims(format!(
                "preimage under a {}×{} map of a subspace of R^{}",
                a.rows(),
                a.cols(),
                self.ambient_dim()
            )));
        }
        if self.is_full() {
            return Ok(Subspace::full(a.cols()));
        }
        Ok(Subspace::kernel(&(&self.annihilator() * a)))
    }

    /// `a · self`.
    pub fn image_under(&self, a: &Matrix<T>) -> Result<Self> {
        if a.cols() != self.ambient_dim() {
            return Err(Error::dims(format!(
                "image under a {}×{} map of a subspace of R^{}",
                a.rows(),
                a.cols(),
                self.ambient_dim()
            )));
        }
        Ok(Subspace::span(&a.try_mul(&self.basis)?))
    }

    /// True iff `other ⊆ self`, decided by `rank([V | W]) = dim V`.
    pub fn includes(&self, other: &Self) -> Result<bool> {
        self.same_ambient(other, "inclusion test")?;
        if other.is_zero() {
            return Ok(true);
        }
        Ok(self.basis.hstack(&other.basis)?.rank() == self.dim())
    }

    pub fn contains_vector(&self, v: &[T]) -> Result<bool> {
        if v.len() != self.ambient_dim() {
            return Err(Error::dims(format!(
                "vector of length {} against a subspace of R^{}",
                v.len(),
                self.ambient_dim()
            )));
        }
        self.includes(&Subspace::span(&Matrix::column_vector(v)))
    }

    /// Equality by mutual inclusion; backend independent.
    pub fn same_as(&self, other: &Self) -> Result<bool> {
        Ok(self.dim() == other.dim() && self.includes(other)?)
    }
}

impl<T: Field> std::fmt::Debug for Subspace<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Subspace(dim {} in R^{}) basis {:?}",
            self.basis.cols(),
            self.basis.rows(),
            self.basis
        )
    }
}
