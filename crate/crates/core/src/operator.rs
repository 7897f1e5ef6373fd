//! Dense Hermitian operators on the (N+1)-dimensional symmetric sector.

use std::ops::{Add, Mul, Sub};

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Relative elementwise tolerance accepted when checking Hermiticity.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// A dense complex matrix that is Hermitian up to round-off.
///
/// The stored matrix is always exactly Hermitian: construction checks the
/// defect against [`HERMITICITY_TOL`] and then symmetrizes.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator {
    matrix: CMatrix,
}

impl HermitianOperator {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidInput(format!(
                "operator matrix is {}x{}, not square",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Numerical("operator matrix has non-finite entries".into()));
        }
        let defect = hermiticity_defect(&matrix);
        let scale = matrix.iter().map(|z| z.norm()).fold(1.0_f64, f64::max);
        if defect > HERMITICITY_TOL * scale {
            return Err(Error::InvalidInput(format!(
                "matrix is not Hermitian: max |A - A^H| = {defect:e}"
            )));
        }
        Ok(Self::symmetrized(matrix))
    }

    /// Hermitian part `(A + A^H)/2` of an arbitrary square matrix.
    pub(crate) fn symmetrized(matrix: CMatrix) -> Self {
        let adjoint = matrix.adjoint();
        Self { matrix: (matrix + adjoint).scale(0.5) }
    }

    pub fn from_real_diagonal(diagonal: &[f64]) -> Self {
        let d = DVector::from_iterator(diagonal.len(), diagonal.iter().map(|&x| C64::new(x, 0.0)));
        Self { matrix: CMatrix::from_diagonal(&d) }
    }

    pub fn zeros(dimension: usize) -> Self {
        Self { matrix: CMatrix::zeros(dimension, dimension) }
    }

    pub fn identity(dimension: usize) -> Self {
        Self { matrix: CMatrix::identity(dimension, dimension) }
    }

    pub fn dimension(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self { matrix: self.matrix.map(|z| z * factor) }
    }

    /// `A²`, Hermitian whenever `A` is.
    pub fn square(&self) -> Self {
        Self::symmetrized(&self.matrix * &self.matrix)
    }

    /// `[A, B] = AB - BA`.
    pub fn commutator(&self, other: &Self) -> CMatrix {
        &self.matrix * &other.matrix - &other.matrix * &self.matrix
    }

    /// Largest elementwise modulus of `A - B`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        max_abs_diff(&self.matrix, &other.matrix)
    }

    pub fn apply(&self, v: &CVector) -> Result<CVector> {
        if v.len() != self.dimension() {
            return Err(Error::DimensionMismatch { expected: self.dimension(), found: v.len() });
        }
        Ok(&self.matrix * v)
    }
}

impl Add for &HermitianOperator {
    type Output = HermitianOperator;

    fn add(self, rhs: Self) -> HermitianOperator {
        HermitianOperator { matrix: &self.matrix + &rhs.matrix }
    }
}

impl Sub for &HermitianOperator {
    type Output = HermitianOperator;

    fn sub(self, rhs: Self) -> HermitianOperator {
        HermitianOperator { matrix: &self.matrix - &rhs.matrix }
    }
}

impl Mul<&HermitianOperator> for f64 {
    type Output = HermitianOperator;

    fn mul(self, rhs: &HermitianOperator) -> HermitianOperator {
        rhs.scaled(self)
    }
}

pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    max_abs_diff(m, &m.adjoint())
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
