//! Minimal dense complex 2x2 matrix, just enough for two-level dynamics.

use num_complex::Complex64;
use std::ops::{Add, Mul, Sub};

pub const ZERO_C: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE_C: Complex64 = Complex64::new(1.0, 0.0);
pub const I_C: Complex64 = Complex64::new(0.0, 1.0);

/// Row-major complex 2x2 matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Matrix2(pub [[Complex64; 2]; 2]);

impl Matrix2 {
    pub fn new(e00: Complex64, e01: Complex64, e10: Complex64, e11: Complex64) -> Self {
        Matrix2([[e00, e01], [e10, e11]])
    }

    pub fn zero() -> Self {
        Matrix2([[ZERO_C; 2]; 2])
    }

    pub fn identity() -> Self {
        Matrix2::new(ONE_C, ZERO_C, ZERO_C, ONE_C)
    }

    pub fn diag(a: Complex64, b: Complex64) -> Self {
        Matrix2::new(a, ZERO_C, ZERO_C, b)
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        let mut out = *self;
        for row in out.0.iter_mut() {
            for e in row.iter_mut() {
                *e *= c;
            }
        }
        out
    }

    pub fn scaled_re(&self, c: f64) -> Self {
        self.scaled(Complex64::new(c, 0.0))
    }

    pub fn adjoint(&self) -> Self {
        Matrix2::new(
            self.0[0][0].conj(),
            self.0[1][0].conj(),
            self.0[0][1].conj(),
            self.0[1][1].conj(),
        )
    }

    pub fn trace(&self) -> Complex64 {
        self.0[0][0] + self.0[1][1]
    }

    /// Largest absolute deviation from the Hermitian ideal: off-diagonal
    /// conjugate mismatch and imaginary diagonal parts.
    pub fn hermiticity_defect(&self) -> f64 {
        let off = (self.0[0][1] - self.0[1][0].conj()).norm();
        off.max(self.0[0][0].im.abs()).max(self.0[1][1].im.abs())
    }

    /// Eigenvalues of the Hermitian part, (min, max). Off-diagonals are
    /// symmetrized first, so this is meaningful for matrices that are
    /// Hermitian up to roundoff.
    pub fn hermitian_eigenvalues(&self) -> (f64, f64) {
        let a = self.0[0][0].re;
        let d = self.0[1][1].re;
        let off = (self.0[0][1] + self.0[1][0].conj()) * 0.5;
        let mid = 0.5 * (a + d);
        let radius = ((0.5 * (a - d)).powi(2) + off.norm_sqr()).sqrt();
        (mid - radius, mid + radius)
    }

    /// Max-norm of the elementwise difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                m = m.max((self.0[i][j] - other.0[i][j]).norm());
            }
        }
        m
    }
}

impl Add for Matrix2 {
    type Output = Matrix2;
    fn add(self, rhs: Matrix2) -> Matrix2 {
        let mut out = self;
        for i in 0..2 {
            for j in 0..2 {
                out.0[i][j] += rhs.0[i][j];
            }
        }
        out
    }
}

impl Sub for Matrix2 {
    type Output = Matrix2;
    fn sub(self, rhs: Matrix2) -> Matrix2 {
        let mut out = self;
        for i in 0..2 {
            for j in 0..2 {
                out.0[i][j] -= rhs.0[i][j];
            }
        }
        out
    }
}

impl Mul for Matrix2 {
    type Output = Matrix2;
    fn mul(self, rhs: Matrix2) -> Matrix2 {
        let mut out = Matrix2::zero();
        for i in 0..2 {
            for j in 0..2 {
                out.0[i][j] = self.0[i][0] * rhs.0[0][j] + self.0[i][1] * rhs.0[1][j];
            }
        }
        out
    }
}

pub fn commutator(a: &Matrix2, b: &Matrix2) -> Matrix2 {
    *a * *b - *b * *a
}

pub fn anticommutator(a: &Matrix2, b: &Matrix2) -> Matrix2 {
    *a * *b + *b * *a
}

/// |0><1| in the excited-first basis.
pub fn sigma_plus() -> Matrix2 {
    Matrix2::new(ZERO_C, ONE_C, ZERO_C, ZERO_C)
}

/// |1><0| in the excited-first basis.
pub fn sigma_minus() -> Matrix2 {
    Matrix2::new(ZERO_C, ZERO_C, ONE_C, ZERO_C)
}

pub fn sigma_z() -> Matrix2 {
    Matrix2::diag(ONE_C, -ONE_C)
}
