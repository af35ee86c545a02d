//! Complex amplitudes and the small dense linear algebra the walk needs.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut, Mul};

use crate::error::{Error, Result};
use crate::UNITARY_TOL;

/// Complex probability amplitude.
pub type Amp = num_complex::Complex64;

pub const ZERO: Amp = Amp::new(0.0, 0.0);
pub const ONE: Amp = Amp::new(1.0, 0.0);

/// `e^{i angle}`.
#[inline]
pub fn cis(angle: f64) -> Amp {
    Amp::new(libm::cos(angle), libm::sin(angle))
}

#[inline]
pub fn is_finite(z: Amp) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Row-major `N × N` complex matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix<const N: usize>(pub [[Amp; N]; N]);

impl<const N: usize> Matrix<N> {
    pub fn zeros() -> Self {
        Self([[ZERO; N]; N])
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            m.0[i][i] = ONE;
        }
        m
    }

    pub fn from_diagonal(d: [Amp; N]) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            m.0[i][i] = d[i];
        }
        m
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.0[i][j] = self.0[j][i].conj();
            }
        }
        m
    }

    pub fn apply(&self, v: &[Amp; N]) -> [Amp; N] {
        let mut out = [ZERO; N];
        for (i, row) in self.0.iter().enumerate() {
            out[i] = row.iter().zip(v).map(|(a, b)| a * b).sum();
        }
        out
    }

    /// Largest elementwise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..N {
            for j in 0..N {
                worst = worst.max((self.0[i][j] - other.0[i][j]).norm());
            }
        }
        worst
    }

    /// Largest elementwise deviation of `U†U` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        (self.adjoint() * *self).max_abs_diff(&Self::identity())
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|z| is_finite(*z))
    }
}

impl<const N: usize> Mul for Matrix<N> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for k in 0..N {
                let a = self.0[i][k];
                if a == ZERO {
                    continue;
                }
                for j in 0..N {
                    m.0[i][j] += a * rhs.0[k][j];
                }
            }
        }
        m
    }
}

impl Matrix<2> {
    pub fn det(&self) -> Amp {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }
}

/// A matrix known to satisfy `U†U = I` within [`UNITARY_TOL`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Unitary<const N: usize>(Matrix<N>);

pub type Unitary2 = Unitary<2>;
pub type Unitary4 = Unitary<4>;

impl<const N: usize> Unitary<N> {
    /// Checks unitarity and finiteness.
    pub fn new(m: Matrix<N>) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::Numeric("non-finite matrix entry"));
        }
        if m.unitarity_defect() > UNITARY_TOL {
            return Err(Error::Numeric("matrix is not unitary"));
        }
        Ok(Self(m))
    }

    /// Wraps a matrix that is unitary by construction.
    pub(crate) fn from_trusted(m: Matrix<N>) -> Self {
        debug_assert!(m.unitarity_defect() < 1e-9);
        Self(m)
    }

    pub fn identity() -> Self {
        Self(Matrix::identity())
    }

    pub fn matrix(&self) -> &Matrix<N> {
        &self.0
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    #[inline]
    pub fn apply(&self, v: &[Amp; N]) -> [Amp; N] {
        self.0.apply(v)
    }

    pub fn entry(&self, row: usize, col: usize) -> Amp {
        self.0 .0[row][col]
    }
}

impl<const N: usize> Mul for Unitary<N> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        Self(self.0 * rhs.0)
    }
}

/// Kronecker product with index `2i + j` for `|i>|j>`, matching
/// [`crate::state::CoinBasis`].
pub fn kron2(a: &Matrix<2>, b: &Matrix<2>) -> Matrix<4> {
    let mut m = Matrix::<4>::zeros();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    m.0[2 * i + k][2 * j + l] = a.0[i][j] * b.0[k][l];
                }
            }
        }
    }
    m
}

pub fn tensor2(a: &Unitary2, b: &Unitary2) -> Unitary4 {
    Unitary::from_trusted(kron2(a.matrix(), b.matrix()))
}

/// `u ⊗ v` for qubit vectors.
pub fn kron_vec(u: &[Amp; 2], v: &[Amp; 2]) -> [Amp; 4] {
    [u[0] * v[0], u[0] * v[1], u[1] * v[0], u[1] * v[1]]
}

pub fn mat_apply(u: &Unitary4, v: &[Amp; 4]) -> [Amp; 4] {
    u.apply(v)
}

pub fn vec_norm<const N: usize>(v: &[Amp; N]) -> f64 {
    libm::sqrt(v.iter().map(|z| z.norm_sqr()).sum())
}

/// `Σ conj(a_i) b_i`.
pub fn vdot<const N: usize>(a: &[Amp; N], b: &[Amp; N]) -> Amp {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub mod pauli {
    use super::{Amp, Matrix, Unitary2, ONE, ZERO};

    pub fn x() -> Unitary2 {
        Unitary2::from_trusted(Matrix([[ZERO, ONE], [ONE, ZERO]]))
    }

    pub fn z() -> Unitary2 {
        Unitary2::from_trusted(Matrix([[ONE, ZERO], [ZERO, -ONE]]))
    }

    pub fn hadamard() -> Unitary2 {
        let h = Amp::new(core::f64::consts::FRAC_1_SQRT_2, 0.0);
        Unitary2::from_trusted(Matrix([[h, h], [h, -h]]))
    }
}

/// Dense row-major complex matrix of runtime size.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Amp>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
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

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Shape("inner dimensions differ"));
        }
        let mut m = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..rhs.cols {
                    m.data[i * rhs.cols + j] += a * rhs[(k, j)];
                }
            }
        }
        Ok(m)
    }

    pub fn trace(&self) -> Amp {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Largest `|a_ij - conj(a_ji)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst = 0.0_f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Frobenius norm of the strictly off-diagonal part.
    pub fn off_diagonal_norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                if i != j {
                    s += self[(i, j)].norm_sqr();
                }
            }
        }
        libm::sqrt(s)
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Amp;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Amp {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Amp {
        &mut self.data[i * self.cols + j]
    }
}

/// Off-diagonal Frobenius norm at which Jacobi sweeps stop.
pub const JACOBI_TOL: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 64;

/// Eigen-decomposition of a Hermitian matrix: `A = V diag(values) V†`.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Unitary matrix whose columns are the matching eigenvectors.
    pub vectors: CMatrix,
}

/// Cyclic Jacobi eigensolver for Hermitian matrices.
///
/// Each rotation first removes the phase of the pivot `a_pq` with a diagonal
/// unitary and then applies the classical real symmetric rotation, so the
/// combined transform is `V = P R`. Sweeps run over all `p < q` until the
/// off-diagonal Frobenius norm drops below [`JACOBI_TOL`] relative to
/// `max(1, ‖A‖_F)`.
pub fn jacobi_hermitian(a: &CMatrix, herm_tol: f64) -> Result<HermitianEigen> {
    if !a.is_square() {
        return Err(Error::Shape("eigensolve needs a square matrix"));
    }
    if a.hermiticity_defect() > herm_tol {
        return Err(Error::Numeric("matrix is not Hermitian"));
    }
    let n = a.rows();
    let mut m = a.clone();
    // symmetrize and realify the diagonal so rounding noise does not leak in
    for i in 0..n {
        m[(i, i)] = Amp::new(m[(i, i)].re, 0.0);
        for j in i + 1..n {
            let avg = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
            m[(i, j)] = avg;
            m[(j, i)] = avg.conj();
        }
    }
    let mut v = CMatrix::identity(n);
    let scale = {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += m[(i, j)].norm_sqr();
            }
        }
        libm::sqrt(s).max(1.0)
    };

    let mut converged = n < 2;
    for _ in 0..JACOBI_MAX_SWEEPS {
        if m.off_diagonal_norm() <= JACOBI_TOL * scale {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let g = m[(p, q)];
                let g_abs = g.norm();
                if g_abs == 0.0 {
                    continue;
                }
                let phase = g / g_abs;
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let tau = (aqq - app) / (2.0 * g_abs);
                let t = if tau >= 0.0 {
                    1.0 / (tau + libm::sqrt(1.0 + tau * tau))
                } else {
                    -1.0 / (-tau + libm::sqrt(1.0 + tau * tau))
                };
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = t * c;
                // V restricted to (p, q): [[c, s], [-s e^{-iφ}, c e^{-iφ}]]
                let vpp = Amp::new(c, 0.0);
                let vpq = Amp::new(s, 0.0);
                let vqp = -phase.conj() * s;
                let vqq = phase.conj() * c;
                for k in 0..n {
                    let akp = m[(k, p)];
                    let akq = m[(k, q)];
                    m[(k, p)] = akp * vpp + akq * vqp;
                    m[(k, q)] = akp * vpq + akq * vqq;
                }
                for k in 0..n {
                    let apk = m[(p, k)];
                    let aqk = m[(q, k)];
                    m[(p, k)] = vpp.conj() * apk + vqp.conj() * aqk;
                    m[(q, k)] = vpq.conj() * apk + vqq.conj() * aqk;
                }
                m[(p, q)] = ZERO;
                m[(q, p)] = ZERO;
                m[(p, p)] = Amp::new(m[(p, p)].re, 0.0);
                m[(q, q)] = Amp::new(m[(q, q)].re, 0.0);
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * vpp + vkq * vqp;
                    v[(k, q)] = vkp * vpq + vkq * vqq;
                }
            }
        }
    }
    if !converged && m.off_diagonal_norm() > JACOBI_TOL * scale {
        return Err(Error::Numeric("Jacobi eigensolver did not converge"));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.total_cmp(&m[(j, j)].re));
    let values = order.iter().map(|&i| m[(i, i)].re).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (col, &src) in order.iter().enumerate() {
        for k in 0..n {
            vectors[(k, col)] = v[(k, src)];
        }
    }
    Ok(HermitianEigen { values, vectors })
}
