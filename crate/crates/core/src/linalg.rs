//! Dense complex linear algebra helpers on top of `nalgebra`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type ComplexMatrix = DMatrix<Complex64>;
pub type StateVector = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Largest entry modulus.
pub fn max_abs(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    if a.shape() != b.shape() {
        return f64::INFINITY;
    }
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn hermiticity_residual(m: &ComplexMatrix) -> f64 {
    max_abs_diff(m, &m.adjoint())
}

pub fn unitarity_residual(m: &ComplexMatrix) -> f64 {
    let n = m.nrows();
    max_abs_diff(&(m.adjoint() * m), &ComplexMatrix::identity(n, n))
}

pub fn commutator_residual(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    max_abs(&(a * b - b * a))
}

pub fn projector(v: &StateVector) -> ComplexMatrix {
    v * v.adjoint()
}

/// `u m u^dagger`.
pub fn conjugate_by(u: &ComplexMatrix, m: &ComplexMatrix) -> ComplexMatrix {
    u * m * u.adjoint()
}

/// Multiply by a unit phase so the first non-negligible component is real
/// and positive.
pub fn fix_phase(v: &mut StateVector) {
    if let Some(z) = v.iter().copied().find(|z| z.norm() > 1e-9) {
        let phase = z.conj() / z.norm();
        *v *= phase;
    }
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
pub fn hermitian_eigen(m: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let eig = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = ComplexMatrix::from_columns(
        &order
            .iter()
            .map(|&i| eig.eigenvectors.column(i).into_owned())
            .collect::<Vec<_>>(),
    );
    (values, vectors)
}

/// Rebuild `V diag(f(lambda)) V^dagger` from a Hermitian eigendecomposition.
fn spectral_map(m: &ComplexMatrix, f: impl Fn(f64) -> f64) -> ComplexMatrix {
    let (values, vectors) = hermitian_eigen(m);
    let d = ComplexMatrix::from_diagonal(&DVector::from_iterator(
        values.len(),
        values.iter().map(|&x| c(f(x), 0.0)),
    ));
    &vectors * d * vectors.adjoint()
}

/// Check that `rho` is a Hermitian N x N matrix.
pub fn check_hermitian(rho: &ComplexMatrix, dim: usize) -> Result<()> {
    if rho.nrows() != dim || rho.ncols() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: rho.nrows(),
        });
    }
    let r = hermiticity_residual(rho);
    if r > 1e-9 {
        return Err(Error::NotHermitian(r));
    }
    Ok(())
}

/// Check Hermitian, unit trace and positive semidefinite, all to 1e-9.
pub fn check_density(rho: &ComplexMatrix, dim: usize) -> Result<()> {
    check_hermitian(rho, dim)?;
    let tr = rho.trace();
    if (tr - ONE).norm() > 1e-9 {
        return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
    }
    let (values, _) = hermitian_eigen(rho);
    if values[0] < -1e-9 {
        return Err(Error::InvalidState(format!(
            "negative eigenvalue {:.3e}",
            values[0]
        )));
    }
    Ok(())
}

/// Nearest-PSD by eigenvalue truncation: clip negative eigenvalues to zero and
/// renormalize the trace to one.
pub fn project_to_physical(rho: &ComplexMatrix) -> ComplexMatrix {
    let h = (rho + rho.adjoint()) * c(0.5, 0.0);
    let (values, vectors) = hermitian_eigen(&h);
    if values[0] >= 0.0 {
        let tr = h.trace().re;
        return h * c(1.0 / tr, 0.0);
    }
    let clipped: Vec<f64> = values.iter().map(|&x| x.max(0.0)).collect();
    let total: f64 = clipped.iter().sum();
    let d = ComplexMatrix::from_diagonal(&DVector::from_iterator(
        clipped.len(),
        clipped.iter().map(|&x| c(x / total, 0.0)),
    ));
    &vectors * d * vectors.adjoint()
}

/// Principal square root of a PSD matrix (negative eigenvalues clipped).
pub fn sqrt_psd(m: &ComplexMatrix) -> ComplexMatrix {
    spectral_map(m, |x| x.max(0.0).sqrt())
}

/// Uhlmann fidelity `(tr sqrt(sqrt(rho) sigma sqrt(rho)))^2`.
pub fn fidelity(rho: &ComplexMatrix, sigma: &ComplexMatrix) -> f64 {
    let s = sqrt_psd(rho);
    let inner = &s * sigma * &s;
    let inner = (&inner + inner.adjoint()) * c(0.5, 0.0);
    let (values, _) = hermitian_eigen(&inner);
    let t: f64 = values.iter().map(|&x| x.max(0.0).sqrt()).sum();
    t * t
}

/// Trace distance `(1/2) ||rho - sigma||_1`.
pub fn trace_distance(rho: &ComplexMatrix, sigma: &ComplexMatrix) -> f64 {
    let d = rho - sigma;
    let d = (&d + d.adjoint()) * c(0.5, 0.0);
    let (values, _) = hermitian_eigen(&d);
    0.5 * values.iter().map(|x| x.abs()).sum::<f64>()
}

/// Row-major `[re, im]` pairs, one inner array per row.
pub fn matrix_to_json(m: &ComplexMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .map(|j| [m[(i, j)].re, m[(i, j)].im])
                .collect()
        })
        .collect()
}

pub fn matrix_from_json(rows: &[Vec<[f64; 2]>]) -> Result<ComplexMatrix> {
    let n = rows.len();
    if n == 0 {
        return Err(Error::Json("empty matrix".into()));
    }
    if let Some(bad) = rows.iter().find(|r| r.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: bad.len(),
        });
    }
    Ok(ComplexMatrix::from_fn(n, n, |i, j| {
        c(rows[i][j][0], rows[i][j][1])
    }))
}

pub fn vector_to_json(v: &StateVector) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

pub fn vector_from_json(v: &[[f64; 2]]) -> StateVector {
    StateVector::from_iterator(v.len(), v.iter().map(|z| c(z[0], z[1])))
}
