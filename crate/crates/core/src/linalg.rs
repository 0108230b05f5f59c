//! Small dense complex helpers over nalgebra.

use nalgebra::{DMatrix, Dyn, SymmetricEigen};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);

pub(crate) fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// (M + M†)/2
pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Eigen-decomposition of the Hermitian part of `m`.
///
/// The spectrum is shifted by the Frobenius norm before the QR iteration and
/// shifted back afterwards: with exactly zero diagonal entries the solver's
/// deflation test never fires on tiny off-diagonal entries, which then
/// underflow to NaN (common for rank-one projectors). Eigenvectors are
/// unaffected and the absolute error stays at `O(ε‖m‖)`.
pub fn hermitian_eigen(m: &CMatrix) -> SymmetricEigen<Complex64, Dyn> {
    let h = hermitian_part(m);
    let shift = h.norm();
    let n = h.nrows();
    let mut eig = SymmetricEigen::new(h + CMatrix::identity(n, n).scale(shift));
    eig.eigenvalues.add_scalar_mut(-shift);
    eig
}

/// Eigenvalues of the Hermitian part of `m`, ascending.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let mut ev: Vec<f64> = hermitian_eigen(m).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Principal square root of a Hermitian PSD matrix; negative eigenvalues from
/// rounding are clamped to zero.
pub fn psd_sqrt(m: &CMatrix) -> CMatrix {
    let eig = hermitian_eigen(m);
    let roots = eig.eigenvalues.map(|l| l.max(0.0).sqrt());
    let v = &eig.eigenvectors;
    let diag = CMatrix::from_diagonal(&roots.map(|r| Complex64::new(r, 0.0)));
    v * diag * v.adjoint()
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Real rank-one projector whose unshifted QR iteration yields NaN.
    #[test]
    fn rank_one_projector_has_finite_spectrum() {
        let (a, b) = (2.235479746841741f64, 1.1494203632179603f64);
        let fa = [1.0, a, a * a / 2f64.sqrt(), 0.0, 0.0];
        let fb = [1.0, b, b * b / 2f64.sqrt(), 0.0, 0.0];
        let v: Vec<f64> = fa
            .iter()
            .flat_map(|x| fb.iter().map(move |y| x * y))
            .collect();
        let n2: f64 = v.iter().map(|x| x * x).sum();
        let m = CMatrix::from_fn(25, 25, |i, j| c(v[i] * v[j] / n2, 0.0));
        let ev = hermitian_eigenvalues(&m);
        assert!(ev.iter().all(|x| x.is_finite()));
        assert!((ev[24] - 1.0).abs() < 1e-14);
        assert!(ev[..24].iter().all(|x| x.abs() < 1e-14));
    }

    #[test]
    fn psd_sqrt_squares_back() {
        let m = CMatrix::from_fn(3, 3, |i, j| c((i + j) as f64, i as f64 - j as f64));
        let pos = &m * m.adjoint();
        let r = psd_sqrt(&pos);
        assert!(max_abs(&(&r * &r - &pos)) < 1e-10);
    }
}
