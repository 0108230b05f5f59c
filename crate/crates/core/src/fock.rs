//! Two-port truncated Fock space.
//!
//! Basis vectors are occupation pairs `(n_a, n_b)` with `0 <= n_a, n_b <= n_max`,
//! ordered row-major: `index = n_a * (n_max + 1) + n_b`. Every matrix and
//! serialized entry in the crate uses this order.

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, max_abs, CMatrix, ZERO};
use crate::settings::Tolerances;

/// Spatial port of the two-mode system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Port {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TwoModeBasis {
    n_max: usize,
}

impl TwoModeBasis {
    pub fn new(n_max: usize) -> Result<Self> {
        if n_max == 0 {
            return Err(Error::InvalidBasis("n_max must be at least 1".into()));
        }
        Ok(Self { n_max })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn dim(&self) -> usize {
        (self.n_max + 1) * (self.n_max + 1)
    }

    pub fn index(&self, n_a: usize, n_b: usize) -> Result<usize> {
        if n_a > self.n_max || n_b > self.n_max {
            return Err(Error::OccupationOutOfRange {
                n_a,
                n_b,
                n_max: self.n_max,
            });
        }
        Ok(n_a * (self.n_max + 1) + n_b)
    }

    /// Inverse of [`index`](Self::index). Panics if `index >= dim()`.
    pub fn occupation(&self, index: usize) -> (usize, usize) {
        assert!(index < self.dim(), "basis index {index} out of range");
        (index / (self.n_max + 1), index % (self.n_max + 1))
    }

    /// Iterates `(index, n_a, n_b)` in basis order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        (0..self.dim()).map(move |i| {
            let (a, b) = self.occupation(i);
            (i, a, b)
        })
    }

    pub(crate) fn require_n_max(&self, min: usize) -> Result<()> {
        if self.n_max < min {
            return Err(Error::InvalidBasis(format!(
                "n_max = {} but at least {min} is required",
                self.n_max
            )));
        }
        Ok(())
    }
}

/// Linear index helper; see [`TwoModeBasis::index`].
pub fn basis_index(basis: &TwoModeBasis, n_a: usize, n_b: usize) -> Result<usize> {
    basis.index(n_a, n_b)
}

/// Matrix of `a†` (port A) or `b†` (port B). Raising past `n_max` maps to zero.
pub fn creation_matrix(basis: &TwoModeBasis, port: Port) -> CMatrix {
    let dim = basis.dim();
    let mut m = CMatrix::zeros(dim, dim);
    for (col, n_a, n_b) in basis.iter() {
        let (target, n) = match port {
            Port::A => ((n_a + 1, n_b), n_a),
            Port::B => ((n_a, n_b + 1), n_b),
        };
        if let Ok(row) = basis.index(target.0, target.1) {
            m[(row, col)] = Complex64::new(((n + 1) as f64).sqrt(), 0.0);
        }
    }
    m
}

pub fn annihilation_matrix(basis: &TwoModeBasis, port: Port) -> CMatrix {
    creation_matrix(basis, port).adjoint()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    basis: TwoModeBasis,
    amplitudes: DVector<Complex64>,
}

impl PureState {
    pub fn new(basis: TwoModeBasis, amplitudes: DVector<Complex64>) -> Result<Self> {
        if amplitudes.len() != basis.dim() {
            return Err(Error::DimensionMismatch {
                expected: basis.dim(),
                actual: amplitudes.len(),
            });
        }
        Ok(Self { basis, amplitudes })
    }

    /// Builds an (unnormalized) state from `((n_a, n_b), amplitude)` pairs.
    /// Repeated occupations accumulate.
    pub fn from_components(
        basis: TwoModeBasis,
        components: &[((usize, usize), Complex64)],
    ) -> Result<Self> {
        let mut amps = DVector::from_element(basis.dim(), ZERO);
        for &((a, b), z) in components {
            amps[basis.index(a, b)?] += z;
        }
        Ok(Self {
            basis,
            amplitudes: amps,
        })
    }

    pub fn basis(&self) -> &TwoModeBasis {
        &self.basis
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub fn amplitude(&self, n_a: usize, n_b: usize) -> Result<Complex64> {
        Ok(self.amplitudes[self.basis.index(n_a, n_b)?])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn normalize(mut self) -> Result<Self> {
        let n = self.norm_sqr().sqrt();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::NotNormalized { norm_sq: n * n });
        }
        self.amplitudes.unscale_mut(n);
        Ok(self)
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= Tolerances::global().normalization
    }
}

/// Density matrix over a [`TwoModeBasis`]. Construction does not validate;
/// call [`validate`] when the source is untrusted.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    basis: TwoModeBasis,
    matrix: CMatrix,
}

impl DensityOperator {
    pub fn from_matrix(basis: TwoModeBasis, matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != basis.dim() || matrix.ncols() != basis.dim() {
            return Err(Error::DimensionMismatch {
                expected: basis.dim(),
                actual: matrix.nrows().max(matrix.ncols()),
            });
        }
        Ok(Self { basis, matrix })
    }

    pub fn basis(&self) -> &TwoModeBasis {
        &self.basis
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    /// `⟨row| ρ |col⟩` by occupation.
    pub fn element(&self, row: (usize, usize), col: (usize, usize)) -> Result<Complex64> {
        let i = self.basis.index(row.0, row.1)?;
        let j = self.basis.index(col.0, col.1)?;
        Ok(self.matrix[(i, j)])
    }

    /// Diagonal weight of `|n_a, n_b⟩`; zero outside the basis.
    pub fn population(&self, n_a: usize, n_b: usize) -> f64 {
        self.basis
            .index(n_a, n_b)
            .map(|i| self.matrix[(i, i)].re)
            .unwrap_or(0.0)
    }

    /// The coherence `d = ⟨0,2| ρ |2,0⟩`.
    pub fn d(&self) -> Result<Complex64> {
        self.element((0, 2), (2, 0))
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// Largest total photon number carrying diagonal weight above `tol`.
    pub fn max_total_photons(&self, tol: f64) -> usize {
        self.basis
            .iter()
            .filter(|&(i, _, _)| self.matrix[(i, i)].re.abs() > tol)
            .map(|(_, a, b)| a + b)
            .max()
            .unwrap_or(0)
    }

    /// Convex combination `Σ w_k ρ_k` over a common basis.
    pub fn mixture(parts: &[(f64, &DensityOperator)]) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| Error::InvalidParameter("empty mixture".into()))?;
        let basis = first.1.basis;
        let mut m = CMatrix::zeros(basis.dim(), basis.dim());
        for (w, rho) in parts {
            if rho.basis != basis {
                return Err(Error::DimensionMismatch {
                    expected: basis.dim(),
                    actual: rho.basis.dim(),
                });
            }
            if *w < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "negative mixture weight {w}"
                )));
            }
            m += rho.matrix.scale(*w);
        }
        Ok(Self { basis, matrix: m })
    }
}

/// `|ψ⟩⟨ψ|`. The input must already be normalized.
pub fn pure_to_density(psi: &PureState) -> Result<DensityOperator> {
    if !psi.is_normalized() {
        return Err(Error::NotNormalized {
            norm_sq: psi.norm_sqr(),
        });
    }
    let v = &psi.amplitudes;
    Ok(DensityOperator {
        basis: psi.basis,
        matrix: v * v.adjoint(),
    })
}

impl TryFrom<&PureState> for DensityOperator {
    type Error = Error;

    fn try_from(psi: &PureState) -> Result<Self> {
        pure_to_density(psi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ValidityReport {
    pub hermiticity_deviation: f64,
    pub trace_deviation: f64,
    pub min_eigenvalue: f64,
    pub hermitian: bool,
    pub unit_trace: bool,
    pub positive: bool,
}

impl ValidityReport {
    pub fn is_valid(&self) -> bool {
        self.hermitian && self.unit_trace && self.positive
    }

    /// Converts a failed report into an error naming the first violation.
    pub fn into_result(self) -> Result<()> {
        if !self.hermitian {
            Err(Error::InvalidDensity(format!(
                "not Hermitian (max |ρ - ρ†| = {:e})",
                self.hermiticity_deviation
            )))
        } else if !self.unit_trace {
            Err(Error::InvalidDensity(format!(
                "trace deviates from 1 by {:e}",
                self.trace_deviation
            )))
        } else if !self.positive {
            Err(Error::InvalidDensity(format!(
                "negative eigenvalue {:e}",
                self.min_eigenvalue
            )))
        } else {
            Ok(())
        }
    }
}

/// Hermiticity, trace and positivity diagnostics for any square matrix.
pub fn validate_matrix(m: &CMatrix, tol: f64) -> ValidityReport {
    let herm = max_abs(&(m - m.adjoint()));
    let tr = m.trace();
    let trace_dev = (tr - Complex64::new(1.0, 0.0)).norm();
    let min_ev = hermitian_eigenvalues(m).first().copied().unwrap_or(0.0);
    ValidityReport {
        hermiticity_deviation: herm,
        trace_deviation: trace_dev,
        min_eigenvalue: min_ev,
        hermitian: herm <= tol,
        unit_trace: trace_dev <= tol,
        positive: min_ev >= -tol,
    }
}

pub fn validate(rho: &DensityOperator) -> ValidityReport {
    validate_matrix(&rho.matrix, Tolerances::global().validity)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    fn b(n: usize) -> TwoModeBasis {
        TwoModeBasis::new(n).unwrap()
    }

    #[test]
    fn index_examples() {
        assert_eq!(basis_index(&b(2), 0, 0).unwrap(), 0);
        assert_eq!(basis_index(&b(2), 2, 2).unwrap(), 8);
        assert_eq!(basis_index(&b(3), 1, 2).unwrap(), 6);
        assert!(matches!(
            basis_index(&b(2), 3, 0),
            Err(Error::OccupationOutOfRange { .. })
        ));
    }

    #[test]
    fn index_round_trip() {
        for n in 1..6 {
            let basis = b(n);
            let mut seen = vec![false; basis.dim()];
            for (i, a, bb) in basis.iter() {
                assert_eq!(basis.index(a, bb).unwrap(), i);
                seen[i] = true;
            }
            assert!(seen.into_iter().all(|s| s));
        }
    }

    #[test]
    fn creation_matrix_entries() {
        let basis = b(3);
        let ad = creation_matrix(&basis, Port::A);
        let i00 = basis.index(0, 0).unwrap();
        let i10 = basis.index(1, 0).unwrap();
        let i20 = basis.index(2, 0).unwrap();
        assert_eq!(ad[(i10, i00)], c(1.0, 0.0));
        assert!((ad[(i20, i10)].re - 2f64.sqrt()).abs() < 1e-15);
        // a† |n_max, k⟩ = 0
        for k in 0..=3 {
            let col = basis.index(3, k).unwrap();
            assert!(ad.column(col).iter().all(|z| *z == ZERO));
        }
    }

    #[test]
    fn creation_operators_commute_and_satisfy_ccr_below_cutoff() {
        let basis = b(4);
        let ad = creation_matrix(&basis, Port::A);
        let bd = creation_matrix(&basis, Port::B);
        assert_eq!(&ad * &bd, &bd * &ad);
        for port in [Port::A, Port::B] {
            let cr = creation_matrix(&basis, port);
            let an = cr.adjoint();
            let comm = &an * &cr - &cr * &an;
            for (i, na, nb) in basis.iter() {
                let n = if port == Port::A { na } else { nb };
                if n < basis.n_max() {
                    for j in 0..basis.dim() {
                        let want = if i == j { 1.0 } else { 0.0 };
                        assert!((comm[(i, j)] - c(want, 0.0)).norm() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn pure_to_density_examples() {
        let basis = b(2);
        let vac = PureState::from_components(basis, &[((0, 0), c(1.0, 0.0))]).unwrap();
        let rho = pure_to_density(&vac).unwrap();
        assert_eq!(rho.matrix()[(0, 0)], c(1.0, 0.0));
        assert_eq!(rho.matrix().iter().filter(|z| **z != ZERO).count(), 1);

        let s = 0.5f64.sqrt();
        let hom = PureState::from_components(basis, &[((0, 2), c(s, 0.0)), ((2, 0), c(-s, 0.0))])
            .unwrap();
        let rho = pure_to_density(&hom).unwrap();
        assert!((rho.element((0, 2), (0, 2)).unwrap().re - 0.5).abs() < 1e-15);
        assert!((rho.element((2, 0), (2, 0)).unwrap().re - 0.5).abs() < 1e-15);
        assert!((rho.d().unwrap().re + 0.5).abs() < 1e-15);
        assert!((rho.element((2, 0), (0, 2)).unwrap().re + 0.5).abs() < 1e-15);

        let ghz =
            PureState::from_components(basis, &[((0, 0), c(s, 0.0)), ((2, 2), c(s, 0.0))]).unwrap();
        let rho = pure_to_density(&ghz).unwrap();
        let halves = rho
            .matrix()
            .iter()
            .filter(|z| (z.re - 0.5).abs() < 1e-15)
            .count();
        assert_eq!(halves, 4);
    }

    #[test]
    fn unnormalized_pure_state_is_rejected() {
        let basis = b(2);
        let psi = PureState::from_components(basis, &[((0, 0), c(2.0, 0.0))]).unwrap();
        assert!(matches!(
            pure_to_density(&psi),
            Err(Error::NotNormalized { .. })
        ));
        assert!(pure_to_density(&psi.normalize().unwrap()).is_ok());
    }

    #[test]
    fn validate_flags_violations() {
        let basis = b(1);
        let half = CMatrix::identity(4, 4).scale(0.125);
        let rho = DensityOperator::from_matrix(basis, half).unwrap();
        let rep = validate(&rho);
        assert!(!rep.unit_trace && rep.hermitian && rep.positive);

        let mut m = CMatrix::identity(4, 4).scale(0.25);
        m[(0, 1)] = c(1e-3, 0.0);
        let rep = validate(&DensityOperator::from_matrix(basis, m).unwrap());
        assert!(!rep.hermitian);
        assert!(rep.into_result().is_err());
    }
}
