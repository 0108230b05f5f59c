//! Beamsplitter and phase shifter on the truncated two-port basis, plus
//! photon-count statistics.
//!
//! Beamsplitter convention (reflection phase absorbed into the second output):
//!
//! ```text
//! a† -> r c† + t d†
//! b† -> t c† - r d†
//! ```
//!
//! Output modes C and D are stored in the same two slots as A and B.

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{DensityOperator, Port, TwoModeBasis};
use crate::linalg::{CMatrix, ZERO};
use crate::settings::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BeamSplitterParams {
    r: f64,
    t: f64,
}

impl BeamSplitterParams {
    /// Lossless splitter with reflection `r` in `[0, 1]` and `t = sqrt(1 - r²)`.
    /// The endpoints are the identity and swap devices; criteria that divide
    /// by `r t` reject them.
    pub fn new(r: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&r) || !r.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "reflection coefficient r = {r} outside [0, 1]"
            )));
        }
        Ok(Self {
            r,
            t: (1.0 - r * r).max(0.0).sqrt(),
        })
    }

    pub fn from_pair(r: f64, t: f64) -> Result<Self> {
        if r < 0.0 || t < 0.0 || ((r * r + t * t) - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "(r, t) = ({r}, {t}) is not a lossless real splitter"
            )));
        }
        Ok(Self { r, t })
    }

    pub fn balanced() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self { r: s, t: s }
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn is_degenerate(&self) -> bool {
        self.r == 0.0 || self.t == 0.0
    }
}

/// How a plotted phase angle maps onto the physical shifter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhaseConvention {
    /// Occupation `n` picks up `exp(i n φ)`.
    PerPhoton,
    /// The `|2⟩` component picks up `exp(i φ)` (so `|1⟩` gets `exp(i φ/2)`).
    #[default]
    PerFockComponent,
}

impl PhaseConvention {
    fn per_photon_angle(self, phi: f64) -> f64 {
        match self {
            PhaseConvention::PerPhoton => phi,
            PhaseConvention::PerFockComponent => 0.5 * phi,
        }
    }
}

/// Joint count probabilities `P[i][j]`, `0 <= i, j <= n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct CountDistribution {
    n_max: usize,
    table: Vec<f64>,
}

impl CountDistribution {
    /// Checked constructor: entries may dip below zero by at most the
    /// validity tolerance (they are clipped), and the total must be one
    /// within the same tolerance (it is then renormalized).
    pub fn from_table(n_max: usize, table: Vec<f64>) -> Result<Self> {
        let side = n_max + 1;
        if table.len() != side * side {
            return Err(Error::DimensionMismatch {
                expected: side * side,
                actual: table.len(),
            });
        }
        let tol = Tolerances::global().validity;
        if let Some(bad) = table.iter().find(|p| **p < -tol || !p.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "count probability {bad} is negative or not finite"
            )));
        }
        let sum: f64 = table.iter().map(|p| p.max(0.0)).sum();
        if (sum - 1.0).abs() > tol {
            return Err(Error::InvalidParameter(format!(
                "count probabilities sum to {sum}, not 1"
            )));
        }
        Ok(Self::clipped(n_max, table))
    }

    pub(crate) fn clipped(n_max: usize, mut table: Vec<f64>) -> Self {
        for p in table.iter_mut() {
            *p = p.max(0.0);
        }
        let sum: f64 = table.iter().sum();
        if sum > 0.0 && (sum - 1.0).abs() <= Tolerances::global().validity {
            for p in table.iter_mut() {
                *p /= sum;
            }
        }
        Self { n_max, table }
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// `P[i][j]`, zero outside the table.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i > self.n_max || j > self.n_max {
            0.0
        } else {
            self.table[i * (self.n_max + 1) + j]
        }
    }

    /// Nonzero entries as `(i, j, p)` in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let side = self.n_max + 1;
        self.table
            .iter()
            .enumerate()
            .filter(|(_, p)| **p != 0.0)
            .map(move |(k, p)| (k / side, k % side, *p))
    }

    pub fn total(&self) -> f64 {
        self.table.iter().sum()
    }

    /// Probability of detecting `n` photons in total.
    pub fn total_photon_probability(&self, n: usize) -> f64 {
        (0..=n).map(|i| self.get(i, n - i)).sum()
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * i as f64)
}

/// Image of `|n_a, n_b⟩` under the splitter as `((p, q), amplitude)` over the
/// full (untruncated) sector `p + q = n_a + n_b`.
pub(crate) fn transformed_fock(params: &BeamSplitterParams, n_a: usize, n_b: usize) -> Vec<f64> {
    let (r, t) = (params.r, params.t);
    let total = n_a + n_b;
    // coefficient of c†^p d†^(total-p), indexed by p
    let mut poly = vec![0.0; total + 1];
    for k in 0..=n_a {
        let ca = binomial(n_a, k) * r.powi(k as i32) * t.powi((n_a - k) as i32);
        for l in 0..=n_b {
            let cb = binomial(n_b, l) * t.powi(l as i32) * (-r).powi((n_b - l) as i32);
            poly[k + l] += ca * cb;
        }
    }
    let norm_in = (factorial(n_a) * factorial(n_b)).sqrt();
    poly.iter()
        .enumerate()
        .map(|(p, coef)| coef * (factorial(p) * factorial(total - p)).sqrt() / norm_in)
        .collect()
}

/// Splitter unitary on the truncated grid, built sector by sector from the
/// creation-operator substitution. Output occupations above `n_max` are
/// dropped, so the matrix is unitary exactly on the sectors with total photon
/// number `<= n_max`.
pub fn beamsplitter_unitary(basis: &TwoModeBasis, params: &BeamSplitterParams) -> CMatrix {
    let dim = basis.dim();
    let mut u = CMatrix::zeros(dim, dim);
    for (col, n_a, n_b) in basis.iter() {
        for (p, amp) in transformed_fock(params, n_a, n_b).into_iter().enumerate() {
            let q = n_a + n_b - p;
            if let Ok(row) = basis.index(p, q) {
                u[(row, col)] = Complex64::new(amp, 0.0);
            }
        }
    }
    u
}

/// `U ρ U†`
pub fn apply_unitary(rho: &DensityOperator, u: &CMatrix) -> Result<DensityOperator> {
    let dim = rho.basis().dim();
    if u.nrows() != dim || u.ncols() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: u.nrows().max(u.ncols()),
        });
    }
    DensityOperator::from_matrix(*rho.basis(), u * rho.matrix() * u.adjoint())
}

pub fn phase_shift(
    rho: &DensityOperator,
    port: Port,
    phi: f64,
    convention: PhaseConvention,
) -> DensityOperator {
    let theta = convention.per_photon_angle(phi);
    let basis = *rho.basis();
    let phases: DVector<Complex64> = DVector::from_iterator(
        basis.dim(),
        basis.iter().map(|(_, a, b)| {
            let n = match port {
                Port::A => a,
                Port::B => b,
            };
            Complex64::from_polar(1.0, n as f64 * theta)
        }),
    );
    let mut m = rho.matrix().clone();
    for i in 0..basis.dim() {
        for j in 0..basis.dim() {
            if m[(i, j)] != ZERO {
                m[(i, j)] *= phases[i] * phases[j].conj();
            }
        }
    }
    DensityOperator::from_matrix(basis, m).expect("same basis")
}

/// `P[i][j] = ⟨i,j| ρ |i,j⟩`
pub fn count_distribution(rho: &DensityOperator) -> CountDistribution {
    let basis = rho.basis();
    let table = basis
        .iter()
        .map(|(i, _, _)| rho.matrix()[(i, i)].re)
        .collect();
    CountDistribution::clipped(basis.n_max(), table)
}

/// Fails when the state populates a total photon number above `n_max`, where
/// the truncated splitter is no longer exact.
pub fn check_truncation_safe(rho: &DensityOperator) -> Result<()> {
    let n_max = rho.basis().n_max();
    let max_total = rho.max_total_photons(Tolerances::global().validity);
    if max_total > n_max {
        return Err(Error::TruncationUnsafe { max_total, n_max });
    }
    Ok(())
}

/// Count statistics at the splitter outputs.
pub fn q_distribution(
    rho: &DensityOperator,
    params: &BeamSplitterParams,
) -> Result<CountDistribution> {
    check_truncation_safe(rho)?;
    let u = beamsplitter_unitary(rho.basis(), params);
    Ok(count_distribution(&apply_unitary(rho, &u)?))
}
