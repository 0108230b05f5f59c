//! Single-mode entanglement verification.
//!
//! The local filter keeps `{|0⟩, |2⟩}` on each port; the number twirl (equal
//! random phase on both ports) then leaves an X-form state on
//! `{|00⟩, |02⟩, |20⟩, |22⟩}` whose only coherence is `d = ⟨02|ρ|20⟩`. All the
//! criteria below compare `P00·P22` against an estimate of `|d|²`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{validate_matrix, DensityOperator, Port};
use crate::linalg::{hermitian_eigen, hermitian_eigenvalues, CMatrix};
use crate::optics::{
    apply_unitary, beamsplitter_unitary, check_truncation_safe, count_distribution, phase_shift,
    BeamSplitterParams, CountDistribution, PhaseConvention,
};
use crate::settings::Tolerances;

/// Ordered filter subspace `{|00⟩, |02⟩, |20⟩, |22⟩}`.
pub const FILTER_BASIS: [(usize, usize); 4] = [(0, 0), (0, 2), (2, 0), (2, 2)];

#[derive(Debug, Clone, PartialEq)]
pub struct FilteredState {
    p_tilde: f64,
    matrix4: CMatrix,
    d: Complex64,
}

impl FilteredState {
    /// Builds a filtered state from an unnormalized 4×4 block (the projection
    /// of some ρ onto the filter subspace).
    pub fn from_block(block: CMatrix) -> Result<Self> {
        if block.nrows() != 4 || block.ncols() != 4 {
            return Err(Error::DimensionMismatch {
                expected: 4,
                actual: block.nrows().max(block.ncols()),
            });
        }
        let p_tilde = block.trace().re;
        let d = block[(1, 2)];
        let matrix4 = if p_tilde > 0.0 {
            block.unscale(p_tilde)
        } else {
            CMatrix::zeros(4, 4)
        };
        Ok(Self {
            p_tilde: p_tilde.max(0.0),
            matrix4,
            d,
        })
    }

    /// Success probability of the filter.
    pub fn p_tilde(&self) -> f64 {
        self.p_tilde
    }

    /// Normalized 4×4 state (all zeros when `p_tilde == 0`).
    pub fn matrix4(&self) -> &CMatrix {
        &self.matrix4
    }

    /// `⟨02|ρ|20⟩` of the unfiltered state.
    pub fn d(&self) -> Complex64 {
        self.d
    }

    pub fn is_empty(&self) -> bool {
        self.p_tilde == 0.0
    }

    /// Unnormalized `P00`.
    pub fn p00(&self) -> f64 {
        self.p_tilde * self.matrix4[(0, 0)].re
    }

    /// Unnormalized `P22`.
    pub fn p22(&self) -> f64 {
        self.p_tilde * self.matrix4[(3, 3)].re
    }

    pub fn is_x_form(&self, tol: f64) -> bool {
        (0..4).all(|i| {
            (0..4).all(|j| {
                i == j || (i, j) == (1, 2) || (i, j) == (2, 1) || self.matrix4[(i, j)].norm() <= tol
            })
        })
    }
}

/// Projects ρ onto the filter subspace.
pub fn filter_02(rho: &DensityOperator) -> Result<FilteredState> {
    rho.basis().require_n_max(2)?;
    let mut block = CMatrix::zeros(4, 4);
    for (i, &ri) in FILTER_BASIS.iter().enumerate() {
        for (j, &cj) in FILTER_BASIS.iter().enumerate() {
            block[(i, j)] = rho.element(ri, cj)?;
        }
    }
    FilteredState::from_block(block)
}

/// Drops every coherence between different total photon numbers.
pub fn number_twirl(fs: &FilteredState) -> FilteredState {
    let mut m = CMatrix::zeros(4, 4);
    for i in 0..4 {
        m[(i, i)] = fs.matrix4[(i, i)];
    }
    m[(1, 2)] = fs.matrix4[(1, 2)];
    m[(2, 1)] = fs.matrix4[(2, 1)];
    FilteredState {
        p_tilde: fs.p_tilde,
        matrix4: m,
        d: fs.d,
    }
}

/// `P̃·C(ρ̃) = max(0, 2|d| - 2 sqrt(P00 P22))` for a twirled filtered state.
pub fn concurrence_bound(fs: &FilteredState) -> f64 {
    (2.0 * fs.d.norm() - 2.0 * (fs.p00() * fs.p22()).max(0.0).sqrt()).max(0.0)
}

/// Normalized concurrence of the twirled filtered state; zero when the filter
/// never succeeds.
pub fn normalized_concurrence(fs: &FilteredState) -> f64 {
    if fs.is_empty() {
        0.0
    } else {
        concurrence_bound(fs) / fs.p_tilde
    }
}

fn spin_flip() -> CMatrix {
    let one = Complex64::new(1.0, 0.0);
    let mut yy = CMatrix::zeros(4, 4);
    yy[(0, 3)] = -one;
    yy[(1, 2)] = one;
    yy[(2, 1)] = one;
    yy[(3, 0)] = -one;
    yy
}

fn check_two_qubit(m: &CMatrix) -> Result<()> {
    if m.nrows() != 4 || m.ncols() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            actual: m.nrows().max(m.ncols()),
        });
    }
    Ok(())
}

/// Two-qubit concurrence, computed from the singular values of
/// `Wᵀ (σy⊗σy) W` where `ρ = W W†` is the eigen-decomposition with
/// subnormalized columns. Eigenvalues at the rounding floor are treated as
/// exact zeros.
pub fn wootters_concurrence(m: &CMatrix) -> Result<f64> {
    check_two_qubit(m)?;
    validate_matrix(m, Tolerances::global().validity).into_result()?;
    let eig = hermitian_eigen(m);
    let scale = eig.eigenvalues.iter().fold(0.0f64, |a, l| a.max(l.abs()));
    let floor = 64.0 * f64::EPSILON * scale;
    let mut w = eig.eigenvectors.clone();
    for (k, &l) in eig.eigenvalues.iter().enumerate() {
        let s = if l > floor { l.sqrt() } else { 0.0 };
        w.column_mut(k).scale_mut(s);
    }
    let tau = w.transpose() * spin_flip() * &w;
    let mut sv: Vec<f64> = tau.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok((sv[0] - sv[1] - sv[2] - sv[3]).max(0.0))
}

/// Partial transpose on the second qubit of a 4×4 matrix.
pub fn partial_transpose(m: &CMatrix) -> CMatrix {
    DMatrix::from_fn(4, 4, |i, j| {
        let (a, b) = (i / 2, i % 2);
        let (a2, b2) = (j / 2, j % 2);
        m[(2 * a + b2, 2 * a2 + b)]
    })
}

/// Sum of the magnitudes of the negative eigenvalues of the partial transpose.
pub fn negativity(m: &CMatrix) -> Result<f64> {
    check_two_qubit(m)?;
    Ok(hermitian_eigenvalues(&partial_transpose(m))
        .into_iter()
        .filter(|l| *l < 0.0)
        .map(|l| -l)
        .sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CriterionKind {
    IdealD,
    Measured,
    Asymmetric,
    Conservative,
}

/// Which algebraic form of a criterion produced a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CriterionForm {
    /// The closed form of each criterion, used by default.
    #[default]
    Standard,
    /// Asymmetric criterion with the `|1,1⟩` leakage removed as
    /// `(t² - r²)² P11`.
    PairCorrected,
    /// Conservative criterion subtracting `(3/2) P11` from `Q11 - (P20 + P02)/2`.
    WorstCase,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub criterion_kind: CriterionKind,
    pub form: CriterionForm,
    pub p0: f64,
    pub p02: f64,
    pub p20: f64,
    pub p22: f64,
    pub p11: f64,
    /// Not measured for the ideal-d criterion.
    pub q11: Option<f64>,
    /// Reflection coefficient, for the asymmetric criterion.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub r: Option<f64>,
    pub lhs: f64,
    pub rhs: f64,
    pub entangled: bool,
    /// `max(0, 2 sqrt(rhs) - 2 sqrt(lhs))` when entangled, else 0. For the
    /// ideal-d criterion this is `P̃·C(ρ̃)`, a lower bound on `C(ρ)`.
    pub concurrence_lower_bound: f64,
}

impl CriterionReport {
    fn build(
        kind: CriterionKind,
        form: CriterionForm,
        p: &CountDistribution,
        q11: Option<f64>,
        rhs: f64,
    ) -> Self {
        let p0 = p.get(0, 0);
        let p22 = p.get(2, 2);
        let lhs = p0 * p22;
        let entangled = lhs < rhs - Tolerances::global().verdict_margin;
        let bound = if entangled {
            (2.0 * rhs.sqrt() - 2.0 * lhs.sqrt()).max(0.0)
        } else {
            0.0
        };
        Self {
            criterion_kind: kind,
            form,
            p0,
            p02: p.get(0, 2),
            p20: p.get(2, 0),
            p22,
            p11: p.get(1, 1),
            q11,
            r: None,
            lhs,
            rhs,
            entangled,
            concurrence_lower_bound: bound,
        }
    }
}

/// `P00·P22 < |d|²` with `d` read from the full density operator.
pub fn criterion_ideal_d(rho: &DensityOperator) -> Result<CriterionReport> {
    rho.basis().require_n_max(2)?;
    let d = rho.d()?;
    let p = count_distribution(rho);
    Ok(CriterionReport::build(
        CriterionKind::IdealD,
        CriterionForm::Standard,
        &p,
        None,
        d.norm_sqr(),
    ))
}

/// `P00·P22 < (Q11 - (P20 + P02)/2)²` from input counts `p` and balanced
/// splitter output counts `q`.
pub fn criterion_measured(p: &CountDistribution, q: &CountDistribution) -> CriterionReport {
    let q11 = q.get(1, 1);
    let x = q11 - 0.5 * (p.get(2, 0) + p.get(0, 2));
    CriterionReport::build(
        CriterionKind::Measured,
        CriterionForm::Standard,
        p,
        Some(q11),
        x * x,
    )
}

/// `P00·P22 < ((Q11 + P11 (t² - r²)) / (4 r² t²) - (P20 + P02)/2)²`.
pub fn criterion_asymmetric(
    p: &CountDistribution,
    q: &CountDistribution,
    params: &BeamSplitterParams,
) -> Result<CriterionReport> {
    criterion_asymmetric_with(p, q, params, CriterionForm::Standard)
}

/// Asymmetric criterion in either the standard form or the pair-corrected form
/// `(Q11 - (t² - r²)² P11) / (4 r² t²) - (P20 + P02)/2`, which equals `-Re d`
/// whenever ρ carries no coherence between `|1,1⟩` and `|2,0⟩`/`|0,2⟩`.
pub fn criterion_asymmetric_with(
    p: &CountDistribution,
    q: &CountDistribution,
    params: &BeamSplitterParams,
    form: CriterionForm,
) -> Result<CriterionReport> {
    if params.is_degenerate() {
        return Err(Error::DegenerateBeamSplitter { r: params.r() });
    }
    let (r2, t2) = (params.r().powi(2), params.t().powi(2));
    let q11 = q.get(1, 1);
    let p11 = p.get(1, 1);
    let numerator = match form {
        CriterionForm::Standard => q11 + p11 * (t2 - r2),
        CriterionForm::PairCorrected => q11 - p11 * (t2 - r2).powi(2),
        CriterionForm::WorstCase => {
            return Err(Error::InvalidParameter(
                "the worst-case form applies to the conservative criterion".into(),
            ))
        }
    };
    let x = numerator / (4.0 * r2 * t2) - 0.5 * (p.get(2, 0) + p.get(0, 2));
    let mut report = CriterionReport::build(CriterionKind::Asymmetric, form, p, Some(q11), x * x);
    report.r = Some(params.r());
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanPoint {
    pub phi: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub q11: f64,
    pub detected: bool,
}

/// Open interval of detection angles. `end` may exceed 2π when the interval
/// wraps through zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DetectionInterval {
    pub start: f64,
    pub end: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseScan {
    pub convention: PhaseConvention,
    pub points: Vec<ScanPoint>,
    pub intervals: Vec<DetectionInterval>,
    /// Grid angle maximizing `Q11`, which also maximizes the right-hand side.
    pub argmax_phi: f64,
}

const SCAN_BISECTION_TOL: f64 = 1e-6;

/// Scans a phase on port A over `[0, 2π)` and evaluates the balanced measured
/// criterion at each grid angle.
pub fn scan_phase(
    rho: &DensityOperator,
    n_points: usize,
    convention: PhaseConvention,
) -> Result<PhaseScan> {
    if n_points < 8 {
        return Err(Error::InvalidParameter(format!(
            "phase scan needs at least 8 points, got {n_points}"
        )));
    }
    rho.basis().require_n_max(2)?;
    check_truncation_safe(rho)?;
    let u = beamsplitter_unitary(rho.basis(), &BeamSplitterParams::balanced());
    let p = count_distribution(rho);
    let margin = Tolerances::global().verdict_margin;

    let evaluate = |phi: f64| -> Result<ScanPoint> {
        let shifted = phase_shift(rho, Port::A, phi, convention);
        let q = count_distribution(&apply_unitary(&shifted, &u)?);
        let rep = criterion_measured(&p, &q);
        Ok(ScanPoint {
            phi,
            lhs: rep.lhs,
            rhs: rep.rhs,
            q11: q.get(1, 1),
            detected: rep.entangled,
        })
    };

    let two_pi = std::f64::consts::TAU;
    let step = two_pi / n_points as f64;
    let points = (0..n_points)
        .map(|k| evaluate(k as f64 * step))
        .collect::<Result<Vec<_>>>()?;

    // refine each sign change of rhs - margin - lhs
    let mut crossings = Vec::new();
    for k in 0..n_points {
        let here = points[k].detected;
        let next = points[(k + 1) % n_points].detected;
        if here == next {
            continue;
        }
        let (mut lo, mut hi) = (k as f64 * step, (k + 1) as f64 * step);
        while hi - lo > SCAN_BISECTION_TOL {
            let mid = 0.5 * (lo + hi);
            let pt = evaluate(mid)?;
            if (pt.lhs < pt.rhs - margin) == here {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        crossings.push((0.5 * (lo + hi), next));
    }

    let intervals = if crossings.is_empty() {
        if points[0].detected {
            vec![DetectionInterval {
                start: 0.0,
                end: two_pi,
            }]
        } else {
            Vec::new()
        }
    } else {
        let first_rise = crossings.iter().position(|c| c.1).unwrap_or(0);
        let n = crossings.len();
        let mut out = Vec::new();
        for i in (first_rise..).take(n) {
            let (start, rising) = crossings[i % n];
            if rising {
                let (mut end, _) = crossings[(i + 1) % n];
                if end <= start {
                    end += two_pi;
                }
                out.push(DetectionInterval { start, end });
            }
        }
        out.sort_by(|a, b| a.start.total_cmp(&b.start));
        out
    };

    let argmax_phi = points
        .iter()
        .fold((f64::NEG_INFINITY, 0.0), |(best, at), pt| {
            if pt.q11 > best {
                (pt.q11, pt.phi)
            } else {
                (best, at)
            }
        })
        .1;

    Ok(PhaseScan {
        convention,
        points,
        intervals,
        argmax_phi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{pure_to_density, PureState, TwoModeBasis};
    use crate::linalg::{c, ZERO};
    use crate::optics::q_distribution;
    use crate::states;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn basis() -> TwoModeBasis {
        TwoModeBasis::new(4).unwrap()
    }

    fn zero_block() -> CMatrix {
        CMatrix::from_element(4, 4, ZERO)
    }

    fn bell() -> CMatrix {
        let mut m = zero_block();
        for (i, j) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
            m[(i, j)] = c(0.5, 0.0);
        }
        m
    }

    #[test]
    fn filter_examples() {
        let hom = pure_to_density(&states::hom_state(basis()).unwrap()).unwrap();
        let fs = filter_02(&hom).unwrap();
        assert!((fs.p_tilde() - 1.0).abs() < 1e-15);
        assert!((fs.d() - c(-0.5, 0.0)).norm() < 1e-15);
        assert!((fs.matrix4()[(1, 1)].re - 0.5).abs() < 1e-15);

        let one_one = PureState::from_components(basis(), &[((1, 1), c(1.0, 0.0))]).unwrap();
        let fs = filter_02(&pure_to_density(&one_one).unwrap()).unwrap();
        assert_eq!(fs.p_tilde(), 0.0);
        assert!(fs.is_empty());

        let fs = filter_02(&states::rho2(basis()).unwrap()).unwrap();
        assert!((fs.p_tilde() - 1.0).abs() < 1e-15);
        assert!((fs.d() - c(0.0, 0.25)).norm() < 1e-15);

        let small = states::rho1(TwoModeBasis::new(1).unwrap());
        assert!(small.is_err());
    }

    #[test]
    fn twirl_examples() {
        let hom = pure_to_density(&states::hom_state(basis()).unwrap()).unwrap();
        let fs = filter_02(&hom).unwrap();
        assert_eq!(number_twirl(&fs), fs);

        let s = FRAC_1_SQRT_2;
        let ghz = PureState::from_components(basis(), &[((0, 0), c(s, 0.0)), ((2, 2), c(s, 0.0))])
            .unwrap();
        let tw = number_twirl(&filter_02(&pure_to_density(&ghz).unwrap()).unwrap());
        assert!(tw.is_x_form(0.0));
        assert!((tw.matrix4()[(0, 0)].re - 0.5).abs() < 1e-15);
        assert_eq!(tw.matrix4()[(0, 3)], ZERO);
        assert_eq!(tw.d(), ZERO);
        // idempotent
        assert_eq!(number_twirl(&tw), tw);
    }

    #[test]
    fn concurrence_bound_examples() {
        let hom = pure_to_density(&states::hom_state(basis()).unwrap()).unwrap();
        assert!((concurrence_bound(&number_twirl(&filter_02(&hom).unwrap())) - 1.0).abs() < 1e-15);
        let r1 = states::rho1(basis()).unwrap();
        let fs = number_twirl(&filter_02(&r1).unwrap());
        assert!((concurrence_bound(&fs) - 1.0 / 3.0).abs() < 1e-15);
        let prod = states::separable_product(basis(), 0.7, 1.9).unwrap();
        let fs = number_twirl(&filter_02(&pure_to_density(&prod).unwrap()).unwrap());
        assert!(concurrence_bound(&fs) < 1e-15);
    }

    #[test]
    fn wootters_examples() {
        assert!((wootters_concurrence(&bell()).unwrap() - 1.0).abs() < 1e-12);
        let mixed = CMatrix::identity(4, 4).scale(0.25);
        assert!(wootters_concurrence(&mixed).unwrap() < 1e-15);
        let r1 = states::rho1(basis()).unwrap();
        let fs = number_twirl(&filter_02(&r1).unwrap());
        assert!((wootters_concurrence(fs.matrix4()).unwrap() - 1.0 / 3.0).abs() < 1e-10);

        let mut bad = mixed.clone();
        bad[(0, 0)] = c(-0.25, 0.0);
        bad[(1, 1)] = c(0.75, 0.0);
        assert!(wootters_concurrence(&bad).is_err());
        assert!(wootters_concurrence(&CMatrix::identity(3, 3)).is_err());
    }

    #[test]
    fn negativity_examples() {
        assert!((negativity(&bell()).unwrap() - 0.5).abs() < 1e-12);
        let mut prod = zero_block();
        prod[(0, 0)] = c(1.0, 0.0);
        assert!(negativity(&prod).unwrap() < 1e-15);
        let r1 = states::rho1(basis()).unwrap();
        let fs = number_twirl(&filter_02(&r1).unwrap());
        assert!(concurrence_bound(&fs) > 0.0);
        assert!(negativity(fs.matrix4()).unwrap() > 1e-3);
    }

    #[test]
    fn ideal_d_examples() {
        let r1 = criterion_ideal_d(&states::rho1(basis()).unwrap()).unwrap();
        assert!((r1.lhs - 1.0 / 36.0).abs() < 1e-15);
        assert!((r1.rhs - 1.0 / 9.0).abs() < 1e-15);
        assert!(r1.entangled);
        assert!((r1.concurrence_lower_bound - 1.0 / 3.0).abs() < 1e-14);

        let vac = PureState::from_components(basis(), &[((0, 0), c(1.0, 0.0))]).unwrap();
        let v = criterion_ideal_d(&pure_to_density(&vac).unwrap()).unwrap();
        assert_eq!((v.lhs, v.rhs, v.entangled), (0.0, 0.0, false));

        let r2 = criterion_ideal_d(&states::rho2(basis()).unwrap()).unwrap();
        assert!((r2.lhs - 1.0 / 18.0).abs() < 1e-15);
        assert!((r2.rhs - 1.0 / 16.0).abs() < 1e-15);
        assert!(r2.entangled);
    }

    #[test]
    fn measured_examples() {
        let bs = BeamSplitterParams::balanced();
        let hom = pure_to_density(&states::hom_state(basis()).unwrap()).unwrap();
        let rep = criterion_measured(
            &count_distribution(&hom),
            &q_distribution(&hom, &bs).unwrap(),
        );
        assert_eq!(rep.lhs, 0.0);
        assert!((rep.rhs - 0.25).abs() < 1e-12);
        assert!(rep.entangled);

        let r1 = states::rho1(basis()).unwrap();
        let rep = criterion_measured(&count_distribution(&r1), &q_distribution(&r1, &bs).unwrap());
        assert!(rep.rhs < 1e-25);
        assert!(!rep.entangled);
    }

    #[test]
    fn asymmetric_examples() {
        let hom = pure_to_density(&states::hom_state(basis()).unwrap()).unwrap();
        let p = count_distribution(&hom);
        let bs = BeamSplitterParams::new(0.6).unwrap();
        let rep = criterion_asymmetric(&p, &q_distribution(&hom, &bs).unwrap(), &bs).unwrap();
        assert!(rep.entangled);
        assert!((rep.rhs - 0.25).abs() < 1e-12);
        assert_eq!(rep.r, Some(0.6));

        let bal = BeamSplitterParams::balanced();
        let q = q_distribution(&hom, &bal).unwrap();
        let a = criterion_asymmetric(&p, &q, &bal).unwrap();
        let m = criterion_measured(&p, &q);
        assert!((a.rhs - m.rhs).abs() < 1e-12);
        assert_eq!(a.entangled, m.entangled);

        for r in [0.0, 1.0] {
            let dg = BeamSplitterParams::new(r).unwrap();
            assert!(matches!(
                criterion_asymmetric(&p, &q, &dg),
                Err(Error::DegenerateBeamSplitter { .. })
            ));
        }
    }

    #[test]
    fn asymmetric_reduces_without_pairs() {
        // P11 = 0: the criterion is Q11/(4r²t²) - (P20+P02)/2, squared
        let p = CountDistribution::from_table(2, vec![0.2, 0.0, 0.3, 0.0, 0.0, 0.0, 0.4, 0.0, 0.1])
            .unwrap();
        let q =
            CountDistribution::from_table(2, vec![0.2, 0.0, 0.3, 0.0, 0.25, 0.0, 0.15, 0.0, 0.1])
                .unwrap();
        let bs = BeamSplitterParams::new(0.4).unwrap();
        let rep = criterion_asymmetric(&p, &q, &bs).unwrap();
        let x = 0.25 / (4.0 * 0.16 * 0.84) - 0.5 * 0.7;
        assert!((rep.rhs - x * x).abs() < 1e-15);
    }

    #[test]
    fn scan_of_vacuum_is_empty_and_hom_is_almost_everywhere() {
        let vac = PureState::from_components(basis(), &[((0, 0), c(1.0, 0.0))]).unwrap();
        let scan = scan_phase(
            &pure_to_density(&vac).unwrap(),
            64,
            PhaseConvention::default(),
        )
        .unwrap();
        assert!(scan.intervals.is_empty());
        assert!(scan_phase(
            &pure_to_density(&vac).unwrap(),
            4,
            PhaseConvention::default()
        )
        .is_err());

        let hom = pure_to_density(&states::hom_state(basis()).unwrap()).unwrap();
        let scan = scan_phase(&hom, 256, PhaseConvention::PerFockComponent).unwrap();
        // rhs = cos²φ / 4
        for pt in &scan.points {
            assert!((pt.rhs - 0.25 * pt.phi.cos().powi(2)).abs() < 1e-12);
        }
        assert_eq!(scan.intervals.len(), 2);
        let a = scan.intervals[0];
        assert!((a.start - PI / 2.0).abs() < 1e-4 && (a.end - 1.5 * PI).abs() < 1e-4);
        let b = scan.intervals[1];
        assert!((b.start - 1.5 * PI).abs() < 1e-4 && (b.end - 2.5 * PI).abs() < 1e-4);
        assert!(scan.argmax_phi.abs() < 1e-12);
    }
}
