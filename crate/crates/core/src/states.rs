//! Named states and seeded random separable-state generators.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{pure_to_density, DensityOperator, Port, PureState, TwoModeBasis};
use crate::linalg::{c, CMatrix};
use crate::multimode::{
    criterion_conservative, criterion_conservative_worst_case, mm_beamsplitter,
    mm_count_distribution, two_photon_probability, MultiModeBasis, MultiModeDensity, Occupation,
    DEFAULT_MODES, DEFAULT_N_MAX_TOTAL,
};
use crate::optics::{
    count_distribution, phase_shift, q_distribution, BeamSplitterParams, CountDistribution,
    PhaseConvention,
};
use crate::verify::{
    criterion_asymmetric_with, criterion_ideal_d, criterion_measured, CriterionForm, CriterionKind,
    CriterionReport,
};

/// Cutoff used for named states: large enough that `|2,2⟩` survives the
/// splitter without truncation.
pub const DEFAULT_N_MAX: usize = 4;

/// Identifier recorded with every generated dataset. Item `k` of a batch with
/// seed `s` is drawn from `ChaCha8Rng::seed_from_u64(s)` on stream `k`.
pub const PRNG_ID: &str = "chacha8/seed_from_u64/stream=item";

/// Real coefficients `a, b` of the boundary family are uniform on `[0, BOUNDARY_MAX]`.
pub const BOUNDARY_MAX: f64 = 3.0;
/// Complex coefficients of the mixture family have modulus uniform on
/// `[0, MIXTURE_MODULUS_MAX]` and phase uniform on `[0, 2π)`.
pub const MIXTURE_MODULUS_MAX: f64 = 1.5;

pub fn item_rng(seed: u64, item: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(item);
    rng
}

/// `(|0,2⟩ - |2,0⟩)/√2`
pub fn hom_state(basis: TwoModeBasis) -> Result<PureState> {
    basis.require_n_max(2)?;
    PureState::from_components(
        basis,
        &[
            ((0, 2), c(FRAC_1_SQRT_2, 0.0)),
            ((2, 0), c(-FRAC_1_SQRT_2, 0.0)),
        ],
    )
}

fn projector(
    basis: TwoModeBasis,
    comps: &[((usize, usize), Complex64)],
) -> Result<DensityOperator> {
    pure_to_density(&PureState::from_components(basis, comps)?.normalize()?)
}

/// `w_vac |00⟩⟨00| + w_pair (|20⟩ + i|02⟩)(⟨20| - i⟨02|)/2 + w_four |22⟩⟨22|`
fn vacuum_pair_four(
    basis: TwoModeBasis,
    w_vac: f64,
    w_pair: f64,
    w_four: f64,
) -> Result<DensityOperator> {
    basis.require_n_max(2)?;
    let vac = projector(basis, &[((0, 0), c(1.0, 0.0))])?;
    let pair = projector(basis, &[((2, 0), c(1.0, 0.0)), ((0, 2), c(0.0, 1.0))])?;
    let four = projector(basis, &[((2, 2), c(1.0, 0.0))])?;
    DensityOperator::mixture(&[(w_vac, &vac), (w_pair, &pair), (w_four, &four)])
}

/// `1/6 |00⟩⟨00| + 1/3 (|20⟩+i|02⟩)(⟨20|-i⟨02|) + 1/6 |22⟩⟨22|`
pub fn rho1(basis: TwoModeBasis) -> Result<DensityOperator> {
    vacuum_pair_four(basis, 1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0)
}

/// `1/3 |00⟩⟨00| + 1/4 (|20⟩+i|02⟩)(⟨20|-i⟨02|) + 1/6 |22⟩⟨22|`
pub fn rho2(basis: TwoModeBasis) -> Result<DensityOperator> {
    vacuum_pair_four(basis, 1.0 / 3.0, 1.0 / 2.0, 1.0 / 6.0)
}

/// Vacuum and four-photon contamination plus dephasing of the pair coherence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NoiseSpec {
    pub p_vacuum: f64,
    pub p_four: f64,
    /// Multiplies the `|0,2⟩`–`|2,0⟩` coherence; 1 is fully coherent.
    pub dephase: f64,
    /// Relative phase φ in `(|0,2⟩ - e^{iφ}|2,0⟩)/√2`.
    pub phase: f64,
}

impl Default for NoiseSpec {
    fn default() -> Self {
        Self {
            p_vacuum: 0.0,
            p_four: 0.0,
            dephase: 1.0,
            phase: 0.0,
        }
    }
}

impl NoiseSpec {
    pub fn check(&self) -> Result<()> {
        let ok = self.p_vacuum >= 0.0
            && self.p_four >= 0.0
            && self.p_vacuum + self.p_four <= 1.0
            && (0.0..=1.0).contains(&self.dephase)
            && self.phase.is_finite();
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "invalid noise spec {self:?}"
            )))
        }
    }
}

/// `w ρ_pair + p_vacuum |00⟩⟨00| + p_four |22⟩⟨22|` with `w = 1 - p_vacuum - p_four`
/// and `ρ_pair` the HOM pair with its coherence scaled by `dephase` and
/// rotated by `phase`, so `d = -(w/2) dephase e^{-iφ}`.
pub fn noisy_hom(basis: TwoModeBasis, spec: &NoiseSpec) -> Result<DensityOperator> {
    spec.check()?;
    basis.require_n_max(2)?;
    let w = 1.0 - spec.p_vacuum - spec.p_four;
    let mut m = CMatrix::zeros(basis.dim(), basis.dim());
    let i00 = basis.index(0, 0)?;
    let i02 = basis.index(0, 2)?;
    let i20 = basis.index(2, 0)?;
    let i22 = basis.index(2, 2)?;
    m[(i00, i00)] = c(spec.p_vacuum, 0.0);
    m[(i22, i22)] = c(spec.p_four, 0.0);
    m[(i02, i02)] = c(0.5 * w, 0.0);
    m[(i20, i20)] = c(0.5 * w, 0.0);
    let d = Complex64::from_polar(-0.5 * w * spec.dephase, -spec.phase);
    m[(i02, i20)] = d;
    m[(i20, i02)] = d.conj();
    DensityOperator::from_matrix(basis, m)
}

/// Normalized `(|0⟩ + a|2⟩) ⊗ (|0⟩ + b|2⟩)` for real `a, b`.
pub fn separable_product(basis: TwoModeBasis, a: f64, b: f64) -> Result<PureState> {
    basis.require_n_max(2)?;
    PureState::from_components(
        basis,
        &[
            ((0, 0), c(1.0, 0.0)),
            ((0, 2), c(b, 0.0)),
            ((2, 0), c(a, 0.0)),
            ((2, 2), c(a * b, 0.0)),
        ],
    )?
    .normalize()
}

#[derive(Debug, Clone)]
pub struct BoundarySample {
    pub a: f64,
    pub b: f64,
    pub state: PureState,
}

/// One member of the real product family, which sits exactly on the
/// criterion boundary.
pub fn random_separable_boundary<R: Rng + ?Sized>(
    basis: TwoModeBasis,
    rng: &mut R,
) -> Result<BoundarySample> {
    let a = rng.gen_range(0.0..=BOUNDARY_MAX);
    let b = rng.gen_range(0.0..=BOUNDARY_MAX);
    Ok(BoundarySample {
        a,
        b,
        state: separable_product(basis, a, b)?,
    })
}

fn random_coefficient<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let modulus = rng.gen_range(0.0..=MIXTURE_MODULUS_MAX);
    let phase = rng.gen_range(0.0..TAU);
    Complex64::from_polar(modulus, phase)
}

/// Normalized `(|0⟩ + x1|1⟩ + x2|2⟩) ⊗ (|0⟩ + y1|1⟩ + y2|2⟩)`.
pub fn qutrit_product(
    basis: TwoModeBasis,
    x: [Complex64; 2],
    y: [Complex64; 2],
) -> Result<PureState> {
    basis.require_n_max(2)?;
    let fa = [c(1.0, 0.0), x[0], x[1]];
    let fb = [c(1.0, 0.0), y[0], y[1]];
    let mut comps = Vec::with_capacity(9);
    for (i, za) in fa.iter().enumerate() {
        for (j, zb) in fb.iter().enumerate() {
            comps.push(((i, j), za * zb));
        }
    }
    PureState::from_components(basis, &comps)?.normalize()
}

#[derive(Debug, Clone)]
pub struct MixtureSample {
    pub weight: f64,
    pub state: DensityOperator,
}

/// `w |φ1⟩⟨φ1| + (1 - w) |φ2⟩⟨φ2|` for two random complex qutrit products.
pub fn random_separable_mixture<R: Rng + ?Sized>(
    basis: TwoModeBasis,
    rng: &mut R,
) -> Result<MixtureSample> {
    let draw = |rng: &mut R| -> Result<DensityOperator> {
        let x = [random_coefficient(rng), random_coefficient(rng)];
        let y = [random_coefficient(rng), random_coefficient(rng)];
        pure_to_density(&qutrit_product(basis, x, y)?)
    };
    let first = draw(rng)?;
    let second = draw(rng)?;
    let weight: f64 = rng.gen_range(0.0..=1.0);
    Ok(MixtureSample {
        weight,
        state: DensityOperator::mixture(&[(weight, &first), (1.0 - weight, &second)])?,
    })
}

/// Random full-rank density operator (normalized complex Ginibre) supported
/// on the listed occupations.
pub fn random_density_on<R: Rng + ?Sized>(
    basis: TwoModeBasis,
    support: &[(usize, usize)],
    rng: &mut R,
) -> Result<DensityOperator> {
    let idx = support
        .iter()
        .map(|&(a, b)| basis.index(a, b))
        .collect::<Result<Vec<_>>>()?;
    let k = idx.len();
    let g = CMatrix::from_fn(k, k, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let small = &g * g.adjoint();
    let tr = small.trace().re;
    let mut m = CMatrix::zeros(basis.dim(), basis.dim());
    for (x, &i) in idx.iter().enumerate() {
        for (y, &j) in idx.iter().enumerate() {
            m[(i, j)] = small[(x, y)] / tr;
        }
    }
    DensityOperator::from_matrix(basis, m)
}

/// `(|10⟩_red + |01⟩_red) ⊗ (|10⟩_blue - |01⟩_blue) / 2`, red = internal
/// mode 0, blue = internal mode 1.
pub fn worst_case_two_color(basis: Arc<MultiModeBasis>) -> Result<MultiModeDensity> {
    if basis.modes() != 2 || basis.n_max_total() < 2 {
        return Err(Error::InvalidBasis(
            "the two-color state needs m = 2 and n_max_total >= 2".into(),
        ));
    }
    let occ = |a: [usize; 2], b: [usize; 2]| Occupation::new(a.to_vec(), b.to_vec());
    MultiModeDensity::from_components(
        basis,
        &[
            (occ([1, 1], [0, 0])?, c(0.5, 0.0)),
            (occ([1, 0], [0, 1])?, c(-0.5, 0.0)),
            (occ([0, 1], [1, 0])?, c(0.5, 0.0)),
            (occ([0, 0], [1, 1])?, c(-0.5, 0.0)),
        ],
    )
}

/// A state addressable by name or loaded from file.
#[derive(Debug, Clone, PartialEq)]
pub enum State {
    Single(DensityOperator),
    Multi(MultiModeDensity),
}

pub const NAMED_STATES: [&str; 5] = ["hom", "rho1", "rho2", "worst2color", "vacuum"];

pub fn named(id: &str) -> Result<State> {
    let basis = TwoModeBasis::new(DEFAULT_N_MAX)?;
    match id {
        "hom" => Ok(State::Single(pure_to_density(&hom_state(basis)?)?)),
        "rho1" => Ok(State::Single(rho1(basis)?)),
        "rho2" => Ok(State::Single(rho2(basis)?)),
        "vacuum" => Ok(State::Single(projector(basis, &[((0, 0), c(1.0, 0.0))])?)),
        "worst2color" => Ok(State::Multi(worst_case_two_color(MultiModeBasis::new(
            DEFAULT_MODES,
            DEFAULT_N_MAX_TOTAL,
        )?)?)),
        other => Err(Error::UnknownState(other.to_string())),
    }
}

impl State {
    /// Phase on port A. Multimode states accept only `phi == 0`.
    pub fn phase_shifted(&self, phi: f64, convention: PhaseConvention) -> Result<State> {
        match self {
            State::Single(rho) => Ok(State::Single(phase_shift(rho, Port::A, phi, convention))),
            State::Multi(_) if phi == 0.0 => Ok(self.clone()),
            State::Multi(_) => Err(Error::InvalidParameter(
                "phase shifts are only supported for single-mode states".into(),
            )),
        }
    }

    /// Input-port counts and color-blind counts after the splitter.
    pub fn counts(
        &self,
        params: &BeamSplitterParams,
    ) -> Result<(CountDistribution, CountDistribution)> {
        match self {
            State::Single(rho) => Ok((count_distribution(rho), q_distribution(rho, params)?)),
            State::Multi(rho) => Ok((
                mm_count_distribution(rho),
                mm_count_distribution(&mm_beamsplitter(rho, params)),
            )),
        }
    }
}

/// Count-based criteria. `params` is used by the asymmetric criterion only.
pub fn evaluate_counts(
    p: &CountDistribution,
    q: &CountDistribution,
    kind: CriterionKind,
    form: CriterionForm,
    params: &BeamSplitterParams,
) -> Result<CriterionReport> {
    match kind {
        CriterionKind::IdealD => Err(Error::InvalidParameter(
            "the ideal-d criterion needs a full density matrix, not count data".into(),
        )),
        CriterionKind::Measured => Ok(criterion_measured(p, q)),
        CriterionKind::Asymmetric => criterion_asymmetric_with(p, q, params, form),
        CriterionKind::Conservative => Ok(match form {
            CriterionForm::WorstCase => criterion_conservative_worst_case(p, q),
            _ => criterion_conservative(p, q, two_photon_probability(p)),
        }),
    }
}

/// Simulates the counts a criterion needs and evaluates it. The splitter is
/// balanced except for the asymmetric criterion, which uses `params`.
pub fn evaluate(
    state: &State,
    kind: CriterionKind,
    form: CriterionForm,
    params: &BeamSplitterParams,
) -> Result<CriterionReport> {
    if kind == CriterionKind::IdealD {
        return match state {
            State::Single(rho) => criterion_ideal_d(rho),
            State::Multi(_) => Err(Error::InvalidParameter(
                "the ideal-d criterion needs a single-mode density matrix".into(),
            )),
        };
    }
    let splitter = if kind == CriterionKind::Asymmetric {
        *params
    } else {
        BeamSplitterParams::balanced()
    };
    let (p, q) = state.counts(&splitter)?;
    evaluate_counts(&p, &q, kind, form, params)
}
