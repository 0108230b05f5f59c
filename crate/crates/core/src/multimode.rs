//! Internal (color, polarization) modes on top of the two spatial ports.
//!
//! A basis element is an occupation table `n[port][k]` for ports A, B and
//! internal modes `k = 0..m`, truncated on the total photon number. Detectors
//! are color-blind: count statistics sum over internal modes.

use std::collections::HashMap;
use std::sync::Arc;

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{validate_matrix, DensityOperator, Port, ValidityReport};
use crate::linalg::{CMatrix, ZERO};
use crate::optics::{transformed_fock, BeamSplitterParams, CountDistribution};
use crate::settings::Tolerances;
use crate::verify::{CriterionForm, CriterionKind, CriterionReport};

/// Per-port occupation vectors over the internal modes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Occupation {
    a: Vec<usize>,
    b: Vec<usize>,
}

impl Occupation {
    pub fn new(a: Vec<usize>, b: Vec<usize>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::InvalidParameter(format!(
                "port occupation vectors differ in length ({} vs {})",
                a.len(),
                b.len()
            )));
        }
        Ok(Self { a, b })
    }

    pub fn vacuum(modes: usize) -> Self {
        Self {
            a: vec![0; modes],
            b: vec![0; modes],
        }
    }

    pub fn port(&self, port: Port) -> &[usize] {
        match port {
            Port::A => &self.a,
            Port::B => &self.b,
        }
    }

    pub fn port_total(&self, port: Port) -> usize {
        self.port(port).iter().sum()
    }

    pub fn total(&self) -> usize {
        self.port_total(Port::A) + self.port_total(Port::B)
    }

    pub fn modes(&self) -> usize {
        self.a.len()
    }

    /// Photons in internal mode `k`, both ports together.
    pub fn combined(&self, k: usize) -> usize {
        self.a[k] + self.b[k]
    }

    /// True when every photon present shares one internal mode.
    pub fn is_single_internal_mode(&self) -> bool {
        (0..self.modes()).filter(|&k| self.combined(k) > 0).count() <= 1
    }

    fn with(&self, port: Port, k: usize, delta: isize) -> Option<Self> {
        let mut out = self.clone();
        let slot = match port {
            Port::A => &mut out.a[k],
            Port::B => &mut out.b[k],
        };
        *slot = slot.checked_add_signed(delta)?;
        Some(out)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiModeBasis {
    modes: usize,
    n_max_total: usize,
    elements: Vec<Occupation>,
    index: HashMap<Occupation, usize>,
}

pub const DEFAULT_MODES: usize = 2;
pub const DEFAULT_N_MAX_TOTAL: usize = 4;

fn compositions(slots: usize, budget: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if prefix.len() == slots {
        out.push(prefix.clone());
        return;
    }
    let used: usize = prefix.iter().sum();
    for n in 0..=(budget - used) {
        prefix.push(n);
        compositions(slots, budget, prefix, out);
        prefix.pop();
    }
}

impl MultiModeBasis {
    /// Elements are ordered by total photon number, then lexicographically on
    /// `(n[A][0..m], n[B][0..m])`.
    pub fn new(modes: usize, n_max_total: usize) -> Result<Arc<Self>> {
        if modes == 0 {
            return Err(Error::InvalidBasis(
                "need at least one internal mode".into(),
            ));
        }
        if n_max_total == 0 {
            return Err(Error::InvalidBasis("n_max_total must be at least 1".into()));
        }
        let mut flat = Vec::new();
        compositions(2 * modes, n_max_total, &mut Vec::new(), &mut flat);
        let mut elements: Vec<Occupation> = flat
            .into_iter()
            .map(|v| Occupation {
                a: v[..modes].to_vec(),
                b: v[modes..].to_vec(),
            })
            .collect();
        elements.sort_by(|x, y| x.total().cmp(&y.total()).then_with(|| x.cmp(y)));
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        Ok(Arc::new(Self {
            modes,
            n_max_total,
            elements,
            index,
        }))
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn n_max_total(&self) -> usize {
        self.n_max_total
    }

    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Occupation] {
        &self.elements
    }

    pub fn index(&self, occ: &Occupation) -> Result<usize> {
        self.index.get(occ).copied().ok_or_else(|| {
            Error::InvalidParameter(format!(
                "occupation {occ:?} not in basis (m = {}, n_max_total = {})",
                self.modes, self.n_max_total
            ))
        })
    }

    /// Creation operator for internal mode `k` on `port`; raising past the
    /// total-photon cutoff maps to zero.
    pub fn creation(&self, port: Port, k: usize) -> Result<CMatrix> {
        if k >= self.modes {
            return Err(Error::InvalidParameter(format!(
                "internal mode {k} out of range (m = {})",
                self.modes
            )));
        }
        let dim = self.dim();
        let mut m = CMatrix::zeros(dim, dim);
        for (col, occ) in self.elements.iter().enumerate() {
            let n = occ.port(port)[k];
            if let Some(row) = occ
                .with(port, k, 1)
                .and_then(|o| self.index.get(&o).copied())
            {
                m[(row, col)] = Complex64::new(((n + 1) as f64).sqrt(), 0.0);
            }
        }
        Ok(m)
    }

    fn vacuum_vector(&self) -> DVector<Complex64> {
        let mut v = DVector::from_element(self.dim(), ZERO);
        v[0] = Complex64::new(1.0, 0.0);
        v
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiModeDensity {
    basis: Arc<MultiModeBasis>,
    matrix: CMatrix,
}

impl MultiModeDensity {
    pub fn from_matrix(basis: Arc<MultiModeBasis>, matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != basis.dim() || matrix.ncols() != basis.dim() {
            return Err(Error::DimensionMismatch {
                expected: basis.dim(),
                actual: matrix.nrows().max(matrix.ncols()),
            });
        }
        Ok(Self { basis, matrix })
    }

    /// Projector onto the normalized pure state with the given components.
    pub fn from_components(
        basis: Arc<MultiModeBasis>,
        components: &[(Occupation, Complex64)],
    ) -> Result<Self> {
        let mut v = DVector::from_element(basis.dim(), ZERO);
        for (occ, z) in components {
            v[basis.index(occ)?] += *z;
        }
        let norm = v.norm();
        if norm == 0.0 {
            return Err(Error::NotNormalized { norm_sq: 0.0 });
        }
        if (norm * norm - 1.0).abs() > Tolerances::global().normalization {
            return Err(Error::NotNormalized {
                norm_sq: norm * norm,
            });
        }
        let matrix = &v * v.adjoint();
        Ok(Self { basis, matrix })
    }

    /// Places a single-mode state into internal mode `k`.
    pub fn embed_single(
        rho: &DensityOperator,
        basis: Arc<MultiModeBasis>,
        k: usize,
    ) -> Result<Self> {
        if k >= basis.modes() {
            return Err(Error::InvalidParameter(format!(
                "internal mode {k} out of range"
            )));
        }
        let src = rho.basis();
        let mut slots = Vec::with_capacity(src.dim());
        for (i, a, b) in src.iter() {
            let mut occ = Occupation::vacuum(basis.modes());
            occ.a[k] = a;
            occ.b[k] = b;
            slots.push((i, basis.index.get(&occ).copied()));
        }
        let mut m = CMatrix::zeros(basis.dim(), basis.dim());
        for &(i, ti) in &slots {
            for &(j, tj) in &slots {
                let z = rho.matrix()[(i, j)];
                if z == ZERO {
                    continue;
                }
                match (ti, tj) {
                    (Some(x), Some(y)) => m[(x, y)] = z,
                    _ => {
                        let (a, b) = src.occupation(if ti.is_none() { i } else { j });
                        return Err(Error::TruncationUnsafe {
                            max_total: a + b,
                            n_max: basis.n_max_total(),
                        });
                    }
                }
            }
        }
        Ok(Self { basis, matrix: m })
    }

    pub fn basis(&self) -> &Arc<MultiModeBasis> {
        &self.basis
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn validate(&self) -> ValidityReport {
        validate_matrix(&self.matrix, Tolerances::global().validity)
    }

    fn diagonal(&self) -> impl Iterator<Item = (&Occupation, f64)> + '_ {
        self.basis
            .elements
            .iter()
            .enumerate()
            .map(|(i, occ)| (occ, self.matrix[(i, i)].re))
    }
}

/// The splitter unitary applied independently to every pair `(A_k, B_k)`.
pub fn mm_beamsplitter_unitary(basis: &MultiModeBasis, params: &BeamSplitterParams) -> CMatrix {
    let dim = basis.dim();
    let m = basis.modes();
    let mut u = CMatrix::zeros(dim, dim);
    for (col, occ) in basis.elements.iter().enumerate() {
        // partial products over internal modes: (output A occupations, amplitude)
        let mut branches: Vec<(Vec<usize>, f64)> = vec![(Vec::with_capacity(m), 1.0)];
        for k in 0..m {
            let amps = transformed_fock(params, occ.a[k], occ.b[k]);
            let mut next = Vec::with_capacity(branches.len() * amps.len());
            for (prefix, amp) in &branches {
                for (p, a) in amps.iter().enumerate() {
                    if *a == 0.0 {
                        continue;
                    }
                    let mut v = prefix.clone();
                    v.push(p);
                    next.push((v, amp * a));
                }
            }
            branches = next;
        }
        for (out_a, amp) in branches {
            let out_b = (0..m).map(|k| occ.combined(k) - out_a[k]).collect();
            let out = Occupation { a: out_a, b: out_b };
            let row = basis.index[&out];
            u[(row, col)] += Complex64::new(amp, 0.0);
        }
    }
    u
}

/// The basis truncates on total photon number, which the splitter conserves,
/// so the result is exact.
pub fn mm_beamsplitter(rho: &MultiModeDensity, params: &BeamSplitterParams) -> MultiModeDensity {
    let u = mm_beamsplitter_unitary(&rho.basis, params);
    MultiModeDensity {
        basis: rho.basis.clone(),
        matrix: &u * &rho.matrix * u.adjoint(),
    }
}

/// Color-blind joint counts per spatial port.
pub fn mm_count_distribution(rho: &MultiModeDensity) -> CountDistribution {
    let n = rho.basis.n_max_total();
    let side = n + 1;
    let mut table = vec![0.0; side * side];
    for (occ, p) in rho.diagonal() {
        table[occ.port_total(Port::A) * side + occ.port_total(Port::B)] += p;
    }
    CountDistribution::clipped(n, table)
}

/// Probability of one photon per port with the two photons in different
/// internal modes.
pub fn off_color_p11(rho: &MultiModeDensity) -> f64 {
    rho.diagonal()
        .filter(|(occ, _)| {
            occ.port_total(Port::A) == 1
                && occ.port_total(Port::B) == 1
                && occ.a.iter().position(|&n| n == 1) != occ.b.iter().position(|&n| n == 1)
        })
        .map(|(_, p)| p.max(0.0))
        .sum()
}

/// Total two-photon detection probability `Σ_{i+j=2} P[i][j]`.
pub fn two_photon_probability(p: &CountDistribution) -> f64 {
    p.total_photon_probability(2)
}

/// `P00·P22 < (max[Q11 - P11 - p2/2, 0])²`.
pub fn criterion_conservative(
    p: &CountDistribution,
    q: &CountDistribution,
    p2: f64,
) -> CriterionReport {
    conservative_report(
        p,
        q,
        CriterionForm::Standard,
        (q.get(1, 1) - p.get(1, 1) - 0.5 * p2).max(0.0),
    )
}

/// Conservative criterion with the worst-case contamination subtracted
/// directly: `(max[Q11 - (P20 + P02)/2 - (3/2) P11, 0])²`.
pub fn criterion_conservative_worst_case(
    p: &CountDistribution,
    q: &CountDistribution,
) -> CriterionReport {
    let x = q.get(1, 1) - 0.5 * (p.get(2, 0) + p.get(0, 2)) - 1.5 * p.get(1, 1);
    conservative_report(p, q, CriterionForm::WorstCase, x.max(0.0))
}

fn conservative_report(
    p: &CountDistribution,
    q: &CountDistribution,
    form: CriterionForm,
    x: f64,
) -> CriterionReport {
    let lhs = p.get(0, 0) * p.get(2, 2);
    let rhs = x * x;
    let entangled = lhs < rhs - Tolerances::global().verdict_margin;
    CriterionReport {
        criterion_kind: CriterionKind::Conservative,
        form,
        p0: p.get(0, 0),
        p02: p.get(0, 2),
        p20: p.get(2, 0),
        p22: p.get(2, 2),
        p11: p.get(1, 1),
        q11: Some(q.get(1, 1)),
        r: None,
        lhs,
        rhs,
        entangled,
        concurrence_lower_bound: if entangled {
            (2.0 * x - 2.0 * lhs.sqrt()).max(0.0)
        } else {
            0.0
        },
    }
}

/// Norm of `a_i† a_j†|0⟩ - ½[(a₊†)² - (a₋†)²]|0⟩` on port A, where
/// `a_±† = (a_i† ± e^{iθ} a_j†)/√2`. Zero exactly when `θ = 0`.
pub fn mode_identity_deviation(
    basis: &MultiModeBasis,
    i: usize,
    j: usize,
    relative_phase: f64,
) -> Result<f64> {
    if basis.modes() < 2 || basis.n_max_total() < 2 {
        return Err(Error::InvalidBasis(
            "mode identity needs m >= 2 internal modes and n_max_total >= 2".into(),
        ));
    }
    if i == j {
        return Err(Error::InvalidParameter("modes i and j must differ".into()));
    }
    let ai = basis.creation(Port::A, i)?;
    let aj = basis.creation(Port::A, j)?;
    let vac = basis.vacuum_vector();
    let phase = Complex64::from_polar(1.0, relative_phase);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let plus = (&ai + &aj * phase).scale(s);
    let minus = (&ai - &aj * phase).scale(s);
    let lhs = &ai * (&aj * &vac);
    let rhs = (&plus * (&plus * &vac) - &minus * (&minus * &vac)).scale(0.5);
    Ok((lhs - rhs).norm())
}

/// Deviation of the `a₁†a₂†` identity on internal modes 0 and 1.
pub fn mode_identity_check(basis: &MultiModeBasis) -> Result<f64> {
    mode_identity_deviation(basis, 0, 1, 0.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DephaseDecomposition {
    /// Weight of the component whose photons share one internal mode.
    pub p_s: f64,
    /// `None` when `p_s == 0`.
    pub rho_s: Option<MultiModeDensity>,
    /// `None` when `p_s == 1`.
    pub rho_perp: Option<MultiModeDensity>,
    /// The dephased state itself.
    pub twirled: MultiModeDensity,
}

impl DephaseDecomposition {
    /// `p_s ρ^s + (1 - p_s) ρ^⊥`
    pub fn reconstruct(&self) -> MultiModeDensity {
        let basis = self.twirled.basis.clone();
        let mut m = CMatrix::zeros(basis.dim(), basis.dim());
        if let Some(s) = &self.rho_s {
            m += s.matrix.scale(self.p_s);
        }
        if let Some(perp) = &self.rho_perp {
            m += perp.matrix.scale(1.0 - self.p_s);
        }
        MultiModeDensity { basis, matrix: m }
    }
}

/// Averages over independent random phases per internal mode (the same phase
/// on `A_k` and `B_k`), then splits the result into the single-internal-mode
/// part and the rest.
pub fn pairwise_dephase(rho: &MultiModeDensity) -> DephaseDecomposition {
    let basis = rho.basis.clone();
    let dim = basis.dim();
    let m = basis.modes();
    let els = &basis.elements;
    let mut twirled = CMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            if (0..m).all(|k| els[i].combined(k) == els[j].combined(k)) {
                twirled[(i, j)] = rho.matrix[(i, j)];
            }
        }
    }
    let same: Vec<bool> = els
        .iter()
        .map(Occupation::is_single_internal_mode)
        .collect();
    let mut s_block = CMatrix::zeros(dim, dim);
    let mut perp_block = CMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            let z = twirled[(i, j)];
            if same[i] && same[j] {
                s_block[(i, j)] = z;
            } else if !same[i] && !same[j] {
                perp_block[(i, j)] = z;
            }
        }
    }
    let total = twirled.trace().re;
    let p_s = s_block.trace().re / total;
    let p_perp = perp_block.trace().re / total;
    let wrap = |block: CMatrix, w: f64| {
        (w > 0.0).then(|| MultiModeDensity {
            basis: basis.clone(),
            matrix: block.unscale(w * total),
        })
    };
    let rho_s = wrap(s_block, p_s);
    let rho_perp = wrap(perp_block, p_perp);
    DephaseDecomposition {
        p_s,
        rho_s,
        rho_perp,
        twirled: MultiModeDensity {
            basis: basis.clone(),
            matrix: twirled,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::TwoModeBasis;
    use crate::linalg::c;
    use crate::optics::{count_distribution, q_distribution};
    use crate::states;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn occ(a: &[usize], b: &[usize]) -> Occupation {
        Occupation::new(a.to_vec(), b.to_vec()).unwrap()
    }

    fn red_blue() -> Arc<MultiModeBasis> {
        MultiModeBasis::new(2, 4).unwrap()
    }

    #[test]
    fn basis_is_bijective_and_truncated() {
        let b = red_blue();
        // compositions of <= 4 photons into 4 slots: C(8, 4)
        assert_eq!(b.dim(), 70);
        for (i, e) in b.elements().iter().enumerate() {
            assert!(e.total() <= 4);
            assert_eq!(b.index(e).unwrap(), i);
        }
        assert_eq!(b.elements()[0], Occupation::vacuum(2));
    }

    #[test]
    fn single_photon_through_splitter() {
        let b = red_blue();
        let rho =
            MultiModeDensity::from_components(b.clone(), &[(occ(&[1, 0], &[0, 0]), c(1.0, 0.0))])
                .unwrap();
        let u = mm_beamsplitter_unitary(&b, &BeamSplitterParams::new(0.3).unwrap());
        let col = b.index(&occ(&[1, 0], &[0, 0])).unwrap();
        assert!((u[(col, col)].re - 0.3).abs() < 1e-15);
        let t = (1.0f64 - 0.09).sqrt();
        assert!((u[(b.index(&occ(&[0, 0], &[1, 0])).unwrap(), col)].re - t).abs() < 1e-15);
        let out = mm_beamsplitter(&rho, &BeamSplitterParams::new(0.3).unwrap());
        assert!((out.trace() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn splitter_is_unitary() {
        let b = MultiModeBasis::new(3, 3).unwrap();
        let u = mm_beamsplitter_unitary(&b, &BeamSplitterParams::new(0.42).unwrap());
        let dev = (u.adjoint() * &u - CMatrix::identity(b.dim(), b.dim()))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        assert!(dev < 1e-12);
    }

    #[test]
    fn worst_case_state_statistics() {
        let rho = states::worst_case_two_color(red_blue()).unwrap();
        let p = mm_count_distribution(&rho);
        assert!((p.get(1, 1) - 0.5).abs() < 1e-15);
        assert!((p.get(2, 0) - 0.25).abs() < 1e-15);
        assert!((p.get(0, 2) - 0.25).abs() < 1e-15);
        assert!((off_color_p11(&rho) - 0.5).abs() < 1e-15);
        let out = mm_beamsplitter(&rho, &BeamSplitterParams::balanced());
        // one red photon in C, one blue in D
        let i = out.basis().index(&occ(&[1, 0], &[0, 1])).unwrap();
        assert!((out.matrix()[(i, i)].re - 1.0).abs() < 1e-12);
        let q = mm_count_distribution(&out);
        assert!((q.get(1, 1) - 1.0).abs() < 1e-12);

        let rep = criterion_conservative(&p, &q, two_photon_probability(&p));
        assert!(rep.rhs.abs() < 1e-24 && !rep.entangled);
        let txt = criterion_conservative_worst_case(&p, &q);
        assert!(txt.rhs < 1e-24 && !txt.entangled);
    }

    #[test]
    fn same_color_pairs_show_inverse_hom_per_color() {
        let b = red_blue();
        for k in 0..2 {
            let mut a2 = [0, 0];
            a2[k] = 2;
            let mut b2 = [0, 0];
            b2[k] = 2;
            let rho = MultiModeDensity::from_components(
                b.clone(),
                &[
                    (occ(&[0, 0], &b2), c(FRAC_1_SQRT_2, 0.0)),
                    (occ(&a2, &[0, 0]), c(-FRAC_1_SQRT_2, 0.0)),
                ],
            )
            .unwrap();
            let q = mm_count_distribution(&mm_beamsplitter(&rho, &BeamSplitterParams::balanced()));
            assert!((q.get(1, 1) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn off_color_linearity_and_single_color() {
        let b = red_blue();
        let w = states::worst_case_two_color(b.clone()).unwrap();
        let vac =
            MultiModeDensity::from_components(b.clone(), &[(Occupation::vacuum(2), c(1.0, 0.0))])
                .unwrap();
        let mix = MultiModeDensity::from_matrix(b.clone(), (w.matrix() + vac.matrix()).scale(0.5))
            .unwrap();
        assert!((off_color_p11(&mix) - 0.25).abs() < 1e-15);
        let r1 = MultiModeDensity::embed_single(
            &states::rho1(TwoModeBasis::new(4).unwrap()).unwrap(),
            b,
            1,
        )
        .unwrap();
        assert_eq!(off_color_p11(&r1), 0.0);
        assert!((mm_count_distribution(&vac).get(0, 0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn single_mode_embedding_matches_optics() {
        let sm = TwoModeBasis::new(4).unwrap();
        let rho = states::rho2(sm).unwrap();
        for modes in [1, 2] {
            let b = MultiModeBasis::new(modes, 4).unwrap();
            let mm = MultiModeDensity::embed_single(&rho, b, 0).unwrap();
            let p_mm = mm_count_distribution(&mm);
            let p = count_distribution(&rho);
            let bs = BeamSplitterParams::new(0.35).unwrap();
            let q_mm = mm_count_distribution(&mm_beamsplitter(&mm, &bs));
            let q = q_distribution(&rho, &bs).unwrap();
            for i in 0..=4 {
                for j in 0..=4 {
                    assert!((p_mm.get(i, j) - p.get(i, j)).abs() < 1e-12);
                    assert!((q_mm.get(i, j) - q.get(i, j)).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn embedding_refuses_out_of_range_support() {
        let sm = TwoModeBasis::new(4).unwrap();
        let rho = states::rho1(sm).unwrap();
        let small = MultiModeBasis::new(2, 2).unwrap();
        assert!(matches!(
            MultiModeDensity::embed_single(&rho, small, 0),
            Err(Error::TruncationUnsafe { .. })
        ));
    }

    #[test]
    fn conservative_examples() {
        let sm = TwoModeBasis::new(4).unwrap();
        let hom = crate::fock::pure_to_density(&states::hom_state(sm).unwrap()).unwrap();
        let p = count_distribution(&hom);
        let q = q_distribution(&hom, &BeamSplitterParams::balanced()).unwrap();
        let rep = criterion_conservative(&p, &q, two_photon_probability(&p));
        assert!((rep.rhs - 0.25).abs() < 1e-12 && rep.entangled);
        assert_eq!(rep.criterion_kind, CriterionKind::Conservative);

        let vac_p =
            CountDistribution::from_table(2, vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0])
                .unwrap();
        let rep = criterion_conservative(&vac_p, &vac_p, 0.0);
        assert_eq!(rep.rhs, 0.0);
        assert!(!rep.entangled);
    }

    #[test]
    fn identity_check_examples() {
        let b = red_blue();
        assert!(mode_identity_check(&b).unwrap() < 1e-12);
        let dev = mode_identity_deviation(&b, 0, 1, std::f64::consts::FRAC_PI_2).unwrap();
        assert!((dev - 2f64.sqrt()).abs() < 1e-12);
        let b3 = MultiModeBasis::new(3, 2).unwrap();
        assert!(mode_identity_deviation(&b3, 0, 2, 0.0).unwrap() < 1e-12);
        assert!(mode_identity_check(&MultiModeBasis::new(1, 2).unwrap()).is_err());
        assert!(mode_identity_deviation(&b3, 1, 1, 0.0).is_err());
    }

    #[test]
    fn dephase_examples() {
        let b = red_blue();
        let sm = TwoModeBasis::new(4).unwrap();
        let r1 = states::rho1(sm).unwrap();
        let emb = MultiModeDensity::embed_single(&r1, b.clone(), 0).unwrap();
        let dec = pairwise_dephase(&emb);
        assert!((dec.p_s - 1.0).abs() < 1e-15);
        assert!(dec.rho_perp.is_none());
        let diff = dec.rho_s.as_ref().unwrap().matrix() - emb.matrix();
        assert!(diff.iter().all(|z| z.norm() < 1e-15));

        let w = states::worst_case_two_color(b.clone()).unwrap();
        let dec = pairwise_dephase(&w);
        assert_eq!(dec.p_s, 0.0);
        assert!(dec.rho_s.is_none());
    }

    #[test]
    fn dephase_superposition_of_branches() {
        let b = red_blue();
        let s = FRAC_1_SQRT_2;
        let h = 0.5 * s;
        // (HOM_red + worst-case)/√2
        let comps = vec![
            (occ(&[0, 0], &[2, 0]), c(0.5, 0.0)),
            (occ(&[2, 0], &[0, 0]), c(-0.5, 0.0)),
            (occ(&[1, 1], &[0, 0]), c(h, 0.0)),
            (occ(&[1, 0], &[0, 1]), c(-h, 0.0)),
            (occ(&[0, 1], &[1, 0]), c(h, 0.0)),
            (occ(&[0, 0], &[1, 1]), c(-h, 0.0)),
        ];
        let rho = MultiModeDensity::from_components(b.clone(), &comps).unwrap();
        let dec = pairwise_dephase(&rho);
        assert!((dec.p_s - 0.5).abs() < 1e-15);
        let i = b.index(&occ(&[0, 0], &[2, 0])).unwrap();
        let j = b.index(&occ(&[1, 1], &[0, 0])).unwrap();
        assert!(rho.matrix()[(i, j)].norm() > 0.1);
        assert_eq!(dec.twirled.matrix()[(i, j)], ZERO);
        let err = (dec.reconstruct().matrix() - dec.twirled.matrix())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-15);
        assert!(dec.rho_s.unwrap().validate().is_valid());
        assert!(dec.rho_perp.unwrap().validate().is_valid());
    }
}
