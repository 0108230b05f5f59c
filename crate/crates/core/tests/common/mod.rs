#![allow(dead_code)]

use std::sync::Arc;

use homdip::fock::{creation_matrix, DensityOperator, Port, TwoModeBasis};
use homdip::linalg::CMatrix;
use homdip::multimode::{MultiModeBasis, MultiModeDensity};
use homdip::optics::BeamSplitterParams;
use nalgebra::DVector;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

pub fn gaussian_c<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Normalized `G G†` with `G` a `k × rank` complex Gaussian matrix placed on
/// the listed occupations.
pub fn ginibre<R: Rng>(
    basis: TwoModeBasis,
    support: &[(usize, usize)],
    rank: usize,
    rng: &mut R,
) -> DensityOperator {
    let k = support.len();
    let g = CMatrix::from_fn(k, rank, |_, _| gaussian_c(rng));
    let small = &g * g.adjoint();
    let tr = small.trace().re;
    let mut m = CMatrix::zeros(basis.dim(), basis.dim());
    for (x, &(a, b)) in support.iter().enumerate() {
        for (y, &(a2, b2)) in support.iter().enumerate() {
            m[(basis.index(a, b).unwrap(), basis.index(a2, b2).unwrap())] = small[(x, y)] / tr;
        }
    }
    DensityOperator::from_matrix(basis, m).unwrap()
}

pub fn grid(max: usize) -> Vec<(usize, usize)> {
    (0..=max)
        .flat_map(|a| (0..=max).map(move |b| (a, b)))
        .collect()
}

pub const FILTER_SUPPORT: [(usize, usize); 4] = [(0, 0), (0, 2), (2, 0), (2, 2)];
pub const FILTER_AND_PAIR_SUPPORT: [(usize, usize); 5] = [(0, 0), (0, 2), (2, 0), (2, 2), (1, 1)];

pub fn random_multimode<R: Rng>(
    basis: Arc<MultiModeBasis>,
    rank: usize,
    rng: &mut R,
) -> MultiModeDensity {
    let g = CMatrix::from_fn(basis.dim(), rank, |_, _| gaussian_c(rng));
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    MultiModeDensity::from_matrix(basis, m.unscale(tr)).unwrap()
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Splitter matrix built by operator algebra: the image of `|nA, nB⟩` is
/// `(r c† + t d†)^nA (t c† - r d†)^nB |0⟩ / sqrt(nA! nB!)`, evaluated with
/// creation matrices on a basis large enough that nothing truncates, then
/// restricted to `basis`.
pub fn oracle_splitter(basis: TwoModeBasis, params: &BeamSplitterParams) -> CMatrix {
    let big = TwoModeBasis::new(2 * basis.n_max()).unwrap();
    let c_dag = creation_matrix(&big, Port::A);
    let d_dag = creation_matrix(&big, Port::B);
    let (r, t) = (params.r(), params.t());
    let a_img = c_dag.scale(r) + d_dag.scale(t);
    let b_img = c_dag.scale(t) - d_dag.scale(r);
    let mut vac = DVector::from_element(big.dim(), Complex64::new(0.0, 0.0));
    vac[0] = Complex64::new(1.0, 0.0);
    let mut u = CMatrix::zeros(basis.dim(), basis.dim());
    for (col, na, nb) in basis.iter() {
        let mut v = vac.clone();
        for _ in 0..nb {
            v = &b_img * v;
        }
        for _ in 0..na {
            v = &a_img * v;
        }
        v.unscale_mut((factorial(na) * factorial(nb)).sqrt());
        for (row, p, q) in basis.iter() {
            u[(row, col)] = v[big.index(p, q).unwrap()];
        }
    }
    u
}
