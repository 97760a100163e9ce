#![allow(dead_code)]

use grover_slocc::{PureState, QuditSystem};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn random_state(system: &QuditSystem, rng: &mut impl Rng) -> PureState {
    let amps = (0..system.len()).map(|_| gaussian(rng)).collect();
    PureState::from_unnormalized(system.clone(), amps).unwrap()
}

/// `I + spread·G` for Gaussian `G`, rescaled to determinant 1.
pub fn random_sl(d: usize, spread: f64, rng: &mut impl Rng) -> DMatrix<Complex64> {
    let m = DMatrix::from_fn(d, d, |i, j| {
        let g = gaussian(rng) * spread;
        if i == j { g + 1.0 } else { g }
    });
    let det = m.determinant();
    m / det.powf(1.0 / d as f64)
}

/// Haar unitary from the QR factors of a Ginibre matrix.
pub fn random_unitary(d: usize, rng: &mut impl Rng) -> DMatrix<Complex64> {
    let qr = random_gl(d, rng).qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..d {
        let p = r[(j, j)] / r[(j, j)].norm();
        let col = q.column(j) * p;
        q.set_column(j, &col);
    }
    q
}

/// `U·diag(e^h)·V` with Haar `U`, `V`, `Σh = 0` and `|h_i| ≤ 1`, rescaled to
/// determinant 1. The condition number stays below `e⁴`.
pub fn random_sl_bounded(d: usize, rng: &mut impl Rng) -> DMatrix<Complex64> {
    let mut h: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
    let mean = h.iter().sum::<f64>() / d as f64;
    h.iter_mut().for_each(|x| *x = (*x - mean).clamp(-1.0, 1.0));
    let sigma = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(d, h.iter().map(|x| Complex64::new(x.exp(), 0.0))));
    let m = random_unitary(d, rng) * sigma * random_unitary(d, rng);
    let det = m.determinant();
    m / det.powf(1.0 / d as f64)
}

pub fn local_sl_bounded(system: &QuditSystem, rng: &mut impl Rng) -> Vec<DMatrix<Complex64>> {
    system.dims().iter().map(|&d| random_sl_bounded(d, rng)).collect()
}

pub fn random_gl(d: usize, rng: &mut impl Rng) -> DMatrix<Complex64> {
    DMatrix::from_fn(d, d, |_, _| gaussian(rng))
}

pub fn local_sl(system: &QuditSystem, spread: f64, rng: &mut impl Rng) -> Vec<DMatrix<Complex64>> {
    system.dims().iter().map(|&d| random_sl(d, spread, rng)).collect()
}
