//! Closed-form secant-variety quantities and Grover-state predictions.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grover::{k_opt, MarkedSet, Regime};
use crate::tensor::QuditSystem;

/// Dimension data of the `k`-th secant variety of the Segre variety `X`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SecantDim {
    pub n_factors: usize,
    pub k: usize,
    /// `min(k·dim X + k − 1, N − 1)`.
    pub dim_bound: usize,
    /// Set only where the dimension is known: `2n + 1` for `k = 2` on
    /// `n > 2` qubits.
    pub dim_exact_known: Option<usize>,
    /// The four-qubit `σ₃` case, where the bound is not attained.
    pub known_defective: bool,
    pub ambient_dim: usize,
}

/// `dim X = Σ (d_i − 1)`.
pub fn segre_dim(system: &QuditSystem) -> usize {
    system.dims().iter().map(|d| d - 1).sum()
}

pub fn secant_dim_bound(system: &QuditSystem, k: usize) -> Result<SecantDim> {
    if k == 0 {
        return Err(Error::NotApplicable("secant order must be at least 1".into()));
    }
    let n = system.num_factors();
    let ambient_dim = system.len() - 1;
    let expected = k * segre_dim(system) + k - 1;
    let qubits = system.is_qubits();
    let known_defective = qubits && n == 4 && k == 3;
    let dim_exact_known = (qubits && k == 2 && n > 2).then_some(2 * n + 1);
    Ok(SecantDim {
        n_factors: n,
        k,
        dim_bound: expected.min(ambient_dim),
        dim_exact_known,
        known_defective,
        ambient_dim,
    })
}

/// Normalized relative dimension of the first secant variety of `n`
/// qubits: `(1/3)·(2n + 1)/(2ⁿ − 1)`.
pub fn nrd_sigma(n: u32) -> Result<f64> {
    if n == 0 || n > 62 {
        return Err(Error::NotApplicable(format!("n = {n} out of range")));
    }
    Ok((2.0 * n as f64 + 1.0) / (3.0 * ((1u64 << n) - 1) as f64))
}

pub fn regime(marked: &MarkedSet) -> Regime {
    marked.regime()
}

fn require_standard(marked: &MarkedSet) -> Result<()> {
    match marked.regime() {
        Regime::Standard => Ok(()),
        r => Err(Error::NotApplicable(format!("{r} regime"))),
    }
}

/// `s + 1` for `|S| = s`: the secant order of which the Grover states are
/// general points. Marked sets are sets of distinct basis states, hence
/// always orthogonal.
pub fn predicted_secant_order(marked: &MarkedSet) -> Result<usize> {
    require_standard(marked)?;
    Ok(marked.len() + 1)
}

/// `Round(s/(s + 1) · k_opt)`.
pub fn barycenter_k(marked: &MarkedSet) -> Result<u64> {
    require_standard(marked)?;
    Ok(barycenter_k_for(marked.len(), k_opt(marked)))
}

pub fn barycenter_k_for(s: usize, k_opt: u64) -> u64 {
    (s as f64 / (s as f64 + 1.0) * k_opt as f64).round() as u64
}
