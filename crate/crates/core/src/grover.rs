//! Grover dynamics on an arbitrary qudit system.
//!
//! The oracle flips the sign of the marked amplitudes and the diffusion
//! `D = −(1 − 2|ψ₀⟩⟨ψ₀|)` inverts every amplitude about the mean, with `ψ₀`
//! the uniform superposition. After `k` iterations
//!
//! ```text
//! ψ_k = a_k/√|S| Σ_{x∈S} |x⟩ + b_k/√(N−|S|) Σ_{x∉S} |x⟩,
//! a_k = sin((2k+1)θ),  b_k = cos((2k+1)θ),  sin θ = √(|S|/N),
//! ```
//!
//! which regroups as `ψ_k = α_k Σ_{x∈S}|x⟩ + β_k |+⟩^{⊗m}`.

use std::f64::consts::FRAC_PI_4;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::{BasisIndex, PureState, QuditSystem};

/// The set `S` of basis states recognized by the oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedSet {
    system: QuditSystem,
    elements: Vec<BasisIndex>,
    mask: Vec<bool>,
}

impl MarkedSet {
    pub fn new(system: QuditSystem, elements: Vec<BasisIndex>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::InvalidMarkedSet("empty".into()));
        }
        let mut mask = vec![false; system.len()];
        let mut checked = Vec::with_capacity(elements.len());
        for e in elements {
            // Re-encoding validates the digits against this system.
            let idx = system.encode(e.digits())?;
            if idx.decimal() != e.decimal() {
                return Err(Error::InvalidIndex(format!("{e:?} does not belong to {:?}", system.dims())));
            }
            if std::mem::replace(&mut mask[idx.decimal()], true) {
                return Err(Error::InvalidMarkedSet(format!("duplicate element {}", system.ket_label(&idx))));
            }
            checked.push(idx);
        }
        checked.sort();
        Ok(Self { system, elements: checked, mask })
    }

    pub fn from_digits(system: QuditSystem, digits: &[&[usize]]) -> Result<Self> {
        let elements = digits.iter().map(|d| system.encode(d)).collect::<Result<Vec<_>>>()?;
        Self::new(system, elements)
    }

    /// From ket strings such as `"|010⟩"`.
    pub fn from_kets(system: QuditSystem, kets: &[&str]) -> Result<Self> {
        let elements = kets.iter().map(|k| system.parse_ket(k)).collect::<Result<Vec<_>>>()?;
        Self::new(system, elements)
    }

    pub fn from_decimals(system: QuditSystem, decimals: &[usize]) -> Result<Self> {
        let elements = decimals.iter().map(|&i| system.decode(i)).collect::<Result<Vec<_>>>()?;
        Self::new(system, elements)
    }

    pub fn system(&self) -> &QuditSystem {
        &self.system
    }

    pub fn elements(&self) -> &[BasisIndex] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, decimal: usize) -> bool {
        self.mask.get(decimal).copied().unwrap_or(false)
    }

    pub fn regime(&self) -> Regime {
        Regime::classify(self.len(), self.system.len())
    }

    /// `{|000⟩, |111⟩}` style label.
    pub fn label(&self) -> String {
        let kets: Vec<String> = self.elements.iter().map(|e| self.system.ket_label(e)).collect();
        format!("{{{}}}", kets.join(","))
    }
}

/// Size of the marked set relative to `N/4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Standard,
    Critical,
    Exceptional,
}

impl Regime {
    pub fn classify(marked: usize, n: usize) -> Regime {
        match (4 * marked).cmp(&n) {
            std::cmp::Ordering::Less => Regime::Standard,
            std::cmp::Ordering::Equal => Regime::Critical,
            std::cmp::Ordering::Greater => Regime::Exceptional,
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Standard => "standard",
            Regime::Critical => "critical",
            Regime::Exceptional => "exceptional",
        })
    }
}

/// Closed-form data of a run after `k` iterations.
#[derive(Clone, Debug, PartialEq)]
pub struct GroverRun {
    pub marked: MarkedSet,
    pub k: u64,
    pub theta: f64,
    pub a_k: f64,
    pub b_k: f64,
    pub alpha_k: f64,
    pub beta_k: f64,
    pub regime: Regime,
}

/// Closed-form coefficients at a real iteration parameter `t`; at integer
/// `t = k` these are the coefficients of `ψ_k`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Coefficients {
    pub theta: f64,
    pub a: f64,
    pub b: f64,
    pub alpha: f64,
    pub beta: f64,
}

/// `θ` with `sin θ = √(|S|/N)`.
pub fn angle(marked: &MarkedSet) -> f64 {
    (marked.len() as f64 / marked.system.len() as f64).sqrt().asin()
}

pub fn coefficients(marked: &MarkedSet, t: f64) -> Result<Coefficients> {
    let s = marked.len() as f64;
    let n = marked.system.len() as f64;
    if marked.len() >= marked.system.len() {
        return Err(Error::DegenerateSearch);
    }
    let theta = angle(marked);
    let phase = (2.0 * t + 1.0) * theta;
    let (a, b) = phase.sin_cos();
    let unmarked = (n - s).sqrt();
    Ok(Coefficients {
        theta,
        a,
        b,
        alpha: a / s.sqrt() - b / unmarked,
        beta: n.sqrt() * b / unmarked,
    })
}

/// Closed-form state at a real iteration parameter.
pub fn closed_form_state(marked: &MarkedSet, t: f64) -> Result<PureState> {
    let c = coefficients(marked, t)?;
    let s = marked.len() as f64;
    let n = marked.system.len() as f64;
    let on = Complex64::new(c.a / s.sqrt(), 0.0);
    let off = Complex64::new(c.b / (n - s).sqrt(), 0.0);
    let amps = (0..marked.system.len())
        .map(|x| if marked.contains(x) { on } else { off })
        .collect();
    Ok(PureState::from_parts(marked.system.clone(), amps))
}

/// `ψ_k` from the closed form, together with its run record.
pub fn grover_state(marked: &MarkedSet, k: u64) -> Result<(PureState, GroverRun)> {
    let c = coefficients(marked, k as f64)?;
    let state = closed_form_state(marked, k as f64)?;
    let run = GroverRun {
        marked: marked.clone(),
        k,
        theta: c.theta,
        a_k: c.a,
        b_k: c.b,
        alpha_k: c.alpha,
        beta_k: c.beta,
        regime: marked.regime(),
    };
    Ok((state, run))
}

/// Optimal iteration count `Round(π/4 · √(N/|S|))`, halves rounded away
/// from zero.
pub fn k_opt(marked: &MarkedSet) -> u64 {
    k_opt_for(marked.system.len(), marked.len())
}

pub fn k_opt_for(n: usize, marked: usize) -> u64 {
    (FRAC_PI_4 * (n as f64 / marked as f64).sqrt()).round() as u64
}

pub fn apply_oracle(state: &PureState, marked: &MarkedSet) -> Result<PureState> {
    if state.system() != marked.system() {
        return Err(Error::SystemMismatch(state.system().dims().to_vec(), marked.system.dims().to_vec()));
    }
    let amps = state
        .amps()
        .iter()
        .enumerate()
        .map(|(x, &a)| if marked.contains(x) { -a } else { a })
        .collect();
    Ok(PureState::from_parts(state.system().clone(), amps))
}

/// Inversion about the mean: `α_x ↦ 2·mean(α) − α_x`.
pub fn apply_diffusion(state: &PureState) -> PureState {
    let n = state.amps().len() as f64;
    let mean: Complex64 = state.amps().iter().sum::<Complex64>() / n;
    let amps = state.amps().iter().map(|&a| 2.0 * mean - a).collect();
    PureState::from_parts(state.system().clone(), amps)
}

/// Gate-level iteration: yields `ψ_0, ψ_1, …` by alternating oracle and
/// diffusion.
pub struct GateIterations<'a> {
    marked: &'a MarkedSet,
    current: Option<PureState>,
}

impl<'a> GateIterations<'a> {
    pub fn new(marked: &'a MarkedSet) -> Self {
        Self { marked, current: Some(PureState::uniform(marked.system.clone())) }
    }
}

impl Iterator for GateIterations<'_> {
    type Item = PureState;

    fn next(&mut self) -> Option<PureState> {
        let out = self.current.take()?;
        let next = apply_oracle(&out, self.marked).map(|s| apply_diffusion(&s));
        self.current = next.ok();
        Some(out)
    }
}

/// `ψ_k` by `k` gate-level Grover iterations from `ψ₀`.
pub fn gate_level_state(marked: &MarkedSet, k: u64) -> PureState {
    GateIterations::new(marked).nth(k as usize).expect("iteration never terminates")
}

/// Result of regrouping `ψ_k` as `α Σ_{x∈S}|x⟩ + β |+⟩^{⊗m}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Decomposition {
    pub alpha: f64,
    pub beta: f64,
    pub residual: f64,
}

/// Rebuilds `α_k Σ_{x∈S}|x⟩ + β_k|+⟩^{⊗m}` and measures its distance to
/// the closed-form `ψ_k` of `run`.
pub fn observation_decompose(run: &GroverRun) -> Result<Decomposition> {
    let (state, _) = grover_state(&run.marked, run.k)?;
    let n = run.marked.system.len();
    let plus = 1.0 / (n as f64).sqrt();
    let residual = state
        .amps()
        .iter()
        .enumerate()
        .map(|(x, a)| {
            let mut v = run.beta_k * plus;
            if run.marked.contains(x) {
                v += run.alpha_k;
            }
            (a - Complex64::new(v, 0.0)).norm_sqr()
        })
        .sum::<f64>()
        .sqrt();
    Ok(Decomposition { alpha: run.alpha_k, beta: run.beta_k, residual })
}

/// Tensor-rank bounds `(2, |S|+1)` valid for `0 < k < k_opt`.
pub fn rank_bound(marked: &MarkedSet, k: u64) -> Result<(usize, usize)> {
    let k_opt = k_opt(marked);
    if k == 0 || k >= k_opt {
        return Err(Error::BoundNotApplicable { k, k_opt });
    }
    Ok((2, marked.len() + 1))
}

/// Largest elementwise deviation between `a` and `b` after removing the
/// relative global phase.
pub fn max_deviation_up_to_phase(a: &PureState, b: &PureState) -> Result<f64> {
    let ov = a.inner(b)?;
    let phase = if ov.norm() > 0.0 { ov / ov.norm() } else { Complex64::new(1.0, 0.0) };
    Ok(a
        .amps()
        .iter()
        .zip(b.amps())
        .map(|(x, y)| (x * phase - y).norm())
        .fold(0.0, f64::max))
}
