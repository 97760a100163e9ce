//! Geometric measure of entanglement.
//!
//! `E_n(ψ) = 1 − max |⟨φ|ψ⟩|²` over fully separable unit `φ`, computed by
//! alternating maximization: with all factors but one fixed, the best
//! remaining factor is the normalized partial contraction of `ψ` against
//! the others. `E_2` uses biseparable `φ` and is exact: the best state
//! across a fixed cut is the top singular pair of that cut's flattening.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::barycenter_k_for;
use crate::grover::{grover_state, k_opt, MarkedSet};
use crate::tensor::{flatten, singular_values, PureState, QuditSystem};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GmeOptions {
    pub restarts: usize,
    pub tol: f64,
    pub max_sweeps: usize,
    pub seed: u64,
}

impl Default for GmeOptions {
    fn default() -> Self {
        Self { restarts: 32, tol: 1e-10, max_sweeps: 500, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GmeResult {
    pub value: f64,
    pub best_product_state: PureState,
    /// Unit factor vectors of the best product state.
    pub factors: Vec<Vec<Complex64>>,
    pub overlap_sq: f64,
    pub restarts_used: usize,
    pub converged: bool,
    pub sweeps: usize,
    /// Start that produced the optimum (0 is the singular-vector start).
    pub best_start: usize,
}

/// Per-start record of an alternating maximization.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepTrace {
    /// Squared overlap before the first sweep and after each sweep.
    pub overlaps: Vec<f64>,
    pub factors: Vec<Vec<Complex64>>,
    pub converged: bool,
}

impl SweepTrace {
    pub fn overlap_sq(&self) -> f64 {
        *self.overlaps.last().expect("at least the initial overlap")
    }

    pub fn sweeps(&self) -> usize {
        self.overlaps.len() - 1
    }
}

/// `⊗_l conj(u_l)` over a run of factors, in mixed-radix order.
fn conj_weights(factors: &[Vec<Complex64>]) -> Vec<Complex64> {
    let mut w = vec![Complex64::new(1.0, 0.0)];
    for u in factors {
        w = w.iter().flat_map(|a| u.iter().map(move |x| a * x.conj())).collect();
    }
    w
}

/// `v[j] = Σ_{x: x_i = j} ψ_x Π_{l≠i} conj(u_l[x_l])`.
fn contract_except(amps: &[Complex64], dims: &[usize], factors: &[Vec<Complex64>], i: usize) -> Vec<Complex64> {
    let left = conj_weights(&factors[..i]);
    let right = conj_weights(&factors[i + 1..]);
    let (d, r) = (dims[i], right.len());
    let mut v = vec![Complex64::zero(); d];
    for (a, wl) in left.iter().enumerate() {
        let block = &amps[a * d * r..(a + 1) * d * r];
        for (j, slot) in v.iter_mut().enumerate() {
            let row = &block[j * r..(j + 1) * r];
            let s: Complex64 = row.iter().zip(&right).map(|(x, w)| x * w).sum();
            *slot += wl * s;
        }
    }
    v
}

fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

fn check_factors(system: &QuditSystem, factors: &[Vec<Complex64>]) -> Result<()> {
    if factors.len() != system.num_factors()
        || factors.iter().zip(system.dims()).any(|(u, &d)| u.len() != d)
    {
        return Err(Error::InvalidSystem("initial factors do not match system dims".into()));
    }
    Ok(())
}

/// Squared overlap of `state` with the product of `factors` (unit vectors).
pub fn product_overlap_sq(state: &PureState, factors: &[Vec<Complex64>]) -> Result<f64> {
    check_factors(state.system(), factors)?;
    let v = contract_except(state.amps(), state.system().dims(), factors, 0);
    Ok(factors[0].iter().zip(&v).map(|(u, x)| u.conj() * x).sum::<Complex64>().norm_sqr())
}

/// Alternating maximization from `init` until the squared overlap changes
/// by less than `tol` over a sweep, or `max_sweeps` sweeps.
pub fn alternating_maximize(
    state: &PureState,
    init: Vec<Vec<Complex64>>,
    tol: f64,
    max_sweeps: usize,
) -> Result<SweepTrace> {
    check_factors(state.system(), &init)?;
    let dims = state.system().dims();
    let mut factors: Vec<Vec<Complex64>> = init
        .into_iter()
        .map(|u| {
            let n = vec_norm(&u);
            u.into_iter().map(|x| x / n).collect()
        })
        .collect();
    let mut overlaps = vec![product_overlap_sq(state, &factors)?];
    let mut converged = false;
    for _ in 0..max_sweeps {
        let mut current = 0.0;
        for i in 0..dims.len() {
            let v = contract_except(state.amps(), dims, &factors, i);
            let n = vec_norm(&v);
            if n > 0.0 {
                factors[i] = v.into_iter().map(|x| x / n).collect();
            }
            current = n * n;
        }
        let prev = *overlaps.last().expect("nonempty");
        overlaps.push(current);
        if (current - prev).abs() < tol {
            converged = true;
            break;
        }
    }
    Ok(SweepTrace { overlaps, factors, converged })
}

/// Leading left singular vector of every one-factor flattening.
pub fn hosvd_init(state: &PureState) -> Result<Vec<Vec<Complex64>>> {
    (0..state.system().num_factors())
        .map(|f| {
            let m = flatten(state, f)?;
            let gram = &m * m.adjoint();
            let svd = gram.svd(true, false);
            let u = svd.u.expect("requested");
            let top = (0..svd.singular_values.len())
                .max_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]))
                .expect("d ≥ 1");
            Ok(u.column(top).iter().copied().collect())
        })
        .collect()
}

/// Complex Gaussian unit vectors, one per factor, from stream `start` of
/// the seeded generator.
pub fn random_init(system: &QuditSystem, seed: u64, start: u64) -> Vec<Vec<Complex64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(start);
    system
        .dims()
        .iter()
        .map(|&d| {
            let u: Vec<Complex64> = (0..d)
                .map(|_| Complex64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng)))
                .collect();
            let n = vec_norm(&u);
            u.into_iter().map(|x| x / n).collect()
        })
        .collect()
}

fn product_state(system: &QuditSystem, factors: &[Vec<Complex64>]) -> Result<PureState> {
    let mut amps = vec![Complex64::new(1.0, 0.0)];
    for u in factors {
        amps = amps.iter().flat_map(|a| u.iter().map(move |x| a * x)).collect();
    }
    PureState::from_unnormalized(system.clone(), amps)
}

fn validate(opts: &GmeOptions) -> Result<()> {
    if opts.restarts == 0 {
        return Err(Error::NotApplicable("at least one start is required".into()));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::NotApplicable(format!("tolerance must be positive, got {}", opts.tol)));
    }
    Ok(())
}

/// `E_n` by alternating maximization from the singular-vector start plus
/// `restarts − 1` random starts; the best local optimum wins, ties going to
/// the lowest start index.
pub fn gme_full(state: &PureState, opts: &GmeOptions) -> Result<GmeResult> {
    validate(opts)?;
    let traces: Vec<SweepTrace> = (0..opts.restarts)
        .into_par_iter()
        .map(|s| {
            let init = if s == 0 { hosvd_init(state)? } else { random_init(state.system(), opts.seed, s as u64) };
            alternating_maximize(state, init, opts.tol, opts.max_sweeps)
        })
        .collect::<Result<_>>()?;
    let mut best = 0;
    for (s, t) in traces.iter().enumerate() {
        if t.overlap_sq() > traces[best].overlap_sq() {
            best = s;
        }
    }
    let t = &traces[best];
    let overlap_sq = t.overlap_sq().min(1.0);
    log::debug!("gme_full: best start {best}, overlap² {overlap_sq}, {} sweeps", t.sweeps());
    Ok(GmeResult {
        value: 1.0 - overlap_sq,
        best_product_state: product_state(state.system(), &t.factors)?,
        factors: t.factors.clone(),
        overlap_sq,
        restarts_used: opts.restarts,
        converged: t.converged,
        sweeps: t.sweeps(),
        best_start: best,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct BiseparableResult {
    pub value: f64,
    /// Factors (zero-based) on the side of the cut holding factor 0.
    pub best_cut: Vec<usize>,
    pub overlap_sq: f64,
}

/// Flattening with rows indexed by the factors in `side` and columns by
/// the rest, both in mixed-radix order.
pub fn cut_matrix(state: &PureState, side: &[usize]) -> DMatrix<Complex64> {
    let dims = state.system().dims();
    let in_side: Vec<bool> = (0..dims.len()).map(|f| side.contains(&f)).collect();
    let rows: usize = side.iter().map(|&f| dims[f]).product();
    let cols = state.system().len() / rows;
    let mut m = DMatrix::zeros(rows, cols);
    let mut digits = vec![0usize; dims.len()];
    for &a in state.amps() {
        let (mut r, mut c) = (0, 0);
        for (f, &j) in digits.iter().enumerate() {
            if in_side[f] {
                r = r * dims[f] + j;
            } else {
                c = c * dims[f] + j;
            }
        }
        m[(r, c)] = a;
        for f in (0..dims.len()).rev() {
            digits[f] += 1;
            if digits[f] < dims[f] {
                break;
            }
            digits[f] = 0;
        }
    }
    m
}

/// `E_2`: one minus the largest squared top singular value over all cuts.
pub fn gme_biseparable(state: &PureState) -> Result<BiseparableResult> {
    let m = state.system().num_factors();
    if m < 2 {
        return Err(Error::NotApplicable("a single factor has no bipartition".into()));
    }
    let cuts: Vec<Vec<usize>> = (1u64..1 << (m - 1))
        .map(|mask| {
            // Factor 0 is always on the row side; `mask` picks the others.
            std::iter::once(0).chain((1..m).filter(|f| mask >> (f - 1) & 1 == 0)).collect()
        })
        .collect();
    let scores: Vec<f64> = cuts
        .par_iter()
        .map(|side| {
            let sv = singular_values(&cut_matrix(state, side));
            sv.first().map_or(0.0, |s| s * s)
        })
        .collect();
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate() {
        if s > scores[best] {
            best = i;
        }
    }
    let overlap_sq = scores[best].min(1.0);
    Ok(BiseparableResult { value: 1.0 - overlap_sq, best_cut: cuts[best].clone(), overlap_sq })
}

/// `f(δ) = δ₁ⁿ + … + δ_sⁿ + ((δ₁ + … + δ_p)/√p)ⁿ`.
pub fn symmetric_objective(deltas: &[f64], n: u32, s: usize, p: usize) -> Result<f64> {
    if deltas.len() != p || s > p {
        return Err(Error::NotApplicable(format!("need s ≤ p = |δ|, got s = {s}, p = {p}, |δ| = {}", deltas.len())));
    }
    let head: f64 = deltas[..s].iter().map(|d| d.powi(n as i32)).sum();
    let mean = deltas.iter().sum::<f64>() / (p as f64).sqrt();
    Ok(head + mean.powi(n as i32))
}

fn objective_gradient(deltas: &[f64], n: u32, s: usize) -> Vec<f64> {
    let p = deltas.len() as f64;
    let nf = n as f64;
    let tail = nf * (deltas.iter().sum::<f64>() / p.sqrt()).powi(n as i32 - 1) / p.sqrt();
    deltas
        .iter()
        .enumerate()
        .map(|(i, d)| tail + if i < s { nf * d.powi(n as i32 - 1) } else { 0.0 })
        .collect()
}

/// Projected gradient ascent of [`symmetric_objective`] on the nonnegative
/// part of the unit sphere.
pub fn climb_symmetric_objective(start: &[f64], n: u32, s: usize, step: f64, max_iter: usize) -> Vec<f64> {
    let mut x = start.to_vec();
    for _ in 0..max_iter {
        let g = objective_gradient(&x, n, s);
        let radial: f64 = g.iter().zip(&x).map(|(a, b)| a * b).sum();
        let mut next: Vec<f64> = x.iter().zip(&g).map(|(xi, gi)| (xi + step * (gi - radial * xi)).max(0.0)).collect();
        let norm = next.iter().map(|v| v * v).sum::<f64>().sqrt();
        next.iter_mut().for_each(|v| *v /= norm);
        let moved = next.iter().zip(&x).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        x = next;
        if moved < 1e-13 {
            break;
        }
    }
    x
}

/// Maximum of `|⟨u^{⊗n}|ψ⟩|²` over symmetric product states, by grid search
/// in hyperspherical angles and relative phases followed by shrinking local
/// grids. Requires all factors to share one dimension.
pub fn symmetric_product_overlap(state: &PureState, resolution: usize, refinements: usize) -> Result<f64> {
    let dims = state.system().dims();
    let d = dims[0];
    if dims.iter().any(|&x| x != d) {
        return Err(Error::NotApplicable("factors have different dimensions".into()));
    }
    // Amplitudes aggregated by level counts; the overlap only sees those.
    let mut types: std::collections::BTreeMap<Vec<u32>, Complex64> = Default::default();
    for (x, &a) in state.amps().iter().enumerate() {
        let mut counts = vec![0u32; d];
        for &j in state.system().decode(x)?.digits() {
            counts[j] += 1;
        }
        *types.entry(counts).or_default() += a;
    }
    let types: Vec<(Vec<u32>, Complex64)> = types.into_iter().collect();
    let overlap = |params: &[f64]| -> f64 {
        let u = sphere_point(d, params);
        types
            .iter()
            .map(|(c, a)| c.iter().zip(&u).fold(*a, |acc, (&k, ul)| acc * ul.conj().powu(k)))
            .sum::<Complex64>()
            .norm_sqr()
    };
    let dim = 2 * (d - 1);
    let mut lo: Vec<f64> = vec![0.0; dim];
    let mut hi: Vec<f64> = (0..dim).map(|i| if i < d - 1 { std::f64::consts::FRAC_PI_2 } else { std::f64::consts::TAU }).collect();
    let mut best = (f64::NEG_INFINITY, lo.clone());
    for _ in 0..=refinements {
        let total = resolution.pow(dim as u32);
        for flat in 0..total {
            let mut rest = flat;
            let params: Vec<f64> = (0..dim)
                .map(|i| {
                    let t = rest % resolution;
                    rest /= resolution;
                    lo[i] + (hi[i] - lo[i]) * t as f64 / (resolution - 1).max(1) as f64
                })
                .collect();
            let v = overlap(&params);
            if v > best.0 {
                best = (v, params);
            }
        }
        for i in 0..dim {
            let width = (hi[i] - lo[i]) / resolution as f64 * 2.0;
            lo[i] = best.1[i] - width;
            hi[i] = best.1[i] + width;
        }
    }
    Ok(best.0)
}

/// Unit vector with magnitudes from hyperspherical angles `params[..d−1]`
/// and phases `params[d−1..]` on components 1..d.
fn sphere_point(d: usize, params: &[f64]) -> Vec<Complex64> {
    let (angles, phases) = params.split_at(d - 1);
    let mut mags = Vec::with_capacity(d);
    let mut carry = 1.0;
    for &a in angles {
        mags.push(carry * a.cos());
        carry *= a.sin();
    }
    mags.push(carry);
    mags.iter()
        .enumerate()
        .map(|(i, &m)| if i == 0 { Complex64::new(m, 0.0) } else { Complex64::from_polar(m, phases[i - 1]) })
        .collect()
}

/// Which separable set `E_q` is taken over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Separability {
    /// `q = 2`.
    #[serde(rename = "2")]
    Biseparable,
    /// `q = n`.
    #[serde(rename = "n")]
    Full,
}

impl fmt::Display for Separability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Separability::Biseparable => "2",
            Separability::Full => "n",
        })
    }
}

/// `E_q(ψ_k)` for each `k`, in the order given.
pub fn gme_curve(marked: &MarkedSet, ks: &[u64], q: Separability, opts: &GmeOptions) -> Result<Vec<(u64, f64)>> {
    validate(opts)?;
    ks.par_iter()
        .map(|&k| {
            let (state, _) = grover_state(marked, k)?;
            let e = match q {
                Separability::Full => gme_full(&state, opts)?.value,
                Separability::Biseparable => gme_biseparable(&state)?.value,
            };
            Ok((k, e))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PeakReport {
    pub k_star: u64,
    pub e_max: f64,
    pub predicted_k: u64,
    pub window: Vec<(u64, f64)>,
}

/// Locates the maximum of a GME curve (smallest `k` on ties) and the
/// predicted location `Round(s/(s + 1)·k_opt)`.
pub fn find_peak(curve: &[(u64, f64)], marked: &MarkedSet) -> Result<PeakReport> {
    let mut window = curve.to_vec();
    window.sort_by_key(|&(k, _)| k);
    let mut best: Option<(u64, f64)> = None;
    for &(k, e) in &window {
        if best.is_none_or(|(_, b)| e > b) {
            best = Some((k, e));
        }
    }
    let (k_star, e_max) = best.ok_or_else(|| Error::NotApplicable("empty curve".into()))?;
    Ok(PeakReport { k_star, e_max, predicted_k: barycenter_k_for(marked.len(), k_opt(marked)), window })
}
