//! Multipartite state representation.
//!
//! States live in `C^{d_1} ⊗ … ⊗ C^{d_m}` with the computational basis
//! indexed in mixed radix, first factor most significant: for qubits,
//! `|j_1 … j_m⟩` has decimal index `j_1·2^{m−1} + … + j_m`.
//!
//! The one-factor flattening of a state along factor `f` is the
//! `d_f × (N / d_f)` matrix whose row `r` collects the amplitudes with
//! digit `r` in position `f`; columns enumerate the remaining digits in the
//! same mixed-radix order.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact;

/// Default relative threshold used by [`numerical_rank`].
pub const DEFAULT_RANK_TOL: f64 = 1e-8;

/// Tolerance on `Σ|a|² − 1` accepted by the normalized constructor.
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// Factor dimensions of a multipartite system.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuditSystem {
    dims: Vec<usize>,
    len: usize,
}

impl QuditSystem {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidSystem("no factors".into()));
        }
        if let Some(d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidSystem(format!("factor dimension {d} < 2")));
        }
        Self::build(dims)
    }

    /// `n` qubits.
    pub fn qubits(n: usize) -> Result<Self> {
        Self::new(vec![2; n])
    }

    /// `n` sites of local dimension `d`.
    pub fn qudits(d: usize, n: usize) -> Result<Self> {
        Self::new(vec![d; n])
    }

    /// Allows factors of dimension 1, which only arise as the output of
    /// [`compress_support`] on a factor whose support is one-dimensional.
    pub(crate) fn with_unit_factors(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::InvalidSystem(format!("dims {dims:?}")));
        }
        Self::build(dims)
    }

    fn build(dims: Vec<usize>) -> Result<Self> {
        let len = dims
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .ok_or_else(|| Error::InvalidSystem("ambient dimension overflows".into()))?;
        Ok(Self { dims, len })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Number of factors `m`.
    pub fn num_factors(&self) -> usize {
        self.dims.len()
    }

    /// Ambient dimension `N = Π d_i`.
    pub fn len(&self) -> usize {
        self.len
    }

    /// Always false; a system has at least one basis state.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_qubits(&self) -> bool {
        self.dims.iter().all(|&d| d == 2)
    }

    pub fn encode(&self, digits: &[usize]) -> Result<BasisIndex> {
        index_encode(self, digits)
    }

    pub fn decode(&self, decimal: usize) -> Result<BasisIndex> {
        if decimal >= self.len {
            return Err(Error::InvalidIndex(format!(
                "decimal index {decimal} ≥ N = {}",
                self.len
            )));
        }
        let mut digits = vec![0; self.dims.len()];
        let mut rest = decimal;
        for (slot, &d) in digits.iter_mut().zip(&self.dims).rev() {
            *slot = rest % d;
            rest /= d;
        }
        Ok(BasisIndex { digits, decimal })
    }

    /// Parses a ket such as `|012⟩`, `|012>` or `012`. Factors of dimension
    /// above ten need the comma-separated form `|10,3,0⟩`.
    pub fn parse_ket(&self, text: &str) -> Result<BasisIndex> {
        let body = text.trim();
        let body = body.strip_prefix('|').unwrap_or(body);
        let body = body
            .strip_suffix('⟩')
            .or_else(|| body.strip_suffix('>'))
            .unwrap_or(body)
            .trim();
        let digits: Vec<usize> = if body.contains(',') {
            body.split(',')
                .map(|p| {
                    p.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::InvalidIndex(format!("bad digit {p:?} in {text:?}")))
                })
                .collect::<Result<_>>()?
        } else {
            body.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|v| v as usize)
                        .ok_or_else(|| Error::InvalidIndex(format!("bad digit {c:?} in {text:?}")))
                })
                .collect::<Result<_>>()?
        };
        self.encode(&digits)
    }

    /// Formats a basis index as `|j_1…j_m⟩` (comma separated when some
    /// factor has dimension above ten).
    pub fn ket_label(&self, index: &BasisIndex) -> String {
        let wide = self.dims.iter().any(|&d| d > 10);
        let parts: Vec<String> = index.digits.iter().map(|j| j.to_string()).collect();
        if wide {
            format!("|{}⟩", parts.join(","))
        } else {
            format!("|{}⟩", parts.concat())
        }
    }

    fn check_factor(&self, factor: usize) -> Result<()> {
        if factor >= self.dims.len() {
            Err(Error::FactorOutOfRange { factor, m: self.dims.len() })
        } else {
            Ok(())
        }
    }
}

/// A computational basis state, kept in both digit and decimal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisIndex {
    digits: Vec<usize>,
    decimal: usize,
}

impl BasisIndex {
    pub fn digits(&self) -> &[usize] {
        &self.digits
    }

    pub fn decimal(&self) -> usize {
        self.decimal
    }
}

pub fn index_encode(system: &QuditSystem, digits: &[usize]) -> Result<BasisIndex> {
    if digits.len() != system.dims.len() {
        return Err(Error::InvalidIndex(format!(
            "{} digits for a {}-factor system",
            digits.len(),
            system.dims.len()
        )));
    }
    let mut decimal = 0usize;
    for (i, (&j, &d)) in digits.iter().zip(&system.dims).enumerate() {
        if j >= d {
            return Err(Error::InvalidIndex(format!(
                "digit {j} at position {} exceeds d = {d}",
                i + 1
            )));
        }
        decimal = decimal * d + j;
    }
    Ok(BasisIndex { digits: digits.to_vec(), decimal })
}

/// Normalized pure state.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    system: QuditSystem,
    amps: Vec<Complex64>,
}

impl PureState {
    /// Accepts an amplitude vector already normalized to within
    /// [`NORMALIZATION_TOL`].
    pub fn new(system: QuditSystem, amps: Vec<Complex64>) -> Result<Self> {
        check_len(&system, amps.len())?;
        let n2 = norm_sq(&amps);
        if (n2 - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::NotNormalized(n2));
        }
        Ok(Self { system, amps })
    }

    /// Rescales to unit norm; rejects the zero vector.
    pub fn from_unnormalized(system: QuditSystem, mut amps: Vec<Complex64>) -> Result<Self> {
        check_len(&system, amps.len())?;
        let n2 = norm_sq(&amps);
        if !(n2 > 0.0) || !n2.is_finite() {
            return Err(Error::ZeroState);
        }
        let inv = 1.0 / n2.sqrt();
        amps.iter_mut().for_each(|a| *a *= inv);
        Ok(Self { system, amps })
    }

    pub fn from_real(system: QuditSystem, amps: &[f64]) -> Result<Self> {
        Self::from_unnormalized(system, amps.iter().map(|&a| Complex64::new(a, 0.0)).collect())
    }

    /// Skips the normalization check; for operations that preserve norm by
    /// construction.
    pub(crate) fn from_parts(system: QuditSystem, amps: Vec<Complex64>) -> Self {
        debug_assert_eq!(system.len(), amps.len());
        Self { system, amps }
    }

    pub fn basis(system: QuditSystem, digits: &[usize]) -> Result<Self> {
        let idx = system.encode(digits)?;
        let mut amps = vec![Complex64::zero(); system.len()];
        amps[idx.decimal] = Complex64::new(1.0, 0.0);
        Ok(Self { system, amps })
    }

    /// The uniform superposition `|+⟩^{⊗m}` (qudit generalization).
    pub fn uniform(system: QuditSystem) -> Self {
        let v = Complex64::new(1.0 / (system.len() as f64).sqrt(), 0.0);
        let amps = vec![v; system.len()];
        Self { system, amps }
    }

    /// Normalized sum of the given basis kets.
    pub fn from_kets(system: QuditSystem, kets: &[&[usize]]) -> Result<Self> {
        let mut amps = vec![Complex64::zero(); system.len()];
        for k in kets {
            amps[system.encode(k)?.decimal] += Complex64::new(1.0, 0.0);
        }
        Self::from_unnormalized(system, amps)
    }

    /// GHZ state `(|0…0⟩ + |1…1⟩)/√2` on `n` qubits.
    pub fn ghz(n: usize) -> Result<Self> {
        let sys = QuditSystem::qubits(n)?;
        let ones = vec![1; n];
        let zeros = vec![0; n];
        Self::from_kets(sys, &[&zeros, &ones])
    }

    pub fn system(&self) -> &QuditSystem {
        &self.system
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amps(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn amp(&self, index: &BasisIndex) -> Complex64 {
        self.amps[index.decimal]
    }

    pub fn norm_sq(&self) -> f64 {
        norm_sq(&self.amps)
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        if self.system != other.system {
            return Err(Error::SystemMismatch(self.system.dims.clone(), other.system.dims.clone()));
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// True when every amplitude has a vanishing imaginary part.
    pub fn is_real(&self, tol: f64) -> bool {
        self.amps.iter().all(|a| a.im.abs() <= tol)
    }

    /// Applies `ops[i]` (a `d_i × d_i` matrix) to factor `i`. The result is
    /// renormalized, so this realizes the projective SLOCC action.
    pub fn apply_local(&self, ops: &[DMatrix<Complex64>]) -> Result<PureState> {
        let amps = apply_local_ops(&self.system, &self.amps, ops)?;
        Self::from_unnormalized(self.system.clone(), amps)
    }
}

fn check_len(system: &QuditSystem, got: usize) -> Result<()> {
    if got != system.len() {
        return Err(Error::LengthMismatch { expected: system.len(), got });
    }
    Ok(())
}

fn norm_sq(amps: &[Complex64]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum()
}

/// Applies one matrix per factor to an amplitude vector, without
/// renormalizing.
pub fn apply_local_ops(
    system: &QuditSystem,
    amps: &[Complex64],
    ops: &[DMatrix<Complex64>],
) -> Result<Vec<Complex64>> {
    check_len(system, amps.len())?;
    if ops.len() != system.num_factors() {
        return Err(Error::InvalidSystem(format!(
            "{} local operators for {} factors",
            ops.len(),
            system.num_factors()
        )));
    }
    let mut cur = amps.to_vec();
    for (f, op) in ops.iter().enumerate() {
        let d = system.dims[f];
        if op.nrows() != d || op.ncols() != d {
            return Err(Error::InvalidSystem(format!(
                "operator on factor {} is {}×{}, expected {d}×{d}",
                f + 1,
                op.nrows(),
                op.ncols()
            )));
        }
        let m = flatten_amps(system, &cur, f);
        let out = op * m;
        cur = unflatten_amps(system, f, &out);
    }
    Ok(cur)
}

/// Exact-rational state; a projective object, so no normalization applies.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalState {
    system: QuditSystem,
    amps: Vec<BigRational>,
}

impl RationalState {
    pub fn new(system: QuditSystem, amps: Vec<BigRational>) -> Result<Self> {
        check_len(&system, amps.len())?;
        if amps.iter().all(Zero::is_zero) {
            return Err(Error::ZeroState);
        }
        Ok(Self { system, amps })
    }

    /// Sum of basis kets with unit coefficients.
    pub fn from_kets(system: QuditSystem, kets: &[&[usize]]) -> Result<Self> {
        let mut amps = vec![BigRational::zero(); system.len()];
        for k in kets {
            let i = system.encode(k)?.decimal;
            amps[i] += BigRational::from_integer(1.into());
        }
        Self::new(system, amps)
    }

    pub fn system(&self) -> &QuditSystem {
        &self.system
    }

    pub fn amps(&self) -> &[BigRational] {
        &self.amps
    }

    /// Normalized floating-point image.
    pub fn to_pure(&self) -> Result<PureState> {
        let amps = self
            .amps
            .iter()
            .map(|a| Complex64::new(a.to_f64().unwrap_or(f64::NAN), 0.0))
            .collect();
        PureState::from_unnormalized(self.system.clone(), amps)
    }

    /// Rows of the one-factor flattening, in exact arithmetic.
    pub fn flatten(&self, factor: usize) -> Result<Vec<Vec<BigRational>>> {
        self.system.check_factor(factor)?;
        let (d, cols) = (self.system.dims[factor], self.system.len / self.system.dims[factor]);
        let mut rows = vec![vec![BigRational::zero(); cols]; d];
        for_each_flat_position(&self.system, factor, |idx, r, c| {
            rows[r][c] = self.amps[idx].clone();
        });
        Ok(rows)
    }

    /// Multilinear rank over the rationals (no tolerance).
    pub fn multilinear_rank(&self) -> Vec<usize> {
        (0..self.system.num_factors())
            .map(|f| exact::rank(&self.flatten(f).expect("factor in range")))
            .collect()
    }
}

/// Calls `visit(flat_index, row, col)` for every amplitude.
fn for_each_flat_position(
    system: &QuditSystem,
    factor: usize,
    mut visit: impl FnMut(usize, usize, usize),
) {
    let dims = &system.dims;
    let m = dims.len();
    let mut digits = vec![0usize; m];
    for idx in 0..system.len {
        let row = digits[factor];
        let mut col = 0usize;
        for (i, (&j, &d)) in digits.iter().zip(dims).enumerate() {
            if i != factor {
                col = col * d + j;
            }
        }
        visit(idx, row, col);
        for i in (0..m).rev() {
            digits[i] += 1;
            if digits[i] < dims[i] {
                break;
            }
            digits[i] = 0;
        }
    }
}

fn flatten_amps(system: &QuditSystem, amps: &[Complex64], factor: usize) -> DMatrix<Complex64> {
    let d = system.dims[factor];
    let mut m = DMatrix::zeros(d, system.len / d);
    for_each_flat_position(system, factor, |idx, r, c| m[(r, c)] = amps[idx]);
    m
}

fn unflatten_amps(system: &QuditSystem, factor: usize, m: &DMatrix<Complex64>) -> Vec<Complex64> {
    let mut amps = vec![Complex64::zero(); system.len];
    for_each_flat_position(system, factor, |idx, r, c| amps[idx] = m[(r, c)]);
    amps
}

/// One-factor flattening (`factor` is zero-based).
pub fn flatten(state: &PureState, factor: usize) -> Result<DMatrix<Complex64>> {
    state.system.check_factor(factor)?;
    Ok(flatten_amps(&state.system, &state.amps, factor))
}

/// Inverse of [`flatten`]; moves entries only, so the round trip is exact.
pub fn unflatten(system: &QuditSystem, factor: usize, m: &DMatrix<Complex64>) -> Result<Vec<Complex64>> {
    system.check_factor(factor)?;
    let d = system.dims[factor];
    if m.nrows() != d || m.ncols() * d != system.len {
        return Err(Error::LengthMismatch { expected: system.len, got: m.len() });
    }
    Ok(unflatten_amps(system, factor, m))
}

/// Singular values in non-increasing order.
pub fn singular_values(m: &DMatrix<Complex64>) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    let mut sv: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Number of singular values above `tol_rel · σ_max`.
pub fn numerical_rank(m: &DMatrix<Complex64>, tol_rel: f64) -> usize {
    let sv = singular_values(m);
    match sv.first() {
        Some(&smax) if smax > 0.0 => sv.iter().filter(|&&s| s > tol_rel * smax).count(),
        _ => 0,
    }
}

pub fn multilinear_rank(state: &PureState, tol_rel: f64) -> Vec<usize> {
    (0..state.system.num_factors())
        .map(|f| numerical_rank(&flatten_amps(&state.system, &state.amps, f), tol_rel))
        .collect()
}

/// Orthonormal basis (as columns) of the column space of `m`, truncated at
/// relative tolerance `tol_rel`.
pub(crate) fn column_space(m: &DMatrix<Complex64>, tol_rel: f64) -> DMatrix<Complex64> {
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let smax = order.first().map(|&i| svd.singular_values[i]).unwrap_or(0.0);
    let keep: Vec<usize> = order
        .into_iter()
        .filter(|&i| smax > 0.0 && svd.singular_values[i] > tol_rel * smax)
        .collect();
    DMatrix::from_fn(m.nrows(), keep.len(), |r, c| u[(r, keep[c])])
}

/// Re-expresses factor `factor` in an orthonormal basis of its support
/// (the column space of the flattening), dropping the complement.
///
/// The result lives on dims with `d_factor` replaced by the flattening rank;
/// that dimension may be 1.
pub fn compress_support(state: &PureState, factor: usize) -> Result<PureState> {
    compress_support_tol(state, factor, DEFAULT_RANK_TOL)
}

pub fn compress_support_tol(state: &PureState, factor: usize, tol_rel: f64) -> Result<PureState> {
    let m = flatten(state, factor)?;
    let basis = column_space(&m, tol_rel);
    let reduced = basis.adjoint() * m;
    let mut dims = state.system.dims.clone();
    dims[factor] = basis.ncols();
    let system = QuditSystem::with_unit_factors(dims)?;
    let amps = unflatten_amps(&system, factor, &reduced);
    Ok(PureState::from_parts(system, amps))
}
