//! SLOCC invariants and orbit classification for the 2×2×2, 2×2×3 and
//! 2×3×3 formats.

mod classify;
mod delta;
mod family;
mod tables;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::tensor::{PureState, RationalState};

pub use classify::{
    classify, classify_222, classify_223, classify_233, classify_exact, classify_numeric,
    VANISHING_TOL,
};
pub use delta::{
    cayley_expanded, cubic_discriminant, delta, delta_222, delta_223, delta_233, delta_exact,
};
pub use family::{
    classify_generic, classify_grover_family, critical_orbits, generic_state, reachable_orbits,
    symmetry_representatives, FIXED_DRAWS,
};
pub use tables::{
    appendix_rows, normal_form_state, normal_forms, orbit, AppendixRow, NormalForm,
};

/// The three tensor formats with a finite orbit classification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Format {
    F222,
    F223,
    F233,
}

impl Format {
    pub fn from_dims(dims: &[usize]) -> Result<Format> {
        match dims {
            [2, 2, 2] => Ok(Format::F222),
            [2, 2, 3] => Ok(Format::F223),
            [2, 3, 3] => Ok(Format::F233),
            _ => Err(Error::FormatMismatch(dims.to_vec())),
        }
    }

    pub fn dims(self) -> [usize; 3] {
        match self {
            Format::F222 => [2, 2, 2],
            Format::F223 => [2, 2, 3],
            Format::F233 => [2, 3, 3],
        }
    }

    /// Degree of the format's hyperdeterminant.
    pub fn delta_degree(self) -> i32 {
        match self {
            Format::F222 => 4,
            Format::F223 => 6,
            Format::F233 => 12,
        }
    }

    pub fn orbit_count(self) -> u8 {
        match self {
            Format::F222 => 6,
            Format::F223 => 8,
            Format::F233 => 17,
        }
    }

    pub fn all() -> [Format; 3] {
        [Format::F222, Format::F223, Format::F233]
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.dims();
        write!(f, "{a}x{b}x{c}")
    }
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Format> {
        match s.trim() {
            "222" | "2x2x2" => Ok(Format::F222),
            "223" | "2x2x3" => Ok(Format::F223),
            "233" | "2x3x3" => Ok(Format::F233),
            other => Err(Error::Config(format!("unknown format {other:?}"))),
        }
    }
}

/// Orbit identifier within a format's table.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct OrbitLabel {
    pub format: Format,
    pub index: u8,
    pub variety_desc: &'static str,
    pub dimension: u32,
}

impl fmt::Display for OrbitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "O{}", self.index)
    }
}

impl fmt::Debug for OrbitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "O{}[{}]", self.index, self.format)
    }
}

/// One decision-tree test and its outcome.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceStep {
    pub test: String,
    pub outcome: String,
}

/// Root pattern of the binary cubic `det(xA + yB)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RootStructure {
    IdenticallyZero,
    Distinct,
    Double,
    Triple,
}

/// Format-specific determinant-pencil data.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum PencilData {
    /// Coefficients of `det(xA + yB)` for the first-factor slices.
    Quadratic { coeffs: [Complex64; 3] },
    /// Rank of the Gram matrix of the ternary quadratic `det(Σ x_c A_c)`.
    Ternary { gram_rank: usize },
    /// The binary cubic of a 3×3 pencil. `root_rank` is the rank of the
    /// pencil at its repeated root, `minimal_indices` the (column, row)
    /// minimal indices of a singular pencil.
    Cubic {
        coeffs: [Complex64; 4],
        roots: RootStructure,
        root_rank: Option<usize>,
        minimal_indices: Option<(usize, usize)>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InvariantReport {
    pub mlrank: Vec<usize>,
    pub delta_raw: Complex64,
    /// `|Δ| / ‖T‖^deg`.
    pub delta_normalized: f64,
    pub pencil_data: Option<PencilData>,
    pub orbit: OrbitLabel,
    pub trace: Vec<TraceStep>,
}

/// Field operations shared by the exact and floating-point paths.
pub trait Scalar:
    Clone
    + fmt::Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_i64(v: i64) -> Self;
    fn half() -> Self;
    fn to_complex(&self) -> Complex64;
}

impl Scalar for Complex64 {
    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }

    fn half() -> Self {
        Complex64::new(0.5, 0.0)
    }

    fn to_complex(&self) -> Complex64 {
        *self
    }
}

impl Scalar for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(v.into())
    }

    fn half() -> Self {
        BigRational::new(1.into(), 2.into())
    }

    fn to_complex(&self) -> Complex64 {
        use num_traits::ToPrimitive;
        Complex64::new(self.to_f64().unwrap_or(f64::NAN), 0.0)
    }
}

/// Dense three-factor tensor, row-major in `(i, j, k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor3<S> {
    dims: [usize; 3],
    data: Vec<S>,
}

impl<S: Scalar> Tensor3<S> {
    pub fn new(dims: [usize; 3], data: Vec<S>) -> Result<Self> {
        let n = dims.iter().product::<usize>();
        if data.len() != n {
            return Err(Error::LengthMismatch { expected: n, got: data.len() });
        }
        Ok(Self { dims, data })
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &S {
        &self.data[(i * self.dims[1] + j) * self.dims[2] + k]
    }

    pub fn data(&self) -> &[S] {
        &self.data
    }

    fn other_factors(f: usize) -> [usize; 2] {
        match f {
            0 => [1, 2],
            1 => [0, 2],
            _ => [0, 1],
        }
    }

    fn at(&self, idx: [usize; 3]) -> &S {
        self.get(idx[0], idx[1], idx[2])
    }

    /// Rows of the flattening along factor `f`, columns in mixed-radix order
    /// of the remaining factors.
    pub fn flatten_rows(&self, f: usize) -> Vec<Vec<S>> {
        let [p, q] = Self::other_factors(f);
        (0..self.dims[f])
            .map(|r| {
                let mut row = Vec::with_capacity(self.dims[p] * self.dims[q]);
                for a in 0..self.dims[p] {
                    for b in 0..self.dims[q] {
                        let mut idx = [0; 3];
                        idx[f] = r;
                        idx[p] = a;
                        idx[q] = b;
                        row.push(self.at(idx).clone());
                    }
                }
                row
            })
            .collect()
    }

    /// Inverse of [`flatten_rows`] for a flattening with `rows.len()` rows.
    pub fn from_flattening(dims: [usize; 3], f: usize, rows: &[Vec<S>]) -> Self {
        let mut new_dims = dims;
        new_dims[f] = rows.len();
        let [p, q] = Self::other_factors(f);
        let mut data = vec![S::zero(); new_dims.iter().product()];
        for (r, row) in rows.iter().enumerate() {
            for a in 0..new_dims[p] {
                for b in 0..new_dims[q] {
                    let mut idx = [0; 3];
                    idx[f] = r;
                    idx[p] = a;
                    idx[q] = b;
                    data[(idx[0] * new_dims[1] + idx[1]) * new_dims[2] + idx[2]] =
                        row[a * new_dims[q] + b].clone();
                }
            }
        }
        Self { dims: new_dims, data }
    }

    /// Reorders factors: new factor `n` is old factor `perm[n]`.
    pub fn permute(&self, perm: [usize; 3]) -> Self {
        let dims = [self.dims[perm[0]], self.dims[perm[1]], self.dims[perm[2]]];
        let mut data = Vec::with_capacity(self.data.len());
        for i in 0..dims[0] {
            for j in 0..dims[1] {
                for k in 0..dims[2] {
                    let mut old = [0; 3];
                    old[perm[0]] = i;
                    old[perm[1]] = j;
                    old[perm[2]] = k;
                    data.push(self.at(old).clone());
                }
            }
        }
        Self { dims, data }
    }

    /// Slice with the first index fixed, as a `d_2 × d_3` matrix.
    pub(crate) fn first_slice(&self, i: usize) -> Vec<Vec<S>> {
        (0..self.dims[1])
            .map(|j| (0..self.dims[2]).map(|k| self.get(i, j, k).clone()).collect())
            .collect()
    }

    /// Slice with the last index fixed, as a `d_1 × d_2` matrix.
    pub(crate) fn last_slice(&self, k: usize) -> Vec<Vec<S>> {
        (0..self.dims[0])
            .map(|i| (0..self.dims[1]).map(|j| self.get(i, j, k).clone()).collect())
            .collect()
    }
}

impl Tensor3<Complex64> {
    pub fn from_state(state: &PureState) -> Result<Self> {
        let dims = three_dims(state.system().dims())?;
        Self::new(dims, state.amps().to_vec())
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }
}

impl Tensor3<BigRational> {
    pub fn from_rational(state: &RationalState) -> Result<Self> {
        let dims = three_dims(state.system().dims())?;
        Self::new(dims, state.amps().to_vec())
    }

    pub fn to_complex(&self) -> Tensor3<Complex64> {
        Tensor3 { dims: self.dims, data: self.data.iter().map(Scalar::to_complex).collect() }
    }
}

fn three_dims(dims: &[usize]) -> Result<[usize; 3]> {
    <[usize; 3]>::try_from(dims).map_err(|_| Error::FormatMismatch(dims.to_vec()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(dims: [usize; 3]) -> Tensor3<Complex64> {
        let n = dims.iter().product::<usize>();
        Tensor3::new(dims, (0..n).map(|i| Complex64::new(i as f64, 0.0)).collect()).unwrap()
    }

    #[test]
    fn flatten_round_trip() {
        let x = t([2, 3, 3]);
        for f in 0..3 {
            let rows = x.flatten_rows(f);
            assert_eq!(Tensor3::from_flattening(x.dims(), f, &rows), x);
        }
    }

    #[test]
    fn permute_moves_entries() {
        let x = t([2, 3, 2]);
        let y = x.permute([0, 2, 1]);
        assert_eq!(y.dims(), [2, 2, 3]);
        assert_eq!(y.get(1, 0, 2), x.get(1, 2, 0));
    }

    #[test]
    fn format_parsing() {
        assert_eq!("223".parse::<Format>().unwrap(), Format::F223);
        assert_eq!(Format::from_dims(&[2, 3, 3]).unwrap(), Format::F233);
        assert!(Format::from_dims(&[3, 3, 2]).is_err());
        assert_eq!(Format::F233.to_string(), "2x3x3");
    }
}
