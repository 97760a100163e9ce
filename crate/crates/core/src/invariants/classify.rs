//! Orbit decision trees.
//!
//! The trees are written once over a [`Backend`] that supplies ranks,
//! support compression and the zero test, so the same branching runs in
//! exact rational arithmetic and in floating point.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::delta::{binary_cubic, binary_quadratic, cayley, gram_223, hyperdet, hyperdet_223};
use super::tables::orbit;
use super::{Format, InvariantReport, PencilData, RootStructure, Scalar, Tensor3, TraceStep};
use crate::error::{Error, Result};
use crate::exact;
use crate::tensor::{self, PureState, RationalState, DEFAULT_RANK_TOL};

/// Normalized invariant values below this count as zero.
pub const VANISHING_TOL: f64 = 1e-9;

/// Continued-fraction tolerance used to rationalize real amplitudes.
const RATIONALIZE_TOL: f64 = 1e-12;
/// Largest accepted deviation between a state and its rationalization.
const RECONSTRUCT_TOL: f64 = 1e-10;

pub(crate) trait Backend {
    type S: Scalar;
    fn rank(&self, rows: &[Vec<Self::S>]) -> usize;
    /// Replaces factor `f` by its support.
    fn compress(&self, t: &Tensor3<Self::S>, f: usize) -> Tensor3<Self::S>;
    /// Zero test for a value homogeneous of `degree` in the entries of `t`.
    fn vanishes(&self, v: &Self::S, degree: i32, t: &Tensor3<Self::S>) -> bool;
}

pub(crate) struct Exact;

impl Backend for Exact {
    type S = BigRational;

    fn rank(&self, rows: &[Vec<BigRational>]) -> usize {
        exact::rank(rows)
    }

    fn compress(&self, t: &Tensor3<BigRational>, f: usize) -> Tensor3<BigRational> {
        let rows = t.flatten_rows(f);
        let keep: Vec<Vec<BigRational>> =
            exact::independent_rows(&rows).into_iter().map(|r| rows[r].clone()).collect();
        Tensor3::from_flattening(t.dims(), f, &keep)
    }

    fn vanishes(&self, v: &BigRational, _degree: i32, _t: &Tensor3<BigRational>) -> bool {
        v.is_zero()
    }
}

pub(crate) struct Numeric {
    pub rank_tol: f64,
    pub vanishing_tol: f64,
}

impl Default for Numeric {
    fn default() -> Self {
        Self { rank_tol: DEFAULT_RANK_TOL, vanishing_tol: VANISHING_TOL }
    }
}

fn to_matrix(rows: &[Vec<Complex64>]) -> DMatrix<Complex64> {
    let ncols = rows.first().map_or(0, Vec::len);
    DMatrix::from_fn(rows.len(), ncols, |r, c| rows[r][c])
}

impl Backend for Numeric {
    type S = Complex64;

    fn rank(&self, rows: &[Vec<Complex64>]) -> usize {
        tensor::numerical_rank(&to_matrix(rows), self.rank_tol)
    }

    fn compress(&self, t: &Tensor3<Complex64>, f: usize) -> Tensor3<Complex64> {
        let m = to_matrix(&t.flatten_rows(f));
        let basis = tensor::column_space(&m, self.rank_tol);
        let reduced = basis.adjoint() * m;
        let rows: Vec<Vec<Complex64>> = (0..reduced.nrows())
            .map(|r| reduced.row(r).iter().copied().collect())
            .collect();
        Tensor3::from_flattening(t.dims(), f, &rows)
    }

    fn vanishes(&self, v: &Complex64, degree: i32, t: &Tensor3<Complex64>) -> bool {
        let scale = t.norm().powi(degree);
        scale == 0.0 || v.norm() / scale < self.vanishing_tol
    }
}

struct Tree<'a, B: Backend> {
    backend: &'a B,
    trace: Vec<TraceStep>,
}

fn yes_no(zero: bool) -> String {
    if zero { "zero" } else { "nonzero" }.to_string()
}

impl<B: Backend> Tree<'_, B> {
    fn log(&mut self, test: impl Into<String>, outcome: impl Into<String>) {
        self.trace.push(TraceStep { test: test.into(), outcome: outcome.into() });
    }

    fn mlrank(&mut self, t: &Tensor3<B::S>) -> [usize; 3] {
        let r = [0, 1, 2].map(|f| self.backend.rank(&t.flatten_rows(f)));
        self.log(format!("multilinear rank of {}x{}x{}", t.dims()[0], t.dims()[1], t.dims()[2]), format!("{r:?}"));
        r
    }

    fn cayley_test(&mut self, core: &Tensor3<B::S>, what: &str) -> bool {
        let zero = self.backend.vanishes(&cayley(core), 4, core);
        self.log(format!("Δ222 of {what}"), yes_no(zero));
        zero
    }

    fn delta223_test(&mut self, t: &Tensor3<B::S>, what: &str) -> bool {
        let zero = self.backend.vanishes(&hyperdet_223(t), 6, t);
        self.log(format!("Δ223 of {what}"), yes_no(zero));
        zero
    }

    fn quadratic_data(&self, t: &Tensor3<B::S>) -> PencilData {
        PencilData::Quadratic { coeffs: binary_quadratic(t).map(|c| c.to_complex()) }
    }

    fn ternary_data(&self, t: &Tensor3<B::S>) -> PencilData {
        PencilData::Ternary { gram_rank: self.backend.rank(&gram_223(t)) }
    }

    fn run_222(&mut self, t: &Tensor3<B::S>) -> Result<(u8, Option<PencilData>)> {
        let r = self.mlrank(t);
        let idx = match r {
            [1, 1, 1] => 1,
            [2, 1, 2] => 2,
            [1, 2, 2] => 3,
            [2, 2, 1] => 4,
            [2, 2, 2] => {
                if self.cayley_test(t, "tensor") {
                    5
                } else {
                    6
                }
            }
            _ => return Err(Error::InconsistentRanks(r.to_vec())),
        };
        Ok((idx, Some(self.quadratic_data(t))))
    }

    fn run_223(&mut self, t: &Tensor3<B::S>) -> Result<(u8, Option<PencilData>)> {
        let r = self.mlrank(t);
        let idx = match r {
            [1, 1, 1] => 1,
            [2, 2, 1] => 2,
            [2, 1, 2] => 3,
            [1, 2, 2] => 4,
            [2, 2, 2] => {
                let core = self.backend.compress(t, 2);
                self.log("compress factor 3", "2x2x2 core");
                let zero = self.cayley_test(&core, "2x2x2 core");
                return Ok((if zero { 5 } else { 6 }, Some(self.quadratic_data(&core))));
            }
            [2, 2, 3] => {
                let zero = self.delta223_test(t, "tensor");
                return Ok((if zero { 7 } else { 8 }, Some(self.ternary_data(t))));
            }
            _ => return Err(Error::InconsistentRanks(r.to_vec())),
        };
        Ok((idx, None))
    }

    fn run_233(&mut self, t: &Tensor3<B::S>) -> Result<(u8, Option<PencilData>)> {
        let r = self.mlrank(t);
        let idx = match r {
            [1, 1, 1] => 1,
            [2, 2, 1] => 2,
            [2, 1, 2] => 3,
            [1, 2, 2] => 4,
            [1, 3, 3] => 9,
            [2, 2, 2] => {
                let core = self.backend.compress(&self.backend.compress(t, 1), 2);
                self.log("compress factors 2 and 3", "2x2x2 core");
                let zero = self.cayley_test(&core, "2x2x2 core");
                return Ok((if zero { 5 } else { 6 }, Some(self.quadratic_data(&core))));
            }
            [2, 3, 2] => {
                let core = self.backend.compress(t, 2).permute([0, 2, 1]);
                self.log("compress factor 3, swap factors 2 and 3", "2x2x3 core");
                let zero = self.delta223_test(&core, "2x2x3 core");
                return Ok((if zero { 7 } else { 8 }, Some(self.ternary_data(&core))));
            }
            [2, 2, 3] => {
                let core = self.backend.compress(t, 1);
                self.log("compress factor 2", "2x2x3 core");
                let zero = self.delta223_test(&core, "2x2x3 core");
                return Ok((if zero { 10 } else { 12 }, Some(self.ternary_data(&core))));
            }
            [2, 3, 3] => return self.run_pencil(t),
            _ => return Err(Error::InconsistentRanks(r.to_vec())),
        };
        Ok((idx, None))
    }

    /// Kronecker analysis of the full-rank 3×3 pencil `xA + yB`.
    fn run_pencil(&mut self, t: &Tensor3<B::S>) -> Result<(u8, Option<PencilData>)> {
        let coeffs = binary_cubic(t);
        let data = |roots, root_rank, minimal_indices| PencilData::Cubic {
            coeffs: coeffs.clone().map(|c| c.to_complex()),
            roots,
            root_rank,
            minimal_indices,
        };
        let b = self.backend;
        let f_zero = coeffs.iter().all(|c| b.vanishes(c, 3, t));
        self.log("det(xA+yB) identically zero", if f_zero { "yes" } else { "no" });
        if f_zero {
            let indices = self.minimal_indices(t);
            if indices != (1, 1) {
                return Err(Error::InconsistentRanks(vec![2, 3, 3]));
            }
            return Ok((11, Some(data(RootStructure::IdenticallyZero, None, Some(indices)))));
        }
        let zero = b.vanishes(&super::delta::cubic_discriminant(&coeffs), 12, t);
        self.log("Δ233 (cubic discriminant)", yes_no(zero));
        if !zero {
            return Ok((17, Some(data(RootStructure::Distinct, None, None))));
        }
        let [ca, cb, cc, cd] = coeffs.clone();
        let i = B::S::from_i64;
        let p = cb.clone() * cb.clone() - i(3) * ca.clone() * cc.clone();
        let q = cb.clone() * cc.clone() - i(9) * ca.clone() * cd.clone();
        let r = cc.clone() * cc - i(3) * cb.clone() * cd;
        let p_zero = b.vanishes(&p, 6, t);
        let triple = p_zero && b.vanishes(&q, 6, t) && b.vanishes(&r, 6, t);
        self.log("Hessian of the cubic", if triple { "zero (triple root)" } else { "nonzero (double root)" });
        // Projective point (x : y) of the repeated root.
        let (x, y) = if triple {
            if b.vanishes(&ca, 3, t) { (B::S::one(), B::S::zero()) } else { (-cb, i(3) * ca) }
        } else if p_zero {
            (B::S::one(), B::S::zero())
        } else {
            (-q, i(2) * p)
        };
        let a = t.first_slice(0);
        let bs = t.first_slice(1);
        let m: Vec<Vec<B::S>> = (0..3)
            .map(|row| (0..3).map(|col| x.clone() * a[row][col].clone() + y.clone() * bs[row][col].clone()).collect())
            .collect();
        let rank = b.rank(&m);
        self.log("pencil rank at the repeated root", rank.to_string());
        let (idx, roots) = match (triple, rank) {
            (true, 1) => (13, RootStructure::Triple),
            (true, _) => (15, RootStructure::Triple),
            (false, 1) => (14, RootStructure::Double),
            (false, _) => (16, RootStructure::Double),
        };
        Ok((idx, Some(data(roots, Some(rank), None))))
    }

    /// Smallest degrees of polynomial kernel vectors of `xA + yB` and of its
    /// transpose, searched up to degree 1 (all a 3×3 pencil with full
    /// multilinear rank can have).
    fn minimal_indices(&mut self, t: &Tensor3<B::S>) -> (usize, usize) {
        let a = t.first_slice(0);
        let bs = t.first_slice(1);
        let transpose = |m: &Vec<Vec<B::S>>| -> Vec<Vec<B::S>> {
            (0..3).map(|r| (0..3).map(|c| m[c][r].clone()).collect()).collect()
        };
        let col = self.degree_one_kernel(&a, &bs);
        let row = self.degree_one_kernel(&transpose(&a), &transpose(&bs));
        let show = |v: Option<usize>| v.map_or("none ≤ 1".to_string(), |d| d.to_string());
        self.log("minimal indices (column, row)", format!("({}, {})", show(col), show(row)));
        (col.unwrap_or(usize::MAX), row.unwrap_or(usize::MAX))
    }

    /// `Some(1)` when `(xA + yB)(x v₀ + y v₁) = 0` has a nonzero solution.
    fn degree_one_kernel(&self, a: &[Vec<B::S>], b: &[Vec<B::S>]) -> Option<usize> {
        // Stacked coefficient matrix [[A, 0], [B, A], [0, B]] acting on (v₀, v₁).
        let z = B::S::zero;
        let mut rows = Vec::with_capacity(9);
        for (left, right) in [(Some(a), None), (Some(b), Some(a)), (None, Some(b))] {
            for r in 0..3 {
                let mut row = Vec::with_capacity(6);
                for blk in [left, right] {
                    for c in 0..3 {
                        row.push(blk.map_or_else(z, |m| m[r][c].clone()));
                    }
                }
                rows.push(row);
            }
        }
        (self.backend.rank(&rows) < 6).then_some(1)
    }
}

fn run_tree<B: Backend>(
    backend: &B,
    format: Format,
    t: &Tensor3<B::S>,
) -> Result<(u8, Option<PencilData>, [usize; 3], Vec<TraceStep>)> {
    let mut tree = Tree { backend, trace: Vec::new() };
    let (idx, pencil) = match format {
        Format::F222 => tree.run_222(t)?,
        Format::F223 => tree.run_223(t)?,
        Format::F233 => tree.run_233(t)?,
    };
    let mlrank = [0, 1, 2].map(|f| backend.rank(&t.flatten_rows(f)));
    Ok((idx, pencil, mlrank, tree.trace))
}

fn report<B: Backend>(backend: &B, format: Format, t: &Tensor3<B::S>) -> Result<InvariantReport> {
    let (idx, pencil_data, mlrank, trace) = run_tree(backend, format, t)?;
    let delta_raw = hyperdet(format, t).to_complex();
    let norm = t.data().iter().map(|v| v.to_complex().norm_sqr()).sum::<f64>().sqrt();
    Ok(InvariantReport {
        mlrank: mlrank.to_vec(),
        delta_raw,
        delta_normalized: delta_raw.norm() / norm.powi(format.delta_degree()),
        pencil_data,
        orbit: orbit(format, idx)?,
        trace,
    })
}

/// Classifies an exact rational state.
pub fn classify_exact(state: &RationalState) -> Result<InvariantReport> {
    let format = Format::from_dims(state.system().dims())?;
    report(&Exact, format, &Tensor3::from_rational(state)?)
}

/// Floating-point classification only: SVD ranks at relative 1e-8 and
/// normalized invariants at [`VANISHING_TOL`].
pub fn classify_numeric(state: &PureState) -> Result<InvariantReport> {
    let format = Format::from_dims(state.system().dims())?;
    report(&Numeric::default(), format, &Tensor3::from_state(state)?)
}

/// Classifies a state. Real states are also rationalized amplitude by
/// amplitude and classified exactly; the two answers must agree.
pub fn classify(state: &PureState) -> Result<InvariantReport> {
    let mut rep = classify_numeric(state)?;
    if !state.is_real(0.0) {
        rep.trace.push(TraceStep {
            test: "exact cross-check".into(),
            outcome: "skipped (complex amplitudes)".into(),
        });
        return Ok(rep);
    }
    let rational = rationalize_state(state)?;
    let exact = classify_exact(&rational)?;
    if exact.orbit != rep.orbit {
        return Err(Error::ToleranceDisagreement { exact: exact.orbit, numeric: rep.orbit });
    }
    rep.trace.push(TraceStep { test: "exact cross-check".into(), outcome: format!("agrees ({})", exact.orbit) });
    Ok(rep)
}

fn rationalize_state(state: &PureState) -> Result<RationalState> {
    let amps = state
        .amps()
        .iter()
        .map(|a| exact::rationalize(a.re, RATIONALIZE_TOL))
        .collect::<Result<Vec<_>>>()?;
    let worst = amps
        .iter()
        .zip(state.amps())
        .map(|(q, a)| (q.to_complex().re - a.re).abs())
        .fold(0.0, f64::max);
    if worst > RECONSTRUCT_TOL {
        return Err(Error::NotApplicable(format!("rationalization error {worst:e}")));
    }
    RationalState::new(state.system().clone(), amps)
}

fn classify_format(state: &PureState, want: Format) -> Result<InvariantReport> {
    if Format::from_dims(state.system().dims())? != want {
        return Err(Error::FormatMismatch(state.system().dims().to_vec()));
    }
    classify(state)
}

pub fn classify_222(state: &PureState) -> Result<InvariantReport> {
    classify_format(state, Format::F222)
}

pub fn classify_223(state: &PureState) -> Result<InvariantReport> {
    classify_format(state, Format::F223)
}

pub fn classify_233(state: &PureState) -> Result<InvariantReport> {
    classify_format(state, Format::F233)
}
