//! Hyperdeterminants of the three formats as polynomials in the entries.
//!
//! * `Δ₂₂₂`: the discriminant `b² − 4ac` of `det(xA + yB)`, which is
//!   Cayley's hyperdeterminant.
//! * `Δ₂₂₃`: the discriminant (Gram determinant) of the ternary quadratic
//!   `det(x₀A₀ + x₁A₁ + x₂A₂)` over the third-factor slices.
//! * `Δ₂₃₃`: the discriminant of the binary cubic `det(xA + yB)` over the
//!   first-factor slices.

use num_complex::Complex64;
use num_rational::BigRational;

use super::{Format, Scalar, Tensor3};
use crate::error::{Error, Result};
use crate::tensor::{PureState, RationalState};

fn det2<S: Scalar>(m: &[Vec<S>]) -> S {
    m[0][0].clone() * m[1][1].clone() - m[0][1].clone() * m[1][0].clone()
}

pub(crate) fn det3<S: Scalar>(m: &[Vec<S>]) -> S {
    let minor = |r1: usize, r2: usize, c1: usize, c2: usize| {
        m[r1][c1].clone() * m[r2][c2].clone() - m[r1][c2].clone() * m[r2][c1].clone()
    };
    m[0][0].clone() * minor(1, 2, 1, 2) - m[0][1].clone() * minor(1, 2, 0, 2)
        + m[0][2].clone() * minor(1, 2, 0, 1)
}

/// Coefficients `[x², xy, y²]` of `det(xA + yB)` for 2×2 slices.
pub(crate) fn binary_quadratic<S: Scalar>(t: &Tensor3<S>) -> [S; 3] {
    let a = t.first_slice(0);
    let b = t.first_slice(1);
    let mixed = a[0][0].clone() * b[1][1].clone() + b[0][0].clone() * a[1][1].clone()
        - a[0][1].clone() * b[1][0].clone()
        - b[0][1].clone() * a[1][0].clone();
    [det2(&a), mixed, det2(&b)]
}

pub(crate) fn cayley<S: Scalar>(t: &Tensor3<S>) -> S {
    let [a, b, c] = binary_quadratic(t);
    b.clone() * b - S::from_i64(4) * a * c
}

/// Cayley's hyperdeterminant written out monomial by monomial.
pub fn cayley_expanded<S: Scalar>(t: &Tensor3<S>) -> S {
    let e = |i, j, k| t.get(i, j, k).clone();
    let sq = |x: S| x.clone() * x;
    let squares = sq(e(0, 0, 0) * e(1, 1, 1))
        + sq(e(0, 0, 1) * e(1, 1, 0))
        + sq(e(0, 1, 0) * e(1, 0, 1))
        + sq(e(1, 0, 0) * e(0, 1, 1));
    let pairs = e(0, 0, 0) * e(0, 0, 1) * e(1, 1, 0) * e(1, 1, 1)
        + e(0, 0, 0) * e(0, 1, 0) * e(1, 0, 1) * e(1, 1, 1)
        + e(0, 0, 0) * e(1, 0, 0) * e(0, 1, 1) * e(1, 1, 1)
        + e(0, 0, 1) * e(0, 1, 0) * e(1, 0, 1) * e(1, 1, 0)
        + e(0, 0, 1) * e(1, 0, 0) * e(0, 1, 1) * e(1, 1, 0)
        + e(0, 1, 0) * e(1, 0, 0) * e(0, 1, 1) * e(1, 0, 1);
    let quads = e(0, 0, 0) * e(0, 1, 1) * e(1, 0, 1) * e(1, 1, 0)
        + e(0, 0, 1) * e(0, 1, 0) * e(1, 0, 0) * e(1, 1, 1);
    squares - S::from_i64(2) * pairs + S::from_i64(4) * quads
}

/// Gram matrix of `q(x) = det(Σ x_c A_c)`, so `q(x) = xᵀ G x`.
pub(crate) fn gram_223<S: Scalar>(t: &Tensor3<S>) -> Vec<Vec<S>> {
    let slices: Vec<_> = (0..3).map(|c| t.last_slice(c)).collect();
    let polar = |a: &Vec<Vec<S>>, b: &Vec<Vec<S>>| {
        (a[0][0].clone() * b[1][1].clone() + a[1][1].clone() * b[0][0].clone()
            - a[0][1].clone() * b[1][0].clone()
            - a[1][0].clone() * b[0][1].clone())
            * S::half()
    };
    (0..3).map(|c| (0..3).map(|d| polar(&slices[c], &slices[d])).collect()).collect()
}

pub(crate) fn hyperdet_223<S: Scalar>(t: &Tensor3<S>) -> S {
    det3(&gram_223(t))
}

/// Coefficients `[x³, x²y, xy², y³]` of `det(xA + yB)` for 3×3 slices,
/// by multilinear expansion over the columns taken from `B`.
pub(crate) fn binary_cubic<S: Scalar>(t: &Tensor3<S>) -> [S; 4] {
    let a = t.first_slice(0);
    let b = t.first_slice(1);
    let mut coeffs = [S::zero(), S::zero(), S::zero(), S::zero()];
    for mask in 0u32..8 {
        let m: Vec<Vec<S>> = (0..3)
            .map(|r| {
                (0..3)
                    .map(|c| if mask >> c & 1 == 1 { b[r][c].clone() } else { a[r][c].clone() })
                    .collect()
            })
            .collect();
        let slot = mask.count_ones() as usize;
        coeffs[slot] = coeffs[slot].clone() + det3(&m);
    }
    coeffs
}

/// Discriminant `b²c² − 4ac³ − 4b³d − 27a²d² + 18abcd` of
/// `ax³ + bx²y + cxy² + dy³`.
pub fn cubic_discriminant<S: Scalar>(coeffs: &[S; 4]) -> S {
    let [a, b, c, d] = coeffs.clone();
    let i = S::from_i64;
    b.clone() * b.clone() * c.clone() * c.clone()
        - i(4) * a.clone() * c.clone() * c.clone() * c.clone()
        - i(4) * b.clone() * b.clone() * b.clone() * d.clone()
        - i(27) * a.clone() * a.clone() * d.clone() * d.clone()
        + i(18) * a * b * c * d
}

pub(crate) fn hyperdet_233<S: Scalar>(t: &Tensor3<S>) -> S {
    cubic_discriminant(&binary_cubic(t))
}

pub(crate) fn hyperdet<S: Scalar>(format: Format, t: &Tensor3<S>) -> S {
    match format {
        Format::F222 => cayley(t),
        Format::F223 => hyperdet_223(t),
        Format::F233 => hyperdet_233(t),
    }
}

fn expect_format(dims: &[usize], want: Format) -> Result<()> {
    if Format::from_dims(dims)? != want {
        return Err(Error::FormatMismatch(dims.to_vec()));
    }
    Ok(())
}

/// The hyperdeterminant of whichever format `state` lives in.
pub fn delta(state: &PureState) -> Result<Complex64> {
    let format = Format::from_dims(state.system().dims())?;
    Ok(hyperdet(format, &Tensor3::from_state(state)?))
}

pub fn delta_exact(state: &RationalState) -> Result<BigRational> {
    let format = Format::from_dims(state.system().dims())?;
    Ok(hyperdet(format, &Tensor3::from_rational(state)?))
}

pub fn delta_222(state: &PureState) -> Result<Complex64> {
    expect_format(state.system().dims(), Format::F222)?;
    delta(state)
}

pub fn delta_223(state: &PureState) -> Result<Complex64> {
    expect_format(state.system().dims(), Format::F223)?;
    delta(state)
}

pub fn delta_233(state: &PureState) -> Result<Complex64> {
    expect_format(state.system().dims(), Format::F233)?;
    delta(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;
    use crate::tensor::QuditSystem;
    use num_traits::Zero;

    fn rational(dims: [usize; 3], kets: &[&[usize]]) -> Tensor3<BigRational> {
        let sys = QuditSystem::new(dims.to_vec()).unwrap();
        Tensor3::from_rational(&RationalState::from_kets(sys, kets).unwrap()).unwrap()
    }

    #[test]
    fn cayley_on_ghz_and_w() {
        let ghz = rational([2, 2, 2], &[&[0, 0, 0], &[1, 1, 1]]);
        assert_eq!(cayley(&ghz), ratio(1, 1));
        assert_eq!(cayley_expanded(&ghz), ratio(1, 1));
        let w = rational([2, 2, 2], &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert!(cayley(&w).is_zero());
        let sep = rational([2, 2, 2], &[&[0, 1, 1]]);
        assert!(cayley(&sep).is_zero());
    }

    #[test]
    fn pencil_form_matches_expanded_cayley() {
        let data: Vec<BigRational> = (0..8).map(|i| ratio(i * i - 3 * i + 1, i + 1)).collect();
        let t = Tensor3::new([2, 2, 2], data).unwrap();
        assert_eq!(cayley(&t), cayley_expanded(&t));
    }

    #[test]
    fn delta_223_on_o8_and_o7() {
        let o8 = rational([2, 2, 3], &[&[0, 0, 0], &[0, 1, 1], &[1, 0, 1], &[1, 1, 2]]);
        assert_eq!(hyperdet_223(&o8), ratio(1, 4));
        let o7 = rational([2, 2, 3], &[&[0, 0, 0], &[0, 1, 1], &[1, 0, 2]]);
        assert!(hyperdet_223(&o7).is_zero());
        let sep = rational([2, 2, 3], &[&[0, 0, 0]]);
        assert!(hyperdet_223(&sep).is_zero());
    }

    #[test]
    fn delta_233_on_o17_and_o16() {
        let o17 = rational([2, 3, 3], &[&[0, 0, 0], &[0, 1, 1], &[1, 0, 0], &[1, 2, 2]]);
        // det(xA + yB) = (x + y)·x·y.
        assert_eq!(binary_cubic(&o17), [ratio(0, 1), ratio(1, 1), ratio(1, 1), ratio(0, 1)]);
        assert_eq!(hyperdet_233(&o17), ratio(1, 1));
        let o16 = rational([2, 3, 3], &[&[0, 0, 0], &[0, 1, 1], &[1, 0, 1], &[1, 2, 2]]);
        assert!(hyperdet_233(&o16).is_zero());
        let b_zero = rational([2, 3, 3], &[&[0, 0, 0], &[0, 1, 1], &[0, 2, 2]]);
        assert!(hyperdet_233(&b_zero).is_zero());
    }

    #[test]
    fn cubic_discriminant_of_known_roots() {
        // (x − y)(x − 2y)(x + 3y) = x³ − 7xy² + 6y³; roots 1, 2, −3.
        let c = [ratio(1, 1), ratio(0, 1), ratio(-7, 1), ratio(6, 1)];
        let want = ratio((1 - 2) * (1 + 3) * (2 + 3), 1);
        assert_eq!(cubic_discriminant(&c), want.clone() * want);
    }

    #[test]
    fn format_checks() {
        let ghz = PureState::ghz(3).unwrap();
        assert!((delta_222(&ghz).unwrap() - Complex64::new(0.25, 0.0)).norm() < 1e-15);
        assert!(matches!(delta_223(&ghz), Err(Error::FormatMismatch(_))));
        let q4 = PureState::ghz(4).unwrap();
        assert!(matches!(delta(&q4), Err(Error::FormatMismatch(_))));
    }
}
