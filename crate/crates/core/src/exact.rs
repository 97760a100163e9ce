//! Exact rational linear algebra and rationalization of floats.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Rank of a rational matrix by fraction-free (Bareiss) elimination.
pub fn rank(rows: &[Vec<BigRational>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows.iter().map(|r| integer_row(r)).collect();
    bareiss_rank(&mut m)
}

/// Clears denominators row by row; row scaling leaves the rank unchanged.
fn integer_row(row: &[BigRational]) -> Vec<BigInt> {
    let lcm = row.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    row.iter().map(|v| v.numer() * (&lcm / v.denom())).collect()
}

fn bareiss_rank(m: &mut [Vec<BigInt>]) -> usize {
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(p) = (rank..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][col].clone();
        for r in rank + 1..nrows {
            let factor = m[r][col].clone();
            for c in 0..ncols {
                let v = (&pivot * &m[r][c] - &factor * &m[rank][c]) / &prev;
                m[r][c] = v;
            }
        }
        prev = pivot;
        rank += 1;
    }
    rank
}

/// Indices of a maximal linearly independent subset of rows, chosen
/// greedily in order.
pub fn independent_rows(rows: &[Vec<BigRational>]) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    for r in 0..rows.len() {
        let mut trial: Vec<Vec<BigRational>> = chosen.iter().map(|&i| rows[i].clone()).collect();
        trial.push(rows[r].clone());
        if rank(&trial) > chosen.len() {
            chosen.push(r);
        }
    }
    chosen
}

/// Continued-fraction rationalization: the first convergent within `tol`
/// of `x`.
pub fn rationalize(x: f64, tol: f64) -> Result<BigRational> {
    if !x.is_finite() {
        return Err(Error::NotApplicable(format!("cannot rationalize {x}")));
    }
    if !(tol > 0.0) {
        return Err(Error::NotApplicable(format!("tolerance must be positive, got {tol}")));
    }
    let exact = BigRational::from_float(x).expect("finite float");
    // h/k convergents.
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut rest = exact.clone();
    for _ in 0..96 {
        let a = rest.floor().to_integer();
        let h2 = &a * &h1 + &h0;
        let k2 = &a * &k1 + &k0;
        let approx = BigRational::new(h2.clone(), k2.clone());
        let err = (&approx - &exact).abs().to_f64().unwrap_or(f64::INFINITY);
        if err <= tol {
            return Ok(approx);
        }
        let frac = &rest - BigRational::from_integer(a);
        if frac.is_zero() {
            return Ok(approx);
        }
        rest = frac.recip();
        (h0, h1) = (h1, h2);
        (k0, k1) = (k1, k2);
    }
    Ok(exact)
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn rank_small_cases() {
        assert_eq!(rank(&[vec![q(1), q(0)], vec![q(0), q(1)]]), 2);
        assert_eq!(rank(&[vec![q(1), q(2)], vec![q(2), q(4)]]), 1);
        assert_eq!(rank(&[vec![q(0), q(0)], vec![q(0), q(0)]]), 0);
        assert_eq!(rank(&[]), 0);
        let r = vec![
            vec![ratio(1, 3), ratio(1, 2), q(1)],
            vec![ratio(2, 3), q(1), q(2)],
            vec![q(0), q(0), ratio(5, 7)],
        ];
        assert_eq!(rank(&r), 2);
    }

    #[test]
    fn independent_rows_skips_dependents() {
        let rows = vec![vec![q(1), q(1)], vec![q(2), q(2)], vec![q(0), q(1)]];
        assert_eq!(independent_rows(&rows), vec![0, 2]);
    }

    #[test]
    fn rationalize_recovers_simple_fractions() {
        assert_eq!(rationalize(0.75, 1e-12).unwrap(), ratio(3, 4));
        assert_eq!(rationalize(-1.0 / 3.0, 1e-12).unwrap(), ratio(-1, 3));
        assert_eq!(rationalize(0.0, 1e-12).unwrap(), q(0));
        let r = rationalize(std::f64::consts::PI, 1e-12).unwrap();
        assert!((r.to_f64().unwrap() - std::f64::consts::PI).abs() <= 1e-12);
        assert!(rationalize(f64::NAN, 1e-12).is_err());
    }
}
