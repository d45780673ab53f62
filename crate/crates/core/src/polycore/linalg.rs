//! Exact rational linear algebra on small dense matrices.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::RationalPoly;
use super::rational::{rational_from_f64, upper_f64};
use super::roots::{cauchy_root_bound, isolate_roots_in, refine_root};

pub type Matrix = Vec<Vec<BigRational>>;

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Row-reduces in place and returns the rank.
fn row_reduce(rows: &mut Matrix) -> usize {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..nrows).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = rows[rank][col].recip();
        for c in col..ncols {
            rows[rank][c] = &rows[rank][c] * &inv;
        }
        for r in 0..nrows {
            if r != rank && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone();
                for c in col..ncols {
                    let t = &factor * &rows[rank][c];
                    rows[r][c] -= t;
                }
            }
        }
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    rank
}

pub fn rank(rows: &[Vec<BigRational>]) -> usize {
    let mut m = rows.to_vec();
    row_reduce(&mut m)
}

/// Solves `a x = b` for square nonsingular `a`; `None` when singular.
pub fn solve(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = a.len();
    let mut aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    // rank of the coefficient part decides solvability
    let mut coeff: Matrix = a.to_vec();
    if row_reduce(&mut coeff) < n {
        return None;
    }
    row_reduce(&mut aug);
    Some(aug.into_iter().map(|row| row[n].clone()).collect())
}

pub fn inverse(a: &[Vec<BigRational>]) -> Option<Matrix> {
    let n = a.len();
    let mut aug: Matrix = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    let mut left: Matrix = a.to_vec();
    if row_reduce(&mut left) < n {
        return None;
    }
    row_reduce(&mut aug);
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn transpose(a: &[Vec<BigRational>]) -> Matrix {
    let ncols = a.first().map_or(0, Vec::len);
    (0..ncols)
        .map(|j| a.iter().map(|row| row[j].clone()).collect())
        .collect()
}

pub fn matmul(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Matrix {
    let inner = b.len();
    let ncols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..ncols)
                .map(|j| {
                    (0..inner).fold(BigRational::zero(), |acc, k| acc + &row[k] * &b[k][j])
                })
                .collect()
        })
        .collect()
}

/// Characteristic polynomial `det(xI - A)` by Faddeev–LeVerrier.
pub fn charpoly(a: &[Vec<BigRational>]) -> RationalPoly {
    let n = a.len();
    let mut coeffs = vec![BigRational::zero(); n + 1];
    coeffs[n] = BigRational::one();
    let mut m: Matrix = vec![vec![BigRational::zero(); n]; n];
    for k in 1..=n {
        let c_prev = coeffs[n + 1 - k].clone();
        let mut next = matmul(a, &m);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &c_prev;
        }
        let am = matmul(a, &next);
        let trace = (0..n).fold(BigRational::zero(), |acc, i| acc + &am[i][i]);
        coeffs[n - k] = -trace / int(k as i64);
        m = next;
    }
    RationalPoly::new(coeffs)
}

/// Solves `sum_{k=1}^n c_k j^k = target_j` for `j = 1..n` exactly.
///
/// The Vandermonde system on the nodes `1..n` (with the `x^0` column removed) is
/// always nonsingular, so this never fails for `n >= 1` and `target.len() == n`.
pub fn vandermonde_interpolation(n: usize, target: &[BigRational]) -> Vec<BigRational> {
    assert!(n >= 1, "interpolation needs n >= 1");
    assert_eq!(target.len(), n, "target length must equal n");
    let a: Matrix = (1..=n)
        .map(|j| {
            let jj = int(j as i64);
            let mut pow = jj.clone();
            (1..=n)
                .map(|_| {
                    let v = pow.clone();
                    pow *= &jj;
                    v
                })
                .collect()
        })
        .collect();
    solve(&a, target).expect("Vandermonde matrix on distinct nonzero nodes is invertible")
}

/// Upper bound on the spectral norm `||A||_2` of a square rational matrix.
///
/// The largest eigenvalue of the Gram matrix `AᵀA` is isolated exactly from its
/// characteristic polynomial, refined to relative width `2^-52`, and the square
/// root of the upper endpoint is rounded upward.
pub fn spectral_norm_upper(a: &[Vec<BigRational>]) -> f64 {
    let gram = matmul(&transpose(a), a);
    let cp = charpoly(&gram);
    if gram.iter().all(|row| row.iter().all(Zero::is_zero)) {
        return 0.0;
    }
    let bound = cauchy_root_bound(&cp);
    let coarse = rational_from_f64(1.0).expect("finite");
    let roots = isolate_roots_in(&cp, &BigRational::zero(), &bound, &coarse)
        .expect("characteristic polynomial is nonzero");
    let largest = roots.last().expect("nonzero Gram matrix has a positive eigenvalue");
    let rel = BigRational::new(BigInt::one(), BigInt::one() << 52u32);
    let width = if largest.hi.is_positive() {
        &largest.hi * &rel
    } else {
        rel
    };
    let refined = refine_root(&cp, largest, &width);
    let top = upper_f64(&refined.hi);
    let norm = top.sqrt();
    // sqrt is correctly rounded; one step up covers the rounding direction
    norm.next_up()
}
