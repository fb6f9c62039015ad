use num_rational::BigRational;
use num_traits::{One, Zero};

use super::ratfun::RationalFunction;
use crate::error::{Error, Result};

/// The field operations elimination needs.
pub trait FieldElement: Clone + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    /// `rhs` is nonzero.
    fn div(&self, rhs: &Self) -> Self;
}

impl FieldElement for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn div(&self, rhs: &Self) -> Self {
        self / rhs
    }
}

impl FieldElement for RationalFunction {
    fn zero() -> Self {
        RationalFunction::zero()
    }
    fn one() -> Self {
        RationalFunction::one()
    }
    fn is_zero(&self) -> bool {
        RationalFunction::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn div(&self, rhs: &Self) -> Self {
        self.checked_div(rhs).expect("pivot is nonzero")
    }
}

/// Solve `matrix · x = rhs` exactly by Gauss-Jordan elimination.
///
/// Rectangular systems are allowed. Returns the unique solution, or
/// `NoSolution` for an inconsistent system, or `Underdetermined` listing the
/// free columns when the solution is not unique. The returned vector is
/// checked by substitution before it is handed back.
pub fn solve_linear<T: FieldElement>(matrix: &[Vec<T>], rhs: &[T]) -> Result<Vec<T>> {
    let rows = matrix.len();
    if rhs.len() != rows {
        return Err(Error::DimensionMismatch(format!(
            "{rows} rows but right-hand side of length {}",
            rhs.len()
        )));
    }
    let cols = matrix.first().map_or(0, Vec::len);
    if matrix.iter().any(|r| r.len() != cols) {
        return Err(Error::DimensionMismatch("ragged matrix".into()));
    }

    let mut aug: Vec<Vec<T>> = matrix
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();

    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..rows).find(|&r| !aug[r][col].is_zero()) else {
            continue;
        };
        aug.swap(row, p);
        let inv = T::one().div(&aug[row][col]);
        for x in &mut aug[row][col..] {
            *x = x.mul(&inv);
        }
        for r in 0..rows {
            if r == row || aug[r][col].is_zero() {
                continue;
            }
            let factor = aug[r][col].clone();
            let pivot_row = aug[row].clone();
            for (x, p) in aug[r][col..].iter_mut().zip(&pivot_row[col..]) {
                *x = x.sub(&factor.mul(p));
            }
        }
        pivots.push(col);
        row += 1;
        if row == rows {
            break;
        }
    }

    if aug[row..].iter().any(|r| !r[cols].is_zero()) {
        return Err(Error::NoSolution);
    }
    if pivots.len() < cols {
        let free = (0..cols).filter(|c| !pivots.contains(c)).collect();
        return Err(Error::Underdetermined { free });
    }

    let x: Vec<T> = (0..cols).map(|i| aug[i][cols].clone()).collect();
    for (r, b) in matrix.iter().zip(rhs) {
        let lhs = r
            .iter()
            .zip(&x)
            .fold(T::zero(), |acc, (a, xi)| acc.add(&a.mul(xi)));
        assert!(lhs == *b, "elimination produced a non-solution");
    }
    Ok(x)
}
