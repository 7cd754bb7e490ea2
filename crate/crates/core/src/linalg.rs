//! Dense exact linear solves over the rationals.
//!
//! The systems that show up here (absorption, stationary balance, discounted
//! Bellman equations) are small and sparse, so elimination skips zero entries
//! and pivots on the first nonzero entry of each column.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("singular linear system (no pivot in column {column})")]
pub struct SingularSystem {
    pub column: usize,
}

/// Square matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Matrix {
            n,
            data: vec![Rational::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = Rational::one();
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> &Rational {
        &self.data[row * self.n + col]
    }

    pub fn get_mut(&mut self, row: usize, col: usize) -> &mut Rational {
        &mut self.data[row * self.n + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Rational) {
        self.data[row * self.n + col] = value;
    }
}

/// Solves `m · X = rhs` where `rhs` holds one column per entry.
///
/// Returns the solution columns in the same order.
pub fn solve(m: &Matrix, rhs: &[Vec<Rational>]) -> Result<Vec<Vec<Rational>>, SingularSystem> {
    let n = m.dim();
    let k = rhs.len();
    // Augmented rows: n coefficient entries followed by k right-hand sides.
    let width = n + k;
    let mut rows: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut row = Vec::with_capacity(width);
            row.extend((0..n).map(|j| m.get(i, j).clone()));
            row.extend(rhs.iter().map(|col| col[i].clone()));
            row
        })
        .collect();

    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !rows[r][col].is_zero())
            .ok_or(SingularSystem { column: col })?;
        rows.swap(col, pivot);
        let inv = Rational::one() / &rows[col][col];
        if !inv.is_one() {
            for v in rows[col][col..].iter_mut() {
                if !v.is_zero() {
                    *v *= &inv;
                }
            }
        }
        let pivot_row = std::mem::take(&mut rows[col]);
        for (r, row) in rows.iter_mut().enumerate() {
            if r == col || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for j in col..width {
                if !pivot_row[j].is_zero() {
                    let delta = &factor * &pivot_row[j];
                    row[j] -= delta;
                }
            }
        }
        rows[col] = pivot_row;
    }

    Ok((0..k)
        .map(|c| rows.iter().map(|row| row[n + c].clone()).collect())
        .collect())
}

/// Convenience wrapper for a single right-hand side.
pub fn solve_vector(m: &Matrix, rhs: Vec<Rational>) -> Result<Vec<Rational>, SingularSystem> {
    let mut cols = solve(m, &[rhs])?;
    Ok(cols.pop().unwrap_or_default())
}
