//! Exact linear relations among truncated series.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{fmt_rational, ExactRational};
use crate::series::PuiseuxSeries;

/// Rows required beyond the number of series before a nullspace is trusted.
pub const EXTRA_ROWS: usize = 8;

/// `sum_i coefficients[i] * series[i] = 0` below `order`. Evidence from a
/// truncation, not a proof.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Relation {
    pub coefficients: Vec<ExactRational>,
    pub order: ExactRational,
}

impl Relation {
    /// The linear combination the relation claims vanishes.
    pub fn apply(&self, series: &[PuiseuxSeries]) -> PuiseuxSeries {
        series
            .iter()
            .zip(&self.coefficients)
            .fold(PuiseuxSeries::zero(self.order.clone()), |acc, (f, c)| {
                &acc + &f.truncate_at_most(&self.order).scale(c)
            })
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<_> = self.coefficients.iter().map(fmt_rational).collect();
        write!(f, "({}) mod q^{}", parts.join(", "), fmt_rational(&self.order))
    }
}

/// Integer coefficient matrix: one row per exponent below `order` in any
/// series, one column per series, each row cleared of denominators.
fn coefficient_matrix(series: &[PuiseuxSeries], order: &ExactRational) -> Result<Vec<Vec<BigInt>>> {
    for f in series {
        if f.order() < order {
            return Err(Error::InsufficientOrder {
                requested: order.clone(),
                available: f.order().clone(),
            });
        }
    }
    let exponents: BTreeSet<ExactRational> = series
        .iter()
        .flat_map(|f| f.terms().map(|(e, _)| e).filter(|e| e < order).collect::<Vec<_>>())
        .collect();
    let needed = series.len() + EXTRA_ROWS;
    if exponents.len() < needed {
        return Err(Error::InsufficientRows {
            needed,
            available: exponents.len(),
        });
    }
    Ok(exponents
        .iter()
        .map(|e| {
            let row: Vec<ExactRational> = series.iter().map(|f| f.coefficient(e)).collect();
            let scale = row.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
            row.iter().map(|c| (c * &scale).to_integer()).collect()
        })
        .collect())
}

/// Bareiss elimination to row echelon form; returns the pivot columns.
fn bareiss(m: &mut [Vec<BigInt>], cols: usize) -> Vec<usize> {
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let (top, below) = m.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in below.iter_mut() {
            for j in c + 1..cols {
                let v = &pivot_row[c] * &row[j] - &row[c] * &pivot_row[j];
                // exact: every entry is a minor of the original matrix
                row[j] = v / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = top[r][c].clone();
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    pivots
}

/// A basis of the exact rational nullspace of the coefficient matrix of
/// `series` below `order`, one relation per non-pivot column in increasing
/// order, each scaled so its first nonzero entry is 1. Empty means the series
/// are independent on the sampled rows.
pub fn discover(series: &[PuiseuxSeries], order: &ExactRational) -> Result<Vec<Relation>> {
    let n = series.len();
    let mut m = coefficient_matrix(series, order)?;
    let pivots = bareiss(&mut m, n);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let mut out = Vec::with_capacity(free.len());
    for &f in &free {
        let mut x = vec![ExactRational::zero(); n];
        x[f] = ExactRational::one();
        for (k, &pc) in pivots.iter().enumerate().rev() {
            let row = &m[k];
            let s: ExactRational = (pc + 1..n)
                .filter(|&j| !row[j].is_zero())
                .map(|j| ExactRational::from_integer(row[j].clone()) * &x[j])
                .sum();
            x[pc] = -s / ExactRational::from_integer(row[pc].clone());
        }
        let first = x.iter().find(|c| !c.is_zero()).cloned().expect("x[f] = 1");
        out.push(Relation {
            coefficients: x.into_iter().map(|c| c / &first).collect(),
            order: order.clone(),
        });
    }
    Ok(out)
}

/// Rank of the coefficient matrix of `series` below `order`.
pub fn rank(series: &[PuiseuxSeries], order: &ExactRational) -> Result<usize> {
    let mut m = coefficient_matrix(series, order)?;
    Ok(bareiss(&mut m, series.len()).len())
}
