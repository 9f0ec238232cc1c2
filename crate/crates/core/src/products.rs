//! Infinite products over arithmetic progressions of exponents.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{ceil_i64, denom_u64, int, lcm_u64, ExactRational};
use crate::series::PuiseuxSeries;

/// Which binomial a factor uses: `(1 - q^e)` or `(1 + q^e)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Binomial {
    OneMinus,
    OnePlus,
}

/// `prod_{n>=0} (1 -/+ q^(start + step*n))^power`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProductFactor {
    pub binomial: Binomial,
    pub start: ExactRational,
    pub step: ExactRational,
    pub power: i64,
}

impl ProductFactor {
    pub fn new(binomial: Binomial, start: ExactRational, step: ExactRational, power: i64) -> Result<Self> {
        if !start.is_positive() || !step.is_positive() {
            return Err(Error::InvalidFactor(format!(
                "start and step must be positive (start={start}, step={step})"
            )));
        }
        if power == 0 {
            return Err(Error::InvalidFactor("power must be nonzero".into()));
        }
        Ok(Self {
            binomial,
            start,
            step,
            power,
        })
    }

    /// `prod_{n>=0} (1 - q^(start + step*n))^-1`, a common building block.
    pub fn reciprocal(start: ExactRational, step: ExactRational) -> Result<Self> {
        Self::new(Binomial::OneMinus, start, step, -1)
    }
}

/// `coefficient * q^exponent * prod factors`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProductSpec {
    pub factors: Vec<ProductFactor>,
    pub prefactor_exponent: ExactRational,
    pub prefactor_coefficient: ExactRational,
}

impl ProductSpec {
    pub fn new(factors: Vec<ProductFactor>) -> Self {
        Self {
            factors,
            prefactor_exponent: Zero::zero(),
            prefactor_coefficient: One::one(),
        }
    }

    pub fn with_prefactor(mut self, coefficient: ExactRational, exponent: ExactRational) -> Self {
        self.prefactor_coefficient = coefficient;
        self.prefactor_exponent = exponent;
        self
    }
}

/// Expands a product exactly below `q^order`.
///
/// Works on a dense integer grid. A factor `(1 - s q^e)` is multiplied in place
/// (descending sweep); its reciprocal is the geometric series in `s q^e`,
/// applied as an ascending sweep. Factors with `e >= order - prefactor` are 1
/// modulo the truncation and are skipped.
pub fn expand_product(spec: &ProductSpec, order: &ExactRational) -> PuiseuxSeries {
    let inner_order = order - &spec.prefactor_exponent;
    if !inner_order.is_positive() || spec.prefactor_coefficient.is_zero() {
        return PuiseuxSeries::zero(order.clone());
    }
    let d = spec.factors.iter().fold(1, |d, f| {
        lcm_u64(lcm_u64(d, denom_u64(&f.start)), denom_u64(&f.step))
    });
    let scale = int(d as i64);
    let len = ceil_i64(&(&inner_order * &scale)) as usize;
    let mut grid = vec![BigInt::zero(); len];
    grid[0] = BigInt::one();

    for f in &spec.factors {
        let mut e = &f.start * &scale;
        while e < int(len as i64) {
            let k = ceil_i64(&e) as usize;
            for _ in 0..f.power.unsigned_abs() {
                apply_binomial(&mut grid, k, f.binomial, f.power < 0);
            }
            e += &f.step * &scale;
        }
    }

    let pe = &spec.prefactor_exponent;
    let pc = &spec.prefactor_coefficient;
    let terms = grid.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| {
        (
            pe + BigRational::new(BigInt::from(i), BigInt::from(d)),
            BigRational::from_integer(c) * pc,
        )
    });
    PuiseuxSeries::from_terms(terms, order.clone())
}

/// Multiplies the grid by `(1 - s q^k)` or by its reciprocal, where `s = 1`
/// for [`Binomial::OneMinus`] and `s = -1` for [`Binomial::OnePlus`].
fn apply_binomial(grid: &mut [BigInt], k: usize, binomial: Binomial, reciprocal: bool) {
    // (1 - s q^k): c[i] -= s c[i-k] descending;  1/(1 - s q^k): c[i] += s c[i-k] ascending
    let subtract = (binomial == Binomial::OneMinus) != reciprocal;
    let n = grid.len();
    let update = |grid: &mut [BigInt], i: usize| {
        let (lo, hi) = grid.split_at_mut(i);
        let prev = &lo[i - k];
        if prev.is_zero() {
            return;
        }
        if subtract {
            hi[0] -= prev;
        } else {
            hi[0] += prev;
        }
    };
    if reciprocal {
        for i in k..n {
            update(grid, i);
        }
    } else {
        for i in (k..n).rev() {
            update(grid, i);
        }
    }
}

/// Euler's function `(q)_inf = prod_{i>=1} (1 - q^i)` below `q^order`.
pub fn euler_phi(order: &ExactRational) -> PuiseuxSeries {
    let f = ProductFactor::new(Binomial::OneMinus, int(1), int(1), 1).expect("valid factor");
    expand_product(&ProductSpec::new(vec![f]), order)
}
