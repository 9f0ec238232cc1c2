//! A2 root-lattice geometry, the Weyl group S3, the lattice-sum character of
//! the simple W3 algebra at c = 4/5, and one-dimensional theta sums.
//!
//! Vectors are written in the simple-root basis `x1*alpha1 + x2*alpha2` with
//! Gram matrix `[[2, -1], [-1, 2]]`.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::products::{expand_product, Binomial, ProductFactor, ProductSpec};
use crate::rational::{ceil_sqrt, int, rat, ExactRational};
use crate::series::PuiseuxSeries;

pub const GRAM: [[i64; 2]; 2] = [[2, -1], [-1, 2]];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_value(v: i64) -> Option<Self> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RootVector {
    pub x1: ExactRational,
    pub x2: ExactRational,
}

impl RootVector {
    pub fn new(x1: ExactRational, x2: ExactRational) -> Self {
        Self { x1, x2 }
    }

    pub fn alpha1() -> Self {
        Self::new(int(1), int(0))
    }

    pub fn alpha2() -> Self {
        Self::new(int(0), int(1))
    }

    /// Half-sum of positive roots, `alpha1 + alpha2`.
    pub fn rho() -> Self {
        Self::new(int(1), int(1))
    }
}

pub fn gram(u: &RootVector, v: &RootVector) -> ExactRational {
    let g = |i: usize, j: usize| int(GRAM[i][j]);
    &u.x1 * &v.x1 * g(0, 0) + &u.x1 * &v.x2 * g(0, 1) + &u.x2 * &v.x1 * g(1, 0) + &u.x2 * &v.x2 * g(1, 1)
}

/// A Weyl group element as an integer matrix on simple-root coordinates
/// (column `j` is the image of `alpha_j`) together with its sign.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeylElement {
    pub matrix: [[i64; 2]; 2],
    pub sign: Sign,
    /// Length of a shortest word in the simple reflections.
    pub length: u32,
}

impl WeylElement {
    pub fn identity() -> Self {
        Self {
            matrix: [[1, 0], [0, 1]],
            sign: Sign::Plus,
            length: 0,
        }
    }

    /// `s1`: alpha1 -> -alpha1, alpha2 -> alpha1 + alpha2.
    pub fn s1() -> Self {
        Self {
            matrix: [[-1, 1], [0, 1]],
            sign: Sign::Minus,
            length: 1,
        }
    }

    /// `s2`: alpha1 -> alpha1 + alpha2, alpha2 -> -alpha2.
    pub fn s2() -> Self {
        Self {
            matrix: [[1, 0], [1, -1]],
            sign: Sign::Minus,
            length: 1,
        }
    }

    pub fn apply(&self, v: &RootVector) -> RootVector {
        let m = &self.matrix;
        RootVector::new(
            &v.x1 * int(m[0][0]) + &v.x2 * int(m[0][1]),
            &v.x1 * int(m[1][0]) + &v.x2 * int(m[1][1]),
        )
    }

    fn apply_int(&self, v: (i64, i64)) -> (i64, i64) {
        let m = &self.matrix;
        (m[0][0] * v.0 + m[0][1] * v.1, m[1][0] * v.0 + m[1][1] * v.1)
    }

    /// `self * other`; the length is an upper bound only.
    pub fn compose(&self, other: &Self) -> Self {
        let (a, b) = (&self.matrix, &other.matrix);
        let mut m = [[0; 2]; 2];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        let sign = Sign::from_value(self.sign.value() * other.sign.value()).expect("sign");
        Self {
            matrix: m,
            sign,
            length: self.length + other.length,
        }
    }

    pub fn determinant(&self) -> i64 {
        let m = &self.matrix;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    /// `M^T G M == G`.
    pub fn preserves_gram(&self) -> bool {
        let m = &self.matrix;
        (0..2).all(|i| {
            (0..2).all(|j| {
                let mut s = 0;
                for k in 0..2 {
                    for l in 0..2 {
                        s += m[k][i] * GRAM[k][l] * m[l][j];
                    }
                }
                s == GRAM[i][j]
            })
        })
    }
}

/// The six elements of S3, ordered by word length: `e, s1, s2, s1s2, s2s1,
/// s1s2s1`. Signs are `(-1)^length`.
pub fn weyl_group() -> Vec<WeylElement> {
    let gens = [WeylElement::s1(), WeylElement::s2()];
    let mut found = vec![WeylElement::identity()];
    let mut queue = VecDeque::from([WeylElement::identity()]);
    while let Some(w) = queue.pop_front() {
        for g in &gens {
            let next = w.compose(g);
            if found.iter().all(|f| f.matrix != next.matrix) {
                found.push(next.clone());
                queue.push_back(next);
            }
        }
    }
    found
}

/// One summand of the lattice sum: `sign * q^exponent` before the
/// `q^(-1/12) (q)_inf^-2` prefactor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeTerm {
    pub m: i64,
    pub n: i64,
    pub weyl_index: usize,
    pub sign: Sign,
    pub exponent: ExactRational,
}

/// `|5 w(rho) + 20 n alpha1 + 20 m alpha2 - 4 rho|^2 / 40` for every `w` and
/// `|m|, |n| <= bound`.
pub fn fkw_summands(bound: i64) -> Vec<LatticeTerm> {
    let group = weyl_group();
    let mut out = Vec::new();
    for m in -bound..=bound {
        for n in -bound..=bound {
            for (i, w) in group.iter().enumerate() {
                let (r1, r2) = w.apply_int((1, 1));
                let x = 5 * r1 + 20 * n - 4;
                let y = 5 * r2 + 20 * m - 4;
                let norm = 2 * x * x - 2 * x * y + 2 * y * y;
                out.push(LatticeTerm {
                    m,
                    n,
                    weyl_index: i,
                    sign: w.sign,
                    exponent: rat(norm, 40),
                });
            }
        }
    }
    out
}

/// Window for the `(m, n)` double sum covering every exponent below `order`.
///
/// With `v = 20(n alpha1 + m alpha2)` and `u = 5 w(rho) - 4 rho`, the Gram
/// eigenvalues 1 and 3 give `|v| >= 20 sqrt(m^2 + n^2)` and `|u| <= 9 sqrt 2 <
/// 13`, so `|u + v|^2 / 40 < order + 2` forces `max(|m|, |n|) <= bound`.
pub fn fkw_window(order: &ExactRational) -> i64 {
    let s = ceil_sqrt(&(int(40) * (order + int(2))));
    (s + 13 + 19) / 20 + 1
}

/// The signed lattice sum truncated below `order`, over the window widened by
/// `extra` in every direction.
pub fn fkw_lattice_sum(order: &ExactRational, extra: i64) -> PuiseuxSeries {
    let bound = fkw_window(order) + extra;
    let terms = fkw_summands(bound)
        .into_iter()
        .filter(|t| &t.exponent < order)
        .map(|t| (t.exponent, int(t.sign.value())));
    PuiseuxSeries::from_terms(terms, order.clone())
}

/// Character of the simple W3 algebra at c = 4/5 from the lattice formula,
/// `q^(-1/12) (q)_inf^-2 sum_{m,n} sum_w eps_w q^(|5w(rho) + 20n alpha1 + 20m
/// alpha2 - 4 rho|^2 / 40)`.
pub fn fkw_character(order: &ExactRational) -> PuiseuxSeries {
    let shifted = order + rat(1, 12);
    let sum = fkw_lattice_sum(&shifted, 0);
    let inv_phi_sq = expand_product(
        &ProductSpec::new(vec![ProductFactor::new(Binomial::OneMinus, int(1), int(1), -2).expect("valid factor")]),
        &shifted,
    );
    (&sum * &inv_phi_sq).shift(&rat(-1, 12)).truncate_at_most(order)
}

/// One branch `sign * q^(A m^2 + linear m + constant)` of a theta sum.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ThetaBranch {
    pub linear: ExactRational,
    pub constant: ExactRational,
    pub sign: Sign,
}

/// `sum_{m in Z} sum_i sign_i q^(A m^2 + B_i m + C_i)` with `A > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ThetaSumSpec {
    pub quadratic: ExactRational,
    pub branches: Vec<ThetaBranch>,
}

impl ThetaSumSpec {
    pub fn new(quadratic: ExactRational, branches: Vec<ThetaBranch>) -> Result<Self> {
        if !quadratic.is_positive() {
            return Err(Error::InvalidTheta(format!("quadratic coefficient must be positive, got {quadratic}")));
        }
        Ok(Self { quadratic, branches })
    }

    /// Convenience constructor from `(B, C, sign)` triples.
    pub fn from_triples(quadratic: ExactRational, triples: &[(ExactRational, ExactRational, Sign)]) -> Result<Self> {
        let branches = triples
            .iter()
            .map(|(b, c, s)| ThetaBranch {
                linear: b.clone(),
                constant: c.clone(),
                sign: *s,
            })
            .collect();
        Self::new(quadratic, branches)
    }

    /// Summation range `|m| <= M` outside which every exponent is `>= order`.
    pub fn window(&self, order: &ExactRational) -> i64 {
        let a = &self.quadratic;
        let bmax = self.branches.iter().map(|b| b.linear.abs()).max().unwrap_or_else(Zero::zero);
        let cmax = self.branches.iter().map(|b| b.constant.abs()).max().unwrap_or_else(Zero::zero);
        let mut m = ceil_sqrt(&((order.abs() + &bmax + &cmax + int(1)) / a)) + 1;
        // A m^2 - |B| m - |C| is increasing past |B| / 2A; walk until it clears the order.
        let lower = |m: i64| a * int(m * m) - &bmax * int(m) - &cmax;
        let vertex = crate::rational::ceil_i64(&(&bmax / (a * int(2))));
        m = m.max(vertex);
        while &lower(m + 1) < order {
            m += 1;
        }
        m
    }
}

pub fn theta_sum(spec: &ThetaSumSpec, order: &ExactRational) -> PuiseuxSeries {
    if spec.branches.is_empty() {
        return PuiseuxSeries::zero(order.clone());
    }
    let window = spec.window(order);
    let mut terms = Vec::new();
    for m in -window..=window {
        let mm = BigRational::from_integer(BigInt::from(m));
        let quad = &spec.quadratic * &mm * &mm;
        for b in &spec.branches {
            let e = &quad + &b.linear * &mm + &b.constant;
            if &e < order {
                terms.push((e, int(b.sign.value())));
            }
        }
    }
    PuiseuxSeries::from_terms(terms, order.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::products::euler_phi;

    #[test]
    fn weyl_group_elements() {
        let g = weyl_group();
        assert_eq!(g.len(), 6);
        assert_eq!(g[0].matrix, [[1, 0], [0, 1]]);
        assert_eq!(g[0].sign, Sign::Plus);
        let s1 = &g[1];
        assert_eq!(s1.apply(&RootVector::alpha1()), RootVector::new(int(-1), int(0)));
        assert_eq!(s1.apply(&RootVector::alpha2()), RootVector::new(int(1), int(1)));
        assert_eq!(s1.sign, Sign::Minus);
        let lengths: Vec<_> = g.iter().map(|w| w.length).collect();
        assert_eq!(lengths, vec![0, 1, 1, 2, 2, 3]);
        for w in &g {
            assert!(w.preserves_gram());
            assert_eq!(w.sign.value(), w.determinant());
            assert_eq!(w.sign.value(), if w.length % 2 == 0 { 1 } else { -1 });
        }
    }

    #[test]
    fn weyl_group_is_closed_and_signs_multiply() {
        let g = weyl_group();
        let mut table = 0;
        for a in &g {
            for b in &g {
                let c = a.compose(b);
                let found = g.iter().find(|w| w.matrix == c.matrix).expect("closure");
                assert_eq!(found.sign, c.sign);
                table += 1;
            }
        }
        assert_eq!(table, 36);
        // longest element sends rho to -rho
        assert_eq!(g[5].apply(&RootVector::rho()), RootVector::new(int(-1), int(-1)));
    }

    #[test]
    fn gram_values() {
        let (a1, a2, rho) = (RootVector::alpha1(), RootVector::alpha2(), RootVector::rho());
        assert_eq!(gram(&a1, &a1), int(2));
        assert_eq!(gram(&a1, &a2), int(-1));
        assert_eq!(gram(&rho, &rho), int(2));
    }

    #[test]
    fn fkw_minimum_exponent() {
        let min = fkw_summands(4).into_iter().map(|t| t.exponent).min().unwrap();
        assert_eq!(min - rat(1, 12), rat(-1, 30));
    }

    #[test]
    fn fkw_leading_terms() {
        let chi = fkw_character(&int(5));
        let lead = rat(-1, 30);
        assert_eq!(chi.leading_exponent(), Some(lead.clone()));
        let c: Vec<_> = (0..5).map(|i| chi.coefficient(&(&lead + int(i)))).collect();
        assert_eq!(c, vec![int(1), int(0), int(1), int(2), int(3)]);
        // integer steps only
        assert!(chi.terms().all(|(e, _)| (e - &lead).is_integer()));
    }

    #[test]
    fn fkw_window_enlargement_is_stable() {
        let order = int(30);
        assert_eq!(fkw_lattice_sum(&order, 0), fkw_lattice_sum(&order, 2));
    }

    #[test]
    fn theta_pentagonal_equals_euler_phi() {
        // sum (-1)^k q^(k(3k-1)/2), folded: k = 2j and k = 2j + 1
        let spec = ThetaSumSpec::from_triples(int(6), &[(int(-1), int(0), Sign::Plus), (int(5), int(1), Sign::Minus)])
            .unwrap();
        for order in [1, 2, 7, 40] {
            assert_eq!(theta_sum(&spec, &int(order)), euler_phi(&int(order)));
        }
    }

    #[test]
    fn theta_empty_and_invalid() {
        let spec = ThetaSumSpec::new(int(1), vec![]).unwrap();
        let s = theta_sum(&spec, &int(9));
        assert!(s.is_empty());
        assert_eq!(s.order(), &int(9));
        assert!(ThetaSumSpec::new(int(0), vec![]).is_err());
    }

    #[test]
    fn theta_window_handles_large_linear_terms() {
        // q^(m^2/10 - 7m): the minimum sits far from m = 0
        let spec = ThetaSumSpec::from_triples(rat(1, 10), &[(int(-7), int(0), Sign::Plus)]).unwrap();
        let s = theta_sum(&spec, &int(0));
        // m^2/10 - 7m < 0 for 1 <= m <= 69, symmetric about m = 35
        assert_eq!(s.len(), 35);
        assert_eq!(s.coefficient(&rat(-245, 2)), int(1));
        assert_eq!(s.coefficient(&rat(-69, 10)), int(2));
    }
}
