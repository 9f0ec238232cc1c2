//! Truncated Puiseux series in `q` with exact rational coefficients.
//!
//! A [`PuiseuxSeries`] stores `sum c_e q^e + O(q^O)` where every exponent is a
//! multiple of `1/D`. Storage is a sorted list of exponent numerators over the
//! grading denominator `D`, which is kept canonical: `D` is the least common
//! denominator of the stored exponents (1 for a series with no terms). With a
//! canonical `D` and no stored zeros, structural equality is equality of
//! truncated series.
//!
//! The order `O` is exclusive: every coefficient below `O` is exact and
//! nothing at or above `O` is known.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{ceil_i64, denom_u64, fmt_rational, int, lcm_u64, parse_rational, ExactRational};

/// Dense accumulators are used below this many grid slots.
const DENSE_LIMIT: i64 = 1 << 22;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PuiseuxSeries {
    denom: u64,
    order: ExactRational,
    /// `(k, c)` meaning `c * q^(k/denom)`, strictly increasing in `k`, `c != 0`.
    terms: Vec<(i64, ExactRational)>,
}

/// Outcome of comparing two series below a common order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Comparison {
    Agree,
    Mismatch {
        exponent: ExactRational,
        lhs: ExactRational,
        rhs: ExactRational,
    },
}

/// Exclusive numerator bound: `k/d < order` iff `k < limit(order, d)`.
fn limit(order: &ExactRational, d: u64) -> i64 {
    ceil_i64(&(order * int(d as i64)))
}

impl PuiseuxSeries {
    /// Builds a canonical series from grid terms. Terms may be unsorted and
    /// repeated; they are summed, zeros dropped, and terms at or above the
    /// order discarded.
    fn from_grid(denom: u64, order: ExactRational, raw: Vec<(i64, ExactRational)>) -> Self {
        let lim = limit(&order, denom);
        let mut merged: BTreeMap<i64, ExactRational> = BTreeMap::new();
        for (k, c) in raw {
            if k >= lim || c.is_zero() {
                continue;
            }
            *merged.entry(k).or_insert_with(Zero::zero) += c;
        }
        let terms = merged.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Self::canonical(denom, order, terms)
    }

    /// Canonicalizes an already sorted, zero-free, in-range term list.
    fn canonical(denom: u64, order: ExactRational, mut terms: Vec<(i64, ExactRational)>) -> Self {
        let g = terms
            .iter()
            .fold(denom as i64, |g, (k, _)| g.gcd(k))
            .max(1);
        if terms.is_empty() {
            return Self {
                denom: 1,
                order,
                terms,
            };
        }
        for (k, _) in terms.iter_mut() {
            *k /= g;
        }
        Self {
            denom: denom / g as u64,
            order,
            terms,
        }
    }

    pub fn zero(order: ExactRational) -> Self {
        Self {
            denom: 1,
            order,
            terms: Vec::new(),
        }
    }

    pub fn one(order: ExactRational) -> Self {
        Self::from_grid(1, order, vec![(0, BigRational::one())])
    }

    /// `c * q^e` truncated at `order`. Rejects `e` not on the `1/denom` grid.
    pub fn monomial(
        coefficient: ExactRational,
        exponent: ExactRational,
        denom: u64,
        order: ExactRational,
    ) -> Result<Self> {
        if denom == 0 {
            return Err(Error::ZeroDenominator);
        }
        let scaled = &exponent * int(denom as i64);
        if !scaled.is_integer() {
            return Err(Error::OffGrid { exponent, denominator: denom });
        }
        let k = ceil_i64(&scaled);
        Ok(Self::from_grid(denom, order, vec![(k, coefficient)]))
    }

    /// Series from `(exponent, coefficient)` pairs; the grading denominator is
    /// inferred from the exponents.
    pub fn from_terms<I>(terms: I, order: ExactRational) -> Self
    where
        I: IntoIterator<Item = (ExactRational, ExactRational)>,
    {
        let terms: Vec<_> = terms.into_iter().collect();
        let d = terms.iter().fold(1, |d, (e, _)| lcm_u64(d, denom_u64(e)));
        let scale = int(d as i64);
        let raw = terms
            .into_iter()
            .map(|(e, c)| (ceil_i64(&(e * &scale)), c))
            .collect();
        Self::from_grid(d, order, raw)
    }

    pub fn grading_denominator(&self) -> u64 {
        self.denom
    }

    pub fn order(&self) -> &ExactRational {
        &self.order
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    fn exponent_of(&self, k: i64) -> ExactRational {
        BigRational::new(BigInt::from(k), BigInt::from(self.denom))
    }

    pub fn leading_exponent(&self) -> Option<ExactRational> {
        self.terms.first().map(|(k, _)| self.exponent_of(*k))
    }

    pub fn leading_coefficient(&self) -> Option<&ExactRational> {
        self.terms.first().map(|(_, c)| c)
    }

    /// Leading exponent, or the order for a series with no known terms. All
    /// unknown terms of an empty series lie at or above its order.
    fn lead_or_order(&self) -> ExactRational {
        self.leading_exponent().unwrap_or_else(|| self.order.clone())
    }

    pub fn terms(&self) -> impl Iterator<Item = (ExactRational, &ExactRational)> + '_ {
        self.terms.iter().map(move |(k, c)| (self.exponent_of(*k), c))
    }

    /// Coefficient of `q^e`; zero when absent. Does not check `e < order`.
    pub fn coefficient(&self, exponent: &ExactRational) -> ExactRational {
        let scaled = exponent * int(self.denom as i64);
        if !scaled.is_integer() {
            return Zero::zero();
        }
        let k = ceil_i64(&scaled);
        match self.terms.binary_search_by_key(&k, |(j, _)| *j) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => Zero::zero(),
        }
    }

    /// Lowers the order to `order`. Raising it would claim unknown terms.
    pub fn truncate(&self, order: &ExactRational) -> Result<Self> {
        if order > &self.order {
            return Err(Error::InsufficientOrder {
                requested: order.clone(),
                available: self.order.clone(),
            });
        }
        let lim = limit(order, self.denom);
        let terms = self.terms.iter().take_while(|(k, _)| *k < lim).cloned().collect();
        Ok(Self::canonical(self.denom, order.clone(), terms))
    }

    /// Truncates to `min(order, self.order)`.
    pub fn truncate_at_most(&self, order: &ExactRational) -> Self {
        if order >= &self.order {
            self.clone()
        } else {
            self.truncate(order).expect("order lowered")
        }
    }

    fn regrid(&self, d: u64) -> impl Iterator<Item = (i64, &ExactRational)> + '_ {
        let f = (d / self.denom) as i64;
        self.terms.iter().map(move |(k, c)| (k * f, c))
    }

    pub fn add(&self, other: &Self) -> Self {
        let d = lcm_u64(self.denom, other.denom);
        let order = (&self.order).min(&other.order).clone();
        let raw = self
            .regrid(d)
            .chain(other.regrid(d))
            .map(|(k, c)| (k, c.clone()))
            .collect();
        Self::from_grid(d, order, raw)
    }

    pub fn neg(&self) -> Self {
        Self {
            denom: self.denom,
            order: self.order.clone(),
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, factor: &ExactRational) -> Self {
        if factor.is_zero() {
            return Self::zero(self.order.clone());
        }
        Self {
            denom: self.denom,
            order: self.order.clone(),
            terms: self.terms.iter().map(|(k, c)| (*k, c * factor)).collect(),
        }
    }

    /// Multiplies by `q^e`, shifting the order with it.
    pub fn shift(&self, exponent: &ExactRational) -> Self {
        let d = lcm_u64(self.denom, denom_u64(exponent));
        let s = ceil_i64(&(exponent * int(d as i64)));
        let raw = self.regrid(d).map(|(k, c)| (k + s, c.clone())).collect();
        Self::from_grid(d, &self.order + exponent, raw)
    }

    /// Cauchy product. The result order is `min(O_a + lead(b), O_b + lead(a))`,
    /// the largest range on which every coefficient is determined.
    pub fn mul(&self, other: &Self) -> Self {
        let order = (&self.order + other.lead_or_order()).min(&other.order + self.lead_or_order());
        if self.is_empty() || other.is_empty() {
            return Self::zero(order);
        }
        let d = lcm_u64(self.denom, other.denom);
        let lim = limit(&order, d);
        let (sa, a) = integerize(self.regrid(d));
        let (sb, b) = integerize(other.regrid(d));
        let lo = a[0].0 + b[0].0;
        if lo >= lim {
            return Self::zero(order);
        }
        let mut acc = Accumulator::new(lo, lim);
        for (i, ca) in &a {
            if i + b[0].0 >= lim {
                break;
            }
            for (j, cb) in &b {
                let k = i + j;
                if k >= lim {
                    break;
                }
                acc.add(k, ca * cb);
            }
        }
        let scale = BigRational::new(BigInt::one(), sa * sb);
        let raw = acc
            .into_terms()
            .map(|(k, c)| (k, BigRational::from_integer(c) * &scale))
            .collect();
        Self::from_grid(d, order, raw)
    }

    /// Multiplicative inverse. With leading term `c q^h` and order `O`, the
    /// inverse is exact below `O - 2h`, so that `a * invert(a) = 1` below
    /// `O - h`.
    pub fn invert(&self) -> Result<Self> {
        let (k0, c0) = self.terms.first().ok_or(Error::UndefinedInverse)?;
        let h = self.exponent_of(*k0);
        let order = &self.order - &h - &h;
        // u = a / (c0 q^h) = 1 + sum_{j>0} u_j q^(j/D), known for j < n.
        let n = limit(&(&self.order - &h), self.denom);
        let u: Vec<(usize, ExactRational)> = self
            .terms
            .iter()
            .skip(1)
            .map(|(k, c)| ((k - k0) as usize, c / c0))
            .collect();
        let n = n.max(0) as usize;
        let v: Vec<ExactRational> = if u.iter().all(|(_, c)| c.is_integer()) {
            let u: Vec<(usize, BigInt)> = u.into_iter().map(|(j, c)| (j, c.to_integer())).collect();
            let mut v: Vec<BigInt> = Vec::with_capacity(n);
            for j in 0..n {
                if j == 0 {
                    v.push(BigInt::one());
                    continue;
                }
                let mut s = BigInt::zero();
                for (i, ui) in &u {
                    if *i > j {
                        break;
                    }
                    if !v[j - i].is_zero() {
                        s -= ui * &v[j - i];
                    }
                }
                v.push(s);
            }
            v.into_iter().map(BigRational::from_integer).collect()
        } else {
            let mut v: Vec<ExactRational> = Vec::with_capacity(n);
            for j in 0..n {
                if j == 0 {
                    v.push(BigRational::one());
                    continue;
                }
                let mut s = BigRational::zero();
                for (i, ui) in &u {
                    if *i > j {
                        break;
                    }
                    if !v[j - i].is_zero() {
                        s -= ui * &v[j - i];
                    }
                }
                v.push(s);
            }
            v
        };
        let inv_c0 = c0.recip();
        let raw = v
            .into_iter()
            .enumerate()
            .map(|(j, c)| (j as i64 - k0, c * &inv_c0))
            .collect();
        Ok(Self::from_grid(self.denom, order, raw))
    }

    /// `q -> q^r` for positive rational `r`.
    pub fn substitute(&self, ratio: &ExactRational) -> Result<Self> {
        if !ratio.is_positive() {
            return Err(Error::NonPositiveRatio(ratio.clone()));
        }
        let p: i64 = ceil_i64(&BigRational::from_integer(ratio.numer().clone()));
        let d = self.denom * denom_u64(ratio);
        let terms = self.terms.iter().map(|(k, c)| (k * p, c.clone())).collect();
        Ok(Self::canonical(d, &self.order * ratio, terms))
    }

    /// `q -> -q^r` on a series `q^h * sum a_n q^n`: the term `a_n q^(h+n)`
    /// becomes `(-1)^n a_n q^(r(h+n))`. The sign attaches to the integer offset
    /// from the leading exponent only, so the leading coefficient is kept.
    pub fn substitute_signed(&self, ratio: &ExactRational) -> Result<Self> {
        let Some((k0, _)) = self.terms.first() else {
            return self.substitute(ratio);
        };
        let d = self.denom as i64;
        if self.terms.iter().any(|(k, _)| (k - k0) % d != 0) {
            return Err(Error::NonIntegerStep {
                leading: self.exponent_of(*k0),
            });
        }
        let signed = Self {
            denom: self.denom,
            order: self.order.clone(),
            terms: self
                .terms
                .iter()
                .map(|(k, c)| {
                    let odd = ((k - k0) / d) % 2 != 0;
                    (*k, if odd { -c } else { c.clone() })
                })
                .collect(),
        };
        signed.substitute(ratio)
    }

    /// Compares both series on exponents below `order`, which must not exceed
    /// either truncation order.
    pub fn compare(&self, other: &Self, order: &ExactRational) -> Result<Comparison> {
        for s in [self, other] {
            if order > &s.order {
                return Err(Error::InsufficientOrder {
                    requested: order.clone(),
                    available: s.order.clone(),
                });
            }
        }
        let d = lcm_u64(self.denom, other.denom);
        let lim = limit(order, d);
        let mut a = self.regrid(d).take_while(|(k, _)| *k < lim).peekable();
        let mut b = other.regrid(d).take_while(|(k, _)| *k < lim).peekable();
        let zero = BigRational::zero();
        loop {
            let (k, ca, cb) = match (a.peek(), b.peek()) {
                (None, None) => return Ok(Comparison::Agree),
                (Some(&(ka, ca)), Some(&(kb, cb))) if ka == kb => {
                    a.next();
                    b.next();
                    if ca == cb {
                        continue;
                    }
                    (ka, ca, cb)
                }
                (Some(&(ka, ca)), Some(&(kb, _))) if ka < kb => (ka, ca, &zero),
                (Some(&(ka, ca)), None) => (ka, ca, &zero),
                (_, Some(&(kb, cb))) => (kb, &zero, cb),
            };
            return Ok(Comparison::Mismatch {
                exponent: BigRational::new(BigInt::from(k), BigInt::from(d)),
                lhs: ca.clone(),
                rhs: cb.clone(),
            });
        }
    }

    /// Text form: a `D=<int> O=<p>/<q>` header, then one `<exp> <coef>` line
    /// per term in ascending order, every rational written as `p/q`.
    pub fn to_text(&self) -> String {
        let mut out = format!("D={} O={}\n", self.denom, fmt_rational(&self.order));
        for (e, c) in self.terms() {
            out.push_str(&fmt_rational(&e));
            out.push(' ');
            out.push_str(&fmt_rational(c));
            out.push('\n');
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("missing header".into()))?;
        let mut parts = header.split_whitespace();
        let (Some(dpart), Some(opart), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(Error::Parse(format!("bad header: {header:?}")));
        };
        let denom: u64 = dpart
            .strip_prefix("D=")
            .and_then(|d| d.parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad grading denominator: {dpart:?}")))?;
        if denom == 0 {
            return Err(Error::ZeroDenominator);
        }
        let order = parse_rational(
            opart
                .strip_prefix("O=")
                .ok_or_else(|| Error::Parse(format!("bad order: {opart:?}")))?,
        )?;
        let scale = int(denom as i64);
        let mut terms: Vec<(i64, ExactRational)> = Vec::new();
        for line in lines {
            let mut it = line.split_whitespace();
            let (Some(e), Some(c), None) = (it.next(), it.next(), it.next()) else {
                return Err(Error::Parse(format!("bad term line: {line:?}")));
            };
            let e = parse_rational(e)?;
            let c = parse_rational(c)?;
            let scaled = &e * &scale;
            if !scaled.is_integer() {
                return Err(Error::OffGrid { exponent: e, denominator: denom });
            }
            if e >= order {
                return Err(Error::Parse(format!("term {} at or above order", fmt_rational(&e))));
            }
            if c.is_zero() {
                return Err(Error::Parse(format!("zero coefficient at {}", fmt_rational(&e))));
            }
            let k = ceil_i64(&scaled);
            if terms.last().is_some_and(|(prev, _)| *prev >= k) {
                return Err(Error::Parse("exponents not strictly increasing".into()));
            }
            terms.push((k, c));
        }
        Ok(Self::canonical(denom, order, terms))
    }
}

/// Clears coefficient denominators: returns `(s, terms)` with every
/// `c = t / s` for integer `t`.
fn integerize<'a>(terms: impl Iterator<Item = (i64, &'a ExactRational)>) -> (BigInt, Vec<(i64, BigInt)>) {
    let terms: Vec<_> = terms.collect();
    let s = terms.iter().fold(BigInt::one(), |s, (_, c)| s.lcm(c.denom()));
    let out = terms
        .into_iter()
        .map(|(k, c)| (k, c.numer() * (&s / c.denom())))
        .collect();
    (s, out)
}

enum Accumulator {
    Dense { lo: i64, slots: Vec<BigInt> },
    Sparse(BTreeMap<i64, BigInt>),
}

impl Accumulator {
    fn new(lo: i64, lim: i64) -> Self {
        if lim - lo <= DENSE_LIMIT {
            Accumulator::Dense {
                lo,
                slots: vec![BigInt::zero(); (lim - lo) as usize],
            }
        } else {
            Accumulator::Sparse(BTreeMap::new())
        }
    }

    fn add(&mut self, k: i64, v: BigInt) {
        match self {
            Accumulator::Dense { lo, slots } => slots[(k - *lo) as usize] += v,
            Accumulator::Sparse(m) => *m.entry(k).or_insert_with(BigInt::zero) += v,
        }
    }

    fn into_terms(self) -> Box<dyn Iterator<Item = (i64, BigInt)>> {
        match self {
            Accumulator::Dense { lo, slots } => Box::new(
                slots
                    .into_iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(move |(i, c)| (lo + i as i64, c)),
            ),
            Accumulator::Sparse(m) => Box::new(m.into_iter()),
        }
    }
}

impl fmt::Display for PuiseuxSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for PuiseuxSeries {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse_text(s)
    }
}

impl Add for &PuiseuxSeries {
    type Output = PuiseuxSeries;

    fn add(self, rhs: Self) -> PuiseuxSeries {
        PuiseuxSeries::add(self, rhs)
    }
}

impl Sub for &PuiseuxSeries {
    type Output = PuiseuxSeries;

    fn sub(self, rhs: Self) -> PuiseuxSeries {
        PuiseuxSeries::sub(self, rhs)
    }
}

impl Mul for &PuiseuxSeries {
    type Output = PuiseuxSeries;

    fn mul(self, rhs: Self) -> PuiseuxSeries {
        PuiseuxSeries::mul(self, rhs)
    }
}

impl Neg for &PuiseuxSeries {
    type Output = PuiseuxSeries;

    fn neg(self) -> PuiseuxSeries {
        PuiseuxSeries::neg(self)
    }
}
