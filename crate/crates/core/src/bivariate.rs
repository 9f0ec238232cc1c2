//! Laurent series in `z` whose coefficients are Puiseux series in `q`, enough
//! to state the quintuple product identity and specialize `z` to a power of `q`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::Sign;
use crate::rational::{ceil_i64, floor_i64, fmt_rational, int, rat, ExactRational};
use crate::series::{Comparison, PuiseuxSeries};

/// Lower bound `a k^2 + b k + c` on the q-exponents of layer `z^k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LayerBound {
    pub a: ExactRational,
    pub b: ExactRational,
    pub c: ExactRational,
}

impl LayerBound {
    pub fn new(a: ExactRational, b: ExactRational, c: ExactRational) -> Self {
        Self { a, b, c }
    }

    pub fn at(&self, k: i64) -> ExactRational {
        let k = int(k);
        &self.a * &k * &k + &self.b * &k + &self.c
    }
}

/// What is known about layers outside the stored window.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum OutsideSupport {
    /// Every q-exponent of layer `z^k` (k outside the window) is at least the
    /// minimum of these bounds at `k`. An empty list means those layers vanish.
    Bounded(Vec<LayerBound>),
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BivariateComparison {
    Agree,
    Mismatch {
        z: i64,
        exponent: ExactRational,
        lhs: ExactRational,
        rhs: ExactRational,
    },
}

/// `sum_{zmin <= k <= zmax} f_k(q) z^k` with every `f_k` known below `q^q_order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BivariateSeries {
    zmin: i64,
    zmax: i64,
    q_order: ExactRational,
    layers: BTreeMap<i64, PuiseuxSeries>,
    outside: OutsideSupport,
}

impl BivariateSeries {
    /// Builds a series from layers, dropping empty ones and any outside the window.
    pub fn new(
        window: (i64, i64),
        q_order: ExactRational,
        layers: impl IntoIterator<Item = (i64, PuiseuxSeries)>,
        outside: OutsideSupport,
    ) -> Result<Self> {
        let (zmin, zmax) = window;
        if zmin > zmax {
            return Err(Error::InsufficientWindow(format!("empty window [{zmin}, {zmax}]")));
        }
        let mut out = Self {
            zmin,
            zmax,
            q_order: q_order.clone(),
            layers: BTreeMap::new(),
            outside,
        };
        for (k, f) in layers {
            if (zmin..=zmax).contains(&k) {
                let f = f.truncate_at_most(&q_order);
                let merged = match out.layers.remove(&k) {
                    Some(g) => &g + &f,
                    None => f,
                };
                out.insert(k, merged);
            }
        }
        Ok(out)
    }

    /// A series with only a `z^0` layer; all other layers vanish.
    pub fn constant(f: PuiseuxSeries, window: (i64, i64)) -> Result<Self> {
        let order = f.order().clone();
        Self::new(window, order, [(0, f)], OutsideSupport::Bounded(Vec::new()))
    }

    fn insert(&mut self, k: i64, f: PuiseuxSeries) {
        if f.is_empty() {
            self.layers.remove(&k);
        } else {
            self.layers.insert(k, f);
        }
    }

    pub fn window(&self) -> (i64, i64) {
        (self.zmin, self.zmax)
    }

    pub fn q_order(&self) -> &ExactRational {
        &self.q_order
    }

    pub fn outside(&self) -> &OutsideSupport {
        &self.outside
    }

    /// Coefficient of `z^k`; the zero series when absent.
    pub fn layer(&self, k: i64) -> PuiseuxSeries {
        self.layers
            .get(&k)
            .cloned()
            .unwrap_or_else(|| PuiseuxSeries::zero(self.q_order.clone()))
    }

    pub fn layers(&self) -> impl Iterator<Item = (i64, &PuiseuxSeries)> {
        self.layers.iter().map(|(k, f)| (*k, f))
    }

    fn check_window(&self, other: &Self) -> Result<()> {
        if self.window() != other.window() {
            return Err(Error::WindowMismatch(self.zmin, self.zmax, other.zmin, other.zmax));
        }
        Ok(())
    }

    fn combine(&self, other: &Self, negate: bool) -> Result<Self> {
        self.check_window(other)?;
        let outside = match (&self.outside, &other.outside) {
            (OutsideSupport::Bounded(a), OutsideSupport::Bounded(b)) => {
                OutsideSupport::Bounded(a.iter().chain(b).cloned().collect())
            }
            _ => OutsideSupport::Unknown,
        };
        let order = std::cmp::min(&self.q_order, &other.q_order).clone();
        let keys: Vec<i64> = self.layers.keys().chain(other.layers.keys()).copied().collect();
        let mut out = Self::new(self.window(), order, [], outside)?;
        for k in keys {
            if out.layers.contains_key(&k) {
                continue;
            }
            let (a, b) = (self.layer(k), other.layer(k));
            let f = if negate { &a - &b } else { &a + &b };
            out.insert(k, f.truncate_at_most(&out.q_order.clone()));
        }
        Ok(out)
    }

    /// Sum; windows must match.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, false)
    }

    /// Difference; windows must match.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, true)
    }

    /// Compares layer by layer below `order`, scanning `z` upward and each
    /// layer's exponents upward. Fails if `order` exceeds either side.
    pub fn compare(&self, other: &Self, order: &ExactRational) -> Result<BivariateComparison> {
        self.check_window(other)?;
        for k in self.zmin..=self.zmax {
            match self.layer(k).compare(&other.layer(k), order)? {
                Comparison::Agree => {}
                Comparison::Mismatch { exponent, lhs, rhs } => {
                    return Ok(BivariateComparison::Mismatch {
                        z: k,
                        exponent,
                        lhs,
                        rhs,
                    })
                }
            }
        }
        Ok(BivariateComparison::Agree)
    }

    /// Order of `specialize(self, r, zq)` that the window and the outside
    /// support certify.
    pub fn certified_order(&self, r: &ExactRational, zq: &ExactRational) -> Result<ExactRational> {
        if !r.is_positive() {
            return Err(Error::NonPositiveRatio(r.clone()));
        }
        let bounds = match &self.outside {
            OutsideSupport::Bounded(b) => b,
            OutsideSupport::Unknown => {
                return Err(Error::InsufficientWindow(
                    "nothing is known about layers outside the window".into(),
                ))
            }
        };
        let edge = if zq.is_negative() { self.zmax } else { self.zmin };
        let mut order = r * &self.q_order + zq * int(edge);
        for bound in bounds {
            // contribution of z^k is at least r*(a k^2 + b k + c) + zq*k
            let g = LayerBound::new(r * &bound.a, r * &bound.b + zq, r * &bound.c);
            let low = min_on_ray(&g, self.zmin - 1, false).ok_or_else(|| unbounded(bound))?;
            let high = min_on_ray(&g, self.zmax + 1, true).ok_or_else(|| unbounded(bound))?;
            order = order.min(low).min(high);
        }
        Ok(order)
    }
}

fn unbounded(b: &LayerBound) -> Error {
    Error::InsufficientWindow(format!(
        "layer bound {}k^2 + {}k + {} does not grow outside the window",
        fmt_rational(&b.a),
        fmt_rational(&b.b),
        fmt_rational(&b.c)
    ))
}

/// Minimum of the quadratic `g` over integers `k >= start` (`upward`) or
/// `k <= start`; `None` when unbounded below.
fn min_on_ray(g: &LayerBound, start: i64, upward: bool) -> Option<ExactRational> {
    if g.a.is_negative() || (g.a.is_zero() && !g.b.is_zero() && (g.b.is_negative() == upward)) {
        return None;
    }
    if g.a.is_zero() {
        return Some(g.at(start));
    }
    let vertex = -&g.b / (int(2) * &g.a);
    let candidates = [floor_i64(&vertex), ceil_i64(&vertex), start];
    candidates
        .iter()
        .filter(|&&k| if upward { k >= start } else { k <= start })
        .map(|&k| g.at(k))
        .min()
}

/// `sum_k f_k(q^r) q^(k zq)` below the certified order.
pub fn specialize(b: &BivariateSeries, r: &ExactRational, zq: &ExactRational) -> Result<PuiseuxSeries> {
    let order = b.certified_order(r, zq)?;
    // the lowest possible contribution of any stored layer
    let floor = b
        .layers
        .iter()
        .filter_map(|(k, f)| f.leading_exponent().map(|e| r * e + zq * int(*k)))
        .min();
    if b.layers.is_empty() || floor.is_some_and(|f| f >= order) {
        if b.layers.is_empty() && matches!(&b.outside, OutsideSupport::Bounded(v) if v.is_empty()) {
            return Ok(PuiseuxSeries::zero(order));
        }
        return Err(Error::InsufficientWindow(format!(
            "certified order {} lies below every stored term",
            fmt_rational(&order)
        )));
    }
    let mut out = PuiseuxSeries::zero(order.clone());
    for (k, f) in &b.layers {
        let g = f.substitute(r)?.shift(&(zq * int(*k)));
        out = &out + &g.truncate_at_most(&order);
    }
    Ok(out.truncate_at_most(&order))
}

/// Sign pattern of a bivariate theta branch.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BranchSign {
    Fixed(Sign),
    /// `(-1)^m`
    Alternating,
}

/// `sum_m sign(m) q^(a m^2 + b m + c) z^(u m + v)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BivariateBranch {
    pub a: ExactRational,
    pub b: ExactRational,
    pub c: ExactRational,
    pub u: i64,
    pub v: i64,
    pub sign: BranchSign,
}

impl BivariateBranch {
    pub fn new(a: ExactRational, b: ExactRational, c: ExactRational, u: i64, v: i64, sign: BranchSign) -> Result<Self> {
        if !a.is_positive() || u == 0 {
            return Err(Error::InvalidTheta(
                "bivariate branch needs a > 0 and u != 0".into(),
            ));
        }
        Ok(Self { a, b, c, u, v, sign })
    }

    /// The branch's q-exponent as a quadratic in the z-exponent `k = u m + v`.
    fn layer_bound(&self) -> LayerBound {
        let u = int(self.u);
        let v = int(self.v);
        let a = &self.a / (&u * &u);
        let b = &self.b / &u - int(2) * &a * &v;
        let c = &a * &v * &v - &self.b * &v / &u + &self.c;
        LayerBound::new(a, b, c)
    }
}

/// Exact sum of theta branches on `window` below `q^order`.
pub fn bivariate_theta(branches: &[BivariateBranch], window: (i64, i64), order: &ExactRational) -> Result<BivariateSeries> {
    let (zmin, zmax) = window;
    let mut layers: BTreeMap<i64, Vec<(ExactRational, ExactRational)>> = BTreeMap::new();
    for br in branches {
        let (lo, hi) = if br.u > 0 {
            ((zmin - br.v).div_euclid(br.u) - 1, (zmax - br.v).div_euclid(br.u) + 1)
        } else {
            ((zmax - br.v).div_euclid(br.u) - 1, (zmin - br.v).div_euclid(br.u) + 1)
        };
        for m in lo..=hi {
            let k = br.u * m + br.v;
            if !(zmin..=zmax).contains(&k) {
                continue;
            }
            let mm = int(m);
            let e = &br.a * &mm * &mm + &br.b * &mm + &br.c;
            if &e >= order {
                continue;
            }
            let s = match br.sign {
                BranchSign::Fixed(s) => s.value(),
                BranchSign::Alternating => 1 - 2 * m.rem_euclid(2),
            };
            layers.entry(k).or_default().push((e, int(s)));
        }
    }
    let layers = layers
        .into_iter()
        .map(|(k, terms)| (k, PuiseuxSeries::from_terms(terms, order.clone())));
    let bounds = branches.iter().map(BivariateBranch::layer_bound).collect();
    BivariateSeries::new(window, order.clone(), layers, OutsideSupport::Bounded(bounds))
}

fn qpi_branches() -> Vec<BivariateBranch> {
    vec![
        BivariateBranch::new(int(3), int(1), int(0), 3, 1, BranchSign::Alternating).expect("valid branch"),
        BivariateBranch::new(int(3), int(-1), int(0), 3, 0, BranchSign::Alternating).expect("valid branch"),
    ]
}

/// `sum_m (-1)^m q^(3m^2+m) z^(3m+1) + sum_m (-1)^m q^(3m^2-m) z^(3m)`.
pub fn quintuple_lhs(q_order: &ExactRational, window: (i64, i64)) -> Result<BivariateSeries> {
    bivariate_theta(&qpi_branches(), window, q_order)
}

/// The same sum split by the parity of `m` into four branches in `z^(6m + j)`.
pub fn quintuple_wanted3(q_order: &ExactRational, window: (i64, i64)) -> Result<BivariateSeries> {
    let plus = BranchSign::Fixed(Sign::Plus);
    let minus = BranchSign::Fixed(Sign::Minus);
    let branches = [
        (2, 0, 1, plus),
        (14, 4, 4, minus),
        (-2, 0, 0, plus),
        (10, 2, 3, minus),
    ]
    .into_iter()
    .map(|(b, c, v, s)| BivariateBranch::new(int(12), int(b), int(c), 6, v, s).expect("valid branch"))
    .collect::<Vec<_>>();
    bivariate_theta(&branches, window, q_order)
}

/// `(1+z) prod_{n>=1} (1-q^(2n)) (1-q^(4n-2) z^2) (1-q^(4n-2) z^-2) (1+q^(2n) z) (1+q^(2n) z^-1)`.
///
/// Expanded on integer q-exponents below `q_order` without clipping in `z`:
/// every factor has positive q-degree apart from `1+z`, so the q-truncation
/// alone bounds the z-range. The window is applied at the end.
pub fn quintuple_rhs(q_order: &ExactRational, window: (i64, i64)) -> Result<BivariateSeries> {
    let n_q = ceil_i64(q_order).max(0);
    let len = n_q as usize;
    // (q-exponent, z-exponent, coefficient) of each binomial 1 + c q^e z^k
    let mut factors: Vec<(i64, i64, i64)> = vec![(0, 1, 1)];
    let mut n = 1;
    while 2 * n - 1 < n_q.max(1) {
        factors.extend([
            (2 * n, 0, -1),
            (4 * n - 2, 2, -1),
            (4 * n - 2, -2, -1),
            (2 * n, 1, 1),
            (2 * n, -1, 1),
        ]);
        n += 1;
    }
    let mut grid: BTreeMap<i64, Vec<BigInt>> = BTreeMap::new();
    if len > 0 {
        let mut unit = vec![BigInt::zero(); len];
        unit[0] = BigInt::from(1);
        grid.insert(0, unit);
    }
    for &(e, k, c) in &factors {
        if e >= n_q {
            continue;
        }
        let mut next = grid.clone();
        for (&z, row) in &grid {
            let target = next.entry(z + k).or_insert_with(|| vec![BigInt::zero(); len]);
            for i in 0..len.saturating_sub(e as usize) {
                if !row[i].is_zero() {
                    target[i + e as usize] += &row[i] * c;
                }
            }
        }
        grid = next;
    }
    let layers = grid.into_iter().map(|(z, row)| {
        let terms = row
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (int(i as i64), ExactRational::from_integer(c)));
        (z, PuiseuxSeries::from_terms(terms, q_order.clone()))
    });
    // Picking a subset of factors to reach z^k costs at least the cheapest
    // unit costs 0,1,1,2,3,3,4,5,5,... in q per unit of z (the z^2 factors cost
    // 4n-2 for two units); their partial sums are k(k-1)/3 at k = 3j+1 and
    // stay above it elsewhere. Symmetric for negative k.
    let bound = LayerBound::new(rat(1, 3), rat(-1, 3), int(0));
    BivariateSeries::new(window, q_order.clone(), layers, OutsideSupport::Bounded(vec![bound]))
}
