//! Characters of Virasoro minimal models, the Rogers-Ramanujan products, the
//! principally graded level 1 and 2 modules of the twisted affine algebra
//! A2^(2), modules of the W3 algebra at c = 4/5, and their twisted traces.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::lattice::{theta_sum, Sign, ThetaSumSpec};
use crate::products::{expand_product, ProductFactor, ProductSpec};
use crate::rational::{int, parse_rational, rat, ExactRational};
use crate::series::PuiseuxSeries;

/// Extra order requested from factors of a product so that negative leading
/// exponents of the other factors (all above -1 here) cannot shrink the
/// product below the target order.
const PRODUCT_MARGIN: i64 = 1;

/// Minimal-model label `(s, t, m, n)`: `s, t >= 2` coprime, `1 <= m < s`,
/// `1 <= n < t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CharLabel {
    s: i64,
    t: i64,
    m: i64,
    n: i64,
}

impl CharLabel {
    pub fn new(s: i64, t: i64, m: i64, n: i64) -> Result<Self> {
        check_model(s, t)?;
        if !(1..s).contains(&m) || !(1..t).contains(&n) {
            return Err(Error::InvalidLabel(format!(
                "need 1 <= m < s and 1 <= n < t, got (s,t,m,n) = ({s},{t},{m},{n})"
            )));
        }
        Ok(Self { s, t, m, n })
    }

    pub fn s(&self) -> i64 {
        self.s
    }

    pub fn t(&self) -> i64 {
        self.t
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn n(&self) -> i64 {
        self.n
    }
}

impl fmt::Display for CharLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.s, self.t, self.m, self.n)
    }
}

fn check_model(s: i64, t: i64) -> Result<()> {
    if s < 2 || t < 2 || s.gcd(&t) != 1 {
        return Err(Error::InvalidLabel(format!(
            "need coprime s, t >= 2, got (s,t) = ({s},{t})"
        )));
    }
    Ok(())
}

/// `c_{s,t} = 1 - 6 (s - t)^2 / (s t)`.
pub fn central_charge(s: i64, t: i64) -> Result<ExactRational> {
    check_model(s, t)?;
    Ok(int(1) - rat(6 * (s - t) * (s - t), s * t))
}

/// `h_{s,t}^{m,n} = ((m t - n s)^2 - (s - t)^2) / (4 s t)`.
pub fn conformal_weight(label: &CharLabel) -> ExactRational {
    let CharLabel { s, t, m, n } = *label;
    let a = m * t - n * s;
    rat(a * a - (s - t) * (s - t), 4 * s * t)
}

/// `h - c/24`, the leading exponent of the character.
pub fn character_offset(label: &CharLabel) -> ExactRational {
    let c = central_charge(label.s, label.t).expect("label validated");
    conformal_weight(label) - c / int(24)
}

/// Minimal-model character
/// `q^(h - c/24) / (q)_inf * sum_k q^(s t k^2) (q^(k(mt - ns)) - q^((mt + ns)k + mn))`.
pub fn minimal_char(label: &CharLabel, order: &ExactRational) -> PuiseuxSeries {
    let CharLabel { s, t, m, n } = *label;
    let offset = character_offset(label);
    let inner = order - &offset;
    let spec = ThetaSumSpec::from_triples(
        int(s * t),
        &[
            (int(m * t - n * s), int(0), Sign::Plus),
            (int(m * t + n * s), int(m * n), Sign::Minus),
        ],
    )
    .expect("s t > 0");
    let numerator = theta_sum(&spec, &inner);
    let partitions = expand_product(
        &ProductSpec::new(vec![ProductFactor::reciprocal(int(1), int(1)).expect("valid factor")]),
        &inner,
    );
    (&numerator * &partitions).shift(&offset)
}

/// Which Rogers-Ramanujan product.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RrVariant {
    /// `q^(11/60) prod 1/((1 - q^(5n+2))(1 - q^(5n+3)))`
    First,
    /// `q^(-1/60) prod 1/((1 - q^(5n+1))(1 - q^(5n+4)))`
    Second,
}

impl RrVariant {
    pub fn from_index(i: u8) -> Option<Self> {
        match i {
            1 => Some(RrVariant::First),
            2 => Some(RrVariant::Second),
            _ => None,
        }
    }

    pub fn product_spec(self) -> ProductSpec {
        let (prefactor, a, b) = match self {
            RrVariant::First => (rat(11, 60), 2, 3),
            RrVariant::Second => (rat(-1, 60), 1, 4),
        };
        ProductSpec::new(vec![
            ProductFactor::reciprocal(int(a), int(5)).expect("valid factor"),
            ProductFactor::reciprocal(int(b), int(5)).expect("valid factor"),
        ])
        .with_prefactor(int(1), prefactor)
    }
}

pub fn rr_product(variant: RrVariant, order: &ExactRational) -> PuiseuxSeries {
    expand_product(&variant.product_spec(), order)
}

/// Standard A2^(2) modules in the principal gradation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum A22ModuleLabel {
    /// `L(Lambda_1)`, level 1.
    BasicLambda1,
    /// `L(2 Lambda_1)`, level 2.
    TwoLambda1,
    /// `L(Lambda_0)`, level 2.
    Lambda0,
}

fn basic_spec() -> ProductSpec {
    ProductSpec::new(vec![
        ProductFactor::reciprocal(rat(1, 6), int(1)).expect("valid factor"),
        ProductFactor::reciprocal(rat(5, 6), int(1)).expect("valid factor"),
    ])
    .with_prefactor(int(1), rat(-1, 72))
}

/// `chi_{2,5}^{1,j}(q^(1/3))` below `order`.
fn rr_third(variant: RrVariant, order: &ExactRational) -> PuiseuxSeries {
    rr_product(variant, &(order * int(3)))
        .substitute(&rat(1, 3))
        .expect("positive ratio")
}

/// Characters `tr q^(L(0) - c/24)`:
/// basic `q^(-1/72) prod 1/((1 - q^((6n+1)/6))(1 - q^((6n+5)/6)))`,
/// `L(2 Lambda_1)` = basic * `chi_{2,5}^{1,2}(q^(1/3))`,
/// `L(Lambda_0)` = `q^(1/6)` * basic * `chi_{2,5}^{1,1}(q^(1/3))`.
pub fn a22_char(label: A22ModuleLabel, order: &ExactRational) -> PuiseuxSeries {
    let wide = order + int(PRODUCT_MARGIN);
    let basic = |o: &ExactRational| expand_product(&basic_spec(), o);
    let out = match label {
        A22ModuleLabel::BasicLambda1 => basic(order),
        A22ModuleLabel::TwoLambda1 => &basic(&wide) * &rr_third(RrVariant::Second, &wide),
        A22ModuleLabel::Lambda0 => {
            let shift = rat(1, 6);
            let o = &wide - &shift;
            (&basic(&o) * &rr_third(RrVariant::First, &o)).shift(&shift)
        }
    };
    out.truncate_at_most(order)
}

/// Irreducible untwisted and twisted modules of the W3 algebra at c = 4/5.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WModuleLabel {
    W0,
    W2_5,
    W2_5Plus,
    W2_5Minus,
    W1_15Plus,
    W1_15Minus,
    WTau1_40,
    WTau1_8,
}

impl WModuleLabel {
    pub const ALL: [WModuleLabel; 8] = [
        WModuleLabel::W0,
        WModuleLabel::W2_5,
        WModuleLabel::W2_5Plus,
        WModuleLabel::W2_5Minus,
        WModuleLabel::W1_15Plus,
        WModuleLabel::W1_15Minus,
        WModuleLabel::WTau1_40,
        WModuleLabel::WTau1_8,
    ];

    /// `(5,6)` labels `(m, n)` of the Virasoro summands.
    pub fn virasoro_summands(self) -> &'static [(i64, i64)] {
        match self {
            WModuleLabel::W0 => &[(1, 1), (1, 5)],
            WModuleLabel::W2_5 => &[(2, 1), (2, 5)],
            // h = 2/3
            WModuleLabel::W2_5Plus | WModuleLabel::W2_5Minus => &[(1, 3)],
            // h = 1/15
            WModuleLabel::W1_15Plus | WModuleLabel::W1_15Minus => &[(2, 3)],
            WModuleLabel::WTau1_40 => &[(2, 2), (2, 4)],
            WModuleLabel::WTau1_8 => &[(1, 2), (1, 4)],
        }
    }
}

impl fmt::Display for WModuleLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WModuleLabel::W0 => "0",
            WModuleLabel::W2_5 => "2/5",
            WModuleLabel::W2_5Plus => "2/5plus",
            WModuleLabel::W2_5Minus => "2/5minus",
            WModuleLabel::W1_15Plus => "1/15plus",
            WModuleLabel::W1_15Minus => "1/15minus",
            WModuleLabel::WTau1_40 => "tau1/40",
            WModuleLabel::WTau1_8 => "tau1/8",
        })
    }
}

fn chi56(m: i64, n: i64, order: &ExactRational) -> PuiseuxSeries {
    minimal_char(&CharLabel::new(5, 6, m, n).expect("valid (5,6) label"), order)
}

fn signed_sum(parts: &[(i64, i64, i64)], order: &ExactRational) -> PuiseuxSeries {
    parts.iter().fold(PuiseuxSeries::zero(order.clone()), |acc, &(sign, m, n)| {
        let c = chi56(m, n, order);
        if sign > 0 {
            &acc + &c
        } else {
            &acc - &c
        }
    })
}

/// Character of a W3(4/5) module as a sum of `(5,6)` minimal-model characters.
/// The `+` and `-` modules of a pair share one character.
pub fn w_char(label: WModuleLabel, order: &ExactRational) -> PuiseuxSeries {
    let parts: Vec<_> = label.virasoro_summands().iter().map(|&(m, n)| (1, m, n)).collect();
    signed_sum(&parts, order)
}

/// Twisted graded traces. For the twisted modules the result is
/// `T(tau, tau^epsilon)`: the first summand plus `(-1)^epsilon` times the
/// second. For `W0` and `W2_5` the `(1, tau)` trace is returned and `epsilon`
/// is ignored; these two follow the published trace table, which pairs
/// `W(0)` with `chi^{2,1} - chi^{2,5}` and `W(2/5)` with `chi^{1,1} - chi^{1,5}`.
pub fn twisted_trace(label: WModuleLabel, epsilon: u8, order: &ExactRational) -> Result<PuiseuxSeries> {
    let sign = if epsilon % 2 == 0 { 1 } else { -1 };
    let parts: &[(i64, i64, i64)] = match label {
        WModuleLabel::WTau1_40 => &[(1, 2, 2), (sign, 2, 4)],
        WModuleLabel::WTau1_8 => &[(1, 1, 2), (sign, 1, 4)],
        WModuleLabel::W0 => &[(1, 2, 1), (-1, 2, 5)],
        WModuleLabel::W2_5 => &[(1, 1, 1), (-1, 1, 5)],
        other => return Err(Error::NoTwistedTrace(other.to_string())),
    };
    Ok(signed_sum(parts, order))
}

/// Lowest conformal weight read off a character: leading exponent plus `c/24`.
pub fn lowest_weight_from_char(f: &PuiseuxSeries, central_charge: &ExactRational) -> Result<ExactRational> {
    let lead = f.leading_exponent().ok_or(Error::UndefinedInverse).map_err(|_| {
        Error::InvalidLabel("cannot read a lowest weight from an empty series".into())
    })?;
    Ok(lead + central_charge / int(24))
}

/// A named series as accepted on the command line and in registry files:
/// `chi:s,t,m,n`, `rr:1|2`, `a22:basic|2L1|L0`, `w:<module>`, `fkw`, `phi`,
/// each optionally followed by any number of `@q^r` or `@-q^r` suffixes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CharName {
    pub base: BaseChar,
    pub substitutions: Vec<Substitution>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BaseChar {
    Minimal(CharLabel),
    Rr(RrVariant),
    A22(A22ModuleLabel),
    W(WModuleLabel),
    Fkw,
    EulerPhi,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Substitution {
    /// `q -> q^r`
    Plain(ExactRational),
    /// `q -> -q^r`
    Signed(ExactRational),
}

impl Substitution {
    pub fn ratio(&self) -> &ExactRational {
        match self {
            Substitution::Plain(r) | Substitution::Signed(r) => r,
        }
    }
}

impl CharName {
    /// Evaluates the named series exactly below `order`. Fails only when a
    /// signed substitution meets a series without integer steps.
    pub fn evaluate(&self, order: &ExactRational) -> Result<PuiseuxSeries> {
        // Each substitution q -> q^r maps order O to r*O; undo them innermost-last.
        let base_order = self
            .substitutions
            .iter()
            .fold(order.clone(), |o, s| o / s.ratio());
        let mut out = match &self.base {
            BaseChar::Minimal(label) => minimal_char(label, &base_order),
            BaseChar::Rr(v) => rr_product(*v, &base_order),
            BaseChar::A22(l) => a22_char(*l, &base_order),
            BaseChar::W(l) => w_char(*l, &base_order),
            BaseChar::Fkw => crate::lattice::fkw_character(&base_order),
            BaseChar::EulerPhi => crate::products::euler_phi(&base_order),
        };
        for s in &self.substitutions {
            out = match s {
                Substitution::Plain(r) => out.substitute(r),
                Substitution::Signed(r) => out.substitute_signed(r),
            }?;
        }
        Ok(out)
    }

    /// Parses the longest name prefix of `s`, returning it and the byte length
    /// consumed.
    pub fn parse_prefix(s: &str) -> Result<(Self, usize)> {
        let bad = |msg: &str| Error::Parse(format!("{msg} in character name {s:?}"));
        let (base, mut pos) = if let Some(rest) = s.strip_prefix("chi:") {
            let mut nums = [0i64; 4];
            let mut p = 0;
            for (i, slot) in nums.iter_mut().enumerate() {
                if i > 0 {
                    if !rest[p..].starts_with(',') {
                        return Err(bad("expected ','"));
                    }
                    p += 1;
                }
                let len = rest[p..].bytes().take_while(u8::is_ascii_digit).count();
                if len == 0 {
                    return Err(bad("expected integer"));
                }
                *slot = rest[p..p + len].parse().map_err(|_| bad("integer out of range"))?;
                p += len;
            }
            let [s_, t, m, n] = nums;
            (BaseChar::Minimal(CharLabel::new(s_, t, m, n)?), 4 + p)
        } else if let Some(rest) = s.strip_prefix("rr:") {
            let v = match rest.as_bytes().first() {
                Some(b'1') => RrVariant::First,
                Some(b'2') => RrVariant::Second,
                _ => return Err(bad("expected rr:1 or rr:2")),
            };
            (BaseChar::Rr(v), 4)
        } else if let Some(rest) = s.strip_prefix("a22:") {
            let table = [
                ("basic", A22ModuleLabel::BasicLambda1),
                ("2L1", A22ModuleLabel::TwoLambda1),
                ("L0", A22ModuleLabel::Lambda0),
            ];
            let (name, label) = table
                .iter()
                .find(|(name, _)| rest.starts_with(name))
                .ok_or_else(|| bad("expected a22:basic, a22:2L1 or a22:L0"))?;
            (BaseChar::A22(*label), 4 + name.len())
        } else if let Some(rest) = s.strip_prefix("w:") {
            // longest match first so "2/5plus" wins over "2/5"
            let mut table: Vec<(String, WModuleLabel)> =
                WModuleLabel::ALL.iter().map(|l| (l.to_string(), *l)).collect();
            table.sort_by_key(|(name, _)| std::cmp::Reverse(name.len()));
            let (name, label) = table
                .iter()
                .find(|(name, _)| rest.starts_with(name.as_str()))
                .ok_or_else(|| bad("unknown W-module"))?;
            (BaseChar::W(*label), 2 + name.len())
        } else if s.starts_with("fkw") {
            (BaseChar::Fkw, 3)
        } else if s.starts_with("phi") {
            (BaseChar::EulerPhi, 3)
        } else {
            return Err(bad("unknown character"));
        };

        let mut substitutions = Vec::new();
        while let Some(rest) = s[pos..].strip_prefix('@') {
            let (signed, rest, skip) = match rest.strip_prefix("-q^") {
                Some(r) => (true, r, 4),
                None => match rest.strip_prefix("q^") {
                    Some(r) => (false, r, 3),
                    None => return Err(bad("expected @q^r or @-q^r")),
                },
            };
            let len = rational_prefix_len(rest);
            let ratio = parse_rational(&rest[..len])?;
            if !ratio.is_positive() {
                return Err(Error::NonPositiveRatio(ratio));
            }
            substitutions.push(if signed {
                Substitution::Signed(ratio)
            } else {
                Substitution::Plain(ratio)
            });
            pos += skip + len;
        }
        Ok((CharName { base, substitutions }, pos))
    }
}

/// Length of the leading `p` or `p/q` (unsigned) in `s`.
pub(crate) fn rational_prefix_len(s: &str) -> usize {
    let digits = |t: &str| t.bytes().take_while(u8::is_ascii_digit).count();
    let n = digits(s);
    if n > 0 && s[n..].starts_with('/') {
        let d = digits(&s[n + 1..]);
        if d > 0 {
            return n + 1 + d;
        }
    }
    n
}

impl FromStr for CharName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, len) = Self::parse_prefix(s.trim())?;
        if len != s.trim().len() {
            return Err(Error::Parse(format!("trailing input in character name {s:?}")));
        }
        Ok(name)
    }
}

impl fmt::Display for CharName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.base {
            BaseChar::Minimal(l) => write!(f, "chi:{l}")?,
            BaseChar::Rr(RrVariant::First) => f.write_str("rr:1")?,
            BaseChar::Rr(RrVariant::Second) => f.write_str("rr:2")?,
            BaseChar::A22(A22ModuleLabel::BasicLambda1) => f.write_str("a22:basic")?,
            BaseChar::A22(A22ModuleLabel::TwoLambda1) => f.write_str("a22:2L1")?,
            BaseChar::A22(A22ModuleLabel::Lambda0) => f.write_str("a22:L0")?,
            BaseChar::W(l) => write!(f, "w:{l}")?,
            BaseChar::Fkw => f.write_str("fkw")?,
            BaseChar::EulerPhi => f.write_str("phi")?,
        }
        for s in &self.substitutions {
            let (prefix, r) = match s {
                Substitution::Plain(r) => ("@q^", r),
                Substitution::Signed(r) => ("@-q^", r),
            };
            write!(f, "{prefix}{}/{}", r.numer(), r.denom())?;
        }
        Ok(())
    }
}
