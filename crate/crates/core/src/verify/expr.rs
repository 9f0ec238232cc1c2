//! Expression trees over named characters, products, theta sums and the
//! bivariate quintuple series, with a text grammar and order-aware evaluation.
//!
//! Grammar (whitespace is ignored):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := '(' expr ')'
//!         | 'inv(' expr ')'
//!         | 'sub(' expr ',' r ')' | 'subsigned(' expr ',' r ')'
//!         | 'mono(' c ',' e ')'
//!         | 'spec(' expr ',' r ',' zq ')'
//!         | 'prod[' c ',' e (';' ('-'|'+') start ',' step ',' power)* ']'
//!         | 'theta[' A (';' B ',' C ',' ('+'|'-'))* ']'
//!         | 'fkwsum' | 'qpl(' W ')' | 'qpl6(' W ')' | 'qpr(' W ')'
//!         | charname
//! ```
//!
//! `prod[c,e;...]` is `c q^e` times the listed factors, `-` for `(1 - q^x)`
//! and `+` for `(1 + q^x)`. `qpl`, `qpl6` and `qpr` are the two sides of the
//! quintuple product identity (the left side also split by parity of `m`) on
//! the z-window `[-W, W]`.

use std::fmt;
use std::str::FromStr;

use num_traits::Signed;

use crate::bivariate::{quintuple_lhs, quintuple_rhs, quintuple_wanted3, specialize, BivariateSeries};
use crate::characters::{rational_prefix_len, CharName};
use crate::error::{Error, Result};
use crate::lattice::{fkw_lattice_sum, theta_sum, Sign, ThetaBranch, ThetaSumSpec};
use crate::products::{expand_product, Binomial, ProductFactor, ProductSpec};
use crate::rational::{denom_u64, fmt_rational, int, parse_rational, ExactRational};
use crate::series::PuiseuxSeries;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum QuintupleSide {
    /// `qpl`
    Lhs,
    /// `qpl6`
    LhsByParity,
    /// `qpr`
    Rhs,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Char(CharName),
    Product(ProductSpec),
    Theta(ThetaSumSpec),
    FkwSum,
    Quintuple(QuintupleSide, i64),
    Monomial(ExactRational, ExactRational),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Invert(Box<Expr>),
    Substitute(Box<Expr>, ExactRational),
    SubstituteSigned(Box<Expr>, ExactRational),
    Specialize(Box<Expr>, ExactRational, ExactRational),
}

/// Result of evaluating an expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Series(PuiseuxSeries),
    Bivariate(BivariateSeries),
}

impl Value {
    pub fn into_series(self) -> Result<PuiseuxSeries> {
        match self {
            Value::Series(s) => Ok(s),
            Value::Bivariate(_) => Err(Error::TypeMismatch("expected a q-series, got a bivariate series".into())),
        }
    }

    pub fn into_bivariate(self) -> Result<BivariateSeries> {
        match self {
            Value::Bivariate(b) => Ok(b),
            Value::Series(_) => Err(Error::TypeMismatch("expected a bivariate series, got a q-series".into())),
        }
    }
}

/// Child re-evaluations allowed while chasing the order of a product.
const MAX_REFINEMENTS: usize = 4;

impl Expr {
    /// The z-window of a bivariate expression, `None` for q-series.
    pub fn window(&self) -> Option<(i64, i64)> {
        match self {
            Expr::Quintuple(_, w) => Some((-w, *w)),
            Expr::Add(a, b) | Expr::Sub(a, b) => a.window().or_else(|| b.window()),
            _ => None,
        }
    }

    /// Evaluates exactly, aiming for a result known below `order`. The
    /// result's own order is authoritative and may fall short of `order` when a
    /// child cannot deliver more (for example a specialization whose window
    /// certifies less).
    pub fn eval(&self, order: &ExactRational) -> Result<Value> {
        Ok(match self {
            Expr::Char(name) => Value::Series(name.evaluate(order)?),
            Expr::Product(spec) => Value::Series(expand_product(spec, order)),
            Expr::Theta(spec) => Value::Series(theta_sum(spec, order)),
            Expr::FkwSum => Value::Series(fkw_lattice_sum(order, 0)),
            Expr::Quintuple(side, w) => {
                let window = (-w, *w);
                Value::Bivariate(match side {
                    QuintupleSide::Lhs => quintuple_lhs(order, window)?,
                    QuintupleSide::LhsByParity => quintuple_wanted3(order, window)?,
                    QuintupleSide::Rhs => quintuple_rhs(order, window)?,
                })
            }
            Expr::Monomial(c, e) => Value::Series(PuiseuxSeries::monomial(c.clone(), e.clone(), denom_u64(e), order.clone())?),
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                let negate = matches!(self, Expr::Sub(..));
                match (a.eval(order)?, b.eval(order)?) {
                    (Value::Series(x), Value::Series(y)) => Value::Series(if negate { &x - &y } else { &x + &y }),
                    (Value::Bivariate(x), Value::Bivariate(y)) => {
                        Value::Bivariate(if negate { x.sub(&y)? } else { x.add(&y)? })
                    }
                    _ => return Err(Error::TypeMismatch("cannot combine a q-series with a bivariate series".into())),
                }
            }
            Expr::Mul(a, b) => Value::Series(eval_product(a, b, order)?),
            Expr::Invert(a) => {
                let mut f = a.eval(order)?.into_series()?;
                let h = f.leading_exponent().ok_or(Error::UndefinedInverse)?;
                // the inverse is known below O_a - 2h
                let need = order + int(2) * &h;
                if f.order() < &need {
                    f = a.eval(&need)?.into_series()?;
                }
                Value::Series(f.invert()?)
            }
            Expr::Substitute(a, r) | Expr::SubstituteSigned(a, r) => {
                if !r.is_positive() {
                    return Err(Error::NonPositiveRatio(r.clone()));
                }
                let f = a.eval(&(order / r))?.into_series()?;
                Value::Series(match self {
                    Expr::Substitute(..) => f.substitute(r)?,
                    _ => f.substitute_signed(r)?,
                })
            }
            Expr::Specialize(b, r, zq) => {
                if !r.is_positive() {
                    return Err(Error::NonPositiveRatio(r.clone()));
                }
                let (zmin, zmax) = b
                    .window()
                    .ok_or_else(|| Error::TypeMismatch("spec(...) needs a bivariate argument".into()))?;
                let edge = if zq.is_negative() { zmax } else { zmin };
                let q_order = (order - zq * int(edge)) / r;
                let bv = b.eval(&q_order)?.into_bivariate()?;
                Value::Series(specialize(&bv, r, zq)?)
            }
        })
    }

    pub fn eval_series(&self, order: &ExactRational) -> Result<PuiseuxSeries> {
        self.eval(order)?.into_series()
    }
}

/// `a * b` known below `order` where possible: a factor with a negative
/// leading exponent forces the other factor to be expanded further.
fn eval_product(a: &Expr, b: &Expr, order: &ExactRational) -> Result<PuiseuxSeries> {
    let (mut oa, mut ob) = (order.clone(), order.clone());
    let mut fa = a.eval_series(&oa)?;
    let mut fb = b.eval_series(&ob)?;
    for _ in 0..MAX_REFINEMENTS {
        let (Some(la), Some(lb)) = (fa.leading_exponent(), fb.leading_exponent()) else {
            break;
        };
        let need_a = order - &lb;
        let need_b = order - &la;
        if fa.order() >= &need_a && fb.order() >= &need_b {
            break;
        }
        let (grow_a, grow_b) = (need_a > oa, need_b > ob);
        if !grow_a && !grow_b {
            break;
        }
        if grow_a {
            oa = need_a;
            fa = a.eval_series(&oa)?;
        }
        if grow_b {
            ob = need_b;
            fb = b.eval_series(&ob)?;
        }
    }
    Ok(&fa * &fb)
}

fn is_sum(e: &Expr) -> bool {
    matches!(e, Expr::Add(..) | Expr::Sub(..))
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = fmt_rational;
        match self {
            Expr::Char(name) => write!(f, "{name}"),
            Expr::Product(spec) => {
                write!(f, "prod[{},{}", r(&spec.prefactor_coefficient), r(&spec.prefactor_exponent))?;
                for x in &spec.factors {
                    let s = match x.binomial {
                        Binomial::OneMinus => '-',
                        Binomial::OnePlus => '+',
                    };
                    write!(f, ";{s}{},{},{}", r(&x.start), r(&x.step), x.power)?;
                }
                f.write_str("]")
            }
            Expr::Theta(spec) => {
                write!(f, "theta[{}", r(&spec.quadratic))?;
                for b in &spec.branches {
                    let s = match b.sign {
                        Sign::Plus => '+',
                        Sign::Minus => '-',
                    };
                    write!(f, ";{},{},{s}", r(&b.linear), r(&b.constant))?;
                }
                f.write_str("]")
            }
            Expr::FkwSum => f.write_str("fkwsum"),
            Expr::Quintuple(side, w) => {
                let name = match side {
                    QuintupleSide::Lhs => "qpl",
                    QuintupleSide::LhsByParity => "qpl6",
                    QuintupleSide::Rhs => "qpr",
                };
                write!(f, "{name}({w})")
            }
            Expr::Monomial(c, e) => write!(f, "mono({},{})", r(c), r(e)),
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                let op = if matches!(self, Expr::Add(..)) { '+' } else { '-' };
                if is_sum(b) {
                    write!(f, "{a}{op}({b})")
                } else {
                    write!(f, "{a}{op}{b}")
                }
            }
            Expr::Mul(a, b) => {
                if is_sum(a) {
                    write!(f, "({a})")?;
                } else {
                    write!(f, "{a}")?;
                }
                if is_sum(b) || matches!(**b, Expr::Mul(..)) {
                    write!(f, "*({b})")
                } else {
                    write!(f, "*{b}")
                }
            }
            Expr::Invert(a) => write!(f, "inv({a})"),
            Expr::Substitute(a, x) => write!(f, "sub({a},{})", r(x)),
            Expr::SubstituteSigned(a, x) => write!(f, "subsigned({a},{})", r(x)),
            Expr::Specialize(a, x, z) => write!(f, "spec({a},{},{})", r(x), r(z)),
        }
    }
}

impl FromStr for Expr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut p = Parser { s: &text, pos: 0 };
        let e = p.expr()?;
        if p.pos != text.len() {
            return Err(p.error("unexpected input"));
        }
        Ok(e)
    }
}

struct Parser<'a> {
    s: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn rest(&self) -> &str {
        &self.s[self.pos..]
    }

    fn error(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at position {} in {:?}", self.pos, self.s))
    }

    fn eat(&mut self, token: &str) -> bool {
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(&format!("expected {token:?}")))
        }
    }

    fn rational(&mut self) -> Result<ExactRational> {
        let neg = usize::from(self.rest().starts_with('-'));
        let len = rational_prefix_len(&self.rest()[neg..]);
        if len == 0 {
            return Err(self.error("expected a rational"));
        }
        let r = parse_rational(&self.rest()[..neg + len])?;
        self.pos += neg + len;
        Ok(r)
    }

    fn integer(&mut self) -> Result<i64> {
        let neg = usize::from(self.rest().starts_with('-'));
        let len = self.rest()[neg..].bytes().take_while(u8::is_ascii_digit).count();
        if len == 0 {
            return Err(self.error("expected an integer"));
        }
        let v = self.rest()[..neg + len].parse().map_err(|_| self.error("integer out of range"))?;
        self.pos += neg + len;
        Ok(v)
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut e = self.term()?;
        loop {
            if self.eat("+") {
                e = Expr::Add(Box::new(e), Box::new(self.term()?));
            } else if self.eat("-") {
                e = Expr::Sub(Box::new(e), Box::new(self.term()?));
            } else {
                return Ok(e);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut e = self.factor()?;
        while self.eat("*") {
            e = Expr::Mul(Box::new(e), Box::new(self.factor()?));
        }
        Ok(e)
    }

    fn factor(&mut self) -> Result<Expr> {
        if self.eat("(") {
            let e = self.expr()?;
            self.expect(")")?;
            return Ok(e);
        }
        if self.eat("inv(") {
            let e = self.expr()?;
            self.expect(")")?;
            return Ok(Expr::Invert(Box::new(e)));
        }
        // before "sub(" so the longer keyword wins
        if self.eat("subsigned(") {
            let e = self.expr()?;
            self.expect(",")?;
            let r = self.rational()?;
            self.expect(")")?;
            return Ok(Expr::SubstituteSigned(Box::new(e), r));
        }
        if self.eat("sub(") {
            let e = self.expr()?;
            self.expect(",")?;
            let r = self.rational()?;
            self.expect(")")?;
            return Ok(Expr::Substitute(Box::new(e), r));
        }
        if self.eat("mono(") {
            let c = self.rational()?;
            self.expect(",")?;
            let e = self.rational()?;
            self.expect(")")?;
            return Ok(Expr::Monomial(c, e));
        }
        if self.eat("spec(") {
            let e = self.expr()?;
            self.expect(",")?;
            let r = self.rational()?;
            self.expect(",")?;
            let z = self.rational()?;
            self.expect(")")?;
            return Ok(Expr::Specialize(Box::new(e), r, z));
        }
        if self.eat("prod[") {
            return self.product();
        }
        if self.eat("theta[") {
            return self.theta();
        }
        if self.eat("fkwsum") {
            return Ok(Expr::FkwSum);
        }
        for (kw, side) in [
            ("qpl6(", QuintupleSide::LhsByParity),
            ("qpl(", QuintupleSide::Lhs),
            ("qpr(", QuintupleSide::Rhs),
        ] {
            if self.eat(kw) {
                let w = self.integer()?;
                self.expect(")")?;
                if w < 0 {
                    return Err(self.error("window half-width must be nonnegative"));
                }
                return Ok(Expr::Quintuple(side, w));
            }
        }
        let (name, len) = CharName::parse_prefix(self.rest())?;
        self.pos += len;
        Ok(Expr::Char(name))
    }

    fn product(&mut self) -> Result<Expr> {
        let c = self.rational()?;
        self.expect(",")?;
        let e = self.rational()?;
        let mut factors = Vec::new();
        while self.eat(";") {
            let binomial = if self.eat("-") {
                Binomial::OneMinus
            } else if self.eat("+") {
                Binomial::OnePlus
            } else {
                return Err(self.error("expected '-' or '+' before a factor"));
            };
            let start = self.rational()?;
            self.expect(",")?;
            let step = self.rational()?;
            self.expect(",")?;
            let power = self.integer()?;
            factors.push(ProductFactor::new(binomial, start, step, power)?);
        }
        self.expect("]")?;
        Ok(Expr::Product(ProductSpec::new(factors).with_prefactor(c, e)))
    }

    fn theta(&mut self) -> Result<Expr> {
        let a = self.rational()?;
        let mut branches = Vec::new();
        while self.eat(";") {
            let linear = self.rational()?;
            self.expect(",")?;
            let constant = self.rational()?;
            self.expect(",")?;
            let sign = if self.eat("+") {
                Sign::Plus
            } else if self.eat("-") {
                Sign::Minus
            } else {
                return Err(self.error("expected a branch sign"));
            };
            branches.push(ThetaBranch { linear, constant, sign });
        }
        self.expect("]")?;
        Ok(Expr::Theta(ThetaSumSpec::new(a, branches)?))
    }
}
