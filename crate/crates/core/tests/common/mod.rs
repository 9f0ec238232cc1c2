//! Property suites shared by the property tests and the acceptance target.
//! Each suite runs a fixed-seed proptest runner and reports the first
//! counterexample as a string.

#![allow(dead_code)]

use num_traits::Zero;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed, TestCaseError, TestError, TestRunner};

use qlab::lattice::{weyl_group, WeylElement, GRAM};
use qlab::products::{euler_phi, expand_product, ProductFactor, ProductSpec};
use qlab::rational::{int, rat, ExactRational};
use qlab::verify::discover;
use qlab::PuiseuxSeries;

pub const CASES: u32 = 128;
pub const SEED: u64 = 0x5eed_2024;

pub fn config() -> Config {
    Config {
        cases: CASES,
        rng_seed: RngSeed::Fixed(SEED),
        failure_persistence: None,
        ..Config::default()
    }
}

fn report<V: std::fmt::Debug>(r: Result<(), TestError<V>>) -> Result<(), String> {
    r.map_err(|e| e.to_string())
}

fn coefficient() -> impl Strategy<Value = ExactRational> {
    (-5i64..=5, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

/// Series on the grid `1/d`, `d` in {1, 2, 3, 4, 6}, leading near zero, up to
/// six terms and an order at most 30 grid steps above the start.
pub fn series() -> impl Strategy<Value = PuiseuxSeries> {
    (
        prop::sample::select(vec![1i64, 2, 3, 4, 6]),
        -6i64..=6,
        prop::collection::vec((0i64..24, coefficient()), 0..6),
        1i64..=30,
    )
        .prop_map(|(d, k0, terms, span)| {
            let terms = terms.into_iter().map(move |(k, c)| (rat(k0 + k, d), c));
            PuiseuxSeries::from_terms(terms, rat(k0 + span, d))
        })
}

/// Series whose exponents are integer steps from the leading one.
pub fn integer_step_series() -> impl Strategy<Value = PuiseuxSeries> {
    (
        (-6i64..=6, 1i64..=6),
        coefficient().prop_filter("nonzero lead", |c| !c.is_zero()),
        prop::collection::vec((1i64..10, coefficient()), 0..6),
        1i64..=12,
    )
        .prop_map(|((n, d), c0, terms, span)| {
            let lead = rat(n, d);
            let terms = std::iter::once((lead.clone(), c0)).chain(terms.into_iter().map(|(k, c)| (&lead + int(k), c)));
            PuiseuxSeries::from_terms(terms, &lead + int(span))
        })
}

fn ratio() -> impl Strategy<Value = ExactRational> {
    prop::sample::select(vec![rat(1, 1), rat(1, 2), rat(2, 3), rat(3, 1), rat(5, 2), rat(1, 3)])
}

/// Equal below the smaller of the two orders.
fn agree(a: &PuiseuxSeries, b: &PuiseuxSeries) -> bool {
    let o = std::cmp::min(a.order(), b.order()).clone();
    a.truncate_at_most(&o) == b.truncate_at_most(&o)
}

fn check(ok: bool, what: &str) -> Result<(), TestCaseError> {
    if ok {
        Ok(())
    } else {
        Err(TestCaseError::fail(what.to_string()))
    }
}

#[allow(clippy::eq_op)]
pub fn ring_axioms() -> Result<(), String> {
    let mut runner = TestRunner::new(config());
    report(runner.run(&(series(), series(), series()), |(a, b, c)| {
        check(agree(&(&(&a + &b) + &c), &(&a + &(&b + &c))), "additive associativity")?;
        check(&a + &b == &b + &a, "additive commutativity")?;
        check(agree(&(&a - &a), &PuiseuxSeries::zero(a.order().clone())), "additive inverse")?;
        check(&a * &b == &b * &a, "multiplicative commutativity")?;
        check(agree(&(&(&a * &b) * &c), &(&a * &(&b * &c))), "multiplicative associativity")?;
        check(agree(&(&a * &(&b + &c)), &(&(&a * &b) + &(&a * &c))), "distributivity")?;
        check(agree(&(&a * &PuiseuxSeries::one(a.order().clone())), &a), "multiplicative unit")?;
        Ok(())
    }))
}

pub fn inverse() -> Result<(), String> {
    let mut runner = TestRunner::new(config());
    report(runner.run(&series(), |a| {
        if a.is_empty() {
            check(a.invert().is_err(), "empty series has no inverse")?;
            return Ok(());
        }
        let inv = a.invert().map_err(|e| TestCaseError::fail(e.to_string()))?;
        let p = &a * &inv;
        check(agree(&p, &PuiseuxSeries::one(p.order().clone())), "a * a^-1 = 1")?;
        Ok(())
    }))
}

pub fn substitute_homomorphism() -> Result<(), String> {
    let mut runner = TestRunner::new(config());
    report(runner.run(&(series(), series(), ratio()), |(a, b, r)| {
        let s = |f: &PuiseuxSeries| f.substitute(&r).unwrap();
        check(s(&(&a * &b)) == &s(&a) * &s(&b), "substitute(a*b)")?;
        check(s(&(&a + &b)) == &s(&a) + &s(&b), "substitute(a+b)")?;
        check(s(&a).order() == &(a.order() * &r), "order scales")?;
        Ok(())
    }))
}

pub fn substitute_signed_multiplicative() -> Result<(), String> {
    let mut runner = TestRunner::new(config());
    report(runner.run(&(integer_step_series(), integer_step_series(), ratio()), |(a, b, r)| {
        let s = |f: &PuiseuxSeries| f.substitute_signed(&r).unwrap();
        let lhs = s(&(&a * &b));
        check(agree(&lhs, &(&s(&a) * &s(&b))), "substitute_signed(a*b)")?;
        // term by term: (-1)^n on the n-th integer step, exponent scaled by r
        let lead = a.leading_exponent().expect("nonzero lead");
        let direct = PuiseuxSeries::from_terms(
            a.terms().map(|(e, c)| {
                let n = (&e - &lead).to_integer();
                let sign = if (n % 2u8) == 0u8.into() { int(1) } else { int(-1) };
                (&e * &r, c * sign)
            }),
            a.order() * &r,
        );
        check(s(&a) == direct, "termwise sign")?;
        Ok(())
    }))
}

/// `(q)_inf` by products against the pentagonal number theorem.
pub fn pentagonal_equivalence() -> Result<(), String> {
    let mut runner = TestRunner::new(config());
    report(runner.run(&(1i64..120), |n| {
        let phi = euler_phi(&int(n));
        let mut expected = Vec::new();
        let mut k = 0i64;
        loop {
            let mut any = false;
            for j in if k == 0 { vec![0] } else { vec![k, -k] } {
                let e = j * (3 * j - 1) / 2;
                if e < n {
                    any = true;
                    expected.push((int(e), int(if j % 2 == 0 { 1 } else { -1 })));
                }
            }
            if !any && k > 0 {
                break;
            }
            k += 1;
        }
        let pent = PuiseuxSeries::from_terms(expected, int(n));
        check(phi == pent, "pentagonal expansion")?;
        let recip = expand_product(&ProductSpec::new(vec![ProductFactor::reciprocal(int(1), int(1)).unwrap()]), &int(n));
        check(recip == pent.invert().unwrap(), "partition generating function")?;
        Ok(())
    }))
}

pub fn weyl_group_properties() -> Result<(), String> {
    let table = weyl_group();
    let mut runner = TestRunner::new(config());
    report(runner.run(&prop::collection::vec(any::<bool>(), 0..12), |word| {
        let w = word.iter().fold(WeylElement::identity(), |acc, &first| {
            acc.compose(&if first { WeylElement::s1() } else { WeylElement::s2() })
        });
        check(w.preserves_gram(), "Gram preserved")?;
        // M^T G M = G checked directly as well
        let m = w.matrix;
        for i in 0..2 {
            for j in 0..2 {
                let mut s = 0;
                for k in 0..2 {
                    for l in 0..2 {
                        s += m[k][i] * GRAM[k][l] * m[l][j];
                    }
                }
                check(s == GRAM[i][j], "Gram entry")?;
            }
        }
        check(w.determinant() == w.sign.value(), "sign is the determinant")?;
        check(w.sign.value() == if word.len() % 2 == 0 { 1 } else { -1 }, "sign is (-1)^length")?;
        let known = table.iter().find(|t| t.matrix == w.matrix);
        check(known.is_some_and(|t| t.sign == w.sign), "closure and sign table")?;
        Ok(())
    }))
}

fn dense_series() -> impl Strategy<Value = PuiseuxSeries> {
    prop::collection::vec(-3i64..=3, 30).prop_map(|cs| {
        PuiseuxSeries::from_terms(cs.into_iter().enumerate().map(|(i, c)| (int(i as i64), int(c))), int(30))
    })
}

pub fn discovery_round_trip() -> Result<(), String> {
    let mut runner = TestRunner::new(config());
    let strat = (
        prop::collection::vec(dense_series(), 1..4),
        prop::collection::vec(prop::collection::vec(-3i64..=3, 3), 0..3),
    );
    report(runner.run(&strat, |(bases, combos)| {
        let mut cols = bases.clone();
        for w in &combos {
            let f = bases
                .iter()
                .zip(w)
                .fold(PuiseuxSeries::zero(int(30)), |acc, (b, c)| &acc + &b.scale(&int(*c)));
            cols.push(f);
        }
        let rels = match discover(&cols, &int(30)) {
            Ok(r) => r,
            Err(qlab::Error::InsufficientRows { .. }) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        check(rels.len() >= combos.len(), "each planted combination is found")?;
        for r in &rels {
            check(r.apply(&cols).is_empty(), "relation vanishes")?;
            let first = r.coefficients.iter().find(|c| !c.is_zero());
            check(first == Some(&int(1)), "normalized")?;
        }
        Ok(())
    }))
}

pub const SUITES: [(&str, fn() -> Result<(), String>); 7] = [
    ("ring axioms", ring_axioms),
    ("inverse", inverse),
    ("substitute homomorphism", substitute_homomorphism),
    ("substitute_signed multiplicativity", substitute_signed_multiplicative),
    ("pentagonal-number equivalence", pentagonal_equivalence),
    ("Weyl group Gram preservation and signs", weyl_group_properties),
    ("discovery round-trip soundness", discovery_round_trip),
];
