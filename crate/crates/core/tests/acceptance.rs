//! Acceptance run: one PASS/FAIL line per criterion. Every comparison is exact
//! rational equality (tolerance 0). Exits nonzero if any criterion fails.

mod common;

use std::time::Instant;

use qlab::bivariate::{quintuple_lhs, BivariateComparison, quintuple_wanted3, specialize};
use qlab::characters::{
    a22_char, lowest_weight_from_char, minimal_char, rr_product, twisted_trace, w_char, A22ModuleLabel, CharLabel,
    RrVariant, WModuleLabel,
};
use qlab::lattice::{fkw_character, theta_sum, Sign, ThetaSumSpec};
use qlab::rational::{fmt_rational, int, rat, ExactRational};
use qlab::verify::{check, discover, rank, Status};
use qlab::PuiseuxSeries;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn chi(s: i64, t: i64, m: i64, n: i64, order: &ExactRational) -> PuiseuxSeries {
    minimal_char(&CharLabel::new(s, t, m, n).unwrap(), order)
}

fn pass_at(id: &str, order: &ExactRational) -> Result<(), String> {
    let rep = check(id, order).map_err(|e| format!("{id}: {e}"))?;
    ensure(
        rep.status == Status::Pass && &rep.order_checked == order,
        format!("{}", rep.to_text()),
    )
}

fn criterion_1() -> Outcome {
    for (v, n, lead) in [(RrVariant::First, 1, rat(11, 60)), (RrVariant::Second, 2, rat(-1, 60))] {
        let o = &lead + int(200);
        let a = chi(2, 5, 1, n, &o);
        let b = rr_product(v, &o);
        ensure(a.order() == &o && a == b, format!("chi_(2,5)^(1,{n}) differs from the product"))?;
        ensure(a.leading_exponent() == Some(lead), "leading exponent")?;
    }
    Ok("both products agree through 200 steps above the leading exponent".into())
}

fn criterion_2() -> Outcome {
    for id in ["MIN-1", "MIN-2", "MIN-3", "MIN-4"] {
        pass_at(id, &int(100))?;
    }
    Ok("MIN-1..MIN-4 PASS at order 100".into())
}

fn criterion_3() -> Outcome {
    for steps in [51, 61] {
        let o = rat(-1, 30) + int(steps);
        pass_at("FKW-50", &o)?;
        pass_at("FKW-REMARK", &o)?;
    }
    Ok("lattice character = chi^(1,1) + chi^(1,5) through q^50 and q^60 above -1/30, two routes".into())
}

fn criterion_4() -> Outcome {
    let lead = rat(-1, 30);
    let f = fkw_character(&(&lead + int(5)));
    ensure(f.leading_exponent() == Some(lead.clone()), "leading exponent is not -1/30")?;
    let got: Vec<ExactRational> = (0..5).map(|i| f.coefficient(&(&lead + int(i)))).collect();
    let want: Vec<ExactRational> = [1, 0, 1, 2, 3].into_iter().map(int).collect();
    ensure(got == want, format!("coefficients {got:?}"))?;
    Ok("q^(-1/30)(1 + q^2 + 2q^3 + 3q^4 + ...)".into())
}

fn criterion_5() -> Outcome {
    pass_at("DECOMP-1.4", &int(50))?;
    pass_at("RAMANUJAN", &int(50))?;
    let o = int(50);
    for l in [A22ModuleLabel::BasicLambda1, A22ModuleLabel::TwoLambda1, A22ModuleLabel::Lambda0] {
        let d = a22_char(l, &o).grading_denominator();
        ensure(360 % d == 0, format!("{l:?} grading denominator {d}"))?;
    }
    let basic = a22_char(A22ModuleLabel::BasicLambda1, &o);
    let sq = &basic * &basic;
    ensure(360 % sq.grading_denominator() == 0, "square grading denominator")?;
    Ok("DECOMP-1.4 and RAMANUJAN PASS at order 50, denominators divide 360".into())
}

fn wanted_theta() -> ThetaSumSpec {
    ThetaSumSpec::from_triples(
        int(30),
        &[
            (int(-4), int(0), Sign::Plus),
            (int(16), int(2), Sign::Minus),
            (int(-14), rat(3, 2), Sign::Plus),
            (int(26), rat(11, 2), Sign::Minus),
        ],
    )
    .unwrap()
}

fn criterion_6() -> Outcome {
    pass_at("QPI", &int(30))?;
    pass_at("WANTED", &int(50))?;
    pass_at("EASY", &int(100))?;
    pass_at("WANTED3", &int(50))?;
    let window = (-25, 25);
    let a = quintuple_lhs(&int(30), window).map_err(|e| e.to_string())?;
    let b = quintuple_wanted3(&int(30), window).map_err(|e| e.to_string())?;
    ensure(
        a.compare(&b, &int(30)).map_err(|e| e.to_string())? == BivariateComparison::Agree,
        "parity split differs from the left side",
    )?;
    let s = specialize(&a, &rat(5, 2), &rat(-3, 2)).map_err(|e| e.to_string())?.shift(&rat(3, 2));
    let certified = s.order().clone();
    ensure(certified >= int(25), format!("certified order {}", fmt_rational(&certified)))?;
    ensure(s == theta_sum(&wanted_theta(), &certified), "specialized left side differs from the theta sum")?;
    pass_at("WANTED-SPEC", &int(50))?;
    pass_at("EASY-SPEC", &int(50))?;
    Ok(format!(
        "QPI on [-25,25] mod q^30, WANTED mod q^50, WANTED3 mod q^30, EASY mod q^100, specialize certified to q^{}",
        fmt_rational(&certified)
    ))
}

fn criterion_7() -> Outcome {
    let o = int(30);
    let half = |v| rr_product(v, &(&o * int(2))).substitute(&rat(1, 2)).unwrap();
    let signed_half = |v| rr_product(v, &(&o * int(2))).substitute_signed(&rat(1, 2)).unwrap();
    let double = |v| rr_product(v, &(&o / int(2))).substitute(&int(2)).unwrap();

    let rel = discover(&[chi(5, 6, 1, 2, &o), chi(5, 6, 1, 4, &o), half(RrVariant::First)], &o).map_err(|e| e.to_string())?;
    ensure(rel.len() == 1 && rel[0].coefficients == vec![int(1), int(1), int(-1)], format!("relations {rel:?}"))?;

    let o15 = int(15);
    let ten: Vec<_> = [(1, 1), (1, 2), (1, 3), (1, 4), (1, 5), (2, 1), (2, 2), (2, 3), (2, 4), (2, 5)]
        .iter()
        .map(|&(m, n)| chi(5, 6, m, n, &o15))
        .collect();
    let rel = discover(&ten, &o15).map_err(|e| e.to_string())?;
    ensure(rel.is_empty(), format!("{} relations among the ten characters", rel.len()))?;

    let basis = vec![
        double(RrVariant::First),
        double(RrVariant::Second),
        half(RrVariant::First),
        half(RrVariant::Second),
        signed_half(RrVariant::First),
        signed_half(RrVariant::Second),
    ];
    let r = rank(&basis, &o).map_err(|e| e.to_string())?;
    ensure(r == 6, format!("basis rank {r}"))?;

    let mut cols = Vec::new();
    for (l, eps) in [
        (WModuleLabel::WTau1_40, 0),
        (WModuleLabel::WTau1_40, 1),
        (WModuleLabel::WTau1_8, 0),
        (WModuleLabel::WTau1_8, 1),
        (WModuleLabel::W0, 0),
        (WModuleLabel::W2_5, 0),
    ] {
        cols.push(twisted_trace(l, eps, &o).map_err(|e| e.to_string())?);
    }
    cols.extend(basis);
    let rel = discover(&cols, &o).map_err(|e| e.to_string())?;
    ensure(rel.len() == 6, format!("traces against basis: nullspace dimension {}", rel.len()))?;
    for r in &rel {
        ensure(r.apply(&cols).is_empty(), "relation does not vanish")?;
        ensure(
            r.coefficients.iter().all(|c| c.is_integer() && c.numer().magnitude() <= &1u32.into()),
            format!("coefficient outside {{-1, 0, 1}}: {r}"),
        )?;
    }
    Ok("one relation (1,1,-1); ten characters independent; basis rank 6; traces pair with +-1 combinations".into())
}

fn criterion_8() -> Outcome {
    let o = int(4);
    let cases = [
        ("basic, c=2", a22_char(A22ModuleLabel::BasicLambda1, &o), int(2), rat(5, 72)),
        ("2Lambda1, c=16/5", a22_char(A22ModuleLabel::TwoLambda1, &o), rat(16, 5), rat(41, 360)),
        ("coset W(1/40), c=4/5", w_char(WModuleLabel::WTau1_40, &o), rat(4, 5), rat(1, 40)),
        ("coset W(1/8), c=4/5", w_char(WModuleLabel::WTau1_8, &o), rat(4, 5), rat(1, 8)),
    ];
    for (name, f, c, want) in cases {
        let h = lowest_weight_from_char(&f, &c).map_err(|e| e.to_string())?;
        ensure(h == want, format!("{name}: got {}", fmt_rational(&h)))?;
    }
    Ok("5/72, 41/360, 1/40, 1/8".into())
}

fn criterion_9() -> Outcome {
    for (name, suite) in common::SUITES {
        suite().map_err(|e| format!("{name}: {e}"))?;
    }
    Ok(format!(
        "{} suites x {} cases, seed {:#x}",
        common::SUITES.len(),
        common::CASES,
        common::SEED
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("Rogers-Ramanujan product forms", criterion_1),
        ("minimal-model identities at order 100", criterion_2),
        ("lattice character of W3(4/5)", criterion_3),
        ("lattice character leading terms", criterion_4),
        ("A2^(2) decomposition and Ramanujan identity", criterion_5),
        ("quintuple product chain", criterion_6),
        ("linear-relation discovery", criterion_7),
        ("lowest weights from characters", criterion_8),
        ("property suites", criterion_9),
    ];
    println!("acceptance: tolerance 0 (exact rational equality)");
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let ms = start.elapsed().as_millis();
        match outcome {
            Ok(detail) => println!("PASS {} {name}: {detail} ({ms} ms)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why} ({ms} ms)", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
