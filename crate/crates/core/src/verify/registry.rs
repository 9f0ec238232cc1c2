//! Built-in identities.

use crate::rational::{int, parse_rational, rat, ExactRational};

use super::expr::Expr;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityRecord {
    pub id: String,
    pub lhs: Expr,
    pub rhs: Expr,
    pub default_order: ExactRational,
    pub tag: String,
}

impl IdentityRecord {
    pub fn new(id: &str, tag: &str, order: ExactRational, lhs: &str, rhs: &str) -> Self {
        Self {
            id: id.into(),
            lhs: lhs.parse().unwrap_or_else(|e| panic!("{id} lhs: {e}")),
            rhs: rhs.parse().unwrap_or_else(|e| panic!("{id} rhs: {e}")),
            default_order: order,
            tag: tag.into(),
        }
    }
}

const WANTED_THETA: &str = "theta[30;-4,0,+;16,2,-;-14,3/2,+;26,11/2,-]";
const WANTED_PRODUCT: &str = "prod[1,0;-1,1,1;-1,5/2,-1;-3/2,5/2,-1]";
const EASY_PRODUCT: &str = "prod[1,0;+3/2,5,1;+7/2,5,1;-5,5,1;-2,10,1;-8,10,1]";

/// Every identity the laboratory knows, in a fixed order.
pub fn registry() -> Vec<IdentityRecord> {
    let o = |s: &str| parse_rational(s).expect("literal");
    vec![
        IdentityRecord::new("RR-1", "Rogers-Ramanujan, product over 2,3 mod 5", o("12011/60"), "chi:2,5,1,1", "rr:1"),
        IdentityRecord::new("RR-2", "Rogers-Ramanujan, product over 1,4 mod 5", o("11999/60"), "chi:2,5,1,2", "rr:2"),
        IdentityRecord::new(
            "MIN-1",
            "chi^{1,2}+chi^{1,4} = chi_{2,5}^{1,1}(q^{1/2})",
            int(100),
            "chi:5,6,1,2+chi:5,6,1,4",
            "chi:2,5,1,1@q^1/2",
        ),
        IdentityRecord::new(
            "MIN-2",
            "chi^{2,2}+chi^{2,4} = chi_{2,5}^{1,2}(q^{1/2})",
            int(100),
            "chi:5,6,2,2+chi:5,6,2,4",
            "chi:2,5,1,2@q^1/2",
        ),
        IdentityRecord::new(
            "MIN-3",
            "chi^{2,1}-chi^{2,5} = chi_{2,5}^{1,1}(q^2)",
            int(100),
            "chi:5,6,2,1-chi:5,6,2,5",
            "chi:2,5,1,1@q^2",
        ),
        IdentityRecord::new(
            "MIN-4",
            "chi^{1,1}-chi^{1,5} = chi_{2,5}^{1,2}(q^2)",
            int(100),
            "chi:5,6,1,1-chi:5,6,1,5",
            "chi:2,5,1,2@q^2",
        ),
        IdentityRecord::new(
            "FKW-50",
            "lattice character of the simple W3(4/5) algebra, degree 50",
            rat(1529, 30),
            "fkw",
            "chi:5,6,1,1+chi:5,6,1,5",
        ),
        IdentityRecord::new(
            "FKW-REMARK",
            "lattice sum over S3 equals the W3(4/5) vacuum character",
            rat(1529, 30),
            "mono(1,-1/12)*inv(phi)*inv(phi)*fkwsum",
            "chi:5,6,1,1+chi:5,6,1,5",
        ),
        IdentityRecord::new(
            "RAMANUJAN",
            "Ramanujan's identity for the basic A2^(2) character",
            int(50),
            "a22:basic",
            "rr:2@q^1/3*rr:2@q^1/2+rr:1@q^1/3*rr:1@q^1/2",
        ),
        IdentityRecord::new(
            "DECOMP-1.4",
            "L(Lambda1)^2 = L(2Lambda1) x W(1/40) + L(Lambda0) x W(1/8), characters",
            int(50),
            "a22:basic*a22:basic",
            "a22:2L1*rr:2@q^1/2+mono(1,-1/6)*a22:L0*rr:1@q^1/2",
        ),
        IdentityRecord::new("QPI", "quintuple product identity on |z| <= 25", int(30), "qpl(25)", "qpr(25)"),
        IdentityRecord::new("WANTED", "four-branch theta sum as a product", int(50), WANTED_THETA, WANTED_PRODUCT),
        IdentityRecord::new("WANTED3", "quintuple left side split by parity", int(50), "qpl(25)", "qpl6(25)"),
        IdentityRecord::new("EASY", "the closing product identity", int(100), EASY_PRODUCT, WANTED_PRODUCT),
        IdentityRecord::new(
            "WANTED-SPEC",
            "quintuple left side at q^{5/2}, z = q^{-3/2}",
            int(50),
            "mono(1,3/2)*spec(qpl(25),5/2,-3/2)",
            WANTED_THETA,
        ),
        IdentityRecord::new(
            "EASY-SPEC",
            "quintuple right side at q^{5/2}, z = q^{-3/2}",
            int(50),
            "mono(1,3/2)*spec(qpr(25),5/2,-3/2)",
            WANTED_PRODUCT,
        ),
        IdentityRecord::new(
            "SIGNED-1",
            "twisted trace on W(1/8) with epsilon = 1",
            int(50),
            "chi:5,6,1,2-chi:5,6,1,4",
            "rr:1@-q^1/2",
        ),
        IdentityRecord::new(
            "SIGNED-2",
            "twisted trace on W(1/40) with epsilon = 1",
            int(50),
            "chi:5,6,2,2-chi:5,6,2,4",
            "rr:2@-q^1/2",
        ),
    ]
}
