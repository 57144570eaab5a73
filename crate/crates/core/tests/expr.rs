use num_rational::Rational64;
use proptest::prelude::*;

use etaid::expr::{expand_str, parse, verify_identity};

const P: &str = "slice(11,6,1/P(1,1))";
const M1: &str = "(q^-5*P(1,1)^7*P(11,11)^3/(P(2,2)^3*P(22,22)^7))";
const M2: &str = "(q^-5*P(2,2)^8*P(11,11)^4/(P(1,1)^4*P(22,22)^8))";
const M4: &str = "(q^-5*P(2,2)*P(11,11)^11/(P(1,1)*P(22,22)^11))";

fn gamma0_22_sides(cubic: i64) -> (String, String) {
    let t = format!("(3*{M1}/88 + {M2}/11 - {M4}/8)");
    let z1 = format!("((-5)*{M1}/88 + 2*{M2}/11 - {M4}/8 - 3)");
    let z2 = format!("({M1}/44 - 3*{M2}/11 + 5*{M4}/4)");
    let lhs = format!("P(1,1)^10*P(2,2)^2*P(11,11)^11/(q^14*P(22,22)^22)*{P}");
    let rhs = format!(
        "11*(98*{t}^4 + {cubic}*{t}^3 + 2877*{t}^2 + 1019*{t} - 1997) \
         + 11*{z1}*(17*{t}^3 + 490*{t}^2 + 54*{t} - 871) \
         + 11*{z2}*({t}^3 + 251*{t}^2 + 488*{t} - 614)"
    );
    (lhs, rhs)
}

#[test]
fn ramanujan_five() {
    let r = verify_identity("slice(5,4,1/P(1,1))", "5*P(5,5)^5/P(1,1)^6", 200).unwrap();
    assert!(r.equal(), "{:?}", r.mismatch);
}

#[test]
fn kolberg_five() {
    let r = verify_identity(
        "slice(5,0,1/P(1,1))",
        "P(5,5)/(P(1,1)^2*(P(1,5)*P(4,5))^8) - 3*q*P(5,5)^6*(P(1,5)*P(4,5))^2/P(1,1)^7",
        200,
    )
    .unwrap();
    assert!(r.equal(), "{:?}", r.mismatch);
}

#[test]
fn gamma0_22_identity() {
    let (lhs, rhs) = gamma0_22_sides(1263);
    let r = verify_identity(&lhs, &rhs, 200).unwrap();
    assert!(r.equal(), "{:?}", r.mismatch);
}

/// Changing one coefficient by 1 changes the right side by `11 t^3`, so the
/// first mismatch sits at the leading term of `11 t^3`.
#[test]
fn corrupted_coefficient_is_located() {
    let (lhs, rhs) = gamma0_22_sides(1264);
    let r = verify_identity(&lhs, &rhs, 200).unwrap();
    let (e, a, b) = r.mismatch.clone().expect("corruption went unnoticed");
    let t = format!("(3*{M1}/88 + {M2}/11 - {M4}/8)");
    let diff = expand_str(&format!("11*{t}^3"), 200).unwrap();
    let (e0, c0) = diff.lead().unwrap();
    assert_eq!(e, e0);
    assert_eq!(b - a, c0);
    assert_eq!(r.to_json()["equal"], false);
}

#[test]
fn rational_exponents_and_errors() {
    let s = expand_str("q^(1/2)*q^(-1/2)", 5).unwrap();
    assert_eq!(s.lead_exponent(), Some(Rational64::from_integer(0)));
    assert!(expand_str("slice(2,1,q^(1/3))", 5).is_err());
    assert!(expand_str("1/(P(1,1)-1)", 5).is_ok());
    assert!(parse("P(0,1)").is_err());
    assert!(parse("slice(3,3,q)").is_err());
    assert!(parse("q^").is_err());
    assert!(parse("(q").is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// Jacobi triple product in the form (q^a, q^(d-a), q^d; q^d) = sum (-1)^n q^(d n(n-1)/2 + a n).
    #[test]
    fn triple_product(d in 2i64..8, a0 in 1i64..8) {
        let a = 1 + (a0 - 1) % (d - 1);
        let lhs = format!("P({a},{d})*P({},{d})*P({d},{d})", d - a);
        let mut terms = vec![];
        for n in -30i64..=30 {
            let e = d * n * (n - 1) / 2 + a * n;
            if e < 120 {
                terms.push(format!("{}q^{e}", if n % 2 == 0 { "+" } else { "-" }));
            }
        }
        let rhs = format!("0{}", terms.join(""));
        let r = verify_identity(&lhs, &rhs, 100).unwrap();
        prop_assert!(r.equal(), "{:?}", r.mismatch);
    }
}
