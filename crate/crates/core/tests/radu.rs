use std::collections::BTreeMap;

use num_rational::Rational64;
use proptest::prelude::*;

use etaid::arith::{qi, Q};
use etaid::geinf::{generators_ge_inf, make_generator, quotient_of_solution};
use etaid::radu::{algorithm_ab, algorithm_ab_with_z, membership_and_express, Expression, ModuleBasis};
use etaid::{Error, GenEtaQuotient, QSeries};

fn published_z11() -> GenEtaQuotient {
    GenEtaQuotient::from_parts(11, &[(1, 1), (11, -1)], &[((11, 1), -3), ((11, 2), -2)])
}

fn published_e11() -> GenEtaQuotient {
    GenEtaQuotient::from_parts(11, &[(1, 3), (11, -3)], &[((11, 1), -5), ((11, 2), -5), ((11, 3), -4), ((11, 4), -1)])
}

fn published_z10() -> GenEtaQuotient {
    GenEtaQuotient::from_parts(10, &[(1, 1), (5, 1), (10, -2)], &[((5, 1), -2), ((10, 1), -1)])
}

/// Published level-10 solution vectors of z1, z2, z3, z, z4.
const ALPHA: [[i128; 12]; 5] = [
    [-1, 2, 0, 1, 2, 0, -2, -4, 0, 0, 0, 0],
    [-1, -1, 0, 3, 4, 0, -1, -3, 0, 0, 0, 0],
    [1, -2, 0, -1, 2, 0, 2, -4, 0, 0, 0, 0],
    [1, 0, 0, 1, -2, 0, -2, -1, 0, 0, 0, 0],
    [4, -3, 0, 0, 2, 0, -1, -4, 0, 0, 0, 0],
];

fn expand(h: &GenEtaQuotient, bound: i64) -> QSeries {
    h.expansion(Rational64::from_integer(bound)).unwrap()
}

fn basis(n: u64) -> ModuleBasis {
    algorithm_ab(&generators_ge_inf(n).unwrap(), n).unwrap()
}

#[test]
fn level_eleven_basis_is_published() {
    let b = basis(11);
    assert_eq!(b.w(), 1);
    assert_eq!((b.z_pole, b.pole_orders.clone()), (2, vec![0, 3]));
    assert!(b.z.same_function(&published_z11()));
    assert_eq!(published_z11().prefactor_exponent(), qi(-2));
    assert_eq!(published_e11().prefactor_exponent(), qi(-3));
    assert!(b.elements[1].is_monomial());
    let e = b.elements[1].terms.keys().next().unwrap();
    assert!(e.same_function(&published_e11()));
}

#[test]
fn level_ten_is_free_of_rank_one() {
    let b = basis(10);
    assert_eq!(b.w(), 0);
    assert!(b.z.same_function(&published_z10()));
    assert_eq!(b.z_pole, 1);
}

#[test]
fn every_generator_is_a_member() {
    for n in [6u64, 10, 11] {
        let b = basis(n);
        for g in generators_ge_inf(n).unwrap() {
            let pole = g.pole_order();
            let f = expand(&g.quotient, pole + 30);
            let ex = membership_and_express(&f, &b).unwrap();
            assert!(ex.expansion(&b, pole + 30).unwrap().agrees_with(&f), "N={n}: {}", g.quotient);
        }
    }
}

#[test]
fn perturbed_series_is_rejected() {
    let b = basis(11);
    let f = expand(&published_e11(), 40);
    let bump = QSeries::monomial(num_rational::BigRational::from_integer(1.into()), Rational64::from_integer(7));
    match membership_and_express(&f.add(&bump), &b) {
        Err(Error::VerificationFailure(_)) => {}
        other => panic!("expected a verification failure, got {other:?}"),
    }
}

#[test]
fn published_generators_give_the_same_module() {
    let gens: Vec<_> = ALPHA.iter().map(|v| make_generator(quotient_of_solution(10, v), 10)).collect();
    let theirs = algorithm_ab(&gens, 10).unwrap();
    let ours = basis(10);
    assert_eq!(theirs.w(), ours.w());
    assert!(theirs.z.same_function(&ours.z));
    // each of our generators lies in their module and vice versa
    for g in generators_ge_inf(10).unwrap().iter().chain(&gens) {
        let f = expand(&g.quotient, g.pole_order() + 30);
        let a = membership_and_express(&f, &theirs).unwrap();
        let b = membership_and_express(&f, &ours).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn z_override_is_used() {
    let gens = generators_ge_inf(6).unwrap();
    let z = GenEtaQuotient::from_parts(6, &[(2, 3), (3, 9), (1, -3), (6, -9)], &[]);
    let b = algorithm_ab_with_z(&gens, 6, Some(&z)).unwrap();
    assert!(b.z.same_function(&z));
    for g in gens.iter() {
        let f = expand(&g.quotient, g.pole_order() + 30);
        membership_and_express(&f, &b).unwrap();
    }
    let bad = GenEtaQuotient::from_parts(6, &[(1, 1), (6, -1)], &[]);
    assert!(algorithm_ab_with_z(&gens, 6, Some(&bad)).is_err());
}

fn arb_expression(w: usize) -> impl Strategy<Value = Expression> {
    proptest::collection::vec(((0..=w), 0u64..5, -9i64..=9, 1i64..4), 1..6).prop_map(|ts| {
        let mut coeffs = BTreeMap::new();
        for (i, j, a, d) in ts {
            *coeffs.entry((i, j)).or_insert_with(|| Q::from_integer(0.into())) += etaid::arith::q(a, d);
        }
        coeffs.retain(|_, x: &mut Q| *x != Q::from_integer(0.into()));
        Expression { coeffs }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn expressions_round_trip(ex in arb_expression(1)) {
        let b = basis(11);
        let f = ex.expansion(&b, 30).unwrap();
        let back = membership_and_express(&f, &b).unwrap();
        prop_assert_eq!(back, ex);
    }
}
