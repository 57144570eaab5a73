use etaid::admissible::{check_n, f_prefactor, find_n, find_phi, phi_criterion, phi_from_vector, phi_vector};
use etaid::PartitionFunctionSpec;

fn overpartitions() -> PartitionFunctionSpec {
    PartitionFunctionSpec::new(2, &[(1, -2), (2, 1)], &[]).unwrap()
}

fn partitions() -> PartitionFunctionSpec {
    PartitionFunctionSpec::new(1, &[(1, -1)], &[]).unwrap()
}

/// (3,1)-singular overpartitions.
fn singular_31() -> PartitionFunctionSpec {
    PartitionFunctionSpec::new(6, &[(1, -1), (3, 1)], &[((6, 2), 1), ((3, 1), -1)]).unwrap()
}

/// The Rogers-Ramanujan continued fraction.
fn rogers_ramanujan() -> PartitionFunctionSpec {
    PartitionFunctionSpec::new(5, &[], &[((5, 1), -1), ((5, 2), 1)]).unwrap()
}

#[test]
fn published_levels() {
    for (spec, m, t, n) in [
        (overpartitions(), 5, 2, 10),
        (partitions(), 11, 6, 11),
        (singular_31(), 9, 3, 6),
        (singular_31(), 9, 6, 6),
        (rogers_ramanujan(), 2, 0, 10),
        (rogers_ramanujan(), 2, 1, 10),
    ] {
        let r = check_n(&spec, m, t, n);
        assert!(r.passes(), "{r}");
        assert_eq!(find_n(&spec, m, t), n);
    }
}

#[test]
fn found_phi_passes_and_is_small() {
    for (spec, m, t) in [
        (overpartitions(), 5u64, 2u64),
        (partitions(), 11, 6),
        (partitions(), 1, 0),
        (singular_31(), 9, 3),
        (singular_31(), 9, 6),
        (rogers_ramanujan(), 2, 0),
        (rogers_ramanujan(), 2, 1),
    ] {
        let n = find_n(&spec, m, t);
        let start = std::time::Instant::now();
        let phi = find_phi(&spec, m, t, n).unwrap();
        eprintln!("m={m} t={t} N={n}: {phi} {:?} in {:?}", phi_vector(&phi, n).unwrap(), start.elapsed());
        assert!(phi_criterion(&spec, m, t, n, &phi));
        assert!(f_prefactor(&spec, m, t, &phi).is_integer());
    }
}

#[test]
fn published_phi_vector() {
    let v = vec![0, 0, 0, 0, 0, 0, 1, 0, 0, 0, -8, 9];
    assert!(phi_criterion(&overpartitions(), 5, 2, 10, &phi_from_vector(10, &v)));
}

mod properties {
    use super::*;
    use etaid::admissible::{condition4_exponent, criterion_units, AdmissibilityReport};
    use etaid::arith::{qi, Q};
    use etaid::pipeline::prefactored_series;
    use etaid::etaquot::Route;
    use num_integer::Integer;
    use proptest::prelude::*;

    fn cases() -> Vec<(PartitionFunctionSpec, u64, u64)> {
        vec![
            (overpartitions(), 5, 2),
            (overpartitions(), 5, 3),
            (partitions(), 11, 6),
            (partitions(), 5, 4),
            (singular_31(), 9, 3),
            (rogers_ramanujan(), 2, 1),
        ]
    }

    #[test]
    fn phi_gives_integral_exponents() {
        for (spec, m, t) in cases() {
            let n = find_n(&spec, m, t);
            let phi = find_phi(&spec, m, t, n).unwrap();
            let s = prefactored_series(&spec, m, t, &phi, 100, Route::Direct).unwrap();
            assert!(s.has_integral_exponents(), "m={m} t={t}");
        }
    }

    /// The exponent of condition (4) is additive on units that are 1 mod N.
    #[test]
    fn condition_four_is_multiplicative() {
        for (spec, m, t) in cases() {
            let n = find_n(&spec, m, t);
            let phi = find_phi(&spec, m, t, n).unwrap();
            let units = criterion_units(n);
            let modulus = 12 * n as i64;
            for &a in &units {
                for &b in &units {
                    let ab = (a * b).mod_floor(&modulus);
                    let lhs = condition4_exponent(&spec, m, n, &phi, ab).unwrap();
                    let rhs = condition4_exponent(&spec, m, n, &phi, a).unwrap()
                        + condition4_exponent(&spec, m, n, &phi, b).unwrap();
                    let diff: Q = (lhs - rhs) / qi(2);
                    assert!(diff.is_integer(), "N={n} a={a} b={b}");
                }
            }
        }
    }

    fn first_failure(r: &AdmissibilityReport) -> Option<String> {
        r.conditions.iter().find(|c| !c.pass).map(|c| c.label.clone())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        /// If N works then so does every multiple of it, in particular 24 m M N.
        #[test]
        fn admissible_levels_are_stable_under_multiples(pick in 0usize..6, k in 1u64..4) {
            let (spec, m, t) = cases().swap_remove(pick);
            let n = find_n(&spec, m, t);
            let big = 24 * m * spec.m * n;
            let r = check_n(&spec, m, t, n * k);
            prop_assert!(r.passes(), "{:?}", first_failure(&r));
            prop_assert!(check_n(&spec, m, t, big).passes());
            prop_assert!(find_n(&spec, m, t) <= big);
        }

        #[test]
        fn levels_below_the_minimum_fail(pick in 0usize..6) {
            let (spec, m, t) = cases().swap_remove(pick);
            let n = find_n(&spec, m, t);
            for d in 1..n {
                prop_assert!(!check_n(&spec, m, t, d).passes());
            }
        }
    }

    #[test]
    fn condition_report_names_a_failure() {
        let r = check_n(&partitions(), 11, 6, 5);
        assert!(!r.passes());
        assert!(first_failure(&r).is_some());
        assert!(r.to_string().contains("FAIL"));
    }
}
