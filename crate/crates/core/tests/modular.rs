use etaid::arith::{gcd, q, qi};
use etaid::modular::{cusps, equivalent, order_geq_at_cusp, order_lower_bounds, Cusp};
use etaid::{GenEtaQuotient, PartitionFunctionSpec};

/// Number of Gamma1(N)-classes among `a/c` (0 <= a < c <= N) and infinity.
/// Every matrix sending `s` to `t` is `A_t (+-T^k) A_s^-1` with `A_x` any
/// completion of `x`, so equivalence is decided by testing membership in
/// Gamma1(N) for `k` modulo `N` and both signs.
fn brute_force_cusp_count(n: i64) -> usize {
    let complete = |a: i64, c: i64| -> [i64; 4] {
        if c == 0 {
            return [1, 0, 0, 1];
        }
        let (mut b, mut d) = (0i64, 0i64);
        'outer: for dd in -c.abs() - 1..=c.abs() + 1 {
            for bb in -a.abs() - 1..=a.abs() + 1 {
                if a * dd - bb * c == 1 {
                    b = bb;
                    d = dd;
                    break 'outer;
                }
            }
        }
        assert_eq!(a * d - b * c, 1);
        [a, b, c, d]
    };
    let mul = |x: [i64; 4], y: [i64; 4]| [x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2], x[2] * y[1] + x[3] * y[3]];
    let in_gamma1 = |m: [i64; 4]| (m[0] - 1).rem_euclid(n) == 0 && m[2].rem_euclid(n) == 0 && (m[3] - 1).rem_euclid(n) == 0;
    let mut pts: Vec<[i64; 4]> = vec![complete(1, 0)];
    for c in 1..=n {
        for a in 0..c {
            if gcd(a, c) == 1 {
                pts.push(complete(a, c));
            }
        }
    }
    let equiv = |s: [i64; 4], t: [i64; 4]| {
        let s_inv = [s[3], -s[1], -s[2], s[0]];
        (0..n.max(1)).any(|k| [1i64, -1].iter().any(|&e| in_gamma1(mul(mul(t, [e, e * k, 0, e]), s_inv))))
    };
    let mut reps: Vec<[i64; 4]> = vec![];
    for p in pts {
        if !reps.iter().any(|&r| equiv(r, p)) {
            reps.push(p);
        }
    }
    reps.len()
}

#[test]
fn cusp_counts_match_orbit_enumeration() {
    for n in 1i64..=16 {
        assert_eq!(cusps(n as u64).len(), brute_force_cusp_count(n), "level {n}");
    }
    assert_eq!(cusps(11).len(), 10);
}

#[test]
fn cusps_are_pairwise_inequivalent_and_complete() {
    for n in 1..=24u64 {
        let cs = cusps(n);
        for (i, s) in cs.iter().enumerate() {
            for t in &cs[i + 1..] {
                assert!(!equivalent(n as i64, s.cusp, t.cusp));
            }
            let lm = Cusp::new(s.lambda, s.mu * s.eps);
            assert!(equivalent(n as i64, s.cusp, lm));
        }
        for c in 1..=n as i64 {
            for a in 0..c {
                if gcd(a, c) == 1 {
                    let x = Cusp::new(a, c);
                    assert_eq!(cs.iter().filter(|s| equivalent(n as i64, s.cusp, x)).count(), 1);
                }
            }
        }
    }
}

fn published_cusps_10() -> Vec<Cusp> {
    [(0, 1), (1, 5), (1, 4), (3, 10), (1, 3), (3, 5), (1, 2), (1, 0)].iter().map(|&(a, c)| Cusp::new(a, c)).collect()
}

#[test]
fn level_ten_cusps_match_published_set() {
    let cs = cusps(10);
    assert_eq!(cs.len(), 8);
    for p in published_cusps_10() {
        assert_eq!(cs.iter().filter(|s| equivalent(10, s.cusp, p)).count(), 1, "{p}");
    }
}

#[test]
fn overpartition_order_bounds_at_level_ten() {
    let spec = PartitionFunctionSpec::new(2, &[(1, -2), (2, 1)], &[]).unwrap();
    let phi = GenEtaQuotient::from_parts(10, &[(10, 1)], &[((10, 5), 9), ((10, 4), -8)]);
    let bounds = order_lower_bounds(&spec, 5, 2, &phi, 10);
    let expected = [q(-3, 1), q(19, 5), qi(-2), q(-18, 5), qi(-3), q(27, 5), qi(-2), q(-2, 5)];
    for (p, e) in published_cusps_10().into_iter().zip(expected) {
        let (_, b) = bounds.iter().find(|(s, _)| equivalent(10, s.cusp, p)).unwrap();
        assert_eq!(*b, e, "cusp {p}");
    }
}

#[test]
fn orders_of_eta_quotient_sum_to_zero() {
    let h = GenEtaQuotient::from_parts(10, &[(1, 3), (2, -2), (5, -3), (10, 2)], &[((5, 1), 4), ((10, 3), -1)]);
    let total = cusps(10).iter().map(|s| order_geq_at_cusp(&h, 10, s)).fold(qi(0), |a, b| a + b);
    assert_eq!(total, qi(0));
}
