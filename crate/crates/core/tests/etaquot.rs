use num_rational::Rational64;
use proptest::prelude::*;

use etaid::arith::to_r64;
use etaid::etaquot::{layout, GenEtaQuotient, PartitionFunctionSpec, Route};
use etaid::modular::{cusps, order_geq_at_cusp, p_star, SL2Matrix};

fn quotient_from(n: u64, xs: &[i64]) -> GenEtaQuotient {
    let lay = layout(n);
    let mut plain = vec![];
    let mut gen = vec![];
    for (&(d, g), &x) in lay.iter().zip(xs) {
        if g == 0 {
            plain.push((d, x));
        } else if 2 * g != d {
            gen.push(((d, g), x));
        }
    }
    GenEtaQuotient::from_parts(n, &plain, &gen)
}

fn arb_quotient() -> impl Strategy<Value = GenEtaQuotient> {
    prop::sample::select(vec![6u64, 10, 11]).prop_flat_map(|n| {
        let k = layout(n).len();
        proptest::collection::vec(-3i64..=3, k).prop_map(move |xs| quotient_from(n, &xs))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    /// Robins' order at infinity equals the leading exponent of the expansion.
    #[test]
    fn robins_order_at_infinity_matches_series(h in arb_quotient()) {
        let n = h.n;
        let inf = cusps(n).into_iter().last().unwrap();
        let robins = order_geq_at_cusp(&h, n, &inf);
        let lead = to_r64(&h.prefactor_exponent());
        let s = h.expansion(lead + Rational64::from_integer(5)).unwrap();
        prop_assert_eq!(s.lead_exponent(), Some(to_r64(&robins)));
    }

    #[test]
    fn canonicalization_preserves_expansion(h in arb_quotient()) {
        let b = to_r64(&h.prefactor_exponent()) + Rational64::from_integer(30);
        prop_assert_eq!(h.expansion(b).unwrap(), h.canonicalize().unwrap().expansion(b).unwrap());
        prop_assert_eq!(h.expansion_by(b, Route::Direct).unwrap(), h.expansion(b).unwrap());
    }

    /// p* depends only on the coset Gamma1(N) gamma T^Z.
    #[test]
    fn p_star_is_double_coset_invariant(h in arb_quotient(), pick in 0usize..64, k in -5i64..5, u in 1i64..6, v in -5i64..5) {
        let n = h.n as i64;
        let cs = cusps(h.n);
        let alpha = cs[pick % cs.len()].alpha;
        let h = h.canonicalize().unwrap();
        // an element of Gamma1(N): (1 + N u, b; N v', d)
        let a = 1 + n * u;
        let c = n * v;
        let g = match etaid::modular::gamma1_element(n, a, c) {
            Some(g) => g,
            None => SL2Matrix::identity(),
        };
        let t = SL2Matrix::new(1, k, 0, 1);
        prop_assert_eq!(p_star(&h, &alpha), p_star(&h, &g.mul(&alpha).mul(&t)));
    }

    #[test]
    fn slicing_matches_generating_function(m in 1u64..8, tt in 0u64..8) {
        let t = tt % m;
        let spec = PartitionFunctionSpec::new(2, &[(1, -2), (2, 1)], &[]).unwrap();
        let g = spec.g_mt_expansion(m, t, 20);
        let all = spec.gf_coeffs(m as usize * 20 + t as usize);
        let shift = to_r64(&((etaid::arith::qi(t as i64) - spec.ell()) / etaid::arith::qi(m as i64)));
        for k in 0..20 {
            let c = g.coeff(shift + Rational64::from_integer(k as i64));
            prop_assert_eq!(c, num_rational::BigRational::from_integer(all[m as usize * k + t as usize].clone()));
        }
    }
}

#[test]
fn folding_spec_keys_is_harmless() {
    let a = PartitionFunctionSpec::new(5, &[], &[((5, 1), -1), ((5, 2), 1)]).unwrap();
    let b = PartitionFunctionSpec::new(5, &[], &[((5, 4), -1), ((5, 3), 1)]).unwrap();
    assert_eq!(a.gf_coeffs(60), b.gf_coeffs(60));
    assert_eq!(a.ell(), b.ell());
}
