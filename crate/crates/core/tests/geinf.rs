use etaid::etaquot::layout;
use etaid::geinf::{
    ge_inf_system, ge_inf_system_with_cusps, generators_ge_inf, hilbert_basis, hilbert_basis_by, in_generated_monoid,
    is_constant_one, quotient_of_solution, solution_of_quotient, DioSystem, HilbertMethod,
};
use etaid::lattice::Vector;
use etaid::GenEtaQuotient;
use num_traits::Signed;
use proptest::prelude::*;

/// Published solution vectors at level 10 over (a'_(1,0), ..., a'_(10,5), y_1..y_6).
const ALPHA: [[i128; 18]; 5] = [
    [-1, 2, 0, 1, 2, 0, -2, -4, 0, 0, 0, 0, 0, 1, 0, 0, 0, -2],
    [-1, -1, 0, 3, 4, 0, -1, -3, 0, 0, 0, 0, 0, 0, 1, 0, 0, -1],
    [1, -2, 0, -1, 2, 0, 2, -4, 0, 0, 0, 0, 0, 0, 0, 0, 1, -1],
    [1, 0, 0, 1, -2, 0, -2, -1, 0, 0, 0, 0, 0, 0, 0, 1, 0, -1],
    [4, -3, 0, 0, 2, 0, -1, -4, 0, 0, 0, 0, 1, 0, 0, 0, 0, -2],
];
const BETA: [[i128; 18]; 6] = [
    [0, 0, 0, -1, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0],
    [-1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [-1, 0, 0, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, -1, 0, 0, 1, 0, 1, -1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [-1, 1, 0, 1, 0, 0, -1, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, -1, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0],
];

/// Published quotient for a solution, with slack values recomputed for our cusp list.
fn published(v: &[i128; 18]) -> GenEtaQuotient {
    quotient_of_solution(10, &v[..12])
}

#[test]
fn level_ten_generators_match_published_monoid() {
    let (sys, cs) = ge_inf_system_with_cusps(10);
    let (pointed, lineality) = hilbert_basis(&sys).unwrap();
    assert_eq!(pointed.len(), 5);
    assert_eq!(lineality.len(), 6);
    // published vectors lie in our monoid
    for v in ALPHA.iter().chain(BETA.iter()) {
        let x = solution_of_quotient(&published(v), 10, &cs).unwrap();
        assert!(sys.is_solution(&x));
        assert!(in_generated_monoid(&sys, &x, &pointed, &lineality), "{:?}", v);
    }
    // our generators lie in the published monoid
    let pa: Vec<Vector> = ALPHA.iter().map(|v| solution_of_quotient(&published(v), 10, &cs).unwrap()).collect();
    let pb: Vec<Vector> = BETA.iter().map(|v| solution_of_quotient(&published(v), 10, &cs).unwrap()).collect();
    for x in pointed.iter().chain(lineality.iter()) {
        assert!(in_generated_monoid(&sys, x, &pa, &pb));
    }
    for b in &BETA {
        assert!(is_constant_one(&published(b), 10).unwrap());
    }
    // the slack columns of the published vectors are a permutation of ours
    for (v, x) in ALPHA.iter().zip(&pa) {
        let mut a: Vec<i128> = v[12..17].to_vec();
        let mut b: Vec<i128> = x[12..17].to_vec();
        a.sort();
        b.sort();
        assert_eq!(a, b);
        assert_eq!(v[17], x[17]);
    }
    let gens = generators_ge_inf(10).unwrap();
    assert_eq!(gens.len(), 5);
    for a in &ALPHA {
        assert!(gens.iter().any(|g| g.quotient.same_function(&published(a))));
    }
}

#[test]
fn box_and_completion_agree() {
    for n in [2u64, 3, 4, 5, 6, 7, 8, 10] {
        let sys = ge_inf_system(n);
        let a = hilbert_basis_by(&sys, HilbertMethod::Completion).unwrap();
        if let Ok(b) = hilbert_basis_by(&sys, HilbertMethod::Box) { assert_eq!(a, b, "level {n}") }
    }
}

#[test]
fn level_eleven_has_27_generators() {
    let gens = generators_ge_inf(11).unwrap();
    assert_eq!(gens.len(), 27);
    for g in &gens {
        assert!(g.orders[..g.orders.len() - 1].iter().all(|o| !o.is_negative()));
    }
}

#[test]
fn level_one_constraint() {
    let sys = ge_inf_system(1);
    assert_eq!(layout(1).len(), 1);
    let (p, l) = hilbert_basis(&sys).unwrap();
    assert!(p.is_empty() && l.is_empty());
}

fn brute_solutions(sys: &DioSystem, r: i128) -> Vec<Vector> {
    let n = sys.nvars();
    let mut out = vec![];
    let mut x = vec![-r; n];
    loop {
        if sys.is_solution(&x) {
            out.push(x.clone());
        }
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            x[i] += 1;
            if x[i] > r {
                x[i] = -r;
                i += 1;
            } else {
                break;
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]
    #[test]
    fn hilbert_basis_sound_and_complete_in_box(
        rows in proptest::collection::vec(proptest::collection::vec(-3i128..=3, 3), 1..=2),
        mask in 1u8..8,
    ) {
        let nonneg: Vec<usize> = (0..3).filter(|i| mask & (1 << i) != 0).collect();
        let sys = DioSystem::new(rows, 3, nonneg);
        let (pointed, lineality) = hilbert_basis(&sys).unwrap();
        let (p2, l2) = hilbert_basis_by(&sys, HilbertMethod::Completion).unwrap();
        prop_assert_eq!(&pointed, &p2);
        prop_assert_eq!(&lineality, &l2);
        for g in pointed.iter().chain(lineality.iter()) {
            prop_assert!(sys.is_solution(g));
        }
        for x in brute_solutions(&sys, 6) {
            prop_assert!(in_generated_monoid(&sys, &x, &pointed, &lineality), "{:?} not generated", x);
        }
        // minimality: no pointed generator decomposes over the others
        for (i, g) in pointed.iter().enumerate() {
            let others: Vec<Vector> = pointed.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, v)| v.clone()).collect();
            prop_assert!(!in_generated_monoid(&sys, g, &others, &lineality));
        }
    }
}

/// Every solution whose orders at the finite cusps are at most 4 is generated.
/// Reachability is a breadth-first search over sums of generator order vectors,
/// independent of the decomposition routine.
#[test]
fn brute_force_completeness_up_to_level_12() {
    use etaid::lattice::{contains, echelon, kernel};
    use std::collections::HashSet;
    const R: i128 = 4;
    for n in 1..=12u64 {
        let sys = ge_inf_system(n);
        let (pointed, lineality) = hilbert_basis(&sys).unwrap();
        let nv = sys.nvars();
        let proj = |v: &Vector| -> Vector { sys.nonneg.iter().map(|&i| v[i]).collect() };
        for g in pointed.iter().chain(&lineality) {
            assert!(sys.is_solution(g));
        }
        for l in &lineality {
            assert!(proj(l).iter().all(|&x| x == 0));
        }

        let c = sys.nonneg.len();
        let steps: Vec<Vector> = pointed.iter().map(proj).collect();
        assert!(steps.iter().all(|s| s.iter().any(|&x| x > 0)), "N={n}: generator without a pole-free order");
        let mut reached: HashSet<Vector> = HashSet::from([vec![0; c]]);
        let mut frontier = vec![vec![0; c]];
        while let Some(y) = frontier.pop() {
            for s in &steps {
                let z: Vector = y.iter().zip(s).map(|(a, b)| a + b).collect();
                if z.iter().all(|&x| x <= R) && reached.insert(z.clone()) {
                    frontier.push(z);
                }
            }
        }

        let ker = kernel(&sys.equalities, nv);
        let projected = echelon(&ker.iter().map(proj).collect::<Vec<_>>(), c);
        let mut y = vec![0i128; c];
        loop {
            if contains(&y, &projected) {
                assert!(reached.contains(&y), "N={n}: order vector {y:?} is not generated");
            }
            let mut i = 0;
            while i < c && y[i] == R {
                y[i] = 0;
                i += 1;
            }
            if i == c {
                break;
            }
            y[i] += 1;
        }

        // solutions with no finite-cusp orders are exactly the lineality lattice
        let mut eqs = sys.equalities.clone();
        for &i in &sys.nonneg {
            let mut row = vec![0; nv];
            row[i] = 1;
            eqs.push(row);
        }
        let zero_orders = kernel(&eqs, nv);
        let lin = echelon(&lineality, nv);
        let zo = echelon(&zero_orders, nv);
        assert!(zero_orders.iter().all(|v| contains(v, &lin)), "N={n}");
        assert!(lineality.iter().all(|v| contains(v, &zo)), "N={n}");
    }
}
