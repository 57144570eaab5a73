//! Cusps of Gamma1(N), widths, orders of generalized eta-quotients at cusps,
//! and the maps `p`, `p*` bounding orders of `F = phi g_(m,t)`.

use std::fmt;

use num_integer::Integer;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::arith::{bernoulli_p2, divisors, ext_gcd, from_r64, gcd, q, qi, Q};
use crate::etaquot::{GenEtaQuotient, PartitionFunctionSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SL2Matrix {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl SL2Matrix {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        assert_eq!(a * d - b * c, 1, "determinant must be 1");
        SL2Matrix { a, b, c, d }
    }

    pub fn identity() -> Self {
        SL2Matrix { a: 1, b: 0, c: 0, d: 1 }
    }

    pub fn mul(&self, o: &SL2Matrix) -> SL2Matrix {
        SL2Matrix {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    /// Image of infinity as a cusp.
    pub fn cusp(&self) -> Cusp {
        Cusp::new(self.a, self.c)
    }
}

/// `a/c` in lowest terms with `c >= 0`; `c = 0` is infinity (stored as `1/0`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cusp {
    pub a: i64,
    pub c: i64,
}

impl Cusp {
    pub fn new(a: i64, c: i64) -> Self {
        assert!(a != 0 || c != 0);
        if c == 0 {
            return Cusp { a: 1, c: 0 };
        }
        let g = gcd(a, c);
        let (mut a, mut c) = (a / g, c / g);
        if c < 0 {
            a = -a;
            c = -c;
        }
        Cusp { a, c }
    }

    pub fn infinity() -> Self {
        Cusp { a: 1, c: 0 }
    }

    pub fn is_infinity(&self) -> bool {
        self.c == 0
    }

    /// A matrix in SL2(Z) sending infinity to this cusp, completed by the
    /// extended gcd with the smallest `|b|`.
    pub fn matrix(&self) -> SL2Matrix {
        if self.is_infinity() {
            return SL2Matrix::identity();
        }
        let (a, c) = (self.a, self.c);
        let (_, x, y) = ext_gcd(a, c);
        // a x + c y = 1, so d = x, b = -y
        let (mut b, mut d) = (-y, x);
        if a != 0 {
            let k = -(b as f64 / a as f64).round() as i64;
            let mut best = (b + k * a, d + k * c);
            for kk in [k - 1, k + 1] {
                let cand = (b + kk * a, d + kk * c);
                if cand.0.abs() < best.0.abs() {
                    best = cand;
                }
            }
            b = best.0;
            d = best.1;
        } else {
            d = 0;
        }
        SL2Matrix::new(a, b, c, d)
    }
}

impl fmt::Display for Cusp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinity() {
            write!(f, "∞")
        } else if self.a == 0 {
            write!(f, "0")
        } else {
            write!(f, "{}/{}", self.a, self.c)
        }
    }
}

/// Gamma1(N)-equivalence of cusps.
pub fn equivalent(n: i64, s: Cusp, t: Cusp) -> bool {
    let g = gcd(s.c, n);
    if g != gcd(t.c, n) {
        return false;
    }
    [1i64, -1].iter().any(|&e| (t.c - e * s.c).rem_euclid(n) == 0 && (t.a - e * s.a).rem_euclid(g) == 0)
}

/// A cusp together with the data used by the order formulas.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CuspData {
    pub cusp: Cusp,
    pub alpha: SL2Matrix,
    pub width: i64,
    pub lambda: i64,
    pub mu: i64,
    pub eps: i64,
}

impl CuspData {
    pub fn to_json(&self) -> Value {
        json!({
            "cusp": self.cusp.to_string(),
            "width": self.width,
            "lambda": self.lambda,
            "mu": self.mu,
            "eps": self.eps,
            "alpha": [[self.alpha.a, self.alpha.b], [self.alpha.c, self.alpha.d]],
        })
    }
}

pub fn width(n: i64, s: Cusp) -> i64 {
    let g = gcd(s.c, n);
    if n == 4 && g == 2 {
        1
    } else {
        n / g
    }
}

/// An equivalent cusp `lambda/(mu eps)` with `eps | N` and
/// `gcd(lambda, N) = gcd(lambda, mu) = gcd(mu, N) = 1`.
pub fn lambda_mu_eps(n: i64, s: Cusp) -> (i64, i64, i64) {
    let eps = gcd(s.c, n);
    let bound = n * n;
    for mu in 1..=bound {
        if gcd(mu, n) != 1 {
            continue;
        }
        for lambda in 1..=bound {
            if gcd(lambda, n) != 1 || gcd(lambda, mu) != 1 {
                continue;
            }
            if equivalent(n, s, Cusp::new(lambda, mu * eps)) {
                return (lambda, mu, eps);
            }
        }
    }
    panic!("no lambda/(mu eps) form found for {s} at level {n}");
}

/// A complete set of inequivalent cusps of Gamma1(N); infinity is last.
pub fn cusps(n: u64) -> Vec<CuspData> {
    let n = n as i64;
    let mut reps: Vec<Cusp> = vec![];
    let inf = Cusp::infinity();
    for c in 1..=n {
        for a in 0..c {
            if gcd(a, c) != 1 {
                continue;
            }
            let s = Cusp::new(a, c);
            if equivalent(n, s, inf) || reps.iter().any(|&r| equivalent(n, r, s)) {
                continue;
            }
            reps.push(s);
        }
    }
    reps.push(inf);
    reps.into_iter()
        .map(|s| {
            let (lambda, mu, eps) = lambda_mu_eps(n, s);
            CuspData { cusp: s, alpha: s.matrix(), width: width(n, s), lambda, mu, eps }
        })
        .collect()
}

/// Order of `h` at the cusp `lambda/(mu eps)` of Gamma1(N), by Robins' formula.
pub fn order_geq_at(h: &GenEtaQuotient, n: i64, lambda: i64, eps: i64) -> Q {
    let mut total = Q::zero();
    let mut term = |d: i64, g: i64, a: Q| {
        let gd = gcd(d, eps);
        let f = q(gd * gd, d * eps);
        total += f * bernoulli_p2(&q(lambda * g, gd)) * a;
    };
    for (&d, &e) in &h.a {
        assert!(n % d as i64 == 0, "{d} does not divide {n}");
        term(d as i64, 0, q(e, 2));
    }
    for (&(d, g), &e) in &h.ag {
        assert!(n % d as i64 == 0, "{d} does not divide {n}");
        term(d as i64, g as i64, from_r64(e));
    }
    total * q(n, 2)
}

pub fn order_geq_at_cusp(h: &GenEtaQuotient, n: u64, s: &CuspData) -> Q {
    order_geq_at(h, n as i64, s.lambda, s.eps)
}

/// `p(gamma) = min_lambda p(gamma, lambda)`.
pub fn p_gamma(spec: &PartitionFunctionSpec, m: u64, kappa: i64, gamma: &SL2Matrix) -> Q {
    (0..m as i64).map(|l| p_gamma_lambda(spec, m, kappa, gamma, l)).min().unwrap()
}

pub fn p_gamma_lambda(spec: &PartitionFunctionSpec, m: u64, kappa: i64, gamma: &SL2Matrix, lambda: i64) -> Q {
    let m = m as i64;
    let x = gamma.a + kappa * lambda * gamma.c;
    let mut s = Q::zero();
    for (&d, &r) in &spec.r {
        let d = d as i64;
        let g = gcd(d * x, m * gamma.c);
        s += q(g * g, d * m) * qi(r) / qi(24);
    }
    for (&(d, gg), &r) in &spec.rg {
        let d = d as i64;
        let g = gcd(d * x, m * gamma.c);
        s += q(g * g, d * m) * bernoulli_p2(&q(x * gg as i64, g)) * qi(r) / qi(2);
    }
    s
}

pub fn p_star(phi: &GenEtaQuotient, gamma: &SL2Matrix) -> Q {
    let c = phi.canonicalize().expect("phi must have integral canonical exponents");
    let mut s = Q::zero();
    for (&d, &e) in &c.a {
        let g = gcd(d as i64, gamma.c);
        s += q(g * g, d as i64) * qi(e) / qi(24);
    }
    for (&(d, gg), e) in &c.ag {
        let g = gcd(d as i64, gamma.c);
        s += q(g * g, d as i64) * bernoulli_p2(&q(gamma.a * gg as i64, g)) * from_r64(*e) / qi(2);
    }
    s
}

pub fn kappa(m: u64) -> i64 {
    let m = m as i64;
    gcd(m * m - 1, 24)
}

/// Lower bounds `w (p(alpha) + p*(alpha))` for the orders of `phi g_(m,t)`
/// at every cusp of Gamma1(N).
pub fn order_lower_bounds(spec: &PartitionFunctionSpec, m: u64, _t: u64, phi: &GenEtaQuotient, n: u64) -> Vec<(CuspData, Q)> {
    let k = kappa(m);
    cusps(n)
        .into_iter()
        .map(|s| {
            let b = qi(s.width) * (p_gamma(spec, m, k, &s.alpha) + p_star(phi, &s.alpha));
            (s, b)
        })
        .collect()
}

/// Orders of `h` at all cusps of Gamma1(N), in the order of [`cusps`].
pub fn orders_at_all_cusps(h: &GenEtaQuotient, n: u64) -> Vec<Q> {
    cusps(n).iter().map(|s| order_geq_at_cusp(h, n, s)).collect()
}

pub fn divisors_i(n: i64) -> Vec<i64> {
    divisors(n as u64).into_iter().map(|d| d as i64).collect()
}

/// Random-free helper: an element of Gamma1(N) with given lower-left entry
/// and upper-left entry congruent to one, when one exists.
pub fn gamma1_element(n: i64, a: i64, c: i64) -> Option<SL2Matrix> {
    if a.rem_euclid(n) != 1 % n || c.rem_euclid(n) != 0 || a.gcd(&c) != 1 {
        return None;
    }
    let (_, x, y) = ext_gcd(a, c);
    Some(SL2Matrix::new(a, -y, c, x))
}
