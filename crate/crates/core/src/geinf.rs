//! Generators of GE∞(N): generalized eta-quotients that are modular
//! functions for Gamma1(N) with poles only at infinity.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::arith::{bernoulli_p2, gcd, lcm_all, q, Q};
use crate::error::{Error, Result};
use crate::etaquot::{layout, GenEtaQuotient};
use crate::lattice::{self, Vector};
use crate::modular::{cusps, order_geq_at_cusp, Cusp, CuspData};
use crate::qseries::QSeries;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VarLabel {
    /// `a'_(d,g) = chi_d(g) a_(d,g)`.
    Exponent { d: u64, g: u64 },
    /// Order of the quotient at a cusp.
    Slack { cusp: Cusp },
    Plain(usize),
}

impl fmt::Display for VarLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarLabel::Exponent { d, g } => write!(f, "a'[{d},{g}]"),
            VarLabel::Slack { cusp } => write!(f, "y[{cusp}]"),
            VarLabel::Plain(i) => write!(f, "x{i}"),
        }
    }
}

/// Homogeneous system `A x = 0` with `x_i >= 0` for `i` in `nonneg`.
#[derive(Clone, Debug)]
pub struct DioSystem {
    pub equalities: Vec<Vector>,
    pub nonneg: Vec<usize>,
    pub free: Vec<usize>,
    pub labels: Vec<VarLabel>,
}

impl DioSystem {
    pub fn new(equalities: Vec<Vector>, nvars: usize, nonneg: Vec<usize>) -> Self {
        let free = (0..nvars).filter(|i| !nonneg.contains(i)).collect();
        DioSystem { equalities, nonneg, free, labels: (0..nvars).map(VarLabel::Plain).collect() }
    }

    pub fn nvars(&self) -> usize {
        self.labels.len()
    }

    pub fn is_solution(&self, x: &[i128]) -> bool {
        lattice::mat_vec(&self.equalities, x).iter().all(|&v| v == 0) && self.nonneg.iter().all(|&i| x[i] >= 0)
    }
}

pub fn chi(d: u64, g: u64) -> i64 {
    if g == 0 || 2 * g == d {
        2
    } else {
        1
    }
}

/// Coefficients of the order at `s` as a linear form in `a'` over `layout(N)`.
pub fn order_form(n: u64, s: &CuspData) -> Vec<Q> {
    let (ni, eps, lambda) = (n as i64, s.eps, s.lambda);
    layout(n)
        .into_iter()
        .map(|(d, g)| {
            let d = d as i64;
            let gd = gcd(d, eps);
            q(ni * gd * gd, 2 * d * eps) * bernoulli_p2(&q(lambda * g as i64, gd)) / Q::from_integer(chi(d as u64, g).into())
        })
        .collect()
}

/// The GE∞(N) system and the cusps whose slack variables it carries (infinity last).
pub fn ge_inf_system_with_cusps(n: u64) -> (DioSystem, Vec<CuspData>) {
    let lay = layout(n);
    let k = lay.len();
    let all = cusps(n);
    let mut kept: Vec<(CuspData, Vec<Q>)> = vec![];
    for s in &all {
        let f = order_form(n, s);
        if !s.cusp.is_infinity() && kept.iter().any(|(t, g)| !t.cusp.is_infinity() && *g == f) {
            continue;
        }
        kept.push((s.clone(), f));
    }
    let width = k + kept.len();
    let mut eqs = vec![];
    let mut first: Vector = lay.iter().map(|&(_, g)| i128::from(g == 0)).collect();
    first.resize(width, 0);
    eqs.push(first);
    for (i, (_, f)) in kept.iter().enumerate() {
        let l = lcm_all(f.iter().map(|c| c.denom().clone()));
        let lq = Q::from_integer(l.clone());
        let mut row: Vector = f.iter().map(|c| (c * &lq).to_integer().to_i128().unwrap()).collect();
        row.resize(width, 0);
        row[k + i] = -l.to_i128().unwrap();
        eqs.push(row);
    }
    let mut labels: Vec<VarLabel> = lay.iter().map(|&(d, g)| VarLabel::Exponent { d, g }).collect();
    labels.extend(kept.iter().map(|(s, _)| VarLabel::Slack { cusp: s.cusp }));
    let nonneg: Vec<usize> = kept.iter().enumerate().filter(|(_, (s, _))| !s.cusp.is_infinity()).map(|(i, _)| k + i).collect();
    let free = (0..width).filter(|i| !nonneg.contains(i)).collect();
    let cs = kept.into_iter().map(|(s, _)| s).collect();
    (DioSystem { equalities: eqs, nonneg, free, labels }, cs)
}

pub fn ge_inf_system(n: u64) -> DioSystem {
    ge_inf_system_with_cusps(n).0
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HilbertMethod {
    /// Fundamental-box enumeration when the projected lattice has full rank,
    /// completion otherwise.
    Auto,
    Completion,
    Box,
}

/// `(pointed, lineality)`: every solution is an N-combination of `pointed`
/// plus a Z-combination of `lineality`.
pub fn hilbert_basis(sys: &DioSystem) -> Result<(Vec<Vector>, Vec<Vector>)> {
    hilbert_basis_by(sys, HilbertMethod::Auto)
}

pub fn hilbert_basis_by(sys: &DioSystem, method: HilbertMethod) -> Result<(Vec<Vector>, Vec<Vector>)> {
    let n = sys.nvars();
    let ker = lattice::kernel(&sys.equalities, n);
    let p = sys.nonneg.len();
    let proj = |v: &Vector| -> Vector { sys.nonneg.iter().map(|&i| v[i]).collect() };
    let pk: Vec<Vector> = ker.iter().map(proj).collect();
    // columns are the projected kernel vectors
    let pmat: Vec<Vector> = (0..p).map(|r| pk.iter().map(|v| v[r]).collect()).collect();
    let lin_coords = lattice::kernel(&pmat, ker.len());
    let combine = |c: &Vector| -> Vector {
        let mut x = vec![0i128; n];
        for (cj, kj) in c.iter().zip(&ker) {
            for (xi, ki) in x.iter_mut().zip(kj) {
                *xi += cj * ki;
            }
        }
        x
    };
    let lineality = lattice::echelon_trailing(&lin_coords.iter().map(combine).collect::<Vec<_>>(), n);
    let lam = lattice::echelon(&pk, p);
    let full = lam.len() == p;
    let hb = match method {
        HilbertMethod::Box if !full => return Err(Error::Diagnostic("box method needs a full-rank lattice".into())),
        HilbertMethod::Box => orthant_minimal_box(&lam, p),
        HilbertMethod::Auto if full => orthant_minimal_box(&lam, p),
        _ => orthant_minimal_completion(&lam),
    };
    let mut pointed = vec![];
    for y in hb {
        let c = lattice::solve(&pmat, ker.len(), &y).ok_or(Error::Infeasible)?;
        let x = lattice::reduce_trailing(&combine(&c), &lineality);
        debug_assert!(sys.is_solution(&x));
        pointed.push(x);
    }
    pointed.sort();
    Ok((pointed, lineality))
}

fn leq(a: &Vector, b: &Vector) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn keep_minimal(mut cands: Vec<Vector>) -> Vec<Vector> {
    cands.sort_by_key(|v| (v.iter().sum::<i128>(), v.clone()));
    cands.dedup();
    let mut out: Vec<Vector> = vec![];
    for c in cands {
        if c.iter().all(|&x| x == 0) {
            continue;
        }
        if !out.iter().any(|o| leq(o, &c)) {
            out.push(c);
        }
    }
    out
}

/// Minimal nonzero points of `L ∩ N^p` for a full-rank lattice `L` (echelon
/// basis): they lie in the box `[0, k_i)` or are `k_i e_i`, where `k_i` is
/// the least positive multiple of `e_i` in `L`.
pub fn orthant_minimal_box(ech: &[Vector], p: usize) -> Vec<Vector> {
    assert_eq!(ech.len(), p);
    let det: i128 = ech.iter().enumerate().map(|(i, r)| r[i]).product();
    let mut ks = vec![];
    for i in 0..p {
        let mut e = vec![0i128; p];
        let k = (1..=det)
            .find(|&k| {
                e[i] = k;
                lattice::contains(&e, ech)
            })
            .unwrap();
        ks.push(k);
    }
    let mut cands: Vec<Vector> = (0..p)
        .map(|i| {
            let mut e = vec![0i128; p];
            e[i] = ks[i];
            e
        })
        .collect();
    // lattice points with 0 <= x_i < k_i; row i fixes coordinate i
    fn go(i: usize, cur: &mut Vector, ech: &[Vector], ks: &[i128], out: &mut Vec<Vector>) {
        if i == ech.len() {
            out.push(cur.clone());
            return;
        }
        let piv = ech[i][i];
        let x = cur[i];
        let lo = (-x).div_euclid(piv) + i128::from((-x).rem_euclid(piv) != 0);
        let hi = (ks[i] - 1 - x).div_euclid(piv);
        for c in lo..=hi {
            for (y, e) in cur.iter_mut().zip(&ech[i]) {
                *y += c * e;
            }
            go(i + 1, cur, ech, ks, out);
            for (y, e) in cur.iter_mut().zip(&ech[i]) {
                *y -= c * e;
            }
        }
    }
    let mut cur = vec![0i128; p];
    go(0, &mut cur, ech, &ks, &mut cands);
    keep_minimal(cands)
}

fn conformal(g: &Vector, s: &Vector) -> bool {
    g.iter().zip(s).all(|(&a, &b)| a == 0 || (a * b > 0 && a.abs() <= b.abs()))
}

fn normal_form(mut s: Vector, basis: &[Vector]) -> Vector {
    loop {
        if s.iter().all(|&x| x == 0) {
            return s;
        }
        match basis.iter().find(|g| conformal(g, &s)) {
            Some(g) => {
                for (a, b) in s.iter_mut().zip(g) {
                    *a -= b;
                }
            }
            None => return s,
        }
    }
}

/// Graver basis of the lattice by completion: sums of pairs are reduced by
/// conformal subtraction and kept when a remainder survives.
pub fn graver_basis(ech: &[Vector]) -> Vec<Vector> {
    let mut g: Vec<Vector> = vec![];
    for v in ech {
        g.push(v.clone());
        g.push(v.iter().map(|x| -x).collect());
    }
    let mut pairs: Vec<(usize, usize)> = vec![];
    for i in 0..g.len() {
        for j in 0..i {
            pairs.push((j, i));
        }
    }
    let mut seen: HashSet<Vector> = g.iter().cloned().collect();
    while let Some((i, j)) = pairs.pop() {
        let (f, h) = (&g[i], &g[j]);
        // sign-compatible pairs reduce to zero
        if f.iter().zip(h).all(|(a, b)| a * b >= 0) {
            continue;
        }
        let s: Vector = f.iter().zip(h).map(|(a, b)| a + b).collect();
        let r = normal_form(s, &g);
        if r.iter().any(|&x| x != 0) && seen.insert(r.clone()) {
            let k = g.len();
            g.push(r);
            for t in 0..k {
                pairs.push((t, k));
            }
        }
    }
    g
}

/// Minimal nonzero points of `L ∩ N^p`: the nonnegative Graver elements.
pub fn orthant_minimal_completion(ech: &[Vector]) -> Vec<Vector> {
    let g = graver_basis(ech);
    keep_minimal(g.into_iter().filter(|v| v.iter().all(|&x| x >= 0)).collect())
}

/// A generator of GE∞(N) with its cusp orders (in the order of [`cusps`]).
#[derive(Clone, Debug)]
pub struct Generator {
    pub quotient: GenEtaQuotient,
    pub orders: Vec<Q>,
    /// Order at infinity, i.e. minus the pole order.
    pub ord_inf: i64,
}

impl Generator {
    pub fn pole_order(&self) -> i64 {
        -self.ord_inf
    }

    pub fn expansion(&self, bound: i64) -> QSeries {
        self.quotient.expansion(Rational64::from_integer(bound)).expect("generator exponents are integral")
    }

    pub fn to_json(&self) -> Value {
        json!({
            "quotient": self.quotient.to_string(),
            "exponents": self.quotient.to_json(),
            "ord_inf": self.ord_inf,
            "orders": self.orders.iter().map(|o| o.to_string()).collect::<Vec<_>>(),
        })
    }
}

/// Quotient for a solution of the GE∞ system (exponent part unscaled by chi).
pub fn quotient_of_solution(n: u64, x: &[i128]) -> GenEtaQuotient {
    let mut h = GenEtaQuotient::one(n);
    for (&(d, g), &v) in layout(n).iter().zip(x) {
        if v != 0 {
            h.ag.insert((d, g), Rational64::new(v as i64, chi(d, g)));
        }
    }
    h
}

/// Three independent constancy tests; they must agree.
pub fn is_constant_one(h: &GenEtaQuotient, n: u64) -> Result<bool> {
    let by_relations = h.is_identically_one();
    let by_series = h.expansion(Rational64::from_integer(50))? == QSeries::one().truncate(Rational64::from_integer(50));
    let by_orders = cusps(n).iter().all(|s| order_geq_at_cusp(h, n, s).is_zero());
    if by_relations != by_series || by_series != by_orders {
        return Err(Error::Diagnostic(format!(
            "constancy checks disagree for {h}: relations {by_relations}, series {by_series}, orders {by_orders}"
        )));
    }
    Ok(by_series)
}

pub fn make_generator(h: GenEtaQuotient, n: u64) -> Generator {
    let orders: Vec<Q> = cusps(n).iter().map(|s| order_geq_at_cusp(&h, n, s)).collect();
    let inf = orders.last().unwrap();
    assert!(inf.is_integer(), "order at infinity of {h} is not integral");
    let ord_inf = inf.to_integer().to_i64().unwrap();
    Generator { quotient: h, orders, ord_inf }
}

/// Generators of GE∞(N): constants dropped, normalized modulo the relations
/// among eta functions, sorted by order at infinity descending then by
/// exponent vector.
pub fn generators_ge_inf(n: u64) -> Result<Vec<Generator>> {
    let sys = ge_inf_system(n);
    let (pointed, lineality) = hilbert_basis(&sys)?;
    for b in &lineality {
        let h = quotient_of_solution(n, b);
        if !is_constant_one(&h, n)? {
            return Err(Error::Diagnostic(format!("lineality generator {h} is not constant")));
        }
    }
    let mut out = vec![];
    for x in pointed {
        let h = quotient_of_solution(n, &x);
        if is_constant_one(&h, n)? {
            continue;
        }
        let h = h.normalized(n)?;
        out.push(make_generator(h, n));
    }
    out.sort_by(|a, b| {
        b.ord_inf.cmp(&a.ord_inf).then_with(|| {
            let va = a.quotient.canonical_vector(n).unwrap();
            let vb = b.quotient.canonical_vector(n).unwrap();
            va.cmp(&vb)
        })
    });
    Ok(out)
}

/// Solution vector (a' then slacks) of a quotient, for membership checks.
pub fn solution_of_quotient(h: &GenEtaQuotient, n: u64, cs: &[CuspData]) -> Result<Vector> {
    let lay = layout(n);
    let mut x: Vector = vec![0; lay.len() + cs.len()];
    let mut ag: BTreeMap<(u64, u64), Rational64> = h.ag.clone();
    for (&d, &e) in &h.a {
        *ag.entry((d, 0)).or_insert_with(Rational64::zero) += Rational64::new(e, 2);
    }
    for ((d, g), e) in ag {
        let i = lay.iter().position(|&k| k == (d, g)).ok_or_else(|| Error::Diagnostic(format!("{d} does not divide {n}")))?;
        let v = e * Rational64::from_integer(chi(d, g));
        if !v.is_integer() {
            return Err(Error::NonIntegralPower(format!("eta[{d},{g}]^{e}")));
        }
        x[i] = v.to_integer() as i128;
    }
    for (j, s) in cs.iter().enumerate() {
        let o = order_geq_at_cusp(h, n, s);
        if !o.is_integer() {
            return Err(Error::NotMember(format!("order {o} at {} is not integral", s.cusp)));
        }
        x[lay.len() + j] = o.to_integer().to_i128().unwrap();
    }
    Ok(x)
}

/// Decompose `y >= 0` as an N-combination of `gens` (all nonnegative).
pub fn monoid_decompose(y: &Vector, gens: &[Vector]) -> Option<Vec<u64>> {
    fn go(y: &Vector, gens: &[Vector], start: usize, u: &mut Vec<u64>, dead: &mut HashSet<(Vector, usize)>) -> bool {
        if y.iter().all(|&v| v == 0) {
            return true;
        }
        if dead.contains(&(y.clone(), start)) {
            return false;
        }
        for i in start..gens.len() {
            let g = &gens[i];
            if g.iter().all(|&v| v == 0) || !leq(g, y) {
                continue;
            }
            let r: Vector = y.iter().zip(g).map(|(a, b)| a - b).collect();
            u[i] += 1;
            if go(&r, gens, i, u, dead) {
                return true;
            }
            u[i] -= 1;
        }
        dead.insert((y.clone(), start));
        false
    }
    let mut u = vec![0u64; gens.len()];
    let mut dead = HashSet::new();
    if go(y, gens, 0, &mut u, &mut dead) {
        Some(u)
    } else {
        None
    }
}

/// True when the solution `x` lies in the monoid generated by `pointed`
/// (nonnegative coefficients) and `lineality` (integer coefficients).
pub fn in_generated_monoid(sys: &DioSystem, x: &Vector, pointed: &[Vector], lineality: &[Vector]) -> bool {
    let proj = |v: &Vector| -> Vector { sys.nonneg.iter().map(|&i| v[i]).collect() };
    let py: Vec<Vector> = pointed.iter().map(proj).collect();
    let Some(u) = monoid_decompose(&proj(x), &py) else { return false };
    let mut r = x.clone();
    for (ui, g) in u.iter().zip(pointed) {
        for (a, b) in r.iter_mut().zip(g) {
            *a -= *ui as i128 * b;
        }
    }
    lattice::contains(&r, &lattice::echelon(lineality, x.len()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_systems() {
        let sys = DioSystem::new(vec![], 1, vec![0]);
        let (p, l) = hilbert_basis(&sys).unwrap();
        assert_eq!(p, vec![vec![1]]);
        assert!(l.is_empty());
        let (sys, _) = ge_inf_system_with_cusps(1);
        assert_eq!(sys.nvars(), 2);
        let (p, l) = hilbert_basis(&sys).unwrap();
        assert!(p.is_empty() && l.is_empty());
    }

    #[test]
    fn level_ten_system_shape() {
        let (sys, cs) = ge_inf_system_with_cusps(10);
        assert_eq!(sys.nvars(), 18);
        assert_eq!(cs.len(), 6);
        // cusp 0 row: 5/12 a'_(1,0) + 5/24 a'_(2,0) + ...
        let zero = cs.iter().position(|s| s.cusp == Cusp::new(0, 1)).unwrap();
        let f = order_form(10, &cs[zero]);
        assert_eq!(f[0], q(5, 12));
        assert_eq!(f[1], q(5, 24));
        assert_eq!(f[2], q(5, 24));
    }
}
