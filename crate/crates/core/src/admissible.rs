//! Choice of the level `N` and of the prefactor `phi` making
//! `F = phi g_(m,t)` a modular function for Gamma1(N).

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::arith::{as_int, bernoulli_p2, divisors, gcd, jacobi, prime_factors, q, qi, Q};
use crate::error::{Error, Result};
use crate::etaquot::{layout, GenEtaQuotient, PartitionFunctionSpec};
use crate::lattice::{self, Vector};
use crate::modular::kappa;

pub const DEFAULT_PHI_BOX: i64 = 32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Condition {
    pub label: String,
    pub pass: bool,
    /// The offending value when the condition fails.
    pub residue: Option<String>,
}

impl Condition {
    fn new(label: &str, pass: bool, residue: impl FnOnce() -> String) -> Self {
        Condition { label: label.to_string(), pass, residue: if pass { None } else { Some(residue()) } }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibilityReport {
    pub n: u64,
    pub kappa: i64,
    pub alpha_t: BigInt,
    pub extended: bool,
    pub conditions: Vec<Condition>,
}

impl AdmissibilityReport {
    pub fn passes(&self) -> bool {
        self.conditions.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "N": self.n,
            "kappa": self.kappa,
            "alpha_t": self.alpha_t.to_string(),
            "extended": self.extended,
            "conditions": self.conditions.iter().map(|c| json!({
                "condition": c.label, "pass": c.pass, "residue": c.residue,
            })).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for AdmissibilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "N = {}, kappa = {}, alpha(t) = {}", self.n, self.kappa, self.alpha_t)?;
        for c in &self.conditions {
            match &c.residue {
                None => writeln!(f, "  condition {}: pass", c.label)?,
                Some(r) => writeln!(f, "  condition {}: FAIL ({r})", c.label)?,
            }
        }
        Ok(())
    }
}

fn divides_q(x: &Q, m: i64) -> bool {
    as_int(x).is_some_and(|v| v.is_multiple_of(&BigInt::from(m)))
}

fn sum_d_r(spec: &PartitionFunctionSpec) -> Q {
    spec.r.iter().map(|(&d, &e)| qi(d as i64 * e)).sum()
}

/// `sum d P2(g/d) r_(d,g)` over the generalized part of the spec.
fn sum_d_p2_rg(spec: &PartitionFunctionSpec) -> Q {
    spec.rg.iter().map(|(&(d, g), &e)| qi(d as i64) * bernoulli_p2(&q(g as i64, d as i64)) * qi(e)).sum()
}

/// `alpha(t)`; the generalized definition carries an extra factor `M`.
pub fn alpha_t(spec: &PartitionFunctionSpec, t: u64) -> BigInt {
    let mm = spec.m as i64;
    let v = if spec.is_extended() {
        -qi(mm) * sum_d_r(spec) - qi(12 * mm) * sum_d_p2_rg(spec) - qi(24 * mm * t as i64)
    } else {
        -sum_d_r(spec) - qi(24 * t as i64)
    };
    as_int(&v).expect("alpha(t) is an integer")
}

/// `S_n = { j^2 mod n : gcd(j, n) = 1, j = 1 mod N }`.
pub fn squares_set(n_mod: u64, level: u64) -> Vec<u64> {
    let mut s: Vec<u64> = (0..n_mod)
        .filter(|&j| j.gcd(&n_mod) == 1 && j % level == 1 % level)
        .map(|j| (j as u128 * j as u128 % n_mod as u128) as u64)
        .collect();
    s.sort_unstable();
    s.dedup();
    s
}

pub fn check_n(spec: &PartitionFunctionSpec, m: u64, t: u64, n: u64) -> AdmissibilityReport {
    assert!(m >= 1 && t < m, "need m >= 1 and 0 <= t < m");
    let k = kappa(m);
    let ext = spec.is_extended();
    let mm = spec.m;
    let (ni, mi) = (n as i64, m as i64);
    let alpha = alpha_t(spec, t);
    let mut conds = vec![];
    let mut push = |ext_label: &str, plain_label: &str, pass: bool, residue: &dyn Fn() -> String| {
        let label = if ext { ext_label } else { plain_label };
        conds.push(Condition::new(label, pass, residue));
    };

    push("1", "1", n.is_multiple_of(mm), &|| format!("M = {mm} does not divide N = {n}"));
    let bad: Vec<u64> = prime_factors(m).into_iter().filter(|p| !n.is_multiple_of(*p)).collect();
    push("2", "2", bad.is_empty(), &|| format!("primes {bad:?} of m do not divide N"));

    if ext {
        let s3: Q = spec.rg.iter().map(|(&(d, g), &e)| q(g as i64, d as i64) * qi(e)).sum::<Q>() * qi(k * ni);
        push("3", "", divides_q(&s3, 2), &|| format!("{s3} is not 0 mod 2"));
        let s4: i64 = spec.rg.values().sum::<i64>() * k * ni;
        push("4", "", s4 % 4 == 0, &|| format!("{s4} is not 0 mod 4"));
        let s5: Q = spec.rg.iter().map(|(&(d, _), &e)| q(e, d as i64)).sum::<Q>() * qi(k * mi) * qi(ni * ni);
        push("5", "", divides_q(&s5, 12), &|| format!("{s5} is not 0 mod 12"));
    }

    let s6 = spec.r.values().sum::<i64>() * k * ni;
    push("6", "3", s6 % 8 == 0, &|| format!("{s6} is not 0 mod 8"));
    let s7: Q = spec.r.iter().map(|(&d, &e)| q(e, d as i64)).sum::<Q>() * qi(k * mi) * qi(ni * ni);
    push("7", "4", divides_q(&s7, 24), &|| format!("{s7} is not 0 mod 24"));

    let big = BigInt::from(24 * m * if ext { mm } else { 1 });
    let need = &big / (BigInt::from(k) * &alpha).gcd(&big);
    push("8", "5", BigInt::from(n).is_multiple_of(&need), &|| format!("{need} does not divide N"));

    if m.is_multiple_of(2) {
        let mut z = 0i64;
        let mut j8 = 1i64;
        for (&d, &e) in &spec.r {
            let v = d.trailing_zeros() as i64;
            z += v * e.abs();
            let odd = (d >> v) as i64 % 8;
            for _ in 0..e.abs() % 2 {
                j8 = j8 * odd % 8;
            }
        }
        let ok = (k * ni % 4 == 0 && ni * z % 8 == 0) || (z % 2 == 0 && ni * (j8 - 1) % 8 == 0);
        push("9", "6", ok, &|| format!("z = {z}, j = {j8} mod 8"));
    } else {
        push("9", "6", true, &String::new);
    }

    let modulus = 24 * m * mm;
    let sdr = sum_d_r(spec);
    let sp2 = sum_d_p2_rg(spec) / qi(2);
    let mut failing = None;
    for s in squares_set(modulus, n) {
        let s1 = qi(s as i64 - 1);
        let v = &s1 / qi(24) * &sdr + &s1 * &sp2 + qi(t as i64 * s as i64) - qi(t as i64);
        if !divides_q(&v, mi) {
            failing = Some((s, v));
            break;
        }
    }
    push("10", "7", failing.is_none(), &|| {
        let (s, v) = failing.clone().unwrap();
        format!("s = {s}: difference {v} is not 0 mod {m}")
    });

    AdmissibilityReport { n, kappa: k, alpha_t: alpha, extended: ext, conditions: conds }
}

pub fn find_n(spec: &PartitionFunctionSpec, m: u64, t: u64) -> u64 {
    let top = 24 * m * spec.m;
    divisors(top).into_iter().find(|&n| check_n(spec, m, t, n).passes()).unwrap_or(top)
}

/// Exponent vector of `phi` over [`layout`]`(N)`: entry `(d, 0)` is the
/// exponent of `eta(d t)`, entry `(d, g)` that of `eta[d,g]`.
pub fn phi_vector(phi: &GenEtaQuotient, n: u64) -> Result<Vec<i64>> {
    let lay = layout(n);
    let mut v = vec![0i64; lay.len()];
    let idx = |key: (u64, u64)| lay.iter().position(|&k| k == key);
    for (&d, &e) in &phi.a {
        let i = idx((d, 0)).ok_or_else(|| Error::InvalidSpec(format!("{d} does not divide {n}")))?;
        v[i] += e;
    }
    for (&(d, g), e) in &phi.ag {
        if !e.is_integer() {
            return Err(Error::NonIntegralPower(format!("eta[{d},{g}]^{e}")));
        }
        let e = e.to_integer();
        let i = idx((d, g)).ok_or_else(|| Error::InvalidSpec(format!("eta[{d},{g}] is not at level {n}")))?;
        v[i] += if g == 0 { 2 * e } else { e };
    }
    Ok(v)
}

pub fn phi_from_vector(n: u64, v: &[i64]) -> GenEtaQuotient {
    let lay = layout(n);
    let plain: Vec<(u64, i64)> = lay.iter().zip(v).filter(|((_, g), _)| *g == 0).map(|(&(d, _), &e)| (d, e)).collect();
    let gen: Vec<((u64, u64), i64)> = lay.iter().zip(v).filter(|((_, g), _)| *g > 0).map(|(&k, &e)| (k, e)).collect();
    GenEtaQuotient::from_parts(n, &plain, &gen)
}

/// The values `a` used by criterion (4).
pub fn criterion_units(n: u64) -> Vec<i64> {
    (1..12 * n as i64).filter(|&a| gcd(a, 6) == 1 && (a - 1) % n as i64 == 0).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiReport {
    pub conditions: Vec<Condition>,
}

impl PhiReport {
    pub fn passes(&self) -> bool {
        self.conditions.iter().all(|c| c.pass)
    }
}

impl fmt::Display for PhiReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.conditions {
            match &c.residue {
                None => writeln!(f, "  ({}) pass", c.label)?,
                Some(r) => writeln!(f, "  ({}) FAIL: {r}", c.label)?,
            }
        }
        Ok(())
    }
}

/// Value of criterion (2) at `phi`.
fn crit2(spec: &PartitionFunctionSpec, m: u64, n: u64, v: &[i64]) -> Q {
    let (ni, mi) = (n as i64, m as i64);
    let mut s = Q::zero();
    for (&(d, g), &e) in layout(n).iter().zip(v) {
        let c = if g == 0 { ni } else { 2 * ni };
        s += q(c * e, d as i64);
    }
    for (&d, &e) in &spec.r {
        s += q(ni * mi * e, d as i64);
    }
    for (&(d, _), &e) in &spec.rg {
        s += q(2 * ni * mi * e, d as i64);
    }
    s
}

/// Value of criterion (3) at `phi`.
fn crit3(spec: &PartitionFunctionSpec, m: u64, t: u64, n: u64, v: &[i64]) -> Q {
    let mi = m as i64;
    let mut s = Q::zero();
    for (&(d, g), &e) in layout(n).iter().zip(v) {
        if g == 0 {
            s += qi(d as i64 * e);
        } else {
            s += qi(12 * d as i64 * e) * bernoulli_p2(&q(g as i64, d as i64));
        }
    }
    s += qi(mi) * sum_d_r(spec) + qi(12 * mi) * sum_d_p2_rg(spec);
    let div = if spec.is_extended() { mi * spec.m as i64 } else { mi };
    s + Q::from_integer(alpha_t(spec, t) * BigInt::from(mi * mi - 1)) / qi(div)
}

/// Criterion (4) at one `a`, as `(s, r)` with value `(-1)^s e^(pi i r)`.
fn crit4_at(spec: &PartitionFunctionSpec, m: u64, n: u64, v: &[i64], a: i64) -> (i64, Q) {
    let mut sign = 1i64;
    let mut r = Q::zero();
    let a1 = qi(a - 1);
    for (&(d, g), &e) in layout(n).iter().zip(v) {
        if g == 0 {
            sign *= jacobi(d as i64, a).pow(e.unsigned_abs() as u32);
        } else {
            r += (q(g as i64, d as i64) - q(1, 2)) * &a1 * qi(e);
        }
    }
    for (&d, &e) in &spec.r {
        sign *= jacobi(m as i64 * d as i64, a).pow(e.unsigned_abs() as u32);
    }
    for (&(d, g), &e) in &spec.rg {
        r += (q(g as i64, d as i64) - q(1, 2)) * &a1 * qi(e);
    }
    (i64::from(sign < 0), r)
}

fn mod2(x: &Q) -> Q {
    let two = qi(2);
    let k = (x / &two).floor();
    x - k * two
}

/// Criterion (4) at `a` as an exponent `e` in `[0, 2)`, the value being `exp(pi i e)`.
pub fn condition4_exponent(spec: &PartitionFunctionSpec, m: u64, n: u64, phi: &GenEtaQuotient, a: i64) -> Result<Q> {
    let v = phi_vector(phi, n)?;
    let (s, r) = crit4_at(spec, m, n, &v, a);
    Ok(mod2(&(qi(s) + r)))
}

pub fn phi_criterion_report(spec: &PartitionFunctionSpec, m: u64, t: u64, n: u64, phi: &GenEtaQuotient) -> PhiReport {
    let v = match phi_vector(phi, n) {
        Ok(v) => v,
        Err(e) => return PhiReport { conditions: vec![Condition::new("0", false, || e.to_string())] },
    };
    let mut conds = vec![];
    let s1: i64 = layout(n).iter().zip(&v).filter(|((_, g), _)| *g == 0).map(|(_, e)| e).sum::<i64>() + spec.r.values().sum::<i64>();
    conds.push(Condition::new("1", s1 == 0, || format!("sum of exponents is {s1}, not 0")));
    let c2 = crit2(spec, m, n, &v);
    conds.push(Condition::new("2", divides_q(&c2, 24), || format!("{c2} is not 0 mod 24")));
    let c3 = crit3(spec, m, t, n, &v);
    conds.push(Condition::new("3", divides_q(&c3, 24), || format!("{c3} is not 0 mod 24")));
    let mut bad = None;
    for a in criterion_units(n) {
        let (s, r) = crit4_at(spec, m, n, &v, a);
        let total = mod2(&(qi(s) + r));
        if !total.is_zero() {
            bad = Some((a, total));
            break;
        }
    }
    conds.push(Condition::new("4", bad.is_none(), || {
        let (a, e) = bad.clone().unwrap();
        format!("a = {a}: root of unity exp(pi i {e}) is not 1")
    }));
    PhiReport { conditions: conds }
}

pub fn phi_criterion(spec: &PartitionFunctionSpec, m: u64, t: u64, n: u64, phi: &GenEtaQuotient) -> bool {
    phi_criterion_report(spec, m, t, n, phi).passes()
}

/// `coeffs . x + constant` must lie in `modulus Z` (`modulus = 0`: equal zero).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearCondition {
    pub coeffs: Vec<Q>,
    pub constant: Q,
    pub modulus: i64,
}

/// The criteria as affine congruences in the exponent vector over `layout(N)`.
/// Criterion (4) is linear modulo 2 because each Jacobi factor only sees the
/// parity of its exponent and each unit-circle coefficient is an integer.
pub fn linear_conditions(spec: &PartitionFunctionSpec, m: u64, t: u64, n: u64) -> Vec<LinearCondition> {
    let lay = layout(n);
    let k = lay.len();
    let zero = vec![0i64; k];
    let unit = |i: usize| {
        let mut e = zero.clone();
        e[i] = 1;
        e
    };
    let affine = |f: &dyn Fn(&[i64]) -> Q| {
        let c0 = f(&zero);
        let coeffs: Vec<Q> = (0..k).map(|i| f(&unit(i)) - &c0).collect();
        (coeffs, c0)
    };
    let mut out = vec![];
    let c1: Vec<Q> = lay.iter().map(|&(_, g)| qi(i64::from(g == 0))).collect();
    out.push(LinearCondition { coeffs: c1, constant: qi(spec.r.values().sum()), modulus: 0 });
    let (c, c0) = affine(&|v| crit2(spec, m, n, v));
    out.push(LinearCondition { coeffs: c, constant: c0, modulus: 24 });
    let (c, c0) = affine(&|v| crit3(spec, m, t, n, v));
    out.push(LinearCondition { coeffs: c, constant: c0, modulus: 24 });
    for a in criterion_units(n) {
        let (c, c0) = affine(&|v| {
            let (s, r) = crit4_at(spec, m, n, v, a);
            qi(s) + r
        });
        let row = LinearCondition { coeffs: c.iter().map(mod2).collect(), constant: mod2(&c0), modulus: 2 };
        if !out.contains(&row) {
            out.push(row);
        }
    }
    out
}

fn to_i128(x: &BigInt) -> i128 {
    x.to_i128().expect("coefficient overflow")
}

/// Coset `x0 + L` of exponent vectors satisfying all criteria; `None` when empty.
pub fn phi_coset(spec: &PartitionFunctionSpec, m: u64, t: u64, n: u64) -> Option<(Vector, Vec<Vector>)> {
    let conds = linear_conditions(spec, m, t, n);
    let k = layout(n).len();
    let extra: Vec<usize> = conds.iter().enumerate().filter(|(_, c)| c.modulus != 0).map(|(i, _)| i).collect();
    let width = k + extra.len();
    let mut a = vec![];
    let mut b = vec![];
    for (i, c) in conds.iter().enumerate() {
        let l = c.coeffs.iter().chain(std::iter::once(&c.constant)).fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let lq = Q::from_integer(l.clone());
        let mut row: Vector = c.coeffs.iter().map(|x| to_i128(&(x * &lq).to_integer())).collect();
        row.resize(width, 0);
        if let Some(j) = extra.iter().position(|&e| e == i) {
            row[k + j] = -to_i128(&(l * BigInt::from(c.modulus)));
        }
        a.push(row);
        b.push(-to_i128(&(&c.constant * &lq).to_integer()));
    }
    let z0 = lattice::solve(&a, width, &b)?;
    let ker = lattice::kernel(&a, width);
    let proj: Vec<Vector> = ker.iter().map(|v| v[..k].to_vec()).collect();
    let ech = lattice::echelon(&proj, k);
    let x0 = z0[..k].to_vec();
    Some((x0, ech))
}

/// Smallest `sum |x_i|` point of `x0 + L` in the box `|x_i| <= bound`, ties
/// broken lexicographically.
fn box_search(x0: &Vector, ech: &[Vector], bound: i128) -> Option<Vector> {
    let pivots: Vec<usize> = ech.iter().map(|r| lattice::pivot_col(r).unwrap()).collect();
    let mut best: Option<(i128, Vector)> = None;

    fn finalized_ok(cur: &Vector, from: usize, to: usize, bound: i128) -> Option<i128> {
        let mut s = 0;
        for &x in &cur[from..to] {
            if x.abs() > bound {
                return None;
            }
            s += x.abs();
        }
        Some(s)
    }

    #[allow(clippy::too_many_arguments)]
    fn go(
        i: usize,
        cur: &mut Vector,
        l1: i128,
        done: usize,
        ech: &[Vector],
        pivots: &[usize],
        bound: i128,
        best: &mut Option<(i128, Vector)>,
    ) {
        let k = cur.len();
        if i == ech.len() {
            let Some(rest) = finalized_ok(cur, done, k, bound) else { return };
            let total = l1 + rest;
            let better = match best {
                None => true,
                Some((b, v)) => total < *b || (total == *b && *cur < *v),
            };
            if better {
                *best = Some((total, cur.clone()));
            }
            return;
        }
        let p = pivots[i];
        let Some(pre) = finalized_ok(cur, done, p, bound) else { return };
        let l1 = l1 + pre;
        if let Some((b, _)) = best {
            if l1 > *b {
                return;
            }
        }
        let piv = ech[i][p];
        let x = cur[p];
        let lo = (-bound - x).div_euclid(piv) + i128::from((-bound - x).rem_euclid(piv) != 0);
        let hi = (bound - x).div_euclid(piv);
        let mut cs: Vec<i128> = (lo..=hi).collect();
        cs.sort_by_key(|c| ((x + c * piv).abs(), x + c * piv));
        let next = if i + 1 < pivots.len() { pivots[i + 1] } else { k };
        for c in cs {
            let val = (x + c * piv).abs();
            if let Some((b, _)) = best {
                if l1 + val > *b {
                    continue;
                }
            }
            for (y, e) in cur.iter_mut().zip(&ech[i]) {
                *y += c * e;
            }
            // columns strictly between this pivot and the next are now final
            if let Some(mid) = finalized_ok(cur, p + 1, next, bound) {
                go(i + 1, cur, l1 + val + mid, next, ech, pivots, bound, best);
            }
            for (y, e) in cur.iter_mut().zip(&ech[i]) {
                *y -= c * e;
            }
        }
    }

    let mut cur = lattice::reduce(x0, ech);
    go(0, &mut cur, 0, 0, ech, &pivots, bound, &mut best);
    best.map(|(_, v)| v)
}

pub fn find_phi(spec: &PartitionFunctionSpec, m: u64, t: u64, n: u64) -> Result<GenEtaQuotient> {
    find_phi_with_box(spec, m, t, n, DEFAULT_PHI_BOX)
}

pub fn find_phi_with_box(spec: &PartitionFunctionSpec, m: u64, t: u64, n: u64, max_box: i64) -> Result<GenEtaQuotient> {
    let (x0, ech) = phi_coset(spec, m, t, n).ok_or(Error::NoPhiFound(max_box))?;
    let mut b = 2i64;
    loop {
        let bound = b.min(max_box);
        if let Some(v) = box_search(&x0, &ech, bound as i128) {
            let v: Vec<i64> = v.iter().map(|&x| x as i64).collect();
            let phi = phi_from_vector(n, &v);
            if !phi_criterion(spec, m, t, n, &phi) {
                return Err(Error::Diagnostic(format!("coset point {v:?} fails the direct criterion")));
            }
            return Ok(phi);
        }
        if bound >= max_box {
            return Err(Error::NoPhiFound(max_box));
        }
        b *= 2;
    }
}

/// Exponent of `q` in front of `F = phi g_(m,t)`.
pub fn f_prefactor(spec: &PartitionFunctionSpec, m: u64, t: u64, phi: &GenEtaQuotient) -> Q {
    phi.prefactor_exponent() + (qi(t as i64) - spec.ell()) / qi(m as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn overpartitions() -> PartitionFunctionSpec {
        PartitionFunctionSpec::new(2, &[(1, -2), (2, 1)], &[]).unwrap()
    }

    #[test]
    fn squares_are_one_mod_24() {
        for s in squares_set(240, 10) {
            assert_eq!(s % 24, 1);
        }
    }

    #[test]
    fn published_phi_passes_and_perturbation_fails() {
        let spec = overpartitions();
        let v = vec![0, 0, 0, 0, 0, 0, 1, 0, 0, 0, -8, 9];
        assert!(phi_criterion(&spec, 5, 2, 10, &phi_from_vector(10, &v)));
        let mut w = v.clone();
        w[11] = 8;
        assert!(!phi_criterion(&spec, 5, 2, 10, &phi_from_vector(10, &w)));
    }

    #[test]
    fn vector_roundtrip() {
        let v = vec![1, -2, 3, 0, 4, 0, -1, 0, 2, 0, -8, 9];
        assert_eq!(phi_vector(&phi_from_vector(10, &v), 10).unwrap(), v);
    }
}
