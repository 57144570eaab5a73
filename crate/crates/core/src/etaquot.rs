//! Partition-function specs and generalized eta-quotients.
//!
//! `eta(d t) = q^(d/24) (q^d; q^d)` and
//! `eta[d,g](t) = q^((d/2) P2(g/d)) prod_{n = +-g mod d} (1 - q^n)`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::Rational64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::arith::{bernoulli_p2, divisors, from_r64, q, qi, to_r64, Q};
use crate::error::{Error, Result};
use crate::lattice::{self, Vector};
use crate::qseries::{mul_one_minus_q_pow, QSeries};

/// The arithmetic progression `start, start + step, ...` raised to `exp`:
/// `prod_k (1 - q^(start + k step))^exp`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Progression {
    pub start: u64,
    pub step: u64,
    pub exp: i64,
}

fn merge_progressions(fs: &[Progression]) -> Vec<Progression> {
    let mut m: BTreeMap<(u64, u64), i64> = BTreeMap::new();
    for f in fs {
        *m.entry((f.start, f.step)).or_insert(0) += f.exp;
    }
    m.into_iter()
        .filter(|(_, e)| *e != 0)
        .map(|((start, step), exp)| Progression { start, step, exp })
        .collect()
}

/// Coefficients of `q^0 .. q^(len-1)` of a product of progressions, via the
/// logarithmic derivative: `n P_n = sum_k L_k P_(n-k)`.
pub fn product_coeffs(factors: &[Progression], len: usize) -> Vec<BigInt> {
    let fs = merge_progressions(factors);
    let mut l = vec![0i64; len];
    for f in &fs {
        let mut d = f.start as usize;
        while d < len {
            let mut n = d;
            while n < len {
                l[n] -= f.exp * d as i64;
                n += d;
            }
            d += f.step as usize;
        }
    }
    let nz: Vec<(usize, i64)> = l.iter().enumerate().filter(|(_, &x)| x != 0).map(|(k, &x)| (k, x)).collect();
    let mut p: Vec<BigInt> = Vec::with_capacity(len);
    for n in 0..len {
        if n == 0 {
            p.push(BigInt::one());
            continue;
        }
        let mut acc = BigInt::zero();
        for &(k, lk) in &nz {
            if k > n {
                break;
            }
            acc += &p[n - k] * lk;
        }
        let (quo, rem) = (&acc / n as i64, &acc % n as i64);
        assert!(rem.is_zero(), "non-integral product coefficient");
        p.push(quo);
    }
    p
}

/// Same product by multiplying the factors `(1 - q^n)^e` one at a time.
pub fn product_coeffs_direct(factors: &[Progression], len: usize) -> Vec<BigInt> {
    let mut c = vec![BigInt::zero(); len];
    if len == 0 {
        return c;
    }
    c[0] = BigInt::one();
    for f in merge_progressions(factors) {
        let mut n = f.start as usize;
        while n < len {
            mul_one_minus_q_pow(&mut c, n, f.exp);
            n += f.step as usize;
        }
    }
    c
}

/// Which of the two routes expands a product.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    LogDerivative,
    Direct,
}

fn expand_product(shift: &Q, factors: &[Progression], bound: Rational64, route: Route) -> QSeries {
    let s = to_r64(shift);
    let span = bound - s;
    let len = if span <= Rational64::zero() { 0 } else { span.ceil().to_integer() as usize };
    let coeffs = match route {
        Route::LogDerivative => product_coeffs(factors, len),
        Route::Direct => product_coeffs_direct(factors, len),
    };
    QSeries::from_int_coeffs(coeffs, s, false).truncate(bound)
}

/// `a(n)` or `b(n)`: `prod (q^d;q^d)^(r_d) prod (q^g, q^(d-g); q^d)^(r_(d,g))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionFunctionSpec {
    pub m: u64,
    pub r: BTreeMap<u64, i64>,
    /// Keys `(d, g)` folded so that `g <= d - g`.
    pub rg: BTreeMap<(u64, u64), i64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecJson {
    #[serde(rename = "M")]
    m: u64,
    #[serde(default)]
    r: BTreeMap<String, i64>,
    #[serde(default)]
    rg: BTreeMap<String, i64>,
}

impl PartitionFunctionSpec {
    pub fn new(m: u64, r: &[(u64, i64)], rg: &[((u64, u64), i64)]) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidSpec("M must be positive".into()));
        }
        let mut s = PartitionFunctionSpec { m, r: BTreeMap::new(), rg: BTreeMap::new() };
        for &(d, e) in r {
            if d == 0 || !m.is_multiple_of(d) {
                return Err(Error::InvalidSpec(format!("{d} does not divide M={m}")));
            }
            *s.r.entry(d).or_insert(0) += e;
        }
        for &((d, g), e) in rg {
            if d == 0 || !m.is_multiple_of(d) || g == 0 || g >= d {
                return Err(Error::InvalidSpec(format!("bad generalized key {d}/{g} for M={m}")));
            }
            let g = g.min(d - g);
            *s.rg.entry((d, g)).or_insert(0) += e;
        }
        s.r.retain(|_, e| *e != 0);
        s.rg.retain(|_, e| *e != 0);
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: SpecJson = serde_json::from_str(text).map_err(|e| Error::InvalidSpec(e.to_string()))?;
        let mut r = vec![];
        for (k, v) in &raw.r {
            let d = k.trim().parse::<u64>().map_err(|_| Error::InvalidSpec(format!("bad key {k:?}")))?;
            r.push((d, *v));
        }
        let mut rg = vec![];
        for (k, v) in &raw.rg {
            let (d, g) = k
                .split_once('/')
                .and_then(|(a, b)| Some((a.trim().parse::<u64>().ok()?, b.trim().parse::<u64>().ok()?)))
                .ok_or_else(|| Error::InvalidSpec(format!("bad key {k:?}")))?;
            rg.push(((d, g), *v));
        }
        PartitionFunctionSpec::new(raw.m, &r, &rg)
    }

    pub fn to_json(&self) -> Value {
        let r: serde_json::Map<String, Value> = self.r.iter().map(|(d, e)| (d.to_string(), json!(e))).collect();
        let rg: serde_json::Map<String, Value> =
            self.rg.iter().map(|((d, g), e)| (format!("{d}/{g}"), json!(e))).collect();
        json!({"M": self.m, "r": r, "rg": rg})
    }

    pub fn is_extended(&self) -> bool {
        !self.rg.is_empty()
    }

    /// `l = -(1/24) sum d r_d - sum (d/2) P2(g/d) r_(d,g)`.
    pub fn ell(&self) -> Q {
        let mut s = Q::zero();
        for (&d, &e) in &self.r {
            s -= q(d as i64 * e, 24);
        }
        for (&(d, g), &e) in &self.rg {
            s -= q(d as i64, 2) * bernoulli_p2(&q(g as i64, d as i64)) * qi(e);
        }
        s
    }

    fn progressions(&self) -> Vec<Progression> {
        let mut fs = vec![];
        for (&d, &e) in &self.r {
            fs.push(Progression { start: d, step: d, exp: e });
        }
        for (&(d, g), &e) in &self.rg {
            fs.push(Progression { start: g, step: d, exp: e });
            fs.push(Progression { start: d - g, step: d, exp: e });
        }
        fs
    }

    /// Coefficients `a(0), ..., a(len-1)` of the defining product.
    pub fn gf_coeffs(&self, len: usize) -> Vec<BigInt> {
        product_coeffs(&self.progressions(), len)
    }

    /// Same coefficients by direct factor multiplication.
    pub fn gf_coeffs_direct(&self, len: usize) -> Vec<BigInt> {
        product_coeffs_direct(&self.progressions(), len)
    }

    /// The defining product truncated below `q^len`.
    pub fn gf_expansion(&self, len: usize) -> QSeries {
        QSeries::from_int_coeffs(self.gf_coeffs(len), Rational64::zero(), false)
    }

    /// `q^((t - l)/m) sum_(n < terms) a(m n + t) q^n`.
    pub fn g_mt_expansion(&self, m: u64, t: u64, terms: usize) -> QSeries {
        assert!(t < m);
        let len = m as usize * terms + t as usize;
        let c = self.gf_coeffs(len.max(1));
        let sliced: Vec<BigInt> = (0..terms).map(|n| c[m as usize * n + t as usize].clone()).collect();
        let shift = (qi(t as i64) - self.ell()) / qi(m as i64);
        QSeries::from_int_coeffs(sliced, to_r64(&shift), false)
    }

    /// The spec as a generalized eta-quotient at level `M`, so that the
    /// generating function is `q^l` times it.
    pub fn as_quotient(&self) -> GenEtaQuotient {
        let mut h = GenEtaQuotient::one(self.m);
        for (&d, &e) in &self.r {
            h.a.insert(d, e);
        }
        for (&(d, g), &e) in &self.rg {
            h.ag.insert((d, g), Rational64::from_integer(e));
        }
        h
    }
}

/// `prod eta(d t)^(a_d) prod eta[d,g](t)^(a_(d,g))` at level `n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GenEtaQuotient {
    pub n: u64,
    pub a: BTreeMap<u64, i64>,
    /// Keys `(d, g)` with `0 <= g <= d/2`; half-integers only at `g = 0, d/2`.
    pub ag: BTreeMap<(u64, u64), Rational64>,
}

impl GenEtaQuotient {
    pub fn one(n: u64) -> Self {
        GenEtaQuotient { n, a: BTreeMap::new(), ag: BTreeMap::new() }
    }

    /// Build from plain exponents and generalized exponents (keys folded).
    pub fn from_parts(n: u64, plain: &[(u64, i64)], gen: &[((u64, u64), i64)]) -> Self {
        let mut h = GenEtaQuotient::one(n);
        for &(d, e) in plain {
            *h.a.entry(d).or_insert(0) += e;
        }
        for &((d, g), e) in gen {
            let g = g % d;
            let g = g.min(d - g) % d;
            *h.ag.entry((d, g)).or_insert_with(Rational64::zero) += Rational64::from_integer(e);
        }
        h.a.retain(|_, e| *e != 0);
        h.ag.retain(|_, e| !e.is_zero());
        h
    }

    /// Rewrite `eta[d,0] = eta(d t)^2` and `eta[d,d/2] = eta(d t/2)^2 / eta(d t)^2`,
    /// leaving only plain exponents and `0 < g < d/2`.
    pub fn canonicalize(&self) -> Result<GenEtaQuotient> {
        let mut plain: BTreeMap<u64, Rational64> = self.a.iter().map(|(&d, &e)| (d, Rational64::from_integer(e))).collect();
        let mut gen: BTreeMap<(u64, u64), i64> = BTreeMap::new();
        for (&(d, g), &e) in &self.ag {
            if g == 0 {
                *plain.entry(d).or_insert_with(Rational64::zero) += e * 2;
            } else if 2 * g == d {
                *plain.entry(d / 2).or_insert_with(Rational64::zero) += e * 2;
                *plain.entry(d).or_insert_with(Rational64::zero) -= e * 2;
            } else {
                if !e.is_integer() {
                    return Err(Error::NonIntegralPower(format!("eta[{d},{g}]^{e}")));
                }
                *gen.entry((d, g)).or_insert(0) += e.to_integer();
            }
        }
        let mut out = GenEtaQuotient::one(self.n);
        for (d, e) in plain {
            if !e.is_integer() {
                return Err(Error::NonIntegralPower(format!("eta({d}t)^{e}")));
            }
            if !e.is_zero() {
                out.a.insert(d, e.to_integer());
            }
        }
        for (k, e) in gen {
            if e != 0 {
                out.ag.insert(k, Rational64::from_integer(e));
            }
        }
        Ok(out)
    }

    pub fn is_canonical(&self) -> bool {
        self.ag.iter().all(|(&(d, g), e)| g > 0 && 2 * g < d && e.is_integer())
    }

    /// Exponent of the leading power of q.
    pub fn prefactor_exponent(&self) -> Q {
        let mut s = Q::zero();
        for (&d, &e) in &self.a {
            s += q(d as i64 * e, 24);
        }
        for (&(d, g), &e) in &self.ag {
            s += q(d as i64, 2) * bernoulli_p2(&q(g as i64, d as i64)) * from_r64(e);
        }
        s
    }

    fn progressions(&self) -> Result<Vec<Progression>> {
        let c = self.canonicalize()?;
        let mut fs = vec![];
        for (&d, &e) in &c.a {
            fs.push(Progression { start: d, step: d, exp: e });
        }
        for (&(d, g), e) in &c.ag {
            let e = e.to_integer();
            fs.push(Progression { start: g, step: d, exp: e });
            fs.push(Progression { start: d - g, step: d, exp: e });
        }
        Ok(fs)
    }

    /// Expansion below `q^bound`.
    pub fn expansion(&self, bound: Rational64) -> Result<QSeries> {
        self.expansion_by(bound, Route::LogDerivative)
    }

    pub fn expansion_by(&self, bound: Rational64, route: Route) -> Result<QSeries> {
        let fs = self.progressions()?;
        Ok(expand_product(&self.prefactor_exponent(), &fs, bound, route))
    }

    pub fn mul(&self, other: &GenEtaQuotient) -> GenEtaQuotient {
        let mut h = self.clone();
        h.n = num_integer::lcm(self.n, other.n);
        for (&d, &e) in &other.a {
            *h.a.entry(d).or_insert(0) += e;
        }
        for (&k, &e) in &other.ag {
            *h.ag.entry(k).or_insert_with(Rational64::zero) += e;
        }
        h.a.retain(|_, e| *e != 0);
        h.ag.retain(|_, e| !e.is_zero());
        h
    }

    pub fn pow(&self, k: i64) -> GenEtaQuotient {
        let mut h = self.clone();
        for e in h.a.values_mut() {
            *e *= k;
        }
        for e in h.ag.values_mut() {
            *e *= k;
        }
        h.a.retain(|_, e| *e != 0);
        h.ag.retain(|_, e| !e.is_zero());
        h
    }

    pub fn inverse(&self) -> GenEtaQuotient {
        self.pow(-1)
    }

    pub fn is_trivial(&self) -> bool {
        self.a.is_empty() && self.ag.is_empty()
    }

    /// Sum of absolute exponents of the canonical form.
    pub fn weight(&self) -> i64 {
        let c = self.canonicalize().unwrap_or_else(|_| self.clone());
        c.a.values().map(|e| e.abs()).sum::<i64>() + c.ag.values().map(|e| e.abs().ceil().to_integer()).sum::<i64>()
    }

    /// Function fingerprint: exponent of `(1 - q^n)` per residue class of
    /// `n` modulo the level, plus the leading q-exponent. Two quotients are
    /// the same function exactly when their fingerprints agree.
    pub fn fingerprint(&self, level: u64) -> Result<(Vec<i64>, Q)> {
        let mut e = vec![0i64; level as usize];
        for f in self.progressions()? {
            assert!(level.is_multiple_of(f.step), "level {level} not a multiple of {}", f.step);
            for r in 0..level {
                if r % f.step == f.start % f.step {
                    e[r as usize] += f.exp;
                }
            }
        }
        Ok((e, self.prefactor_exponent()))
    }

    /// True when the quotient is the constant function 1.
    pub fn is_identically_one(&self) -> bool {
        let level = self.level_hint();
        match self.fingerprint(level) {
            Ok((e, s)) => e.iter().all(|&x| x == 0) && s.is_zero(),
            Err(_) => false,
        }
    }

    fn level_hint(&self) -> u64 {
        self.a.keys().chain(self.ag.keys().map(|(d, _)| d)).fold(self.n.max(1), |acc, &d| num_integer::lcm(acc, d))
    }

    pub fn same_function(&self, other: &GenEtaQuotient) -> bool {
        self.mul(&other.inverse()).is_identically_one()
    }

    /// Canonical-coordinate vector over [`canonical_layout`].
    pub fn canonical_vector(&self, n: u64) -> Result<Vector> {
        let c = self.canonicalize()?;
        let lay = canonical_layout(n);
        let mut v = vec![0i128; lay.len()];
        for (&d, &e) in &c.a {
            let i = lay.iter().position(|&k| k == (d, 0)).ok_or_else(|| Error::Diagnostic(format!("{d} does not divide {n}")))?;
            v[i] = e as i128;
        }
        for (&(d, g), e) in &c.ag {
            let i = lay.iter().position(|&k| k == (d, g)).ok_or_else(|| Error::Diagnostic(format!("{d} does not divide {n}")))?;
            v[i] = e.to_integer() as i128;
        }
        Ok(v)
    }

    pub fn from_canonical_vector(n: u64, v: &[i128]) -> GenEtaQuotient {
        let lay = canonical_layout(n);
        let mut h = GenEtaQuotient::one(n);
        for (&(d, g), &x) in lay.iter().zip(v) {
            if x == 0 {
                continue;
            }
            if g == 0 {
                h.a.insert(d, x as i64);
            } else {
                h.ag.insert((d, g), Rational64::from_integer(x as i64));
            }
        }
        h
    }

    /// Representative modulo the multiplicative relations among eta
    /// functions at level `n`, eliminating trailing coordinates.
    pub fn normalized(&self, n: u64) -> Result<GenEtaQuotient> {
        let v = self.canonical_vector(n)?;
        let rel = relation_echelon(n);
        let r = lattice::reduce_trailing(&v, &rel);
        Ok(GenEtaQuotient::from_canonical_vector(n, &r))
    }

    pub fn to_json(&self) -> Value {
        let a: serde_json::Map<String, Value> = self.a.iter().map(|(d, e)| (d.to_string(), json!(e))).collect();
        let ag: serde_json::Map<String, Value> = self
            .ag
            .iter()
            .map(|((d, g), e)| {
                let v = if e.is_integer() { json!(e.to_integer()) } else { json!(format!("{}/{}", e.numer(), e.denom())) };
                (format!("{d}/{g}"), v)
            })
            .collect();
        json!({"N": self.n, "a": a, "ag": ag})
    }
}

/// Variables `(d, g)` with `d | n`, `0 <= g <= d/2` in the order `d`
/// ascending then `g` ascending.
pub fn layout(n: u64) -> Vec<(u64, u64)> {
    let mut v = vec![];
    for d in divisors(n) {
        for g in 0..=d / 2 {
            v.push((d, g));
        }
    }
    v
}

/// Canonical coordinates: plain `(d, 0)` and generalized `0 < g < d/2`.
pub fn canonical_layout(n: u64) -> Vec<(u64, u64)> {
    layout(n).into_iter().filter(|&(d, g)| !(g > 0 && 2 * g == d)).collect()
}

/// Trailing-pivot echelon basis of the relations among canonical coordinates.
pub fn relation_echelon(n: u64) -> Vec<Vector> {
    let lay = canonical_layout(n);
    let mut rows: Vec<Vector> = vec![vec![0; lay.len()]; n as usize + 1];
    let mut shifts = vec![];
    for (j, &(d, g)) in lay.iter().enumerate() {
        let prog: Vec<(u64, u64)> = if g == 0 { vec![(0, d)] } else { vec![(g, d), (d - g, d)] };
        for (s, step) in prog {
            for r in 0..n {
                if r % step == s % step {
                    rows[r as usize][j] += 1;
                }
            }
        }
        let sh = if g == 0 { q(d as i64, 24) } else { q(d as i64, 2) * bernoulli_p2(&q(g as i64, d as i64)) };
        shifts.push(sh);
    }
    let den = crate::arith::lcm_all(shifts.iter().map(|s| s.denom().clone()));
    for (j, s) in shifts.iter().enumerate() {
        rows[n as usize][j] = (s * Q::from_integer(den.clone())).to_integer().to_i128().unwrap();
    }
    let ker = lattice::kernel(&rows, lay.len());
    lattice::echelon_trailing(&ker, lay.len())
}

fn sup(e: i64) -> String {
    if e == 1 {
        String::new()
    } else {
        format!("^{e}")
    }
}

impl fmt::Display for GenEtaQuotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = vec![];
        for (&d, &e) in &self.a {
            let arg = if d == 1 { "t".to_string() } else { format!("{d}t") };
            parts.push(format!("eta({arg}){}", sup(e)));
        }
        for (&(d, g), &e) in &self.ag {
            let ex = if e.is_integer() { sup(e.to_integer()) } else { format!("^({}/{})", e.numer(), e.denom()) };
            parts.push(format!("eta[{d},{g}]{ex}"));
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" * "))
        }
    }
}

/// Sign of a rational exponent as used by callers that only need ordering.
pub fn sign_of(x: &Q) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn ell_examples() {
        let p = PartitionFunctionSpec::new(1, &[(1, -1)], &[]).unwrap();
        assert_eq!(p.ell(), q(1, 24));
        let over = PartitionFunctionSpec::new(2, &[(1, -2), (2, 1)], &[]).unwrap();
        assert_eq!(over.ell(), Q::zero());
        assert_eq!((qi(6) - p.ell()) / qi(11), q(13, 24));
    }

    #[test]
    fn spec_json_roundtrip_and_folding() {
        let s = PartitionFunctionSpec::from_json(r#"{"M":5,"rg":{"5/4":-1,"5/2":1}}"#).unwrap();
        assert_eq!(s.rg.get(&(5, 1)), Some(&-1));
        assert_eq!(s.rg.get(&(5, 2)), Some(&1));
        assert!(PartitionFunctionSpec::from_json(r#"{"M":5,"x":1}"#).is_err());
        assert!(PartitionFunctionSpec::from_json(r#"{"M":5,"r":{"3":1}}"#).is_err());
        let back = PartitionFunctionSpec::from_json(&s.to_json().to_string()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn both_product_routes_agree() {
        let fs = [
            Progression { start: 1, step: 5, exp: -3 },
            Progression { start: 4, step: 5, exp: 2 },
            Progression { start: 10, step: 10, exp: 7 },
            Progression { start: 3, step: 1, exp: -1 },
        ];
        assert_eq!(product_coeffs(&fs, 120), product_coeffs_direct(&fs, 120));
    }

    #[test]
    fn eta_10_5_expansion() {
        let h = GenEtaQuotient::from_parts(10, &[], &[((10, 5), 1)]);
        let s = h.expansion(r(3, 1)).unwrap();
        assert_eq!(s.lead_exponent(), Some(r(-5, 12)));
        // q^(-5/12) (q^5; q^10)^2 = q^(-5/12) (1 - 2 q^5 + ...)
        assert_eq!(s.to_string(), "q^(-5/12) + O(q^3)");
        let s = h.expansion(r(6, 1)).unwrap();
        assert_eq!(s.to_string(), "q^(-5/12) - 2*q^(55/12) + O(q^6)");
    }

    #[test]
    fn canonicalization_identities() {
        let h = GenEtaQuotient { n: 6, a: BTreeMap::new(), ag: [((3, 0), r(1, 2)), ((6, 3), r(3, 2))].into_iter().collect() };
        let c = h.canonicalize().unwrap();
        assert_eq!(c.a, [(3, 1 + 3), (6, -3)].into_iter().collect());
        assert_eq!(c.canonicalize().unwrap(), c);
        let e1 = h.expansion(r(20, 1)).unwrap();
        let e2 = c.expansion(r(20, 1)).unwrap();
        assert_eq!(e1, e2);
        let bad = GenEtaQuotient { n: 5, a: BTreeMap::new(), ag: [((5, 1), r(1, 2))].into_iter().collect() };
        assert!(matches!(bad.canonicalize(), Err(Error::NonIntegralPower(_))));
    }

    #[test]
    fn relations_at_level_ten() {
        // plain eta(t), eta(2t), eta(5t), eta(10t), eta[5,1], eta[10,1] survive
        let rel = relation_echelon(10);
        assert_eq!(rel.len(), 4);
        let prod = GenEtaQuotient::from_parts(10, &[(1, -1), (5, 1)], &[((5, 1), 1), ((5, 2), 1)]);
        assert!(prod.is_identically_one());
        assert!(prod.normalized(10).unwrap().is_trivial());
        let z = GenEtaQuotient::from_parts(10, &[(1, 1), (5, 1), (10, -2)], &[((5, 1), -2), ((10, 1), -1)]);
        assert_eq!(z.normalized(10).unwrap(), z);
    }
}
