//! Truncated power series with exact rational coefficients in `q^(1/w)`.
//!
//! Exponents are stored as integers scaled by a shared denominator `w`, and
//! coefficients as integer numerators over one common denominator, so that
//! convolution stays integral. A series either carries a truncation bound
//! (coefficients at or beyond it are unknown) or is exact.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    w: i64,
    den: BigInt,
    terms: Vec<(i64, BigInt)>,
    trunc: Option<i64>,
}

fn opt_add(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x + y),
        _ => None,
    }
}

fn opt_min(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (Some(x), None) | (None, Some(x)) => Some(x),
        (None, None) => None,
    }
}

fn lcm(a: i64, b: i64) -> i64 {
    a.lcm(&b)
}

impl QSeries {
    fn build(w: i64, den: BigInt, mut terms: Vec<(i64, BigInt)>, trunc: Option<i64>) -> Self {
        assert!(w >= 1);
        assert!(!den.is_zero());
        terms.retain(|(e, c)| !c.is_zero() && trunc.is_none_or(|t| *e < t));
        terms.sort_by_key(|(e, _)| *e);
        let mut s = QSeries { w, den, terms, trunc };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -self.den.clone();
            for (_, c) in self.terms.iter_mut() {
                *c = -c.clone();
            }
        }
        if self.terms.is_empty() {
            self.den = BigInt::one();
        } else {
            let mut g = self.den.clone();
            for (_, c) in &self.terms {
                if g.is_one() {
                    break;
                }
                g = g.gcd(c);
            }
            if !g.is_one() {
                self.den = &self.den / &g;
                for (_, c) in self.terms.iter_mut() {
                    *c = &*c / &g;
                }
            }
        }
        let mut g = self.w;
        for (e, _) in &self.terms {
            g = g.gcd(e);
        }
        if let Some(t) = self.trunc {
            g = g.gcd(&t);
        }
        if g > 1 {
            self.w /= g;
            for (e, _) in self.terms.iter_mut() {
                *e /= g;
            }
            if let Some(t) = self.trunc.as_mut() {
                *t /= g;
            }
        }
    }

    /// Exact zero.
    pub fn zero() -> Self {
        QSeries { w: 1, den: BigInt::one(), terms: vec![], trunc: None }
    }

    /// Zero known only below `q^t`, i.e. `O(q^t)`.
    pub fn big_o(t: Rational64) -> Self {
        QSeries::build(*t.denom(), BigInt::one(), vec![], Some(*t.numer()))
    }

    pub fn one() -> Self {
        QSeries::monomial(BigRational::one(), Rational64::zero())
    }

    pub fn constant(c: BigRational) -> Self {
        QSeries::monomial(c, Rational64::zero())
    }

    /// Exact `c q^e`.
    pub fn monomial(c: BigRational, e: Rational64) -> Self {
        let (n, d) = (c.numer().clone(), c.denom().clone());
        QSeries::build(*e.denom(), d, vec![(*e.numer(), n)], None)
    }

    /// Series `q^shift * sum_k coeffs[k] q^k`, known for `k < coeffs.len()`
    /// when `exact` is false.
    pub fn from_int_coeffs(coeffs: Vec<BigInt>, shift: Rational64, exact: bool) -> Self {
        let w = *shift.denom();
        let s = *shift.numer();
        let len = coeffs.len() as i64;
        let terms = coeffs
            .into_iter()
            .enumerate()
            .map(|(k, c)| (s + k as i64 * w, c))
            .collect();
        let trunc = if exact { None } else { Some(s + len * w) };
        QSeries::build(w, BigInt::one(), terms, trunc)
    }

    /// Series from `(exponent, coefficient)` pairs with an optional bound.
    pub fn from_terms(terms: &[(Rational64, BigRational)], trunc: Option<Rational64>) -> Self {
        let mut w = trunc.map_or(1, |t| *t.denom());
        let mut den = BigInt::one();
        for (e, c) in terms {
            w = lcm(w, *e.denom());
            den = den.lcm(c.denom());
        }
        let t = trunc.map(|t| t.numer() * (w / t.denom()));
        let scaled = terms
            .iter()
            .map(|(e, c)| (e.numer() * (w / e.denom()), c.numer() * (&den / c.denom())))
            .collect::<Vec<_>>();
        let mut merged: BTreeMap<i64, BigInt> = BTreeMap::new();
        for (e, c) in scaled {
            *merged.entry(e).or_insert_with(BigInt::zero) += c;
        }
        QSeries::build(w, den, merged.into_iter().collect(), t)
    }

    pub fn w(&self) -> i64 {
        self.w
    }

    pub fn is_exact(&self) -> bool {
        self.trunc.is_none()
    }

    /// Truncation bound as a rational exponent (`None` for exact series).
    pub fn trunc(&self) -> Option<Rational64> {
        self.trunc.map(|t| Rational64::new(t, self.w))
    }

    /// True when no nonzero coefficient is stored.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn coeff_of(&self, num: &BigInt) -> BigRational {
        BigRational::new(num.clone(), self.den.clone())
    }

    /// Nonzero terms as `(exponent, coefficient)` in increasing order.
    pub fn terms(&self) -> impl Iterator<Item = (Rational64, BigRational)> + '_ {
        self.terms.iter().map(move |(e, c)| (Rational64::new(*e, self.w), self.coeff_of(c)))
    }

    /// Leading exponent and coefficient.
    pub fn lead(&self) -> Option<(Rational64, BigRational)> {
        self.terms.first().map(|(e, c)| (Rational64::new(*e, self.w), self.coeff_of(c)))
    }

    pub fn lead_exponent(&self) -> Option<Rational64> {
        self.terms.first().map(|(e, _)| Rational64::new(*e, self.w))
    }

    /// Highest stored exponent.
    pub fn last_exponent(&self) -> Option<Rational64> {
        self.terms.last().map(|(e, _)| Rational64::new(*e, self.w))
    }

    /// Coefficient of `q^e`. Panics if `e` is at or beyond the truncation.
    pub fn coeff(&self, e: Rational64) -> BigRational {
        if let Some(t) = self.trunc() {
            assert!(e < t, "coefficient of q^{e} requested beyond truncation {t}");
        }
        let k = lcm(self.w, *e.denom());
        if k != self.w {
            return BigRational::zero();
        }
        let s = e.numer() * (self.w / e.denom());
        match self.terms.binary_search_by_key(&s, |(x, _)| *x) {
            Ok(i) => self.coeff_of(&self.terms[i].1),
            Err(_) => BigRational::zero(),
        }
    }

    fn rescaled(&self, w: i64) -> (Vec<(i64, BigInt)>, Option<i64>) {
        debug_assert_eq!(w % self.w, 0);
        let f = w / self.w;
        (
            self.terms.iter().map(|(e, c)| (e * f, c.clone())).collect(),
            self.trunc.map(|t| t * f),
        )
    }

    /// Lower bound for the exponent of the first possibly nonzero term,
    /// scaled to `w`; `None` for the exact zero.
    fn lead_bound(terms: &[(i64, BigInt)], trunc: Option<i64>) -> Option<i64> {
        terms.first().map(|(e, _)| *e).or(trunc)
    }

    pub fn add(&self, other: &QSeries) -> QSeries {
        let w = lcm(self.w, other.w);
        let (a, ta) = self.rescaled(w);
        let (b, tb) = other.rescaled(w);
        let den = self.den.lcm(&other.den);
        let fa = &den / &self.den;
        let fb = &den / &other.den;
        let mut merged: BTreeMap<i64, BigInt> = BTreeMap::new();
        for (e, c) in a {
            *merged.entry(e).or_insert_with(BigInt::zero) += c * &fa;
        }
        for (e, c) in b {
            *merged.entry(e).or_insert_with(BigInt::zero) += c * &fb;
        }
        QSeries::build(w, den, merged.into_iter().collect(), opt_min(ta, tb))
    }

    pub fn neg(&self) -> QSeries {
        let mut s = self.clone();
        for (_, c) in s.terms.iter_mut() {
            *c = -c.clone();
        }
        s
    }

    pub fn sub(&self, other: &QSeries) -> QSeries {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &BigRational) -> QSeries {
        if c.is_zero() {
            return QSeries { w: 1, den: BigInt::one(), terms: vec![], trunc: None }.with_trunc_opt(self.trunc());
        }
        let terms = self.terms.iter().map(|(e, x)| (*e, x * c.numer())).collect();
        QSeries::build(self.w, &self.den * c.denom(), terms, self.trunc)
    }

    fn with_trunc_opt(self, t: Option<Rational64>) -> QSeries {
        match t {
            Some(t) => self.truncate(t),
            None => self,
        }
    }

    /// Multiply by `q^r`.
    pub fn shift(&self, r: Rational64) -> QSeries {
        let w = lcm(self.w, *r.denom());
        let (a, t) = self.rescaled(w);
        let s = r.numer() * (w / r.denom());
        QSeries::build(
            w,
            self.den.clone(),
            a.into_iter().map(|(e, c)| (e + s, c)).collect(),
            t.map(|t| t + s),
        )
    }

    /// Forget everything at or beyond `q^t` (never extends the bound).
    pub fn truncate(&self, t: Rational64) -> QSeries {
        let w = lcm(self.w, *t.denom());
        let (a, tr) = self.rescaled(w);
        let tn = t.numer() * (w / t.denom());
        QSeries::build(w, self.den.clone(), a, opt_min(tr, Some(tn)))
    }

    pub fn mul(&self, other: &QSeries) -> QSeries {
        let w = lcm(self.w, other.w);
        let (a, ta) = self.rescaled(w);
        let (b, tb) = other.rescaled(w);
        let den = &self.den * &other.den;
        let la = QSeries::lead_bound(&a, ta);
        let lb = QSeries::lead_bound(&b, tb);
        if la.is_none() || lb.is_none() {
            // one factor is the exact zero
            return QSeries::zero();
        }
        let trunc = opt_min(opt_add(ta, lb), opt_add(tb, la));
        let terms = convolve(&a, &b, trunc);
        QSeries::build(w, den, terms, trunc)
    }

    /// Multiplicative inverse; the leading coefficient must be nonzero.
    pub fn invert(&self) -> Result<QSeries> {
        let (l, _) = match self.terms.first() {
            Some((e, c)) => (*e, c.clone()),
            None => return Err(Error::ZeroSeries),
        };
        let trunc = match self.trunc {
            Some(t) => t,
            None => {
                if self.terms.len() == 1 {
                    let (e, c) = self.lead().unwrap();
                    return Ok(QSeries::monomial(c.recip(), -e));
                }
                return Err(Error::UnboundedInverse);
            }
        };
        let len = (trunc - l) as usize;
        let v: Vec<(usize, BigInt)> =
            self.terms.iter().map(|(e, c)| ((e - l) as usize, c.clone())).collect();
        let v0 = v[0].1.clone();
        let coeffs: Vec<BigRational> = if v0.abs().is_one() {
            let mut g: Vec<BigInt> = Vec::with_capacity(len);
            for k in 0..len {
                if k == 0 {
                    g.push(v0.clone());
                    continue;
                }
                let mut acc = BigInt::zero();
                for (j, c) in v.iter().skip(1) {
                    if *j > k {
                        break;
                    }
                    acc += c * &g[k - j];
                }
                g.push(-(acc * &v0));
            }
            g.into_iter().map(BigRational::from_integer).collect()
        } else {
            let inv0 = BigRational::new(BigInt::one(), v0.clone());
            let mut g: Vec<BigRational> = Vec::with_capacity(len);
            for k in 0..len {
                if k == 0 {
                    g.push(inv0.clone());
                    continue;
                }
                let mut acc = BigRational::zero();
                for (j, c) in v.iter().skip(1) {
                    if *j > k {
                        break;
                    }
                    acc += &g[k - j] * BigRational::from_integer(c.clone());
                }
                g.push(-(acc * &inv0));
            }
            g
        };
        // f = q^l u / den, so 1/f = den q^-l / u
        let terms: Vec<(Rational64, BigRational)> = coeffs
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (Rational64::new(k as i64 - l, self.w), c * BigRational::from_integer(self.den.clone())))
            .collect();
        Ok(QSeries::from_terms(&terms, Some(Rational64::new(trunc - 2 * l, self.w))))
    }

    pub fn pow(&self, n: i64) -> Result<QSeries> {
        if n < 0 {
            return self.invert()?.pow(-n);
        }
        let mut result = QSeries::one();
        let mut base = self.clone();
        let mut k = n as u64;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        Ok(result)
    }

    pub fn div(&self, other: &QSeries) -> Result<QSeries> {
        Ok(self.mul(&other.invert()?))
    }

    /// True when all exponents (and the bound) are integers.
    pub fn has_integral_exponents(&self) -> bool {
        self.w == 1
    }

    /// Coefficients of `q^from .. q^(to-1)` for a series with integral exponents.
    pub fn int_coeffs(&self, from: i64, to: i64) -> Vec<BigRational> {
        (from..to).map(|k| self.coeff(Rational64::from_integer(k))).collect()
    }

    /// `sum_n c(m n + t) q^n` for a series in integral powers of q.
    pub fn slice(&self, m: i64, t: i64) -> QSeries {
        assert!(self.w == 1, "slice needs integral exponents");
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| (e - t).rem_euclid(m) == 0)
            .map(|(e, c)| ((e - t).div_euclid(m), c.clone()))
            .collect();
        let trunc = self.trunc.map(|tr| (tr - t + m - 1).div_euclid(m));
        QSeries::build(1, self.den.clone(), terms, trunc)
    }

    /// Substitute `q -> q^k`.
    pub fn dilate(&self, k: i64) -> QSeries {
        assert!(k >= 1);
        QSeries::build(
            self.w,
            self.den.clone(),
            self.terms.iter().map(|(e, c)| (e * k, c.clone())).collect(),
            self.trunc.map(|t| t * k),
        )
    }

    /// First exponent below both bounds where the two series differ.
    pub fn first_mismatch(&self, other: &QSeries) -> Option<Rational64> {
        let d = self.sub(other);
        d.lead_exponent()
    }

    /// Equality of all coefficients known to both sides.
    pub fn agrees_with(&self, other: &QSeries) -> bool {
        self.first_mismatch(other).is_none()
    }

    /// True when every coefficient is an integer divisible by `u`.
    pub fn coefficients_divisible_by(&self, u: &BigInt) -> bool {
        self.den.is_one() && self.terms.iter().all(|(_, c)| (c % u).is_zero())
    }
}

/// Cauchy product of sorted term lists, keeping exponents below `limit`.
fn convolve(a: &[(i64, BigInt)], b: &[(i64, BigInt)], limit: Option<i64>) -> Vec<(i64, BigInt)> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let (a0, a1) = (a[0].0, a.last().unwrap().0);
    let (b0, b1) = (b[0].0, b.last().unwrap().0);
    let hi = match limit {
        Some(l) => l.min(a1 + b1 + 1),
        None => a1 + b1 + 1,
    };
    let lo = a0 + b0;
    if hi <= lo {
        return vec![];
    }
    let span_a = (a1 - a0 + 1) as usize;
    let span_b = (b1 - b0 + 1) as usize;
    let dense = a.len() * 4 > span_a && b.len() * 4 > span_b;
    let out_len = (hi - lo) as usize;
    if dense || out_len <= 4 * (a.len() * b.len()).max(64) {
        let mut acc = vec![BigInt::zero(); out_len];
        if dense {
            let mut da = vec![BigInt::zero(); span_a];
            for (e, c) in a {
                da[(e - a0) as usize] = c.clone();
            }
            let mut db = vec![BigInt::zero(); span_b];
            for (e, c) in b {
                db[(e - b0) as usize] = c.clone();
            }
            for (i, x) in da.iter().enumerate() {
                if x.is_zero() || i >= out_len {
                    continue;
                }
                let jmax = (out_len - i).min(span_b);
                for (j, y) in db[..jmax].iter().enumerate() {
                    if !y.is_zero() {
                        acc[i + j] += x * y;
                    }
                }
            }
        } else {
            for (ea, ca) in a {
                for (eb, cb) in b {
                    let e = ea + eb;
                    if e >= hi {
                        break;
                    }
                    acc[(e - lo) as usize] += ca * cb;
                }
            }
        }
        acc.into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (lo + k as i64, c))
            .collect()
    } else {
        let mut acc: BTreeMap<i64, BigInt> = BTreeMap::new();
        for (ea, ca) in a {
            for (eb, cb) in b {
                let e = ea + eb;
                if e >= hi {
                    break;
                }
                *acc.entry(e).or_insert_with(BigInt::zero) += ca * cb;
            }
        }
        acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    }
}

/// Truncated expansion of `prod_{n = g mod delta, n > 0} (1 - q^n)` below `q^t`,
/// by direct multiplication of the factors. `g = 0` gives `(q^delta; q^delta)`.
pub fn pochhammer(g: u64, delta: u64, t: i64) -> QSeries {
    assert!(delta >= 1);
    let mut c = vec![BigInt::zero(); t.max(0) as usize];
    if t <= 0 {
        return QSeries::big_o(Rational64::from_integer(t));
    }
    c[0] = BigInt::one();
    let first = if g.is_multiple_of(delta) { delta } else { g % delta };
    let mut n = first;
    while (n as i64) < t {
        mul_one_minus_q_pow(&mut c, n as usize, 1);
        n += delta;
    }
    QSeries::from_int_coeffs(c, Rational64::zero(), false)
}

/// In place: multiply a dense coefficient vector by `(1 - q^n)^e`.
pub(crate) fn mul_one_minus_q_pow(c: &mut [BigInt], n: usize, e: i64) {
    let len = c.len();
    if n >= len {
        return;
    }
    if e > 0 {
        for _ in 0..e {
            for k in (n..len).rev() {
                let x = c[k - n].clone();
                c[k] -= x;
            }
        }
    } else {
        for _ in 0..(-e) {
            for k in n..len {
                let x = c[k - n].clone();
                c[k] += x;
            }
        }
    }
}

fn fmt_exp(e: Rational64) -> String {
    if e.is_integer() {
        format!("{}", e.numer())
    } else {
        format!("({}/{})", e.numer(), e.denom())
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            let neg = c.is_negative();
            let a = c.abs();
            let sign = match (first, neg) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            write!(f, "{sign}")?;
            let mono = match e.cmp(&Rational64::zero()) {
                Ordering::Equal => String::new(),
                _ if e.is_one() => "q".to_string(),
                _ => format!("q^{}", fmt_exp(e)),
            };
            if mono.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{a}*{mono}")?;
            }
            first = false;
        }
        match self.trunc() {
            Some(t) => {
                if first {
                    write!(f, "O(q^{})", fmt_exp(t))
                } else {
                    write!(f, " + O(q^{})", fmt_exp(t))
                }
            }
            None if first => write!(f, "0"),
            None => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }
    fn c(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }
    fn poly(cs: &[i64]) -> QSeries {
        QSeries::from_int_coeffs(cs.iter().map(|&x| x.into()).collect(), r(0, 1), true)
    }

    #[test]
    fn cancellation_and_identity() {
        let f = poly(&[1, -1]);
        let g = QSeries::monomial(c(1), r(1, 1));
        assert_eq!(f.add(&g), QSeries::one());
        assert_eq!(f.add(&QSeries::zero()), f);
    }

    #[test]
    fn mixed_denominators() {
        let s = QSeries::monomial(c(1), r(1, 2)).add(&QSeries::monomial(c(1), r(1, 3)));
        assert_eq!(s.w(), 6);
        assert_eq!(s.coeff(r(3, 6)), c(1));
        assert_eq!(s.coeff(r(2, 6)), c(1));
        assert_eq!(s.num_terms(), 2);
    }

    #[test]
    fn telescoping_product() {
        let t = 9;
        let geo = QSeries::from_int_coeffs(vec![BigInt::one(); t + 1], r(0, 1), false);
        let p = poly(&[1, -1]).mul(&geo);
        assert_eq!(p.trunc(), Some(r(t as i64 + 1, 1)));
        assert_eq!(p.terms().count(), 1);
        assert_eq!(p.coeff(r(0, 1)), c(1));
    }

    #[test]
    fn laurent_shift() {
        let f = QSeries::monomial(c(1), r(-1, 1)).add(&QSeries::constant(c(2)));
        let g = QSeries::monomial(c(1), r(1, 1));
        assert_eq!(f.mul(&g), poly(&[1, 2]));
        assert_eq!(f.mul(&QSeries::one()), f);
    }

    #[test]
    fn geometric_inverse() {
        let f = poly(&[1, -1]).truncate(r(4, 1));
        let g = f.invert().unwrap();
        assert_eq!(g.to_string(), "1 + q + q^2 + q^3 + O(q^4)");
        let m = QSeries::monomial(c(1), r(1, 1)).invert().unwrap();
        assert_eq!(m, QSeries::monomial(c(1), r(-1, 1)));
        assert_eq!(QSeries::big_o(r(3, 1)).invert(), Err(Error::ZeroSeries));
    }

    #[test]
    fn rational_leading_coefficient_inverse() {
        let f = QSeries::from_terms(&[(r(0, 1), c(2)), (r(1, 2), c(3))], Some(r(3, 1)));
        let g = f.invert().unwrap();
        let p = f.mul(&g);
        assert_eq!(p.lead(), Some((r(0, 1), c(1))));
        assert_eq!(p.num_terms(), 1);
        assert_eq!(p.trunc(), Some(r(3, 1)));
    }

    #[test]
    fn pochhammer_small_cases() {
        assert_eq!(pochhammer(0, 1, 13).to_string(), "1 - q - q^2 + q^5 + q^7 - q^12 + O(q^13)");
        assert_eq!(pochhammer(5, 10, 6).to_string(), "1 - q^5 + O(q^6)");
    }

    #[test]
    fn slicing_and_dilation() {
        let f = poly(&[0, 1, 2, 3, 4, 5, 6]).truncate(r(7, 1));
        assert_eq!(f.slice(3, 1).to_string(), "1 + 4*q + O(q^2)");
        assert_eq!(f.slice(3, 0).to_string(), "3*q + 6*q^2 + O(q^3)");
        assert_eq!(poly(&[1, 1]).dilate(3).to_string(), "1 + q^3");
    }
}
