//! Q[z]-module bases for modular functions on Gamma1(N) with poles only at
//! infinity, and reduction of such functions against a basis.
//!
//! A basis `1, e_1, .., e_w` is z-reduced when the pole orders of its
//! elements are pairwise incongruent modulo the pole order of `z`. Then
//! every element of the span has a unique leading term `c z^j e_i`, so
//! cancelling leading terms is a complete membership test.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Rational64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::arith::Q;
use crate::error::{Error, Result};
use crate::etaquot::GenEtaQuotient;
use crate::geinf::Generator;
use crate::modular::{cusps, order_geq_at_cusp};
use crate::qseries::QSeries;

/// Terms past the constant kept while building a basis; only a bug check.
pub const AB_GUARD: i64 = 20;
/// Terms past the pole budget checked when certifying a reduction.
pub const DEFAULT_GUARD: i64 = 50;

/// A rational linear combination of eta-quotients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Combination {
    pub terms: BTreeMap<GenEtaQuotient, Q>,
}

impl Combination {
    pub fn monomial(h: GenEtaQuotient) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(h, Q::one());
        Combination { terms }
    }

    pub fn one(n: u64) -> Self {
        Combination::monomial(GenEtaQuotient::one(n))
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1 && self.terms.values().next().unwrap().is_one()
    }

    pub fn scale(&self, c: &Q) -> Combination {
        Combination { terms: self.terms.iter().map(|(h, x)| (h.clone(), x * c)).filter(|(_, x)| !x.is_zero()).collect() }
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, other: &Combination, c: &Q) -> Combination {
        let mut terms = self.terms.clone();
        for (h, x) in &other.terms {
            let e = terms.entry(h.clone()).or_insert_with(Q::zero);
            *e += x * c;
        }
        terms.retain(|_, x| !x.is_zero());
        Combination { terms }
    }

    /// Multiply every quotient by `g`, merging equal functions at level `n`.
    pub fn mul_quotient(&self, g: &GenEtaQuotient, n: u64) -> Result<Combination> {
        let mut terms: BTreeMap<GenEtaQuotient, Q> = BTreeMap::new();
        for (h, x) in &self.terms {
            let p = h.mul(g).normalized(n)?;
            *terms.entry(p).or_insert_with(Q::zero) += x;
        }
        terms.retain(|_, x| !x.is_zero());
        Ok(Combination { terms })
    }

    /// Expansion below `q^bound`.
    pub fn expansion(&self, bound: i64) -> Result<QSeries> {
        let b = Rational64::from_integer(bound);
        let mut s = QSeries::zero().truncate(b);
        for (h, x) in &self.terms {
            s = s.add(&h.expansion(b)?.scale(x));
        }
        Ok(s)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.terms.iter().map(|(h, x)| json!({"coeff": x.to_string(), "quotient": h.to_json()})).collect())
    }
}

impl fmt::Display for Combination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (h, x)) in self.terms.iter().enumerate() {
            let neg = x.is_negative();
            if k > 0 {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            } else if neg {
                write!(f, "-")?;
            }
            let a = x.abs();
            if a.is_one() {
                write!(f, "{h}")?;
            } else {
                write!(f, "{a}*{h}")?;
            }
        }
        Ok(())
    }
}

/// `1, e_1, .., e_w` over `Q[z]`.
#[derive(Clone, Debug)]
pub struct ModuleBasis {
    pub level: u64,
    pub z: GenEtaQuotient,
    /// Pole order of `z` at infinity.
    pub z_pole: i64,
    /// `elements[0]` is the constant 1.
    pub elements: Vec<Combination>,
    pub pole_orders: Vec<i64>,
}

impl ModuleBasis {
    pub fn w(&self) -> usize {
        self.elements.len() - 1
    }

    /// Index of the element whose pole order is congruent to `p`.
    pub fn slot(&self, p: i64) -> Option<usize> {
        self.pole_orders.iter().position(|&e| (p - e).rem_euclid(self.z_pole) == 0)
    }

    /// `z^j e_i` as a combination.
    pub fn term(&self, i: usize, j: u64) -> Result<Combination> {
        self.elements[i].mul_quotient(&self.z.pow(j as i64), self.level)
    }

    pub fn element_name(&self, i: usize) -> String {
        match (i, self.w()) {
            (0, _) => "1".into(),
            (_, 1) => "e".into(),
            _ => format!("e{i}"),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "N": self.level,
            "z": self.z.to_json(),
            "z_pole": self.z_pole,
            "elements": self.elements.iter().map(|e| e.to_json()).collect::<Vec<_>>(),
            "pole_orders": self.pole_orders,
        })
    }

    fn check_invariants(&self) -> Result<()> {
        for i in 0..self.elements.len() {
            for k in 0..i {
                if (self.pole_orders[i] - self.pole_orders[k]).rem_euclid(self.z_pole) == 0 {
                    return Err(Error::Diagnostic(format!("basis elements {k} and {i} share a residue class")));
                }
            }
        }
        let cs = cusps(self.level);
        for e in &self.elements {
            for h in e.terms.keys() {
                for s in cs.iter().filter(|s| !s.cusp.is_infinity()) {
                    if order_geq_at_cusp(h, self.level, s).is_negative() {
                        return Err(Error::Diagnostic(format!("{h} has a pole at {}", s.cusp)));
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for ModuleBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "z = {} (pole {})", self.z, self.z_pole)?;
        for (i, e) in self.elements.iter().enumerate().skip(1) {
            writeln!(f, "{} = {} (pole {})", self.element_name(i), e, self.pole_orders[i])?;
        }
        Ok(())
    }
}

fn pole_of(s: &QSeries) -> Option<i64> {
    s.lead_exponent().map(|e| {
        assert!(e.is_integer(), "non-integral leading exponent {e}");
        -e.to_integer()
    })
}

struct Entry {
    comb: Combination,
    pole: i64,
}

struct Closure<'a> {
    level: u64,
    z: &'a GenEtaQuotient,
    n: i64,
    bound: i64,
    entries: Vec<Entry>,
}

impl Closure<'_> {
    /// Cancel leading terms against the current entries. Returns the
    /// remainder when its residue class has no entry of smaller pole.
    fn reduce(&self, mut comb: Combination, mut series: QSeries) -> Result<Option<Entry>> {
        loop {
            let Some(p) = pole_of(&series) else {
                return Ok(None);
            };
            if p < 0 {
                return Err(Error::Diagnostic(format!("remainder vanishes to order {} at infinity but is not zero", -p)));
            }
            let slot = self.entries.iter().position(|e| (p - e.pole).rem_euclid(self.n) == 0);
            match slot {
                Some(i) if self.entries[i].pole <= p => {
                    let j = (p - self.entries[i].pole) / self.n;
                    let zj = self.z.pow(j);
                    let tc = self.entries[i].comb.mul_quotient(&zj, self.level)?;
                    let ts = tc.expansion(self.bound)?;
                    let c = series.lead().unwrap().1 / ts.lead().unwrap().1;
                    comb = comb.add_scaled(&tc, &-c.clone());
                    series = series.sub(&ts.scale(&c));
                    if pole_of(&series).is_some_and(|q| q >= p) {
                        return Err(Error::Diagnostic(format!("pole order did not decrease from {p}")));
                    }
                }
                _ => {
                    let c = series.lead().unwrap().1;
                    let inv = Q::one() / c;
                    return Ok(Some(Entry { comb: comb.scale(&inv), pole: p }));
                }
            }
        }
    }
}

fn choose_z(gens: &[Generator], level: u64) -> &Generator {
    gens.iter()
        .min_by(|a, b| {
            a.pole_order()
                .cmp(&b.pole_order())
                .then_with(|| a.quotient.weight().cmp(&b.quotient.weight()))
                .then_with(|| a.quotient.canonical_vector(level).unwrap().cmp(&b.quotient.canonical_vector(level).unwrap()))
        })
        .unwrap()
}

/// Module basis of `Q[gens]` over `Q[z]`, with `z` a generator of minimal
/// pole order (ties: smaller exponent weight, then exponent vector). A new
/// residue class is filled by the first product reaching it, taking
/// products by pole order and then by larger exponent vector.
pub fn algorithm_ab(gens: &[Generator], level: u64) -> Result<ModuleBasis> {
    algorithm_ab_with_z(gens, level, None)
}

/// As [`algorithm_ab`], with a caller-chosen `z`. It must have poles only
/// at infinity. The ring is the same for every choice; only the basis and
/// the polynomials change (two choices of pole order 1 differ by a constant).
pub fn algorithm_ab_with_z(gens: &[Generator], level: u64, z: Option<&GenEtaQuotient>) -> Result<ModuleBasis> {
    if gens.is_empty() {
        return Err(Error::Diagnostic("no generators".into()));
    }
    if let Some(g) = gens.iter().find(|g| g.pole_order() <= 0) {
        return Err(Error::Diagnostic(format!("generator {} has no pole at infinity", g.quotient)));
    }
    let (z, z_pole) = match z {
        None => {
            let zg = choose_z(gens, level);
            (zg.quotient.clone(), zg.pole_order())
        }
        Some(z) => {
            let z = z.normalized(level)?;
            let orders = crate::modular::orders_at_all_cusps(&z, level);
            let (inf, rest) = orders.split_last().unwrap();
            if !inf.is_integer() || !inf.is_negative() || rest.iter().any(|o| o.is_negative()) {
                return Err(Error::Diagnostic(format!("{z} is not a modular function with poles only at infinity")));
            }
            (z, -inf.to_integer().to_i64().unwrap())
        }
    };
    let bound = 1 + AB_GUARD;
    let mut cl = Closure { level, z: &z, n: z_pole, bound, entries: vec![] };
    cl.entries.push(Entry { comb: Combination::one(level), pole: 0 });

    // pending products, processed smallest pole first; among equal poles
    // the larger exponent vector goes first
    let mut pending: Vec<(i64, Vec<Vec<i128>>, Combination)> = vec![];
    let key = |c: &Combination| -> Result<Vec<Vec<i128>>> {
        let mut k = c.terms.keys().map(|h| h.canonical_vector(level)).collect::<Result<Vec<_>>>()?;
        k.sort();
        k.reverse();
        Ok(k)
    };
    let push_products = |pending: &mut Vec<(i64, Vec<Vec<i128>>, Combination)>, e: &Combination, pole: i64| -> Result<()> {
        for g in gens {
            if g.quotient.same_function(&z) {
                continue;
            }
            let c = e.mul_quotient(&g.quotient, level)?;
            pending.push((pole + g.pole_order(), key(&c)?, c));
        }
        Ok(())
    };
    push_products(&mut pending, &cl.entries[0].comb.clone(), 0)?;

    let cap = 10 * gens.len();
    let mut rounds = 0;
    while !pending.is_empty() {
        let k = (0..pending.len())
            .min_by(|&a, &b| pending[a].0.cmp(&pending[b].0).then_with(|| pending[b].1.cmp(&pending[a].1)))
            .unwrap();
        let (_, _, comb) = pending.swap_remove(k);
        let series = comb.expansion(bound)?;
        let Some(rem) = cl.reduce(comb, series)? else {
            continue;
        };
        rounds += 1;
        if rounds > cap {
            return Err(Error::Diagnostic(format!("module basis did not close within {cap} rounds")));
        }
        let slot = cl.entries.iter().position(|e| (rem.pole - e.pole).rem_euclid(cl.n) == 0);
        let (comb, pole) = (rem.comb.clone(), rem.pole);
        match slot {
            None => cl.entries.push(rem),
            Some(i) => {
                let old = std::mem::replace(&mut cl.entries[i], rem);
                let k = key(&old.comb)?;
                pending.push((old.pole, k, old.comb));
            }
        }
        push_products(&mut pending, &comb, pole)?;
    }

    cl.entries.sort_by_key(|e| e.pole);
    let basis = ModuleBasis {
        level,
        z_pole: cl.n,
        elements: cl.entries.iter().map(|e| e.comb.clone()).collect(),
        pole_orders: cl.entries.iter().map(|e| e.pole).collect(),
        z,
    };
    basis.check_invariants()?;
    Ok(basis)
}

/// Polynomial coefficients: `(i, j) -> c` for the term `c z^j e_i`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Expression {
    pub coeffs: BTreeMap<(usize, u64), Q>,
}

impl Expression {
    /// Coefficients of `p_i(z)`, constant term first.
    pub fn poly(&self, i: usize) -> Vec<Q> {
        let deg = self.coeffs.keys().filter(|k| k.0 == i).map(|k| k.1).max();
        match deg {
            None => vec![],
            Some(d) => (0..=d).map(|j| self.coeffs.get(&(i, j)).cloned().unwrap_or_else(Q::zero)).collect(),
        }
    }

    pub fn combination(&self, basis: &ModuleBasis) -> Result<Combination> {
        let mut c = Combination { terms: BTreeMap::new() };
        for (&(i, j), x) in &self.coeffs {
            c = c.add_scaled(&basis.term(i, j)?, x);
        }
        Ok(c)
    }

    pub fn expansion(&self, basis: &ModuleBasis, bound: i64) -> Result<QSeries> {
        self.combination(basis)?.expansion(bound)
    }

    /// Terms ordered by pole order, largest first.
    pub fn display(&self, basis: &ModuleBasis) -> String {
        let mut ts: Vec<(i64, usize, u64, &Q)> =
            self.coeffs.iter().map(|(&(i, j), x)| (basis.pole_orders[i] + j as i64 * basis.z_pole, i, j, x)).collect();
        ts.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        if ts.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, &(_, i, j, x)) in ts.iter().enumerate() {
            let mut mono = String::new();
            match j {
                0 => {}
                1 => mono.push('z'),
                _ => mono.push_str(&format!("z^{j}")),
            }
            if i > 0 {
                mono.push_str(&basis.element_name(i));
            }
            let a = x.abs();
            let coef = if a.is_integer() { a.to_integer().to_string() } else { format!("({a})") };
            let body = if mono.is_empty() {
                coef
            } else if a.is_one() {
                mono
            } else {
                format!("{coef}{mono}")
            };
            if k == 0 {
                if x.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(if x.is_negative() { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        out
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.coeffs.iter().map(|(&(i, j), x)| json!([i, j, x.to_string()])).collect())
    }
}

#[derive(Clone, Debug)]
pub struct Reduction {
    pub expression: Expression,
    pub remainder: QSeries,
}

/// Cancel leading terms of `f` down to order at least 1 at infinity.
/// `f` must have poles only at infinity and integral exponents.
pub fn reduce(f: &QSeries, basis: &ModuleBasis) -> Result<Reduction> {
    let trunc = f.trunc().ok_or_else(|| Error::Diagnostic("reduce needs a truncated series".into()))?;
    if trunc < Rational64::one() {
        return Err(Error::InsufficientTruncation { need: "1".into(), have: trunc.to_string() });
    }
    let bound = trunc.ceil().to_integer();
    let mut series = f.clone();
    let mut expr = Expression::default();
    while let Some(p) = pole_of(&series) {
        if p < 0 {
            break;
        }
        let i = basis.slot(p).ok_or_else(|| Error::NotMember(format!("no basis element for pole order {p}")))?;
        if basis.pole_orders[i] > p {
            return Err(Error::NotMember(format!("pole order {p} is below basis element {}", basis.element_name(i))));
        }
        let j = ((p - basis.pole_orders[i]) / basis.z_pole) as u64;
        let ts = basis.term(i, j)?.expansion(bound)?;
        let c = series.lead().unwrap().1 / ts.lead().unwrap().1;
        series = series.sub(&ts.scale(&c));
        *expr.coeffs.entry((i, j)).or_insert_with(Q::zero) += c;
        let next = pole_of(&series);
        assert!(next.is_none_or(|q| q < p), "pole order did not decrease from {p}");
    }
    expr.coeffs.retain(|_, x| !x.is_zero());
    Ok(Reduction { expression: expr, remainder: series })
}

/// Express `f` in the basis. The remainder left by [`reduce`] vanishes at
/// infinity and is holomorphic at every other cusp, hence is zero; any
/// surviving coefficient means the input or the machinery is wrong.
pub fn membership_and_express(f: &QSeries, basis: &ModuleBasis) -> Result<Expression> {
    let r = reduce(f, basis)?;
    if let Some((e, c)) = r.remainder.lead() {
        return Err(Error::VerificationFailure(format!("coefficient {c} of q^{e} survives reduction")));
    }
    Ok(r.expression)
}

/// Truncation needed to certify a function with the given pole order.
pub fn certification_bound(pole: i64, guard: i64) -> i64 {
    pole.max(0) + guard
}

pub fn pole_order_of(f: &QSeries) -> Option<i64> {
    pole_of(f)
}
