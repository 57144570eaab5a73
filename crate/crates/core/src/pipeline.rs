//! Derivation of identities `h phi g_(m,t) = sum p_i(z) e_i`, end to end.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::admissible::{f_prefactor, find_n, find_phi_with_box, phi_criterion, DEFAULT_PHI_BOX};
use crate::arith::{qi, to_r64, Q};
use crate::error::{Error, Result};
use crate::etaquot::{GenEtaQuotient, PartitionFunctionSpec, Route};
use crate::geinf::{generators_ge_inf, make_generator, Generator};
use crate::lattice::{self, Vector};
use crate::modular::{cusps, order_geq_at_cusp, order_lower_bounds, CuspData};
use crate::qseries::QSeries;
use crate::radu::{algorithm_ab_with_z, membership_and_express, Expression, ModuleBasis, DEFAULT_GUARD};

/// Largest total slack explored by [`find_h`].
pub const H_SEARCH_CAP: i64 = 4096;

fn generator_cache() -> &'static Mutex<HashMap<u64, Arc<Vec<Generator>>>> {
    static C: OnceLock<Mutex<HashMap<u64, Arc<Vec<Generator>>>>> = OnceLock::new();
    C.get_or_init(Default::default)
}

type BasisCache = Mutex<HashMap<(u64, Option<GenEtaQuotient>), Arc<ModuleBasis>>>;

fn basis_cache() -> &'static BasisCache {
    static C: OnceLock<BasisCache> = OnceLock::new();
    C.get_or_init(Default::default)
}

/// Generators of GE∞(N), computed once per level.
pub fn generators(n: u64) -> Result<Arc<Vec<Generator>>> {
    if let Some(g) = generator_cache().lock().unwrap().get(&n) {
        return Ok(g.clone());
    }
    let g = Arc::new(generators_ge_inf(n)?);
    generator_cache().lock().unwrap().entry(n).or_insert(g.clone());
    Ok(g)
}

/// Module basis of GE∞(N), computed once per level and choice of `z`.
pub fn module_basis(n: u64, z: Option<&GenEtaQuotient>) -> Result<Arc<ModuleBasis>> {
    let key = (n, z.cloned());
    if let Some(b) = basis_cache().lock().unwrap().get(&key) {
        return Ok(b.clone());
    }
    let gens = generators(n)?;
    let b = Arc::new(algorithm_ab_with_z(&gens, n, z)?);
    basis_cache().lock().unwrap().entry(key).or_insert(b.clone());
    Ok(b)
}

/// A multiplier `h = prod g_j^(t_j)` over the generators.
#[derive(Clone, Debug)]
pub struct HChoice {
    pub h: GenEtaQuotient,
    pub exponents: Vec<i64>,
    /// Orders of `h` at the cusps other than infinity.
    pub orders: Vec<i64>,
    pub ord_inf: i64,
}

/// Smallest integer `c` with `c + d > -1`.
fn least_order(d: &Q) -> i128 {
    (-d).floor().to_integer().to_i128().unwrap()
}

/// All `y` in the lattice with `y >= c` and `sum (y - c)` minimal, if that
/// minimum is at most `cap`.
fn minimal_points(ech: &[Vector], c: &[i128], cap: i128) -> Option<(i128, Vec<Vector>)> {
    let p = c.len();
    let pivots: Vec<usize> = ech.iter().map(|r| lattice::pivot_col(r).unwrap()).collect();

    struct S<'a> {
        ech: &'a [Vector],
        pivots: &'a [usize],
        c: &'a [i128],
        best: i128,
        sols: Vec<Vector>,
    }

    fn fixed_cost(v: &Vector, c: &[i128], from: usize, to: usize) -> Option<i128> {
        let mut s = 0;
        for j in from..to {
            if v[j] < c[j] {
                return None;
            }
            s += v[j] - c[j];
        }
        Some(s)
    }

    fn go(st: &mut S, r: usize, v: &mut Vector, cost: i128) {
        let p = st.c.len();
        let from = if r == 0 { 0 } else { st.pivots[r - 1] + 1 };
        if r == st.ech.len() {
            if let Some(extra) = fixed_cost(v, st.c, from, p) {
                let total = cost + extra;
                if total < st.best {
                    st.best = total;
                    st.sols.clear();
                }
                if total == st.best {
                    st.sols.push(v.clone());
                }
            }
            return;
        }
        let pc = st.pivots[r];
        let Some(extra) = fixed_cost(v, st.c, from, pc) else {
            return;
        };
        let cost = cost + extra;
        if cost > st.best {
            return;
        }
        let piv = st.ech[r][pc];
        let mut k = Integer::div_ceil(&(st.c[pc] - v[pc]), &piv);
        loop {
            let y = v[pc] + k * piv;
            if cost + (y - st.c[pc]) > st.best {
                break;
            }
            let row = st.ech[r].clone();
            for (a, b) in v.iter_mut().zip(&row) {
                *a += k * b;
            }
            go(st, r + 1, v, cost + (y - st.c[pc]));
            for (a, b) in v.iter_mut().zip(&row) {
                *a -= k * b;
            }
            k += 1;
        }
    }

    let mut limit = 16.min(cap);
    loop {
        let mut st = S { ech, pivots: &pivots, c, best: limit, sols: vec![] };
        let mut v = vec![0; p];
        go(&mut st, 0, &mut v, 0);
        if !st.sols.is_empty() {
            st.sols.sort();
            st.sols.dedup();
            return Some((st.best, st.sols));
        }
        if limit >= cap {
            return None;
        }
        limit = (limit * 2).min(cap);
    }
}

/// The multiplier `h` making `hF` a function with poles only at infinity and
/// maximal order there, given lower bounds for the orders of `F` at every
/// cusp of [`cusps`] and the generators of GE∞(N). Ties go to the smaller
/// exponent vector of `h`.
pub fn find_h(bounds: &[(CuspData, Q)], gens: &[Generator], level: u64) -> Result<HChoice> {
    let idx: Vec<usize> = (0..bounds.len()).filter(|&i| !bounds[i].0.cusp.is_infinity()).collect();
    let c: Vec<i128> = idx.iter().map(|&i| least_order(&bounds[i].1)).collect();
    let mut cols: Vec<Vector> = vec![];
    for g in gens {
        let mut col = vec![];
        for &i in &idx {
            let o = &g.orders[i];
            if !o.is_integer() {
                return Err(Error::Diagnostic(format!("order {o} of {} is not integral", g.quotient)));
            }
            col.push(o.to_integer().to_i128().unwrap());
        }
        cols.push(col);
    }
    let ech = lattice::echelon(&cols, idx.len());
    let (_, sols) = minimal_points(&ech, &c, H_SEARCH_CAP as i128)
        .ok_or_else(|| Error::NoHFound(format!("no admissible order vector within total slack {H_SEARCH_CAP}")))?;

    // rows: cusps, columns: generators
    let a: Vec<Vector> = (0..idx.len()).map(|s| cols.iter().map(|col| col[s]).collect()).collect();
    let mut best: Option<(Vector, HChoice)> = None;
    for y in sols {
        let t = lattice::solve(&a, gens.len(), &y).ok_or_else(|| Error::Diagnostic(format!("order vector {y:?} not in the generator lattice")))?;
        let mut h = GenEtaQuotient::one(level);
        for (g, &e) in gens.iter().zip(&t) {
            if e != 0 {
                h = h.mul(&g.quotient.pow(e as i64));
            }
        }
        let h = h.normalized(level)?;
        let gen = make_generator(h.clone(), level);
        let orders: Vec<i64> = idx.iter().map(|&i| gen.orders[i].to_integer().to_i64().unwrap()).collect();
        if orders.iter().zip(&y).any(|(&o, &v)| o as i128 != v) {
            return Err(Error::Diagnostic(format!("orders of {h} do not match {y:?}")));
        }
        if gen.ord_inf != -orders.iter().sum::<i64>() {
            return Err(Error::Diagnostic(format!("orders of {h} do not sum to zero")));
        }
        let key = h.canonical_vector(level)?;
        let choice = HChoice { h, exponents: t.iter().map(|&x| x as i64).collect(), orders, ord_inf: gen.ord_inf };
        if best.as_ref().is_none_or(|(k, _)| key < *k) {
            best = Some((key, choice));
        }
    }
    Ok(best.unwrap().1)
}

#[derive(Clone, Debug)]
pub struct DeriveOptions {
    /// Coefficients checked past the pole order of `hF`.
    pub guard: i64,
    /// Minimum certification order.
    pub order: i64,
    pub phi_box: i64,
    /// Use this `z` instead of the default choice.
    pub z: Option<GenEtaQuotient>,
}

impl Default for DeriveOptions {
    fn default() -> Self {
        DeriveOptions { guard: DEFAULT_GUARD, order: 0, phi_box: DEFAULT_PHI_BOX, z: None }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    Level,
    Phi,
    Generators,
    Basis,
    H,
    Express,
    Certify,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Stage::Level => "level",
            Stage::Phi => "phi",
            Stage::Generators => "generators",
            Stage::Basis => "basis",
            Stage::H => "h",
            Stage::Express => "express",
            Stage::Certify => "certify",
        };
        write!(f, "{s}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Derived,
    /// Certified, with `phi` and `h` supplied by the caller.
    VerifiedOnly,
    Failed { stage: Stage, error: Error },
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Derived => write!(f, "Derived"),
            Status::VerifiedOnly => write!(f, "VerifiedOnly"),
            Status::Failed { stage, error } => write!(f, "Failed({stage}: {error})"),
        }
    }
}

/// `h phi g_(m,t) = sum_i p_i(z) e_i`.
#[derive(Clone, Debug)]
pub struct Identity {
    pub spec: PartitionFunctionSpec,
    pub m: u64,
    pub t: u64,
    pub n: Option<u64>,
    pub phi: Option<GenEtaQuotient>,
    pub h: Option<GenEtaQuotient>,
    pub basis: Option<Arc<ModuleBasis>>,
    pub rhs: Option<Expression>,
    /// Pole order of `hF` at infinity.
    pub pole: Option<i64>,
    pub certified_to: Option<i64>,
    pub status: Status,
}

impl Identity {
    fn new(spec: &PartitionFunctionSpec, m: u64, t: u64) -> Self {
        Identity {
            spec: spec.clone(),
            m,
            t,
            n: None,
            phi: None,
            h: None,
            basis: None,
            rhs: None,
            pole: None,
            certified_to: None,
            status: Status::Failed { stage: Stage::Level, error: Error::Diagnostic("not run".into()) },
        }
    }

    fn fail(mut self, stage: Stage, error: Error) -> Self {
        self.status = Status::Failed { stage, error };
        self
    }

    pub fn is_certified(&self) -> bool {
        matches!(self.status, Status::Derived | Status::VerifiedOnly)
    }

    pub fn into_result(self) -> Result<Identity> {
        match &self.status {
            Status::Failed { stage, error } => Err(match error {
                Error::Diagnostic(s) => Error::Diagnostic(format!("{stage}: {s}")),
                e => e.clone(),
            }),
            _ => Ok(self),
        }
    }

    /// `h phi`, the eta-quotient in front of the generating function.
    pub fn prefactor(&self) -> Option<GenEtaQuotient> {
        let (phi, h) = (self.phi.as_ref()?, self.h.as_ref()?);
        phi.mul(h).normalized(self.n?).ok()
    }

    /// Exponent of the bare power of `q` in front of `sum a(mn+t) q^n`.
    pub fn q_shift(&self) -> Option<Q> {
        let p = self.prefactor()?;
        Some(f_prefactor(&self.spec, self.m, self.t, &p))
    }

    /// Polynomial coefficients of `p_0`, as listed (constant first).
    pub fn poly(&self, i: usize) -> Vec<Q> {
        self.rhs.as_ref().map(|r| r.poly(i)).unwrap_or_default()
    }

    /// Greatest common divisor of the numerators when all rhs coefficients
    /// are integers.
    pub fn content(&self) -> Option<BigInt> {
        let r = self.rhs.as_ref()?;
        let mut g = BigInt::zero();
        for c in r.coeffs.values() {
            if !c.is_integer() {
                return None;
            }
            g = g.gcd(&c.to_integer());
        }
        Some(g)
    }

    /// `a(mn+t) = 0 mod u` for every `n` below the certification order.
    pub fn check_congruence(&self, u: &BigInt) -> bool {
        let terms = self.certified_to.unwrap_or(0).max(1) as usize;
        let len = self.m as usize * terms + self.t as usize;
        let a = self.spec.gf_coeffs_direct(len);
        (0..terms).all(|k| (&a[self.m as usize * k + self.t as usize] % u).is_zero())
    }

    pub fn rhs_display(&self) -> String {
        match (&self.rhs, &self.basis) {
            (Some(r), Some(b)) => r.display(b),
            _ => "?".into(),
        }
    }

    pub fn to_json(&self) -> Value {
        let status = match &self.status {
            Status::Failed { stage, error } => json!({"Failed": {"stage": stage.to_string(), "reason": error.to_string()}}),
            s => json!(s.to_string()),
        };
        json!({
            "spec": self.spec.to_json(),
            "m": self.m,
            "t": self.t,
            "N": self.n,
            "phi": self.phi.as_ref().map(|p| p.to_json()),
            "h": self.h.as_ref().map(|p| p.to_json()),
            "z": self.basis.as_ref().map(|b| b.z.to_json()),
            "basis": self.basis.as_ref().map(|b| b.elements.iter().map(|e| e.to_json()).collect::<Vec<_>>()),
            "rhs": self.rhs.as_ref().map(|r| r.to_json()),
            "certified_to": self.certified_to.map(|c| format!("{c}/1")),
            "status": status,
            "identity": if self.rhs.is_some() { json!(self.to_string()) } else { Value::Null },
        })
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.prefactor(), self.q_shift()) {
            (Some(p), Some(s)) if self.rhs.is_some() => {
                write!(f, "{} * sum a({}n+{}) q^n = {}", pochhammer_form(&p, &s), self.m, self.t, self.rhs_display())
            }
            _ => write!(f, "{}", self.status),
        }
    }
}

/// `q^s` times the Pochhammer products of `h`, as text.
pub fn pochhammer_form(h: &GenEtaQuotient, s: &Q) -> String {
    let c = h.canonicalize().unwrap_or_else(|_| h.clone());
    let mut num = vec![];
    let mut den = vec![];
    if !s.is_zero() {
        let e = s.abs();
        let t = if e == qi(1) { "q".to_string() } else { format!("q^{e}") };
        if s.is_positive() { num.push(t) } else { den.push(t) }
    }
    let mut put = |base: String, e: i64| {
        let t = if e.abs() == 1 { base } else { format!("{base}^{}", e.abs()) };
        if e > 0 { num.push(t) } else { den.push(t) }
    };
    for (&d, &e) in &c.a {
        put(if d == 1 { "(q;q)".into() } else { format!("(q^{d};q^{d})") }, e);
    }
    for (&(d, g), e) in &c.ag {
        let gs = if g == 1 { "q".to_string() } else { format!("q^{g}") };
        put(format!("({gs},q^{};q^{d})", d - g), e.to_integer());
    }
    let n = if num.is_empty() { "1".into() } else { num.join(" ") };
    if den.is_empty() {
        n
    } else {
        format!("{n} / ({})", den.join(" "))
    }
}

/// `sum_(n < terms) a(mn+t) q^n` by direct factor multiplication.
fn slice_direct(spec: &PartitionFunctionSpec, m: u64, t: u64, terms: usize) -> Vec<BigInt> {
    let len = m as usize * terms + t as usize;
    let c = spec.gf_coeffs_direct(len.max(1));
    (0..terms).map(|n| c[m as usize * n + t as usize].clone()).collect()
}

/// `P g_(m,t)` below `q^bound`, for a quotient `P` making the exponents integral.
pub fn prefactored_series(spec: &PartitionFunctionSpec, m: u64, t: u64, p: &GenEtaQuotient, bound: i64, route: Route) -> Result<QSeries> {
    let shift = (qi(t as i64) - spec.ell()) / qi(m as i64);
    let e = p.prefactor_exponent() + &shift;
    if !e.is_integer() {
        return Err(Error::Diagnostic(format!("q-exponent {e} of the prefactored series is not integral")));
    }
    let e = e.to_integer().to_i64().unwrap();
    let terms = (bound - e).max(0) as usize;
    let ps = p.expansion_by(Rational64::from_integer(bound) - to_r64(&shift), route)?;
    let g = match route {
        Route::LogDerivative => spec.g_mt_expansion(m, t, terms),
        Route::Direct => QSeries::from_int_coeffs(slice_direct(spec, m, t, terms), to_r64(&shift), false),
    };
    Ok(ps.mul(&g).truncate(Rational64::from_integer(bound)))
}

/// Re-expand both sides by direct multiplication and compare below `q^bound`.
fn certify(spec: &PartitionFunctionSpec, m: u64, t: u64, p: &GenEtaQuotient, rhs: &Expression, basis: &ModuleBasis, bound: i64) -> Result<()> {
    let lhs = prefactored_series(spec, m, t, p, bound, Route::Direct)?;
    let b = Rational64::from_integer(bound);
    let mut r = QSeries::zero().truncate(b);
    for (h, c) in &rhs.combination(basis)?.terms {
        r = r.add(&h.expansion_by(b, Route::Direct)?.scale(c));
    }
    if let Some(e) = lhs.first_mismatch(&r) {
        return Err(Error::VerificationFailure(format!("sides differ at q^{e}")));
    }
    if lhs.trunc() != Some(b) || r.trunc() != Some(b) {
        return Err(Error::VerificationFailure(format!("expansions fall short of q^{bound}")));
    }
    Ok(())
}

/// Orders of `h` plus the bounds must stay above -1 away from infinity.
fn check_h(bounds: &[(CuspData, Q)], h: &GenEtaQuotient, n: u64) -> Result<()> {
    for (s, d) in bounds.iter().filter(|(s, _)| !s.cusp.is_infinity()) {
        let o = order_geq_at_cusp(h, n, s);
        if o + d <= qi(-1) {
            return Err(Error::NoHFound(format!("{h} leaves a possible pole at {}", s.cusp)));
        }
    }
    Ok(())
}

/// Express `h phi g_(m,t)` in the module basis and certify it.
fn express(mut id: Identity, opts: &DeriveOptions, status: Status) -> Identity {
    let (n, phi, h) = (id.n.unwrap(), id.phi.clone().unwrap(), id.h.clone().unwrap());
    let basis = match module_basis(n, opts.z.as_ref()) {
        Ok(b) => b,
        Err(e) => return id.fail(Stage::Basis, e),
    };
    id.basis = Some(basis.clone());
    let p = match phi.mul(&h).normalized(n) {
        Ok(p) => p,
        Err(e) => return id.fail(Stage::Express, e),
    };
    let e = f_prefactor(&id.spec, id.m, id.t, &p);
    if !e.is_integer() {
        return id.fail(Stage::Express, Error::Diagnostic(format!("hF has q-exponent {e}")));
    }
    let pole = -e.to_integer().to_i64().unwrap();
    id.pole = Some(pole);
    let mut guard = opts.guard.max(1);
    let (rhs, bound) = loop {
        let bound = (pole.max(0) + guard).max(opts.order);
        let f = match prefactored_series(&id.spec, id.m, id.t, &p, bound, Route::LogDerivative) {
            Ok(f) => f,
            Err(e) => return id.fail(Stage::Express, e),
        };
        match membership_and_express(&f, &basis) {
            Ok(r) => break (r, bound),
            Err(Error::InsufficientTruncation { .. }) if guard < 1 << 12 => guard *= 2,
            Err(e) => return id.fail(Stage::Express, e),
        }
    };
    if let Err(e) = certify(&id.spec, id.m, id.t, &p, &rhs, &basis, bound) {
        return id.fail(Stage::Certify, e);
    }
    id.rhs = Some(rhs);
    id.certified_to = Some(bound);
    id.status = status;
    id
}

/// Level, prefactor, generators, basis, multiplier, expression and an
/// independent re-expansion of both sides. Never returns an uncertified
/// identity as derived.
pub fn derive_identity(spec: &PartitionFunctionSpec, m: u64, t: u64, opts: &DeriveOptions) -> Identity {
    let mut id = Identity::new(spec, m, t);
    if m == 0 || t >= m {
        return id.fail(Stage::Level, Error::InvalidSpec(format!("need 0 <= t < m, got m={m}, t={t}")));
    }
    let n = find_n(spec, m, t);
    id.n = Some(n);
    let phi = match find_phi_with_box(spec, m, t, n, opts.phi_box) {
        Ok(p) => p,
        Err(e) => return id.fail(Stage::Phi, e),
    };
    id.phi = Some(phi.clone());
    let gens = match generators(n) {
        Ok(g) => g,
        Err(e) => return id.fail(Stage::Generators, e),
    };
    let bounds = order_lower_bounds(spec, m, t, &phi, n);
    let hc = match find_h(&bounds, &gens, n) {
        Ok(h) => h,
        Err(e) => return id.fail(Stage::H, e),
    };
    id.h = Some(hc.h);
    express(id, opts, Status::Derived)
}

/// Express with a caller-supplied `phi` and `h` at level `n`.
pub fn express_with(
    spec: &PartitionFunctionSpec,
    m: u64,
    t: u64,
    n: u64,
    phi: &GenEtaQuotient,
    h: &GenEtaQuotient,
    opts: &DeriveOptions,
) -> Identity {
    let mut id = Identity::new(spec, m, t);
    id.n = Some(n);
    if !phi_criterion(spec, m, t, n, phi) {
        return id.fail(Stage::Phi, Error::Diagnostic(format!("{phi} fails the modularity criterion")));
    }
    id.phi = Some(phi.clone());
    let bounds = order_lower_bounds(spec, m, t, phi, n);
    if let Err(e) = check_h(&bounds, h, n) {
        return id.fail(Stage::H, e);
    }
    id.h = Some(h.clone());
    express(id, opts, Status::VerifiedOnly)
}

/// One identity per residue class, plus the interleaving check.
#[derive(Clone, Debug)]
pub struct Dissection {
    pub m: u64,
    pub slices: Vec<Identity>,
    /// Order to which the re-interleaved slices reproduce the product.
    pub interleaved_to: Option<i64>,
}

impl Dissection {
    pub fn to_json(&self) -> Value {
        json!({
            "m": self.m,
            "slices": self.slices.iter().map(|s| s.to_json()).collect::<Vec<_>>(),
            "interleaved_to": self.interleaved_to,
        })
    }
}

/// `sum_n a(mn+t) q^n` recovered from a certified identity, below `q^terms`.
pub fn slice_from_identity(id: &Identity, terms: i64) -> Result<QSeries> {
    let p = id.prefactor().ok_or_else(|| Error::Diagnostic("identity has no prefactor".into()))?;
    let (rhs, basis) = (id.rhs.as_ref().unwrap(), id.basis.as_ref().unwrap());
    let shift = to_r64(&((qi(id.t as i64) - id.spec.ell()) / qi(id.m as i64)));
    let e = f_prefactor(&id.spec, id.m, id.t, &p).to_integer().to_i64().unwrap();
    let r = rhs.expansion(basis, e + terms)?;
    let d = p.expansion(Rational64::from_integer(e + terms) - shift)?.shift(shift);
    Ok(r.div(&d)?.truncate(Rational64::from_integer(terms)))
}

/// `m`-dissection of the generating function, certified by re-interleaving
/// the slices below `q^order`.
pub fn dissect(spec: &PartitionFunctionSpec, m: u64, order: i64, opts: &DeriveOptions) -> Dissection {
    let slices: Vec<Identity> = std::thread::scope(|sc| {
        let hs: Vec<_> = (0..m).map(|t| sc.spawn(move || derive_identity(spec, m, t, opts))).collect();
        hs.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let mut interleaved_to = None;
    if slices.iter().all(|s| s.is_certified()) {
        let terms = (order + m as i64 - 1) / m as i64 + 1;
        let b = Rational64::from_integer(order);
        let mut total = QSeries::zero().truncate(b);
        let mut ok = true;
        for (t, id) in slices.iter().enumerate() {
            match slice_from_identity(id, terms) {
                Ok(s) => total = total.add(&s.dilate(m as i64).shift(Rational64::from_integer(t as i64))),
                Err(_) => ok = false,
            }
        }
        let orig = QSeries::from_int_coeffs(spec.gf_coeffs_direct(order as usize), Rational64::zero(), false);
        if ok && orig.first_mismatch(&total).is_none() && total.trunc() == Some(b) {
            interleaved_to = Some(order);
        }
    }
    Dissection { m, slices, interleaved_to }
}

/// Order of `h` at every cusp of level `n`, as integers where possible.
pub fn cusp_orders(h: &GenEtaQuotient, n: u64) -> Vec<(String, Q)> {
    cusps(n).iter().map(|s| (s.cusp.to_string(), order_geq_at_cusp(h, n, s))).collect()
}
