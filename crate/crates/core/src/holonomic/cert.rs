//! Creative-telescoping certificates
//! `Σ_j p_j N^j + Σ_i (1 - K_i) C_i` for a term `F(n, k_1..k_r)`.
//!
//! Operator coefficients live in the ring `(q, u, v_1..v_r, K_1..K_r)` with
//! `u = q^n`, `v_i = q^{k_i}` and every shift `K_i` written to the right of
//! its coefficient. Products are taken literally: `K_i` passing a
//! coefficient substitutes `v_i -> v_i q^{-1}`.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::term::{pow, HypTerm};
use crate::algebra::parse::{eval_int, parse_expr, Expr};
use crate::algebra::{LaurentPoly, RationalFunction};
use crate::error::{Error, Result};

/// Names of the telescoper families, one per summation variable.
pub const TELESCOPER_NAMES: [&str; 3] = ["q", "r", "s"];

/// `q, u, v1..vr, K1..Kr`.
pub fn operator_vars(r: usize) -> Vec<String> {
    let mut v = vec!["q".to_string(), "u".to_string()];
    v.extend((1..=r).map(|i| format!("v{i}")));
    v.extend((1..=r).map(|i| format!("K{i}")));
    v
}

/// Product in the shift algebra with shifts normal-ordered to the right.
pub fn ore_mul(a: &LaurentPoly, b: &LaurentPoly, r: usize) -> LaurentPoly {
    let mut out = a.zero_like();
    for (ea, ca) in a.terms() {
        let ks = &ea[2 + r..];
        for (eb, cb) in b.terms() {
            let mut e: Vec<i32> = ea.iter().zip(eb.iter()).map(|(x, y)| x + y).collect();
            e[0] -= (0..r).map(|i| ks[i] * eb[2 + i]).sum::<i32>();
            out.add_term(e, ca * cb);
        }
    }
    out
}

/// `Σ_j p_j N^j + Σ_i (1 - K_i) Σ_j C_{i,j} N^j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateSet {
    /// Summation variable names, in the order of `K_1..K_r`.
    pub vars: Vec<String>,
    pub order: usize,
    /// `p_0..p_J` over [`operator_vars`].
    pub p: Vec<LaurentPoly>,
    /// `telescopers[i][j] = C_{i,j}`.
    pub telescopers: Vec<Vec<LaurentPoly>>,
}

/// The expanded operator: `(shift s, N-power j) -> coefficient in (q,u,v)`.
pub type ExpandedOperator = BTreeMap<(Vec<i32>, usize), LaurentPoly>;

impl CertificateSet {
    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn ring_vars(&self) -> Vec<String> {
        operator_vars(self.nvars())[..2 + self.nvars()].to_vec()
    }

    /// Collect the operator into coefficient-times-shift form.
    pub fn expand(&self) -> ExpandedOperator {
        let r = self.nvars();
        let ring = self.ring_vars();
        let mut out: ExpandedOperator = BTreeMap::new();
        let mut push = |poly: &LaurentPoly, j: usize| {
            for (e, c) in poly.terms() {
                let key = (e[2 + r..].to_vec(), j);
                let entry = out.entry(key).or_insert_with(|| LaurentPoly::zero(&ring));
                entry.add_term(e[..2 + r].to_vec(), c.clone());
            }
        };
        for (j, pj) in self.p.iter().enumerate() {
            push(pj, j);
        }
        let full = operator_vars(r);
        for (i, family) in self.telescopers.iter().enumerate() {
            let mut ke = vec![0; 2 + 2 * r];
            ke[2 + r + i] = 1;
            let k = LaurentPoly::monomial(&full, ke, BigInt::one());
            for (j, c) in family.iter().enumerate() {
                push(&(c - &ore_mul(&k, c, r)), j);
            }
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    /// The `p_j` as polynomials in `(q, u)`; fails if some `p_j` involves a
    /// summation variable or a shift.
    pub fn recurrence(&self) -> Result<Vec<LaurentPoly>> {
        let r = self.nvars();
        self.p
            .iter()
            .enumerate()
            .map(|(j, pj)| {
                let mut out = LaurentPoly::zero(&["q", "u"]);
                for (e, c) in pj.terms() {
                    if e[2..].iter().any(|&x| x != 0) {
                        return Err(Error::Structural(format!("p_{j} depends on summation variables or shifts")));
                    }
                    out.add_term(e[..2].to_vec(), c.clone());
                }
                let _ = r;
                Ok(out)
            })
            .collect()
    }

    /// Add `c · q^{qexp} u^{uexp}` to `p_j`; used to probe soundness.
    pub fn perturbed(&self, j: usize, qexp: i32, uexp: i32, c: i64) -> CertificateSet {
        let mut out = self.clone();
        let mut e = vec![0; 2 + 2 * self.nvars()];
        e[0] = qexp;
        e[1] = uexp;
        out.p[j].add_term(e, BigInt::from(c));
        out
    }

    pub fn to_json(&self) -> CertificateJson {
        let mut families = BTreeMap::new();
        families.insert("p".to_string(), self.p.clone());
        for (i, f) in self.telescopers.iter().enumerate() {
            families.insert(TELESCOPER_NAMES[i].to_string(), f.clone());
        }
        CertificateJson { vars: self.vars.clone(), order: self.order, families }
    }

    pub fn from_json(j: &CertificateJson) -> Result<Self> {
        let r = j.vars.len();
        if r > TELESCOPER_NAMES.len() {
            return Err(Error::Structural("at most three summation variables are supported".into()));
        }
        let vars = operator_vars(r);
        let family = |name: &str| -> Result<Vec<LaurentPoly>> {
            let list = j.families.get(name).cloned().unwrap_or_default();
            if list.len() > j.order + 1 {
                return Err(Error::Structural(format!("family {name} is longer than the order")));
            }
            let mut out = vec![LaurentPoly::zero(&vars); j.order + 1];
            for (i, p) in list.into_iter().enumerate() {
                out[i] = p.embed(&vars)?;
            }
            Ok(out)
        };
        Ok(CertificateSet {
            vars: j.vars.clone(),
            order: j.order,
            p: family("p")?,
            telescopers: TELESCOPER_NAMES[..r].iter().map(|n| family(n)).collect::<Result<_>>()?,
        })
    }
}

/// File form: `{"vars":[..],"order":J,"families":{"p":[poly..],"q":[..],..}}`
/// with polynomials over `q,u,v1..,K1..`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub vars: Vec<String>,
    pub order: usize,
    pub families: BTreeMap<String, Vec<LaurentPoly>>,
}

/// A textual correction to one definition of a certificate source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Emendation {
    pub definition: String,
    pub from: String,
    pub to: String,
}

/// A certificate as transcribed: header fields, named definitions in the
/// source notation, and an optional list of corrections.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateSource {
    pub vars: Vec<String>,
    pub shifts: Vec<String>,
    pub order: usize,
    pub definitions: BTreeMap<String, String>,
    pub emendations: Vec<Emendation>,
}

impl CertificateSource {
    /// Lines are `# comment`, `key: values` headers (`vars`, `shifts`,
    /// `order`, `emend: name | from | to`) or `name = expression`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut vars = None;
        let mut shifts = None;
        let mut order = None;
        let mut definitions = BTreeMap::new();
        let mut emendations = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: String| Error::Parse { pos: lineno + 1, msg };
            if let Some((name, expr)) = line.split_once('=') {
                if definitions.insert(name.trim().to_string(), expr.trim().to_string()).is_some() {
                    return Err(err(format!("{} defined twice", name.trim())));
                }
                continue;
            }
            let (key, value) = line.split_once(':').ok_or_else(|| err(format!("unrecognized line {line:?}")))?;
            let words = || value.split_whitespace().map(String::from).collect::<Vec<_>>();
            match key.trim() {
                "vars" => vars = Some(words()),
                "shifts" => shifts = Some(words()),
                "order" => order = Some(value.trim().parse::<usize>().map_err(|e| err(e.to_string()))?),
                "emend" => {
                    let parts: Vec<&str> = value.split('|').map(str::trim).collect();
                    if parts.len() != 3 {
                        return Err(err("emend needs `name | from | to`".into()));
                    }
                    emendations.push(Emendation {
                        definition: parts[0].into(),
                        from: parts[1].into(),
                        to: parts[2].into(),
                    });
                }
                other => return Err(err(format!("unknown header {other}"))),
            }
        }
        let missing = |what: &str| Error::Parse { pos: 0, msg: format!("missing {what} header") };
        let vars = vars.ok_or_else(|| missing("vars"))?;
        let shifts = shifts.ok_or_else(|| missing("shifts"))?;
        if vars.len() != shifts.len() || vars.len() > TELESCOPER_NAMES.len() {
            return Err(Error::Structural("vars and shifts must pair up, at most three".into()));
        }
        Ok(CertificateSource { vars, shifts, order: order.ok_or_else(|| missing("order"))?, definitions, emendations })
    }

    /// The definitions after applying every emendation; each correction
    /// must match its definition exactly once.
    pub fn emended(&self) -> Result<CertificateSource> {
        let mut out = self.clone();
        for e in &self.emendations {
            let text = out
                .definitions
                .get_mut(&e.definition)
                .ok_or_else(|| Error::Structural(format!("emendation for unknown definition {}", e.definition)))?;
            let hits = text.matches(&e.from).count();
            if hits != 1 {
                return Err(Error::Structural(format!("{:?} occurs {hits} times in {}", e.from, e.definition)));
            }
            *text = text.replacen(&e.from, &e.to, 1);
        }
        out.emendations.clear();
        Ok(out)
    }

    pub fn compile(&self) -> Result<CertificateSet> {
        let r = self.vars.len();
        let mut c = Compiler { src: self, vars: operator_vars(r), cache: BTreeMap::new(), active: BTreeSet::new() };
        let mut family = |name: &str| -> Result<Vec<LaurentPoly>> {
            (0..=self.order)
                .map(|j| {
                    let key = format!("{name}_{j}");
                    if self.definitions.contains_key(&key) {
                        c.definition(&key)
                    } else {
                        Ok(LaurentPoly::zero(&c.vars))
                    }
                })
                .collect()
        };
        let p = family("p")?;
        let telescopers = TELESCOPER_NAMES[..r].iter().map(|n| family(n)).collect::<Result<_>>()?;
        Ok(CertificateSet { vars: self.vars.clone(), order: self.order, p, telescopers })
    }
}

struct Compiler<'a> {
    src: &'a CertificateSource,
    vars: Vec<String>,
    cache: BTreeMap<String, LaurentPoly>,
    active: BTreeSet<String>,
}

impl Compiler<'_> {
    fn r(&self) -> usize {
        self.src.vars.len()
    }

    fn definition(&mut self, name: &str) -> Result<LaurentPoly> {
        if let Some(p) = self.cache.get(name) {
            return Ok(p.clone());
        }
        if !self.active.insert(name.to_string()) {
            return Err(Error::Structural(format!("definition {name} refers to itself")));
        }
        let text = &self.src.definitions[name];
        let expr = parse_expr(text, &[]).map_err(|e| match e {
            Error::Parse { pos, msg } => Error::Parse { pos, msg: format!("in {name}: {msg}") },
            other => other,
        })?;
        let p = self.eval(&expr).map_err(|e| match e {
            Error::Parse { msg, .. } => Error::Parse { pos: 0, msg: format!("in {name}: {msg}") },
            other => other,
        })?;
        self.active.remove(name);
        self.cache.insert(name.to_string(), p.clone());
        Ok(p)
    }

    fn eval(&mut self, e: &Expr) -> Result<LaurentPoly> {
        let r = self.r();
        let template = LaurentPoly::zero(&self.vars);
        Ok(match e {
            Expr::Int(n) => template.constant_like(n.clone()),
            Expr::Name(s) if s == "q" => template.var_like("q")?,
            Expr::Name(s) => {
                if let Some(i) = self.src.shifts.iter().position(|x| x == s) {
                    template.var_like(&format!("K{}", i + 1))?
                } else if self.src.definitions.contains_key(s) {
                    self.definition(s)?
                } else {
                    return Err(Error::Parse { pos: 0, msg: format!("stray symbol {s}") });
                }
            }
            Expr::Neg(x) => -self.eval(x)?,
            Expr::Sum(ts) => {
                let mut acc = template;
                for t in ts {
                    acc = &acc + &self.eval(t)?;
                }
                acc
            }
            Expr::Product(fs) => {
                let mut acc = template.one_like();
                for f in fs {
                    acc = ore_mul(&acc, &self.eval(f)?, r);
                }
                acc
            }
            Expr::Pow(base, exp) if **base == Expr::Name("q".into()) => {
                let lin = self.linear(exp)?;
                let mut m = vec![0i32; 2 + 2 * r];
                m[..2 + r].copy_from_slice(&lin);
                template.monomial_like(m, BigInt::one())
            }
            Expr::Pow(base, exp) => {
                let k = eval_int(exp)?;
                if k < 0 {
                    return Err(Error::Parse { pos: 0, msg: "negative power of a compound factor".into() });
                }
                let b = self.eval(base)?;
                (0..k).fold(template.one_like(), |acc, _| ore_mul(&acc, &b, r))
            }
        })
    }

    /// An exponent as `[constant, n, k_1..k_r]`.
    fn linear(&self, e: &Expr) -> Result<Vec<i32>> {
        let r = self.r();
        let unit = |i: usize| {
            let mut v = vec![0; 2 + r];
            v[i] = 1;
            v
        };
        Ok(match e {
            Expr::Int(_) => {
                let mut v = vec![0; 2 + r];
                v[0] = eval_int(e)? as i32;
                v
            }
            Expr::Name(s) if s == "n" => unit(1),
            Expr::Name(s) => match self.src.vars.iter().position(|x| x == s) {
                Some(i) => unit(2 + i),
                None => return Err(Error::Parse { pos: 0, msg: format!("stray symbol {s} in exponent") }),
            },
            Expr::Neg(x) => self.linear(x)?.iter().map(|c| -c).collect(),
            Expr::Sum(ts) => {
                let mut acc = vec![0; 2 + r];
                for t in ts {
                    for (a, b) in acc.iter_mut().zip(self.linear(t)?) {
                        *a += b;
                    }
                }
                acc
            }
            Expr::Product(fs) => {
                let mut scalar = 1i32;
                let mut form: Option<Vec<i32>> = None;
                for f in fs {
                    let l = self.linear(f)?;
                    if l[1..].iter().all(|&c| c == 0) {
                        scalar *= l[0];
                    } else if form.replace(l).is_some() {
                        return Err(Error::Parse { pos: 0, msg: "exponent is not linear".into() });
                    }
                }
                match form {
                    Some(l) => l.iter().map(|c| c * scalar).collect(),
                    None => {
                        let mut v = vec![0; 2 + r];
                        v[0] = scalar;
                        v
                    }
                }
            }
            Expr::Pow(..) => {
                let mut v = vec![0; 2 + r];
                v[0] = eval_int(e)? as i32;
                v
            }
        })
    }
}

/// Outcome of checking `T F = 0` as an identity of rational functions.
#[derive(Clone, Debug)]
pub struct Verification {
    pub holds: bool,
    /// `(T F)/F` over the common denominator of all shift quotients;
    /// zero exactly when the identity holds.
    pub residual: RationalFunction,
}

/// Apply the operator to the term symbolically and reduce to a single
/// rational function.
pub fn verify_certificate(term: &HypTerm, cert: &CertificateSet) -> Result<Verification> {
    term.validate()?;
    if cert.nvars() != term.vars.len() {
        return Err(Error::Structural(format!(
            "certificate has {} summation variables, term has {}",
            cert.nvars(),
            term.vars.len()
        )));
    }
    let op = cert.expand();
    let (num, den) = apply_to_term(term, &op);
    Ok(Verification { holds: num.is_zero(), residual: RationalFunction::new(num, den)? })
}

/// Sum `Σ P_{s,j} F(n-j, k-s)/F(n,k)` over a common denominator, returned
/// as `(numerator, denominator)`.
pub(crate) fn apply_to_term(term: &HypTerm, op: &ExpandedOperator) -> (LaurentPoly, LaurentPoly) {
    let table = ClearedShifts::new(term, op.keys());
    let mut total = LaurentPoly::zero(&term.ring_vars());
    for (key, coeff) in op {
        total = &total + &table.apply(key, coeff);
    }
    (total, table.den)
}

/// For a set of shifts `(s, j)`, the common denominator `den` of the
/// quotients `F(n-j, k-s)/F(n,k)` and each quotient times `den`.
pub(crate) struct ClearedShifts {
    pub den: LaurentPoly,
    cleared: BTreeMap<(Vec<i32>, usize), LaurentPoly>,
}

impl ClearedShifts {
    pub fn new<'k>(term: &HypTerm, keys: impl IntoIterator<Item = &'k (Vec<i32>, usize)>) -> Self {
        let ring = term.ring_vars();
        let mut factored = Vec::new();
        let mut common: BTreeMap<Vec<i32>, usize> = BTreeMap::new();
        for key in keys {
            let (s, j) = key;
            let mut d = vec![*j as i64];
            d.extend(s.iter().map(|&x| x as i64));
            let f = term.ratio_factors(&d);
            let mut counts: BTreeMap<Vec<i32>, usize> = BTreeMap::new();
            for e in &f.denominator {
                *counts.entry(e.clone()).or_default() += 1;
            }
            for (e, &c) in &counts {
                let slot = common.entry(e.clone()).or_default();
                *slot = (*slot).max(c);
            }
            factored.push((key.clone(), f, counts));
        }
        let mut cleared = BTreeMap::new();
        for (key, f, counts) in factored {
            let mut t = LaurentPoly::monomial(&ring, f.monomial.clone(), BigInt::one());
            for e in &f.numerator {
                t = times_one_minus(&t, e);
            }
            for (e, &m) in &common {
                for _ in counts.get(e).copied().unwrap_or(0)..m {
                    t = times_one_minus(&t, e);
                }
            }
            cleared.insert(key, t);
        }
        let mut den = LaurentPoly::one(&ring);
        for (e, &m) in &common {
            for _ in 0..m {
                den = times_one_minus(&den, e);
            }
        }
        ClearedShifts { den, cleared }
    }

    /// `coeff · F(n-j, k-s)/F(n,k) · den`; the key must be one of those
    /// the table was built for.
    pub fn apply(&self, key: &(Vec<i32>, usize), coeff: &LaurentPoly) -> LaurentPoly {
        coeff * &self.cleared[key]
    }

    /// Same as [`ClearedShifts::apply`] for a single monomial coefficient.
    pub fn apply_monomial(&self, key: &(Vec<i32>, usize), e: &[i32], c: &BigInt) -> LaurentPoly {
        self.cleared[key].mul_monomial(e, c)
    }
}

fn times_one_minus(p: &LaurentPoly, e: &[i32]) -> LaurentPoly {
    p - &p.mul_monomial(e, &BigInt::one())
}

/// Exact evaluation of `F` and of operator coefficients at one rational `q`,
/// with the powers and Pochhammer values cached.
pub struct NumericContext<'a> {
    term: &'a HypTerm,
    q: BigRational,
    powers: BTreeMap<i64, BigRational>,
    pochs: BTreeMap<u32, Vec<BigRational>>,
}

impl<'a> NumericContext<'a> {
    pub fn new(term: &'a HypTerm, q: BigRational) -> Self {
        NumericContext { term, q, powers: BTreeMap::new(), pochs: BTreeMap::new() }
    }

    fn qpow(&mut self, e: i64) -> BigRational {
        let q = &self.q;
        self.powers.entry(e).or_insert_with(|| pow(q, e)).clone()
    }

    fn poch(&mut self, base: u32, len: usize) -> BigRational {
        let q = self.q.clone();
        let table = self.pochs.entry(base).or_insert_with(|| vec![BigRational::one()]);
        while table.len() <= len {
            let k = table.len() as i64;
            let next = table.last().unwrap() * (BigRational::one() - pow(&q, base as i64 * k));
            table.push(next);
        }
        table[len].clone()
    }

    pub fn term_at(&mut self, z: &[i64]) -> BigRational {
        let mut den = BigRational::one();
        let dens: Vec<(u32, i64)> = self.term.denominators.iter().map(|d| (d.base, d.form.eval(z))).collect();
        for (base, l) in dens {
            if l < 0 {
                return BigRational::zero();
            }
            den *= self.poch(base, l as usize);
        }
        self.qpow(self.term.exponent(z)) / den
    }

    /// A polynomial in `(q, u, v..)` at `u = q^{z_0}`, `v_i = q^{z_i}`.
    pub fn poly_at(&mut self, p: &LaurentPoly, z: &[i64]) -> BigRational {
        let mut acc = BigRational::zero();
        for (e, c) in p.terms() {
            let x = e[0] as i64 + e[1..].iter().zip(z).map(|(a, b)| *a as i64 * b).sum::<i64>();
            acc += self.qpow(x) * BigRational::from_integer(c.clone());
        }
        acc
    }

    /// `f_n = Σ_k F(n, k)` with each `k_i` in `0..=bound`.
    pub fn sum(&mut self, n: i64, bound: i64) -> BigRational {
        if self.q.is_integer() && self.q.numer().abs() > BigInt::one() {
            return self.integer_sum(n, bound);
        }
        let mut total = BigRational::zero();
        for_box(self.term.vars.len(), n, bound, |z| total += self.term_at(z));
        total
    }

    /// The same sum for integral `q`, accumulated over the common
    /// denominator `Π (q^b;q^b)_{max L}` so that no gcd is taken per term.
    fn integer_sum(&mut self, n: i64, bound: i64) -> BigRational {
        let q = self.q.numer().clone();
        let term = self.term;
        let r = term.vars.len();
        let lmax: Vec<i64> = term
            .denominators
            .iter()
            .map(|d| d.form.constant + d.form.coeffs[0] * n + d.form.coeffs[1..].iter().map(|c| c.max(&0) * bound).sum::<i64>())
            .collect();
        // tails[i][l] = (q^b;q^b)_{lmax} / (q^b;q^b)_l
        let tails: Vec<Vec<BigInt>> = term
            .denominators
            .iter()
            .zip(&lmax)
            .map(|(d, &top)| {
                let top = top.max(0) as usize;
                let mut t = vec![BigInt::one(); top + 1];
                for l in (0..top).rev() {
                    t[l] = &t[l + 1] * (BigInt::one() - num_traits::pow(q.clone(), d.base as usize * (l + 1)));
                }
                t
            })
            .collect();
        let mut points: Vec<(i64, BigInt)> = Vec::new();
        for_box(r, n, bound, |z| {
            let mut w = BigInt::one();
            for (d, t) in term.denominators.iter().zip(&tails) {
                let l = d.form.eval(z);
                if l < 0 {
                    return;
                }
                w *= &t[l as usize];
            }
            points.push((term.exponent(z), w));
        });
        let Some(qmin) = points.iter().map(|p| p.0).min() else {
            return BigRational::zero();
        };
        let mut num = BigInt::zero();
        for (e, w) in points {
            num += num_traits::pow(q.clone(), (e - qmin) as usize) * w;
        }
        let den: BigInt = tails.iter().map(|t| t[0].clone()).product();
        BigRational::new(num, den) * pow(&self.q, qmin)
    }
}

/// Call `f` on `(n, k)` for every `k` in `[0, bound]^r`.
fn for_box(r: usize, n: i64, bound: i64, mut f: impl FnMut(&[i64])) {
    let mut z = vec![0i64; r + 1];
    z[0] = n;
    loop {
        f(&z);
        let mut i = 1;
        while i <= r && z[i] == bound {
            z[i] = 0;
            i += 1;
        }
        if i > r {
            return;
        }
        z[i] += 1;
    }
}

/// Points `(n, k)` of the box `0 <= n <= nmax`, `-1 <= k_i <= kmax` where
/// `Σ P_{s,j}(n,k) F(n-j, k-s)` is nonzero at the given `q`.
pub fn pointwise_failures(term: &HypTerm, cert: &CertificateSet, q: &BigRational, nmax: i64, kmax: i64) -> Vec<Vec<i64>> {
    let op = cert.expand();
    let mut ctx = NumericContext::new(term, q.clone());
    let r = term.vars.len();
    let mut bad = Vec::new();
    let mut z = vec![-1i64; r + 1];
    for n in 0..=nmax {
        z[0] = n;
        for v in z[1..].iter_mut() {
            *v = -1;
        }
        loop {
            let mut val = BigRational::zero();
            for ((s, j), p) in &op {
                let mut w = z.clone();
                w[0] -= *j as i64;
                for i in 0..r {
                    w[1 + i] -= s[i] as i64;
                }
                let f = ctx.term_at(&w);
                if !f.is_zero() {
                    val += ctx.poly_at(p, &z) * f;
                }
            }
            if !val.is_zero() {
                bad.push(z.clone());
            }
            let mut i = 1;
            while i <= r && z[i] == kmax {
                z[i] = -1;
                i += 1;
            }
            if i > r {
                break;
            }
            z[i] += 1;
        }
    }
    bad
}

/// First `n` in `0..=nmax` where `Σ_j p_j(q, q^n) f_{n-j} ≠ 0`, with
/// `f_m = Σ_k F(m, k)` summed over `0 <= k_i <= m` and `f_m = 0` for `m < 0`.
pub fn check_recurrence(term: &HypTerm, p: &[LaurentPoly], q: &BigRational, nmax: i64) -> Option<i64> {
    let mut ctx = NumericContext::new(term, q.clone());
    let f: Vec<BigRational> = (0..=nmax).map(|n| ctx.sum(n, n)).collect();
    (0..=nmax).find(|&n| {
        let mut acc = BigRational::zero();
        for (j, pj) in p.iter().enumerate() {
            let m = n - j as i64;
            if m >= 0 {
                acc += ctx.poly_at(pj, &[n]) * &f[m as usize];
            }
        }
        !acc.is_zero()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shifts_act_on_later_coefficients() {
        let vars = operator_vars(1);
        let k = LaurentPoly::var(&vars, "K1").unwrap();
        let v = LaurentPoly::var(&vars, "v1").unwrap();
        // K v = q^{-1} v K
        let kv = ore_mul(&k, &v, 1);
        assert_eq!(kv, LaurentPoly::monomial(&vars, vec![-1, 0, 1, 1], BigInt::one()));
        assert_eq!(ore_mul(&v, &k, 1), LaurentPoly::monomial(&vars, vec![0, 0, 1, 1], BigInt::one()));
    }

    #[test]
    fn source_parsing_and_emendation() {
        let text = "vars: b\nshifts: B\norder: 1\nemend: p_1 | x^{n} | q^{n}\np_0 = q^{2n}\np_1 = -x^{n}\nq_0 = Bq^b\n";
        let src = CertificateSource::parse(text).unwrap();
        assert!(matches!(src.compile(), Err(Error::Parse { .. })));
        let cert = src.emended().unwrap().compile().unwrap();
        let vars = operator_vars(1);
        assert_eq!(cert.p[1], LaurentPoly::monomial(&vars, vec![0, 1, 0, 0], BigInt::from(-1)));
        assert_eq!(cert.telescopers[0][0], LaurentPoly::monomial(&vars, vec![-1, 0, 1, 1], BigInt::one()));
    }

    #[test]
    fn self_reference_is_rejected() {
        let src = CertificateSource::parse("vars: b\nshifts: B\norder: 0\np_0 = 1+p_0\n").unwrap();
        assert!(src.compile().is_err());
    }
}
