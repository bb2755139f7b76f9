//! The verification suite behind `verify-all`. Tasks are grouped by the
//! acceptance criterion they establish and always run in the listed order.

use std::cell::OnceCell;
use std::collections::BTreeMap;
use std::time::Instant;

use bipartid::algebra::{parse_poly, BiSeries, LaurentPoly, PochhammerSpec, QSeries, RationalFunction};
use bipartid::automata::{derive_transfer_system, parse_system_table, Dfa, TransferSystem};
use bipartid::cylindric::{cw_family, enumerate_cylindric, g_to_f, Profile};
use bipartid::holonomic::*;
use bipartid::partitions::{check_condition, enumerate_2colored, gen_fun, violates_theorem36, Conditions};
use bipartid::{data, Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;

use crate::emit::{self, built_dfa, Format, Target};
use crate::report::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub qorder: usize,
    /// Size bound for the exhaustive pattern/condition comparison.
    pub max_size: u32,
}

impl SuiteConfig {
    pub fn new(qorder: usize, max_size: u32) -> Result<Self> {
        if qorder < 10 {
            return Err(Error::Domain(format!("verify-all needs a q-order of at least 10, got {qorder}")));
        }
        Ok(SuiteConfig { qorder, max_size })
    }

    fn n25(&self) -> usize {
        self.qorder.min(25)
    }

    fn n20(&self) -> usize {
        self.qorder.min(20)
    }
}

type Run = fn(&Ctx) -> Check;

pub struct Task {
    pub id: &'static str,
    pub criterion: u32,
    run: Run,
}

/// Lazily computed inputs shared between tasks.
struct Ctx {
    cfg: SuiteConfig,
    bir: OnceCell<BiSeries>,
    birp: OnceCell<BiSeries>,
    cylindric: OnceCell<BTreeMap<Profile, BiSeries>>,
    dfa: OnceCell<Dfa>,
}

fn fail(e: Error) -> Witness {
    Witness::note(format!("error: {e}"))
}

impl Ctx {
    fn enumerated(&self, c: Conditions) -> std::result::Result<&BiSeries, Witness> {
        let cell = if c == Conditions::BIR { &self.bir } else { &self.birp };
        if let Some(s) = cell.get() {
            return Ok(s);
        }
        let n = self.cfg.qorder;
        let s = gen_fun(&enumerate_2colored(n as u32 - 1, c), n).map_err(fail)?;
        Ok(cell.get_or_init(|| s))
    }

    fn family(&self) -> std::result::Result<&BTreeMap<Profile, BiSeries>, Witness> {
        if let Some(f) = self.cylindric.get() {
            return Ok(f);
        }
        let f = cw_family(3, 3, self.cfg.qorder).map_err(fail)?;
        Ok(self.cylindric.get_or_init(|| f))
    }

    fn g(&self, profile: &str) -> std::result::Result<&BiSeries, Witness> {
        let p: Profile = profile.parse().map_err(fail)?;
        self.family()?.get(&p).ok_or_else(|| Witness::note(format!("no series for profile {profile}")))
    }

    fn dfa(&self) -> std::result::Result<&Dfa, Witness> {
        if let Some(d) = self.dfa.get() {
            return Ok(d);
        }
        let d = built_dfa().map_err(fail)?;
        Ok(self.dfa.get_or_init(|| d))
    }

    fn system(&self) -> std::result::Result<TransferSystem, Witness> {
        Ok(derive_transfer_system(self.dfa()?))
    }

    /// Row of the transfer system for a state named in the printed table.
    fn row_named(&self, sys: &TransferSystem, name: &str) -> std::result::Result<usize, Witness> {
        let golden = data::golden_dfa().map_err(fail)?;
        let iso = self.dfa()?.isomorphism(&golden).ok_or_else(|| Witness::note("automaton differs from the printed table"))?;
        sys.states
            .iter()
            .position(|&s| Dfa::state_name(iso[s]) == name)
            .ok_or_else(|| Witness::note(format!("state {name} is not a system row")))
    }
}

macro_rules! task {
    ($id:literal, $c:literal, $f:expr) => {
        Task { id: $id, criterion: $c, run: $f }
    };
}

pub fn tasks() -> Vec<Task> {
    vec![
        task!("bir-product", 1, |c| product_check(c, Conditions::BIR, &PochhammerSpec::bir(), &[(0, 1), (1, 2), (2, 2), (3, 4)])),
        task!("birp-product", 2, |c| product_check(c, Conditions::BIRP, &PochhammerSpec::birp(), &[(6, 5), (7, 4)])),
        task!("ag-bigraded-bir", 3, |c| ag_bigraded(c, Conditions::BIR, &bir_sum())),
        task!("ag-bigraded-birp", 3, |c| ag_bigraded(c, Conditions::BIRP, &birp_sum())),
        task!("auxiliary-sum", 4, auxiliary),
        task!("forbidden-patterns", 5, forbidden_patterns),
        task!("dfa-table", 6, dfa_table),
        task!("transfer-matrix", 6, transfer_matrix),
        task!("language-series", 6, language),
        task!("bir-operator", 7, |c| annihilates(&bir_operator(), c.enumerated(Conditions::BIR)?, "BIR")),
        task!("birp-operator", 7, |c| annihilates(&birp_operator(), c.enumerated(Conditions::BIRP)?, "BIRP")),
        task!("cylindric-recursions", 8, cylindric_recursions),
        task!("cylindric-first-order", 8, cylindric_first_order),
        task!("cylindric-system", 8, cylindric_system),
        task!("cylindric-operators", 8, cylindric_operators),
        task!("cylindric-enumeration", 8, cylindric_enumeration),
        task!("cylindric-products", 8, cylindric_products),
        task!("certificate-g111", 9, |c| certificate(c, "g111")),
        task!("certificate-g300", 9, |c| certificate(c, "g300")),
        task!("certificate-bir", 9, |c| certificate(c, "bir")),
        task!("certificate-birp", 9, |c| certificate(c, "birp")),
        task!("closing-combination", 9, |_| closing_combination()),
        task!("chain-bir", 10, |c| chain(c, Conditions::BIR, &bir_sum(), "1,1,1", &PochhammerSpec::bir())),
        task!("chain-birp", 10, |c| chain(c, Conditions::BIRP, &birp_sum(), "3,0,0", &PochhammerSpec::birp())),
        task!("ring-axioms", 11, |_| ring_axioms()),
        task!("inverse-laws", 11, |_| inverse_laws()),
        task!("xshift-composition", 11, xshift_composition),
        task!("dfa-reminimization", 11, dfa_reminimization),
        task!("perturbed-certificates", 11, |_| perturbed_certificates()),
        task!("emit-determinism", 11, emit_determinism),
    ]
}

/// Run every task in order; a failing task never stops the rest.
pub fn run_all(cfg: SuiteConfig) -> Vec<RunReport> {
    run_selected(cfg, |_| true)
}

pub fn run_selected(cfg: SuiteConfig, keep: impl Fn(&Task) -> bool) -> Vec<RunReport> {
    let ctx = Ctx { cfg, bir: OnceCell::new(), birp: OnceCell::new(), cylindric: OnceCell::new(), dfa: OnceCell::new() };
    let mut inputs = BTreeMap::new();
    inputs.insert("qorder".to_string(), cfg.qorder.to_string());
    inputs.insert("max_size".to_string(), cfg.max_size.to_string());
    tasks()
        .into_iter()
        .filter(|t| keep(t))
        .map(|t| {
            let start = Instant::now();
            let outcome = (t.run)(&ctx);
            let elapsed = start.elapsed();
            RunReport {
                task: t.id.to_string(),
                criterion: t.criterion,
                inputs: inputs.clone(),
                status: if outcome.is_ok() { Status::Pass } else { Status::Fail },
                witness: outcome.err(),
                wall_ms: None,
                elapsed,
            }
        })
        .collect()
}

fn product_check(c: &Ctx, cond: Conditions, product: &PochhammerSpec, anchors: &[(usize, i64)]) -> Check {
    let n = c.cfg.qorder;
    let f = c.enumerated(cond)?.at_x_one();
    compare_q("product side", &product.expand(n).map_err(fail)?, &f)?;
    for &(e, v) in anchors {
        if f.coeff(e) != BigInt::from(v) {
            return Err(Witness {
                detail: format!("anchored coefficient of q^{e}"),
                x_exp: None,
                q_exp: Some(e),
                expected: Some(v.to_string()),
                actual: Some(f.coeff(e).to_string()),
            });
        }
    }
    Ok(())
}

fn ag_bigraded(c: &Ctx, cond: Conditions, spec: &AgSumSpec) -> Check {
    let n = c.cfg.n25();
    let sum = evaluate_ag_sum(spec, n).map_err(fail)?;
    compare_bi("sum side", &c.enumerated(cond)?.truncate(n), &sum)
}

fn auxiliary(c: &Ctx) -> Check {
    let n = c.cfg.qorder;
    let s = evaluate_ag_sum(&auxiliary_sum(), n).map_err(fail)?.at_x_one();
    compare_q("auxiliary sum", &PochhammerSpec::auxiliary().expand(n).map_err(fail)?, &s)
}

fn forbidden_patterns(c: &Ctx) -> Check {
    for lambda in enumerate_2colored(c.cfg.max_size, Conditions::NONE) {
        let by_patterns = !violates_theorem36(&lambda);
        let by_conditions = check_condition(&lambda, Conditions::BIR);
        ensure(by_patterns == by_conditions, || {
            format!("{lambda}: pattern avoidance says {by_patterns}, difference conditions say {by_conditions}")
        })?;
    }
    Ok(())
}

fn dfa_table(c: &Ctx) -> Check {
    let d = c.dfa()?;
    ensure(d.num_states() == 6, || format!("{} states instead of 6", d.num_states()))?;
    ensure(d.accepting_states().len() == 1, || format!("{} accepting states", d.accepting_states().len()))?;
    let golden = data::golden_dfa().map_err(fail)?;
    ensure(*d == golden.canonical(), || "transition table differs from the printed one".into())?;
    ensure(d.minimize() == *d, || "built automaton is not minimal".into())
}

fn transfer_matrix(c: &Ctx) -> Check {
    let sys = c.system()?;
    let (names, rows) = parse_system_table(data::GOLDEN_SYSTEM).map_err(fail)?;
    ensure(sys.states.len() == names.len(), || format!("{} rows instead of {}", sys.states.len(), names.len()))?;
    for (i, name_i) in names.iter().enumerate() {
        let a = c.row_named(&sys, name_i)?;
        for (j, name_j) in names.iter().enumerate() {
            let b = c.row_named(&sys, name_j)?;
            ensure(sys.matrix[a][b] == rows[i][j], || {
                format!("entry ({name_i}, {name_j}): derived {} but printed {}", sys.matrix[a][b], rows[i][j])
            })?;
        }
    }
    Ok(())
}

fn language(c: &Ctx) -> Check {
    let n = c.cfg.n25();
    let sys = c.system()?;
    let family = sys.solve(n).map_err(fail)?;
    compare_bi("language of q0", &c.enumerated(Conditions::BIR)?.truncate(n), &family[c.row_named(&sys, "q0")?])?;
    compare_bi("language of q2", &c.enumerated(Conditions::BIRP)?.truncate(n), &family[c.row_named(&sys, "q2")?])
}

fn annihilates(op: &QDiffOperator, s: &BiSeries, what: &str) -> Check {
    expect_zero(&format!("operator applied to {what}"), &apply_qdiff(op, s).map_err(fail)?)
}

fn poly(s: &str) -> std::result::Result<LaurentPoly, Witness> {
    parse_poly(s, &["x", "q"]).map_err(fail)
}

/// `Σ coeff · G_profile(x q^shift)`.
fn combo(c: &Ctx, terms: &[(&str, &str, usize)]) -> std::result::Result<BiSeries, Witness> {
    let mut acc = BiSeries::zero(c.cfg.qorder);
    for &(coeff, profile, shift) in terms {
        acc = acc.add(&c.g(profile)?.apply_xshift(shift).mul_poly(&poly(coeff)?).map_err(fail)?);
    }
    Ok(acc)
}

fn relations(c: &Ctx, rels: &[(&str, &[(&str, &str, usize)])]) -> Check {
    for (lhs, rhs) in rels {
        compare_bi(&format!("relation for G({lhs})"), c.g(lhs)?, &combo(c, rhs)?)?;
    }
    Ok(())
}

fn cylindric_recursions(c: &Ctx) -> Check {
    relations(
        c,
        &[
            ("3,0,0", &[("1", "2,1,0", 1)]),
            ("2,1,0", &[("2", "2,0,1", 1), ("-(1-xq)", "1,1,1", 2)]),
            ("2,0,1", &[("1", "3,0,0", 1), ("1", "1,1,1", 1), ("-(1-xq)", "2,1,0", 2)]),
            ("1,1,1", &[("3", "2,1,0", 1), ("-3(1-xq)", "2,0,1", 2), ("(1-xq)(1-xq^2)", "1,1,1", 3)]),
        ],
    )
}

fn cylindric_first_order(c: &Ctx) -> Check {
    relations(
        c,
        &[
            ("2,0,1", &[("1", "1,1,1", 1), ("xq", "3,0,0", 1)]),
            ("2,1,0", &[("1+xq", "1,1,1", 2), ("2xq^2", "3,0,0", 2)]),
            ("3,0,0", &[("1+xq^2", "1,1,1", 3), ("2xq^3", "3,0,0", 3)]),
            ("1,1,1", &[("3xq^3(1+xq)", "3,0,0", 3), ("1+2xq+2xq^2+x^2q^3", "1,1,1", 3)]),
        ],
    )
}

/// `(G_(3,0,0), G_(1,1,1))(x) = A(x) (G_(3,0,0), G_(1,1,1))(x q^3)`; each
/// component's uncoupled operator is the printed one up to normalization.
fn cylindric_system(c: &Ctx) -> Check {
    let a = vec![vec![poly("2xq^3")?, poly("1+xq^2")?], vec![poly("3xq^3(1+xq)")?, poly("1+2xq+2xq^2+x^2q^3")?]];
    let profiles = ["3,0,0", "1,1,1"];
    for (i, lhs) in profiles.iter().enumerate() {
        let mut rhs = BiSeries::zero(c.cfg.qorder);
        for (j, p) in profiles.iter().enumerate() {
            rhs = rhs.add(&c.g(p)?.apply_xshift(3).mul_poly(&a[i][j]).map_err(fail)?);
        }
        compare_bi(&format!("system row {lhs}"), c.g(lhs)?, &rhs)?;
    }
    for (i, printed) in [g300_operator(), g111_operator()].iter().enumerate() {
        let op = uncouple_polynomial_system(&a, 3, i).map_err(fail)?;
        annihilates(&op, c.g(profiles[i])?, profiles[i])?;
        ensure(op == printed.primitive().map_err(fail)?, || format!("uncoupled operator for {} differs from the printed one", profiles[i]))?;
    }
    Ok(())
}

fn cylindric_operators(c: &Ctx) -> Check {
    annihilates(&g300_operator(), c.g("3,0,0")?, "G(3,0,0)")?;
    annihilates(&g111_operator(), c.g("1,1,1")?, "G(1,1,1)")
}

fn cylindric_enumeration(c: &Ctx) -> Check {
    let n = c.cfg.n20();
    for (profile, g) in c.family()? {
        let direct = enumerate_cylindric(profile, n as u32 - 1);
        compare_bi(&format!("profile {profile}"), &direct, &g_to_f(&g.truncate(n), n))?;
    }
    Ok(())
}

fn cylindric_products(c: &Ctx) -> Check {
    let n = c.cfg.qorder;
    compare_q("G(1,1,1) at x=1", &PochhammerSpec::bir().expand(n).map_err(fail)?, &c.g("1,1,1")?.at_x_one())?;
    compare_q("G(3,0,0) at x=1", &PochhammerSpec::birp().expand(n).map_err(fail)?, &c.g("3,0,0")?.at_x_one())
}

fn certificate(c: &Ctx, name: &str) -> Check {
    let term = data::certificate_term(name).map_err(fail)?;
    let cert = data::certificate_source(name).and_then(|s| s.emended()?.compile()).map_err(fail)?;
    let v = verify_certificate(&term, &cert).map_err(fail)?;
    ensure(v.holds, || format!("{name} certificate leaves residual {}", v.residual))?;
    let p = cert.recurrence().map_err(fail)?;
    let nmax = c.cfg.n25() as i64;
    for q in [2, -3] {
        let q = BigRational::from_integer(q.into());
        if let Some(n) = check_recurrence(&term, &p, &q, nmax) {
            return Err(Witness::note(format!("{name} recurrence fails at n = {n}, q = {q}")));
        }
    }
    Ok(())
}

/// The primed recurrence for the `(1,1,1)` sum, in `(q, u = q^n)`.
const CLOSING_TARGET: [&str; 5] = [
    "-1+u^3",
    "-q^4+2q^-2u^3+2q^-1u^3+2u^3+qu^3+q^-3u^6",
    "q^-3u^3+2q^-2u^3+2q^-1u^3+2u^3+q^-8u^6-q^-5u^6-q^-4u^6",
    "q^-2u^3-q^-10u^6-q^-9u^6+q^-6u^6",
    "q^-11u^6",
];

/// `c1 (p_0..p_3, 0) + c2 (0, N p_0..N p_3)` against the primed family,
/// with the multipliers that make it hold.
fn closing_combination() -> Check {
    let qu = |s: &str| parse_poly(s, &["q", "u"]).map_err(fail);
    let rf = |n: &str, d: &str| Ok::<_, Witness>(RationalFunction::new(qu(n)?, qu(d)?).map_err(fail)?);
    let c1 = rf("-1", "2q^8u^3+q^12")?;
    let c2 = rf("-1", "2q^4u^3+q^8")?;
    let p = data::certificate_source("g111").and_then(|s| s.emended()?.compile()?.recurrence()).map_err(fail)?;
    let zero = LaurentPoly::zero(&["q", "u"]);
    for (i, target) in CLOSING_TARGET.iter().enumerate() {
        let a = p.get(i).cloned().unwrap_or_else(|| zero.clone());
        // N acts as u -> u/q
        let b = if i == 0 { zero.clone() } else { p[i - 1].substitute_monomials(&[vec![1, 0], vec![-1, 1]]) };
        let lhs = c1
            .mul(&RationalFunction::from_poly(a))
            .and_then(|x| x.add(&c2.mul(&RationalFunction::from_poly(b))?))
            .map_err(fail)?;
        ensure(lhs.equals(&RationalFunction::from_poly(qu(target)?)), || format!("entry {i} of the combination differs"))?;
    }
    Ok(())
}

fn chain(c: &Ctx, cond: Conditions, spec: &AgSumSpec, profile: &str, product: &PochhammerSpec) -> Check {
    let n = c.cfg.qorder;
    let prod = product.expand(n).map_err(fail)?;
    compare_q("enumeration", &prod, &c.enumerated(cond)?.at_x_one())?;
    compare_q("sum side", &prod, &evaluate_ag_sum(spec, n).map_err(fail)?.at_x_one())?;
    compare_q(&format!("G({profile}) at x=1"), &prod, &c.g(profile)?.at_x_one())
}

/// Small polynomials in `q, u` with coefficients in {-1, 0, 2}.
fn small_polys() -> Vec<LaurentPoly> {
    let vars = ["q", "u"];
    let supports = [vec![0, 0], vec![1, 0], vec![-1, 1]];
    let mut out = Vec::new();
    for code in 0..27 {
        let mut p = LaurentPoly::zero(&vars);
        let mut k = code;
        for e in &supports {
            let c = [-1, 0, 2][k % 3];
            k /= 3;
            p.add_term(e.clone(), BigInt::from(c));
        }
        out.push(p);
    }
    out
}

fn ring_axioms() -> Check {
    let ps = small_polys();
    let zero = LaurentPoly::zero(&["q", "u"]);
    let one = LaurentPoly::one(&["q", "u"]);
    for a in &ps {
        ensure(&(a + &zero) == a && &(a * &one) == a && (a - a).is_zero(), || format!("identities fail for {a}"))?;
        for b in &ps {
            ensure(a + b == b + a && a * b == b * a, || format!("commutativity fails for {a}, {b}"))?;
            for c in &ps {
                ensure(&(a + b) + c == a + &(b + c), || format!("associativity of + fails for {a}, {b}, {c}"))?;
                ensure(&(a * b) * c == a * &(b * c), || format!("associativity of * fails for {a}, {b}, {c}"))?;
                ensure(a * &(b + c) == &(a * b) + &(a * c), || format!("distributivity fails for {a}, {b}, {c}"))?;
            }
        }
    }
    Ok(())
}

fn inverse_laws() -> Check {
    let order = 8;
    for code in 0..81 {
        let mut cs = vec![1i64];
        let mut k = code;
        for _ in 0..4 {
            cs.push([-1, 0, 1][k % 3]);
            k /= 3;
        }
        let s = QSeries::from_i64s(&cs, order);
        let inv = s.invert().map_err(fail)?;
        compare_q("s * s^-1", &QSeries::one(order), &s.mul(&inv))?;
        compare_q("(s^-1)^-1", &s, &inv.invert().map_err(fail)?)?;
    }
    let ps = small_polys();
    for a in ps.iter().filter(|p| !p.is_zero()) {
        let r = RationalFunction::new(LaurentPoly::one(&["q", "u"]), a.clone()).map_err(fail)?;
        let back = r.mul(&RationalFunction::from_poly(a.clone())).map_err(fail)?;
        ensure(back.equals(&RationalFunction::from_poly(LaurentPoly::one(&["q", "u"]))), || format!("(1/{a}) * {a} is not 1"))?;
        for b in ps.iter().filter(|p| !p.is_zero()) {
            let ra = RationalFunction::from_poly(a.clone());
            let rb = RationalFunction::from_poly(b.clone());
            let q = ra.div(&rb).and_then(|q| q.mul(&rb)).map_err(fail)?;
            ensure(q.equals(&ra), || format!("({a} / {b}) * {b} is not {a}"))?;
        }
    }
    Ok(())
}

fn xshift_composition(c: &Ctx) -> Check {
    let s = c.enumerated(Conditions::BIR)?.truncate(c.cfg.n20());
    for a in 0..4 {
        for b in 0..4 {
            compare_bi(&format!("shift by {a} then {b}"), &s.apply_xshift(a + b), &s.apply_xshift(a).apply_xshift(b))?;
        }
    }
    Ok(())
}

fn dfa_reminimization(c: &Ctx) -> Check {
    let d = c.dfa()?;
    let m = d.minimize();
    ensure(m == *d && m.minimize() == m, || "minimization is not idempotent on the built automaton".into())?;
    let golden = data::golden_dfa().map_err(fail)?;
    ensure(golden.minimize() == *d, || "minimizing the printed table does not give the built automaton".into())?;
    // automata for prefixes of the forbidden list
    let words = bipartid::automata::bir_forbidden_words();
    for k in [1, 5, 12, 24, 36] {
        let a = bipartid::automata::build_avoidance_dfa(&words[..k]).map_err(fail)?;
        ensure(a.minimize() == a, || format!("automaton for {k} words is not a fixed point"))?;
    }
    Ok(())
}

fn perturbed_certificates() -> Check {
    for name in ["g111", "g300", "bir", "birp"] {
        let term = data::certificate_term(name).map_err(fail)?;
        let cert = data::certificate_source(name).and_then(|s| s.emended()?.compile()).map_err(fail)?.perturbed(1, 0, 0, 1);
        let v = verify_certificate(&term, &cert).map_err(fail)?;
        ensure(!v.holds, || format!("perturbed {name} certificate still verifies"))?;
        let p = cert.recurrence().map_err(fail)?;
        ensure(check_recurrence(&term, &p, &BigRational::from_integer(2.into()), 25).is_some(), || {
            format!("perturbed {name} recurrence still annihilates the sums")
        })?;
    }
    Ok(())
}

fn emit_determinism(c: &Ctx) -> Check {
    let n = c.cfg.n20();
    let cases = [
        ("bir", Format::Csv),
        ("birp", Format::Json),
        ("cylindric:3,0,0", Format::Csv),
        ("dfa", Format::Dot),
        ("dfa", Format::Json),
        ("system", Format::Json),
        ("operator:birp", Format::Json),
        ("certificate:bir", Format::Json),
    ];
    for (t, f) in cases {
        let target = Target::parse(t).map_err(fail)?;
        let a = emit::render(&target, f, n).map_err(fail)?;
        let b = emit::render(&target, f, n).map_err(fail)?;
        ensure(a == b, || format!("{t} as {f:?} differs between runs"))?;
    }
    Ok(())
}
