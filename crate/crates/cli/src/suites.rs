//! Acceptance suites shared by `selfcheck` and the `acceptance` test target.

use std::time::{Duration, Instant};

use num_bigint::BigUint;
use serde_json::json;
use stiefel_bp::algebra::{CoeffPoly, ExtElement, StiefelContext, TruncationPolicy, VMonomial};
use stiefel_bp::arith::{int_vp, vp_binom, vp_binom_legendre, Valuation};
use stiefel_bp::fgl::{adams3_alphas, adams_apply, FglContext};
use stiefel_bp::obstruction::{check_sq2, derive_constraint, evaluate, steenrod_family, MapQuery, Verdict};
use stiefel_bp::ss::{cross_check, run_pages, SsConfig, Transgression};
use stiefel_bp::{Exec, PLocal, Prime};

use crate::commands::{present_value, PresentMode};

#[derive(Clone, Copy, Debug, Default)]
pub struct SuiteOptions {
    /// Smaller parameter ranges for a fast smoke run.
    pub quick: bool,
    /// Replace `d(y_n) = x^n` by `p x^n` in the engine. Suites that depend
    /// on the engine must then fail.
    pub mutate_transgression: bool,
    pub exec: Exec,
}

pub type Outcome = Result<String, String>;

pub struct Suite {
    pub id: &'static str,
    pub name: &'static str,
    /// Wall-clock bound for a full (not quick) run.
    pub budget: Duration,
    pub run: fn(&SuiteOptions) -> Outcome,
}

pub struct SuiteResult {
    pub id: &'static str,
    pub name: &'static str,
    pub outcome: Outcome,
    pub elapsed: Duration,
    pub budget: Duration,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.outcome.is_ok() && self.elapsed <= self.budget
    }

    pub fn line(&self) -> String {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let detail = match &self.outcome {
            Ok(s) if self.elapsed <= self.budget => s.clone(),
            Ok(_) => format!("over budget ({:?} > {:?})", self.elapsed, self.budget),
            Err(e) => e.clone(),
        };
        format!("[{status}] {} {} ({:.2?}): {detail}", self.id, self.name, self.elapsed)
    }
}

pub fn suites() -> Vec<Suite> {
    let s = Duration::from_secs;
    vec![
        Suite { id: "1", name: "projective spaces", budget: s(1), run: projective_spaces },
        Suite { id: "2", name: "engine vs closed form", budget: s(300), run: engine_vs_closed_form },
        Suite { id: "3", name: "formal group law axioms", budget: s(30), run: fgl_axioms },
        Suite { id: "4", name: "Araki identity", budget: s(60), run: araki },
        Suite { id: "5", name: "Adams closed form", budget: s(60), run: adams_closed_form },
        Suite { id: "6", name: "coefficient action", budget: s(60), run: coefficient_action },
        Suite { id: "7", name: "Stiefel Adams formula", budget: s(60), run: stiefel_adams },
        Suite { id: "8", name: "obstruction suite", budget: s(60), run: obstruction_suite },
        Suite { id: "9", name: "constraint derivation", budget: s(60), run: constraint_derivation },
        Suite { id: "10", name: "valuation oracle", budget: s(60), run: valuation_oracle },
        Suite { id: "pages", name: "page consistency", budget: s(120), run: page_consistency },
    ]
}

pub fn run_suite(suite: &Suite, opts: &SuiteOptions) -> SuiteResult {
    let start = Instant::now();
    let outcome = (suite.run)(opts);
    SuiteResult { id: suite.id, name: suite.name, outcome, elapsed: start.elapsed(), budget: suite.budget }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn engine_config(n: usize, k: usize, p: Prime, opts: &SuiteOptions) -> Result<SsConfig, String> {
    let cfg = SsConfig::covering(n, k, p).map_err(|e| e.to_string())?;
    Ok(if opts.mutate_transgression {
        cfg.with_transgression(Transgression::Perturbed { j: n, factor: p.get() as i64 })
    } else {
        cfg
    })
}

fn projective_spaces(_: &SuiteOptions) -> Outcome {
    let mut count = 0;
    for n in 1..=20 {
        for p in [2, 3, 5] {
            let v = present_value(n, 1, Prime::new(p).unwrap(), PresentMode::ClosedForm, None, Exec::Sequential)
                .map_err(|e| e.to_string())?
                .0;
            ensure(v["ideal"] == json!([[1, n]]), || format!("present {n} 1 {p}: ideal {}", v["ideal"]))?;
            ensure(v["gamma_degrees"] == json!([]), || format!("present {n} 1 {p}: gammas {}", v["gamma_degrees"]))?;
            count += 1;
        }
    }
    Ok(format!("{count} presentations equal (x^n) with no gammas"))
}

fn engine_vs_closed_form(opts: &SuiteOptions) -> Outcome {
    let top = if opts.quick { 5 } else { 10 };
    let mut checked = 0;
    for n in 1..=top {
        for k in 1..=n {
            for p in [Prime::TWO, Prime::THREE] {
                let cfg = engine_config(n, k, p, opts)?;
                let report = cross_check(&cfg, opts.exec);
                if let Some(d) = report.first_discrepancy {
                    return Err(format!(
                        "(n,k,p)=({n},{k},{}): {} at {:?}: engine {} vs closed form {}",
                        p.get(),
                        d.what,
                        d.slot,
                        d.engine,
                        d.closed_form
                    ));
                }
                checked += report.checked;
            }
        }
    }
    Ok(format!("all (n,k) with n <= {top}, p in {{2,3}} agree ({checked} comparisons)"))
}

fn page_consistency(opts: &SuiteOptions) -> Outcome {
    let cases: &[(usize, usize)] = if opts.quick { &[(4, 2), (5, 3)] } else { &[(4, 2), (6, 4), (7, 3), (8, 8)] };
    let mut pages_checked = 0;
    for &(n, k) in cases {
        for p in [Prime::TWO, Prime::THREE] {
            let mut cfg = SsConfig::new(n, k, p).map_err(|e| e.to_string())?;
            if opts.mutate_transgression {
                cfg = cfg.with_transgression(Transgression::Perturbed { j: n, factor: p.get() as i64 });
            }
            let pages = run_pages(&cfg, opts.exec);
            for pair in pages.windows(2) {
                let (cur, next) = (&pair[0], &pair[1]);
                ensure(cur.d_squared_vanishes(), || format!("({n},{k}) p={}: d^2 != 0 on E_{}", p.get(), cur.r))?;
                for degree in 0..=cfg.validity_window() {
                    for s in (0..=degree).step_by(2) {
                        let h = cur.homology_shape(s, degree - s).map_err(|e| e.to_string())?;
                        let e = next.shape(s, degree - s).map_err(|e| e.to_string())?;
                        ensure(h == e, || {
                            format!("({n},{k}) p={}: H(E_{}) = {h} but E_{} = {e} at ({s},{})", p.get(), cur.r, next.r, degree - s)
                        })?;
                    }
                }
                pages_checked += 1;
            }
        }
    }
    Ok(format!("{pages_checked} page transitions satisfy d^2 = 0 and E_(r+1) = H(E_r)"))
}

fn fgl_axioms(_: &SuiteOptions) -> Outcome {
    for p in [2, 3] {
        let pol = TruncationPolicy::new(Prime::new(p).unwrap(), 2, 8).map_err(|e| e.to_string())?;
        let report = FglContext::new(pol).and_then(|c| c.axiom_report()).map_err(|e| e.to_string())?;
        ensure(report.all(), || format!("p = {p}: {report:?}"))?;
    }
    Ok("unit, commutativity and associativity hold at x-degree 8 modulo J^3 for p = 2, 3".into())
}

fn araki(_: &SuiteOptions) -> Outcome {
    for p in [2u64, 3] {
        let pol = TruncationPolicy::new(Prime::new(p).unwrap(), 2, (p * p) as usize).map_err(|e| e.to_string())?;
        let report = FglContext::new(pol).and_then(|c| c.araki_check()).map_err(|e| e.to_string())?;
        ensure(report.holds, || format!("p = {p}: {:?}", report.first_failure))?;
    }
    Ok("[p](x) = px +F v1 x^p +F v2 x^(p^2) at x-degree p^2 for p = 2, 3".into())
}

fn adams_closed_form(_: &SuiteOptions) -> Outcome {
    let pol = TruncationPolicy::mod_j2(Prime::TWO, 8).map_err(|e| e.to_string())?;
    let psi = FglContext::new(pol).and_then(|c| c.adams(&PLocal::from(3))).map_err(|e| e.to_string())?;
    let rendered = psi.series().render("x");
    let expected = "x + v1*x^2 + (13/7)*v2*x^4 + (1093/127)*v3*x^8";
    ensure(rendered == expected, || format!("Psi^3(x) = {rendered}"))?;
    let alphas = adams3_alphas(3).map_err(|e| e.to_string())?;
    for (i, alpha) in (1u32..).zip(&alphas) {
        let e = (1u32 << i) - 1;
        let num = PLocal::from(1) - PLocal::from_int(num_bigint::BigInt::from(3).pow(e));
        let den = PLocal::from(2) * (PLocal::from(1) - PLocal::from_int(num_bigint::BigInt::from(2).pow(e)));
        let closed = &num / &den;
        ensure(*alpha == closed, || format!("alpha_{i} = {alpha}, closed form {closed}"))?;
    }
    ensure(psi.series().is_p_integral(Prime::TWO), || "a coefficient is not 2-local".into())?;
    Ok(format!("Psi^3(x) = {rendered}"))
}

fn coefficient_action(_: &SuiteOptions) -> Outcome {
    let pol = TruncationPolicy::new(Prime::TWO, 2, 8).map_err(|e| e.to_string())?;
    for i in 1..=3usize {
        let image = adams_apply(&PLocal::from(3), &CoeffPoly::var(i), pol).map_err(|e| e.to_string())?;
        let factor = PLocal::from_int(num_bigint::BigInt::from(3).pow((1u32 << i) - 1));
        let expected = CoeffPoly::var(i).scale(&factor);
        ensure(image == expected, || format!("Psi^3(v{i}) = {image}, expected {expected}"))?;
        ensure(image.coeff(&VMonomial::var(i)) == factor, || format!("v{i}"))?;
    }
    Ok("Psi^3(v_i) = 3^(2^i - 1) v_i for i = 1, 2, 3".into())
}

fn stiefel_adams(_: &SuiteOptions) -> Outcome {
    let ctx = StiefelContext::new(8, 3).map_err(|e| e.to_string())?;
    let y6: ExtElement<CoeffPoly> = ExtElement::y(ctx, 6).map_err(|e| e.to_string())?;
    let pol = TruncationPolicy::mod_j2(Prime::TWO, 8).map_err(|e| e.to_string())?;
    let image = adams_apply(&PLocal::from(3), &y6, pol).map_err(|e| e.to_string())?;
    let rendered = image.to_string();
    ensure(rendered == "y6 + 5*v1*y7", || format!("Psi^3(y6) = {rendered}"))?;
    Ok(format!("Psi^3(y6) = {rendered} in W(8,3)"))
}

fn obstruction_suite(_: &SuiteOptions) -> Outcome {
    let q = |n, k, m, l| MapQuery::new(n, k, m, l).map_err(|e| e.to_string());
    let first = |query: MapQuery| evaluate(&query).first_firing().map(|c| (c.name, c.witness.clone()));

    let r = first(q(10, 10, 6, 5)?);
    ensure(r == Some(("bp_adams", json!({"s": 3}))), || format!("(10,10,6,5): {r:?}"))?;
    let r = first(q(4, 2, 5, 3)?).map(|x| x.0);
    ensure(r == Some("divisibility"), || format!("(4,2,5,3): {r:?}"))?;
    let r = first(q(5, 1, 9, 8)?).map(|x| x.0);
    ensure(r == Some("dimension"), || format!("(5,1,9,8): {r:?}"))?;
    let mut trivial = 0;
    for n in 1..=30 {
        for k in 1..=n {
            for l in [k, k - 1] {
                if l == 0 {
                    continue;
                }
                let report = evaluate(&q(n, k, n, l)?);
                ensure(report.verdict == Verdict::Inconclusive, || format!("({n},{k},{n},{l}) ruled out"))?;
                trivial += 1;
            }
        }
    }
    let fam = steenrod_family(44).map_err(|e| e.to_string())?;
    ensure(fam == q(699, 7, 702, 10)?, || format!("steenrod_family(44) = {fam}"))?;
    ensure(check_sq2(&fam).fires, || "sq2 does not fire on (699,7,702,10)".into())?;
    Ok(format!("named verdicts hold, {trivial} map-exists queries inconclusive, family r=44 fires sq2"))
}

fn constraint_derivation(_: &SuiteOptions) -> Outcome {
    let q = MapQuery::new(10, 10, 6, 5).map_err(|e| e.to_string())?;
    let c = derive_constraint(&q, 3).map_err(|e| e.to_string())?;
    ensure(c.normalized == "beta*(m-l) = 2*(1-2^7)*k_3", || format!("normalized: {}", c.normalized))?;
    ensure(c.instantiated == "beta*1 = -254*k_3", || format!("instantiated: {}", c.instantiated))?;
    ensure(c.lhs_valuation == 0 && c.rhs_valuation_at_least >= 1, || {
        format!("v2(LHS) = {}, v2(RHS) >= {}", c.lhs_valuation, c.rhs_valuation_at_least)
    })?;
    ensure(!c.satisfiable, || "constraint reported satisfiable".into())?;
    Ok(format!("{}; {}", c.instantiated, c.reason))
}

/// Row `n` of Pascal's triangle checked against both valuation formulas.
fn check_row(n: u64, p: Prime) -> Result<(), String> {
    let mut c = BigUint::from(1u32);
    for k in 0..=n {
        let direct = Valuation::Finite(int_vp(&c.clone().into(), p) as i64);
        let kummer = vp_binom(n, k, p);
        let legendre = vp_binom_legendre(n, k, p);
        if kummer != legendre || kummer != direct {
            return Err(format!("C({n},{k}) at p={}: kummer {kummer}, legendre {legendre}, direct {direct}", p.get()));
        }
        c = c * (n - k) / (k + 1);
    }
    Ok(())
}

fn valuation_oracle(opts: &SuiteOptions) -> Outcome {
    let top = if opts.quick { 300 } else { 2000 };
    let jobs: Vec<(u64, u64)> = (0..=top).flat_map(|n| [2u64, 3, 5].map(|p| (n, p))).collect();
    let count = jobs.len();
    let failures: Vec<String> =
        opts.exec.map(jobs, |(n, p)| check_row(n, Prime::new(p).unwrap())).into_iter().filter_map(|r| r.err()).collect();
    match failures.first() {
        Some(f) => Err(f.clone()),
        None => Ok(format!("Kummer = Legendre = direct for 0 <= k <= n <= {top} ({count} rows)")),
    }
}
