//! Command implementations. Every command produces a JSON value; the
//! human-readable form is rendered from that value in [`crate::pretty`].

use serde::Serialize;
use serde_json::{json, Value};
use stiefel_bp::algebra::{Series, TruncationPolicy};
use stiefel_bp::fgl::FglContext;
use stiefel_bp::obstruction::{evaluate, scan, MapQuery, ObstructionReport, ScanRanges};
use stiefel_bp::ss::{cross_check, presentation_closed_form, run_to_einfty, Page, SlotShape, SsConfig};
use stiefel_bp::{Exec, PLocal, Prime, Valuation};

use crate::suites::{run_suite, suites, SuiteOptions};
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PresentMode {
    ClosedForm,
    Engine,
    Both,
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("plain data serializes")
}

#[derive(Serialize)]
struct SlotSummary {
    s: usize,
    q: usize,
    shape: SlotShape,
    generators: Vec<String>,
}

#[derive(Serialize)]
struct EngineSummary {
    n: usize,
    k: usize,
    p: u64,
    xmax: usize,
    window: usize,
    /// `E_inf^{2t,0}` for `t = 0..=window/2`.
    x_column: Vec<SlotShape>,
    /// `[j, v_p of the y_j coordinate of the generator of E_inf^{0,2j-1}]`,
    /// `null` when nothing survives.
    gamma_valuations: Vec<(usize, Option<i64>)>,
    slots: Vec<SlotSummary>,
}

fn engine_summary(page: &Page) -> EngineSummary {
    let cfg = page.config;
    let x_column = (0..=page.window / 2).map(|t| page.shape(2 * t, 0).expect("within window")).collect();
    let lo = cfg.n - cfg.k + 1;
    let gamma_valuations = (lo..=cfg.n)
        .filter(|j| 2 * j - 1 <= page.window)
        .map(|j| {
            let key = stiefel_bp::algebra::ExtKey::new(vec![j], 0);
            let slot = page.slot(0, 2 * j - 1).expect("within window");
            let v = slot.summands.iter().map(|s| s.rep.coeff(&key).vp(cfg.p)).min().unwrap_or(Valuation::Infinite);
            (j, v.finite())
        })
        .collect();
    let slots = page
        .slots()
        .map(|slot| SlotSummary {
            s: slot.s,
            q: slot.q,
            shape: slot.shape(),
            generators: slot.summands.iter().map(|x| x.rep.to_string()).collect(),
        })
        .collect();
    EngineSummary { n: cfg.n, k: cfg.k, p: cfg.p.get(), xmax: cfg.xmax, window: page.window, x_column, gamma_valuations, slots }
}

/// The JSON for `present`, and whether engine and closed form agree (always
/// true unless both are computed).
pub fn present_value(
    n: usize,
    k: usize,
    p: Prime,
    mode: PresentMode,
    xmax: Option<usize>,
    exec: Exec,
) -> Result<(Value, bool), CliError> {
    let cfg = match xmax {
        Some(x) => SsConfig::with_xmax(n, k, p, x),
        None => SsConfig::new(n, k, p),
    }
    .map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(match mode {
        PresentMode::ClosedForm => (to_value(&presentation_closed_form(&cfg)), true),
        PresentMode::Engine => (to_value(&engine_summary(&run_to_einfty(&cfg, exec))), true),
        PresentMode::Both => {
            let report = cross_check(&cfg, exec);
            let agree = report.agree;
            let value = json!({
                "closed_form": to_value(&presentation_closed_form(&cfg)),
                "engine": to_value(&engine_summary(&run_to_einfty(&cfg, exec))),
                "cross_check": to_value(&report),
            });
            (value, agree)
        }
    })
}

/// `log`, `exp`, `fgl`, `nseries:a` or `adams:a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeriesKind {
    Log,
    Exp,
    Fgl,
    NSeries(PLocal),
    Adams(PLocal),
}

impl std::str::FromStr for SeriesKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parse_a = |a: &str| a.parse::<PLocal>().map_err(|e| format!("bad parameter '{a}': {e}"));
        match s.split_once(':') {
            None => match s {
                "log" => Ok(SeriesKind::Log),
                "exp" => Ok(SeriesKind::Exp),
                "fgl" => Ok(SeriesKind::Fgl),
                _ => Err(format!("unknown series kind '{s}' (log, exp, fgl, nseries:a, adams:a)")),
            },
            Some(("nseries", a)) => Ok(SeriesKind::NSeries(parse_a(a)?)),
            Some(("adams", a)) => Ok(SeriesKind::Adams(parse_a(a)?)),
            Some(_) => Err(format!("unknown series kind '{s}' (log, exp, fgl, nseries:a, adams:a)")),
        }
    }
}

impl std::fmt::Display for SeriesKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SeriesKind::Log => write!(f, "log"),
            SeriesKind::Exp => write!(f, "exp"),
            SeriesKind::Fgl => write!(f, "fgl"),
            SeriesKind::NSeries(a) => write!(f, "nseries:{a}"),
            SeriesKind::Adams(a) => write!(f, "adams:{a}"),
        }
    }
}

fn univariate_terms(s: &Series) -> Vec<Value> {
    s.coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(t, c)| json!({ "xdeg": t, "coefficient": c.to_string() }))
        .collect()
}

/// `jorder` counts like the ideal power: terms in `J^jorder` are dropped.
pub fn series_value(kind: &SeriesKind, p: Prime, xmax: usize, jorder: u32) -> Result<Value, CliError> {
    if jorder < 1 {
        return Err(CliError::Usage("jorder must be at least 1".into()));
    }
    // jorder 1 (modulo J) keeps only the v-free part
    let v_free_only = jorder == 1;
    let pol = TruncationPolicy::new(p, (jorder - 1).max(1), xmax).map_err(|e| CliError::Usage(e.to_string()))?;
    let ctx = FglContext::new(pol).map_err(CliError::compute)?;
    let (rendered, terms) = match kind {
        SeriesKind::Fgl => {
            let f = if v_free_only { ctx.fgl().v_free() } else { ctx.fgl().clone() };
            let terms = f
                .terms()
                .map(|(e, c)| json!({ "x": e[0], "y": e[1], "coefficient": c.to_string() }))
                .collect();
            (f.to_string(), terms)
        }
        _ => {
            let s = match kind {
                SeriesKind::Log => ctx.log().clone(),
                SeriesKind::Exp => ctx.exp().clone(),
                SeriesKind::NSeries(a) => ctx.n_series(a).map_err(CliError::compute)?,
                SeriesKind::Adams(a) => ctx.adams(a).map_err(CliError::compute)?.series().clone(),
                SeriesKind::Fgl => unreachable!(),
            };
            let s = if v_free_only { s.v_free() } else { s };
            (s.render("x"), univariate_terms(&s))
        }
    };
    Ok(json!({
        "kind": kind.to_string(),
        "p": p.get(),
        "xmax": xmax,
        "jorder": jorder,
        "series": rendered,
        "terms": terms,
    }))
}

pub fn obstruct_value(n: usize, k: usize, m: usize, l: usize) -> Result<Value, CliError> {
    let q = MapQuery::new(n, k, m, l).map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(to_value(&evaluate(&q)))
}

pub fn scan_reports(ranges: &ScanRanges, exec: Exec) -> Vec<ObstructionReport> {
    scan(ranges, exec)
}

/// CSV with columns `n,k,m,l,verdict,first_firing_criterion`.
pub fn scan_csv(reports: &[ObstructionReport]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["n", "k", "m", "l", "verdict", "first_firing_criterion"]).map_err(CliError::compute)?;
    for r in reports {
        let first = r.first_firing().map_or("", |c| c.name);
        w.write_record([
            r.n.to_string(),
            r.k.to_string(),
            r.m.to_string(),
            r.l.to_string(),
            r.verdict.to_string(),
            first.to_string(),
        ])
        .map_err(CliError::compute)?;
    }
    let bytes = w.into_inner().map_err(CliError::compute)?;
    String::from_utf8(bytes).map_err(CliError::compute)
}

/// Runs the suites, reporting each line through `progress` as it finishes.
pub fn selfcheck_value(opts: &SuiteOptions, mut progress: impl FnMut(&str)) -> (Value, bool) {
    let mut entries = Vec::new();
    let mut all = true;
    for suite in suites() {
        let result = run_suite(&suite, opts);
        progress(&result.line());
        let passed = result.passed();
        all &= passed;
        entries.push(json!({
            "id": result.id,
            "name": result.name,
            "passed": passed,
            "elapsed_ms": result.elapsed.as_millis() as u64,
            "detail": match &result.outcome { Ok(s) | Err(s) => s.clone() },
        }));
    }
    (json!({ "passed": all, "quick": opts.quick, "suites": entries }), all)
}
