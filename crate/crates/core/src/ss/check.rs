//! Engine against closed form.
//!
//! Compared within the validity window: the x-column `E_∞^{2t,0}`, the
//! exterior column `E_∞^{0,q}` (ranks, no torsion), the multiplier `p^{s_j}`
//! on `y_j` in the generator of `E_∞^{0,2j-1}`, and the vanishing of the
//! `y_{n-k+1}` coordinate there.

use serde::Serialize;

use crate::algebra::ExtKey;
use crate::arith::Valuation;
use crate::exec::Exec;

use super::page::{run_to_einfty, Page, SlotShape};
use super::presentation::{presentation_closed_form, Presentation};
use super::SsConfig;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    /// Which comparison failed: `x_column`, `exterior_column`,
    /// `gamma_multiplier` or `bottom_generator`.
    pub what: String,
    /// Bidegree `(s, q)` of the slot.
    pub slot: (usize, usize),
    pub engine: String,
    pub closed_form: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossCheckReport {
    pub n: usize,
    pub k: usize,
    pub p: u64,
    pub xmax: usize,
    pub window: usize,
    pub agree: bool,
    /// Number of individual comparisons made.
    pub checked: usize,
    pub first_discrepancy: Option<Discrepancy>,
}

/// Minimum valuation of the `y_j` coefficient over the generators of
/// `E_∞^{0,2j-1}`.
fn y_coordinate_valuation(page: &Page, j: usize) -> Valuation {
    let key = ExtKey::new(vec![j], 0);
    let p = page.config.p;
    page.slot(0, 2 * j - 1)
        .map(|slot| slot.summands.iter().map(|s| s.rep.coeff(&key).vp(p)).min().unwrap_or(Valuation::Infinite))
        .unwrap_or(Valuation::Infinite)
}

fn compare(page: &Page, pres: &Presentation) -> (usize, Option<Discrepancy>) {
    let cfg = page.config;
    let window = page.window;
    let mut checked = 0;
    let mut mismatch = |what: &str, slot: (usize, usize), engine: String, closed: String| {
        checked += 1;
        (engine != closed).then(|| Discrepancy { what: what.into(), slot, engine, closed_form: closed })
    };
    let mut found = None;
    let mut note = |d: Option<Discrepancy>| {
        if found.is_none() {
            found = d;
        }
    };

    for t in 0..=window / 2 {
        let engine = page.shape(2 * t, 0).expect("within window");
        note(mismatch("x_column", (2 * t, 0), engine.to_string(), pres.x_column(t).to_string()));
    }
    for q in 1..=window {
        let engine = page.shape(0, q).expect("within window");
        let closed = SlotShape { free_rank: pres.exterior_rank(q), torsion: Vec::new() };
        note(mismatch("exterior_column", (0, q), engine.to_string(), closed.to_string()));
    }
    let lo = cfg.n - cfg.k + 1;
    if 2 * lo - 1 <= window {
        let v = y_coordinate_valuation(page, lo);
        note(mismatch("bottom_generator", (0, 2 * lo - 1), v.to_string(), Valuation::Infinite.to_string()));
    }
    for j in lo + 1..=cfg.n {
        if 2 * j - 1 > window {
            break;
        }
        let v = y_coordinate_valuation(page, j);
        let s = pres.gamma_multiplier(j).expect("gamma index");
        note(mismatch("gamma_multiplier", (0, 2 * j - 1), v.to_string(), s.to_string()));
    }
    (checked, found)
}

pub fn cross_check(cfg: &SsConfig, exec: Exec) -> CrossCheckReport {
    let page = run_to_einfty(cfg, exec);
    let pres = presentation_closed_form(cfg);
    let (checked, first_discrepancy) = compare(&page, &pres);
    CrossCheckReport {
        n: cfg.n,
        k: cfg.k,
        p: cfg.p.get(),
        xmax: cfg.xmax,
        window: page.window,
        agree: first_discrepancy.is_none(),
        checked,
        first_discrepancy,
    }
}
