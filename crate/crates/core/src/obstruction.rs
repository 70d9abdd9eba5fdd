//! Criteria ruling out `S^1`-equivariant maps `W(n,k) -> W(m,l)`.
//!
//! Each criterion is a decidable condition on `(n, k, m, l)`; a firing
//! criterion proves that no equivariant map exists. The artifact never
//! claims that a map exists: the only alternative verdict is
//! `Inconclusive`.

use std::fmt;
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{CoeffPoly, ExtElement, ExtKey, StiefelContext, TruncationPolicy, VMonomial};
use crate::arith::{binom_int, vp_binom, PLocal, Prime, Valuation};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::fgl::{adams3_alphas, adams_apply};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct MapQuery {
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub l: usize,
}

impl MapQuery {
    pub fn new(n: usize, k: usize, m: usize, l: usize) -> Result<Self> {
        StiefelContext::new(n, k)?;
        StiefelContext::new(m, l)?;
        Ok(MapQuery { n, k, m, l })
    }

    fn source_gap(&self) -> usize {
        self.n - self.k
    }

    fn target_gap(&self) -> usize {
        self.m - self.l
    }

    /// `C(n, n-k+1)`, the transgression coefficient of the bottom generator
    /// of the source.
    fn source_bottom(&self) -> BigInt {
        binom_int(self.n as u64, (self.source_gap() + 1) as i64)
    }

    fn target_bottom(&self) -> BigInt {
        binom_int(self.m as u64, (self.target_gap() + 1) as i64)
    }
}

impl fmt::Display for MapQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "W({},{}) -> W({},{})", self.n, self.k, self.m, self.l)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    RuledOut,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::RuledOut => "ruled_out",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionResult {
    pub name: &'static str,
    pub fires: bool,
    /// Data backing a firing criterion, `null` otherwise.
    pub witness: Value,
}

impl CriterionResult {
    fn silent(name: &'static str) -> Self {
        CriterionResult { name, fires: false, witness: Value::Null }
    }

    fn fired(name: &'static str, witness: Value) -> Self {
        CriterionResult { name, fires: true, witness }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ObstructionReport {
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub l: usize,
    pub verdict: Verdict,
    pub criteria: Vec<CriterionResult>,
    pub notes: Vec<String>,
}

impl ObstructionReport {
    pub fn query(&self) -> MapQuery {
        MapQuery { n: self.n, k: self.k, m: self.m, l: self.l }
    }

    pub fn first_firing(&self) -> Option<&CriterionResult> {
        self.criteria.iter().find(|c| c.fires)
    }
}

fn v2(x: &BigInt) -> u64 {
    crate::arith::int_vp(x, Prime::TWO)
}

fn v2_binom(n: usize, j: usize) -> Valuation {
    vp_binom(n as u64, j as u64, Prime::TWO)
}

/// Equivariant maps force `n - k <= m - l`.
pub fn check_dimension(q: &MapQuery) -> CriterionResult {
    if q.source_gap() > q.target_gap() {
        CriterionResult::fired("dimension", json!({ "n_minus_k": q.source_gap(), "m_minus_l": q.target_gap() }))
    } else {
        CriterionResult::silent("dimension")
    }
}

/// When `n - k = m - l`, a map forces `C(n, n-k+1) | C(m, m-l+1)`.
pub fn check_divisibility(q: &MapQuery) -> CriterionResult {
    if q.source_gap() != q.target_gap() {
        return CriterionResult::silent("divisibility");
    }
    let (a, b) = (q.source_bottom(), q.target_bottom());
    if b.is_multiple_of(&a) {
        CriterionResult::silent("divisibility")
    } else {
        CriterionResult::fired("divisibility", json!({ "divisor": a.to_string(), "dividend": b.to_string() }))
    }
}

/// The `Sq^2` argument: with `m, l` even, `n, k` odd, equal gaps, both
/// bottom binomials exactly divisible by 2 and the divisibility holding,
/// `Sq^2(y_{m-l+1}) = 0` would have to map to `Sq^2(y_{n-k+1}) = x y_{n-k+1}`,
/// which is nonzero mod 2.
pub fn check_sq2(q: &MapQuery) -> CriterionResult {
    let parity = q.m % 2 == 0 && q.l % 2 == 0 && q.n % 2 == 1 && q.k % 2 == 1;
    if !parity || q.source_gap() != q.target_gap() {
        return CriterionResult::silent("sq2");
    }
    let (a, b) = (q.source_bottom(), q.target_bottom());
    if v2(&a) != 1 || v2(&b) != 1 || !b.is_multiple_of(&a) {
        return CriterionResult::silent("sq2");
    }
    let bottom = q.source_gap() + 1;
    CriterionResult::fired(
        "sq2",
        json!({
            "sq2_target_bottom": "0",
            "sq2_source_bottom": format!("x*y{bottom}"),
        }),
    )
}

/// Smallest `s >= 1` with `m < 2^s + m - l <= n`.
fn bp_adams_exponent(q: &MapQuery) -> Option<u32> {
    (1..usize::BITS - 1).find(|&s| {
        let top = (1usize << s) + q.target_gap();
        q.m < top && top <= q.n
    })
}

fn bp_adams_conditions(q: &MapQuery) -> Option<u32> {
    if q.source_gap() >= q.target_gap() || q.target_gap() % 2 == 0 {
        return None;
    }
    let s = bp_adams_exponent(q)?;
    let all_even = (q.source_gap() + 1..=q.target_gap()).all(|j| v2_binom(q.n, j) >= Valuation::Finite(1));
    let bottom_odd = v2_binom(q.m, q.target_gap() + 1) == Valuation::Finite(0);
    (all_even && bottom_odd).then_some(s)
}

/// The `BP` Adams operation argument at `p = 2`.
pub fn check_bp_adams(q: &MapQuery) -> CriterionResult {
    match bp_adams_conditions(q) {
        Some(s) => CriterionResult::fired("bp_adams", json!({ "s": s })),
        None => CriterionResult::silent("bp_adams"),
    }
}

/// The linear constraint obtained by comparing the coefficient of
/// `v_s y_{2^s+m-l}` in `Psi^3(g^* y_{m-l+1})` and `g^*(Psi^3 y_{m-l+1})`,
/// where `g^*(y_{m-l+1}) = beta y_{m-l+1} + sum_j k_j v_j y_{2^j+m-l} + ...`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Constraint {
    pub query: MapQuery,
    pub s: u32,
    /// Index `2^s + m - l` of the compared generator.
    pub generator: usize,
    /// `alpha_s` in `Psi^3(x) = x + sum alpha_i v_i x^{2^i}` mod `J^2`.
    pub alpha_s: String,
    /// Coefficient of `beta` on the left: `(m-l) alpha_s`, read off from
    /// `Psi^3(y_{m-l+1})`.
    pub beta_coefficient: String,
    /// `3^{2^s-1}`, read off from `Psi^3(v_s)`.
    pub k_coefficient_left: String,
    /// Coefficient of `k_s` on the right (the `nu` term is absent because
    /// `2^s + m - l > m`).
    pub k_coefficient_right: String,
    /// `(m-l) alpha_s beta = (1 - 3^{2^s-1}) k_s` with numbers substituted.
    pub raw: String,
    /// `beta (m-l) = 2(1 - 2^{2^s-1}) k_s`.
    pub normalized: String,
    /// The normalized form with numbers substituted.
    pub instantiated: String,
    pub lhs_valuation: u64,
    /// Lower bound for `v_2` of the right side over all integers `k_s`.
    pub rhs_valuation_at_least: u64,
    pub satisfiable: bool,
    pub reason: String,
}

fn coefficient_of(e: &ExtElement<CoeffPoly>, j: usize, s: usize) -> PLocal {
    e.coeff(&ExtKey::new(vec![j], 0)).coeff(&VMonomial::var(s))
}

/// Symbolic constraint for `q` at exponent `s` (requires the `bp_adams`
/// conditions and `m < 2^s + m - l <= n`).
pub fn derive_constraint(q: &MapQuery, s: u32) -> Result<Constraint> {
    if bp_adams_conditions(q).is_none() {
        return Err(Error::PreconditionFailed(format!("bp_adams conditions fail for {q}")));
    }
    let gap = q.target_gap();
    let generator = (1usize << s) + gap;
    if s == 0 || generator <= q.m || generator > q.n {
        return Err(Error::PreconditionFailed(format!("need {} < 2^{s} + {gap} <= {}", q.m, q.n)));
    }
    let si = s as usize;
    let ctx = StiefelContext::new(q.n, q.k)?;
    let pol = TruncationPolicy::mod_j2(Prime::TWO, q.n)?;
    let three = PLocal::from(3);

    let bottom: ExtElement<CoeffPoly> = ExtElement::y(ctx, gap + 1)?;
    let psi_bottom = adams_apply(&three, &bottom, pol)?;
    let beta_coefficient = coefficient_of(&psi_bottom, generator, si);
    let alpha_s = adams3_alphas(si)?.pop().expect("s >= 1");
    debug_assert_eq!(beta_coefficient, &PLocal::from(gap as i64) * &alpha_s);

    let psi_v = adams_apply(&three, &CoeffPoly::var(si), pol)?;
    let k_left = psi_v.coeff(&VMonomial::var(si));
    let k_right = PLocal::one();
    let k_total = &k_right - &k_left;

    // beta (m-l) alpha_s = (1 - 3^{2^s-1}) k_s, divide by alpha_s
    let factor = (&k_total / &alpha_s).to_i64().and_then(|f| (f != 0).then_some(f));
    let factor = factor.ok_or_else(|| Error::PreconditionFailed("normalizing factor is not an integer".into()))?;
    let expected = 2 * (1 - (1i64 << ((1u32 << s) - 1)));
    debug_assert_eq!(factor, expected);

    let lhs_valuation = crate::arith::int_vp(&BigInt::from(gap), Prime::TWO);
    let rhs_valuation_at_least = crate::arith::int_vp(&BigInt::from(factor), Prime::TWO);
    let satisfiable = lhs_valuation >= rhs_valuation_at_least;
    let e = (1u32 << s) - 1;
    Ok(Constraint {
        query: *q,
        s,
        generator,
        alpha_s: alpha_s.to_string(),
        beta_coefficient: beta_coefficient.to_string(),
        k_coefficient_left: k_left.to_string(),
        k_coefficient_right: k_right.to_string(),
        raw: format!("({beta_coefficient})*beta = ({k_total})*k_{s}"),
        normalized: format!("beta*(m-l) = 2*(1-2^{e})*k_{s}"),
        instantiated: format!("beta*{gap} = {factor}*k_{s}"),
        lhs_valuation,
        rhs_valuation_at_least,
        satisfiable,
        reason: if satisfiable {
            format!("v2(LHS) = {lhs_valuation} does not contradict v2(RHS) >= {rhs_valuation_at_least}")
        } else {
            format!(
                "v2(LHS) = {lhs_valuation} (beta a unit, m-l = {gap}) but v2(RHS) >= {rhs_valuation_at_least} for every integer k_{s}"
            )
        },
    })
}

/// The instance family `(16r-5, 7, 16r-2, 10)` for `r = -1, -2, 3 (mod 9)`
/// and `r = 2, 1, -2 (mod 7)`.
pub fn steenrod_family(r: usize) -> Result<MapQuery> {
    if r == 0 {
        return Err(Error::PreconditionFailed("r must be at least 1".into()));
    }
    if ![8, 7, 3].contains(&(r % 9)) {
        return Err(Error::PreconditionFailed(format!("r = {r}: r mod 9 = {} not in {{8, 7, 3}}", r % 9)));
    }
    if ![2, 1, 5].contains(&(r % 7)) {
        return Err(Error::PreconditionFailed(format!("r = {r}: r mod 7 = {} not in {{2, 1, 5}}", r % 7)));
    }
    let q = MapQuery::new(16 * r - 5, 7, 16 * r - 2, 10)?;
    if !check_sq2(&q).fires {
        return Err(Error::PreconditionFailed(format!("sq2 does not fire on {q}")));
    }
    Ok(q)
}

/// All criteria in the fixed order dimension, divisibility, sq2, bp_adams.
pub fn evaluate(q: &MapQuery) -> ObstructionReport {
    let criteria = vec![check_dimension(q), check_divisibility(q), check_sq2(q), check_bp_adams(q)];
    let verdict = if criteria.iter().any(|c| c.fires) { Verdict::RuledOut } else { Verdict::Inconclusive };
    let mut notes = Vec::new();
    if verdict == Verdict::Inconclusive {
        notes.push("no criterion fires; this does not assert that a map exists".to_string());
    }
    if q.source_gap() != q.target_gap() {
        notes.push("divisibility and sq2 need n-k = m-l".to_string());
    }
    ObstructionReport { n: q.n, k: q.k, m: q.m, l: q.l, verdict, criteria, notes }
}

/// Rectangular parameter ranges for [`scan`], all inclusive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanRanges {
    pub n: RangeInclusive<usize>,
    pub k: RangeInclusive<usize>,
    pub m: RangeInclusive<usize>,
    pub l: RangeInclusive<usize>,
}

impl ScanRanges {
    /// Valid queries (`1 <= k <= n`, `1 <= l <= m`) in lexicographic order.
    pub fn queries(&self) -> Vec<MapQuery> {
        let mut out = Vec::new();
        for n in self.n.clone() {
            for k in self.k.clone() {
                for m in self.m.clone() {
                    for l in self.l.clone() {
                        if let Ok(q) = MapQuery::new(n, k, m, l) {
                            out.push(q);
                        }
                    }
                }
            }
        }
        out
    }
}

/// Evaluates every query in the ranges; reports come back sorted by
/// `(n, k, m, l)` whatever the execution strategy.
pub fn scan(ranges: &ScanRanges, exec: Exec) -> Vec<ObstructionReport> {
    exec.map(ranges.queries(), |q| evaluate(&q))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: usize, k: usize, m: usize, l: usize) -> MapQuery {
        MapQuery::new(n, k, m, l).unwrap()
    }

    #[test]
    fn dimension_examples() {
        assert!(check_dimension(&q(5, 1, 9, 8)).fires);
        assert!(!check_dimension(&q(4, 2, 5, 3)).fires);
        assert!(!check_dimension(&q(7, 3, 7, 3)).fires);
    }

    #[test]
    fn divisibility_examples() {
        let r = check_divisibility(&q(4, 2, 5, 3));
        assert!(r.fires);
        // C(4, 3) = 4 and C(5, 3) = 10
        assert_eq!(r.witness, json!({"divisor": "4", "dividend": "10"}));
        assert!(!check_divisibility(&q(2, 1, 3, 2)).fires);
        assert!(!check_divisibility(&q(9, 4, 9, 4)).fires);
    }

    #[test]
    fn sq2_examples() {
        assert!(check_sq2(&q(699, 7, 702, 10)).fires);
        assert!(!check_sq2(&q(9, 3, 9, 3)).fires);
        assert!(!check_sq2(&q(4, 2, 5, 3)).fires);
    }

    #[test]
    fn bp_adams_examples() {
        let r = check_bp_adams(&q(10, 10, 6, 5));
        assert!(r.fires);
        assert_eq!(r.witness, json!({"s": 3}));
        assert!(!check_bp_adams(&q(10, 10, 6, 4)).fires);
        assert!(!check_bp_adams(&q(4, 2, 5, 3)).fires);
    }

    #[test]
    fn constraint_for_ten_ten_six_five() {
        let c = derive_constraint(&q(10, 10, 6, 5), 3).unwrap();
        assert_eq!(c.generator, 9);
        assert_eq!(c.alpha_s, "1093/127");
        assert_eq!(c.beta_coefficient, "1093/127");
        assert_eq!(c.k_coefficient_left, "2187");
        assert_eq!(c.normalized, "beta*(m-l) = 2*(1-2^7)*k_3");
        assert_eq!(c.instantiated, "beta*1 = -254*k_3");
        assert_eq!((c.lhs_valuation, c.rhs_valuation_at_least), (0, 1));
        assert!(!c.satisfiable);
    }

    #[test]
    fn constraint_preconditions() {
        assert!(matches!(derive_constraint(&q(4, 2, 5, 3), 1), Err(Error::PreconditionFailed(_))));
        assert!(matches!(derive_constraint(&q(10, 10, 6, 5), 2), Err(Error::PreconditionFailed(_))));
    }

    #[test]
    fn family_examples() {
        assert_eq!(steenrod_family(44).unwrap(), q(699, 7, 702, 10));
        assert!(steenrod_family(1).is_err());
        assert!(steenrod_family(3).is_err());
    }

    #[test]
    fn evaluate_examples() {
        let r = evaluate(&q(10, 10, 6, 5));
        assert_eq!(r.verdict, Verdict::RuledOut);
        assert_eq!(r.first_firing().unwrap().name, "bp_adams");
        assert_eq!(evaluate(&q(5, 1, 9, 8)).first_firing().unwrap().name, "dimension");
        assert_eq!(evaluate(&q(4, 2, 5, 3)).first_firing().unwrap().name, "divisibility");
        assert_eq!(evaluate(&q(6, 3, 6, 3)).verdict, Verdict::Inconclusive);
    }

    #[test]
    fn report_json_schema() {
        let report = evaluate(&q(10, 10, 6, 5));
        let s = serde_json::to_string(&report).unwrap();
        assert!(s.starts_with(r#"{"n":10,"k":10,"m":6,"l":5,"verdict":"ruled_out","criteria":[{"name":"dimension""#), "{s}");
        let v = serde_json::to_value(&report).unwrap();
        assert_eq!(v["criteria"][3], json!({"name": "bp_adams", "fires": true, "witness": {"s": 3}}));
    }

    #[test]
    fn scan_is_sorted_and_deterministic() {
        let ranges = ScanRanges { n: 1..=6, k: 1..=6, m: 1..=6, l: 1..=6 };
        let a = scan(&ranges, Exec::Parallel);
        let b = scan(&ranges, Exec::Sequential);
        assert_eq!(a, b);
        assert!(a.windows(2).all(|w| w[0].query() < w[1].query()));
    }
}
