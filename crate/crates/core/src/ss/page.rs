//! Pages of the spectral sequence of the filtered complex.
//!
//! Each page is computed directly from the complex:
//! `E_r^s = Z_r^s / (Z_{r-1}^{s+1} + B_{r-1}^s)` with
//! `Z_r^s = F^s ∩ D^{-1}(F^{s+r})` and `B_r^s = F^s ∩ D(F^{s-r})`.
//! Weight blocks and pages are independent, so they are computed in one
//! parallel batch. That `E_{r+1}` is the homology of `(E_r, d_r)` is then
//! a checkable property rather than an assumption.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::ExtElement;
use crate::arith::{PLocal, Prime};
use crate::error::{Error, Result};
use crate::exec::Exec;

use super::complex::{Block, FilteredComplex};
use super::lattice::{kernel, span_basis, unit_vector, vanishes_mod, Mat, Order, Quotient};
use super::SsConfig;

/// One cyclic summand of a slot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Summand {
    /// Weight block the summand lives in (`t + sum(S)`).
    pub weight: usize,
    /// A cycle representing the generator.
    pub rep: ExtElement,
    pub order: Order,
}

/// Isomorphism type of a finitely generated Z_(p)-module.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct SlotShape {
    pub free_rank: usize,
    /// Exponents `e` of the `Z/p^e` summands, ascending, all positive.
    pub torsion: Vec<u32>,
}

impl SlotShape {
    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    fn of_orders(orders: impl IntoIterator<Item = Order>) -> Self {
        let mut shape = SlotShape::default();
        for o in orders {
            match o {
                Order::Free => shape.free_rank += 1,
                Order::Torsion(0) => {}
                Order::Torsion(e) => shape.torsion.push(e),
            }
        }
        shape.torsion.sort_unstable();
        shape
    }

    fn merge(&mut self, other: &SlotShape) {
        self.free_rank += other.free_rank;
        self.torsion.extend_from_slice(&other.torsion);
        self.torsion.sort_unstable();
    }
}

impl std::fmt::Display for SlotShape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if self.free_rank == 1 {
            parts.push("Z".into());
        } else if self.free_rank > 1 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        parts.extend(self.torsion.iter().map(|e| format!("Z/p^{e}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// The module at bidegree `(s, q)`: `s = 2t` is the filtration and `q` the
/// exterior degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Slot {
    pub s: usize,
    pub q: usize,
    pub summands: Vec<Summand>,
}

impl Slot {
    pub fn shape(&self) -> SlotShape {
        SlotShape::of_orders(self.summands.iter().map(|x| x.order))
    }

    pub fn degree(&self) -> usize {
        self.s + self.q
    }
}

/// `d_r` restricted to one weight block, from `source` to `target`.
/// `matrix[i][j]` is the coefficient of target summand `i` in the image
/// of source summand `j` (summands counted within the weight block).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffBlock {
    pub weight: usize,
    pub source: (usize, usize),
    pub target: (usize, usize),
    pub source_orders: Vec<Order>,
    pub target_orders: Vec<Order>,
    pub matrix: Vec<Vec<PLocal>>,
}

impl DiffBlock {
    pub fn is_zero(&self, p: Prime) -> bool {
        self.matrix
            .iter()
            .zip(&self.target_orders)
            .all(|(row, &o)| row.iter().all(|x| vanishes_mod(x, o, p)))
    }
}

#[derive(Clone, Debug)]
pub struct Page {
    pub r: usize,
    pub config: SsConfig,
    /// Slots are claimed for total degrees `0..=window`.
    pub window: usize,
    /// Slots up to one degree past the window, so that every differential
    /// leaving the window has a target.
    slots: BTreeMap<(usize, usize), Slot>,
    diffs: Vec<DiffBlock>,
}

impl Page {
    pub fn slot(&self, s: usize, q: usize) -> Result<&Slot> {
        self.check_degree(s + q)?;
        Ok(self.slots.get(&(s, q)).unwrap_or(&EMPTY_SLOT))
    }

    pub fn shape(&self, s: usize, q: usize) -> Result<SlotShape> {
        self.slot(s, q).map(Slot::shape)
    }

    fn check_degree(&self, degree: usize) -> Result<()> {
        if degree > self.window {
            return Err(Error::TruncationTooSmall { degree, window: self.window });
        }
        Ok(())
    }

    /// Nonzero slots within the window.
    pub fn slots(&self) -> impl Iterator<Item = &Slot> {
        self.slots.values().filter(move |s| s.degree() <= self.window && !s.summands.is_empty())
    }

    /// Nonzero blocks of `d_r` whose source lies within the window.
    pub fn differentials(&self) -> impl Iterator<Item = &DiffBlock> {
        let p = self.config.p;
        self.diffs.iter().filter(move |d| !d.is_zero(p))
    }

    /// Shape of the whole module in total degree `degree`.
    pub fn degree_shape(&self, degree: usize) -> Result<SlotShape> {
        self.check_degree(degree)?;
        let mut shape = SlotShape::default();
        for slot in self.slots.values().filter(|s| s.degree() == degree) {
            shape.merge(&slot.shape());
        }
        Ok(shape)
    }

    /// `d_r ∘ d_r` vanishes modulo the target orders wherever both
    /// differentials are within the computed range.
    pub fn d_squared_vanishes(&self) -> bool {
        let p = self.config.p;
        let by_source: BTreeMap<(usize, (usize, usize)), &DiffBlock> =
            self.diffs.iter().map(|d| ((d.weight, d.source), d)).collect();
        self.diffs.iter().all(|first| {
            let Some(second) = by_source.get(&(first.weight, first.target)) else { return true };
            let a = rows_to_mat(&first.matrix, first.source_orders.len());
            let b = rows_to_mat(&second.matrix, second.source_orders.len());
            let prod = b.mul(&a);
            (0..prod.rows()).all(|i| (0..prod.cols()).all(|j| vanishes_mod(prod.get(i, j), second.target_orders[i], p)))
        })
    }

    /// `H(E_r, d_r)` at `(s, q)`, computed from this page alone.
    pub fn homology_shape(&self, s: usize, q: usize) -> Result<SlotShape> {
        self.check_degree(s + q)?;
        let p = self.config.p;
        let Some(slot) = self.slots.get(&(s, q)) else { return Ok(SlotShape::default()) };
        let mut weights: Vec<usize> = slot.summands.iter().map(|x| x.weight).collect();
        weights.dedup();
        let mut shape = SlotShape::default();
        for w in weights {
            let orders: Vec<Order> = slot.summands.iter().filter(|x| x.weight == w).map(|x| x.order).collect();
            let incoming = self.diffs.iter().find(|d| d.weight == w && d.target == (s, q));
            let outgoing = self.diffs.iter().find(|d| d.weight == w && d.source == (s, q));
            shape.merge(&lifted_homology(&orders, incoming, outgoing, p));
        }
        Ok(shape)
    }
}

static EMPTY_SLOT: Slot = Slot { s: 0, q: 0, summands: Vec::new() };

fn rows_to_mat(rows: &[Vec<PLocal>], cols: usize) -> Mat {
    let mut m = Mat::zeros(rows.len(), cols);
    for (i, row) in rows.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            m.set(i, j, x.clone());
        }
    }
    m
}

fn torsion_relations(orders: &[Order], p: Prime) -> Vec<Vec<PLocal>> {
    orders
        .iter()
        .enumerate()
        .filter_map(|(i, o)| match o {
            Order::Torsion(e) => {
                let mut v = unit_vector(orders.len(), i);
                v[i] = PLocal::from_int(p.pow(*e));
                Some(v)
            }
            Order::Free => None,
        })
        .collect()
}

/// Homology at a module `M = Z^a / R` with incoming and outgoing maps,
/// computed on the lifts: `{x : d_out x ∈ R'} / (d_in(Z^b) + R)`.
fn lifted_homology(orders: &[Order], incoming: Option<&DiffBlock>, outgoing: Option<&DiffBlock>, p: Prime) -> SlotShape {
    let a = orders.len();
    let relations = torsion_relations(orders, p);
    let cycles: Vec<Vec<PLocal>> = match outgoing {
        None => (0..a).map(|i| unit_vector(a, i)).collect(),
        Some(d) => {
            let target_rel = torsion_relations(&d.target_orders, p);
            let rows = d.target_orders.len();
            let mut stacked = Mat::zeros(rows, a + target_rel.len());
            for i in 0..rows {
                for j in 0..a {
                    stacked.set(i, j, d.matrix[i][j].clone());
                }
            }
            for (j, rel) in target_rel.iter().enumerate() {
                for i in 0..rows {
                    stacked.set(i, a + j, -&rel[i]);
                }
            }
            let gens: Vec<Vec<PLocal>> = kernel(&stacked, p).into_iter().map(|v| v[..a].to_vec()).collect();
            span_basis(a, &gens, p)
        }
    };
    let mut boundaries = relations;
    if let Some(d) = incoming {
        let b = d.source_orders.len();
        boundaries.extend((0..b).map(|j| (0..a).map(|i| d.matrix[i][j].clone()).collect()));
    }
    SlotShape::of_orders(Quotient::new(a, &cycles, &boundaries, p).summand_orders())
}

/// `E_r` restricted to one weight block in one total degree.
struct BlockPage {
    weight: usize,
    degree: usize,
    /// Keyed by filtration `s`.
    parts: BTreeMap<usize, Quotient>,
}

/// Differential data for one weight block around total degree `N`.
struct BlockContext<'a> {
    prev: &'a Block,
    here: &'a Block,
    next: &'a Block,
    d_prev: &'a Mat,
    d_next: &'a Mat,
}

fn indices(block: &Block, pred: impl Fn(i64) -> bool) -> Vec<usize> {
    (0..block.len()).filter(|&i| pred(block.filtration(i) as i64)).collect()
}

fn embed(dim: usize, positions: &[usize], v: &[PLocal]) -> Vec<PLocal> {
    let mut out = vec![PLocal::zero(); dim];
    for (&i, x) in positions.iter().zip(v) {
        out[i] = x.clone();
    }
    out
}

impl BlockContext<'_> {
    /// Basis of `F^lo ∩ D^{-1}(F^hi)` in this degree.
    fn cycles(&self, lo: i64, hi: i64, p: Prime) -> Vec<Vec<PLocal>> {
        let cols = indices(self.here, |s| s >= lo);
        let rows = indices(self.next, |s| s < hi);
        let sub = self.d_next.submatrix(&rows, &cols);
        kernel(&sub, p).iter().map(|v| embed(self.here.len(), &cols, v)).collect()
    }

    /// Generators of `F^lo ∩ D(F^from)` in this degree.
    fn boundaries(&self, lo: i64, from: i64, p: Prime) -> Vec<Vec<PLocal>> {
        let cols = indices(self.prev, |s| s >= from);
        if cols.is_empty() {
            return Vec::new();
        }
        let rows = indices(self.here, |s| s < lo);
        let sub = self.d_prev.submatrix(&rows, &cols);
        kernel(&sub, p)
            .iter()
            .map(|v| self.d_prev.mul_vec(&embed(self.prev.len(), &cols, v)))
            .filter(|v| v.iter().any(|x| !x.is_zero()))
            .collect()
    }

    fn page(&self, r: usize, p: Prime) -> BlockPage {
        let r = r as i64;
        let mut filtrations: Vec<usize> = (0..self.here.len()).map(|i| self.here.filtration(i)).collect();
        filtrations.sort_unstable();
        filtrations.dedup();
        let dim = self.here.len();
        let mut parts = BTreeMap::new();
        for s in filtrations {
            let si = s as i64;
            let z = self.cycles(si, si + r, p);
            let mut rel = self.cycles(si + 1, si + r, p);
            rel.extend(self.boundaries(si, si - r + 1, p));
            let q = Quotient::new(dim, &z, &rel, p);
            if q.summand_orders().iter().any(|o| *o != Order::Torsion(0)) {
                parts.insert(s, q);
            }
        }
        BlockPage { weight: self.here.weight, degree: self.here.degree, parts }
    }
}

/// All blocks and differentials of the complex up to a total degree.
struct Skeleton {
    complex: FilteredComplex,
    /// `blocks[&(w, N)]`.
    blocks: BTreeMap<(usize, usize), Block>,
    /// `diff[&(w, N)]`: `D` from degree `N` to `N + 1`.
    diff: BTreeMap<(usize, usize), Mat>,
    top: usize,
}

impl Skeleton {
    fn new(cfg: &SsConfig, top: usize) -> Self {
        let complex = FilteredComplex::new(*cfg);
        let mut blocks = BTreeMap::new();
        // one degree below 0 and one above `top` are needed as neighbours
        for degree in 0..=top + 1 {
            for w in complex.weights(degree).into_iter().chain(complex.weights(degree + 1)) {
                blocks.entry((w, degree)).or_insert_with(|| complex.block(w, degree));
            }
        }
        let mut diff = BTreeMap::new();
        for (&(w, degree), from) in &blocks {
            if let Some(to) = blocks.get(&(w, degree + 1)) {
                diff.insert((w, degree), complex.differential(from, to));
            }
        }
        Skeleton { complex, blocks, diff, top }
    }

    fn jobs(&self) -> Vec<(usize, usize)> {
        let mut jobs = Vec::new();
        for degree in 0..=self.top {
            for w in self.complex.weights(degree) {
                jobs.push((w, degree));
            }
        }
        jobs
    }

    fn block_page(&self, w: usize, degree: usize, r: usize) -> BlockPage {
        let empty = Block::empty(w);
        let here = &self.blocks[&(w, degree)];
        let prev = if degree == 0 { &empty } else { self.blocks.get(&(w, degree - 1)).unwrap_or(&empty) };
        let next = self.blocks.get(&(w, degree + 1)).unwrap_or(&empty);
        let zero_prev = Mat::zeros(here.len(), prev.len());
        let zero_next = Mat::zeros(next.len(), here.len());
        let d_prev = if degree == 0 { &zero_prev } else { self.diff.get(&(w, degree - 1)).unwrap_or(&zero_prev) };
        let d_next = self.diff.get(&(w, degree)).unwrap_or(&zero_next);
        let ctx = BlockContext { prev, here, next, d_prev, d_next };
        ctx.page(r, self.complex.config().p)
    }

    fn assemble(&self, r: usize, window: usize, parts: Vec<BlockPage>) -> Page {
        let cfg = *self.complex.config();
        let mut slots: BTreeMap<(usize, usize), Slot> = BTreeMap::new();
        let by_block: BTreeMap<(usize, usize), &BlockPage> = parts.iter().map(|b| ((b.weight, b.degree), b)).collect();
        for bp in &parts {
            let block = &self.blocks[&(bp.weight, bp.degree)];
            for (&s, quotient) in &bp.parts {
                let q = bp.degree - s;
                let slot = slots.entry((s, q)).or_insert_with(|| Slot { s, q, summands: Vec::new() });
                for (_, rep, order) in quotient.generators() {
                    slot.summands.push(Summand { weight: bp.weight, rep: block.to_element(&cfg, rep), order });
                }
            }
        }
        let mut diffs = Vec::new();
        for bp in &parts {
            if bp.degree > window {
                continue;
            }
            let Some(target) = by_block.get(&(bp.weight, bp.degree + 1)) else { continue };
            let d = &self.diff[&(bp.weight, bp.degree)];
            for (&s, source) in &bp.parts {
                let Some(tq) = target.parts.get(&(s + r)) else { continue };
                let mut columns = Vec::new();
                for (_, rep, _) in source.generators() {
                    columns.push(tq.class_of(&d.mul_vec(rep)));
                }
                let target_orders = tq.summand_orders();
                let matrix =
                    (0..target_orders.len()).map(|i| columns.iter().map(|c| c[i].clone()).collect()).collect();
                diffs.push(DiffBlock {
                    weight: bp.weight,
                    source: (s, bp.degree - s),
                    target: (s + r, bp.degree + 1 - s - r),
                    source_orders: source.summand_orders(),
                    target_orders,
                    matrix,
                });
            }
        }
        diffs.retain(|d| !d.source_orders.is_empty() && !d.target_orders.is_empty());
        Page { r, config: cfg, window, slots, diffs }
    }
}

/// Pages `E_r` for every `r` in `pages`, computed as one parallel batch.
fn compute_pages(cfg: &SsConfig, pages: &[usize], exec: Exec) -> Vec<Page> {
    let window = cfg.validity_window();
    let skeleton = Skeleton::new(cfg, window + 1);
    let block_jobs = skeleton.jobs();
    let jobs: Vec<(usize, usize, usize)> =
        pages.iter().flat_map(|&r| block_jobs.iter().map(move |&(w, n)| (r, w, n))).collect();
    let results = exec.map(jobs, |(r, w, n)| (r, skeleton.block_page(w, n, r)));
    let mut grouped: BTreeMap<usize, Vec<BlockPage>> = pages.iter().map(|&r| (r, Vec::new())).collect();
    for (r, bp) in results {
        grouped.get_mut(&r).expect("requested page").push(bp);
    }
    grouped.into_iter().map(|(r, parts)| skeleton.assemble(r, window, parts)).collect()
}

/// `E_2`: one free summand `x^t y_S` per basis monomial.
pub fn build_e2(cfg: &SsConfig) -> Page {
    compute_pages(cfg, &[2], Exec::Sequential).pop().expect("one page")
}

/// Pages `E_2, ..., E_{2n+1}`; the last one is `E_∞`.
pub fn run_pages(cfg: &SsConfig, exec: Exec) -> Vec<Page> {
    let pages: Vec<usize> = (2..=2 * cfg.n + 1).collect();
    compute_pages(cfg, &pages, exec)
}

/// `E_{2n+1} = E_∞`.
pub fn run_to_einfty(cfg: &SsConfig, exec: Exec) -> Page {
    compute_pages(cfg, &[2 * cfg.n + 1], exec).pop().expect("one page")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Prime;

    fn cfg(n: usize, k: usize, p: Prime) -> SsConfig {
        SsConfig::new(n, k, p).unwrap()
    }

    fn x_column(page: &Page, upto: usize) -> Vec<String> {
        (0..=upto).map(|t| page.shape(2 * t, 0).unwrap().to_string()).collect()
    }

    #[test]
    fn e2_is_free_on_the_basis() {
        let c = cfg(4, 2, Prime::TWO);
        let e2 = build_e2(&c);
        for slot in e2.slots() {
            assert!(slot.summands.iter().all(|x| x.order == Order::Free));
        }
        // |y3| = 5, |y4| = 7, |y3 y4| = 12, so degree 12 holds x^6 and y3 y4
        assert_eq!(e2.degree_shape(5).unwrap().free_rank, 1);
        assert_eq!(e2.degree_shape(12).unwrap().free_rank, 2);
        assert_eq!(e2.degree_shape(14).unwrap().free_rank, 2);
        assert_eq!(e2.shape(0, 5).unwrap().to_string(), "Z");
    }

    #[test]
    fn projective_line() {
        let e = run_to_einfty(&cfg(2, 1, Prime::TWO), Exec::Sequential);
        assert_eq!(x_column(&e, 4), ["Z", "Z", "0", "0", "0"]);
        assert!(e.shape(0, 3).unwrap().is_zero());
    }

    #[test]
    fn staircase_examples() {
        let e = run_to_einfty(&cfg(4, 2, Prime::TWO), Exec::Sequential);
        assert_eq!(x_column(&e, 5), ["Z", "Z", "Z", "Z/p^2", "0", "0"]);
        let e = run_to_einfty(&cfg(6, 3, Prime::TWO), Exec::Sequential);
        assert_eq!(x_column(&e, 6), ["Z", "Z", "Z", "Z", "0", "0", "0"]);
    }

    #[test]
    fn outside_window_is_an_error() {
        let c = cfg(3, 2, Prime::TWO);
        let e = run_to_einfty(&c, Exec::Sequential);
        assert!(matches!(e.slot(0, c.validity_window() + 1), Err(Error::TruncationTooSmall { .. })));
    }

    #[test]
    fn pages_are_homology_of_the_previous_page() {
        for (n, k, p) in [(4, 2, Prime::TWO), (5, 3, Prime::TWO), (6, 3, Prime::THREE), (4, 4, Prime::TWO)] {
            let c = cfg(n, k, p);
            let pages = run_pages(&c, Exec::Parallel);
            for pair in pages.windows(2) {
                let (cur, next) = (&pair[0], &pair[1]);
                assert!(cur.d_squared_vanishes(), "d^2 on E_{} for {n},{k}", cur.r);
                for degree in 0..=c.validity_window() {
                    for s in (0..=degree).step_by(2) {
                        let q = degree - s;
                        assert_eq!(
                            cur.homology_shape(s, q).unwrap(),
                            next.shape(s, q).unwrap(),
                            "H(E_{}) vs E_{} at ({s},{q}) for {n},{k}",
                            cur.r,
                            next.r
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn transgression_shows_up_on_the_right_page() {
        let c = cfg(4, 2, Prime::TWO);
        let pages = run_pages(&c, Exec::Sequential);
        for page in &pages {
            let nonzero: Vec<_> = page.differentials().collect();
            if page.r == 6 || page.r == 8 {
                assert!(!nonzero.is_empty(), "d_{} should be nonzero", page.r);
                for d in nonzero {
                    assert_eq!(d.target.0, d.source.0 + page.r);
                    assert_eq!(d.target.1 + page.r, d.source.1 + 1);
                }
            } else {
                assert!(nonzero.is_empty(), "d_{} should vanish", page.r);
            }
        }
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let c = cfg(5, 4, Prime::TWO);
        let a = run_to_einfty(&c, Exec::Sequential);
        let b = run_to_einfty(&c, Exec::Parallel);
        let sa: Vec<_> = a.slots().cloned().collect();
        let sb: Vec<_> = b.slots().cloned().collect();
        assert_eq!(sa, sb);
    }
}
