//! The filtered DGA behind the spectral sequence.
//!
//! `D(x^t y_S) = sum_i (-1)^i c_{j_i} x^{t + j_i} y_{S - j_i}` where
//! `S = {j_0 < j_1 < ...}`. `D` preserves the weight `t + sum(S)`, so in each
//! total degree `N` the complex splits into blocks of fixed weight `w`
//! (with `|S| = 2w - N`), and every page splits the same way.

use std::collections::HashMap;

use crate::algebra::{ExtElement, ExtKey};
use crate::arith::PLocal;
use crate::error::{Error, Result};

use super::lattice::Mat;
use super::SsConfig;

/// `d_{2j}(y_j) = c_j x^j`.
pub fn transgress(cfg: &SsConfig, j: usize) -> Result<ExtElement> {
    let ctx = cfg.stiefel();
    if !ctx.contains(j) {
        return Err(Error::IndexOutOfRange { index: j, lo: ctx.lo(), hi: ctx.n });
    }
    let c = PLocal::from_int(cfg.transgression_coefficient(j));
    Ok(ExtElement::x_pow(ctx, j).scale(&c))
}

/// Basis of one weight block in one total degree.
#[derive(Clone, Debug)]
pub struct Block {
    pub weight: usize,
    pub degree: usize,
    pub keys: Vec<ExtKey>,
    index: HashMap<ExtKey, usize>,
}

impl Block {
    fn new(weight: usize, degree: usize, keys: Vec<ExtKey>) -> Self {
        let index = keys.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        Block { weight, degree, keys, index }
    }

    pub(crate) fn empty(weight: usize) -> Self {
        Block::new(weight, 0, Vec::new())
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    /// Filtration degree `s = 2t` of each basis vector.
    pub fn filtration(&self, i: usize) -> usize {
        2 * self.keys[i].t
    }

    pub fn position(&self, key: &ExtKey) -> Option<usize> {
        self.index.get(key).copied()
    }

    pub fn to_element(&self, cfg: &SsConfig, v: &[PLocal]) -> ExtElement {
        let mut e = ExtElement::zero(cfg.stiefel());
        for (k, c) in self.keys.iter().zip(v) {
            e.add_term(k.clone(), c);
        }
        e
    }
}

/// `Z_(p)[x]/(x^{xmax+1}) (x) Lambda(y_{n-k+1..n})` with its differential.
#[derive(Clone, Debug)]
pub struct FilteredComplex {
    cfg: SsConfig,
    coeffs: Vec<PLocal>,
}

impl FilteredComplex {
    pub fn new(cfg: SsConfig) -> Self {
        let coeffs = (0..=cfg.n).map(|j| PLocal::from_int(cfg.transgression_coefficient(j))).collect();
        FilteredComplex { cfg, coeffs }
    }

    pub fn config(&self) -> &SsConfig {
        &self.cfg
    }

    fn c(&self, j: usize) -> &PLocal {
        &self.coeffs[j]
    }

    /// Weights occurring in total degree `degree`.
    pub fn weights(&self, degree: usize) -> Vec<usize> {
        let m_max = self.cfg.k;
        (0..=m_max).filter(|m| (degree + m) % 2 == 0).map(|m| (degree + m) / 2).collect()
    }

    /// Basis of the block of weight `w` in total degree `degree`: all
    /// `x^t y_S` with `|S| = 2w - degree`, `t = w - sum(S)`, `t <= xmax`.
    pub fn block(&self, weight: usize, degree: usize) -> Block {
        let mut keys = Vec::new();
        if 2 * weight >= degree {
            let m = 2 * weight - degree;
            let lo = self.cfg.stiefel().lo();
            let mut current = Vec::with_capacity(m);
            subsets_with_sum_at_most(lo, self.cfg.n, m, weight, &mut current, &mut |s| {
                let t = weight - s.iter().sum::<usize>();
                if t <= self.cfg.xmax {
                    keys.push(ExtKey::new(s.to_vec(), t));
                }
            });
        }
        keys.sort();
        Block::new(weight, degree, keys)
    }

    /// Matrix of `D` from `from` to `to` (same weight, degree + 1).
    pub fn differential(&self, from: &Block, to: &Block) -> Mat {
        debug_assert_eq!(from.weight, to.weight);
        debug_assert_eq!(from.degree + 1, to.degree);
        let mut d = Mat::zeros(to.len(), from.len());
        for (col, key) in from.keys.iter().enumerate() {
            for (i, &j) in key.subset.iter().enumerate() {
                let mut rest = key.subset.clone();
                rest.remove(i);
                let target = ExtKey::new(rest, key.t + j);
                if let Some(row) = to.position(&target) {
                    let c = if i % 2 == 0 { self.c(j).clone() } else { -self.c(j) };
                    let v = d.get(row, col) + &c;
                    d.set(row, col, v);
                }
            }
        }
        d
    }

    /// `D` applied to an arbitrary element, without truncation.
    pub fn apply(&self, e: &ExtElement) -> ExtElement {
        let mut out = ExtElement::zero(self.cfg.stiefel());
        for (key, c) in e.terms() {
            for (i, &j) in key.subset.iter().enumerate() {
                let mut rest = key.subset.clone();
                rest.remove(i);
                let sign = if i % 2 == 0 { self.c(j).clone() } else { -self.c(j) };
                out.add_term(ExtKey::new(rest, key.t + j), &(c * &sign));
            }
        }
        out
    }
}

fn subsets_with_sum_at_most(
    start: usize,
    end: usize,
    remaining: usize,
    budget: usize,
    current: &mut Vec<usize>,
    emit: &mut impl FnMut(&[usize]),
) {
    if remaining == 0 {
        emit(current);
        return;
    }
    for j in start..=end {
        // the smallest completion uses j, j+1, ..., j+remaining-1
        let min_sum = remaining * j + remaining * (remaining - 1) / 2;
        if min_sum > budget || j + remaining - 1 > end {
            break;
        }
        current.push(j);
        subsets_with_sum_at_most(j + 1, end, remaining - 1, budget - j, current, emit);
        current.pop();
    }
}
