//! Finitely generated Z_(p)-lattices inside Q^m: Smith normal form by
//! valuation pivoting, kernels, spans and quotients.

use crate::arith::{PLocal, Prime, Valuation};

/// Dense matrix over Q, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<PLocal>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![PLocal::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, PLocal::one());
        }
        m
    }

    /// Matrix whose columns are `cols`, each of length `rows`.
    pub fn from_columns(rows: usize, cols: &[Vec<PLocal>]) -> Self {
        let mut m = Mat::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, v) in c.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &PLocal {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: PLocal) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<PLocal> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn mul_vec(&self, v: &[PLocal]) -> Vec<PLocal> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = PLocal::zero();
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !x.is_zero() {
                        acc += &(a * x);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows);
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + &(a * b);
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] -= f * row[src]
    fn row_axpy(&mut self, dst: usize, src: usize, f: &PLocal) {
        for j in 0..self.cols {
            let s = self.get(src, j);
            if !s.is_zero() {
                let v = self.get(dst, j) - &(f * s);
                self.set(dst, j, v);
            }
        }
    }

    /// col[dst] -= f * col[src]
    fn col_axpy(&mut self, dst: usize, src: usize, f: &PLocal) {
        for i in 0..self.rows {
            let s = self.get(i, src);
            if !s.is_zero() {
                let v = self.get(i, dst) - &(f * s);
                self.set(i, dst, v);
            }
        }
    }

    fn scale_row(&mut self, i: usize, f: &PLocal) {
        for j in 0..self.cols {
            let v = self.get(i, j) * f;
            self.set(i, j, v);
        }
    }

    fn scale_col(&mut self, j: usize, f: &PLocal) {
        for i in 0..self.rows {
            let v = self.get(i, j) * f;
            self.set(i, j, v);
        }
    }

    /// Rank over Q.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for c in 0..m.cols {
            let Some(r) = (rank..m.rows).find(|&r| !m.get(r, c).is_zero()) else { continue };
            m.swap_rows(rank, r);
            let pivot = m.get(rank, c).clone();
            for r in rank + 1..m.rows {
                if !m.get(r, c).is_zero() {
                    let f = m.get(r, c) / &pivot;
                    m.row_axpy(r, rank, &f);
                }
            }
            rank += 1;
        }
        rank
    }

    /// Inverse over Q of a square matrix, if it exists.
    pub fn inverse(&self) -> Option<Mat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut inv = Mat::identity(n);
        for c in 0..n {
            let r = (c..n).find(|&r| !m.get(r, c).is_zero())?;
            m.swap_rows(c, r);
            inv.swap_rows(c, r);
            let f = m.get(c, c).recip().ok()?;
            m.scale_row(c, &f);
            inv.scale_row(c, &f);
            for r in 0..n {
                if r != c && !m.get(r, c).is_zero() {
                    let f = m.get(r, c).clone();
                    m.row_axpy(r, c, &f);
                    inv.row_axpy(r, c, &f);
                }
            }
        }
        Some(inv)
    }

    /// The rows and columns picked by the given indices.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Mat {
        let mut m = Mat::zeros(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                m.set(i, j, self.get(r, c).clone());
            }
        }
        m
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }
}

/// `u * a * v = diag(p^e_0, ..., p^e_{r-1}, 0, ...)` with `u`, `v`
/// invertible over Z_(p); `u_inv` is kept alongside `u`.
#[derive(Clone, Debug)]
pub struct Smith {
    pub u: Mat,
    pub u_inv: Mat,
    pub v: Mat,
    pub exponents: Vec<u32>,
}

impl Smith {
    pub fn rank(&self) -> usize {
        self.exponents.len()
    }
}

/// Smith normal form over Z_(p). Entries of `a` must be p-integral.
///
/// Each step moves an entry of least valuation in the remaining block to
/// the pivot; every elimination factor is then p-integral, so all
/// transformations stay invertible over Z_(p).
pub fn smith(a: &Mat, p: Prime) -> Smith {
    let (rows, cols) = (a.rows, a.cols);
    let mut w = a.clone();
    let mut u = Mat::identity(rows);
    let mut u_inv = Mat::identity(rows);
    let mut v = Mat::identity(cols);
    let mut exponents = Vec::new();

    for i in 0..rows.min(cols) {
        let mut best: Option<(Valuation, usize, usize)> = None;
        for r in i..rows {
            for c in i..cols {
                let val = w.get(r, c).vp(p);
                if val.is_infinite() {
                    continue;
                }
                if best.is_none_or(|(b, _, _)| val < b) {
                    best = Some((val, r, c));
                }
            }
        }
        let Some((_, r, c)) = best else { break };
        w.swap_rows(i, r);
        u.swap_rows(i, r);
        u_inv.swap_cols(i, r);
        w.swap_cols(i, c);
        v.swap_cols(i, c);

        let (e, unit) = w.get(i, i).split_p_power(p).expect("pivot is nonzero");
        debug_assert!(e >= 0, "smith input must be p-integral");
        let unit_inv = unit.recip().expect("unit");
        w.scale_row(i, &unit_inv);
        u.scale_row(i, &unit_inv);
        u_inv.scale_col(i, &unit);

        let pivot = w.get(i, i).clone();
        for r in i + 1..rows {
            if w.get(r, i).is_zero() {
                continue;
            }
            let f = w.get(r, i) / &pivot;
            w.row_axpy(r, i, &f);
            u.row_axpy(r, i, &f);
            // inverse of (row_r -= f row_i) is col_i += f col_r on u_inv
            u_inv.col_axpy(i, r, &-&f);
        }
        for c in i + 1..cols {
            if w.get(i, c).is_zero() {
                continue;
            }
            let f = w.get(i, c) / &pivot;
            w.col_axpy(c, i, &f);
            v.col_axpy(c, i, &f);
        }
        exponents.push(e as u32);
    }
    Smith { u, u_inv, v, exponents }
}

/// Z_(p)-basis of `{x in Z_(p)^n : a x = 0}`.
pub fn kernel(a: &Mat, p: Prime) -> Vec<Vec<PLocal>> {
    if a.rows == 0 {
        return (0..a.cols).map(|j| unit_vector(a.cols, j)).collect();
    }
    let s = smith(a, p);
    (s.rank()..a.cols).map(|j| s.v.column(j)).collect()
}

/// Z_(p)-basis of the lattice spanned by `gens` in Q^dim (p-integral gens).
pub fn span_basis(dim: usize, gens: &[Vec<PLocal>], p: Prime) -> Vec<Vec<PLocal>> {
    if gens.is_empty() || dim == 0 {
        return Vec::new();
    }
    let g = Mat::from_columns(dim, gens);
    let s = smith(&g, p);
    s.exponents
        .iter()
        .enumerate()
        .map(|(i, &e)| {
            let scale = PLocal::from_int(p.pow(e));
            s.u_inv.column(i).iter().map(|x| x * &scale).collect()
        })
        .collect()
}

pub fn unit_vector(dim: usize, j: usize) -> Vec<PLocal> {
    let mut v = vec![PLocal::zero(); dim];
    v[j] = PLocal::one();
    v
}

/// Order of a cyclic summand: `p^e`, or infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub enum Order {
    Torsion(u32),
    Free,
}

/// `L1 / L2` for lattices `L2 <= L1`, decomposed into cyclic summands.
#[derive(Clone, Debug)]
pub struct Quotient {
    dim: usize,
    /// Adapted basis of `L1` (columns), in ambient coordinates.
    basis: Vec<Vec<PLocal>>,
    /// Order of the class of each adapted basis vector (`Torsion(0)` means
    /// the vector lies in `L2`).
    orders: Vec<Order>,
    /// Left inverse of the original basis matrix of `L1`.
    left_inv: Mat,
    /// Change of coordinates into the adapted basis.
    u: Mat,
}

impl Quotient {
    /// `l1` must be a basis; `l2` any generating set of a sublattice.
    pub fn new(dim: usize, l1: &[Vec<PLocal>], l2: &[Vec<PLocal>], p: Prime) -> Self {
        let r1 = l1.len();
        if r1 == 0 {
            return Quotient {
                dim,
                basis: Vec::new(),
                orders: Vec::new(),
                left_inv: Mat::zeros(0, dim),
                u: Mat::zeros(0, 0),
            };
        }
        let b = Mat::from_columns(dim, l1);
        let bt = b.transpose();
        let left_inv = bt.mul(&b).inverse().expect("basis has full column rank").mul(&bt);
        let coords: Vec<Vec<PLocal>> = l2.iter().map(|g| left_inv.mul_vec(g)).collect();
        let (u, u_inv, exps) = if coords.is_empty() {
            (Mat::identity(r1), Mat::identity(r1), Vec::new())
        } else {
            let c = Mat::from_columns(r1, &coords);
            let s = smith(&c, p);
            (s.u, s.u_inv, s.exponents)
        };
        let adapted = b.mul(&u_inv);
        let basis = (0..r1).map(|j| adapted.column(j)).collect();
        let orders = (0..r1).map(|i| exps.get(i).map_or(Order::Free, |&e| Order::Torsion(e))).collect();
        Quotient { dim, basis, orders, left_inv, u }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Nonzero cyclic summands: (representative, order).
    pub fn generators(&self) -> impl Iterator<Item = (usize, &Vec<PLocal>, Order)> + '_ {
        self.basis
            .iter()
            .zip(&self.orders)
            .enumerate()
            .filter(|(_, (_, o))| **o != Order::Torsion(0))
            .map(|(i, (b, o))| (i, b, *o))
    }

    pub fn free_rank(&self) -> usize {
        self.orders.iter().filter(|o| **o == Order::Free).count()
    }

    /// Exponents of the nontrivial torsion summands, ascending.
    pub fn torsion(&self) -> Vec<u32> {
        let mut t: Vec<u32> =
            self.orders.iter().filter_map(|o| if let Order::Torsion(e) = o { Some(*e) } else { None }).collect();
        t.retain(|&e| e > 0);
        t.sort_unstable();
        t
    }

    /// Coordinates of `z in L1` on the nonzero summands, in the order of
    /// [`Quotient::generators`].
    pub fn class_of(&self, z: &[PLocal]) -> Vec<PLocal> {
        if self.basis.is_empty() {
            return Vec::new();
        }
        let c = self.left_inv.mul_vec(z);
        let adapted = self.u.mul_vec(&c);
        adapted
            .into_iter()
            .zip(&self.orders)
            .filter(|(_, o)| **o != Order::Torsion(0))
            .map(|(x, _)| x)
            .collect()
    }

    /// Orders of the nonzero summands, matching [`Quotient::class_of`].
    pub fn summand_orders(&self) -> Vec<Order> {
        self.orders.iter().copied().filter(|o| *o != Order::Torsion(0)).collect()
    }
}

/// True when `x` represents zero in `Z_(p)/p^e` (or is zero, for free).
pub fn vanishes_mod(x: &PLocal, order: Order, p: Prime) -> bool {
    match order {
        Order::Free => x.is_zero(),
        Order::Torsion(e) => x.vp(p) >= Valuation::Finite(e as i64),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: usize, cols: usize, vals: &[i64]) -> Mat {
        let mut a = Mat::zeros(rows, cols);
        for (k, v) in vals.iter().enumerate() {
            a.set(k / cols, k % cols, PLocal::from(*v));
        }
        a
    }

    fn is_diag(d: &Mat, exps: &[u32], p: Prime) -> bool {
        (0..d.rows()).all(|i| {
            (0..d.cols()).all(|j| {
                let want = if i == j && i < exps.len() { PLocal::from_int(p.pow(exps[i])) } else { PLocal::zero() };
                *d.get(i, j) == want
            })
        })
    }

    #[test]
    fn smith_decomposition() {
        let a = m(3, 3, &[2, 4, 4, -6, 6, 12, 10, -4, -16]);
        let p = Prime::TWO;
        let s = smith(&a, p);
        let d = s.u.mul(&a).mul(&s.v);
        assert!(is_diag(&d, &s.exponents, p), "{d:?}");
        assert_eq!(s.u.mul(&s.u_inv), Mat::identity(3));
        // over Z the invariants are 2, 6, 12: 2-adically 2, 2, 4
        assert_eq!(s.exponents, vec![1, 1, 2]);
    }

    #[test]
    fn kernel_is_saturated() {
        let p = Prime::THREE;
        let a = m(1, 2, &[3, 6]);
        let k = kernel(&a, p);
        assert_eq!(k.len(), 1);
        let v = &k[0];
        assert!(a.mul_vec(v).iter().all(PLocal::is_zero));
        assert!(v.iter().any(|x| x.is_p_unit(p)));
    }

    #[test]
    fn quotient_of_staircase() {
        // Z^2 / <(4, 0), (0, 1)> = Z/4 at p = 2
        let p = Prime::TWO;
        let l1 = vec![unit_vector(2, 0), unit_vector(2, 1)];
        let l2 = vec![vec![PLocal::from(4), PLocal::zero()], vec![PLocal::zero(), PLocal::from(3)]];
        let q = Quotient::new(2, &l1, &l2, p);
        assert_eq!(q.free_rank(), 0);
        assert_eq!(q.torsion(), vec![2]);
        let cls = q.class_of(&[PLocal::from(4), PLocal::from(5)]);
        assert!(vanishes_mod(&cls[0], Order::Torsion(2), p));
        let cls = q.class_of(&[PLocal::from(1), PLocal::zero()]);
        assert!(!vanishes_mod(&cls[0], Order::Torsion(2), p));
    }

    #[test]
    fn span_drops_dependent_generators() {
        let p = Prime::TWO;
        let gens = vec![
            vec![PLocal::from(2), PLocal::from(2)],
            vec![PLocal::from(4), PLocal::from(4)],
            vec![PLocal::from(6), PLocal::from(6)],
        ];
        let b = span_basis(2, &gens, p);
        assert_eq!(b.len(), 1);
        assert_eq!(b[0][0].vp(p), Valuation::Finite(1));
    }
}
