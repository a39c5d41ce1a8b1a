//! Exact linear algebra over the discrete valuation ring Z_(p).
//!
//! Z_(p) is a DVR, so every matrix diagonalizes to p-powers under unimodular
//! row/column operations once pivots are chosen by minimal p-valuation. All
//! arithmetic is exact big-rational; floating point never appears. Lattices
//! (finitely generated Z_(p)-submodules of Q^n) are represented by matrices
//! whose columns are generators.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{rational_valuation, Valuation};

/// Dense matrix over Q, row-major. Entries are expected to lie in Z_(p) for
/// the lattice routines; this is asserted where it matters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<BigRational>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![BigRational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigRational::one());
        }
        m
    }

    pub fn from_columns(rows: usize, columns: &[Vec<BigRational>]) -> Self {
        let mut m = Mat::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<BigRational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<BigRational>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn hcat(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows);
        let mut m = Mat::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                m.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        m
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows);
        let mut m = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = m.get(i, j) + a * b;
                        m.set(i, j, v);
                    }
                }
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .filter(|&j| !self.get(i, j).is_zero() && !v[j].is_zero())
                    .map(|j| self.get(i, j) * &v[j])
                    .fold(BigRational::zero(), |acc, x| acc + x)
            })
            .collect()
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

    fn scale_row(&mut self, i: usize, c: &BigRational) {
        for j in 0..self.cols {
            let v = self.get(i, j) * c;
            self.set(i, j, v);
        }
    }

    fn scale_col(&mut self, j: usize, c: &BigRational) {
        for i in 0..self.rows {
            let v = self.get(i, j) * c;
            self.set(i, j, v);
        }
    }

    /// row_i += c * row_t
    fn add_row(&mut self, i: usize, t: usize, c: &BigRational) {
        for j in 0..self.cols {
            if !self.get(t, j).is_zero() {
                let v = self.get(i, j) + c * self.get(t, j);
                self.set(i, j, v);
            }
        }
    }

    /// col_j += c * col_t
    fn add_col(&mut self, j: usize, t: usize, c: &BigRational) {
        for i in 0..self.rows {
            if !self.get(i, t).is_zero() {
                let v = self.get(i, j) + c * self.get(i, t);
                self.set(i, j, v);
            }
        }
    }
}

fn pow_p(p: u64, e: u32) -> BigRational {
    BigRational::from_integer(BigInt::from(p).pow(e))
}

/// Smith normal form over Z_(p): `left * a * right = d` with `left`, `right`
/// unimodular over Z_(p) and `d` diagonal with entries p^{e_0} | p^{e_1} | ...
#[derive(Debug, Clone)]
pub struct Snf {
    pub left: Mat,
    pub left_inv: Mat,
    pub right: Mat,
    pub right_inv: Mat,
    pub rank: usize,
    /// Diagonal exponents, nondecreasing, length `rank`.
    pub exps: Vec<u32>,
}

pub fn snf(a: &Mat, p: u64) -> Snf {
    for v in &a.data {
        debug_assert!(
            rational_valuation(v, p) >= Valuation::Finite(0),
            "SNF input not in Z_({p}): {v}"
        );
    }
    let mut m = a.clone();
    let mut left = Mat::identity(a.rows);
    let mut left_inv = Mat::identity(a.rows);
    let mut right = Mat::identity(a.cols);
    let mut right_inv = Mat::identity(a.cols);
    let mut exps = Vec::new();

    let bound = a.rows.min(a.cols);
    let mut t = 0;
    while t < bound {
        // minimal-valuation pivot in the trailing submatrix
        let mut pivot: Option<(usize, usize, i64)> = None;
        for i in t..a.rows {
            for j in t..a.cols {
                if let Valuation::Finite(v) = rational_valuation(m.get(i, j), p) {
                    if pivot.map_or(true, |(_, _, pv)| v < pv) {
                        pivot = Some((i, j, v));
                    }
                }
            }
        }
        let Some((pi, pj, pv)) = pivot else { break };
        m.swap_rows(t, pi);
        left.swap_rows(t, pi);
        left_inv.swap_cols(t, pi);
        m.swap_cols(t, pj);
        right.swap_cols(t, pj);
        right_inv.swap_rows(t, pj);

        // normalize the pivot to an exact p-power
        let e = pv as u32;
        let unit = m.get(t, t) / pow_p(p, e);
        let unit_inv = unit.recip();
        m.scale_row(t, &unit_inv);
        left.scale_row(t, &unit_inv);
        left_inv.scale_col(t, &unit);

        let piv = pow_p(p, e);
        for i in 0..a.rows {
            if i != t && !m.get(i, t).is_zero() {
                let c = -(m.get(i, t) / &piv);
                m.add_row(i, t, &c);
                left.add_row(i, t, &c);
                left_inv.add_col(t, i, &(-&c));
            }
        }
        for j in 0..a.cols {
            if j != t && !m.get(t, j).is_zero() {
                let c = -(m.get(t, j) / &piv);
                m.add_col(j, t, &c);
                right.add_col(j, t, &c);
                right_inv.add_row(t, j, &(-&c));
            }
        }
        exps.push(e);
        t += 1;
    }

    Snf { left, left_inv, right, right_inv, rank: exps.len(), exps }
}

impl Snf {
    pub fn diagonal(&self, rows: usize, cols: usize, p: u64) -> Mat {
        let mut d = Mat::zeros(rows, cols);
        for (i, &e) in self.exps.iter().enumerate() {
            d.set(i, i, pow_p(p, e));
        }
        d
    }
}

/// Saturated basis of the kernel lattice ker(a) ∩ Z_(p)^cols: the right
/// transform columns beyond the rank.
pub fn kernel_lattice(a: &Mat, p: u64) -> Mat {
    if a.rows == 0 {
        return Mat::identity(a.cols);
    }
    let s = snf(a, p);
    let mut k = Mat::zeros(a.cols, a.cols - s.rank);
    for j in s.rank..a.cols {
        for i in 0..a.cols {
            k.set(i, j - s.rank, s.right.get(i, j).clone());
        }
    }
    k
}

/// Basis of the lattice spanned by the columns of `a` (columns may be
/// dependent): p^{e_i} times the i-th column of left_inv, i < rank.
pub fn column_lattice_basis(a: &Mat, p: u64) -> Mat {
    let s = snf(a, p);
    let mut b = Mat::zeros(a.rows, s.rank);
    for i in 0..s.rank {
        let scale = pow_p(p, s.exps[i]);
        for r in 0..a.rows {
            b.set(r, i, s.left_inv.get(r, i) * &scale);
        }
    }
    b
}

/// Solve basis * x = v over Z_(p) for each column of `v`; `None` when some
/// column is not in the lattice spanned by `basis`.
pub fn solve_in_lattice(basis: &Mat, v: &Mat, p: u64) -> Option<Mat> {
    assert_eq!(basis.rows, v.rows);
    let s = snf(basis, p);
    // x = right * D^+ * left * v, valid iff left*v vanishes beyond the rank
    // and the divisions stay p-integral
    let lv = s.left.mul(v);
    for i in s.rank..basis.rows.min(lv.rows) {
        for j in 0..lv.cols {
            if !lv.get(i, j).is_zero() {
                return None;
            }
        }
    }
    let mut dplus_lv = Mat::zeros(basis.cols, v.cols);
    for i in 0..s.rank {
        let scale = pow_p(p, s.exps[i]);
        for j in 0..v.cols {
            dplus_lv.set(i, j, lv.get(i, j) / &scale);
        }
    }
    let x = s.right.mul(&dplus_lv);
    for val in &x.data {
        if rational_valuation(val, p) < Valuation::Finite(0) {
            return None;
        }
    }
    Some(x)
}

/// Presentation of the quotient module N / D over Z_(p), where the columns of
/// `n_basis` form a lattice basis and the columns of `d_gens` generate a
/// sublattice of it.
#[derive(Debug, Clone)]
pub struct QuotientModule {
    /// Generators in ambient coordinates, one column per summand.
    pub gens: Mat,
    /// Change of basis: module coordinates of an N-coordinate vector are
    /// `coord_transform * (N-coords)`.
    pub coord_transform: Mat,
    /// Per-generator annihilator exponent: `Some(e)` for Z/p^e (e >= 1),
    /// `None` for a free summand. Unit-annihilated generators are dropped.
    pub annihilators: Vec<Option<u32>>,
    /// Indices (into gens columns) actually present after dropping trivial
    /// summands.
    pub live: Vec<usize>,
}

impl QuotientModule {
    pub fn free_rank(&self) -> u32 {
        self.live
            .iter()
            .filter(|&&i| self.annihilators[i].is_none())
            .count() as u32
    }

    pub fn torsion_exponents(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self
            .live
            .iter()
            .filter_map(|&i| self.annihilators[i])
            .collect();
        v.sort_unstable();
        v
    }

    pub fn is_trivial(&self) -> bool {
        self.live.is_empty()
    }
}

/// Smith-reduce the inclusion D ⊆ N to a direct-sum presentation of N/D.
pub fn quotient_module(n_basis: &Mat, d_gens: &Mat, p: u64) -> QuotientModule {
    let dim = n_basis.cols;
    if dim == 0 {
        return QuotientModule {
            gens: Mat::zeros(n_basis.rows, 0),
            coord_transform: Mat::zeros(0, 0),
            annihilators: vec![],
            live: vec![],
        };
    }
    let x = if d_gens.cols == 0 {
        Mat::zeros(dim, 0)
    } else {
        solve_in_lattice(n_basis, d_gens, p)
            .expect("denominator lattice not inside the numerator lattice")
    };
    let s = snf(&x, p);
    // New basis N' = N * left_inv presents the quotient as a direct sum:
    // generator i is annihilated by p^{exps[i]} (i < rank), free beyond.
    let gens = n_basis.mul(&s.left_inv);
    let mut annihilators = Vec::with_capacity(dim);
    let mut live = Vec::new();
    for i in 0..dim {
        let ann = if i < s.rank { Some(s.exps[i]) } else { None };
        match ann {
            Some(0) => annihilators.push(Some(0)),
            Some(e) => {
                annihilators.push(Some(e));
                live.push(i);
            }
            None => {
                annihilators.push(None);
                live.push(i);
            }
        }
    }
    QuotientModule { gens, coord_transform: s.left, annihilators, live }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mat_from_ints(rows: usize, cols: usize, vals: &[i64]) -> Mat {
        let mut m = Mat::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, BigRational::from_integer(BigInt::from(vals[i * cols + j])));
            }
        }
        m
    }

    #[test]
    fn snf_diagonalizes_known_matrix() {
        // [[5, 1], [0, 5]] over Z_(5): invertible entry 1 makes rank 2 with
        // exponents (0, 2) since det = 25
        let a = mat_from_ints(2, 2, &[5, 1, 0, 5]);
        let s = snf(&a, 5);
        assert_eq!(s.rank, 2);
        assert_eq!(s.exps, vec![0, 2]);
        let d = s.left.mul(&a).mul(&s.right);
        assert_eq!(d, s.diagonal(2, 2, 5));
    }

    #[test]
    fn kernel_of_multiplication_map() {
        // x -> (3x, 6x) over Z_(3) has trivial kernel; [1, 1 | 1, 1] has
        // kernel spanned by (1, -1)
        let a = mat_from_ints(2, 1, &[3, 6]);
        assert_eq!(kernel_lattice(&a, 3).cols, 0);
        let b = mat_from_ints(2, 2, &[1, 1, 1, 1]);
        let k = kernel_lattice(&b, 3);
        assert_eq!(k.cols, 1);
        assert!(b.mul(&k).is_zero());
    }

    #[test]
    fn quotient_module_shapes() {
        // Z^2 / <(5,0), (0,1)> = Z/5 over Z_(5)
        let n = Mat::identity(2);
        let d = mat_from_ints(2, 2, &[5, 0, 0, 1]);
        let q = quotient_module(&n, &d, 5);
        assert_eq!(q.free_rank(), 0);
        assert_eq!(q.torsion_exponents(), vec![1]);

        // Z^2 / <(25, 5)> = Z + Z/5 (the generator is 5*(5,1), primitive (5,1))
        let d2 = mat_from_ints(2, 1, &[25, 5]);
        let q2 = quotient_module(&n, &d2, 5);
        assert_eq!(q2.free_rank(), 1);
        assert_eq!(q2.torsion_exponents(), vec![1]);
    }

    fn arb_matrix() -> impl Strategy<Value = (Mat, u64)> {
        (1usize..5, 1usize..5, proptest::sample::select(vec![3u64, 5, 7])).prop_flat_map(
            |(r, c, p)| {
                proptest::collection::vec(-27i64..28, r * c)
                    .prop_map(move |vals| (mat_from_ints(r, c, &vals), p))
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn snf_transforms_are_unimodular((a, p) in arb_matrix()) {
            let s = snf(&a, p);
            prop_assert_eq!(s.left.mul(&s.left_inv), Mat::identity(a.rows));
            prop_assert_eq!(s.right.mul(&s.right_inv), Mat::identity(a.cols));
            let d = s.left.mul(&a).mul(&s.right);
            prop_assert_eq!(&d, &s.diagonal(a.rows, a.cols, p));
            // divisibility chain
            for w in s.exps.windows(2) {
                prop_assert!(w[0] <= w[1]);
            }
            // transforms stay p-integral (unimodularity over Z_(p))
            for m in [&s.left, &s.left_inv, &s.right, &s.right_inv] {
                for i in 0..m.rows {
                    for j in 0..m.cols {
                        prop_assert!(rational_valuation(m.get(i, j), p) >= Valuation::Finite(0));
                    }
                }
            }
        }

        #[test]
        fn kernel_annihilates((a, p) in arb_matrix()) {
            let k = kernel_lattice(&a, p);
            prop_assert!(a.mul(&k).is_zero());
            let s = snf(&a, p);
            prop_assert_eq!(k.cols, a.cols - s.rank);
        }

        #[test]
        fn columns_solve_in_their_own_span((a, p) in arb_matrix()) {
            let basis = column_lattice_basis(&a, p);
            if basis.cols > 0 {
                let x = solve_in_lattice(&basis, &a, p);
                prop_assert!(x.is_some());
                prop_assert_eq!(basis.mul(&x.unwrap()), a);
            } else {
                prop_assert!(a.is_zero());
            }
        }
    }
}
