//! Integer and rational linear algebra: Smith and Hermite normal forms,
//! determinants, integer system solving, and exact affine solving.

// index loops are clearer than iterator chains in the matrix code here
#![allow(clippy::needless_range_loop)]

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rat::Rat;

/// A dense matrix with arbitrary-precision integer entries, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = IntMatrix::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &x) in row.iter().enumerate() {
                m[(i, j)] = BigInt::from(x);
            }
        }
        m
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<BigInt>) -> Self {
        assert_eq!(entries.len(), rows * cols);
        IntMatrix {
            rows,
            cols,
            entries,
        }
    }

    /// Builds the matrix whose columns are the given vectors.
    pub fn from_columns(rank: usize, columns: &[Vec<BigInt>]) -> Self {
        let mut m = IntMatrix::zero(rank, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rank, "column of wrong height");
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
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

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let term = &self[(i, k)] * &other[(k, j)];
                    out[(i, j)] += term;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = BigInt::zero();
                for j in 0..self.cols {
                    acc += &self[(i, j)] * &v[j];
                }
                acc
            })
            .collect()
    }

    pub fn mul_rat_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = Rat::zero();
                for j in 0..self.cols {
                    acc += &(&Rat::from_bigint(self[(i, j)].clone()) * &v[j]);
                }
                acc
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(BigInt::is_zero)
    }

    /// Determinant by fraction-free (Bareiss) elimination; square only.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.entries.clone();
        let at = |a: &Vec<BigInt>, i: usize, j: usize| a[i * n + j].clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if at(&a, k, k).is_zero() {
                match (k + 1..n).find(|&i| !at(&a, i, k).is_zero()) {
                    Some(i) => {
                        for j in 0..n {
                            a.swap(k * n + j, i * n + j);
                        }
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &at(&a, k, k) * &at(&a, i, j) - &at(&a, i, k) * &at(&a, k, j);
                    a[i * n + j] = num.div_floor(&prev);
                }
                a[i * n + k] = BigInt::zero();
            }
            prev = at(&a, k, k);
        }
        sign * at(&a, n - 1, n - 1)
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        let rows: Vec<Vec<Rat>> = (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| Rat::from_bigint(self[(i, j)].clone()))
                    .collect()
            })
            .collect();
        rational_rank(rows)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += q * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        for j in 0..self.cols {
            let term = q * &self[(src, j)];
            self[(dst, j)] += term;
        }
    }

    /// col[dst] += q * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        for i in 0..self.rows {
            let term = q * &self[(i, src)];
            self[(i, dst)] += term;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let x = -self[(i, j)].clone();
            self[(i, j)] = x;
        }
    }
}

impl core::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        assert!(i < self.rows && j < self.cols, "index out of range");
        &self.entries[i * self.cols + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        assert!(i < self.rows && j < self.cols, "index out of range");
        &mut self.entries[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            write!(f, "  [")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// `U * A * V = S` with `U`, `V` unimodular and `S` diagonal with a
/// divisibility chain `d1 | d2 | ...` of nonnegative entries.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

impl SmithDecomposition {
    pub fn diagonal(&self) -> Vec<BigInt> {
        let k = self.s.rows().min(self.s.cols());
        (0..k).map(|i| self.s[(i, i)].clone()).collect()
    }

    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }
}

/// Smith normal form by elementary integer row/column operations, pivoting
/// on a minimal nonzero absolute value.
pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let mut s = a.clone();
    let mut u = IntMatrix::identity(a.rows());
    let mut v = IntMatrix::identity(a.cols());
    let k = a.rows().min(a.cols());

    let mut t = 0;
    while t < k {
        // Find a pivot of minimal nonzero absolute value in the trailing block.
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..s.rows() {
            for j in t..s.cols() {
                if s[(i, j)].is_zero() {
                    continue;
                }
                let better = match pivot {
                    None => true,
                    Some((pi, pj)) => s[(i, j)].abs() < s[(pi, pj)].abs(),
                };
                if better {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else {
            break; // trailing block is zero
        };
        s.swap_rows(t, pi);
        u.swap_rows(t, pi);
        s.swap_cols(t, pj);
        v.swap_cols(t, pj);

        // Clear row t and column t; repeat until both are clean, since a
        // remainder step can reintroduce entries in the other line.
        loop {
            let mut dirty = false;
            for i in t + 1..s.rows() {
                if s[(i, t)].is_zero() {
                    continue;
                }
                let q = -s[(i, t)].div_floor(&s[(t, t)]);
                s.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                if !s[(i, t)].is_zero() {
                    // remainder is smaller than the pivot: promote it
                    s.swap_rows(t, i);
                    u.swap_rows(t, i);
                    dirty = true;
                }
            }
            for j in t + 1..s.cols() {
                if s[(t, j)].is_zero() {
                    continue;
                }
                let q = -s[(t, j)].div_floor(&s[(t, t)]);
                s.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                if !s[(t, j)].is_zero() {
                    s.swap_cols(t, j);
                    v.swap_cols(t, j);
                    dirty = true;
                }
            }
            let row_clean = (t + 1..s.rows()).all(|i| s[(i, t)].is_zero());
            let col_clean = (t + 1..s.cols()).all(|j| s[(t, j)].is_zero());
            if row_clean && col_clean && !dirty {
                break;
            }
        }

        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }

    // Enforce the divisibility chain d_i | d_{i+1}.
    let mut i = 0;
    while i + 1 < k {
        let di = s[(i, i)].clone();
        let dj = s[(i + 1, i + 1)].clone();
        if di.is_zero() || (&dj % &di).is_zero() {
            i += 1;
            continue;
        }
        // Fold d_{i+1} into column i and re-reduce the 2x2 block.
        s.add_col_multiple(i, i + 1, &BigInt::one());
        v.add_col_multiple(i, i + 1, &BigInt::one());
        reduce_two_by_two(&mut s, &mut u, &mut v, i);
        i = i.saturating_sub(1);
    }

    SmithDecomposition { u, s, v }
}

/// Restores diagonal form on the 2x2 block at `(t, t)..(t+1, t+1)` after a
/// divisibility fix, using the same euclidean sweeps as the main loop.
fn reduce_two_by_two(s: &mut IntMatrix, u: &mut IntMatrix, v: &mut IntMatrix, t: usize) {
    loop {
        if s[(t, t)].is_zero() {
            if s[(t + 1, t)].is_zero() && s[(t, t + 1)].is_zero() {
                s.swap_rows(t, t + 1);
                u.swap_rows(t, t + 1);
                s.swap_cols(t, t + 1);
                v.swap_cols(t, t + 1);
            } else if !s[(t + 1, t)].is_zero() {
                s.swap_rows(t, t + 1);
                u.swap_rows(t, t + 1);
            } else {
                s.swap_cols(t, t + 1);
                v.swap_cols(t, t + 1);
            }
            if s[(t, t)].is_zero() {
                break; // whole block is zero
            }
        }
        let r = s[(t + 1, t)].clone();
        if !r.is_zero() {
            let q = -r.div_floor(&s[(t, t)]);
            s.add_row_multiple(t + 1, t, &q);
            u.add_row_multiple(t + 1, t, &q);
            if !s[(t + 1, t)].is_zero() {
                s.swap_rows(t, t + 1);
                u.swap_rows(t, t + 1);
            }
            continue;
        }
        let c = s[(t, t + 1)].clone();
        if !c.is_zero() {
            let q = -c.div_floor(&s[(t, t)]);
            s.add_col_multiple(t + 1, t, &q);
            v.add_col_multiple(t + 1, t, &q);
            if !s[(t, t + 1)].is_zero() {
                s.swap_cols(t, t + 1);
                v.swap_cols(t, t + 1);
            }
            continue;
        }
        break;
    }
    for d in [t, t + 1] {
        if s[(d, d)].is_negative() {
            s.negate_row(d);
            u.negate_row(d);
        }
    }
}

/// Column-style Hermite normal form: returns `H = A * V` for unimodular `V`,
/// with zero columns dropped. The nonzero columns are in echelon form with
/// strictly descending pivot rows... specifically, column `j` has its lowest
/// nonzero entry (the pivot) positive, pivot rows strictly increasing with
/// `j`, and entries to the right of a pivot in its row reduced into
/// `[0, pivot)`. Two column spans are equal iff their forms are identical.
pub fn column_hermite_form(a: &IntMatrix) -> IntMatrix {
    let rows = a.rows();
    let mut cols: Vec<Vec<BigInt>> = a.columns();
    let mut pivot_col = 0usize;
    for r in 0..rows {
        if pivot_col >= cols.len() {
            break;
        }
        // Euclidean reduction among entries of row r in columns >= pivot_col.
        loop {
            let mut best: Option<usize> = None;
            for (ci, col) in cols.iter().enumerate().skip(pivot_col) {
                if col[r].is_zero() {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some(b) => col[r].abs() < cols[b][r].abs(),
                };
                if better {
                    best = Some(ci);
                }
            }
            let Some(b) = best else {
                break;
            };
            cols.swap(pivot_col, b);
            let mut any_left = false;
            for ci in pivot_col + 1..cols.len() {
                if cols[ci][r].is_zero() {
                    continue;
                }
                let q = cols[ci][r].div_floor(&cols[pivot_col][r]);
                for i in 0..rows {
                    let t = &q * &cols[pivot_col][i];
                    cols[ci][i] -= t;
                }
                if !cols[ci][r].is_zero() {
                    any_left = true;
                }
            }
            if !any_left {
                break;
            }
        }
        if cols[pivot_col][r].is_zero() {
            continue; // no pivot in this row
        }
        if cols[pivot_col][r].is_negative() {
            for i in 0..rows {
                let x = -cols[pivot_col][i].clone();
                cols[pivot_col][i] = x;
            }
        }
        // Reduce earlier columns' entries in the pivot row into [0, pivot).
        for ci in 0..pivot_col {
            let q = cols[ci][r].div_floor(&cols[pivot_col][r]);
            if q.is_zero() {
                continue;
            }
            for i in 0..rows {
                let t = &q * &cols[pivot_col][i];
                cols[ci][i] -= t;
            }
        }
        pivot_col += 1;
    }
    cols.truncate(pivot_col);
    // Reorder so pivot rows ascend with the column index.
    cols.sort_by_key(|col| col.iter().position(|x| !x.is_zero()).unwrap_or(rows));
    IntMatrix::from_columns(rows, &cols)
}

/// Solves `A x = b` over the integers via the Smith form. Returns one
/// solution when the system is solvable in integers.
pub fn solve_integer(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(a.rows(), b.len());
    let snf = smith_normal_form(a);
    let ub = snf.u.mul_vec(b);
    let k = a.rows().min(a.cols());
    let mut y = vec![BigInt::zero(); a.cols()];
    for i in 0..a.rows() {
        let d = if i < k {
            snf.s[(i, i)].clone()
        } else {
            BigInt::zero()
        };
        if d.is_zero() {
            if !ub[i].is_zero() {
                return None;
            }
        } else {
            let (q, r) = ub[i].div_rem(&d);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        }
    }
    Some(snf.v.mul_vec(&y))
}

/// A saturated basis of the integer kernel `{x : A x = 0}`, as columns.
pub fn integer_kernel(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let snf = smith_normal_form(a);
    let rank = snf.rank();
    (rank..a.cols()).map(|j| snf.v.column(j)).collect()
}

/// Exact description of the solution set of a rational linear system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AffineSolution {
    NoSolution,
    Solution {
        point: Vec<Rat>,
        kernel: Vec<Vec<Rat>>,
    },
}

/// Solves `A x = b` exactly over the rationals, returning a particular
/// point and a kernel basis when consistent.
pub fn solve_affine(a: &[Vec<Rat>], b: &[Rat]) -> AffineSolution {
    assert_eq!(a.len(), b.len());
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            assert_eq!(row.len(), cols, "ragged rows");
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();

    let mut pivot_of_col: Vec<Option<usize>> = vec![None; cols];
    let mut pivot_row = 0usize;
    for col in 0..cols {
        let Some(src) = (pivot_row..rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(pivot_row, src);
        let inv = m[pivot_row][col].recip();
        for x in m[pivot_row].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i == pivot_row || m[i][col].is_zero() {
                continue;
            }
            let factor = m[i][col].clone();
            for j in 0..=cols {
                let t = &factor * &m[pivot_row][j];
                m[i][j] -= &t;
            }
        }
        pivot_of_col[col] = Some(pivot_row);
        pivot_row += 1;
        if pivot_row == rows {
            break;
        }
    }

    for row in m.iter().skip(pivot_row) {
        if !row[cols].is_zero() {
            return AffineSolution::NoSolution;
        }
    }

    let mut point = vec![Rat::zero(); cols];
    for (col, pr) in pivot_of_col.iter().enumerate() {
        if let Some(pr) = pr {
            point[col] = m[*pr][cols].clone();
        }
    }
    let mut kernel = Vec::new();
    for free in 0..cols {
        if pivot_of_col[free].is_some() {
            continue;
        }
        let mut k = vec![Rat::zero(); cols];
        k[free] = Rat::one();
        for (col, pr) in pivot_of_col.iter().enumerate() {
            if let Some(pr) = pr {
                k[col] = -&m[*pr][free];
            }
        }
        kernel.push(k);
    }
    AffineSolution::Solution { point, kernel }
}

/// Row rank of a rational matrix; consumes the rows.
pub fn rational_rank(mut rows: Vec<Vec<Rat>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0usize;
    for col in 0..cols {
        let Some(src) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, src);
        let inv = rows[rank][col].recip();
        for x in rows[rank].iter_mut() {
            *x = &*x * &inv;
        }
        for i in rank + 1..rows.len() {
            if rows[i][col].is_zero() {
                continue;
            }
            let factor = rows[i][col].clone();
            for j in col..cols {
                let t = &factor * &rows[rank][j];
                rows[i][j] -= &t;
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn assert_smith(a: &IntMatrix) -> SmithDecomposition {
        let snf = smith_normal_form(a);
        assert_eq!(snf.u.det().abs(), BigInt::one(), "U not unimodular");
        assert_eq!(snf.v.det().abs(), BigInt::one(), "V not unimodular");
        assert_eq!(snf.u.mul(a).mul(&snf.v), snf.s, "U*A*V != S");
        for i in 0..snf.s.rows() {
            for j in 0..snf.s.cols() {
                if i != j {
                    assert!(snf.s[(i, j)].is_zero(), "off-diagonal entry");
                }
            }
        }
        let d = snf.diagonal();
        for w in d.windows(2) {
            assert!(!w[0].is_negative());
            if !w[0].is_zero() {
                assert!((&w[1] % &w[0]).is_zero(), "divisibility chain broken");
            } else {
                assert!(w[1].is_zero(), "zero before nonzero on diagonal");
            }
        }
        snf
    }

    #[test]
    fn smith_identity() {
        let a = IntMatrix::identity(2);
        let snf = assert_smith(&a);
        assert_eq!(snf.s, IntMatrix::identity(2));
    }

    #[test]
    fn smith_diag_2_3_gives_1_6() {
        let a = IntMatrix::from_rows(&[&[2, 0], &[0, 3]]);
        let snf = assert_smith(&a);
        assert_eq!(snf.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn smith_rank_one() {
        let a = IntMatrix::from_rows(&[&[2, 4], &[4, 8]]);
        let snf = assert_smith(&a);
        assert_eq!(snf.diagonal(), vec![BigInt::from(2), BigInt::from(0)]);
    }

    #[test]
    fn smith_divisibility_cascades() {
        let a = IntMatrix::from_rows(&[&[4, 0], &[0, 6]]);
        assert_eq!(
            assert_smith(&a).diagonal(),
            vec![BigInt::from(2), BigInt::from(12)]
        );
        let b = IntMatrix::from_rows(&[&[2, 0, 0], &[0, 3, 0], &[0, 0, 5]]);
        assert_eq!(
            assert_smith(&b).diagonal(),
            vec![BigInt::from(1), BigInt::from(1), BigInt::from(30)]
        );
        let c = IntMatrix::from_rows(&[&[6, 0, 0], &[0, 10, 0], &[0, 0, 15]]);
        // invariant factors of Z/6 + Z/10 + Z/15
        assert_eq!(
            assert_smith(&c).diagonal(),
            vec![BigInt::from(1), BigInt::from(30), BigInt::from(30)]
        );
    }

    #[test]
    fn smith_rectangular() {
        let a = IntMatrix::from_rows(&[&[6, 10, 15]]);
        let snf = assert_smith(&a);
        assert_eq!(snf.diagonal(), vec![BigInt::from(1)]);
    }

    #[test]
    fn hermite_canonical_for_equal_spans() {
        let a = IntMatrix::from_rows(&[&[2, 0], &[2, 4]]); // columns (2,2),(0,4)
        let b = IntMatrix::from_rows(&[&[2, 2], &[6, 2]]); // same column span
        assert_eq!(column_hermite_form(&a), column_hermite_form(&b));
    }

    #[test]
    fn hermite_drops_zero_columns() {
        let a = IntMatrix::from_rows(&[&[0, 3, 3], &[0, 1, 1]]);
        let h = column_hermite_form(&a);
        assert_eq!(h.cols(), 1);
    }

    #[test]
    fn integer_solve() {
        let a = IntMatrix::from_rows(&[&[2, 0], &[0, 3]]);
        let x = solve_integer(&a, &[BigInt::from(4), BigInt::from(9)]).unwrap();
        assert_eq!(x, vec![BigInt::from(2), BigInt::from(3)]);
        assert!(solve_integer(&a, &[BigInt::from(1), BigInt::from(0)]).is_none());
    }

    #[test]
    fn kernel_is_saturated() {
        let a = IntMatrix::from_rows(&[&[1, 1]]);
        let k = integer_kernel(&a);
        assert_eq!(k.len(), 1);
        let g = &k[0];
        assert_eq!((&g[0] + &g[1]), BigInt::zero());
        assert_eq!(g[0].abs(), BigInt::one());
    }

    #[test]
    fn affine_identity() {
        let a = vec![vec![rat(1, 1), rat(0, 1)], vec![rat(0, 1), rat(1, 1)]];
        match solve_affine(&a, &[rat(1, 1), rat(2, 1)]) {
            AffineSolution::Solution { point, kernel } => {
                assert_eq!(point, vec![rat(1, 1), rat(2, 1)]);
                assert!(kernel.is_empty());
            }
            _ => panic!("expected solution"),
        }
    }

    #[test]
    fn affine_underdetermined() {
        let a = vec![vec![rat(1, 1), rat(1, 1)]];
        match solve_affine(&a, &[rat(1, 1)]) {
            AffineSolution::Solution { point, kernel } => {
                assert_eq!(point, vec![rat(1, 1), rat(0, 1)]);
                assert_eq!(kernel.len(), 1);
                // kernel spans (1, -1)
                assert_eq!(kernel[0][0].clone() + kernel[0][1].clone(), Rat::zero());
            }
            _ => panic!("expected solution"),
        }
    }

    #[test]
    fn affine_inconsistent() {
        let a = vec![vec![rat(1, 1)], vec![rat(1, 1)]];
        assert_eq!(
            solve_affine(&a, &[rat(0, 1), rat(1, 1)]),
            AffineSolution::NoSolution
        );
    }

    #[test]
    fn det_values() {
        assert_eq!(
            IntMatrix::from_rows(&[&[1, 1], &[0, 1]]).det(),
            BigInt::one()
        );
        assert_eq!(
            IntMatrix::from_rows(&[&[2, 0], &[0, 3]]).det(),
            BigInt::from(6)
        );
        assert_eq!(
            IntMatrix::from_rows(&[&[1, 2], &[2, 4]]).det(),
            BigInt::zero()
        );
    }
}
