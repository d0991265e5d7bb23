//! Integer matrices and the lattice algorithms built on them.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::matrix::Matrix;
use super::rat::Rat;

pub type IntVector = Vec<i64>;

fn floor_div(a: i64, b: i64) -> i64 {
    Integer::div_floor(&a, &b)
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn vec_gcd(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

/// Divide out the content; the zero vector is returned unchanged.
pub fn primitive(v: &[i64]) -> IntVector {
    let g = vec_gcd(v);
    if g <= 1 {
        v.to_vec()
    } else {
        v.iter().map(|x| x / g).collect()
    }
}

pub fn is_zero_vec(v: &[i64]) -> bool {
    v.iter().all(|&x| x == 0)
}

pub fn neg_vec(v: &[i64]) -> IntVector {
    v.iter().map(|x| -x).collect()
}

pub fn add_vec(a: &[i64], b: &[i64]) -> IntVector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_vec(a: &[i64], b: &[i64]) -> IntVector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale_vec(c: i64, v: &[i64]) -> IntVector {
    v.iter().map(|x| c * x).collect()
}

/// Scale a rational vector to the primitive integer vector on the same ray.
pub fn primitive_from_rats(v: &[Rat]) -> IntVector {
    let lcm = v
        .iter()
        .fold(num_bigint::BigInt::from(1), |l, x| l.lcm(&x.denom()));
    let ints: Vec<num_bigint::BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let g = ints
        .iter()
        .fold(num_bigint::BigInt::from(0), |g, x| g.gcd(x));
    ints.iter()
        .map(|x| {
            let y = if g == num_bigint::BigInt::from(0) { x.clone() } else { x / &g };
            i64::try_from(y).expect("lattice vector entry exceeds i64")
        })
        .collect()
}

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    /// Build from row vectors; `cols` fixes the width when `rows` is empty.
    pub fn from_rows(rows: &[IntVector], cols: usize) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        IntMatrix {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn from_slices(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>(), cols)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<IntVector> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn col(&self, j: usize) -> IntVector {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[i64]) -> IntVector {
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)] == 0))
    }

    pub fn to_rat(&self) -> Matrix<Rat> {
        Matrix::from_fn(self.rows, self.cols, |i, j| Rat::from_int(self[(i, j)]))
    }

    pub fn det(&self) -> i64 {
        assert_eq!(self.rows, self.cols);
        self.to_rat().det().to_i64().expect("determinant exceeds i64")
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        let snf = smith_normal_form(self);
        (0..self.rows.min(self.cols))
            .filter(|&i| snf.d[(i, i)] != 0)
            .count()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += c · row[src]
    fn add_row(&mut self, dst: usize, src: usize, c: i64) {
        for j in 0..self.cols {
            let v = self[(src, j)];
            self[(dst, j)] += c * v;
        }
    }

    /// col[dst] += c · col[src]
    fn add_col(&mut self, dst: usize, src: usize, c: i64) {
        for i in 0..self.rows {
            let v = self[(i, src)];
            self[(i, dst)] += c * v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            self[(i, j)] = -self[(i, j)];
        }
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.cols + j]
    }
}

impl<'a> Mul<&'a IntMatrix> for &'a IntMatrix {
    type Output = IntMatrix;
    fn mul(self, rhs: &'a IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a != 0 {
                    for j in 0..rhs.cols {
                        out[(i, j)] += a * rhs[(k, j)];
                    }
                }
            }
        }
        out
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.row_vecs())
    }
}

/// `u · m · v = d` with `u`, `v` unimodular and `d` in Smith form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    pub fn diagonal(&self) -> Vec<i64> {
        (0..self.d.rows.min(self.d.cols)).map(|i| self.d[(i, i)]).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|&&x| x != 0).count()
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (r, c) = (m.rows, m.cols);
    let mut d = m.clone();
    let mut u = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);
    for t in 0..r.min(c) {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    let x = d[(i, j)].abs();
                    if x != 0 && best.is_none_or(|(bi, bj)| x < d[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(u, d, v);
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let p = d[(t, t)];
            let mut clean = true;
            for i in t + 1..r {
                let q = floor_div(d[(i, t)], p);
                if q != 0 {
                    d.add_row(i, t, -q);
                    u.add_row(i, t, -q);
                }
                if d[(i, t)] != 0 {
                    clean = false;
                }
            }
            for j in t + 1..c {
                let q = floor_div(d[(t, j)], p);
                if q != 0 {
                    d.add_col(j, t, -q);
                    v.add_col(j, t, -q);
                }
                if d[(t, j)] != 0 {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| d[(i, j)] % p != 0));
            match bad {
                Some(i) => {
                    d.add_row(t, i, 1);
                    u.add_row(t, i, 1);
                }
                None => break,
            }
        }
        if d[(t, t)] < 0 {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    finish(u, d, v)
}

fn finish(mut u: IntMatrix, mut d: IntMatrix, v: IntMatrix) -> SmithForm {
    for t in 0..d.rows.min(d.cols) {
        if d[(t, t)] < 0 {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    SmithForm { u, d, v }
}

/// Row-style Hermite normal form of the lattice spanned by `vectors`:
/// echelon rows with positive pivots, entries above each pivot reduced into
/// `[0, pivot)`. Zero rows are dropped, so the result is a lattice basis.
pub fn hermite_rows(vectors: &[IntVector], dim: usize) -> Vec<IntVector> {
    let mut rows: Vec<IntVector> = vectors.iter().filter(|v| !is_zero_vec(v)).cloned().collect();
    let mut out: Vec<IntVector> = Vec::new();
    let mut col = 0;
    while col < dim && !rows.is_empty() {
        // gcd-reduce column `col` onto a single row
        loop {
            let nz: Vec<usize> = (0..rows.len()).filter(|&i| rows[i][col] != 0).collect();
            if nz.len() <= 1 {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| rows[i][col].abs()).unwrap();
            let pv = rows[p][col];
            for &i in &nz {
                if i != p {
                    let q = floor_div(rows[i][col], pv);
                    let src = rows[p].clone();
                    for (x, y) in rows[i].iter_mut().zip(&src) {
                        *x -= q * y;
                    }
                }
            }
        }
        if let Some(p) = (0..rows.len()).find(|&i| rows[i][col] != 0) {
            let mut pivot = rows.swap_remove(p);
            if pivot[col] < 0 {
                pivot = neg_vec(&pivot);
            }
            out.push(pivot);
        }
        rows.retain(|r| !is_zero_vec(r));
        col += 1;
    }
    // reduce entries above pivots
    for k in 0..out.len() {
        let pc = out[k].iter().position(|&x| x != 0).unwrap();
        let pv = out[k][pc];
        for i in 0..k {
            let q = floor_div(out[i][pc], pv);
            if q != 0 {
                let src = out[k].clone();
                for (x, y) in out[i].iter_mut().zip(&src) {
                    *x -= q * y;
                }
            }
        }
    }
    out
}

/// Lattice basis of `{v ∈ ℤ^cols : m·v = 0}`, in Hermite normal form.
pub fn integer_kernel(m: &IntMatrix) -> Vec<IntVector> {
    let c = m.cols;
    if m.rows == 0 || is_zero_vec(&m.data) {
        return (0..c)
            .map(|i| (0..c).map(|j| i64::from(i == j)).collect())
            .collect();
    }
    let snf = smith_normal_form(m);
    let rank = snf.rank();
    let basis: Vec<IntVector> = (rank..c).map(|j| snf.v.col(j)).collect();
    hermite_rows(&basis, c)
}

/// Index of the lattice spanned by the rows inside its saturation: the
/// product of the nonzero Smith invariants (1 iff the rows extend to a basis).
pub fn lattice_index(rows: &[IntVector], dim: usize) -> i64 {
    if rows.is_empty() {
        return 1;
    }
    let snf = smith_normal_form(&IntMatrix::from_rows(rows, dim));
    snf.diagonal().iter().filter(|&&x| x != 0).product()
}
