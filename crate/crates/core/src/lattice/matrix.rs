use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use super::field::Field;
use super::rat::Rat;

/// Dense row-major matrix over an exact field.
#[derive(Clone, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> Matrix<F> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| F::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { F::one() } else { F::zero() })
    }

    pub fn diagonal(entries: &[F]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |i, j| if i == j { entries[i].clone() } else { F::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn try_map<G: Field, E>(&self, f: impl Fn(&F) -> Result<G, E>) -> Result<Matrix<G>, E> {
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect::<Result<_, E>>()?,
        })
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = &self[(i, j)];
                    if i == j {
                        e.is_one()
                    } else {
                        e.is_zero()
                    }
                })
            })
    }

    pub fn is_diagonal(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    pub fn is_upper_unitriangular(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                self[(i, i)].is_one() && (0..i).all(|j| self[(i, j)].is_zero())
            })
    }

    pub fn is_lower_unitriangular(&self) -> bool {
        self.transpose().is_upper_unitriangular()
    }

    /// Determinant by fraction-producing Gaussian elimination.
    pub fn det(&self) -> F {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut det = F::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a[(i, k)].is_zero()) else {
                return F::zero();
            };
            if p != k {
                a.swap_rows(p, k);
                det = -det;
            }
            let pivot = a[(k, k)].clone();
            det = det * pivot.clone();
            let pinv = pivot.inv().unwrap();
            for i in k + 1..n {
                if a[(i, k)].is_zero() {
                    continue;
                }
                let factor = a[(i, k)].clone() * pinv.clone();
                for j in k..n {
                    let v = a[(i, j)].clone() - factor.clone() * a[(k, j)].clone();
                    a[(i, j)] = v;
                }
            }
        }
        det
    }

    /// Exact inverse by Gauss–Jordan elimination; `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square(), "inverse of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for k in 0..n {
            let p = (k..n).find(|&i| !a[(i, k)].is_zero())?;
            if p != k {
                a.swap_rows(p, k);
                inv.swap_rows(p, k);
            }
            let pinv = a[(k, k)].inv().unwrap();
            for j in 0..n {
                a[(k, j)] = a[(k, j)].clone() * pinv.clone();
                inv[(k, j)] = inv[(k, j)].clone() * pinv.clone();
            }
            for i in 0..n {
                if i == k || a[(i, k)].is_zero() {
                    continue;
                }
                let factor = a[(i, k)].clone();
                for j in 0..n {
                    let v = a[(i, j)].clone() - factor.clone() * a[(k, j)].clone();
                    a[(i, j)] = v;
                    let w = inv[(i, j)].clone() - factor.clone() * inv[(k, j)].clone();
                    inv[(i, j)] = w;
                }
            }
        }
        Some(inv)
    }

    /// Solve `self · x = b` for any solution when the system is consistent.
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        assert_eq!(b.len(), self.rows);
        let (r, c) = (self.rows, self.cols);
        let mut a = Self::from_fn(r, c + 1, |i, j| {
            if j < c {
                self[(i, j)].clone()
            } else {
                b[i].clone()
            }
        });
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..c {
            let Some(p) = (row..r).find(|&i| !a[(i, col)].is_zero()) else {
                continue;
            };
            a.swap_rows(p, row);
            let pinv = a[(row, col)].inv().unwrap();
            for j in col..=c {
                a[(row, j)] = a[(row, j)].clone() * pinv.clone();
            }
            for i in 0..r {
                if i == row || a[(i, col)].is_zero() {
                    continue;
                }
                let factor = a[(i, col)].clone();
                for j in col..=c {
                    let v = a[(i, j)].clone() - factor.clone() * a[(row, j)].clone();
                    a[(i, j)] = v;
                }
            }
            pivots.push(col);
            row += 1;
            if row == r {
                break;
            }
        }
        if (row..r).any(|i| !a[(i, c)].is_zero()) {
            return None;
        }
        let mut x = vec![F::zero(); c];
        for (i, &col) in pivots.iter().enumerate() {
            x[col] = a[(i, c)].clone();
        }
        Some(x)
    }

    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(p) = (rank..self.rows).find(|&i| !a[(i, col)].is_zero()) else {
                continue;
            };
            a.swap_rows(p, rank);
            let pinv = a[(rank, col)].inv().unwrap();
            for i in rank + 1..self.rows {
                if a[(i, col)].is_zero() {
                    continue;
                }
                let factor = a[(i, col)].clone() * pinv.clone();
                for j in col..self.cols {
                    let v = a[(i, j)].clone() - factor.clone() * a[(rank, j)].clone();
                    a[(i, j)] = v;
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(F::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }
}

impl<F> Index<(usize, usize)> for Matrix<F> {
    type Output = F;
    fn index(&self, (i, j): (usize, usize)) -> &F {
        &self.data[i * self.cols + j]
    }
}

impl<F> IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut F {
        &mut self.data[i * self.cols + j]
    }
}

impl<'a, F: Field> Mul<&'a Matrix<F>> for &'a Matrix<F> {
    type Output = Matrix<F>;
    fn mul(self, rhs: &'a Matrix<F>) -> Matrix<F> {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out: Matrix<F> = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let v = out[(i, j)].clone() + a.clone() * b.clone();
                    out[(i, j)] = v;
                }
            }
        }
        out
    }
}

impl<F: Field> Mul for Matrix<F> {
    type Output = Matrix<F>;
    fn mul(self, rhs: Matrix<F>) -> Matrix<F> {
        &self * &rhs
    }
}

impl<F: fmt::Display> fmt::Display for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.data[i * self.cols + j])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl<F: fmt::Display> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Matrix<Rat> {
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Rat::from_int(x)).collect())
                .collect(),
        )
    }

    /// Rows as exact rational strings, for reports.
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.to_string()).collect())
            .collect()
    }
}
