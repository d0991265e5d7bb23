//! The split group `SL_n` (type `A_{n-1}`) in exact matrices: pinning
//! `p_β(x) = I + x·E_ij` for `β = e_i − e_j`, Weyl representatives, big cell
//! factorization `g = u⁻·t·u⁺`, and refactorization of unipotent elements
//! under arbitrary root orders.

use std::collections::BTreeMap;

use rand::RngExt;
use rand_chacha::ChaCha8Rng;

use crate::lattice::{Field, Matrix, Rat};
use crate::root_datum::{CartanType, RootDatum};

/// Largest supported `n` for `SL_n`.
pub const MAX_N: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ChevalleyError {
    #[error("matrix realization only exists for type A of rank 1..={}", MAX_N - 1)]
    UnsupportedType,
    #[error("leading principal minor of size {0} vanishes")]
    NotInBigCell(usize),
    #[error("matrix is not unitriangular of the expected sign")]
    NotUnitriangular,
    #[error("conjugating root group {root} by n_{simple} does not give a single root group")]
    NotSingleRootImage { simple: usize, root: usize },
    #[error("torus coordinates must be nonzero")]
    ZeroCoordinate,
    #[error("simple index {0} out of range")]
    BadIndex(usize),
}

/// `SL_n` with its root datum, `N` in the simple coroot basis.
#[derive(Debug, Clone)]
pub struct SpecialLinear {
    rd: RootDatum,
    n: usize,
    /// Matrix position of each root, aligned with `rd.roots()`.
    positions: Vec<(usize, usize)>,
}

/// Coordinates of `u⁻ t u⁺` with declared root orders; the torus part is
/// given in coroot coordinates `c` with `t = Π α_k∨(c_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BigCellTriple<F: Field> {
    pub minus_order: Vec<usize>,
    pub minus: Vec<F>,
    pub torus: Vec<F>,
    pub plus_order: Vec<usize>,
    pub plus: Vec<F>,
}

/// `ε_β` with `n_i p_β(x) n_i⁻¹ = p_{s_i β}(ε_β x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignTable {
    signs: BTreeMap<(usize, usize), i64>,
}

impl SignTable {
    pub fn get(&self, simple: usize, root: usize) -> i64 {
        self.signs[&(simple, root)]
    }

    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), i64)> + '_ {
        self.signs.iter().map(|(k, v)| (*k, *v))
    }
}

impl SpecialLinear {
    pub fn new(n: usize) -> Result<Self, ChevalleyError> {
        if !(2..=MAX_N).contains(&n) {
            return Err(ChevalleyError::UnsupportedType);
        }
        let rd = RootDatum::named(CartanType::A, n - 1).expect("type A is finite");
        Self::from_root_datum(&rd)
    }

    pub fn from_root_datum(rd: &RootDatum) -> Result<Self, ChevalleyError> {
        let l = rd.rank();
        if l + 1 > MAX_N {
            return Err(ChevalleyError::UnsupportedType);
        }
        let reference = CartanType::A.cartan_matrix(l).expect("type A");
        if *rd.cartan() != reference {
            return Err(ChevalleyError::UnsupportedType);
        }
        let positions = rd
            .roots()
            .iter()
            .map(|r| {
                let support: Vec<usize> = (0..l).filter(|&k| r.coeffs[k] != 0).collect();
                let (a, b) = (support[0], support[support.len() - 1] + 1);
                if r.is_positive() {
                    (a, b)
                } else {
                    (b, a)
                }
            })
            .collect();
        Ok(SpecialLinear {
            rd: rd.clone(),
            n: l + 1,
            positions,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.n - 1
    }

    pub fn root_datum(&self) -> &RootDatum {
        &self.rd
    }

    pub fn root_count(&self) -> usize {
        self.positions.len()
    }

    /// Matrix entry `(i, j)` carrying the root group of root `idx`.
    pub fn position(&self, idx: usize) -> (usize, usize) {
        self.positions[idx]
    }

    pub fn root_at(&self, i: usize, j: usize) -> Option<usize> {
        self.positions.iter().position(|&p| p == (i, j))
    }

    pub fn is_positive(&self, idx: usize) -> bool {
        let (i, j) = self.positions[idx];
        i < j
    }

    pub fn height(&self, idx: usize) -> i64 {
        self.rd.roots()[idx].height()
    }

    /// Index of the root `α_i` (`negative` selects `−α_i`).
    pub fn simple_root_index(&self, i: usize, negative: bool) -> usize {
        if negative {
            self.root_at(i + 1, i).expect("simple root")
        } else {
            self.root_at(i, i + 1).expect("simple root")
        }
    }

    /// Root indices of `Ψ⁺` in the default order.
    pub fn positive_order(&self) -> Vec<usize> {
        (0..self.root_count()).filter(|&k| self.is_positive(k)).collect()
    }

    pub fn negative_order(&self) -> Vec<usize> {
        (0..self.root_count()).filter(|&k| !self.is_positive(k)).collect()
    }

    /// Root index of `s_i(β)`.
    pub fn reflect_root(&self, i: usize, idx: usize) -> usize {
        let w = self.rd.reflect_weight(i, &self.rd.roots()[idx].weight);
        self.rd.root_index_by_weight(&w).expect("Weyl group permutes roots")
    }

    pub fn pin<F: Field>(&self, idx: usize, x: F) -> Matrix<F> {
        let mut m = Matrix::identity(self.n);
        let (i, j) = self.positions[idx];
        m[(i, j)] = x;
        m
    }

    /// `n_i = p_{α_i}(1) p_{−α_i}(−1) p_{α_i}(1)`.
    pub fn weyl_generator<F: Field>(&self, i: usize) -> Matrix<F> {
        let a = self.simple_root_index(i, false);
        let b = self.simple_root_index(i, true);
        let pa = self.pin(a, F::one());
        &(&pa * &self.pin(b, -F::one())) * &pa
    }

    /// `n_i⁻¹ = n_i³`.
    pub fn weyl_generator_inv<F: Field>(&self, i: usize) -> Matrix<F> {
        let g = self.weyl_generator::<F>(i);
        &(&g * &g) * &g
    }

    /// Product of `n_i` over `word`, left to right.
    pub fn weyl_representative<F: Field>(&self, word: &[usize]) -> Result<Matrix<F>, ChevalleyError> {
        let mut out = Matrix::identity(self.n);
        for &i in word {
            if i >= self.rank() {
                return Err(ChevalleyError::BadIndex(i));
            }
            out = &out * &self.weyl_generator(i);
        }
        Ok(out)
    }

    /// `n_0` for the longest element, from its reduced word.
    pub fn longest_representative<F: Field>(&self) -> Matrix<F> {
        let w = self.rd.weyl_group().expect("small Weyl group");
        self.weyl_representative(&w.longest_word()).expect("valid word")
    }

    /// `Π α_k∨(c_k) = diag(c_1, c_2/c_1, …, 1/c_{n−1})`.
    pub fn torus<F: Field>(&self, c: &[F]) -> Result<Matrix<F>, ChevalleyError> {
        assert_eq!(c.len(), self.rank(), "torus coordinates");
        let mut d = Vec::with_capacity(self.n);
        let mut prev = F::one();
        for ck in c.iter().chain(std::iter::once(&F::one())) {
            d.push(ck.checked_div(&prev).ok_or(ChevalleyError::ZeroCoordinate)?);
            prev = ck.clone();
        }
        if d.iter().any(Field::is_zero) {
            return Err(ChevalleyError::ZeroCoordinate);
        }
        Ok(Matrix::diagonal(&d))
    }

    /// Inverse of [`SpecialLinear::torus`]: `c_k = d_1 ⋯ d_k`.
    pub fn torus_coords<F: Field>(&self, t: &Matrix<F>) -> Vec<F> {
        let mut acc = F::one();
        (0..self.rank())
            .map(|k| {
                acc = acc.clone() * t[(k, k)].clone();
                acc.clone()
            })
            .collect()
    }

    /// Ordered product `Π p_γ(c_γ)`.
    pub fn assemble<F: Field>(&self, order: &[usize], coords: &[F]) -> Matrix<F> {
        assert_eq!(order.len(), coords.len());
        let mut acc: Matrix<F> = Matrix::identity(self.n);
        for (&k, c) in order.iter().zip(coords) {
            if c.is_zero() {
                continue;
            }
            // right multiplication by 1 + c·E_ij adds c·(column i) to column j
            let (i, j) = self.positions[k];
            for r in 0..self.n {
                if !acc[(r, i)].is_zero() {
                    let v = acc[(r, j)].clone() + c.clone() * acc[(r, i)].clone();
                    acc[(r, j)] = v;
                }
            }
        }
        acc
    }

    /// Coordinates `c` with `Π_{γ ∈ order} p_γ(c_γ) = u`, solved by
    /// increasing height.
    pub fn unipotent_refactor<F: Field>(
        &self,
        u: &Matrix<F>,
        order: &[usize],
    ) -> Result<Vec<F>, ChevalleyError> {
        let upper = order.first().is_none_or(|&k| self.is_positive(k));
        let shaped = if upper {
            u.is_upper_unitriangular()
        } else {
            u.is_lower_unitriangular()
        };
        let expected = self.root_count() / 2;
        if !shaped
            || order.len() != expected
            || order.iter().any(|&k| self.is_positive(k) != upper)
        {
            return Err(ChevalleyError::NotUnitriangular);
        }
        let mut coords = vec![F::zero(); order.len()];
        let max_h = order.iter().map(|&k| self.height(k).abs()).max().unwrap_or(0);
        for h in 1..=max_h {
            let partial = self.assemble(order, &coords);
            for (slot, &k) in order.iter().enumerate() {
                if self.height(k).abs() == h {
                    let pos = self.positions[k];
                    coords[slot] = u[pos].clone() - partial[pos].clone();
                }
            }
        }
        assert!(
            self.assemble(order, &coords) == *u,
            "height-ordered refactorization failed to reassemble"
        );
        Ok(coords)
    }

    /// `g = u⁻ t u⁺` by elimination without pivoting.
    pub fn big_cell_factor<F: Field>(
        &self,
        g: &Matrix<F>,
        minus_order: &[usize],
        plus_order: &[usize],
    ) -> Result<BigCellTriple<F>, ChevalleyError> {
        let (l, d, u) = ldu(g)?;
        Ok(BigCellTriple {
            minus: self.unipotent_refactor(&l, minus_order)?,
            minus_order: minus_order.to_vec(),
            torus: self.torus_coords(&d),
            plus: self.unipotent_refactor(&u, plus_order)?,
            plus_order: plus_order.to_vec(),
        })
    }

    pub fn big_cell_factor_default<F: Field>(
        &self,
        g: &Matrix<F>,
    ) -> Result<BigCellTriple<F>, ChevalleyError> {
        self.big_cell_factor(g, &self.negative_order(), &self.positive_order())
    }

    pub fn reassemble<F: Field>(&self, b: &BigCellTriple<F>) -> Result<Matrix<F>, ChevalleyError> {
        Ok(&(&self.assemble(&b.minus_order, &b.minus) * &self.torus(&b.torus)?)
            * &self.assemble(&b.plus_order, &b.plus))
    }

    pub fn chevalley_signs(&self) -> Result<SignTable, ChevalleyError> {
        let mut signs = BTreeMap::new();
        for i in 0..self.rank() {
            let ni = self.weyl_generator::<Rat>(i);
            let ni_inv = self.weyl_generator_inv::<Rat>(i);
            for k in 0..self.root_count() {
                let target = self.reflect_root(i, k);
                let mut eps = None;
                for x in [1i64, 2] {
                    let conj = &(&ni * &self.pin(k, Rat::from_int(x))) * &ni_inv;
                    let pos = self.positions[target];
                    let val = conj[pos].clone();
                    let expected = |e: i64| self.pin(target, Rat::from_int(e * x));
                    let e = if conj == expected(1) {
                        1
                    } else if conj == expected(-1) {
                        -1
                    } else {
                        return Err(ChevalleyError::NotSingleRootImage { simple: i, root: k });
                    };
                    debug_assert_eq!(val, Rat::from_int(e * x));
                    if eps.is_some_and(|p| p != e) {
                        return Err(ChevalleyError::NotSingleRootImage { simple: i, root: k });
                    }
                    eps = Some(e);
                }
                signs.insert((i, k), eps.expect("two specializations"));
            }
        }
        Ok(SignTable { signs })
    }

    /// Product of `steps` random elementary matrices `I + c·E_ij`,
    /// `c ∈ [−3, 3]`.
    pub fn random_element(&self, rng: &mut ChaCha8Rng, steps: usize) -> Matrix<Rat> {
        let mut g = Matrix::identity(self.n);
        for _ in 0..steps {
            let k = rng.random_range(0..self.root_count());
            let c = rng.random_range(-3i64..=3);
            g = &g * &self.pin(k, Rat::from_int(c));
        }
        g
    }

    /// Random element of the big cell with its factorization inputs.
    pub fn random_unipotent(&self, rng: &mut ChaCha8Rng, positive: bool) -> Matrix<Rat> {
        let order = if positive {
            self.positive_order()
        } else {
            self.negative_order()
        };
        let coords: Vec<Rat> = order
            .iter()
            .map(|_| Rat::new(rng.random_range(-5i64..=5), rng.random_range(1i64..=3)))
            .collect();
        self.assemble(&order, &coords)
    }

    pub fn random_torus(&self, rng: &mut ChaCha8Rng) -> Vec<Rat> {
        (0..self.rank())
            .map(|_| {
                let mut num = 0;
                while num == 0 {
                    num = rng.random_range(-5i64..=5);
                }
                Rat::new(num, rng.random_range(1i64..=4))
            })
            .collect()
    }
}

/// `g = L·D·U` with `L` lower and `U` upper unitriangular and `D` diagonal.
pub fn ldu<F: Field>(g: &Matrix<F>) -> Result<(Matrix<F>, Matrix<F>, Matrix<F>), ChevalleyError> {
    let n = g.rows();
    let mut a = g.clone();
    let mut l = Matrix::identity(n);
    for k in 0..n {
        let pivot = a[(k, k)].clone();
        let inv = pivot.inv().ok_or(ChevalleyError::NotInBigCell(k + 1))?;
        for i in k + 1..n {
            let f = a[(i, k)].clone() * inv.clone();
            if f.is_zero() {
                continue;
            }
            for j in k..n {
                let v = a[(i, j)].clone() - f.clone() * a[(k, j)].clone();
                a[(i, j)] = v;
            }
            l[(i, k)] = f;
        }
    }
    let diag: Vec<F> = (0..n).map(|i| a[(i, i)].clone()).collect();
    let mut u = a;
    for (i, di) in diag.iter().enumerate() {
        let inv = di.inv().expect("nonzero pivot");
        for j in i..n {
            let v = u[(i, j)].clone() * inv.clone();
            u[(i, j)] = v;
        }
    }
    Ok((l, Matrix::diagonal(&diag), u))
}
