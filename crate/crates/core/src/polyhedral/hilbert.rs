//! Hilbert bases of `σ∨ ∩ M`.
//!
//! The lineality space `σ⊥ ∩ M` is split off as a direct summand using the
//! Smith form of the ray matrix. The remaining pointed cone is triangulated
//! and every simplicial piece contributes the lattice points of its half-open
//! fundamental parallelepiped; the union is then reduced to the minimal
//! generating set.

use super::dd::polar_generators;
use super::PolyhedralError;
use crate::lattice::{
    dot, hermite_rows, integer_kernel, is_zero_vec, primitive_from_rats, smith_normal_form,
    sub_vec, IntMatrix, IntVector, Rat,
};

/// Parallelepipeds with more lattice points than this are refused.
pub const MAX_PARALLELEPIPED_VOLUME: i64 = 100_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertBasis {
    /// Minimal generators: pointed part first (sorted), then `+ℓ, −ℓ` for
    /// each lineality basis vector `ℓ`.
    elements: Vec<IntVector>,
    pointed_count: usize,
    lineality: Vec<IntVector>,
    /// First `d` rows of `V⁻¹`; sends `M` onto the pointed quotient.
    quotient: IntMatrix,
    /// Pointed generators in quotient coordinates, aligned with `elements`.
    pointed: Vec<IntVector>,
    /// Inequalities of the pointed quotient cone.
    inequalities: Vec<IntVector>,
}

impl HilbertBasis {
    pub(crate) fn compute(dim: usize, rays: &[IntVector]) -> Result<Self, PolyhedralError> {
        let (d, v) = if rays.is_empty() {
            (0, IntMatrix::identity(dim))
        } else {
            let r = IntMatrix::from_rows(rays, dim);
            let snf = smith_normal_form(&r);
            (snf.rank(), snf.v)
        };
        let v_inv = v
            .to_rat()
            .inverse()
            .expect("unimodular matrix is invertible");
        let quotient = IntMatrix::from_rows(
            &(0..d)
                .map(|i| v_inv.row(i).iter().map(|x| x.to_i64().expect("integral")).collect())
                .collect::<Vec<_>>(),
            dim,
        );
        let lineality = hermite_rows(&(d..dim).map(|j| v.col(j)).collect::<Vec<_>>(), dim);
        let inequalities: Vec<IntVector> = rays
            .iter()
            .map(|r| (0..d).map(|j| dot(r, &v.col(j))).collect())
            .collect();

        let mut pointed = if d == 0 {
            Vec::new()
        } else {
            pointed_hilbert_basis(d, &inequalities)?
        };
        let lift = |p: &IntVector| -> IntVector {
            (0..dim)
                .map(|i| (0..d).map(|j| v[(i, j)] * p[j]).sum())
                .collect()
        };
        let mut paired: Vec<(IntVector, IntVector)> =
            pointed.drain(..).map(|p| (lift(&p), p)).collect();
        paired.sort();
        let pointed_count = paired.len();
        let mut elements: Vec<IntVector> = paired.iter().map(|(m, _)| m.clone()).collect();
        let pointed: Vec<IntVector> = paired.into_iter().map(|(_, p)| p).collect();
        for l in &lineality {
            elements.push(l.clone());
            elements.push(l.iter().map(|x| -x).collect());
        }
        Ok(HilbertBasis {
            elements,
            pointed_count,
            lineality,
            quotient,
            pointed,
            inequalities,
        })
    }

    pub fn elements(&self) -> &[IntVector] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Basis of `σ⊥ ∩ M`.
    pub fn lineality(&self) -> &[IntVector] {
        &self.lineality
    }

    /// Number of leading elements that are not `±` lineality vectors.
    pub fn pointed_count(&self) -> usize {
        self.pointed_count
    }

    /// Nonnegative coefficients over `elements()` summing to `m`, or `None`
    /// when `m ∉ σ∨ ∩ M`.
    pub fn decompose(&self, m: &[i64]) -> Option<Vec<u64>> {
        let dim = self.quotient.cols();
        assert_eq!(m.len(), dim, "vector has wrong dimension");
        let mut a = self.quotient.mul_vec(m);
        if self.inequalities.iter().any(|r| dot(r, &a) < 0) {
            return None;
        }
        let mut coeffs = vec![0u64; self.elements.len()];
        // Greedy peeling terminates: each step lowers the positive grading
        // given by the sum of the inequalities.
        while !is_zero_vec(&a) {
            let k = self
                .pointed
                .iter()
                .position(|p| {
                    let rest = sub_vec(&a, p);
                    self.inequalities.iter().all(|r| dot(r, &rest) >= 0)
                })
                .expect("nonzero point of the cone has a Hilbert summand");
            a = sub_vec(&a, &self.pointed[k]);
            coeffs[k] += 1;
        }
        let mut rest = m.to_vec();
        for (k, c) in coeffs.iter().enumerate().take(self.pointed_count) {
            for (x, y) in rest.iter_mut().zip(&self.elements[k]) {
                *x -= *c as i64 * y;
            }
        }
        if !self.lineality.is_empty() {
            let basis = IntMatrix::from_rows(&self.lineality, dim).transpose().to_rat();
            let target: Vec<Rat> = rest.iter().map(|&x| Rat::from_int(x)).collect();
            let sol = basis.solve(&target).expect("remainder lies in σ⊥");
            for (j, c) in sol.iter().enumerate() {
                let c = c.to_i64().expect("lineality coordinates are integral");
                let slot = self.pointed_count + 2 * j + usize::from(c < 0);
                coeffs[slot] = c.unsigned_abs();
            }
        } else {
            debug_assert!(is_zero_vec(&rest));
        }
        Some(coeffs)
    }
}

/// Hilbert basis of the full-dimensional pointed cone `{a : r·a ≥ 0}` in `ℤ^d`.
fn pointed_hilbert_basis(
    d: usize,
    inequalities: &[IntVector],
) -> Result<Vec<IntVector>, PolyhedralError> {
    let gens = polar_generators(d, inequalities);
    debug_assert!(gens.lineality.is_empty());
    let ext = gens.rays;
    let ineqs: Vec<IntVector> = polar_generators(d, &ext).rays;
    let mut candidates: Vec<IntVector> = ext.clone();
    for simplex in triangulate(&ext) {
        let cols: Vec<IntVector> = simplex.iter().map(|&i| ext[i].clone()).collect();
        for p in parallelepiped_points(&cols)? {
            if !is_zero_vec(&p) && !candidates.contains(&p) {
                candidates.push(p);
            }
        }
    }
    let in_cone = |x: &[i64]| ineqs.iter().all(|r| dot(r, x) >= 0);
    let reducible = |x: &IntVector, all: &[IntVector]| {
        all.iter().any(|y| {
            if y == x {
                return false;
            }
            let rest = sub_vec(x, y);
            !is_zero_vec(&rest) && in_cone(&rest)
        })
    };
    let mut basis: Vec<IntVector> = candidates
        .iter()
        .filter(|x| !reducible(x, &candidates))
        .cloned()
        .collect();
    basis.sort();
    Ok(basis)
}

/// Pulling triangulation of the full-dimensional pointed cone spanned by
/// `rays`. Returns index sets of size `d`.
pub(crate) fn triangulate(rays: &[IntVector]) -> Vec<Vec<usize>> {
    let k = rays[0].len();
    if rays.len() == k {
        return vec![(0..k).collect()];
    }
    let normals = polar_generators(k, rays).rays;
    let mut out = Vec::new();
    for h in normals {
        if dot(&h, &rays[0]) == 0 {
            continue;
        }
        let face: Vec<usize> = (0..rays.len()).filter(|&j| dot(&h, &rays[j]) == 0).collect();
        let basis = integer_kernel(&IntMatrix::from_rows(&[h.clone()], k));
        let b = IntMatrix::from_rows(&basis, k).transpose().to_rat();
        let sub: Vec<IntVector> = face
            .iter()
            .map(|&j| {
                let target: Vec<Rat> = rays[j].iter().map(|&x| Rat::from_int(x)).collect();
                primitive_from_rats(&b.solve(&target).expect("ray lies in facet hyperplane"))
            })
            .collect();
        for s in triangulate(&sub) {
            let mut simplex = vec![0];
            simplex.extend(s.iter().map(|&t| face[t]));
            out.push(simplex);
        }
    }
    out
}

/// Lattice points of the half-open parallelepiped `{G λ : 0 ≤ λ < 1}` for
/// linearly independent columns `G`.
fn parallelepiped_points(cols: &[IntVector]) -> Result<Vec<IntVector>, PolyhedralError> {
    let d = cols.len();
    let g = IntMatrix::from_rows(cols, d).transpose();
    let snf = smith_normal_form(&g);
    let diag = snf.diagonal();
    let volume: i64 = diag.iter().product::<i64>().abs();
    if volume > MAX_PARALLELEPIPED_VOLUME {
        return Err(PolyhedralError::TooLarge(format!(
            "simplicial cone of index {volume}"
        )));
    }
    let u_inv = snf.u.to_rat().inverse().expect("unimodular");
    let g_inv = g.to_rat().inverse().expect("independent columns");
    let gr = g.to_rat();
    let mut out = Vec::with_capacity(volume as usize);
    let mut k = vec![0i64; d];
    loop {
        let kr: Vec<Rat> = k.iter().map(|&x| Rat::from_int(x)).collect();
        let p = u_inv.mul_vec(&kr);
        let lam = g_inv.mul_vec(&p);
        let fl: Vec<Rat> = lam.iter().map(|x| Rat::from_big(x.floor(), 1.into())).collect();
        let shift = gr.mul_vec(&fl);
        let q: IntVector = p
            .iter()
            .zip(&shift)
            .map(|(a, b)| (a - b).to_i64().expect("integral point"))
            .collect();
        out.push(q);
        // odometer over the Smith group
        let mut i = 0;
        loop {
            if i == d {
                return Ok(out);
            }
            k[i] += 1;
            if k[i] < diag[i].abs() {
                break;
            }
            k[i] = 0;
            i += 1;
        }
    }
}

