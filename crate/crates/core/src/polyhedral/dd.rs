//! Generators of `{x : a·x ≥ 0 for every row a}` by the double description
//! method (the dual form of Fourier–Motzkin elimination), in exact integers.

use crate::lattice::{
    dot, integer_kernel, is_zero_vec, neg_vec, primitive, primitive_from_rats, IntMatrix,
    IntVector, Matrix, Rat,
};

/// A polyhedral cone presented by generators: nonnegative combinations of
/// `rays` plus arbitrary integer combinations of `lineality`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generators {
    pub rays: Vec<IntVector>,
    pub lineality: Vec<IntVector>,
}

impl Generators {
    /// Rays followed by `±` each lineality vector.
    pub fn all(&self) -> Vec<IntVector> {
        let mut out = self.rays.clone();
        for l in &self.lineality {
            out.push(l.clone());
            out.push(neg_vec(l));
        }
        out
    }

    pub fn rank(&self, dim: usize) -> usize {
        let all = self.all();
        if all.is_empty() {
            0
        } else {
            IntMatrix::from_rows(&all, dim).rank()
        }
    }
}

fn combine(s: i64, r: &[i64], t: i64, l: &[i64]) -> IntVector {
    let v: Vec<i128> = r
        .iter()
        .zip(l)
        .map(|(&x, &y)| s as i128 * x as i128 - t as i128 * y as i128)
        .collect();
    let g = v.iter().fold(0i128, |g, &x| num_integer::Integer::gcd(&g, &x)).max(1);
    v.iter()
        .map(|x| i64::try_from(x / g).expect("generator entry exceeds i64"))
        .collect()
}

/// Orthogonal projection onto the complement of `lin`, rescaled to a
/// primitive integer vector. Makes ray representatives canonical modulo
/// the lineality space.
fn project(v: &[i64], lin: &[IntVector]) -> IntVector {
    if lin.is_empty() {
        return primitive(v);
    }
    let n = v.len();
    let l = IntMatrix::from_rows(lin, n).to_rat();
    let lt = l.transpose();
    let gram = &l * &lt;
    let vr: Vec<Rat> = v.iter().map(|&x| Rat::from_int(x)).collect();
    let coeff = gram
        .inverse()
        .expect("lineality vectors are independent")
        .mul_vec(&l.mul_vec(&vr));
    let shift = lt.mul_vec(&coeff);
    let p: Vec<Rat> = vr.iter().zip(&shift).map(|(a, b)| a - b).collect();
    primitive_from_rats(&p)
}

fn matrix_rank(rows: &[&IntVector], dim: usize) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let owned: Vec<IntVector> = rows.iter().map(|r| (*r).clone()).collect();
    Matrix::<Rat>::from_rows(
        owned
            .iter()
            .map(|r| r.iter().map(|&x| Rat::from_int(x)).collect())
            .collect(),
    )
    .rank()
    .min(dim)
}

pub fn polar_generators(dim: usize, inequalities: &[IntVector]) -> Generators {
    let mut lin: Vec<IntVector> = (0..dim)
        .map(|i| (0..dim).map(|j| i64::from(i == j)).collect())
        .collect();
    let mut rays: Vec<IntVector> = Vec::new();
    let mut processed: Vec<IntVector> = Vec::new();

    for a in inequalities.iter().filter(|a| !is_zero_vec(a)) {
        assert_eq!(a.len(), dim, "inequality has wrong dimension");
        processed.push(a.clone());
        if let Some(k) = lin.iter().position(|l| dot(a, l) != 0) {
            let mut l0 = lin.remove(k);
            if dot(a, &l0) < 0 {
                l0 = neg_vec(&l0);
            }
            let s = dot(a, &l0);
            for l in lin.iter_mut() {
                let t = dot(a, l);
                if t != 0 {
                    *l = combine(s, l, t, &l0);
                }
            }
            for r in rays.iter_mut() {
                let t = dot(a, r);
                if t != 0 {
                    *r = combine(s, r, t, &l0);
                }
            }
            rays.push(primitive(&l0));
        } else {
            let vals: Vec<i64> = rays.iter().map(|r| dot(a, r)).collect();
            let mut next: Vec<IntVector> = Vec::new();
            for (r, &v) in rays.iter().zip(&vals) {
                if v >= 0 {
                    next.push(r.clone());
                }
            }
            for (p, &vp) in rays.iter().zip(&vals) {
                if vp <= 0 {
                    continue;
                }
                for (q, &vq) in rays.iter().zip(&vals) {
                    if vq >= 0 {
                        continue;
                    }
                    // a·(vp q − vq p) = 0
                    next.push(combine(vp, q, vq, p));
                }
            }
            rays = next;
        }
        // canonical representatives, then drop duplicates and non-extreme rays
        let target = matrix_rank(&processed.iter().collect::<Vec<_>>(), dim);
        let mut kept: Vec<IntVector> = Vec::new();
        for r in rays.iter().map(|r| project(r, &lin)) {
            if is_zero_vec(&r) || kept.contains(&r) {
                continue;
            }
            let active: Vec<&IntVector> = processed.iter().filter(|a| dot(a, &r) == 0).collect();
            if matrix_rank(&active, dim) + 1 == target {
                kept.push(r);
            }
        }
        rays = kept;
    }

    let lineality = if processed.is_empty() {
        lin
    } else {
        integer_kernel(&IntMatrix::from_rows(&processed, dim))
    };
    let mut rays: Vec<IntVector> = rays.iter().map(|r| project(r, &lineality)).collect();
    rays.sort();
    rays.dedup();
    Generators { rays, lineality }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orthant_is_self_dual() {
        let g = polar_generators(2, &[vec![1, 0], vec![0, 1]]);
        assert_eq!(g.rays, vec![vec![0, 1], vec![1, 0]]);
        assert!(g.lineality.is_empty());
    }

    #[test]
    fn skew_cone() {
        let g = polar_generators(2, &[vec![1, 0], vec![1, 2]]);
        assert_eq!(g.rays, vec![vec![0, 1], vec![2, -1]]);
    }

    #[test]
    fn half_plane() {
        let g = polar_generators(2, &[vec![-1, 0]]);
        assert_eq!(g.rays, vec![vec![-1, 0]]);
        assert_eq!(g.lineality, vec![vec![0, 1]]);
    }

    #[test]
    fn redundant_inequalities_are_dropped() {
        let g = polar_generators(2, &[vec![1, 0], vec![0, 1], vec![1, 1], vec![2, 1]]);
        assert_eq!(g.rays, vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn non_simplicial_3d() {
        // square cone over (±1, ±1, 1)
        let gens = vec![vec![1, 1, 1], vec![1, -1, 1], vec![-1, 1, 1], vec![-1, -1, 1]];
        let dual = polar_generators(3, &gens);
        assert_eq!(dual.rays.len(), 4);
        let back = polar_generators(3, &dual.all());
        let mut expect = gens.clone();
        expect.sort();
        assert_eq!(back.rays, expect);
    }

    #[test]
    fn line_gives_lineality() {
        let g = polar_generators(2, &[vec![1, 0], vec![-1, 0]]);
        assert!(g.rays.is_empty());
        assert_eq!(g.lineality, vec![vec![0, 1]]);
    }

    #[test]
    fn empty_system_is_whole_space() {
        let g = polar_generators(3, &[]);
        assert!(g.rays.is_empty());
        assert_eq!(g.lineality.len(), 3);
    }
}
