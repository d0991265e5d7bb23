//! Brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use toroidal_core::lattice::{dot, IntVector, Matrix, Rat};
use toroidal_core::polyhedral::Fan;

pub fn box_points(dim: usize, b: i64) -> Vec<IntVector> {
    let mut out = vec![vec![]];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|p: IntVector| {
                (-b..=b).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Exact solution of `Σ x_j g_j = v` over `ℚ` for linearly independent `g_j`.
fn coefficients(gens: &[&IntVector], v: &[i64]) -> Option<Vec<Rat>> {
    let dim = v.len();
    let a = Matrix::from_fn(dim, gens.len(), |i, j| Rat::from_int(gens[j][i]));
    if a.rank() < gens.len() {
        return None;
    }
    let b: Vec<Rat> = v.iter().map(|&x| Rat::from_int(x)).collect();
    a.solve(&b)
}

/// Carathéodory: `v` is in the cone iff it is a nonnegative combination of
/// some linearly independent subset of the generators.
pub fn in_cone_oracle(gens: &[IntVector], v: &[i64]) -> bool {
    if v.iter().all(|&x| x == 0) {
        return true;
    }
    let dim = v.len();
    for k in 1..=dim.min(gens.len()) {
        for s in subsets(gens.len(), k) {
            let picked: Vec<&IntVector> = s.iter().map(|&j| &gens[j]).collect();
            if let Some(x) = coefficients(&picked, v) {
                if x.iter().all(|c| !c.is_negative()) {
                    return true;
                }
            }
        }
    }
    false
}

pub fn in_dual(gens: &[IntVector], m: &[i64]) -> bool {
    gens.iter().all(|g| dot(g, m) >= 0)
}

/// Determinant by cofactor expansion, exact in `i128`.
pub fn det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i128>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, &x)| x).collect())
                .collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * m[0][j] * det(&minor)
        })
        .sum()
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// `gcd` of the maximal minors of the ray matrix, or 0 if the rays are
/// dependent. Equals the index of the sublattice they span in its
/// saturation.
pub fn minor_gcd(rays: &[IntVector], dim: usize) -> i128 {
    let k = rays.len();
    subsets(dim, k).iter().fold(0, |g, cols| {
        let m: Vec<Vec<i128>> = rays
            .iter()
            .map(|r| cols.iter().map(|&c| r[c] as i128).collect())
            .collect();
        gcd(g, det(&m))
    })
}

/// Irreducible elements of the pointed monoid `σ∨ ∩ M`, by enumeration.
/// `dual_rays` must span a pointed cone.
pub fn irreducibles_oracle(gens: &[IntVector], dual_rays: &[IntVector], dim: usize) -> Vec<IntVector> {
    // irreducibles lie in the zonotope of the dual rays
    let b: i64 = (0..dim)
        .map(|i| dual_rays.iter().map(|r| r[i].abs()).sum::<i64>())
        .max()
        .unwrap_or(0);
    // summands of x lie below x for a strictly positive functional u
    let u: IntVector = (0..dim).map(|i| gens.iter().map(|g| g[i]).sum()).collect();
    let u = if dual_rays.iter().all(|r| dot(&u, r) > 0) {
        u
    } else {
        // σ is not full dimensional; no pointed dual to enumerate
        return Vec::new();
    };
    let mut cand: Vec<IntVector> = box_points(dim, b)
        .into_iter()
        .filter(|m| m.iter().any(|&x| x != 0) && in_dual(gens, m))
        .collect();
    cand.sort_by_key(|m| dot(&u, m));
    // x = y + z with y, z nonzero forces x − h ∈ σ∨ for an irreducible
    // h ≤ y, and h comes earlier in the u-order
    let mut out: Vec<IntVector> = Vec::new();
    for x in cand {
        let reducible = out.iter().any(|h| {
            dot(&u, h) < dot(&u, &x) && {
                let rest: IntVector = x.iter().zip(h).map(|(a, b)| a - b).collect();
                in_dual(gens, &rest)
            }
        });
        if !reducible {
            out.push(x);
        }
    }
    out.sort();
    out
}

/// Whether seeded random lattice points all lie in some maximal cone of
/// the fan, tested with the Carathéodory oracle on simplicial cones.
pub fn coverage_oracle(fan: &Fan, samples: usize, seed: u64) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let maximal: Vec<Vec<IntVector>> = fan.maximal_cones().iter().map(|c| c.rays().to_vec()).collect();
    let inverses: Vec<Option<Matrix<Rat>>> = maximal
        .iter()
        .map(|rays| {
            if rays.len() != fan.dim() {
                return None;
            }
            Matrix::from_fn(fan.dim(), fan.dim(), |i, j| Rat::from_int(rays[j][i])).inverse()
        })
        .collect();
    (0..samples).all(|_| {
        let p: IntVector = (0..fan.dim()).map(|_| rng.random_range(-1000..=1000)).collect();
        let pr: Vec<Rat> = p.iter().map(|&x| Rat::from_int(x)).collect();
        maximal.iter().zip(&inverses).any(|(rays, inv)| match inv {
            Some(inv) => inv.mul_vec(&pr).iter().all(|c| !c.is_negative()),
            None => in_cone_oracle(rays, &p),
        })
    })
}

/// Extreme rays of `σ∨` for a full-dimensional cone `σ`, as the oriented
/// normals of the hyperplanes through `dim − 1` generators that support `σ`.
pub fn dual_rays_oracle(gens: &[IntVector], dim: usize) -> Vec<IntVector> {
    let mut out: Vec<IntVector> = Vec::new();
    for s in subsets(gens.len(), dim - 1) {
        let normal: Vec<i128> = (0..dim)
            .map(|j| {
                let m: Vec<Vec<i128>> = s
                    .iter()
                    .map(|&r| (0..dim).filter(|&c| c != j).map(|c| gens[r][c] as i128).collect())
                    .collect();
                if j % 2 == 0 {
                    det(&m)
                } else {
                    -det(&m)
                }
            })
            .collect();
        if normal.iter().all(|&x| x == 0) {
            continue;
        }
        let pairing = |g: &IntVector| -> i128 { g.iter().zip(&normal).map(|(&a, &b)| a as i128 * b).sum() };
        let sign = if gens.iter().all(|g| pairing(g) >= 0) {
            1
        } else if gens.iter().all(|g| pairing(g) <= 0) {
            -1
        } else {
            continue;
        };
        let g = normal.iter().fold(0, |acc, &x| gcd(acc, x));
        let v: IntVector = normal.iter().map(|&x| (sign * x / g) as i64).collect();
        if !out.contains(&v) {
            out.push(v);
        }
    }
    out.sort();
    out
}
