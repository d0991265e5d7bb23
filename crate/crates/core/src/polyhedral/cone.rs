use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

use super::dd::{polar_generators, Generators};
use super::hilbert::HilbertBasis;
use super::{PolyhedralError, MAX_DIM, MAX_RAYS};
use crate::lattice::{
    add_vec, dot, is_zero_vec, primitive, smith_normal_form, IntMatrix, IntVector,
};

/// A strongly convex rational polyhedral cone in `N = ℤ^dim`.
#[derive(Clone)]
pub struct Cone {
    dim: usize,
    rays: Vec<IntVector>,
    dual: Generators,
    faces: Vec<Vec<usize>>,
    hilbert: OnceLock<Result<HilbertBasis, PolyhedralError>>,
}

impl PartialEq for Cone {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.rays == other.rays
    }
}

impl Eq for Cone {}

impl PartialOrd for Cone {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cone {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.dim, self.rays.len(), &self.rays).cmp(&(other.dim, other.rays.len(), &other.rays))
    }
}

impl fmt::Debug for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cone{:?}", self.rays)
    }
}

impl fmt::Display for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rays.is_empty() {
            return write!(f, "0");
        }
        write!(f, "cone(")?;
        for (i, r) in self.rays.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "(")?;
            for (j, x) in r.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, ")")?;
        }
        write!(f, ")")
    }
}

/// Extreme rays and dual generators of the cone spanned by `gens`.
fn geometry(
    dim: usize,
    gens: &[IntVector],
) -> Result<(Vec<IntVector>, Generators), PolyhedralError> {
    if dim == 0 || dim > MAX_DIM {
        return Err(PolyhedralError::Unsupported(format!(
            "lattice rank {dim} outside 1..={MAX_DIM}"
        )));
    }
    let mut cleaned: Vec<IntVector> = Vec::new();
    for g in gens {
        if g.len() != dim {
            return Err(PolyhedralError::DimensionMismatch {
                expected: dim,
                got: g.len(),
            });
        }
        if !is_zero_vec(g) {
            let p = primitive(g);
            if !cleaned.contains(&p) {
                cleaned.push(p);
            }
        }
    }
    if cleaned.len() > MAX_RAYS {
        return Err(PolyhedralError::Unsupported(format!(
            "{} generators exceed the cap of {MAX_RAYS}",
            cleaned.len()
        )));
    }
    let dual = polar_generators(dim, &cleaned);
    if dual.rank(dim) < dim {
        return Err(PolyhedralError::NotStronglyConvex);
    }
    let back = polar_generators(dim, &dual.all());
    debug_assert!(back.lineality.is_empty());
    Ok((back.rays, dual))
}

fn face_sets(rays: &[IntVector], dual: &Generators) -> Vec<Vec<usize>> {
    let all: BTreeSet<usize> = (0..rays.len()).collect();
    let mut faces: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    faces.insert(all);
    let facets: Vec<BTreeSet<usize>> = dual
        .rays
        .iter()
        .map(|g| (0..rays.len()).filter(|&j| dot(g, &rays[j]) == 0).collect())
        .collect();
    loop {
        let mut added = false;
        let snapshot: Vec<BTreeSet<usize>> = faces.iter().cloned().collect();
        for f in &snapshot {
            for z in &facets {
                let meet: BTreeSet<usize> = f.intersection(z).copied().collect();
                if faces.insert(meet) {
                    added = true;
                }
            }
        }
        if !added {
            break;
        }
    }
    let mut out: Vec<Vec<usize>> = faces.into_iter().map(|f| f.into_iter().collect()).collect();
    out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    out
}

impl Cone {
    /// Cone spanned by `generators` (zero vectors and non-extreme generators
    /// are dropped). Fails for cones containing a line.
    pub fn new(dim: usize, generators: &[IntVector]) -> Result<Cone, PolyhedralError> {
        let cone = Cone::new_lazy(dim, generators)?;
        if let Err(e) = cone.hilbert_basis() {
            return Err(e.clone());
        }
        Ok(cone)
    }

    /// As [`Cone::new`], deferring the Hilbert basis until first use.
    pub(crate) fn new_lazy(dim: usize, generators: &[IntVector]) -> Result<Cone, PolyhedralError> {
        let (rays, dual) = geometry(dim, generators)?;
        let faces = face_sets(&rays, &dual);
        Ok(Cone {
            dim,
            rays,
            dual,
            faces,
            hilbert: OnceLock::new(),
        })
    }

    pub fn zero(dim: usize) -> Result<Cone, PolyhedralError> {
        Cone::new(dim, &[])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Primitive extreme ray generators, sorted.
    pub fn rays(&self) -> &[IntVector] {
        &self.rays
    }

    pub fn is_zero(&self) -> bool {
        self.rays.is_empty()
    }

    /// Dimension of the linear span.
    pub fn cone_dim(&self) -> usize {
        if self.rays.is_empty() {
            0
        } else {
            IntMatrix::from_rows(&self.rays, self.dim).rank()
        }
    }

    pub fn is_simplicial(&self) -> bool {
        self.cone_dim() == self.rays.len()
    }

    /// Index of the sublattice spanned by the rays inside its saturation.
    pub fn lattice_index(&self) -> i64 {
        if self.rays.is_empty() {
            return 1;
        }
        let snf = smith_normal_form(&IntMatrix::from_rows(&self.rays, self.dim));
        snf.diagonal().iter().filter(|&&x| x != 0).map(|x| x.abs()).product()
    }

    /// Simplicial with rays extending to a basis of `N`.
    pub fn is_smooth(&self) -> bool {
        self.is_simplicial() && self.lattice_index() == 1
    }

    /// Generators of `σ∨`: the extreme rays (facet normals of `σ`) and a
    /// lattice basis of `σ⊥`.
    pub fn dual(&self) -> &Generators {
        &self.dual
    }

    /// Dual cone generators as one list: rays, then `±` each lineality vector.
    pub fn dual_generators(&self) -> Vec<IntVector> {
        self.dual.all()
    }

    pub fn facet_normals(&self) -> &[IntVector] {
        &self.dual.rays
    }

    pub fn hilbert_basis(&self) -> Result<&HilbertBasis, &PolyhedralError> {
        self.hilbert
            .get_or_init(|| HilbertBasis::compute(self.dim, &self.rays))
            .as_ref()
    }

    /// Hilbert basis elements; panics only if the basis was refused as too
    /// large, which `Cone::new` already rules out.
    pub fn hilbert(&self) -> &HilbertBasis {
        self.hilbert_basis().expect("Hilbert basis computed at construction")
    }

    pub fn monoid_decompose(&self, m: &[i64]) -> Result<Vec<u64>, PolyhedralError> {
        self.hilbert()
            .decompose(m)
            .ok_or(PolyhedralError::NotInMonoid)
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        v.len() == self.dim
            && self.dual.rays.iter().all(|g| dot(g, v) >= 0)
            && self.dual.lineality.iter().all(|l| dot(l, v) == 0)
    }

    pub fn in_relative_interior(&self, v: &[i64]) -> bool {
        self.contains(v) && self.dual.rays.iter().all(|g| dot(g, v) > 0)
    }

    /// `m` pairs strictly positively with every ray.
    pub fn in_relative_interior_dual(&self, m: &[i64]) -> bool {
        m.len() == self.dim && self.rays.iter().all(|r| dot(m, r) > 0)
    }

    /// `m ∈ σ∨`.
    pub fn dual_contains(&self, m: &[i64]) -> bool {
        m.len() == self.dim && self.rays.iter().all(|r| dot(m, r) >= 0)
    }

    /// Sum of the ray generators.
    pub fn interior_cocharacter(&self) -> Result<IntVector, PolyhedralError> {
        if self.rays.is_empty() {
            return Err(PolyhedralError::ZeroCone);
        }
        Ok(self
            .rays
            .iter()
            .fold(vec![0; self.dim], |acc, r| add_vec(&acc, r)))
    }

    /// Faces as sorted index sets into `rays()`, smallest first.
    pub fn face_indices(&self) -> &[Vec<usize>] {
        &self.faces
    }

    pub fn faces(&self) -> Vec<Cone> {
        self.faces
            .iter()
            .map(|f| self.sub_cone(f))
            .collect()
    }

    fn sub_cone(&self, idx: &[usize]) -> Cone {
        let gens: Vec<IntVector> = idx.iter().map(|&i| self.rays[i].clone()).collect();
        Cone::new_lazy(self.dim, &gens).expect("face of a strongly convex cone")
    }

    /// Ray indices of `tau` inside `self` if `tau` is a face.
    fn face_index_of(&self, tau_rays: &[IntVector]) -> Option<Vec<usize>> {
        let mut idx = Vec::with_capacity(tau_rays.len());
        for r in tau_rays {
            idx.push(self.rays.iter().position(|s| s == r)?);
        }
        idx.sort_unstable();
        self.faces.iter().any(|f| *f == idx).then_some(idx)
    }

    /// If `tau` is a face of `self`, a localization element `u ∈ σ∨ ∩ M` with
    /// `τ = σ ∩ u⊥`.
    pub fn face_witness(&self, tau: &Cone) -> Option<IntVector> {
        if tau.dim != self.dim {
            return None;
        }
        let idx = self.face_index_of(&tau.rays)?;
        let mut u = vec![0; self.dim];
        for g in &self.dual.rays {
            if idx.iter().all(|&i| dot(g, &self.rays[i]) == 0) {
                u = add_vec(&u, g);
            }
        }
        Some(u)
    }

    pub fn is_face(&self, tau: &Cone) -> bool {
        self.face_witness(tau).is_some()
    }

    /// Rays of `self ∩ other`.
    pub fn intersection_rays(&self, other: &Cone) -> Vec<IntVector> {
        let mut ineqs = self.dual.all();
        ineqs.extend(other.dual.all());
        polar_generators(self.dim, &ineqs).rays
    }

    pub fn intersection(&self, other: &Cone) -> Cone {
        Cone::new_lazy(self.dim, &self.intersection_rays(other))
            .expect("intersection of strongly convex cones")
    }

    /// Whether `self ∩ other` is a face of both.
    pub fn meets_in_common_face(&self, other: &Cone) -> bool {
        let meet = self.intersection_rays(other);
        self.face_index_of(&meet).is_some() && other.face_index_of(&meet).is_some()
    }

    /// Image under an integer linear map, given by its matrix on `N`.
    pub fn transform(&self, map: &IntMatrix) -> Cone {
        let gens: Vec<IntVector> = self.rays.iter().map(|r| map.mul_vec(r)).collect();
        Cone::new_lazy(self.dim, &gens).expect("automorphism preserves strong convexity")
    }
}
