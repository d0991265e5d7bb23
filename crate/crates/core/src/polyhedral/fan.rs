use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::cone::Cone;
use super::PolyhedralError;
use crate::lattice::{dot, IntVector};
use crate::root_datum::{RootDatum, WeylGroup};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeSpec {
    pub rays: Vec<IntVector>,
}

/// JSON shape of a fan: `{"cones": [{"rays": [[...], ...]}, ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanSpec {
    pub cones: Vec<ConeSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    NotStronglyConvex,
    MissingZeroCone,
    NotFaceClosed,
    IntersectionNotAFace,
}

/// Machine-readable reason a collection of cones is not a fan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanViolation {
    pub kind: ViolationKind,
    /// Ray lists of the offending cones.
    pub cones: Vec<Vec<IntVector>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub intersection: Option<Vec<IntVector>>,
}

impl fmt::Display for FanViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ViolationKind::NotStronglyConvex => write!(f, "cone {:?} contains a line", self.cones[0]),
            ViolationKind::MissingZeroCone => write!(f, "zero cone missing"),
            ViolationKind::NotFaceClosed => {
                write!(f, "face {:?} of {:?} missing", self.cones[1], self.cones[0])
            }
            ViolationKind::IntersectionNotAFace => write!(
                f,
                "cones {:?} and {:?} meet in {:?}, which is not a face of both",
                self.cones[0],
                self.cones[1],
                self.intersection.as_deref().unwrap_or(&[])
            ),
        }
    }
}

/// A finite set of cones in `N`, closed under faces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fan {
    dim: usize,
    cones: Vec<Cone>,
}

/// Localization data for a face `τ ⊂ σ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GluingDatum {
    pub tau: Cone,
    pub sigma: Cone,
    /// `u ∈ σ∨ ∩ M` with `τ = σ ∩ u⊥`.
    pub u: IntVector,
}

impl GluingDatum {
    pub fn new(tau: &Cone, sigma: &Cone) -> Option<GluingDatum> {
        let u = sigma.face_witness(tau)?;
        Some(GluingDatum {
            tau: tau.clone(),
            sigma: sigma.clone(),
            u,
        })
    }

    /// `⟨u, v⟩ = 0` on rays of `τ`, `> 0` on the other rays of `σ`.
    pub fn is_consistent(&self) -> bool {
        self.sigma.rays().iter().all(|r| {
            let p = dot(&self.u, r);
            if self.tau.rays().contains(r) {
                p == 0
            } else {
                p > 0
            }
        })
    }

    /// Hilbert basis of `σ∨ ∩ M` written in the Hilbert basis of the larger
    /// monoid `τ∨ ∩ M`; row `k` expresses element `k`.
    pub fn inclusion(&self) -> Vec<Vec<u64>> {
        self.sigma
            .hilbert()
            .elements()
            .iter()
            .map(|m| {
                self.tau
                    .monoid_decompose(m)
                    .expect("σ∨ ∩ M lies in τ∨ ∩ M")
            })
            .collect()
    }
}

impl Fan {
    /// Closes `cones` under faces. Performs no validity check.
    pub fn from_cones(dim: usize, cones: Vec<Cone>) -> Fan {
        let mut set: BTreeSet<Cone> = BTreeSet::new();
        set.insert(Cone::new_lazy(dim, &[]).expect("zero cone"));
        for c in cones {
            assert_eq!(c.dim(), dim, "cone in wrong lattice");
            for f in c.faces() {
                set.insert(f);
            }
            set.insert(c);
        }
        Fan {
            dim,
            cones: set.into_iter().collect(),
        }
    }

    /// Build from JSON input, closing under faces and validating.
    pub fn from_spec(spec: &FanSpec, dim: usize) -> Result<Fan, PolyhedralError> {
        let mut cones = Vec::new();
        for c in &spec.cones {
            match Cone::new(dim, &c.rays) {
                Ok(cone) => cones.push(cone),
                Err(PolyhedralError::NotStronglyConvex) => {
                    return Err(PolyhedralError::InvalidFan(FanViolation {
                        kind: ViolationKind::NotStronglyConvex,
                        cones: vec![c.rays.clone()],
                        intersection: None,
                    }))
                }
                Err(e) => return Err(e),
            }
        }
        let fan = Fan::from_cones(dim, cones);
        fan.validate().map_err(PolyhedralError::InvalidFan)?;
        Ok(fan)
    }

    pub fn to_spec(&self) -> FanSpec {
        FanSpec {
            cones: self
                .cones
                .iter()
                .map(|c| ConeSpec {
                    rays: c.rays().to_vec(),
                })
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// All cones, sorted by number of rays then lexicographically.
    pub fn cones(&self) -> &[Cone] {
        &self.cones
    }

    pub fn index_of(&self, cone: &Cone) -> Option<usize> {
        self.cones.binary_search(cone).ok()
    }

    /// Distinct ray generators of the fan, sorted.
    pub fn rays(&self) -> Vec<IntVector> {
        let set: BTreeSet<IntVector> = self
            .cones
            .iter()
            .flat_map(|c| c.rays().iter().cloned())
            .collect();
        set.into_iter().collect()
    }

    pub fn validate(&self) -> Result<(), FanViolation> {
        if !self.cones.iter().any(Cone::is_zero) {
            return Err(FanViolation {
                kind: ViolationKind::MissingZeroCone,
                cones: vec![],
                intersection: None,
            });
        }
        for c in &self.cones {
            for f in c.faces() {
                if self.index_of(&f).is_none() {
                    return Err(FanViolation {
                        kind: ViolationKind::NotFaceClosed,
                        cones: vec![c.rays().to_vec(), f.rays().to_vec()],
                        intersection: None,
                    });
                }
            }
        }
        for (i, a) in self.cones.iter().enumerate() {
            for b in &self.cones[i + 1..] {
                if !a.meets_in_common_face(b) {
                    return Err(FanViolation {
                        kind: ViolationKind::IntersectionNotAFace,
                        cones: vec![a.rays().to_vec(), b.rays().to_vec()],
                        intersection: Some(a.intersection_rays(b)),
                    });
                }
            }
        }
        Ok(())
    }

    /// Pairs `(i, j)` with cone `i` a face of cone `j`, including `i = j`.
    pub fn face_relation(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (j, s) in self.cones.iter().enumerate() {
            for (i, t) in self.cones.iter().enumerate() {
                if s.is_face(t) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Gluing data for every pair of distinct cones `τ ⊊ σ` in the fan.
    pub fn gluing_data(&self) -> Vec<GluingDatum> {
        let mut out = Vec::new();
        for (i, j) in self.face_relation() {
            if i != j {
                out.push(
                    GluingDatum::new(&self.cones[i], &self.cones[j]).expect("face relation"),
                );
            }
        }
        out
    }

    /// Cones not properly contained in another cone of the fan.
    pub fn maximal_cones(&self) -> Vec<&Cone> {
        self.cones
            .iter()
            .filter(|c| {
                !self.cones.iter().any(|d| {
                    d.rays().len() > c.rays().len()
                        && c.rays().iter().all(|r| d.rays().contains(r))
                })
            })
            .collect()
    }

    /// Every ray generator pairs nonpositively with every simple root.
    pub fn supported_in_chamber(&self, rd: &RootDatum) -> bool {
        self.dim == rd.rank()
            && self
                .rays()
                .iter()
                .all(|r| rd.in_negative_chamber(r).unwrap_or(false))
    }

    pub fn is_smooth(&self) -> bool {
        self.cones.iter().all(Cone::is_smooth)
    }

    /// `W·Σ`, validated as a fan.
    pub fn weyl_orbit(&self, w: &WeylGroup) -> Result<Fan, PolyhedralError> {
        let mut set: BTreeSet<Cone> = BTreeSet::new();
        for el in w.elements() {
            for c in &self.cones {
                set.insert(c.transform(&el.on_n));
            }
        }
        let fan = Fan::from_cones(self.dim, set.into_iter().collect());
        fan.validate().map_err(PolyhedralError::InvalidFan)?;
        Ok(fan)
    }

    /// Wall criterion: the fan is nonempty in top dimension, every maximal
    /// cone is full-dimensional, and every codimension-one cone lies in
    /// exactly two maximal cones. Assumes the fan is valid.
    pub fn is_complete(&self) -> bool {
        let maximal = self.maximal_cones();
        if maximal.iter().any(|c| c.cone_dim() != self.dim) {
            return false;
        }
        if maximal.is_empty() || maximal.iter().all(|c| c.is_zero()) {
            return false;
        }
        self.cones
            .iter()
            .filter(|c| c.cone_dim() + 1 == self.dim)
            .all(|wall| {
                maximal
                    .iter()
                    .filter(|m| wall.rays().iter().all(|r| m.rays().contains(r)))
                    .count()
                    == 2
            })
    }

    /// Whether `W·Σ` is complete.
    pub fn is_proper(&self, w: &WeylGroup) -> Result<bool, PolyhedralError> {
        Ok(self.weyl_orbit(w)?.is_complete())
    }
}
