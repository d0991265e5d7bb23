//! Rational polyhedral cones and fans in `N`, with duals in `M`.
//!
//! Both lattices are `ℤ^n` and the pairing is the dot product.

mod cone;
mod dd;
mod fan;
mod hilbert;

pub use cone::Cone;
pub use dd::{polar_generators, Generators};
pub use fan::{ConeSpec, Fan, FanSpec, FanViolation, GluingDatum, ViolationKind};
pub use hilbert::{HilbertBasis, MAX_PARALLELEPIPED_VOLUME};

/// Largest supported lattice rank.
pub const MAX_DIM: usize = 4;
/// Largest number of ray generators per cone.
pub const MAX_RAYS: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyhedralError {
    #[error("cone contains a line")]
    NotStronglyConvex,
    #[error("vector of length {got} in a lattice of rank {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("computation too large: {0}")]
    TooLarge(String),
    #[error("vector is not in the monoid σ∨ ∩ M")]
    NotInMonoid,
    #[error("the zero cone has no interior cocharacter")]
    ZeroCone,
    #[error("invalid fan: {0}")]
    InvalidFan(FanViolation),
}

/// Dual cone generators of `cone(generators)` without requiring strong
/// convexity: extreme rays followed by `±` a lattice basis of the lineality
/// space.
pub fn dual_cone(dim: usize, generators: &[crate::lattice::IntVector]) -> Vec<crate::lattice::IntVector> {
    polar_generators(dim, generators).all()
}
