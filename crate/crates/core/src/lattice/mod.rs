//! Exact arithmetic substrate: rationals, rational functions in ε, dense
//! matrices over exact fields, and integer lattice algorithms.

mod field;
mod intmat;
mod matrix;
mod rat;
mod ratfun;

pub use field::Field;
pub use intmat::{
    add_vec, dot, hermite_rows, integer_kernel, is_zero_vec, lattice_index, neg_vec, primitive,
    primitive_from_rats, scale_vec, smith_normal_form, sub_vec, vec_gcd, IntMatrix, IntVector,
    SmithForm,
};
pub use matrix::Matrix;
pub use rat::{ParseRatError, Rat};
pub use ratfun::{Poly, RatFun};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("rational function has a pole at ε = 0")]
    PoleAtZero,
    #[error("rational function has a pole at {0}")]
    PoleAt(Rat),
    #[error("zero denominator")]
    ZeroDenominator,
}
