//! Exact rational cochain complexes: cohomology ranks, tensor products,
//! mapping cones and induced maps.

mod complex;
mod matrix;

pub use complex::{alternating_sum, convolve, standard, CochainComplex, ComplexMap, TensorBlock, TensorLayout};
pub use matrix::{rank_of_vectors, QMatrix};
pub(crate) use matrix::q_to_f64;
