//! Exact integer and rational linear algebra.

mod exterior;
mod hermite;
mod lattice;
mod matrix;
mod rational;
mod smith;

pub use exterior::{exterior_power, exterior_trace_poly, wedge_basis};
pub use hermite::{hnf, HermiteForm};
pub use lattice::{
    complement_in_lattice, fixed_sublattice, kernel_lattice, lattice_index, solve_integer, LatticeBasis,
};
pub use matrix::{
    denominator_lcm, dot, frac, int_vec, rat, rat_vec, to_integer_matrix, to_integer_vector,
    to_rational_vector, IntegerMatrix, IntegerVector, Matrix, RationalMatrix, RationalVector,
};
pub use rational::{rank, rref, solve_rational, AffineSolution};
pub use smith::{snf, SmithDecomposition};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("sublattice is not contained in the kernel of the map")]
    NotInKernel,
    #[error("sublattice is not saturated")]
    NotSaturated,
    #[error("no generators given")]
    Empty,
}
