//! Exact computations on compact flat manifolds `R^n / π`.
//!
//! A [`crystal::CrystalGroup`] describes a Bieberbach group on the lattice
//! `Z^n`. From it the crate computes first homology, Betti numbers and center
//! rank ([`topology`]), builds a block affine representation exhibiting a
//! torus action of rank `rank H_1` ([`calabi`]), and certifies the binomial
//! Betti bounds for that action ([`hcc`]).

pub mod calabi;
pub mod catalog;
pub mod crystal;
pub mod hcc;
pub mod linalg;
pub mod report;
pub mod topology;

mod serde_util;
