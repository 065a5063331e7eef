//! Exact algebra for the algebraic index theorem of symplectic deformation
//! quantization: Moyal calculus, cyclic complexes, the boundary map to the
//! ground field, Chern-Weil theory on Lie algebras, and the formal Fedosov
//! recursion.

pub mod conventions;
pub mod lincomb;
pub mod scalars;
pub mod weyl;
pub mod chains;
pub mod sample;
pub mod brodzki;
pub mod fundamental;
pub mod linalg;
pub mod liecw;
pub mod fedosov;
pub mod harness;
