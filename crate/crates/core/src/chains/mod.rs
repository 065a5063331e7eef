//! Hochschild and cyclic complexes over graded algebras, the Koszul and de
//! Rham models of the Weyl algebra, and the product operations on chains.

pub mod algebra;
pub mod complex;
pub mod koszul;
pub mod products;

pub use algebra::*;
pub use complex::*;
pub use koszul::*;
pub use products::*;
