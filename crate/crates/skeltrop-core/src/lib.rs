//! Exact combinatorial calculus for skeletons of strictly semistable pairs.
//!
//! Everything here is computed in exact rational arithmetic: integral affine
//! polyhedra and maps, weak tropical complexes (cells of shape
//! `Δ(r,π) × R₊ˢ` with α-numbers), the slope calculus and its balancing
//! checks, lattice-index multiplicity sums over fibers of cellwise affine
//! maps, faithfulness and section certificates, and the product-of-two-
//! Tate-curves example family with its intersection engine.
//!
//! The crate is `no_std` (it allocates, but performs no IO); file formats
//! and the command-line front end live in the companion `skeltrop` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod balance;
pub mod instances;
pub mod lattice;
pub mod linalg;
pub mod mumford;
pub mod polyhedron;
pub mod rat;
pub mod skeleton;
pub mod tropmap;

mod fm;

pub use lattice::{Index, Lattice};
pub use linalg::{AffineSolution, IntMatrix, SmithDecomposition};
pub use polyhedron::{AffineMap, Polyhedron, VRep};
pub use rat::Rat;
pub use skeleton::WeakTropicalComplex;
