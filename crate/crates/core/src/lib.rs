//! Lattice quantizers built by gluing.
//!
//! The crate constructs lattices as unions of cosets `⋃_{g∈Γ}(L+g)` of a
//! product lattice `L`, enumerates every admissible glue group `Γ`, and
//! evaluates the resulting quantizers:
//!
//! * [`lattice`] and [`catalog`]: generator/Gram matrices, duals, products,
//!   and the built-in `Zn`, `Dn`, `E6`, `D6` and glued 12-dimensional
//!   lattices.
//! * [`cvp`]: exact closest-point search and bounded-radius enumeration.
//! * [`glue`]: exact coset arithmetic, subgroup enumeration, symmetry
//!   reduction and generator synthesis through the Hermite normal form.
//! * [`geometry`]: relevant vectors (facets), kissing number, packing
//!   density, thickness, holes and coset shells.
//! * [`nsm`]: seeded Monte Carlo estimates of the normalized second moment
//!   and error covariance, and exact product formulas.
//!
//! ```
//! use lattice_glue::{catalog, geometry};
//!
//! let e6 = catalog::e6();
//! assert_eq!(geometry::relevant_vectors(&e6).unwrap().len(), 72);
//! ```

pub mod catalog;
pub mod cli;
pub mod cvp;
pub mod error;
pub mod geometry;
pub mod glue;
pub mod hnf;
pub mod io;
pub mod lattice;
pub mod matrix;
pub mod nsm;
pub mod reduce;
pub mod report;
pub mod rng;

pub use error::{Error, Result};
pub use lattice::{make_lattice, Lattice};
pub use matrix::Matrix;
