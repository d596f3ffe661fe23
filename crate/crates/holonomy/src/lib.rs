//! A numerical laboratory for parallel transport over path spaces.
//!
//! The crate implements, at desk scale, the differential-geometric machinery
//! of surface-ordered transport: crossed modules of matrix Lie groups, path
//! holonomy and horizontal lifts, a connection form on the space of
//! horizontal paths, bi-holonomy across parametrized surfaces, surface
//! holonomy with values in the second group of a crossed module, and a
//! strict double category of group-decorated squares that mirrors the
//! continuum structure combinatorially.
//!
//! Start with [`cross::CrossedModule`] for the algebraic scaffolding,
//! [`transport`] for path-level operations, [`surface`] for the
//! two-dimensional transports and the theorems connecting them, and
//! [`scenario`] for the TOML-driven task runner behind the `holonomy`
//! binary. The `examples/` directory walks through every major capability.

pub mod cross;
pub mod error;
pub mod fields;
pub mod lie;
pub mod omega;
pub mod path;
pub mod plaquette;
pub mod quad;
pub mod scenario;
pub mod surface;
pub mod transport;
