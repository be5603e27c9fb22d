//! Exact computations with finite sites: presheaf toposes on finite categories,
//! the finiteness calculus (connected components, complemented subobjects,
//! decidability, local constancy, Kuratowski-finiteness), Galois objects and
//! coverings, fibre functors, and truncated profinite fundamental groups.
//!
//! Everything is desk-scale and exact: groups are multiplication tables,
//! presheaves are finite-valued, and every predicate is decided by exhaustive
//! or backtracking search under explicit caps. Results are deterministic for
//! fixed inputs and configuration.
//!
//! The `examples/` directory of this crate shows one runnable program per
//! major capability; the `topospi1` binary exposes the same operations as
//! subcommands over JSON files (see `docs/formats.md` at the repository root).

pub mod caps;
pub mod cli;
pub mod finiteness;
pub mod galois;
pub mod grp;
pub mod io;
pub mod pi1;
pub mod site;
pub mod verify;

pub use caps::Caps;
