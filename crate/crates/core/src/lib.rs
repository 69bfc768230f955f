//! Knot Floer homology from grid diagrams, torsion-order bounds, and
//! unknotting-number derivations over F2.
//!
//! The crate has three layers:
//!
//! * diagram handling: PD codes with full-twist insertion and the Alexander
//!   polynomial ([`pd`]), and grid diagrams with the fully blocked chain
//!   complex whose homology reduces to the hat-flavor table ([`grid`]);
//! * table algebra: bigraded dimension tables with integrity checks
//!   ([`hfk`]) and certified brackets on the maximal torsion order obtained
//!   by optimizing over pairings ([`torsion`]);
//! * a forward-chaining fact store that turns torsion intervals into
//!   Gordian-distance and unknotting bounds with replayable proof traces
//!   ([`engine`]).
//!
//! Bundled reference tables and sample diagrams live in [`data`], guarded by
//! a checksum manifest.
//!
//! Grid homology is computed per Alexander block; blocks run in parallel
//! via rayon under the default `parallel` feature, with a single-threaded
//! fallback that produces bit-identical results
//! ([`grid::homology::tilde_homology_sequential`]).

pub mod data;
pub mod engine;
pub mod grid;
pub mod hfk;
pub mod pd;
pub mod poly;
pub mod torsion;

pub use grid::{parse_grid, GridDiagram};
pub use hfk::{parse_hfk, verify_table, HfkTable, VerifiedTable};
pub use pd::{parse_pd, PDCode};
pub use poly::LaurentPoly;
