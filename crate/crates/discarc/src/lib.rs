//! Exact combinatorics of arcs on a disc whose boundary carries infinitely
//! many marked points accumulating at `n` distinguished points.
//!
//! Arcs between non-neighbouring marked points are the indecomposable objects
//! of the engine. The crate computes Hom/Ext dimensions between arcs
//! ([`homext`]), the distinguished triangles realizing extensions
//! ([`triangles`]), fan triangulations with membership, flips and exchange
//! triangles ([`triangulation`]), minimal right approximations and index
//! vectors with their additivity defects ([`index`]), and a windowed
//! brute-force oracle that independently re-derives every closed-form answer
//! ([`oracle`]). Everything is exact integer arithmetic; no floating point
//! enters any predicate.

pub mod cli;
pub mod homext;
pub mod index;
pub mod jsonio;
pub mod oracle;
mod rank;
pub mod render;
pub mod surface;
pub mod textio;
pub mod triangles;
pub mod triangulation;

pub use index::IndexVector;
pub use oracle::Window;
pub use surface::{Arc, MarkedPoint, ModelParams, Obj};
pub use triangulation::FanTriangulation;
