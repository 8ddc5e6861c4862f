//! Computable core of the Heisenberg pseudodifferential calculus:
//! tangent-group geometry from a user-supplied H-frame, hypoellipticity
//! criteria for sublaplacians and the related geometric operators, and
//! numerical evaluation plus verification of the explicit parametrix
//! symbol.
//!
//! The crate is organized around the pipeline
//!
//! ```text
//! expr  ->  jet/vecfield  ->  geometry  ->  tangent / hypocheck
//!                                        ->  parametrix  ->  quantize
//! ```
//!
//! All types are immutable values after construction and every operation
//! is pure, so the library is safe to drive from multiple threads. The
//! `parallel` feature (on by default) lets the grid quantizer and the
//! sweep helpers fan work out over rayon; without it the same code runs
//! sequentially.

pub mod expr;
pub mod geometry;
pub mod grid;
pub mod hypocheck;
pub mod jet;
pub mod linalg;
pub mod par;
pub mod parametrix;
pub mod polymap;
pub mod quantize;
pub mod rng;
pub mod scalar;
pub mod tangent;
pub mod vecfield;

pub use scalar::Scalar;
