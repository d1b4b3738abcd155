//! Cluster-then-route coverage planning for grid-structured farm layouts.
//!
//! The crate provides a synthetic instance generator, the HPP heuristic
//! (k-means clustering, cluster repair, antipodal-anchored serpentine
//! routing), a min-max local-search baseline, an exhaustive oracle for tiny
//! instances and a benchmark harness reporting total distance, maximum route
//! length and run time.

pub mod baseline;
pub mod cli;
pub mod error;
pub mod geometry;
pub mod hpp;
pub mod instances;
mod rng;
pub mod solver;
pub mod evaluation;
pub mod solution;

pub use error::{Error, Result};
pub use geometry::{AntipodalPair, ConvexPolygon, Point};
pub use instances::{FarmInstance, GeneratorConfig};
pub use solution::{Route, Solution};
