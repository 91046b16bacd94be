//! Focus-of-expansion (FOE) estimation from sparse optic flow.
//!
//! The core estimator intersects the negative half-planes of randomly
//! sampled flow vectors inside a RANSAC loop, scoring each candidate
//! region by how many half-planes contain its centroid. Three baseline
//! estimators (direction counting, vector-intersection RANSAC, and a
//! dense half-plane probability map) are provided for comparison, along
//! with a pinhole camera flow model that doubles as a synthetic
//! ground-truth oracle, time-to-contact clustering for obstacle
//! avoidance, and a benchmark harness.
//!
//! See the `examples/` directory for runnable entry points covering each
//! capability; the `faith` binary exposes the same functionality as
//! `synth`, `estimate`, `bench` and `avoid` subcommands.

pub mod avoidance;
pub mod baselines;
pub mod bench;
pub mod cli;
pub mod error;
pub mod estimator;
pub mod flow;
pub mod geometry;
pub mod io;

pub use error::Error;
pub use estimator::{EscapeDirection, FaithConfig, FoeEstimate};
pub use flow::{CameraModel, EgoMotion, FlowVector, NoiseModel, ScenePoint};
pub use geometry::{ConvexPolygon, HalfPlane, Point2};

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
