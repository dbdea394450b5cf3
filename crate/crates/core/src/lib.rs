//! Discrete conformal structures on triangulated closed surfaces and the
//! fractional combinatorial Calabi flow `du/dt = Δˢ(K − K̄)`, with surgery by
//! Delaunay edge flips for vertex-scaling metrics.

pub mod conformal;
pub mod error;
pub mod experiment;
pub mod flow;
pub mod geometry;
pub mod jacobian;
pub mod mesh;
pub mod presets;
pub mod spectral;
pub mod surgery;

pub use conformal::{Background, DiscreteConformalStructure};
pub use error::{Error, Result};
pub use mesh::{EdgeId, FaceId, TriangulatedSurface};
