//! Manufactured elliptic PDE instances, a Walk-on-Spheres estimator, and
//! evaluation tooling over masked fields on `[-1, 1]^2`.

pub mod atoms;
pub mod dataio;
pub mod denoise;
pub mod field;
pub mod geometry;
pub mod jet;
pub mod manufactured;
pub mod metrics;
pub mod rng;
pub mod special;
pub mod vec2;
pub mod wos;

pub use field::Field;
pub use vec2::Vec2;
