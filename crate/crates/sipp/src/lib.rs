//! Simulation and numerics for scale-invariant Poisson processes on (0,∞)
//! and their relatives: GEM and Poisson–Dirichlet laws, the Moran
//! construction, Dickman/Buchstab special functions, limiting
//! total-variation distances, deterministic spacing fixed points, subset-sum
//! coverage sets, and the discrete analogs in permutations and integer
//! factorization.

pub mod coverage;
pub mod discrete;
pub mod error;
pub mod fixed_point;
pub mod model;
pub mod quad;
pub mod samplers;
pub mod special;
pub mod stats;
pub mod stream;
pub mod suites;
pub mod tv;

pub use error::{Error, Result};
pub use model::Theta;
pub use stream::RngStream;

/// Euler–Mascheroni constant (nearest f64 to γ).
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
