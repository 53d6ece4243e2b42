//! Analysis toolkit for the two-user interference channel with a cognitive relay.
//!
//! * [`lda_core`]: GF(2) vectors and the shift-matrix channel.
//! * [`region_geometry`]: polygonal rate regions and the per-user gap.
//! * [`lda_bounds`]: symmetric deterministic outer region and regime map.
//! * [`lda_schemes`]: bit-level plans with exact encode/decode verification.
//! * [`gaussian_bounds`]: Gaussian outer-bound formulas.
//! * [`gaussian_schemes`]: zero forcing, the six-stream scheme and linear relay strategies.

pub mod gaussian_bounds;
pub mod gaussian_schemes;
pub mod lda_bounds;
pub mod lda_core;
pub mod lda_schemes;
pub mod par;
pub mod region_geometry;
