//! Real-valued trapdoors: Kac-walk rotation chains and Haar-invariant
//! wrappers `O1·D·O2` and `O·D·O⁻¹` around them.
//!
//! Outputs are IEEE doubles; every tolerance is relative to accumulated
//! rounding, not to an idealized real-number model.

pub mod haar;
pub mod kac;
pub mod matrix;

pub use haar::{
    gaussian_spectrum_sampler, DiagSampler, HaarFamily, HaarInvariantSampler, HaarMode,
    RealTrapdoor,
};
pub use kac::{default_steps, KacFamily, Rotation, RotationChain};
pub use matrix::{norm, singular_values, symmetric_eigenvalues, RealMatrix};
