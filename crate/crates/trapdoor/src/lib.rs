//! Trapdoored matrix families and the registry that selects them by name.
//!
//! Every family samples a square matrix together with a circuit that
//! multiplies by it in near-linear time. Field families implement
//! [`FieldTrapdoor`], real ones [`RealLinearMap`].

pub mod code;
pub mod controls;
pub mod error;
pub mod family;
pub mod lpn;
pub mod real;
pub mod serial;

pub use code::{
    McElieceColumn, McElieceParams, McElieceTrapdoor, QcGenerator, Scrambler, StackedTrapdoor,
};
pub use error::{Error, Result};
pub use family::{
    Domain, Family, FieldTrapdoor, RealLinearMap, Registry, SampleRequest, Sampled, Summary,
};
pub use lpn::{LpnNode, LpnSchedule, LpnTrapdoor};
pub use real::{RealMatrix, RealTrapdoor, RotationChain};
pub use serial::decode;
