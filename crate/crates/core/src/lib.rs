//! Prime-field linear algebra substrate: scalar and matrix arithmetic, sparse
//! and circulant kernels, reference oracles, Freivalds verification and the
//! `TDM1` container format.

pub mod circulant;
pub mod dense;
pub mod error;
pub mod field;
pub mod freivalds;
pub mod ops;
pub mod perm;
pub mod reference;
pub mod rng;
pub mod sample;
pub mod serial;
pub mod sparse;
pub mod vector;

pub use circulant::{circulant_matvec, Circulant, NttTable};
pub use dense::DenseMatrix;
pub use error::{Error, Result};
pub use field::Field;
pub use freivalds::freivalds_verify;
pub use ops::OpCount;
pub use perm::{FDiagonal, Permutation};
pub use rng::{rng_from_seed, split, TdmRng};
pub use sample::{sample_invertible, sample_uniform};
pub use sparse::{sample_bernoulli_sparse, SparseMatrix};
pub use vector::FVector;
