//! Rank, anisotropic gap, elliptic gap and parabolic gap of orthogonal polar
//! spaces, computed twice: algebraically from a Witt-style splitting of the
//! defining quadratic form, and intrinsically from chains of subspaces of
//! the point-line geometry.

pub mod catalog;
pub mod chains;
pub mod error;
pub mod field;
pub mod forms;
pub mod geometry;
pub mod io;
pub mod linalg;
pub mod seeded;

pub use error::{Error, Result};

/// The one RNG used for every seeded choice, so runs replay across platforms.
pub type SeededRng = rand_chacha::ChaCha8Rng;
