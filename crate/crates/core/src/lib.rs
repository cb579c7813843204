//! Locally repairable codes with (r, δ) locality over finite fields.
//!
//! The crate covers finite-field arithmetic ([`gf`]), dense matrices over
//! those fields ([`linalg`]), the code model with distance, bounds, locality
//! and repair ([`code`]), the enlarge and puncture transforms
//! ([`transforms`]), a randomized block construction ([`construct`]),
//! binary quasi-uniform vector codes ([`quasi`]), text file formats
//! ([`format`]) and repair simulation ([`simulate`]).

pub mod code;
pub mod construct;
pub mod error;
pub mod format;
pub mod gf;
pub mod linalg;
pub mod quasi;
pub mod simulate;
pub mod transforms;

pub use code::{LinearCode, LocalityAssignment};
pub use error::{Error, Result};
pub use gf::Field;
pub use linalg::Matrix;
