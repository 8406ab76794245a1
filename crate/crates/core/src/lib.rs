//! Exact computations with Pascal and Stirling matrices.
//!
//! * [`numbers`]: binomials, factorials, rising/falling factorials and
//!   Stirling numbers as arbitrary-precision integers.
//! * [`matrix`]: dense integer matrices and matrices over `F_p`.
//! * [`pascal`]: the Pascal/Stirling families, the auxiliary `F`, `G`, `H`,
//!   `D` matrices and generalized Pascal matrices `P_n(c)`.
//! * [`canonical`]: Smith normal form with certificates, Jordan blocks of
//!   unipotent matrices mod `p`, near-Jordan rescaling.
//! * [`verify`]: executable identity checks and the colored-cycle oracle.
//! * [`cli`]: the `pascal-canon` command line.

pub mod canonical;
pub mod cli;
pub mod error;
pub mod matrix;
pub mod numbers;
pub mod pascal;
pub mod verify;

pub use error::{Error, Result};
pub use matrix::{IntMatrix, ModMatrix};
