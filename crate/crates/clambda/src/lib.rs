//! Numerics for the C_λ-extended oscillator: truncated Fock-space algebra,
//! generalized coherent states, unity-resolving measures, Bargmann
//! realizations, and photon-statistics observables.

pub mod algebra;
pub mod bargmann;
pub mod cli;
pub mod error;
pub mod figures;
pub mod measures;
pub mod observables;
pub mod quad;
pub mod special;
pub mod states;
pub mod verify;

pub use algebra::{AlgebraParams, OpKind, TruncatedOperator};
pub use error::{Error, Result};
pub use states::{CsAlphaSpec, Norm, StateVector};
