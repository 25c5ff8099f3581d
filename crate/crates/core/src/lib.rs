//! Exact epsilon factors of Weil-Deligne representations of a local field,
//! viewed as regular functions on a component of the extended quotient
//! `T//W` of the dual torus.
//!
//! A representation is a direct sum `⊕ χ_j ⊗ ρ_j ⊗ Sp(d_j)` of unramified
//! twists. Its epsilon factor is a constant times the torus character
//! `∏ z_j^{β_j}` with `z_j = χ_j(ϖ)`; [`epsilon::epsilon_wd`] computes both
//! exactly and [`oracle`] cross-checks the result against an explicit
//! matrix model.

pub mod conductor;
pub mod epsilon;
pub mod frontend;
pub mod geometry;
pub mod model;
pub mod oracle;

pub use epsilon::{epsilon_three_var, epsilon_wd, undo_three_var};
pub use frontend::{parse, Document, ParseError};
pub use model::{
    EpsilonFactor, FieldData, GaloisBlock, GaussRat, ModelError, Summand, SymbolicScalar,
    TorusCharacter, WDRep,
};
