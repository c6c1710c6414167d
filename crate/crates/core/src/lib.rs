//! Poset decompositions of local cohomology for arrangements of linear
//! subspaces and pure-power monomial ideals, over exact fields.

pub mod cli;
pub mod decomp;
pub mod error;
pub mod exactlin;
pub mod ideals;
pub mod oracle;
pub mod poset;
pub mod random;
pub mod roos;
pub mod scomplex;

pub use error::{Error, Result};
pub use exactlin::FieldSpec;
pub use ideals::{AmbientRing, Ideal};
pub use poset::Poset;
