//! Numerical and symbolic tools for iterated integrals of modular forms,
//! multiple modular L-values and multiple zeta values.

pub mod error;
pub mod forms;
pub mod identities;
pub mod iterint;
pub mod lfun;
pub mod mzv;
pub mod qseries;
pub mod quad;
pub mod special;

pub use error::{Error, Result};
pub use forms::{BuiltinForm, EvalConfig, FrickeImage, ModularForm};
pub use special::C64;
