//! Verification engine for the evenness of fusion rules in sovereign tensor
//! categories.
//!
//! Rep(G) for a bundled zoo of finite groups is realized at the morphism
//! level ([`repcat`]); abstract fusion rings are handled in [`fusiondata`].
//! The bilinear pairing on invariant spaces and its verdicts live in
//! [`pairing`].

pub mod diagram;
pub mod error;
pub mod fusiondata;
pub mod groupmodel;
pub mod indicator;
pub mod numerics;
pub mod pairing;
pub mod repcat;
pub mod zoo;

pub use error::{Error, Result};
pub use numerics::Tolerance;
pub use repcat::{Morphism, ObjectWord, RepCategory, SimpleLabel};
