//! Gluing calculus for slicings indexed by Z-tosets.
//!
//! The crate models the combinatorial side of gluing: Z-tosets and
//! equivariant maps between them, perversities and their action by the
//! two commuting copies of Z, upper sets of `Z x Z` and their kinky
//! counterparts, compatibility predicates for slicings, and small concrete
//! triangulated models on which the predicates can be evaluated.

pub mod error;
pub mod model;
pub mod perversity;
pub mod scenarios;
pub mod slicing;
pub mod stepfn;
pub mod upperset;
pub mod zposet;

pub use error::{Error, Result};
pub use perversity::{ExtPerversity, Perversity, Threshold};
pub use slicing::{HomOracle, SharedOracle, Slicing, SupportObject, TStructureDescriptor, Witness};

pub use stepfn::{ExtInt, StepFn, Tail};
pub use upperset::{KinkyUpperSet, UpperSet1D, UpperSet2D, UpperSetFamily};
pub use zposet::{Element, MapRule, ZSetMap, ZToset};
