//! Exact classification and bounded enumeration of quasismooth weighted
//! complete intersections.

pub mod bounds;
pub mod enumerate;
pub mod error;
pub mod fixture;
pub mod model;
pub mod monomial;
pub mod quasismooth;
pub mod rational;
pub mod record;
pub mod singularity;

pub use error::{Error, Result};
pub use model::{CandidateFamily, WeightSystem};
pub use quasismooth::Mode;
pub use rational::Rational;
pub use record::{check_one, FamilyRecord};
