//! Concept learning from incomplete examples over finite Herbrand bases.
//!
//! Examples may be complete interpretations, generalized examples, sets of
//! possibilities, satisfiability constraints or extended examples observed
//! through a subbase. For each kind the crate decides whether a hypothesis is
//! compatible with a positive or negative example, computes solution sets by
//! enumeration, and learns DNF⁺ hypotheses greedily.

pub mod compat;
pub mod error;
pub mod learner;
pub mod logic;
pub mod models;
pub mod reductions;
pub mod rna;

pub use compat::{Example, PossibilitiesOf, Possibility, Setting, Sign};
pub use error::{Error, Result};
pub use logic::{ClausalTheory, DnfFormula, Formula, HerbrandBase, Interpretation, Signature};
pub use models::{Engine, ExtendedExample, Limits};

/// Possibilities with floating-point weights.
pub type Possibilities = PossibilitiesOf<f64>;
/// Possibilities with exact rational weights.
pub type ExactPossibilities = PossibilitiesOf<num_rational::Rational64>;
