//! Syntax, Herbrand bases, grounding and evaluation.

mod base;
mod eval;
mod ground;
mod parse;
mod syntax;

pub use base::{GroundAtom, HerbrandBase, Interpretation, PartialInterpretation, Signature};
pub use eval::{eval, eval_cnf, eval_dnf, CompiledFormula};
pub use ground::{ground_dnf, ground_instances, ground_theory, GroundClause, GroundCube, Groundable, Substitution};
pub use parse::{parse_atom, parse_dnf, parse_theory, serialize_dnf, serialize_theory};
pub use syntax::{Atom, ClausalTheory, Clause, Cube, DnfFormula, Formula, Literal, Term};

/// De Morgan dual of a CNF or DNF formula.
pub fn negate(f: &Formula) -> Formula {
    f.negate()
}

pub fn is_horn(t: &ClausalTheory) -> bool {
    t.is_horn()
}
