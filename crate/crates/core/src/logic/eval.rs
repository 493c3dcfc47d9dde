//! Truth evaluation under Herbrand interpretations.

use fixedbitset::FixedBitSet;

use super::base::{HerbrandBase, Interpretation};
use super::ground::Conjunction;
use super::syntax::{ClausalTheory, DnfFormula, Formula};
use crate::error::Result;

/// A formula resolved against one base, for repeated evaluation.
#[derive(Debug, Clone)]
pub struct CompiledFormula {
    kind: Kind,
    parts: Vec<Conjunction>,
}

#[derive(Debug, Clone, Copy)]
enum Kind {
    // each part is the violation of a clause
    Cnf,
    Dnf,
}

impl CompiledFormula {
    pub fn new(f: &Formula, base: &HerbrandBase) -> Result<Self> {
        match f {
            Formula::Cnf(t) => Self::cnf(t, base),
            Formula::Dnf(d) => Self::dnf(d, base),
        }
    }

    pub fn cnf(t: &ClausalTheory, base: &HerbrandBase) -> Result<Self> {
        let parts = t
            .clauses()
            .iter()
            .map(|c| Conjunction::compile(&c.negate().literals, base))
            .collect::<Result<_>>()?;
        Ok(CompiledFormula {
            kind: Kind::Cnf,
            parts,
        })
    }

    pub fn dnf(d: &DnfFormula, base: &HerbrandBase) -> Result<Self> {
        let parts = d
            .cubes
            .iter()
            .map(|c| Conjunction::compile(&c.literals, base))
            .collect::<Result<_>>()?;
        Ok(CompiledFormula {
            kind: Kind::Dnf,
            parts,
        })
    }

    /// Evaluates against a truth vector over the base this was compiled for.
    pub fn eval_bits(&self, base: &HerbrandBase, bits: &FixedBitSet) -> bool {
        let truth = |k: usize| bits.contains(k);
        let any = self.parts.iter().any(|c| c.satisfiable_under(base, &truth));
        match self.kind {
            Kind::Cnf => !any,
            Kind::Dnf => any,
        }
    }

    pub fn eval(&self, i: &Interpretation) -> bool {
        self.eval_bits(i.base(), i.bits())
    }
}

/// True iff every grounding of every clause has a true head or a false body atom.
pub fn eval_cnf(t: &ClausalTheory, i: &Interpretation) -> Result<bool> {
    Ok(CompiledFormula::cnf(t, i.base())?.eval(i))
}

/// True iff some cube has a grounding whose literals all hold.
pub fn eval_dnf(d: &DnfFormula, i: &Interpretation) -> Result<bool> {
    Ok(CompiledFormula::dnf(d, i.base())?.eval(i))
}

pub fn eval(f: &Formula, i: &Interpretation) -> Result<bool> {
    Ok(CompiledFormula::new(f, i.base())?.eval(i))
}
