use std::sync::Arc;

use crate::error::{Error, Result};
use crate::logic::{ClausalTheory, CompiledFormula, HerbrandBase};

/// A theory over an extended base, observed through a learning subbase and
/// optionally reasoned about through an assumption subbase.
#[derive(Debug, Clone)]
pub struct ExtendedExample {
    pub theory: ClausalTheory,
    pub extended_base: Arc<HerbrandBase>,
    pub learning_base: Arc<HerbrandBase>,
    pub assumption_base: Option<Arc<HerbrandBase>>,
}

impl ExtendedExample {
    pub fn new(
        theory: ClausalTheory,
        extended_base: Arc<HerbrandBase>,
        learning_base: Arc<HerbrandBase>,
    ) -> Result<Self> {
        if !learning_base.is_subbase_of(&extended_base) {
            return Err(Error::SubbaseMismatch(
                "learning base is not contained in the extended base".into(),
            ));
        }
        // rejects symbols outside the extended base
        CompiledFormula::cnf(&theory, &extended_base)?;
        Ok(ExtendedExample {
            theory,
            extended_base,
            learning_base,
            assumption_base: None,
        })
    }

    pub fn with_assumption_base(mut self, assumption_base: Arc<HerbrandBase>) -> Result<Self> {
        if !assumption_base.is_subbase_of(&self.extended_base) {
            return Err(Error::SubbaseMismatch(
                "assumption base is not contained in the extended base".into(),
            ));
        }
        self.assumption_base = Some(assumption_base);
        Ok(self)
    }
}
