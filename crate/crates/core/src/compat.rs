//! Compatibility of a hypothesis with one example, for every learning setting.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_traits::{Num, ToPrimitive};

use crate::error::{Error, Result};
use crate::logic::{
    ground_dnf, ClausalTheory, Clause, CompiledFormula, HerbrandBase, Interpretation,
};
use crate::models::{least_herbrand_model, minimal, Engine, ExtendedExample, FormulaRef};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Positive => "positive",
            Sign::Negative => "negative",
        })
    }
}

impl FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+" | "positive" | "pos" => Ok(Sign::Positive),
            "-" | "negative" | "neg" => Ok(Sign::Negative),
            _ => Err(Error::SettingMismatch(format!("unknown sign `{s}`"))),
        }
    }
}

/// The learning settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Setting {
    Interpretations,
    Generalized,
    Uncertain,
    Possibilities,
    Satisfiability,
    AssumptionBased,
}

impl Setting {
    pub const ALL: [Setting; 6] = [
        Setting::Interpretations,
        Setting::Generalized,
        Setting::Uncertain,
        Setting::Possibilities,
        Setting::Satisfiability,
        Setting::AssumptionBased,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Setting::Interpretations => "interpretations",
            Setting::Generalized => "generalized",
            Setting::Uncertain => "uncertain",
            Setting::Possibilities => "possibilities",
            Setting::Satisfiability => "satisfiability",
            Setting::AssumptionBased => "assumption_based",
        }
    }
}

impl fmt::Display for Setting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Setting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Setting::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::SettingMismatch(format!("unknown setting `{s}`")))
    }
}

/// Scalar usable as a possibility weight.
pub trait Weight: Num + Copy + PartialOrd + ToPrimitive + fmt::Debug {}

impl<T: Num + Copy + PartialOrd + ToPrimitive + fmt::Debug> Weight for T {}

#[derive(Debug, Clone)]
pub struct Possibility<W> {
    pub theory: ClausalTheory,
    pub base: Arc<HerbrandBase>,
    pub weight: Option<W>,
}

impl<W> Possibility<W> {
    pub fn new(theory: ClausalTheory, base: Arc<HerbrandBase>) -> Self {
        Possibility {
            theory,
            base,
            weight: None,
        }
    }

    pub fn weighted(theory: ClausalTheory, base: Arc<HerbrandBase>, weight: W) -> Self {
        Possibility {
            theory,
            base,
            weight: Some(weight),
        }
    }
}

/// A non-empty set of candidate descriptions, one of which is the true one.
#[derive(Debug, Clone)]
pub struct PossibilitiesOf<W> {
    items: Vec<Possibility<W>>,
}

impl<W: Weight> PossibilitiesOf<W> {
    /// Weights must be given on every item or on none, lie in [0, 1] and sum
    /// to 1 within 1e-9.
    pub fn new(items: Vec<Possibility<W>>) -> Result<Self> {
        if items.is_empty() {
            return Err(Error::EmptyPossibilities);
        }
        let weighted = items.iter().filter(|p| p.weight.is_some()).count();
        if weighted != 0 && weighted != items.len() {
            return Err(Error::InvalidWeights("weights given on some items only".into()));
        }
        if weighted > 0 {
            let mut sum = W::zero();
            for p in &items {
                let w = p.weight.expect("weighted");
                if w < W::zero() || w > W::one() {
                    return Err(Error::InvalidWeights(format!("weight {w:?} outside [0, 1]")));
                }
                sum = sum + w;
            }
            let total = sum.to_f64().unwrap_or(f64::NAN);
            if !((total - 1.0).abs() <= 1e-9) {
                return Err(Error::InvalidWeights(format!("weights sum to {total}")));
            }
        }
        Ok(PossibilitiesOf { items })
    }

    pub fn unweighted(items: impl IntoIterator<Item = (ClausalTheory, Arc<HerbrandBase>)>) -> Result<Self> {
        Self::new(items.into_iter().map(|(t, b)| Possibility::new(t, b)).collect())
    }

    pub fn items(&self) -> &[Possibility<W>] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn weights(&self) -> Option<Vec<W>> {
        self.items.iter().map(|p| p.weight).collect()
    }

    /// The same possibilities with item `index` removed; weights are dropped.
    pub fn without(&self, index: usize) -> Result<PossibilitiesOf<W>> {
        let items = self
            .items
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != index)
            .map(|(_, p)| Possibility::new(p.theory.clone(), p.base.clone()))
            .collect();
        PossibilitiesOf::new(items)
    }
}

pub type Possibilities = PossibilitiesOf<f64>;

/// An example payload, one variant per setting.
#[derive(Debug, Clone)]
pub enum Example {
    Complete(Interpretation),
    Generalized { theory: ClausalTheory, base: Arc<HerbrandBase> },
    PureUncertain { theory: ClausalTheory, base: Arc<HerbrandBase> },
    Satisfiability { theory: ClausalTheory, base: Arc<HerbrandBase> },
    Possibilities(Possibilities),
    Extended(ExtendedExample),
}

impl Example {
    pub fn setting(&self) -> Setting {
        match self {
            Example::Complete(_) => Setting::Interpretations,
            Example::Generalized { .. } => Setting::Generalized,
            Example::PureUncertain { .. } => Setting::Uncertain,
            Example::Satisfiability { .. } => Setting::Satisfiability,
            Example::Possibilities(_) => Setting::Possibilities,
            Example::Extended(_) => Setting::AssumptionBased,
        }
    }
}

/// How the assumption route turns an assumption set into a description.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DeductionMode {
    /// Classical entailment; every learning-base atom must be decided.
    #[default]
    Entailment,
    /// Horn theories only: atoms outside the least model are false.
    LeastModel,
}

/// A consistent assumption set and the description deduced from it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssumptionOutcome {
    pub assumption: Interpretation,
    pub derived: Interpretation,
}

fn compile(h: FormulaRef<'_>, base: &HerbrandBase) -> Result<CompiledFormula> {
    match h {
        FormulaRef::Cnf(t) => CompiledFormula::cnf(t, base),
        FormulaRef::Dnf(d) => CompiledFormula::dnf(d, base),
    }
}

fn is_dnf_plus(h: FormulaRef<'_>) -> bool {
    matches!(h, FormulaRef::Dnf(d) if d.is_dnf_plus())
}

/// True iff `i` is a model of `h`.
pub fn covers<'a>(h: impl Into<FormulaRef<'a>>, i: &Interpretation) -> Result<bool> {
    Ok(compile(h.into(), i.base())?.eval(i))
}

fn facts(base: &HerbrandBase, atoms: impl IntoIterator<Item = usize>) -> ClausalTheory {
    ClausalTheory::new(
        atoms
            .into_iter()
            .map(|k| Clause::fact(base.atoms()[k].to_atom())),
    )
}

impl Engine {
    pub fn compat_g<'a>(
        &self,
        h: impl Into<FormulaRef<'a>>,
        e: &ClausalTheory,
        hb: &Arc<HerbrandBase>,
        sign: Sign,
    ) -> Result<bool> {
        match sign {
            Sign::Positive => self.entails(e, h, hb),
            Sign::Negative => Ok(!self.consistent(e, h, hb)?),
        }
    }

    pub fn compat_u<'a>(
        &self,
        h: impl Into<FormulaRef<'a>>,
        e: &ClausalTheory,
        hb: &Arc<HerbrandBase>,
        sign: Sign,
    ) -> Result<bool> {
        match sign {
            Sign::Positive => self.consistent(e, h, hb),
            Sign::Negative => Ok(!self.entails(e, h, hb)?),
        }
    }

    pub fn compat_s<'a>(
        &self,
        h: impl Into<FormulaRef<'a>>,
        e: &ClausalTheory,
        hb: &Arc<HerbrandBase>,
        sign: Sign,
    ) -> Result<bool> {
        match sign {
            Sign::Positive => self.consistent(e, h, hb),
            Sign::Negative => Ok(!self.consistent(e, h, hb)?),
        }
    }

    /// Generalized compatibility with at least one possibility.
    pub fn compat_p<'a, W: Weight>(
        &self,
        h: impl Into<FormulaRef<'a>>,
        e: &PossibilitiesOf<W>,
        sign: Sign,
    ) -> Result<bool> {
        let h = h.into();
        if e.is_empty() {
            return Err(Error::EmptyPossibilities);
        }
        for (k, p) in e.items().iter().enumerate() {
            if !self.satisfiable(&[(&p.theory).into()], &p.base)? {
                return Err(Error::Degenerate(format!("possibility {k} is inconsistent")));
            }
        }
        for p in e.items() {
            if self.compat_g(h, &p.theory, &p.base, sign)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Some partial model (sign +) or some partial non-model (sign -) of `h`.
    pub fn compat_a<'a>(&self, h: impl Into<FormulaRef<'a>>, x: &ExtendedExample, sign: Sign) -> Result<bool> {
        let partial = self.partial_models(x)?;
        if partial.is_empty() {
            return Err(Error::Degenerate("extended example has no partial model".into()));
        }
        let c = compile(h.into(), &x.learning_base)?;
        let want = sign == Sign::Positive;
        Ok(partial.iter().any(|j| c.eval(j) == want))
    }

    /// Same verdict as [`Engine::compat_a`] for DNF⁺ hypotheses, without
    /// enumerating partial models where monotonicity allows it.
    pub fn compat_a_fast(&self, h: &crate::logic::DnfFormula, x: &ExtendedExample, sign: Sign) -> Result<bool> {
        if !h.is_dnf_plus() {
            return Err(Error::NotDnfPlus);
        }
        match sign {
            Sign::Positive => {
                if !self.satisfiable(&[(&x.theory).into()], &x.extended_base)? {
                    return Err(Error::Degenerate("extended example has no partial model".into()));
                }
                // an extension containing a grounding's atoms exists iff
                // some partial model includes them
                for cube in ground_dnf(h, &x.learning_base)? {
                    let pos = facts(&x.learning_base, cube.iter().map(|&(k, _)| k));
                    if self.satisfiable(&[(&x.theory).into(), (&pos).into()], &x.extended_base)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            Sign::Negative if x.theory.is_horn() => {
                let least = match least_herbrand_model(&x.theory, &x.extended_base) {
                    Err(Error::Inconsistent) => {
                        return Err(Error::Degenerate("extended example has no partial model".into()))
                    }
                    r => r?,
                };
                let j = least.project(&x.learning_base)?;
                Ok(!covers(h, &j)?)
            }
            Sign::Negative => {
                let partial = self.partial_models(x)?;
                if partial.is_empty() {
                    return Err(Error::Degenerate("extended example has no partial model".into()));
                }
                let c = CompiledFormula::dnf(h, &x.learning_base)?;
                Ok(minimal(&partial).iter().any(|j| !c.eval(j)))
            }
        }
    }

    /// Consistent assumption sets over the assumption base, canonical order,
    /// each with the learning-base description it deduces.
    pub fn assumption_outcomes(&self, x: &ExtendedExample, mode: DeductionMode) -> Result<Vec<AssumptionOutcome>> {
        let hb_a = x
            .assumption_base
            .as_ref()
            .ok_or_else(|| Error::SubbaseMismatch("example has no assumption base".into()))?;
        if mode == DeductionMode::LeastModel && !x.theory.is_horn() {
            return Err(Error::NotHorn);
        }
        let n = hb_a.len();
        if n > self.limits().max_base || n >= usize::BITS as usize {
            return Err(Error::BaseTooLarge {
                size: n,
                limit: self.limits().max_base,
            });
        }
        let emb = x.learning_base.embedding_into(&x.extended_base)?;
        let mut out = Vec::new();
        for code in 0..(1usize << n) {
            // atom 0 is the most significant bit, giving canonical order
            let a = Interpretation::from_indices(
                hb_a.clone(),
                (0..n).filter(|k| code >> (n - 1 - k) & 1 == 1),
            );
            let t = x.theory.conjoin(&a.ct());
            let derived = match mode {
                DeductionMode::LeastModel => match least_herbrand_model(&t, &x.extended_base) {
                    Err(Error::Inconsistent) => continue,
                    r => r?.project(&x.learning_base)?,
                },
                DeductionMode::Entailment => match self.find_model(&[(&t).into()], &x.extended_base)? {
                    None => continue,
                    Some(m) => {
                        for (j, &k) in emb.iter().enumerate() {
                            let flipped = if m.is_true(k) {
                                ClausalTheory::new([Clause::negative(vec![x.learning_base.atoms()[j].to_atom()])])
                            } else {
                                facts(&x.learning_base, [j])
                            };
                            if self.satisfiable(&[(&t).into(), (&flipped).into()], &x.extended_base)? {
                                return Err(Error::IncompleteDeduction(format!(
                                    "assumptions {a} leave {} undetermined",
                                    x.learning_base.atoms()[j]
                                )));
                            }
                        }
                        m.project(&x.learning_base)?
                    }
                },
            };
            out.push(AssumptionOutcome { assumption: a, derived });
        }
        Ok(out)
    }

    /// Compatibility through assumptions on the assumption base.
    pub fn compat_a_subbase<'a>(
        &self,
        h: impl Into<FormulaRef<'a>>,
        x: &ExtendedExample,
        sign: Sign,
        mode: DeductionMode,
    ) -> Result<bool> {
        let outcomes = self.assumption_outcomes(x, mode)?;
        if outcomes.is_empty() {
            return Err(Error::Degenerate("no consistent assumption set".into()));
        }
        let c = compile(h.into(), &x.learning_base)?;
        let want = sign == Sign::Positive;
        Ok(outcomes.iter().any(|o| c.eval(&o.derived) == want))
    }

    /// Compatibility with any example payload, through the setting's relation.
    pub fn compat<'a>(&self, h: impl Into<FormulaRef<'a>>, e: &Example, sign: Sign) -> Result<bool> {
        let h = h.into();
        match e {
            Example::Complete(i) => {
                let covered = covers(h, i)?;
                Ok(covered == (sign == Sign::Positive))
            }
            Example::Generalized { theory, base } => self.compat_g(h, theory, base, sign),
            Example::PureUncertain { theory, base } => self.compat_u(h, theory, base, sign),
            Example::Satisfiability { theory, base } => self.compat_s(h, theory, base, sign),
            Example::Possibilities(p) => self.compat_p(h, p, sign),
            Example::Extended(x) => match h {
                FormulaRef::Dnf(d) if is_dnf_plus(h) => self.compat_a_fast(d, x, sign),
                _ => self.compat_a(h, x, sign),
            },
        }
    }

    /// Precomputes the model lists that decide compatibility for `e`.
    pub fn prepare(&self, e: &Example) -> Result<PreparedExample> {
        let (rule, groups) = match e {
            Example::Complete(i) => (Rule::ForAll, vec![vec![i.clone()]]),
            Example::Generalized { theory, base } => (Rule::ForAll, vec![self.enumerate_models(theory, base)?]),
            Example::PureUncertain { theory, base } => (Rule::Exists, vec![self.enumerate_models(theory, base)?]),
            Example::Satisfiability { theory, base } => {
                (Rule::Satisfiability, vec![self.enumerate_models(theory, base)?])
            }
            Example::Possibilities(p) => {
                let mut groups = Vec::new();
                for (k, item) in p.items().iter().enumerate() {
                    let models = self.enumerate_models(&item.theory, &item.base)?;
                    if models.is_empty() {
                        return Err(Error::Degenerate(format!("possibility {k} is inconsistent")));
                    }
                    groups.push(models);
                }
                (Rule::ForAll, groups)
            }
            Example::Extended(x) => {
                let partial = self.partial_models(x)?;
                if partial.is_empty() {
                    return Err(Error::Degenerate("extended example has no partial model".into()));
                }
                (Rule::Exists, vec![partial])
            }
        };
        Ok(PreparedExample { rule, groups })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Rule {
    // some group whose every model agrees with the sign
    ForAll,
    // some model agreeing with the sign
    Exists,
    // exists for positives, for-all for negatives
    Satisfiability,
}

/// An example reduced to lists of (partial) models, for repeated checks.
#[derive(Debug, Clone)]
pub struct PreparedExample {
    rule: Rule,
    groups: Vec<Vec<Interpretation>>,
}

impl PreparedExample {
    pub fn groups(&self) -> &[Vec<Interpretation>] {
        &self.groups
    }

    pub fn compat<'a>(&self, h: impl Into<FormulaRef<'a>>, sign: Sign) -> Result<bool> {
        let h = h.into();
        let want = sign == Sign::Positive;
        let all = match (self.rule, sign) {
            (Rule::ForAll, _) | (Rule::Satisfiability, Sign::Negative) => true,
            (Rule::Exists, _) | (Rule::Satisfiability, Sign::Positive) => false,
        };
        for group in &self.groups {
            let Some(first) = group.first() else {
                // vacuous for-all over an empty model list
                if all {
                    return Ok(true);
                }
                continue;
            };
            let c = compile(h, first.base())?;
            let ok = if all {
                group.iter().all(|m| c.eval(m) == want)
            } else {
                group.iter().any(|m| c.eval(m) == want)
            };
            if ok {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

pub fn compat_g<'a>(h: impl Into<FormulaRef<'a>>, e: &ClausalTheory, hb: &Arc<HerbrandBase>, sign: Sign) -> Result<bool> {
    Engine::default().compat_g(h, e, hb, sign)
}

pub fn compat_u<'a>(h: impl Into<FormulaRef<'a>>, e: &ClausalTheory, hb: &Arc<HerbrandBase>, sign: Sign) -> Result<bool> {
    Engine::default().compat_u(h, e, hb, sign)
}

pub fn compat_s<'a>(h: impl Into<FormulaRef<'a>>, e: &ClausalTheory, hb: &Arc<HerbrandBase>, sign: Sign) -> Result<bool> {
    Engine::default().compat_s(h, e, hb, sign)
}

pub fn compat_p<'a, W: Weight>(h: impl Into<FormulaRef<'a>>, e: &PossibilitiesOf<W>, sign: Sign) -> Result<bool> {
    Engine::default().compat_p(h, e, sign)
}

pub fn compat_a<'a>(h: impl Into<FormulaRef<'a>>, x: &ExtendedExample, sign: Sign) -> Result<bool> {
    Engine::default().compat_a(h, x, sign)
}

pub fn compat_a_fast(h: &crate::logic::DnfFormula, x: &ExtendedExample, sign: Sign) -> Result<bool> {
    Engine::default().compat_a_fast(h, x, sign)
}

pub fn compat_a_subbase<'a>(
    h: impl Into<FormulaRef<'a>>,
    x: &ExtendedExample,
    sign: Sign,
    mode: DeductionMode,
) -> Result<bool> {
    Engine::default().compat_a_subbase(h, x, sign, mode)
}
