//! Transformations between learning settings and brute-force solution sets.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use itertools::Itertools;

use crate::compat::{Example, Possibilities, Possibility, Setting, Sign};
use crate::error::{Error, Result};
use crate::learner::{cube_pool, DEFAULT_SPACE_LIMIT};
use crate::logic::{Atom, ClausalTheory, Clause, DnfFormula, Formula, HerbrandBase, Signature};
use crate::models::{Engine, ExtendedExample};

#[derive(Debug, Clone)]
pub struct LabeledExample {
    pub name: String,
    pub example: Example,
    pub label: Sign,
}

impl LabeledExample {
    pub fn new(name: impl Into<String>, example: Example, label: Sign) -> Self {
        LabeledExample {
            name: name.into(),
            example,
            label,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LearningTask {
    pub setting: Setting,
    pub signature: Signature,
    pub examples: Vec<LabeledExample>,
}

impl LearningTask {
    /// Every payload must belong to `setting`.
    pub fn new(setting: Setting, signature: Signature, examples: Vec<LabeledExample>) -> Result<Self> {
        for e in &examples {
            if e.example.setting() != setting {
                return Err(Error::SettingMismatch(format!(
                    "example {} is a {} payload in a {setting} task",
                    e.name,
                    e.example.setting()
                )));
            }
        }
        Ok(LearningTask {
            setting,
            signature,
            examples,
        })
    }

    pub fn positives(&self) -> impl Iterator<Item = &LabeledExample> {
        self.examples.iter().filter(|e| e.label == Sign::Positive)
    }

    pub fn negatives(&self) -> impl Iterator<Item = &LabeledExample> {
        self.examples.iter().filter(|e| e.label == Sign::Negative)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpaceKind {
    DnfPlus,
    Dnf,
    Cnf,
}

impl fmt::Display for SpaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpaceKind::DnfPlus => "dnf_plus",
            SpaceKind::Dnf => "dnf",
            SpaceKind::Cnf => "cnf",
        })
    }
}

impl std::str::FromStr for SpaceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dnf_plus" => Ok(SpaceKind::DnfPlus),
            "dnf" => Ok(SpaceKind::Dnf),
            "cnf" => Ok(SpaceKind::Cnf),
            _ => Err(Error::SettingMismatch(format!("unknown hypothesis kind `{s}`"))),
        }
    }
}

/// A finite hypothesis language: up to `max_terms` cubes (or clauses) of up
/// to `max_literals` literals over `max_variables` variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypothesisSpace {
    pub signature: Signature,
    pub kind: SpaceKind,
    pub max_terms: usize,
    pub max_literals: usize,
    pub max_variables: usize,
    pub constants: Vec<String>,
    /// Enumerate the negation of every member instead.
    pub negated: bool,
    pub limit: usize,
}

impl HypothesisSpace {
    pub fn new(signature: Signature, kind: SpaceKind, max_terms: usize, max_literals: usize, max_variables: usize) -> Self {
        HypothesisSpace {
            signature,
            kind,
            max_terms,
            max_literals,
            max_variables,
            constants: Vec::new(),
            negated: false,
            limit: DEFAULT_SPACE_LIMIT,
        }
    }

    /// Members in canonical order: by number of cubes, then by cube indices.
    pub fn enumerate(&self) -> Result<Vec<Formula>> {
        let signed = self.kind != SpaceKind::DnfPlus;
        let cubes = cube_pool(
            &self.signature,
            self.max_literals,
            self.max_variables,
            &self.constants,
            signed,
            self.limit,
        )?;
        let mut total: u128 = 0;
        let mut c: u128 = 1;
        for k in 0..=self.max_terms.min(cubes.len()) {
            if k > 0 {
                c = c * (cubes.len() - k + 1) as u128 / k as u128;
            }
            total += c;
        }
        if total > self.limit as u128 {
            return Err(Error::SpaceTooLarge { limit: self.limit });
        }
        // a CNF member is the negation of a DNF member
        let as_cnf = (self.kind == SpaceKind::Cnf) != self.negated;
        let mut out = Vec::with_capacity(total as usize);
        for k in 0..=self.max_terms.min(cubes.len()) {
            for combo in cubes.iter().combinations(k) {
                let d = DnfFormula::new(combo.into_iter().cloned().collect());
                out.push(if as_cnf {
                    Formula::Cnf(d.negate())
                } else {
                    Formula::Dnf(d)
                });
            }
        }
        Ok(out)
    }
}

/// The language of negated hypotheses.
pub fn not_space(space: &HypothesisSpace) -> HypothesisSpace {
    HypothesisSpace {
        negated: !space.negated,
        ..space.clone()
    }
}

/// Flips every example label.
pub fn not_transform(task: &LearningTask) -> LearningTask {
    LearningTask {
        examples: task
            .examples
            .iter()
            .map(|e| LabeledExample {
                label: e.label.flip(),
                ..e.clone()
            })
            .collect(),
        ..task.clone()
    }
}

/// Hypotheses compatible with every example, in enumeration order.
pub fn solution_set(engine: &Engine, task: &LearningTask, space: &HypothesisSpace) -> Result<Vec<Formula>> {
    let members = space.enumerate()?;
    let prepared = task
        .examples
        .iter()
        .map(|e| Ok((engine.prepare(&e.example)?, e.label)))
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    'members: for h in members {
        for (p, label) in &prepared {
            if !p.compat(&h, *label)? {
                continue 'members;
            }
        }
        out.push(h);
    }
    Ok(out)
}

/// `ρ` from satisfiability to possibilities: a positive example becomes the
/// set of its models' `ct`; a negative one keeps its theory as a singleton.
pub fn rho_sat_to_poss(engine: &Engine, e: &LabeledExample) -> Result<LabeledExample> {
    let Example::Satisfiability { theory, base } = &e.example else {
        return Err(Error::SettingMismatch(format!(
            "example {} is not a satisfiability example",
            e.name
        )));
    };
    let models = engine.enumerate_models(theory, base)?;
    if models.is_empty() {
        return Err(Error::Unsatisfiable);
    }
    let items = match e.label {
        Sign::Positive => models.iter().map(|m| Possibility::new(m.ct(), base.clone())).collect(),
        Sign::Negative => vec![Possibility::new(theory.clone(), base.clone())],
    };
    Ok(LabeledExample {
        example: Example::Possibilities(Possibilities::new(items)?),
        ..e.clone()
    })
}

pub fn rho_task(engine: &Engine, task: &LearningTask) -> Result<LearningTask> {
    LearningTask::new(
        Setting::Possibilities,
        task.signature.clone(),
        task.examples
            .iter()
            .map(|e| rho_sat_to_poss(engine, e))
            .collect::<Result<_>>()?,
    )
}

/// One possibility `ct(j)` per partial model `j`, on the learning base.
pub fn abl_to_poss(engine: &Engine, x: &ExtendedExample) -> Result<Possibilities> {
    let partial = engine.partial_models(x)?;
    if partial.is_empty() {
        return Err(Error::Degenerate("extended example has no partial model".into()));
    }
    Possibilities::new(
        partial
            .iter()
            .map(|j| Possibility::new(j.ct(), x.learning_base.clone()))
            .collect(),
    )
}

pub fn abl_task(engine: &Engine, task: &LearningTask) -> Result<LearningTask> {
    let examples = task
        .examples
        .iter()
        .map(|e| match &e.example {
            Example::Extended(x) => Ok(LabeledExample {
                example: Example::Possibilities(abl_to_poss(engine, x)?),
                ..e.clone()
            }),
            other => Err(Error::SettingMismatch(format!(
                "example {} is a {} payload, not assumption_based",
                e.name,
                other.setting()
            ))),
        })
        .collect::<Result<_>>()?;
    LearningTask::new(Setting::Possibilities, task.signature.clone(), examples)
}

/// Outcome of comparing two solution sets over one space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionReport {
    pub space_size: usize,
    pub size_a: usize,
    pub size_b: usize,
    pub only_in_a: Vec<Formula>,
    pub only_in_b: Vec<Formula>,
}

impl ReductionReport {
    pub fn equal(&self) -> bool {
        self.only_in_a.is_empty() && self.only_in_b.is_empty()
    }
}

impl fmt::Display for ReductionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "space: {} hypotheses", self.space_size)?;
        writeln!(f, "solutions before: {}", self.size_a)?;
        writeln!(f, "solutions after: {}", self.size_b)?;
        for h in &self.only_in_a {
            writeln!(f, "only before: {h}")?;
        }
        for h in &self.only_in_b {
            writeln!(f, "only after: {h}")?;
        }
        write!(f, "{}", if self.equal() { "EQUAL" } else { "DIFFERENT" })
    }
}

fn compare(space_size: usize, a: Vec<Formula>, b: Vec<Formula>) -> ReductionReport {
    let sa: BTreeSet<&Formula> = a.iter().collect();
    let sb: BTreeSet<&Formula> = b.iter().collect();
    ReductionReport {
        space_size,
        size_a: a.len(),
        size_b: b.len(),
        only_in_a: a.iter().filter(|h| !sb.contains(h)).cloned().collect(),
        only_in_b: b.iter().filter(|h| !sa.contains(h)).cloned().collect(),
    }
}

/// Solves `task` and `transform(task)` over the same space and compares.
pub fn check_reduction_equiv(
    engine: &Engine,
    task: &LearningTask,
    transform: impl Fn(&LearningTask) -> Result<LearningTask>,
    space: &HypothesisSpace,
) -> Result<ReductionReport> {
    let size = space.enumerate()?.len();
    let before = solution_set(engine, task, space)?;
    let after = solution_set(engine, &transform(task)?, space)?;
    Ok(compare(size, before, after))
}

/// The two-possibility positive example `{{a}, {b}}` over 0-ary `a`, `b`.
pub fn two_possibilities_task() -> LearningTask {
    let base = HerbrandBase::propositional(["a", "b"]).shared();
    let fact = |p: &str| ClausalTheory::new([Clause::fact(Atom::prop(p))]);
    let poss = Possibilities::new(vec![
        Possibility::new(fact("a"), base.clone()),
        Possibility::new(fact("b"), base.clone()),
    ])
    .expect("two items");
    LearningTask::new(
        Setting::Possibilities,
        base.signature().clone(),
        vec![LabeledExample::new("e_p", Example::Possibilities(poss), Sign::Positive)],
    )
    .expect("possibilities task")
}

/// Clausal theories over 0-ary `a`, `b` with up to `max_clauses` distinct
/// clauses (every head and body subset), smallest first.
pub fn small_theories(max_clauses: usize) -> Vec<ClausalTheory> {
    let atoms = [Atom::prop("a"), Atom::prop("b")];
    let subsets: Vec<Vec<Atom>> = (0..4u8)
        .map(|m| (0..2).filter(|k| m >> k & 1 == 1).map(|k| atoms[k].clone()).collect())
        .collect();
    let clauses: Vec<Clause> = subsets
        .iter()
        .cartesian_product(subsets.iter())
        .map(|(h, b)| Clause::new(h.clone(), b.clone()))
        .collect();
    (0..=max_clauses)
        .flat_map(|k| clauses.iter().cloned().combinations(k))
        .map(ClausalTheory::new)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CounterexampleReport {
    pub target_size: usize,
    pub candidates: usize,
    pub matches: Vec<(ClausalTheory, Sign)>,
}

impl fmt::Display for CounterexampleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "target solutions: {}", self.target_size)?;
        writeln!(f, "candidates checked: {}", self.candidates)?;
        for (c, s) in &self.matches {
            writeln!(f, "match: ({c}, {s})")?;
        }
        write!(
            f,
            "{}",
            if self.matches.is_empty() {
                "NO SINGLE SAT EXAMPLE MATCHES"
            } else {
                "SINGLE SAT EXAMPLE FOUND"
            }
        )
    }
}

/// Searches every single satisfiability example `(C, class)` with `C` drawn
/// from `theories` for one whose solution set equals that of `target`.
pub fn single_sat_search(
    engine: &Engine,
    target: &LearningTask,
    theories: &[ClausalTheory],
    base: &Arc<HerbrandBase>,
    space: &HypothesisSpace,
) -> Result<CounterexampleReport> {
    let goal = solution_set(engine, target, space)?;
    let mut matches = Vec::new();
    let mut candidates = 0;
    for c in theories {
        for class in [Sign::Positive, Sign::Negative] {
            candidates += 1;
            let task = LearningTask::new(
                Setting::Satisfiability,
                target.signature.clone(),
                vec![LabeledExample::new(
                    "c",
                    Example::Satisfiability {
                        theory: c.clone(),
                        base: base.clone(),
                    },
                    class,
                )],
            )?;
            if solution_set(engine, &task, space)? == goal {
                matches.push((c.clone(), class));
            }
        }
    }
    Ok(CounterexampleReport {
        target_size: goal.len(),
        candidates,
        matches,
    })
}
