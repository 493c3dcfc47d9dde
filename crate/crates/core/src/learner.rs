//! Cube enumeration, greedy covering, classification and weighted coverage.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;

use crate::compat::{covers, Example, PossibilitiesOf, PreparedExample, Setting, Sign, Weight};
use crate::error::{Error, Result};
use crate::logic::{Atom, Cube, DnfFormula, Literal, Signature, Term};
use crate::models::{Engine, FormulaRef};
use crate::reductions::LearningTask;

/// Default cap on the number of cubes or hypotheses an enumeration may emit.
pub const DEFAULT_SPACE_LIMIT: usize = 1 << 14;

// subsets of the literal pool examined before deduplication
const RAW_LIMIT: u128 = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LearnerConfig {
    pub max_cubes: usize,
    pub max_literals_per_cube: usize,
    pub max_variables: usize,
    /// Skip the whole-disjunction recheck when it is provably redundant.
    pub horn_shortcut: bool,
    /// Constants hypotheses may mention; empty forbids constants.
    pub constants: Vec<String>,
    pub space_limit: usize,
}

impl Default for LearnerConfig {
    fn default() -> Self {
        LearnerConfig {
            max_cubes: 3,
            max_literals_per_cube: 2,
            max_variables: 2,
            horn_shortcut: false,
            constants: Vec::new(),
            space_limit: DEFAULT_SPACE_LIMIT,
        }
    }
}

fn count_subsets(n: usize, max: usize) -> u128 {
    let mut total = 0u128;
    let mut c = 1u128;
    for k in 0..=max.min(n) {
        if k > 0 {
            c = c * (n - k + 1) as u128 / k as u128;
        }
        total += c;
    }
    total
}

fn rename(lits: &[Literal], perm: &[usize]) -> Vec<Literal> {
    let mut out: Vec<Literal> = lits
        .iter()
        .map(|l| Literal {
            atom: Atom::new(
                l.atom.predicate.clone(),
                l.atom
                    .args
                    .iter()
                    .map(|t| match t {
                        Term::Var(v) => {
                            let k: usize = v[1..].parse().expect("canonical variable");
                            Term::Var(format!("V{}", perm[k - 1] + 1))
                        }
                        c => c.clone(),
                    })
                    .collect(),
            ),
            positive: l.positive,
        })
        .collect();
    out.sort();
    out
}

/// Cubes of 1..=`max_literals` distinct literals over variables `V1..Vk`,
/// deduplicated under variable renaming, ordered by size then literal list.
pub(crate) fn cube_pool(
    signature: &Signature,
    max_literals: usize,
    max_variables: usize,
    constants: &[String],
    signed: bool,
    limit: usize,
) -> Result<Vec<Cube>> {
    let mut terms: Vec<Term> = (1..=max_variables).map(|k| Term::var(format!("V{k}"))).collect();
    terms.extend(constants.iter().map(|c| Term::constant(c.as_str())));
    let mut pool = Vec::new();
    for (p, arity) in signature.iter() {
        if arity > 0 && terms.is_empty() {
            continue;
        }
        for args in tuples(&terms, arity) {
            let atom = Atom::new(p, args);
            if signed {
                pool.push(Literal::neg(atom.clone()));
            }
            pool.push(Literal::pos(atom));
        }
    }
    if count_subsets(pool.len(), max_literals) > RAW_LIMIT {
        return Err(Error::SpaceTooLarge { limit });
    }
    let perms: Vec<Vec<usize>> = (0..max_variables).permutations(max_variables).collect();
    let mut seen = BTreeSet::new();
    for size in 1..=max_literals.min(pool.len()) {
        for combo in pool.iter().combinations(size) {
            let complementary = combo
                .iter()
                .tuple_combinations()
                .any(|(a, b)| a.atom == b.atom);
            if complementary {
                continue;
            }
            let lits: Vec<Literal> = combo.into_iter().cloned().collect();
            let key = perms
                .iter()
                .map(|perm| rename(&lits, perm))
                .min()
                .unwrap_or_else(|| {
                    let mut l = lits.clone();
                    l.sort();
                    l
                });
            seen.insert((key.len(), key));
            if seen.len() > limit {
                return Err(Error::SpaceTooLarge { limit });
            }
        }
    }
    Ok(seen.into_iter().map(|(_, lits)| Cube::new(lits)).collect())
}

fn tuples(terms: &[Term], arity: usize) -> Vec<Vec<Term>> {
    if arity == 0 {
        return vec![Vec::new()];
    }
    std::iter::repeat(terms.iter().cloned())
        .take(arity)
        .multi_cartesian_product()
        .collect()
}

/// All positive cubes within the configured bounds.
pub fn enumerate_cubes(signature: &Signature, config: &LearnerConfig) -> Result<Vec<Cube>> {
    cube_pool(
        signature,
        config.max_literals_per_cube,
        config.max_variables,
        &config.constants,
        false,
        config.space_limit,
    )
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceEvent {
    Accepted {
        cube: Cube,
        newly_covered: Vec<String>,
    },
    /// The cube alone is not compatible with a negative example.
    RejectedCube { cube: Cube, negative: String },
    /// The cube is fine alone, but the disjunction with the hypothesis so far is not.
    RejectedDisjunction { cube: Cube, negative: String },
}

impl fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceEvent::Accepted { cube, newly_covered } => {
                write!(f, "accept {cube} covering {}", newly_covered.join(", "))
            }
            TraceEvent::RejectedCube { cube, negative } => write!(f, "reject {cube} vetoed by {negative}"),
            TraceEvent::RejectedDisjunction { cube, negative } => {
                write!(f, "reject {cube} in disjunction vetoed by {negative}")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureReason {
    NoPositives,
    Uncoverable,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Learned {
    Hypothesis(DnfFormula),
    Failure {
        partial: DnfFormula,
        uncovered: Vec<String>,
        reason: FailureReason,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LearnReport {
    pub outcome: Learned,
    pub trace: Vec<TraceEvent>,
    pub shortcut_engaged: bool,
}

/// Whether per-cube negative checks imply the disjunction check for `e`.
fn horn_like(e: &Example) -> bool {
    match e {
        Example::Complete(_) => true,
        Example::Generalized { .. } | Example::Satisfiability { .. } => true,
        Example::PureUncertain { theory, .. } => theory.is_horn(),
        Example::Extended(x) => x.theory.is_horn(),
        Example::Possibilities(_) => false,
    }
}

/// Greedy set covering over positive cubes.
///
/// Each round picks the cube whose disjunction with the current hypothesis
/// covers the most still-uncovered positives, provided the cube and the new
/// disjunction are both compatible with every negative example.
pub fn greedy_learn(engine: &Engine, task: &LearningTask, config: &LearnerConfig) -> Result<LearnReport> {
    let cubes = enumerate_cubes(&task.signature, config)?;
    let prepared: Vec<PreparedExample> = task
        .examples
        .iter()
        .map(|e| engine.prepare(&e.example))
        .collect::<Result<_>>()?;
    let positives: Vec<usize> = (0..task.examples.len())
        .filter(|&k| task.examples[k].label == Sign::Positive)
        .collect();
    let negatives: Vec<usize> = (0..task.examples.len())
        .filter(|&k| task.examples[k].label == Sign::Negative)
        .collect();
    let shortcut = config.horn_shortcut
        && task.setting != Setting::Possibilities
        && negatives.iter().all(|&k| horn_like(&task.examples[k].example));
    let name = |k: usize| task.examples[k].name.clone();

    let mut trace = Vec::new();
    if positives.is_empty() {
        return Ok(LearnReport {
            outcome: Learned::Failure {
                partial: DnfFormula::falsum(),
                uncovered: Vec::new(),
                reason: FailureReason::NoPositives,
            },
            trace,
            shortcut_engaged: shortcut,
        });
    }

    // per-cube negative verdicts: None = not computed yet
    let mut cube_veto: Vec<Option<Option<usize>>> = vec![None; cubes.len()];
    let mut chosen: Vec<usize> = Vec::new();
    let mut uncovered = positives.clone();
    let current = |chosen: &[usize]| DnfFormula::new(chosen.iter().map(|&c| cubes[c].clone()).collect());

    while !uncovered.is_empty() && chosen.len() < config.max_cubes {
        let h = current(&chosen);
        let mut candidates: Vec<(usize, Vec<usize>)> = Vec::new();
        for (ci, cube) in cubes.iter().enumerate() {
            if chosen.contains(&ci) {
                continue;
            }
            let hc = h.or(cube.clone());
            let mut newly = Vec::new();
            for &p in &uncovered {
                if prepared[p].compat(&hc, Sign::Positive)? {
                    newly.push(p);
                }
            }
            if !newly.is_empty() {
                candidates.push((ci, newly));
            }
        }
        // stable: more positives first, then enumeration order
        candidates.sort_by(|a, b| b.1.len().cmp(&a.1.len()));

        let mut accepted = None;
        'candidates: for (ci, newly) in candidates {
            let cube = &cubes[ci];
            let veto = match cube_veto[ci] {
                Some(v) => v,
                None => {
                    let single = DnfFormula::new(vec![cube.clone()]);
                    let mut v = None;
                    for &n in &negatives {
                        if !prepared[n].compat(&single, Sign::Negative)? {
                            v = Some(n);
                            break;
                        }
                    }
                    cube_veto[ci] = Some(v);
                    v
                }
            };
            if let Some(n) = veto {
                trace.push(TraceEvent::RejectedCube {
                    cube: cube.clone(),
                    negative: name(n),
                });
                continue;
            }
            if !shortcut && !chosen.is_empty() {
                let hc = h.or(cube.clone());
                for &n in &negatives {
                    if !prepared[n].compat(&hc, Sign::Negative)? {
                        trace.push(TraceEvent::RejectedDisjunction {
                            cube: cube.clone(),
                            negative: name(n),
                        });
                        continue 'candidates;
                    }
                }
            }
            accepted = Some((ci, newly));
            break;
        }
        let Some((ci, newly)) = accepted else {
            break;
        };
        trace.push(TraceEvent::Accepted {
            cube: cubes[ci].clone(),
            newly_covered: newly.iter().map(|&p| name(p)).collect(),
        });
        uncovered.retain(|p| !newly.contains(p));
        chosen.push(ci);
    }

    chosen.sort_unstable();
    let hypothesis = current(&chosen);
    let outcome = if uncovered.is_empty() {
        Learned::Hypothesis(hypothesis)
    } else {
        Learned::Failure {
            partial: hypothesis,
            uncovered: uncovered.iter().map(|&p| name(p)).collect(),
            reason: FailureReason::Uncoverable,
        }
    };
    Ok(LearnReport {
        outcome,
        trace,
        shortcut_engaged: shortcut,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClassOutcome {
    Positive,
    Negative,
    Uncertain,
    Contradictory,
}

impl fmt::Display for ClassOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClassOutcome::Positive => "positive",
            ClassOutcome::Negative => "negative",
            ClassOutcome::Uncertain => "uncertain",
            ClassOutcome::Contradictory => "contradictory",
        })
    }
}

/// Classifies an instance by testing both compatibility relations.
pub fn classify<'a>(
    engine: &Engine,
    h: impl Into<FormulaRef<'a>>,
    instance: &Example,
    setting: Setting,
) -> Result<ClassOutcome> {
    if instance.setting() != setting {
        return Err(Error::SettingMismatch(format!(
            "instance is a {} payload, not {setting}",
            instance.setting()
        )));
    }
    let h = h.into();
    let pos = engine.compat(h, instance, Sign::Positive)?;
    let neg = engine.compat(h, instance, Sign::Negative)?;
    Ok(match (pos, neg) {
        (true, false) => ClassOutcome::Positive,
        (false, true) => ClassOutcome::Negative,
        (true, true) => ClassOutcome::Uncertain,
        (false, false) => ClassOutcome::Contradictory,
    })
}

/// Total weight of the single-model possibilities whose model satisfies `h`.
pub fn weighted_model_probability<W: Weight>(
    engine: &Engine,
    h: &DnfFormula,
    e: &PossibilitiesOf<W>,
) -> Result<W> {
    let weights = e.weights().ok_or(Error::MissingWeights)?;
    let mut total = W::zero();
    for (k, (p, w)) in e.items().iter().zip(weights).enumerate() {
        let m = engine
            .single_model(&p.theory, &p.base)?
            .ok_or(Error::NotSingleModel { index: k })?;
        if covers(h, &m)? {
            total = total + w;
        }
    }
    Ok(total)
}
