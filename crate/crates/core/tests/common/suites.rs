//! Randomized oracle suites. Each returns a tally instead of panicking so the
//! acceptance runner can report every suite on one line.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use possib::compat::{Example, Possibility, Sign};
use possib::logic::{eval_dnf, negate, DnfFormula, Formula, HerbrandBase, Interpretation, Signature};
use possib::models::{Engine, ExtendedExample};
use possib::reductions::{
    not_space, not_transform, rho_task, solution_set, HypothesisSpace, LabeledExample, LearningTask, SpaceKind,
};
use possib::{ClausalTheory, Error, Possibilities, Setting};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::*;

#[derive(Debug, Default)]
pub struct Tally {
    pub cases: usize,
    pub violations: Vec<String>,
    pub notes: Vec<String>,
}

impl Tally {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    fn fail(&mut self, msg: String) {
        if self.violations.len() < 5 {
            self.violations.push(msg);
        } else if self.violations.len() == 5 {
            self.violations.push("...".into());
        }
    }
}

impl fmt::Display for Tally {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} cases, {} violations", self.cases, self.violations.len())?;
        for n in &self.notes {
            write!(f, "; {n}")?;
        }
        for v in &self.violations {
            write!(f, "\n    {v}")?;
        }
        Ok(())
    }
}

fn models(t: &ClausalTheory, base: &Arc<HerbrandBase>) -> Vec<Interpretation> {
    let g = Grounded::new(&Formula::Cnf(t.clone()), base);
    all_interpretations(base).into_iter().filter(|m| g.eval(m)).collect()
}

fn satisfiable_theory(rng: &mut ChaCha8Rng, base: &Arc<HerbrandBase>, max_clauses: usize, horn: bool) -> ClausalTheory {
    loop {
        let t = random_theory(rng, base, max_clauses, horn);
        if !models(&t, base).is_empty() {
            return t;
        }
    }
}

fn random_kind(rng: &mut ChaCha8Rng) -> SpaceKind {
    [SpaceKind::DnfPlus, SpaceKind::Dnf, SpaceKind::Cnf][rng.gen_range(0..3)]
}

/// A random space no larger than `limit`, shrinking bounds until it fits.
fn random_space(rng: &mut ChaCha8Rng, sig: &Signature, limit: usize) -> (HypothesisSpace, Vec<Formula>) {
    let mut space = HypothesisSpace::new(
        sig.clone(),
        random_kind(rng),
        rng.gen_range(1..=2),
        rng.gen_range(1..=2),
        rng.gen_range(1..=2),
    );
    space.limit = limit;
    loop {
        match space.enumerate() {
            Ok(members) => return (space, members),
            Err(Error::SpaceTooLarge { .. }) => {
                if space.max_terms > 1 {
                    space.max_terms -= 1;
                } else if space.max_literals > 1 {
                    space.max_literals -= 1;
                } else {
                    space.max_variables -= 1;
                }
            }
            Err(e) => panic!("space enumeration failed: {e}"),
        }
    }
}

fn names(fs: &[Formula]) -> Vec<String> {
    fs.iter().map(|f| f.to_string()).collect()
}

/// Satisfiability tasks solved directly, through the possibility reduction,
/// and by exhaustive model search.
pub fn sat_reduction(seed: u64, cases: usize) -> Tally {
    let mut rng = rng(seed);
    let engine = Engine::default();
    let mut t = Tally::default();
    let mut largest = 0;
    for case in 0..cases {
        let base = random_base(&mut rng, 8);
        let mut examples = Vec::new();
        let mut model_lists = Vec::new();
        for k in 0..rng.gen_range(1..=3) {
            let theory = satisfiable_theory(&mut rng, &base, 3, false);
            let sign = if rng.gen_bool(0.5) { Sign::Positive } else { Sign::Negative };
            model_lists.push((models(&theory, &base), sign));
            examples.push(LabeledExample::new(
                format!("e{k}"),
                Example::Satisfiability { theory, base: base.clone() },
                sign,
            ));
        }
        let task = LearningTask::new(Setting::Satisfiability, base.signature().clone(), examples).unwrap();
        let (space, members) = random_space(&mut rng, base.signature(), 1 << 10);
        largest = largest.max(members.len());
        let oracle: Vec<Formula> = members
            .iter()
            .filter(|h| {
                let g = Grounded::new(h, &base);
                model_lists.iter().all(|(ms, sign)| {
                    let hit = ms.iter().any(|m| g.eval(m));
                    hit == (*sign == Sign::Positive)
                })
            })
            .cloned()
            .collect();
        let direct = solution_set(&engine, &task, &space).unwrap();
        let reduced = solution_set(&engine, &rho_task(&engine, &task).unwrap(), &space).unwrap();
        if direct != oracle || reduced != oracle {
            t.fail(format!(
                "case {case}: oracle {:?}, direct {:?}, reduced {:?}",
                names(&oracle),
                names(&direct),
                names(&reduced)
            ));
        }
        t.cases += 1;
    }
    t.notes.push(format!("largest space {largest}"));
    t
}

/// `H` solves a task iff `negate(H)` solves the label-flipped task over the
/// negated language, for complete examples and for possibilities.
pub fn negation_bijection(seed: u64, cases: usize) -> Tally {
    let mut rng = rng(seed);
    let engine = Engine::default();
    let mut t = Tally::default();
    let mut per_setting = [0usize; 2];
    for case in 0..cases {
        let base = random_base(&mut rng, 6);
        let possibilities = case % 2 == 1;
        let mut examples = Vec::new();
        for k in 0..rng.gen_range(1..=3) {
            let sign = if rng.gen_bool(0.5) { Sign::Positive } else { Sign::Negative };
            let example = if possibilities {
                let items = (0..rng.gen_range(1..=2))
                    .map(|_| Possibility::new(satisfiable_theory(&mut rng, &base, 3, false), base.clone()))
                    .collect();
                Example::Possibilities(Possibilities::new(items).unwrap())
            } else {
                Example::Complete(from_code(&base, rng.gen_range(0..1u64 << base.len())))
            };
            examples.push(LabeledExample::new(format!("e{k}"), example, sign));
        }
        let setting = if possibilities { Setting::Possibilities } else { Setting::Interpretations };
        let task = LearningTask::new(setting, base.signature().clone(), examples).unwrap();
        let (space, members) = random_space(&mut rng, base.signature(), 1 << 9);
        let neg_space = not_space(&space);
        let neg_members = neg_space.enumerate().unwrap();
        let sol: BTreeSet<Formula> = solution_set(&engine, &task, &space).unwrap().into_iter().collect();
        let neg_sol: BTreeSet<Formula> = solution_set(&engine, &not_transform(&task), &neg_space)
            .unwrap()
            .into_iter()
            .collect();
        for (h, nh) in members.iter().zip(&neg_members) {
            let (g, ng) = (Grounded::new(&negate(h), &base), Grounded::new(nh, &base));
            if all_interpretations(&base).iter().any(|i| g.eval(i) != ng.eval(i)) {
                t.fail(format!("case {case}: negated language lists {nh} against {h}"));
            }
            if sol.contains(h) != neg_sol.contains(nh) {
                t.fail(format!("case {case}: {h} and {nh} disagree"));
            }
        }
        per_setting[possibilities as usize] += 1;
        t.cases += 1;
    }
    t.notes.push(format!(
        "{} interpretation tasks, {} possibility tasks",
        per_setting[0], per_setting[1]
    ));
    t
}

fn random_extended(rng: &mut ChaCha8Rng, max_atoms: usize, horn: bool) -> ExtendedExample {
    let hb_e = random_base(rng, max_atoms);
    let hb = random_subbase(rng, &hb_e);
    let theory = random_theory(rng, &hb_e, 4, horn);
    ExtendedExample::new(theory, hb_e, hb).unwrap()
}

fn oracle_compat_a(h: &DnfFormula, partial: &[Interpretation], sign: Sign) -> bool {
    partial
        .iter()
        .any(|j| naive_eval(&Formula::Dnf(h.clone()), j) == (sign == Sign::Positive))
}

/// The monotone route agrees with full partial-model enumeration and with the
/// exhaustive oracle, while enumerating less.
pub fn fast_route(seed: u64, cases: usize, horn_negatives: usize) -> Tally {
    let mut rng = rng(seed);
    let mut t = Tally::default();
    let (mut slow_total, mut fast_total, mut horn_neg, mut degenerate) = (0, 0, 0, 0);
    while t.cases < cases || horn_neg < horn_negatives {
        let horn = rng.gen_bool(0.5);
        let x = random_extended(&mut rng, 12, horn);
        let h = random_dnf_plus(&mut rng, &x.learning_base);
        let sign = if rng.gen_bool(if horn { 0.7 } else { 0.5 }) { Sign::Negative } else { Sign::Positive };
        let slow = Engine::default();
        let fast = Engine::default();
        let a = slow.compat_a(&h, &x, sign);
        let b = fast.compat_a_fast(&h, &x, sign);
        let partial = brute_partial_models(&x.theory, &x.extended_base, &x.learning_base);
        let expected = if partial.is_empty() { None } else { Some(oracle_compat_a(&h, &partial, sign)) };
        let verdict = |r: &possib::Result<bool>| match r {
            Ok(v) => Ok(Some(*v)),
            Err(Error::Degenerate(_)) => Ok(None),
            Err(e) => Err(e.to_string()),
        };
        match (verdict(&a), verdict(&b)) {
            (Ok(va), Ok(vb)) if va == expected && vb == expected => {}
            (ra, rb) => t.fail(format!(
                "{} over {} on {} ({sign}): oracle {expected:?}, full {ra:?}, fast {rb:?}",
                h,
                x.theory,
                x.learning_base.len()
            )),
        }
        let (s, f) = (slow.stats().enumerations, fast.stats().enumerations);
        if f > s {
            t.fail(format!("{h} over {}: fast route enumerated {f} times, full {s}", x.theory));
        }
        slow_total += s;
        fast_total += f;
        if expected.is_none() {
            degenerate += 1;
        } else if x.theory.is_horn() && sign == Sign::Negative {
            horn_neg += 1;
        }
        t.cases += 1;
    }
    if fast_total >= slow_total {
        t.fail(format!("fast route enumerated {fast_total} times, full route {slow_total}"));
    }
    t.notes.push(format!("{horn_neg} Horn negatives, {degenerate} degenerate"));
    t.notes.push(format!("enumerations: full {slow_total}, fast {fast_total}"));
    t
}

/// Horn negatives: two disjuncts compatible on their own stay compatible
/// together.
pub fn horn_disjunction(seed: u64, cases: usize) -> Tally {
    let mut rng = rng(seed);
    let engine = Engine::default();
    let mut t = Tally::default();
    let mut premises = 0;
    while t.cases < cases {
        let x = random_extended(&mut rng, 10, true);
        let partial = brute_partial_models(&x.theory, &x.extended_base, &x.learning_base);
        if partial.is_empty() {
            continue;
        }
        let h1 = random_dnf_plus(&mut rng, &x.learning_base);
        let h2 = random_dnf_plus(&mut rng, &x.learning_base);
        let both = DnfFormula::new(h1.cubes.iter().chain(&h2.cubes).cloned().collect());
        let c1 = oracle_compat_a(&h1, &partial, Sign::Negative);
        let c2 = oracle_compat_a(&h2, &partial, Sign::Negative);
        let c = oracle_compat_a(&both, &partial, Sign::Negative);
        if c1 && c2 {
            premises += 1;
            if !c {
                t.fail(format!("{h1} and {h2} each compatible with {} but not together", x.theory));
            }
        }
        if engine.compat_a_fast(&both, &x, Sign::Negative).unwrap() != c {
            t.fail(format!("engine disagrees with oracle on {both} against {}", x.theory));
        }
        t.cases += 1;
    }
    t.notes.push(format!("{premises} cases with both disjuncts compatible"));
    t
}

fn random_superset(rng: &mut ChaCha8Rng, j: &Interpretation) -> Interpretation {
    let n = j.base().len();
    Interpretation::from_indices(j.base().clone(), (0..n).filter(|&k| j.is_true(k) || rng.gen_bool(0.3)))
}

fn random_subset(rng: &mut ChaCha8Rng, j: &Interpretation) -> Interpretation {
    Interpretation::from_indices(j.base().clone(), j.true_indices().filter(|_| rng.gen_bool(0.7)).collect::<Vec<_>>())
}

/// Positive DNF truth is preserved upward (and falsity downward).
pub fn upward_monotone(seed: u64, cases: usize, downward: bool) -> Tally {
    let mut rng = rng(seed);
    let mut t = Tally::default();
    let mut premises = 0;
    for case in 0..cases {
        let base = random_base(&mut rng, 10);
        let d = random_dnf_plus(&mut rng, &base);
        let j = from_code(&base, rng.gen_range(0..1u64 << base.len()));
        let i = if downward { random_subset(&mut rng, &j) } else { random_superset(&mut rng, &j) };
        let (vj, vi) = (eval_dnf(&d, &j).unwrap(), eval_dnf(&d, &i).unwrap());
        let g = Grounded::new(&Formula::Dnf(d.clone()), &base);
        if vj != g.eval(&j) || vi != g.eval(&i) {
            t.fail(format!("case {case}: evaluator disagrees with substitution on {d}"));
        }
        if vj != downward {
            premises += 1;
            if vi != vj {
                t.fail(format!("case {case}: {d} is {vj} on {j} but {vi} on {i}"));
            }
        }
        t.cases += 1;
    }
    t.notes.push(format!("{premises} cases meeting the premise"));
    t
}

/// Models of `ct(j)` on the larger base are exactly the extensions of `j`.
pub fn ct_extensions(seed: u64, cases: usize) -> Tally {
    let mut rng = rng(seed);
    let engine = Engine::default();
    let mut t = Tally::default();
    for case in 0..cases {
        let hb_e = random_base(&mut rng, 12);
        let hb = random_subbase(&mut rng, &hb_e);
        let j = from_code(&hb, rng.gen_range(0..1u64 << hb.len()));
        let emb = hb.embedding_into(&hb_e).unwrap();
        let brute: Vec<Interpretation> = all_interpretations(&hb_e)
            .into_iter()
            .filter(|m| emb.iter().enumerate().all(|(k, &e)| m.is_true(e) == j.is_true(k)))
            .collect();
        let by_models = engine.enumerate_models(&j.ct(), &hb_e).unwrap();
        let by_ext = engine.extensions(&j, &hb_e).unwrap();
        if by_models != brute || by_ext != brute {
            t.fail(format!("case {case}: {j} on {} atoms", hb_e.len()));
        }
        if brute.len() != 1 << (hb_e.len() - hb.len()) {
            t.fail(format!("case {case}: {} extensions", brute.len()));
        }
        t.cases += 1;
    }
    t
}

/// Dropping a possibility never makes an incompatible hypothesis compatible.
pub fn elimination_monotone(seed: u64, events: usize) -> Tally {
    let mut rng = rng(seed);
    let engine = Engine::default();
    let mut t = Tally::default();
    let mut eliminated = 0;
    while t.cases < events {
        let sig = random_base(&mut rng, 8).signature().clone();
        let bases: Vec<Arc<HerbrandBase>> = (0..rng.gen_range(2..=4))
            .map(|_| HerbrandBase::new(sig.clone(), ["a", "b", "c"][..rng.gen_range(1..=2)].to_vec()).shared())
            .filter(|b| !b.is_empty())
            .collect();
        if bases.len() < 2 {
            continue;
        }
        let items: Vec<Possibility<f64>> = bases
            .iter()
            .map(|b| Possibility::new(satisfiable_theory(&mut rng, b, 3, false), b.clone()))
            .collect();
        let smallest = bases.iter().min_by_key(|b| b.len()).unwrap().clone();
        let h = Formula::Dnf(random_dnf(&mut rng, &smallest, 2, false));
        let sign = if rng.gen_bool(0.5) { Sign::Positive } else { Sign::Negative };
        let oracle = |items: &[Possibility<f64>]| {
            items.iter().any(|p| {
                let g = Grounded::new(&h, &p.base);
                models(&p.theory, &p.base).iter().all(|m| g.eval(m) == (sign == Sign::Positive))
            })
        };
        let e = Possibilities::new(items.clone()).unwrap();
        let before = engine.compat_p(&h, &e, sign).unwrap();
        if before != oracle(&items) {
            t.fail(format!("{h} ({sign}) against {} possibilities: engine {before}", items.len()));
        }
        if before {
            continue;
        }
        eliminated += 1;
        for k in 0..e.len() {
            let shrunk = e.without(k).unwrap();
            if engine.compat_p(&h, &shrunk, sign).unwrap() {
                t.fail(format!("{h} ({sign}) re-enters after dropping possibility {k}"));
            }
            t.cases += 1;
        }
    }
    t.notes.push(format!("{eliminated} eliminated hypotheses"));
    t
}
