//! Brute-force oracles and random instance generators shared by the
//! integration tests. Nothing here goes through the model engine.

#![allow(dead_code)]

use std::sync::Arc;

use possib::logic::{
    ground_instances, Atom, ClausalTheory, Clause, Cube, DnfFormula, Formula, HerbrandBase,
    Interpretation, Literal, Signature, Term,
};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub mod suites;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn prop_base(names: &[&str]) -> Arc<HerbrandBase> {
    HerbrandBase::propositional(names.iter().copied()).shared()
}

fn truth(i: &Interpretation, a: &Atom) -> bool {
    let k = i.base().index_of_atom(a).expect("ground atom in base");
    i.is_true(k)
}

/// Evaluation by explicit substitution, independent of the compiled evaluator.
pub fn naive_eval(f: &Formula, i: &Interpretation) -> bool {
    let hu = i.base().universe();
    match f {
        Formula::Cnf(t) => t.clauses().iter().all(|c| {
            ground_instances(c, hu).expect("groundable").iter().all(|g| {
                g.head.iter().any(|a| truth(i, a)) || g.body.iter().any(|a| !truth(i, a))
            })
        }),
        Formula::Dnf(d) => d.cubes.iter().any(|c| {
            ground_instances(c, hu)
                .expect("groundable")
                .iter()
                .any(|g| g.literals.iter().all(|l| truth(i, &l.atom) == l.positive))
        }),
    }
}

/// Interpretation whose truth vector is `code`, atom 0 most significant.
pub fn from_code(base: &Arc<HerbrandBase>, code: u64) -> Interpretation {
    let n = base.len();
    Interpretation::from_indices(base.clone(), (0..n).filter(|k| code >> (n - 1 - k) & 1 == 1))
}

pub fn all_interpretations(base: &Arc<HerbrandBase>) -> Vec<Interpretation> {
    assert!(base.len() <= 16);
    (0..1u64 << base.len()).map(|c| from_code(base, c)).collect()
}

/// Models of a conjunction of formulas, by testing every interpretation.
pub fn brute_models(fs: &[&Formula], base: &Arc<HerbrandBase>) -> Vec<Interpretation> {
    all_interpretations(base)
        .into_iter()
        .filter(|i| fs.iter().all(|f| naive_eval(f, i)))
        .collect()
}

/// A formula grounded once by substitution, as lists of base indices.
pub enum Grounded {
    // (head, body) per ground clause
    Cnf(Vec<(Vec<usize>, Vec<usize>)>),
    // (index, sign) per ground cube literal
    Dnf(Vec<Vec<(usize, bool)>>),
}

impl Grounded {
    pub fn new(f: &Formula, base: &HerbrandBase) -> Grounded {
        let hu = base.universe();
        let idx = |a: &Atom| base.index_of_atom(a).expect("ground atom in base");
        match f {
            Formula::Cnf(t) => Grounded::Cnf(
                t.clauses()
                    .iter()
                    .flat_map(|c| ground_instances(c, hu).expect("groundable"))
                    .map(|g| (g.head.iter().map(idx).collect(), g.body.iter().map(idx).collect()))
                    .collect(),
            ),
            Formula::Dnf(d) => Grounded::Dnf(
                d.cubes
                    .iter()
                    .flat_map(|c| ground_instances(c, hu).expect("groundable"))
                    .map(|g| g.literals.iter().map(|l| (idx(&l.atom), l.positive)).collect())
                    .collect(),
            ),
        }
    }

    pub fn eval(&self, i: &Interpretation) -> bool {
        match self {
            Grounded::Cnf(cs) => cs
                .iter()
                .all(|(h, b)| h.iter().any(|&k| i.is_true(k)) || b.iter().any(|&k| !i.is_true(k))),
            Grounded::Dnf(ds) => ds.iter().any(|c| c.iter().all(|&(k, s)| i.is_true(k) == s)),
        }
    }
}

/// Every `j` on `hb` some extension of which on `hb_e` models `e`: project
/// each model found by exhaustive search.
pub fn brute_partial_models(e: &ClausalTheory, hb_e: &Arc<HerbrandBase>, hb: &Arc<HerbrandBase>) -> Vec<Interpretation> {
    let g = Grounded::new(&Formula::Cnf(e.clone()), hb_e);
    let emb = hb.embedding_into(hb_e).expect("subbase");
    let mut out: Vec<Interpretation> = all_interpretations(hb_e)
        .into_iter()
        .filter(|m| g.eval(m))
        .map(|m| Interpretation::from_indices(hb.clone(), (0..emb.len()).filter(|&k| m.is_true(emb[k]))))
        .collect();
    out.sort();
    out.dedup();
    out
}

pub fn subset(a: &Interpretation, b: &Interpretation) -> bool {
    a.true_indices().all(|k| b.is_true(k))
}

/// Random signature drawn from a small fixed menu, within an atom budget.
pub fn random_base(rng: &mut ChaCha8Rng, max_atoms: usize) -> Arc<HerbrandBase> {
    loop {
        let consts: Vec<&str> = ["a", "b", "c"][..rng.gen_range(1..=3)].to_vec();
        let menu = [("p", 1), ("q", 1), ("r", 2), ("s", 0), ("t", 0), ("u", 1)];
        let mut sig = Signature::new();
        for (name, arity) in menu {
            if rng.gen_bool(0.5) {
                sig = sig.with(name, arity);
            }
        }
        let base = HerbrandBase::new(sig, consts);
        if !base.is_empty() && base.len() <= max_atoms {
            return base.shared();
        }
    }
}

pub fn random_prop_base(rng: &mut ChaCha8Rng, min: usize, max: usize) -> Arc<HerbrandBase> {
    let n = rng.gen_range(min..=max);
    let names: Vec<String> = (0..n).map(|k| format!("x{k}")).collect();
    HerbrandBase::propositional(&names).shared()
}

fn random_term(rng: &mut ChaCha8Rng, base: &HerbrandBase, vars: &[&str]) -> Term {
    if !vars.is_empty() && (base.universe().is_empty() || rng.gen_bool(0.6)) {
        Term::var(*vars.choose(rng).expect("vars"))
    } else {
        Term::constant(base.universe().choose(rng).expect("universe").as_str())
    }
}

pub fn random_atom(rng: &mut ChaCha8Rng, base: &HerbrandBase, vars: &[&str]) -> Atom {
    let preds: Vec<(&str, usize)> = base
        .signature()
        .iter()
        .filter(|&(_, arity)| arity == 0 || !base.universe().is_empty())
        .collect();
    let (p, arity) = *preds.choose(rng).expect("predicates");
    Atom::new(p, (0..arity).map(|_| random_term(rng, base, vars)).collect())
}

pub fn random_clause(rng: &mut ChaCha8Rng, base: &HerbrandBase, horn: bool) -> Clause {
    let vars = ["X", "Y"];
    let heads = if horn { rng.gen_range(0..=1) } else { rng.gen_range(0..=2) };
    let bodies = rng.gen_range(0..=2);
    let head = (0..heads).map(|_| random_atom(rng, base, &vars)).collect();
    let body = (0..bodies).map(|_| random_atom(rng, base, &vars)).collect();
    Clause::new(head, body)
}

/// Random theory; clauses with variables only in the body are allowed.
pub fn random_theory(rng: &mut ChaCha8Rng, base: &HerbrandBase, max_clauses: usize, horn: bool) -> ClausalTheory {
    let n = rng.gen_range(0..=max_clauses);
    ClausalTheory::new((0..n).map(|_| random_clause(rng, base, horn)))
}

pub fn random_cube(rng: &mut ChaCha8Rng, base: &HerbrandBase, positive: bool, max_lits: usize) -> Cube {
    let vars = ["X", "Y"];
    let n = rng.gen_range(0..=max_lits);
    Cube::new(
        (0..n)
            .map(|_| {
                let a = random_atom(rng, base, &vars);
                if positive || rng.gen_bool(0.5) {
                    Literal::pos(a)
                } else {
                    Literal::neg(a)
                }
            })
            .collect(),
    )
}

pub fn random_dnf(rng: &mut ChaCha8Rng, base: &HerbrandBase, max_cubes: usize, positive: bool) -> DnfFormula {
    let n = rng.gen_range(0..=max_cubes);
    DnfFormula::new((0..n).map(|_| random_cube(rng, base, positive, 3)).collect())
}

/// Random nonempty DNF⁺ whose cubes each have at least one literal.
pub fn random_dnf_plus(rng: &mut ChaCha8Rng, base: &HerbrandBase) -> DnfFormula {
    let n = rng.gen_range(1..=2);
    DnfFormula::new(
        (0..n)
            .map(|_| {
                let mut c = random_cube(rng, base, true, 2);
                if c.literals.is_empty() {
                    c = Cube::positive(vec![random_atom(rng, base, &["X"])]);
                }
                c
            })
            .collect(),
    )
}

/// A random subbase: a subset of the predicates over a subset of the constants.
pub fn random_subbase(rng: &mut ChaCha8Rng, base: &HerbrandBase) -> Arc<HerbrandBase> {
    loop {
        let sig: Signature = base
            .signature()
            .iter()
            .filter(|_| rng.gen_bool(0.6))
            .map(|(p, a)| (p.to_string(), a))
            .collect();
        let consts: Vec<String> = base.universe().iter().filter(|_| rng.gen_bool(0.7)).cloned().collect();
        let sub = HerbrandBase::new(sig, consts);
        if !sub.is_empty() {
            return sub.shared();
        }
    }
}
