//! Substitutions, grounding, and formulas compiled against a base.

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use super::base::HerbrandBase;
use super::syntax::{Atom, ClausalTheory, Clause, Cube, DnfFormula, Literal, Term};
use crate::error::{Error, Result};

/// Variable to constant bindings.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Substitution(BTreeMap<String, String>);

impl Substitution {
    pub fn new() -> Self {
        Substitution::default()
    }

    pub fn bind(&mut self, var: impl Into<String>, constant: impl Into<String>) {
        self.0.insert(var.into(), constant.into());
    }

    pub fn get(&self, var: &str) -> Option<&str> {
        self.0.get(var).map(String::as_str)
    }

    pub fn apply_term(&self, t: &Term) -> Term {
        match t {
            Term::Var(v) => match self.get(v) {
                Some(c) => Term::Const(c.to_string()),
                None => t.clone(),
            },
            c => c.clone(),
        }
    }

    pub fn apply_atom(&self, a: &Atom) -> Atom {
        Atom::new(a.predicate.clone(), a.args.iter().map(|t| self.apply_term(t)).collect())
    }

    pub fn apply_clause(&self, c: &Clause) -> Clause {
        Clause::new(
            c.head.iter().map(|a| self.apply_atom(a)).collect(),
            c.body.iter().map(|a| self.apply_atom(a)).collect(),
        )
    }

    pub fn apply_cube(&self, c: &Cube) -> Cube {
        Cube::new(
            c.literals
                .iter()
                .map(|l| Literal {
                    atom: self.apply_atom(&l.atom),
                    positive: l.positive,
                })
                .collect(),
        )
    }
}

/// A clause or cube to be grounded.
pub trait Groundable {
    fn variable_names(&self) -> Vec<String>;
    fn substitute(&self, s: &Substitution) -> Self;
}

impl Groundable for Clause {
    fn variable_names(&self) -> Vec<String> {
        self.variables().into_iter().map(String::from).collect()
    }

    fn substitute(&self, s: &Substitution) -> Self {
        s.apply_clause(self)
    }
}

impl Groundable for Cube {
    fn variable_names(&self) -> Vec<String> {
        self.variables().into_iter().map(String::from).collect()
    }

    fn substitute(&self, s: &Substitution) -> Self {
        s.apply_cube(self)
    }
}

/// Every `fθ` for total substitutions `θ` of `f`'s variables into `universe`.
///
/// Variables are bound in name order and constants in sorted order, so the
/// result is in lexicographic binding order; there are `|universe|^#vars`
/// instances.
pub fn ground_instances<F: Groundable>(f: &F, universe: &[String]) -> Result<Vec<F>> {
    let vars = f.variable_names();
    if vars.is_empty() {
        return Ok(vec![f.substitute(&Substitution::new())]);
    }
    if universe.is_empty() {
        return Err(Error::VariableInGroundContext);
    }
    let mut constants = universe.to_vec();
    constants.sort();
    constants.dedup();
    let mut out = Vec::new();
    let mut codes = vec![0usize; vars.len()];
    loop {
        let mut s = Substitution::new();
        for (v, &c) in vars.iter().zip(&codes) {
            s.bind(v.clone(), constants[c].clone());
        }
        out.push(f.substitute(&s));
        // odometer increment, last variable fastest
        let mut pos = vars.len();
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            codes[pos] += 1;
            if codes[pos] < constants.len() {
                break;
            }
            codes[pos] = 0;
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Arg {
    Const(usize),
    Var(usize),
}

#[derive(Debug, Clone)]
struct CompiledLiteral {
    offset: usize,
    args: Vec<Arg>,
    positive: bool,
}

/// An existential conjunction of literals resolved against one base.
///
/// Variables are numbered by first occurrence; `checks[d]` lists the
/// literals that become ground once the first `d` variables are bound.
#[derive(Debug, Clone)]
pub(crate) struct Conjunction {
    literals: Vec<CompiledLiteral>,
    num_vars: usize,
    checks: Vec<Vec<usize>>,
}

impl Conjunction {
    pub(crate) fn compile(literals: &[Literal], base: &HerbrandBase) -> Result<Self> {
        let mut vars: Vec<&str> = Vec::new();
        let mut compiled = Vec::with_capacity(literals.len());
        let mut depth = Vec::with_capacity(literals.len());
        for l in literals {
            let (offset, arity) = base.predicate_block(&l.atom.predicate).ok_or_else(|| {
                Error::signature(format!("predicate {} is not in the base", l.atom.predicate))
            })?;
            if arity != l.atom.arity() {
                return Err(Error::signature(format!(
                    "predicate {} has arity {arity}, used with {}",
                    l.atom.predicate,
                    l.atom.arity()
                )));
            }
            let mut d = 0;
            let mut args = Vec::with_capacity(arity);
            for t in &l.atom.args {
                match t {
                    Term::Const(c) => {
                        let k = base.constant_index(c).ok_or_else(|| {
                            Error::signature(format!("constant {c} is not in the universe"))
                        })?;
                        args.push(Arg::Const(k));
                    }
                    Term::Var(v) => {
                        let k = match vars.iter().position(|x| x == v) {
                            Some(k) => k,
                            None => {
                                vars.push(v);
                                vars.len() - 1
                            }
                        };
                        d = d.max(k + 1);
                        args.push(Arg::Var(k));
                    }
                }
            }
            compiled.push(CompiledLiteral {
                offset,
                args,
                positive: l.positive,
            });
            depth.push(d);
        }
        let mut checks = vec![Vec::new(); vars.len() + 1];
        for (k, &d) in depth.iter().enumerate() {
            checks[d].push(k);
        }
        Ok(Conjunction {
            literals: compiled,
            num_vars: vars.len(),
            checks,
        })
    }

    fn atom_index(&self, lit: &CompiledLiteral, binding: &[usize], base: &HerbrandBase) -> usize {
        let n = base.universe().len();
        lit.args
            .iter()
            .fold(0, |acc, a| {
                acc * n
                    + match *a {
                        Arg::Const(c) => c,
                        Arg::Var(v) => binding[v],
                    }
            })
            + lit.offset
    }

    /// Whether some grounding makes every literal true under `truth`.
    pub(crate) fn satisfiable_under(&self, base: &HerbrandBase, truth: &dyn Fn(usize) -> bool) -> bool {
        let mut binding = vec![0; self.num_vars];
        self.search(base, 0, &mut binding, &mut |_| ControlFlow::Break(()), Some(truth))
            .is_break()
    }

    /// Calls `visit` with the atom indices and signs of every grounding.
    pub(crate) fn for_each_grounding(
        &self,
        base: &HerbrandBase,
        mut visit: impl FnMut(&[(usize, bool)]),
    ) {
        let mut binding = vec![0; self.num_vars];
        let mut buf = Vec::with_capacity(self.literals.len());
        let _ = self.search(
            base,
            0,
            &mut binding,
            &mut |b| {
                buf.clear();
                for lit in &self.literals {
                    buf.push((self.atom_index(lit, b, base), lit.positive));
                }
                visit(&buf);
                ControlFlow::Continue(())
            },
            None,
        );
    }

    fn search(
        &self,
        base: &HerbrandBase,
        depth: usize,
        binding: &mut Vec<usize>,
        leaf: &mut dyn FnMut(&[usize]) -> ControlFlow<()>,
        truth: Option<&dyn Fn(usize) -> bool>,
    ) -> ControlFlow<()> {
        if let Some(truth) = truth {
            for &k in &self.checks[depth] {
                let lit = &self.literals[k];
                if truth(self.atom_index(lit, binding, base)) != lit.positive {
                    return ControlFlow::Continue(());
                }
            }
        }
        if depth == self.num_vars {
            return leaf(binding);
        }
        for c in 0..base.universe().len() {
            binding[depth] = c;
            self.search(base, depth + 1, binding, leaf, truth)?;
        }
        ControlFlow::Continue(())
    }
}

/// A ground clause over atom indices of one base.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroundClause {
    pub pos: Vec<usize>,
    pub neg: Vec<usize>,
}

impl GroundClause {
    pub fn is_tautology(&self) -> bool {
        self.pos.iter().any(|p| self.neg.contains(p))
    }
}

/// A ground conjunction over atom indices: `(index, positive)` pairs.
pub type GroundCube = Vec<(usize, bool)>;

fn normalise_clause(lits: &[(usize, bool)]) -> GroundClause {
    let mut pos: Vec<usize> = lits.iter().filter(|l| !l.1).map(|l| l.0).collect();
    let mut neg: Vec<usize> = lits.iter().filter(|l| l.1).map(|l| l.0).collect();
    pos.sort_unstable();
    pos.dedup();
    neg.sort_unstable();
    neg.dedup();
    GroundClause { pos, neg }
}

/// Grounds every clause of a theory over the base's universe. Tautologies are
/// dropped and duplicates removed.
pub fn ground_theory(t: &ClausalTheory, base: &HerbrandBase) -> Result<Vec<GroundClause>> {
    let mut out = Vec::new();
    for c in t.clauses() {
        // a clause is violated by the groundings of its negation
        let violation: Vec<Literal> = c.negate().literals;
        let conj = Conjunction::compile(&violation, base)?;
        conj.for_each_grounding(base, |lits| {
            let gc = normalise_clause(lits);
            if !gc.is_tautology() {
                out.push(gc);
            }
        });
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Grounds a DNF into a disjunction of ground cubes. Contradictory cubes are dropped.
pub fn ground_dnf(d: &DnfFormula, base: &HerbrandBase) -> Result<Vec<GroundCube>> {
    let mut out = Vec::new();
    for cube in &d.cubes {
        let conj = Conjunction::compile(&cube.literals, base)?;
        conj.for_each_grounding(base, |lits| {
            let mut g: GroundCube = lits.to_vec();
            g.sort_unstable();
            g.dedup();
            let contradictory = g.windows(2).any(|w| w[0].0 == w[1].0);
            if !contradictory {
                out.push(g);
            }
        });
    }
    out.sort();
    out.dedup();
    Ok(out)
}
