//! Function-free first-order syntax: terms, atoms, literals, clauses and cubes.

use std::collections::BTreeSet;
use std::fmt;

/// A term is either a constant or a variable. The two live in disjoint namespaces.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Const(String),
    Var(String),
}

impl Term {
    pub fn constant(name: impl Into<String>) -> Self {
        Term::Const(name.into())
    }

    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(name.into())
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn name(&self) -> &str {
        match self {
            Term::Const(n) | Term::Var(n) => n,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub predicate: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(predicate: impl Into<String>, args: Vec<Term>) -> Self {
        Atom {
            predicate: predicate.into(),
            args,
        }
    }

    /// A 0-ary (propositional) atom.
    pub fn prop(predicate: impl Into<String>) -> Self {
        Atom::new(predicate, Vec::new())
    }

    /// Shorthand for a ground atom over constants.
    pub fn ground(predicate: impl Into<String>, args: &[&str]) -> Self {
        Atom::new(predicate, args.iter().map(|a| Term::constant(*a)).collect())
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(|t| !t.is_var())
    }

    pub fn variables(&self) -> impl Iterator<Item = &str> {
        self.args.iter().filter_map(|t| match t {
            Term::Var(v) => Some(v.as_str()),
            Term::Const(_) => None,
        })
    }

    pub fn constants(&self) -> impl Iterator<Item = &str> {
        self.args.iter().filter_map(|t| match t {
            Term::Const(c) => Some(c.as_str()),
            Term::Var(_) => None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub atom: Atom,
    pub positive: bool,
}

impl Literal {
    pub fn pos(atom: Atom) -> Self {
        Literal {
            atom,
            positive: true,
        }
    }

    pub fn neg(atom: Atom) -> Self {
        Literal {
            atom,
            positive: false,
        }
    }

    pub fn negated(&self) -> Self {
        Literal {
            atom: self.atom.clone(),
            positive: !self.positive,
        }
    }
}

/// `∀(head₁ ∨ … ∨ headₘ ← body₁ ∧ … ∧ bodyₙ)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Clause {
    pub head: Vec<Atom>,
    pub body: Vec<Atom>,
}

impl Clause {
    pub fn new(head: Vec<Atom>, body: Vec<Atom>) -> Self {
        Clause { head, body }
    }

    pub fn fact(atom: Atom) -> Self {
        Clause::new(vec![atom], Vec::new())
    }

    /// `← body`.
    pub fn negative(body: Vec<Atom>) -> Self {
        Clause::new(Vec::new(), body)
    }

    pub fn is_horn(&self) -> bool {
        self.head.len() <= 1
    }

    pub fn is_empty(&self) -> bool {
        self.head.is_empty() && self.body.is_empty()
    }

    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        self.head.iter().chain(self.body.iter())
    }

    /// The clause as a disjunction of literals.
    pub fn literals(&self) -> impl Iterator<Item = Literal> + '_ {
        self.head
            .iter()
            .cloned()
            .map(Literal::pos)
            .chain(self.body.iter().cloned().map(Literal::neg))
    }

    pub fn variables(&self) -> BTreeSet<&str> {
        self.atoms().flat_map(Atom::variables).collect()
    }

    /// Variables in order of first occurrence (head first, then body).
    pub fn variable_order(&self) -> Vec<String> {
        first_occurrence(self.atoms())
    }

    /// De Morgan dual: the cube `¬head₁ ∧ … ∧ body₁ ∧ …`.
    pub fn negate(&self) -> Cube {
        Cube::new(self.literals().map(|l| l.negated()).collect())
    }
}

fn first_occurrence<'a>(atoms: impl Iterator<Item = &'a Atom>) -> Vec<String> {
    let mut seen = Vec::<String>::new();
    for v in atoms.flat_map(Atom::variables) {
        if !seen.iter().any(|s| s == v) {
            seen.push(v.to_string());
        }
    }
    seen
}

/// A conjunction of universally quantified clauses, with set semantics.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ClausalTheory {
    clauses: Vec<Clause>,
}

impl ClausalTheory {
    pub fn new(clauses: impl IntoIterator<Item = Clause>) -> Self {
        let mut t = ClausalTheory::default();
        for c in clauses {
            t.push(c);
        }
        t
    }

    /// Adds a clause unless a syntactically equal one is already present.
    pub fn push(&mut self, clause: Clause) {
        if !self.clauses.contains(&clause) {
            self.clauses.push(clause);
        }
    }

    pub fn extend(&mut self, other: &ClausalTheory) {
        for c in &other.clauses {
            self.push(c.clone());
        }
    }

    pub fn conjoin(&self, other: &ClausalTheory) -> ClausalTheory {
        let mut t = self.clone();
        t.extend(other);
        t
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn is_horn(&self) -> bool {
        self.clauses.iter().all(Clause::is_horn)
    }

    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        self.clauses.iter().flat_map(Clause::atoms)
    }

    /// Disjunction of the negated clauses.
    pub fn negate(&self) -> DnfFormula {
        DnfFormula::new(self.clauses.iter().map(Clause::negate).collect())
    }
}

/// `∃(l₁ ∧ … ∧ lₘ)`. The empty cube is `True`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Cube {
    pub literals: Vec<Literal>,
}

impl Cube {
    pub fn new(literals: Vec<Literal>) -> Self {
        Cube { literals }
    }

    pub fn positive(atoms: Vec<Atom>) -> Self {
        Cube::new(atoms.into_iter().map(Literal::pos).collect())
    }

    pub fn is_positive(&self) -> bool {
        self.literals.iter().all(|l| l.positive)
    }

    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        self.literals.iter().map(|l| &l.atom)
    }

    pub fn variables(&self) -> BTreeSet<&str> {
        self.atoms().flat_map(Atom::variables).collect()
    }

    pub fn variable_order(&self) -> Vec<String> {
        first_occurrence(self.atoms())
    }

    /// De Morgan dual: the clause whose head holds the negated literals.
    pub fn negate(&self) -> Clause {
        let mut head = Vec::new();
        let mut body = Vec::new();
        for l in &self.literals {
            if l.positive {
                body.push(l.atom.clone());
            } else {
                head.push(l.atom.clone());
            }
        }
        Clause::new(head, body)
    }

    /// Renames variables to `V1, V2, …` in order of first occurrence.
    pub fn canonical_variables(&self) -> Cube {
        let order = self.variable_order();
        let rename = |t: &Term| match t {
            Term::Var(v) => {
                let k = order.iter().position(|o| o == v).unwrap_or(0);
                Term::Var(format!("V{}", k + 1))
            }
            c => c.clone(),
        };
        Cube::new(
            self.literals
                .iter()
                .map(|l| Literal {
                    atom: Atom::new(l.atom.predicate.clone(), l.atom.args.iter().map(rename).collect()),
                    positive: l.positive,
                })
                .collect(),
        )
    }
}

/// A disjunction of existentially quantified cubes. No cubes is `False`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct DnfFormula {
    pub cubes: Vec<Cube>,
}

impl DnfFormula {
    pub fn new(cubes: Vec<Cube>) -> Self {
        DnfFormula { cubes }
    }

    pub fn falsum() -> Self {
        DnfFormula::default()
    }

    pub fn verum() -> Self {
        DnfFormula::new(vec![Cube::default()])
    }

    pub fn is_dnf_plus(&self) -> bool {
        self.cubes.iter().all(Cube::is_positive)
    }

    pub fn or(&self, cube: Cube) -> DnfFormula {
        let mut cubes = self.cubes.clone();
        cubes.push(cube);
        DnfFormula::new(cubes)
    }

    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        self.cubes.iter().flat_map(Cube::atoms)
    }

    /// Conjunction of the negated cubes.
    pub fn negate(&self) -> ClausalTheory {
        ClausalTheory::new(self.cubes.iter().map(Cube::negate))
    }
}

/// A hypothesis or example formula: either a clausal theory or a DNF.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Cnf(ClausalTheory),
    Dnf(DnfFormula),
}

impl Formula {
    pub fn negate(&self) -> Formula {
        match self {
            Formula::Cnf(t) => Formula::Dnf(t.negate()),
            Formula::Dnf(d) => Formula::Cnf(d.negate()),
        }
    }

    pub fn atoms(&self) -> Box<dyn Iterator<Item = &Atom> + '_> {
        match self {
            Formula::Cnf(t) => Box::new(t.atoms()),
            Formula::Dnf(d) => Box::new(d.atoms()),
        }
    }

    pub fn constants(&self) -> BTreeSet<&str> {
        self.atoms().flat_map(Atom::constants).collect()
    }

    pub fn is_dnf_plus(&self) -> bool {
        matches!(self, Formula::Dnf(d) if d.is_dnf_plus())
    }

    pub fn as_dnf(&self) -> Option<&DnfFormula> {
        match self {
            Formula::Dnf(d) => Some(d),
            Formula::Cnf(_) => None,
        }
    }
}

impl From<ClausalTheory> for Formula {
    fn from(t: ClausalTheory) -> Self {
        Formula::Cnf(t)
    }
}

impl From<DnfFormula> for Formula {
    fn from(d: DnfFormula) -> Self {
        Formula::Dnf(d)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.predicate)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            for (k, a) in self.args.iter().enumerate() {
                if k > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{a}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            f.write_str("~")?;
        }
        write!(f, "{}", self.atom)
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |atoms: &[Atom], sep: &str| {
            atoms
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(sep)
        };
        f.write_str(&join(&self.head, " ; "))?;
        if !self.body.is_empty() || self.head.is_empty() {
            if !self.head.is_empty() {
                f.write_str(" ")?;
            }
            f.write_str(":-")?;
            if !self.body.is_empty() {
                write!(f, " {}", join(&self.body, ", "))?;
            } else {
                f.write_str(" ")?;
            }
        }
        f.write_str(".")
    }
}

impl fmt::Display for ClausalTheory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, c) in self.clauses.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Display for Cube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.literals.is_empty() {
            return f.write_str("true");
        }
        for (k, l) in self.literals.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl fmt::Display for DnfFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.cubes.is_empty() {
            return f.write_str("false");
        }
        for (k, c) in self.cubes.iter().enumerate() {
            if k > 0 {
                f.write_str(" | ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Cnf(t) => write!(f, "{t}"),
            Formula::Dnf(d) => write!(f, "{d}"),
        }
    }
}
