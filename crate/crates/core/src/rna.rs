//! Extended examples from palindrome annotations of an RNA sequence.
//!
//! Palindromes are candidate helices. Structural relations between two
//! palindromes are observed only if both are helices, and incompatible
//! palindromes cannot both be helices.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::compat::{Possibilities, Possibility};
use crate::error::{Error, Result};
use crate::logic::{Atom, ClausalTheory, Clause, GroundAtom, HerbrandBase, Interpretation, Signature, Term};
use crate::models::ExtendedExample;

pub const HELIX: &str = "hel";
pub const INCOMPATIBLE: &str = "#";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Relation {
    Precedes,
    Overlaps,
    Includes,
}

impl Relation {
    pub const ALL: [Relation; 3] = [Relation::Includes, Relation::Overlaps, Relation::Precedes];

    pub fn predicate(self) -> &'static str {
        match self {
            Relation::Precedes => "P",
            Relation::Overlaps => "O",
            Relation::Includes => "I",
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.predicate())
    }
}

impl FromStr for Relation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "P" => Ok(Relation::Precedes),
            "O" => Ok(Relation::Overlaps),
            "I" => Ok(Relation::Includes),
            _ => Err(Error::MalformedRelations(format!("unknown relation `{s}`"))),
        }
    }
}

/// Palindromes, their declared relations and incompatibilities.
#[derive(Debug, Clone, PartialEq)]
pub struct PalindromeSet {
    names: Vec<String>,
    relations: Vec<(Relation, String, String)>,
    incompatible: Vec<(String, String)>,
    /// Probability per structure, keyed by index into
    /// [`maximal_compatible_subsets`].
    weights: Option<BTreeMap<usize, f64>>,
}

impl PalindromeSet {
    pub fn new(
        names: Vec<String>,
        relations: Vec<(Relation, String, String)>,
        incompatible: Vec<(String, String)>,
    ) -> Result<Self> {
        let known: BTreeSet<&str> = names.iter().map(String::as_str).collect();
        if known.len() != names.len() {
            return Err(Error::MalformedRelations("duplicate palindrome name".into()));
        }
        let check = |n: &str| {
            if known.contains(n) {
                Ok(())
            } else {
                Err(Error::MalformedRelations(format!("unknown palindrome `{n}`")))
            }
        };
        let mut pairs = BTreeSet::new();
        for (r, a, b) in &relations {
            check(a)?;
            check(b)?;
            if !pairs.insert((a.clone(), b.clone())) {
                return Err(Error::MalformedRelations(format!(
                    "more than one relation declared for ({a}, {b}), last {r}"
                )));
            }
        }
        let mut seen = BTreeSet::new();
        let mut incompat = Vec::new();
        for (a, b) in incompatible {
            check(&a)?;
            check(&b)?;
            if a == b {
                return Err(Error::MalformedRelations(format!("palindrome `{a}` incompatible with itself")));
            }
            let key = if a < b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
            if seen.insert(key) {
                incompat.push((a, b));
            }
        }
        Ok(PalindromeSet {
            names,
            relations,
            incompatible: incompat,
            weights: None,
        })
    }

    /// Attaches structure weights; they must sum to 1 within 1e-9.
    pub fn with_weights(mut self, weights: BTreeMap<usize, f64>) -> Result<Self> {
        let total: f64 = weights.values().sum();
        if weights.values().any(|w| !(0.0..=1.0).contains(w)) || (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidWeights(format!("structure weights sum to {total}")));
        }
        self.weights = Some(weights);
        Ok(self)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn relations(&self) -> &[(Relation, String, String)] {
        &self.relations
    }

    pub fn incompatible(&self) -> &[(String, String)] {
        &self.incompatible
    }

    pub fn weights(&self) -> Option<&BTreeMap<usize, f64>> {
        self.weights.as_ref()
    }

    fn index(&self, name: &str) -> usize {
        self.names.iter().position(|n| n == name).expect("validated name")
    }

    fn conflicts(&self, a: usize, b: usize) -> bool {
        self.incompatible.iter().any(|(x, y)| {
            let (x, y) = (self.index(x), self.index(y));
            (x, y) == (a, b) || (y, x) == (a, b)
        })
    }

    fn structural_signature() -> Signature {
        Relation::ALL
            .iter()
            .fold(Signature::new(), |s, r| s.with(r.predicate(), 2))
    }

    /// Learning base: all structural atoms over the palindromes.
    pub fn learning_base(&self) -> Arc<HerbrandBase> {
        HerbrandBase::new(Self::structural_signature(), self.names.iter().cloned()).shared()
    }

    pub fn assumption_base(&self) -> Arc<HerbrandBase> {
        HerbrandBase::new(Signature::new().with(HELIX, 1), self.names.iter().cloned()).shared()
    }

    pub fn extended_base(&self) -> Arc<HerbrandBase> {
        let sig = Self::structural_signature().with(HELIX, 1).with(INCOMPATIBLE, 2);
        HerbrandBase::new(sig, self.names.iter().cloned()).shared()
    }
}

/// `e = F ∧ B ∧ L`: incompatibility facts, the helix exclusion constraint
/// and one gated rule per declared relation.
pub fn rna_theory(ps: &PalindromeSet) -> ClausalTheory {
    let c = |n: &str| Term::constant(n);
    let hel = |n: &str| Atom::new(HELIX, vec![c(n)]);
    let mut t = ClausalTheory::default();
    for (a, b) in &ps.incompatible {
        t.push(Clause::fact(Atom::new(INCOMPATIBLE, vec![c(a), c(b)])));
    }
    t.push(Clause::negative(vec![
        Atom::new(INCOMPATIBLE, vec![Term::var("X"), Term::var("Y")]),
        Atom::new(HELIX, vec![Term::var("X")]),
        Atom::new(HELIX, vec![Term::var("Y")]),
    ]));
    for (r, a, b) in &ps.relations {
        t.push(Clause::new(
            vec![Atom::new(r.predicate(), vec![c(a), c(b)])],
            vec![hel(a), hel(b)],
        ));
    }
    t
}

pub fn build_rna_example(ps: &PalindromeSet) -> Result<ExtendedExample> {
    ExtendedExample::new(rna_theory(ps), ps.extended_base(), ps.learning_base())?
        .with_assumption_base(ps.assumption_base())
}

/// A maximal set of mutually compatible palindromes and its structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureCandidate {
    pub helices: Vec<String>,
    pub ground_relations: Vec<GroundAtom>,
}

impl StructureCandidate {
    /// The structure as an interpretation on the learning base.
    pub fn interpretation(&self, learning_base: &Arc<HerbrandBase>) -> Result<Interpretation> {
        Interpretation::from_atoms(learning_base.clone(), self.ground_relations.iter())
    }
}

fn bron_kerbosch(
    adj: &[Vec<bool>],
    r: &mut Vec<usize>,
    mut p: Vec<usize>,
    mut x: Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if p.is_empty() && x.is_empty() {
        let mut clique = r.clone();
        clique.sort_unstable();
        out.push(clique);
        return;
    }
    let pivot = *p.iter().chain(x.iter()).max_by_key(|&&u| p.iter().filter(|&&v| adj[u][v]).count()).expect("non-empty");
    let branch: Vec<usize> = p.iter().copied().filter(|&v| !adj[pivot][v]).collect();
    for v in branch {
        r.push(v);
        let np = p.iter().copied().filter(|&u| adj[v][u]).collect();
        let nx = x.iter().copied().filter(|&u| adj[v][u]).collect();
        bron_kerbosch(adj, r, np, nx, out);
        r.pop();
        p.retain(|&u| u != v);
        x.push(v);
    }
}

/// Inclusion-maximal sets of pairwise compatible palindromes, ordered by
/// their palindrome index lists.
pub fn maximal_compatible_subsets(ps: &PalindromeSet) -> Vec<StructureCandidate> {
    let n = ps.names.len();
    // compatibility graph: maximal cliques are maximal independent sets of the conflicts
    let adj: Vec<Vec<bool>> = (0..n)
        .map(|a| (0..n).map(|b| a != b && !ps.conflicts(a, b)).collect())
        .collect();
    let mut sets = Vec::new();
    bron_kerbosch(&adj, &mut Vec::new(), (0..n).collect(), Vec::new(), &mut sets);
    sets.sort();
    let lb = ps.learning_base();
    sets.into_iter()
        .map(|set| {
            let helices: Vec<String> = set.iter().map(|&k| ps.names[k].clone()).collect();
            let mut ground: Vec<GroundAtom> = ps
                .relations
                .iter()
                .filter(|(_, a, b)| helices.contains(a) && helices.contains(b))
                .map(|(r, a, b)| GroundAtom::new(r.predicate(), &[a, b]))
                .collect();
            ground.sort_by_key(|g| lb.index_of(g));
            StructureCandidate {
                helices,
                ground_relations: ground,
            }
        })
        .collect()
}

/// Single-model possibilities, one per structure, weighted when weights
/// are present.
pub fn structure_possibilities(ps: &PalindromeSet) -> Result<Possibilities> {
    let lb = ps.learning_base();
    let candidates = maximal_compatible_subsets(ps);
    let items = candidates
        .iter()
        .enumerate()
        .map(|(k, s)| {
            let theory = s.interpretation(&lb)?.ct();
            Ok(match &ps.weights {
                None => Possibility::new(theory, lb.clone()),
                Some(w) => {
                    let weight = *w.get(&k).ok_or_else(|| {
                        Error::InvalidWeights(format!("no weight for structure {k}"))
                    })?;
                    Possibility::weighted(theory, lb.clone(), weight)
                }
            })
        })
        .collect::<Result<Vec<_>>>()?;
    if let Some(w) = &ps.weights {
        if let Some(extra) = w.keys().find(|&&k| k >= candidates.len()) {
            return Err(Error::InvalidWeights(format!("weight for unknown structure {extra}")));
        }
    }
    Possibilities::new(items)
}

/// The `k` heaviest structures, weights kept raw.
#[derive(Debug, Clone, PartialEq)]
pub struct TopStructures {
    pub kept: Vec<(usize, StructureCandidate, f64)>,
    pub retained_mass: f64,
}

impl TopStructures {
    /// The kept structures as possibilities; weights are rescaled to sum to
    /// one only when `renormalize` is set, and dropped otherwise.
    pub fn possibilities(&self, learning_base: &Arc<HerbrandBase>, renormalize: bool) -> Result<Possibilities> {
        let items = self
            .kept
            .iter()
            .map(|(_, s, w)| {
                let theory = s.interpretation(learning_base)?.ct();
                Ok(if renormalize {
                    Possibility::weighted(theory, learning_base.clone(), w / self.retained_mass)
                } else {
                    Possibility::new(theory, learning_base.clone())
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Possibilities::new(items)
    }
}

pub fn top_k_structures(ps: &PalindromeSet, k: usize) -> Result<TopStructures> {
    let weights = ps.weights.as_ref().ok_or(Error::MissingWeights)?;
    let candidates = maximal_compatible_subsets(ps);
    let mut ranked = candidates
        .into_iter()
        .enumerate()
        .map(|(i, s)| {
            let w = *weights
                .get(&i)
                .ok_or_else(|| Error::InvalidWeights(format!("no weight for structure {i}")))?;
            Ok((i, s, w))
        })
        .collect::<Result<Vec<_>>>()?;
    // heaviest first, lower index on ties
    ranked.sort_by(|a, b| b.2.total_cmp(&a.2).then(a.0.cmp(&b.0)));
    ranked.truncate(k);
    let retained_mass = ranked.iter().map(|(_, _, w)| w).sum();
    Ok(TopStructures {
        kept: ranked,
        retained_mass,
    })
}
