//! Herbrand bases and (partial) interpretations.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use super::syntax::{Atom, ClausalTheory, Clause};
use crate::error::{Error, Result};

/// Predicate name to arity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Signature(BTreeMap<String, usize>);

impl Signature {
    pub fn new() -> Self {
        Signature::default()
    }

    pub fn with(mut self, predicate: impl Into<String>, arity: usize) -> Self {
        self.0.insert(predicate.into(), arity);
        self
    }

    /// Adds a predicate; fails if it is already declared with another arity.
    pub fn declare(&mut self, predicate: &str, arity: usize) -> Result<()> {
        match self.0.get(predicate) {
            Some(&a) if a != arity => Err(Error::signature(format!(
                "predicate {predicate} used with arity {arity} and {a}"
            ))),
            _ => {
                self.0.insert(predicate.to_string(), arity);
                Ok(())
            }
        }
    }

    pub fn arity(&self, predicate: &str) -> Option<usize> {
        self.0.get(predicate).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, usize)> {
        self.0.iter().map(|(p, a)| (p.as_str(), *a))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_subset(&self, other: &Signature) -> bool {
        self.iter().all(|(p, a)| other.arity(p) == Some(a))
    }

    pub fn union(&self, other: &Signature) -> Result<Signature> {
        let mut s = self.clone();
        for (p, a) in other.iter() {
            s.declare(p, a)?;
        }
        Ok(s)
    }

    /// The signature of the predicates occurring in some atoms.
    pub fn of_atoms<'a>(atoms: impl IntoIterator<Item = &'a Atom>) -> Result<Signature> {
        let mut s = Signature::new();
        for a in atoms {
            s.declare(&a.predicate, a.arity())?;
        }
        Ok(s)
    }
}

impl FromIterator<(String, usize)> for Signature {
    fn from_iter<I: IntoIterator<Item = (String, usize)>>(iter: I) -> Self {
        Signature(iter.into_iter().collect())
    }
}

/// A ground atom `p(c₁,…,cₖ)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroundAtom {
    pub predicate: String,
    pub args: Vec<String>,
}

impl GroundAtom {
    pub fn new(predicate: &str, args: &[&str]) -> Self {
        GroundAtom {
            predicate: predicate.to_string(),
            args: args.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn to_atom(&self) -> Atom {
        Atom::ground(
            self.predicate.clone(),
            &self.args.iter().map(String::as_str).collect::<Vec<_>>(),
        )
    }
}

impl fmt::Display for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_atom())
    }
}

#[derive(Debug, Clone)]
struct PredicateBlock {
    name: String,
    arity: usize,
    offset: usize,
}

/// All ground atoms formed from a signature and a finite universe, in
/// lexicographic `(predicate, args)` order.
#[derive(Debug, Clone)]
pub struct HerbrandBase {
    signature: Signature,
    universe: Vec<String>,
    blocks: Vec<PredicateBlock>,
    atoms: Vec<GroundAtom>,
}

impl PartialEq for HerbrandBase {
    fn eq(&self, other: &Self) -> bool {
        self.signature == other.signature && self.universe == other.universe
    }
}

impl Eq for HerbrandBase {}

impl HerbrandBase {
    pub fn new<S: Into<String>>(signature: Signature, universe: impl IntoIterator<Item = S>) -> Self {
        let universe: Vec<String> = universe
            .into_iter()
            .map(Into::into)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let n = universe.len();
        let mut blocks = Vec::new();
        let mut atoms = Vec::new();
        for (name, arity) in signature.iter() {
            blocks.push(PredicateBlock {
                name: name.to_string(),
                arity,
                offset: atoms.len(),
            });
            let count = n.pow(arity as u32);
            for code in 0..count {
                let args = decode(code, arity, n)
                    .into_iter()
                    .map(|k| universe[k].clone())
                    .collect();
                atoms.push(GroundAtom {
                    predicate: name.to_string(),
                    args,
                });
            }
        }
        HerbrandBase {
            signature,
            universe,
            blocks,
            atoms,
        }
    }

    /// Shorthand for a base of 0-ary predicates.
    pub fn propositional<S: AsRef<str>>(props: impl IntoIterator<Item = S>) -> Self {
        let sig = props
            .into_iter()
            .map(|p| (p.as_ref().to_string(), 0))
            .collect();
        HerbrandBase::new(sig, Vec::<String>::new())
    }

    pub fn shared(self) -> Arc<HerbrandBase> {
        Arc::new(self)
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn universe(&self) -> &[String] {
        &self.universe
    }

    pub fn atoms(&self) -> &[GroundAtom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn constant_index(&self, name: &str) -> Option<usize> {
        self.universe.binary_search_by(|c| c.as_str().cmp(name)).ok()
    }

    /// `(offset, arity)` of a predicate's block of atoms.
    pub(crate) fn predicate_block(&self, name: &str) -> Option<(usize, usize)> {
        self.blocks
            .binary_search_by(|b| b.name.as_str().cmp(name))
            .ok()
            .map(|k| (self.blocks[k].offset, self.blocks[k].arity))
    }

    /// Index of a ground atom given constant indices.
    pub(crate) fn index_of_codes(&self, offset: usize, args: &[usize]) -> usize {
        let n = self.universe.len();
        args.iter().fold(0, |acc, &c| acc * n + c) + offset
    }

    pub fn index_of(&self, atom: &GroundAtom) -> Option<usize> {
        let (offset, arity) = self.predicate_block(&atom.predicate)?;
        if arity != atom.args.len() {
            return None;
        }
        let codes = atom
            .args
            .iter()
            .map(|a| self.constant_index(a))
            .collect::<Option<Vec<_>>>()?;
        Some(self.index_of_codes(offset, &codes))
    }

    pub fn index_of_atom(&self, atom: &Atom) -> Option<usize> {
        if !atom.is_ground() {
            return None;
        }
        self.index_of(&GroundAtom {
            predicate: atom.predicate.clone(),
            args: atom.args.iter().map(|t| t.name().to_string()).collect(),
        })
    }

    pub fn contains(&self, atom: &GroundAtom) -> bool {
        self.index_of(atom).is_some()
    }

    /// True when every atom of `self` belongs to `other`.
    pub fn is_subbase_of(&self, other: &HerbrandBase) -> bool {
        self.signature.is_subset(&other.signature)
            && (self.signature.iter().all(|(_, a)| a == 0)
                || self.universe.iter().all(|c| other.constant_index(c).is_some()))
    }

    /// For each atom of `self`, its index in `sup`.
    pub fn embedding_into(&self, sup: &HerbrandBase) -> Result<Vec<usize>> {
        self.atoms
            .iter()
            .map(|a| {
                sup.index_of(a)
                    .ok_or_else(|| Error::SubbaseMismatch(format!("{a} is not in the larger base")))
            })
            .collect()
    }
}

fn decode(mut code: usize, arity: usize, n: usize) -> Vec<usize> {
    let mut out = vec![0; arity];
    for slot in out.iter_mut().rev() {
        *slot = code % n;
        code /= n;
    }
    out
}

/// A Herbrand interpretation, represented by its true atoms over a base.
///
/// An interpretation on a subbase of some extended base is a partial
/// interpretation; the type is the same.
#[derive(Debug, Clone)]
pub struct Interpretation {
    base: Arc<HerbrandBase>,
    true_atoms: FixedBitSet,
}

pub type PartialInterpretation = Interpretation;

impl Interpretation {
    pub fn empty(base: Arc<HerbrandBase>) -> Self {
        let n = base.len();
        Interpretation {
            base,
            true_atoms: FixedBitSet::with_capacity(n),
        }
    }

    pub fn from_indices(base: Arc<HerbrandBase>, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut i = Interpretation::empty(base);
        for k in indices {
            i.true_atoms.insert(k);
        }
        i
    }

    pub fn from_bits(base: Arc<HerbrandBase>, bits: FixedBitSet) -> Self {
        debug_assert_eq!(bits.len(), base.len());
        Interpretation {
            base,
            true_atoms: bits,
        }
    }

    pub fn from_atoms<'a>(
        base: Arc<HerbrandBase>,
        atoms: impl IntoIterator<Item = &'a GroundAtom>,
    ) -> Result<Self> {
        let idx = atoms
            .into_iter()
            .map(|a| {
                base.index_of(a)
                    .ok_or_else(|| Error::signature(format!("{a} is not in the base")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Interpretation::from_indices(base, idx))
    }

    pub fn base(&self) -> &Arc<HerbrandBase> {
        &self.base
    }

    pub fn bits(&self) -> &FixedBitSet {
        &self.true_atoms
    }

    pub fn is_true(&self, index: usize) -> bool {
        self.true_atoms.contains(index)
    }

    pub fn set(&mut self, index: usize, value: bool) {
        self.true_atoms.set(index, value);
    }

    pub fn true_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.true_atoms.ones()
    }

    pub fn true_atoms(&self) -> impl Iterator<Item = &GroundAtom> {
        self.true_atoms.ones().map(|k| &self.base.atoms()[k])
    }

    pub fn count_true(&self) -> usize {
        self.true_atoms.count_ones(..)
    }

    /// `self_p ⊆ other_p`, on the same base.
    pub fn is_smaller_or_equal(&self, other: &Interpretation) -> bool {
        self.true_atoms.is_subset(&other.true_atoms)
    }

    /// `ct(j)`: unit facts for true atoms and negative unit clauses for false ones.
    pub fn ct(&self) -> ClausalTheory {
        ClausalTheory::new(self.base.atoms().iter().enumerate().map(|(k, a)| {
            if self.is_true(k) {
                Clause::fact(a.to_atom())
            } else {
                Clause::negative(vec![a.to_atom()])
            }
        }))
    }

    /// `ct(j_p)`: the positive facts only.
    pub fn ct_pos(&self) -> ClausalTheory {
        ClausalTheory::new(self.true_atoms().map(|a| Clause::fact(a.to_atom())))
    }

    /// Restricts the interpretation to a subbase.
    pub fn project(&self, sub: &Arc<HerbrandBase>) -> Result<Interpretation> {
        let emb = sub.embedding_into(&self.base)?;
        Ok(Interpretation::from_indices(
            sub.clone(),
            emb.iter()
                .enumerate()
                .filter(|(_, &k)| self.is_true(k))
                .map(|(j, _)| j),
        ))
    }
}

impl PartialEq for Interpretation {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.base, &other.base) || self.base == other.base)
            && self.true_atoms == other.true_atoms
    }
}

impl Eq for Interpretation {}

impl PartialOrd for Interpretation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical order: the truth vector over the base's atom order, compared
/// lexicographically with false < true. Interpretations on different bases
/// are ordered by base size first.
impl Ord for Interpretation {
    fn cmp(&self, other: &Self) -> Ordering {
        let n = self.base.len();
        match n.cmp(&other.base.len()) {
            Ordering::Equal => {}
            o => return o,
        }
        for k in 0..n {
            match (self.is_true(k), other.is_true(k)) {
                (false, true) => return Ordering::Less,
                (true, false) => return Ordering::Greater,
                _ => {}
            }
        }
        Ordering::Equal
    }
}

impl std::hash::Hash for Interpretation {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.true_atoms.hash(state);
    }
}

impl fmt::Display for Interpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, a) in self.true_atoms().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example1_base() -> HerbrandBase {
        let sig = Signature::new()
            .with("light", 1)
            .with("red", 1)
            .with("green", 1)
            .with("brighter", 2);
        HerbrandBase::new(sig, ["a", "b"])
    }

    #[test]
    fn base_enumerates_all_ground_atoms_in_order() {
        let hb = example1_base();
        assert_eq!(hb.len(), 10);
        let names: Vec<String> = hb.atoms().iter().map(ToString::to_string).collect();
        assert_eq!(
            names,
            [
                "brighter(a,a)",
                "brighter(a,b)",
                "brighter(b,a)",
                "brighter(b,b)",
                "green(a)",
                "green(b)",
                "light(a)",
                "light(b)",
                "red(a)",
                "red(b)"
            ]
        );
        for (k, a) in hb.atoms().iter().enumerate() {
            assert_eq!(hb.index_of(a), Some(k));
        }
    }

    #[test]
    fn universe_does_not_matter_for_propositions() {
        let hb = HerbrandBase::new(Signature::new().with("a", 0).with("b", 0), ["x", "y"]);
        assert_eq!(hb.len(), 2);
    }

    #[test]
    fn projection_restricts_true_atoms() {
        let small = HerbrandBase::propositional(["light", "square", "white"]).shared();
        let big = HerbrandBase::propositional(["light", "polygon", "square", "white"]).shared();
        let i = Interpretation::from_atoms(
            big,
            &[
                GroundAtom::new("light", &[]),
                GroundAtom::new("polygon", &[]),
                GroundAtom::new("square", &[]),
            ],
        )
        .unwrap();
        let j = i.project(&small).unwrap();
        assert_eq!(j.to_string(), "{light, square}");
        let same = i.project(i.base()).unwrap();
        assert_eq!(same, i);
    }

    #[test]
    fn ct_of_interpretation() {
        let hb = HerbrandBase::propositional(["light", "square", "white"]).shared();
        let j = Interpretation::from_atoms(
            hb,
            &[GroundAtom::new("light", &[]), GroundAtom::new("square", &[])],
        )
        .unwrap();
        assert_eq!(j.ct().to_string(), "light. square. :- white.");
        assert_eq!(j.ct_pos().to_string(), "light. square.");
        let one = HerbrandBase::propositional(["a"]).shared();
        assert_eq!(Interpretation::empty(one).ct().to_string(), ":- a.");
    }

    #[test]
    fn canonical_order_puts_first_atom_most_significant() {
        let hb = HerbrandBase::propositional(["a", "b"]).shared();
        let mut all: Vec<_> = [vec![], vec![1], vec![0], vec![0, 1]]
            .into_iter()
            .map(|v| Interpretation::from_indices(hb.clone(), v))
            .collect();
        all.reverse();
        all.sort();
        let shown: Vec<String> = all.iter().map(ToString::to_string).collect();
        assert_eq!(shown, ["{}", "{b}", "{a}", "{a, b}"]);
    }
}
