//! Exact model enumeration and the partial-model toolbox.

mod extended;
mod sat;

use std::ops::ControlFlow;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::logic::{
    ground_dnf, ground_theory, ClausalTheory, DnfFormula, Formula, HerbrandBase, Interpretation,
};

pub use extended::ExtendedExample;

use sat::{Problem, Search};

/// Default cap on the number of atoms an enumeration may branch over.
pub const DEFAULT_MAX_BASE: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_base: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_base: DEFAULT_MAX_BASE,
        }
    }
}

impl Limits {
    /// Reads `POSSIB_MAX_BASE`, falling back to the default.
    pub fn from_env() -> Self {
        let max_base = std::env::var("POSSIB_MAX_BASE")
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_MAX_BASE);
        Limits { max_base }
    }
}

/// Borrowed view of either formula class.
#[derive(Debug, Clone, Copy)]
pub enum FormulaRef<'a> {
    Cnf(&'a ClausalTheory),
    Dnf(&'a DnfFormula),
}

impl<'a> From<&'a ClausalTheory> for FormulaRef<'a> {
    fn from(t: &'a ClausalTheory) -> Self {
        FormulaRef::Cnf(t)
    }
}

impl<'a> From<&'a DnfFormula> for FormulaRef<'a> {
    fn from(d: &'a DnfFormula) -> Self {
        FormulaRef::Dnf(d)
    }
}

impl<'a> From<&'a Formula> for FormulaRef<'a> {
    fn from(f: &'a Formula) -> Self {
        match f {
            Formula::Cnf(t) => FormulaRef::Cnf(t),
            Formula::Dnf(d) => FormulaRef::Dnf(d),
        }
    }
}

/// Call counters, for comparing evaluation routes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EngineStats {
    pub enumerations: usize,
    pub sat_checks: usize,
}

/// The model engine: limits plus call counters. Cheap to create.
#[derive(Debug, Default)]
pub struct Engine {
    limits: Limits,
    enumerations: AtomicUsize,
    sat_checks: AtomicUsize,
}

impl Engine {
    pub fn new(limits: Limits) -> Self {
        Engine {
            limits,
            ..Engine::default()
        }
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }

    pub fn stats(&self) -> EngineStats {
        EngineStats {
            enumerations: self.enumerations.load(Ordering::Relaxed),
            sat_checks: self.sat_checks.load(Ordering::Relaxed),
        }
    }

    pub fn reset_stats(&self) {
        self.enumerations.store(0, Ordering::Relaxed);
        self.sat_checks.store(0, Ordering::Relaxed);
    }

    fn check_size(&self, size: usize) -> Result<()> {
        if size > self.limits.max_base {
            return Err(Error::BaseTooLarge {
                size,
                limit: self.limits.max_base,
            });
        }
        Ok(())
    }

    /// Grounds the conjunction of `parts`; the flag negates a part.
    fn problem(hb: &HerbrandBase, parts: &[(FormulaRef<'_>, bool)]) -> Result<Problem> {
        let mut p = Problem::new(hb.len());
        for &(f, negated) in parts {
            match (f, negated) {
                (FormulaRef::Cnf(t), false) => p.add_clauses(&ground_theory(t, hb)?),
                (FormulaRef::Cnf(t), true) => p.add_dnf(ground_dnf(&t.negate(), hb)?),
                (FormulaRef::Dnf(d), false) => p.add_dnf(ground_dnf(d, hb)?),
                (FormulaRef::Dnf(d), true) => p.add_clauses(&ground_theory(&d.negate(), hb)?),
            }
        }
        Ok(p)
    }

    fn collect(
        problem: &Problem,
        hb: &Arc<HerbrandBase>,
        limit: Option<usize>,
    ) -> Vec<Interpretation> {
        let mut out = Vec::new();
        if limit == Some(0) {
            return out;
        }
        let mut search = Search::new(problem, (0..problem.num_vars).collect());
        let _ = search.run(&mut |m| {
            let mut bits = FixedBitSet::with_capacity(m.len());
            for (k, &v) in m.iter().enumerate() {
                bits.set(k, v);
            }
            out.push(Interpretation::from_bits(hb.clone(), bits));
            if limit.is_some_and(|l| out.len() >= l) {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        });
        out
    }

    /// All models of `t` on `hb`, in canonical order.
    pub fn enumerate_models(
        &self,
        t: &ClausalTheory,
        hb: &Arc<HerbrandBase>,
    ) -> Result<Vec<Interpretation>> {
        self.models_of(&[t.into()], hb, None)
    }

    /// Models of the conjunction of `fs` on `hb`, canonical order, optionally
    /// stopping after `limit` models.
    pub fn models_of(
        &self,
        fs: &[FormulaRef<'_>],
        hb: &Arc<HerbrandBase>,
        limit: Option<usize>,
    ) -> Result<Vec<Interpretation>> {
        self.check_size(hb.len())?;
        self.enumerations.fetch_add(1, Ordering::Relaxed);
        let parts: Vec<_> = fs.iter().map(|&f| (f, false)).collect();
        let p = Self::problem(hb, &parts)?;
        Ok(Self::collect(&p, hb, limit))
    }

    fn solve(&self, hb: &Arc<HerbrandBase>, parts: &[(FormulaRef<'_>, bool)]) -> Result<Option<Interpretation>> {
        self.sat_checks.fetch_add(1, Ordering::Relaxed);
        let p = Self::problem(hb, parts)?;
        let mut search = Search::new(&p, p.relevant_vars());
        match search.free_after_root() {
            None => return Ok(None),
            Some(free) => self.check_size(free)?,
        }
        let mut found = None;
        let _ = search.run(&mut |m| {
            let mut bits = FixedBitSet::with_capacity(m.len());
            for (k, &v) in m.iter().enumerate() {
                bits.set(k, v);
            }
            found = Some(Interpretation::from_bits(hb.clone(), bits));
            ControlFlow::Break(())
        });
        Ok(found)
    }

    /// Some model of the conjunction of `fs`, if any. Atoms no constraint
    /// mentions are left false.
    pub fn find_model(&self, fs: &[FormulaRef<'_>], hb: &Arc<HerbrandBase>) -> Result<Option<Interpretation>> {
        let parts: Vec<_> = fs.iter().map(|&f| (f, false)).collect();
        self.solve(hb, &parts)
    }

    pub fn satisfiable(&self, fs: &[FormulaRef<'_>], hb: &Arc<HerbrandBase>) -> Result<bool> {
        Ok(self.find_model(fs, hb)?.is_some())
    }

    /// Every model of `f` on `hb` is a model of `g`.
    pub fn entails<'a, 'b>(
        &self,
        f: impl Into<FormulaRef<'a>>,
        g: impl Into<FormulaRef<'b>>,
        hb: &Arc<HerbrandBase>,
    ) -> Result<bool> {
        Ok(self.solve(hb, &[(f.into(), false), (g.into(), true)])?.is_none())
    }

    /// Some interpretation on `hb` models both `f` and `g`.
    pub fn consistent<'a, 'b>(
        &self,
        f: impl Into<FormulaRef<'a>>,
        g: impl Into<FormulaRef<'b>>,
        hb: &Arc<HerbrandBase>,
    ) -> Result<bool> {
        Ok(self.solve(hb, &[(f.into(), false), (g.into(), false)])?.is_some())
    }

    /// The unique model of `t` on `hb`, or `None` when it has zero or several.
    pub fn single_model(&self, t: &ClausalTheory, hb: &Arc<HerbrandBase>) -> Result<Option<Interpretation>> {
        self.sat_checks.fetch_add(1, Ordering::Relaxed);
        let p = Self::problem(hb, &[(t.into(), false)])?;
        let relevant = p.relevant_vars();
        if relevant.len() < hb.len() {
            // an unconstrained atom can take either value
            return Ok(None);
        }
        let mut search = Search::new(&p, relevant);
        match search.free_after_root() {
            None => return Ok(None),
            Some(free) => self.check_size(free)?,
        }
        let mut models = Vec::new();
        let _ = search.run(&mut |m| {
            models.push(m.to_vec());
            if models.len() > 1 {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        });
        if models.len() != 1 {
            return Ok(None);
        }
        let mut full = FixedBitSet::with_capacity(hb.len());
        for (k, &v) in models[0].iter().enumerate() {
            full.set(k, v);
        }
        Ok(Some(Interpretation::from_bits(hb.clone(), full)))
    }

    /// `ext(j)`: every interpretation on `hb_e` agreeing with `j` on its base.
    pub fn extensions(&self, j: &Interpretation, hb_e: &Arc<HerbrandBase>) -> Result<Vec<Interpretation>> {
        let emb = j.base().embedding_into(hb_e)?;
        self.check_size(hb_e.len() - emb.len())?;
        self.enumerations.fetch_add(1, Ordering::Relaxed);
        let mut p = Problem::new(hb_e.len());
        for (k, &target) in emb.iter().enumerate() {
            p.add_unit(target, j.is_true(k));
        }
        Ok(Self::collect(&p, hb_e, None))
    }

    /// Partial models of `x` on its learning base, canonical order.
    pub fn partial_models(&self, x: &ExtendedExample) -> Result<Vec<Interpretation>> {
        let models = self.enumerate_models(&x.theory, &x.extended_base)?;
        let mut out = models
            .iter()
            .map(|m| m.project(&x.learning_base))
            .collect::<Result<Vec<_>>>()?;
        out.sort();
        out.dedup();
        Ok(out)
    }

    pub fn maximal_partial_models(&self, x: &ExtendedExample) -> Result<Vec<Interpretation>> {
        Ok(maximal(&self.partial_models(x)?))
    }

    pub fn minimal_partial_models(&self, x: &ExtendedExample) -> Result<Vec<Interpretation>> {
        Ok(minimal(&self.partial_models(x)?))
    }

    /// Forward-chaining fixpoint of a Horn theory on `hb`.
    pub fn least_herbrand_model(&self, t: &ClausalTheory, hb: &Arc<HerbrandBase>) -> Result<Interpretation> {
        least_herbrand_model(t, hb)
    }
}

/// Inclusion-maximal elements, keeping the input order.
pub fn maximal(set: &[Interpretation]) -> Vec<Interpretation> {
    set.iter()
        .filter(|j| !set.iter().any(|k| k != *j && j.is_smaller_or_equal(k)))
        .cloned()
        .collect()
}

/// Inclusion-minimal elements, keeping the input order.
pub fn minimal(set: &[Interpretation]) -> Vec<Interpretation> {
    set.iter()
        .filter(|j| !set.iter().any(|k| k != *j && k.is_smaller_or_equal(j)))
        .cloned()
        .collect()
}

/// Forward-chaining fixpoint of a Horn theory on `hb`.
pub fn least_herbrand_model(t: &ClausalTheory, hb: &Arc<HerbrandBase>) -> Result<Interpretation> {
    if !t.is_horn() {
        return Err(Error::NotHorn);
    }
    let clauses = ground_theory(t, hb)?;
    let n = hb.len();
    let mut truth = FixedBitSet::with_capacity(n);
    let mut pending: Vec<usize> = clauses.iter().map(|c| c.neg.len()).collect();
    let mut watchers: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (ci, c) in clauses.iter().enumerate() {
        for &b in &c.neg {
            watchers[b].push(ci);
        }
    }
    let mut queue = Vec::new();
    let fire = |ci: usize, truth: &mut FixedBitSet, queue: &mut Vec<usize>| -> Result<()> {
        match clauses[ci].pos.first() {
            None => Err(Error::Inconsistent),
            Some(&h) => {
                if !truth.put(h) {
                    queue.push(h);
                }
                Ok(())
            }
        }
    };
    for ci in 0..clauses.len() {
        if pending[ci] == 0 {
            fire(ci, &mut truth, &mut queue)?;
        }
    }
    while let Some(a) = queue.pop() {
        for &ci in &watchers[a] {
            pending[ci] -= 1;
            if pending[ci] == 0 {
                fire(ci, &mut truth, &mut queue)?;
            }
        }
    }
    Ok(Interpretation::from_bits(hb.clone(), truth))
}

pub fn enumerate_models(t: &ClausalTheory, hb: &Arc<HerbrandBase>) -> Result<Vec<Interpretation>> {
    Engine::default().enumerate_models(t, hb)
}

pub fn entails<'a, 'b>(
    f: impl Into<FormulaRef<'a>>,
    g: impl Into<FormulaRef<'b>>,
    hb: &Arc<HerbrandBase>,
) -> Result<bool> {
    Engine::default().entails(f, g, hb)
}

pub fn consistent<'a, 'b>(
    f: impl Into<FormulaRef<'a>>,
    g: impl Into<FormulaRef<'b>>,
    hb: &Arc<HerbrandBase>,
) -> Result<bool> {
    Engine::default().consistent(f, g, hb)
}

pub fn extensions(j: &Interpretation, hb_e: &Arc<HerbrandBase>) -> Result<Vec<Interpretation>> {
    Engine::default().extensions(j, hb_e)
}

pub fn partial_models(x: &ExtendedExample) -> Result<Vec<Interpretation>> {
    Engine::default().partial_models(x)
}

pub fn maximal_partial_models(x: &ExtendedExample) -> Result<Vec<Interpretation>> {
    Engine::default().maximal_partial_models(x)
}

pub fn minimal_partial_models(x: &ExtendedExample) -> Result<Vec<Interpretation>> {
    Engine::default().minimal_partial_models(x)
}

/// Restricts `i` to the subbase `hb`.
pub fn projection(i: &Interpretation, hb: &Arc<HerbrandBase>) -> Result<Interpretation> {
    i.project(hb)
}
