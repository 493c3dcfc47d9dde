//! Exact backtracking search with unit propagation over ground constraints.
//!
//! Two constraint shapes are supported: clauses (disjunctions of literals) and
//! ground DNF constraints (disjunctions of conjunctions). Branching always
//! takes the lowest-index unassigned variable and tries `false` first, so
//! models come out in canonical order.

use std::ops::ControlFlow;

use crate::logic::{GroundClause, GroundCube};

pub(crate) type Lit = (usize, bool);

#[derive(Debug, Clone, Default)]
pub(crate) struct Problem {
    pub num_vars: usize,
    pub clauses: Vec<Vec<Lit>>,
    pub dnfs: Vec<Vec<GroundCube>>,
}

impl Problem {
    pub fn new(num_vars: usize) -> Self {
        Problem {
            num_vars,
            ..Problem::default()
        }
    }

    pub fn add_clauses(&mut self, clauses: &[GroundClause]) {
        for c in clauses {
            let lits = c
                .pos
                .iter()
                .map(|&v| (v, true))
                .chain(c.neg.iter().map(|&v| (v, false)))
                .collect();
            self.clauses.push(lits);
        }
    }

    pub fn add_dnf(&mut self, cubes: Vec<GroundCube>) {
        if cubes.len() == 1 {
            // a single cube is a set of unit clauses
            for &l in &cubes[0] {
                self.clauses.push(vec![l]);
            }
        } else {
            self.dnfs.push(cubes);
        }
    }

    pub fn add_unit(&mut self, var: usize, value: bool) {
        self.clauses.push(vec![(var, value)]);
    }

    /// Variables mentioned by some constraint, ascending.
    pub fn relevant_vars(&self) -> Vec<usize> {
        let mut seen = vec![false; self.num_vars];
        for c in &self.clauses {
            for &(v, _) in c {
                seen[v] = true;
            }
        }
        for d in &self.dnfs {
            for cube in d {
                for &(v, _) in cube {
                    seen[v] = true;
                }
            }
        }
        (0..self.num_vars).filter(|&v| seen[v]).collect()
    }
}

const UNSET: i8 = -1;

pub(crate) struct Search<'a> {
    problem: &'a Problem,
    assign: Vec<i8>,
    trail: Vec<usize>,
    branch: Vec<usize>,
}

impl<'a> Search<'a> {
    /// `branch` lists the variables to decide, in branching order.
    pub fn new(problem: &'a Problem, branch: Vec<usize>) -> Self {
        Search {
            problem,
            assign: vec![UNSET; problem.num_vars],
            trail: Vec::new(),
            branch,
        }
    }

    fn value(&self, lit: Lit) -> i8 {
        match self.assign[lit.0] {
            UNSET => UNSET,
            v => (v == 1) as i8 ^ (!lit.1) as i8,
        }
    }

    fn set(&mut self, lit: Lit) {
        self.assign[lit.0] = lit.1 as i8;
        self.trail.push(lit.0);
    }

    fn undo(&mut self, len: usize) {
        while self.trail.len() > len {
            let v = self.trail.pop().expect("trail");
            self.assign[v] = UNSET;
        }
    }

    /// Runs unit propagation to fixpoint; false on conflict.
    pub fn propagate(&mut self) -> bool {
        loop {
            let mut changed = false;
            for c in &self.problem.clauses {
                let mut open = None;
                let mut open_count = 0;
                let mut sat = false;
                for &l in c {
                    match self.value(l) {
                        1 => {
                            sat = true;
                            break;
                        }
                        UNSET => {
                            open_count += 1;
                            open = Some(l);
                        }
                        _ => {}
                    }
                }
                if sat {
                    continue;
                }
                match open_count {
                    0 => return false,
                    1 => {
                        let l = open.expect("open literal");
                        self.assign[l.0] = l.1 as i8;
                        self.trail.push(l.0);
                        changed = true;
                    }
                    _ => {}
                }
            }
            for d in &self.problem.dnfs {
                let mut live = None;
                let mut live_count = 0;
                let mut sat = false;
                for (k, cube) in d.iter().enumerate() {
                    let mut all_true = true;
                    let mut falsified = false;
                    for &l in cube {
                        match self.value(l) {
                            0 => {
                                falsified = true;
                                break;
                            }
                            UNSET => all_true = false,
                            _ => {}
                        }
                    }
                    if falsified {
                        continue;
                    }
                    if all_true {
                        sat = true;
                        break;
                    }
                    live_count += 1;
                    live = Some(k);
                }
                if sat {
                    continue;
                }
                match live_count {
                    0 => return false,
                    1 => {
                        let cube = &d[live.expect("live cube")];
                        for &l in cube {
                            if self.value(l) == UNSET {
                                self.assign[l.0] = l.1 as i8;
                                self.trail.push(l.0);
                            }
                        }
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                return true;
            }
        }
    }

    /// Branch variables still undecided after propagation at the root.
    pub fn free_after_root(&mut self) -> Option<usize> {
        if !self.propagate() {
            return None;
        }
        Some(self.branch.iter().filter(|&&v| self.assign[v] == UNSET).count())
    }

    /// Depth-first search; `visit` sees each complete assignment of the branch
    /// variables (unbranched variables read as false).
    pub fn run(&mut self, visit: &mut dyn FnMut(&[bool]) -> ControlFlow<()>) -> ControlFlow<()> {
        if !self.propagate() {
            return ControlFlow::Continue(());
        }
        self.dfs(0, visit)
    }

    fn dfs(&mut self, cursor: usize, visit: &mut dyn FnMut(&[bool]) -> ControlFlow<()>) -> ControlFlow<()> {
        let mut cursor = cursor;
        while cursor < self.branch.len() && self.assign[self.branch[cursor]] != UNSET {
            cursor += 1;
        }
        if cursor == self.branch.len() {
            let model: Vec<bool> = self.assign.iter().map(|&v| v == 1).collect();
            return visit(&model);
        }
        let var = self.branch[cursor];
        for value in [false, true] {
            let mark = self.trail.len();
            self.set((var, value));
            if self.propagate() {
                let r = self.dfs(cursor + 1, visit);
                if r.is_break() {
                    self.undo(mark);
                    return r;
                }
            }
            self.undo(mark);
        }
        ControlFlow::Continue(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_models(p: &Problem) -> Vec<Vec<bool>> {
        let mut out = Vec::new();
        let mut s = Search::new(p, (0..p.num_vars).collect());
        let _ = s.run(&mut |m| {
            out.push(m.to_vec());
            ControlFlow::Continue(())
        });
        out
    }

    #[test]
    fn enumerates_in_lexicographic_order() {
        // a ∨ b over two variables
        let mut p = Problem::new(2);
        p.clauses.push(vec![(0, true), (1, true)]);
        assert_eq!(
            all_models(&p),
            vec![vec![false, true], vec![true, false], vec![true, true]]
        );
    }

    #[test]
    fn dnf_constraint_is_exact() {
        // (x0 ∧ ¬x1) ∨ (x2) over three variables
        let mut p = Problem::new(3);
        p.add_dnf(vec![vec![(0, true), (1, false)], vec![(2, true)]]);
        let models = all_models(&p);
        let oracle: Vec<Vec<bool>> = (0..8u32)
            .map(|m| (0..3).map(|k| m >> (2 - k) & 1 == 1).collect::<Vec<_>>())
            .filter(|v| (v[0] && !v[1]) || v[2])
            .collect();
        assert_eq!(models, oracle);
    }

    #[test]
    fn empty_clause_and_empty_dnf_are_unsatisfiable() {
        let mut p = Problem::new(1);
        p.clauses.push(vec![]);
        assert!(all_models(&p).is_empty());
        let mut q = Problem::new(1);
        q.dnfs.push(vec![]);
        assert!(all_models(&q).is_empty());
    }
}
