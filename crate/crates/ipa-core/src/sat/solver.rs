//! Conflict-driven clause learning SAT solver with two watched literals,
//! first-UIP clause learning, and Luby restarts.
//!
//! Branching is deterministic: the lowest-numbered unassigned variable,
//! tried false first. Enumeration workloads re-solve after appending
//! blocking clauses at decision level zero, so learned clauses and watch
//! lists persist across calls.

use crate::encoder::cnf::{Lit, PropFormula, Var};

const NO_REASON: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SatResult {
    /// Model indexed by `var - 1`.
    Sat(Vec<bool>),
    Unsat,
}

pub struct Solver {
    nvars: usize,
    clauses: Vec<Vec<Lit>>,
    watches: Vec<Vec<u32>>,
    /// Per variable: 1 true, 0 false, -1 unassigned.
    assign: Vec<i8>,
    level: Vec<u32>,
    reason: Vec<u32>,
    trail: Vec<Lit>,
    lim: Vec<usize>,
    qhead: usize,
    ok: bool,
    restarts: u64,
    seen: Vec<bool>,
    pub conflicts: u64,
    pub decisions: u64,
}

fn lit_index(l: Lit) -> usize {
    let v = l.var().0 as usize;
    v << 1 | usize::from(!l.positive())
}

impl Solver {
    pub fn new(nvars: u32) -> Solver {
        let n = nvars as usize;
        Solver {
            nvars: n,
            clauses: Vec::new(),
            watches: vec![Vec::new(); 2 * (n + 1)],
            assign: vec![-1; n + 1],
            level: vec![0; n + 1],
            reason: vec![NO_REASON; n + 1],
            trail: Vec::new(),
            lim: Vec::new(),
            qhead: 0,
            ok: true,
            restarts: 0,
            seen: vec![false; n + 1],
            conflicts: 0,
            decisions: 0,
        }
    }

    pub fn from_formula(f: &PropFormula) -> Solver {
        let mut s = Solver::new(f.num_vars);
        for c in &f.clauses {
            s.add_clause(c.clone());
        }
        s
    }

    fn value(&self, l: Lit) -> i8 {
        let a = self.assign[l.var().0 as usize];
        if a < 0 {
            -1
        } else if (a == 1) == l.positive() {
            1
        } else {
            0
        }
    }

    fn decision_level(&self) -> u32 {
        self.lim.len() as u32
    }

    fn enqueue(&mut self, l: Lit, reason: u32) {
        debug_assert!(self.value(l) == -1);
        let v = l.var().0 as usize;
        self.assign[v] = i8::from(l.positive());
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        self.trail.push(l);
    }

    /// Add a clause. Must be called at decision level zero.
    pub fn add_clause(&mut self, mut lits: Vec<Lit>) {
        debug_assert_eq!(self.decision_level(), 0);
        if !self.ok {
            return;
        }
        lits.sort();
        lits.dedup();
        // Tautologies vanish; false literals at level zero are dropped.
        let mut i = 0;
        while i + 1 < lits.len() {
            if lits[i].var() == lits[i + 1].var() {
                return;
            }
            i += 1;
        }
        lits.retain(|&l| self.value(l) != 0);
        if lits.iter().any(|&l| self.value(l) == 1) {
            return;
        }
        match lits.len() {
            0 => self.ok = false,
            1 => {
                self.enqueue(lits[0], NO_REASON);
                if self.propagate().is_some() {
                    self.ok = false;
                }
            }
            _ => {
                let idx = self.clauses.len() as u32;
                self.watches[lit_index(lits[0])].push(idx);
                self.watches[lit_index(lits[1])].push(idx);
                self.clauses.push(lits);
            }
        }
    }

    fn propagate(&mut self) -> Option<u32> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            let false_lit = !p;
            let widx = lit_index(false_lit);
            let mut i = 0;
            'clauses: while i < self.watches[widx].len() {
                let ci = self.watches[widx][i];
                // The watched literal that became false goes to slot 1.
                let (w0, w1) = {
                    let c = &mut self.clauses[ci as usize];
                    if c[0] == false_lit {
                        c.swap(0, 1);
                    }
                    (c[0], c[1])
                };
                debug_assert_eq!(w1, false_lit);
                if self.value(w0) == 1 {
                    i += 1;
                    continue;
                }
                // Look for a replacement watch.
                let len = self.clauses[ci as usize].len();
                for k in 2..len {
                    let lk = self.clauses[ci as usize][k];
                    if self.value(lk) != 0 {
                        self.clauses[ci as usize].swap(1, k);
                        self.watches[widx].swap_remove(i);
                        self.watches[lit_index(lk)].push(ci);
                        continue 'clauses;
                    }
                }
                // No replacement: unit or conflict on w0.
                if self.value(w0) == 0 {
                    self.qhead = self.trail.len();
                    return Some(ci);
                }
                self.enqueue(w0, ci);
                i += 1;
            }
        }
        None
    }

    fn backtrack(&mut self, target: u32) {
        while self.decision_level() > target {
            let until = self.lim.pop().unwrap();
            while self.trail.len() > until {
                let l = self.trail.pop().unwrap();
                let v = l.var().0 as usize;
                self.assign[v] = -1;
                self.reason[v] = NO_REASON;
            }
        }
        self.qhead = self.trail.len();
    }

    /// First-UIP conflict analysis: returns the learned clause (asserting
    /// literal first, a deepest-level literal second) and the backjump
    /// level.
    fn analyze(&mut self, conflict: u32) -> (Vec<Lit>, u32) {
        let current = self.decision_level();
        let mut learned: Vec<Lit> = Vec::new();
        let mut marked: Vec<Var> = Vec::new();
        let mut counter = 0usize;
        let mut idx = self.trail.len();
        let mut confl = conflict;
        let mut skip: Option<Var> = None;

        loop {
            for &q in &self.clauses[confl as usize] {
                let v = q.var().0 as usize;
                if Some(q.var()) == skip {
                    continue;
                }
                if !self.seen[v] && self.level[v] > 0 {
                    self.seen[v] = true;
                    marked.push(q.var());
                    if self.level[v] == current {
                        counter += 1;
                    } else {
                        learned.push(q);
                    }
                }
            }
            // Walk back to the next marked literal on the trail.
            loop {
                idx -= 1;
                if self.seen[self.trail[idx].var().0 as usize] {
                    break;
                }
            }
            let p = self.trail[idx];
            self.seen[p.var().0 as usize] = false;
            counter -= 1;
            if counter == 0 {
                learned.insert(0, !p);
                break;
            }
            confl = self.reason[p.var().0 as usize];
            skip = Some(p.var());
        }
        for v in marked {
            self.seen[v.0 as usize] = false;
        }

        // Backjump to the second-highest level in the learned clause.
        let mut bj = 0;
        let mut at = 1;
        for (k, &l) in learned.iter().enumerate().skip(1) {
            let lv = self.level[l.var().0 as usize];
            if lv > bj {
                bj = lv;
                at = k;
            }
        }
        if learned.len() > 1 {
            learned.swap(1, at);
        }
        (learned, bj)
    }

    /// Luby sequence, 1-based: 1 1 2 1 1 2 4 1 1 2 1 1 2 4 8 ...
    fn luby(i: u64) -> u64 {
        let mut x = i;
        loop {
            let k = 64 - x.leading_zeros() as u64;
            if x == (1 << k) - 1 {
                return 1 << (k - 1);
            }
            x -= (1 << (k - 1)) - 1;
        }
    }

    pub fn solve(&mut self) -> SatResult {
        if !self.ok {
            return SatResult::Unsat;
        }
        let mut conflicts_since_restart = 0u64;
        let mut restart_limit = 128 * Self::luby(self.restarts + 1);
        loop {
            if let Some(confl) = self.propagate() {
                self.conflicts += 1;
                conflicts_since_restart += 1;
                if self.decision_level() == 0 {
                    self.ok = false;
                    return SatResult::Unsat;
                }
                let (learned, bj) = self.analyze(confl);
                self.backtrack(bj);
                if learned.len() == 1 {
                    if self.value(learned[0]) == 0 {
                        self.ok = false;
                        return SatResult::Unsat;
                    }
                    if self.value(learned[0]) == -1 {
                        self.enqueue(learned[0], NO_REASON);
                    }
                } else {
                    let idx = self.clauses.len() as u32;
                    self.watches[lit_index(learned[0])].push(idx);
                    self.watches[lit_index(learned[1])].push(idx);
                    let assert_lit = learned[0];
                    self.clauses.push(learned);
                    self.enqueue(assert_lit, idx);
                }
            } else {
                if conflicts_since_restart >= restart_limit {
                    self.restarts += 1;
                    conflicts_since_restart = 0;
                    restart_limit = 128 * Self::luby(self.restarts + 1);
                    self.backtrack(0);
                    continue;
                }
                // Deterministic branching: lowest unassigned, false first.
                match (1..=self.nvars).find(|&v| self.assign[v] == -1) {
                    None => {
                        let model = (1..=self.nvars).map(|v| self.assign[v] == 1).collect();
                        return SatResult::Sat(model);
                    }
                    Some(v) => {
                        self.decisions += 1;
                        self.lim.push(self.trail.len());
                        self.enqueue(Lit::new(Var(v as u32), false), NO_REASON);
                    }
                }
            }
        }
    }

    /// Forget the search state (not the clauses) so new clauses can be
    /// added at level zero.
    pub fn reset_to_root(&mut self) {
        self.backtrack(0);
    }
}

/// One-shot satisfiability of a formula.
pub fn solve(f: &PropFormula) -> SatResult {
    Solver::from_formula(f).solve()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lit(x: i64) -> Lit {
        Lit::from_dimacs(x)
    }

    #[test]
    fn simple_sat() {
        // (a | b) & !a: must set b.
        let mut s = Solver::new(2);
        s.add_clause(vec![lit(1), lit(2)]);
        s.add_clause(vec![lit(-1)]);
        match s.solve() {
            SatResult::Sat(m) => {
                assert!(!m[0]);
                assert!(m[1]);
            }
            SatResult::Unsat => panic!("expected SAT"),
        }
    }

    #[test]
    fn simple_unsat() {
        let mut s = Solver::new(1);
        s.add_clause(vec![lit(1)]);
        s.add_clause(vec![lit(-1)]);
        assert_eq!(s.solve(), SatResult::Unsat);
    }

    #[test]
    fn pigeonhole_is_unsat() {
        // 3 pigeons, 2 holes: var p_{i,h} = 2*i + h + 1.
        let mut s = Solver::new(6);
        let v = |i: u32, h: u32| Lit::new(Var(2 * i + h + 1), true);
        for i in 0..3 {
            s.add_clause(vec![v(i, 0), v(i, 1)]);
        }
        for h in 0..2 {
            for i in 0..3 {
                for j in (i + 1)..3 {
                    s.add_clause(vec![!v(i, h), !v(j, h)]);
                }
            }
        }
        assert_eq!(s.solve(), SatResult::Unsat);
    }

    #[test]
    fn models_are_deterministic_and_false_first() {
        let mut s = Solver::new(3);
        s.add_clause(vec![lit(1), lit(2), lit(3)]);
        match s.solve() {
            SatResult::Sat(m) => assert_eq!(m, vec![false, false, true]),
            _ => panic!(),
        }
    }

    #[test]
    fn incremental_blocking() {
        let mut s = Solver::new(2);
        s.add_clause(vec![lit(1), lit(2)]);
        let mut seen = Vec::new();
        loop {
            match s.solve() {
                SatResult::Sat(m) => {
                    seen.push(m.clone());
                    s.reset_to_root();
                    s.add_clause(
                        m.iter()
                            .enumerate()
                            .map(|(k, &b)| Lit::new(Var(k as u32 + 1), !b))
                            .collect(),
                    );
                }
                SatResult::Unsat => break,
            }
        }
        assert_eq!(seen.len(), 3);
    }
}
