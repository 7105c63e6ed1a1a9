//! Clausal propositional formulas with a designated preserved-variable set
//! and a map from variables back to the theory atoms they stand for.

use std::fmt;
use std::io::Write;

/// Propositional variable, 1-based like DIMACS.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(pub u32);

/// Literal: variable with polarity, packed as `2*var + negated`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit(u32);

impl Lit {
    pub fn new(v: Var, positive: bool) -> Lit {
        Lit(v.0 << 1 | u32::from(!positive))
    }

    pub fn var(self) -> Var {
        Var(self.0 >> 1)
    }

    pub fn positive(self) -> bool {
        self.0 & 1 == 0
    }

    pub fn to_dimacs(self) -> i64 {
        let v = self.var().0 as i64;
        if self.positive() {
            v
        } else {
            -v
        }
    }

    pub fn from_dimacs(x: i64) -> Lit {
        Lit::new(Var(x.unsigned_abs() as u32), x > 0)
    }
}

impl std::ops::Not for Lit {
    type Output = Lit;
    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

/// What a propositional variable stands for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VarInfo {
    /// A preserved predicate symbol (identity atom).
    Preserved(String),
    /// A non-preserved Boolean symbol of the theory formula.
    BoolSym(String),
    /// A theory atom, rendered canonically.
    Atom(String),
    /// Bit `k` of the binary encoding of an integer symbol.
    Bit(String, usize),
    /// Auxiliary definition variable.
    Aux,
}

/// A CNF formula. Variables are numbered from 1; `preserved` lists the
/// predicate symbols in bank order with their variables.
#[derive(Debug, Clone, Default)]
pub struct PropFormula {
    pub num_vars: u32,
    pub clauses: Vec<Vec<Lit>>,
    pub preserved: Vec<(String, Var)>,
    pub var_map: Vec<VarInfo>,
}

impl PropFormula {
    pub fn new() -> PropFormula {
        PropFormula::default()
    }

    pub fn fresh_var(&mut self, info: VarInfo) -> Var {
        self.num_vars += 1;
        self.var_map.push(info);
        Var(self.num_vars)
    }

    pub fn add_clause(&mut self, lits: Vec<Lit>) {
        self.clauses.push(lits);
    }

    pub fn info(&self, v: Var) -> &VarInfo {
        &self.var_map[(v.0 - 1) as usize]
    }

    pub fn preserved_var(&self, name: &str) -> Option<Var> {
        self.preserved
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| *v)
    }

    /// Emit DIMACS CNF. The comment header maps preserved variables to
    /// predicate names, one `c pred <name> <var>` line each.
    pub fn to_dimacs(&self, w: &mut impl Write) -> std::io::Result<()> {
        for (name, v) in &self.preserved {
            writeln!(w, "c pred {name} {}", v.0)?;
        }
        writeln!(w, "p cnf {} {}", self.num_vars, self.clauses.len())?;
        for c in &self.clauses {
            for l in c {
                write!(w, "{} ", l.to_dimacs())?;
            }
            writeln!(w, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literal_packing_round_trips() {
        let v = Var(7);
        let pos = Lit::new(v, true);
        let neg = !pos;
        assert_eq!(pos.var(), v);
        assert!(pos.positive());
        assert!(!neg.positive());
        assert_eq!(!neg, pos);
        assert_eq!(Lit::from_dimacs(-7), neg);
        assert_eq!(neg.to_dimacs(), -7);
    }

    #[test]
    fn dimacs_output_has_pred_header() {
        let mut f = PropFormula::new();
        let p = f.fresh_var(VarInfo::Preserved("p".into()));
        f.preserved.push(("p".into(), p));
        let a = f.fresh_var(VarInfo::Aux);
        f.add_clause(vec![Lit::new(p, true), Lit::new(a, false)]);
        let mut buf = Vec::new();
        f.to_dimacs(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "c pred p 1\np cnf 2 1\n1 -2 0\n");
    }
}
