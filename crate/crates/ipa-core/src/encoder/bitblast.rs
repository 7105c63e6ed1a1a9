//! Propositional encoding of application-free bounded formulas.
//!
//! Every integer symbol is encoded in binary over its domain range, each
//! comparison becomes a combinational circuit, and the Boolean skeleton is
//! translated by Tseitin definitions. Variable numbering is stable: the
//! preserved symbols come first in the order given, then everything else
//! in depth-first encounter order.

use crate::encoder::bounds::{decompose_term, BoundsError, DomainBound};
use crate::encoder::cnf::{Lit, PropFormula, VarInfo};
use crate::logic::{Expr, ExprNode};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use std::collections::HashMap;

/// A literal or a known constant; constant folding keeps the clause set
/// small and the circuits simple.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TLit {
    Const(bool),
    L(Lit),
}

impl std::ops::Not for TLit {
    type Output = TLit;
    fn not(self) -> TLit {
        match self {
            TLit::Const(b) => TLit::Const(!b),
            TLit::L(l) => TLit::L(!l),
        }
    }
}

pub struct Blaster {
    pub f: PropFormula,
    bool_syms: HashMap<String, Lit>,
    int_bits: HashMap<String, Vec<TLit>>,
    memo: HashMap<usize, TLit>,
    bounds: DomainBound,
}

fn width_for(max: u64) -> usize {
    (64 - max.leading_zeros()) as usize
}

impl Blaster {
    /// Preserved symbols get variables 1..k in the given order.
    pub fn new(preserve: &[String], bounds: DomainBound) -> Blaster {
        let mut f = PropFormula::new();
        let mut bool_syms = HashMap::new();
        for name in preserve {
            let v = f.fresh_var(VarInfo::Preserved(name.clone()));
            f.preserved.push((name.clone(), v));
            bool_syms.insert(name.clone(), Lit::new(v, true));
        }
        Blaster {
            f,
            bool_syms,
            int_bits: HashMap::new(),
            memo: HashMap::new(),
            bounds,
        }
    }

    /// Encode `e` as the asserted root of the formula.
    pub fn assert_root(&mut self, e: &Expr) -> Result<(), BoundsError> {
        match self.encode_bool(e)? {
            TLit::Const(true) => {}
            TLit::Const(false) => self.f.add_clause(vec![]),
            TLit::L(l) => self.f.add_clause(vec![l]),
        }
        Ok(())
    }

    pub fn finish(self) -> PropFormula {
        self.f
    }

    fn aux(&mut self) -> Lit {
        Lit::new(self.f.fresh_var(VarInfo::Aux), true)
    }

    fn bool_sym(&mut self, name: &str) -> Lit {
        if let Some(l) = self.bool_syms.get(name) {
            return *l;
        }
        let v = self.f.fresh_var(VarInfo::BoolSym(name.to_string()));
        let l = Lit::new(v, true);
        self.bool_syms.insert(name.to_string(), l);
        l
    }

    /// Bits of an integer symbol, allocating and bounding them on first use.
    fn bits_of(&mut self, name: &str) -> Vec<TLit> {
        if let Some(bs) = self.int_bits.get(name) {
            return bs.clone();
        }
        let d = self.bounds.ranges.get(name).copied().unwrap_or(1);
        let max = d - 1;
        let w = width_for(max);
        let mut bs = Vec::with_capacity(w);
        for k in 0..w {
            let v = self.f.fresh_var(VarInfo::Bit(name.to_string(), k));
            bs.push(TLit::L(Lit::new(v, true)));
        }
        // Constrain the value to at most max: for every zero bit j of max,
        // if all higher one-bits of max are set then bit j must be clear.
        for j in 0..w {
            if max >> j & 1 == 1 {
                continue;
            }
            let mut clause = Vec::new();
            if let TLit::L(lj) = bs[j] {
                clause.push(!lj);
            }
            for k in (j + 1)..w {
                if max >> k & 1 == 1 {
                    if let TLit::L(lk) = bs[k] {
                        clause.push(!lk);
                    }
                }
            }
            self.f.add_clause(clause);
        }
        self.int_bits.insert(name.to_string(), bs.clone());
        bs
    }

    // Gates -----------------------------------------------------------

    pub fn andn(&mut self, lits: Vec<TLit>) -> TLit {
        let mut ls = Vec::with_capacity(lits.len());
        for l in lits {
            match l {
                TLit::Const(false) => return TLit::Const(false),
                TLit::Const(true) => {}
                TLit::L(l) => ls.push(l),
            }
        }
        match ls.len() {
            0 => TLit::Const(true),
            1 => TLit::L(ls[0]),
            _ => {
                let g = self.aux();
                for &l in &ls {
                    self.f.add_clause(vec![!g, l]);
                }
                let mut big: Vec<Lit> = ls.iter().map(|&l| !l).collect();
                big.push(g);
                self.f.add_clause(big);
                TLit::L(g)
            }
        }
    }

    pub fn orn(&mut self, lits: Vec<TLit>) -> TLit {
        let neg: Vec<TLit> = lits.into_iter().map(|l| !l).collect();
        !self.andn(neg)
    }

    pub fn and2(&mut self, a: TLit, b: TLit) -> TLit {
        self.andn(vec![a, b])
    }

    pub fn or2(&mut self, a: TLit, b: TLit) -> TLit {
        self.orn(vec![a, b])
    }

    pub fn xor2(&mut self, a: TLit, b: TLit) -> TLit {
        match (a, b) {
            (TLit::Const(false), x) | (x, TLit::Const(false)) => x,
            (TLit::Const(true), x) | (x, TLit::Const(true)) => !x,
            (TLit::L(a), TLit::L(b)) => {
                let g = self.aux();
                self.f.add_clause(vec![!g, a, b]);
                self.f.add_clause(vec![!g, !a, !b]);
                self.f.add_clause(vec![g, !a, b]);
                self.f.add_clause(vec![g, a, !b]);
                TLit::L(g)
            }
        }
    }

    pub fn xnor2(&mut self, a: TLit, b: TLit) -> TLit {
        !self.xor2(a, b)
    }

    // Word-level circuits ----------------------------------------------

    fn const_bits(v: u64, width: usize) -> Vec<TLit> {
        (0..width).map(|k| TLit::Const(v >> k & 1 == 1)).collect()
    }

    /// `bits + c` for a nonnegative constant, extending the width so the
    /// sum cannot wrap.
    fn add_const(&mut self, bits: &[TLit], c: u64) -> Vec<TLit> {
        let w = bits.len().max(width_for(c)) + 1;
        let mut out = Vec::with_capacity(w);
        let mut carry = TLit::Const(false);
        for k in 0..w {
            let b = bits.get(k).copied().unwrap_or(TLit::Const(false));
            let cb = c >> k & 1 == 1;
            if cb {
                out.push(self.xnor2(b, carry));
                carry = self.or2(b, carry);
            } else {
                out.push(self.xor2(b, carry));
                carry = self.and2(b, carry);
            }
        }
        out
    }

    fn cmp_eq(&mut self, a: &[TLit], b: &[TLit]) -> TLit {
        let w = a.len().max(b.len());
        let mut parts = Vec::with_capacity(w);
        for k in 0..w {
            let x = a.get(k).copied().unwrap_or(TLit::Const(false));
            let y = b.get(k).copied().unwrap_or(TLit::Const(false));
            parts.push(self.xnor2(x, y));
        }
        self.andn(parts)
    }

    fn cmp_lt(&mut self, a: &[TLit], b: &[TLit]) -> TLit {
        let w = a.len().max(b.len());
        let mut acc = TLit::Const(false);
        for k in 0..w {
            let x = a.get(k).copied().unwrap_or(TLit::Const(false));
            let y = b.get(k).copied().unwrap_or(TLit::Const(false));
            let strictly = self.and2(!x, y);
            let eq = self.xnor2(x, y);
            let keep = self.and2(eq, acc);
            acc = self.or2(strictly, keep);
        }
        acc
    }

    // Skeleton ----------------------------------------------------------

    fn encode_bool(&mut self, e: &Expr) -> Result<TLit, BoundsError> {
        if let Some(hit) = self.memo.get(&e.key()) {
            return Ok(*hit);
        }
        let out = match e.node() {
            ExprNode::TrueLit => TLit::Const(true),
            ExprNode::FalseLit => TLit::Const(false),
            ExprNode::BoolSym(n) => TLit::L(self.bool_sym(n)),
            ExprNode::Not(a) => !self.encode_bool(a)?,
            ExprNode::And(cs) => {
                let mut lits = Vec::with_capacity(cs.len());
                for c in cs {
                    lits.push(self.encode_bool(c)?);
                }
                self.andn(lits)
            }
            ExprNode::Or(cs) => {
                let mut lits = Vec::with_capacity(cs.len());
                for c in cs {
                    lits.push(self.encode_bool(c)?);
                }
                self.orn(lits)
            }
            ExprNode::IntEq(l, r) => self.atom(l, r, true)?,
            ExprNode::IntLt(l, r) => self.atom(l, r, false)?,
            other => {
                return Err(BoundsError::BadTerm(format!(
                    "not a propositional skeleton node: {other:?}"
                )))
            }
        };
        self.memo.insert(e.key(), out);
        Ok(out)
    }

    /// Comparison of two terms. Encoded symbol values carry the global
    /// shift, which cancels between two symbols and is added to literal
    /// constants; a per-atom shift then makes both additive constants
    /// nonnegative so the circuits stay unsigned.
    fn atom(&mut self, l: &Expr, r: &Expr, is_eq: bool) -> Result<TLit, BoundsError> {
        let lt = decompose_term(l)?;
        let rt = decompose_term(r)?;
        let shift = BigInt::from(self.bounds.shift);
        let ladd = if lt.sym.is_some() { lt.add.clone() } else { lt.add.clone() + &shift };
        let radd = if rt.sym.is_some() { rt.add.clone() } else { rt.add.clone() + &shift };
        let s0 = std::cmp::max(
            BigInt::from(0),
            std::cmp::max(-ladd.clone(), -radd.clone()),
        );
        let la = (ladd + &s0).to_u64().ok_or_else(|| {
            BoundsError::DomainTooLarge((lt.add.clone() + &s0).abs())
        })?;
        let ra = (radd + &s0).to_u64().ok_or_else(|| {
            BoundsError::DomainTooLarge((rt.add.clone() + &s0).abs())
        })?;
        let lbits = match &lt.sym {
            Some(n) => {
                let bs = self.bits_of(n);
                self.add_const(&bs, la)
            }
            None => Self::const_bits(la, width_for(la.max(1))),
        };
        let rbits = match &rt.sym {
            Some(n) => {
                let bs = self.bits_of(n);
                self.add_const(&bs, ra)
            }
            None => Self::const_bits(ra, width_for(ra.max(1))),
        };
        Ok(if is_eq {
            self.cmp_eq(&lbits, &rbits)
        } else {
            self.cmp_lt(&lbits, &rbits)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoder::bounds::compute_bounds;
    use crate::sat::{solve, SatResult};

    fn blast(e: &Expr, preserve: &[String]) -> PropFormula {
        let b = compute_bounds(e).unwrap();
        let mut bl = Blaster::new(preserve, b);
        bl.assert_root(e).unwrap();
        bl.finish()
    }

    #[test]
    fn contradiction_is_unsat() {
        let ge = Expr::int_ge(Expr::int_sym("x"), Expr::int(0));
        let e = Expr::and(vec![ge.clone(), Expr::not(ge)]);
        let f = blast(&e, &[]);
        assert!(matches!(solve(&f), SatResult::Unsat));
    }

    #[test]
    fn shifted_equality_is_sat() {
        // x = y + 1 & y = z + 1 & x < z + 3
        let e = Expr::and(vec![
            Expr::int_eq(Expr::int_sym("x"), Expr::plus(Expr::int_sym("y"), 1)),
            Expr::int_eq(Expr::int_sym("y"), Expr::plus(Expr::int_sym("z"), 1)),
            Expr::int_lt(Expr::int_sym("x"), Expr::plus(Expr::int_sym("z"), 3)),
        ]);
        let f = blast(&e, &[]);
        assert!(matches!(solve(&f), SatResult::Sat(_)));
        // And the negation of the last conjunct is unsat.
        let e = Expr::and(vec![
            Expr::int_eq(Expr::int_sym("x"), Expr::plus(Expr::int_sym("y"), 1)),
            Expr::int_eq(Expr::int_sym("y"), Expr::plus(Expr::int_sym("z"), 1)),
            Expr::not(Expr::int_lt(Expr::int_sym("x"), Expr::plus(Expr::int_sym("z"), 3))),
        ]);
        let f = blast(&e, &[]);
        assert!(matches!(solve(&f), SatResult::Unsat));
    }

    #[test]
    fn negative_constants_have_witnesses() {
        let e = Expr::int_lt(Expr::int_sym("x"), Expr::int(-2));
        let f = blast(&e, &[]);
        assert!(matches!(solve(&f), SatResult::Sat(_)));
    }
}
