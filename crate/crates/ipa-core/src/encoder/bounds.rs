//! Small-domain bounds for application-free formulas.
//!
//! The fragment has atoms `t1 = t2` and `t1 < t2` where each term is an
//! integer symbol plus a constant, or a constant. For the offset-only
//! fragment, satisfiability over the integers equals satisfiability with
//! every symbol drawn from a window of `N*(C+1)` values, where `N` counts
//! the integer symbols and `C` sums the absolute offsets: sorting a model
//! and flooring every gap at `C+1` preserves all atom truth values.
//!
//! Literal constants pin absolute positions, so they cost one anchor
//! point plus the pinned cluster's span: with constants present the
//! window grows to `2*(N+2)*(C+K+1) - 1` values (`K` sums the distinct
//! constants' magnitudes) and is centered by `shift`, i.e. encoded value
//! = actual value + shift with encoded values in `[0, D-1]`.

use crate::logic::{Expr, ExprNode};
use num_bigint::BigInt;
use num_traits::Signed;
use std::collections::{BTreeMap, BTreeSet, HashSet};
use thiserror::Error;

/// Uniform encoded range `[0, D-1]` for every integer symbol, with the
/// shift between encoded and actual values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomainBound {
    pub ranges: BTreeMap<String, u64>,
    pub shift: u64,
}

impl DomainBound {
    pub fn size(&self) -> u64 {
        self.ranges.values().copied().max().unwrap_or(1)
    }

    /// Actual-value window corresponding to the encoded range.
    pub fn window(&self) -> (i64, i64) {
        let d = self.size() as i64;
        let s = self.shift as i64;
        (-s, d - 1 - s)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundsError {
    #[error("domain of {0} values is too large to encode")]
    DomainTooLarge(BigInt),
    #[error("term `{0}` is not in the bounded fragment")]
    BadTerm(String),
}

/// One side of a comparison: an optional symbol and an additive constant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub sym: Option<String>,
    pub add: BigInt,
}

pub fn decompose_term(e: &Expr) -> Result<Term, BoundsError> {
    match e.node() {
        ExprNode::IntSym(n) => Ok(Term {
            sym: Some(n.clone()),
            add: BigInt::from(0),
        }),
        ExprNode::IntConst(k) => Ok(Term {
            sym: None,
            add: k.clone(),
        }),
        ExprNode::PlusConst(inner, k) => {
            let t = decompose_term(inner)?;
            Ok(Term {
                sym: t.sym,
                add: t.add + k,
            })
        }
        _ => Err(BoundsError::BadTerm(e.to_string())),
    }
}

/// Compute the domain bound of an application-free formula.
pub fn compute_bounds(e: &Expr) -> Result<DomainBound, BoundsError> {
    let mut syms = BTreeSet::new();
    let mut offset_sum = BigInt::from(0);
    let mut consts: BTreeSet<BigInt> = BTreeSet::new();
    let mut seen = HashSet::new();
    walk(e, &mut seen, &mut |l, r| -> Result<(), BoundsError> {
        for side in [l, r] {
            let t = decompose_term(side)?;
            match t.sym {
                Some(n) => {
                    syms.insert(n);
                    offset_sum += t.add.abs();
                }
                None => {
                    consts.insert(t.add);
                }
            }
        }
        Ok(())
    })?;

    let n = BigInt::from(syms.len());
    let d: BigInt = if consts.is_empty() {
        let d = n * (offset_sum + 1);
        if d > BigInt::from(0) {
            d
        } else {
            BigInt::from(1)
        }
    } else {
        let k_sum: BigInt = consts.iter().map(|k| k.abs()).sum();
        let dprime = (n + 2) * (offset_sum + k_sum + 1);
        BigInt::from(2) * dprime - 1
    };
    let d_u64 = u64::try_from(&d).map_err(|_| BoundsError::DomainTooLarge(d.clone()))?;
    if d_u64 > u64::from(u32::MAX) {
        return Err(BoundsError::DomainTooLarge(d));
    }
    let shift = if consts.is_empty() { 0 } else { (d_u64 - 1) / 2 };
    Ok(DomainBound {
        ranges: syms.into_iter().map(|s| (s, d_u64)).collect(),
        shift,
    })
}

fn walk(
    e: &Expr,
    seen: &mut HashSet<usize>,
    on_atom: &mut impl FnMut(&Expr, &Expr) -> Result<(), BoundsError>,
) -> Result<(), BoundsError> {
    if !seen.insert(e.key()) {
        return Ok(());
    }
    match e.node() {
        ExprNode::IntEq(l, r) | ExprNode::IntLt(l, r) => on_atom(l, r),
        ExprNode::Not(a) => walk(a, seen, on_atom),
        ExprNode::And(cs) | ExprNode::Or(cs) => {
            for c in cs {
                walk(c, seen, on_atom)?;
            }
            Ok(())
        }
        _ => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(n: &str) -> Expr {
        Expr::int_sym(n)
    }

    #[test]
    fn two_symbols_one_offset() {
        // x = y + 1 with symbols {x, y}: N = 2, C = 1, window of 4 values.
        let e = Expr::int_eq(sym("x"), Expr::plus(sym("y"), 1));
        let b = compute_bounds(&e).unwrap();
        assert_eq!(b.size(), 4);
        assert_eq!(b.shift, 0);
        assert_eq!(b.ranges.len(), 2);
        assert!(b.ranges.values().all(|&d| d == 4));
    }

    #[test]
    fn single_symbol_no_offsets() {
        let e = Expr::int_lt(sym("x"), sym("x"));
        let b = compute_bounds(&e).unwrap();
        assert_eq!(b.size(), 1);
    }

    #[test]
    fn three_symbols_two_offsets() {
        // N = 3, C = 2: window of 9 values.
        let e = Expr::and(vec![
            Expr::int_lt(Expr::plus(sym("x"), 1), sym("y")),
            Expr::int_eq(Expr::plus(sym("z"), -1), sym("y")),
        ]);
        let b = compute_bounds(&e).unwrap();
        assert_eq!(b.size(), 9);
        assert_eq!(b.shift, 0);
    }

    #[test]
    fn constants_anchor_the_window() {
        // x < 0 must admit a negative witness: the window spans both signs.
        let e = Expr::int_lt(sym("x"), Expr::int(0));
        let b = compute_bounds(&e).unwrap();
        let (lo, hi) = b.window();
        assert!(lo < 0 && hi >= 0, "window [{lo}, {hi}]");
    }
}
