//! Translation of quantifier-free formulas into equisatisfiable
//! propositional clauses preserving the solution set over a designated
//! set of Boolean symbols.
//!
//! Pipeline: normalize (beta reduction and if-then-else removal), replace
//! uninterpreted applications by fresh symbols with functional
//! consistency constraints, derive a small-domain bound for the integer
//! symbols, and bit-blast. Existential quantification over everything
//! except the preserved symbols is implicit: the SAT backend enumerates
//! models projected onto the preserved variables.

pub mod ackermann;
pub mod bitblast;
pub mod bounds;
pub mod cnf;

pub use ackermann::{ackermannize, Ackermannized};
pub use bitblast::Blaster;
pub use bounds::{compute_bounds, BoundsError, DomainBound};
pub use cnf::{Lit, PropFormula, Var, VarInfo};

use crate::logic::{normalize, Expr};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EncodeError {
    #[error(transparent)]
    Bounds(#[from] BoundsError),
}

#[derive(Debug, Clone)]
pub struct Encoded {
    pub prop: PropFormula,
    pub bounds: DomainBound,
    pub ack: Ackermannized,
}

/// Encode a Boolean formula, preserving its solution set over the given
/// Boolean symbols. The preserved symbols receive variables `1..=k` in
/// order, whether or not they occur in the formula.
pub fn encode(e: &Expr, preserve: &[String]) -> Result<Encoded, EncodeError> {
    let normalized = normalize(e);
    let ack = ackermannize(&normalized);
    let bounds = compute_bounds(&ack.expr)?;
    let mut blaster = Blaster::new(preserve, bounds.clone());
    blaster.assert_root(&ack.expr)?;
    Ok(Encoded {
        prop: blaster.finish(),
        bounds,
        ack,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sat::{all_sat_project, solve, Backend, SatResult};

    fn p() -> Expr {
        Expr::bool_sym("p")
    }
    fn q() -> Expr {
        Expr::bool_sym("q")
    }
    fn preserve() -> Vec<String> {
        vec!["p".into(), "q".into()]
    }

    #[test]
    fn tautology_preserves_all_assignments() {
        let enc = encode(&Expr::truth(true), &["p".to_string()]).unwrap();
        let cubes = all_sat_project(&enc.prop, &Backend::Internal).unwrap();
        assert_eq!(cubes.cubes.len(), 2);
    }

    #[test]
    fn iff_formula_keeps_two_solutions() {
        // p <=> x >= 0 and q <=> x >= 0 leaves exactly the cubes where p
        // and q agree.
        let ge = Expr::int_ge(Expr::int_sym("x"), Expr::int(0));
        let e = Expr::and(vec![Expr::iff(p(), ge.clone()), Expr::iff(q(), ge)]);
        let enc = encode(&e, &preserve()).unwrap();
        let got = all_sat_project(&enc.prop, &Backend::Internal).unwrap();
        let cubes: Vec<String> = got
            .cubes
            .iter()
            .map(|c| crate::abstraction::CubeSet::bits(2, c))
            .collect();
        assert_eq!(cubes, vec!["00", "11"]);
    }

    #[test]
    fn encoding_is_deterministic() {
        let ge = Expr::int_ge(Expr::int_sym("x"), Expr::int(0));
        let e = Expr::and(vec![Expr::iff(p(), ge.clone()), Expr::iff(q(), ge)]);
        let a = encode(&e, &preserve()).unwrap();
        let b = encode(&e, &preserve()).unwrap();
        assert_eq!(a.prop.clauses, b.prop.clauses);
        assert_eq!(a.prop.num_vars, b.prop.num_vars);
    }

    #[test]
    fn unsatisfiable_formula_encodes_unsat() {
        let e = Expr::and(vec![
            Expr::int_lt(Expr::int_sym("x"), Expr::int_sym("y")),
            Expr::int_lt(Expr::int_sym("y"), Expr::int_sym("x")),
        ]);
        let enc = encode(&e, &[]).unwrap();
        assert!(matches!(solve(&enc.prop), SatResult::Unsat));
    }
}
