//! Symbolic abstract reachability.
//!
//! The engine iterates the one-step image from the abstract initial set,
//! accumulating cubes until the set stops growing. Each step conjoins the
//! instantiated membership formula of the current set (the whole set,
//! never a frontier: concretization does not distribute over union, so
//! the frontier-set optimization of symbolic model checking is unsound
//! here) with the equations tying each predicate variable to its
//! next-state composition, then enumerates the solutions projected onto
//! the predicate variables. Axiom predicates are asserted instead of
//! equated, and their variables are pinned true.

use crate::abstraction::{
    concretization_formula, AbstractionError, CubeSet, PredicateBank, SubstitutionSet,
};
use crate::encoder::{encode, EncodeError, Lit, PropFormula};
use crate::logic::{eval, Expr, SymbolClass};
use crate::sat::{all_sat_project, Backend, SatError};
use crate::system::SystemModel;
use std::time::{Duration, Instant};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error(transparent)]
    Abstraction(#[from] AbstractionError),
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error(transparent)]
    Sat(#[from] SatError),
    #[error("property mentions `{0}`, which is not a predicate symbol")]
    FreeSymbolOutOfScope(String),
}

#[derive(Debug, Clone, Default)]
pub struct IterStats {
    pub new_cubes: usize,
    pub solver_calls: u64,
    pub wall: Duration,
}

#[derive(Debug, Clone)]
pub struct ReachResult {
    pub rho: CubeSet,
    /// Number of image computations performed, including the one that
    /// confirmed the fixpoint.
    pub iterations: u32,
    pub per_iteration: Vec<IterStats>,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PropertyStatus {
    Holds,
    Unknown,
}

#[derive(Debug, Clone)]
pub struct PropertyVerdict {
    pub status: PropertyStatus,
    /// Violating cubes, capped.
    pub witnesses: Vec<u64>,
}

/// Why a verification attempt can come back UNKNOWN even for a correct
/// system; shown alongside failed properties.
pub const FAILURE_EXPLANATIONS: [&str; 4] = [
    "the system may simply not satisfy the property",
    "the predicate set may be too weak to express an inductive strengthening of the property",
    "the substitution set may instantiate too few index terms to complete the proof",
    "no finite set of instantiations may suffice for this property",
];

fn iff(a: Expr, b: Expr) -> Expr {
    Expr::iff(a, b)
}

/// The formula whose projected solutions are the abstract initial set:
/// each non-axiom predicate variable is equated with the predicate's
/// initial-state composition, axiom compositions are asserted, and axiom
/// variables are pinned true.
fn initial_formula(m: &SystemModel, bank: &PredicateBank) -> Expr {
    let mut parts = Vec::new();
    for p in &bank.pred_syms {
        let composed = m.compose_init(&bank.defs[p]);
        if bank.axioms.contains(p) {
            parts.push(composed);
            parts.push(Expr::bool_sym(p.clone()));
        } else {
            parts.push(iff(Expr::bool_sym(p.clone()), composed));
        }
    }
    Expr::and(parts)
}

/// The one-step image formula from `rho`; see the module docs.
fn step_formula(
    rho: &CubeSet,
    m: &SystemModel,
    bank: &PredicateBank,
    pi: &SubstitutionSet,
) -> Result<Expr, AbstractionError> {
    let mut parts = vec![concretization_formula(rho, bank, pi)?];
    for p in &bank.pred_syms {
        let composed = m.compose_next(&bank.defs[p]);
        if bank.axioms.contains(p) {
            parts.push(composed);
            parts.push(Expr::bool_sym(p.clone()));
        } else {
            parts.push(iff(Expr::bool_sym(p.clone()), composed));
        }
    }
    Ok(Expr::and(parts))
}

/// Solutions of the abstract initial-state formula.
pub fn initial_abstract(
    m: &SystemModel,
    bank: &PredicateBank,
    backend: &Backend,
) -> Result<CubeSet, EngineError> {
    let enc = encode(&initial_formula(m, bank), &bank.pred_syms)?;
    Ok(all_sat_project(&enc.prop, backend)?.cubes)
}

/// One reachability step: `rho` together with every cube the image
/// formula admits. Known cubes are blocked up front so the enumeration
/// only produces new ones.
pub fn step(
    rho: &CubeSet,
    m: &SystemModel,
    bank: &PredicateBank,
    pi: &SubstitutionSet,
    backend: &Backend,
) -> Result<CubeSet, EngineError> {
    let (next, _) = step_counted(rho, m, bank, pi, backend)?;
    Ok(next)
}

fn step_counted(
    rho: &CubeSet,
    m: &SystemModel,
    bank: &PredicateBank,
    pi: &SubstitutionSet,
    backend: &Backend,
) -> Result<(CubeSet, u64), EngineError> {
    let formula = step_formula(rho, m, bank, pi)?;
    let mut enc = encode(&formula, &bank.pred_syms)?;
    block_cubes(&mut enc.prop, rho, bank);
    let out = all_sat_project(&enc.prop, backend)?;
    Ok((rho.union(&out.cubes), out.solver_calls))
}

fn block_cubes(prop: &mut PropFormula, rho: &CubeSet, bank: &PredicateBank) {
    for cube in rho.iter() {
        let clause: Vec<Lit> = bank
            .pred_syms
            .iter()
            .enumerate()
            .map(|(k, p)| {
                let v = prop.preserved_var(p).expect("preserved predicate");
                Lit::new(v, cube >> k & 1 == 0)
            })
            .collect();
        prop.add_clause(clause);
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ReachOptions {
    pub max_iters: u32,
}

impl Default for ReachOptions {
    fn default() -> Self {
        ReachOptions { max_iters: 64 }
    }
}

/// Iterate the image from the abstract initial set to a fixpoint or the
/// iteration budget. `converged` is set only when a step confirmed
/// `rho` stable.
pub fn reach(
    m: &SystemModel,
    bank: &PredicateBank,
    pi: &SubstitutionSet,
    backend: &Backend,
    opts: ReachOptions,
) -> Result<ReachResult, EngineError> {
    if pi.is_empty() {
        return Err(EngineError::Abstraction(
            AbstractionError::EmptySubstitutionSet,
        ));
    }
    let mut rho = initial_abstract(m, bank, backend)?;
    let mut per_iteration = Vec::new();
    let mut converged = false;
    let mut iterations = 0;
    while iterations < opts.max_iters {
        let t0 = Instant::now();
        let (next, calls) = step_counted(&rho, m, bank, pi, backend)?;
        iterations += 1;
        let grew = next.len() - rho.len();
        per_iteration.push(IterStats {
            new_cubes: grew,
            solver_calls: calls,
            wall: t0.elapsed(),
        });
        if grew == 0 {
            converged = true;
            rho = next;
            break;
        }
        rho = next;
    }
    Ok(ReachResult {
        rho,
        iterations,
        per_iteration,
        converged,
    })
}

/// Check a property formula over the predicate symbols against a cube
/// set: it holds when every cube satisfies it.
pub fn check_property(
    rho: &CubeSet,
    psi: &Expr,
    bank: &PredicateBank,
    witness_cap: usize,
) -> Result<PropertyVerdict, EngineError> {
    for s in psi.free_symbols() {
        if !bank.pred_syms.contains(&s) {
            return Err(EngineError::FreeSymbolOutOfScope(s));
        }
    }
    let mut witnesses = Vec::new();
    for cube in rho.iter() {
        let env = CubeSet::cube_interp(bank, cube);
        let holds = eval(psi, &env)
            .ok()
            .and_then(|v| v.as_bool())
            .unwrap_or(false);
        if !holds && witnesses.len() < witness_cap {
            witnesses.push(cube);
        }
    }
    Ok(PropertyVerdict {
        status: if witnesses.is_empty() {
            PropertyStatus::Holds
        } else {
            PropertyStatus::Unknown
        },
        witnesses,
    })
}

#[derive(Debug, Clone)]
pub struct InductiveReport {
    /// Inductive under the given substitution set; a stronger universal
    /// check is not decidable in general.
    pub inductive: bool,
    pub base_failures: CubeSet,
    pub step_failures: CubeSet,
}

/// Materialize the cube set of a formula over the predicate symbols
/// (restricted to axiom-true cubes) and check that it contains the
/// abstract initial set and is closed under the one-step image.
pub fn check_inductive(
    chi: &Expr,
    m: &SystemModel,
    bank: &PredicateBank,
    pi: &SubstitutionSet,
    backend: &Backend,
) -> Result<InductiveReport, EngineError> {
    for s in chi.free_symbols() {
        if !bank.pred_syms.contains(&s) {
            return Err(EngineError::FreeSymbolOutOfScope(s));
        }
    }
    if pi.is_empty() {
        return Err(EngineError::Abstraction(
            AbstractionError::EmptySubstitutionSet,
        ));
    }
    let mut parts = vec![chi.clone()];
    for q in &bank.axioms {
        parts.push(Expr::bool_sym(q.clone()));
    }
    let enc = encode(&Expr::and(parts), &bank.pred_syms)?;
    let chi_set = all_sat_project(&enc.prop, backend)?.cubes;

    let init = initial_abstract(m, bank, backend)?;
    let base_failures = init.difference(&chi_set);
    let stepped = step(&chi_set, m, bank, pi, backend)?;
    let step_failures = stepped.difference(&chi_set);
    Ok(InductiveReport {
        inductive: base_failures.is_empty() && step_failures.is_empty(),
        base_failures,
        step_failures,
    })
}

/// Render a cube set in the dump format: a header naming the predicate
/// order, then one bank-order bitstring per cube.
pub fn render_reach_dump(rho: &CubeSet, bank: &PredicateBank) -> String {
    let mut out = format!("# predicates: {}\n", bank.pred_syms.join(" "));
    for cube in rho.iter() {
        out.push_str(&CubeSet::bits(bank.width(), cube));
        out.push('\n');
    }
    out
}

/// Sanity diagnostics shared by the library front ends: the model
/// validates, the bank validates, and properties mention only predicate
/// symbols.
pub fn validate_inputs(m: &SystemModel, bank: &PredicateBank) -> Vec<String> {
    let mut out: Vec<String> = m.validate().iter().map(|d| d.to_string()).collect();
    out.extend(bank.validate(&m.sig));
    for x in &bank.index_syms {
        if m.sig.class_of(x) != Some(SymbolClass::Index) {
            out.push(format!("`{x}` is not declared as an index symbol"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abstraction::{generate_instantiations, InstantiationOptions};

    fn setup() -> (SystemModel, PredicateBank, SubstitutionSet) {
        let m = crate::system::tests::running_example();
        let bank = crate::abstraction::tests::running_bank();
        let pi = generate_instantiations(&m, &bank, InstantiationOptions::default());
        (m, bank, pi)
    }

    const TT: u64 = 0b11;
    const TF: u64 = 0b01;
    const FF: u64 = 0b00;

    #[test]
    fn initial_set_is_p_iff_q() {
        let (m, bank, _) = setup();
        let got = initial_abstract(&m, &bank, &Backend::Internal).unwrap();
        assert_eq!(got, CubeSet::from_cubes(2, [TT, FF]));
    }

    #[test]
    fn zero_predicates_yield_one_empty_cube() {
        let (m, mut bank, _) = setup();
        bank.pred_syms.clear();
        bank.defs.clear();
        let got = initial_abstract(&m, &bank, &Backend::Internal).unwrap();
        assert_eq!(got.len(), 1);
    }

    #[test]
    fn step_adds_tf_then_fixes() {
        let (m, bank, pi) = setup();
        let rho0 = CubeSet::from_cubes(2, [TT, FF]);
        let rho1 = step(&rho0, &m, &bank, &pi, &Backend::Internal).unwrap();
        assert_eq!(rho1, CubeSet::from_cubes(2, [TT, TF, FF]));
        let rho2 = step(&rho1, &m, &bank, &pi, &Backend::Internal).unwrap();
        assert_eq!(rho2, rho1);
    }

    #[test]
    fn step_of_empty_is_empty() {
        let (m, bank, pi) = setup();
        let empty = CubeSet::empty(2);
        let got = step(&empty, &m, &bank, &pi, &Backend::Internal).unwrap();
        assert!(got.is_empty());
    }

    #[test]
    fn reach_converges_on_running_example() {
        let (m, bank, pi) = setup();
        let r = reach(&m, &bank, &pi, &Backend::Internal, ReachOptions::default()).unwrap();
        assert!(r.converged);
        assert_eq!(r.rho, CubeSet::from_cubes(2, [TT, TF, FF]));
        assert_eq!(r.iterations, 2);
        // Monotone iterates: cube counts only grow.
        assert!(r.per_iteration[0].new_cubes >= r.per_iteration[1].new_cubes);
    }

    #[test]
    fn budget_stops_without_convergence() {
        let (m, bank, pi) = setup();
        let r = reach(&m, &bank, &pi, &Backend::Internal, ReachOptions { max_iters: 1 }).unwrap();
        assert!(!r.converged);
        assert_eq!(r.rho, CubeSet::from_cubes(2, [TT, TF, FF]));
    }

    #[test]
    fn property_q_implies_p_holds() {
        let (m, bank, pi) = setup();
        let r = reach(&m, &bank, &pi, &Backend::Internal, ReachOptions::default()).unwrap();
        let psi = Expr::implies(Expr::bool_sym("q"), Expr::bool_sym("p"));
        let v = check_property(&r.rho, &psi, &bank, 10).unwrap();
        assert_eq!(v.status, PropertyStatus::Holds);

        let psi = Expr::bool_sym("p");
        let v = check_property(&r.rho, &psi, &bank, 10).unwrap();
        assert_eq!(v.status, PropertyStatus::Unknown);
        assert_eq!(v.witnesses, vec![FF]);

        let empty = CubeSet::empty(2);
        let v = check_property(&empty, &Expr::bool_sym("p"), &bank, 10).unwrap();
        assert_eq!(v.status, PropertyStatus::Holds);
    }

    #[test]
    fn property_over_non_predicates_is_rejected() {
        let (_, bank, _) = setup();
        let rho = CubeSet::empty(2);
        let err = check_property(&rho, &Expr::bool_sym("z"), &bank, 10).unwrap_err();
        assert!(matches!(err, EngineError::FreeSymbolOutOfScope(_)));
    }

    #[test]
    fn inductive_checks() {
        let (m, bank, pi) = setup();
        // p | !q is the fixpoint formula and is inductive.
        let chi = Expr::or(vec![Expr::bool_sym("p"), Expr::not(Expr::bool_sym("q"))]);
        let rep = check_inductive(&chi, &m, &bank, &pi, &Backend::Internal).unwrap();
        assert!(rep.inductive);
        // p & q excludes FF, which is initial: the base case fails.
        let chi = Expr::and(vec![Expr::bool_sym("p"), Expr::bool_sym("q")]);
        let rep = check_inductive(&chi, &m, &bank, &pi, &Backend::Internal).unwrap();
        assert!(!rep.inductive);
        assert!(rep.base_failures.contains(FF));
        // true is inductive for every model.
        let rep = check_inductive(&Expr::truth(true), &m, &bank, &pi, &Backend::Internal).unwrap();
        assert!(rep.inductive);
    }

    #[test]
    fn dump_format_lists_cubes() {
        let bank = crate::abstraction::tests::running_bank();
        let rho = CubeSet::from_cubes(2, [TT, TF, FF]);
        let dump = render_reach_dump(&rho, &bank);
        assert_eq!(dump, "# predicates: p q\n00\n10\n11\n");
    }
}
