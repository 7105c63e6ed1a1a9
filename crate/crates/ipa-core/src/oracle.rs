//! Explicit-state bounded reference implementation.
//!
//! States are interpretations of the state symbols with integers drawn
//! from a finite scope and functions stored as total tables over that
//! scope. Concrete reachability is a breadth-first search under all
//! scope-bounded inputs; any integer leaving the scope aborts the search
//! rather than clamping, since a clamped run would silently check a
//! different system. The results back the soundness cross-checks of the
//! symbolic engine.

use crate::abstraction::{alpha_explicit, AbstractionError, CubeSet, PredicateBank, Scope};
use crate::logic::{
    apply, eval_scoped, EvalError, FuncValue, Interp, Sort, SymbolClass, Value,
};
use crate::system::SystemModel;
use num_bigint::BigInt;
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use thiserror::Error;

#[derive(Debug, Clone)]
pub struct OracleConfig {
    /// Scope for state integers, index symbols, and function tables.
    pub scope: Scope,
    /// Narrower ranges for specific input or initial-value symbols
    /// (e.g. to keep increment terms inside the scope).
    pub overrides: BTreeMap<String, Scope>,
    pub max_states: usize,
    /// Breadth-first depth limit; `None` explores to the fixpoint.
    pub max_depth: Option<u32>,
}

impl OracleConfig {
    pub fn new(scope: Scope) -> OracleConfig {
        OracleConfig {
            scope,
            overrides: BTreeMap::new(),
            max_states: 1 << 20,
            max_depth: None,
        }
    }

    pub fn with_override(mut self, sym: &str, sc: Scope) -> OracleConfig {
        self.overrides.insert(sym.to_string(), sc);
        self
    }

    fn range_of(&self, sym: &str) -> Scope {
        self.overrides.get(sym).copied().unwrap_or(self.scope)
    }
}

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("state budget of {0} states exceeded")]
    StateBudgetExceeded(usize),
    #[error("evaluation left the scope: {0}")]
    OutOfScope(EvalError),
    #[error("enumerating {0} interpretations of `{1}` exceeds the budget")]
    EnumerationTooLarge(u64, String),
    #[error(transparent)]
    Abstraction(#[from] AbstractionError),
    #[error("evaluation failed: {0}")]
    Eval(EvalError),
}

fn lift_eval(e: EvalError) -> OracleError {
    match e {
        EvalError::OutOfScope(_) => OracleError::OutOfScope(e),
        other => OracleError::Eval(other),
    }
}

/// All argument tuples over `scope^arity`, in ascending order.
fn arg_tuples(sc: Scope, arity: usize) -> Vec<Vec<BigInt>> {
    let mut out = vec![vec![]];
    for _ in 0..arity {
        let mut next = Vec::with_capacity(out.len() * sc.size() as usize);
        for prefix in &out {
            for v in sc.values() {
                let mut t = prefix.clone();
                t.push(v);
                next.push(t);
            }
        }
        out = next;
    }
    out
}

/// Restrict a function value to a total table over the scope.
fn sample_onto_table(
    fv: &FuncValue,
    arity: usize,
    is_pred: bool,
    sc: Scope,
) -> Result<Value, OracleError> {
    let lo = BigInt::from(sc.lo);
    let hi = BigInt::from(sc.hi);
    let mut table = BTreeMap::new();
    for args in arg_tuples(sc, arity) {
        let v = apply(fv, &args, Some((&lo, &hi))).map_err(lift_eval)?;
        table.insert(args, v);
    }
    let fv = FuncValue {
        table,
        default: None,
    };
    Ok(if is_pred {
        Value::Pred(fv)
    } else {
        Value::Func(fv)
    })
}

/// All interpretations of the given symbols with each symbol ranging over
/// its configured scope; function symbols enumerate every total table.
fn enumerate_interps(
    syms: &[(String, Sort)],
    cfg: &OracleConfig,
    budget: u64,
) -> Result<Vec<Interp>, OracleError> {
    let mut acc: Vec<BTreeMap<String, Value>> = vec![BTreeMap::new()];
    for (name, sort) in syms {
        let choices: Vec<Value> = match sort {
            Sort::Bool => vec![Value::Bool(false), Value::Bool(true)],
            Sort::Int => cfg.range_of(name).values().map(Value::Int).collect(),
            Sort::Func(a) | Sort::Pred(a) => {
                let tuples = arg_tuples(cfg.scope, *a);
                let is_pred = matches!(sort, Sort::Pred(_));
                let per = if is_pred { 2 } else { cfg.scope.size() };
                let count = per.checked_pow(tuples.len() as u32).unwrap_or(u64::MAX);
                if count > budget {
                    return Err(OracleError::EnumerationTooLarge(count, name.clone()));
                }
                let mut tables = Vec::with_capacity(count as usize);
                for mut ix in 0..count {
                    let mut table = BTreeMap::new();
                    for t in &tuples {
                        let k = ix % per;
                        ix /= per;
                        let v = if is_pred {
                            Value::Bool(k == 1)
                        } else {
                            Value::int(cfg.scope.lo + k as i64)
                        };
                        table.insert(t.clone(), v);
                    }
                    let fv = FuncValue {
                        table,
                        default: None,
                    };
                    tables.push(if is_pred { Value::Pred(fv) } else { Value::Func(fv) });
                }
                tables
            }
        };
        let mut next = Vec::with_capacity(acc.len() * choices.len());
        for m in &acc {
            for c in &choices {
                let mut m2 = m.clone();
                m2.insert(name.clone(), c.clone());
                next.push(m2);
            }
        }
        acc = next;
        if acc.len() as u64 > budget {
            return Err(OracleError::EnumerationTooLarge(
                acc.len() as u64,
                name.clone(),
            ));
        }
    }
    Ok(acc.into_iter().map(Interp::new).collect())
}

fn sorted_symbols(m: &SystemModel, class: SymbolClass) -> Vec<(String, Sort)> {
    m.sig
        .symbols_in(class)
        .into_iter()
        .map(|n| {
            let s = m.sig.sort_of(&n).unwrap();
            (n, s)
        })
        .collect()
}

/// Evaluate a state-expression map into a sampled state.
fn eval_state(
    m: &SystemModel,
    exprs: &BTreeMap<String, crate::logic::Expr>,
    env: &Interp,
    sc: Scope,
) -> Result<Interp, OracleError> {
    let lo = BigInt::from(sc.lo);
    let hi = BigInt::from(sc.hi);
    let mut out = BTreeMap::new();
    for (v, e) in exprs {
        let val = eval_scoped(e, env, &lo, &hi).map_err(lift_eval)?;
        let val = match (m.sig.sort_of(v).unwrap(), val) {
            (Sort::Func(a), Value::Func(fv)) => sample_onto_table(&fv, a, false, sc)?,
            (Sort::Pred(a), Value::Pred(fv)) => sample_onto_table(&fv, a, true, sc)?,
            (_, other) => other,
        };
        out.insert(v.clone(), val);
    }
    Ok(Interp::new(out))
}

/// Breadth-first concrete reachability at finite scope. Returns the
/// reachable states in deterministic (ordered-set) order.
pub fn concrete_reach_bounded(
    m: &SystemModel,
    cfg: &OracleConfig,
) -> Result<Vec<Interp>, OracleError> {
    let inputs = enumerate_interps(&sorted_symbols(m, SymbolClass::Input), cfg, 1 << 16)?;
    let inits = enumerate_interps(&sorted_symbols(m, SymbolClass::Init), cfg, 1 << 16)?;

    let mut visited: BTreeSet<Interp> = BTreeSet::new();
    let mut queue: VecDeque<(Interp, u32)> = VecDeque::new();
    for ij in &inits {
        let s = eval_state(m, &m.init, ij, cfg.scope)?;
        if visited.insert(s.clone()) {
            queue.push_back((s, 0));
        }
        if visited.len() > cfg.max_states {
            return Err(OracleError::StateBudgetExceeded(cfg.max_states));
        }
    }
    while let Some((s, depth)) = queue.pop_front() {
        if let Some(limit) = cfg.max_depth {
            if depth >= limit {
                continue;
            }
        }
        for ii in &inputs {
            let env = s.extended(ii);
            let t = eval_state(m, &m.next, &env, cfg.scope)?;
            if visited.insert(t.clone()) {
                if visited.len() > cfg.max_states {
                    return Err(OracleError::StateBudgetExceeded(cfg.max_states));
                }
                queue.push_back((t, depth + 1));
            }
        }
    }
    Ok(visited.into_iter().collect())
}

#[derive(Debug)]
pub struct SoundnessReport {
    pub states_checked: usize,
    /// Concrete states whose abstraction left the symbolic reachable set,
    /// with one offending cube each. Any entry is an engine or encoder
    /// bug, never expected.
    pub violations: Vec<(Interp, u64)>,
}

/// Check that the abstraction of every bounded-reachable concrete state
/// is contained in the symbolic reachable set.
pub fn soundness_check(
    m: &SystemModel,
    bank: &PredicateBank,
    rho: &CubeSet,
    cfg: &OracleConfig,
) -> Result<SoundnessReport, OracleError> {
    let states = concrete_reach_bounded(m, cfg)?;
    let mut violations = Vec::new();
    for s in &states {
        let cubes = alpha_explicit(s, bank, cfg.scope)?;
        for c in cubes.iter() {
            if !rho.contains(c) && violations.len() < 10 {
                violations.push((s.clone(), c));
            }
        }
    }
    Ok(SoundnessReport {
        states_checked: states.len(),
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::Expr;

    fn running_cfg() -> OracleConfig {
        OracleConfig::new(Scope::new(-2, 3))
            .with_override("i", Scope::new(-2, 2))
    }

    #[test]
    fn depth_zero_is_exactly_initial() {
        let m = crate::system::tests::running_example();
        let mut cfg = running_cfg();
        cfg.max_depth = Some(0);
        let states = concrete_reach_bounded(&m, &cfg).unwrap();
        // Empty initial-value set: exactly one initial state, the identity
        // table.
        assert_eq!(states.len(), 1);
        match states[0].get("F").unwrap() {
            Value::Func(fv) => {
                assert!(fv
                    .table
                    .iter()
                    .all(|(args, v)| Value::Int(args[0].clone()) == *v));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn stuttering_system_stays_initial() {
        let mut m = crate::system::tests::running_example();
        m.next.insert("F".to_string(), Expr::func_sym("F"));
        let cfg = running_cfg();
        let states = concrete_reach_bounded(&m, &cfg).unwrap();
        let mut cfg0 = cfg;
        cfg0.max_depth = Some(0);
        let initial = concrete_reach_bounded(&m, &cfg0).unwrap();
        assert_eq!(states, initial);
    }

    #[test]
    fn running_example_reachable_states_keep_invariant() {
        // Every reached table f satisfies f(u) >= 0 for u >= 0 in scope.
        let m = crate::system::tests::running_example();
        let states = concrete_reach_bounded(&m, &running_cfg()).unwrap();
        assert!(states.len() > 1);
        for s in &states {
            match s.get("F").unwrap() {
                Value::Func(fv) => {
                    for (args, v) in &fv.table {
                        if args[0] >= BigInt::from(0) {
                            assert!(v.as_int().unwrap() >= &BigInt::from(0), "state {s:?}");
                        }
                    }
                }
                other => panic!("unexpected {other:?}"),
            }
        }
    }

    #[test]
    fn scope_too_tight_aborts() {
        let m = crate::system::tests::running_example();
        // Inputs allowed up to the scope top: i + 1 then leaves the scope.
        let cfg = OracleConfig::new(Scope::new(-2, 3));
        assert!(matches!(
            concrete_reach_bounded(&m, &cfg),
            Err(OracleError::OutOfScope(_))
        ));
    }

    #[test]
    fn budget_is_enforced() {
        let m = crate::system::tests::running_example();
        let mut cfg = running_cfg();
        cfg.max_states = 2;
        assert!(matches!(
            concrete_reach_bounded(&m, &cfg),
            Err(OracleError::StateBudgetExceeded(2))
        ));
    }

    #[test]
    fn depth_one_successors_match_hand_computation() {
        // From the identity with input i = -1, the new table maps -1 to 0.
        let m = crate::system::tests::running_example();
        let mut cfg = running_cfg();
        cfg.max_depth = Some(1);
        let states = concrete_reach_bounded(&m, &cfg).unwrap();
        let expect: BTreeMap<Vec<BigInt>, Value> = (-2..=3)
            .map(|u| {
                let key = vec![BigInt::from(u)];
                let v = if u == -1 { 0 } else { u };
                (key, Value::int(v))
            })
            .collect();
        assert!(states.iter().any(|s| match s.get("F").unwrap() {
            Value::Func(fv) => fv.table == expect,
            _ => false,
        }));
    }

    #[test]
    fn soundness_running_example() {
        use crate::abstraction::{generate_instantiations, InstantiationOptions};
        use crate::reach::{reach, ReachOptions};
        use crate::sat::Backend;
        let m = crate::system::tests::running_example();
        let bank = crate::abstraction::tests::running_bank();
        let pi = generate_instantiations(&m, &bank, InstantiationOptions::default());
        let r = reach(&m, &bank, &pi, &Backend::Internal, ReachOptions::default()).unwrap();
        assert!(r.converged);
        let report = soundness_check(&m, &bank, &r.rho, &running_cfg()).unwrap();
        assert!(report.states_checked > 1);
        assert!(report.violations.is_empty());
        // A corrupted reachable set is caught with a concrete witness.
        let mut broken = CubeSet::empty(2);
        for c in r.rho.iter() {
            if c != 0b01 {
                broken.insert(c);
            }
        }
        let report = soundness_check(&m, &bank, &broken, &running_cfg()).unwrap();
        assert!(!report.violations.is_empty());
    }
}
