//! SAT backend: decide propositional formulas and enumerate all solutions
//! projected onto the preserved variables.
//!
//! The projection loop repeatedly solves, records the preserved-variable
//! assignment of each model, and blocks exactly that assignment with a
//! clause over the preserved variables, so every block prunes the full
//! space of extensions at once. It terminates after at most `2^|P|`
//! models.

pub mod dimacs;
pub mod solver;

pub use solver::{solve, SatResult, Solver};

use crate::abstraction::CubeSet;
use crate::encoder::cnf::{Lit, PropFormula, Var};
use std::io::Write;
use std::process::Command;
use thiserror::Error;

/// Which solver decides the formulas.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum Backend {
    #[default]
    Internal,
    /// External DIMACS solver command; the CNF path is appended as the
    /// last argument.
    Dimacs(String),
}

impl Backend {
    /// Parse a configuration string: `internal` or `dimacs:<command>`.
    pub fn from_config(s: &str) -> Result<Backend, SatError> {
        if s == "internal" {
            return Ok(Backend::Internal);
        }
        if let Some(cmd) = s.strip_prefix("dimacs:") {
            if cmd.trim().is_empty() {
                return Err(SatError::BadBackend(s.to_string()));
            }
            return Ok(Backend::Dimacs(cmd.to_string()));
        }
        Err(SatError::BadBackend(s.to_string()))
    }
}

#[derive(Debug, Error)]
pub enum SatError {
    #[error("unrecognized SAT backend `{0}` (use `internal` or `dimacs:<command>`)")]
    BadBackend(String),
    #[error("external solver failed: {0}")]
    ExternalSolverFailure(String),
    #[error("preserved symbol `{0}` is not in the formula")]
    UnknownPreserved(String),
}

/// Result of a projection enumeration.
#[derive(Debug, Clone)]
pub struct AllSat {
    pub cubes: CubeSet,
    pub solver_calls: u64,
}

/// Enumerate the projections of all satisfying assignments onto the
/// formula's preserved variables, in bank order.
pub fn all_sat_project(f: &PropFormula, backend: &Backend) -> Result<AllSat, SatError> {
    let names: Vec<String> = f.preserved.iter().map(|(n, _)| n.clone()).collect();
    all_sat_project_subset(f, &names, backend)
}

/// Projection onto a subset of the preserved variables; cube bit `k`
/// corresponds to `names[k]`.
pub fn all_sat_project_subset(
    f: &PropFormula,
    names: &[String],
    backend: &Backend,
) -> Result<AllSat, SatError> {
    let vars: Vec<Var> = names
        .iter()
        .map(|n| {
            f.preserved_var(n)
                .ok_or_else(|| SatError::UnknownPreserved(n.clone()))
        })
        .collect::<Result<_, _>>()?;
    match backend {
        Backend::Internal => {
            let mut s = Solver::from_formula(f);
            let mut cubes = CubeSet::empty(vars.len());
            let mut calls = 0u64;
            loop {
                calls += 1;
                match s.solve() {
                    SatResult::Sat(model) => {
                        let cube = project(&model, &vars);
                        let fresh = cubes.insert(cube);
                        debug_assert!(fresh, "projection blocking must not repeat a cube");
                        s.reset_to_root();
                        s.add_clause(blocking_clause(cube, &vars));
                    }
                    SatResult::Unsat => break,
                }
            }
            Ok(AllSat {
                cubes,
                solver_calls: calls,
            })
        }
        Backend::Dimacs(cmd) => {
            let mut extra: Vec<Vec<Lit>> = Vec::new();
            let mut cubes = CubeSet::empty(vars.len());
            let mut calls = 0u64;
            loop {
                calls += 1;
                match solve_external(f, &extra, cmd)? {
                    SatResult::Sat(model) => {
                        let cube = project(&model, &vars);
                        if !cubes.insert(cube) {
                            return Err(SatError::ExternalSolverFailure(format!(
                                "solver returned blocked assignment {cube:b}"
                            )));
                        }
                        extra.push(blocking_clause(cube, &vars));
                    }
                    SatResult::Unsat => break,
                }
            }
            Ok(AllSat {
                cubes,
                solver_calls: calls,
            })
        }
    }
}

fn project(model: &[bool], vars: &[Var]) -> u64 {
    let mut cube = 0u64;
    for (k, v) in vars.iter().enumerate() {
        if model[(v.0 - 1) as usize] {
            cube |= 1 << k;
        }
    }
    cube
}

fn blocking_clause(cube: u64, vars: &[Var]) -> Vec<Lit> {
    vars.iter()
        .enumerate()
        .map(|(k, &v)| Lit::new(v, cube >> k & 1 == 0))
        .collect()
}

/// Decide a formula with an external DIMACS solver.
pub fn solve_backend(f: &PropFormula, backend: &Backend) -> Result<SatResult, SatError> {
    match backend {
        Backend::Internal => Ok(solve(f)),
        Backend::Dimacs(cmd) => solve_external(f, &[], cmd),
    }
}

fn solve_external(
    f: &PropFormula,
    extra: &[Vec<Lit>],
    cmd: &str,
) -> Result<SatResult, SatError> {
    let mut file = tempfile::Builder::new()
        .prefix("ipa-cnf-")
        .suffix(".cnf")
        .tempfile()
        .map_err(|e| SatError::ExternalSolverFailure(e.to_string()))?;
    {
        let w = file.as_file_mut();
        let mut full = f.clone();
        for c in extra {
            full.add_clause(c.clone());
        }
        full.to_dimacs(w)
            .map_err(|e| SatError::ExternalSolverFailure(e.to_string()))?;
        w.flush()
            .map_err(|e| SatError::ExternalSolverFailure(e.to_string()))?;
    }
    let mut parts = cmd.split_whitespace();
    let program = parts
        .next()
        .ok_or_else(|| SatError::ExternalSolverFailure("empty solver command".into()))?;
    let output = Command::new(program)
        .args(parts)
        .arg(file.path())
        .output()
        .map_err(|e| SatError::ExternalSolverFailure(format!("cannot run `{cmd}`: {e}")))?;
    let text = String::from_utf8_lossy(&output.stdout);
    dimacs::parse_solver_output(&text, f.num_vars).map_err(SatError::ExternalSolverFailure)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoder::cnf::VarInfo;

    fn formula_with_preserved(k: usize, clauses: Vec<Vec<i64>>) -> PropFormula {
        let mut f = PropFormula::new();
        for n in 0..k {
            let name = format!("p{n}");
            let v = f.fresh_var(VarInfo::Preserved(name.clone()));
            f.preserved.push((name, v));
        }
        let max = clauses
            .iter()
            .flatten()
            .map(|x| x.unsigned_abs() as u32)
            .max()
            .unwrap_or(0);
        while f.num_vars < max {
            f.fresh_var(VarInfo::Aux);
        }
        for c in clauses {
            f.add_clause(c.into_iter().map(Lit::from_dimacs).collect());
        }
        f
    }

    #[test]
    fn tautology_enumerates_all_cubes() {
        let f = formula_with_preserved(2, vec![]);
        let got = all_sat_project(&f, &Backend::Internal).unwrap();
        assert_eq!(got.cubes.len(), 4);
        assert_eq!(got.solver_calls, 5);
    }

    #[test]
    fn projection_collapses_extensions() {
        // (p0 | x) has every p0 value satisfiable; x is projected away.
        let f = formula_with_preserved(1, vec![vec![1, 2]]);
        let got = all_sat_project(&f, &Backend::Internal).unwrap();
        assert_eq!(got.cubes.len(), 2);
        assert_eq!(got.solver_calls, 3);
    }

    #[test]
    fn unsat_formula_has_no_cubes() {
        let f = formula_with_preserved(1, vec![vec![2], vec![-2]]);
        let got = all_sat_project(&f, &Backend::Internal).unwrap();
        assert!(got.cubes.is_empty());
        assert_eq!(got.solver_calls, 1);
    }

    #[test]
    fn backend_config_parses() {
        assert_eq!(Backend::from_config("internal").unwrap(), Backend::Internal);
        assert_eq!(
            Backend::from_config("dimacs:minisat -verb=0").unwrap(),
            Backend::Dimacs("minisat -verb=0".into())
        );
        assert!(Backend::from_config("dimacs:").is_err());
        assert!(Backend::from_config("magic").is_err());
    }
}
