//! DIMACS CNF reading and solver-output parsing, used by the external
//! backend and the bundled `ipa-dimacs-solve` helper.

use crate::encoder::cnf::{Lit, PropFormula, VarInfo};
use crate::sat::solver::SatResult;

/// Parse DIMACS CNF text. Comment lines of the form `c pred <name> <var>`
/// restore the preserved-variable map.
pub fn parse_dimacs(text: &str) -> Result<PropFormula, String> {
    let mut f = PropFormula::new();
    let mut declared_vars = 0u32;
    let mut preserved: Vec<(String, u32)> = Vec::new();
    let mut current: Vec<Lit> = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('c') {
            let parts: Vec<&str> = rest.split_whitespace().collect();
            if parts.len() == 3 && parts[0] == "pred" {
                let var: u32 = parts[2]
                    .parse()
                    .map_err(|_| format!("bad pred header: {line}"))?;
                preserved.push((parts[1].to_string(), var));
            }
            continue;
        }
        if let Some(rest) = line.strip_prefix("p ") {
            let parts: Vec<&str> = rest.split_whitespace().collect();
            if parts.len() != 3 || parts[0] != "cnf" {
                return Err(format!("bad problem line: {line}"));
            }
            declared_vars = parts[1].parse().map_err(|_| "bad var count")?;
            continue;
        }
        for tok in line.split_whitespace() {
            let x: i64 = tok.parse().map_err(|_| format!("bad literal `{tok}`"))?;
            if x == 0 {
                f.clauses.push(std::mem::take(&mut current));
            } else {
                current.push(Lit::from_dimacs(x));
            }
        }
    }
    if !current.is_empty() {
        return Err("clause not terminated by 0".into());
    }
    let max_used = f
        .clauses
        .iter()
        .flatten()
        .map(|l| l.var().0)
        .max()
        .unwrap_or(0);
    f.num_vars = declared_vars.max(max_used);
    for _ in 0..f.num_vars {
        f.var_map.push(VarInfo::Aux);
    }
    for (name, v) in preserved {
        if v >= 1 && v <= f.num_vars {
            f.var_map[(v - 1) as usize] = VarInfo::Preserved(name.clone());
            f.preserved.push((name, crate::encoder::cnf::Var(v)));
        }
    }
    Ok(f)
}

/// Parse the stdout of a DIMACS solver: either the competition format
/// (`s SATISFIABLE` plus `v` lines) or the plain `SAT`/`UNSAT` style with
/// a literal line following.
pub fn parse_solver_output(text: &str, num_vars: u32) -> Result<SatResult, String> {
    let mut sat: Option<bool> = None;
    let mut lits: Vec<i64> = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("s ") {
            match rest.trim() {
                "SATISFIABLE" => sat = Some(true),
                "UNSATISFIABLE" => sat = Some(false),
                other => return Err(format!("unrecognized status `{other}`")),
            }
            continue;
        }
        if line == "SAT" || line == "SATISFIABLE" {
            sat = Some(true);
            continue;
        }
        if line == "UNSAT" || line == "UNSATISFIABLE" {
            sat = Some(false);
            continue;
        }
        let body = line.strip_prefix("v ").unwrap_or(line);
        for tok in body.split_whitespace() {
            if let Ok(x) = tok.parse::<i64>() {
                if x != 0 {
                    lits.push(x);
                }
            }
        }
    }
    match sat {
        Some(true) => {
            let mut model = vec![false; num_vars as usize];
            for x in lits {
                let v = x.unsigned_abs() as usize;
                if v >= 1 && v <= num_vars as usize {
                    model[v - 1] = x > 0;
                }
            }
            Ok(SatResult::Sat(model))
        }
        Some(false) => Ok(SatResult::Unsat),
        None => Err("no status line in solver output".into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_through_dimacs_text() {
        let mut f = PropFormula::new();
        let p = f.fresh_var(VarInfo::Preserved("p".into()));
        f.preserved.push(("p".into(), p));
        let q = f.fresh_var(VarInfo::Aux);
        f.add_clause(vec![
            Lit::new(p, true),
            Lit::new(q, false),
        ]);
        let mut buf = Vec::new();
        f.to_dimacs(&mut buf).unwrap();
        let parsed = parse_dimacs(&String::from_utf8(buf).unwrap()).unwrap();
        assert_eq!(parsed.num_vars, 2);
        assert_eq!(parsed.clauses, f.clauses);
        assert_eq!(parsed.preserved, f.preserved);
    }

    #[test]
    fn parses_competition_output() {
        let out = "c comment\ns SATISFIABLE\nv 1 -2 3 0\n";
        match parse_solver_output(out, 3).unwrap() {
            SatResult::Sat(m) => assert_eq!(m, vec![true, false, true]),
            _ => panic!(),
        }
        let out = "s UNSATISFIABLE\n";
        assert_eq!(parse_solver_output(out, 3).unwrap(), SatResult::Unsat);
    }

    #[test]
    fn parses_plain_output() {
        let out = "SAT\n1 -2 0\n";
        match parse_solver_output(out, 2).unwrap() {
            SatResult::Sat(m) => assert_eq!(m, vec![true, false]),
            _ => panic!(),
        }
    }
}
