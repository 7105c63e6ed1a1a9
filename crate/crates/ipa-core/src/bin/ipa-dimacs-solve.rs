//! Minimal DIMACS CNF solver front end, emitting competition-style
//! output. Used as the stock external backend in tests and available for
//! debugging encoder output.

use ipa_core::sat::{dimacs::parse_dimacs, solve, SatResult};
use std::process::ExitCode;

fn main() -> ExitCode {
    let path = match std::env::args().nth(1) {
        Some(p) => p,
        None => {
            eprintln!("usage: ipa-dimacs-solve <file.cnf>");
            return ExitCode::from(2);
        }
    };
    let text = match std::fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("cannot read {path}: {e}");
            return ExitCode::from(2);
        }
    };
    let f = match parse_dimacs(&text) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("cannot parse {path}: {e}");
            return ExitCode::from(2);
        }
    };
    match solve(&f) {
        SatResult::Sat(model) => {
            println!("s SATISFIABLE");
            let mut line = String::from("v");
            for (k, &b) in model.iter().enumerate() {
                let x = if b { (k + 1) as i64 } else { -((k + 1) as i64) };
                line.push(' ');
                line.push_str(&x.to_string());
                if line.len() > 72 {
                    println!("{line}");
                    line = String::from("v");
                }
            }
            line.push_str(" 0");
            println!("{line}");
            ExitCode::from(10)
        }
        SatResult::Unsat => {
            println!("s UNSATISFIABLE");
            ExitCode::from(20)
        }
    }
}
