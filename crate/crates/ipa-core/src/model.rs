//! The model file format: a line-oriented description of a transition
//! system, its predicate bank, and the properties to check.
//!
//! ```text
//! # comment                      (also allowed at end of line)
//! CONST name := 3                named integer literal
//! VAR name : BOOL|INT|FUNC(n)|PRED(n)
//! INPUT name : <sort>
//! INITSYM name : <sort>
//! INIT name := <expr>
//! NEXT name := <expr>
//! INDEX name
//! PRED name := <expr>
//! AXIOM name := <expr>           a predicate required true at all times
//! PROPERTY name := <expr over PRED names>
//! ```
//!
//! A trailing backslash continues a statement on the next line.
//! Declarations may appear in any order; expressions are resolved after
//! all declarations are known.

use crate::abstraction::PredicateBank;
use crate::logic::{
    parse_expr_at, Expr, ParseCtx, ParseError, Signature, Sort, SymbolClass, Substitution,
};
use crate::abstraction::SubstitutionSet;
use crate::system::SystemModel;
use num_bigint::BigInt;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Clone)]
pub struct ModelFile {
    pub model: SystemModel,
    pub bank: PredicateBank,
    pub properties: Vec<(String, Expr)>,
    pub consts: BTreeMap<String, BigInt>,
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
    #[error("model validation failed:\n{}", .0.join("\n"))]
    Validation(Vec<String>),
}

fn line_err(line: usize, msg: impl Into<String>) -> ModelError {
    ModelError::Line {
        line,
        msg: msg.into(),
    }
}

/// One logical statement with the physical line it starts on.
fn logical_lines(text: &str) -> Vec<(usize, String)> {
    let mut out = Vec::new();
    let mut pending: Option<(usize, String)> = None;
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let mut s = raw.trim_end().to_string();
        let continued = s.ends_with('\\');
        if continued {
            s.pop();
        }
        match pending.take() {
            Some((start, mut acc)) => {
                acc.push(' ');
                acc.push_str(s.trim_start());
                if continued {
                    pending = Some((start, acc));
                } else {
                    out.push((start, acc));
                }
            }
            None => {
                if continued {
                    pending = Some((line_no, s));
                } else {
                    out.push((line_no, s));
                }
            }
        }
    }
    if let Some((start, acc)) = pending {
        out.push((start, acc));
    }
    out
}

fn strip_comment(s: &str) -> &str {
    match s.find('#') {
        Some(k) => &s[..k],
        None => s,
    }
}

fn parse_sort(s: &str, line: usize) -> Result<Sort, ModelError> {
    let s = s.trim();
    if s == "BOOL" {
        return Ok(Sort::Bool);
    }
    if s == "INT" {
        return Ok(Sort::Int);
    }
    for (kw, mk) in [
        ("FUNC", Sort::Func as fn(usize) -> Sort),
        ("PRED", Sort::Pred as fn(usize) -> Sort),
    ] {
        if let Some(rest) = s.strip_prefix(kw) {
            let rest = rest.trim();
            if let Some(body) = rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
                let n: usize = body
                    .trim()
                    .parse()
                    .map_err(|_| line_err(line, format!("bad arity in `{s}`")))?;
                if n == 0 {
                    return Err(line_err(line, "arity must be at least 1"));
                }
                return Ok(mk(n));
            }
        }
    }
    Err(line_err(
        line,
        format!("unknown sort `{s}` (expected BOOL, INT, FUNC(n), or PRED(n))"),
    ))
}

const KEYWORDS: [&str; 10] = [
    "CONST", "VAR", "INPUT", "INITSYM", "INIT", "NEXT", "INDEX", "PRED", "AXIOM", "PROPERTY",
];

struct Statement {
    line: usize,
    keyword: String,
    name: String,
    /// After `:` for declarations, after `:=` for definitions.
    rest: String,
    is_def: bool,
}

fn split_statement(line: usize, s: &str) -> Result<Option<Statement>, ModelError> {
    let s = strip_comment(s).trim();
    if s.is_empty() {
        return Ok(None);
    }
    let (keyword, rest) = match s.split_once(char::is_whitespace) {
        Some((k, r)) => (k, r.trim()),
        None => (s, ""),
    };
    if !KEYWORDS.contains(&keyword) {
        return Err(line_err(line, format!("unknown directive `{keyword}`")));
    }
    if let Some((name, def)) = rest.split_once(":=") {
        return Ok(Some(Statement {
            line,
            keyword: keyword.to_string(),
            name: name.trim().to_string(),
            rest: def.trim().to_string(),
            is_def: true,
        }));
    }
    if let Some((name, sort)) = rest.split_once(':') {
        return Ok(Some(Statement {
            line,
            keyword: keyword.to_string(),
            name: name.trim().to_string(),
            rest: sort.trim().to_string(),
            is_def: false,
        }));
    }
    Ok(Some(Statement {
        line,
        keyword: keyword.to_string(),
        name: rest.to_string(),
        rest: String::new(),
        is_def: false,
    }))
}

fn check_name(st: &Statement) -> Result<(), ModelError> {
    let ok = !st.name.is_empty()
        && st
            .name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_')
        && st.name.chars().next().unwrap().is_ascii_alphabetic();
    if !ok {
        return Err(line_err(st.line, format!("bad name `{}`", st.name)));
    }
    if KEYWORDS.contains(&st.name.as_str()) || ["ITE", "LAMBDA", "true", "false"].contains(&st.name.as_str()) {
        return Err(line_err(st.line, format!("`{}` is reserved", st.name)));
    }
    Ok(())
}

/// Parse a model file. Declarations are collected first, then
/// expressions are parsed and the model and bank invariants checked.
pub fn parse_model(text: &str) -> Result<ModelFile, ModelError> {
    let lines = logical_lines(text);
    let mut statements = Vec::new();
    for (line, s) in &lines {
        if let Some(st) = split_statement(*line, s)? {
            statements.push(st);
        }
    }

    // Pass 1: declarations.
    let mut sig = Signature::new();
    let mut consts = BTreeMap::new();
    let mut index_syms = Vec::new();
    let mut pred_syms = Vec::new();
    let mut axioms = BTreeSet::new();
    let declare = |st: &Statement, sort: Sort, class: SymbolClass, sig: &mut Signature| {
        sig.declare(st.name.clone(), sort, class)
            .map_err(|e| line_err(st.line, e.to_string()))
    };
    for st in &statements {
        match st.keyword.as_str() {
            "CONST" => {
                check_name(st)?;
                if !st.is_def {
                    return Err(line_err(st.line, "CONST needs `name := integer`"));
                }
                let v: BigInt = st
                    .rest
                    .parse()
                    .map_err(|_| line_err(st.line, format!("bad integer `{}`", st.rest)))?;
                if consts.insert(st.name.clone(), v).is_some() {
                    return Err(line_err(st.line, format!("`{}` defined twice", st.name)));
                }
            }
            "VAR" | "INPUT" | "INITSYM" => {
                check_name(st)?;
                if st.is_def {
                    return Err(line_err(st.line, "declarations use `name : sort`"));
                }
                let sort = parse_sort(&st.rest, st.line)?;
                let class = match st.keyword.as_str() {
                    "VAR" => SymbolClass::State,
                    "INPUT" => SymbolClass::Input,
                    _ => SymbolClass::Init,
                };
                declare(st, sort, class, &mut sig)?;
            }
            "INDEX" => {
                check_name(st)?;
                declare(st, Sort::Int, SymbolClass::Index, &mut sig)?;
                index_syms.push(st.name.clone());
            }
            "PRED" | "AXIOM" => {
                check_name(st)?;
                if !st.is_def {
                    return Err(line_err(st.line, "PRED/AXIOM need `name := expr`"));
                }
                declare(st, Sort::Bool, SymbolClass::Predicate, &mut sig)?;
                pred_syms.push(st.name.clone());
                if st.keyword == "AXIOM" {
                    axioms.insert(st.name.clone());
                }
            }
            _ => {}
        }
    }
    for name in consts.keys() {
        if sig.contains(name) {
            return Err(ModelError::Validation(vec![format!(
                "`{name}` is both a constant and a symbol"
            )]));
        }
    }

    // Pass 2: expressions.
    let ctx = ParseCtx::new(&sig, &consts);
    let mut init = BTreeMap::new();
    let mut next = BTreeMap::new();
    let mut defs = BTreeMap::new();
    let mut properties = Vec::new();
    for st in &statements {
        match st.keyword.as_str() {
            "INIT" | "NEXT" => {
                if !st.is_def {
                    return Err(line_err(st.line, "INIT/NEXT need `name := expr`"));
                }
                let e = parse_expr_at(&st.rest, ctx, st.line)?;
                let map = if st.keyword == "INIT" { &mut init } else { &mut next };
                if map.insert(st.name.clone(), e).is_some() {
                    return Err(line_err(
                        st.line,
                        format!("duplicate {} entry for `{}`", st.keyword, st.name),
                    ));
                }
            }
            "PRED" | "AXIOM" => {
                let e = parse_expr_at(&st.rest, ctx, st.line)?;
                defs.insert(st.name.clone(), e);
            }
            "PROPERTY" => {
                if !st.is_def {
                    return Err(line_err(st.line, "PROPERTY needs `name := expr`"));
                }
                let e = parse_expr_at(&st.rest, ctx, st.line)?;
                properties.push((st.name.clone(), e));
            }
            _ => {}
        }
    }

    let model = SystemModel { sig, init, next };
    let bank = PredicateBank {
        index_syms,
        pred_syms,
        defs,
        axioms,
    };

    // Validation: model and bank invariants plus property scoping.
    let mut problems = crate::reach::validate_inputs(&model, &bank);
    for (name, e) in &properties {
        for s in e.free_symbols() {
            if !bank.pred_syms.contains(&s) {
                problems.push(format!(
                    "property `{name}` mentions `{s}`, which is not a predicate"
                ));
            }
        }
    }
    if bank.width() > 63 {
        problems.push(format!("{} predicates exceed the supported 63", bank.width()));
    }
    if !problems.is_empty() {
        return Err(ModelError::Validation(problems));
    }
    Ok(ModelFile {
        model,
        bank,
        properties,
        consts,
    })
}

/// Parse a substitution-set file: one substitution per line, written
/// `x := i + 1; y := y`. Index symbols not mentioned map to themselves.
pub fn parse_substitutions(text: &str, mf: &ModelFile) -> Result<SubstitutionSet, ModelError> {
    let ctx = ParseCtx::new(&mf.model.sig, &mf.consts);
    let mut out = SubstitutionSet::default();
    for (line_no, raw) in text.lines().enumerate() {
        let line = line_no + 1;
        let s = strip_comment(raw).trim();
        if s.is_empty() {
            continue;
        }
        let mut sub: Substitution = mf
            .bank
            .index_syms
            .iter()
            .map(|x| (x.clone(), Expr::int_sym(x.clone())))
            .collect();
        for part in s.split(';') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (name, rhs) = part
                .split_once(":=")
                .ok_or_else(|| line_err(line, format!("expected `x := term` in `{part}`")))?;
            let name = name.trim();
            if !mf.bank.index_syms.iter().any(|x| x == name) {
                return Err(line_err(line, format!("`{name}` is not an index symbol")));
            }
            let e = parse_expr_at(rhs.trim(), ctx, line)?;
            sub.insert(name.to_string(), e);
        }
        out.push_dedup(sub);
    }
    if out.is_empty() {
        return Err(line_err(0, "substitution file defines no substitutions"));
    }
    Ok(out)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub const RUNNING: &str = "\
# one mutable function; F(i) takes the old F(i + 1)
VAR F : FUNC(1)
INPUT i : INT
INIT F := LAMBDA (u). u
NEXT F := LAMBDA (u). ITE(u = i, F(i + 1), F(u))
INDEX x
PRED p := F(x) >= 0
PRED q := x >= 0
PROPERTY safe := q => p
";

    #[test]
    fn running_example_parses_and_validates() {
        let mf = parse_model(RUNNING).unwrap();
        assert_eq!(mf.bank.pred_syms, vec!["p", "q"]);
        assert_eq!(mf.bank.index_syms, vec!["x"]);
        assert_eq!(mf.properties.len(), 1);
        assert!(mf.model.validate().is_empty());
    }

    #[test]
    fn property_over_undeclared_predicate_fails_validation() {
        let bad = RUNNING.replace("q => p", "q => r");
        match parse_model(&bad) {
            Err(ModelError::Parse(e)) => {
                // `r` is undeclared, caught at expression parse time.
                assert!(e.msg.contains("undeclared"), "{e}");
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn property_over_state_symbol_fails_validation() {
        let mut text = RUNNING.to_string();
        text.push_str("VAR b : BOOL\nINIT b := false\nNEXT b := b\nPROPERTY odd := b\n");
        match parse_model(&text) {
            Err(ModelError::Validation(problems)) => {
                assert!(problems.iter().any(|p| p.contains("odd")), "{problems:?}");
            }
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn missing_next_fails_validation() {
        let bad = RUNNING.replace("NEXT F := LAMBDA (u). ITE(u = i, F(i + 1), F(u))\n", "");
        assert!(matches!(parse_model(&bad), Err(ModelError::Validation(_))));
    }

    #[test]
    fn continuation_lines_join() {
        let text = RUNNING.replace(
            "NEXT F := LAMBDA (u). ITE(u = i, F(i + 1), F(u))",
            "NEXT F := LAMBDA (u). \\\n  ITE(u = i, F(i + 1), F(u))",
        );
        let mf = parse_model(&text).unwrap();
        assert!(mf.model.validate().is_empty());
    }

    #[test]
    fn constants_resolve_in_expressions() {
        let text = "\
CONST zero := 0
VAR v : INT
INPUT step : INT
INIT v := zero
NEXT v := ITE(v = zero, step, v)
INDEX x
PRED at_zero := v = zero
PROPERTY trivial := at_zero | !at_zero
";
        let mf = parse_model(text).unwrap();
        assert_eq!(mf.consts["zero"], BigInt::from(0));
    }

    #[test]
    fn substitution_file_parses() {
        let mf = parse_model(RUNNING).unwrap();
        let pi = parse_substitutions("x := x\nx := i + 1\n", &mf).unwrap();
        assert_eq!(pi.len(), 2);
        // Unmentioned indices default to themselves.
        let pi = parse_substitutions("# only a comment line counts as nothing\nx := i + 1;\n", &mf)
            .unwrap();
        assert_eq!(pi.len(), 1);
        assert!(parse_substitutions("y := 3\n", &mf).is_err());
        assert!(parse_substitutions("\n", &mf).is_err());
    }
}
