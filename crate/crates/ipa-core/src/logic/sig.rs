//! Symbol declarations, partitioned into the classes the verifier tracks:
//! state, input, initial-value, index, and abstract predicate symbols.

use crate::logic::expr::{Expr, ExprNode, Sort};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SymbolClass {
    /// State element (current value readable by next-state expressions).
    State,
    /// Input, set to an arbitrary value on each step.
    Input,
    /// Initial-value symbol, fixed arbitrarily at time zero.
    Init,
    /// Index variable over which properties are implicitly quantified.
    Index,
    /// Abstract Boolean variable naming a predicate.
    Predicate,
}

/// Declared symbols with their sorts and classes. Classes are pairwise
/// disjoint by construction: `declare` rejects duplicate names.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    sorts: BTreeMap<String, Sort>,
    classes: BTreeMap<String, SymbolClass>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SigError {
    #[error("symbol `{0}` is declared twice")]
    Duplicate(String),
    #[error("index symbol `{0}` must have sort INT, not {1}")]
    BadIndexSort(String, Sort),
    #[error("predicate symbol `{0}` must have sort BOOL, not {1}")]
    BadPredicateSort(String, Sort),
    #[error("arity of `{0}` must be at least 1")]
    ZeroArity(String),
}

impl Signature {
    pub fn new() -> Signature {
        Signature::default()
    }

    pub fn declare(
        &mut self,
        name: impl Into<String>,
        sort: Sort,
        class: SymbolClass,
    ) -> Result<(), SigError> {
        let name = name.into();
        if self.sorts.contains_key(&name) {
            return Err(SigError::Duplicate(name));
        }
        if let Some(0) = sort.arity() {
            return Err(SigError::ZeroArity(name));
        }
        if class == SymbolClass::Index && sort != Sort::Int {
            return Err(SigError::BadIndexSort(name, sort));
        }
        if class == SymbolClass::Predicate && sort != Sort::Bool {
            return Err(SigError::BadPredicateSort(name, sort));
        }
        self.sorts.insert(name.clone(), sort);
        self.classes.insert(name, class);
        Ok(())
    }

    pub fn sort_of(&self, name: &str) -> Option<Sort> {
        self.sorts.get(name).copied()
    }

    pub fn class_of(&self, name: &str) -> Option<SymbolClass> {
        self.classes.get(name).copied()
    }

    pub fn symbols(&self) -> impl Iterator<Item = (&String, Sort, SymbolClass)> {
        self.sorts
            .iter()
            .map(|(n, s)| (n, *s, self.classes[n]))
    }

    pub fn symbols_in(&self, class: SymbolClass) -> Vec<String> {
        self.classes
            .iter()
            .filter(|(_, c)| **c == class)
            .map(|(n, _)| n.clone())
            .collect()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.sorts.contains_key(name)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TypeError {
    #[error("undeclared symbol `{0}`")]
    UndeclaredSymbol(String),
    #[error("unbound lambda variable `{0}`")]
    UnboundLambdaVar(String),
    #[error("`{name}` applied to {got} arguments, expected {want}")]
    ArityMismatch { name: String, want: usize, got: usize },
    #[error("sort mismatch at `{context}`: expected {expected}, found {found}")]
    SortMismatch {
        context: String,
        expected: String,
        found: Sort,
    },
    #[error("lambda parameter list of `{0}` is empty")]
    EmptyLambda(String),
}

/// Sort of `e` under `sig`, enforcing the expression grammar: lambda
/// parameters are integers, applications match arity, comparisons and
/// +constant take integers. `ITE` may produce either an integer or a
/// Boolean, but its branches must agree.
pub fn typecheck(e: &Expr, sig: &Signature) -> Result<Sort, TypeError> {
    let mut bound: Vec<String> = Vec::new();
    check(e, sig, &mut bound)
}

fn expect(e: &Expr, sig: &Signature, bound: &mut Vec<String>, want: Sort) -> Result<(), TypeError> {
    let got = check(e, sig, bound)?;
    if got != want {
        return Err(TypeError::SortMismatch {
            context: e.to_string(),
            expected: want.to_string(),
            found: got,
        });
    }
    Ok(())
}

fn check(e: &Expr, sig: &Signature, bound: &mut Vec<String>) -> Result<Sort, TypeError> {
    match e.node() {
        ExprNode::TrueLit | ExprNode::FalseLit => Ok(Sort::Bool),
        ExprNode::IntConst(_) => Ok(Sort::Int),
        ExprNode::LambdaVar(n) => {
            if bound.iter().any(|b| b == n) {
                Ok(Sort::Int)
            } else {
                Err(TypeError::UnboundLambdaVar(n.clone()))
            }
        }
        ExprNode::BoolSym(n) => lookup(n, sig, Sort::Bool),
        ExprNode::IntSym(n) => lookup(n, sig, Sort::Int),
        ExprNode::FuncSym(n) => {
            let s = sig
                .sort_of(n)
                .ok_or_else(|| TypeError::UndeclaredSymbol(n.clone()))?;
            match s {
                Sort::Func(_) => Ok(s),
                other => Err(TypeError::SortMismatch {
                    context: n.clone(),
                    expected: "FUNC(_)".into(),
                    found: other,
                }),
            }
        }
        ExprNode::PredSym(n) => {
            let s = sig
                .sort_of(n)
                .ok_or_else(|| TypeError::UndeclaredSymbol(n.clone()))?;
            match s {
                Sort::Pred(_) => Ok(s),
                other => Err(TypeError::SortMismatch {
                    context: n.clone(),
                    expected: "PRED(_)".into(),
                    found: other,
                }),
            }
        }
        ExprNode::Not(a) => {
            expect(a, sig, bound, Sort::Bool)?;
            Ok(Sort::Bool)
        }
        ExprNode::And(cs) | ExprNode::Or(cs) => {
            for c in cs {
                expect(c, sig, bound, Sort::Bool)?;
            }
            Ok(Sort::Bool)
        }
        ExprNode::IntEq(l, r) | ExprNode::IntLt(l, r) => {
            expect(l, sig, bound, Sort::Int)?;
            expect(r, sig, bound, Sort::Int)?;
            Ok(Sort::Bool)
        }
        ExprNode::PlusConst(a, _) => {
            expect(a, sig, bound, Sort::Int)?;
            Ok(Sort::Int)
        }
        ExprNode::Ite(c, t, f) => {
            expect(c, sig, bound, Sort::Bool)?;
            let st = check(t, sig, bound)?;
            if st != Sort::Int && st != Sort::Bool {
                return Err(TypeError::SortMismatch {
                    context: e.to_string(),
                    expected: "INT or BOOL".into(),
                    found: st,
                });
            }
            expect(f, sig, bound, st)?;
            Ok(st)
        }
        ExprNode::FuncApply(g, args) => {
            let gs = check(g, sig, bound)?;
            let arity = match gs {
                Sort::Func(n) => n,
                other => {
                    return Err(TypeError::SortMismatch {
                        context: g.to_string(),
                        expected: "FUNC(_)".into(),
                        found: other,
                    })
                }
            };
            check_args(e, args, arity, sig, bound)?;
            Ok(Sort::Int)
        }
        ExprNode::PredApply(g, args) => {
            let gs = check(g, sig, bound)?;
            let arity = match gs {
                Sort::Pred(n) => n,
                other => {
                    return Err(TypeError::SortMismatch {
                        context: g.to_string(),
                        expected: "PRED(_)".into(),
                        found: other,
                    })
                }
            };
            check_args(e, args, arity, sig, bound)?;
            Ok(Sort::Bool)
        }
        ExprNode::LambdaInt(params, body) => {
            if params.is_empty() {
                return Err(TypeError::EmptyLambda(e.to_string()));
            }
            let depth = bound.len();
            bound.extend(params.iter().cloned());
            let r = expect(body, sig, bound, Sort::Int);
            bound.truncate(depth);
            r?;
            Ok(Sort::Func(params.len()))
        }
        ExprNode::LambdaBool(params, body) => {
            if params.is_empty() {
                return Err(TypeError::EmptyLambda(e.to_string()));
            }
            let depth = bound.len();
            bound.extend(params.iter().cloned());
            let r = expect(body, sig, bound, Sort::Bool);
            bound.truncate(depth);
            r?;
            Ok(Sort::Pred(params.len()))
        }
    }
}

fn check_args(
    e: &Expr,
    args: &[Expr],
    arity: usize,
    sig: &Signature,
    bound: &mut Vec<String>,
) -> Result<(), TypeError> {
    if args.len() != arity {
        return Err(TypeError::ArityMismatch {
            name: e.to_string(),
            want: arity,
            got: args.len(),
        });
    }
    for a in args {
        expect(a, sig, bound, Sort::Int)?;
    }
    Ok(())
}

fn lookup(n: &str, sig: &Signature, want: Sort) -> Result<Sort, TypeError> {
    let s = sig
        .sort_of(n)
        .ok_or_else(|| TypeError::UndeclaredSymbol(n.to_string()))?;
    if s != want {
        return Err(TypeError::SortMismatch {
            context: n.to_string(),
            expected: want.to_string(),
            found: s,
        });
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> Signature {
        let mut s = Signature::new();
        s.declare("F", Sort::Func(1), SymbolClass::State).unwrap();
        s.declare("x", Sort::Int, SymbolClass::Index).unwrap();
        s
    }

    #[test]
    fn identity_lambda_is_unary_function() {
        let id = Expr::lambda_int(vec!["u".into()], Expr::lambda_var("u"));
        assert_eq!(typecheck(&id, &sig()), Ok(Sort::Func(1)));
    }

    #[test]
    fn predicate_over_application_is_bool() {
        let e = Expr::int_ge(
            Expr::func_apply(Expr::func_sym("F"), vec![Expr::int_sym("x")]),
            Expr::int(0),
        );
        assert_eq!(typecheck(&e, &sig()), Ok(Sort::Bool));
    }

    #[test]
    fn function_plus_constant_is_ill_typed() {
        let e = Expr::plus(Expr::func_sym("F"), 1);
        assert!(matches!(
            typecheck(&e, &sig()),
            Err(TypeError::SortMismatch { .. })
        ));
    }

    #[test]
    fn arity_and_declaration_errors() {
        let e = Expr::func_apply(
            Expr::func_sym("F"),
            vec![Expr::int_sym("x"), Expr::int_sym("x")],
        );
        assert!(matches!(
            typecheck(&e, &sig()),
            Err(TypeError::ArityMismatch { .. })
        ));
        let e = Expr::int_sym("y");
        assert_eq!(
            typecheck(&e, &sig()),
            Err(TypeError::UndeclaredSymbol("y".into()))
        );
        let e = Expr::lambda_var("u");
        assert!(matches!(
            typecheck(&e, &sig()),
            Err(TypeError::UnboundLambdaVar(_))
        ));
    }

    #[test]
    fn index_symbols_must_be_int() {
        let mut s = Signature::new();
        assert!(s
            .declare("x", Sort::Bool, SymbolClass::Index)
            .is_err());
        assert!(s.declare("q", Sort::Func(0), SymbolClass::State).is_err());
    }
}
