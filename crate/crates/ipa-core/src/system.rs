//! Transition systems: state symbols with one initial-state expression
//! (over the initial-value symbols) and one next-state expression (over
//! state and input symbols) each.

use crate::logic::{
    normalize, substitute, typecheck, Expr, Signature, Substitution, SymbolClass,
};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Debug, Clone)]
pub struct SystemModel {
    pub sig: Signature,
    /// Initial-state expression per state symbol, over initial-value symbols.
    pub init: BTreeMap<String, Expr>,
    /// Next-state expression per state symbol, over state and input symbols.
    pub next: BTreeMap<String, Expr>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Diagnostic {
    MissingInit(String),
    MissingNext(String),
    /// `init[v]` or `next[v]` mentions a symbol outside its allowed scope.
    FreeSymbolOutOfScope {
        entry: String,
        symbol: String,
    },
    /// The expression's sort differs from the state symbol's.
    WrongSort {
        entry: String,
        detail: String,
    },
    UnknownStateSymbol(String),
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::MissingInit(v) => write!(f, "state symbol `{v}` has no INIT entry"),
            Diagnostic::MissingNext(v) => write!(f, "state symbol `{v}` has no NEXT entry"),
            Diagnostic::FreeSymbolOutOfScope { entry, symbol } => {
                write!(f, "`{entry}` mentions `{symbol}`, which is out of scope here")
            }
            Diagnostic::WrongSort { entry, detail } => write!(f, "`{entry}`: {detail}"),
            Diagnostic::UnknownStateSymbol(v) => {
                write!(f, "`{v}` has an INIT/NEXT entry but is not a state symbol")
            }
        }
    }
}

impl SystemModel {
    pub fn state_symbols(&self) -> Vec<String> {
        self.sig.symbols_in(SymbolClass::State)
    }

    pub fn input_symbols(&self) -> Vec<String> {
        self.sig.symbols_in(SymbolClass::Input)
    }

    pub fn init_symbols(&self) -> Vec<String> {
        self.sig.symbols_in(SymbolClass::Init)
    }

    /// Check the model invariants; an empty list means the model is
    /// well-formed.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        let states: BTreeSet<String> = self.state_symbols().into_iter().collect();
        for v in &states {
            if !self.init.contains_key(v) {
                out.push(Diagnostic::MissingInit(v.clone()));
            }
            if !self.next.contains_key(v) {
                out.push(Diagnostic::MissingNext(v.clone()));
            }
        }
        for name in self.init.keys().chain(self.next.keys()) {
            if !states.contains(name) {
                out.push(Diagnostic::UnknownStateSymbol(name.clone()));
            }
        }
        for (map, label, allowed) in [
            (&self.init, "INIT", vec![SymbolClass::Init]),
            (&self.next, "NEXT", vec![SymbolClass::State, SymbolClass::Input]),
        ] {
            for (v, e) in map {
                let entry = format!("{label} {v}");
                for s in e.free_symbols() {
                    match self.sig.class_of(&s) {
                        Some(c) if allowed.contains(&c) => {}
                        _ => out.push(Diagnostic::FreeSymbolOutOfScope {
                            entry: entry.clone(),
                            symbol: s,
                        }),
                    }
                }
                match typecheck(e, &self.sig) {
                    Ok(sort) => {
                        if Some(sort) != self.sig.sort_of(v) {
                            out.push(Diagnostic::WrongSort {
                                entry: entry.clone(),
                                detail: format!(
                                    "expression has sort {sort}, state symbol has sort {}",
                                    self.sig
                                        .sort_of(v)
                                        .map(|s| s.to_string())
                                        .unwrap_or_else(|| "?".into())
                                ),
                            });
                        }
                    }
                    Err(te) => out.push(Diagnostic::WrongSort {
                        entry: entry.clone(),
                        detail: te.to_string(),
                    }),
                }
            }
        }
        out
    }

    fn compose(&self, e: &Expr, map: &BTreeMap<String, Expr>) -> Expr {
        let targets: BTreeSet<String> = self.state_symbols().into_iter().collect();
        let sub: Substitution = map.clone();
        // Scope and sorts were checked by validate; composition cannot
        // introduce a kind mismatch after that.
        let substituted = substitute(e, &sub, &targets).expect("validated model");
        normalize(&substituted)
    }

    /// Evaluation of `e` in the next state: substitute the next-state
    /// expressions for the state symbols and normalize. Free symbols of the
    /// result are state, index, and input symbols.
    pub fn compose_next(&self, e: &Expr) -> Expr {
        self.compose(e, &self.next)
    }

    /// Evaluation of `e` in the initial state: substitute the initial-state
    /// expressions and normalize. Free symbols of the result are
    /// initial-value and index symbols.
    pub fn compose_init(&self, e: &Expr) -> Expr {
        self.compose(e, &self.init)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::logic::{eval, normalize, Interp, Sort, Value};

    /// The one-function running example: F is initially the identity and on
    /// each step F(i) takes the old value of F(i + 1).
    pub fn running_example() -> SystemModel {
        let mut sig = Signature::new();
        sig.declare("F", Sort::Func(1), SymbolClass::State).unwrap();
        sig.declare("i", Sort::Int, SymbolClass::Input).unwrap();
        sig.declare("x", Sort::Int, SymbolClass::Index).unwrap();
        let mut init = BTreeMap::new();
        init.insert(
            "F".to_string(),
            Expr::lambda_int(vec!["u".into()], Expr::lambda_var("u")),
        );
        let mut next = BTreeMap::new();
        next.insert(
            "F".to_string(),
            Expr::lambda_int(
                vec!["u".into()],
                Expr::ite(
                    Expr::int_eq(Expr::lambda_var("u"), Expr::int_sym("i")),
                    Expr::func_apply(
                        Expr::func_sym("F"),
                        vec![Expr::plus(Expr::int_sym("i"), 1)],
                    ),
                    Expr::func_apply(Expr::func_sym("F"), vec![Expr::lambda_var("u")]),
                ),
            ),
        );
        SystemModel { sig, init, next }
    }

    fn pred_p() -> Expr {
        // F(x) >= 0
        Expr::int_ge(
            Expr::func_apply(Expr::func_sym("F"), vec![Expr::int_sym("x")]),
            Expr::int(0),
        )
    }

    fn pred_q() -> Expr {
        Expr::int_ge(Expr::int_sym("x"), Expr::int(0))
    }

    #[test]
    fn running_example_validates() {
        assert_eq!(running_example().validate(), vec![]);
    }

    #[test]
    fn missing_next_is_reported() {
        let mut m = running_example();
        m.next.clear();
        assert_eq!(m.validate(), vec![Diagnostic::MissingNext("F".into())]);
    }

    #[test]
    fn out_of_scope_symbol_is_reported() {
        let mut m = running_example();
        m.sig
            .declare("j0", Sort::Int, SymbolClass::Init)
            .unwrap();
        // next[F] must not mention initial-value symbols.
        m.next.insert(
            "F".to_string(),
            Expr::lambda_int(vec!["u".into()], Expr::int_sym("j0")),
        );
        let diags = m.validate();
        assert!(diags.iter().any(|d| matches!(
            d,
            Diagnostic::FreeSymbolOutOfScope { symbol, .. } if symbol == "j0"
        )));
    }

    #[test]
    fn compose_init_reduces_predicates() {
        let m = running_example();
        // F(x) >= 0 composed with the identity init is x >= 0.
        assert_eq!(m.compose_init(&pred_p()), normalize(&pred_q()));
        // x >= 0 mentions no state symbols.
        assert_eq!(m.compose_init(&pred_q()), normalize(&pred_q()));
        // Double application of the identity reduces too.
        let ffx = Expr::int_ge(
            Expr::func_apply(
                Expr::func_sym("F"),
                vec![Expr::func_apply(
                    Expr::func_sym("F"),
                    vec![Expr::int_sym("x")],
                )],
            ),
            Expr::int(0),
        );
        assert_eq!(m.compose_init(&ffx), normalize(&pred_q()));
    }

    #[test]
    fn compose_next_expands_the_update() {
        let m = running_example();
        // Substituting the update lambda for F in F(x) >= 0 must mean
        // (x = i & F(i+1) >= 0) | (x != i & F(x) >= 0).
        let got = m.compose_next(&pred_p());
        let fi1 = Expr::func_apply(Expr::func_sym("F"), vec![Expr::plus(Expr::int_sym("i"), 1)]);
        let eq = Expr::int_eq(Expr::int_sym("x"), Expr::int_sym("i"));
        let paper_form = Expr::or(vec![
            Expr::and(vec![eq.clone(), Expr::int_ge(fi1.clone(), Expr::int(0))]),
            Expr::and(vec![Expr::not(eq.clone()), pred_p()]),
        ]);
        assert_exprs_equivalent(&got, &paper_form);
        // Structurally, the lift happens under the >= negation.
        let want = normalize(&Expr::not(Expr::or(vec![
            Expr::and(vec![eq.clone(), Expr::int_lt(fi1, Expr::int(0))]),
            Expr::and(vec![
                Expr::not(eq),
                Expr::int_lt(
                    Expr::func_apply(Expr::func_sym("F"), vec![Expr::int_sym("x")]),
                    Expr::int(0),
                ),
            ]),
        ])));
        assert_eq!(got, want);
        // Predicates without state symbols are unchanged.
        assert_eq!(m.compose_next(&pred_q()), normalize(&pred_q()));
        assert_eq!(m.compose_next(&Expr::truth(true)), Expr::truth(true));
        // Free symbols of the composition stay within state/index/input.
        for s in got.free_symbols() {
            assert!(m.sig.class_of(&s).is_some());
        }
    }

    /// Brute-force equivalence of two Boolean expressions over F, x, i
    /// with F drawn from a fixed set of small function shapes.
    fn assert_exprs_equivalent(a: &Expr, b: &Expr) {
        let shapes = [
            Expr::lambda_int(vec!["u".into()], Expr::lambda_var("u")),
            Expr::lambda_int(vec!["u".into()], Expr::int(1)),
            Expr::lambda_int(vec!["u".into()], Expr::int(-1)),
            Expr::lambda_int(vec!["u".into()], Expr::plus(Expr::lambda_var("u"), -3)),
        ];
        for shape in &shapes {
            for iv in -3..3 {
                for xv in -3..3 {
                    let env: Interp = [
                        ("F".to_string(), eval(shape, &Interp::empty()).unwrap()),
                        ("i".to_string(), Value::int(iv)),
                        ("x".to_string(), Value::int(xv)),
                    ]
                    .into_iter()
                    .collect();
                    assert_eq!(
                        eval(a, &env).unwrap(),
                        eval(b, &env).unwrap(),
                        "diverge at F={shape} i={iv} x={xv}"
                    );
                }
            }
        }
    }

    #[test]
    fn compose_commutes_with_eval() {
        // Referential transparency on the running example: evaluating the
        // composed predicate equals evaluating the predicate in the image
        // state.
        let m = running_example();
        let composed = m.compose_next(&pred_p());
        let id = Expr::lambda_int(vec!["u".into()], Expr::lambda_var("u"));
        for iv in -3..3 {
            for xv in -3..3 {
                let base: Interp = [
                    ("F".to_string(), eval(&id, &Interp::empty()).unwrap()),
                    ("i".to_string(), Value::int(iv)),
                    ("x".to_string(), Value::int(xv)),
                ]
                .into_iter()
                .collect();
                let lhs = eval(&composed, &base).unwrap();
                let next_f = eval(&m.next["F"], &base).unwrap();
                let image = base.with("F", next_f);
                let rhs = eval(&pred_p(), &image).unwrap();
                assert_eq!(lhs, rhs, "i={iv} x={xv}");
            }
        }
    }
}
