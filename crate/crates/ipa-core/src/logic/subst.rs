//! Simultaneous substitution and normalization.
//!
//! [`normalize`] expands every application of a syntactic lambda, floats
//! if-then-else out of integer contexts, replaces Boolean if-then-else by
//! its disjunctive form, folds constants, and puts conjunctions and
//! disjunctions into a canonical child order. Structural equality of
//! normalized expressions is what the rest of the system relies on for
//! caching and fixpoint comparison. The logic has no recursion, so
//! normalization always terminates.

use crate::logic::expr::{Expr, ExprNode};
use num_bigint::BigInt;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use thiserror::Error;

/// A substitution: replacement expression per target symbol.
pub type Substitution = BTreeMap<String, Expr>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SubstError {
    #[error("replacement for `{name}` has the wrong kind of expression")]
    SortMismatch { name: String },
}

/// Coarse expression kind, computable without a signature.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Bool,
    Int,
    FuncLike,
    PredLike,
}

pub fn kind_of(e: &Expr) -> Kind {
    match e.node() {
        ExprNode::TrueLit
        | ExprNode::FalseLit
        | ExprNode::BoolSym(_)
        | ExprNode::Not(_)
        | ExprNode::And(_)
        | ExprNode::Or(_)
        | ExprNode::IntEq(_, _)
        | ExprNode::IntLt(_, _)
        | ExprNode::PredApply(_, _) => Kind::Bool,
        ExprNode::LambdaVar(_)
        | ExprNode::IntSym(_)
        | ExprNode::IntConst(_)
        | ExprNode::PlusConst(_, _)
        | ExprNode::FuncApply(_, _) => Kind::Int,
        ExprNode::Ite(_, t, _) => kind_of(t),
        ExprNode::FuncSym(_) | ExprNode::LambdaInt(_, _) => Kind::FuncLike,
        ExprNode::PredSym(_) | ExprNode::LambdaBool(_, _) => Kind::PredLike,
    }
}

/// Replace every free occurrence of each symbol in `targets` by its image
/// under `sub`, all simultaneously: replacements are inserted verbatim and
/// never rewritten by the same pass.
pub fn substitute(
    e: &Expr,
    sub: &Substitution,
    targets: &BTreeSet<String>,
) -> Result<Expr, SubstError> {
    for (name, repl) in sub {
        if !targets.contains(name) {
            continue;
        }
        let ok = matches!(
            (name_kind(e, name), kind_of(repl)),
            (None, _)
                | (Some(Kind::Bool), Kind::Bool)
                | (Some(Kind::Int), Kind::Int)
                | (Some(Kind::FuncLike), Kind::FuncLike)
                | (Some(Kind::PredLike), Kind::PredLike)
        );
        if !ok {
            return Err(SubstError::SortMismatch { name: name.clone() });
        }
    }
    let mut memo = HashMap::new();
    Ok(subst_syms(e, sub, targets, &mut memo))
}

/// Kind at which `name` occurs in `e`, if it occurs at all.
fn name_kind(e: &Expr, name: &str) -> Option<Kind> {
    match e.node() {
        ExprNode::BoolSym(n) if n == name => Some(Kind::Bool),
        ExprNode::IntSym(n) if n == name => Some(Kind::Int),
        ExprNode::FuncSym(n) if n == name => Some(Kind::FuncLike),
        ExprNode::PredSym(n) if n == name => Some(Kind::PredLike),
        ExprNode::Not(a) | ExprNode::PlusConst(a, _) => name_kind(a, name),
        ExprNode::And(cs) | ExprNode::Or(cs) => cs.iter().find_map(|c| name_kind(c, name)),
        ExprNode::IntEq(l, r) | ExprNode::IntLt(l, r) => {
            name_kind(l, name).or_else(|| name_kind(r, name))
        }
        ExprNode::Ite(c, t, f) => name_kind(c, name)
            .or_else(|| name_kind(t, name))
            .or_else(|| name_kind(f, name)),
        ExprNode::FuncApply(g, args) | ExprNode::PredApply(g, args) => {
            name_kind(g, name).or_else(|| args.iter().find_map(|a| name_kind(a, name)))
        }
        ExprNode::LambdaBool(_, body) | ExprNode::LambdaInt(_, body) => name_kind(body, name),
        _ => None,
    }
}

fn subst_syms(
    e: &Expr,
    sub: &Substitution,
    targets: &BTreeSet<String>,
    memo: &mut HashMap<usize, Expr>,
) -> Expr {
    if let Some(hit) = memo.get(&e.key()) {
        return hit.clone();
    }
    let result = match e.node() {
        ExprNode::BoolSym(n)
        | ExprNode::IntSym(n)
        | ExprNode::FuncSym(n)
        | ExprNode::PredSym(n) => {
            if targets.contains(n) {
                match sub.get(n) {
                    Some(r) => r.clone(),
                    None => e.clone(),
                }
            } else {
                e.clone()
            }
        }
        ExprNode::TrueLit
        | ExprNode::FalseLit
        | ExprNode::IntConst(_)
        | ExprNode::LambdaVar(_) => e.clone(),
        ExprNode::Not(a) => Expr::not(subst_syms(a, sub, targets, memo)),
        ExprNode::And(cs) => Expr::and(
            cs.iter()
                .map(|c| subst_syms(c, sub, targets, memo))
                .collect(),
        ),
        ExprNode::Or(cs) => Expr::or(
            cs.iter()
                .map(|c| subst_syms(c, sub, targets, memo))
                .collect(),
        ),
        ExprNode::IntEq(l, r) => Expr::int_eq(
            subst_syms(l, sub, targets, memo),
            subst_syms(r, sub, targets, memo),
        ),
        ExprNode::IntLt(l, r) => Expr::int_lt(
            subst_syms(l, sub, targets, memo),
            subst_syms(r, sub, targets, memo),
        ),
        ExprNode::Ite(c, t, f) => Expr::ite(
            subst_syms(c, sub, targets, memo),
            subst_syms(t, sub, targets, memo),
            subst_syms(f, sub, targets, memo),
        ),
        ExprNode::PlusConst(a, k) => Expr::plus(subst_syms(a, sub, targets, memo), k.clone()),
        ExprNode::FuncApply(g, args) => Expr::func_apply(
            subst_syms(g, sub, targets, memo),
            args.iter()
                .map(|a| subst_syms(a, sub, targets, memo))
                .collect(),
        ),
        ExprNode::PredApply(g, args) => Expr::pred_apply(
            subst_syms(g, sub, targets, memo),
            args.iter()
                .map(|a| subst_syms(a, sub, targets, memo))
                .collect(),
        ),
        // Lambda parameters bind lambda variables, not symbols, so symbol
        // substitution passes straight through. Replacements contain no free
        // lambda variables, which rules out capture.
        ExprNode::LambdaInt(ps, body) => {
            Expr::lambda_int(ps.clone(), subst_syms(body, sub, targets, memo))
        }
        ExprNode::LambdaBool(ps, body) => {
            Expr::lambda_bool(ps.clone(), subst_syms(body, sub, targets, memo))
        }
    };
    memo.insert(e.key(), result.clone());
    result
}

/// Replace lambda variables by argument terms, renaming inner binders when
/// they would capture a free lambda variable of a replacement.
fn subst_lvars(e: &Expr, map: &BTreeMap<String, Expr>, fresh: &mut u64) -> Expr {
    if map.is_empty() {
        return e.clone();
    }
    match e.node() {
        ExprNode::LambdaVar(n) => match map.get(n) {
            Some(r) => r.clone(),
            None => e.clone(),
        },
        ExprNode::TrueLit
        | ExprNode::FalseLit
        | ExprNode::IntConst(_)
        | ExprNode::BoolSym(_)
        | ExprNode::IntSym(_)
        | ExprNode::FuncSym(_)
        | ExprNode::PredSym(_) => e.clone(),
        ExprNode::Not(a) => Expr::not(subst_lvars(a, map, fresh)),
        ExprNode::And(cs) => Expr::and(cs.iter().map(|c| subst_lvars(c, map, fresh)).collect()),
        ExprNode::Or(cs) => Expr::or(cs.iter().map(|c| subst_lvars(c, map, fresh)).collect()),
        ExprNode::IntEq(l, r) => {
            Expr::int_eq(subst_lvars(l, map, fresh), subst_lvars(r, map, fresh))
        }
        ExprNode::IntLt(l, r) => {
            Expr::int_lt(subst_lvars(l, map, fresh), subst_lvars(r, map, fresh))
        }
        ExprNode::Ite(c, t, f) => Expr::ite(
            subst_lvars(c, map, fresh),
            subst_lvars(t, map, fresh),
            subst_lvars(f, map, fresh),
        ),
        ExprNode::PlusConst(a, k) => Expr::plus(subst_lvars(a, map, fresh), k.clone()),
        ExprNode::FuncApply(g, args) => Expr::func_apply(
            subst_lvars(g, map, fresh),
            args.iter().map(|a| subst_lvars(a, map, fresh)).collect(),
        ),
        ExprNode::PredApply(g, args) => Expr::pred_apply(
            subst_lvars(g, map, fresh),
            args.iter().map(|a| subst_lvars(a, map, fresh)).collect(),
        ),
        ExprNode::LambdaInt(ps, body) | ExprNode::LambdaBool(ps, body) => {
            // Drop shadowed entries; rename parameters that would capture.
            let mut inner: BTreeMap<String, Expr> = map
                .iter()
                .filter(|(k, _)| !ps.contains(k))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect();
            let mut taken = BTreeSet::new();
            for v in inner.values() {
                taken.extend(v.free_lambda_vars());
            }
            let replacement_fvs = taken.clone();
            lambda_names_in(body, &mut taken);
            let mut new_ps = Vec::with_capacity(ps.len());
            for p in ps {
                if replacement_fvs.contains(p) {
                    let np = loop {
                        *fresh += 1;
                        let cand = format!("{p}%{fresh}");
                        if !taken.contains(&cand) {
                            break cand;
                        }
                    };
                    inner.insert(p.clone(), Expr::lambda_var(&np));
                    new_ps.push(np);
                } else {
                    new_ps.push(p.clone());
                }
            }
            let new_body = subst_lvars(body, &inner, fresh);
            if matches!(e.node(), ExprNode::LambdaInt(_, _)) {
                Expr::lambda_int(new_ps, new_body)
            } else {
                Expr::lambda_bool(new_ps, new_body)
            }
        }
    }
}

/// Every lambda-variable name occurring in `e`, bound or not.
fn lambda_names_in(e: &Expr, out: &mut BTreeSet<String>) {
    match e.node() {
        ExprNode::LambdaVar(n) => {
            out.insert(n.clone());
        }
        ExprNode::LambdaInt(ps, body) | ExprNode::LambdaBool(ps, body) => {
            out.extend(ps.iter().cloned());
            lambda_names_in(body, out);
        }
        ExprNode::Not(a) | ExprNode::PlusConst(a, _) => lambda_names_in(a, out),
        ExprNode::And(cs) | ExprNode::Or(cs) => {
            for c in cs {
                lambda_names_in(c, out);
            }
        }
        ExprNode::IntEq(l, r) | ExprNode::IntLt(l, r) => {
            lambda_names_in(l, out);
            lambda_names_in(r, out);
        }
        ExprNode::Ite(c, t, f) => {
            lambda_names_in(c, out);
            lambda_names_in(t, out);
            lambda_names_in(f, out);
        }
        ExprNode::FuncApply(g, args) | ExprNode::PredApply(g, args) => {
            lambda_names_in(g, out);
            for a in args {
                lambda_names_in(a, out);
            }
        }
        _ => {}
    }
}

/// Normalize: beta-reduce all lambda applications, leaving only
/// applications of uninterpreted symbols, and put the result in canonical
/// form (see module docs). Unapplied lambdas keep their binder with a
/// normalized body.
pub fn normalize(e: &Expr) -> Expr {
    let mut ctx = Norm {
        memo: HashMap::new(),
        pins: Vec::new(),
        fresh: 0,
    };
    ctx.go(e)
}

struct Norm {
    memo: HashMap<usize, Expr>,
    /// Keeps every memo key alive: node addresses are only unique among
    /// live allocations.
    pins: Vec<Expr>,
    fresh: u64,
}

impl Norm {
    fn go(&mut self, e: &Expr) -> Expr {
        if let Some(hit) = self.memo.get(&e.key()) {
            return hit.clone();
        }
        let result = self.rewrite(e);
        self.pins.push(e.clone());
        self.memo.insert(e.key(), result.clone());
        result
    }

    fn rewrite(&mut self, e: &Expr) -> Expr {
        match e.node() {
            ExprNode::TrueLit
            | ExprNode::FalseLit
            | ExprNode::BoolSym(_)
            | ExprNode::IntSym(_)
            | ExprNode::IntConst(_)
            | ExprNode::LambdaVar(_)
            | ExprNode::FuncSym(_)
            | ExprNode::PredSym(_) => e.clone(),
            ExprNode::LambdaInt(ps, body) => Expr::lambda_int(ps.clone(), self.go(body)),
            ExprNode::LambdaBool(ps, body) => Expr::lambda_bool(ps.clone(), self.go(body)),
            ExprNode::Not(a) => {
                let a = self.go(a);
                match a.node() {
                    ExprNode::TrueLit => Expr::truth(false),
                    ExprNode::FalseLit => Expr::truth(true),
                    ExprNode::Not(inner) => inner.clone(),
                    _ => Expr::not(a),
                }
            }
            ExprNode::And(cs) => {
                let mut out = Vec::with_capacity(cs.len());
                for c in cs {
                    let c = self.go(c);
                    match c.node() {
                        ExprNode::TrueLit => {}
                        ExprNode::FalseLit => return Expr::truth(false),
                        ExprNode::And(inner) => out.extend(inner.iter().cloned()),
                        _ => out.push(c),
                    }
                }
                out.sort();
                out.dedup();
                Expr::and(out)
            }
            ExprNode::Or(cs) => {
                let mut out = Vec::with_capacity(cs.len());
                for c in cs {
                    let c = self.go(c);
                    match c.node() {
                        ExprNode::FalseLit => {}
                        ExprNode::TrueLit => return Expr::truth(true),
                        ExprNode::Or(inner) => out.extend(inner.iter().cloned()),
                        _ => out.push(c),
                    }
                }
                out.sort();
                out.dedup();
                Expr::or(out)
            }
            ExprNode::IntEq(l, r) => {
                let l = self.go(l);
                let r = self.go(r);
                self.comparison(l, r, true)
            }
            ExprNode::IntLt(l, r) => {
                let l = self.go(l);
                let r = self.go(r);
                self.comparison(l, r, false)
            }
            ExprNode::Ite(c, t, f) => {
                let c = self.go(c);
                let t = self.go(t);
                let f = self.go(f);
                if c.is_true() {
                    return t;
                }
                if c.is_false() {
                    return f;
                }
                if t == f {
                    return t;
                }
                if kind_of(&t) == Kind::Bool {
                    // Boolean ITE is sugar for (c & t) | (!c & f).
                    self.go(&Expr::or(vec![
                        Expr::and(vec![c.clone(), t]),
                        Expr::and(vec![Expr::not(c), f]),
                    ]))
                } else {
                    // Integer ITE floats upward; the parent context lifts it.
                    Expr::ite(c, t, f)
                }
            }
            ExprNode::PlusConst(a, k) => {
                let a = self.go(a);
                match a.node() {
                    _ if k == &BigInt::from(0) => a,
                    ExprNode::IntConst(v) => Expr::int(v + k),
                    ExprNode::PlusConst(inner, k2) => {
                        let total = k + k2;
                        if total == BigInt::from(0) {
                            inner.clone()
                        } else {
                            Expr::plus(inner.clone(), total)
                        }
                    }
                    ExprNode::Ite(c, t, f) => self.go(&Expr::ite(
                        c.clone(),
                        Expr::plus(t.clone(), k.clone()),
                        Expr::plus(f.clone(), k.clone()),
                    )),
                    _ => Expr::plus(a, k.clone()),
                }
            }
            ExprNode::FuncApply(g, args) => self.application(g, args, false),
            ExprNode::PredApply(g, args) => self.application(g, args, true),
        }
    }

    fn comparison(&mut self, l: Expr, r: Expr, is_eq: bool) -> Expr {
        // Lift a top-level integer ITE out of either operand.
        if let ExprNode::Ite(c, t, f) = l.node() {
            let then_cmp = self.mk_cmp(t.clone(), r.clone(), is_eq);
            let else_cmp = self.mk_cmp(f.clone(), r, is_eq);
            return self.go(&Expr::or(vec![
                Expr::and(vec![c.clone(), then_cmp]),
                Expr::and(vec![Expr::not(c.clone()), else_cmp]),
            ]));
        }
        if let ExprNode::Ite(c, t, f) = r.node() {
            let then_cmp = self.mk_cmp(l.clone(), t.clone(), is_eq);
            let else_cmp = self.mk_cmp(l, f.clone(), is_eq);
            return self.go(&Expr::or(vec![
                Expr::and(vec![c.clone(), then_cmp]),
                Expr::and(vec![Expr::not(c.clone()), else_cmp]),
            ]));
        }
        if let (ExprNode::IntConst(a), ExprNode::IntConst(b)) = (l.node(), r.node()) {
            return Expr::truth(if is_eq { a == b } else { a < b });
        }
        if l == r {
            return Expr::truth(is_eq);
        }
        if is_eq {
            Expr::int_eq(l, r)
        } else {
            Expr::int_lt(l, r)
        }
    }

    fn mk_cmp(&mut self, l: Expr, r: Expr, is_eq: bool) -> Expr {
        if is_eq {
            Expr::int_eq(l, r)
        } else {
            Expr::int_lt(l, r)
        }
    }

    fn application(&mut self, g: &Expr, args: &[Expr], is_pred: bool) -> Expr {
        let g = self.go(g);
        let args: Vec<Expr> = args.iter().map(|a| self.go(a)).collect();
        // Beta step: applied lambda expands by argument substitution.
        if let ExprNode::LambdaInt(ps, body) | ExprNode::LambdaBool(ps, body) = g.node() {
            let map: BTreeMap<String, Expr> = ps
                .iter()
                .cloned()
                .zip(args.iter().cloned())
                .collect();
            let expanded = subst_lvars(body, &map, &mut self.fresh);
            return self.go(&expanded);
        }
        // Lift an integer ITE out of an argument position.
        if let Some(pos) = args
            .iter()
            .position(|a| matches!(a.node(), ExprNode::Ite(_, _, _)))
        {
            if let ExprNode::Ite(c, t, f) = args[pos].node() {
                let mut then_args = args.clone();
                then_args[pos] = t.clone();
                let mut else_args = args.clone();
                else_args[pos] = f.clone();
                let mk = |g: Expr, a: Vec<Expr>| {
                    if is_pred {
                        Expr::pred_apply(g, a)
                    } else {
                        Expr::func_apply(g, a)
                    }
                };
                let lifted = Expr::ite(
                    c.clone(),
                    mk(g.clone(), then_args),
                    mk(g, else_args),
                );
                return self.go(&lifted);
            }
        }
        if is_pred {
            Expr::pred_apply(g, args)
        } else {
            Expr::func_apply(g, args)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Expr {
        Expr::int_sym("x")
    }
    fn i() -> Expr {
        Expr::int_sym("i")
    }
    fn fx() -> Expr {
        Expr::func_apply(Expr::func_sym("F"), vec![x()])
    }

    #[test]
    fn substitution_is_simultaneous() {
        // (x = y)[x -> y, y -> x] is y = x, not x = x.
        let e = Expr::int_eq(x(), Expr::int_sym("y"));
        let mut sub = Substitution::new();
        sub.insert("x".into(), Expr::int_sym("y"));
        sub.insert("y".into(), x());
        let targets: BTreeSet<String> = ["x".to_string(), "y".to_string()].into();
        let got = substitute(&e, &sub, &targets).unwrap();
        assert_eq!(got, Expr::int_eq(Expr::int_sym("y"), x()));
    }

    #[test]
    fn empty_substitution_is_identity() {
        let targets: BTreeSet<String> = ["x".to_string()].into();
        let got = substitute(&x(), &Substitution::new(), &targets).unwrap();
        assert_eq!(got, x());
    }

    #[test]
    fn substitute_predicate_definitions() {
        // (p & q)[p -> F(x) >= 0, q -> x >= 0]
        let e = Expr::and(vec![Expr::bool_sym("p"), Expr::bool_sym("q")]);
        let mut sub = Substitution::new();
        sub.insert("p".into(), Expr::int_ge(fx(), Expr::int(0)));
        sub.insert("q".into(), Expr::int_ge(x(), Expr::int(0)));
        let targets: BTreeSet<String> = ["p".to_string(), "q".to_string()].into();
        let got = substitute(&e, &sub, &targets).unwrap();
        let want = Expr::and(vec![
            Expr::int_ge(fx(), Expr::int(0)),
            Expr::int_ge(x(), Expr::int(0)),
        ]);
        assert_eq!(got, want);
    }

    #[test]
    fn substitute_index_by_offset() {
        // (F(x) >= 0)[x -> i + 1]
        let e = Expr::int_ge(fx(), Expr::int(0));
        let mut sub = Substitution::new();
        sub.insert("x".into(), Expr::plus(i(), 1));
        let targets: BTreeSet<String> = ["x".to_string()].into();
        let got = substitute(&e, &sub, &targets).unwrap();
        let want = Expr::int_ge(
            Expr::func_apply(Expr::func_sym("F"), vec![Expr::plus(i(), 1)]),
            Expr::int(0),
        );
        assert_eq!(got, want);
    }

    #[test]
    fn kind_mismatch_is_rejected() {
        let e = Expr::plus(x(), 1);
        let mut sub = Substitution::new();
        sub.insert("x".into(), Expr::truth(true));
        let targets: BTreeSet<String> = ["x".to_string()].into();
        assert!(substitute(&e, &sub, &targets).is_err());
    }

    #[test]
    fn beta_identity_application() {
        let id = Expr::lambda_int(vec!["u".into()], Expr::lambda_var("u"));
        let e = Expr::func_apply(id, vec![Expr::int(5)]);
        assert_eq!(normalize(&e), Expr::int(5));
    }

    #[test]
    fn beta_expands_update_lambda() {
        // (LAMBDA (u). ITE(u = i, F(i+1), F(u)))(x)
        // normalizes to the disjunctive form of ITE(x = i, F(i+1), F(x)).
        let delta = Expr::lambda_int(
            vec!["u".into()],
            Expr::ite(
                Expr::int_eq(Expr::lambda_var("u"), i()),
                Expr::func_apply(Expr::func_sym("F"), vec![Expr::plus(i(), 1)]),
                Expr::func_apply(Expr::func_sym("F"), vec![Expr::lambda_var("u")]),
            ),
        );
        let applied = Expr::func_apply(delta, vec![x()]);
        // In an integer context the ITE survives as a term.
        let got = normalize(&applied);
        let want = normalize(&Expr::ite(
            Expr::int_eq(x(), i()),
            Expr::func_apply(Expr::func_sym("F"), vec![Expr::plus(i(), 1)]),
            fx(),
        ));
        assert_eq!(got, want);
    }

    #[test]
    fn uninterpreted_application_is_fixed() {
        assert_eq!(normalize(&fx()), fx());
    }

    #[test]
    fn ite_lifts_out_of_comparisons() {
        // ITE(c, a, b) < 0 becomes (c & a < 0) | (!c & b < 0); the lifted
        // form survives under negation.
        let c = Expr::bool_sym("c");
        let lt = Expr::int_lt(Expr::ite(c.clone(), x(), i()), Expr::int(0));
        let want = normalize(&Expr::or(vec![
            Expr::and(vec![c.clone(), Expr::int_lt(x(), Expr::int(0))]),
            Expr::and(vec![Expr::not(c.clone()), Expr::int_lt(i(), Expr::int(0))]),
        ]));
        assert_eq!(normalize(&lt), want);
        assert_eq!(normalize(&Expr::not(lt)), Expr::not(want));
    }

    #[test]
    fn plus_const_folds() {
        let e = Expr::plus(Expr::plus(x(), 2), -2);
        assert_eq!(normalize(&e), x());
        let e = Expr::plus(Expr::int(3), 4);
        assert_eq!(normalize(&e), Expr::int(7));
    }

    #[test]
    fn capture_is_avoided() {
        // (LAMBDA (v). F(v))(u) inside LAMBDA (u): expanding the inner
        // application must not re-bind the outer u.
        let inner = Expr::lambda_int(
            vec!["v".into()],
            Expr::func_apply(Expr::func_sym("F"), vec![Expr::lambda_var("v")]),
        );
        let outer = Expr::lambda_int(
            vec!["u".into()],
            Expr::func_apply(inner, vec![Expr::lambda_var("u")]),
        );
        let got = normalize(&outer);
        let want = Expr::lambda_int(
            vec!["u".into()],
            Expr::func_apply(Expr::func_sym("F"), vec![Expr::lambda_var("u")]),
        );
        assert_eq!(got, want);
    }
}
