//! Elimination of uninterpreted function and predicate applications.
//!
//! Each distinct application `F(t1..tn)` is replaced by a fresh symbol,
//! and for every pair of applications of the same head a functional
//! consistency constraint (equal arguments imply equal results) is
//! conjoined. The result is equisatisfiable and application-free.

use crate::logic::{Expr, ExprNode};
use std::collections::{BTreeMap, HashMap};

#[derive(Debug, Clone)]
pub struct Ackermannized {
    /// The rewritten formula with all consistency constraints conjoined.
    pub expr: Expr,
    /// Fresh symbol name to the application it replaced.
    pub map: BTreeMap<String, Expr>,
}

struct Ctx {
    /// Per head symbol: the argument tuples seen, their fresh symbols, and
    /// whether the head is a predicate.
    apps: Vec<(String, Vec<Expr>, Expr, bool)>,
    by_key: HashMap<(String, Vec<Expr>), Expr>,
    memo: HashMap<usize, Expr>,
    counter: u64,
}

/// Rewrite `e` (normalized, lambda-free) into an application-free formula.
/// Fresh symbols are named `%a<k>` and cannot collide with parsed names.
pub fn ackermannize(e: &Expr) -> Ackermannized {
    let mut ctx = Ctx {
        apps: Vec::new(),
        by_key: HashMap::new(),
        memo: HashMap::new(),
        counter: 0,
    };
    let body = rewrite(e, &mut ctx);
    // Consistency constraints for every pair of same-head applications.
    let mut constraints = Vec::new();
    for i in 0..ctx.apps.len() {
        for j in (i + 1)..ctx.apps.len() {
            let (h1, a1, v1, is_pred) = &ctx.apps[i];
            let (h2, a2, v2, _) = &ctx.apps[j];
            if h1 != h2 {
                continue;
            }
            let args_eq = Expr::and(
                a1.iter()
                    .zip(a2.iter())
                    .map(|(x, y)| Expr::int_eq(x.clone(), y.clone()))
                    .collect(),
            );
            let results_eq = if *is_pred {
                Expr::iff(v1.clone(), v2.clone())
            } else {
                Expr::int_eq(v1.clone(), v2.clone())
            };
            constraints.push(Expr::implies(args_eq, results_eq));
        }
    }
    let expr = if constraints.is_empty() {
        body
    } else {
        let mut parts = vec![body];
        parts.extend(constraints);
        Expr::and(parts)
    };
    let map = ctx
        .apps
        .into_iter()
        .map(|(head, args, fresh, is_pred)| {
            let name = match fresh.node() {
                ExprNode::IntSym(n) | ExprNode::BoolSym(n) => n.clone(),
                _ => unreachable!(),
            };
            let head_e = if is_pred {
                Expr::pred_sym(head)
            } else {
                Expr::func_sym(head)
            };
            let app = if is_pred {
                Expr::pred_apply(head_e, args)
            } else {
                Expr::func_apply(head_e, args)
            };
            (name, app)
        })
        .collect();
    Ackermannized { expr, map }
}

fn rewrite(e: &Expr, ctx: &mut Ctx) -> Expr {
    if let Some(hit) = ctx.memo.get(&e.key()) {
        return hit.clone();
    }
    let result = match e.node() {
        ExprNode::FuncApply(g, args) | ExprNode::PredApply(g, args) => {
            let head = match g.node() {
                ExprNode::FuncSym(n) | ExprNode::PredSym(n) => n.clone(),
                other => panic!("application head not an uninterpreted symbol: {other:?}"),
            };
            let is_pred = matches!(e.node(), ExprNode::PredApply(_, _));
            let new_args: Vec<Expr> = args.iter().map(|a| rewrite(a, ctx)).collect();
            let key = (head.clone(), new_args.clone());
            match ctx.by_key.get(&key) {
                Some(v) => v.clone(),
                None => {
                    ctx.counter += 1;
                    let name = format!("%a{}", ctx.counter);
                    let fresh = if is_pred {
                        Expr::bool_sym(&name)
                    } else {
                        Expr::int_sym(&name)
                    };
                    ctx.by_key.insert(key, fresh.clone());
                    ctx.apps.push((head, new_args, fresh.clone(), is_pred));
                    fresh
                }
            }
        }
        ExprNode::Not(a) => Expr::not(rewrite(a, ctx)),
        ExprNode::And(cs) => Expr::and(cs.iter().map(|c| rewrite(c, ctx)).collect()),
        ExprNode::Or(cs) => Expr::or(cs.iter().map(|c| rewrite(c, ctx)).collect()),
        ExprNode::IntEq(l, r) => Expr::int_eq(rewrite(l, ctx), rewrite(r, ctx)),
        ExprNode::IntLt(l, r) => Expr::int_lt(rewrite(l, ctx), rewrite(r, ctx)),
        ExprNode::Ite(c, t, f) => Expr::ite(rewrite(c, ctx), rewrite(t, ctx), rewrite(f, ctx)),
        ExprNode::PlusConst(a, k) => Expr::plus(rewrite(a, ctx), k.clone()),
        ExprNode::LambdaBool(_, _) | ExprNode::LambdaInt(_, _) => {
            panic!("ackermannize requires a beta-reduced formula")
        }
        _ => e.clone(),
    };
    ctx.memo.insert(e.key(), result.clone());
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fx(arg: Expr) -> Expr {
        Expr::func_apply(Expr::func_sym("F"), vec![arg])
    }

    #[test]
    fn two_applications_one_consistency_pair() {
        // F(x) >= 0 & F(i+1) >= 0 becomes v1 >= 0 & v2 >= 0 plus
        // x = i + 1 => v1 = v2.
        let e = Expr::and(vec![
            Expr::int_ge(fx(Expr::int_sym("x")), Expr::int(0)),
            Expr::int_ge(fx(Expr::plus(Expr::int_sym("i"), 1)), Expr::int(0)),
        ]);
        let got = ackermannize(&e);
        let v1 = Expr::int_sym("%a1");
        let v2 = Expr::int_sym("%a2");
        let want = Expr::and(vec![
            Expr::int_ge(v1.clone(), Expr::int(0)),
            Expr::int_ge(v2.clone(), Expr::int(0)),
            Expr::implies(
                Expr::int_eq(Expr::int_sym("x"), Expr::plus(Expr::int_sym("i"), 1)),
                Expr::int_eq(v1, v2),
            ),
        ]);
        assert_eq!(got.expr, want);
        assert_eq!(got.map.len(), 2);
        assert_eq!(got.map["%a1"], fx(Expr::int_sym("x")));
    }

    #[test]
    fn no_applications_is_identity() {
        let e = Expr::int_ge(Expr::int_sym("x"), Expr::int(0));
        let got = ackermannize(&e);
        assert_eq!(got.expr, e);
        assert!(got.map.is_empty());
    }

    #[test]
    fn identical_applications_share_a_symbol() {
        let e = Expr::and(vec![
            Expr::int_ge(fx(Expr::int_sym("x")), Expr::int(0)),
            Expr::int_lt(fx(Expr::int_sym("x")), Expr::int(5)),
        ]);
        let got = ackermannize(&e);
        assert_eq!(got.map.len(), 1);
    }

    #[test]
    fn nested_applications_rewrite_inside_out() {
        // F(F(x)): the inner application becomes %a1, the outer F(%a1).
        let e = Expr::int_ge(fx(fx(Expr::int_sym("x"))), Expr::int(0));
        let got = ackermannize(&e);
        assert_eq!(got.map.len(), 2);
        assert_eq!(
            got.map["%a2"],
            fx(Expr::int_sym("%a1"))
        );
        // One consistency pair relating the two F applications.
        let n_constraints = match got.expr.node() {
            ExprNode::And(cs) => cs.len() - 1,
            _ => 0,
        };
        assert_eq!(n_constraints, 1);
    }

    #[test]
    fn predicate_applications_use_iff() {
        let sx = Expr::pred_apply(Expr::pred_sym("S"), vec![Expr::int_sym("x")]);
        let sy = Expr::pred_apply(Expr::pred_sym("S"), vec![Expr::int_sym("y")]);
        let e = Expr::and(vec![sx, Expr::not(sy)]);
        let got = ackermannize(&e);
        assert_eq!(got.map.len(), 2);
        // Constraint shape: x = y => (%a1 <=> %a2).
        let rendered = got.expr.to_string();
        assert!(rendered.contains("%a1"), "{rendered}");
    }
}
