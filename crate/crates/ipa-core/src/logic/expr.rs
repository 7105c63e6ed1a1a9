//! Expression language: Booleans, integers with +constant arithmetic,
//! and uninterpreted functions/predicates applied to integer arguments,
//! with lambda notation for function updates.
//!
//! Expressions are immutable trees behind `Rc`, so substitution and
//! composition share subterms freely. Structural equality is used for
//! caching and fixpoint bookkeeping; [`Expr::normalize`] puts an
//! expression into the canonical form those comparisons assume.

use num_bigint::BigInt;
use std::collections::BTreeSet;
use std::fmt;
use std::rc::Rc;

/// Sort of an expression or symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sort {
    Bool,
    Int,
    /// Uninterpreted function of the given arity (integers to integer).
    Func(usize),
    /// Uninterpreted predicate of the given arity (integers to Boolean).
    Pred(usize),
}

impl Sort {
    pub fn arity(&self) -> Option<usize> {
        match self {
            Sort::Func(n) | Sort::Pred(n) => Some(*n),
            _ => None,
        }
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sort::Bool => write!(f, "BOOL"),
            Sort::Int => write!(f, "INT"),
            Sort::Func(n) => write!(f, "FUNC({n})"),
            Sort::Pred(n) => write!(f, "PRED({n})"),
        }
    }
}

/// One node of an expression tree.
///
/// `And`/`Or` are n-ary so that canonical child ordering gives a usable
/// structural equality; the parser and all builders go through the smart
/// constructors on [`Expr`], which flatten nested conjunctions and
/// disjunctions.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExprNode {
    TrueLit,
    FalseLit,
    BoolSym(String),
    Not(Expr),
    And(Vec<Expr>),
    Or(Vec<Expr>),
    IntEq(Expr, Expr),
    IntLt(Expr, Expr),
    /// Application of a predicate expression to integer arguments.
    PredApply(Expr, Vec<Expr>),
    /// Integer variable bound by an enclosing lambda.
    LambdaVar(String),
    IntSym(String),
    IntConst(BigInt),
    Ite(Expr, Expr, Expr),
    PlusConst(Expr, BigInt),
    /// Application of a function expression to integer arguments.
    FuncApply(Expr, Vec<Expr>),
    PredSym(String),
    FuncSym(String),
    LambdaBool(Vec<String>, Expr),
    LambdaInt(Vec<String>, Expr),
}

/// A shared, immutable expression.
#[derive(Clone, Eq, Hash)]
pub struct Expr(pub(crate) Rc<ExprNode>);

// Equality and ordering are structural, with a pointer shortcut so that
// comparisons of shared subtrees cost O(1).
impl PartialEq for Expr {
    fn eq(&self, other: &Expr) -> bool {
        Rc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl PartialOrd for Expr {
    fn partial_cmp(&self, other: &Expr) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Expr {
    fn cmp(&self, other: &Expr) -> std::cmp::Ordering {
        if Rc::ptr_eq(&self.0, &other.0) {
            return std::cmp::Ordering::Equal;
        }
        self.0.cmp(&other.0)
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Expr {
    pub fn node(&self) -> &ExprNode {
        &self.0
    }

    fn new(node: ExprNode) -> Expr {
        Expr(Rc::new(node))
    }

    pub fn ptr_eq(&self, other: &Expr) -> bool {
        Rc::ptr_eq(&self.0, &other.0)
    }

    /// Stable address of the node, used as a memo key inside single passes.
    pub(crate) fn key(&self) -> usize {
        Rc::as_ptr(&self.0) as usize
    }

    pub fn truth(b: bool) -> Expr {
        if b {
            Expr::new(ExprNode::TrueLit)
        } else {
            Expr::new(ExprNode::FalseLit)
        }
    }

    pub fn bool_sym(name: impl Into<String>) -> Expr {
        Expr::new(ExprNode::BoolSym(name.into()))
    }

    pub fn int_sym(name: impl Into<String>) -> Expr {
        Expr::new(ExprNode::IntSym(name.into()))
    }

    pub fn func_sym(name: impl Into<String>) -> Expr {
        Expr::new(ExprNode::FuncSym(name.into()))
    }

    pub fn pred_sym(name: impl Into<String>) -> Expr {
        Expr::new(ExprNode::PredSym(name.into()))
    }

    pub fn lambda_var(name: impl Into<String>) -> Expr {
        Expr::new(ExprNode::LambdaVar(name.into()))
    }

    pub fn int(v: impl Into<BigInt>) -> Expr {
        Expr::new(ExprNode::IntConst(v.into()))
    }

    pub fn not(e: Expr) -> Expr {
        Expr::new(ExprNode::Not(e))
    }

    /// N-ary conjunction; flattens nested `And`s. No children means `true`.
    pub fn and(children: Vec<Expr>) -> Expr {
        let mut flat = Vec::with_capacity(children.len());
        for c in children {
            match c.node() {
                ExprNode::And(inner) => flat.extend(inner.iter().cloned()),
                _ => flat.push(c),
            }
        }
        match flat.len() {
            0 => Expr::truth(true),
            1 => flat.pop().unwrap(),
            _ => Expr::new(ExprNode::And(flat)),
        }
    }

    /// N-ary disjunction; flattens nested `Or`s. No children means `false`.
    pub fn or(children: Vec<Expr>) -> Expr {
        let mut flat = Vec::with_capacity(children.len());
        for c in children {
            match c.node() {
                ExprNode::Or(inner) => flat.extend(inner.iter().cloned()),
                _ => flat.push(c),
            }
        }
        match flat.len() {
            0 => Expr::truth(false),
            1 => flat.pop().unwrap(),
            _ => Expr::new(ExprNode::Or(flat)),
        }
    }

    pub fn implies(a: Expr, b: Expr) -> Expr {
        Expr::or(vec![Expr::not(a), b])
    }

    pub fn iff(a: Expr, b: Expr) -> Expr {
        Expr::and(vec![
            Expr::implies(a.clone(), b.clone()),
            Expr::implies(b, a),
        ])
    }

    pub fn int_eq(l: Expr, r: Expr) -> Expr {
        Expr::new(ExprNode::IntEq(l, r))
    }

    pub fn int_lt(l: Expr, r: Expr) -> Expr {
        Expr::new(ExprNode::IntLt(l, r))
    }

    /// `l <= r` as `!(r < l)`.
    pub fn int_le(l: Expr, r: Expr) -> Expr {
        Expr::not(Expr::int_lt(r, l))
    }

    /// `e >= 0` and friends.
    pub fn int_ge(l: Expr, r: Expr) -> Expr {
        Expr::int_le(r, l)
    }

    pub fn ite(c: Expr, t: Expr, e: Expr) -> Expr {
        Expr::new(ExprNode::Ite(c, t, e))
    }

    pub fn plus(e: Expr, c: impl Into<BigInt>) -> Expr {
        Expr::new(ExprNode::PlusConst(e, c.into()))
    }

    pub fn func_apply(f: Expr, args: Vec<Expr>) -> Expr {
        Expr::new(ExprNode::FuncApply(f, args))
    }

    pub fn pred_apply(p: Expr, args: Vec<Expr>) -> Expr {
        Expr::new(ExprNode::PredApply(p, args))
    }

    pub fn lambda_int(params: Vec<String>, body: Expr) -> Expr {
        Expr::new(ExprNode::LambdaInt(params, body))
    }

    pub fn lambda_bool(params: Vec<String>, body: Expr) -> Expr {
        Expr::new(ExprNode::LambdaBool(params, body))
    }

    pub fn is_true(&self) -> bool {
        matches!(self.node(), ExprNode::TrueLit)
    }

    pub fn is_false(&self) -> bool {
        matches!(self.node(), ExprNode::FalseLit)
    }

    /// Free (declared) symbols of the expression: everything except
    /// lambda-bound variables.
    pub fn free_symbols(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut out);
        out
    }

    fn collect_free(&self, out: &mut BTreeSet<String>) {
        match self.node() {
            ExprNode::TrueLit | ExprNode::FalseLit | ExprNode::IntConst(_) => {}
            // Lambda variables are not symbols; binding is checked by the
            // typechecker, which tracks the parameter stack.
            ExprNode::LambdaVar(_) => {}
            ExprNode::BoolSym(n)
            | ExprNode::IntSym(n)
            | ExprNode::PredSym(n)
            | ExprNode::FuncSym(n) => {
                out.insert(n.clone());
            }
            ExprNode::Not(a) => a.collect_free(out),
            ExprNode::And(cs) | ExprNode::Or(cs) => {
                for c in cs {
                    c.collect_free(out);
                }
            }
            ExprNode::IntEq(l, r) | ExprNode::IntLt(l, r) => {
                l.collect_free(out);
                r.collect_free(out);
            }
            ExprNode::Ite(c, t, e) => {
                c.collect_free(out);
                t.collect_free(out);
                e.collect_free(out);
            }
            ExprNode::PlusConst(e, _) => e.collect_free(out),
            ExprNode::FuncApply(f, args) | ExprNode::PredApply(f, args) => {
                f.collect_free(out);
                for a in args {
                    a.collect_free(out);
                }
            }
            ExprNode::LambdaBool(_, body) | ExprNode::LambdaInt(_, body) => {
                body.collect_free(out)
            }
        }
    }

    /// Free lambda variables (occurrences not bound by an enclosing lambda).
    /// A standalone well-formed expression has none.
    pub fn free_lambda_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let mut bound = Vec::new();
        self.collect_free_lvars(&mut bound, &mut out);
        out
    }

    fn collect_free_lvars(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self.node() {
            ExprNode::LambdaVar(n) => {
                if !bound.iter().any(|b| b == n) {
                    out.insert(n.clone());
                }
            }
            ExprNode::LambdaBool(params, body) | ExprNode::LambdaInt(params, body) => {
                let depth = bound.len();
                bound.extend(params.iter().cloned());
                body.collect_free_lvars(bound, out);
                bound.truncate(depth);
            }
            ExprNode::Not(a) | ExprNode::PlusConst(a, _) => a.collect_free_lvars(bound, out),
            ExprNode::And(cs) | ExprNode::Or(cs) => {
                for c in cs {
                    c.collect_free_lvars(bound, out);
                }
            }
            ExprNode::IntEq(l, r) | ExprNode::IntLt(l, r) => {
                l.collect_free_lvars(bound, out);
                r.collect_free_lvars(bound, out);
            }
            ExprNode::Ite(c, t, e) => {
                c.collect_free_lvars(bound, out);
                t.collect_free_lvars(bound, out);
                e.collect_free_lvars(bound, out);
            }
            ExprNode::FuncApply(f, args) | ExprNode::PredApply(f, args) => {
                f.collect_free_lvars(bound, out);
                for a in args {
                    a.collect_free_lvars(bound, out);
                }
            }
            _ => {}
        }
    }
}

const PREC_IMPLIES: u8 = 1;
const PREC_OR: u8 = 2;
const PREC_AND: u8 = 3;
const PREC_NOT: u8 = 4;
const PREC_CMP: u8 = 5;
const PREC_PLUS: u8 = 6;
const PREC_ATOM: u8 = 7;

impl Expr {
    fn prec(&self) -> u8 {
        match self.node() {
            ExprNode::Or(_) => PREC_OR,
            ExprNode::And(_) => PREC_AND,
            ExprNode::Not(_) => PREC_NOT,
            ExprNode::IntEq(_, _) | ExprNode::IntLt(_, _) => PREC_CMP,
            ExprNode::PlusConst(_, _) => PREC_PLUS,
            ExprNode::LambdaBool(_, _) | ExprNode::LambdaInt(_, _) => PREC_IMPLIES,
            _ => PREC_ATOM,
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let p = self.prec();
        let paren = p < min;
        if paren {
            write!(f, "(")?;
        }
        match self.node() {
            ExprNode::TrueLit => write!(f, "true")?,
            ExprNode::FalseLit => write!(f, "false")?,
            ExprNode::BoolSym(n)
            | ExprNode::IntSym(n)
            | ExprNode::PredSym(n)
            | ExprNode::FuncSym(n)
            | ExprNode::LambdaVar(n) => write!(f, "{n}")?,
            ExprNode::IntConst(v) => write!(f, "{v}")?,
            ExprNode::Not(a) => {
                write!(f, "!")?;
                a.fmt_at(f, PREC_NOT + 1)?;
            }
            ExprNode::And(cs) => {
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " & ")?;
                    }
                    c.fmt_at(f, PREC_AND + 1)?;
                }
            }
            ExprNode::Or(cs) => {
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " | ")?;
                    }
                    c.fmt_at(f, PREC_OR + 1)?;
                }
            }
            ExprNode::IntEq(l, r) => {
                l.fmt_at(f, PREC_CMP + 1)?;
                write!(f, " = ")?;
                r.fmt_at(f, PREC_CMP + 1)?;
            }
            ExprNode::IntLt(l, r) => {
                l.fmt_at(f, PREC_CMP + 1)?;
                write!(f, " < ")?;
                r.fmt_at(f, PREC_CMP + 1)?;
            }
            ExprNode::Ite(c, t, e) => {
                write!(f, "ITE(")?;
                c.fmt_at(f, 0)?;
                write!(f, ", ")?;
                t.fmt_at(f, 0)?;
                write!(f, ", ")?;
                e.fmt_at(f, 0)?;
                write!(f, ")")?;
            }
            ExprNode::PlusConst(e, c) => {
                e.fmt_at(f, PREC_PLUS)?;
                if c.sign() == num_bigint::Sign::Minus {
                    write!(f, " - {}", -c)?;
                } else {
                    write!(f, " + {c}")?;
                }
            }
            ExprNode::FuncApply(g, args) | ExprNode::PredApply(g, args) => {
                g.fmt_at(f, PREC_ATOM)?;
                write!(f, "(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    a.fmt_at(f, 0)?;
                }
                write!(f, ")")?;
            }
            ExprNode::LambdaBool(params, body) | ExprNode::LambdaInt(params, body) => {
                write!(f, "LAMBDA (")?;
                for (i, p) in params.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, "). ")?;
                body.fmt_at(f, 0)?;
            }
        }
        if paren {
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// Canonical text rendering; `parse_expr(render(e))` is structurally `e`.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smart_constructors_flatten() {
        let a = Expr::bool_sym("a");
        let b = Expr::bool_sym("b");
        let c = Expr::bool_sym("c");
        let e = Expr::and(vec![Expr::and(vec![a.clone(), b.clone()]), c.clone()]);
        assert_eq!(e, Expr::and(vec![a, b, c]));
        assert!(Expr::and(vec![]).is_true());
        assert!(Expr::or(vec![]).is_false());
    }

    #[test]
    fn free_symbols_examples() {
        // free_symbols(LAMBDA (u). u) = {}
        let id = Expr::lambda_int(vec!["u".into()], Expr::lambda_var("u"));
        assert!(id.free_symbols().is_empty());

        // free_symbols(F(x) >= 0) = {F, x}
        let fx = Expr::func_apply(Expr::func_sym("F"), vec![Expr::int_sym("x")]);
        let e = Expr::int_ge(fx, Expr::int(0));
        let syms: Vec<_> = e.free_symbols().into_iter().collect();
        assert_eq!(syms, vec!["F".to_string(), "x".to_string()]);

        // free_symbols(ITE(x = i, F(i+1), F(x))) = {x, i, F}
        let e = Expr::ite(
            Expr::int_eq(Expr::int_sym("x"), Expr::int_sym("i")),
            Expr::func_apply(Expr::func_sym("F"), vec![Expr::plus(Expr::int_sym("i"), 1)]),
            Expr::func_apply(Expr::func_sym("F"), vec![Expr::int_sym("x")]),
        );
        let syms: Vec<_> = e.free_symbols().into_iter().collect();
        assert_eq!(syms, vec!["F".to_string(), "i".to_string(), "x".to_string()]);
    }

    #[test]
    fn render_basic() {
        let e = Expr::or(vec![
            Expr::and(vec![Expr::bool_sym("a"), Expr::not(Expr::bool_sym("b"))]),
            Expr::int_lt(Expr::int_sym("x"), Expr::plus(Expr::int_sym("y"), -2)),
        ]);
        assert_eq!(e.to_string(), "a & !b | x < y - 2");
    }
}
