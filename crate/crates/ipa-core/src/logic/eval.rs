//! Evaluation of expressions under explicit interpretations.
//!
//! Function and predicate values are total maps represented as a finite
//! exception table plus an optional default closure. Values built by
//! evaluating a lambda carry an empty table and a closure over the
//! interpretation in force at that point; the bounded oracle builds
//! table-only values restricted to its scope, and a lookup past the table
//! with no default reports [`EvalError::OutOfScope`].

use crate::logic::expr::{Expr, ExprNode};
use num_bigint::BigInt;
use std::collections::BTreeMap;
use std::fmt;
use std::rc::Rc;
use thiserror::Error;

/// A function or predicate closure: parameters, body, and the environment
/// captured when the lambda was evaluated.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Closure {
    pub params: Vec<String>,
    pub body: Expr,
    pub env: Interp,
    pub locals: Vec<(String, Value)>,
}

/// Total function value: exception table consulted first, then the
/// default closure.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FuncValue {
    pub table: BTreeMap<Vec<BigInt>, Value>,
    pub default: Option<Box<Closure>>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Bool(bool),
    Int(BigInt),
    /// Integer-valued function.
    Func(FuncValue),
    /// Boolean-valued predicate.
    Pred(FuncValue),
}

impl Value {
    pub fn int(v: impl Into<BigInt>) -> Value {
        Value::Int(v.into())
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Value::Bool(b) => Some(*b),
            _ => None,
        }
    }

    pub fn as_int(&self) -> Option<&BigInt> {
        match self {
            Value::Int(v) => Some(v),
            _ => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Bool(b) => write!(f, "{b}"),
            Value::Int(v) => write!(f, "{v}"),
            Value::Func(fv) | Value::Pred(fv) => {
                write!(f, "{{")?;
                for (i, (args, v)) in fv.table.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    let parts: Vec<String> = args.iter().map(|a| a.to_string()).collect();
                    write!(f, "{} -> {v}", parts.join(","))?;
                }
                if let Some(c) = &fv.default {
                    if !fv.table.is_empty() {
                        write!(f, ", ")?;
                    }
                    write!(f, "else LAMBDA ({}). {}", c.params.join(", "), c.body)?;
                }
                write!(f, "}}")
            }
        }
    }
}

/// An interpretation: a map from symbol names to values. Cheap to clone;
/// closures capture the interpretation they were built under.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Interp {
    map: Rc<BTreeMap<String, Value>>,
}

impl Interp {
    pub fn new(map: BTreeMap<String, Value>) -> Interp {
        Interp { map: Rc::new(map) }
    }

    pub fn empty() -> Interp {
        Interp::default()
    }

    pub fn get(&self, name: &str) -> Option<&Value> {
        self.map.get(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Value)> {
        self.map.iter()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Union of two interpretations over disjoint symbol sets; entries in
    /// `other` win on collision.
    pub fn extended(&self, other: &Interp) -> Interp {
        let mut m = (*self.map).clone();
        for (k, v) in other.map.iter() {
            m.insert(k.clone(), v.clone());
        }
        Interp::new(m)
    }

    pub fn with(&self, name: impl Into<String>, v: Value) -> Interp {
        let mut m = (*self.map).clone();
        m.insert(name.into(), v);
        Interp::new(m)
    }
}

impl FromIterator<(String, Value)> for Interp {
    fn from_iter<T: IntoIterator<Item = (String, Value)>>(iter: T) -> Interp {
        Interp::new(iter.into_iter().collect())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("unbound symbol `{0}`")]
    UnboundSymbol(String),
    #[error("unbound lambda variable `{0}`")]
    UnboundLambdaVar(String),
    #[error("value of `{context}` has the wrong kind")]
    KindMismatch { context: String },
    #[error("function value undefined at ({0}) and integer {0} outside evaluation scope")]
    OutOfScope(String),
    #[error("enumeration budget of {0} interpretations exceeded")]
    ScopeTooLarge(u64),
}

/// Evaluate `e` under `i`. Every free symbol of `e` must be in `i`'s
/// domain. `ITE` evaluates only the selected branch.
pub fn eval(e: &Expr, i: &Interp) -> Result<Value, EvalError> {
    let mut locals = Vec::new();
    eval_in(e, i, &mut locals, None)
}

/// Like [`eval`] but every integer produced by any subterm must lie in
/// `[lo, hi]`; used by the bounded oracle.
pub fn eval_scoped(e: &Expr, i: &Interp, lo: &BigInt, hi: &BigInt) -> Result<Value, EvalError> {
    let mut locals = Vec::new();
    eval_in(e, i, &mut locals, Some((lo, hi)))
}

type Range<'a> = Option<(&'a BigInt, &'a BigInt)>;

fn check_range(v: Value, range: Range) -> Result<Value, EvalError> {
    if let (Value::Int(n), Some((lo, hi))) = (&v, range) {
        if n < lo || n > hi {
            return Err(EvalError::OutOfScope(n.to_string()));
        }
    }
    Ok(v)
}

fn eval_in(
    e: &Expr,
    i: &Interp,
    locals: &mut Vec<(String, Value)>,
    range: Range,
) -> Result<Value, EvalError> {
    let v = match e.node() {
        ExprNode::TrueLit => Value::Bool(true),
        ExprNode::FalseLit => Value::Bool(false),
        ExprNode::IntConst(c) => Value::Int(c.clone()),
        ExprNode::LambdaVar(n) => locals
            .iter()
            .rev()
            .find(|(k, _)| k == n)
            .map(|(_, v)| v.clone())
            .ok_or_else(|| EvalError::UnboundLambdaVar(n.clone()))?,
        ExprNode::BoolSym(n)
        | ExprNode::IntSym(n)
        | ExprNode::FuncSym(n)
        | ExprNode::PredSym(n) => i
            .get(n)
            .cloned()
            .ok_or_else(|| EvalError::UnboundSymbol(n.clone()))?,
        ExprNode::Not(a) => Value::Bool(!eval_bool(a, i, locals, range)?),
        ExprNode::And(cs) => {
            let mut all = true;
            for c in cs {
                if !eval_bool(c, i, locals, range)? {
                    all = false;
                    break;
                }
            }
            Value::Bool(all)
        }
        ExprNode::Or(cs) => {
            let mut any = false;
            for c in cs {
                if eval_bool(c, i, locals, range)? {
                    any = true;
                    break;
                }
            }
            Value::Bool(any)
        }
        ExprNode::IntEq(l, r) => {
            Value::Bool(eval_int(l, i, locals, range)? == eval_int(r, i, locals, range)?)
        }
        ExprNode::IntLt(l, r) => {
            Value::Bool(eval_int(l, i, locals, range)? < eval_int(r, i, locals, range)?)
        }
        ExprNode::Ite(c, t, f) => {
            if eval_bool(c, i, locals, range)? {
                eval_in(t, i, locals, range)?
            } else {
                eval_in(f, i, locals, range)?
            }
        }
        ExprNode::PlusConst(a, c) => Value::Int(eval_int(a, i, locals, range)? + c),
        ExprNode::FuncApply(g, args) | ExprNode::PredApply(g, args) => {
            let gv = eval_in(g, i, locals, range)?;
            let fv = match &gv {
                Value::Func(fv) | Value::Pred(fv) => fv,
                _ => {
                    return Err(EvalError::KindMismatch {
                        context: g.to_string(),
                    })
                }
            };
            let mut argv = Vec::with_capacity(args.len());
            for a in args {
                argv.push(eval_int(a, i, locals, range)?);
            }
            apply(fv, &argv, range)?
        }
        ExprNode::LambdaInt(params, body) | ExprNode::LambdaBool(params, body) => {
            let closure = Closure {
                params: params.clone(),
                body: body.clone(),
                env: i.clone(),
                locals: locals.clone(),
            };
            let fv = FuncValue {
                table: BTreeMap::new(),
                default: Some(Box::new(closure)),
            };
            if matches!(e.node(), ExprNode::LambdaInt(_, _)) {
                Value::Func(fv)
            } else {
                Value::Pred(fv)
            }
        }
    };
    check_range(v, range)
}

/// Apply a function value at an argument tuple: table hit, then default
/// closure, otherwise the value is undefined there.
pub fn apply(fv: &FuncValue, args: &[BigInt], range: Range) -> Result<Value, EvalError> {
    if let Some(v) = fv.table.get(args) {
        return Ok(v.clone());
    }
    match &fv.default {
        Some(c) => {
            let mut locals = c.locals.clone();
            for (p, a) in c.params.iter().zip(args.iter()) {
                locals.push((p.clone(), Value::Int(a.clone())));
            }
            eval_in(&c.body, &c.env, &mut locals, range)
        }
        None => {
            let parts: Vec<String> = args.iter().map(|a| a.to_string()).collect();
            Err(EvalError::OutOfScope(parts.join(",")))
        }
    }
}

fn eval_bool(
    e: &Expr,
    i: &Interp,
    locals: &mut Vec<(String, Value)>,
    range: Range,
) -> Result<bool, EvalError> {
    match eval_in(e, i, locals, range)? {
        Value::Bool(b) => Ok(b),
        _ => Err(EvalError::KindMismatch {
            context: e.to_string(),
        }),
    }
}

fn eval_int(
    e: &Expr,
    i: &Interp,
    locals: &mut Vec<(String, Value)>,
    range: Range,
) -> Result<BigInt, EvalError> {
    match eval_in(e, i, locals, range)? {
        Value::Int(v) => Ok(v),
        _ => Err(EvalError::KindMismatch {
            context: e.to_string(),
        }),
    }
}

/// Evaluate a named set of expressions, producing an interpretation of the
/// named symbols.
pub fn eval_named_set(
    exprs: &BTreeMap<String, Expr>,
    i: &Interp,
) -> Result<Interp, EvalError> {
    let mut out = BTreeMap::new();
    for (name, e) in exprs {
        out.insert(name.clone(), eval(e, i)?);
    }
    Ok(Interp::new(out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn id_lambda() -> Expr {
        Expr::lambda_int(vec!["u".into()], Expr::lambda_var("u"))
    }

    #[test]
    fn ite_selects_then_branch() {
        let e = Expr::ite(Expr::truth(true), Expr::int(1), Expr::int(2));
        assert_eq!(eval(&e, &Interp::empty()), Ok(Value::int(1)));
    }

    #[test]
    fn function_update_evaluates_pointwise() {
        // delta_F = LAMBDA (u). ITE(u = i, F(i + 1), F(u)) under F = identity,
        // i = -1: the result maps -1 to 0 and is the identity elsewhere.
        let delta = Expr::lambda_int(
            vec!["u".into()],
            Expr::ite(
                Expr::int_eq(Expr::lambda_var("u"), Expr::int_sym("i")),
                Expr::func_apply(Expr::func_sym("F"), vec![Expr::plus(Expr::int_sym("i"), 1)]),
                Expr::func_apply(Expr::func_sym("F"), vec![Expr::lambda_var("u")]),
            ),
        );
        let env: Interp = [
            ("F".to_string(), eval(&id_lambda(), &Interp::empty()).unwrap()),
            ("i".to_string(), Value::int(-1)),
        ]
        .into_iter()
        .collect();
        let h = match eval(&delta, &env).unwrap() {
            Value::Func(fv) => fv,
            other => panic!("expected function, got {other}"),
        };
        assert_eq!(apply(&h, &[BigInt::from(-1)], None), Ok(Value::int(0)));
        assert_eq!(apply(&h, &[BigInt::from(5)], None), Ok(Value::int(5)));
        assert_eq!(apply(&h, &[BigInt::from(0)], None), Ok(Value::int(0)));
    }

    #[test]
    fn predicate_under_identity_function() {
        // F(x) >= 0 under F = identity, x = -3 is false.
        let e = Expr::int_ge(
            Expr::func_apply(Expr::func_sym("F"), vec![Expr::int_sym("x")]),
            Expr::int(0),
        );
        let env: Interp = [
            ("F".to_string(), eval(&id_lambda(), &Interp::empty()).unwrap()),
            ("x".to_string(), Value::int(-3)),
        ]
        .into_iter()
        .collect();
        assert_eq!(eval(&e, &env), Ok(Value::Bool(false)));
    }

    #[test]
    fn table_hit_beats_default() {
        let mut table = BTreeMap::new();
        table.insert(vec![BigInt::from(2)], Value::int(9));
        let fv = FuncValue {
            table,
            default: Some(Box::new(Closure {
                params: vec!["u".into()],
                body: Expr::lambda_var("u"),
                env: Interp::empty(),
                locals: vec![],
            })),
        };
        assert_eq!(apply(&fv, &[BigInt::from(2)], None), Ok(Value::int(9)));
        assert_eq!(apply(&fv, &[BigInt::from(3)], None), Ok(Value::int(3)));
    }

    #[test]
    fn scoped_eval_rejects_out_of_range() {
        let e = Expr::plus(Expr::int_sym("i"), 1);
        let env: Interp = [("i".to_string(), Value::int(3))].into_iter().collect();
        let lo = BigInt::from(-2);
        let hi = BigInt::from(3);
        assert!(matches!(
            eval_scoped(&e, &env, &lo, &hi),
            Err(EvalError::OutOfScope(_))
        ));
        let env: Interp = [("i".to_string(), Value::int(2))].into_iter().collect();
        assert_eq!(eval_scoped(&e, &env, &lo, &hi), Ok(Value::int(3)));
    }
}
