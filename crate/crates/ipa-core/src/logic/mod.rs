//! The expression logic: syntax, typing, evaluation, substitution, and
//! normalization.

pub mod eval;
pub mod expr;
pub mod parse;
pub mod sig;
pub mod subst;

pub use eval::{apply, eval, eval_named_set, eval_scoped, Closure, EvalError, FuncValue, Interp, Value};
pub use expr::{Expr, ExprNode, Sort};
pub use parse::{parse_expr, parse_expr_at, ParseCtx, ParseError};
pub use sig::{typecheck, SigError, Signature, SymbolClass, TypeError};
pub use subst::{kind_of, normalize, substitute, Kind, SubstError, Substitution};
