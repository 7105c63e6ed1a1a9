//! Indexed predicates and the abstract domain.
//!
//! An abstract state is a truth assignment (a cube) to the predicate
//! symbols; an abstract state set is a [`CubeSet`]. A concrete state maps
//! to the *set* of cubes obtained by evaluating the predicates under every
//! interpretation of the index symbols, and concretization universally
//! quantifies over them — [`alpha_explicit`] and [`gamma_explicit`]
//! compute those functions over a finite scope for cross-checking. The
//! symbolic engine instead approximates the universal quantifier with a
//! finite substitution set ([`generate_instantiations`]) and builds the
//! instantiated membership formula ([`concretization_formula`]).

use crate::logic::{
    eval, normalize, substitute, Expr, ExprNode, Interp, Signature, Sort, Substitution,
    SymbolClass, TypeError, Value,
};
use crate::system::SystemModel;
use num_bigint::BigInt;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

/// The indexed predicate bank: index symbols, predicate symbols in cube
/// bit order, their defining expressions over state and index symbols, and
/// the subset that are axioms (required true in every abstract state).
#[derive(Debug, Clone)]
pub struct PredicateBank {
    pub index_syms: Vec<String>,
    pub pred_syms: Vec<String>,
    pub defs: BTreeMap<String, Expr>,
    pub axioms: BTreeSet<String>,
}

impl PredicateBank {
    pub fn width(&self) -> usize {
        self.pred_syms.len()
    }

    pub fn bit_of(&self, pred: &str) -> Option<usize> {
        self.pred_syms.iter().position(|p| p == pred)
    }

    /// Well-formedness against the model signature: definitions are
    /// Boolean over state and index symbols, axioms name known predicates.
    pub fn validate(&self, sig: &Signature) -> Vec<String> {
        let mut out = Vec::new();
        for p in &self.pred_syms {
            let def = match self.defs.get(p) {
                Some(d) => d,
                None => {
                    out.push(format!("predicate `{p}` has no definition"));
                    continue;
                }
            };
            match crate::logic::typecheck(def, sig) {
                Ok(Sort::Bool) => {}
                Ok(other) => out.push(format!("predicate `{p}` has sort {other}, not BOOL")),
                Err(e) => out.push(format!("predicate `{p}`: {e}")),
            }
            for s in def.free_symbols() {
                match sig.class_of(&s) {
                    Some(SymbolClass::State) | Some(SymbolClass::Index) => {}
                    _ => out.push(format!(
                        "predicate `{p}` mentions `{s}`, which is not a state or index symbol"
                    )),
                }
            }
        }
        for q in &self.axioms {
            if !self.pred_syms.contains(q) {
                out.push(format!("axiom `{q}` is not a declared predicate"));
            }
        }
        out
    }
}

/// A total truth assignment to the predicate symbols, packed into a word;
/// bit k is the predicate at position k of the bank.
pub type Cube = u64;

/// A set of cubes of a fixed width.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubeSet {
    pub width: usize,
    cubes: BTreeSet<Cube>,
}

impl CubeSet {
    pub fn empty(width: usize) -> CubeSet {
        assert!(width <= 63, "at most 63 predicates are supported");
        CubeSet {
            width,
            cubes: BTreeSet::new(),
        }
    }

    pub fn full(width: usize) -> CubeSet {
        let mut s = CubeSet::empty(width);
        for c in 0..(1u64 << width) {
            s.insert(c);
        }
        s
    }

    pub fn from_cubes(width: usize, cubes: impl IntoIterator<Item = Cube>) -> CubeSet {
        let mut s = CubeSet::empty(width);
        for c in cubes {
            s.insert(c);
        }
        s
    }

    pub fn insert(&mut self, c: Cube) -> bool {
        debug_assert!(self.width == 63 || c < (1u64 << self.width));
        self.cubes.insert(c)
    }

    pub fn contains(&self, c: Cube) -> bool {
        self.cubes.contains(&c)
    }

    pub fn len(&self) -> usize {
        self.cubes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cubes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Cube> + '_ {
        self.cubes.iter().copied()
    }

    pub fn union(&self, other: &CubeSet) -> CubeSet {
        debug_assert_eq!(self.width, other.width);
        CubeSet {
            width: self.width,
            cubes: self.cubes.union(&other.cubes).copied().collect(),
        }
    }

    pub fn is_subset(&self, other: &CubeSet) -> bool {
        self.cubes.is_subset(&other.cubes)
    }

    pub fn difference(&self, other: &CubeSet) -> CubeSet {
        CubeSet {
            width: self.width,
            cubes: self.cubes.difference(&other.cubes).copied().collect(),
        }
    }

    /// Render one cube as a bitstring in bank order, e.g. `10` for p=1,q=0.
    pub fn bits(width: usize, c: Cube) -> String {
        (0..width)
            .map(|k| if c >> k & 1 == 1 { '1' } else { '0' })
            .collect()
    }

    /// Parse a bank-order bitstring.
    pub fn cube_from_bits(s: &str) -> Option<Cube> {
        let mut c = 0u64;
        for (k, ch) in s.chars().enumerate() {
            match ch {
                '1' => c |= 1 << k,
                '0' => {}
                _ => return None,
            }
        }
        Some(c)
    }

    /// The cube as an interpretation of the predicate symbols.
    pub fn cube_interp(bank: &PredicateBank, c: Cube) -> Interp {
        bank.pred_syms
            .iter()
            .enumerate()
            .map(|(k, p)| (p.clone(), Value::Bool(c >> k & 1 == 1)))
            .collect()
    }

    /// Disjunction of cube conjunctions over the predicate symbols; the
    /// empty set is `false`.
    pub fn formula(&self, bank: &PredicateBank) -> Expr {
        let mut disjuncts = Vec::with_capacity(self.cubes.len());
        for &c in &self.cubes {
            let lits: Vec<Expr> = bank
                .pred_syms
                .iter()
                .enumerate()
                .map(|(k, p)| {
                    let sym = Expr::bool_sym(p.clone());
                    if c >> k & 1 == 1 {
                        sym
                    } else {
                        Expr::not(sym)
                    }
                })
                .collect();
            disjuncts.push(Expr::and(lits));
        }
        Expr::or(disjuncts)
    }
}

/// A set of substitutions for the index symbols; each element is total on
/// the index symbols, mapping them to integer terms over state, index, and
/// input symbols.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SubstitutionSet {
    pub subs: Vec<Substitution>,
}

impl SubstitutionSet {
    pub fn identity(index_syms: &[String]) -> SubstitutionSet {
        let sub: Substitution = index_syms
            .iter()
            .map(|x| (x.clone(), Expr::int_sym(x.clone())))
            .collect();
        SubstitutionSet { subs: vec![sub] }
    }

    pub fn len(&self) -> usize {
        self.subs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subs.is_empty()
    }

    pub fn push_dedup(&mut self, sub: Substitution) {
        if !self.subs.contains(&sub) {
            self.subs.push(sub);
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AbstractionError {
    #[error("the substitution set is empty")]
    EmptySubstitutionSet,
    #[error("scope enumerates {0} index interpretations, over the budget of {1}")]
    ScopeTooLarge(u64, u64),
    #[error("evaluation failed: {0}")]
    Eval(#[from] crate::logic::EvalError),
    #[error("substitution failed: {0}")]
    Subst(#[from] crate::logic::SubstError),
    #[error("type error: {0}")]
    Type(#[from] TypeError),
}

/// Inclusive integer range used by the explicit-scope operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Scope {
    pub lo: i64,
    pub hi: i64,
}

impl Scope {
    pub fn new(lo: i64, hi: i64) -> Scope {
        assert!(lo <= hi, "scope must be nonempty");
        Scope { lo, hi }
    }

    pub fn size(&self) -> u64 {
        (self.hi - self.lo + 1) as u64
    }

    pub fn values(&self) -> impl Iterator<Item = BigInt> + '_ {
        (self.lo..=self.hi).map(BigInt::from)
    }

    pub fn contains(&self, v: &BigInt) -> bool {
        *v >= BigInt::from(self.lo) && *v <= BigInt::from(self.hi)
    }
}

/// Default limit on the number of index interpretations enumerated by the
/// explicit abstraction function.
pub const ENUM_BUDGET: u64 = 1 << 20;

/// Enumerate all assignments of the given symbols to scope values.
pub fn scope_interps<'a>(
    syms: &'a [String],
    sc: Scope,
) -> impl Iterator<Item = Interp> + 'a {
    let n = syms.len() as u32;
    let total = sc.size().checked_pow(n).unwrap_or(u64::MAX);
    (0..total).map(move |mut ix| {
        let mut m = BTreeMap::new();
        for s in syms {
            let v = sc.lo + (ix % sc.size()) as i64;
            ix /= sc.size();
            m.insert(s.clone(), Value::int(v));
        }
        Interp::new(m)
    })
}

/// Abstraction of a single concrete state at finite scope: the cubes
/// obtained by evaluating the predicates under every assignment of the
/// index symbols to scope values. With axioms present, cubes violating an
/// axiom are excluded.
pub fn alpha_explicit(
    s: &Interp,
    bank: &PredicateBank,
    sc: Scope,
) -> Result<CubeSet, AbstractionError> {
    alpha_explicit_budget(s, bank, sc, ENUM_BUDGET)
}

pub fn alpha_explicit_budget(
    s: &Interp,
    bank: &PredicateBank,
    sc: Scope,
    budget: u64,
) -> Result<CubeSet, AbstractionError> {
    let count = sc
        .size()
        .checked_pow(bank.index_syms.len() as u32)
        .unwrap_or(u64::MAX);
    if count > budget {
        return Err(AbstractionError::ScopeTooLarge(count, budget));
    }
    let mut cubes = CubeSet::empty(bank.width());
    'outer: for ix in scope_interps(&bank.index_syms, sc) {
        let env = s.extended(&ix);
        let mut cube: Cube = 0;
        for (k, p) in bank.pred_syms.iter().enumerate() {
            let v = eval(&bank.defs[p], &env)?;
            let b = v.as_bool().ok_or(crate::logic::EvalError::KindMismatch {
                context: p.clone(),
            })?;
            if b {
                cube |= 1 << k;
            } else if bank.axioms.contains(p) {
                // Axiom false here: this cube is outside the abstract
                // state space.
                continue 'outer;
            }
        }
        cubes.insert(cube);
    }
    Ok(cubes)
}

/// Concretization at finite scope: the members of `universe` whose
/// abstraction is contained in `s_a`.
pub fn gamma_explicit(
    s_a: &CubeSet,
    bank: &PredicateBank,
    universe: &[Interp],
    sc: Scope,
) -> Result<Vec<Interp>, AbstractionError> {
    let mut out = Vec::new();
    for s in universe {
        if alpha_explicit(s, bank, sc)?.is_subset(s_a) {
            out.push(s.clone());
        }
    }
    Ok(out)
}

/// Options for the instantiation generator.
#[derive(Debug, Clone, Copy, Default)]
pub struct InstantiationOptions {
    /// Substitute subterm pools into all index symbols at once (full cross
    /// product) instead of one index at a time.
    pub cross_product: bool,
}

/// Candidate substitutions for the index symbols: the identity, plus, for
/// every integer term that appears as an argument of an uninterpreted
/// function or predicate application in a predicate definition or its
/// next-state composition, the substitution sending one index symbol to
/// that term and fixing the others.
pub fn generate_instantiations(
    m: &SystemModel,
    bank: &PredicateBank,
    opts: InstantiationOptions,
) -> SubstitutionSet {
    let mut pool: Vec<Expr> = Vec::new();
    let mut seen: BTreeSet<Expr> = BTreeSet::new();
    let mut add_args = |e: &Expr| {
        let mut args = Vec::new();
        collect_app_args(e, &mut args);
        for a in args {
            // Terms containing lambda variables are not closed instantiations.
            if !a.free_lambda_vars().is_empty() {
                continue;
            }
            let a = normalize(&a);
            if seen.insert(a.clone()) {
                pool.push(a);
            }
        }
    };
    for p in &bank.pred_syms {
        let def = normalize(&bank.defs[p]);
        add_args(&def);
        add_args(&m.compose_next(&def));
    }

    let mut out = SubstitutionSet::identity(&bank.index_syms);
    if bank.index_syms.is_empty() {
        return out;
    }
    if opts.cross_product && bank.index_syms.len() > 1 {
        // Every index independently draws from {itself} + pool.
        let mut choices: Vec<Vec<Expr>> = Vec::new();
        for x in &bank.index_syms {
            let mut c = vec![Expr::int_sym(x.clone())];
            c.extend(pool.iter().cloned());
            choices.push(c);
        }
        let mut counters = vec![0usize; choices.len()];
        loop {
            let sub: Substitution = bank
                .index_syms
                .iter()
                .enumerate()
                .map(|(j, x)| (x.clone(), choices[j][counters[j]].clone()))
                .collect();
            out.push_dedup(sub);
            let mut pos = 0;
            loop {
                counters[pos] += 1;
                if counters[pos] < choices[pos].len() {
                    break;
                }
                counters[pos] = 0;
                pos += 1;
                if pos == counters.len() {
                    return out;
                }
            }
        }
    }
    for x in &bank.index_syms {
        for t in &pool {
            if t == &Expr::int_sym(x.clone()) {
                continue;
            }
            let mut sub: Substitution = bank
                .index_syms
                .iter()
                .map(|y| (y.clone(), Expr::int_sym(y.clone())))
                .collect();
            sub.insert(x.clone(), t.clone());
            out.push_dedup(sub);
        }
    }
    out
}

fn collect_app_args(e: &Expr, out: &mut Vec<Expr>) {
    match e.node() {
        ExprNode::FuncApply(g, args) | ExprNode::PredApply(g, args) => {
            collect_app_args(g, out);
            for a in args {
                out.push(a.clone());
                collect_app_args(a, out);
            }
        }
        ExprNode::Not(a) | ExprNode::PlusConst(a, _) => collect_app_args(a, out),
        ExprNode::And(cs) | ExprNode::Or(cs) => {
            for c in cs {
                collect_app_args(c, out);
            }
        }
        ExprNode::IntEq(l, r) | ExprNode::IntLt(l, r) => {
            collect_app_args(l, out);
            collect_app_args(r, out);
        }
        ExprNode::Ite(c, t, f) => {
            collect_app_args(c, out);
            collect_app_args(t, out);
            collect_app_args(f, out);
        }
        ExprNode::LambdaBool(_, body) | ExprNode::LambdaInt(_, body) => {
            collect_app_args(body, out)
        }
        _ => {}
    }
}

/// The instantiated membership formula of an abstract state set: for each
/// substitution in the set, the cube-set formula with predicate symbols
/// replaced by their definitions and index symbols replaced per the
/// substitution, all conjoined.
pub fn concretization_formula(
    rho: &CubeSet,
    bank: &PredicateBank,
    pi: &SubstitutionSet,
) -> Result<Expr, AbstractionError> {
    if pi.is_empty() {
        return Err(AbstractionError::EmptySubstitutionSet);
    }
    let preds: BTreeSet<String> = bank.pred_syms.iter().cloned().collect();
    let indices: BTreeSet<String> = bank.index_syms.iter().cloned().collect();
    let with_defs = substitute(&rho.formula(bank), &bank.defs, &preds)?;
    let mut conjuncts = Vec::with_capacity(pi.len());
    for sub in &pi.subs {
        conjuncts.push(substitute(&with_defs, sub, &indices)?);
    }
    Ok(Expr::and(conjuncts))
}
