//! Invariant generation for infinite-state transition systems by predicate
//! abstraction with indexed predicates.
//!
//! The pipeline: a transition system over Boolean, integer, function, and
//! predicate state ([`system`]) is abstracted through a bank of predicates
//! with free index variables ([`abstraction`]). Universal quantification
//! over the indices is approximated by a finite substitution set; each
//! reachability step builds a quantifier-free formula, encodes it as
//! propositional clauses ([`encoder`]), and enumerates its solutions over
//! the predicate variables with a SAT solver ([`sat`]). The fixpoint is the
//! strongest universally quantified invariant expressible over the
//! predicates, and safety properties are checked against it ([`reach`]).
//! An explicit-state bounded [`oracle`] cross-checks the symbolic engine.

pub mod abstraction;
pub mod encoder;
pub mod logic;
pub mod model;
pub mod oracle;
pub mod reach;
pub mod sat;
pub mod system;
