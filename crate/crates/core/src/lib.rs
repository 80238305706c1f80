//! Two-sorted hypersequent calculi for fifteen normal modal logics.
//!
//! The crate is organised bottom-up: [`syntax`] (formulas, sequents,
//! hypersequents, parser and printer), [`calculus`] (rule schemas and the
//! single-step kernel), [`checker`] (proof trees, derived rules, axiom
//! templates, Hilbert bridge), [`semantics`] (finite Kripke oracle),
//! [`search`] (bounded backward prover) and [`transform`] (proof
//! transformations up to cut-elimination).

pub mod calculus;
pub mod checker;
pub mod corpus;
pub mod transform;
pub mod search;
pub mod semantics;
pub mod syntax;
