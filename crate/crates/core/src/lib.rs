//! Context-free grammars of arrows over free categories.
//!
//! A grammar is a species map from a finite pointed species into the
//! operad of spliced arrows of a free category. The crate provides the
//! spliced-arrow operad, a generalized CYK parser with packed forests,
//! finite-state automata as generator-to-generator functors, the pullback
//! of a grammar along an automaton, and the contour-category
//! decomposition of a grammar into a universal grammar, a regular language
//! and a functor. Every construction can be checked against the
//! brute-force enumerations in [`oracle`].

pub mod automaton;
pub mod cli;
pub mod contour;
pub mod error;
pub mod exec;
pub mod fixtures;
pub mod freecat;
pub mod grammar;
pub mod oracle;
pub mod parser;
pub mod product;
pub mod species;
pub mod spliced;

pub use error::{Error, Result};
