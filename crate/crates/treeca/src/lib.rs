//! Cellular automata on the unoriented k-regular tree.
//!
//! A CA here is a local rule that commutes with *every* automorphism of the
//! tree, so its input is not a labeled neighborhood but the isomorphism
//! class of one: a canonical rooted ball. This crate provides the
//! word-address model of the tree ([`topology`]), canonical balls and rule
//! tables over them ([`rules`]), finite-support simulation with an
//! independent truncated-tree oracle ([`simulation`]), the level-function
//! quotient onto one-dimensional CA ([`quotient`]), and a census /
//! verification layer with a CLI ([`lab`]).

pub mod error;
pub mod lab;
pub mod quotient;
pub mod rules;
pub mod simulation;
pub mod topology;

pub use error::{Error, Result};
