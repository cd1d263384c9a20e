//! Exact computations for atomic monoids and their monoid algebras over
//! prime fields.

pub mod algebra;
pub mod arith;
pub mod ffpoly;
pub mod lex;
pub mod puiseux;
pub mod rational;
pub mod verify;

pub use rational::{Rational, Valuation};
