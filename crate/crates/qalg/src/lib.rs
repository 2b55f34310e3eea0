//! Free quantitative algebras over extended metric spaces.
//!
//! The crate provides:
//! - extended (pseudo)metric spaces with products, coproducts, meets of
//!   pseudometrics, and metric reflections ([`space`]);
//! - term trees over finitary signatures with the free-algebra metric `d*`
//!   ([`term`]);
//! - finite quantitative algebras and varieties presented by (quantitative)
//!   equations ([`algebra`], [`variety`]);
//! - free algebras of several concrete varieties in closed form and by
//!   bounded construction ([`free`]);
//! - directed chains and colimit distances ([`chain`]);
//! - the strong-finitarity criterion and the two-close-operations
//!   counter-example to it ([`finitary`]).
//!
//! See the `examples/` directory for one runnable walkthrough per capability.

pub mod algebra;
pub mod chain;
pub mod dist;
pub mod error;
pub mod finitary;
pub mod free;
pub mod report;
pub mod space;
pub mod term;
pub mod variety;

pub use error::{Error, Result};
