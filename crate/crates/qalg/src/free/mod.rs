//! Realized free-algebra constructions: closed forms for monoids,
//! semilattices, exceptions, small spaces and monoid actions; the term monad;
//! and generic bounded constructions for ordinary-equation and unary
//! varieties, plus the two-close-binary-operations variety.

pub mod closed;
pub mod generic;
pub mod two_ops;

pub use closed::{
    exception_monad, finite_hausdorff, monoid_action_monad, small_space_monad, term_monad,
    word_monoid, ActionModel, ExceptionModel, HausdorffModel, SmallSpaceModel, TermModel,
    WordMonoid,
};
pub use generic::{
    ordinary_free, ordinary_free_filtered, unary_free, CongruenceOracle, MonoidFlatten,
    OrdinaryFreeModel, SemilatticeSet, TrivialCongruence, UnaryFreeModel,
};
pub use two_ops::{dhat, dhat_space, skeleton_key, two_ops_free, TwoOpsModel};

use crate::error::Result;
use crate::space::{MetricSpace, PseudoSpace};
use crate::term::{dstar, TermUniverse};

/// The free-algebra metric `d*` materialized over a bounded universe, with
/// term texts as point labels.
pub fn dstar_space(universe: &TermUniverse, x: &MetricSpace) -> Result<PseudoSpace> {
    let n = universe.len();
    let mut d = vec![0.0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let v = dstar(universe.term(i), universe.term(j), x)?;
            d[i * n + j] = v;
            d[j * n + i] = v;
        }
    }
    let points = universe.terms.iter().map(|t| t.to_string()).collect();
    PseudoSpace::from_table(points, d)
}
