//! The free algebra of the variety with two binary operations kept eps-close:
//! `sigma1(x0, x1) =_eps sigma2(x0, x1)` with `0 < eps < 1`.
//!
//! Its metric has a closed-form recursion: two leaves are at their base
//! distance; a leaf and a composite are infinitely far; two composites with
//! child-distance maximum `m` are at `m` when the root symbols agree and at
//! `eps + m` otherwise. Two terms are at finite distance iff they share the
//! same tree skeleton (leaf positions).

use crate::dist::INF;
use crate::error::{Error, Result};
use crate::space::{MetricSpace, PseudoSpace};
use crate::term::{Signature, Term, TermUniverse};

/// The closed-form free metric for the two-eps-close-operations variety.
pub fn dhat(t: &Term, t2: &Term, x: &MetricSpace, eps: f64) -> Result<f64> {
    check_eps(eps)?;
    dhat_rec(t, t2, x, eps)
}

fn dhat_rec(t: &Term, t2: &Term, x: &MetricSpace, eps: f64) -> Result<f64> {
    match (t, t2) {
        (Term::Leaf(a), Term::Leaf(b)) => x.dist_by_name(a, b),
        (Term::Node(s, cs), Term::Node(s2, cs2)) if cs.len() == 2 && cs2.len() == 2 => {
            let m = f64::max(
                dhat_rec(&cs[0], &cs2[0], x, eps)?,
                dhat_rec(&cs[1], &cs2[1], x, eps)?,
            );
            Ok(if s == s2 { m } else { eps + m })
        }
        _ => Ok(INF),
    }
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(Error::EpsOutOfRange(eps))
    }
}

/// The metric materialized over a bounded universe, with term texts as labels.
pub fn dhat_space(universe: &TermUniverse, x: &MetricSpace, eps: f64) -> Result<PseudoSpace> {
    check_eps(eps)?;
    let n = universe.len();
    let mut d = vec![0.0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let v = dhat_rec(universe.term(i), universe.term(j), x, eps)?;
            d[i * n + j] = v;
            d[j * n + i] = v;
        }
    }
    let points = universe.terms.iter().map(|t| t.to_string()).collect();
    PseudoSpace::from_table(points, d)
}

/// A term's skeleton: the tree shape with leaves as holes and operation
/// symbols erased. Terms at finite two-ops distance share a skeleton, so
/// skeleton groups partition any universe into blocks that are infinitely
/// far apart.
pub fn skeleton_key(t: &Term) -> String {
    match t {
        Term::Leaf(_) => "_".to_string(),
        Term::Node(_, cs) => {
            let mut out = String::from("(");
            for c in cs {
                out.push_str(&skeleton_key(c));
            }
            out.push(')');
            out
        }
    }
}

/// The free algebra on `X`: all terms over the two binary symbols, with the
/// closed-form metric queried on demand (no truncation needed).
#[derive(Debug, Clone)]
pub struct TwoOpsModel {
    pub base: MetricSpace,
    pub eps: f64,
}

pub fn two_ops_free(x: &MetricSpace, eps: f64) -> Result<TwoOpsModel> {
    check_eps(eps)?;
    Ok(TwoOpsModel {
        base: x.clone(),
        eps,
    })
}

impl TwoOpsModel {
    pub fn signature(&self) -> Signature {
        Signature::two_binary()
    }

    pub fn dist(&self, t: &Term, t2: &Term) -> Result<f64> {
        dhat_rec(t, t2, &self.base, self.eps)
    }

    pub fn unit(&self, point: &str) -> Result<Term> {
        self.base.index_of(point)?;
        Ok(Term::leaf(point))
    }

    /// Tree-tupling: the operations of the free algebra.
    pub fn op(&self, symbol: &str, left: Term, right: Term) -> Result<Term> {
        self.signature().arity(symbol)?;
        Ok(Term::node(symbol, vec![left, right]))
    }

    /// The induced map of a base map `f` (leaf relabeling).
    pub fn lift(&self, f: &dyn Fn(&str) -> String, t: &Term) -> Term {
        t.map_leaves(&|leaf| Term::leaf(f(leaf)))
    }
}
