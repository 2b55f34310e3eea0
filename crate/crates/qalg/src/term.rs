//! Finitary signatures and term trees, with the free-algebra metric `d*`.
//!
//! Text syntax is s-expressions: `(sigma1 (sigma2 a a) (sigma1 b b))`. Leaves
//! are bare identifiers; nullary symbols are written `(c)` with an empty
//! argument list, distinct from leaves. Formal variables for equations live in
//! the reserved namespace `x0`, `x1`, ...

use crate::dist::INF;
use crate::error::{Error, Result};
use crate::space::MetricSpace;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// Operation symbols with their arities.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub ops: BTreeMap<String, usize>,
}

impl Signature {
    pub fn new(ops: impl IntoIterator<Item = (&'static str, usize)>) -> Self {
        Signature {
            ops: ops
                .into_iter()
                .map(|(name, arity)| (name.to_string(), arity))
                .collect(),
        }
    }

    pub fn arity(&self, symbol: &str) -> Result<usize> {
        self.ops
            .get(symbol)
            .copied()
            .ok_or_else(|| Error::UnknownSymbol(symbol.to_string()))
    }

    pub fn max_arity(&self) -> usize {
        self.ops.values().copied().max().unwrap_or(0)
    }

    /// The two-binary-symbol signature of the eps-close-operations variety.
    pub fn two_binary() -> Self {
        Signature::new([("sigma1", 2), ("sigma2", 2)])
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Leaf(String),
    Node(String, Vec<Term>),
}

impl Term {
    pub fn leaf(name: impl Into<String>) -> Term {
        Term::Leaf(name.into())
    }

    pub fn node(symbol: impl Into<String>, children: Vec<Term>) -> Term {
        Term::Node(symbol.into(), children)
    }

    /// Depth is 0 for leaves and constants, 1 + max child depth otherwise.
    pub fn depth(&self) -> usize {
        match self {
            Term::Leaf(_) => 0,
            Term::Node(_, children) => {
                children.iter().map(Term::depth).max().map_or(0, |d| d + 1)
            }
        }
    }

    pub fn leaves(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Term::Leaf(x) => out.push(x),
            Term::Node(_, children) => {
                for c in children {
                    c.collect_leaves(out);
                }
            }
        }
    }

    /// Relabels every leaf through `f`.
    pub fn map_leaves(&self, f: &impl Fn(&str) -> Term) -> Term {
        match self {
            Term::Leaf(x) => f(x),
            Term::Node(s, children) => Term::Node(
                s.clone(),
                children.iter().map(|c| c.map_leaves(f)).collect(),
            ),
        }
    }

    pub fn check_arities(&self, sig: &Signature) -> Result<()> {
        if let Term::Node(symbol, children) = self {
            let expected = sig.arity(symbol)?;
            if children.len() != expected {
                return Err(Error::ArityMismatch {
                    symbol: symbol.clone(),
                    expected,
                    found: children.len(),
                });
            }
            for c in children {
                c.check_arities(sig)?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Leaf(x) => write!(f, "{x}"),
            Term::Node(s, children) => {
                write!(f, "({s}")?;
                for c in children {
                    write!(f, " {c}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Reserved formal variables `x0`, `x1`, ... used in equations.
pub fn formal_var(i: usize) -> Term {
    Term::Leaf(format!("x{i}"))
}

pub fn formal_var_index(name: &str) -> Option<usize> {
    name.strip_prefix('x')
        .filter(|rest| !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()))
        .and_then(|rest| rest.parse().ok())
}

/// Two terms are similar when they share the same tree shape and node labels,
/// differing only in leaves.
pub fn similar(t: &Term, t2: &Term) -> bool {
    match (t, t2) {
        (Term::Leaf(_), Term::Leaf(_)) => true,
        (Term::Node(s, cs), Term::Node(s2, cs2)) => {
            s == s2 && cs.len() == cs2.len() && cs.iter().zip(cs2).all(|(a, b)| similar(a, b))
        }
        _ => false,
    }
}

/// The free-algebra metric: leaf distance in `x` for two leaves, max over
/// child distances for matching composites, infinity otherwise.
pub fn dstar(t: &Term, t2: &Term, x: &MetricSpace) -> Result<f64> {
    match (t, t2) {
        (Term::Leaf(a), Term::Leaf(b)) => x.dist_by_name(a, b),
        (Term::Node(s, cs), Term::Node(s2, cs2)) if s == s2 && cs.len() == cs2.len() => {
            let mut m = 0.0f64;
            for (a, b) in cs.iter().zip(cs2) {
                m = m.max(dstar(a, b, x)?);
                if m.is_infinite() {
                    break;
                }
            }
            Ok(m)
        }
        _ => Ok(INF),
    }
}

/// Substitutes a term `t` over formal variables `x0..x(n-1)` for every
/// occurrence of the symbol `gamma` of arity `n`.
pub fn substitute_symbol(s: &Term, gamma: &str, t: &Term, arity: usize) -> Result<Term> {
    for leaf in t.leaves() {
        match formal_var_index(leaf) {
            Some(i) if i < arity => {}
            _ => {
                return Err(Error::Invalid(format!(
                    "replacement term uses `{leaf}`, expected formal variables x0..x{}",
                    arity.saturating_sub(1)
                )))
            }
        }
    }
    Ok(substitute_symbol_unchecked(s, gamma, t, arity))
}

fn substitute_symbol_unchecked(s: &Term, gamma: &str, t: &Term, arity: usize) -> Term {
    match s {
        Term::Leaf(_) => s.clone(),
        Term::Node(symbol, children) => {
            let subst: Vec<Term> = children
                .iter()
                .map(|c| substitute_symbol_unchecked(c, gamma, t, arity))
                .collect();
            if symbol == gamma && children.len() == arity {
                t.map_leaves(&|leaf| {
                    let i = formal_var_index(leaf).expect("checked formal variable");
                    subst[i].clone()
                })
            } else {
                Term::Node(symbol.clone(), subst)
            }
        }
    }
}

// --- s-expression parser ---------------------------------------------------

struct Parser<'a> {
    input: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            at: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.input.len() && self.input[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.input.get(self.pos).copied()
    }

    fn ident(&mut self) -> Result<String> {
        let start = self.pos;
        while let Some(b) = self.peek() {
            if b.is_ascii_whitespace() || b == b'(' || b == b')' {
                break;
            }
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error("expected an identifier"));
        }
        Ok(String::from_utf8_lossy(&self.input[start..self.pos]).into_owned())
    }

    fn term(&mut self) -> Result<Term> {
        self.skip_ws();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                self.skip_ws();
                let symbol = self.ident()?;
                let mut children = Vec::new();
                loop {
                    self.skip_ws();
                    match self.peek() {
                        Some(b')') => {
                            self.pos += 1;
                            break;
                        }
                        Some(_) => children.push(self.term()?),
                        None => return Err(self.error("unbalanced parenthesis")),
                    }
                }
                Ok(Term::Node(symbol, children))
            }
            Some(b')') => Err(self.error("unexpected `)`")),
            Some(_) => Ok(Term::Leaf(self.ident()?)),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

/// Parses a term without arity checking (used where no signature is fixed).
pub fn parse_term_raw(input: &str) -> Result<Term> {
    let mut p = Parser {
        input: input.as_bytes(),
        pos: 0,
    };
    let t = p.term()?;
    p.skip_ws();
    if p.pos != p.input.len() {
        return Err(p.error("trailing input after term"));
    }
    Ok(t)
}

/// Strict parse: arity mismatches are rejected at parse time.
pub fn parse_term(input: &str, sig: &Signature) -> Result<Term> {
    let t = parse_term_raw(input)?;
    t.check_arities(sig)?;
    Ok(t)
}

// --- bounded term universes ------------------------------------------------

pub const DEFAULT_UNIVERSE_CAP: u128 = 1_000_000;

/// Size cap for enumerated universes; `QALG_UNIVERSE_CAP` overrides.
pub fn universe_cap() -> u128 {
    std::env::var("QALG_UNIVERSE_CAP")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_UNIVERSE_CAP)
}

/// Number of terms of depth <= `max_depth` over `base_size` leaves, by the
/// counting recurrence; saturates at `u128::MAX`.
pub fn count_terms(base_size: usize, sig: &Signature, max_depth: usize) -> u128 {
    let nullaries = sig.ops.values().filter(|&&a| a == 0).count() as u128;
    let mut count = (base_size as u128).saturating_add(nullaries);
    for _ in 0..max_depth {
        let mut next = (base_size as u128).saturating_add(nullaries);
        for &arity in sig.ops.values() {
            if arity > 0 {
                let mut tuples = 1u128;
                for _ in 0..arity {
                    tuples = tuples.saturating_mul(count);
                }
                next = next.saturating_add(tuples);
            }
        }
        count = next;
    }
    count
}

/// All terms over the given leaves, of depth <= `max_depth`, with subterm
/// closure and a deterministic order (by depth level, then symbol, then
/// child order).
#[derive(Debug, Clone)]
pub struct TermUniverse {
    pub signature: Signature,
    pub max_depth: usize,
    pub terms: Vec<Term>,
    index: BTreeMap<Term, usize>,
}

impl TermUniverse {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn index_of(&self, t: &Term) -> Option<usize> {
        self.index.get(t).copied()
    }

    pub fn term(&self, i: usize) -> &Term {
        &self.terms[i]
    }
}

pub fn enumerate(
    base: &[String],
    sig: &Signature,
    max_depth: usize,
    cap: u128,
) -> Result<TermUniverse> {
    let projected = count_terms(base.len(), sig, max_depth);
    if projected > cap {
        return Err(Error::UniverseCap { projected, cap });
    }
    let mut terms: Vec<Term> = base.iter().map(|p| Term::leaf(p.clone())).collect();
    for (symbol, &arity) in &sig.ops {
        if arity == 0 {
            terms.push(Term::node(symbol.clone(), vec![]));
        }
    }
    for level in 0..max_depth {
        // composites of depth exactly level + 1: every child was built already
        // and the deepest child has depth == level
        let prefix = terms.len();
        if prefix == 0 {
            break;
        }
        let depths: Vec<usize> = terms.iter().map(Term::depth).collect();
        for (symbol, &arity) in &sig.ops {
            if arity == 0 {
                continue;
            }
            let mut tuple = vec![0usize; arity];
            'tuples: loop {
                if tuple.iter().any(|&i| depths[i] == level) {
                    let children = tuple.iter().map(|&i| terms[i].clone()).collect();
                    terms.push(Term::node(symbol.clone(), children));
                }
                // advance the mixed-radix counter over child indices
                for k in (0..arity).rev() {
                    tuple[k] += 1;
                    if tuple[k] < prefix {
                        continue 'tuples;
                    }
                    tuple[k] = 0;
                }
                break;
            }
        }
        if terms.len() == prefix {
            break;
        }
    }
    let index = terms
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, t)| (t, i))
        .collect();
    Ok(TermUniverse {
        signature: sig.clone(),
        max_depth,
        terms,
        index,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::MetricSpace;

    fn sig2() -> Signature {
        Signature::two_binary()
    }

    fn t(s: &str) -> Term {
        parse_term(s, &sig2()).unwrap()
    }

    fn ab1() -> MetricSpace {
        MetricSpace::pair("a", "b", 1.0).unwrap()
    }

    #[test]
    fn depth_of_leaf_and_composites() {
        assert_eq!(Term::leaf("a").depth(), 0);
        assert_eq!(t("(sigma1 a b)").depth(), 1);
        assert_eq!(t("(sigma1 (sigma2 a a) (sigma1 b b))").depth(), 2);
        let constant = Term::node("e", vec![]);
        assert_eq!(constant.depth(), 0);
    }

    #[test]
    fn similarity_is_shape_and_labels() {
        let u = t("(sigma1 a b)");
        assert!(similar(&u, &u));
        assert!(similar(&t("(sigma1 a b)"), &t("(sigma1 b b)")));
        assert!(!similar(&t("(sigma1 a b)"), &t("(sigma2 a b)")));
    }

    #[test]
    fn dstar_base_and_recursion() {
        let x = ab1();
        assert_eq!(dstar(&Term::leaf("a"), &Term::leaf("b"), &x).unwrap(), 1.0);
        assert_eq!(
            dstar(&t("(sigma1 a b)"), &t("(sigma2 a b)"), &x).unwrap(),
            INF
        );
        // witness pair from the two-ops counter-example: s1 vs t'
        assert_eq!(
            dstar(
                &t("(sigma1 (sigma2 a a) (sigma2 b b))"),
                &t("(sigma1 (sigma2 b b) (sigma2 b b))"),
                &x
            )
            .unwrap(),
            1.0
        );
    }

    #[test]
    fn dstar_finite_implies_similar_same_depth() {
        let x = ab1();
        let u = enumerate(
            &["a".to_string(), "b".to_string()],
            &sig2(),
            2,
            universe_cap(),
        )
        .unwrap();
        for a in &u.terms {
            for b in &u.terms {
                let d = dstar(a, b, &x).unwrap();
                if d.is_finite() {
                    assert!(similar(a, b));
                    assert_eq!(a.depth(), b.depth());
                }
            }
        }
    }

    #[test]
    fn substitution_examples() {
        let gamma = "gamma";
        // leaf is fixed
        let s = Term::leaf("a");
        assert_eq!(
            substitute_symbol(&s, gamma, &formal_var(0), 2).unwrap(),
            s
        );
        // projection
        let s = Term::node(gamma, vec![Term::leaf("a"), Term::leaf("b")]);
        assert_eq!(
            substitute_symbol(&s, gamma, &formal_var(0), 2).unwrap(),
            Term::leaf("a")
        );
        // swap into a different symbol: gamma(a, gamma(b, c)) -> sigma(sigma(c, b), a)
        let swap = Term::node("sigma", vec![formal_var(1), formal_var(0)]);
        let s = Term::node(
            gamma,
            vec![
                Term::leaf("a"),
                Term::node(gamma, vec![Term::leaf("b"), Term::leaf("c")]),
            ],
        );
        let expect = parse_term_raw("(sigma (sigma c b) a)").unwrap();
        assert_eq!(substitute_symbol(&s, gamma, &swap, 2).unwrap(), expect);
    }

    #[test]
    fn substitution_rejects_stray_variables() {
        let bad = Term::node("sigma", vec![formal_var(0), formal_var(5)]);
        let s = Term::node("gamma", vec![Term::leaf("a"), Term::leaf("b")]);
        assert!(substitute_symbol(&s, "gamma", &bad, 2).is_err());
    }

    #[test]
    fn parser_rejects_arity_mismatch() {
        assert!(parse_term("(sigma1 a)", &sig2()).is_err());
        assert!(parse_term("(sigma1 a b c)", &sig2()).is_err());
        assert!(parse_term("(sigma1 a b", &sig2()).is_err());
        assert!(parse_term("(unknown a b)", &sig2()).is_err());
    }

    #[test]
    fn parser_distinguishes_constants_from_leaves() {
        let sig = Signature::new([("e", 0)]);
        assert_eq!(parse_term("(e)", &sig).unwrap(), Term::node("e", vec![]));
        assert_eq!(parse_term("e", &sig).unwrap(), Term::leaf("e"));
    }

    #[test]
    fn display_roundtrip() {
        let s = "(sigma1 (sigma2 a a) (sigma1 b b))";
        assert_eq!(t(s).to_string(), s);
    }

    #[test]
    fn universe_counts() {
        let base = vec!["a".to_string(), "b".to_string()];
        assert_eq!(enumerate(&base, &sig2(), 0, 100).unwrap().len(), 2);
        assert_eq!(enumerate(&base, &sig2(), 1, 100).unwrap().len(), 10);
        let u = enumerate(&base, &sig2(), 2, 1000).unwrap();
        assert_eq!(u.len(), 202);
        assert_eq!(count_terms(2, &sig2(), 2), 202);
        // closed under subterms, deterministic index
        for t in &u.terms {
            if let Term::Node(_, children) = t {
                for c in children {
                    assert!(u.index_of(c).is_some());
                }
            }
        }
    }

    #[test]
    fn universe_cap_refusal() {
        let base = vec!["a".to_string(), "b".to_string()];
        let err = enumerate(&base, &sig2(), 4, 1_000_000).unwrap_err();
        match err {
            Error::UniverseCap { projected, .. } => assert!(projected > 1_000_000),
            other => panic!("unexpected: {other}"),
        }
    }

    #[test]
    fn empty_base_universe() {
        let u = enumerate(&[], &sig2(), 3, 100).unwrap();
        assert!(u.is_empty());
    }
}
