//! Generic bounded free-algebra constructions.
//!
//! For varieties of ordinary equations the free metric is the infimum over
//! chains that alternate free congruence steps with paid `d*` steps. With a
//! decidable congruence this collapses to a shortest-path problem on
//! congruence classes, where the edge between two classes is the least `d*`
//! distance over similar term pairs drawn from them. That least distance is
//! computed by a dynamic program on class pairs: since the `d*` of composite
//! pairs is the maximum over child pairs and max is monotone, keeping only
//! the minimum per class pair is exact.
//!
//! For unary varieties the free metric is the meet of `d*` with the
//! entailment pseudometric, followed by metric reflection; entailment is
//! approximated from above by bounded rewriting.

use crate::error::{Error, Result};
use crate::space::{meet, metric_reflection, shortest_path_closure, MetricSpace, PseudoSpace};
use crate::term::{enumerate, universe_cap, Term};
use crate::variety::{entailment_space, VarietyPresentation};
use crate::dist::INF;
use std::collections::HashMap;

/// Decides the congruence generated by a set of ordinary equations, by
/// mapping every term to a canonical normal form. Two terms are congruent
/// iff their normal forms are structurally equal.
pub trait CongruenceOracle {
    fn normal_form(&self, t: &Term) -> Term;
}

/// Monoid congruence: flatten `mul` to the word of leaves, erasing `e`
/// units. Normal form: `(e)` for the empty word, the leaf itself for one
/// letter, a right-nested `mul` chain otherwise.
#[derive(Debug, Clone, Default)]
pub struct MonoidFlatten;

impl MonoidFlatten {
    pub fn word(t: &Term) -> Vec<String> {
        let mut letters = Vec::new();
        Self::collect(t, &mut letters);
        letters
    }

    fn collect(t: &Term, out: &mut Vec<String>) {
        match t {
            Term::Leaf(x) => out.push(x.clone()),
            Term::Node(s, cs) if s == "e" && cs.is_empty() => {}
            Term::Node(s, cs) if s == "mul" && cs.len() == 2 => {
                Self::collect(&cs[0], out);
                Self::collect(&cs[1], out);
            }
            // unknown structure is left opaque: it is its own letter
            Term::Node(_, _) => out.push(t.to_string()),
        }
    }

    fn rebuild(letters: &[String]) -> Term {
        match letters {
            [] => Term::node("e", vec![]),
            [x] => Term::leaf(x.clone()),
            [x, rest @ ..] => Term::node("mul", vec![Term::leaf(x.clone()), Self::rebuild(rest)]),
        }
    }
}

impl CongruenceOracle for MonoidFlatten {
    fn normal_form(&self, t: &Term) -> Term {
        Self::rebuild(&Self::word(t))
    }
}

/// Semilattice congruence: flatten `join` to the set of leaves, erasing
/// `bot`. Normal form: `(bot)` for the empty set, otherwise a right-nested
/// `join` chain over the sorted distinct leaves.
#[derive(Debug, Clone, Default)]
pub struct SemilatticeSet;

impl SemilatticeSet {
    pub fn leaf_set(t: &Term) -> Vec<String> {
        let mut set = std::collections::BTreeSet::new();
        Self::collect(t, &mut set);
        set.into_iter().collect()
    }

    fn collect(t: &Term, out: &mut std::collections::BTreeSet<String>) {
        match t {
            Term::Leaf(x) => {
                out.insert(x.clone());
            }
            Term::Node(s, cs) if s == "bot" && cs.is_empty() => {}
            Term::Node(s, cs) if s == "join" && cs.len() == 2 => {
                Self::collect(&cs[0], out);
                Self::collect(&cs[1], out);
            }
            Term::Node(_, _) => {
                out.insert(t.to_string());
            }
        }
    }

    fn rebuild(leaves: &[String]) -> Term {
        match leaves {
            [] => Term::node("bot", vec![]),
            [x] => Term::leaf(x.clone()),
            [x, rest @ ..] => {
                Term::node("join", vec![Term::leaf(x.clone()), Self::rebuild(rest)])
            }
        }
    }
}

impl CongruenceOracle for SemilatticeSet {
    fn normal_form(&self, t: &Term) -> Term {
        Self::rebuild(&Self::leaf_set(t))
    }
}

/// The identity oracle: the trivial congruence of an equation-free variety.
#[derive(Debug, Clone, Default)]
pub struct TrivialCongruence;

impl CongruenceOracle for TrivialCongruence {
    fn normal_form(&self, t: &Term) -> Term {
        t.clone()
    }
}

/// Free algebra of an ordinary-equation variety, restricted to congruence
/// classes reachable within `max_depth` compositions. Distances are upper
/// bounds on the free metric, exact when optimal chains fit the budget.
pub struct OrdinaryFreeModel {
    pub presentation: VarietyPresentation,
    pub base: MetricSpace,
    pub max_depth: usize,
    oracle: Box<dyn CongruenceOracle>,
    pub classes: Vec<Term>,
    index: HashMap<Term, usize>,
    /// The chain-infimum pseudometric on classes.
    pub space: PseudoSpace,
    pub reflection: MetricSpace,
    pub class_to_reflected: Vec<usize>,
}

impl OrdinaryFreeModel {
    pub fn class_of(&self, t: &Term) -> Result<usize> {
        let nf = self.oracle.normal_form(t);
        self.index.get(&nf).copied().ok_or_else(|| {
            Error::Invalid(format!(
                "class of `{t}` (normal form `{nf}`) is outside the bounded construction"
            ))
        })
    }

    /// Distance between the classes of two terms.
    pub fn dist(&self, t: &Term, t2: &Term) -> Result<f64> {
        Ok(self.space.dist(self.class_of(t)?, self.class_of(t2)?))
    }

    pub fn reflected_dist(&self, t: &Term, t2: &Term) -> Result<f64> {
        let a = self.class_to_reflected[self.class_of(t)?];
        let b = self.class_to_reflected[self.class_of(t2)?];
        Ok(self.reflection.dist(a, b))
    }
}

pub fn ordinary_free(
    v: &VarietyPresentation,
    x: &MetricSpace,
    oracle: Box<dyn CongruenceOracle>,
    max_depth: usize,
) -> Result<OrdinaryFreeModel> {
    ordinary_free_filtered(v, x, oracle, max_depth, &|_| true)
}

/// As [`ordinary_free`], keeping only normal forms accepted by `keep`.
///
/// Soundness requires that the congruence never shrinks a normal form under
/// composition (true for the shipped flatten oracles, whose normal-form
/// sizes add): then no chain between kept classes passes through a dropped
/// one, and restricting the computation to the kept block is exact.
pub fn ordinary_free_filtered(
    v: &VarietyPresentation,
    x: &MetricSpace,
    oracle: Box<dyn CongruenceOracle>,
    max_depth: usize,
    keep: &dyn Fn(&Term) -> bool,
) -> Result<OrdinaryFreeModel> {
    v.require_ordinary()?;
    const CLASS_CAP: usize = 20_000;
    const COMBO_CAP: u128 = 50_000_000;

    // congruence classes reachable within the depth budget, represented by
    // their normal forms; composition factors through normal forms
    let mut classes: Vec<Term> = Vec::new();
    let mut index: HashMap<Term, usize> = HashMap::new();
    let intern = |nf: Term, classes: &mut Vec<Term>, index: &mut HashMap<Term, usize>| {
        if let Some(&i) = index.get(&nf) {
            return i;
        }
        classes.push(nf.clone());
        index.insert(nf, classes.len() - 1);
        classes.len() - 1
    };
    for p in x.points() {
        let nf = oracle.normal_form(&Term::leaf(p.clone()));
        if keep(&nf) {
            intern(nf, &mut classes, &mut index);
        }
    }
    for (symbol, &arity) in &v.signature.ops {
        if arity == 0 {
            let nf = oracle.normal_form(&Term::node(symbol.clone(), vec![]));
            if keep(&nf) {
                intern(nf, &mut classes, &mut index);
            }
        }
    }
    for _ in 0..max_depth {
        let frozen = classes.clone();
        for (symbol, &arity) in &v.signature.ops {
            if arity == 0 {
                continue;
            }
            let mut tuple = vec![0usize; arity];
            'tuples: loop {
                let children: Vec<Term> = tuple.iter().map(|&i| frozen[i].clone()).collect();
                let nf = oracle.normal_form(&Term::node(symbol.clone(), children));
                if keep(&nf) {
                    intern(nf, &mut classes, &mut index);
                    if classes.len() > CLASS_CAP {
                        return Err(Error::UniverseCap {
                            projected: classes.len() as u128,
                            cap: CLASS_CAP as u128,
                        });
                    }
                }
                for k in (0..arity).rev() {
                    tuple[k] += 1;
                    if tuple[k] < frozen.len() {
                        continue 'tuples;
                    }
                    tuple[k] = 0;
                }
                break;
            }
        }
    }

    // least d* between similar term pairs per class pair, by depth level
    let mut states: HashMap<(usize, usize), f64> = HashMap::new();
    let relax = |key: (usize, usize), v: f64, states: &mut HashMap<(usize, usize), f64>| {
        let slot = states.entry(key).or_insert(INF);
        if v < *slot {
            *slot = v;
        }
    };
    for i in 0..x.len() {
        for j in 0..x.len() {
            let ci = index.get(&oracle.normal_form(&Term::leaf(x.point(i).to_string())));
            let cj = index.get(&oracle.normal_form(&Term::leaf(x.point(j).to_string())));
            if let (Some(&ci), Some(&cj)) = (ci, cj) {
                relax((ci, cj), x.dist(i, j), &mut states);
            }
        }
    }
    for (symbol, &arity) in &v.signature.ops {
        if arity == 0 {
            let nf = oracle.normal_form(&Term::node(symbol.clone(), vec![]));
            if let Some(&c) = index.get(&nf) {
                relax((c, c), 0.0, &mut states);
            }
        }
    }
    for _ in 0..max_depth {
        let entries: Vec<((usize, usize), f64)> =
            states.iter().map(|(&k, &v)| (k, v)).collect();
        for (symbol, &arity) in &v.signature.ops {
            if arity == 0 {
                continue;
            }
            let combos = (entries.len() as u128).pow(arity as u32);
            if combos > COMBO_CAP {
                return Err(Error::UniverseCap {
                    projected: combos,
                    cap: COMBO_CAP,
                });
            }
            let mut tuple = vec![0usize; arity];
            'tuples: loop {
                if entries.is_empty() {
                    break;
                }
                let mut val = 0.0f64;
                let mut left = Vec::with_capacity(arity);
                let mut right = Vec::with_capacity(arity);
                for &e in &tuple {
                    let ((l, r), v) = entries[e];
                    val = val.max(v);
                    left.push(classes[l].clone());
                    right.push(classes[r].clone());
                }
                let cl = index.get(&oracle.normal_form(&Term::node(symbol.clone(), left)));
                let cr = index.get(&oracle.normal_form(&Term::node(symbol.clone(), right)));
                if let (Some(&cl), Some(&cr)) = (cl, cr) {
                    relax((cl, cr), val, &mut states);
                }
                for k in (0..arity).rev() {
                    tuple[k] += 1;
                    if tuple[k] < entries.len() {
                        continue 'tuples;
                    }
                    tuple[k] = 0;
                }
                break;
            }
        }
    }

    // classes with min-d* edges, closed under chaining
    let n = classes.len();
    let mut d = vec![INF; n * n];
    for i in 0..n {
        d[i * n + i] = 0.0;
    }
    for (&(l, r), &v) in &states {
        if v < d[l * n + r] {
            d[l * n + r] = v;
            d[r * n + l] = v;
        }
    }
    shortest_path_closure(n, &mut d);
    let labels = classes.iter().map(|t| t.to_string()).collect();
    let space = PseudoSpace::from_table(labels, d)?;
    let (reflection, class_to_reflected) = metric_reflection(&space);
    Ok(OrdinaryFreeModel {
        presentation: v.clone(),
        base: x.clone(),
        max_depth,
        oracle,
        classes,
        index,
        space,
        reflection,
        class_to_reflected,
    })
}

/// Free algebra of a unary-signature variety: the meet of `d*` with the
/// bounded entailment pseudometric on the depth-bounded universe, then
/// metric reflection. Distances are upper bounds on the free metric.
pub struct UnaryFreeModel {
    pub presentation: VarietyPresentation,
    pub base: MetricSpace,
    pub universe: crate::term::TermUniverse,
    /// The meet pseudometric on universe terms.
    pub space: PseudoSpace,
    pub reflection: MetricSpace,
    pub term_to_reflected: Vec<usize>,
}

impl UnaryFreeModel {
    pub fn term_index(&self, t: &Term) -> Result<usize> {
        self.universe
            .index_of(t)
            .ok_or_else(|| Error::Invalid(format!("term `{t}` not in the bounded universe")))
    }

    pub fn dist(&self, t: &Term, t2: &Term) -> Result<f64> {
        Ok(self.space.dist(self.term_index(t)?, self.term_index(t2)?))
    }

    pub fn reflected_dist(&self, t: &Term, t2: &Term) -> Result<f64> {
        let a = self.term_to_reflected[self.term_index(t)?];
        let b = self.term_to_reflected[self.term_index(t2)?];
        Ok(self.reflection.dist(a, b))
    }
}

pub fn unary_free(
    v: &VarietyPresentation,
    x: &MetricSpace,
    max_depth: usize,
) -> Result<UnaryFreeModel> {
    if let Some(&arity) = v.signature.ops.values().find(|&&a| a > 1) {
        return Err(Error::NotUnary(arity));
    }
    let universe = enumerate(x.points(), &v.signature, max_depth, universe_cap())?;
    let dstar = super::dstar_space(&universe, x)?;
    let entail = entailment_space(v, &universe)?;
    let space = meet(&dstar, &entail)?;
    let (reflection, term_to_reflected) = metric_reflection(&space);
    Ok(UnaryFreeModel {
        presentation: v.clone(),
        base: x.clone(),
        universe,
        space,
        reflection,
        term_to_reflected,
    })
}
