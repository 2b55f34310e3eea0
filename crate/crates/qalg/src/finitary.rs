//! Strong-finitarity probes.
//!
//! A strongly finitary monad on metric spaces is determined by its values on
//! finite discrete spaces. The computable criterion used here: for a map `f`
//! out of the free algebra over the discrete space `|X|`, whenever the
//! diagonal condition holds (terms built over eps-close point pairs are moved
//! at most eps apart by `f`, for every eps), `f` must factor nonexpandingly
//! through the free algebra over `X` itself. The two-close-binary-operations
//! variety breaks this: an explicit term pair is 1 apart over `X` but
//! `eps + 1` apart under the target metric, so no factorization exists.

use crate::algebra::FiniteQuantAlgebra;
use crate::dist::{leq, INF, TOL, WITNESS_MARGIN};
use crate::error::{Error, Result};
use crate::free::closed::{
    exception_monad, finite_hausdorff, monoid_action_monad, small_space_monad, term_monad,
    word_monoid,
};
use crate::free::two_ops::{dhat_space, skeleton_key, two_ops_free};
use crate::free::dstar_space;
use crate::report::{dist_value, Claim, Report};
use crate::space::{
    diagonal_neighborhood, discrete, meet, shortest_path_closure, MetricSpace, PseudoSpace,
};
use crate::term::{
    dstar, enumerate, parse_term, universe_cap, Signature, Term,
};
use serde_json::json;
use std::collections::HashMap;

// --- diagonal condition ----------------------------------------------------

#[derive(Debug, Clone, serde::Serialize)]
pub struct ConditionSweep {
    pub eps: f64,
    /// Point pairs of the eps-neighborhood of the diagonal.
    pub pairs: usize,
    /// Terms enumerated over those pairs.
    pub terms: usize,
    /// Max over terms `u` of the target distance between the two leafwise
    /// projections of `u`.
    pub max_displacement: f64,
    pub pass: bool,
    pub worst: Option<(String, String)>,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct ConditionReport {
    pub max_depth: usize,
    pub sweeps: Vec<ConditionSweep>,
    pub pass: bool,
}

impl ConditionReport {
    pub fn to_report(&self) -> Report {
        let mut r = Report::new("diagonal condition sweep");
        for s in &self.sweeps {
            r.push(
                Claim::flag(
                    format!("terms over {}-close pairs displaced at most {}", s.eps, s.eps),
                    s.pass,
                )
                .with_witness(json!({
                    "eps": s.eps,
                    "pairs": s.pairs,
                    "terms": s.terms,
                    "max_displacement": dist_value(s.max_displacement),
                    "worst": s.worst,
                })),
            );
        }
        r
    }
}

/// Checks the diagonal condition: for each eps, enumerate terms over the
/// eps-neighborhood of the diagonal of `X` up to `max_depth`, project leaves
/// left and right, and measure the displacement with `f_dist` (the target
/// distance between the images of two terms over `X`'s points).
pub fn check_condition(
    sig: &Signature,
    x: &MetricSpace,
    eps_list: &[f64],
    max_depth: usize,
    f_dist: &dyn Fn(&Term, &Term) -> Result<f64>,
) -> Result<ConditionReport> {
    let mut sweeps = Vec::new();
    for &eps in eps_list {
        let delta = diagonal_neighborhood(x, eps);
        let mut labels = Vec::new();
        let mut projections: HashMap<String, (String, String)> = HashMap::new();
        for &(i, j) in &delta.pairs {
            let label = format!("{}|{}", x.point(i), x.point(j));
            projections.insert(label.clone(), (x.point(i).to_string(), x.point(j).to_string()));
            labels.push(label);
        }
        let universe = enumerate(&labels, sig, max_depth, universe_cap())?;
        let mut max_displacement = 0.0f64;
        let mut worst = None;
        for u in &universe.terms {
            let left = u.map_leaves(&|leaf| Term::leaf(projections[leaf].0.clone()));
            let right = u.map_leaves(&|leaf| Term::leaf(projections[leaf].1.clone()));
            let d = f_dist(&left, &right)?;
            if d > max_displacement {
                max_displacement = d;
                worst = Some((left.to_string(), right.to_string()));
            }
        }
        sweeps.push(ConditionSweep {
            eps,
            pairs: delta.pairs.len(),
            terms: universe.len(),
            max_displacement,
            pass: leq(max_displacement, eps),
            worst,
        });
    }
    let pass = sweeps.iter().all(|s| s.pass);
    Ok(ConditionReport {
        max_depth,
        sweeps,
        pass,
    })
}

// --- factorization ---------------------------------------------------------

#[derive(Debug, Clone, serde::Serialize)]
pub struct FactorizationWitness {
    pub left: String,
    pub right: String,
    /// Distance in the free algebra over `X`.
    pub upstream: f64,
    /// Distance between the images in the target.
    pub downstream: f64,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct FactorizationVerdict {
    pub exists: bool,
    pub checked_pairs: usize,
    pub witness: Option<FactorizationWitness>,
}

/// A nonexpanding factorization through the free algebra over `X` exists iff
/// the map is nonexpanding from the upstream metric to the target; the sweep
/// either confirms this over all element pairs or exhibits a strict
/// violation (by more than the witness margin, to rule out float noise).
pub fn check_factorization(
    elements: &[Term],
    d_upstream: &dyn Fn(&Term, &Term) -> Result<f64>,
    d_target: &dyn Fn(&Term, &Term) -> Result<f64>,
) -> Result<FactorizationVerdict> {
    let mut checked_pairs = 0;
    let mut witness: Option<FactorizationWitness> = None;
    for (i, s) in elements.iter().enumerate() {
        for t in &elements[i + 1..] {
            checked_pairs += 1;
            let up = d_upstream(s, t)?;
            let down = d_target(s, t)?;
            if down > up + WITNESS_MARGIN {
                let worse = witness
                    .as_ref()
                    .map_or(true, |w| down - up > w.downstream - w.upstream);
                if worse {
                    witness = Some(FactorizationWitness {
                        left: s.to_string(),
                        right: t.to_string(),
                        upstream: up,
                        downstream: down,
                    });
                }
            }
        }
    }
    Ok(FactorizationVerdict {
        exists: witness.is_none(),
        checked_pairs,
        witness,
    })
}

// --- counter-example -------------------------------------------------------

/// Restriction of the meet of the term metric over `x` and the two-ops
/// metric over the discrete space to one skeleton block of the universe.
/// Both input metrics are infinite across skeletons, so every chain stays
/// inside the block and the restriction is exact.
fn meet_on_skeleton_block(
    terms: &[Term],
    x: &MetricSpace,
    disc: &MetricSpace,
    eps: f64,
) -> Result<PseudoSpace> {
    let n = terms.len();
    let mut d = vec![0.0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let v = f64::min(
                dstar(&terms[i], &terms[j], x)?,
                crate::free::two_ops::dhat(&terms[i], &terms[j], disc, eps)?,
            );
            d[i * n + j] = v;
            d[j * n + i] = v;
        }
    }
    shortest_path_closure(n, &mut d);
    PseudoSpace::from_table(terms.iter().map(|t| t.to_string()).collect(), d)
}

/// Cheapest chain of at most `max_edges` hops between two points, over a
/// full edge-weight table. Used to mirror the lower-bound argument of the
/// counter-example by bounded chain enumeration.
pub fn bounded_chain_infimum(
    n: usize,
    edges: &[f64],
    from: usize,
    to: usize,
    max_edges: usize,
) -> f64 {
    let mut best = vec![INF; n];
    best[from] = 0.0;
    let mut answer = if from == to { 0.0 } else { INF };
    for _ in 0..max_edges {
        let mut next = best.clone();
        for i in 0..n {
            if best[i].is_infinite() {
                continue;
            }
            for j in 0..n {
                let via = best[i] + edges[i * n + j];
                if via < next[j] {
                    next[j] = via;
                }
            }
        }
        best = next;
        answer = answer.min(best[to]);
    }
    answer
}

/// The non-strong-finitarity counter-example, reproduced with exact numbers.
///
/// Over `X = {a, b}` with `d(a, b) = 1` and the two-close-binary-operations
/// variety at the given eps, the target space `Y` is the depth-bounded term
/// universe under the meet of the term metric over `X` and the two-ops
/// metric over the discrete `|X|`. The identity map from the free algebra
/// over `|X|` to `Y` satisfies the diagonal condition, yet the witness trees
/// `t = (sigma1 (sigma2 a a) (sigma1 b b))` and
/// `t' = (sigma1 (sigma2 b b) (sigma2 b b))` are 1 apart over `X` but
/// `eps + 1` apart in `Y` — no nonexpanding factorization exists.
pub fn run_counterexample(eps: f64, max_depth: usize) -> Result<Report> {
    let model_check = two_ops_free(&MetricSpace::pair("a", "b", 1.0)?, eps)?; // validates eps
    let x = model_check.base.clone();
    if max_depth < 2 {
        return Err(Error::DepthTooSmall(max_depth));
    }
    let disc = discrete(["a", "b"])?;
    let sig = Signature::two_binary();
    let points: Vec<String> = x.points().to_vec();

    // depth-2 universe with the meet metric (202 terms, exact closure)
    let u2 = enumerate(&points, &sig, 2, universe_cap())?;
    let dstar2 = dstar_space(&u2, &x)?;
    let dhat2 = dhat_space(&u2, &disc, eps)?;
    let y2 = meet(&dstar2, &dhat2)?;
    let y2_dist = |s: &Term, t: &Term| -> Result<f64> {
        let i = u2
            .index_of(s)
            .ok_or_else(|| Error::Invalid(format!("term `{s}` outside the depth-2 universe")))?;
        let j = u2
            .index_of(t)
            .ok_or_else(|| Error::Invalid(format!("term `{t}` outside the depth-2 universe")))?;
        Ok(y2.dist(i, j))
    };

    let t = parse_term("(sigma1 (sigma2 a a) (sigma1 b b))", &sig)?;
    let tp = parse_term("(sigma1 (sigma2 b b) (sigma2 b b))", &sig)?;
    let s1 = parse_term("(sigma1 (sigma2 a a) (sigma2 b b))", &sig)?;

    let mut report = Report::new(format!(
        "two-close-operations counter-example (eps = {eps}, depth {max_depth})"
    ));

    // (i) the identity is nonexpanding from the two-ops metric over |X| to Y
    let mut nonexp = true;
    let mut nonexp_witness = None;
    for i in 0..u2.len() {
        for j in i + 1..u2.len() {
            if !leq(y2.dist(i, j), dhat2.dist(i, j)) {
                nonexp = false;
                nonexp_witness = Some((u2.term(i).to_string(), u2.term(j).to_string()));
            }
        }
    }
    report.push(
        Claim::flag(
            "comparison map nonexpanding into the meet metric",
            nonexp,
        )
        .with_witness(json!(nonexp_witness)),
    );

    // (ii) diagonal condition sweep on the default grid at depth 2
    let condition = check_condition(&sig, &x, &[0.25, 0.5, 1.0], 2, &y2_dist)?;
    for s in &condition.sweeps {
        report.push(
            Claim::flag(
                format!(
                    "diagonal condition at eps = {}: displacement at most {}",
                    s.eps, s.eps
                ),
                s.pass,
            )
            .with_witness(json!({
                "max_displacement": dist_value(s.max_displacement),
                "pairs": s.pairs,
                "terms": s.terms,
            })),
        );
    }

    // (iii) witness distances: 1 under the free metric over X, eps + 1 in Y
    let free_dist = crate::free::two_ops::dhat(&t, &tp, &x, eps)?;
    report.push(Claim::dist(
        format!("two-ops distance over X between {t} and {tp}"),
        free_dist,
        1.0,
    ));
    let y_value = if max_depth == 2 {
        y2_dist(&t, &tp)?
    } else {
        // restrict the meet to the witness skeleton block of the deeper
        // universe; exact since both metrics are infinite across skeletons
        let deep = enumerate(&points, &sig, max_depth, universe_cap())?;
        let key = skeleton_key(&t);
        let block: Vec<Term> = deep
            .terms
            .iter()
            .filter(|u| skeleton_key(u) == key)
            .cloned()
            .collect();
        let block_space = meet_on_skeleton_block(&block, &x, &disc, eps)?;
        let bi = block_space.index_of(&t.to_string())?;
        let bj = block_space.index_of(&tp.to_string())?;
        let deep_value = block_space.dist(bi, bj);
        report.push(Claim::dist(
            format!("meet value unchanged from depth 2 to depth {max_depth}"),
            deep_value,
            y2_dist(&t, &tp)?,
        ));
        deep_value
    };
    report.push(Claim::dist(
        format!("meet-metric distance between {t} and {tp}"),
        y_value,
        eps + 1.0,
    ));

    // (iv) the mediating chain pays eps then 1
    report.push(Claim::dist(
        format!("chain step {t} -> {s1} under the discrete two-ops metric"),
        crate::free::two_ops::dhat(&t, &s1, &disc, eps)?,
        eps,
    ));
    report.push(Claim::dist(
        format!("chain step {s1} -> {tp} under the term metric over X"),
        dstar(&s1, &tp, &x)?,
        1.0,
    ));

    // (v) verdict: the factorization sweep must fail
    let verdict = check_factorization(
        &u2.terms,
        &|s, t| crate::free::two_ops::dhat(s, t, &x, eps),
        &y2_dist,
    )?;
    report.push(
        Claim::flag(
            "no nonexpanding factorization exists (not strongly finitary)",
            !verdict.exists,
        )
        .with_witness(json!(verdict.witness)),
    );
    Ok(report)
}

// --- aggregated law suites -------------------------------------------------

/// A named free-algebra model for the law suite and the CLI.
#[derive(Debug, Clone)]
pub enum ModelSpec {
    Term {
        base: MetricSpace,
        signature: Signature,
        max_depth: usize,
    },
    Word {
        base: MetricSpace,
        max_len: usize,
    },
    Hausdorff {
        base: MetricSpace,
    },
    Exception {
        base: MetricSpace,
        exceptions: MetricSpace,
    },
    Small {
        base: MetricSpace,
        eps: f64,
    },
    Action {
        monoid: FiniteQuantAlgebra,
        base: MetricSpace,
    },
    TwoOps {
        base: MetricSpace,
        eps: f64,
    },
}

/// Runs the factorization sweep for a model with its canonical quotient map:
/// elements of a depth-bounded construction over the base, compared between
/// the upstream free metric and the closed-form target. Every closed-form
/// model confirms the factorization; only the two-close-operations model
/// fails it.
pub fn factorization_probe(spec: &ModelSpec, max_depth: usize) -> Result<FactorizationVerdict> {
    use crate::free::generic::{
        ordinary_free, ordinary_free_filtered, unary_free, MonoidFlatten, SemilatticeSet,
    };
    use crate::variety::{
        action_presentation, monoid_presentation, semilattice_presentation,
    };
    match spec {
        ModelSpec::Term {
            base,
            signature,
            max_depth: model_depth,
        } => {
            let u = enumerate(base.points(), signature, *model_depth, universe_cap())?;
            let d = |s: &Term, t: &Term| dstar(s, t, base);
            check_factorization(&u.terms, &d, &d)
        }
        ModelSpec::Word { base, .. } => {
            let v = monoid_presentation();
            let model = ordinary_free_filtered(
                &v,
                base,
                Box::new(MonoidFlatten),
                max_depth,
                &|nf| nf.leaves().len() <= max_depth,
            )?;
            let closed = word_monoid(base, max_depth)?;
            check_factorization(
                &model.classes,
                &|s, t| model.reflected_dist(s, t),
                &|s, t| Ok(closed.dist(closed.eval_term(s)?, closed.eval_term(t)?)),
            )
        }
        ModelSpec::Hausdorff { base } => {
            let v = semilattice_presentation();
            let model = ordinary_free(&v, base, Box::new(SemilatticeSet), max_depth)?;
            let closed = finite_hausdorff(base)?;
            check_factorization(
                &model.classes,
                &|s, t| model.reflected_dist(s, t),
                &|s, t| Ok(closed.dist(closed.eval_term(s)?, closed.eval_term(t)?)),
            )
        }
        ModelSpec::Exception { base, exceptions } => {
            let model = exception_monad(base, exceptions)?;
            let sig = Signature {
                ops: exceptions.points().iter().map(|p| (p.clone(), 0)).collect(),
            };
            let u = enumerate(base.points(), &sig, 1, universe_cap())?;
            let d = |s: &Term, t: &Term| {
                Ok(model.space.dist(model.eval_term(s)?, model.eval_term(t)?))
            };
            check_factorization(&u.terms, &d, &d)
        }
        ModelSpec::Small { base, eps } => {
            let model = small_space_monad(base, *eps)?;
            let elements: Vec<Term> = base.points().iter().map(Term::leaf).collect();
            let d = |s: &Term, t: &Term| match (s, t) {
                (Term::Leaf(p), Term::Leaf(q)) => model.space.dist_by_name(p, q),
                _ => Err(Error::Invalid("expected leaf elements".to_string())),
            };
            check_factorization(&elements, &d, &d)
        }
        ModelSpec::Action { monoid, base } => {
            let v = action_presentation(monoid)?;
            let model = unary_free(&v, base, max_depth)?;
            let closed = monoid_action_monad(monoid, base)?;
            check_factorization(
                &model.universe.terms,
                &|s, t| model.reflected_dist(s, t),
                &|s, t| Ok(closed.space.dist(closed.eval_term(s)?, closed.eval_term(t)?)),
            )
        }
        ModelSpec::TwoOps { base, eps } => {
            let disc = discrete(base.points().iter().cloned())?;
            let sig = Signature::two_binary();
            let depth = max_depth.min(2);
            let u = enumerate(base.points(), &sig, depth, universe_cap())?;
            let dstar_tab = dstar_space(&u, base)?;
            let dhat_tab = dhat_space(&u, &disc, *eps)?;
            let y = meet(&dstar_tab, &dhat_tab)?;
            check_factorization(
                &u.terms,
                &|s, t| crate::free::two_ops::dhat(s, t, base, *eps),
                &|s, t| {
                    let i = u.index_of(s).ok_or_else(|| {
                        Error::Invalid(format!("term `{s}` outside the bounded universe"))
                    })?;
                    let j = u.index_of(t).ok_or_else(|| {
                        Error::Invalid(format!("term `{t}` outside the bounded universe"))
                    })?;
                    Ok(y.dist(i, j))
                },
            )
        }
    }
}

/// The canonical pair of endomaps used by the enrichment checks: the
/// identity and the constant map to the first point, whose distance is the
/// largest distance to that point.
fn enrichment_maps(base: &MetricSpace) -> (Vec<usize>, Vec<usize>, f64) {
    let n = base.len();
    let f: Vec<usize> = (0..n).collect();
    let g: Vec<usize> = vec![0; n];
    let delta = (0..n).map(|i| base.dist(i, 0)).fold(0.0, f64::max);
    (f, g, delta)
}

/// Runs the model's laws — unit distance preservation, nonexpanding
/// operations, unit/flattening identities, the enrichment bound, and
/// surjectivity of induced maps — exhaustively at small scale.
pub fn monad_law_suite(spec: &ModelSpec) -> Result<Report> {
    match spec {
        ModelSpec::Term {
            base,
            signature,
            max_depth,
        } => {
            let model = term_monad(base, signature, *max_depth)?;
            let mut r = Report::new("term-monad laws");
            let mut unit_ok = true;
            for i in 0..base.len() {
                for j in 0..base.len() {
                    let d = model.dist(
                        &model.unit(base.point(i))?,
                        &model.unit(base.point(j))?,
                    )?;
                    unit_ok &= d == base.dist(i, j);
                }
            }
            r.push(Claim::flag("unit preserves base distances", unit_ok));
            let shallow = enumerate(base.points(), signature, 1, universe_cap())?;
            let mut tupling_ok = true;
            for (symbol, &arity) in &signature.ops {
                if arity == 0 {
                    continue;
                }
                crate::algebra::for_each_tuple(arity, shallow.len(), |tuple| {
                    crate::algebra::for_each_tuple(arity, shallow.len(), |tuple2| {
                        let bound = tuple
                            .iter()
                            .zip(tuple2)
                            .map(|(&i, &j)| dstar(shallow.term(i), shallow.term(j), base).unwrap())
                            .fold(0.0, f64::max);
                        let l = Term::node(
                            symbol.clone(),
                            tuple.iter().map(|&i| shallow.term(i).clone()).collect(),
                        );
                        let rgt = Term::node(
                            symbol.clone(),
                            tuple2.iter().map(|&j| shallow.term(j).clone()).collect(),
                        );
                        tupling_ok &= dstar(&l, &rgt, base).unwrap() <= bound + TOL;
                    });
                });
            }
            r.push(Claim::flag("tree-tupling nonexpanding", tupling_ok));
            let mut flatten_ok = true;
            for t in &model.universe.terms {
                flatten_ok &= model.flatten(&Term::leaf(t.to_string()))? == *t;
            }
            r.push(Claim::flag(
                "flattening after unit is the identity",
                flatten_ok,
            ));
            let (f, g, delta) = enrichment_maps(base);
            let apply = |m: &[usize], leaf: &str| {
                base.point(m[base.index_of(leaf).unwrap()]).to_string()
            };
            let mut enrich_ok = true;
            for t in &model.universe.terms {
                let tf = model.lift(&|leaf| apply(&f, leaf), t);
                let tg = model.lift(&|leaf| apply(&g, leaf), t);
                enrich_ok &= leq(model.dist(&tf, &tg)?, delta);
            }
            r.push(Claim::flag(
                "enrichment: lifted maps within the map distance",
                enrich_ok,
            ));
            Ok(r)
        }
        ModelSpec::Word { base, max_len } => {
            let model = word_monoid(base, *max_len)?;
            let mut r = Report::new("word-monoid laws");
            let mut unit_ok = true;
            for i in 0..base.len() {
                for j in 0..base.len() {
                    let d = model.dist(model.unit(base.point(i))?, model.unit(base.point(j))?);
                    unit_ok &= d == base.dist(i, j);
                }
            }
            r.push(Claim::flag("unit preserves base distances", unit_ok));
            let mut unit_law_ok = true;
            let e = model.empty();
            for w in 0..model.words.len() {
                unit_law_ok &= model.concat(e, w)? == w && model.concat(w, e)? == w;
            }
            r.push(Claim::flag("empty word is a two-sided unit", unit_law_ok));
            let mut concat_ok = true;
            for u in 0..model.words.len() {
                for v in 0..model.words.len() {
                    if model.words[u].len() + model.words[v].len() > *max_len {
                        continue;
                    }
                    for u2 in 0..model.words.len() {
                        for v2 in 0..model.words.len() {
                            if model.words[u2].len() + model.words[v2].len() > *max_len {
                                continue;
                            }
                            let bound = f64::max(model.dist(u, u2), model.dist(v, v2));
                            let d =
                                model.dist(model.concat(u, v)?, model.concat(u2, v2)?);
                            concat_ok &= d <= bound + TOL || bound.is_infinite();
                        }
                    }
                }
            }
            r.push(Claim::flag("concatenation nonexpanding", concat_ok));
            let (f, g, delta) = enrichment_maps(base);
            let mut enrich_ok = true;
            for w in 0..model.words.len() {
                let wf = model.lift(&model, &f, w);
                let wg = model.lift(&model, &g, w);
                enrich_ok &= leq(model.dist(wf, wg), delta);
            }
            r.push(Claim::flag(
                "enrichment: lifted maps within the map distance",
                enrich_ok,
            ));
            let target = word_monoid(&MetricSpace::singleton("*"), *max_len)?;
            let collapse = vec![0usize; base.len()];
            let mut hit = vec![false; target.words.len()];
            for w in 0..model.words.len() {
                hit[model.lift(&target, &collapse, w)] = true;
            }
            r.push(Claim::flag(
                "induced map of a surjection is surjective",
                hit.iter().all(|&h| h),
            ));
            Ok(r)
        }
        ModelSpec::Hausdorff { base } => {
            let model = finite_hausdorff(base)?;
            let mut r = Report::new("finite-Hausdorff laws");
            let mut unit_ok = true;
            for i in 0..base.len() {
                for j in 0..base.len() {
                    let d = model.dist(model.unit(base.point(i))?, model.unit(base.point(j))?);
                    unit_ok &= d == base.dist(i, j);
                }
            }
            r.push(Claim::flag("unit preserves base distances", unit_ok));
            let mut join_ok = true;
            for &a in &model.subsets {
                for &b in &model.subsets {
                    for &a2 in &model.subsets {
                        for &b2 in &model.subsets {
                            let bound = f64::max(model.dist(a, a2), model.dist(b, b2));
                            let d = model.dist(model.join(a, b), model.join(a2, b2));
                            join_ok &= d <= bound + TOL || bound.is_infinite();
                        }
                    }
                }
            }
            r.push(Claim::flag("union nonexpanding", join_ok));
            let mut semilattice_ok = true;
            for &a in &model.subsets {
                semilattice_ok &= model.join(a, a) == a && model.join(a, 0) == a;
                for &b in &model.subsets {
                    semilattice_ok &= model.join(a, b) == model.join(b, a);
                }
            }
            r.push(Claim::flag(
                "union idempotent, commutative, with empty unit",
                semilattice_ok,
            ));
            let (f, g, delta) = enrichment_maps(base);
            let mut enrich_ok = true;
            for &a in &model.subsets {
                enrich_ok &= leq(model.dist(model.lift(&f, a), model.lift(&g, a)), delta);
            }
            r.push(Claim::flag(
                "enrichment: lifted maps within the map distance",
                enrich_ok,
            ));
            let collapse = vec![0usize; base.len()];
            let mut hit = [base.is_empty(), false];
            for &a in &model.subsets {
                hit[usize::from(model.lift(&collapse, a) != 0)] = true;
            }
            r.push(Claim::flag(
                "induced map of a surjection is surjective",
                hit.iter().all(|&h| h),
            ));
            Ok(r)
        }
        ModelSpec::Exception { base, exceptions } => {
            let model = exception_monad(base, exceptions)?;
            let mut r = Report::new("exception-monad laws");
            let mut unit_ok = true;
            for i in 0..base.len() {
                for j in 0..base.len() {
                    let d = model
                        .space
                        .dist(model.unit(base.point(i))?, model.unit(base.point(j))?);
                    unit_ok &= d == base.dist(i, j);
                }
            }
            r.push(Claim::flag("unit preserves base distances", unit_ok));
            let mut exc_ok = true;
            for i in 0..exceptions.len() {
                for j in 0..exceptions.len() {
                    let d = model.space.dist(
                        model.exception(exceptions.point(i))?,
                        model.exception(exceptions.point(j))?,
                    );
                    exc_ok &= d == exceptions.dist(i, j);
                }
                for j in 0..base.len() {
                    exc_ok &= model
                        .space
                        .dist(model.exception(exceptions.point(i))?, model.unit(base.point(j))?)
                        == INF;
                }
            }
            r.push(Claim::flag(
                "exception distances kept, base kept apart",
                exc_ok,
            ));
            let (f, g, delta) = enrichment_maps(base);
            let mut enrich_ok = true;
            for elem in 0..model.space.len() {
                enrich_ok &= leq(
                    model.space.dist(model.lift(&f, elem), model.lift(&g, elem)),
                    delta,
                );
            }
            r.push(Claim::flag(
                "enrichment: lifted maps within the map distance",
                enrich_ok,
            ));
            Ok(r)
        }
        ModelSpec::Small { base, eps } => {
            let model = small_space_monad(base, *eps)?;
            let mut r = Report::new("small-space laws");
            let mut formula_ok = true;
            for i in 0..base.len() {
                for j in 0..base.len() {
                    let expected = if i == j { 0.0 } else { base.dist(i, j).max(*eps) };
                    formula_ok &= model.space.dist(i, j) == expected;
                }
            }
            r.push(Claim::flag(
                "distances are the maximum of the base distance and eps",
                formula_ok,
            ));
            let twice = small_space_monad(&model.space, *eps)?;
            r.push(Claim::flag(
                "applying the construction twice equals once",
                twice.space.table() == model.space.table(),
            ));
            let (f, g, delta) = enrichment_maps(base);
            let mut enrich_ok = true;
            for i in 0..base.len() {
                // lifted maps stay within max(eps, map distance): the target
                // metric never reports less than eps off the diagonal
                enrich_ok &= leq(
                    model.space.dist(model.lift(&f, i), model.lift(&g, i)),
                    delta.max(*eps),
                );
            }
            r.push(Claim::flag(
                "lifted maps within the maximum of eps and the map distance",
                enrich_ok,
            ));
            Ok(r)
        }
        ModelSpec::Action { monoid, base } => {
            let model = monoid_action_monad(monoid, base)?;
            let mut r = Report::new("monoid-action laws");
            let mut unit_ok = true;
            for i in 0..base.len() {
                for j in 0..base.len() {
                    let d = model
                        .space
                        .dist(model.unit(base.point(i))?, model.unit(base.point(j))?);
                    unit_ok &= d == base.dist(i, j);
                }
            }
            r.push(Claim::flag("unit preserves base distances", unit_ok));
            let mut act_ok = true;
            for m in 0..monoid.carrier.len() {
                for s in 0..model.space.len() {
                    for s2 in 0..model.space.len() {
                        act_ok &= leq(
                            model.space.dist(model.act(m, s)?, model.act(m, s2)?),
                            model.space.dist(s, s2),
                        );
                    }
                }
            }
            r.push(Claim::flag("each action map nonexpanding", act_ok));
            let mut close_ok = true;
            for m in 0..monoid.carrier.len() {
                for m2 in 0..monoid.carrier.len() {
                    for s in 0..model.space.len() {
                        close_ok &= leq(
                            model.space.dist(model.act(m, s)?, model.act(m2, s)?),
                            monoid.carrier.dist(m, m2),
                        );
                    }
                }
            }
            r.push(Claim::flag(
                "acting by close monoid elements moves points closely",
                close_ok,
            ));
            let (f, g, delta) = enrichment_maps(base);
            let mut enrich_ok = true;
            for s in 0..model.space.len() {
                enrich_ok &= leq(
                    model.space.dist(model.lift(&f, s), model.lift(&g, s)),
                    delta,
                );
            }
            r.push(Claim::flag(
                "enrichment: lifted maps within the map distance",
                enrich_ok,
            ));
            Ok(r)
        }
        ModelSpec::TwoOps { base, eps } => {
            let model = two_ops_free(base, *eps)?;
            let mut r = Report::new("two-close-operations laws");
            let mut unit_ok = true;
            for i in 0..base.len() {
                for j in 0..base.len() {
                    let d = model.dist(
                        &model.unit(base.point(i))?,
                        &model.unit(base.point(j))?,
                    )?;
                    unit_ok &= d == base.dist(i, j);
                }
            }
            r.push(Claim::flag("unit preserves base distances", unit_ok));
            let shallow = enumerate(base.points(), &model.signature(), 1, universe_cap())?;
            let mut op_ok = true;
            let mut eq_ok = true;
            for a in &shallow.terms {
                for b in &shallow.terms {
                    let s1 = model.op("sigma1", a.clone(), b.clone())?;
                    let s2 = model.op("sigma2", a.clone(), b.clone())?;
                    eq_ok &= (model.dist(&s1, &s2)? - eps).abs() <= TOL;
                    for a2 in &shallow.terms {
                        for b2 in &shallow.terms {
                            let bound =
                                f64::max(model.dist(a, a2)?, model.dist(b, b2)?);
                            for sym in ["sigma1", "sigma2"] {
                                let l = model.op(sym, a.clone(), b.clone())?;
                                let rr = model.op(sym, a2.clone(), b2.clone())?;
                                op_ok &= model.dist(&l, &rr)? <= bound + TOL
                                    || bound.is_infinite();
                            }
                        }
                    }
                }
            }
            r.push(Claim::flag("tree-tupling nonexpanding", op_ok));
            r.push(Claim::flag(
                "the two operations stay exactly eps apart",
                eq_ok,
            ));
            let (f, g, delta) = enrichment_maps(base);
            let apply = |m: &[usize], leaf: &str| {
                base.point(m[base.index_of(leaf).unwrap()]).to_string()
            };
            let deeper = enumerate(base.points(), &model.signature(), 2, universe_cap())?;
            let mut enrich_ok = true;
            for t in &deeper.terms {
                let tf = model.lift(&|leaf| apply(&f, leaf), t);
                let tg = model.lift(&|leaf| apply(&g, leaf), t);
                enrich_ok &= leq(model.dist(&tf, &tg)?, delta);
            }
            r.push(Claim::flag(
                "enrichment: lifted maps within the map distance",
                enrich_ok,
            ));
            Ok(r)
        }
    }
}
