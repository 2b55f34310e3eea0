//! Acceptance gate: one test per top-level criterion, each printing a single
//! pass/fail line. Run with `cargo test --test acceptance -- --nocapture`.

use qalg::chain::DirectedChain;
use qalg::dist::{approx_eq, INF, TOL};
use qalg::finitary::{factorization_probe, monad_law_suite, run_counterexample, ModelSpec};
use qalg::free::closed::{finite_hausdorff, monoid_action_monad, word_monoid};
use qalg::free::generic::{
    ordinary_free, ordinary_free_filtered, unary_free, MonoidFlatten, SemilatticeSet,
};
use qalg::space::{
    coproduct, discrete, max_product, meet, metric_reflection, sum_tensor, MetricSpace,
    PseudoSpace,
};
use qalg::term::{enumerate, universe_cap, Signature, Term};
use qalg::variety::{
    action_presentation, example_monoid, monoid_presentation, semilattice_presentation,
};
use serde_json::json;

fn ab1() -> MetricSpace {
    MetricSpace::pair("a", "b", 1.0).unwrap()
}

fn pqr() -> MetricSpace {
    MetricSpace::from_entries(
        vec!["p".into(), "q".into(), "r".into()],
        &[
            ("p".into(), "q".into(), 1.0),
            ("q".into(), "r".into(), 2.0),
            ("p".into(), "r".into(), 3.0),
        ],
        INF,
    )
    .unwrap()
}

fn verdict(name: &str, pass: bool) {
    println!(
        "acceptance {}: {}",
        name,
        if pass { "pass" } else { "FAIL" }
    );
    assert!(pass, "acceptance criterion failed: {name}");
}

/// Criterion 1: the counter-example reproduces exactly across the eps grid.
#[test]
fn criterion_1_counterexample_reproduction() {
    let mut pass = true;
    for k in 1..=9 {
        let eps = k as f64 / 10.0;
        let report = run_counterexample(eps, 2).unwrap();
        pass &= report.pass();
        let meet_claim = report
            .claims
            .iter()
            .find(|c| c.claim.starts_with("meet-metric distance"))
            .unwrap();
        pass &= meet_claim.computed == json!(eps + 1.0)
            || approx_eq(
                meet_claim.computed.as_f64().unwrap_or(f64::NAN),
                eps + 1.0,
            );
        let free_claim = report
            .claims
            .iter()
            .find(|c| c.claim.starts_with("two-ops distance"))
            .unwrap();
        pass &= free_claim.computed == json!(1.0);
    }
    verdict(
        "1 (counter-example: dhat = 1, meet = eps + 1, chain (eps, 1), condition sweep, factorization fails; eps in 0.1..0.9)",
        pass,
    );
}

/// Criterion 2: the halving chain collapses toward a singleton.
#[test]
fn criterion_2_chain_collapse() {
    let chain = DirectedChain::halving(21);
    let d = chain.colimit_distance(0, "a", "b").unwrap();
    let mut pass = true;
    for (n, v) in d.per_stage.iter().enumerate() {
        pass &= *v == 0.5f64.powi(n as i32);
    }
    pass &= d.per_stage[20] < 1e-6;
    pass &= d.trend() == "collapsing toward 0";
    verdict(
        "2 (halving chain: stage n is exactly 2^-n, below 1e-6 by stage 20, trend collapsing)",
        pass,
    );
}

/// Criterion 3: the bounded monoid construction reproduces the word metric.
#[test]
fn criterion_3_monoid_matches_word_metric() {
    let v = monoid_presentation();
    let model = ordinary_free_filtered(&v, &ab1(), Box::new(MonoidFlatten), 3, &|nf| {
        nf.leaves().len() <= 3
    })
    .unwrap();
    let w = word_monoid(&ab1(), 3).unwrap();
    let mut pass = model.classes.len() == w.words.len();
    for i in 0..w.words.len() {
        for j in 0..w.words.len() {
            let nf = |word: &[usize]| {
                let letters: Vec<String> =
                    word.iter().map(|&l| w.base.point(l).to_string()).collect();
                match letters.len() {
                    0 => Term::node("e", vec![]),
                    _ => letters
                        .iter()
                        .rev()
                        .skip(1)
                        .fold(Term::leaf(letters.last().unwrap().clone()), |acc, l| {
                            Term::node("mul", vec![Term::leaf(l.clone()), acc])
                        }),
                }
            };
            let got = model.reflected_dist(&nf(&w.words[i]), &nf(&w.words[j])).unwrap();
            pass &= approx_eq(got, w.dist(i, j));
        }
    }
    verdict(
        "3 (monoid congruence classes at depth 3 equal the word metric for all words of length <= 3, including infinities)",
        pass,
    );
}

/// Criterion 4: the bounded semilattice construction reproduces the
/// Hausdorff metric at depth budget 3, decreasing monotonically toward it.
#[test]
fn criterion_4_semilattice_matches_hausdorff() {
    let v = semilattice_presentation();
    let base = pqr();
    let h = finite_hausdorff(&base).unwrap();
    let subset_term = |mask: u64| {
        let leaves: Vec<String> = (0..base.len())
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| base.point(i).to_string())
            .collect();
        match leaves.len() {
            0 => Term::node("bot", vec![]),
            _ => leaves
                .iter()
                .rev()
                .skip(1)
                .fold(Term::leaf(leaves.last().unwrap().clone()), |acc, l| {
                    Term::node("join", vec![Term::leaf(l.clone()), acc])
                }),
        }
    };
    // depth budget 3: a Hausdorff pairing of two subsets of a 3-point space
    // needs at most 6 leaves, which a join tree of depth 3 realizes
    let model = ordinary_free(&v, &base, Box::new(SemilatticeSet), 3).unwrap();
    let shallow = ordinary_free(&v, &base, Box::new(SemilatticeSet), 2).unwrap();
    let mut pass = model.classes.len() == h.subsets.len();
    for &a in &h.subsets {
        for &b in &h.subsets {
            let (ta, tb) = (subset_term(a), subset_term(b));
            let deep = model.reflected_dist(&ta, &tb).unwrap();
            pass &= approx_eq(deep, h.dist(a, b));
            // monotone: the shallower budget never undercuts the deeper one
            pass &= shallow.dist(&ta, &tb).unwrap() >= deep - TOL;
        }
    }
    verdict(
        "4 (semilattice congruence classes equal the Hausdorff metric at depth budget 3, monotonically from above)",
        pass,
    );
}

/// Criterion 5: the unary construction for monoid actions matches the
/// closed-form product with the sum metric on every class pair.
#[test]
fn criterion_5_unary_action_cross_check() {
    let m = example_monoid();
    let v = action_presentation(&m).unwrap();
    let model = unary_free(&v, &ab1(), 3).unwrap();
    let closed = monoid_action_monad(&m, &ab1()).unwrap();
    let mut pass = true;
    for t in &model.universe.terms {
        for t2 in &model.universe.terms {
            let expected = closed
                .space
                .dist(closed.eval_term(t).unwrap(), closed.eval_term(t2).unwrap());
            pass &= approx_eq(model.dist(t, t2).unwrap(), expected);
        }
    }
    verdict(
        "5 (unary action construction matches the monoid-action closed form on all pairs of the depth-3 universe)",
        pass,
    );
}

/// Criterion 6: the substituted property suites all pass quickly.
#[test]
fn criterion_6_property_suites() {
    let mut pass = true;

    // metric axioms on every constructed space at this scale
    let u = enumerate(
        &["a".to_string(), "b".to_string()],
        &Signature::two_binary(),
        2,
        universe_cap(),
    )
    .unwrap();
    pass &= u.len() == 202;
    let x = ab1();
    let disc = discrete(["a", "b"]).unwrap();
    for space in [
        qalg::free::dstar_space(&u, &x).unwrap(),
        qalg::free::two_ops::dhat_space(&u, &disc, 0.5).unwrap(),
    ] {
        pass &= space.validate().is_ok();
    }
    pass &= max_product(&x, &pqr()).validate().is_ok();
    pass &= sum_tensor(&x, &pqr()).validate().is_ok();
    pass &= coproduct(&[x.clone(), pqr()]).validate().is_ok();

    // law suites: nonexpansiveness, unit laws, enrichment
    for spec in [
        ModelSpec::Term {
            base: ab1(),
            signature: Signature::two_binary(),
            max_depth: 2,
        },
        ModelSpec::Word {
            base: ab1(),
            max_len: 3,
        },
        ModelSpec::Hausdorff { base: pqr() },
        ModelSpec::Exception {
            base: ab1(),
            exceptions: MetricSpace::pair("e1", "e2", 0.4).unwrap(),
        },
        ModelSpec::Small {
            base: MetricSpace::pair("a", "b", 0.2).unwrap(),
            eps: 0.5,
        },
        ModelSpec::Action {
            monoid: example_monoid(),
            base: ab1(),
        },
        ModelSpec::TwoOps {
            base: ab1(),
            eps: 0.5,
        },
    ] {
        pass &= monad_law_suite(&spec).unwrap().pass();
    }

    // meet is the greatest lower bound: against brute-force chains on a
    // 6-point set with deterministic pseudo-random entries
    let n = 6;
    let points: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
    let mut seed = 0x2545F4914F6CDD1Du64;
    let mut rand = || {
        seed ^= seed << 13;
        seed ^= seed >> 7;
        seed ^= seed << 17;
        (seed % 100) as f64 / 10.0
    };
    let mut make = |default: f64| {
        let mut entries = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let v = rand();
                entries.push((
                    points[i].clone(),
                    points[j].clone(),
                    if v > 8.0 { default } else { v },
                ));
            }
        }
        let mut d: Vec<f64> = vec![0.0; n * n];
        for (p, q, v) in &entries {
            let i = points.iter().position(|x| x == p).unwrap();
            let j = points.iter().position(|x| x == q).unwrap();
            d[i * n + j] = *v;
            d[j * n + i] = *v;
        }
        qalg::space::shortest_path_closure(n, &mut d);
        PseudoSpace::from_table(points.clone(), d).unwrap()
    };
    for _ in 0..20 {
        let d1 = make(INF);
        let d2 = make(INF);
        let m = meet(&d1, &d2).unwrap();
        for i in 0..n {
            for j in 0..n {
                // below both inputs
                pass &= m.dist(i, j) <= d1.dist(i, j) + TOL;
                pass &= m.dist(i, j) <= d2.dist(i, j) + TOL;
                // equal to the brute-force infimum over chains of <= n - 1 hops
                let brute = brute_force_meet(&d1, &d2, i, j, n - 1);
                pass &= approx_eq(m.dist(i, j), brute);
            }
        }
        // greatest: a pseudometric sitting below both inputs never exceeds
        // the meet
        let mut low: Vec<f64> = (0..n * n)
            .map(|k| 0.5 * f64::min(d1.dist(k / n, k % n), d2.dist(k / n, k % n)))
            .collect();
        qalg::space::shortest_path_closure(n, &mut low);
        let e = PseudoSpace::from_table(points.clone(), low).unwrap();
        for i in 0..n {
            for j in 0..n {
                pass &= e.dist(i, j) <= d1.dist(i, j) + TOL;
                pass &= e.dist(i, j) <= d2.dist(i, j) + TOL;
                pass &= e.dist(i, j) <= m.dist(i, j) + TOL;
            }
        }
    }

    // metric reflection preserves distances
    let p = PseudoSpace::from_entries(
        points.clone(),
        &[
            ("p0".into(), "p1".into(), 0.0),
            ("p2".into(), "p3".into(), 0.0),
        ],
        2.0,
    )
    .unwrap();
    let (refl, class_of) = metric_reflection(&p);
    for i in 0..n {
        for j in 0..n {
            pass &= p.dist(i, j) == refl.dist(class_of[i], class_of[j]);
        }
    }

    verdict(
        "6 (property suites: metric axioms, model laws, meet greatest-lower-bound vs brute force, reflection preservation)",
        pass,
    );
}

fn brute_force_meet(d1: &PseudoSpace, d2: &PseudoSpace, from: usize, to: usize, hops: usize) -> f64 {
    let n = d1.len();
    let mut best = vec![INF; n];
    best[from] = 0.0;
    let mut answer = if from == to { 0.0 } else { INF };
    for _ in 0..hops {
        let mut next = best.clone();
        for i in 0..n {
            if best[i].is_infinite() {
                continue;
            }
            for j in 0..n {
                let hop = f64::min(d1.dist(i, j), d2.dist(i, j));
                if best[i] + hop < next[j] {
                    next[j] = best[i] + hop;
                }
            }
        }
        best = next;
        answer = answer.min(best[to]);
    }
    answer
}

/// Criterion 7: the factorization sweep confirms every closed-form model and
/// refutes only the two-close-operations model.
#[test]
fn criterion_7_factorization_probes() {
    let mut pass = true;
    let positives = [
        ModelSpec::Word {
            base: ab1(),
            max_len: 3,
        },
        ModelSpec::Hausdorff { base: pqr() },
        ModelSpec::Small {
            base: MetricSpace::pair("a", "b", 0.2).unwrap(),
            eps: 0.5,
        },
        ModelSpec::Exception {
            base: ab1(),
            exceptions: MetricSpace::pair("e1", "e2", 0.4).unwrap(),
        },
        ModelSpec::Action {
            monoid: example_monoid(),
            base: ab1(),
        },
    ];
    for spec in &positives {
        pass &= factorization_probe(spec, 3).unwrap().exists;
    }
    let negative = factorization_probe(
        &ModelSpec::TwoOps {
            base: ab1(),
            eps: 0.5,
        },
        2,
    )
    .unwrap();
    pass &= !negative.exists && negative.witness.is_some();
    verdict(
        "7 (factorization exists for word, semilattice, small, exception, action models; fails only for two-ops)",
        pass,
    );
}
