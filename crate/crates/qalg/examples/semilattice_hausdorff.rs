//! The free semilattice over a metric space is the set of finite nonempty
//! subsets (plus bottom) under the Hausdorff metric. The bounded
//! congruence-class construction recovers it exactly at depth budget 3.

use qalg::dist::fmt;
use qalg::free::closed::finite_hausdorff;
use qalg::free::generic::{ordinary_free, SemilatticeSet};
use qalg::space::MetricSpace;
use qalg::term::parse_term;
use qalg::variety::semilattice_presentation;

fn main() {
    let x = MetricSpace::from_entries(
        vec!["p".into(), "q".into(), "r".into()],
        &[
            ("p".into(), "q".into(), 1.0),
            ("q".into(), "r".into(), 2.0),
            ("p".into(), "r".into(), 3.0),
        ],
        f64::INFINITY,
    )
    .unwrap();

    let h = finite_hausdorff(&x).unwrap();
    println!("free semilattice over {{p, q, r}}: {} subsets", h.subsets.len());
    println!("  Hausdorff d({{p}}, {{q, r}}) = {}", fmt(h.dist(0b001, 0b110)));

    let v = semilattice_presentation();
    let model = ordinary_free(&v, &x, Box::new(SemilatticeSet), 3).unwrap();
    println!("  congruence classes at depth 3: {}", model.classes.len());

    // join terms denote subsets; idempotence and commutativity are free
    let pairs = [
        ("p", "(join q r)"),
        ("(join p p)", "p"),           // idempotent: distance 0 before reflection
        ("(join p (join q r))", "(join r (join q p))"), // commutative
        ("(bot)", "p"),                // bottom is isolated
    ];
    for (s, t) in pairs {
        let ts = parse_term(s, &v.signature).unwrap();
        let tt = parse_term(t, &v.signature).unwrap();
        println!("  d({s}, {t}) = {}", fmt(model.dist(&ts, &tt).unwrap()));
    }
}
