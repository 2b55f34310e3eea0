//! The free algebra for a monoid acting on a space is the product M x X
//! with the sum metric: moving both the acting element and the point costs
//! the sum of the two moves. The unary bounded construction (term metric
//! met with the equational pseudometric, then reflected) agrees with it.

use qalg::dist::fmt;
use qalg::free::closed::monoid_action_monad;
use qalg::free::generic::unary_free;
use qalg::space::MetricSpace;
use qalg::term::parse_term;
use qalg::variety::{action_presentation, example_monoid};

fn main() {
    // acting monoid {e, m} with m absorbing and d(e, m) = 0.3
    let m = example_monoid();
    let x = MetricSpace::pair("a", "b", 1.0).unwrap();

    let closed = monoid_action_monad(&m, &x).unwrap();
    println!("free action algebra: {} elements (pairs in M x X)", closed.space.len());

    let v = action_presentation(&m).unwrap();
    let model = unary_free(&v, &x, 3).unwrap();
    println!("reflected classes from the unary construction: {}", model.reflection.len());

    let pairs = [
        ("(m a)", "a"),     // move e -> m only: 0.3
        ("(m a)", "(m b)"), // move a -> b only: 1
        ("(m a)", "b"),     // move both: 0.3 + 1 = 1.3, the sum metric at work
        ("(e a)", "a"),     // unit law: same class
        ("(m (m a))", "(m a)"), // m is absorbing: same class
    ];
    for (s, t) in pairs {
        let ts = parse_term(s, &v.signature).unwrap();
        let tt = parse_term(t, &v.signature).unwrap();
        println!("  d({s}, {t}) = {}", fmt(model.dist(&ts, &tt).unwrap()));
    }
}
