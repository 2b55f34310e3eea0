//! The free monoid over a metric space of generators: words carry the
//! metric that compares them letter by letter (infinite when lengths
//! differ). The closed form and the bounded congruence-class construction
//! agree on every pair.

use qalg::free::closed::word_monoid;
use qalg::free::generic::{ordinary_free_filtered, MonoidFlatten};
use qalg::space::MetricSpace;
use qalg::term::{parse_term, Term};
use qalg::variety::monoid_presentation;

fn main() {
    let x = MetricSpace::pair("a", "b", 1.0).unwrap();

    // Closed form: words of length <= 3 under the letterwise max metric.
    let w = word_monoid(&x, 3).unwrap();
    println!("free monoid over {{a, b}} with d(a, b) = 1, words of length <= 3:");
    println!("  {} words, e.g. {:?}", w.words.len(), w.space.point(5));

    // Bounded construction: terms over {mul, e} modulo the monoid equations,
    // keeping only classes whose normal form spells a word of length <= 3.
    let model = ordinary_free_filtered(
        &monoid_presentation(),
        &x,
        Box::new(MonoidFlatten),
        3,
        &|nf| nf.leaves().len() <= 3,
    )
    .unwrap();
    println!("  congruence classes found: {}", model.classes.len());

    let sig = &monoid_presentation().signature;
    let pairs = [
        ("(mul a (mul a b))", "(mul (mul a b) b)"), // aab vs abb: differ in one letter
        ("(mul a (mul (e) a))", "(mul a a)"),         // unit law: same class
        ("a", "(mul a a)"),                         // different lengths: infinite
    ];
    for (s, t) in pairs {
        let (ts, tt): (Term, Term) = (parse_term(s, sig).unwrap(), parse_term(t, sig).unwrap());
        let d = model.reflected_dist(&ts, &tt).unwrap();
        println!("  d({s}, {t}) = {}", qalg::dist::fmt(d));
    }
}
