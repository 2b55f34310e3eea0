//! The meet of two extended pseudometrics: the greatest pseudometric lying
//! below both. It is computed as a shortest-path closure where every hop
//! may be priced by either input, so the meet can drop strictly below the
//! pointwise minimum.

use qalg::dist::fmt;
use qalg::space::{meet, metric_reflection, PseudoSpace};

fn main() {
    let points: Vec<String> = ["u", "v", "w"].map(String::from).to_vec();

    // d1 makes u-v cheap, d2 makes v-w cheap; neither makes u-w cheap alone
    let d1 = PseudoSpace::from_entries(
        points.clone(),
        &[("u".into(), "v".into(), 0.5)],
        10.0,
    )
    .unwrap();
    let d2 = PseudoSpace::from_entries(
        points.clone(),
        &[("v".into(), "w".into(), 0.5)],
        10.0,
    )
    .unwrap();

    let m = meet(&d1, &d2).unwrap();
    println!("d1(u, w) = {}, d2(u, w) = {}", fmt(d1.dist(0, 2)), fmt(d2.dist(0, 2)));
    println!("meet(u, w) = {}  (u -d1-> v -d2-> w)", fmt(m.dist(0, 2)));

    // the reflection identifies points at meet-distance zero
    let (refl, class_of) = metric_reflection(&m);
    println!(
        "reflection: {} classes ({:?})",
        refl.len(),
        class_of
    );
}
