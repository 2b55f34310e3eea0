//! Directed chains of metric spaces and their colimit distances. In the
//! colimit, two points are as close as their images ever get along the
//! chain; the halving chain drives every pair toward distance zero.

use qalg::chain::DirectedChain;

fn main() {
    let chain = DirectedChain::halving(21);
    let d = chain.colimit_distance(0, "a", "b").unwrap();

    println!("halving chain, d(a, b) per stage:");
    for (n, v) in d.per_stage.iter().enumerate().step_by(4) {
        println!("  stage {n:>2}: {v}");
    }
    println!("infimum: {}", d.infimum);
    println!("trend:   {}", d.trend());
    assert!(d.per_stage[20] < 1e-6);
}
