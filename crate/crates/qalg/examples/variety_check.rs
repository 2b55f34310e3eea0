//! Checking a finite quantitative algebra against a variety presentation:
//! every operation must be nonexpanding and every (quantitative) equation
//! must hold within its bound, witnessed per equation.

use qalg::variety::{example_monoid, monoid_presentation, satisfies_all};

fn main() {
    let m = example_monoid();
    let v = monoid_presentation();

    let report = satisfies_all(&m, &v).unwrap();
    println!("algebra {{e, m}} against the monoid presentation:");
    for eq in &report.per_equation {
        println!("  [{}] {}", if eq.pass { "pass" } else { "FAIL" }, eq.equation);
    }
    println!("overall: {}", if report.pass { "pass" } else { "FAIL" });
}
