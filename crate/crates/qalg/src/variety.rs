//! Quantitative equations `t =_eps t'`, satisfaction in finite algebras,
//! variety presentations, and sound upper bounds on the entailment
//! pseudometric via bounded term rewriting.

use crate::algebra::{for_each_tuple, FiniteQuantAlgebra};
use crate::dist::{leq, DistRepr, INF};
use crate::error::{Error, Result};
use crate::space::{shortest_path_closure, MetricSpace, PseudoSpace};
use crate::term::{
    formal_var, formal_var_index, parse_term, Signature, Term, TermUniverse,
};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// A quantitative equation: every interpretation of the variables must
/// evaluate the two sides to points at distance <= eps.
#[derive(Debug, Clone)]
pub struct QuantEquation {
    pub lhs: Term,
    pub rhs: Term,
    pub eps: f64,
}

impl QuantEquation {
    pub fn new(lhs: Term, rhs: Term, eps: f64) -> Self {
        QuantEquation { lhs, rhs, eps }
    }

    pub fn ordinary(lhs: Term, rhs: Term) -> Self {
        QuantEquation::new(lhs, rhs, 0.0)
    }

    /// The formal variables occurring on either side, sorted by index.
    pub fn variables(&self) -> Vec<String> {
        let mut vars = BTreeSet::new();
        for side in [&self.lhs, &self.rhs] {
            for leaf in side.leaves() {
                if formal_var_index(leaf).is_some() {
                    vars.insert(leaf.to_string());
                }
            }
        }
        let mut out: Vec<String> = vars.into_iter().collect();
        out.sort_by_key(|v| formal_var_index(v));
        out
    }

    pub fn display(&self) -> String {
        format!("{} =_{} {}", self.lhs, crate::dist::fmt(self.eps), self.rhs)
    }
}

#[derive(Debug, Clone)]
pub struct VarietyPresentation {
    pub name: Option<String>,
    pub signature: Signature,
    pub equations: Vec<QuantEquation>,
}

impl VarietyPresentation {
    pub fn is_ordinary(&self) -> bool {
        self.equations.iter().all(|e| e.eps == 0.0)
    }

    pub fn require_ordinary(&self) -> Result<()> {
        match self.equations.iter().find(|e| e.eps != 0.0) {
            None => Ok(()),
            Some(e) => Err(Error::NotOrdinary(e.display(), e.eps)),
        }
    }

    pub fn max_arity(&self) -> usize {
        self.signature.max_arity()
    }
}

// --- satisfaction ----------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct SatisfactionOutcome {
    pub equation: String,
    pub pass: bool,
    /// Largest distance between the two sides over all interpretations.
    pub worst_dist: f64,
    /// Interpretation realizing `worst_dist`.
    pub worst_env: BTreeMap<String, String>,
}

/// Enumerates every interpretation of the equation's variables in the
/// carrier; passes iff all keep the two sides within eps.
pub fn satisfies(a: &FiniteQuantAlgebra, e: &QuantEquation) -> Result<SatisfactionOutcome> {
    let vars = e.variables();
    let n = a.carrier.len();
    let mut worst_dist = -1.0f64;
    let mut worst_env = BTreeMap::new();
    let mut failure: Option<Error> = None;
    for_each_tuple(vars.len(), n, |tuple| {
        if failure.is_some() {
            return;
        }
        let env: BTreeMap<String, usize> = vars
            .iter()
            .cloned()
            .zip(tuple.iter().copied())
            .collect();
        let d = (|| -> Result<f64> {
            let l = a.evaluate(&e.lhs, &env)?;
            let r = a.evaluate(&e.rhs, &env)?;
            Ok(a.carrier.dist(l, r))
        })();
        match d {
            Ok(d) if d > worst_dist => {
                worst_dist = d;
                worst_env = env
                    .iter()
                    .map(|(v, &i)| (v.clone(), a.carrier.point(i).to_string()))
                    .collect();
            }
            Ok(_) => {}
            Err(err) => failure = Some(err),
        }
    });
    if let Some(err) = failure {
        return Err(err);
    }
    let worst_dist = worst_dist.max(0.0); // empty carrier: vacuous pass
    Ok(SatisfactionOutcome {
        equation: e.display(),
        pass: leq(worst_dist, e.eps),
        worst_dist,
        worst_env,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SatisfactionReport {
    pub pass: bool,
    pub per_equation: Vec<SatisfactionOutcome>,
}

pub fn satisfies_all(
    a: &FiniteQuantAlgebra,
    v: &VarietyPresentation,
) -> Result<SatisfactionReport> {
    let mut per_equation = Vec::new();
    for e in &v.equations {
        per_equation.push(satisfies(a, e)?);
    }
    Ok(SatisfactionReport {
        pass: per_equation.iter().all(|o| o.pass),
        per_equation,
    })
}

// --- entailment upper bounds via bounded rewriting -------------------------

/// Matches `pattern` against `t`, extending `binding`; pattern leaves that
/// are formal variables match any subterm (consistently), other leaves match
/// literally.
fn match_pattern(pattern: &Term, t: &Term, binding: &mut BTreeMap<String, Term>) -> bool {
    match pattern {
        Term::Leaf(v) if formal_var_index(v).is_some() => match binding.get(v) {
            Some(bound) => bound == t,
            None => {
                binding.insert(v.clone(), t.clone());
                true
            }
        },
        Term::Leaf(x) => matches!(t, Term::Leaf(y) if x == y),
        Term::Node(f, ps) => match t {
            Term::Node(g, cs) if f == g && ps.len() == cs.len() => ps
                .iter()
                .zip(cs)
                .all(|(p, c)| match_pattern(p, c, binding)),
            _ => false,
        },
    }
}

/// True when `s2` arises from `s` by replacing one subterm that is an
/// instance of `lhs` by the corresponding instance of `rhs`. Checking both
/// terms against the two patterns (instead of generating replacements)
/// handles variables that occur on only one side.
fn rewrite_related(s: &Term, s2: &Term, lhs: &Term, rhs: &Term) -> bool {
    let mut binding = BTreeMap::new();
    if match_pattern(lhs, s, &mut binding) && match_pattern(rhs, s2, &mut binding) {
        return true;
    }
    match (s, s2) {
        (Term::Node(f, cs), Term::Node(g, ds)) if f == g && cs.len() == ds.len() => {
            // exactly one child position differs and is itself related
            let mut seen_diff = false;
            for (c, d) in cs.iter().zip(ds) {
                if c == d {
                    continue;
                }
                if seen_diff || !rewrite_related(c, d, lhs, rhs) {
                    return false;
                }
                seen_diff = true;
            }
            seen_diff
        }
        _ => false,
    }
}

/// Cheapest single rewrite step between two terms, over all equations in
/// either orientation; infinity when no equation applies.
fn step_weight(v: &VarietyPresentation, s: &Term, s2: &Term) -> f64 {
    let mut w = INF;
    for e in &v.equations {
        if e.eps < w
            && (rewrite_related(s, s2, &e.lhs, &e.rhs) || rewrite_related(s, s2, &e.rhs, &e.lhs))
        {
            w = e.eps;
        }
    }
    w
}

/// Shortest-path closure of single rewrite steps over the universe: a sound,
/// budget-monotone upper bound on the entailment pseudometric, as a full
/// distance table in universe order.
pub fn entailment_table(v: &VarietyPresentation, universe: &TermUniverse) -> Vec<f64> {
    let n = universe.len();
    let mut d = vec![INF; n * n];
    for i in 0..n {
        d[i * n + i] = 0.0;
        for j in i + 1..n {
            let w = step_weight(v, universe.term(i), universe.term(j));
            d[i * n + j] = w;
            d[j * n + i] = w;
        }
    }
    shortest_path_closure(n, &mut d);
    d
}

/// The entailment table as a pseudometric space whose points are the
/// universe's term texts (for meets against other term pseudometrics).
pub fn entailment_space(v: &VarietyPresentation, universe: &TermUniverse) -> Result<PseudoSpace> {
    let points = universe.terms.iter().map(|t| t.to_string()).collect();
    PseudoSpace::from_table(points, entailment_table(v, universe))
}

/// Upper bound on the entailment distance between two universe terms.
pub fn entailment_upper_bound(
    v: &VarietyPresentation,
    t: &Term,
    t2: &Term,
    universe: &TermUniverse,
) -> Result<f64> {
    let i = universe
        .index_of(t)
        .ok_or_else(|| Error::Invalid(format!("term `{t}` not in the bounded universe")))?;
    let j = universe
        .index_of(t2)
        .ok_or_else(|| Error::Invalid(format!("term `{t2}` not in the bounded universe")))?;
    Ok(entailment_table(v, universe)[i * universe.len() + j])
}

// --- built-in presentations ------------------------------------------------

fn mul(l: Term, r: Term) -> Term {
    Term::node("mul", vec![l, r])
}

fn join(l: Term, r: Term) -> Term {
    Term::node("join", vec![l, r])
}

/// Monoids: associativity and the two unit laws for a nullary `e`.
pub fn monoid_presentation() -> VarietyPresentation {
    let x0 = formal_var(0);
    let x1 = formal_var(1);
    let x2 = formal_var(2);
    let e = Term::node("e", vec![]);
    VarietyPresentation {
        name: Some("monoid".to_string()),
        signature: Signature::new([("mul", 2), ("e", 0)]),
        equations: vec![
            QuantEquation::ordinary(
                mul(x0.clone(), mul(x1.clone(), x2.clone())),
                mul(mul(x0.clone(), x1.clone()), x2),
            ),
            QuantEquation::ordinary(mul(e.clone(), x0.clone()), x0.clone()),
            QuantEquation::ordinary(mul(x0.clone(), e), x0),
        ],
    }
}

/// Join-semilattices with bottom: commutative idempotent monoids.
pub fn semilattice_presentation() -> VarietyPresentation {
    let x0 = formal_var(0);
    let x1 = formal_var(1);
    let x2 = formal_var(2);
    let bot = Term::node("bot", vec![]);
    VarietyPresentation {
        name: Some("semilattice".to_string()),
        signature: Signature::new([("join", 2), ("bot", 0)]),
        equations: vec![
            QuantEquation::ordinary(
                join(x0.clone(), join(x1.clone(), x2.clone())),
                join(join(x0.clone(), x1.clone()), x2),
            ),
            QuantEquation::ordinary(join(x0.clone(), x1.clone()), join(x1, x0.clone())),
            QuantEquation::ordinary(join(x0.clone(), x0.clone()), x0.clone()),
            QuantEquation::ordinary(join(bot, x0.clone()), x0),
        ],
    }
}

/// Two binary operations kept eps-close: `sigma1(x0,x1) =_eps sigma2(x0,x1)`.
pub fn two_eps_ops_presentation(eps: f64) -> Result<VarietyPresentation> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::EpsOutOfRange(eps));
    }
    let args = || vec![formal_var(0), formal_var(1)];
    Ok(VarietyPresentation {
        name: Some(format!("two-eps-ops:{eps}")),
        signature: Signature::two_binary(),
        equations: vec![QuantEquation::new(
            Term::node("sigma1", args()),
            Term::node("sigma2", args()),
            eps,
        )],
    })
}

/// No operations, all points eps-close: `x0 =_eps x1`.
pub fn small_space_presentation(eps: f64) -> VarietyPresentation {
    VarietyPresentation {
        name: Some(format!("small:{eps}")),
        signature: Signature { ops: BTreeMap::new() },
        equations: vec![QuantEquation::new(formal_var(0), formal_var(1), eps)],
    }
}

/// Actions of a finite quantitative monoid `M`: one unary symbol per element
/// (named by the carrier point), composition and unit laws, and
/// `m x0 =_{d(m,m')} m' x0` for every element pair at finite distance.
pub fn action_presentation(m: &FiniteQuantAlgebra) -> Result<VarietyPresentation> {
    let mul_table = m.op("mul")?;
    if mul_table.arity != 2 {
        return Err(Error::Invalid("monoid `mul` must be binary".to_string()));
    }
    let unit_table = m.op("e")?;
    if unit_table.arity != 0 {
        return Err(Error::Invalid("monoid `e` must be nullary".to_string()));
    }
    let unit = unit_table.apply(&[]);
    let n = m.carrier.len();
    let act = |i: usize, t: Term| Term::node(m.carrier.point(i).to_string(), vec![t]);
    let x0 = formal_var(0);
    let mut equations = vec![QuantEquation::ordinary(act(unit, x0.clone()), x0.clone())];
    for i in 0..n {
        for j in 0..n {
            equations.push(QuantEquation::ordinary(
                act(i, act(j, x0.clone())),
                act(mul_table.apply(&[i, j]), x0.clone()),
            ));
            if i < j {
                let d = m.carrier.dist(i, j);
                if d.is_finite() {
                    equations.push(QuantEquation::new(
                        act(i, x0.clone()),
                        act(j, x0.clone()),
                        d,
                    ));
                }
            }
        }
    }
    let signature = Signature {
        ops: m.carrier.points().iter().map(|p| (p.clone(), 1)).collect(),
    };
    Ok(VarietyPresentation {
        name: Some("action".to_string()),
        signature,
        equations,
    })
}

/// Exception constants from a space `E`: one nullary symbol per point, kept
/// at their `E`-distances.
pub fn exceptions_presentation(e: &MetricSpace) -> VarietyPresentation {
    let constant = |i: usize| Term::node(e.point(i).to_string(), vec![]);
    let mut equations = Vec::new();
    for i in 0..e.len() {
        for j in i + 1..e.len() {
            let d = e.dist(i, j);
            if d.is_finite() {
                equations.push(QuantEquation::new(constant(i), constant(j), d));
            }
        }
    }
    VarietyPresentation {
        name: Some("exceptions".to_string()),
        signature: Signature {
            ops: e.points().iter().map(|p| (p.clone(), 0)).collect(),
        },
        equations,
    }
}

// --- JSON form -------------------------------------------------------------

#[derive(Debug, Serialize, Deserialize)]
pub struct VarietyFile {
    pub signature: Signature,
    #[serde(default)]
    pub vars: Vec<String>,
    pub equations: Vec<EquationFile>,
    #[serde(default)]
    pub name: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct EquationFile {
    pub lhs: String,
    pub rhs: String,
    #[serde(default)]
    pub eps: Option<DistRepr>,
}

impl VarietyFile {
    pub fn to_presentation(&self) -> Result<VarietyPresentation> {
        let mut equations = Vec::new();
        for e in &self.equations {
            let eps = match &e.eps {
                Some(r) => r.to_dist()?,
                None => 0.0,
            };
            equations.push(QuantEquation::new(
                parse_term(&e.lhs, &self.signature)?,
                parse_term(&e.rhs, &self.signature)?,
                eps,
            ));
        }
        Ok(VarietyPresentation {
            name: self.name.clone(),
            signature: self.signature.clone(),
            equations,
        })
    }
}

/// A small worked example: the {e, m} monoid with `m * m = m` and
/// `d(e, m) = 0.3`, used throughout the examples and tests as the acting
/// monoid for the action variety.
pub fn example_monoid() -> FiniteQuantAlgebra {
    let carrier = MetricSpace::pair("e", "m", 0.3).unwrap();
    let mut interp = BTreeMap::new();
    interp.insert(
        "mul".to_string(),
        crate::algebra::OpTable::from_fn(2, 2, |a| a[0].max(a[1])).unwrap(),
    );
    interp.insert(
        "e".to_string(),
        crate::algebra::OpTable::from_fn(0, 2, |_| 0).unwrap(),
    );
    FiniteQuantAlgebra::new(carrier, interp).unwrap()
}

pub fn load_presentation(path: &std::path::Path) -> Result<VarietyPresentation> {
    let text = std::fs::read_to_string(path)?;
    let file: VarietyFile = serde_json::from_str(&text)?;
    file.to_presentation()
}
