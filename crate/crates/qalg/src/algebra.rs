//! Finite quantitative algebras: a metric carrier with nonexpanding
//! operations, given by explicit tables.

use crate::error::{Error, Result};
use crate::space::{MetricSpace, SpaceFile};
use crate::term::{Signature, Term};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Total `n`-ary operation on a carrier of `size` points, stored as a flat
/// table in mixed-radix (row-major) argument order.
#[derive(Debug, Clone)]
pub struct OpTable {
    pub arity: usize,
    pub size: usize,
    values: Vec<usize>,
}

impl OpTable {
    pub fn new(arity: usize, size: usize, values: Vec<usize>) -> Result<Self> {
        let expected = size.checked_pow(arity as u32).ok_or_else(|| {
            Error::Invalid(format!("operation table of arity {arity} too large"))
        })?;
        if values.len() != expected {
            return Err(Error::Invalid(format!(
                "operation table has {} entries, expected {expected}",
                values.len()
            )));
        }
        if values.iter().any(|&v| v >= size.max(1)) {
            return Err(Error::Invalid(
                "operation table value outside the carrier".to_string(),
            ));
        }
        Ok(OpTable {
            arity,
            size,
            values,
        })
    }

    /// Builds the table from a function on argument tuples.
    pub fn from_fn(arity: usize, size: usize, f: impl Fn(&[usize]) -> usize) -> Result<Self> {
        let mut values = Vec::new();
        for_each_tuple(arity, size, |args| values.push(f(args)));
        OpTable::new(arity, size, values)
    }

    pub fn apply(&self, args: &[usize]) -> usize {
        debug_assert_eq!(args.len(), self.arity);
        let mut i = 0usize;
        for &a in args {
            i = i * self.size + a;
        }
        self.values[i]
    }
}

/// Visits every tuple in `{0..size}^arity` in lexicographic order.
pub fn for_each_tuple(arity: usize, size: usize, mut f: impl FnMut(&[usize])) {
    if arity == 0 {
        f(&[]);
        return;
    }
    if size == 0 {
        return;
    }
    let mut tuple = vec![0usize; arity];
    'outer: loop {
        f(&tuple);
        for k in (0..arity).rev() {
            tuple[k] += 1;
            if tuple[k] < size {
                continue 'outer;
            }
            tuple[k] = 0;
        }
        break;
    }
}

#[derive(Debug, Clone)]
pub struct FiniteQuantAlgebra {
    pub carrier: MetricSpace,
    interp: BTreeMap<String, OpTable>,
}

/// Outcome of the nonexpansiveness sweep: either a clean pass or the first
/// violating symbol with the offending argument tuples.
#[derive(Debug, Clone, Serialize)]
pub struct NonexpansionReport {
    pub pass: bool,
    pub witness: Option<NonexpansionWitness>,
}

#[derive(Debug, Clone, Serialize)]
pub struct NonexpansionWitness {
    pub symbol: String,
    pub args: Vec<String>,
    pub args2: Vec<String>,
    pub arg_dist: f64,
    pub result_dist: f64,
}

impl FiniteQuantAlgebra {
    pub fn new(carrier: MetricSpace, interp: BTreeMap<String, OpTable>) -> Result<Self> {
        for (symbol, table) in &interp {
            if table.size != carrier.len() {
                return Err(Error::Invalid(format!(
                    "table for `{symbol}` is over {} points, carrier has {}",
                    table.size,
                    carrier.len()
                )));
            }
        }
        Ok(FiniteQuantAlgebra { carrier, interp })
    }

    pub fn signature(&self) -> Signature {
        Signature {
            ops: self
                .interp
                .iter()
                .map(|(name, t)| (name.clone(), t.arity))
                .collect(),
        }
    }

    pub fn op(&self, symbol: &str) -> Result<&OpTable> {
        self.interp
            .get(symbol)
            .ok_or_else(|| Error::MissingInterpretation(symbol.to_string()))
    }

    /// Structural evaluation: leaves resolve through `env` first, then as
    /// carrier point names.
    pub fn evaluate(&self, t: &Term, env: &BTreeMap<String, usize>) -> Result<usize> {
        match t {
            Term::Leaf(x) => match env.get(x) {
                Some(&i) => Ok(i),
                None => self
                    .carrier
                    .index_of(x)
                    .map_err(|_| Error::UnboundVariable(x.clone())),
            },
            Term::Node(symbol, children) => {
                let table = self.op(symbol)?;
                if children.len() != table.arity {
                    return Err(Error::ArityMismatch {
                        symbol: symbol.clone(),
                        expected: table.arity,
                        found: children.len(),
                    });
                }
                let args: Vec<usize> = children
                    .iter()
                    .map(|c| self.evaluate(c, env))
                    .collect::<Result<_>>()?;
                Ok(table.apply(&args))
            }
        }
    }

    /// Exhaustively checks `d(op(x̄), op(ȳ)) <= max_i d(x_i, y_i)` for every
    /// symbol and every pair of argument tuples.
    pub fn check_nonexpanding(&self) -> NonexpansionReport {
        let n = self.carrier.len();
        for (symbol, table) in &self.interp {
            let mut tuples = Vec::new();
            for_each_tuple(table.arity, n, |t| tuples.push(t.to_vec()));
            for xs in &tuples {
                for ys in &tuples {
                    let arg_dist = xs
                        .iter()
                        .zip(ys)
                        .map(|(&x, &y)| self.carrier.dist(x, y))
                        .fold(0.0f64, f64::max);
                    let result_dist = self.carrier.dist(table.apply(xs), table.apply(ys));
                    if result_dist > arg_dist {
                        let name = |is: &[usize]| {
                            is.iter().map(|&i| self.carrier.point(i).to_string()).collect()
                        };
                        return NonexpansionReport {
                            pass: false,
                            witness: Some(NonexpansionWitness {
                                symbol: symbol.clone(),
                                args: name(xs),
                                args2: name(ys),
                                arg_dist,
                                result_dist,
                            }),
                        };
                    }
                }
            }
        }
        NonexpansionReport {
            pass: true,
            witness: None,
        }
    }
}

// --- JSON form -------------------------------------------------------------

/// Algebra file: a carrier space and operation tables. A binary table is a
/// nested array of result point names indexed by the carrier's point order;
/// a nullary operation is a bare point name.
#[derive(Debug, Serialize, Deserialize)]
pub struct AlgebraFile {
    pub carrier: SpaceFile,
    pub ops: BTreeMap<String, serde_json::Value>,
}

fn table_from_json(
    symbol: &str,
    value: &serde_json::Value,
    carrier: &MetricSpace,
) -> Result<OpTable> {
    // nesting depth of arrays gives the arity; leaves are point names
    let mut flat = Vec::new();
    let arity = flatten_table(symbol, value, carrier, 0, &mut flat)?;
    OpTable::new(arity, carrier.len(), flat)
}

fn flatten_table(
    symbol: &str,
    value: &serde_json::Value,
    carrier: &MetricSpace,
    depth: usize,
    out: &mut Vec<usize>,
) -> Result<usize> {
    match value {
        serde_json::Value::String(name) => {
            out.push(carrier.index_of(name)?);
            Ok(depth)
        }
        serde_json::Value::Array(rows) => {
            if rows.len() != carrier.len() {
                return Err(Error::Invalid(format!(
                    "table for `{symbol}` has {} rows at depth {depth}, carrier has {} points",
                    rows.len(),
                    carrier.len()
                )));
            }
            let mut arity = depth + 1;
            for row in rows {
                arity = flatten_table(symbol, row, carrier, depth + 1, out)?;
            }
            Ok(arity)
        }
        other => Err(Error::Invalid(format!(
            "table for `{symbol}`: expected a point name or array, got {other}"
        ))),
    }
}

impl AlgebraFile {
    pub fn to_algebra(&self) -> Result<FiniteQuantAlgebra> {
        let carrier = self.carrier.to_metric()?;
        let mut interp = BTreeMap::new();
        for (symbol, value) in &self.ops {
            interp.insert(symbol.clone(), table_from_json(symbol, value, &carrier)?);
        }
        FiniteQuantAlgebra::new(carrier, interp)
    }
}

pub fn load_algebra(path: &std::path::Path) -> Result<FiniteQuantAlgebra> {
    let text = std::fs::read_to_string(path)?;
    let file: AlgebraFile = serde_json::from_str(&text)?;
    file.to_algebra()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse_term_raw;

    /// Two-element join-semilattice {0, 1} with join and bottom.
    fn semilattice2() -> FiniteQuantAlgebra {
        let carrier = MetricSpace::pair("0", "1", 1.0).unwrap();
        let mut interp = BTreeMap::new();
        interp.insert(
            "join".to_string(),
            OpTable::from_fn(2, 2, |a| a[0].max(a[1])).unwrap(),
        );
        interp.insert("bot".to_string(), OpTable::from_fn(0, 2, |_| 0).unwrap());
        FiniteQuantAlgebra::new(carrier, interp).unwrap()
    }

    #[test]
    fn evaluate_join_term() {
        let a = semilattice2();
        let env = BTreeMap::from([("x".to_string(), 0), ("y".to_string(), 1)]);
        let t = parse_term_raw("(join x y)").unwrap();
        assert_eq!(a.evaluate(&t, &env).unwrap(), 1);
        let t = parse_term_raw("(join x (bot))").unwrap();
        assert_eq!(a.evaluate(&t, &env).unwrap(), 0);
        // carrier names resolve directly without an env binding
        let t = parse_term_raw("(join 1 0)").unwrap();
        assert_eq!(a.evaluate(&t, &BTreeMap::new()).unwrap(), 1);
    }

    #[test]
    fn evaluate_unbound_leaf() {
        let a = semilattice2();
        let t = parse_term_raw("(join x z)").unwrap();
        let env = BTreeMap::from([("x".to_string(), 0)]);
        assert!(matches!(
            a.evaluate(&t, &env),
            Err(Error::UnboundVariable(v)) if v == "z"
        ));
    }

    #[test]
    fn join_is_nonexpanding() {
        let report = semilattice2().check_nonexpanding();
        assert!(report.pass);
    }

    #[test]
    fn expanding_op_caught_with_witness() {
        // 3 points with d(p,q) = 0.2 but f moves them distance 1 apart
        let carrier = crate::space::SpaceFile {
            points: vec!["p".into(), "q".into(), "r".into()],
            dist: vec![
                ("p".into(), "q".into(), crate::dist::DistRepr::Number(0.2)),
                ("p".into(), "r".into(), crate::dist::DistRepr::Number(1.0)),
                ("q".into(), "r".into(), crate::dist::DistRepr::Number(1.0)),
            ],
            default: None,
        }
        .to_metric()
        .unwrap();
        let mut interp = BTreeMap::new();
        // f(p) = p, f(q) = r: d(f p, f q) = 1 > 0.2 = d(p, q)
        interp.insert(
            "f".to_string(),
            OpTable::new(1, 3, vec![0, 2, 2]).unwrap(),
        );
        let a = FiniteQuantAlgebra::new(carrier, interp).unwrap();
        let report = a.check_nonexpanding();
        assert!(!report.pass);
        let w = report.witness.unwrap();
        assert_eq!(w.symbol, "f");
        assert_eq!(w.arg_dist, 0.2);
        assert_eq!(w.result_dist, 1.0);
    }

    #[test]
    fn one_point_algebra_passes() {
        let carrier = MetricSpace::singleton("p");
        let mut interp = BTreeMap::new();
        interp.insert("f".to_string(), OpTable::from_fn(2, 1, |_| 0).unwrap());
        let a = FiniteQuantAlgebra::new(carrier, interp).unwrap();
        assert!(a.check_nonexpanding().pass);
    }

    #[test]
    fn algebra_file_roundtrip() {
        let json = r#"{
            "carrier": {"points": ["e", "m"], "dist": [["e", "m", 0.3]]},
            "ops": {"mul": [["e", "m"], ["m", "m"]], "e": "e"}
        }"#;
        let file: AlgebraFile = serde_json::from_str(json).unwrap();
        let a = file.to_algebra().unwrap();
        let sig = a.signature();
        assert_eq!(sig.ops["mul"], 2);
        assert_eq!(sig.ops["e"], 0);
        let mul = a.op("mul").unwrap();
        assert_eq!(mul.apply(&[1, 1]), 1); // mm = m
        assert_eq!(mul.apply(&[0, 1]), 1); // em = m
        assert!(a.check_nonexpanding().pass);
    }

    #[test]
    fn table_shape_errors() {
        assert!(OpTable::new(2, 2, vec![0, 1, 1]).is_err()); // wrong length
        assert!(OpTable::new(1, 2, vec![0, 5]).is_err()); // value out of range
    }
}
