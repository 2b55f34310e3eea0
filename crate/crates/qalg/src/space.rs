//! Finite extended (pseudo)metric spaces and their standard constructions:
//! products, tensor, coproduct, discrete spaces, pseudometric meets, metric
//! reflection, and diagonal neighborhoods.

use crate::dist::{self, DistRepr, INF, TOL};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::ops::Deref;

/// A finite point set with a symmetric extended-distance table.
///
/// Invariants (checked at construction): zero diagonal, symmetry, triangle
/// inequality. Distinct points at distance 0 are allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoSpace {
    points: Vec<String>,
    index: HashMap<String, usize>,
    d: Vec<f64>,
}

impl PseudoSpace {
    /// Builds a pseudometric space from a full row-major distance table and
    /// validates all axioms.
    pub fn from_table(points: Vec<String>, d: Vec<f64>) -> Result<Self> {
        assert_eq!(d.len(), points.len() * points.len());
        let mut index = HashMap::new();
        for (i, p) in points.iter().enumerate() {
            if index.insert(p.clone(), i).is_some() {
                return Err(Error::DuplicatePoint(p.clone()));
            }
        }
        let space = PseudoSpace { points, index, d };
        space.validate()?;
        Ok(space)
    }

    /// Builds from a sparse list of off-diagonal entries. Unlisted pairs take
    /// `default`; the diagonal is forced to 0 and symmetry is completed.
    pub fn from_entries(
        points: Vec<String>,
        entries: &[(String, String, f64)],
        default: f64,
    ) -> Result<Self> {
        let n = points.len();
        let mut index = HashMap::new();
        for (i, p) in points.iter().enumerate() {
            if index.insert(p.clone(), i).is_some() {
                return Err(Error::DuplicatePoint(p.clone()));
            }
        }
        let mut d = vec![default; n * n];
        for i in 0..n {
            d[i * n + i] = 0.0;
        }
        for (p, q, v) in entries {
            let i = *index.get(p).ok_or_else(|| Error::UnknownPoint(p.clone()))?;
            let j = *index.get(q).ok_or_else(|| Error::UnknownPoint(q.clone()))?;
            dist::check(*v)?;
            if i != j {
                d[i * n + j] = *v;
                d[j * n + i] = *v;
            } else if *v != 0.0 {
                return Err(Error::NonzeroDiagonal(p.clone()));
            }
        }
        let space = PseudoSpace { points, index, d };
        space.validate()?;
        Ok(space)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &str {
        &self.points[i]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownPoint(name.to_string()))
    }

    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.points.len() + j]
    }

    pub fn dist_by_name(&self, p: &str, q: &str) -> Result<f64> {
        Ok(self.dist(self.index_of(p)?, self.index_of(q)?))
    }

    pub fn table(&self) -> &[f64] {
        &self.d
    }

    /// Exhaustive check of the pseudometric axioms over all triples.
    pub fn validate(&self) -> Result<()> {
        let n = self.len();
        for i in 0..n {
            if self.dist(i, i) != 0.0 {
                return Err(Error::NonzeroDiagonal(self.points[i].clone()));
            }
            for j in 0..n {
                dist::check(self.dist(i, j))?;
                if self.dist(i, j) != self.dist(j, i) {
                    return Err(Error::Asymmetric(
                        self.points[i].clone(),
                        self.points[j].clone(),
                    ));
                }
            }
        }
        for i in 0..n {
            for k in 0..n {
                let ik = self.dist(i, k);
                if ik.is_infinite() {
                    continue;
                }
                for j in 0..n {
                    let via = ik + self.dist(k, j);
                    if self.dist(i, j) > via + TOL {
                        return Err(Error::TriangleViolation {
                            a: self.points[i].clone(),
                            b: self.points[k].clone(),
                            c: self.points[j].clone(),
                            direct: self.dist(i, j),
                            via,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// True when no two distinct points sit at distance 0.
    pub fn separates_points(&self) -> bool {
        let n = self.len();
        for i in 0..n {
            for j in i + 1..n {
                if self.dist(i, j) == 0.0 {
                    return false;
                }
            }
        }
        true
    }

    pub fn into_metric(self) -> Result<MetricSpace> {
        let n = self.len();
        for i in 0..n {
            for j in i + 1..n {
                if self.dist(i, j) == 0.0 {
                    return Err(Error::ZeroDistance(
                        self.points[i].clone(),
                        self.points[j].clone(),
                    ));
                }
            }
        }
        Ok(MetricSpace(self))
    }
}

/// A pseudometric space that additionally separates points.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricSpace(PseudoSpace);

impl Deref for MetricSpace {
    type Target = PseudoSpace;

    fn deref(&self) -> &PseudoSpace {
        &self.0
    }
}

impl MetricSpace {
    pub fn from_table(points: Vec<String>, d: Vec<f64>) -> Result<Self> {
        PseudoSpace::from_table(points, d)?.into_metric()
    }

    pub fn from_entries(
        points: Vec<String>,
        entries: &[(String, String, f64)],
        default: f64,
    ) -> Result<Self> {
        PseudoSpace::from_entries(points, entries, default)?.into_metric()
    }

    pub fn as_pseudo(&self) -> &PseudoSpace {
        &self.0
    }

    pub fn into_pseudo(self) -> PseudoSpace {
        self.0
    }

    /// Two points at a given distance; the workhorse of the test suite.
    pub fn pair(a: &str, b: &str, d: f64) -> Result<Self> {
        MetricSpace::from_entries(
            vec![a.to_string(), b.to_string()],
            &[(a.to_string(), b.to_string(), d)],
            INF,
        )
    }

    pub fn singleton(a: &str) -> Self {
        MetricSpace(PseudoSpace::from_table(vec![a.to_string()], vec![0.0]).unwrap())
    }
}

/// The discrete space: all nonzero distances are infinite. The identity map
/// from `discrete(X.points())` to `X` is the comparison `i_X`.
pub fn discrete<S: Into<String>>(ids: impl IntoIterator<Item = S>) -> Result<MetricSpace> {
    let points: Vec<String> = ids.into_iter().map(Into::into).collect();
    let n = points.len();
    let mut d = vec![INF; n * n];
    for i in 0..n {
        d[i * n + i] = 0.0;
    }
    MetricSpace::from_table(points, d)
}

fn product_points(x: &PseudoSpace, y: &PseudoSpace) -> Vec<String> {
    let mut points = Vec::with_capacity(x.len() * y.len());
    for p in x.points() {
        for q in y.points() {
            points.push(format!("({p},{q})"));
        }
    }
    points
}

/// Categorical product: cartesian product with the maximum metric.
pub fn max_product(x: &MetricSpace, y: &MetricSpace) -> MetricSpace {
    combine_product(x, y, f64::max)
}

/// Monoidal tensor: cartesian product with the sum metric.
pub fn sum_tensor(x: &MetricSpace, y: &MetricSpace) -> MetricSpace {
    combine_product(x, y, |a, b| a + b)
}

fn combine_product(x: &MetricSpace, y: &MetricSpace, f: fn(f64, f64) -> f64) -> MetricSpace {
    let (nx, ny) = (x.len(), y.len());
    let n = nx * ny;
    let mut d = vec![0.0; n * n];
    for i1 in 0..nx {
        for j1 in 0..ny {
            for i2 in 0..nx {
                for j2 in 0..ny {
                    d[(i1 * ny + j1) * n + (i2 * ny + j2)] = f(x.dist(i1, i2), y.dist(j1, j2));
                }
            }
        }
    }
    MetricSpace::from_table(product_points(x, y), d).expect("product of metrics is a metric")
}

/// Tagged disjoint union with distance infinity across summands. Point names
/// are kept when globally unique, otherwise prefixed with the summand index.
pub fn coproduct(spaces: &[MetricSpace]) -> MetricSpace {
    let mut seen = HashMap::new();
    let mut clash = false;
    for s in spaces {
        for p in s.points() {
            if *seen.entry(p.clone()).or_insert(0u32) >= 1 {
                clash = true;
            }
            *seen.get_mut(p).unwrap() += 1;
        }
    }
    let mut points = Vec::new();
    let mut offsets = Vec::new();
    for (k, s) in spaces.iter().enumerate() {
        offsets.push(points.len());
        for p in s.points() {
            points.push(if clash { format!("{k}:{p}") } else { p.clone() });
        }
    }
    let n = points.len();
    let mut d = vec![INF; n * n];
    for (k, s) in spaces.iter().enumerate() {
        let off = offsets[k];
        for i in 0..s.len() {
            for j in 0..s.len() {
                d[(off + i) * n + (off + j)] = s.dist(i, j);
            }
        }
    }
    MetricSpace::from_table(points, d).expect("coproduct of metrics is a metric")
}

/// All-pairs shortest-path closure in place, with infinity-aware addition.
/// Deterministic iteration order over the point list.
pub fn shortest_path_closure(n: usize, d: &mut [f64]) {
    for k in 0..n {
        for i in 0..n {
            let ik = d[i * n + k];
            if ik.is_infinite() {
                continue;
            }
            for j in 0..n {
                let via = ik + d[k * n + j];
                if via < d[i * n + j] {
                    d[i * n + j] = via;
                }
            }
        }
    }
}

/// The greatest pseudometric below both arguments: shortest paths over the
/// pointwise minimum, i.e. the infimum over chains of min-distance hops.
pub fn meet(d1: &PseudoSpace, d2: &PseudoSpace) -> Result<PseudoSpace> {
    if d1.points() != d2.points() {
        return Err(Error::PointSetMismatch);
    }
    let n = d1.len();
    let mut d: Vec<f64> = (0..n * n).map(|k| d1.d[k].min(d2.d[k])).collect();
    shortest_path_closure(n, &mut d);
    PseudoSpace::from_table(d1.points().to_vec(), d)
}

/// Quotients distance-0 points away. The returned map sends each point index
/// of `p` to its class index; the quotient preserves distances.
pub fn metric_reflection(p: &PseudoSpace) -> (MetricSpace, Vec<usize>) {
    let n = p.len();
    let mut class_of = vec![usize::MAX; n];
    let mut reps: Vec<usize> = Vec::new();
    for i in 0..n {
        let existing = reps.iter().position(|&r| p.dist(r, i) == 0.0);
        match existing {
            Some(c) => class_of[i] = c,
            None => {
                class_of[i] = reps.len();
                reps.push(i);
            }
        }
    }
    let m = reps.len();
    let mut d = vec![0.0; m * m];
    for a in 0..m {
        for b in 0..m {
            d[a * m + b] = p.dist(reps[a], reps[b]);
        }
    }
    let points = reps.iter().map(|&r| p.point(r).to_string()).collect();
    let space = MetricSpace::from_table(points, d)
        .expect("reflection of a valid pseudometric is a metric");
    (space, class_of)
}

/// The eps-neighborhood of the diagonal: all ordered pairs at distance <= eps,
/// with the two projections back to the point set.
#[derive(Debug, Clone)]
pub struct DiagonalNeighborhood {
    pub base: MetricSpace,
    pub eps: f64,
    pub pairs: Vec<(usize, usize)>,
}

pub fn diagonal_neighborhood(x: &MetricSpace, eps: f64) -> DiagonalNeighborhood {
    let mut pairs = Vec::new();
    for i in 0..x.len() {
        for j in 0..x.len() {
            if x.dist(i, j) <= eps {
                pairs.push((i, j));
            }
        }
    }
    DiagonalNeighborhood {
        base: x.clone(),
        eps,
        pairs,
    }
}

impl DiagonalNeighborhood {
    pub fn left(&self, pair: usize) -> usize {
        self.pairs[pair].0
    }

    pub fn right(&self, pair: usize) -> usize {
        self.pairs[pair].1
    }
}

/// JSON form: `{"points": [...], "dist": [["a","b",1.0]], "default": "inf"}`.
#[derive(Debug, Serialize, Deserialize)]
pub struct SpaceFile {
    pub points: Vec<String>,
    #[serde(default)]
    pub dist: Vec<(String, String, DistRepr)>,
    #[serde(default)]
    pub default: Option<DistRepr>,
}

impl SpaceFile {
    pub fn to_pseudo(&self) -> Result<PseudoSpace> {
        let default = match &self.default {
            Some(r) => r.to_dist()?,
            None => INF,
        };
        let mut entries = Vec::new();
        for (p, q, r) in &self.dist {
            entries.push((p.clone(), q.clone(), r.to_dist()?));
        }
        PseudoSpace::from_entries(self.points.clone(), &entries, default)
    }

    pub fn to_metric(&self) -> Result<MetricSpace> {
        self.to_pseudo()?.into_metric()
    }

    pub fn from_space(s: &PseudoSpace) -> Self {
        let mut dist = Vec::new();
        for i in 0..s.len() {
            for j in i + 1..s.len() {
                dist.push((
                    s.point(i).to_string(),
                    s.point(j).to_string(),
                    DistRepr::from_dist(s.dist(i, j)),
                ));
            }
        }
        SpaceFile {
            points: s.points().to_vec(),
            dist,
            default: Some(DistRepr::Word("inf".to_string())),
        }
    }
}

pub fn load_metric_space(path: &std::path::Path) -> Result<MetricSpace> {
    let text = std::fs::read_to_string(path)?;
    let file: SpaceFile = serde_json::from_str(&text)?;
    file.to_metric()
}

pub fn load_pseudo_space(path: &std::path::Path) -> Result<PseudoSpace> {
    let text = std::fs::read_to_string(path)?;
    let file: SpaceFile = serde_json::from_str(&text)?;
    file.to_pseudo()
}
