//! Closed-form free-algebra models: word monoids, finite Hausdorff
//! semilattices, exception spaces, small spaces, free monoid actions, and the
//! plain term monad.

use crate::algebra::FiniteQuantAlgebra;
use crate::dist::INF;
use crate::error::{Error, Result};
use crate::space::{sum_tensor, MetricSpace};
use crate::term::{
    dstar, enumerate, universe_cap, Signature, Term, TermUniverse,
};
use crate::variety::{monoid_presentation, satisfies_all};
use std::collections::HashMap;

// --- word monoid -----------------------------------------------------------

/// Free quantitative monoid: words over the base with the letterwise-max
/// metric on equal lengths, infinity across lengths. Truncated to words of
/// length <= `max_len`; concatenation is partial at the boundary.
#[derive(Debug, Clone)]
pub struct WordMonoid {
    pub base: MetricSpace,
    pub max_len: usize,
    pub words: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
    pub space: MetricSpace,
}

pub fn word_distance(base: &MetricSpace, u: &[usize], v: &[usize]) -> f64 {
    if u.len() != v.len() {
        return INF;
    }
    u.iter()
        .zip(v)
        .map(|(&a, &b)| base.dist(a, b))
        .fold(0.0, f64::max)
}

pub fn word_label(base: &MetricSpace, w: &[usize]) -> String {
    if w.is_empty() {
        "ε".to_string()
    } else {
        w.iter()
            .map(|&i| base.point(i).to_string())
            .collect::<Vec<_>>()
            .join(".")
    }
}

pub fn word_monoid(base: &MetricSpace, max_len: usize) -> Result<WordMonoid> {
    let n = base.len() as u128;
    let mut projected = 1u128;
    let mut level = 1u128;
    for _ in 0..max_len {
        level = level.saturating_mul(n);
        projected = projected.saturating_add(level);
    }
    if projected > universe_cap() {
        return Err(Error::UniverseCap {
            projected,
            cap: universe_cap(),
        });
    }
    // by length, then lexicographically in base point order
    let mut words: Vec<Vec<usize>> = vec![vec![]];
    let mut last: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &last {
            for i in 0..base.len() {
                let mut w2 = w.clone();
                w2.push(i);
                next.push(w2);
            }
        }
        words.extend(next.iter().cloned());
        last = next;
    }
    let m = words.len();
    let mut d = vec![0.0; m * m];
    for i in 0..m {
        for j in i + 1..m {
            let v = word_distance(base, &words[i], &words[j]);
            d[i * m + j] = v;
            d[j * m + i] = v;
        }
    }
    let labels = words.iter().map(|w| word_label(base, w)).collect();
    let space = MetricSpace::from_table(labels, d)?;
    let index = words.iter().cloned().zip(0..).collect();
    Ok(WordMonoid {
        base: base.clone(),
        max_len,
        words,
        index,
        space,
    })
}

impl WordMonoid {
    pub fn index_of(&self, w: &[usize]) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.space.dist(i, j)
    }

    /// One-letter word; the monad unit.
    pub fn unit(&self, point: &str) -> Result<usize> {
        let letter = self.base.index_of(point)?;
        Ok(self.index[&vec![letter]])
    }

    pub fn empty(&self) -> usize {
        self.index[&Vec::new()]
    }

    pub fn concat(&self, i: usize, j: usize) -> Result<usize> {
        let mut w = self.words[i].clone();
        w.extend_from_slice(&self.words[j]);
        self.index
            .get(&w)
            .copied()
            .ok_or(Error::WordTruncation(self.max_len))
    }

    /// Evaluates a monoid term (`mul`, `e`, leaves are base points).
    pub fn eval_term(&self, t: &Term) -> Result<usize> {
        match t {
            Term::Leaf(x) => self.unit(x),
            Term::Node(s, cs) if s == "e" && cs.is_empty() => Ok(self.empty()),
            Term::Node(s, cs) if s == "mul" && cs.len() == 2 => {
                let l = self.eval_term(&cs[0])?;
                let r = self.eval_term(&cs[1])?;
                self.concat(l, r)
            }
            Term::Node(s, _) => Err(Error::UnknownSymbol(s.clone())),
        }
    }

    /// The induced map of a base map `f` (letterwise application).
    pub fn lift(&self, target: &WordMonoid, f: &[usize], i: usize) -> usize {
        let w: Vec<usize> = self.words[i].iter().map(|&l| f[l]).collect();
        target.index[&w]
    }
}

// --- finite Hausdorff semilattice ------------------------------------------

/// Free quantitative semilattice: all subsets of the base (as bitmasks) with
/// the Hausdorff metric, union as join and the empty set as bottom.
#[derive(Debug, Clone)]
pub struct HausdorffModel {
    pub base: MetricSpace,
    pub subsets: Vec<u64>,
    pub space: MetricSpace,
}

pub fn hausdorff_distance(base: &MetricSpace, a: u64, b: u64) -> f64 {
    match (a == 0, b == 0) {
        (true, true) => 0.0,
        (true, false) | (false, true) => INF,
        _ => {
            let side = |from: u64, to: u64| {
                (0..base.len())
                    .filter(|i| from & (1 << i) != 0)
                    .map(|i| {
                        (0..base.len())
                            .filter(|j| to & (1 << j) != 0)
                            .map(|j| base.dist(i, j))
                            .fold(INF, f64::min)
                    })
                    .fold(0.0, f64::max)
            };
            f64::max(side(a, b), side(b, a))
        }
    }
}

pub fn subset_label(base: &MetricSpace, a: u64) -> String {
    let names: Vec<&str> = (0..base.len())
        .filter(|i| a & (1 << i) != 0)
        .map(|i| base.point(i))
        .collect();
    format!("{{{}}}", names.join(","))
}

pub fn finite_hausdorff(base: &MetricSpace) -> Result<HausdorffModel> {
    if base.len() > 16 {
        return Err(Error::UniverseCap {
            projected: 1u128 << base.len(),
            cap: 1 << 16,
        });
    }
    let subsets: Vec<u64> = (0..(1u64 << base.len())).collect();
    let m = subsets.len();
    let mut d = vec![0.0; m * m];
    for i in 0..m {
        for j in i + 1..m {
            let v = hausdorff_distance(base, subsets[i], subsets[j]);
            d[i * m + j] = v;
            d[j * m + i] = v;
        }
    }
    let labels = subsets.iter().map(|&a| subset_label(base, a)).collect();
    let space = MetricSpace::from_table(labels, d)?;
    Ok(HausdorffModel {
        base: base.clone(),
        subsets,
        space,
    })
}

impl HausdorffModel {
    pub fn dist(&self, a: u64, b: u64) -> f64 {
        self.space.dist(a as usize, b as usize)
    }

    /// Singleton; the monad unit.
    pub fn unit(&self, point: &str) -> Result<u64> {
        Ok(1 << self.base.index_of(point)?)
    }

    pub fn join(&self, a: u64, b: u64) -> u64 {
        a | b
    }

    /// Evaluates a semilattice term (`join`, `bot`, leaves are base points).
    pub fn eval_term(&self, t: &Term) -> Result<u64> {
        match t {
            Term::Leaf(x) => self.unit(x),
            Term::Node(s, cs) if s == "bot" && cs.is_empty() => Ok(0),
            Term::Node(s, cs) if s == "join" && cs.len() == 2 => {
                Ok(self.eval_term(&cs[0])? | self.eval_term(&cs[1])?)
            }
            Term::Node(s, _) => Err(Error::UnknownSymbol(s.clone())),
        }
    }

    /// The induced map of a base map `f` (direct image).
    pub fn lift(&self, f: &[usize], a: u64) -> u64 {
        (0..self.base.len())
            .filter(|i| a & (1 << i) != 0)
            .fold(0, |acc, i| acc | (1 << f[i]))
    }

    /// Parses `{p,q}` into a bitmask.
    pub fn parse_subset(&self, text: &str) -> Result<u64> {
        let inner = text
            .trim()
            .strip_prefix('{')
            .and_then(|s| s.strip_suffix('}'))
            .ok_or_else(|| Error::Invalid(format!("expected a subset like {{p,q}}, got `{text}`")))?;
        let mut mask = 0u64;
        for name in inner.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            mask |= 1 << self.base.index_of(name)?;
        }
        Ok(mask)
    }
}

// --- exception monad -------------------------------------------------------

/// Exception monad: the base plus a space of exception constants, with
/// exception-to-exception distances kept and everything across at infinity.
#[derive(Debug, Clone)]
pub struct ExceptionModel {
    pub base: MetricSpace,
    pub exceptions: MetricSpace,
    pub space: MetricSpace,
}

pub fn exception_monad(base: &MetricSpace, exceptions: &MetricSpace) -> Result<ExceptionModel> {
    let nx = base.len();
    let ne = exceptions.len();
    let n = nx + ne;
    // keep names when globally unique, as the coproduct does
    let clash = base
        .points()
        .iter()
        .any(|p| exceptions.index_of(p).is_ok());
    let mut points = Vec::with_capacity(n);
    for p in base.points() {
        points.push(if clash { format!("x:{p}") } else { p.clone() });
    }
    for e in exceptions.points() {
        points.push(if clash { format!("e:{e}") } else { e.clone() });
    }
    let mut d = vec![INF; n * n];
    for i in 0..nx {
        for j in 0..nx {
            d[i * n + j] = base.dist(i, j);
        }
    }
    for i in 0..ne {
        for j in 0..ne {
            d[(nx + i) * n + (nx + j)] = exceptions.dist(i, j);
        }
    }
    let space = MetricSpace::from_table(points, d)?;
    Ok(ExceptionModel {
        base: base.clone(),
        exceptions: exceptions.clone(),
        space,
    })
}

impl ExceptionModel {
    pub fn unit(&self, point: &str) -> Result<usize> {
        self.base.index_of(point)
    }

    pub fn exception(&self, name: &str) -> Result<usize> {
        Ok(self.base.len() + self.exceptions.index_of(name)?)
    }

    /// Evaluates a term: leaves are base points, nullary nodes are exceptions.
    pub fn eval_term(&self, t: &Term) -> Result<usize> {
        match t {
            Term::Leaf(x) => self.unit(x),
            Term::Node(s, cs) if cs.is_empty() => self.exception(s),
            Term::Node(s, _) => Err(Error::UnknownSymbol(s.clone())),
        }
    }

    /// The induced map of a base map `f`: apply on the base part, fix
    /// exceptions.
    pub fn lift(&self, f: &[usize], i: usize) -> usize {
        if i < self.base.len() {
            f[i]
        } else {
            i
        }
    }
}

// --- small-space monad -----------------------------------------------------

/// The free algebra of `x0 =_eps x1`: same points, off-diagonal distances
/// raised to at least eps.
#[derive(Debug, Clone)]
pub struct SmallSpaceModel {
    pub base: MetricSpace,
    pub eps: f64,
    pub space: MetricSpace,
}

pub fn small_space_monad(base: &MetricSpace, eps: f64) -> Result<SmallSpaceModel> {
    crate::dist::check(eps)?;
    let n = base.len();
    let mut d = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                d[i * n + j] = base.dist(i, j).max(eps);
            }
        }
    }
    let space = MetricSpace::from_table(base.points().to_vec(), d)?;
    Ok(SmallSpaceModel {
        base: base.clone(),
        eps,
        space,
    })
}

impl SmallSpaceModel {
    pub fn unit(&self, point: &str) -> Result<usize> {
        self.base.index_of(point)
    }

    pub fn lift(&self, f: &[usize], i: usize) -> usize {
        f[i]
    }
}

// --- free monoid action ----------------------------------------------------

/// Free action of a finite quantitative monoid `M` on the base: pairs
/// `(m, x)` with the sum metric, action `m(m', x) = (mm', x)`, unit
/// `x -> (e, x)`.
///
/// The sum (tensor) metric — not the maximum — is forced by the universal
/// property: an algebra may realize `d(m u, u) = d(e, m)` on opposite sides
/// of a distant pair, stretching an extension by the sum of the coordinate
/// distances.
#[derive(Debug, Clone)]
pub struct ActionModel {
    pub monoid: FiniteQuantAlgebra,
    pub base: MetricSpace,
    pub space: MetricSpace,
    unit_elem: usize,
}

pub fn monoid_action_monad(m: &FiniteQuantAlgebra, base: &MetricSpace) -> Result<ActionModel> {
    let nonexp = m.check_nonexpanding();
    if !nonexp.pass {
        return Err(Error::LawsFailed {
            presentation: "monoid".to_string(),
            detail: format!("expanding operation: {:?}", nonexp.witness),
        });
    }
    let laws = satisfies_all(m, &monoid_presentation())?;
    if !laws.pass {
        let failing: Vec<&str> = laws
            .per_equation
            .iter()
            .filter(|o| !o.pass)
            .map(|o| o.equation.as_str())
            .collect();
        return Err(Error::LawsFailed {
            presentation: "monoid".to_string(),
            detail: failing.join("; "),
        });
    }
    let space = sum_tensor(&m.carrier, base);
    let unit_elem = m.op("e")?.apply(&[]);
    Ok(ActionModel {
        monoid: m.clone(),
        base: base.clone(),
        space,
        unit_elem,
    })
}

impl ActionModel {
    /// Element index of the pair `(m, x)` in the product space.
    pub fn pair(&self, m: usize, x: usize) -> usize {
        m * self.base.len() + x
    }

    pub fn coords(&self, elem: usize) -> (usize, usize) {
        (elem / self.base.len(), elem % self.base.len())
    }

    pub fn unit(&self, point: &str) -> Result<usize> {
        Ok(self.pair(self.unit_elem, self.base.index_of(point)?))
    }

    /// The action of monoid element `m` on `(m', x)`.
    pub fn act(&self, m: usize, elem: usize) -> Result<usize> {
        let (m2, x) = self.coords(elem);
        Ok(self.pair(self.monoid.op("mul")?.apply(&[m, m2]), x))
    }

    /// Evaluates a term over unary symbols named by monoid elements.
    pub fn eval_term(&self, t: &Term) -> Result<usize> {
        match t {
            Term::Leaf(x) => self.unit(x),
            Term::Node(s, cs) if cs.len() == 1 => {
                let m = self.monoid.carrier.index_of(s)?;
                let inner = self.eval_term(&cs[0])?;
                self.act(m, inner)
            }
            Term::Node(s, _) => Err(Error::UnknownSymbol(s.clone())),
        }
    }

    pub fn lift(&self, f: &[usize], elem: usize) -> usize {
        let (m, x) = self.coords(elem);
        self.pair(m, f[x])
    }
}

// --- term monad ------------------------------------------------------------

/// The free algebra with no equations: the bounded term universe under the
/// term metric `d*`, with tree-tupling operations (partial at the depth
/// boundary) and the leaf embedding as unit.
#[derive(Debug, Clone)]
pub struct TermModel {
    pub base: MetricSpace,
    pub signature: Signature,
    pub universe: TermUniverse,
    pub space: MetricSpace,
}

pub fn term_monad(base: &MetricSpace, sig: &Signature, max_depth: usize) -> Result<TermModel> {
    let universe = enumerate(base.points(), sig, max_depth, universe_cap())?;
    let space = super::dstar_space(&universe, base)?.into_metric()?;
    Ok(TermModel {
        base: base.clone(),
        signature: sig.clone(),
        universe,
        space,
    })
}

impl TermModel {
    pub fn dist(&self, t: &Term, t2: &Term) -> Result<f64> {
        dstar(t, t2, &self.base)
    }

    pub fn unit(&self, point: &str) -> Result<Term> {
        self.base.index_of(point)?;
        Ok(Term::leaf(point))
    }

    /// Tree-tupling; `None` when the result leaves the bounded universe.
    pub fn op(&self, symbol: &str, args: Vec<Term>) -> Result<Option<usize>> {
        let arity = self.signature.arity(symbol)?;
        if args.len() != arity {
            return Err(Error::ArityMismatch {
                symbol: symbol.to_string(),
                expected: arity,
                found: args.len(),
            });
        }
        Ok(self.universe.index_of(&Term::node(symbol, args)))
    }

    /// Flattening of a term over terms: leaves carry term texts of this
    /// universe and are grafted in place.
    pub fn flatten(&self, outer: &Term) -> Result<Term> {
        Ok(match outer {
            Term::Leaf(label) => crate::term::parse_term(label, &self.signature)?,
            Term::Node(s, cs) => Term::node(
                s.clone(),
                cs.iter()
                    .map(|c| self.flatten(c))
                    .collect::<Result<Vec<_>>>()?,
            ),
        })
    }

    pub fn lift(&self, f: &dyn Fn(&str) -> String, t: &Term) -> Term {
        t.map_leaves(&|leaf| Term::leaf(f(leaf)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse_term_raw;

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

    #[test]
    fn word_metric_values() {
        let w = word_monoid(&ab1(), 3).unwrap();
        assert_eq!(w.words.len(), 15);
        let aab = w.eval_term(&parse_term_raw("(mul a (mul a b))").unwrap()).unwrap();
        let abb = w.eval_term(&parse_term_raw("(mul a (mul b b))").unwrap()).unwrap();
        let ab = w.eval_term(&parse_term_raw("(mul a b)").unwrap()).unwrap();
        assert_eq!(w.dist(aab, abb), 1.0);
        assert_eq!(w.dist(aab, aab), 0.0);
        assert_eq!(w.dist(ab, abb), INF);
        w.space.validate().unwrap();
    }

    #[test]
    fn word_truncation_reported() {
        let w = word_monoid(&ab1(), 2).unwrap();
        let ab = w.eval_term(&parse_term_raw("(mul a b)").unwrap()).unwrap();
        assert!(matches!(w.concat(ab, ab), Err(Error::WordTruncation(2))));
    }

    #[test]
    fn word_unit_and_empty() {
        let w = word_monoid(&ab1(), 2).unwrap();
        let a = w.unit("a").unwrap();
        let e = w.empty();
        assert_eq!(w.concat(e, a).unwrap(), a);
        assert_eq!(w.concat(a, e).unwrap(), a);
        // unit is distance-preserving
        assert_eq!(w.dist(w.unit("a").unwrap(), w.unit("b").unwrap()), 1.0);
    }

    #[test]
    fn hausdorff_values() {
        let h = finite_hausdorff(&pqr()).unwrap();
        let p = h.parse_subset("{p}").unwrap();
        let qr = h.parse_subset("{q,r}").unwrap();
        assert_eq!(h.dist(p, qr), 3.0);
        assert_eq!(h.dist(0, p), INF); // empty set infinitely far
        assert_eq!(h.dist(qr, qr), 0.0);
        h.space.validate().unwrap();
    }

    #[test]
    fn hausdorff_join_is_union() {
        let h = finite_hausdorff(&pqr()).unwrap();
        let t = parse_term_raw("(join p (join q (bot)))").unwrap();
        assert_eq!(h.eval_term(&t).unwrap(), h.parse_subset("{p,q}").unwrap());
    }

    #[test]
    fn exception_distances() {
        let e = MetricSpace::pair("e1", "e2", 0.4).unwrap();
        let model = exception_monad(&ab1(), &e).unwrap();
        let x = model.unit("a").unwrap();
        let e1 = model.exception("e1").unwrap();
        let e2 = model.exception("e2").unwrap();
        assert_eq!(model.space.dist(e1, e2), 0.4);
        assert_eq!(model.space.dist(x, e1), INF);
        assert_eq!(
            model.space.dist(model.unit("a").unwrap(), model.unit("b").unwrap()),
            1.0
        );
    }

    #[test]
    fn exception_empty_e_is_base() {
        let e = MetricSpace::from_table(vec![], vec![]).unwrap();
        let model = exception_monad(&ab1(), &e).unwrap();
        assert_eq!(model.space.points(), ab1().points());
    }

    #[test]
    fn small_space_values() {
        let x = MetricSpace::pair("a", "b", 0.2).unwrap();
        let m = small_space_monad(&x, 0.5).unwrap();
        assert_eq!(m.space.dist_by_name("a", "b").unwrap(), 0.5);
        // eps = 0 leaves the space unchanged
        let m0 = small_space_monad(&x, 0.0).unwrap();
        assert_eq!(m0.space.dist_by_name("a", "b").unwrap(), 0.2);
        // applying twice equals applying once
        let mm = small_space_monad(&m.space, 0.5).unwrap();
        assert_eq!(mm.space.table(), m.space.table());
    }

    #[test]
    fn action_values() {
        let m = crate::variety::tests::em_monoid();
        let a = monoid_action_monad(&m, &ab1()).unwrap();
        let ma = a.eval_term(&parse_term_raw("(m a)").unwrap()).unwrap();
        let ea = a.unit("a").unwrap();
        let mb = a.eval_term(&parse_term_raw("(m b)").unwrap()).unwrap();
        let eb = a.unit("b").unwrap();
        assert!((a.space.dist(ma, ea) - 0.3).abs() < 1e-15);
        assert_eq!(a.space.dist(ma, mb), 1.0);
        assert!((a.space.dist(ma, eb) - 1.3).abs() < 1e-15);
        // m(m'(x)) = (mm')(x): acting twice by m is acting by mm = m
        let mma = a.eval_term(&parse_term_raw("(m (m a))").unwrap()).unwrap();
        assert_eq!(mma, ma);
    }

    #[test]
    fn action_rejects_non_monoid() {
        // mul not associative: a left-zero "multiplication"
        let carrier = MetricSpace::pair("e", "m", 0.3).unwrap();
        let mut interp = std::collections::BTreeMap::new();
        interp.insert(
            "mul".to_string(),
            crate::algebra::OpTable::new(2, 2, vec![1, 0, 0, 1]).unwrap(),
        );
        interp.insert(
            "e".to_string(),
            crate::algebra::OpTable::from_fn(0, 2, |_| 0).unwrap(),
        );
        let bad = FiniteQuantAlgebra::new(carrier, interp).unwrap();
        assert!(matches!(
            monoid_action_monad(&bad, &ab1()),
            Err(Error::LawsFailed { .. })
        ));
    }

    #[test]
    fn trivial_monoid_action_is_base() {
        let carrier = MetricSpace::singleton("e");
        let mut interp = std::collections::BTreeMap::new();
        interp.insert(
            "mul".to_string(),
            crate::algebra::OpTable::from_fn(2, 1, |_| 0).unwrap(),
        );
        interp.insert(
            "e".to_string(),
            crate::algebra::OpTable::from_fn(0, 1, |_| 0).unwrap(),
        );
        let m = FiniteQuantAlgebra::new(carrier, interp).unwrap();
        let a = monoid_action_monad(&m, &ab1()).unwrap();
        assert_eq!(a.space.len(), 2);
        assert_eq!(
            a.space.dist(a.unit("a").unwrap(), a.unit("b").unwrap()),
            1.0
        );
    }

    #[test]
    fn term_monad_unit_and_flatten() {
        let model = term_monad(&ab1(), &Signature::two_binary(), 2).unwrap();
        assert_eq!(model.universe.len(), 202);
        // unit distances equal base distances
        assert_eq!(
            model
                .dist(&model.unit("a").unwrap(), &model.unit("b").unwrap())
                .unwrap(),
            1.0
        );
        // flatten of a term over term labels grafts structurally
        let outer = Term::node(
            "sigma1",
            vec![Term::leaf("(sigma2 a a)"), Term::leaf("b")],
        );
        assert_eq!(
            model.flatten(&outer).unwrap(),
            parse_term_raw("(sigma1 (sigma2 a a) b)").unwrap()
        );
        // flatten of a pure-leaf embedding is the identity
        let t = parse_term_raw("(sigma1 a b)").unwrap();
        assert_eq!(model.flatten(&Term::leaf(t.to_string())).unwrap(), t);
    }
}
