//! Coordinates on the space of n-point (measured) metric spaces: edge-length
//! vectors, weight vectors, the maps back to spaces, and the relabeling
//! quotient (canonical forms and orbit distance). Also the construction
//! that turns a small-distortion relation into an injection.
//!
//! Pairs `{i, j}` with `i < j` are linearized lexicographically:
//! `{0,1}, {0,2}, …, {0,n−1}, {1,2}, …, {n−2,n−1}`.

use itertools::Itertools;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::number::{format_fraction, ratio, ExtReal, Real};
use crate::relation::{distortion, is_correspondence, mass_on, Coupling, Relation};
use crate::space::{default_labels, FiniteMMSpace, FiniteMetricSpace};
use crate::transport::is_coupling;

/// Default largest `n` for searches over all `n!` relabelings.
pub const PERMUTATION_GUARD: usize = 8;

/// Position of the pair `{i, j}` in the linearized order.
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    debug_assert!(j < n && i != j);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// A point of `R_n`: positive edge lengths satisfying every triangle inequality.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MetricVector {
    n: usize,
    r: Vec<Real>,
}

impl MetricVector {
    pub fn new(n: usize, r: Vec<Real>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        if r.len() != pair_count(n) {
            return Err(Error::DimensionMismatch(format!(
                "{n} points need {} edge lengths, got {}",
                pair_count(n),
                r.len()
            )));
        }
        if let Some(k) = r.iter().position(|v| !v.is_positive()) {
            return Err(Error::InvalidParameter(format!("edge length {k} is not positive")));
        }
        let v = MetricVector { n, r };
        for (i, j, k) in (0..n).tuple_combinations() {
            // each of the three sides against the other two
            let (a, b, c) = (v.get(i, j), v.get(j, k), v.get(i, k));
            if a > &(b + c) || b > &(a + c) || c > &(a + b) {
                return Err(Error::InvalidParameter(format!(
                    "triangle inequality fails on {{{i},{j},{k}}}"
                )));
            }
        }
        Ok(v)
    }

    pub fn from_space(x: &FiniteMetricSpace) -> Self {
        let n = x.len();
        let r = (0..n).tuple_combinations().map(|(i, j)| x.d(i, j).clone()).collect();
        MetricVector { n, r }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[Real] {
        &self.r
    }

    pub fn get(&self, i: usize, j: usize) -> &Real {
        &self.r[pair_index(self.n, i, j)]
    }

    /// `r∘σ`, i.e. `{i, j} ↦ r({σ(i), σ(j)})`.
    pub fn permuted(&self, sigma: &[usize]) -> Self {
        let r = (0..self.n)
            .tuple_combinations()
            .map(|(i, j)| self.get(sigma[i], sigma[j]).clone())
            .collect();
        MetricVector { n: self.n, r }
    }

    pub fn sup_distance(&self, other: &MetricVector) -> Real {
        sup_gap(&self.r, &other.r)
    }
}

/// A point of the open simplex: positive weights summing to 1.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WeightVector {
    s: Vec<Real>,
}

impl WeightVector {
    pub fn new(s: Vec<Real>) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::InvalidParameter("weight vector is empty".into()));
        }
        if let Some(i) = s.iter().position(|v| !v.is_positive()) {
            return Err(Error::InvalidParameter(format!("weight {i} is not positive")));
        }
        if !s.iter().sum::<Real>().is_one() {
            return Err(Error::NotProbability("weights do not sum to 1".into()));
        }
        Ok(WeightVector { s })
    }

    pub fn barycenter(n: usize) -> Self {
        WeightVector { s: vec![ratio(1, n as i64); n] }
    }

    pub fn n(&self) -> usize {
        self.s.len()
    }

    pub fn values(&self) -> &[Real] {
        &self.s
    }

    /// `s∘σ`.
    pub fn permuted(&self, sigma: &[usize]) -> Self {
        WeightVector { s: sigma.iter().map(|&k| self.s[k].clone()).collect() }
    }

    pub fn sup_distance(&self, other: &WeightVector) -> Real {
        sup_gap(&self.s, &other.s)
    }
}

fn sup_gap(a: &[Real], b: &[Real]) -> Real {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).max().unwrap_or_else(Real::zero)
}

/// `Φ_GH(r)`: the space on `{0..n−1}` with `d(i, j) = r({i, j})`.
pub fn phi_gh(r: &MetricVector) -> FiniteMetricSpace {
    let n = r.n;
    let dist = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Real::zero() } else { r.get(i, j).clone() }).collect())
        .collect();
    FiniteMetricSpace::new(default_labels(n), dist).expect("a metric vector defines a metric")
}

/// `Φ_b(r, s)`: `Φ_GH(r)` with point masses `s`.
pub fn phi_b(r: &MetricVector, s: &WeightVector) -> Result<FiniteMMSpace> {
    if r.n != s.n() {
        return Err(Error::DimensionMismatch(format!("r has {} points, s has {}", r.n, s.n())));
    }
    FiniteMMSpace::new(phi_gh(r), s.s.clone())
}

/// Splits an mm-space back into its coordinates.
pub fn mm_coordinates(x: &FiniteMMSpace) -> (MetricVector, WeightVector) {
    (MetricVector::from_space(x.space()), WeightVector { s: x.mass().to_vec() })
}

/// Lexicographically least representative of a relabeling orbit. Compares the
/// edge vector first, then the weights.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    pub r: MetricVector,
    pub s: Option<WeightVector>,
}

fn guard(n: usize, limit: usize) -> Result<()> {
    if n > limit {
        let size: num_bigint::BigUint = (1..=n).map(num_bigint::BigUint::from).product();
        return Err(Error::GuardExceeded {
            what: format!("permutation search over {n} points"),
            size,
            limit: format!("{limit} points"),
        });
    }
    Ok(())
}

fn check_shape(r: &MetricVector, s: Option<&WeightVector>) -> Result<()> {
    if let Some(s) = s {
        if s.n() != r.n {
            return Err(Error::DimensionMismatch(format!("r has {} points, s has {}", r.n, s.n())));
        }
    }
    Ok(())
}

pub fn canonical_form(r: &MetricVector, s: Option<&WeightVector>) -> Result<CanonicalForm> {
    canonicalize(r, s, PERMUTATION_GUARD).map(|(form, _)| form)
}

/// Canonical form together with the first permutation (in lexicographic
/// enumeration order) that attains it.
pub fn canonicalize(r: &MetricVector, s: Option<&WeightVector>, limit: usize) -> Result<(CanonicalForm, Vec<usize>)> {
    check_shape(r, s)?;
    guard(r.n, limit)?;
    let mut best: Option<(CanonicalForm, Vec<usize>)> = None;
    for sigma in (0..r.n).permutations(r.n) {
        let form = CanonicalForm { r: r.permuted(&sigma), s: s.map(|s| s.permuted(&sigma)) };
        if best.as_ref().is_none_or(|(b, _)| &form < b) {
            best = Some((form, sigma));
        }
    }
    Ok(best.expect("S_n is non-empty"))
}

/// Every distinct `(r∘σ, s∘σ)`; at most `n!` of them.
pub fn orbit(r: &MetricVector, s: Option<&WeightVector>) -> Result<Vec<CanonicalForm>> {
    check_shape(r, s)?;
    guard(r.n, PERMUTATION_GUARD)?;
    let mut all: Vec<CanonicalForm> = (0..r.n)
        .permutations(r.n)
        .map(|sigma| CanonicalForm { r: r.permuted(&sigma), s: s.map(|s| s.permuted(&sigma)) })
        .collect();
    all.sort();
    all.dedup();
    Ok(all)
}

/// Quotient distance: min over σ of the sup-distance between `a` and `b∘σ`,
/// taken over edge lengths and (when present) weights together.
pub fn orbit_distance(
    a: (&MetricVector, Option<&WeightVector>),
    b: (&MetricVector, Option<&WeightVector>),
) -> Result<Real> {
    check_shape(a.0, a.1)?;
    check_shape(b.0, b.1)?;
    if a.0.n != b.0.n {
        return Err(Error::DimensionMismatch(format!("{} points vs {}", a.0.n, b.0.n)));
    }
    if a.1.is_some() != b.1.is_some() {
        return Err(Error::DimensionMismatch("one side has weights and the other does not".into()));
    }
    guard(a.0.n, PERMUTATION_GUARD)?;
    let n = a.0.n;
    let best = (0..n)
        .permutations(n)
        .map(|sigma| {
            let mut d = a.0.sup_distance(&b.0.permuted(&sigma));
            if let (Some(sa), Some(sb)) = (a.1, b.1) {
                d = d.max(sa.sup_distance(&sb.permuted(&sigma)));
            }
            d
        })
        .min()
        .expect("S_n is non-empty");
    Ok(best)
}

/// An injective map `X → Y` recovered from a relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Injection {
    pub map: Vec<usize>,
    pub bijective: bool,
}

impl Injection {
    pub fn graph(&self) -> Relation {
        Relation::graph(&self.map)
    }
}

/// Mass data for the coupling route of [`relation_to_injection`].
#[derive(Clone, Copy, Debug)]
pub struct MassWitness<'a> {
    pub coupling: &'a Coupling,
    pub mu_x: &'a [Real],
    pub mu_y: &'a [Real],
}

/// Builds an injection `f: X → Y` with `graph f ⊆ S` from a relation with
/// `dis S < sep X` that is either a correspondence or carries coupling mass
/// `π(S) > 1 − min atom of μ_X`.
///
/// Each section `S_x` is non-empty, and two points of X cannot share a
/// partner (that pair alone would have distortion ≥ sep X), so choosing
/// `f(x) = min S_x` is injective. With `|X| = |Y|` the sections are
/// singletons and `S = graph f`.
pub fn relation_to_injection(
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
    s: &Relation,
    mass: Option<MassWitness<'_>>,
) -> Result<Injection> {
    let (nx, ny) = (x.len(), y.len());
    s.check_bounds(nx, ny)?;
    let dis = distortion(s, x, y)?;
    let sep = x.separation();
    let mut failures = Vec::new();
    if ExtReal::Finite(dis.clone()) >= sep {
        failures.push(format!("dis S = {} is not < sep X = {sep}", format_fraction(&dis)));
    }
    let correspondence = is_correspondence(s, nx, ny);
    let mut mass_ok = false;
    if let Some(w) = mass {
        if w.mu_x.len() != nx || w.mu_y.len() != ny || !is_coupling(w.coupling, w.mu_x, w.mu_y) {
            return Err(Error::InvalidParameter("coupling does not match the two measures".into()));
        }
        let carried = mass_on(w.coupling, s)?;
        let needed = Real::one() - w.mu_x.iter().min().expect("non-empty");
        mass_ok = carried > needed;
        if !correspondence && !mass_ok {
            failures.push(format!(
                "S is not a correspondence and π(S) = {} is not > 1 − min atom = {}",
                format_fraction(&carried),
                format_fraction(&needed)
            ));
        }
    } else if !correspondence {
        failures.push("S is not a correspondence and no coupling was given".into());
    }
    if !failures.is_empty() {
        return Err(Error::Hypothesis(failures.join("; ")));
    }
    debug_assert!(correspondence || mass_ok);

    let sections = s.sections(nx);
    let mut map = Vec::with_capacity(nx);
    let mut used = vec![false; ny];
    for (i, sec) in sections.iter().enumerate() {
        let &target = sec
            .iter()
            .min()
            .ok_or_else(|| Error::Internal(format!("section of point {i} is empty")))?;
        if used[target] {
            return Err(Error::Internal(format!("point {target} of Y is hit twice")));
        }
        used[target] = true;
        map.push(target);
    }
    let bijective = nx == ny;
    if bijective && Relation::graph(&map) != *s {
        return Err(Error::Internal("equal cardinalities but S is not the graph of f".into()));
    }
    Ok(Injection { map, bijective })
}

/// Same as [`relation_to_injection`] for two mm-spaces, with the coupling
/// route enabled when `pi` is given.
pub fn relation_to_injection_mm(
    x: &FiniteMMSpace,
    y: &FiniteMMSpace,
    s: &Relation,
    pi: Option<&Coupling>,
) -> Result<Injection> {
    let mass = pi.map(|coupling| MassWitness { coupling, mu_x: x.mass(), mu_y: y.mass() });
    relation_to_injection(x.space(), y.space(), s, mass)
}

/// For a bijection `f` with `1 − π(graph f) < δ`, reports whether every atom
/// moves by less than δ: `max_x |μ_X({x}) − μ_Y({f(x)})| < δ`.
pub fn mass_closeness(f: &[usize], pi: &Coupling, x: &FiniteMMSpace, y: &FiniteMMSpace, delta: &Real) -> Result<bool> {
    let n = x.len();
    if y.len() != n || f.len() != n {
        return Err(Error::DimensionMismatch("f must be a bijection between equal-size spaces".into()));
    }
    let mut hit = vec![false; n];
    for &v in f {
        if v >= n || std::mem::replace(&mut hit[v], true) {
            return Err(Error::InvalidParameter("f is not a bijection".into()));
        }
    }
    if !is_coupling(pi, x.mass(), y.mass()) {
        return Err(Error::InvalidParameter("pi is not a coupling of the two measures".into()));
    }
    let missing = Real::one() - mass_on(pi, &Relation::graph(f))?;
    if &missing >= delta {
        return Err(Error::NotApplicable(format!(
            "1 − π(graph f) = {} is not < δ",
            format_fraction(&missing)
        )));
    }
    let worst = (0..n).map(|i| (&x.mass()[i] - &y.mass()[f[i]]).abs()).max().expect("non-empty");
    Ok(&worst < delta)
}

/// Attaches the uniform measure.
pub fn uniform_lift(x: &FiniteMetricSpace) -> FiniteMMSpace {
    FiniteMMSpace::uniform(x.clone())
}
