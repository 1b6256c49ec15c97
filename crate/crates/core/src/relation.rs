//! Relations between two finite point sets, couplings, and the primitive
//! quantities computed on them (distortion, coupling mass).

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::number::Real;
use crate::space::FiniteMetricSpace;

/// A set of cross-space index pairs `(i, j)`, `i` indexing X and `j` indexing Y.
///
/// Iteration and comparison follow the lexicographic order of the pairs, so
/// `Ord` on relations is the lexicographic order of their sorted pair lists.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Relation {
    pairs: BTreeSet<(usize, usize)>,
}

impl Relation {
    pub fn new(pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        Relation { pairs: pairs.into_iter().collect() }
    }

    pub fn empty() -> Self {
        Relation::default()
    }

    pub fn full(nx: usize, ny: usize) -> Self {
        Relation::new((0..nx).flat_map(|i| (0..ny).map(move |j| (i, j))))
    }

    /// `graph f = {(x, f(x))}`.
    pub fn graph(f: &[usize]) -> Self {
        Relation::new(f.iter().enumerate().map(|(i, &j)| (i, j)))
    }

    pub fn identity(n: usize) -> Self {
        Relation::new((0..n).map(|i| (i, i)))
    }

    pub fn transpose(&self) -> Self {
        Relation::new(self.pairs.iter().map(|&(i, j)| (j, i)))
    }

    pub fn complement(&self, nx: usize, ny: usize) -> Self {
        Relation::new(
            (0..nx)
                .flat_map(|i| (0..ny).map(move |j| (i, j)))
                .filter(|p| !self.pairs.contains(p)),
        )
    }

    pub fn union(&self, other: &Relation) -> Self {
        Relation { pairs: self.pairs.union(&other.pairs).copied().collect() }
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.pairs.is_subset(&other.pairs)
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.pairs.contains(&(i, j))
    }

    pub fn insert(&mut self, i: usize, j: usize) -> bool {
        self.pairs.insert((i, j))
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn to_vec(&self) -> Vec<(usize, usize)> {
        self.iter().collect()
    }

    pub fn check_bounds(&self, nx: usize, ny: usize) -> Result<()> {
        for (i, j) in self.iter() {
            if i >= nx {
                return Err(Error::IndexOutOfRange { what: "X", index: i, size: nx });
            }
            if j >= ny {
                return Err(Error::IndexOutOfRange { what: "Y", index: j, size: ny });
            }
        }
        Ok(())
    }

    /// `S_x = {y | (x, y) ∈ S}` for every `x < nx`.
    pub fn sections(&self, nx: usize) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); nx];
        for (i, j) in self.iter() {
            out[i].push(j);
        }
        out
    }
}

impl FromIterator<(usize, usize)> for Relation {
    fn from_iter<T: IntoIterator<Item = (usize, usize)>>(iter: T) -> Self {
        Relation::new(iter)
    }
}

/// `dis R = max over (x1,y1),(x2,y2) ∈ R of |d_X(x1,x2) − d_Y(y1,y2)|`, and 0
/// for the empty relation.
pub fn distortion(r: &Relation, x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> Result<Real> {
    r.check_bounds(x.len(), y.len())?;
    let pairs = r.to_vec();
    let mut best = Real::zero();
    for (a, &(x1, y1)) in pairs.iter().enumerate() {
        for &(x2, y2) in &pairs[a + 1..] {
            let gap = (x.d(x1, x2) - y.d(y1, y2)).abs();
            if gap > best {
                best = gap;
            }
        }
    }
    Ok(best)
}

/// True iff every point of X and every point of Y appears in some pair.
pub fn is_correspondence(r: &Relation, nx: usize, ny: usize) -> bool {
    let mut seen_x = vec![false; nx];
    let mut seen_y = vec![false; ny];
    for (i, j) in r.iter() {
        if i < nx {
            seen_x[i] = true;
        }
        if j < ny {
            seen_y[j] = true;
        }
    }
    seen_x.into_iter().all(|b| b) && seen_y.into_iter().all(|b| b)
}

/// A nonnegative `|X| × |Y|` matrix of joint masses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coupling {
    pi: Vec<Vec<Real>>,
}

impl Coupling {
    pub fn new(pi: Vec<Vec<Real>>) -> Result<Self> {
        let cols = pi.first().map_or(0, Vec::len);
        for (i, row) in pi.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "coupling row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            if let Some(j) = row.iter().position(|v| v.is_negative()) {
                return Err(Error::InvalidParameter(format!("negative coupling entry at ({i},{j})")));
            }
        }
        Ok(Coupling { pi })
    }

    pub fn zeros(nx: usize, ny: usize) -> Self {
        Coupling { pi: vec![vec![Real::zero(); ny]; nx] }
    }

    /// The product measure `μ_X ⊗ μ_Y`.
    pub fn product(mu_x: &[Real], mu_y: &[Real]) -> Self {
        Coupling { pi: mu_x.iter().map(|a| mu_y.iter().map(|b| a * b).collect()).collect() }
    }

    /// Mass `mu[i]` on cell `(i, i)`.
    pub fn diagonal(mu: &[Real]) -> Self {
        let mut c = Coupling::zeros(mu.len(), mu.len());
        for (i, m) in mu.iter().enumerate() {
            c.pi[i][i] = m.clone();
        }
        c
    }

    pub fn rows(&self) -> usize {
        self.pi.len()
    }

    pub fn cols(&self) -> usize {
        self.pi.first().map_or(0, Vec::len)
    }

    pub fn get(&self, i: usize, j: usize) -> &Real {
        &self.pi[i][j]
    }

    pub fn matrix(&self) -> &[Vec<Real>] {
        &self.pi
    }

    pub(crate) fn add(&mut self, i: usize, j: usize, v: &Real) {
        self.pi[i][j] += v;
    }

    pub fn row_sums(&self) -> Vec<Real> {
        self.pi.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<Real> {
        (0..self.cols()).map(|j| self.pi.iter().map(|r| &r[j]).sum()).collect()
    }
}

/// `π(S)`: the coupling mass carried by the cells of `S`.
pub fn mass_on(pi: &Coupling, s: &Relation) -> Result<Real> {
    s.check_bounds(pi.rows(), pi.cols())?;
    Ok(s.iter().map(|(i, j)| pi.get(i, j)).sum())
}

/// Integer ranks of every discrepancy `|d_X(a,b) − d_Y(c,d)|`, so the search
/// loops compare machine integers instead of rationals.
pub(crate) struct DiscrepancyTable {
    nx: usize,
    ny: usize,
    values: Vec<Real>,
    ranks: Vec<u32>,
}

impl DiscrepancyTable {
    pub fn new(x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> Self {
        let (nx, ny) = (x.len(), y.len());
        let mut raw = Vec::with_capacity(nx * nx * ny * ny);
        for a in 0..nx {
            for b in 0..nx {
                for c in 0..ny {
                    for d in 0..ny {
                        raw.push((x.d(a, b) - y.d(c, d)).abs());
                    }
                }
            }
        }
        let mut values = raw.clone();
        values.sort();
        values.dedup();
        let ranks = raw
            .iter()
            .map(|v| values.binary_search(v).expect("value present") as u32)
            .collect();
        DiscrepancyTable { nx, ny, values, ranks }
    }

    #[inline]
    pub fn rank(&self, x1: usize, y1: usize, x2: usize, y2: usize) -> u32 {
        self.ranks[((x1 * self.nx + x2) * self.ny + y1) * self.ny + y2]
    }

    pub fn value(&self, rank: u32) -> &Real {
        &self.values[rank as usize]
    }

    /// Sorted distinct discrepancy values; always contains 0.
    pub fn values(&self) -> &[Real] {
        &self.values
    }
}
