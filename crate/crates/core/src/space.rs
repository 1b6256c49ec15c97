//! Finite metric spaces, finite metric measure spaces and their validation.

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::number::{format_fraction, ratio, ExtReal, Real};

/// Masses may be off from 1 by at most this much at ingestion; they are then
/// renormalized exactly.
pub fn mass_tolerance() -> Real {
    ratio(1, 1_000_000_000)
}

/// One violated invariant, naming the indices involved.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Empty,
    LabelCount { labels: usize, rows: usize },
    DuplicateLabel { first: usize, second: usize, label: String },
    NotSquare { row: usize, len: usize },
    NonZeroDiagonal { i: usize },
    Asymmetric { i: usize, j: usize },
    NonPositive { i: usize, j: usize },
    Triangle { i: usize, j: usize, k: usize },
    MassLength { expected: usize, got: usize },
    MassNonPositive { i: usize },
    MassSum { sum: Real },
    CoordsLength { expected: usize, got: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Empty => write!(f, "space has no points"),
            Violation::LabelCount { labels, rows } => {
                write!(f, "{labels} labels but {rows} matrix rows")
            }
            Violation::DuplicateLabel { first, second, label } => {
                write!(f, "duplicate label {label:?} at ({first},{second})")
            }
            Violation::NotSquare { row, len } => write!(f, "row {row} has length {len}"),
            Violation::NonZeroDiagonal { i } => write!(f, "nonzero diagonal at ({i},{i})"),
            Violation::Asymmetric { i, j } => write!(f, "asymmetry at ({i},{j})"),
            Violation::NonPositive { i, j } => {
                write!(f, "non-positive distance between distinct points ({i},{j})")
            }
            Violation::Triangle { i, j, k } => {
                write!(f, "triangle inequality fails at ({i},{j},{k}): d({i},{k}) > d({i},{j}) + d({j},{k})")
            }
            Violation::MassLength { expected, got } => {
                write!(f, "mass has {got} entries, expected {expected}")
            }
            Violation::MassNonPositive { i } => write!(f, "mass at {i} is not strictly positive"),
            Violation::MassSum { sum } => {
                write!(f, "masses sum to {} instead of 1", format_fraction(sum))
            }
            Violation::CoordsLength { expected, got } => {
                write!(f, "coords has {got} entries, expected {expected}")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn into_result(self) -> Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(Error::Invalid(self))
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("valid");
        }
        for (n, v) in self.violations.iter().enumerate() {
            if n > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks labels and a distance matrix against the metric axioms.
pub fn validate_metric(labels: &[String], dist: &[Vec<Real>]) -> ValidationReport {
    let mut out = Vec::new();
    let n = dist.len();
    if n == 0 {
        out.push(Violation::Empty);
    }
    if labels.len() != n {
        out.push(Violation::LabelCount { labels: labels.len(), rows: n });
    }
    let mut seen: HashMap<&str, usize> = HashMap::new();
    for (i, l) in labels.iter().enumerate() {
        if let Some(&first) = seen.get(l.as_str()) {
            out.push(Violation::DuplicateLabel { first, second: i, label: l.clone() });
        } else {
            seen.insert(l, i);
        }
    }
    let mut square = true;
    for (row, r) in dist.iter().enumerate() {
        if r.len() != n {
            out.push(Violation::NotSquare { row, len: r.len() });
            square = false;
        }
    }
    if !square {
        return ValidationReport { violations: out };
    }
    for i in 0..n {
        if !dist[i][i].is_zero() {
            out.push(Violation::NonZeroDiagonal { i });
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if dist[i][j] != dist[j][i] {
                out.push(Violation::Asymmetric { i, j });
            }
            if !dist[i][j].is_positive() || !dist[j][i].is_positive() {
                out.push(Violation::NonPositive { i, j });
            }
        }
    }
    for i in 0..n {
        for k in i + 1..n {
            for j in 0..n {
                if j == i || j == k {
                    continue;
                }
                if dist[i][k] > &dist[i][j] + &dist[j][k] {
                    out.push(Violation::Triangle { i, j, k });
                }
            }
        }
    }
    ValidationReport { violations: out }
}

/// Checks a mass vector: right length, strictly positive, sums to 1 within
/// [`mass_tolerance`].
pub fn validate_mass(mass: &[Real], n: usize) -> ValidationReport {
    let mut out = Vec::new();
    if mass.len() != n {
        out.push(Violation::MassLength { expected: n, got: mass.len() });
    }
    for (i, m) in mass.iter().enumerate() {
        if !m.is_positive() {
            out.push(Violation::MassNonPositive { i });
        }
    }
    let sum: Real = mass.iter().sum();
    if (&sum - Real::one()).abs() > mass_tolerance() {
        out.push(Violation::MassSum { sum });
    }
    ValidationReport { violations: out }
}

/// Validates a raw space description, with or without masses.
pub fn validate(labels: &[String], dist: &[Vec<Real>], mass: Option<&[Real]>) -> ValidationReport {
    let mut report = validate_metric(labels, dist);
    if let Some(m) = mass {
        report.violations.extend(validate_mass(m, dist.len()).violations);
    }
    report
}

pub fn default_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteMetricSpace {
    labels: Vec<String>,
    dist: Vec<Vec<Real>>,
    coords: Option<Vec<[Real; 2]>>,
}

impl FiniteMetricSpace {
    pub fn new(labels: Vec<String>, dist: Vec<Vec<Real>>) -> Result<Self> {
        validate_metric(&labels, &dist).into_result()?;
        Ok(FiniteMetricSpace { labels, dist, coords: None })
    }

    pub fn from_matrix(dist: Vec<Vec<Real>>) -> Result<Self> {
        Self::new(default_labels(dist.len()), dist)
    }

    /// Points on the real line with the absolute-value metric.
    pub fn on_line(points: &[Real]) -> Result<Self> {
        let dist = points
            .iter()
            .map(|a| points.iter().map(|b| (a - b).abs()).collect())
            .collect();
        Self::from_matrix(dist)
    }

    /// Points in the plane with the ℓ₁ metric; the coordinates are retained.
    pub fn from_l1_points(labels: Vec<String>, coords: Vec<[Real; 2]>) -> Result<Self> {
        let dist = coords
            .iter()
            .map(|a| coords.iter().map(|b| l1(a, b)).collect())
            .collect();
        Self::new(labels, dist)?.with_coords(coords)
    }

    pub fn with_coords(mut self, coords: Vec<[Real; 2]>) -> Result<Self> {
        if coords.len() != self.len() {
            return Err(Error::Invalid(ValidationReport {
                violations: vec![Violation::CoordsLength { expected: self.len(), got: coords.len() }],
            }));
        }
        self.coords = Some(coords);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.dist.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dist.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn matrix(&self) -> &[Vec<Real>] {
        &self.dist
    }

    pub fn coords(&self) -> Option<&[[Real; 2]]> {
        self.coords.as_deref()
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> &Real {
        &self.dist[i][j]
    }

    /// Minimum distance between distinct points; `+∞` for a single point.
    pub fn separation(&self) -> ExtReal {
        let mut best: Option<&Real> = None;
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                let d = &self.dist[i][j];
                if best.is_none_or(|b| d < b) {
                    best = Some(d);
                }
            }
        }
        best.map_or(ExtReal::Infinity, |b| ExtReal::Finite(b.clone()))
    }

    pub fn diameter(&self) -> Real {
        self.dist.iter().flatten().max().cloned().unwrap_or_else(Real::zero)
    }

    /// Subspace on the given indices, in that order.
    pub fn restrict(&self, idx: &[usize]) -> Result<Self> {
        let labels = idx.iter().map(|&i| self.labels[i].clone()).collect();
        let dist = idx
            .iter()
            .map(|&i| idx.iter().map(|&j| self.dist[i][j].clone()).collect())
            .collect();
        let mut out = Self::new(labels, dist)?;
        if let Some(c) = &self.coords {
            out.coords = Some(idx.iter().map(|&i| c[i].clone()).collect());
        }
        Ok(out)
    }
}

pub(crate) fn l1(a: &[Real; 2], b: &[Real; 2]) -> Real {
    (&a[0] - &b[0]).abs() + (&a[1] - &b[1]).abs()
}

/// A finite metric space whose probability measure charges every point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteMMSpace {
    space: FiniteMetricSpace,
    mass: Vec<Real>,
}

impl FiniteMMSpace {
    /// Strict constructor: masses must be positive and sum to exactly 1.
    pub fn new(space: FiniteMetricSpace, mass: Vec<Real>) -> Result<Self> {
        let mut report = validate_mass(&mass, space.len());
        let sum: Real = mass.iter().sum();
        if report.is_valid() && !sum.is_one() {
            report.violations.push(Violation::MassSum { sum });
        }
        report.into_result()?;
        Ok(FiniteMMSpace { space, mass })
    }

    /// Ingestion constructor: tolerates a sum within [`mass_tolerance`] of 1,
    /// then renormalizes exactly.
    pub fn ingest(space: FiniteMetricSpace, mass: Vec<Real>) -> Result<Self> {
        validate_mass(&mass, space.len()).into_result()?;
        let sum: Real = mass.iter().sum();
        let mass = if sum.is_one() { mass } else { mass.into_iter().map(|m| m / &sum).collect() };
        Ok(FiniteMMSpace { space, mass })
    }

    pub fn uniform(space: FiniteMetricSpace) -> Self {
        let n = space.len() as i64;
        let mass = vec![ratio(1, n); space.len()];
        FiniteMMSpace { space, mass }
    }

    pub fn space(&self) -> &FiniteMetricSpace {
        &self.space
    }

    pub fn mass(&self) -> &[Real] {
        &self.mass
    }

    pub fn len(&self) -> usize {
        self.space.len()
    }

    pub fn is_empty(&self) -> bool {
        self.space.is_empty()
    }

    pub fn max_atom(&self) -> &Real {
        self.mass.iter().max().expect("non-empty")
    }

    pub fn min_atom(&self) -> &Real {
        self.mass.iter().min().expect("non-empty")
    }

    pub fn into_parts(self) -> (FiniteMetricSpace, Vec<Real>) {
        (self.space, self.mass)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::int;

    fn m(rows: &[&[i64]]) -> Vec<Vec<Real>> {
        rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()
    }

    #[test]
    fn two_point_metric_is_valid() {
        let r = validate(&default_labels(2), &m(&[&[0, 1], &[1, 0]]), None);
        assert!(r.is_valid(), "{r}");
    }

    #[test]
    fn asymmetry_reported() {
        let r = validate_metric(&default_labels(2), &m(&[&[0, 1], &[2, 0]]));
        assert_eq!(r.violations, vec![Violation::Asymmetric { i: 0, j: 1 }]);
    }

    #[test]
    fn triangle_reported() {
        let r = validate_metric(&default_labels(3), &m(&[&[0, 1, 3], &[1, 0, 1], &[3, 1, 0]]));
        assert_eq!(r.violations, vec![Violation::Triangle { i: 0, j: 1, k: 2 }]);
    }

    #[test]
    fn degenerate_inputs_reported() {
        let r = validate_metric(&[], &[]);
        assert!(r.violations.contains(&Violation::Empty));
        let r = validate_metric(&default_labels(2), &m(&[&[0, 0], &[0, 1]]));
        assert!(r.violations.contains(&Violation::NonZeroDiagonal { i: 1 }));
        assert!(r.violations.contains(&Violation::NonPositive { i: 0, j: 1 }));
        let r = validate_metric(&["a".into(), "a".into()], &m(&[&[0, 1], &[1, 0]]));
        assert!(matches!(r.violations[0], Violation::DuplicateLabel { first: 0, second: 1, .. }));
        let r = validate_metric(&default_labels(2), &m(&[&[0, 1], &[1]]));
        assert!(r.violations.contains(&Violation::NotSquare { row: 1, len: 1 }));
    }

    #[test]
    fn mass_checks() {
        let r = validate_mass(&[ratio(1, 2), ratio(1, 3)], 2);
        assert!(matches!(r.violations[..], [Violation::MassSum { .. }]));
        let r = validate_mass(&[int(1), int(0)], 2);
        assert!(r.violations.contains(&Violation::MassNonPositive { i: 1 }));
        let r = validate_mass(&[int(1)], 2);
        assert!(r.violations.contains(&Violation::MassLength { expected: 2, got: 1 }));
    }

    #[test]
    fn ingest_renormalizes_rounded_masses() {
        let x = FiniteMetricSpace::on_line(&[int(0), int(1), int(2)]).unwrap();
        let third = crate::number::parse_real("0.3333333333").unwrap();
        let mm = FiniteMMSpace::ingest(x.clone(), vec![third.clone(); 3]).unwrap();
        assert_eq!(mm.mass(), &[ratio(1, 3), ratio(1, 3), ratio(1, 3)]);
        assert!(FiniteMMSpace::new(x.clone(), vec![third; 3]).is_err());
        assert!(FiniteMMSpace::ingest(x, vec![ratio(1, 3), ratio(1, 3), ratio(1, 4)]).is_err());
    }

    #[test]
    fn separation_examples() {
        let x = FiniteMetricSpace::on_line(&[int(0), int(1), int(3)]).unwrap();
        assert_eq!(x.separation(), ExtReal::Finite(int(1)));
        let one = FiniteMetricSpace::on_line(&[int(0)]).unwrap();
        assert_eq!(one.separation(), ExtReal::Infinity);
        let y = FiniteMetricSpace::on_line(&[int(0), ratio(1, 4), int(1)]).unwrap();
        assert_eq!(y.separation(), ExtReal::Finite(ratio(1, 4)));
        assert!(y.separation() <= ExtReal::Finite(y.diameter()));
    }
}
