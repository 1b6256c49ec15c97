//! Exact box distance between finite metric measure spaces,
//!
//! ```text
//! □(X, Y) = min over couplings π and relations S of max{1 − π(S), dis S},
//! ```
//!
//! plus the closed-form bounds used to cross-check it.
//!
//! The distortion of any `S` is one of the finitely many discrepancies
//! `|d_X(x,x′) − d_Y(y,y′)|`. Fix such a level ε and join two cells of
//! `X × Y` when the pair of them has distortion ≤ ε: relations with
//! `dis S ≤ ε` are exactly the cliques of that graph. `π(S)` only grows when
//! `S` grows, so the best clique at level ε is a maximal one, and
//! `□ = min over ε of max{ε, 1 − max over maximal cliques of max_π π(S)}`.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Signed, Zero};

use crate::clique::{bits, for_each_maximal_clique, Mask, MAX_VERTICES};
use crate::error::{Error, Result};
use crate::number::{int, ratio, ExtReal, Real};
use crate::relation::{Coupling, DiscrepancyTable, Relation};
use crate::space::{FiniteMMSpace, FiniteMetricSpace};
use crate::transport::max_mass_coupling;

#[derive(Clone, Debug)]
pub struct BoxOptions {
    /// Largest accepted `|X| · |Y|`.
    pub guard_cells: usize,
}

impl Default for BoxOptions {
    fn default() -> Self {
        BoxOptions { guard_cells: 36 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxResult {
    pub value: Real,
    pub coupling: Coupling,
    pub relation: Relation,
}

pub fn box_exact(x: &FiniteMMSpace, y: &FiniteMMSpace) -> Result<BoxResult> {
    box_exact_with(x, y, &BoxOptions::default())
}

pub fn box_exact_with(x: &FiniteMMSpace, y: &FiniteMMSpace, opts: &BoxOptions) -> Result<BoxResult> {
    let (nx, ny) = (x.len(), y.len());
    let cells = nx * ny;
    let limit = opts.guard_cells.min(MAX_VERTICES);
    if cells > limit {
        return Err(Error::GuardExceeded {
            what: format!("box over {nx}x{ny} = {cells} cells"),
            size: BigUint::one() << cells,
            limit: format!("{limit} cells"),
        });
    }
    let table = DiscrepancyTable::new(x.space(), y.space());
    let cell = |c: usize| (c / ny, c % ny);

    // (objective, level, clique)
    let mut best: Option<(Real, Mask)> = None;
    for (level, eps) in table.values().iter().enumerate() {
        if best.as_ref().is_some_and(|(v, _)| eps >= v) {
            break;
        }
        let mut adj = vec![0 as Mask; cells];
        for a in 0..cells {
            let (xa, ya) = cell(a);
            for b in a + 1..cells {
                let (xb, yb) = cell(b);
                if table.rank(xa, ya, xb, yb) as usize <= level {
                    adj[a] |= 1 << b;
                    adj[b] |= 1 << a;
                }
            }
        }
        let mut level_best: Option<(Real, Mask)> = None;
        let mut cache: HashMap<Mask, Real> = HashMap::new();
        for_each_maximal_clique(&adj, |clique| {
            let bound = projection_bound(clique, ny, x.mass(), y.mass());
            if level_best.as_ref().is_some_and(|(v, _)| &bound < v) {
                return;
            }
            let mass = cache
                .entry(clique)
                .or_insert_with(|| clique_mass(clique, ny, x.mass(), y.mass()))
                .clone();
            let better = match &level_best {
                None => true,
                Some((v, m)) => mass > *v || (mass == *v && lex_less(clique, *m)),
            };
            if better {
                level_best = Some((mass, clique));
            }
        });
        let (mass, clique) = level_best.expect("every graph has a maximal clique");
        let objective = eps.max(&(Real::one() - &mass)).clone();
        let done = &Real::one() - &mass <= *eps;
        if best.as_ref().is_none_or(|(v, _)| &objective < v) {
            best = Some((objective, clique));
        }
        if done {
            break;
        }
    }
    let (value, clique) = best.expect("at least the zero level is visited");
    let relation = mask_relation(clique, ny);
    let (coupling, _) = max_mass_coupling(x.mass(), y.mass(), &relation)?;
    Ok(BoxResult { value, coupling, relation })
}

fn mask_relation(m: Mask, ny: usize) -> Relation {
    bits(m).map(|c| (c / ny, c % ny)).collect()
}

/// Lexicographic order of the sorted cell lists (cell index order is the
/// lexicographic order of `(x, y)`).
fn lex_less(a: Mask, b: Mask) -> bool {
    let mut ia = bits(a);
    let mut ib = bits(b);
    loop {
        match (ia.next(), ib.next()) {
            (None, None) => return false,
            (None, Some(_)) => return true,
            (Some(_), None) => return false,
            (Some(p), Some(q)) if p != q => return p < q,
            _ => {}
        }
    }
}

fn clique_mass(m: Mask, ny: usize, mu_x: &[Real], mu_y: &[Real]) -> Real {
    max_mass_coupling(mu_x, mu_y, &mask_relation(m, ny)).expect("indices in range").1
}

/// `min{μ_X(proj_X S), μ_Y(proj_Y S)}` bounds `π(S)` from above.
fn projection_bound(m: Mask, ny: usize, mu_x: &[Real], mu_y: &[Real]) -> Real {
    let mut xs = 0u128;
    let mut ys = 0u128;
    for c in bits(m) {
        xs |= 1 << (c / ny);
        ys |= 1 << (c % ny);
    }
    let a: Real = bits(xs).map(|i| &mu_x[i]).sum();
    let b: Real = bits(ys).map(|j| &mu_y[j]).sum();
    a.min(b)
}

/// `1 − min{max atom of μ_X, max atom of μ_Y}`, an upper bound on `□(X, Y)`.
pub fn box_atom_bound(x: &FiniteMMSpace, y: &FiniteMMSpace) -> Real {
    Real::one() - x.max_atom().min(y.max_atom())
}

/// `min{|t − s|, ½}`: the box distance between two-point uniform spaces with
/// gaps `s` and `t`, where gap 0 stands for the one-point space.
pub fn two_point_box_oracle(s: &Real, t: &Real) -> Result<Real> {
    if s.is_negative() || t.is_negative() {
        return Err(Error::InvalidParameter("gaps must be nonnegative".into()));
    }
    Ok((t - s).abs().min(ratio(1, 2)))
}

/// The uniform two-point space with the given gap, or the one-point space for
/// gap 0.
pub fn two_point_space(gap: &Real) -> Result<FiniteMMSpace> {
    if gap.is_negative() {
        return Err(Error::InvalidParameter("gap must be nonnegative".into()));
    }
    if gap.is_zero() {
        let p = FiniteMetricSpace::from_matrix(vec![vec![Real::zero()]])?;
        return FiniteMMSpace::new(p, vec![int(1)]);
    }
    Ok(FiniteMMSpace::uniform(FiniteMetricSpace::on_line(&[Real::zero(), gap.clone()])?))
}

/// The cardinality argument: `□(X, Y) < min{sep X, min atom of μ_X}` forces
/// `|Y| ≥ |X|`. Returns whether the implication holds on this pair.
pub fn cardinality_floor_check(x: &FiniteMMSpace, y: &FiniteMMSpace) -> Result<bool> {
    let value = box_exact(x, y)?.value;
    let threshold = x.space().separation().min(ExtReal::Finite(x.min_atom().clone()));
    Ok(ExtReal::Finite(value) >= threshold || y.len() >= x.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relation::{distortion, mass_on};
    use crate::transport::is_coupling;

    fn gap(num: i64, den: i64) -> FiniteMMSpace {
        two_point_space(&ratio(num, den)).unwrap()
    }

    fn check_witness(x: &FiniteMMSpace, y: &FiniteMMSpace, r: &BoxResult) {
        assert!(is_coupling(&r.coupling, x.mass(), y.mass()));
        let dis = distortion(&r.relation, x.space(), y.space()).unwrap();
        let miss = Real::one() - mass_on(&r.coupling, &r.relation).unwrap();
        assert_eq!(dis.max(miss), r.value);
    }

    #[test]
    fn self_distance_is_zero() {
        let x = FiniteMMSpace::new(
            FiniteMetricSpace::on_line(&[int(0), int(1), int(3)]).unwrap(),
            vec![ratio(1, 2), ratio(1, 4), ratio(1, 4)],
        )
        .unwrap();
        let r = box_exact(&x, &x).unwrap();
        assert_eq!(r.value, int(0));
        assert_eq!(r.relation, Relation::identity(3));
        assert_eq!(r.coupling, Coupling::diagonal(x.mass()));
    }

    #[test]
    fn two_point_examples() {
        let r = box_exact(&gap(1, 1), &gap(6, 5)).unwrap();
        assert_eq!(r.value, ratio(1, 5));
        check_witness(&gap(1, 1), &gap(6, 5), &r);
        assert_eq!(box_exact(&gap(1, 1), &gap(2, 1)).unwrap().value, ratio(1, 2));
        let r = box_exact(&gap(0, 1), &gap(3, 1)).unwrap();
        assert_eq!(r.value, ratio(1, 2));
        check_witness(&gap(0, 1), &gap(3, 1), &r);
    }

    #[test]
    fn guard_refusal() {
        let pts: Vec<Real> = (0..7).map(int).collect();
        let x = FiniteMMSpace::uniform(FiniteMetricSpace::on_line(&pts).unwrap());
        assert!(matches!(box_exact(&x, &x), Err(Error::GuardExceeded { .. })));
        let ok = box_exact_with(&x, &x, &BoxOptions { guard_cells: 49 }).unwrap();
        assert_eq!(ok.value, int(0));
    }

    #[test]
    fn atom_bound_examples() {
        assert_eq!(box_atom_bound(&gap(1, 1), &gap(3, 1)), ratio(1, 2));
        let x = FiniteMMSpace::new(
            FiniteMetricSpace::on_line(&[int(0), int(1)]).unwrap(),
            vec![ratio(7, 10), ratio(3, 10)],
        )
        .unwrap();
        let y = FiniteMMSpace::uniform(FiniteMetricSpace::on_line(&[int(0), int(1), int(2), int(3)]).unwrap());
        assert_eq!(box_atom_bound(&x, &y), ratio(3, 4));
        assert_eq!(box_atom_bound(&gap(0, 1), &gap(0, 1)), int(0));
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(two_point_box_oracle(&int(1), &ratio(6, 5)).unwrap(), ratio(1, 5));
        assert_eq!(two_point_box_oracle(&ratio(7, 3), &ratio(7, 3)).unwrap(), int(0));
        assert_eq!(two_point_box_oracle(&int(0), &int(3)).unwrap(), ratio(1, 2));
        assert!(two_point_box_oracle(&int(-1), &int(0)).is_err());
    }

    #[test]
    fn cardinality_floor_examples() {
        let tri = FiniteMMSpace::uniform(
            FiniteMetricSpace::from_matrix(vec![
                vec![int(0), int(1), int(1)],
                vec![int(1), int(0), int(1)],
                vec![int(1), int(1), int(0)],
            ])
            .unwrap(),
        );
        // box = 1 − ⅓ ≥ threshold ⅓, so the implication is vacuous
        assert_eq!(box_exact(&tri, &gap(0, 1)).unwrap().value, ratio(2, 3));
        assert!(cardinality_floor_check(&tri, &gap(0, 1)).unwrap());
        assert!(cardinality_floor_check(&tri, &tri).unwrap());
        assert_eq!(box_exact(&gap(1, 1), &gap(101, 100)).unwrap().value, ratio(1, 100));
        assert!(cardinality_floor_check(&gap(1, 1), &gap(101, 100)).unwrap());
    }

    #[test]
    fn lexicographic_mask_order() {
        assert!(lex_less(0b0011, 0b0101));
        assert!(lex_less(0b0001, 0b0011));
        assert!(!lex_less(0b0110, 0b0101));
    }
}
