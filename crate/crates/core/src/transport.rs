//! Couplings that put as much mass as possible on a prescribed relation, and
//! the Prokhorov distance between two measures on one finite space.

use std::collections::VecDeque;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::number::Real;
use crate::relation::{Coupling, Relation};
use crate::space::FiniteMetricSpace;

/// Largest point count accepted by [`prokhorov`] (it visits every subset).
pub const PROKHOROV_GUARD: usize = 16;

/// True iff `pi` has exactly the marginals `mu_x` (rows) and `mu_y` (columns).
pub fn is_coupling(pi: &Coupling, mu_x: &[Real], mu_y: &[Real]) -> bool {
    pi.rows() == mu_x.len()
        && (pi.cols() == mu_y.len() || mu_x.is_empty())
        && pi.matrix().iter().flatten().all(|v| !v.is_negative())
        && pi.row_sums() == mu_x
        && pi.col_sums() == mu_y
}

/// Maximizes `π(S)` over couplings of `mu_x` and `mu_y`.
///
/// Solved as a max-flow: source → x with capacity `μ_X(x)`, x → y for every
/// `(x, y) ∈ S`, y → sink with capacity `μ_Y(y)`. The flow is completed to a
/// full coupling by a northwest-corner fill of the leftover marginals; that
/// fill never touches `S` (a cell of `S` with leftover mass on both sides
/// would be an augmenting path).
pub fn max_mass_coupling(mu_x: &[Real], mu_y: &[Real], s: &Relation) -> Result<(Coupling, Real)> {
    let (nx, ny) = (mu_x.len(), mu_y.len());
    s.check_bounds(nx, ny)?;
    let total_x: Real = mu_x.iter().sum();
    let total_y: Real = mu_y.iter().sum();
    if total_x != total_y || mu_x.iter().chain(mu_y).any(|m| m.is_negative()) {
        return Err(Error::NotProbability(
            "marginals must be nonnegative with equal total mass".into(),
        ));
    }

    let source = 0;
    let sink = nx + ny + 1;
    let nodes = nx + ny + 2;
    let mut cap = vec![vec![Real::zero(); nodes]; nodes];
    for (i, m) in mu_x.iter().enumerate() {
        cap[source][1 + i] = m.clone();
    }
    for (j, m) in mu_y.iter().enumerate() {
        cap[1 + nx + j][sink] = m.clone();
    }
    // any capacity ≥ the total mass behaves as unbounded here
    let unbounded = &total_x + Real::one();
    for (i, j) in s.iter() {
        cap[1 + i][1 + nx + j] = unbounded.clone();
    }

    let mut value = Real::zero();
    while let Some(path) = augmenting_path(&cap, source, sink) {
        let bottleneck = path
            .windows(2)
            .map(|w| &cap[w[0]][w[1]])
            .min()
            .cloned()
            .expect("path has an edge");
        for w in path.windows(2) {
            cap[w[0]][w[1]] -= &bottleneck;
            cap[w[1]][w[0]] += &bottleneck;
        }
        value += bottleneck;
    }

    let mut pi = Coupling::zeros(nx, ny);
    for (i, j) in s.iter() {
        // reverse residual capacity equals the flow pushed along (i, j)
        let flow = cap[1 + nx + j][1 + i].clone();
        if flow.is_positive() {
            pi.add(i, j, &flow);
        }
    }
    let mut rows: Vec<Real> = mu_x.iter().zip(pi.row_sums()).map(|(m, r)| m - r).collect();
    let mut cols: Vec<Real> = mu_y.iter().zip(pi.col_sums()).map(|(m, c)| m - c).collect();
    northwest_fill(&mut pi, &mut rows, &mut cols);
    Ok((pi, value))
}

fn augmenting_path(cap: &[Vec<Real>], source: usize, sink: usize) -> Option<Vec<usize>> {
    let n = cap.len();
    let mut prev = vec![usize::MAX; n];
    prev[source] = source;
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        if u == sink {
            break;
        }
        for v in 0..n {
            if prev[v] == usize::MAX && cap[u][v].is_positive() {
                prev[v] = u;
                queue.push_back(v);
            }
        }
    }
    if prev[sink] == usize::MAX {
        return None;
    }
    let mut path = vec![sink];
    let mut v = sink;
    while v != source {
        v = prev[v];
        path.push(v);
    }
    path.reverse();
    Some(path)
}

fn northwest_fill(pi: &mut Coupling, rows: &mut [Real], cols: &mut [Real]) {
    let (mut i, mut j) = (0, 0);
    while i < rows.len() && j < cols.len() {
        let amount = (&rows[i]).min(&cols[j]).clone();
        if amount.is_positive() {
            pi.add(i, j, &amount);
            rows[i] -= &amount;
            cols[j] -= &amount;
        }
        if rows[i].is_zero() {
            i += 1;
        } else {
            j += 1;
        }
    }
}

fn check_probability(name: &str, v: &[Real], n: usize) -> Result<()> {
    if v.len() != n {
        return Err(Error::DimensionMismatch(format!("{name} has {} entries, space has {n} points", v.len())));
    }
    if let Some(i) = v.iter().position(|m| m.is_negative()) {
        return Err(Error::NotProbability(format!("{name}[{i}] is negative")));
    }
    if !v.iter().sum::<Real>().is_one() {
        return Err(Error::NotProbability(format!("{name} does not sum to 1")));
    }
    Ok(())
}

/// Prokhorov distance `inf{ε > 0 : μ(A) ≤ ν(A^ε) + ε for all A}` with the open
/// blow-up `A^ε = {z : d(z, A) < ε}`.
///
/// For a fixed `A` the feasible ε form a ray `[c_A, ∞)` once the open blow-up
/// is replaced by its right limit, the closed blow-up `{z : d(z, A) ≤ c}`.
/// Between consecutive distances `r_k < r_{k+1}` from `A` that blow-up is
/// constant, so `c_A` is the first `max(r_k, μ(A) − ν(B_k))` below `r_{k+1}`.
/// The distance is `max_A c_A`; it is an infimum and need not be feasible.
pub fn prokhorov(mu: &[Real], nu: &[Real], z: &FiniteMetricSpace) -> Result<Real> {
    let n = z.len();
    check_probability("mu", mu, n)?;
    check_probability("nu", nu, n)?;
    if n > PROKHOROV_GUARD {
        return Err(Error::GuardExceeded {
            what: format!("prokhorov over {n} points"),
            size: num_bigint::BigUint::one() << n,
            limit: format!("{PROKHOROV_GUARD} points"),
        });
    }
    let mut answer = Real::zero();
    for mask in 1u32..(1u32 << n) {
        let mu_a: Real = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| &mu[i]).sum();
        if mu_a <= answer {
            continue;
        }
        // distance from each point to A
        let reach: Vec<&Real> = (0..n)
            .map(|p| {
                (0..n)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| z.d(p, i))
                    .min()
                    .expect("A is non-empty")
            })
            .collect();
        let mut levels: Vec<&Real> = reach.clone();
        levels.sort();
        levels.dedup();
        let mut c_a = None;
        for (k, r) in levels.iter().enumerate() {
            let nu_b: Real = (0..n).filter(|&p| reach[p] <= *r).map(|p| &nu[p]).sum();
            let candidate = (*r).max(&(&mu_a - nu_b)).clone();
            if levels.get(k + 1).is_none_or(|next| &candidate < *next) {
                c_a = Some(candidate);
                break;
            }
        }
        let c_a = c_a.expect("last level always qualifies");
        if c_a > answer {
            answer = c_a;
        }
    }
    Ok(answer)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::{int, ratio};
    use proptest::prelude::*;

    fn half() -> Vec<Real> {
        vec![ratio(1, 2), ratio(1, 2)]
    }

    /// max π(S) by Hall/König deficiency: `1 − max_A (μ_X(A) − μ_Y(N_S(A)))`.
    fn deficiency_oracle(mu_x: &[Real], mu_y: &[Real], s: &Relation) -> Real {
        let nx = mu_x.len();
        let mut worst = Real::zero();
        for mask in 0u32..(1 << nx) {
            let in_a = |i: usize| mask >> i & 1 == 1;
            let a: Real = (0..nx).filter(|&i| in_a(i)).map(|i| &mu_x[i]).sum();
            let nbr: Real = (0..mu_y.len())
                .filter(|&j| (0..nx).any(|i| in_a(i) && s.contains(i, j)))
                .map(|j| &mu_y[j])
                .sum();
            worst = worst.max(a - nbr);
        }
        Real::one() - worst
    }

    #[test]
    fn full_relation_carries_everything() {
        let (pi, v) = max_mass_coupling(&half(), &[ratio(1, 3), ratio(2, 3)], &Relation::full(2, 2)).unwrap();
        assert_eq!(v, int(1));
        assert!(is_coupling(&pi, &half(), &[ratio(1, 3), ratio(2, 3)]));
    }

    #[test]
    fn singleton_relation_gets_smaller_atom() {
        let mx = vec![ratio(7, 10), ratio(3, 10)];
        let my = vec![ratio(1, 4); 4];
        let (pi, v) = max_mass_coupling(&mx, &my, &Relation::new([(0, 2)])).unwrap();
        assert_eq!(v, ratio(1, 4));
        assert_eq!(pi.get(0, 2), &ratio(1, 4));
        assert!(is_coupling(&pi, &mx, &my));
    }

    #[test]
    fn diagonal_of_uniform_two_points() {
        let (pi, v) = max_mass_coupling(&half(), &half(), &Relation::identity(2)).unwrap();
        assert_eq!(v, int(1));
        assert_eq!(pi, Coupling::diagonal(&half()));
    }

    #[test]
    fn empty_relation_still_returns_a_coupling() {
        let (pi, v) = max_mass_coupling(&half(), &half(), &Relation::empty()).unwrap();
        assert_eq!(v, int(0));
        assert!(is_coupling(&pi, &half(), &half()));
    }

    #[test]
    fn is_coupling_examples() {
        let mx = vec![ratio(1, 3), ratio(2, 3)];
        let my = vec![ratio(1, 5), ratio(4, 5)];
        assert!(is_coupling(&Coupling::product(&mx, &my), &mx, &my));
        assert!(!is_coupling(&Coupling::zeros(2, 2), &mx, &my));
        assert!(is_coupling(&Coupling::diagonal(&half()), &half(), &half()));
    }

    #[test]
    fn prokhorov_point_masses() {
        let z = FiniteMetricSpace::on_line(&[int(0), ratio(3, 10)]).unwrap();
        let (dx, dy) = (vec![int(1), int(0)], vec![int(0), int(1)]);
        assert_eq!(prokhorov(&dx, &dy, &z).unwrap(), ratio(3, 10));
        let far = FiniteMetricSpace::on_line(&[int(0), int(5)]).unwrap();
        assert_eq!(prokhorov(&dx, &dy, &far).unwrap(), int(1));
        assert_eq!(prokhorov(&dx, &dx, &far).unwrap(), int(0));
    }

    #[test]
    fn prokhorov_rejects_bad_vectors() {
        let z = FiniteMetricSpace::on_line(&[int(0), int(1)]).unwrap();
        assert!(matches!(
            prokhorov(&[ratio(1, 2), ratio(1, 3)], &half(), &z),
            Err(Error::NotProbability(_))
        ));
        assert!(matches!(prokhorov(&[int(1)], &half(), &z), Err(Error::DimensionMismatch(_))));
    }

    /// Candidate-set oracle: smallest c in {0} ∪ distances ∪ {μ(A) − ν(B)}
    /// such that every A satisfies μ(A) ≤ ν({d(·,A) ≤ c}) + c.
    fn candidate_oracle(mu: &[Real], nu: &[Real], z: &FiniteMetricSpace) -> Real {
        let n = z.len();
        let subset_mass = |v: &[Real], mask: u32| -> Real { (0..n).filter(|i| mask >> i & 1 == 1).map(|i| &v[i]).sum() };
        let mut cands: Vec<Real> = vec![Real::zero()];
        cands.extend(z.matrix().iter().flatten().cloned());
        for a in 0u32..(1 << n) {
            for b in 0u32..(1 << n) {
                let c = subset_mass(mu, a) - subset_mass(nu, b);
                if c.is_positive() {
                    cands.push(c);
                }
            }
        }
        cands.sort();
        cands.dedup();
        let closed_ok = |c: &Real| {
            (1u32..(1 << n)).all(|a| {
                let blow: u32 = (0..n)
                    .filter(|&p| (0..n).any(|i| a >> i & 1 == 1 && z.d(p, i) <= c))
                    .fold(0, |m, p| m | 1 << p);
                subset_mass(mu, a) <= subset_mass(nu, blow) + c
            })
        };
        cands.into_iter().find(closed_ok).unwrap()
    }

    /// Direct open-ball feasibility of ε.
    fn open_feasible(mu: &[Real], nu: &[Real], z: &FiniteMetricSpace, eps: &Real) -> bool {
        let n = z.len();
        (1u32..(1 << n)).all(|a| {
            let mu_a: Real = (0..n).filter(|i| a >> i & 1 == 1).map(|i| &mu[i]).sum();
            let nu_blow: Real = (0..n)
                .filter(|&p| (0..n).any(|i| a >> i & 1 == 1 && z.d(p, i) < eps))
                .map(|p| &nu[p])
                .sum();
            mu_a <= nu_blow + eps
        })
    }

    fn measure(n: usize) -> impl Strategy<Value = Vec<Real>> {
        prop::collection::vec(0i64..5, n).prop_filter("non-zero", |w| w.iter().any(|&v| v > 0)).prop_map(|w| {
            let total: i64 = w.iter().sum();
            w.into_iter().map(|v| ratio(v, total)).collect()
        })
    }

    fn instance() -> impl Strategy<Value = (FiniteMetricSpace, Vec<Real>, Vec<Real>)> {
        (2usize..=4).prop_flat_map(|n| {
            (
                prop::collection::btree_set(0i64..30, n..=n),
                measure(n),
                measure(n),
            )
                .prop_map(|(pts, mu, nu)| {
                    let pts: Vec<Real> = pts.into_iter().map(|p| ratio(p, 10)).collect();
                    (FiniteMetricSpace::on_line(&pts).unwrap(), mu, nu)
                })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn max_mass_matches_deficiency_oracle(
            wx in measure(3),
            wy in measure(3),
            bits in 0u32..512,
        ) {
            let s: Relation = (0..9).filter(|k| bits >> k & 1 == 1).map(|k| (k / 3, k % 3)).collect();
            let (pi, v) = max_mass_coupling(&wx, &wy, &s).unwrap();
            prop_assert!(is_coupling(&pi, &wx, &wy));
            prop_assert_eq!(crate::relation::mass_on(&pi, &s).unwrap(), v.clone());
            prop_assert_eq!(v.clone(), deficiency_oracle(&wx, &wy, &s));
            let grown = s.union(&Relation::new([((bits as usize) % 3, (bits as usize / 3) % 3)]));
            prop_assert!(v <= max_mass_coupling(&wx, &wy, &grown).unwrap().1);
        }

        #[test]
        fn prokhorov_matches_candidate_oracle((z, mu, nu) in instance()) {
            let p = prokhorov(&mu, &nu, &z).unwrap();
            prop_assert_eq!(p.clone(), candidate_oracle(&mu, &nu, &z));
            prop_assert!(p <= int(1));
            let tiny = ratio(1, 1_000_000);
            prop_assert!(open_feasible(&mu, &nu, &z, &(&p + &tiny)));
            if p > tiny {
                prop_assert!(!open_feasible(&mu, &nu, &z, &(&p - &tiny)));
            }
        }
    }
}
