#![allow(dead_code)]

use finmm::number::{int, ratio};
use finmm::{distortion, is_correspondence, max_mass_coupling, FiniteMMSpace, FiniteMetricSpace, Real, Relation};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random metric on `n` points: random edge weights in {1/4, …, 10/4}, closed
/// under shortest paths so the triangle inequality holds.
pub fn random_metric(rng: &mut impl Rng, n: usize) -> FiniteMetricSpace {
    let mut d = vec![vec![Real::zero(); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let w = ratio(rng.gen_range(1..=10), 4);
            d[i][j] = w.clone();
            d[j][i] = w;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = &d[i][k] + &d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    FiniteMetricSpace::from_matrix(d).unwrap()
}

pub fn random_mass(rng: &mut impl Rng, n: usize) -> Vec<Real> {
    let w: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=5)).collect();
    let total: i64 = w.iter().sum();
    w.into_iter().map(|v| ratio(v, total)).collect()
}

pub fn random_mm(rng: &mut impl Rng, n: usize) -> FiniteMMSpace {
    let x = random_metric(rng, n);
    FiniteMMSpace::new(x, random_mass(rng, n)).unwrap()
}

pub fn random_perm(rng: &mut impl Rng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        p.swap(i, j);
    }
    p
}

/// The same space with point `i` renamed to `sigma[i]`.
pub fn relabel_metric(x: &FiniteMetricSpace, sigma: &[usize]) -> FiniteMetricSpace {
    let n = x.len();
    let mut d = vec![vec![Real::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            d[sigma[i]][sigma[j]] = x.d(i, j).clone();
        }
    }
    FiniteMetricSpace::from_matrix(d).unwrap()
}

pub fn relabel_mm(x: &FiniteMMSpace, sigma: &[usize]) -> FiniteMMSpace {
    let mut m = vec![Real::zero(); x.len()];
    for (i, &s) in sigma.iter().enumerate() {
        m[s] = x.mass()[i].clone();
    }
    FiniteMMSpace::new(relabel_metric(x.space(), sigma), m).unwrap()
}

fn all_cells(nx: usize, ny: usize) -> Vec<(usize, usize)> {
    (0..nx).flat_map(|i| (0..ny).map(move |j| (i, j))).collect()
}

fn subset(cells: &[(usize, usize)], mask: u64) -> Relation {
    (0..cells.len()).filter(|k| mask >> k & 1 == 1).map(|k| cells[k]).collect()
}

/// ½ · min dis over every subset of X × Y that is a correspondence.
pub fn gh_power_set(x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> Real {
    let cells = all_cells(x.len(), y.len());
    let mut best: Option<Real> = None;
    for mask in 0u64..(1 << cells.len()) {
        let r = subset(&cells, mask);
        if !is_correspondence(&r, x.len(), y.len()) {
            continue;
        }
        let d = distortion(&r, x, y).unwrap();
        if best.as_ref().is_none_or(|b| &d < b) {
            best = Some(d);
        }
    }
    best.unwrap() * ratio(1, 2)
}

/// min over every relation S of max{1 − max_π π(S), dis S}.
pub fn box_brute_force(x: &FiniteMMSpace, y: &FiniteMMSpace) -> Real {
    let cells = all_cells(x.len(), y.len());
    let mut best = int(1);
    for mask in 0u64..(1 << cells.len()) {
        let s = subset(&cells, mask);
        let dis = distortion(&s, x.space(), y.space()).unwrap();
        if dis >= best {
            continue;
        }
        let (_, carried) = max_mass_coupling(x.mass(), y.mass(), &s).unwrap();
        let v = dis.max(Real::one() - carried);
        if v < best {
            best = v;
        }
    }
    best
}

/// Prokhorov distance by the candidate set {0} ∪ distances ∪ {μ(A) − ν(B)}:
/// the least candidate c with μ(A) ≤ ν({d(·, A) ≤ c}) + c for every A.
pub fn prokhorov_candidates(mu: &[Real], nu: &[Real], z: &FiniteMetricSpace) -> Real {
    let n = z.len();
    let mass = |v: &[Real], m: u32| -> Real { (0..n).filter(|i| m >> i & 1 == 1).map(|i| &v[i]).sum() };
    let mut cands = vec![Real::zero()];
    cands.extend(z.matrix().iter().flatten().cloned());
    for a in 0u32..(1 << n) {
        for b in 0u32..(1 << n) {
            let c = mass(mu, a) - mass(nu, b);
            if c > Real::zero() {
                cands.push(c);
            }
        }
    }
    cands.sort();
    cands.dedup();
    cands
        .into_iter()
        .find(|c| {
            (1u32..(1 << n)).all(|a| {
                let blow = (0..n)
                    .filter(|&p| (0..n).any(|i| a >> i & 1 == 1 && z.d(p, i) <= c))
                    .fold(0u32, |m, p| m | 1 << p);
                mass(mu, a) <= mass(nu, blow) + c
            })
        })
        .unwrap()
}

/// Writes to the stderr handle directly, which the test harness does not
/// capture, so the verdict shows up even without `--nocapture`.
pub fn report(id: u32, name: &str, ok: bool, detail: &str) {
    use std::io::Write;
    let verdict = if ok { "PASS" } else { "FAIL" };
    let _ = writeln!(std::io::stderr(), "[{verdict}] criterion {id:>2}: {name}: {detail}");
}
