//! Exact Gromov–Hausdorff distance between finite metric spaces:
//! `d_GH(X, Y) = ½ · min over correspondences R of dis R`.
//!
//! Every correspondence `R` contains a sub-relation `graph(f) ∪ graph(g)ᵀ`
//! with `f: X → Y`, `g: Y → X` (pick `f(x) ∈ R_x` and `g(y)` with
//! `(g(y), y) ∈ R`), and such a union is itself a correspondence. Distortion
//! is monotone under inclusion, so minimizing over the `|Y|^|X| · |X|^|Y|`
//! unions gives the minimum over all correspondences.

use num_bigint::BigUint;
use num_traits::Pow;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::number::{ratio, Real};
use crate::relation::{distortion, is_correspondence, DiscrepancyTable, Relation};
use crate::space::FiniteMetricSpace;

#[derive(Clone, Debug)]
pub struct GhOptions {
    /// Largest accepted point count on either side.
    pub guard_n: usize,
    /// Cut branches whose partial distortion already exceeds the incumbent.
    pub branch_and_bound: bool,
}

impl Default for GhOptions {
    fn default() -> Self {
        GhOptions { guard_n: 7, branch_and_bound: false }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GhResult {
    /// `d_GH = ½ · distortion`.
    pub value: Real,
    pub distortion: Real,
    /// A minimizing correspondence, lexicographically smallest among the
    /// searched family.
    pub witness: Relation,
}

pub fn gh_search_space(nx: usize, ny: usize) -> BigUint {
    BigUint::from(ny).pow(nx as u32) * BigUint::from(nx).pow(ny as u32)
}

pub fn gh_exact(x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> Result<GhResult> {
    gh_exact_with(x, y, &GhOptions::default())
}

pub fn gh_exact_with(x: &FiniteMetricSpace, y: &FiniteMetricSpace, opts: &GhOptions) -> Result<GhResult> {
    let (nx, ny) = (x.len(), y.len());
    if nx > opts.guard_n || ny > opts.guard_n {
        return Err(Error::GuardExceeded {
            what: format!("gh over {nx}x{ny} points"),
            size: gh_search_space(nx, ny),
            limit: format!("{} points per side", opts.guard_n),
        });
    }
    let table = DiscrepancyTable::new(x, y);
    let best = (0..ny)
        .into_par_iter()
        .map(|first| {
            let mut search = Search {
                table: &table,
                nx,
                ny,
                prune: opts.branch_and_bound,
                pairs: Vec::with_capacity(nx + ny),
                best: None,
            };
            search.push_and_descend((0, first), 0);
            search.best
        })
        .reduce(|| None, pick_better);
    let (rank, witness) = best.expect("non-empty spaces have a correspondence");
    let dis = table.value(rank).clone();
    Ok(GhResult { value: &dis * ratio(1, 2), distortion: dis, witness })
}

fn pick_better(a: Option<(u32, Relation)>, b: Option<(u32, Relation)>) -> Option<(u32, Relation)> {
    match (a, b) {
        (None, b) => b,
        (a, None) => a,
        (Some(a), Some(b)) => Some(if b < a { b } else { a }),
    }
}

struct Search<'a> {
    table: &'a DiscrepancyTable,
    nx: usize,
    ny: usize,
    prune: bool,
    /// Pairs chosen so far: `f(0..)` first, then `g(0..)` transposed.
    pairs: Vec<(usize, usize)>,
    best: Option<(u32, Relation)>,
}

impl Search<'_> {
    fn push_and_descend(&mut self, pair: (usize, usize), running: u32) {
        let mut worst = running;
        for &(a, b) in &self.pairs {
            worst = worst.max(self.table.rank(pair.0, pair.1, a, b));
        }
        if self.prune {
            if let Some((b, _)) = &self.best {
                if worst > *b {
                    return;
                }
            }
        }
        self.pairs.push(pair);
        self.descend(worst);
        self.pairs.pop();
    }

    fn descend(&mut self, running: u32) {
        let depth = self.pairs.len();
        if depth == self.nx + self.ny {
            if self.best.as_ref().is_none_or(|(b, _)| running <= *b) {
                let rel = Relation::new(self.pairs.iter().copied());
                self.best = pick_better(self.best.take(), Some((running, rel)));
            }
        } else if depth < self.nx {
            for yv in 0..self.ny {
                self.push_and_descend((depth, yv), running);
            }
        } else {
            let yv = depth - self.nx;
            for xv in 0..self.nx {
                self.push_and_descend((xv, yv), running);
            }
        }
    }
}

/// `½ · dis R` for a correspondence `R`; always an upper bound on `d_GH`.
pub fn gh_upper_from_relation(r: &Relation, x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> Result<Real> {
    r.check_bounds(x.len(), y.len())?;
    if !is_correspondence(r, x.len(), y.len()) {
        return Err(Error::NotCorrespondence);
    }
    Ok(distortion(r, x, y)? * ratio(1, 2))
}
