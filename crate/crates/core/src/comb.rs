//! Discretized comb spaces: a basepoint at the origin plus vertical teeth
//! `{2^{−i+2}} × [0, 2^{−i}(1 + t(i))]`, `i = 1..depth`, under the planar ℓ₁
//! metric. Tooth `i` carries mass `2^{−i}` spread evenly over its blocks; the
//! mass of the teeth beyond `depth` is lumped on the basepoint.
//!
//! Each tooth is cut into `m` equal blocks and block `j` is represented by its
//! upper endpoint `2^{−i}(1 + t(i))(j + 1)/m`, so the tooth tip is a sample.
//! Point order is basepoint first, then tooth-major, block-minor.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::number::{int, pow2, ratio, Real};
use crate::relation::{distortion, Coupling, Relation};
use crate::space::{l1, FiniteMMSpace, FiniteMetricSpace};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CombParams {
    t: Vec<Real>,
    pts_per_tooth: usize,
}

impl CombParams {
    /// `depth` is `t.len()`.
    pub fn new(t: Vec<Real>, pts_per_tooth: usize) -> Result<Self> {
        if t.is_empty() {
            return Err(Error::InvalidParameter("depth must be at least 1".into()));
        }
        if pts_per_tooth == 0 {
            return Err(Error::InvalidParameter("pts_per_tooth must be at least 1".into()));
        }
        if let Some(i) = t.iter().position(|v| v.is_negative() || v > &Real::one()) {
            return Err(Error::InvalidParameter(format!("t({}) is outside [0, 1]", i + 1)));
        }
        Ok(CombParams { t, pts_per_tooth })
    }

    /// Like [`CombParams::new`], also checking `t` against an explicit depth.
    pub fn with_depth(t: Vec<Real>, depth: usize, pts_per_tooth: usize) -> Result<Self> {
        if t.len() != depth {
            return Err(Error::DimensionMismatch(format!("t has {} entries but depth is {depth}", t.len())));
        }
        Self::new(t, pts_per_tooth)
    }

    pub fn t(&self) -> &[Real] {
        &self.t
    }

    pub fn depth(&self) -> usize {
        self.t.len()
    }

    pub fn pts_per_tooth(&self) -> usize {
        self.pts_per_tooth
    }
}

/// Horizontal position of tooth `i` (1-based).
pub fn tooth_position(i: usize) -> Real {
    pow2(2 - i as i64)
}

/// Length `2^{−i}(1 + t(i))` of tooth `i` (1-based).
pub fn tooth_length(i: usize, t_i: &Real) -> Real {
    pow2(-(i as i64)) * (Real::one() + t_i)
}

pub fn build_comb(p: &CombParams) -> FiniteMMSpace {
    let m = p.pts_per_tooth;
    let mut labels = vec!["base".to_string()];
    let mut coords = vec![[Real::zero(), Real::zero()]];
    let mut mass = vec![pow2(-(p.depth() as i64))];
    for (k, t_i) in p.t.iter().enumerate() {
        let i = k + 1;
        let x = tooth_position(i);
        let len = tooth_length(i, t_i);
        let block_mass = pow2(-(i as i64)) * ratio(1, m as i64);
        for j in 0..m {
            labels.push(format!("t{i}.{j}"));
            coords.push([x.clone(), &len * ratio(j as i64 + 1, m as i64)]);
            mass.push(block_mass.clone());
        }
    }
    let space = FiniteMetricSpace::from_l1_points(labels, coords).expect("ℓ₁ points form a metric space");
    FiniteMMSpace::new(space, mass).expect("comb masses sum to 1")
}

/// The block-matching certificate between two combs of equal depth and mesh.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CombCertificate {
    pub coupling: Coupling,
    pub relation: Relation,
    /// The bound `4 · max{2^{−depth}, 1/m, max_i 2^{−i}|s(i) − t(i)|}`, or the
    /// requested ε when one was given.
    pub eps_bound: Real,
    /// The actual distortion of `relation`.
    pub distortion: Real,
}

impl CombCertificate {
    pub fn mass(&self) -> Real {
        self.relation.iter().map(|(i, j)| self.coupling.get(i, j)).sum()
    }

    /// `max{1 − π(S), dis S}`, an upper bound on the box distance.
    pub fn certified_value(&self) -> Real {
        (Real::one() - self.mass()).max(self.distortion.clone())
    }
}

/// The three quantities whose maximum, times 4, bounds the distortion:
/// the truncated tail `2^{−depth}`, the mesh `1/m`, and the tooth drift
/// `max_i 2^{−i}|s(i) − t(i)|`.
pub fn witness_terms(s: &[Real], t: &[Real], pts_per_tooth: usize) -> [Real; 3] {
    let tail = pow2(-(s.len() as i64));
    let mesh = ratio(1, pts_per_tooth as i64);
    let drift = s
        .iter()
        .zip(t)
        .enumerate()
        .map(|(k, (a, b))| pow2(-(k as i64 + 1)) * (a - b).abs())
        .max()
        .unwrap_or_else(Real::zero);
    [tail, mesh, drift]
}

/// Pairs block `j` of tooth `i` in `C_s` with block `j` of tooth `i` in `C_t`
/// (and the two basepoints), coupled by the per-block product measures, so
/// `π(S) = 1`. Each term of [`witness_terms`] must stay below ε/4 when ε is
/// requested explicitly.
pub fn comb_witness(s: &[Real], t: &[Real], pts_per_tooth: usize, requested_eps: Option<&Real>) -> Result<CombCertificate> {
    if s.len() != t.len() {
        return Err(Error::DimensionMismatch(format!("s has {} teeth, t has {}", s.len(), t.len())));
    }
    let ps = CombParams::new(s.to_vec(), pts_per_tooth)?;
    let pt = CombParams::new(t.to_vec(), pts_per_tooth)?;
    let [tail, mesh, drift] = witness_terms(s, t, pts_per_tooth);
    let eps_bound = match requested_eps {
        Some(eps) => {
            let quarter = eps * ratio(1, 4);
            if mesh >= quarter {
                return Err(Error::InvalidParameter(format!(
                    "mesh too coarse: 1/m = 1/{pts_per_tooth} is not < ε/4"
                )));
            }
            if tail >= quarter {
                return Err(Error::InvalidParameter("depth too small: 2^-depth is not < ε/4".into()));
            }
            if drift >= quarter {
                return Err(Error::InvalidParameter(
                    "s and t too far apart: max 2^-i |s(i) - t(i)| is not < ε/4".into(),
                ));
            }
            eps.clone()
        }
        None => int(4) * tail.max(mesh).max(drift),
    };

    let (cs, ct) = (build_comb(&ps), build_comb(&pt));
    // one sample per block, so the block product measure is a single atom
    let relation = Relation::identity(cs.len());
    let coupling = Coupling::diagonal(cs.mass());
    debug_assert_eq!(cs.mass(), ct.mass());
    let dis = distortion(&relation, cs.space(), ct.space())?;
    if dis > eps_bound {
        return Err(Error::Internal("certificate distortion exceeds its bound".into()));
    }
    Ok(CombCertificate { coupling, relation, eps_bound, distortion: dis })
}

/// Hausdorff distance between the planar coordinate sets, under ℓ₁.
pub fn hausdorff_l1(a: &FiniteMetricSpace, b: &FiniteMetricSpace) -> Result<Real> {
    let ca = a.coords().ok_or_else(|| Error::InvalidParameter("first space has no coordinates".into()))?;
    let cb = b.coords().ok_or_else(|| Error::InvalidParameter("second space has no coordinates".into()))?;
    let one_sided = |from: &[[Real; 2]], to: &[[Real; 2]]| -> Real {
        from.iter()
            .map(|p| to.iter().map(|q| l1(p, q)).min().expect("non-empty"))
            .max()
            .expect("non-empty")
    };
    Ok(one_sided(ca, cb).max(one_sided(cb, ca)))
}
