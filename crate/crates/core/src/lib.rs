//! Exact distances between finite metric spaces and finite metric measure
//! spaces.
//!
//! All arithmetic is on exact rationals ([`Real`]), so minima and equalities
//! reported by the solvers are exact.
//!
//! - [`gh`]: Gromov–Hausdorff distance by search over correspondences.
//! - [`boxdist`]: box distance, `min over π, S of max{1 − π(S), dis S}`.
//! - [`transport`]: max-mass couplings on a relation, Prokhorov distance.
//! - [`moduli`]: edge-length / weight coordinates, canonical forms, and the
//!   relation-to-injection construction.
//! - [`comb`]: discretized comb spaces and their block-matching certificates.
//! - [`io`]: the space and certificate file formats.

pub mod boxdist;
mod clique;
pub mod comb;
pub mod error;
pub mod gh;
pub mod io;
pub mod moduli;
pub mod number;
pub mod relation;
pub mod space;
pub mod transport;

pub use boxdist::{box_atom_bound, box_exact, box_exact_with, cardinality_floor_check, two_point_box_oracle, BoxOptions, BoxResult};
pub use comb::{build_comb, comb_witness, hausdorff_l1, CombCertificate, CombParams};
pub use error::{Error, Result};
pub use gh::{gh_exact, gh_exact_with, gh_upper_from_relation, GhOptions, GhResult};
pub use io::{Certificate, SpaceDoc};
pub use moduli::{
    canonical_form, mass_closeness, orbit_distance, phi_b, phi_gh, relation_to_injection, relation_to_injection_mm,
    uniform_lift, CanonicalForm, Injection, MetricVector, WeightVector,
};
pub use number::{ExtReal, Real};
pub use relation::{distortion, is_correspondence, mass_on, Coupling, Relation};
pub use space::{validate, FiniteMMSpace, FiniteMetricSpace, ValidationReport, Violation};
pub use transport::{is_coupling, max_mass_coupling, prokhorov};
