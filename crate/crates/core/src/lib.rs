//! Exact Collatz trajectory statistics, parity censuses and finite-scale
//! density experiments for sets defined by trajectory drops.

pub mod bound;
pub mod census;
pub mod density;
pub mod harness;
pub mod natural;
pub mod rational;
pub mod stopping;
pub mod trajectory;

pub use bound::{BoundFunction, BoundOrdering};
pub use census::{
    binomial_census_oracle, census, d_threshold, in_l, lemma2_audit, residue_parity_table,
    AuditSample, CensusParams, CensusResult, Comparator,
};
pub use density::{
    density_profile, finite_density, h_image, h_inclusion_check, image_cardinality_check, m_scan,
    t_pdp_example_check, DensityProfile, FiniteSet, HImageResult,
};
pub use natural::Natural;
pub use stopping::{first_drop, first_drop_outcome, DropOutcome};
pub use trajectory::{
    collatz_step, iterate, parity_sum, parity_vector, trajectory, ParityVariant, ParityVector,
    Termination, TrajectoryRecord,
};
