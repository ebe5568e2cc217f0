//! Randomized von Neumann inequality experiments on distinguished varieties.

mod experiment;
mod poly;
mod sup;

pub use experiment::{
    vn_experiment, HypothesisGate, ReferenceVariety, TrialRecord, TrialVerdict, VNReport, VnConfig,
};
pub use poly::{multi_indices, random_poly, MPoly};
pub use sup::{gamma_sup_bound, refine_boundary_sup, sampled_sup, SupBound};
