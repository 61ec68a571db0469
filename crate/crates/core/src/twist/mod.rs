//! Twisted coHom objects and their cocycle descriptions.

pub mod cocycle;
pub mod cpoint;
pub mod deform;
pub mod frt;
pub mod nongraded;
pub mod saturate;
pub mod semigroupoid;

pub use deform::{deform_subspace, hom_upsilon, shift_family, shift_relations, sigma_deform, FactorizableTwist, Powers};
pub use saturate::saturate_hom_general;
pub use semigroupoid::{check_semigroupoid, factor_tau, factorizable_tau, GlobalCollectionSample};
pub use cocycle::{a_chi_presentation, cocycle_checks, cocycle_eval, end_chi_presentation, hom_twist_equivalence, m_chi, mu_chi, twist_equivalences, Cocycle, Orientation};
pub use cpoint::{check_c_point, CPointData};
pub use frt::{frt_algebra, frt_suite, r_algebra, r_matrix, r_phi, rtt_vectors, yang_baxter_holds, FrtReport};
pub use nongraded::{nongraded_counterexample, NonGradedOutcome, NonGradedSetup};
