//! Counting statistics of the output field: correlators, photon m-tiples,
//! number probabilities and pair correlations.

mod counting;
mod inversion;
mod pairs;

pub use counting::{
    chain_integrals, chain_integrals_trapezoid, correlator_chain, correlator_gm, flux_integral, photon_mtiples,
    photon_statistics, CountingOptions, MtipleMethod, PhotonStatistics, N1_CROSS_CHECK,
};
pub use inversion::{
    binomial, invert_closed_form, invert_to_probabilities, mtiples_from_probabilities, sanitize_probabilities,
    NEGATIVE_SLACK,
};
pub use pairs::{cross_pair_integral, cross_pair_result, csi_metric, pair_kernel, CrossPairResult};
