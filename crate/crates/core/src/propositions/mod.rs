//! Constructive replays of the impossibility and characterization results.

mod certificate;
mod chain;
mod constructions;
mod rdu_limits;

pub use certificate::{parse_certificate, write_certificate};
pub use chain::{
    validate_chain, validate_chain_with, ChainKind, ChainReport, Claim, DerivationChain, DerivationStep,
    LocatorReport, Relation, StepFailure,
};
pub use constructions::{
    build_prop1_chain, build_prop2_chain, build_prop3_chain, build_prop4_chain, default_beta_of_alpha,
    prop2_default_population, ChainParams, Construction,
};
pub use rdu_limits::{
    prop5_nonagg_condition, prop5_ratio_failure, ratio_coefficient, ratio_instance, Prop5Report, RatioFailure,
};
