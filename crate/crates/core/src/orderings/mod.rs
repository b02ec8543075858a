//! Social welfare orderings.

pub mod config;
pub mod gfunc;
pub mod leximin;
pub mod rdu;
pub mod spec;
pub mod suffavg;
pub mod variants;

pub use gfunc::{GFunction, PiecewiseLinear};
pub use leximin::leximin_compare;
pub use rdu::{rdu_compare, rdu_value, RduParams};
pub use spec::{compare_values, swo_compare, OrderingSpec};
pub use suffavg::{
    gn_eval, lambda_feasible_interval, suffavg_value, LambdaInterval, LambdaSchedule, Magnitudes, SuffAvgParams,
};
pub use variants::{
    boundedg_value, concavepoor_value, multithreshold_value, rankweighted_value, GVariantParams,
    MultiThresholdParams, RankWeightParams, RankWeights, WeightSchedule,
};
