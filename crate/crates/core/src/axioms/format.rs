//! TOML form of axiom instances and generator parameters, in the same style
//! as ordering configs: profiles and rationals are strings.
//!
//! ```toml
//! axiom = "pigou-dalton"
//! u = "0, 4"
//! i = 1
//! j = 0
//! epsilon = "1"
//! ```

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{AxiomInstance, AxiomParams, CheckResult, WorstOff};
use crate::error::Result;
use crate::orderings::config::{toml_error, R};
use crate::profile::WellbeingProfile;

/// A profile in the one-line profile syntax.
#[derive(Debug, Clone, PartialEq)]
pub struct P(pub WellbeingProfile);

impl Serialize for P {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for P {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map(P).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum WorstOffConfig {
    #[default]
    AfterChange,
    BeforeChange,
}

impl From<WorstOffConfig> for WorstOff {
    fn from(w: WorstOffConfig) -> Self {
        match w {
            WorstOffConfig::AfterChange => WorstOff::AfterChange,
            WorstOffConfig::BeforeChange => WorstOff::BeforeChange,
        }
    }
}

impl From<WorstOff> for WorstOffConfig {
    fn from(w: WorstOff) -> Self {
        match w {
            WorstOff::AfterChange => WorstOffConfig::AfterChange,
            WorstOff::BeforeChange => WorstOffConfig::BeforeChange,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "axiom", rename_all = "kebab-case", deny_unknown_fields)]
pub enum InstanceConfig {
    Anonymity {
        u: P,
        perm: Vec<usize>,
    },
    StrongPareto {
        u: P,
        v: P,
    },
    WeakPareto {
        u: P,
        v: P,
    },
    PigouDalton {
        u: P,
        i: usize,
        j: usize,
        epsilon: R,
    },
    ReplicationInvariance {
        u: P,
        v: P,
        k: u64,
    },
    MinimalNonAggregation {
        u: P,
        v: P,
        i: usize,
        group: Vec<usize>,
        theta_p: R,
        theta_r: R,
        alpha: R,
        beta: R,
        #[serde(default)]
        worst_off: WorstOffConfig,
    },
    StrongNonAggregation {
        u: P,
        v: P,
        i: usize,
        group: Vec<usize>,
        alpha: R,
        beta: R,
    },
    StrongNonAggregationThreshold {
        u: P,
        v: P,
        i: usize,
        group: Vec<usize>,
        theta_p: R,
        theta_r: R,
        alpha: R,
        beta: R,
    },
    QuantitativeAggregation {
        u: P,
        v: P,
        i: usize,
        group: Vec<usize>,
        m: u64,
        gamma: R,
        delta: R,
    },
    RatioAggregation {
        u: P,
        v: P,
        i: usize,
        group: Vec<usize>,
        lambda: R,
        gamma: R,
        delta: R,
    },
    MinimalAggregation {
        u: P,
        v: P,
        i: usize,
        gamma: R,
        delta: R,
        n: u64,
    },
    StrongerNonAggregation {
        u: P,
        v: P,
        i: usize,
        group: Vec<usize>,
        theta_p: R,
        alpha: R,
        beta: R,
    },
}

impl From<InstanceConfig> for AxiomInstance {
    fn from(c: InstanceConfig) -> Self {
        use InstanceConfig as C;
        match c {
            C::Anonymity { u, perm } => AxiomInstance::Anonymity { u: u.0, perm },
            C::StrongPareto { u, v } => AxiomInstance::StrongPareto { u: u.0, v: v.0 },
            C::WeakPareto { u, v } => AxiomInstance::WeakPareto { u: u.0, v: v.0 },
            C::PigouDalton { u, i, j, epsilon } => AxiomInstance::PigouDalton { u: u.0, i, j, epsilon: epsilon.0 },
            C::ReplicationInvariance { u, v, k } => AxiomInstance::ReplicationInvariance { u: u.0, v: v.0, k },
            C::MinimalNonAggregation { u, v, i, group, theta_p, theta_r, alpha, beta, worst_off } => {
                AxiomInstance::MinimalNonAggregation {
                    u: u.0,
                    v: v.0,
                    i,
                    group,
                    theta_p: theta_p.0,
                    theta_r: theta_r.0,
                    alpha: alpha.0,
                    beta: beta.0,
                    worst_off: worst_off.into(),
                }
            }
            C::StrongNonAggregation { u, v, i, group, alpha, beta } => AxiomInstance::StrongNonAggregation {
                u: u.0,
                v: v.0,
                i,
                group,
                alpha: alpha.0,
                beta: beta.0,
            },
            C::StrongNonAggregationThreshold { u, v, i, group, theta_p, theta_r, alpha, beta } => {
                AxiomInstance::StrongNonAggThreshold {
                    u: u.0,
                    v: v.0,
                    i,
                    group,
                    theta_p: theta_p.0,
                    theta_r: theta_r.0,
                    alpha: alpha.0,
                    beta: beta.0,
                }
            }
            C::QuantitativeAggregation { u, v, i, group, m, gamma, delta } => AxiomInstance::QuantitativeAggregation {
                u: u.0,
                v: v.0,
                i,
                group,
                m,
                gamma: gamma.0,
                delta: delta.0,
            },
            C::RatioAggregation { u, v, i, group, lambda, gamma, delta } => AxiomInstance::RatioAggregation {
                u: u.0,
                v: v.0,
                i,
                group,
                lambda: lambda.0,
                gamma: gamma.0,
                delta: delta.0,
            },
            C::MinimalAggregation { u, v, i, gamma, delta, n } => AxiomInstance::MinimalAggregation {
                u: u.0,
                v: v.0,
                i,
                gamma: gamma.0,
                delta: delta.0,
                n,
            },
            C::StrongerNonAggregation { u, v, i, group, theta_p, alpha, beta } => {
                AxiomInstance::StrongerNonAggregation {
                    u: u.0,
                    v: v.0,
                    i,
                    group,
                    theta_p: theta_p.0,
                    alpha: alpha.0,
                    beta: beta.0,
                }
            }
        }
    }
}

impl From<&AxiomInstance> for InstanceConfig {
    fn from(a: &AxiomInstance) -> Self {
        use AxiomInstance as A;
        let p = |x: &WellbeingProfile| P(x.clone());
        let q = |x: &crate::numeric::Rational| R(x.clone());
        match a {
            A::Anonymity { u, perm } => InstanceConfig::Anonymity { u: p(u), perm: perm.clone() },
            A::StrongPareto { u, v } => InstanceConfig::StrongPareto { u: p(u), v: p(v) },
            A::WeakPareto { u, v } => InstanceConfig::WeakPareto { u: p(u), v: p(v) },
            A::PigouDalton { u, i, j, epsilon } => InstanceConfig::PigouDalton {
                u: p(u),
                i: *i,
                j: *j,
                epsilon: q(epsilon),
            },
            A::ReplicationInvariance { u, v, k } => InstanceConfig::ReplicationInvariance { u: p(u), v: p(v), k: *k },
            A::MinimalNonAggregation { u, v, i, group, theta_p, theta_r, alpha, beta, worst_off } => {
                InstanceConfig::MinimalNonAggregation {
                    u: p(u),
                    v: p(v),
                    i: *i,
                    group: group.clone(),
                    theta_p: q(theta_p),
                    theta_r: q(theta_r),
                    alpha: q(alpha),
                    beta: q(beta),
                    worst_off: (*worst_off).into(),
                }
            }
            A::StrongNonAggregation { u, v, i, group, alpha, beta } => InstanceConfig::StrongNonAggregation {
                u: p(u),
                v: p(v),
                i: *i,
                group: group.clone(),
                alpha: q(alpha),
                beta: q(beta),
            },
            A::StrongNonAggThreshold { u, v, i, group, theta_p, theta_r, alpha, beta } => {
                InstanceConfig::StrongNonAggregationThreshold {
                    u: p(u),
                    v: p(v),
                    i: *i,
                    group: group.clone(),
                    theta_p: q(theta_p),
                    theta_r: q(theta_r),
                    alpha: q(alpha),
                    beta: q(beta),
                }
            }
            A::QuantitativeAggregation { u, v, i, group, m, gamma, delta } => InstanceConfig::QuantitativeAggregation {
                u: p(u),
                v: p(v),
                i: *i,
                group: group.clone(),
                m: *m,
                gamma: q(gamma),
                delta: q(delta),
            },
            A::RatioAggregation { u, v, i, group, lambda, gamma, delta } => InstanceConfig::RatioAggregation {
                u: p(u),
                v: p(v),
                i: *i,
                group: group.clone(),
                lambda: q(lambda),
                gamma: q(gamma),
                delta: q(delta),
            },
            A::MinimalAggregation { u, v, i, gamma, delta, n } => InstanceConfig::MinimalAggregation {
                u: p(u),
                v: p(v),
                i: *i,
                gamma: q(gamma),
                delta: q(delta),
                n: *n,
            },
            A::StrongerNonAggregation { u, v, i, group, theta_p, alpha, beta } => {
                InstanceConfig::StrongerNonAggregation {
                    u: p(u),
                    v: p(v),
                    i: *i,
                    group: group.clone(),
                    theta_p: q(theta_p),
                    alpha: q(alpha),
                    beta: q(beta),
                }
            }
        }
    }
}

impl AxiomInstance {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: InstanceConfig = toml::from_str(text).map_err(|e| toml_error(text, &e))?;
        Ok(cfg.into())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(&InstanceConfig::from(self)).expect("instance serializes")
    }
}

/// A violated (or inconclusive) instance followed by its result as comments,
/// so the file re-parses as a plain instance.
pub fn format_witness(result: &CheckResult, instance: &AxiomInstance, shrink_steps: Option<u64>) -> String {
    let mut out = format!("# result: {} ({})\n# {}\n", result.status, result.axiom, result.detail);
    if let Some(c) = &result.comparison {
        if let Some(m) = c.margin {
            out.push_str(&format!("# margin: {m:.6e}\n"));
        }
    }
    if let Some(s) = shrink_steps {
        out.push_str(&format!("# shrink steps: {s}\n"));
    }
    out.push_str(&instance.to_toml());
    out
}

/// Generator magnitudes in config form; every field is optional.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsConfig {
    pub theta_p: Option<R>,
    pub theta_r: Option<R>,
    pub alpha: Option<R>,
    pub beta: Option<R>,
    pub gamma: Option<R>,
    pub delta: Option<R>,
    pub lambda: Option<R>,
    pub m: Option<u64>,
    pub k_max: Option<u64>,
    #[serde(default)]
    pub worst_off: WorstOffConfig,
}

impl From<ParamsConfig> for AxiomParams {
    fn from(c: ParamsConfig) -> Self {
        let f = |x: Option<R>| x.map(|r| r.0);
        AxiomParams {
            theta_p: f(c.theta_p),
            theta_r: f(c.theta_r),
            alpha: f(c.alpha),
            beta: f(c.beta),
            gamma: f(c.gamma),
            delta: f(c.delta),
            lambda: f(c.lambda),
            m: c.m,
            k_max: c.k_max,
            worst_off: c.worst_off.into(),
        }
    }
}

impl From<&AxiomParams> for ParamsConfig {
    fn from(p: &AxiomParams) -> Self {
        let f = |x: &Option<crate::numeric::Rational>| x.clone().map(R);
        ParamsConfig {
            theta_p: f(&p.theta_p),
            theta_r: f(&p.theta_r),
            alpha: f(&p.alpha),
            beta: f(&p.beta),
            gamma: f(&p.gamma),
            delta: f(&p.delta),
            lambda: f(&p.lambda),
            m: p.m,
            k_max: p.k_max,
            worst_off: p.worst_off.into(),
        }
    }
}
