//! TOML form of [`OrderingSpec`]. Rationals are written as strings (`"p/q"`,
//! integers or exact decimals); bare TOML integers are also accepted.
//!
//! ```toml
//! kind = "rdu"
//! rho = "101/100"
//! g = { kind = "sqrt" }
//! ```

use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numeric::{format_rational, parse_rational, Rational};
use crate::orderings::gfunc::{GFunction, PiecewiseLinear};
use crate::orderings::rdu::RduParams;
use crate::orderings::spec::OrderingSpec;
use crate::orderings::suffavg::{LambdaSchedule, Magnitudes, SuffAvgParams};
use crate::orderings::variants::{GVariantParams, MultiThresholdParams, RankWeightParams, RankWeights, WeightSchedule};

/// An exact rational in a config document.
#[derive(Debug, Clone, PartialEq)]
pub struct R(pub Rational);

impl Serialize for R {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for R {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(i) => Ok(R(Rational::from_integer(i.into()))),
            Raw::Text(t) => parse_rational(&t).map(R).map_err(serde::de::Error::custom),
        }
    }
}

fn rs(v: &[Rational]) -> Vec<R> {
    v.iter().cloned().map(R).collect()
}

fn unr(v: Vec<R>) -> Vec<Rational> {
    v.into_iter().map(|r| r.0).collect()
}

fn parse_n(key: &str) -> Result<u64> {
    key.trim()
        .parse()
        .map_err(|_| Error::invalid(format!("table key {key:?} is not a population size")))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GConfig {
    Identity,
    Sqrt,
    LogShifted { shift: R },
    SaturatingExp { cap: R, scale: R },
    PiecewiseLinear { points: Vec<[R; 2]> },
}

impl GConfig {
    pub fn build(self) -> Result<GFunction> {
        let g = match self {
            GConfig::Identity => GFunction::Identity,
            GConfig::Sqrt => GFunction::Sqrt,
            GConfig::LogShifted { shift } => GFunction::LogShifted { shift: shift.0 },
            GConfig::SaturatingExp { cap, scale } => GFunction::SaturatingExp { cap: cap.0, scale: scale.0 },
            GConfig::PiecewiseLinear { points } => GFunction::PiecewiseLinear(PiecewiseLinear::new(
                points.into_iter().map(|[x, y]| (x.0, y.0)).collect(),
            )?),
        };
        g.validate()?;
        Ok(g)
    }

    pub fn from_g(g: &GFunction) -> Self {
        match g {
            GFunction::Identity => GConfig::Identity,
            GFunction::Sqrt => GConfig::Sqrt,
            GFunction::LogShifted { shift } => GConfig::LogShifted { shift: R(shift.clone()) },
            GFunction::SaturatingExp { cap, scale } => GConfig::SaturatingExp {
                cap: R(cap.clone()),
                scale: R(scale.clone()),
            },
            GFunction::PiecewiseLinear(p) => GConfig::PiecewiseLinear {
                points: p.points().iter().map(|(x, y)| [R(x.clone()), R(y.clone())]).collect(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum LambdaConfig {
    Constant { value: R },
    Table { values: BTreeMap<String, R> },
    Midpoint { alpha: R, beta: R, gamma: R, delta: R, ratio: R },
    Utilitarian,
}

impl LambdaConfig {
    pub fn build(self) -> Result<LambdaSchedule> {
        Ok(match self {
            LambdaConfig::Constant { value } => LambdaSchedule::Constant(value.0),
            LambdaConfig::Table { values } => LambdaSchedule::Table(
                values
                    .into_iter()
                    .map(|(k, v)| Ok((parse_n(&k)?, v.0)))
                    .collect::<Result<_>>()?,
            ),
            LambdaConfig::Midpoint { alpha, beta, gamma, delta, ratio } => LambdaSchedule::Midpoint(Magnitudes {
                alpha: alpha.0,
                beta: beta.0,
                gamma: gamma.0,
                delta: delta.0,
                ratio: ratio.0,
            }),
            LambdaConfig::Utilitarian => LambdaSchedule::Utilitarian,
        })
    }

    pub fn from_schedule(s: &LambdaSchedule) -> Self {
        match s {
            LambdaSchedule::Constant(r) => LambdaConfig::Constant { value: R(r.clone()) },
            LambdaSchedule::Table(t) => LambdaConfig::Table {
                values: t.iter().map(|(n, r)| (n.to_string(), R(r.clone()))).collect(),
            },
            LambdaSchedule::Midpoint(m) => LambdaConfig::Midpoint {
                alpha: R(m.alpha.clone()),
                beta: R(m.beta.clone()),
                gamma: R(m.gamma.clone()),
                delta: R(m.delta.clone()),
                ratio: R(m.ratio.clone()),
            },
            LambdaSchedule::Utilitarian => LambdaConfig::Utilitarian,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum WeightsConfig {
    Constant { values: Vec<R> },
    Table { values: BTreeMap<String, Vec<R>> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum RankWeightsConfig {
    Uniform,
    Table { values: BTreeMap<String, Vec<R>> },
}

fn vec_table(t: BTreeMap<String, Vec<R>>) -> Result<BTreeMap<u64, Vec<Rational>>> {
    t.into_iter().map(|(k, v)| Ok((parse_n(&k)?, unr(v)))).collect()
}

fn vec_table_out(t: &BTreeMap<u64, Vec<Rational>>) -> BTreeMap<String, Vec<R>> {
    t.iter().map(|(n, v)| (n.to_string(), rs(v))).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum OrderingConfig {
    Leximin,
    Rdu {
        rho: R,
        g: GConfig,
    },
    SuffAvg {
        theta_p: R,
        lambda: LambdaConfig,
        #[serde(default)]
        cross_size: bool,
    },
    MultiThreshold {
        thetas: Vec<R>,
        weights: WeightsConfig,
        #[serde(default)]
        cross_size: bool,
    },
    RankWeighted {
        theta_p: R,
        lambda: LambdaConfig,
        weights: RankWeightsConfig,
        #[serde(default)]
        cross_size: bool,
    },
    BoundedG {
        theta_p: R,
        lambda: LambdaConfig,
        g: GConfig,
        #[serde(default)]
        cross_size: bool,
    },
    ConcavePoor {
        theta_p: R,
        lambda: LambdaConfig,
        g: GConfig,
        #[serde(default)]
        cross_size: bool,
    },
}

fn base(theta_p: R, lambda: LambdaConfig, cross_size: bool) -> Result<SuffAvgParams> {
    let p = SuffAvgParams {
        theta_p: theta_p.0,
        lambda: lambda.build()?,
        cross_size,
    };
    p.validate()?;
    Ok(p)
}

impl OrderingConfig {
    pub fn build(self) -> Result<OrderingSpec> {
        let spec = match self {
            OrderingConfig::Leximin => OrderingSpec::Leximin,
            OrderingConfig::Rdu { rho, g } => OrderingSpec::Rdu(RduParams::new(rho.0, g.build()?)?),
            OrderingConfig::SuffAvg { theta_p, lambda, cross_size } => {
                OrderingSpec::SuffAvg(base(theta_p, lambda, cross_size)?)
            }
            OrderingConfig::MultiThreshold { thetas, weights, cross_size } => {
                OrderingSpec::MultiThreshold(MultiThresholdParams {
                    thetas: unr(thetas),
                    weights: match weights {
                        WeightsConfig::Constant { values } => WeightSchedule::Constant(unr(values)),
                        WeightsConfig::Table { values } => WeightSchedule::Table(vec_table(values)?),
                    },
                    cross_size,
                })
            }
            OrderingConfig::RankWeighted { theta_p, lambda, weights, cross_size } => {
                OrderingSpec::RankWeighted(RankWeightParams {
                    base: base(theta_p, lambda, cross_size)?,
                    weights: match weights {
                        RankWeightsConfig::Uniform => RankWeights::Uniform,
                        RankWeightsConfig::Table { values } => RankWeights::Table(vec_table(values)?),
                    },
                })
            }
            OrderingConfig::BoundedG { theta_p, lambda, g, cross_size } => OrderingSpec::BoundedG(GVariantParams {
                base: base(theta_p, lambda, cross_size)?,
                g: g.build()?,
            }),
            OrderingConfig::ConcavePoor { theta_p, lambda, g, cross_size } => {
                OrderingSpec::ConcavePoor(GVariantParams {
                    base: base(theta_p, lambda, cross_size)?,
                    g: g.build()?,
                })
            }
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_spec(spec: &OrderingSpec) -> Self {
        let lam = |p: &SuffAvgParams| LambdaConfig::from_schedule(&p.lambda);
        match spec {
            OrderingSpec::Leximin => OrderingConfig::Leximin,
            OrderingSpec::Rdu(p) => OrderingConfig::Rdu {
                rho: R(p.rho.clone()),
                g: GConfig::from_g(&p.g),
            },
            OrderingSpec::SuffAvg(p) => OrderingConfig::SuffAvg {
                theta_p: R(p.theta_p.clone()),
                lambda: lam(p),
                cross_size: p.cross_size,
            },
            OrderingSpec::MultiThreshold(p) => OrderingConfig::MultiThreshold {
                thetas: rs(&p.thetas),
                weights: match &p.weights {
                    WeightSchedule::Constant(v) => WeightsConfig::Constant { values: rs(v) },
                    WeightSchedule::Table(t) => WeightsConfig::Table { values: vec_table_out(t) },
                },
                cross_size: p.cross_size,
            },
            OrderingSpec::RankWeighted(p) => OrderingConfig::RankWeighted {
                theta_p: R(p.base.theta_p.clone()),
                lambda: lam(&p.base),
                weights: match &p.weights {
                    RankWeights::Uniform => RankWeightsConfig::Uniform,
                    RankWeights::Table(t) => RankWeightsConfig::Table { values: vec_table_out(t) },
                },
                cross_size: p.base.cross_size,
            },
            OrderingSpec::BoundedG(p) => OrderingConfig::BoundedG {
                theta_p: R(p.base.theta_p.clone()),
                lambda: lam(&p.base),
                g: GConfig::from_g(&p.g),
                cross_size: p.base.cross_size,
            },
            OrderingSpec::ConcavePoor(p) => OrderingConfig::ConcavePoor {
                theta_p: R(p.base.theta_p.clone()),
                lambda: lam(&p.base),
                g: GConfig::from_g(&p.g),
                cross_size: p.base.cross_size,
            },
        }
    }
}

impl OrderingSpec {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: OrderingConfig = toml::from_str(text).map_err(|e| toml_error(text, &e))?;
        cfg.build()
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(&OrderingConfig::from_spec(self)).expect("ordering config serializes")
    }
}

pub(crate) fn toml_error(text: &str, e: &toml::de::Error) -> Error {
    // Values nested in tagged tables lose their span; fall back to the first
    // occurrence of the quoted token in the message, then to the document start
    // (a missing field belongs to the enclosing table).
    let offset = e.span().map(|s| s.start).or_else(|| {
        let msg = e.message();
        let start = msg.find('`')? + 1;
        let len = msg[start..].find('`')?;
        text.find(&msg[start..start + len])
    });
    let (line, column) = offset
        .map(|at| {
            let before = &text[..at.min(text.len())];
            let line = before.matches('\n').count() + 1;
            let column = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
            (line, column)
        })
        .unwrap_or((1, 1));
    Error::parse(line, column, e.message().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::frac;

    #[test]
    fn rdu_round_trip() {
        let spec = OrderingSpec::from_toml("kind = \"rdu\"\nrho = \"101/100\"\ng = { kind = \"sqrt\" }\n").unwrap();
        assert_eq!(spec, OrderingSpec::Rdu(RduParams::new(frac(101, 100), GFunction::Sqrt).unwrap()));
        assert_eq!(OrderingSpec::from_toml(&spec.to_toml()).unwrap(), spec);
    }

    #[test]
    fn every_kind_round_trips() {
        let docs = [
            "kind = \"leximin\"",
            "kind = \"suff-avg\"\ntheta_p = 0\nlambda = { kind = \"constant\", value = \"1/5\" }",
            "kind = \"suff-avg\"\ntheta_p = \"5/2\"\ncross_size = true\n[lambda]\nkind = \"midpoint\"\nalpha = 10\nbeta = 1\ngamma = 10\ndelta = 1\nratio = \"1/2\"",
            "kind = \"suff-avg\"\ntheta_p = 1\n[lambda]\nkind = \"table\"\nvalues = { 2 = \"1/2\", 3 = \"0.25\" }",
            "kind = \"multi-threshold\"\nthetas = [0, 5]\nweights = { kind = \"constant\", values = [\"1/2\", \"1/3\", \"1/6\"] }",
            "kind = \"rank-weighted\"\ntheta_p = 0\nlambda = { kind = \"constant\", value = \"1/2\" }\nweights = { kind = \"table\", values = { 2 = [\"3/4\", \"1/4\"] } }",
            "kind = \"bounded-g\"\ntheta_p = 1\nlambda = { kind = \"constant\", value = \"1/3\" }\ng = { kind = \"saturating-exp\", cap = 50, scale = 10 }",
            "kind = \"concave-poor\"\ntheta_p = 4\nlambda = { kind = \"constant\", value = \"1/2\" }\ng = { kind = \"piecewise-linear\", points = [[0, 0], [1, 2], [3, 3]] }",
            "kind = \"rdu\"\nrho = 2\ng = { kind = \"log-shifted\", shift = 1 }",
        ];
        for doc in docs {
            let spec = OrderingSpec::from_toml(doc).unwrap_or_else(|e| panic!("{doc}: {e}"));
            let again = OrderingSpec::from_toml(&spec.to_toml()).unwrap();
            assert_eq!(spec, again, "{doc}");
        }
    }

    #[test]
    fn errors_carry_position() {
        let err = OrderingSpec::from_toml("kind = \"rdu\"\nrho = \"1e3\"\ng = { kind = \"sqrt\" }").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err:?}");
        assert!(OrderingSpec::from_toml("kind = \"rdu\"\nrho = \"-1\"\ng = { kind = \"sqrt\" }").is_err());
        assert!(OrderingSpec::from_toml("kind = \"nope\"").is_err());
    }
}
