//! Seeded random instance generators. Every emitted instance satisfies its
//! axiom's hypothesis by construction; boundary cases (exact magnitudes,
//! `v_i = θ_p`, `|M|` at its minimum, touching transfers, no bystanders)
//! are drawn with probability 1/4 each.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Axiom, AxiomInstance, WorstOff};
use crate::error::{Error, Result};
use crate::numeric::{format_rational, from_u64, is_unit_interval_open, Rational};
use crate::profile::{ceil_ratio, WellbeingProfile};

/// Magnitudes shared by the generated instances. Which ones are required
/// depends on the axiom.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AxiomParams {
    pub theta_p: Option<Rational>,
    pub theta_r: Option<Rational>,
    pub alpha: Option<Rational>,
    pub beta: Option<Rational>,
    pub gamma: Option<Rational>,
    pub delta: Option<Rational>,
    pub lambda: Option<Rational>,
    pub m: Option<u64>,
    /// Largest replication factor for replication invariance (default 3).
    pub k_max: Option<u64>,
    pub worst_off: WorstOff,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorConfig {
    pub axiom: Axiom,
    pub params: AxiomParams,
    /// Inclusive population range.
    pub population: (u64, u64),
    /// Inclusive range for drawn levels. Derived levels (gains) may exceed
    /// the upper end; nothing is placed below the lower end.
    pub values: (Rational, Rational),
    /// Levels are drawn on the grid `lo + k/denominator`.
    pub denominator: u64,
    pub seed: u64,
}

fn need<'a>(x: &'a Option<Rational>, name: &str, axiom: Axiom) -> Result<&'a Rational> {
    x.as_ref()
        .ok_or_else(|| Error::InvalidParams(format!("{axiom} needs {name}")))
}

fn pair_ordered(big: &Rational, small: &Rational, what: &str) -> Result<()> {
    if big > small && small.is_positive() {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!(
            "need {what} (got {}, {})",
            format_rational(big),
            format_rational(small)
        )))
    }
}

impl GeneratorConfig {
    pub fn validate(&self) -> Result<()> {
        let (lo_n, hi_n) = self.population;
        if lo_n == 0 || lo_n > hi_n {
            return Err(Error::InvalidParams(format!("empty population range {lo_n}..={hi_n}")));
        }
        if self.values.0 > self.values.1 {
            return Err(Error::InvalidParams("empty value range".into()));
        }
        if self.denominator == 0 {
            return Err(Error::InvalidParams("grid denominator must be positive".into()));
        }
        let p = &self.params;
        let a = self.axiom;
        let lo = &self.values.0;
        match a {
            Axiom::PigouDalton if hi_n < 2 => {
                return Err(Error::InvalidParams("Pigou-Dalton needs n ≥ 2".into()));
            }
            Axiom::MinimalNonAggregation | Axiom::StrongNonAggThreshold => {
                let (tp, tr) = (need(&p.theta_p, "theta_p", a)?, need(&p.theta_r, "theta_r", a)?);
                pair_ordered(tr, tp, "θ_r > θ_p > 0")?;
                let (al, be) = (need(&p.alpha, "alpha", a)?, need(&p.beta, "beta", a)?);
                pair_ordered(al, be, "α > β > 0")?;
                if &(tp - al) < lo {
                    return Err(Error::InvalidParams(format!(
                        "θ_p − α = {} lies below the value range",
                        format_rational(&(tp - al))
                    )));
                }
            }
            Axiom::StrongNonAggregation => {
                pair_ordered(need(&p.alpha, "alpha", a)?, need(&p.beta, "beta", a)?, "α > β > 0")?;
            }
            Axiom::StrongerNonAggregation => {
                let tp = need(&p.theta_p, "theta_p", a)?;
                if !tp.is_positive() {
                    return Err(Error::InvalidParams("need θ_p > 0".into()));
                }
                let al = need(&p.alpha, "alpha", a)?;
                pair_ordered(al, need(&p.beta, "beta", a)?, "α > β > 0")?;
                if &(tp - al) < lo {
                    return Err(Error::InvalidParams("θ_p − α lies below the value range".into()));
                }
            }
            Axiom::QuantitativeAggregation => {
                pair_ordered(need(&p.gamma, "gamma", a)?, need(&p.delta, "delta", a)?, "γ > δ > 0")?;
                let m = p.m.ok_or_else(|| Error::InvalidParams("quantitative-aggregation needs m".into()))?;
                if m <= 2 {
                    return Err(Error::InvalidParams(format!("need m > 2 (got {m})")));
                }
                if hi_n <= m {
                    return Err(Error::InvalidParams(format!("population range must reach n > m = {m}")));
                }
            }
            Axiom::RatioAggregation => {
                pair_ordered(need(&p.gamma, "gamma", a)?, need(&p.delta, "delta", a)?, "γ > δ > 0")?;
                let l = need(&p.lambda, "lambda", a)?;
                if !is_unit_interval_open(l) {
                    return Err(Error::RatioOutOfRange(format_rational(l)));
                }
                if ratio_population(l, lo_n.max(2), hi_n).is_none() {
                    return Err(Error::InvalidParams("no n in range with ⌈λn⌉ ≤ n − 1".into()));
                }
            }
            Axiom::MinimalAggregation => {
                pair_ordered(need(&p.gamma, "gamma", a)?, need(&p.delta, "delta", a)?, "γ > δ > 0")?;
            }
            _ => {}
        }
        Ok(())
    }
}

fn ratio_population(lambda: &Rational, from: u64, to: u64) -> Option<u64> {
    (from..=to).find(|&n| ceil_ratio(lambda, n).map(|c| c < n).unwrap_or(false))
}

/// A stream of instances. Instance `k` depends only on the seed and `k`, so
/// chunks can be generated independently and in any order.
#[derive(Debug, Clone)]
pub struct InstanceGenerator {
    config: GeneratorConfig,
    next: u64,
}

pub fn generate_instances(config: GeneratorConfig) -> Result<InstanceGenerator> {
    config.validate()?;
    Ok(InstanceGenerator { config, next: 0 })
}

impl InstanceGenerator {
    pub fn config(&self) -> &GeneratorConfig {
        &self.config
    }

    pub fn instance(&self, index: u64) -> AxiomInstance {
        let mut rng = ChaCha8Rng::seed_from_u64(self.config.seed);
        rng.set_stream(index);
        Draw { cfg: &self.config, rng }.instance()
    }
}

impl Iterator for InstanceGenerator {
    type Item = AxiomInstance;

    fn next(&mut self) -> Option<AxiomInstance> {
        let inst = self.instance(self.next);
        self.next += 1;
        Some(inst)
    }
}

struct Draw<'a> {
    cfg: &'a GeneratorConfig,
    rng: ChaCha8Rng,
}

impl Draw<'_> {
    fn step(&self) -> Rational {
        Rational::new(BigInt::one(), BigInt::from(self.cfg.denominator))
    }

    fn edge(&mut self) -> bool {
        self.rng.random_bool(0.25)
    }

    /// A grid point in `[lo, hi]`; `lo` when the interval holds no grid point
    /// beyond it.
    fn level(&mut self, lo: &Rational, hi: &Rational) -> Rational {
        if hi <= lo {
            return lo.clone();
        }
        let steps = ((hi - lo) * from_u64(self.cfg.denominator)).floor().to_integer();
        let steps = steps.to_u64().unwrap_or(u64::MAX / 2);
        lo + self.step() * from_u64(self.rng.random_range(0..=steps))
    }

    fn any_level(&mut self) -> Rational {
        let (lo, hi) = self.cfg.values.clone();
        self.level(&lo, &hi)
    }

    /// A nonnegative grid increment up to the width of the value range.
    fn extra(&mut self) -> Rational {
        let width = &self.cfg.values.1 - &self.cfg.values.0;
        let width = if width.is_zero() { Rational::one() } else { width };
        self.level(&Rational::zero(), &width)
    }

    fn population(&mut self, min: u64) -> u64 {
        let (lo, hi) = self.cfg.population;
        self.rng.random_range(lo.max(min)..=hi.max(min))
    }

    fn shuffled(&mut self, n: u64) -> Vec<usize> {
        let mut order: Vec<usize> = (0..n as usize).collect();
        order.shuffle(&mut self.rng);
        order
    }

    fn random_profile(&mut self, n: u64) -> Vec<Rational> {
        (0..n).map(|_| self.any_level()).collect()
    }

    fn instance(&mut self) -> AxiomInstance {
        let p = self.cfg.params.clone();
        match self.cfg.axiom {
            Axiom::Anonymity => {
                let n = self.population(1);
                let u = self.random_profile(n);
                let perm = self.shuffled(n);
                AxiomInstance::Anonymity { u: profile(u), perm }
            }
            Axiom::StrongPareto => {
                let n = self.population(1);
                let v = self.random_profile(n);
                let mode = self.rng.random_range(0..4);
                let bump = self.rng.random_range(0..n as usize);
                let u = v
                    .iter()
                    .enumerate()
                    .map(|(h, x)| match mode {
                        0 => x.clone(),
                        1 if h == bump => x + self.step(),
                        1 => x.clone(),
                        _ => {
                            let e = self.extra();
                            x + if self.rng.random_bool(0.5) { e } else { Rational::zero() }
                        }
                    })
                    .collect();
                AxiomInstance::StrongPareto { u: profile(u), v: profile(v) }
            }
            Axiom::WeakPareto => {
                let n = self.population(1);
                let v = self.random_profile(n);
                let tight = self.edge();
                let u = v
                    .iter()
                    .map(|x| if tight { x + self.step() } else { x + self.step() + self.extra() })
                    .collect();
                AxiomInstance::WeakPareto { u: profile(u), v: profile(v) }
            }
            Axiom::PigouDalton => self.pigou_dalton(),
            Axiom::ReplicationInvariance => {
                let n = self.population(1);
                let u = self.random_profile(n);
                let v = match self.rng.random_range(0..4) {
                    0 => u.clone(),
                    1 => {
                        let mut w = u.clone();
                        w.shuffle(&mut self.rng);
                        w
                    }
                    _ => self.random_profile(n),
                };
                let k = self.rng.random_range(1..=p.k_max.unwrap_or(3).max(1));
                AxiomInstance::ReplicationInvariance { u: profile(u), v: profile(v), k }
            }
            Axiom::MinimalNonAggregation => self.minimal_non_aggregation(&p),
            Axiom::StrongNonAggregation | Axiom::StrongNonAggThreshold => self.strong_non_aggregation(&p),
            Axiom::QuantitativeAggregation | Axiom::RatioAggregation | Axiom::MinimalAggregation => {
                self.aggregation(&p)
            }
            Axiom::StrongerNonAggregation => self.stronger_non_aggregation(&p),
        }
    }

    fn pigou_dalton(&mut self) -> AxiomInstance {
        let n = self.population(2);
        let mut u = self.random_profile(n);
        let order = self.shuffled(n);
        let (i, j) = (order[0], order[1]);
        if u[i] < u[j] {
            u.swap(i, j);
        }
        if u[i] == u[j] {
            u[i] = &u[i] + self.step() * from_u64(2);
        }
        let half = (&u[i] - &u[j]) / from_u64(2);
        let epsilon = if self.edge() {
            half
        } else {
            // a grid point in (0, half], or half itself when none exists
            let e = self.level(&self.step(), &half);
            if e > half {
                half
            } else {
                e
            }
        };
        AxiomInstance::PigouDalton { u: profile(u), i, j, epsilon }
    }

    fn minimal_non_aggregation(&mut self, p: &AxiomParams) -> AxiomInstance {
        let (tp, tr) = (p.theta_p.clone().unwrap(), p.theta_r.clone().unwrap());
        let (alpha, beta) = (p.alpha.clone().unwrap(), p.beta.clone().unwrap());
        let lo = self.cfg.values.0.clone();
        let n = self.population(1);
        let order = self.shuffled(n);
        let i = order[0];
        let size = if n == 1 {
            0
        } else if self.edge() {
            n as usize - 1
        } else {
            self.rng.random_range(0..n as usize)
        };
        let group: Vec<usize> = order[1..1 + size].to_vec();
        let bystanders = &order[1 + size..];

        let ui = self.level(&lo, &(&tp - &alpha));
        let vi = if self.edge() {
            tp.clone()
        } else if self.edge() {
            &ui + &alpha
        } else {
            self.level(&(&ui + &alpha), &tp)
        };
        let hi = self.cfg.values.1.clone().max(tr.clone());
        let top_u = self.level(&tr, &hi);
        // The losers must stay the best-off, and (after the change) above the gainer.
        let least = (&top_u - &beta).max(vi.clone());
        let top_v = if self.edge() {
            least
        } else {
            self.level(&least, &top_u)
        };
        // Bystanders stay between the worst-off and the best-off, before and after.
        let floor = match p.worst_off {
            WorstOff::AfterChange => vi.clone(),
            WorstOff::BeforeChange => ui.clone(),
        };
        let ceiling = if group.is_empty() { hi.clone() } else { top_u.clone().min(top_v.clone()) };
        let floor = floor.max(lo);
        let mut u = vec![Rational::zero(); n as usize];
        let mut v = u.clone();
        u[i] = ui;
        v[i] = vi;
        for &j in &group {
            u[j] = top_u.clone();
            v[j] = top_v.clone();
        }
        for &h in bystanders {
            let x = self.level(&floor, &ceiling.clone().max(floor.clone()));
            u[h] = x.clone();
            v[h] = x;
        }
        let mut group = group;
        group.sort_unstable();
        AxiomInstance::MinimalNonAggregation {
            u: profile(u),
            v: profile(v),
            i,
            group,
            theta_p: tp,
            theta_r: tr,
            alpha,
            beta,
            worst_off: p.worst_off,
        }
    }

    fn strong_non_aggregation(&mut self, p: &AxiomParams) -> AxiomInstance {
        let thresholds = self.cfg.axiom == Axiom::StrongNonAggThreshold;
        let (alpha, beta) = (p.alpha.clone().unwrap(), p.beta.clone().unwrap());
        let (lo, hi) = self.cfg.values.clone();
        let n = self.population(1);
        let order = self.shuffled(n);
        let i = order[0];
        let size = if n == 1 {
            0
        } else if self.edge() {
            n as usize - 1
        } else {
            self.rng.random_range(0..n as usize)
        };
        let mut group: Vec<usize> = order[1..1 + size].to_vec();

        let ui = if thresholds {
            let tp = p.theta_p.clone().unwrap();
            if self.edge() {
                &tp - &alpha
            } else {
                self.level(&lo, &(&tp - &alpha))
            }
        } else {
            self.level(&lo, &hi)
        };
        let vi = &ui + &alpha;
        // Losers end strictly above the gainer (and at or above θ_r).
        let min_after = if thresholds {
            p.theta_r.clone().unwrap().max(&vi + self.step())
        } else {
            &vi + self.step()
        };
        let mut u = vec![Rational::zero(); n as usize];
        let mut v = u.clone();
        u[i] = ui;
        v[i] = vi;
        for &j in &group {
            let after = if self.edge() {
                min_after.clone()
            } else {
                let top = hi.clone().max(min_after.clone());
                self.level(&min_after, &top)
            };
            u[j] = &after + &beta;
            v[j] = after;
        }
        for &h in &order[1 + size..] {
            let x = self.level(&lo, &hi);
            u[h] = x.clone();
            v[h] = x;
        }
        group.sort_unstable();
        let (u, v) = (profile(u), profile(v));
        if thresholds {
            AxiomInstance::StrongNonAggThreshold {
                u,
                v,
                i,
                group,
                theta_p: p.theta_p.clone().unwrap(),
                theta_r: p.theta_r.clone().unwrap(),
                alpha,
                beta,
            }
        } else {
            AxiomInstance::StrongNonAggregation { u, v, i, group, alpha, beta }
        }
    }

    fn aggregation(&mut self, p: &AxiomParams) -> AxiomInstance {
        let axiom = self.cfg.axiom;
        let (gamma, delta) = (p.gamma.clone().unwrap(), p.delta.clone().unwrap());
        let (lo, hi) = self.cfg.values.clone();
        let (n, min_size) = match axiom {
            Axiom::QuantitativeAggregation => {
                let m = p.m.unwrap();
                (self.population(m + 1), m)
            }
            Axiom::RatioAggregation => {
                let lambda = p.lambda.as_ref().unwrap();
                let mut n = self.population(2);
                if ceil_ratio(lambda, n).unwrap() >= n {
                    n = ratio_population(lambda, n, self.cfg.population.1).expect("checked by validate");
                }
                (n, ceil_ratio(lambda, n).unwrap())
            }
            _ => {
                let n = self.population(1);
                (n, n - 1)
            }
        };
        let order = self.shuffled(n);
        let i = order[0];
        let size = if axiom == Axiom::MinimalAggregation {
            n - 1
        } else if self.edge() {
            min_size
        } else if self.edge() {
            n - 1
        } else {
            self.rng.random_range(min_size..=n - 1)
        } as usize;
        let mut group: Vec<usize> = order[1..1 + size].to_vec();
        let extremal = self.edge();

        let mut u = self.random_profile(n);
        let mut v = u.clone();
        if extremal {
            u[i] = &lo + &delta;
            for &j in &group {
                u[j] = hi.clone();
            }
        } else if u[i] < &lo + &delta {
            u[i] = &lo + &delta;
        }
        v[i] = if self.edge() {
            &u[i] - &delta
        } else {
            let up = &u[i] + self.extra();
            self.level(&(&u[i] - &delta), &up)
        };
        for &j in &group {
            v[j] = if self.edge() {
                &u[j] + &gamma
            } else {
                &u[j] + &gamma + self.extra()
            };
        }
        for &h in &order[1 + size..] {
            v[h] = u[h].clone();
        }
        group.sort_unstable();
        let (u, v) = (profile(u), profile(v));
        match axiom {
            Axiom::QuantitativeAggregation => AxiomInstance::QuantitativeAggregation {
                u,
                v,
                i,
                group,
                m: p.m.unwrap(),
                gamma,
                delta,
            },
            Axiom::RatioAggregation => AxiomInstance::RatioAggregation {
                u,
                v,
                i,
                group,
                lambda: p.lambda.clone().unwrap(),
                gamma,
                delta,
            },
            _ => AxiomInstance::MinimalAggregation { u, v, i, gamma, delta, n },
        }
    }

    fn stronger_non_aggregation(&mut self, p: &AxiomParams) -> AxiomInstance {
        let tp = p.theta_p.clone().unwrap();
        let (alpha, beta) = (p.alpha.clone().unwrap(), p.beta.clone().unwrap());
        let (lo, hi) = self.cfg.values.clone();
        let n = self.population(1);
        let order = self.shuffled(n);
        let i = order[0];
        let size = if n == 1 {
            0
        } else if self.edge() {
            n as usize - 1
        } else {
            self.rng.random_range(0..n as usize)
        };
        let mut group: Vec<usize> = order[1..1 + size].to_vec();
        let ui = self.level(&lo, &(&tp - &alpha));
        let vi = if self.edge() { tp.clone() } else { self.level(&(&ui + &alpha), &tp) };
        let mut u = self.random_profile(n);
        let mut v = u.clone();
        u[i] = ui;
        v[i] = vi;
        let floor = &tp + &beta;
        for &j in &group {
            let uj = if self.edge() {
                floor.clone()
            } else {
                self.level(&floor, &hi.clone().max(floor.clone()))
            };
            v[j] = if self.edge() { &uj - &beta } else { self.level(&(&uj - &beta), &uj) };
            u[j] = uj;
        }
        group.sort_unstable();
        AxiomInstance::StrongerNonAggregation {
            u: profile(u),
            v: profile(v),
            i,
            group,
            theta_p: tp,
            alpha,
            beta,
        }
    }
}

fn profile(levels: Vec<Rational>) -> WellbeingProfile {
    WellbeingProfile::new(levels).expect("generated profiles are nonempty")
}
