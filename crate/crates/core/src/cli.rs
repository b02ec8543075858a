//! The `swo` command line. Each command returns its exit code and output so
//! the binary stays a thin wrapper and tests can drive commands directly.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::axioms::format::format_witness;
use crate::axioms::{
    check_axiom_with, Axiom, AxiomInstance, AxiomParams, Status, WorstOff,
};
use crate::numeric::{format_rational, parse_rational, to_f64, Rational, Tolerance, Value};
use crate::orderings::{lambda_feasible_interval, GFunction, OrderingSpec, RduParams};
use crate::profile::{parse_profile_line, parse_profiles, WellbeingProfile};
use crate::propositions::{
    build_prop1_chain, build_prop2_chain, build_prop3_chain, build_prop4_chain, default_beta_of_alpha,
    parse_certificate, prop5_nonagg_condition, prop5_ratio_failure, ratio_coefficient, validate_chain_with,
    write_certificate, ChainParams, Construction, DerivationChain,
};
use crate::search::{find_counterexample_with, run_suite, SearchBudget};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Tsv,
    Cert,
}

#[derive(Debug, Parser)]
#[command(name = "swo", version, about = "Compare well-being profiles under social welfare orderings, check axioms, replay proof chains")]
pub struct Cli {
    /// Ordering config (TOML).
    #[arg(long, global = true)]
    pub ordering: Option<PathBuf>,
    /// Profile file, one profile per line.
    #[arg(long, global = true)]
    pub profiles: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Relative tolerance for floating comparisons, as a rational.
    #[arg(long, global = true)]
    pub tolerance: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

/// Named parameters, from a TOML file and/or repeated `--param key=value`.
#[derive(Debug, Clone, Default, Args)]
pub struct ParamArgs {
    #[arg(long)]
    pub params: Option<PathBuf>,
    /// Overrides a parameter, e.g. `--param alpha=3/2`.
    #[arg(long = "param", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compare two profiles (from --profiles or given inline).
    Compare {
        #[arg(value_name = "PROFILE")]
        inline: Vec<String>,
    },
    /// Value of each profile under a value-based ordering.
    Value {
        #[arg(value_name = "PROFILE")]
        inline: Vec<String>,
    },
    /// Check one axiom instance (TOML) against the ordering.
    CheckAxiom { instance: PathBuf },
    /// Run randomized suites of axiom instances.
    AxiomSuite {
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Build and validate a proof chain (prop1..prop4), or re-validate a certificate.
    Replay {
        proposition: Option<String>,
        #[arg(long)]
        certificate: Option<PathBuf>,
        /// Also write the certificate here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Rank-discounted utilitarianism: the non-aggregation condition and the ratio-aggregation failure.
    Prop5 {
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Search for a violation of one axiom and shrink it.
    Search {
        #[arg(long)]
        axiom: Option<String>,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Tables for plotting: `coefficient` or `lambda-interval`.
    PlotData {
        series: String,
        #[arg(long, default_value_t = 1)]
        from: u64,
        #[arg(long, default_value_t = 100)]
        to: u64,
        #[arg(long, default_value_t = 1)]
        step: u64,
        #[command(flatten)]
        params: ParamArgs,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { code: 0, stdout, stderr: String::new() }
    }

    fn with_code(code: i32, stdout: String) -> Self {
        Outcome { code, stdout, stderr: String::new() }
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Errors exit with status 2.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome::ok(text)
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match execute(&cli) {
        Ok(o) => o,
        Err(e) => Outcome { code: 2, stdout: String::new(), stderr: format!("error: {e:#}\n") },
    }
}

pub fn execute(cli: &Cli) -> anyhow::Result<Outcome> {
    let ctx = Session::new(cli)?;
    match &cli.command {
        Command::Compare { inline } => cmd_compare(&ctx, inline),
        Command::Value { inline } => cmd_value(&ctx, inline),
        Command::CheckAxiom { instance } => cmd_check_axiom(&ctx, instance),
        Command::AxiomSuite { params } => cmd_axiom_suite(&ctx, &ParamMap::load(params)?),
        Command::Replay { proposition, certificate, out, params } => {
            cmd_replay(&ctx, proposition.as_deref(), certificate.as_deref(), out.as_deref(), &ParamMap::load(params)?)
        }
        Command::Prop5 { params } => cmd_prop5(&ctx, &ParamMap::load(params)?),
        Command::Search { axiom, params } => cmd_search(&ctx, axiom.as_deref(), &ParamMap::load(params)?),
        Command::PlotData { series, from, to, step, params } => {
            cmd_plot_data(&ctx, series, *from, *to, *step, &ParamMap::load(params)?)
        }
    }
}

/// Global options, resolved.
pub struct Session {
    pub ordering: Option<OrderingSpec>,
    pub profiles: Option<Vec<WellbeingProfile>>,
    pub seed: Option<u64>,
    pub tolerance: Tolerance,
    pub format: Format,
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

impl Session {
    fn new(cli: &Cli) -> anyhow::Result<Self> {
        let ordering = match &cli.ordering {
            Some(p) => Some(OrderingSpec::from_toml(&read(p)?).with_context(|| p.display().to_string())?),
            None => None,
        };
        let profiles = match &cli.profiles {
            Some(p) => Some(parse_profiles(&read(p)?).with_context(|| p.display().to_string())?),
            None => None,
        };
        let tolerance = match &cli.tolerance {
            Some(t) => {
                let r = parse_rational(t).map_err(|e| anyhow!("--tolerance: {e}"))?;
                Tolerance::new(to_f64(&r))?
            }
            None => Tolerance::default(),
        };
        Ok(Session { ordering, profiles, seed: cli.seed, tolerance, format: cli.format })
    }

    fn spec(&self) -> anyhow::Result<&OrderingSpec> {
        self.ordering.as_ref().ok_or_else(|| anyhow!("this command needs --ordering <file>"))
    }

    fn profiles(&self, inline: &[String]) -> anyhow::Result<Vec<WellbeingProfile>> {
        let mut out = self.profiles.clone().unwrap_or_default();
        for (i, text) in inline.iter().enumerate() {
            out.push(parse_profile_line(text, i + 1).with_context(|| format!("profile argument {}", i + 1))?);
        }
        Ok(out)
    }
}

/// Flat key/value parameters.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ParamMap(pub BTreeMap<String, String>);

impl ParamMap {
    pub fn load(args: &ParamArgs) -> anyhow::Result<Self> {
        let mut map = BTreeMap::new();
        if let Some(path) = &args.params {
            let text = read(path)?;
            let table: toml::Table = toml::from_str(&text).with_context(|| path.display().to_string())?;
            for (k, v) in table {
                let s = match v {
                    toml::Value::String(s) => s,
                    toml::Value::Integer(i) => i.to_string(),
                    toml::Value::Array(xs) => xs
                        .iter()
                        .map(|x| x.as_str().map(str::to_string).unwrap_or_else(|| x.to_string()))
                        .collect::<Vec<_>>()
                        .join(","),
                    other => bail!("{}: parameter {k} has unsupported value {other}", path.display()),
                };
                map.insert(k, s);
            }
        }
        for kv in &args.set {
            let (k, v) = kv.split_once('=').ok_or_else(|| anyhow!("--param expects KEY=VALUE, got {kv:?}"))?;
            map.insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(ParamMap(map))
    }

    pub fn from_pairs(pairs: &[(&str, &str)]) -> Self {
        ParamMap(pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect())
    }

    fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    fn rational(&self, key: &str) -> anyhow::Result<Option<Rational>> {
        self.get(key)
            .map(|s| parse_rational(s).map_err(|e| anyhow!("parameter {key}: {e}")))
            .transpose()
    }

    fn rational_or(&self, key: &str, default: &str) -> anyhow::Result<Rational> {
        Ok(match self.rational(key)? {
            Some(r) => r,
            None => parse_rational(default).expect("default parses"),
        })
    }

    fn int(&self, key: &str) -> anyhow::Result<Option<u64>> {
        self.get(key)
            .map(|s| s.parse::<u64>().map_err(|_| anyhow!("parameter {key}: expected a natural number, got {s:?}")))
            .transpose()
    }

    fn range_u64(&self, key: &str, default: (u64, u64)) -> anyhow::Result<(u64, u64)> {
        match self.get(key) {
            None => Ok(default),
            Some(s) => {
                let (a, b) = split_range(s).ok_or_else(|| anyhow!("parameter {key}: expected lo..hi, got {s:?}"))?;
                let p = |x: &str| x.parse::<u64>().map_err(|_| anyhow!("parameter {key}: bad bound {x:?}"));
                Ok((p(a)?, p(b)?))
            }
        }
    }

    fn range_rational(&self, key: &str, default: (i64, i64)) -> anyhow::Result<(Rational, Rational)> {
        match self.get(key) {
            None => Ok((Rational::from_integer(default.0.into()), Rational::from_integer(default.1.into()))),
            Some(s) => {
                let (a, b) = split_range(s).ok_or_else(|| anyhow!("parameter {key}: expected lo..hi, got {s:?}"))?;
                let p = |x: &str| parse_rational(x).map_err(|e| anyhow!("parameter {key}: {e}"));
                Ok((p(a)?, p(b)?))
            }
        }
    }

    pub fn axiom_params(&self) -> anyhow::Result<AxiomParams> {
        let worst_off = match self.get("worst_off") {
            Some(s) => s.parse::<WorstOff>()?,
            None => WorstOff::default(),
        };
        Ok(AxiomParams {
            theta_p: self.rational("theta_p")?,
            theta_r: self.rational("theta_r")?,
            alpha: self.rational("alpha")?,
            beta: self.rational("beta")?,
            gamma: self.rational("gamma")?,
            delta: self.rational("delta")?,
            lambda: self.rational("lambda")?,
            m: self.int("m")?,
            k_max: self.int("k_max")?,
            worst_off,
        })
    }

    fn chain_params(&self, defaults: [&str; 6]) -> anyhow::Result<ChainParams> {
        Ok(ChainParams {
            theta_p: self.rational_or("theta_p", defaults[0])?,
            theta_r: self.rational_or("theta_r", defaults[1])?,
            alpha: self.rational_or("alpha", defaults[2])?,
            beta: self.rational_or("beta", defaults[3])?,
            gamma: self.rational_or("gamma", defaults[4])?,
            delta: self.rational_or("delta", defaults[5])?,
        })
    }
}

fn split_range(s: &str) -> Option<(&str, &str)> {
    s.split_once("..").or_else(|| s.split_once(',')).map(|(a, b)| (a.trim(), b.trim()))
}

fn show_value(v: &Value) -> (String, String) {
    match v {
        Value::Exact(r) => (format_rational(r), "0".into()),
        Value::Approx(a) => (format!("{:.17e}", a.value), format!("{:.3e}", a.bound)),
    }
}

pub fn cmd_compare(ctx: &Session, inline: &[String]) -> anyhow::Result<Outcome> {
    let spec = ctx.spec()?;
    let ps = ctx.profiles(inline)?;
    if ps.len() != 2 {
        bail!("compare needs exactly two profiles, got {}", ps.len());
    }
    let (u, v) = (&ps[0], &ps[1]);
    let c = spec.compare(u, v, ctx.tolerance)?;
    let values = if spec.is_value_based() && (u.len() == v.len() || spec.compares_across_sizes()) {
        Some((spec.value(u)?, spec.value(v)?))
    } else {
        None
    };
    let mut out = String::new();
    match ctx.format {
        Format::Tsv => {
            out.push_str("verdict\tvalue_u\tbound_u\tvalue_v\tbound_v\tnumeric_tie\n");
            let (a, b) = values
                .as_ref()
                .map(|(x, y)| (show_value(x), show_value(y)))
                .unwrap_or_else(|| (("-".into(), "-".into()), ("-".into(), "-".into())));
            writeln!(out, "{}\t{}\t{}\t{}\t{}\t{}", c.verdict, a.0, a.1, b.0, b.1, c.numeric_tie)?;
        }
        _ => {
            writeln!(out, "{}", c.verdict)?;
            if let Some((x, y)) = &values {
                writeln!(out, "value(u) = {x}")?;
                writeln!(out, "value(v) = {y}")?;
            }
            if let Some(note) = &c.note {
                writeln!(out, "note: {note}")?;
            }
        }
    }
    Ok(Outcome::ok(out))
}

pub fn cmd_value(ctx: &Session, inline: &[String]) -> anyhow::Result<Outcome> {
    let spec = ctx.spec()?;
    let ps = ctx.profiles(inline)?;
    if ps.is_empty() {
        bail!("no profiles given");
    }
    let mut out = String::new();
    if ctx.format == Format::Tsv {
        out.push_str("index\tvalue\tbound\n");
    }
    for (i, p) in ps.iter().enumerate() {
        let v = spec.value(p)?;
        match ctx.format {
            Format::Tsv => {
                let (a, b) = show_value(&v);
                writeln!(out, "{i}\t{a}\t{b}")?;
            }
            _ => writeln!(out, "{v}")?,
        }
    }
    Ok(Outcome::ok(out))
}

pub fn cmd_check_axiom(ctx: &Session, path: &Path) -> anyhow::Result<Outcome> {
    let spec = ctx.spec()?;
    let inst = AxiomInstance::from_toml(&read(path)?).with_context(|| path.display().to_string())?;
    let r = check_axiom_with(spec, &inst, ctx.tolerance)?;
    let mut out = String::new();
    match ctx.format {
        Format::Tsv => writeln!(out, "axiom\tstatus\tdetail\n{}\t{}\t{}", r.axiom, r.status, r.detail)?,
        _ => writeln!(out, "{}: {}\n{}", r.axiom, r.status, r.detail)?,
    }
    let code = if r.status == Status::Violated { 1 } else { 0 };
    Ok(Outcome::with_code(code, out))
}

fn budget(ctx: &Session, params: &ParamMap, default_instances: u64) -> anyhow::Result<SearchBudget> {
    Ok(SearchBudget {
        max_instances: params.int("instances")?.unwrap_or(default_instances),
        seed: ctx.seed.or(params.int("seed")?).unwrap_or(0),
        population: params.range_u64("population", (2, 12))?,
        values: params.range_rational("values", (0, 40))?,
        denominator: params.int("denominator")?.unwrap_or(4),
    })
}

pub fn cmd_axiom_suite(ctx: &Session, params: &ParamMap) -> anyhow::Result<Outcome> {
    let spec = ctx.spec()?;
    let ap = params.axiom_params()?;
    let b = budget(ctx, params, 1000)?;
    let explicit = params.get("axioms").map(|s| {
        s.split(',').map(str::trim).filter(|t| !t.is_empty()).map(str::parse::<Axiom>).collect::<crate::Result<Vec<_>>>()
    });
    let axioms = match explicit {
        Some(list) => list?,
        None => Axiom::ALL.to_vec(),
    };
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for axiom in axioms {
        match run_suite(spec, axiom, &ap, &b, ctx.tolerance) {
            Ok(row) => rows.push((axiom, row)),
            Err(e) if params.get("axioms").is_none() => skipped.push((axiom, e)),
            Err(e) => return Err(anyhow!("{axiom}: {e}")),
        }
    }
    let mut out = String::new();
    let sep = if ctx.format == Format::Tsv { "\t" } else { "  " };
    let header = ["axiom", "instances", "satisfied", "violated", "unmet", "inconclusive"];
    if ctx.format == Format::Tsv {
        writeln!(out, "{}", header.join(sep))?;
    } else {
        writeln!(out, "{:<34}{:>10}{:>10}{:>10}{:>8}{:>14}", header[0], header[1], header[2], header[3], header[4], header[5])?;
    }
    for (axiom, r) in &rows {
        if ctx.format == Format::Tsv {
            writeln!(out, "{axiom}\t{}\t{}\t{}\t{}\t{}", r.instances, r.satisfied, r.violated, r.unmet, r.inconclusive)?;
        } else {
            writeln!(
                out,
                "{:<34}{:>10}{:>10}{:>10}{:>8}{:>14}",
                axiom.tag(),
                r.instances,
                r.satisfied,
                r.violated,
                r.unmet,
                r.inconclusive
            )?;
        }
    }
    for (axiom, e) in &skipped {
        writeln!(out, "# skipped {axiom}: {e}")?;
    }
    for (axiom, r) in &rows {
        if let Some(w) = &r.first_violation {
            writeln!(out, "\n# first violation of {axiom}")?;
            out.push_str(&format_witness(&w.result, &w.instance, Some(w.shrink_steps)));
        }
    }
    let violated = rows.iter().any(|(_, r)| r.violated > 0);
    Ok(Outcome::with_code(i32::from(violated), out))
}

/// Builds the named construction from parameters, with the worked examples
/// as defaults.
pub fn build_construction(prop: &str, params: &ParamMap) -> anyhow::Result<Construction> {
    Ok(match prop {
        "prop1" => {
            let p = params.chain_params(["10", "20", "2", "1", "2", "1"])?;
            build_prop1_chain(&p, params.int("m")?.unwrap_or(3))?
        }
        "prop2" => {
            let p = params.chain_params(["10", "20", "2", "1", "2", "1"])?;
            let lambda = params.rational_or("lambda", "1/2")?;
            let n = match params.int("n")? {
                Some(n) => Some(n),
                None if params.get("lambda").is_none() => Some(4),
                None => None,
            };
            build_prop2_chain(&p, &lambda, n)?
        }
        "prop3" => {
            let p = params.chain_params(["10", "20", "3", "1", "3", "2"])?;
            let lambda = params.rational_or("lambda", "1/10")?;
            build_prop3_chain(&p, &lambda, params.int("h")?.unwrap_or(2), params.int("n")?.unwrap_or(41))?
        }
        "prop4" => {
            let u = parse_profile_line(params.get("u").unwrap_or("1, 2, 3"), 1).context("parameter u")?;
            let v = parse_profile_line(params.get("v").unwrap_or("1, 1, 5"), 1).context("parameter v")?;
            match params.rational("beta_scale")? {
                Some(s) => build_prop4_chain(&u, &v, &move |a: &Rational| a * &s)?,
                None => build_prop4_chain(&u, &v, &default_beta_of_alpha)?,
            }
        }
        other => bail!("unknown proposition {other:?} (expected prop1, prop2, prop3 or prop4)"),
    })
}

fn chain_summary(chain: &DerivationChain, c: Option<&Construction>) -> String {
    let mut out = format!("{} chain {:?}: {} steps", chain.kind.tag(), chain.label, chain.steps.len());
    if let Some(c) = c {
        write!(out, ", n = {}", c.n).ok();
        for (name, x) in [("h", c.h), ("l", c.l), ("k", c.k)] {
            if let Some(x) = x {
                write!(out, ", {name} = {x}").ok();
            }
        }
    }
    out.push('\n');
    out
}

pub fn cmd_replay(
    ctx: &Session,
    prop: Option<&str>,
    certificate: Option<&Path>,
    out_path: Option<&Path>,
    params: &ParamMap,
) -> anyhow::Result<Outcome> {
    let (chain, construction) = match (prop, certificate) {
        (Some(p), None) => {
            let c = build_construction(p, params)?;
            (c.chain.clone(), Some(c))
        }
        (None, Some(path)) => (parse_certificate(&read(path)?).with_context(|| path.display().to_string())?, None),
        _ => bail!("give either a proposition (prop1..prop4) or --certificate <file>"),
    };
    let cert = write_certificate(&chain);
    if let Some(path) = out_path {
        fs::write(path, &cert).with_context(|| format!("cannot write {}", path.display()))?;
    }
    let report = validate_chain_with(&chain, ctx.ordering.as_ref(), ctx.tolerance)?;
    let mut out = String::new();
    if ctx.format == Format::Cert {
        out.push_str(&cert);
    } else {
        out.push_str(&chain_summary(&chain, construction.as_ref()));
        if report.failures.is_empty() {
            out.push_str("valid: every step's preconditions hold\n");
        } else {
            for f in &report.failures {
                writeln!(out, "step {}: {}", f.index, f.message)?;
            }
        }
        if let Some(claim) = &report.claim {
            writeln!(out, "claim: {claim}")?;
        }
        if let Some(loc) = &report.locator {
            writeln!(out, "ordering {}: {} denied step(s)", loc.ordering, loc.denied.len())?;
            if let Some(i) = loc.first_denied {
                let what = if i == chain.steps.len() {
                    "the Pareto terminal".to_string()
                } else {
                    chain.steps[i].justification.axiom().to_string()
                };
                writeln!(out, "first denied: step {i} ({what})")?;
            }
            for e in &loc.errors {
                writeln!(out, "locator error at step {}: {}", e.index, e.message)?;
            }
        }
    }
    Ok(Outcome::with_code(i32::from(!report.failures.is_empty()), out))
}

fn g_from(params: &ParamMap) -> anyhow::Result<GFunction> {
    Ok(match params.get("g").unwrap_or("identity") {
        "identity" => GFunction::Identity,
        "sqrt" => GFunction::Sqrt,
        "log-shifted" => GFunction::LogShifted { shift: params.rational_or("shift", "1")? },
        other => bail!("parameter g: {other:?} (use identity, sqrt or log-shifted, or pass an rdu --ordering)"),
    })
}

pub fn cmd_prop5(ctx: &Session, params: &ParamMap) -> anyhow::Result<Outcome> {
    let (rho, g) = match &ctx.ordering {
        Some(OrderingSpec::Rdu(RduParams { rho, g })) => (rho.clone(), g.clone()),
        Some(other) => bail!("prop5 needs a rank-discounted ordering, got {}", other.name()),
        None => (params.rational_or("rho", "101/100")?, g_from(params)?),
    };
    let mut out = String::new();
    let tsv = ctx.format == Format::Tsv;
    let mut ran = false;
    if ["theta_p", "theta_r", "alpha", "beta"].iter().all(|k| params.get(k).is_some()) {
        ran = true;
        let r = prop5_nonagg_condition(
            &g,
            &rho,
            &params.rational_or("theta_p", "0")?,
            &params.rational_or("theta_r", "0")?,
            &params.rational_or("alpha", "0")?,
            &params.rational_or("beta", "0")?,
        )?;
        if tsv {
            writeln!(out, "lhs\trhs\tholds\ttight_rhs\ttight_holds")?;
            writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}",
                show_value(&r.lhs).0,
                show_value(&r.rhs).0,
                r.holds,
                show_value(&r.tight_rhs).0,
                r.tight_holds
            )?;
        } else {
            writeln!(out, "non-aggregation condition: {}", if r.holds { "holds" } else { "fails" })?;
            writeln!(out, "  lhs = {}", r.lhs)?;
            writeln!(out, "  rhs = {}", r.rhs)?;
            writeln!(out, "  tight rhs = {} ({})", r.tight_rhs, if r.tight_holds { "holds" } else { "fails" })?;
            if let Some(n) = &r.note {
                writeln!(out, "  note: {n}")?;
            }
        }
    }
    if ["lambda", "gamma", "delta"].iter().all(|k| params.get(k).is_some()) {
        ran = true;
        let f = prop5_ratio_failure(
            &g,
            &rho,
            &params.rational_or("lambda", "1/2")?,
            &params.rational_or("gamma", "0")?,
            &params.rational_or("delta", "0")?,
            &params.rational_or("u1", "10")?,
        )?;
        if tsv {
            writeln!(out, "display_n\twitness_n\tcoefficient\tstatus")?;
            writeln!(out, "{}\t{}\t{:.6e}\t{}", f.display_n, f.witness_n, f.coefficient, f.result.status)?;
        } else {
            writeln!(out, "ratio aggregation fails: displayed at n = {}, caught at n = {}", f.display_n, f.witness_n)?;
            writeln!(out, "  coefficient at n = {}: {:.6e}", f.display_n, f.coefficient)?;
            writeln!(out, "  note: {}", f.note)?;
            out.push_str(&format_witness(&f.result, &f.instance, None));
        }
    }
    if !ran {
        bail!("prop5 needs theta_p, theta_r, alpha, beta (condition) and/or lambda, gamma, delta (ratio failure)");
    }
    Ok(Outcome::ok(out))
}

pub fn cmd_search(ctx: &Session, axiom: Option<&str>, params: &ParamMap) -> anyhow::Result<Outcome> {
    let spec = ctx.spec()?;
    let tag = axiom.or(params.get("axiom")).ok_or_else(|| anyhow!("search needs --axiom <tag>"))?;
    let axiom: Axiom = tag.parse()?;
    let b = budget(ctx, params, 10_000)?;
    let found = find_counterexample_with(spec, axiom, &params.axiom_params()?, &b, ctx.tolerance)?;
    Ok(match found {
        Some(w) => Outcome::with_code(1, format_witness(&w.result, &w.instance, Some(w.shrink_steps))),
        None => Outcome::ok(format!("no violation of {axiom} in {} instances\n", b.max_instances)),
    })
}

pub fn cmd_plot_data(
    _ctx: &Session,
    series: &str,
    from: u64,
    to: u64,
    step: u64,
    params: &ParamMap,
) -> anyhow::Result<Outcome> {
    if step == 0 {
        bail!("--step must be positive");
    }
    let mut out = String::new();
    let ns = (from..=to).step_by(step as usize);
    match series {
        "coefficient" => {
            let rho = params.rational_or("rho", "101/100")?;
            let lambda = params.rational_or("lambda", "1/2")?;
            out.push_str("n\tceil_lambda_n\tcoefficient\n");
            for n in ns {
                if let Some(c) = ratio_coefficient(&rho, &lambda, n)? {
                    writeln!(out, "{n}\t{}\t{c:.17e}", crate::profile::ceil_ratio(&lambda, n)?)?;
                }
            }
        }
        "lambda-interval" => {
            let get = |k: &str| params.rational(k)?.ok_or_else(|| anyhow!("lambda-interval needs parameter {k}"));
            let (a, b, g, d, l) = (get("alpha")?, get("beta")?, get("gamma")?, get("delta")?, get("lambda")?);
            out.push_str("n\tlower\tupper\tlower_f64\tupper_f64\tfeasible\n");
            for n in ns.filter(|&n| n >= 2) {
                let iv = lambda_feasible_interval(n, &a, &b, &g, &d, &l)?;
                writeln!(
                    out,
                    "{n}\t{}\t{}\t{:.12e}\t{:.12e}\t{}",
                    format_rational(&iv.lower),
                    format_rational(&iv.upper),
                    to_f64(&iv.lower),
                    to_f64(&iv.upper),
                    iv.feasible
                )?;
            }
        }
        other => bail!("unknown series {other:?} (expected coefficient or lambda-interval)"),
    }
    Ok(Outcome::ok(out))
}
