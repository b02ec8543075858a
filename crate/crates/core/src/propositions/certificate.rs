//! Line-oriented certificate format for derivation chains.
//!
//! ```text
//! CHAIN	kind=contradiction	label=prop1
//! STEP	relation=weak	from=10, 20	to=13, 19	axiom=minimal-non-aggregation	u=10, 20	...
//! PARETO	axiom=weak-pareto	u=10, 20	v=9, 20
//! ```
//!
//! Fields are tab-separated `key=value` pairs. Index lists are written as
//! comma-separated ranges (`3..7,9`). Lines starting with `#` are ignored.

use toml::{Table, Value as TomlValue};

use super::chain::{ChainKind, DerivationChain, DerivationStep, Relation};
use crate::axioms::format::InstanceConfig;
use crate::axioms::AxiomInstance;
use crate::error::{Error, Result};
use crate::profile::WellbeingProfile;

const LIST_KEYS: &[&str] = &["perm", "group"];
const INT_KEYS: &[&str] = &["i", "j", "k", "m", "n"];

fn write_indices(xs: &[TomlValue]) -> String {
    let xs: Vec<i64> = xs.iter().filter_map(TomlValue::as_integer).collect();
    let mut out = Vec::new();
    let mut start = 0;
    while start < xs.len() {
        let mut end = start;
        while end + 1 < xs.len() && xs[end + 1] == xs[end] + 1 {
            end += 1;
        }
        if end - start >= 2 {
            out.push(format!("{}..{}", xs[start], xs[end] + 1));
        } else {
            out.extend(xs[start..=end].iter().map(|x| x.to_string()));
        }
        start = end + 1;
    }
    out.join(",")
}

fn parse_indices(text: &str) -> std::result::Result<Vec<TomlValue>, String> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let num = |s: &str| s.trim().parse::<i64>().map_err(|_| format!("bad index {s:?}"));
        match part.split_once("..") {
            Some((a, b)) => out.extend((num(a)?..num(b)?).map(TomlValue::Integer)),
            None => out.push(TomlValue::Integer(num(part)?)),
        }
    }
    Ok(out)
}

fn instance_fields(inst: &AxiomInstance) -> Vec<String> {
    let table = TomlValue::try_from(InstanceConfig::from(inst)).expect("instance serializes");
    let table = table.as_table().expect("instance is a table");
    // The tag goes first so a reader sees what kind of step this is.
    let mut keys: Vec<&String> = table.keys().collect();
    keys.sort_by_key(|k| k.as_str() != "axiom");
    keys.into_iter()
        .map(|k| {
            let v = &table[k];
            let text = match v {
                TomlValue::String(s) => s.clone(),
                TomlValue::Integer(x) => x.to_string(),
                TomlValue::Array(xs) => write_indices(xs),
                other => other.to_string(),
            };
            format!("{k}={text}")
        })
        .collect()
}

/// Serializes a chain. `parse_certificate` inverts this exactly.
pub fn write_certificate(chain: &DerivationChain) -> String {
    let mut out = format!("CHAIN\tkind={}\tlabel={}\n", chain.kind.tag(), chain.label);
    for step in &chain.steps {
        let mut fields = vec![
            "STEP".to_string(),
            format!("relation={}", step.relation.tag()),
            format!("from={}", step.from),
            format!("to={}", step.to),
        ];
        fields.extend(instance_fields(&step.justification));
        out.push_str(&fields.join("\t"));
        out.push('\n');
    }
    if let Some(t) = &chain.terminal {
        let mut fields = vec!["PARETO".to_string()];
        fields.extend(instance_fields(t));
        out.push_str(&fields.join("\t"));
        out.push('\n');
    }
    out
}

struct Fields<'a> {
    line: usize,
    items: Vec<(&'a str, &'a str, usize)>,
}

impl<'a> Fields<'a> {
    fn take(&mut self, key: &str) -> Result<(&'a str, usize)> {
        let pos = self
            .items
            .iter()
            .position(|(k, _, _)| *k == key)
            .ok_or_else(|| Error::parse(self.line, 1, format!("missing field {key}")))?;
        let (_, v, col) = self.items.remove(pos);
        Ok((v, col))
    }

    fn profile(&mut self, key: &str) -> Result<WellbeingProfile> {
        let (v, col) = self.take(key)?;
        v.parse().map_err(|e: Error| Error::parse(self.line, col, format!("{key}: {e}")))
    }

    fn instance(self) -> Result<AxiomInstance> {
        let mut table = Table::new();
        let line = self.line;
        let mut first_col = 1;
        for (k, v, col) in self.items {
            if table.is_empty() {
                first_col = col;
            }
            let value = if LIST_KEYS.contains(&k) {
                TomlValue::Array(parse_indices(v).map_err(|m| Error::parse(line, col, m))?)
            } else if INT_KEYS.contains(&k) {
                TomlValue::Integer(v.parse().map_err(|_| Error::parse(line, col, format!("{k}: bad integer {v:?}")))?)
            } else {
                TomlValue::String(v.to_string())
            };
            if table.insert(k.to_string(), value).is_some() {
                return Err(Error::parse(line, col, format!("duplicate field {k}")));
            }
        }
        let cfg: InstanceConfig =
            TomlValue::Table(table).try_into().map_err(|e: toml::de::Error| Error::parse(line, first_col, e.message()))?;
        Ok(cfg.into())
    }
}

fn split_line(line_no: usize, line: &str) -> Result<(&str, Fields<'_>)> {
    let mut parts = line.split('\t');
    let head = parts.next().unwrap_or("");
    let mut col = head.chars().count() + 2;
    let mut items = Vec::new();
    for part in parts {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::parse(line_no, col, format!("expected key=value, got {part:?}")))?;
        items.push((k, v, col));
        col += part.chars().count() + 1;
    }
    Ok((head, Fields { line: line_no, items }))
}

/// Parses a certificate. Malformed lines are errors with their position.
pub fn parse_certificate(text: &str) -> Result<DerivationChain> {
    let mut chain: Option<DerivationChain> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let (head, mut fields) = split_line(line_no, line)?;
        match head {
            "CHAIN" => {
                if chain.is_some() {
                    return Err(Error::parse(line_no, 1, "second CHAIN header"));
                }
                let (kind, col) = fields.take("kind")?;
                let kind = match kind {
                    "contradiction" => ChainKind::Contradiction,
                    "dominance" => ChainKind::Dominance,
                    other => return Err(Error::parse(line_no, col, format!("unknown chain kind {other:?}"))),
                };
                let (label, _) = fields.take("label")?;
                chain = Some(DerivationChain { kind, label: label.to_string(), steps: Vec::new(), terminal: None });
            }
            "STEP" | "PARETO" => {
                let c = chain.as_mut().ok_or_else(|| Error::parse(line_no, 1, "missing CHAIN header"))?;
                if c.terminal.is_some() {
                    return Err(Error::parse(line_no, 1, "line after the PARETO terminal"));
                }
                if head == "PARETO" {
                    c.terminal = Some(fields.instance()?);
                } else {
                    let (rel, col) = fields.take("relation")?;
                    let relation = Relation::parse(rel)
                        .ok_or_else(|| Error::parse(line_no, col, format!("unknown relation {rel:?}")))?;
                    let from = fields.profile("from")?;
                    let to = fields.profile("to")?;
                    let justification = fields.instance()?;
                    c.steps.push(DerivationStep { from, to, justification, relation });
                }
            }
            other => return Err(Error::parse(line_no, 1, format!("unknown line tag {other:?}"))),
        }
    }
    chain.ok_or_else(|| Error::parse(1, 1, "empty certificate"))
}
