//! Well-being profiles, stored run-length encoded so that populations of
//! 10⁹ identical individuals cost one block.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::numeric::{self, from_u64, Rational};

pub type Level = Rational;

/// Above this many entries operations that need positional access refuse to expand.
pub const MATERIALIZE_LIMIT: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Block {
    pub level: Level,
    pub count: u64,
}

/// An ordered list of well-being levels, `u_N`.
///
/// Adjacent equal entries are always merged, so two profiles are equal iff
/// their expanded sequences are equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WellbeingProfile {
    blocks: Vec<Block>,
    ends: Vec<u64>,
    len: u64,
}

fn block_ends(blocks: &[Block]) -> Vec<u64> {
    blocks
        .iter()
        .scan(0u64, |acc, b| {
            *acc += b.count;
            Some(*acc)
        })
        .collect()
}

fn locate<'a>(blocks: &'a [Block], ends: &[u64], index: u64) -> Option<&'a Level> {
    blocks.get(ends.partition_point(|&e| e <= index)).map(|b| &b.level)
}

fn push_merged(blocks: &mut Vec<Block>, level: Level, count: u64) {
    if count == 0 {
        return;
    }
    match blocks.last_mut() {
        Some(last) if last.level == level => last.count += count,
        _ => blocks.push(Block { level, count }),
    }
}

impl WellbeingProfile {
    pub fn new(levels: Vec<Level>) -> Result<Self> {
        Self::from_blocks(levels.into_iter().map(|l| (l, 1)))
    }

    pub fn from_blocks(blocks: impl IntoIterator<Item = (Level, u64)>) -> Result<Self> {
        let mut merged = Vec::new();
        let mut len = 0u64;
        for (level, count) in blocks {
            len = len
                .checked_add(count)
                .ok_or_else(|| Error::invalid("population size overflows u64"))?;
            push_merged(&mut merged, level, count);
        }
        if len == 0 {
            return Err(Error::EmptyProfile);
        }
        Ok(WellbeingProfile {
            ends: block_ends(&merged),
            blocks: merged,
            len,
        })
    }

    pub fn constant(level: Level, n: u64) -> Result<Self> {
        Self::from_blocks([(level, n)])
    }

    /// Convenience for tests and examples: integer levels.
    pub fn from_ints(values: &[i64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| numeric::int(v)).collect())
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn iter(&self) -> impl Iterator<Item = &Level> + '_ {
        self.blocks
            .iter()
            .flat_map(|b| std::iter::repeat_n(&b.level, b.count as usize))
    }

    pub fn get(&self, index: u64) -> Option<&Level> {
        locate(&self.blocks, &self.ends, index)
    }

    pub fn to_vec(&self) -> Result<Vec<Level>> {
        if self.len > MATERIALIZE_LIMIT {
            return Err(Error::TooLarge(self.len));
        }
        Ok(self.iter().cloned().collect())
    }

    pub fn sum(&self) -> Rational {
        self.blocks
            .iter()
            .fold(Rational::zero(), |acc, b| acc + &b.level * from_u64(b.count))
    }

    pub fn mean(&self) -> Rational {
        self.sum() / from_u64(self.len)
    }

    pub fn min(&self) -> &Level {
        self.blocks.iter().map(|b| &b.level).min().expect("nonempty")
    }

    pub fn max(&self) -> &Level {
        self.blocks.iter().map(|b| &b.level).max().expect("nonempty")
    }

    /// Ascending rearrangement `u_[N]`, stable with respect to input positions.
    pub fn rank(&self) -> RankedProfile {
        let mut order: Vec<usize> = (0..self.blocks.len()).collect();
        order.sort_by(|&a, &b| self.blocks[a].level.cmp(&self.blocks[b].level));
        let mut blocks = Vec::with_capacity(order.len());
        for &i in &order {
            push_merged(&mut blocks, self.blocks[i].level.clone(), self.blocks[i].count);
        }
        RankedProfile {
            ends: block_ends(&blocks),
            blocks,
            provenance: order,
            len: self.len,
        }
    }

    /// `k * u_N`: k concatenated copies.
    pub fn replicate(&self, k: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::ZeroReplication);
        }
        let blocks = (0..k).flat_map(|_| self.blocks.iter().map(|b| (b.level.clone(), b.count)));
        Self::from_blocks(blocks.collect::<Vec<_>>())
    }

    /// Result satisfies `result[perm[i]] = self[i]`.
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        let n = self.len as usize;
        check_permutation(perm, n)?;
        let levels = self.to_vec()?;
        let mut out: Vec<Option<Level>> = vec![None; n];
        for (i, level) in levels.into_iter().enumerate() {
            out[perm[i]] = Some(level);
        }
        Self::new(out.into_iter().map(|l| l.expect("bijection")).collect())
    }

    /// Replaces the entries at the given positions.
    pub fn with_entries(&self, updates: &[(usize, Level)]) -> Result<Self> {
        let mut levels = self.to_vec()?;
        for (idx, level) in updates {
            let slot = levels
                .get_mut(*idx)
                .ok_or_else(|| Error::invalid(format!("index {idx} out of range")))?;
            *slot = level.clone();
        }
        Self::new(levels)
    }

    pub fn concat(parts: &[&WellbeingProfile]) -> Result<Self> {
        Self::from_blocks(
            parts
                .iter()
                .flat_map(|p| p.blocks.iter().map(|b| (b.level.clone(), b.count)))
                .collect::<Vec<_>>(),
        )
    }

    /// Inverse of `replicate`: the base profile if `self` is `k` copies of one.
    pub fn unreplicate(&self, k: u64) -> Option<Self> {
        if k == 0 || self.len % k != 0 {
            return None;
        }
        let base_len = self.len / k;
        let levels = self.to_vec().ok()?;
        let base = Self::new(levels[..base_len as usize].to_vec()).ok()?;
        (base.replicate(k).ok()? == *self).then_some(base)
    }
}

pub(crate) fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(Error::NotAPermutation {
            n,
            reason: format!("length {} != {n}", perm.len()),
        });
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n {
            return Err(Error::NotAPermutation {
                n,
                reason: format!("index {p} out of range"),
            });
        }
        if std::mem::replace(&mut seen[p], true) {
            return Err(Error::NotAPermutation {
                n,
                reason: format!("index {p} repeated"),
            });
        }
    }
    Ok(())
}

impl fmt::Display for WellbeingProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            if b.count == 1 {
                f.write_str(&numeric::format_rational(&b.level))?;
            } else {
                write!(f, "{}*{}", b.count, numeric::format_rational(&b.level))?;
            }
        }
        Ok(())
    }
}

impl FromStr for WellbeingProfile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_profile_line(s, 1)
    }
}

/// `u_[N]` together with the order in which source blocks were laid out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankedProfile {
    blocks: Vec<Block>,
    ends: Vec<u64>,
    provenance: Vec<usize>,
    len: u64,
}

impl RankedProfile {
    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// Source block indices in ranked order; equal levels keep their input order.
    pub fn provenance(&self) -> &[usize] {
        &self.provenance
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn iter(&self) -> impl Iterator<Item = &Level> + '_ {
        self.blocks
            .iter()
            .flat_map(|b| std::iter::repeat_n(&b.level, b.count as usize))
    }

    /// Level at ascending rank `r` (0-based; rank 0 is the worst-off).
    pub fn get(&self, r: u64) -> Option<&Level> {
        locate(&self.blocks, &self.ends, r)
    }

    pub fn to_profile(&self) -> WellbeingProfile {
        WellbeingProfile {
            blocks: self.blocks.clone(),
            ends: self.ends.clone(),
            len: self.len,
        }
    }

    /// `perm` with `source.permute(perm) == self.to_profile()`.
    pub fn permutation(&self, source: &WellbeingProfile) -> Result<Vec<usize>> {
        if source.len > MATERIALIZE_LIMIT {
            return Err(Error::TooLarge(source.len));
        }
        let mut starts = Vec::with_capacity(source.blocks.len());
        let mut acc = 0usize;
        for b in &source.blocks {
            starts.push(acc);
            acc += b.count as usize;
        }
        let mut perm = vec![0usize; source.len as usize];
        let mut rank = 0usize;
        for &bi in &self.provenance {
            for offset in 0..source.blocks[bi].count as usize {
                perm[starts[bi] + offset] = rank;
                rank += 1;
            }
        }
        Ok(perm)
    }
}

/// `⌈λn⌉` in exact arithmetic.
pub fn ceil_ratio(lambda: &Rational, n: u64) -> Result<u64> {
    if !numeric::is_unit_interval_open(lambda) {
        return Err(Error::RatioOutOfRange(numeric::format_rational(lambda)));
    }
    if n == 0 {
        return Err(Error::invalid("population size must be positive"));
    }
    let c: BigInt = numeric::ceil(&(lambda * from_u64(n)));
    c.to_u64().ok_or_else(|| Error::invalid("ceil overflow"))
}

fn parse_entry(entry: &str, line: usize, column: usize) -> Result<(Level, u64)> {
    let (count, value) = match entry.split_once('*') {
        Some((k, x)) => {
            let k = k.trim();
            let count: u64 = k
                .parse()
                .map_err(|_| Error::parse(line, column, format!("bad replication count `{k}`")))?;
            if count == 0 {
                return Err(Error::parse(line, column, "replication count must be positive"));
            }
            (count, x)
        }
        None => (1, entry),
    };
    let level = numeric::parse_rational(value).map_err(|m| Error::parse(line, column, m))?;
    Ok((level, count))
}

/// One profile: comma separated entries, each `x` or `k*x`.
pub fn parse_profile_line(text: &str, line: usize) -> Result<WellbeingProfile> {
    let body = text.split('#').next().unwrap_or("");
    let mut blocks = Vec::new();
    let mut column = 1;
    for raw in body.split(',') {
        let leading = raw.len() - raw.trim_start().len();
        let entry = raw.trim();
        if entry.is_empty() {
            return Err(Error::parse(line, column + leading, "empty entry"));
        }
        blocks.push(parse_entry(entry, line, column + leading)?);
        column += raw.len() + 1;
    }
    WellbeingProfile::from_blocks(blocks).map_err(|e| Error::parse(line, 1, e.to_string()))
}

/// A profile file: one profile per non-blank line, `#` comments.
pub fn parse_profiles(text: &str) -> Result<Vec<WellbeingProfile>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.split('#').next().unwrap_or("").trim().is_empty())
        .map(|(i, l)| parse_profile_line(l, i + 1))
        .collect()
}

pub fn format_profiles(profiles: &[WellbeingProfile]) -> String {
    profiles.iter().map(|p| format!("{p}\n")).collect()
}
