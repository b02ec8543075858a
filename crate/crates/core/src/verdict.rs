use std::fmt;

/// Four-valued outcome of comparing `u` against `v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    StrictlyBetter,
    StrictlyWorse,
    Equivalent,
    Incomparable,
}

impl Verdict {
    /// The verdict seen from the other side of the comparison.
    pub fn flip(self) -> Verdict {
        match self {
            Verdict::StrictlyBetter => Verdict::StrictlyWorse,
            Verdict::StrictlyWorse => Verdict::StrictlyBetter,
            other => other,
        }
    }

    /// `u ≽ v`
    pub fn at_least(self) -> bool {
        matches!(self, Verdict::StrictlyBetter | Verdict::Equivalent)
    }

    pub fn from_ordering(ord: std::cmp::Ordering) -> Verdict {
        match ord {
            std::cmp::Ordering::Greater => Verdict::StrictlyBetter,
            std::cmp::Ordering::Less => Verdict::StrictlyWorse,
            std::cmp::Ordering::Equal => Verdict::Equivalent,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Verdict::StrictlyBetter => "StrictlyBetter",
            Verdict::StrictlyWorse => "StrictlyWorse",
            Verdict::Equivalent => "Equivalent",
            Verdict::Incomparable => "Incomparable",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A verdict plus what the floating backend had to say about it.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub verdict: Verdict,
    /// `value(u) - value(v)` for floating orderings.
    pub margin: Option<f64>,
    /// The values were within the combined error bound; reported as `Equivalent`.
    pub numeric_tie: bool,
    pub note: Option<String>,
}

impl Comparison {
    pub fn plain(verdict: Verdict) -> Self {
        Comparison {
            verdict,
            margin: None,
            numeric_tie: false,
            note: None,
        }
    }

    pub fn incomparable(note: impl Into<String>) -> Self {
        Comparison {
            verdict: Verdict::Incomparable,
            margin: None,
            numeric_tie: false,
            note: Some(note.into()),
        }
    }

    pub fn flip(self) -> Self {
        Comparison {
            verdict: self.verdict.flip(),
            margin: self.margin.map(|m| -m),
            ..self
        }
    }
}
