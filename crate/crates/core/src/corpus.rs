//! Annotation data model.
//!
//! A mention is a set of token positions plus a category. Contiguous runs
//! of positions ("components") are derived on demand and never stored, so a
//! discontinuous mention and a continuous one share the same representation.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// A tokenized sentence with its document key.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sentence {
    pub tokens: Vec<String>,
    pub doc_id: String,
    pub index: usize,
}

impl Sentence {
    pub fn new<S: Into<String>>(
        tokens: impl IntoIterator<Item = S>,
        doc_id: impl Into<String>,
        index: usize,
    ) -> Result<Self> {
        let tokens: Vec<String> = tokens.into_iter().map(Into::into).collect();
        if tokens.is_empty() {
            return Err(Error::InvalidSentence("sentence has no tokens".into()));
        }
        if let Some(i) = tokens.iter().position(|t| t.is_empty()) {
            return Err(Error::InvalidSentence(format!("token {i} is empty")));
        }
        Ok(Sentence {
            tokens,
            doc_id: doc_id.into(),
            index,
        })
    }

    /// Shorthand for whitespace-separated text.
    pub fn from_text(text: &str, doc_id: impl Into<String>, index: usize) -> Result<Self> {
        Sentence::new(text.split_whitespace(), doc_id, index)
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn key(&self) -> SentenceKey {
        SentenceKey {
            doc_id: self.doc_id.clone(),
            index: self.index,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SentenceKey {
    pub doc_id: String,
    pub index: usize,
}

impl fmt::Display for SentenceKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self.doc_id, self.index)
    }
}

/// An entity mention: strictly increasing token positions and a category.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mention {
    positions: Vec<usize>,
    category: String,
}

impl Mention {
    /// Positions must be non-empty and strictly increasing.
    pub fn new(positions: Vec<usize>, category: impl Into<String>) -> Result<Self> {
        if positions.is_empty() {
            return Err(Error::InvalidMention("no positions".into()));
        }
        if positions.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidMention(format!(
                "positions {positions:?} are not strictly increasing"
            )));
        }
        let category = category.into();
        if category.is_empty() || category.chars().any(char::is_whitespace) {
            return Err(Error::InvalidMention(format!(
                "category `{category}` is empty or contains whitespace"
            )));
        }
        Ok(Mention {
            positions,
            category,
        })
    }

    /// Sorts and deduplicates before validating.
    pub fn from_unsorted(mut positions: Vec<usize>, category: impl Into<String>) -> Result<Self> {
        positions.sort_unstable();
        positions.dedup();
        Mention::new(positions, category)
    }

    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    pub fn category(&self) -> &str {
        &self.category
    }

    pub fn first(&self) -> usize {
        self.positions[0]
    }

    pub fn last(&self) -> usize {
        *self.positions.last().unwrap()
    }

    /// Width of the covering span, intervals included.
    pub fn width(&self) -> usize {
        self.last() - self.first() + 1
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_continuous(&self) -> bool {
        self.width() == self.positions.len()
    }

    pub fn is_discontinuous(&self) -> bool {
        !self.is_continuous()
    }

    /// Maximal contiguous runs as inclusive `(start, end)` pairs.
    pub fn components(&self) -> Vec<(usize, usize)> {
        runs(&self.positions)
    }

    pub fn contains(&self, position: usize) -> bool {
        self.positions.binary_search(&position).is_ok()
    }

    pub fn shares_position_with(&self, other: &Mention) -> bool {
        self.positions.iter().any(|&p| other.contains(p))
    }

    pub fn with_category(&self, category: impl Into<String>) -> Result<Self> {
        Mention::new(self.positions.clone(), category)
    }

    /// Tokens covered by the mention, joined by spaces.
    pub fn text(&self, sentence: &Sentence) -> String {
        self.positions
            .iter()
            .map(|&p| sentence.tokens[p].as_str())
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Display for Mention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", format_runs(&self.positions), self.category)
    }
}

/// Maximal runs of a strictly increasing position list.
pub fn runs(positions: &[usize]) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = Vec::new();
    for &p in positions {
        match out.last_mut() {
            Some((_, end)) if *end + 1 == p => *end = p,
            _ => out.push((p, p)),
        }
    }
    out
}

/// Renders positions as `0-1,3`.
pub fn format_runs(positions: &[usize]) -> String {
    runs(positions)
        .iter()
        .map(|&(s, e)| {
            if s == e {
                s.to_string()
            } else {
                format!("{s}-{e}")
            }
        })
        .collect::<Vec<_>>()
        .join(",")
}

/// True iff both mentions have identical positions and category.
pub fn mention_equal(a: &Mention, b: &Mention) -> bool {
    a.positions == b.positions && a.category == b.category
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotatedSentence {
    pub sentence: Sentence,
    pub mentions: Vec<Mention>,
}

impl AnnotatedSentence {
    pub fn new(sentence: Sentence, mentions: Vec<Mention>) -> Result<Self> {
        let annotated = AnnotatedSentence { sentence, mentions };
        annotated.validate()?;
        Ok(annotated)
    }

    pub fn unannotated(sentence: Sentence) -> Self {
        AnnotatedSentence {
            sentence,
            mentions: Vec::new(),
        }
    }

    /// Mentions lie inside the sentence and no `(positions, category)` pair repeats.
    pub fn validate(&self) -> Result<()> {
        if self.sentence.is_empty() {
            return Err(Error::InvalidSentence("sentence has no tokens".into()));
        }
        let n = self.sentence.len();
        for (i, m) in self.mentions.iter().enumerate() {
            if m.last() >= n {
                return Err(Error::InvalidMention(format!(
                    "{m} exceeds sentence length {n} in {}",
                    self.sentence.key()
                )));
            }
            if self.mentions[..i].iter().any(|o| mention_equal(o, m)) {
                return Err(Error::InvalidMention(format!(
                    "duplicate mention {m} in {}",
                    self.sentence.key()
                )));
            }
        }
        Ok(())
    }

    pub fn has_discontinuous(&self) -> bool {
        self.mentions.iter().any(Mention::is_discontinuous)
    }

    /// Mentions sorted by position list, then category.
    pub fn sorted_mentions(&self) -> Vec<Mention> {
        let mut ms = self.mentions.clone();
        ms.sort();
        ms
    }

    /// Canonical form: mentions sorted.
    pub fn canonical(mut self) -> Self {
        self.mentions.sort();
        self
    }
}

pub type Corpus = Vec<AnnotatedSentence>;

/// Structural category of a mention with respect to its sentence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OverlapCategory {
    NoOverlap,
    LeftOverlap,
    RightOverlap,
    MultiOverlap,
    ContinuousOverlap,
    ContinuousIsolated,
}

impl OverlapCategory {
    pub const ALL: [OverlapCategory; 6] = [
        OverlapCategory::ContinuousIsolated,
        OverlapCategory::ContinuousOverlap,
        OverlapCategory::NoOverlap,
        OverlapCategory::LeftOverlap,
        OverlapCategory::RightOverlap,
        OverlapCategory::MultiOverlap,
    ];

    pub fn is_discontinuous(self) -> bool {
        !matches!(
            self,
            OverlapCategory::ContinuousOverlap | OverlapCategory::ContinuousIsolated
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            OverlapCategory::NoOverlap => "NoOverlap",
            OverlapCategory::LeftOverlap => "LeftOverlap",
            OverlapCategory::RightOverlap => "RightOverlap",
            OverlapCategory::MultiOverlap => "MultiOverlap",
            OverlapCategory::ContinuousOverlap => "ContinuousOverlap",
            OverlapCategory::ContinuousIsolated => "ContinuousIsolated",
        }
    }
}

impl fmt::Display for OverlapCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for OverlapCategory {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        OverlapCategory::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Config(format!("unknown overlap category `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MentionShape {
    pub is_discontinuous: bool,
    pub component_count: usize,
    pub total_interval_length: usize,
    pub mention_length: usize,
    pub overlap_category: OverlapCategory,
}

/// Classifies `mention` against the other mentions of `ctx`.
///
/// A component is shared when any of its positions belongs to another
/// mention. Discontinuous mentions with two or more shared components, or a
/// single shared component that is neither first nor last, are
/// `MultiOverlap`.
pub fn classify_mention(mention: &Mention, ctx: &AnnotatedSentence) -> Result<MentionShape> {
    let Some(own) = ctx.mentions.iter().position(|m| mention_equal(m, mention)) else {
        return Err(Error::MentionNotInSentence(mention.to_string()));
    };
    let components = mention.components();
    let others: Vec<&Mention> = ctx
        .mentions
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != own)
        .map(|(_, m)| m)
        .collect();
    let shared: Vec<usize> = components
        .iter()
        .enumerate()
        .filter(|(_, &(s, e))| (s..=e).any(|p| others.iter().any(|o| o.contains(p))))
        .map(|(i, _)| i)
        .collect();

    let overlap_category = if components.len() == 1 {
        if shared.is_empty() {
            OverlapCategory::ContinuousIsolated
        } else {
            OverlapCategory::ContinuousOverlap
        }
    } else {
        match shared.as_slice() {
            [] => OverlapCategory::NoOverlap,
            [0] => OverlapCategory::LeftOverlap,
            [i] if *i == components.len() - 1 => OverlapCategory::RightOverlap,
            _ => OverlapCategory::MultiOverlap,
        }
    };

    Ok(MentionShape {
        is_discontinuous: components.len() > 1,
        component_count: components.len(),
        total_interval_length: mention.width() - mention.len(),
        mention_length: mention.len(),
        overlap_category,
    })
}

/// Corpus-level descriptive statistics.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct StatisticsReport {
    pub sentences: usize,
    pub tokens: usize,
    pub mentions: usize,
    pub discontinuous: usize,
    pub continuous_overlap: usize,
    pub mention_length_total: usize,
    pub discontinuous_length_total: usize,
    pub interval_length_total: usize,
    /// Component count -> number of discontinuous mentions.
    pub components: BTreeMap<usize, usize>,
    /// Overlap category -> number of discontinuous mentions.
    pub overlap: BTreeMap<OverlapCategory, usize>,
}

impl StatisticsReport {
    pub fn continuous(&self) -> usize {
        self.mentions - self.discontinuous
    }

    pub fn avg_mention_length(&self) -> Option<f64> {
        ratio(self.mention_length_total, self.mentions)
    }

    pub fn avg_discontinuous_length(&self) -> Option<f64> {
        ratio(self.discontinuous_length_total, self.discontinuous)
    }

    pub fn avg_interval_length(&self) -> Option<f64> {
        ratio(self.interval_length_total, self.discontinuous)
    }

    pub fn discontinuous_percent(&self) -> Option<Percent> {
        Percent::of(self.discontinuous, self.mentions)
    }
}

fn ratio(num: usize, den: usize) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

/// A percentage kept in tenths and truncated toward zero, as in the
/// reference statistics tables (675 of 6318 prints as 10.6).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Percent {
    tenths: u64,
}

impl Percent {
    pub fn of(count: usize, total: usize) -> Option<Percent> {
        (total > 0).then(|| Percent {
            tenths: (count as u64 * 1000) / total as u64,
        })
    }

    pub fn value(self) -> f64 {
        self.tenths as f64 / 10.0
    }
}

impl fmt::Display for Percent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.tenths / 10, self.tenths % 10)
    }
}

pub fn corpus_statistics(corpus: &[AnnotatedSentence]) -> Result<StatisticsReport> {
    let mut report = StatisticsReport::default();
    for annotated in corpus {
        report.sentences += 1;
        report.tokens += annotated.sentence.len();
        for m in &annotated.mentions {
            let shape = classify_mention(m, annotated)?;
            report.mentions += 1;
            report.mention_length_total += shape.mention_length;
            if shape.is_discontinuous {
                report.discontinuous += 1;
                report.discontinuous_length_total += shape.mention_length;
                report.interval_length_total += shape.total_interval_length;
                *report.components.entry(shape.component_count).or_default() += 1;
                *report.overlap.entry(shape.overlap_category).or_default() += 1;
            } else if shape.overlap_category == OverlapCategory::ContinuousOverlap {
                report.continuous_overlap += 1;
            }
        }
    }
    Ok(report)
}

impl fmt::Display for StatisticsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn avg(v: Option<f64>) -> String {
            v.map_or_else(|| "-".to_string(), |x| format!("{x:.1}"))
        }
        fn count_pct(count: usize, total: usize) -> String {
            match Percent::of(count, total) {
                Some(p) => format!("{count} ({p})"),
                None => count.to_string(),
            }
        }
        let disc = self.discontinuous;
        writeln!(f, "{:<22}{}", "# Sentences", self.sentences)?;
        writeln!(f, "{:<22}{}", "# Tokens", self.tokens)?;
        writeln!(f, "{:<22}{}", "# Mentions", self.mentions)?;
        writeln!(f, "{:<22}{}", "# Disc.M", count_pct(disc, self.mentions))?;
        writeln!(
            f,
            "{:<22}{}",
            "Avg mention L.",
            avg(self.avg_mention_length())
        )?;
        writeln!(
            f,
            "{:<22}{}",
            "Avg Disc.M L.",
            avg(self.avg_discontinuous_length())
        )?;
        writeln!(
            f,
            "{:<22}{}",
            "Avg interval L.",
            avg(self.avg_interval_length())
        )?;
        writeln!(f, "Discontinuous mentions")?;
        for (k, v) in &self.components {
            writeln!(
                f,
                "{:<22}{}",
                format!("{k} components"),
                count_pct(*v, disc)
            )?;
        }
        for cat in [
            OverlapCategory::NoOverlap,
            OverlapCategory::LeftOverlap,
            OverlapCategory::RightOverlap,
            OverlapCategory::MultiOverlap,
        ] {
            let v = self.overlap.get(&cat).copied().unwrap_or(0);
            writeln!(f, "{:<22}{}", cat.name(), count_pct(v, disc))?;
        }
        writeln!(f, "Continuous mentions")?;
        writeln!(
            f,
            "{:<22}{}",
            "Overlap",
            count_pct(self.continuous_overlap, self.continuous())
        )
    }
}
