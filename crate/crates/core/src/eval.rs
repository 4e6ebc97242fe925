//! Strict-match evaluation, subset evaluations and recall breakdowns.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::corpus::{classify_mention, AnnotatedSentence, Mention, OverlapCategory, SentenceKey};
use crate::error::{Error, Result};

/// Formats a metric with at most six decimals: `1.0`, `0.5`, `0.333333`.
pub fn format_metric(x: f64) -> String {
    let s = format!("{x:.6}");
    let s = s.trim_end_matches('0');
    if s.ends_with('.') {
        format!("{s}0")
    } else {
        s.to_string()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Counts {
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
}

impl Counts {
    pub fn merge(self, other: Counts) -> Counts {
        Counts {
            tp: self.tp + other.tp,
            fp: self.fp + other.fp,
            fn_: self.fn_ + other.fn_,
        }
    }
}

/// A ratio that is 0 when its denominator is 0, with that case flagged.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ratio {
    pub value: f64,
    pub undefined: bool,
}

impl Ratio {
    fn of(num: usize, den: usize) -> Ratio {
        if den == 0 {
            Ratio {
                value: 0.0,
                undefined: true,
            }
        } else {
            Ratio {
                value: num as f64 / den as f64,
                undefined: false,
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub counts: Counts,
    pub precision: Ratio,
    pub recall: Ratio,
    pub f1: Ratio,
}

impl EvalReport {
    pub fn from_counts(counts: Counts) -> EvalReport {
        let precision = Ratio::of(counts.tp, counts.tp + counts.fp);
        let recall = Ratio::of(counts.tp, counts.tp + counts.fn_);
        let sum = precision.value + recall.value;
        let f1 = if sum == 0.0 {
            Ratio {
                value: 0.0,
                undefined: true,
            }
        } else {
            Ratio {
                value: 2.0 * precision.value * recall.value / sum,
                undefined: false,
            }
        };
        EvalReport {
            counts,
            precision,
            recall,
            f1,
        }
    }

    /// `metric=value` lines in a fixed order, each prefixed by `prefix`.
    pub fn key_values(&self, prefix: &str) -> Vec<String> {
        let mut out = vec![
            format!("{prefix}tp={}", self.counts.tp),
            format!("{prefix}fp={}", self.counts.fp),
            format!("{prefix}fn={}", self.counts.fn_),
            format!("{prefix}precision={}", format_metric(self.precision.value)),
            format!("{prefix}recall={}", format_metric(self.recall.value)),
            format!("{prefix}f1={}", format_metric(self.f1.value)),
        ];
        let undefined: Vec<&str> = [
            ("precision", self.precision),
            ("recall", self.recall),
            ("f1", self.f1),
        ]
        .into_iter()
        .filter(|(_, r)| r.undefined)
        .map(|(n, _)| n)
        .collect();
        if !undefined.is_empty() {
            out.push(format!("{prefix}undefined={}", undefined.join(",")));
        }
        out
    }
}

impl fmt::Display for EvalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in self.key_values("") {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

fn index(corpus: &[AnnotatedSentence], side: &str) -> Result<BTreeMap<SentenceKey, usize>> {
    let mut map = BTreeMap::new();
    for (i, a) in corpus.iter().enumerate() {
        if map.insert(a.sentence.key(), i).is_some() {
            return Err(Error::KeyMismatch(format!(
                "sentence {} appears twice in {side}",
                a.sentence.key()
            )));
        }
    }
    Ok(map)
}

/// Gold/pred sentence pairs, matched by key.
fn align<'a>(
    gold: &'a [AnnotatedSentence],
    pred: &'a [AnnotatedSentence],
) -> Result<Vec<(&'a AnnotatedSentence, &'a AnnotatedSentence)>> {
    let g = index(gold, "gold")?;
    let p = index(pred, "predictions")?;
    if let Some(k) = g.keys().find(|k| !p.contains_key(k)) {
        return Err(Error::KeyMismatch(format!(
            "no prediction for sentence {k}"
        )));
    }
    if let Some(k) = p.keys().find(|k| !g.contains_key(k)) {
        return Err(Error::KeyMismatch(format!(
            "prediction for unknown sentence {k}"
        )));
    }
    Ok(g.iter().map(|(k, &i)| (&gold[i], &pred[p[k]])).collect())
}

fn count(gold: &[&Mention], pred: &[&Mention]) -> Counts {
    let g: BTreeSet<&Mention> = gold.iter().copied().collect();
    let p: BTreeSet<&Mention> = pred.iter().copied().collect();
    let tp = g.intersection(&p).count();
    Counts {
        tp,
        fp: p.len() - tp,
        fn_: g.len() - tp,
    }
}

fn evaluate_filtered(
    gold: &[AnnotatedSentence],
    pred: &[AnnotatedSentence],
    keep: impl Fn(&Mention) -> bool,
) -> Result<EvalReport> {
    let mut total = Counts::default();
    for (g, p) in align(gold, pred)? {
        let gm: Vec<&Mention> = g.mentions.iter().filter(|m| keep(m)).collect();
        let pm: Vec<&Mention> = p.mentions.iter().filter(|m| keep(m)).collect();
        total = total.merge(count(&gm, &pm));
    }
    Ok(EvalReport::from_counts(total))
}

/// Micro-averaged strict match: a prediction counts only when positions and
/// category both equal a gold mention. Duplicate predictions count once.
pub fn evaluate(gold: &[AnnotatedSentence], pred: &[AnnotatedSentence]) -> Result<EvalReport> {
    evaluate_filtered(gold, pred, |_| true)
}

/// Sentences with at least one discontinuous gold mention.
pub fn subset_disc_sentences(gold: &[AnnotatedSentence]) -> Vec<AnnotatedSentence> {
    gold.iter()
        .filter(|a| a.has_discontinuous())
        .cloned()
        .collect()
}

/// Predictions restricted to the sentences of `subset`.
pub fn restrict_to(
    subset: &[AnnotatedSentence],
    pred: &[AnnotatedSentence],
) -> Vec<AnnotatedSentence> {
    let keys: BTreeSet<SentenceKey> = subset.iter().map(|a| a.sentence.key()).collect();
    pred.iter()
        .filter(|a| keys.contains(&a.sentence.key()))
        .cloned()
        .collect()
}

/// Strict match over discontinuous gold and predicted mentions only.
pub fn subset_disc_only(
    gold: &[AnnotatedSentence],
    pred: &[AnnotatedSentence],
) -> Result<EvalReport> {
    evaluate_filtered(gold, pred, Mention::is_discontinuous)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    MentionLength,
    IntervalLength,
    OverlapCategory,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::MentionLength => "mention_length",
            Axis::IntervalLength => "interval_length",
            Axis::OverlapCategory => "overlap_category",
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mention_length" => Ok(Axis::MentionLength),
            "interval_length" => Ok(Axis::IntervalLength),
            "overlap_category" => Ok(Axis::OverlapCategory),
            _ => Err(Error::Config(format!(
                "unknown breakdown axis `{s}` (expected mention_length, interval_length or overlap_category)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Bucket {
    Length(usize),
    Category(OverlapCategory),
}

impl fmt::Display for Bucket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bucket::Length(n) => write!(f, "{n}"),
            Bucket::Category(c) => write!(f, "{c}"),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BucketStats {
    pub gold: usize,
    pub tp: usize,
}

impl BucketStats {
    pub fn recall(&self) -> Ratio {
        Ratio::of(self.tp, self.gold)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Breakdown {
    pub axis: Axis,
    pub buckets: BTreeMap<Bucket, BucketStats>,
}

impl Breakdown {
    pub fn key_values(&self) -> Vec<String> {
        self.buckets
            .iter()
            .map(|(b, s)| {
                format!(
                    "{}[{b}] gold={} tp={} recall={}",
                    self.axis,
                    s.gold,
                    s.tp,
                    format_metric(s.recall().value)
                )
            })
            .collect()
    }
}

/// Recall of gold mentions bucketed along `axis`. Interval length 0 is the
/// continuous bucket.
pub fn breakdown(
    gold: &[AnnotatedSentence],
    pred: &[AnnotatedSentence],
    axis: Axis,
) -> Result<Breakdown> {
    let mut buckets: BTreeMap<Bucket, BucketStats> = BTreeMap::new();
    for (g, p) in align(gold, pred)? {
        let predicted: BTreeSet<&Mention> = p.mentions.iter().collect();
        for m in &g.mentions {
            let shape = classify_mention(m, g)?;
            let bucket = match axis {
                Axis::MentionLength => Bucket::Length(shape.mention_length),
                Axis::IntervalLength => Bucket::Length(shape.total_interval_length),
                Axis::OverlapCategory => Bucket::Category(shape.overlap_category),
            };
            let stats = buckets.entry(bucket).or_default();
            stats.gold += 1;
            if predicted.contains(m) {
                stats.tp += 1;
            }
        }
    }
    Ok(Breakdown { axis, buckets })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Sentence;

    fn m(p: &[usize]) -> Mention {
        Mention::new(p.to_vec(), "ADE").unwrap()
    }

    fn a(index: usize, ms: Vec<Mention>) -> AnnotatedSentence {
        AnnotatedSentence::new(
            Sentence::from_text("a b c d e f", "doc", index).unwrap(),
            ms,
        )
        .unwrap()
    }

    #[test]
    fn identical_corpora_score_one() {
        let g = vec![a(0, vec![m(&[0])])];
        let r = evaluate(&g, &g).unwrap();
        assert_eq!(
            (r.precision.value, r.recall.value, r.f1.value),
            (1.0, 1.0, 1.0)
        );
        assert!(r.key_values("").contains(&"f1=1.0".to_string()));
    }

    #[test]
    fn half_right() {
        let g = vec![a(0, vec![m(&[0]), m(&[1])])];
        let p = vec![a(0, vec![m(&[0]), m(&[2])])];
        let r = evaluate(&g, &p).unwrap();
        assert_eq!(
            (r.precision.value, r.recall.value, r.f1.value),
            (0.5, 0.5, 0.5)
        );
    }

    #[test]
    fn empty_predictions() {
        let g = vec![a(0, vec![m(&[0])])];
        let p = vec![a(0, vec![])];
        let r = evaluate(&g, &p).unwrap();
        assert_eq!(r.precision.value, 0.0);
        assert!(r.precision.undefined);
        assert!(!r.recall.undefined);
        assert_eq!(r.f1.value, 0.0);
    }

    #[test]
    fn category_must_match() {
        let g = vec![a(0, vec![m(&[0])])];
        let p = vec![a(0, vec![Mention::new(vec![0], "Drug").unwrap()])];
        assert_eq!(evaluate(&g, &p).unwrap().counts.tp, 0);
    }

    #[test]
    fn key_mismatch() {
        let g = vec![a(0, vec![])];
        let p = vec![a(1, vec![])];
        assert!(matches!(evaluate(&g, &p), Err(Error::KeyMismatch(_))));
        let dup = vec![a(0, vec![]), a(0, vec![])];
        assert!(matches!(evaluate(&dup, &g), Err(Error::KeyMismatch(_))));
    }

    #[test]
    fn disc_only_subset() {
        let g = vec![
            a(
                0,
                vec![m(&[0]), m(&[1, 2]), m(&[0, 3]), m(&[4]), m(&[2, 5])],
            ),
            a(1, vec![m(&[0])]),
        ];
        let p = vec![a(0, vec![m(&[0]), m(&[0, 3])]), a(1, vec![])];
        let r = subset_disc_only(&g, &p).unwrap();
        assert_eq!(r.recall.value, 0.5);
        assert_eq!(r.precision.value, 1.0);
        let subset = subset_disc_sentences(&g);
        assert_eq!(subset.len(), 1);
        assert_eq!(restrict_to(&subset, &p).len(), 1);

        let flat = vec![a(0, vec![m(&[0, 1, 2, 3])]), a(1, vec![m(&[0])])];
        let r = subset_disc_only(&g, &flat).unwrap();
        assert_eq!(
            (r.precision.value, r.recall.value, r.f1.value),
            (0.0, 0.0, 0.0)
        );

        let continuous = vec![a(0, vec![m(&[0])])];
        let r = subset_disc_only(&continuous, &continuous).unwrap();
        assert!(r.recall.undefined && r.precision.undefined);
    }

    #[test]
    fn length_buckets() {
        let g = vec![a(0, vec![m(&[0]), m(&[1, 2]), m(&[2, 3, 4, 5])])];
        let p = vec![a(0, vec![m(&[0]), m(&[2, 3, 4, 5])])];
        let b = breakdown(&g, &p, Axis::MentionLength).unwrap();
        assert_eq!(b.buckets.len(), 3);
        assert_eq!(
            b.buckets[&Bucket::Length(1)],
            BucketStats { gold: 1, tp: 1 }
        );
        assert_eq!(
            b.buckets[&Bucket::Length(2)],
            BucketStats { gold: 1, tp: 0 }
        );
        assert_eq!(
            b.buckets[&Bucket::Length(4)],
            BucketStats { gold: 1, tp: 1 }
        );
        assert!("width".parse::<Axis>().is_err());
    }

    #[test]
    fn duplicates_count_once() {
        let g = vec![a(0, vec![m(&[0])])];
        let mut p = a(0, vec![m(&[0])]);
        p.mentions.push(m(&[0]));
        let r = evaluate(&g, &[p]).unwrap();
        assert_eq!(
            r.counts,
            Counts {
                tp: 1,
                fp: 0,
                fn_: 0
            }
        );
    }

    #[test]
    fn metric_format() {
        assert_eq!(format_metric(1.0), "1.0");
        assert_eq!(format_metric(0.0), "0.0");
        assert_eq!(format_metric(0.5), "0.5");
        assert_eq!(format_metric(1.0 / 3.0), "0.333333");
    }
}
