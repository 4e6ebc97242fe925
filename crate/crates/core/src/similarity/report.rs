use std::fmt;

use rayon::prelude::*;

use super::jsd::{jsd, TermDistribution};
use super::kn::{perplexity, train_kn3, PplMode};
use super::vocab::{jsv, tvc, ContentFilter, VocabProfile};
use crate::error::{Error, Result};

/// A named candidate corpus, one token list per sentence.
#[derive(Debug, Clone)]
pub struct Source {
    pub name: String,
    pub sentences: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Default)]
pub struct SimilarityOptions {
    pub filter: ContentFilter,
    pub ppl_mode: PplMode,
    pub jsd_epsilon: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    Tvc,
    Jsv,
    Ppl,
    Jsd,
}

impl Measure {
    pub const ALL: [Measure; 4] = [Measure::Tvc, Measure::Jsv, Measure::Ppl, Measure::Jsd];

    pub fn name(self) -> &'static str {
        match self {
            Measure::Tvc => "TVC",
            Measure::Jsv => "JSV",
            Measure::Ppl => "PPL",
            Measure::Jsd => "JSD",
        }
    }

    pub fn higher_is_more_similar(self) -> bool {
        matches!(self, Measure::Tvc | Measure::Jsv)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SourceScores {
    pub name: String,
    /// Fractions in [0, 1].
    pub tvc: f64,
    pub jsv: f64,
    pub ppl: f64,
    /// On the 0-100 scale.
    pub jsd: f64,
}

impl SourceScores {
    pub fn get(&self, m: Measure) -> f64 {
        match m {
            Measure::Tvc => self.tvc,
            Measure::Jsv => self.jsv,
            Measure::Ppl => self.ppl,
            Measure::Jsd => self.jsd,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityReport {
    pub notes: Vec<String>,
    pub rows: Vec<SourceScores>,
    /// Per measure, the rank of each row (1 = most similar to the target).
    pub ranks: Vec<(Measure, Vec<usize>)>,
    /// Mean rank of each row over the four measures.
    pub consensus: Vec<f64>,
}

impl SimilarityReport {
    /// Row indices ordered by `measure`, most similar first.
    pub fn ranking(&self, measure: Measure) -> Vec<usize> {
        let ranks = &self.ranks.iter().find(|(m, _)| *m == measure).unwrap().1;
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&i| (ranks[i], i));
        order
    }

    pub fn key_values(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (i, row) in self.rows.iter().enumerate() {
            out.push(format!("source[{}].tvc={:.6}", row.name, row.tvc));
            out.push(format!("source[{}].jsv={:.6}", row.name, row.jsv));
            out.push(format!("source[{}].ppl={:.6}", row.name, row.ppl));
            out.push(format!("source[{}].jsd={:.6}", row.name, row.jsd));
            out.push(format!(
                "source[{}].consensus={:.6}",
                row.name, self.consensus[i]
            ));
        }
        for m in Measure::ALL {
            let names: Vec<&str> = self
                .ranking(m)
                .iter()
                .map(|&i| self.rows[i].name.as_str())
                .collect();
            out.push(format!("ranking.{}={}", m.name(), names.join(",")));
        }
        out
    }
}

fn ranks_for(rows: &[SourceScores], m: Measure) -> Vec<usize> {
    rows.iter()
        .map(|r| {
            let better = rows
                .iter()
                .filter(|o| {
                    if m.higher_is_more_similar() {
                        o.get(m) > r.get(m)
                    } else {
                        o.get(m) < r.get(m)
                    }
                })
                .count();
            better + 1
        })
        .collect()
}

/// Scores every source against the target on all four measures.
///
/// TVC and JSV compare content-word vocabularies, PPL evaluates a trigram
/// model trained on the source over the target, and JSD compares pooled
/// 1-3-gram distributions.
pub fn rank_sources(
    sources: &[Source],
    target: &[Vec<String>],
    options: &SimilarityOptions,
) -> Result<SimilarityReport> {
    if sources.is_empty() {
        return Err(Error::Similarity("no source corpora given".into()));
    }
    let target_vocab = VocabProfile::build(target, &options.filter);
    let target_terms = TermDistribution::build(target)?.with_epsilon(options.jsd_epsilon);
    let rows: Vec<SourceScores> = sources
        .par_iter()
        .map(|source| {
            let vocab = VocabProfile::build(&source.sentences, &options.filter);
            let model = train_kn3(&source.sentences)?;
            let terms =
                TermDistribution::build(&source.sentences)?.with_epsilon(options.jsd_epsilon);
            Ok(SourceScores {
                name: source.name.clone(),
                tvc: tvc(&vocab, &target_vocab)?,
                jsv: jsv(&vocab, &target_vocab)?,
                ppl: perplexity(&model, target, options.ppl_mode)?,
                jsd: jsd(&terms, &target_terms),
            })
        })
        .collect::<Result<_>>()?;
    let ranks: Vec<(Measure, Vec<usize>)> = Measure::ALL
        .iter()
        .map(|&m| (m, ranks_for(&rows, m)))
        .collect();
    let consensus = (0..rows.len())
        .map(|i| ranks.iter().map(|(_, r)| r[i] as f64).sum::<f64>() / ranks.len() as f64)
        .collect();
    let notes = vec![
        options.filter.describe(),
        match options.ppl_mode {
            PplMode::Mean => "PPL: mean of per-sentence perplexities".to_string(),
            PplMode::Summed => "PPL: sum of per-sentence perplexities".to_string(),
        },
        "JSD: pooled 1-3-gram distributions, log base 2, scaled to 0-100".to_string(),
        "ranking: higher TVC/JSV and lower PPL/JSD are more similar".to_string(),
    ];
    Ok(SimilarityReport {
        notes,
        rows,
        ranks,
        consensus,
    })
}

impl fmt::Display for SimilarityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for n in &self.notes {
            writeln!(f, "# {n}")?;
        }
        let width = self
            .rows
            .iter()
            .map(|r| r.name.len())
            .max()
            .unwrap_or(0)
            .max("source".len());
        writeln!(
            f,
            "{:<width$}  {:>8}  {:>8}  {:>12}  {:>8}  {:>9}",
            "source", "TVC (%)", "JSV (%)", "PPL", "JSD", "consensus"
        )?;
        for (row, c) in self.rows.iter().zip(&self.consensus) {
            writeln!(
                f,
                "{:<width$}  {:>8.2}  {:>8.2}  {:>12.2}  {:>8.2}  {:>9.2}",
                row.name,
                100.0 * row.tvc,
                100.0 * row.jsv,
                row.ppl,
                row.jsd,
                c
            )?;
        }
        for (m, _) in &self.ranks {
            let names: Vec<&str> = self
                .ranking(*m)
                .into_iter()
                .map(|i| self.rows[i].name.as_str())
                .collect();
            writeln!(f, "{}: {}", m.name(), names.join(" > "))?;
        }
        Ok(())
    }
}
