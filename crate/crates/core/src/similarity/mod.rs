//! Corpus similarity measures for choosing pre-training data: vocabulary
//! coverage (TVC), vocabulary Jaccard similarity (JSV), Kneser-Ney trigram
//! perplexity (PPL) and Jensen-Shannon divergence of term distributions (JSD).

mod jsd;
mod kn;
mod report;
mod spearman;
mod vocab;

pub use jsd::{jsd, TermDistribution};
pub use kn::{perplexity, train_kn3, NgramModel, PplMode, BOS, EOS, UNK};
pub use report::{
    rank_sources, Measure, SimilarityOptions, SimilarityReport, Source, SourceScores,
};
pub use spearman::{average_ranks, spearman, spearman_scores};
pub use vocab::{jsv, tvc, ContentFilter, VocabProfile};
