use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Ranks starting at 1, ties sharing their average rank. Higher scores
/// rank first when `descending`.
pub fn average_ranks(scores: &[f64], descending: bool) -> Vec<f64> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| {
        let ord = scores[a].total_cmp(&scores[b]);
        if descending {
            ord.reverse()
        } else {
            ord
        }
    });
    let mut ranks = vec![0.0; scores.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && scores[order[j]] == scores[order[i]] {
            j += 1;
        }
        let avg = (i + 1 + j) as f64 / 2.0;
        for &k in &order[i..j] {
            ranks[k] = avg;
        }
        i = j;
    }
    ranks
}

fn pearson(a: &[f64], b: &[f64]) -> Result<f64> {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let cov: f64 = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let va: f64 = a.iter().map(|x| (x - ma).powi(2)).sum();
    let vb: f64 = b.iter().map(|y| (y - mb).powi(2)).sum();
    if va == 0.0 || vb == 0.0 {
        return Err(Error::Similarity(
            "rank correlation of a constant ranking".into(),
        ));
    }
    Ok(cov / (va * vb).sqrt())
}

/// Spearman correlation of two paired score lists, average ranks on ties.
pub fn spearman_scores(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::Similarity(format!(
            "score lists differ in length ({} vs {})",
            a.len(),
            b.len()
        )));
    }
    if a.len() < 2 {
        return Err(Error::Similarity(
            "rank correlation needs at least two items".into(),
        ));
    }
    pearson(&average_ranks(a, false), &average_ranks(b, false))
}

/// Spearman correlation of two orderings of the same items, best first.
pub fn spearman<S: AsRef<str>>(rank_a: &[S], rank_b: &[S]) -> Result<f64> {
    if rank_a.len() != rank_b.len() {
        return Err(Error::Similarity(format!(
            "rankings differ in length ({} vs {})",
            rank_a.len(),
            rank_b.len()
        )));
    }
    if rank_a.len() < 2 {
        return Err(Error::Similarity(
            "rank correlation needs at least two items".into(),
        ));
    }
    let position: BTreeMap<&str, usize> = rank_b
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_ref(), i))
        .collect();
    if position.len() != rank_b.len() {
        return Err(Error::Similarity("ranking lists an item twice".into()));
    }
    let mut a = Vec::with_capacity(rank_a.len());
    let mut b = Vec::with_capacity(rank_a.len());
    for (i, item) in rank_a.iter().enumerate() {
        let Some(&j) = position.get(item.as_ref()) else {
            return Err(Error::Similarity(format!(
                "`{}` appears in only one ranking",
                item.as_ref()
            )));
        };
        a.push(i as f64);
        b.push(j as f64);
    }
    spearman_scores(&a, &b)
}
