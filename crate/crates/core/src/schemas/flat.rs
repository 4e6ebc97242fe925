use crate::corpus::{AnnotatedSentence, Mention};

/// Replaces each discontinuous mention by its covering span, then merges
/// overlapping spans transitively. A merged span takes the category of its
/// longest constituent, the leftmost on ties. The result is continuous and
/// disjoint.
pub fn flat_merge(annotated: &AnnotatedSentence) -> AnnotatedSentence {
    let mut spans: Vec<(usize, usize, &str)> = annotated
        .mentions
        .iter()
        .map(|m| (m.first(), m.last(), m.category()))
        .collect();
    spans.sort_by_key(|&(s, e, c)| (s, std::cmp::Reverse(e), c));

    let mut merged: Vec<Mention> = Vec::new();
    let mut group: Option<(usize, usize, (usize, usize, &str))> = None;
    let flush = |g: (usize, usize, (usize, usize, &str)), out: &mut Vec<Mention>| {
        let (start, end, (_, _, category)) = g;
        out.push(Mention::new((start..=end).collect(), category).expect("valid span"));
    };
    for span in spans {
        let (s, e, _) = span;
        match group.as_mut() {
            Some((_, end, best)) if s <= *end => {
                *end = (*end).max(e);
                let width = |x: &(usize, usize, &str)| x.1 - x.0;
                if width(&span) > width(best) {
                    *best = span;
                }
            }
            _ => {
                if let Some(g) = group.take() {
                    flush(g, &mut merged);
                }
                group = Some((s, e, span));
            }
        }
    }
    if let Some(g) = group {
        flush(g, &mut merged);
    }
    AnnotatedSentence {
        sentence: annotated.sentence.clone(),
        mentions: merged,
    }
}
