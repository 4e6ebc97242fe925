use rand::seq::SliceRandom;
use rand::Rng;

use super::resources::{LabelwiseDistribution, MentionPool, StopWords, SynonymLexicon};
use super::token_labels;
use crate::corpus::{AnnotatedSentence, Mention, Sentence};
use crate::error::{Error, Result};

/// Old positions `start..end` become `tokens`; mentions listed in `owners`
/// cover all the new positions.
struct Replacement {
    start: usize,
    end: usize,
    tokens: Vec<String>,
    owners: Vec<usize>,
}

/// Applies sorted, disjoint replacements and re-indexes every mention.
fn splice(annotated: &AnnotatedSentence, mut reps: Vec<Replacement>) -> AnnotatedSentence {
    if reps.is_empty() {
        return annotated.clone();
    }
    reps.sort_by_key(|r| r.start);
    let old = &annotated.sentence.tokens;
    let mut tokens: Vec<String> = Vec::with_capacity(old.len());
    let mut map: Vec<Option<usize>> = vec![None; old.len()];
    let mut regions: Vec<(usize, usize)> = Vec::with_capacity(reps.len());
    let mut p = 0;
    for r in &reps {
        while p < r.start {
            map[p] = Some(tokens.len());
            tokens.push(old[p].clone());
            p += 1;
        }
        let begin = tokens.len();
        tokens.extend(r.tokens.iter().cloned());
        regions.push((begin, tokens.len()));
        p = r.end;
    }
    while p < old.len() {
        map[p] = Some(tokens.len());
        tokens.push(old[p].clone());
        p += 1;
    }
    let mentions = annotated
        .mentions
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let mut positions: Vec<usize> = m.positions().iter().filter_map(|&q| map[q]).collect();
            for (r, &(b, e)) in reps.iter().zip(&regions) {
                if r.owners.contains(&i) {
                    positions.extend(b..e);
                }
            }
            Mention::from_unsorted(positions, m.category()).expect("re-indexed mention")
        })
        .collect();
    let s = &annotated.sentence;
    AnnotatedSentence {
        sentence: Sentence {
            tokens,
            doc_id: s.doc_id.clone(),
            index: s.index,
        },
        mentions,
    }
}

/// Label-wise token replacement: each non-stopword token is, with
/// probability `p`, replaced by a token drawn from those that bore the same
/// label in the training corpus. Labels and mentions are unchanged.
pub fn lwtr<R: Rng>(
    annotated: &AnnotatedSentence,
    dist: &LabelwiseDistribution,
    stopwords: &StopWords,
    p: f64,
    rng: &mut R,
) -> AnnotatedSentence {
    let mut out = annotated.clone();
    for (i, label) in token_labels(annotated).iter().enumerate() {
        if stopwords.contains(&annotated.sentence.tokens[i]) || !rng.gen_bool(p) {
            continue;
        }
        match dist.sample(label, rng) {
            Some(token) => out.sentence.tokens[i] = token.to_string(),
            None => log::debug!("no tokens recorded for label {label}"),
        }
    }
    out
}

/// Synonym replacement: each non-stopword token with a lexicon entry is,
/// with probability `p`, replaced by one of its synonyms. Mentions covering
/// the token cover every token of the synonym, so a `B-X` token becomes
/// `B-X I-X...` and an `I-X` token `I-X I-X...`.
pub fn synonym_replace<R: Rng>(
    annotated: &AnnotatedSentence,
    lexicon: &SynonymLexicon,
    stopwords: &StopWords,
    p: f64,
    rng: &mut R,
) -> AnnotatedSentence {
    let mut reps = Vec::new();
    for (i, token) in annotated.sentence.tokens.iter().enumerate() {
        if stopwords.contains(token) {
            continue;
        }
        let Some(synonyms) = lexicon.synonyms(token) else {
            continue;
        };
        if !rng.gen_bool(p) {
            continue;
        }
        let choice = synonyms.choose(rng).expect("lexicon entries are non-empty");
        reps.push(Replacement {
            start: i,
            end: i + 1,
            tokens: choice.clone(),
            owners: owners_of(annotated, i),
        });
    }
    splice(annotated, reps)
}

fn owners_of(annotated: &AnnotatedSentence, position: usize) -> Vec<usize> {
    annotated
        .mentions
        .iter()
        .enumerate()
        .filter(|(_, m)| m.contains(position))
        .map(|(i, _)| i)
        .collect()
}

/// Mention replacement: each eligible mention is, with probability `p`,
/// replaced by a mention of the same category drawn uniformly from `pool`.
///
/// Continuous mentions that share no token with another mention are
/// eligible. With `cover_discontinuous`, a discontinuous mention whose
/// covering region holds no other mention is eligible too; the whole region
/// is replaced and the mention becomes continuous.
pub fn mention_replace<R: Rng>(
    annotated: &AnnotatedSentence,
    pool: &MentionPool,
    p: f64,
    cover_discontinuous: bool,
    rng: &mut R,
) -> AnnotatedSentence {
    let mut order: Vec<usize> = (0..annotated.mentions.len()).collect();
    order.sort_by_key(|&i| annotated.mentions[i].clone());
    let mut reps = Vec::new();
    for i in order {
        let m = &annotated.mentions[i];
        let (start, end) = (m.first(), m.last() + 1);
        let clear = annotated
            .mentions
            .iter()
            .enumerate()
            .all(|(j, o)| j == i || o.positions().iter().all(|&q| q < start || q >= end));
        let eligible = clear && (m.is_continuous() || cover_discontinuous);
        if !eligible || !rng.gen_bool(p) {
            continue;
        }
        match pool.sample(m.category(), rng) {
            Some(tokens) => reps.push(Replacement {
                start,
                end,
                tokens: tokens.to_vec(),
                owners: vec![i],
            }),
            None => log::debug!("no pool mentions for category {}", m.category()),
        }
    }
    splice(annotated, reps)
}

/// Shuffle within segments: the sentence splits into mentions and maximal
/// runs of unannotated tokens; each segment is shuffled with probability
/// `p`. Labels stay in place.
pub fn shuffle_within_segments<R: Rng>(
    annotated: &AnnotatedSentence,
    p: f64,
    rng: &mut R,
) -> Result<AnnotatedSentence> {
    let n = annotated.sentence.len();
    let mut owner: Vec<Option<usize>> = vec![None; n];
    for (i, m) in annotated.mentions.iter().enumerate() {
        if m.is_discontinuous() {
            return Err(Error::SchemaLimitation(format!(
                "shuffle within segments needs flat mentions but {} has discontinuous mention {m}; apply flat_merge first",
                annotated.sentence.key()
            )));
        }
        for &q in m.positions() {
            if owner[q].is_some() {
                return Err(Error::SchemaLimitation(format!(
                    "shuffle within segments needs flat mentions but {} has overlapping mentions; apply flat_merge first",
                    annotated.sentence.key()
                )));
            }
            owner[q] = Some(i);
        }
    }
    let mut out = annotated.clone();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && owner[end] == owner[start] {
            end += 1;
        }
        if end - start >= 2 && rng.gen_bool(p) {
            out.sentence.tokens[start..end].shuffle(rng);
        }
        start = end;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn m(p: &[usize], c: &str) -> Mention {
        Mention::new(p.to_vec(), c).unwrap()
    }

    fn a(text: &str, ms: Vec<Mention>) -> AnnotatedSentence {
        AnnotatedSentence::new(Sentence::from_text(text, "d", 0).unwrap(), ms).unwrap()
    }

    fn example() -> AnnotatedSentence {
        a(
            "She did not complain of headache or any other neurological symptoms .",
            vec![m(&[5], "Problem"), m(&[7, 8, 9, 10], "Problem")],
        )
    }

    #[test]
    fn synonyms_keep_labels() {
        let lex =
            SynonymLexicon::parse("neurological\tneurologic\nsymptoms\tsymptom\n", "lex").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let out = synonym_replace(&example(), &lex, &StopWords::default(), 1.0, &mut rng);
        assert_eq!(out.sentence.tokens[9], "neurologic");
        assert_eq!(out.sentence.tokens[10], "symptom");
        assert_eq!(token_labels(&out), token_labels(&example()));
    }

    #[test]
    fn multiword_synonym_shifts_later_mentions() {
        let x = a("a pain b rash c d", vec![m(&[1], "ADE"), m(&[3], "ADE")]);
        let lex = SynonymLexicon::parse("pain\tsharp ache\n", "lex").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let out = synonym_replace(&x, &lex, &StopWords::empty(), 1.0, &mut rng);
        assert_eq!(out.sentence.tokens.join(" "), "a sharp ache b rash c d");
        assert_eq!(out.mentions, vec![m(&[1, 2], "ADE"), m(&[4], "ADE")]);
        assert_eq!(
            token_labels(&out),
            vec!["O", "B-ADE", "I-ADE", "O", "B-ADE", "O", "O"]
        );
    }

    #[test]
    fn mention_replacement_splices() {
        let donor = a("neuropathic pain syndrome", vec![m(&[0, 1, 2], "Problem")]);
        let pool = MentionPool::build(&[donor]);
        let x = a("She had headache today", vec![m(&[2], "Problem")]);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let out = mention_replace(&x, &pool, 1.0, false, &mut rng);
        assert_eq!(
            out.sentence.tokens.join(" "),
            "She had neuropathic pain syndrome today"
        );
        assert_eq!(out.mentions, vec![m(&[2, 3, 4], "Problem")]);
    }

    #[test]
    fn mention_replacement_skips_discontinuous_by_default() {
        let pool = MentionPool::build(&[a("rash", vec![m(&[0], "ADE")])]);
        let x = a("stomach is upset", vec![m(&[0, 2], "ADE")]);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(mention_replace(&x, &pool, 1.0, false, &mut rng), x);
        let out = mention_replace(&x, &pool, 1.0, true, &mut rng);
        assert_eq!(out.sentence.tokens, vec!["rash"]);
        assert_eq!(out.mentions, vec![m(&[0], "ADE")]);
    }

    #[test]
    fn sis_keeps_labels_and_segments() {
        let x = example();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let out = shuffle_within_segments(&x, 1.0, &mut rng).unwrap();
        assert_eq!(token_labels(&out), token_labels(&x));
        let mut a_sorted = out.sentence.tokens[7..11].to_vec();
        a_sorted.sort();
        let mut b_sorted = x.sentence.tokens[7..11].to_vec();
        b_sorted.sort();
        assert_eq!(a_sorted, b_sorted);
        let bad = a("a b c", vec![m(&[0, 2], "ADE")]);
        assert!(matches!(
            shuffle_within_segments(&bad, 1.0, &mut rng),
            Err(Error::SchemaLimitation(_))
        ));
    }

    #[test]
    fn single_token_segments_never_change() {
        let x = a("a b c", vec![m(&[1], "X")]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(shuffle_within_segments(&x, 1.0, &mut rng).unwrap(), x);
    }

    #[test]
    fn lwtr_draws_from_same_label() {
        let train = vec![
            a("x headache y", vec![m(&[1], "ADE")]),
            a("x nausea y", vec![m(&[1], "ADE")]),
        ];
        let dist = LabelwiseDistribution::build(&train);
        assert_eq!(dist.count("B-ADE", "nausea"), 1);
        assert_eq!(dist.count("O", "x"), 2);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let out = lwtr(&train[0], &dist, &StopWords::empty(), 1.0, &mut rng);
            assert!(["headache", "nausea"].contains(&out.sentence.tokens[1].as_str()));
            assert!(["x", "y"].contains(&out.sentence.tokens[0].as_str()));
        }
    }
}
