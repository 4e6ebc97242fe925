use super::{Schema, TagSequence};
use crate::corpus::{AnnotatedSentence, Mention, Sentence};
use crate::error::{Error, Result};

/// BIO tags for the continuous, non-overlapping part of a sentence.
///
/// Discontinuous mentions are dropped. Among overlapping continuous mentions
/// the longest is kept, then the leftmost. Any drop sets `lossy`.
pub fn encode_bio(annotated: &AnnotatedSentence) -> TagSequence {
    let n = annotated.sentence.len();
    let mut tags = vec!["O".to_string(); n];
    let mut candidates: Vec<&Mention> = annotated
        .mentions
        .iter()
        .filter(|m| m.is_continuous())
        .collect();
    let mut lossy = candidates.len() < annotated.mentions.len();
    candidates.sort_by_key(|m| {
        (
            std::cmp::Reverse(m.len()),
            m.first(),
            m.category().to_string(),
        )
    });
    let mut taken = vec![false; n];
    for m in candidates {
        if m.positions().iter().any(|&p| taken[p]) {
            lossy = true;
            continue;
        }
        for (k, &p) in m.positions().iter().enumerate() {
            taken[p] = true;
            let prefix = if k == 0 { "B" } else { "I" };
            tags[p] = format!("{prefix}-{}", m.category());
        }
    }
    TagSequence {
        schema: Schema::Bio,
        tags,
        lossy,
        category: None,
    }
}

enum BioTag<'a> {
    O,
    B(&'a str),
    I(&'a str),
}

fn parse_tag(tag: &str) -> Result<BioTag<'_>> {
    if tag == "O" {
        return Ok(BioTag::O);
    }
    let parsed = match tag.split_once('-') {
        Some(("B", c)) if !c.is_empty() => BioTag::B(c),
        Some(("I", c)) if !c.is_empty() => BioTag::I(c),
        _ => return Err(Error::TagParse(format!("unknown BIO tag `{tag}`"))),
    };
    Ok(parsed)
}

/// Mentions encoded by BIO tags, plus the positions whose ill-formed `I-X`
/// was repaired to `B-X`.
pub fn bio_mentions<S: AsRef<str>>(tags: &[S]) -> Result<(Vec<Mention>, Vec<usize>)> {
    let mut mentions = Vec::new();
    let mut repaired = Vec::new();
    let mut open: Option<(Vec<usize>, &str)> = None;
    for (p, tag) in tags.iter().enumerate() {
        let tag = parse_tag(tag.as_ref())?;
        let continues = matches!((&tag, &open), (BioTag::I(c), Some((_, o))) if c == o);
        if continues {
            open.as_mut().unwrap().0.push(p);
            continue;
        }
        if let Some((positions, c)) = open.take() {
            mentions.push(Mention::new(positions, c)?);
        }
        match tag {
            BioTag::O => {}
            BioTag::B(c) => open = Some((vec![p], c)),
            BioTag::I(c) => {
                repaired.push(p);
                open = Some((vec![p], c));
            }
        }
    }
    if let Some((positions, c)) = open {
        mentions.push(Mention::new(positions, c)?);
    }
    Ok((mentions, repaired))
}

/// Maximal `B-X (I-X)*` runs become mentions; a leading or mismatched
/// `I-X` is read as `B-X`.
pub fn decode_bio(sentence: &Sentence, tags: &TagSequence) -> Result<AnnotatedSentence> {
    if tags.schema != Schema::Bio {
        return Err(Error::TagParse("expected BIO tags".into()));
    }
    if tags.tags.len() != sentence.len() {
        return Err(Error::TagParse(format!(
            "{} tags for {} tokens",
            tags.tags.len(),
            sentence.len()
        )));
    }
    let (mentions, _) = bio_mentions(&tags.tags)?;
    AnnotatedSentence::new(sentence.clone(), mentions)
}
