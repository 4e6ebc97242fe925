use std::collections::BTreeSet;
use std::fmt;

use super::{Schema, TagSequence};
use crate::corpus::{format_runs, AnnotatedSentence, Mention, Sentence};
use crate::error::{Error, Result};
use crate::transition::DEFAULT_CATEGORY;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Part {
    Plain,
    Body,
    Head,
}

impl Part {
    fn tag(self, begin: bool) -> &'static str {
        match (self, begin) {
            (Part::Plain, true) => "B",
            (Part::Plain, false) => "I",
            (Part::Body, true) => "BD",
            (Part::Body, false) => "ID",
            (Part::Head, true) => "BH",
            (Part::Head, false) => "IH",
        }
    }
}

/// BIO-extension tags: positions shared by several mentions are head
/// (`BH`/`IH`), the rest of a discontinuous mention is body (`BD`/`ID`),
/// the rest of a continuous mention is plain `B`/`I`.
///
/// Tags carry only the position indicator; the one category present is
/// stored on the sequence. Several categories in one sentence are rejected.
pub fn encode_bioext(annotated: &AnnotatedSentence) -> Result<TagSequence> {
    let categories: BTreeSet<&str> = annotated.mentions.iter().map(|m| m.category()).collect();
    if categories.len() > 1 {
        return Err(Error::SchemaLimitation(format!(
            "{} mixes categories {}",
            annotated.sentence.key(),
            categories.into_iter().collect::<Vec<_>>().join(", ")
        )));
    }
    let n = annotated.sentence.len();
    let owners: Vec<Vec<usize>> = (0..n)
        .map(|p| {
            annotated
                .mentions
                .iter()
                .enumerate()
                .filter(|(_, m)| m.contains(p))
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    let mut tags = Vec::with_capacity(n);
    let mut previous: Option<(Part, &[usize])> = None;
    for own in &owners {
        let part = match own.as_slice() {
            [] => None,
            [i] if annotated.mentions[*i].is_discontinuous() => Some(Part::Body),
            [_] => Some(Part::Plain),
            _ => Some(Part::Head),
        };
        match part {
            None => {
                tags.push("O".to_string());
                previous = None;
            }
            Some(part) => {
                let begin = previous != Some((part, own.as_slice()));
                tags.push(part.tag(begin).to_string());
                previous = Some((part, own.as_slice()));
            }
        }
    }
    let mut seq = TagSequence {
        schema: Schema::BioExt,
        tags,
        lossy: false,
        category: categories.into_iter().next().map(str::to_string),
    };
    let (decoded, _) = decode_bioext(&annotated.sentence, &seq)?;
    seq.lossy = decoded.sorted_mentions() != annotated.sorted_mentions();
    Ok(seq)
}

/// Another mention set the same tags could stand for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlternativeReading {
    pub reason: String,
    pub mentions: Vec<Mention>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AmbiguityReport {
    pub readings: Vec<AlternativeReading>,
}

impl AmbiguityReport {
    pub fn is_ambiguous(&self) -> bool {
        !self.readings.is_empty()
    }
}

impl fmt::Display for AmbiguityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.readings {
            let ms: Vec<String> = r
                .mentions
                .iter()
                .map(|m| format_runs(m.positions()))
                .collect();
            writeln!(
                f,
                "{} mentions [{}]: {}",
                r.mentions.len(),
                ms.join(" | "),
                r.reason
            )?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
struct Run {
    part: Part,
    positions: Vec<usize>,
}

/// Part and begin flag (`None` for `O`), and the category suffix.
type ParsedTag<'a> = (Option<(Part, bool)>, Option<&'a str>);

fn parse(tag: &str) -> Result<ParsedTag<'_>> {
    let (indicator, category) = match tag.split_once('-') {
        Some((i, c)) if !c.is_empty() => (i, Some(c)),
        Some(_) => {
            return Err(Error::TagParse(format!(
                "unknown BIO-extension tag `{tag}`"
            )))
        }
        None => (tag, None),
    };
    let parsed = match indicator {
        "O" if category.is_none() => None,
        "B" => Some((Part::Plain, true)),
        "I" => Some((Part::Plain, false)),
        "BD" => Some((Part::Body, true)),
        "ID" => Some((Part::Body, false)),
        "BH" => Some((Part::Head, true)),
        "IH" => Some((Part::Head, false)),
        _ => {
            return Err(Error::TagParse(format!(
                "unknown BIO-extension tag `{tag}`"
            )))
        }
    };
    Ok((parsed, category))
}

fn merged(a: &[usize], b: &[usize], category: &str) -> Mention {
    Mention::from_unsorted([a, b].concat(), category).expect("runs are disjoint")
}

/// Decodes BIO-extension tags with a fixed attachment heuristic and
/// reports the other readings the tags allow.
///
/// A plain run next to a head joins it. A body attaches to the nearest head
/// on its right when no other body comes first, else to the nearest head on
/// its left, else to any head on its right. Each head forms one mention with
/// every body attached to it; a head with nothing attached is a mention on
/// its own. Without any head, bodies are grouped in consecutive pairs.
pub fn decode_bioext(
    sentence: &Sentence,
    tags: &TagSequence,
) -> Result<(AnnotatedSentence, AmbiguityReport)> {
    if tags.schema != Schema::BioExt {
        return Err(Error::TagParse("expected BIO-extension tags".into()));
    }
    if tags.tags.len() != sentence.len() {
        return Err(Error::TagParse(format!(
            "{} tags for {} tokens",
            tags.tags.len(),
            sentence.len()
        )));
    }
    let mut category = tags.category.clone();
    let mut runs: Vec<Run> = Vec::new();
    let mut open = false;
    for (p, tag) in tags.tags.iter().enumerate() {
        let (parsed, suffix) = parse(tag)?;
        if category.is_none() {
            category = suffix.map(str::to_string);
        }
        let Some((part, begin)) = parsed else {
            open = false;
            continue;
        };
        let continues = !begin && open && runs.last().is_some_and(|r| r.part == part);
        if continues {
            runs.last_mut().unwrap().positions.push(p);
        } else {
            runs.push(Run {
                part,
                positions: vec![p],
            });
        }
        open = true;
    }
    let category = category.unwrap_or_else(|| DEFAULT_CATEGORY.to_string());

    let heads: Vec<usize> = (0..runs.len())
        .filter(|&i| runs[i].part == Part::Head)
        .collect();
    let mut attached: Vec<Vec<usize>> = vec![Vec::new(); runs.len()];
    let mut mentions: Vec<Mention> = Vec::new();
    let mut readings: Vec<AlternativeReading> = Vec::new();
    let mut alternatives: Vec<(String, usize, usize)> = Vec::new();
    let mut headless: Vec<usize> = Vec::new();

    for (k, run) in runs.iter().enumerate() {
        match run.part {
            Part::Head => {}
            Part::Plain => {
                let adjacent = heads.iter().copied().find(|&h| {
                    let hp = &runs[h].positions;
                    hp[0] == run.positions[run.positions.len() - 1] + 1
                        || hp[hp.len() - 1] + 1 == run.positions[0]
                });
                match adjacent {
                    Some(h) => attached[h].push(k),
                    None => mentions.push(Mention::new(run.positions.clone(), category.as_str())?),
                }
            }
            Part::Body => {
                let right_any = heads.iter().copied().find(|&h| h > k);
                let right_near =
                    right_any.filter(|&h| !runs[k + 1..h].iter().any(|r| r.part == Part::Body));
                let left = heads.iter().copied().rev().find(|&h| h < k);
                let choice = right_near.or(left).or(right_any);
                match choice {
                    Some(h) => {
                        attached[h].push(k);
                        for other in [right_any, left].into_iter().flatten() {
                            if other != h {
                                alternatives.push((
                                    "body attached to another head".into(),
                                    k,
                                    other,
                                ));
                                break;
                            }
                        }
                    }
                    None => headless.push(k),
                }
            }
        }
    }

    for &h in &heads {
        let head = &runs[h].positions;
        if attached[h].is_empty() {
            mentions.push(Mention::new(head.clone(), category.as_str())?);
        }
        for &k in &attached[h] {
            mentions.push(merged(&runs[k].positions, head, &category));
        }
    }
    for group in headless.chunks(2) {
        let mut positions: Vec<usize> = group
            .iter()
            .flat_map(|&k| runs[k].positions.clone())
            .collect();
        // An odd body out joins the previous pair.
        if group.len() == 1 && headless.len() > 1 {
            let last: &mut Mention = mentions.last_mut().expect("previous pair");
            positions.extend_from_slice(last.positions());
            *last = Mention::from_unsorted(positions, category.as_str())?;
            continue;
        }
        positions.sort_unstable();
        mentions.push(Mention::new(positions, category.as_str())?);
    }
    mentions.sort();
    mentions.dedup();

    let base = mentions.clone();
    let with = |extra: Mention, drop: Option<&Mention>| -> Vec<Mention> {
        let mut ms: Vec<Mention> = base.iter().filter(|m| Some(*m) != drop).cloned().collect();
        ms.push(extra);
        ms.sort();
        ms.dedup();
        ms
    };
    for &h in &heads {
        if !attached[h].is_empty() {
            readings.push(AlternativeReading {
                reason: "head also read as a mention of its own".into(),
                mentions: with(
                    Mention::new(runs[h].positions.clone(), category.as_str())?,
                    None,
                ),
            });
        }
    }
    for (reason, k, other) in alternatives {
        let current_head = heads
            .iter()
            .copied()
            .find(|&h| attached[h].contains(&k))
            .expect("attached body");
        let current = merged(&runs[k].positions, &runs[current_head].positions, &category);
        let alternative = merged(&runs[k].positions, &runs[other].positions, &category);
        readings.push(AlternativeReading {
            reason,
            mentions: with(alternative, Some(&current)),
        });
    }
    if headless.len() > 2 {
        let all: Vec<usize> = headless
            .iter()
            .flat_map(|&k| runs[k].positions.clone())
            .collect();
        readings.push(AlternativeReading {
            reason: "bodies grouped differently".into(),
            mentions: vec![Mention::from_unsorted(all, category.as_str())?],
        });
    }

    let annotated = AnnotatedSentence::new(sentence.clone(), mentions)?;
    Ok((annotated, AmbiguityReport { readings }))
}
