use std::collections::BTreeMap;
use std::path::Path;

use super::{file_stem, read_utf8, write_file, Warning};
use crate::corpus::{format_runs, AnnotatedSentence, Mention, Sentence, SentenceKey};
use crate::error::{Error, Result};

/// Parses a runs field such as `0-1,3` into sorted positions. Returns
/// whether the field was already in canonical form.
pub fn parse_runs(field: &str) -> std::result::Result<(Vec<usize>, bool), String> {
    let mut positions = Vec::new();
    for part in field.split(',') {
        let part = part.trim();
        let (start, end) = match part.split_once('-') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (part, part),
        };
        let start: usize = start.parse().map_err(|_| format!("bad run `{part}`"))?;
        let end: usize = end.parse().map_err(|_| format!("bad run `{part}`"))?;
        if end < start {
            return Err(format!("run `{part}` ends before it starts"));
        }
        positions.extend(start..=end);
    }
    let mut sorted = positions.clone();
    sorted.sort_unstable();
    sorted.dedup();
    let canonical = format_runs(&sorted) == field;
    Ok((sorted, canonical))
}

/// Parses a standoff pair.
///
/// Text lines are `doc_id<TAB>index<TAB>tokens` with space-separated
/// tokens; a line without tabs is a sentence of document `default_doc`
/// indexed by line order. Annotation lines are
/// `doc_id<TAB>index<TAB>runs<TAB>category`.
pub fn parse_standoff(
    text: &str,
    text_origin: &str,
    ann: &str,
    ann_origin: &str,
    default_doc: &str,
) -> Result<(Vec<AnnotatedSentence>, Vec<Warning>)> {
    let mut corpus: Vec<AnnotatedSentence> = Vec::new();
    let mut by_key: BTreeMap<SentenceKey, usize> = BTreeMap::new();
    let mut warnings = Vec::new();
    let mut plain_index = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let format_error = |message: String| Error::Format {
            path: text_origin.to_string(),
            line: i + 1,
            message,
        };
        let sentence = match line.splitn(3, '\t').collect::<Vec<_>>().as_slice() {
            [doc, index, tokens] => {
                let index: usize = index
                    .parse()
                    .map_err(|_| format_error(format!("bad sentence index `{index}`")))?;
                Sentence::new(tokens.split(' ').filter(|t| !t.is_empty()), *doc, index)
                    .map_err(|e| format_error(e.to_string()))?
            }
            [_] => {
                plain_index += 1;
                Sentence::from_text(line, default_doc, plain_index - 1)
                    .map_err(|e| format_error(e.to_string()))?
            }
            _ => {
                return Err(format_error(
                    "expected `doc_id<TAB>index<TAB>tokens`".into(),
                ))
            }
        };
        if by_key.insert(sentence.key(), corpus.len()).is_some() {
            return Err(format_error(format!(
                "sentence {} appears twice",
                sentence.key()
            )));
        }
        corpus.push(AnnotatedSentence::unannotated(sentence));
    }

    for (i, raw) in ann.lines().enumerate() {
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let format_error = |message: String| Error::Format {
            path: ann_origin.to_string(),
            line: i + 1,
            message,
        };
        let cols: Vec<&str> = line.split('\t').collect();
        let [doc, index, runs, category] = cols.as_slice() else {
            return Err(format_error(format!(
                "expected `doc_id<TAB>index<TAB>runs<TAB>category`, found {} column(s)",
                cols.len()
            )));
        };
        let index: usize = index
            .parse()
            .map_err(|_| format_error(format!("bad sentence index `{index}`")))?;
        let key = SentenceKey {
            doc_id: doc.to_string(),
            index,
        };
        let Some(&slot) = by_key.get(&key) else {
            return Err(Error::DanglingAnnotation {
                doc_id: key.doc_id,
                index,
            });
        };
        let (positions, canonical) = parse_runs(runs).map_err(format_error)?;
        let mention =
            Mention::new(positions, *category).map_err(|e| format_error(e.to_string()))?;
        if !canonical {
            warnings.push(Warning {
                origin: ann_origin.to_string(),
                line: i + 1,
                message: format!(
                    "runs `{runs}` normalized to `{}`",
                    format_runs(mention.positions())
                ),
            });
        }
        let target = &mut corpus[slot];
        if mention.last() >= target.sentence.len() {
            return Err(format_error(format!(
                "mention {mention} exceeds sentence {} of {} tokens",
                key,
                target.sentence.len()
            )));
        }
        if target.mentions.contains(&mention) {
            warnings.push(Warning {
                origin: ann_origin.to_string(),
                line: i + 1,
                message: format!("duplicate mention {mention} dropped"),
            });
            continue;
        }
        target.mentions.push(mention);
    }
    Ok((corpus, warnings))
}

pub fn read_standoff(
    text_path: &Path,
    ann_path: &Path,
) -> Result<(Vec<AnnotatedSentence>, Vec<Warning>)> {
    let text = read_utf8(text_path)?;
    let ann = read_utf8(ann_path)?;
    parse_standoff(
        &text,
        &text_path.display().to_string(),
        &ann,
        &ann_path.display().to_string(),
        &file_stem(text_path),
    )
}

/// Text and annotation file contents for a corpus.
pub fn write_standoff(corpus: &[AnnotatedSentence]) -> (String, String) {
    let mut text = String::new();
    let mut ann = String::new();
    for a in corpus {
        let s = &a.sentence;
        text.push_str(&format!(
            "{}\t{}\t{}\n",
            s.doc_id,
            s.index,
            s.tokens.join(" ")
        ));
        for m in &a.mentions {
            ann.push_str(&format!(
                "{}\t{}\t{}\t{}\n",
                s.doc_id,
                s.index,
                format_runs(m.positions()),
                m.category()
            ));
        }
    }
    (text, ann)
}

pub fn write_standoff_files(
    corpus: &[AnnotatedSentence],
    text_path: &Path,
    ann_path: &Path,
) -> Result<()> {
    let (text, ann) = write_standoff(corpus);
    write_file(text_path, &text)?;
    write_file(ann_path, &ann)
}
