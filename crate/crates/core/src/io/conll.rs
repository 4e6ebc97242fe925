use std::path::Path;

use super::{read_utf8, Warning};
use crate::corpus::{AnnotatedSentence, Sentence};
use crate::error::{Error, Result};
use crate::schemas::{bio_mentions, decode_bioext, encode_bio, encode_bioext, Schema, TagSequence};

struct Block {
    tokens: Vec<String>,
    tags: Vec<String>,
    first_line: usize,
}

/// Parses `token<TAB>tag` lines with blank lines between sentences.
///
/// `-DOCSTART-` lines open a new document; sentences are keyed `docN`
/// with their index inside the document. Ill-formed `I-X` tags are
/// repaired and reported as warnings.
pub fn parse_conll(
    text: &str,
    origin: &str,
    schema: Schema,
) -> Result<(Vec<AnnotatedSentence>, Vec<Warning>)> {
    let mut corpus = Vec::new();
    let mut warnings = Vec::new();
    let mut doc = 0usize;
    let mut index = 0usize;
    let mut block: Option<Block> = None;

    let flush = |block: Option<Block>,
                 doc: usize,
                 index: &mut usize,
                 corpus: &mut Vec<AnnotatedSentence>,
                 warnings: &mut Vec<Warning>|
     -> Result<()> {
        let Some(b) = block else { return Ok(()) };
        let sentence = Sentence::new(b.tokens, format!("doc{doc}"), *index)?;
        *index += 1;
        let annotated = match schema {
            Schema::Bio => {
                let (mentions, repaired) = bio_mentions(&b.tags).map_err(|e| Error::Format {
                    path: origin.to_string(),
                    line: b.first_line,
                    message: e.to_string(),
                })?;
                for p in repaired {
                    warnings.push(Warning {
                        origin: origin.to_string(),
                        line: b.first_line + p,
                        message: format!(
                            "`{}` does not continue a mention; read as `B-{}`",
                            b.tags[p],
                            b.tags[p].trim_start_matches("I-")
                        ),
                    });
                }
                AnnotatedSentence::new(sentence, mentions)?
            }
            Schema::BioExt => {
                let seq = TagSequence {
                    schema: Schema::BioExt,
                    tags: b.tags,
                    lossy: false,
                    category: None,
                };
                let (annotated, report) =
                    decode_bioext(&sentence, &seq).map_err(|e| Error::Format {
                        path: origin.to_string(),
                        line: b.first_line,
                        message: e.to_string(),
                    })?;
                if report.is_ambiguous() {
                    warnings.push(Warning {
                        origin: origin.to_string(),
                        line: b.first_line,
                        message: format!(
                            "ambiguous tags, {} alternative reading(s)",
                            report.readings.len()
                        ),
                    });
                }
                annotated
            }
        };
        corpus.push(annotated);
        Ok(())
    };

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() {
            flush(block.take(), doc, &mut index, &mut corpus, &mut warnings)?;
            continue;
        }
        if line.starts_with("-DOCSTART-") {
            flush(block.take(), doc, &mut index, &mut corpus, &mut warnings)?;
            if index > 0 {
                doc += 1;
                index = 0;
            }
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 2 || cols[0].is_empty() || cols[1].is_empty() {
            return Err(Error::Format {
                path: origin.to_string(),
                line: line_no,
                message: format!("expected `token<TAB>tag`, found {} column(s)", cols.len()),
            });
        }
        let b = block.get_or_insert_with(|| Block {
            tokens: Vec::new(),
            tags: Vec::new(),
            first_line: line_no,
        });
        b.tokens.push(cols[0].to_string());
        b.tags.push(cols[1].to_string());
    }
    flush(block.take(), doc, &mut index, &mut corpus, &mut warnings)?;
    Ok((corpus, warnings))
}

pub fn read_conll(path: &Path, schema: Schema) -> Result<(Vec<AnnotatedSentence>, Vec<Warning>)> {
    let text = read_utf8(path)?;
    parse_conll(&text, &path.display().to_string(), schema)
}

/// Writes two-column tags. BIO drops what it cannot represent;
/// BIO-extension tags carry the category as a suffix. Sentences whose
/// encoding loses mentions are reported.
pub fn write_conll(corpus: &[AnnotatedSentence], schema: Schema) -> Result<(String, Vec<Warning>)> {
    let mut out = String::new();
    let mut warnings = Vec::new();
    for (i, a) in corpus.iter().enumerate() {
        let seq = match schema {
            Schema::Bio => encode_bio(a),
            Schema::BioExt => {
                let mut seq = encode_bioext(a)?;
                if let Some(c) = &seq.category {
                    for t in seq.tags.iter_mut().filter(|t| *t != "O") {
                        *t = format!("{t}-{c}");
                    }
                }
                seq
            }
        };
        if seq.lossy {
            warnings.push(Warning {
                origin: a.sentence.key().to_string(),
                line: i + 1,
                message: format!("{schema} tags cannot represent every mention of this sentence"),
            });
        }
        for (token, tag) in a.sentence.tokens.iter().zip(&seq.tags) {
            out.push_str(token);
            out.push('\t');
            out.push_str(tag);
            out.push('\n');
        }
        out.push('\n');
    }
    Ok((out, warnings))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Mention;

    #[test]
    fn two_sentences() {
        let text = "I\tO\thave\n";
        assert!(matches!(
            parse_conll(text, "f", Schema::Bio),
            Err(Error::Format { line: 1, .. })
        ));
        let text = "-DOCSTART-\tO\n\nsevere\tB-ADE\nrash\tI-ADE\n\naspirin\tB-Drug\n";
        let (c, w) = parse_conll(text, "f", Schema::Bio).unwrap();
        assert!(w.is_empty());
        assert_eq!(c.len(), 2);
        assert_eq!(
            c[0].mentions,
            vec![Mention::new(vec![0, 1], "ADE").unwrap()]
        );
        assert_eq!(c[1].sentence.key().to_string(), "doc0#1");
    }

    #[test]
    fn leading_inside_is_repaired_with_warning() {
        let text = "x\tO\nrash\tI-ADE\n";
        let (c, w) = parse_conll(text, "f", Schema::Bio).unwrap();
        assert_eq!(c[0].mentions, vec![Mention::new(vec![1], "ADE").unwrap()]);
        assert_eq!(w.len(), 1);
        assert_eq!(w[0].line, 2);
    }

    #[test]
    fn empty_file() {
        let (c, w) = parse_conll("", "f", Schema::Bio).unwrap();
        assert!(c.is_empty() && w.is_empty());
    }

    #[test]
    fn bad_tag_reports_line() {
        let text = "a\tO\n\nb\tQ-ADE\n";
        assert!(matches!(
            parse_conll(text, "f", Schema::Bio),
            Err(Error::Format { line: 3, .. })
        ));
    }

    #[test]
    fn bioext_round_trip() {
        let a = AnnotatedSentence::new(
            Sentence::from_text("intense pelvic and back pain", "doc0", 0).unwrap(),
            vec![
                Mention::new(vec![0, 1, 4], "ADE").unwrap(),
                Mention::new(vec![3, 4], "ADE").unwrap(),
            ],
        )
        .unwrap();
        let (text, warnings) = write_conll(std::slice::from_ref(&a), Schema::BioExt).unwrap();
        assert!(warnings.is_empty());
        assert!(text.contains("pain\tBH-ADE"));
        let (back, w) = parse_conll(&text, "f", Schema::BioExt).unwrap();
        assert_eq!(back[0].sorted_mentions(), a.sorted_mentions());
        assert_eq!(w.len(), 1);
    }
}
