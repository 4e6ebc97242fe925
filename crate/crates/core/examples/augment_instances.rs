//! Applies each augmentation method to a small training set and prints the
//! generated sentences with their mentions.

use discner::augment::{AugmentConfig, Augmenter, Method, StopWords, SynonymLexicon};
use discner::corpus::{AnnotatedSentence, Mention, Sentence};

fn main() -> discner::Result<()> {
    let corpus = vec![
        AnnotatedSentence::new(
            Sentence::from_text("i had a severe headache after taking aspirin", "demo", 0)?,
            vec![
                Mention::new(vec![3, 4], "ADE")?,
                Mention::new(vec![7], "Drug")?,
            ],
        )?,
        AnnotatedSentence::new(
            Sentence::from_text("stomach cramps and mild nausea from lipitor", "demo", 1)?,
            vec![
                Mention::new(vec![0, 1], "ADE")?,
                Mention::new(vec![3, 4], "ADE")?,
                Mention::new(vec![6], "Drug")?,
            ],
        )?,
    ];
    let lexicon = SynonymLexicon::parse(
        "headache\tcephalalgia|head pain\nsevere\tintense\nnausea\tqueasiness\n",
        "inline",
    )?;

    for method in Method::SINGLE {
        let config = AugmentConfig {
            method,
            p: 0.5,
            per_instance: 1,
            seed: 3,
            mr_discontinuous: false,
        };
        let augmenter =
            Augmenter::new(config, &corpus, StopWords::default(), Some(lexicon.clone()))?;
        println!("== {method}");
        for a in &augmenter.augment_corpus(&corpus)?[corpus.len()..] {
            let ms: Vec<String> = a
                .mentions
                .iter()
                .map(|m| format!("{}({})", m.text(&a.sentence), m.category()))
                .collect();
            println!("{} | {}", a.sentence.tokens.join(" "), ms.join(", "));
        }
    }
    Ok(())
}
