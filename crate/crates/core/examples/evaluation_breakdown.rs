//! Strict-match scores on a small gold/prediction pair, the discontinuous
//! subsets, and recall by interval length and overlap category.

use discner::corpus::{AnnotatedSentence, Mention, Sentence};
use discner::eval::{
    breakdown, evaluate, restrict_to, subset_disc_only, subset_disc_sentences, Axis,
};

fn sentence(i: usize, text: &str, mentions: &[&[usize]]) -> discner::Result<AnnotatedSentence> {
    AnnotatedSentence::new(
        Sentence::from_text(text, "demo", i)?,
        mentions
            .iter()
            .map(|p| Mention::new(p.to_vec(), "ADE"))
            .collect::<discner::Result<_>>()?,
    )
}

fn main() -> discner::Result<()> {
    let gold = vec![
        sentence(0, "muscle pain and fatigue", &[&[0, 1], &[0, 3]])?,
        sentence(1, "severe headache", &[&[0, 1]])?,
        sentence(2, "hip and knee joint swelling", &[&[0, 4], &[2, 4]])?,
    ];
    let pred = vec![
        sentence(0, "muscle pain and fatigue", &[&[0, 1]])?,
        sentence(1, "severe headache", &[&[1]])?,
        sentence(2, "hip and knee joint swelling", &[&[0, 4], &[2, 4]])?,
    ];

    print!("{}", evaluate(&gold, &pred)?);
    let gold_sub = subset_disc_sentences(&gold);
    for line in evaluate(&gold_sub, &restrict_to(&gold_sub, &pred))?.key_values("disc_sentences.") {
        println!("{line}");
    }
    for line in subset_disc_only(&gold, &pred)?.key_values("disc_mentions.") {
        println!("{line}");
    }
    for axis in [Axis::IntervalLength, Axis::OverlapCategory] {
        for line in breakdown(&gold, &pred, axis)?.key_values() {
            println!("{line}");
        }
    }
    Ok(())
}
