//! BIO and BIO-extension encodings of a sentence with discontinuous
//! mentions, the readings the extension tags leave open, and flat merging.

use discner::corpus::{AnnotatedSentence, Mention, Sentence};
use discner::schemas::{decode_bioext, encode_bio, encode_bioext, flat_merge};

fn main() -> discner::Result<()> {
    let sentence = Sentence::from_text("intense pelvic and back pain", "demo", 0)?;
    let annotated = AnnotatedSentence::new(
        sentence,
        vec![
            Mention::new(vec![0, 1, 4], "ADE")?,
            Mention::new(vec![3, 4], "ADE")?,
        ],
    )?;

    let bio = encode_bio(&annotated);
    let ext = encode_bioext(&annotated)?;
    println!("{:<10} {:<6} bioext", "token", "bio");
    for (i, token) in annotated.sentence.tokens.iter().enumerate() {
        println!("{token:<10} {:<6} {}", bio.tags[i], ext.tags[i]);
    }
    println!("bio lossy: {}", bio.lossy);

    let (decoded, report) = decode_bioext(&annotated.sentence, &ext)?;
    for m in &decoded.mentions {
        println!("decoded {m} {}", m.text(&decoded.sentence));
    }
    print!("{report}");

    for m in &flat_merge(&annotated).mentions {
        println!("flat {m} {}", m.text(&annotated.sentence));
    }
    Ok(())
}
