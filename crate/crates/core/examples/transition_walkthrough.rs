//! Steps through the oracle action sequence for one sentence and prints the
//! parser configuration after every action.

use discner::corpus::{AnnotatedSentence, Mention, Sentence};
use discner::transition::{oracle, ParserState};

fn main() -> discner::Result<()> {
    let sentence = Sentence::from_text("joint and muscle pain after taking lipitor", "demo", 0)?;
    let gold = vec![
        Mention::new(vec![0, 3], "ADE")?,
        Mention::new(vec![2, 3], "ADE")?,
        Mention::new(vec![6], "Drug")?,
    ];
    let annotated = AnnotatedSentence::new(sentence, gold)?;
    let result = oracle(&annotated);

    let mut state = ParserState::new(annotated.sentence.len());
    println!("{:<14} {:<28} buffer", "action", "stack");
    for action in &result.actions {
        state = state.apply(action)?;
        let stack: Vec<String> = state.stack.iter().map(|s| s.to_string()).collect();
        let buffer = annotated.sentence.tokens[state.buffer_index..].join(" ");
        println!(
            "{:<14} {:<28} {}",
            action.to_string(),
            stack.join(" "),
            buffer
        );
    }
    for m in &state.output {
        println!("mention {m} = {}", m.text(&annotated.sentence));
    }
    Ok(())
}
