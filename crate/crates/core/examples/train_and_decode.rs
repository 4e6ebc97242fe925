//! Trains the perceptron on generated sentences and scores it on a held-out
//! sample from the same generator.

use discner::corpus::AnnotatedSentence;
use discner::eval::evaluate;
use discner::io::{generate_fixtures, FixtureSpec};
use discner::scorer::train_with_log;
use discner::transition::decode;

fn main() -> discner::Result<()> {
    let spec = FixtureSpec::reachable();
    let train = generate_fixtures(&spec, 200, 1)?;
    let test = generate_fixtures(&spec, 100, 2)?;

    let (model, log) = train_with_log(&train, 20, 42)?;
    println!("updates per epoch: {:?}", log.updates_per_epoch);

    let predicted: Vec<AnnotatedSentence> = test
        .iter()
        .map(|a| AnnotatedSentence::new(a.sentence.clone(), decode(&a.sentence, &model).0))
        .collect::<discner::Result<_>>()?;
    print!("{}", evaluate(&test, &predicted)?);

    let first = &predicted[0];
    println!("{}", first.sentence.tokens.join(" "));
    for m in &first.mentions {
        println!("  {m} {}", m.text(&first.sentence));
    }
    Ok(())
}
