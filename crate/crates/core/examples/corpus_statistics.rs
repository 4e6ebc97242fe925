//! Descriptive statistics of a generated corpus mixing all mention shapes.

use discner::corpus::corpus_statistics;
use discner::io::{generate_fixtures, FixtureSpec};

fn main() -> discner::Result<()> {
    let corpus = generate_fixtures(&FixtureSpec::all(), 300, 11)?;
    print!("{}", corpus_statistics(&corpus)?);
    Ok(())
}
