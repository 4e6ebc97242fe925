//! Writes generated fixtures as standoff files and reads them back.
//!
//! `cargo run --example standoff_roundtrip -- OUT_DIR [N] [SEED]` leaves
//! `fixtures.txt` and `fixtures.ann` in `OUT_DIR` for use with the CLI.

use std::path::PathBuf;

use discner::io::{generate_fixtures, read_standoff, write_standoff_files, FixtureSpec};

fn main() -> discner::Result<()> {
    let mut args = std::env::args().skip(1);
    let dir = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(std::env::temp_dir);
    let n = args.next().and_then(|s| s.parse().ok()).unwrap_or(50);
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(0);

    let corpus = generate_fixtures(&FixtureSpec::all(), n, seed)?;
    let text = dir.join("fixtures.txt");
    let ann = dir.join("fixtures.ann");
    write_standoff_files(&corpus, &text, &ann)?;
    let (back, warnings) = read_standoff(&text, &ann)?;
    assert!(warnings.is_empty());
    assert_eq!(back, corpus);
    println!(
        "{} sentences written to {} and {}",
        n,
        text.display(),
        ann.display()
    );
    Ok(())
}
