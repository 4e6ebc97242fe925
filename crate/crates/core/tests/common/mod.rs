#![allow(dead_code)]

use std::path::Path;
use std::process::{Command, Output};

use discner::corpus::{AnnotatedSentence, Mention, Sentence};
use rand::seq::SliceRandom;
use rand::Rng;

pub const WORDS: [&str; 12] = [
    "pain", "severe", "the", "knee", "rash", "and", "nausea", "after", "aspirin", "muscle", "of",
    "mild",
];
pub const CATEGORIES: [&str; 2] = ["ADE", "Drug"];

pub fn random_sentence<R: Rng>(rng: &mut R, index: usize, max_len: usize) -> Sentence {
    let n = rng.gen_range(1..=max_len);
    let tokens: Vec<&str> = (0..n).map(|_| *WORDS.choose(rng).unwrap()).collect();
    Sentence::new(tokens, "rand", index).unwrap()
}

/// Continuous, non-overlapping mentions.
pub fn random_flat<R: Rng>(rng: &mut R, index: usize, max_len: usize) -> AnnotatedSentence {
    let sentence = random_sentence(rng, index, max_len);
    let mut mentions = Vec::new();
    let mut p = 0;
    while p < sentence.len() {
        if rng.gen_bool(0.35) {
            let end = rng.gen_range(p..sentence.len().min(p + 3));
            let category = *CATEGORIES.choose(rng).unwrap();
            mentions.push(Mention::new((p..=end).collect(), category).unwrap());
            p = end + 2;
        } else {
            p += 1;
        }
    }
    AnnotatedSentence::new(sentence, mentions).unwrap()
}

pub fn random_mention<R: Rng>(rng: &mut R, n: usize) -> Mention {
    loop {
        let positions: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.3)).collect();
        if !positions.is_empty() {
            return Mention::new(positions, *CATEGORIES.choose(rng).unwrap()).unwrap();
        }
    }
}

/// Arbitrary position sets: discontinuous and overlapping mentions allowed.
pub fn random_annotated<R: Rng>(rng: &mut R, index: usize, max_len: usize) -> AnnotatedSentence {
    let sentence = random_sentence(rng, index, max_len);
    let mut mentions: Vec<Mention> = Vec::new();
    for _ in 0..rng.gen_range(0..4) {
        let m = random_mention(rng, sentence.len());
        if !mentions.contains(&m) {
            mentions.push(m);
        }
    }
    AnnotatedSentence::new(sentence, mentions).unwrap()
}

pub fn run_cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_discner"))
        .args(args)
        .env_clear()
        .output()
        .expect("binary runs")
}

pub fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

pub fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}
