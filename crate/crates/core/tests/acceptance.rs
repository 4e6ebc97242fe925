//! Acceptance checks, one printed line per criterion. Runs without the
//! libtest harness so the lines always reach the output.

mod common;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::time::{Duration, Instant};

use common::{path_str, random_annotated, random_flat, run_cli, stdout};
use discner::augment::{
    token_labels, AugmentConfig, Augmenter, Method, StopWords, SynonymLexicon, PER_INSTANCE_GRID,
    P_GRID,
};
use discner::corpus::{corpus_statistics, AnnotatedSentence, Mention, OverlapCategory, Sentence};
use discner::eval::{evaluate, subset_disc_only};
use discner::io::{generate_fixtures, write_standoff_files, FixtureSpec};
use discner::schemas::{decode_bio, decode_bioext, encode_bio, encode_bioext, flat_merge};
use discner::scorer::train;
use discner::similarity::{
    jsd, jsv, perplexity, spearman, train_kn3, tvc, ContentFilter, PplMode, TermDistribution,
    VocabProfile,
};
use discner::transition::{decode, oracle, reference_oracle, SequenceScorer, REFERENCE_MAX_LEN};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl Into<String>) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn sorted(mut ms: Vec<Mention>) -> Vec<Mention> {
    ms.sort();
    ms
}

const REACHABLE_CATEGORIES: [OverlapCategory; 5] = [
    OverlapCategory::ContinuousIsolated,
    OverlapCategory::ContinuousOverlap,
    OverlapCategory::NoOverlap,
    OverlapCategory::LeftOverlap,
    OverlapCategory::RightOverlap,
];

fn oracle_round_trip() -> Check {
    let start = Instant::now();
    let mut total = 0;
    for (k, category) in REACHABLE_CATEGORIES.into_iter().enumerate() {
        let corpus = generate_fixtures(&FixtureSpec::only(category), 500, 100 + k as u64)
            .map_err(|e| e.to_string())?;
        for a in &corpus {
            let result = oracle(a);
            let (decoded, _) = decode(&a.sentence, &SequenceScorer::new(result.actions));
            ensure(
                sorted(decoded) == a.sorted_mentions(),
                format!(
                    "{category}: round trip differs on `{}`",
                    a.sentence.tokens.join(" ")
                ),
            )?;
            total += 1;
        }
    }
    let elapsed = start.elapsed();
    ensure(
        elapsed < Duration::from_secs(10),
        format!("took {elapsed:?}"),
    )?;
    Ok(format!(
        "{total} sentences exact in {:.2}s",
        elapsed.as_secs_f64()
    ))
}

fn crossing_limit() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut multi = generate_fixtures(&FixtureSpec::only(OverlapCategory::MultiOverlap), 100, 7)
        .map_err(|e| e.to_string())?;
    let jmps = Sentence::from_text("joint and muscle pain / stiffness", "jmps", 0)
        .map_err(|e| e.to_string())?;
    let jmps_mentions = [[0, 3], [0, 5], [2, 3], [2, 5]]
        .iter()
        .map(|p| Mention::new(p.to_vec(), "ADE"))
        .collect::<discner::Result<_>>()
        .map_err(|e| e.to_string())?;
    multi.push(AnnotatedSentence::new(jmps, jmps_mentions).map_err(|e| e.to_string())?);
    for a in &multi {
        ensure(
            !oracle(a).unreachable.is_empty(),
            format!(
                "no unreachable mention in `{}`",
                a.sentence.tokens.join(" ")
            ),
        )?;
    }
    for category in REACHABLE_CATEGORIES {
        let corpus =
            generate_fixtures(&FixtureSpec::only(category), 200, 9).map_err(|e| e.to_string())?;
        let text = dir.path().join(format!("{category}.txt"));
        let ann = dir.path().join(format!("{category}.ann"));
        write_standoff_files(&corpus, &text, &ann).map_err(|e| e.to_string())?;
        let out = run_cli(&[
            "oracle-check",
            "-i",
            path_str(&text),
            "--ann",
            path_str(&ann),
        ]);
        ensure(out.status.success(), "oracle-check failed")?;
        ensure(
            stdout(&out).lines().any(|l| l == "unreachable=0"),
            format!("{category} reports unreachable mentions"),
        )?;
    }
    let text = dir.path().join("multi.txt");
    let ann = dir.path().join("multi.ann");
    write_standoff_files(&multi, &text, &ann).map_err(|e| e.to_string())?;
    let out = run_cli(&[
        "oracle-check",
        "-i",
        path_str(&text),
        "--ann",
        path_str(&ann),
        "--per-sentence",
    ]);
    ensure(out.status.success(), "oracle-check failed")?;
    let report = stdout(&out);
    let flagged = report
        .lines()
        .filter(|l| l.starts_with("sentence "))
        .count();
    ensure(
        flagged == multi.len(),
        format!("{flagged} of {} sentences flagged", multi.len()),
    )?;
    let unreachable = report
        .lines()
        .find_map(|l| l.strip_prefix("unreachable="))
        .unwrap_or("0");
    Ok(format!(
        "{} crossing sentences all flagged (unreachable={unreachable}); other categories 0",
        multi.len()
    ))
}

fn greedy_vs_reference() -> Check {
    let corpus = generate_fixtures(&FixtureSpec::all(), 600, 21).map_err(|e| e.to_string())?;
    let (mut greedy, mut reference, mut sentences) = (0, 0, 0);
    let mut discrepancies = Vec::new();
    for a in corpus
        .iter()
        .filter(|a| a.sentence.len() <= REFERENCE_MAX_LEN)
    {
        let g = oracle(a).reachable.len();
        let r = reference_oracle(a, REFERENCE_MAX_LEN)
            .map_err(|e| e.to_string())?
            .reachable
            .len();
        sentences += 1;
        greedy += g;
        reference += r;
        if g != r {
            discrepancies.push(format!("{} greedy={g} reference={r}", a.sentence.key()));
        }
    }
    for d in &discrepancies {
        println!("    discrepancy {d}");
    }
    ensure(sentences > 0, "no short sentences")?;
    ensure(
        greedy as f64 >= 0.95 * reference as f64,
        format!("greedy {greedy} < 95% of reference {reference}"),
    )?;
    Ok(format!(
        "{sentences} sentences, greedy {greedy} / reference {reference}, {} discrepancies",
        discrepancies.len()
    ))
}

fn learning_sanity() -> Check {
    let start = Instant::now();
    let spec = FixtureSpec::reachable();
    let train_set = generate_fixtures(&spec, 200, 1).map_err(|e| e.to_string())?;
    let test_set = generate_fixtures(&spec, 100, 2).map_err(|e| e.to_string())?;
    let model = train(&train_set, 20, 42).map_err(|e| e.to_string())?;
    let again = train(&train_set, 20, 42).map_err(|e| e.to_string())?;
    ensure(
        model.to_bytes() == again.to_bytes(),
        "models differ across runs",
    )?;
    let predicted: Vec<AnnotatedSentence> = test_set
        .iter()
        .map(|a| AnnotatedSentence::new(a.sentence.clone(), decode(&a.sentence, &model).0))
        .collect::<discner::Result<_>>()
        .map_err(|e| e.to_string())?;
    let f1 = evaluate(&test_set, &predicted)
        .map_err(|e| e.to_string())?
        .f1
        .value;
    let elapsed = start.elapsed();
    ensure(f1 >= 0.95, format!("F1 {f1}"))?;
    ensure(
        elapsed < Duration::from_secs(60),
        format!("took {elapsed:?}"),
    )?;
    Ok(format!(
        "F1 {f1:.4}, identical models, {:.2}s",
        elapsed.as_secs_f64()
    ))
}

fn flat_baseline() -> Check {
    let gold = generate_fixtures(&FixtureSpec::all(), 300, 5).map_err(|e| e.to_string())?;
    ensure(
        gold.iter().any(|a| a.has_discontinuous()),
        "no discontinuous gold",
    )?;
    let pred: Vec<AnnotatedSentence> = gold
        .iter()
        .map(|a| decode_bio(&a.sentence, &encode_bio(&flat_merge(a))))
        .collect::<discner::Result<_>>()
        .map_err(|e| e.to_string())?;
    let report = subset_disc_only(&gold, &pred).map_err(|e| e.to_string())?;
    ensure(
        report.precision.value == 0.0 && report.recall.value == 0.0 && report.f1.value == 0.0,
        format!("{report:?}"),
    )?;
    Ok(format!(
        "P=R=F1=0 over {} discontinuous gold mentions",
        report.counts.fn_
    ))
}

fn brute_force_prf(gold: &[AnnotatedSentence], pred: &[AnnotatedSentence]) -> (f64, f64, f64) {
    let (mut tp, mut n_gold, mut n_pred) = (0usize, 0usize, 0usize);
    for (g, p) in gold.iter().zip(pred) {
        let gs: BTreeSet<(Vec<usize>, String)> = g
            .mentions
            .iter()
            .map(|m| (m.positions().to_vec(), m.category().to_string()))
            .collect();
        let ps: BTreeSet<(Vec<usize>, String)> = p
            .mentions
            .iter()
            .map(|m| (m.positions().to_vec(), m.category().to_string()))
            .collect();
        tp += gs.intersection(&ps).count();
        n_gold += gs.len();
        n_pred += ps.len();
    }
    let precision = if n_pred == 0 {
        0.0
    } else {
        tp as f64 / n_pred as f64
    };
    let recall = if n_gold == 0 {
        0.0
    } else {
        tp as f64 / n_gold as f64
    };
    let f1 = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    (precision, recall, f1)
}

fn evaluation_oracle() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for pair in 0..1000 {
        let n = rng.gen_range(1..6);
        let gold: Vec<AnnotatedSentence> =
            (0..n).map(|i| random_annotated(&mut rng, i, 8)).collect();
        let pred: Vec<AnnotatedSentence> = gold
            .iter()
            .map(|g| {
                let mut ms: Vec<Mention> = g
                    .mentions
                    .iter()
                    .filter(|_| rng.gen_bool(0.6))
                    .cloned()
                    .collect();
                for _ in 0..rng.gen_range(0..3) {
                    let m = common::random_mention(&mut rng, g.sentence.len());
                    if !ms.contains(&m) {
                        ms.push(m);
                    }
                }
                ms.shuffle(&mut rng);
                AnnotatedSentence::new(g.sentence.clone(), ms).unwrap()
            })
            .collect();
        let report = evaluate(&gold, &pred).map_err(|e| e.to_string())?;
        let expected = brute_force_prf(&gold, &pred);
        ensure(
            (report.precision.value, report.recall.value, report.f1.value) == expected,
            format!("pair {pair}: {report:?} vs {expected:?}"),
        )?;
    }
    Ok("1000 random pairs match exactly".into())
}

fn categories(a: &AnnotatedSentence) -> Vec<String> {
    let mut c: Vec<String> = a
        .mentions
        .iter()
        .map(|m| m.category().to_string())
        .collect();
    c.sort();
    c
}

fn augmentation_invariants() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let lexicon = SynonymLexicon::parse(
        "pain\tache|sore feeling\nsevere\tintense\nknee\tknee joint\nrash\tskin eruption|hives\nnausea\tqueasiness\nmild\tslight\n",
        "lexicon",
    )
    .map_err(|e| e.to_string())?;
    let general: Vec<AnnotatedSentence> = (0..1000)
        .map(|i| random_annotated(&mut rng, i, 10))
        .collect();
    let flat: Vec<AnnotatedSentence> = (0..1000).map(|i| random_flat(&mut rng, i, 10)).collect();
    for method in Method::SINGLE {
        let corpus = if method == Method::SiS {
            &flat
        } else {
            &general
        };
        let p = *P_GRID.choose(&mut rng).unwrap();
        for probability in [p, 0.0] {
            let config = AugmentConfig {
                method,
                p: probability,
                seed: rng.gen(),
                ..Default::default()
            };
            let augmenter =
                Augmenter::new(config, corpus, StopWords::default(), Some(lexicon.clone()))
                    .map_err(|e| e.to_string())?;
            for (i, a) in corpus.iter().enumerate() {
                let out = augmenter
                    .transform(a, method, i, 0)
                    .map_err(|e| e.to_string())?;
                if probability == 0.0 {
                    ensure(
                        out.sentence.tokens == a.sentence.tokens && out.mentions == a.mentions,
                        format!("{method} with p=0 changed instance {i}"),
                    )?;
                }
                match method {
                    Method::LwTR | Method::SiS => ensure(
                        token_labels(&out) == token_labels(a),
                        format!("{method} changed labels of instance {i}"),
                    )?,
                    _ => ensure(
                        out.mentions.len() == a.mentions.len() && categories(&out) == categories(a),
                        format!("{method} changed mentions of instance {i}"),
                    )?,
                }
            }
        }
    }
    for (k, n) in PER_INSTANCE_GRID.into_iter().zip([1usize, 7, 20, 3]) {
        let config = AugmentConfig {
            method: Method::All,
            per_instance: k,
            ..Default::default()
        };
        let augmenter = Augmenter::new(
            config,
            &flat[..n],
            StopWords::default(),
            Some(lexicon.clone()),
        )
        .map_err(|e| e.to_string())?;
        let out = augmenter
            .augment_corpus(&flat[..n])
            .map_err(|e| e.to_string())?;
        ensure(
            out.len() == n + 4 * k * n,
            format!("N={n} k={k}: {} lines", out.len()),
        )?;
    }
    Ok("labels, mentions, p=0 identity and N+4kN counts hold".into())
}

/// Interpolated Kneser-Ney written out directly over string n-grams.
struct ReferenceKn {
    vocab: Vec<String>,
    c3: HashMap<(String, String, String), f64>,
    n2: HashMap<(String, String), f64>,
    n1: HashMap<String, f64>,
    d: [f64; 3],
}

impl ReferenceKn {
    fn new(corpus: &[&str]) -> ReferenceKn {
        let mut c3: HashMap<(String, String, String), f64> = HashMap::new();
        let mut vocab: BTreeSet<String> = ["</s>", "<unk>"].iter().map(|s| s.to_string()).collect();
        for s in corpus {
            let mut t = vec!["<s>".to_string(), "<s>".to_string()];
            t.extend(s.split_whitespace().map(str::to_string));
            t.push("</s>".into());
            vocab.extend(t[2..].iter().cloned());
            for w in t.windows(3) {
                *c3.entry((w[0].clone(), w[1].clone(), w[2].clone()))
                    .or_default() += 1.0;
            }
        }
        let mut left2: HashMap<(String, String), BTreeSet<String>> = HashMap::new();
        for (u, v, w) in c3.keys() {
            left2
                .entry((v.clone(), w.clone()))
                .or_default()
                .insert(u.clone());
        }
        let n2: HashMap<(String, String), f64> = left2
            .into_iter()
            .map(|(k, s)| (k, s.len() as f64))
            .collect();
        let mut left1: HashMap<String, BTreeSet<String>> = HashMap::new();
        for (v, w) in n2.keys() {
            left1.entry(w.clone()).or_default().insert(v.clone());
        }
        let n1: HashMap<String, f64> = left1
            .into_iter()
            .map(|(k, s)| (k, s.len() as f64))
            .collect();
        let discount = |counts: Vec<f64>| {
            let ones = counts.iter().filter(|&&c| c == 1.0).count() as f64;
            let twos = counts.iter().filter(|&&c| c == 2.0).count() as f64;
            if ones == 0.0 {
                0.5
            } else {
                ones / (ones + 2.0 * twos)
            }
        };
        let d = [
            discount(n1.values().copied().collect()),
            discount(n2.values().copied().collect()),
            discount(c3.values().copied().collect()),
        ];
        ReferenceKn {
            vocab: vocab.into_iter().collect(),
            c3,
            n2,
            n1,
            d,
        }
    }

    fn p1(&self, w: &str) -> f64 {
        let total: f64 = self.n1.values().sum();
        let count = self.n1.get(w).copied().unwrap_or(0.0);
        (count - self.d[0]).max(0.0) / total
            + self.d[0] * self.n1.len() as f64 / total / self.vocab.len() as f64
    }

    fn p2(&self, v: &str, w: &str) -> f64 {
        let row: Vec<f64> = self
            .n2
            .iter()
            .filter(|((a, _), _)| a == v)
            .map(|(_, &c)| c)
            .collect();
        if row.is_empty() {
            return self.p1(w);
        }
        let total: f64 = row.iter().sum();
        let count = self
            .n2
            .get(&(v.to_string(), w.to_string()))
            .copied()
            .unwrap_or(0.0);
        (count - self.d[1]).max(0.0) / total + self.d[1] * row.len() as f64 / total * self.p1(w)
    }

    fn p3(&self, u: &str, v: &str, w: &str) -> f64 {
        let row: Vec<f64> = self
            .c3
            .iter()
            .filter(|((a, b, _), _)| a == u && b == v)
            .map(|(_, &c)| c)
            .collect();
        if row.is_empty() {
            return self.p2(v, w);
        }
        let total: f64 = row.iter().sum();
        let count = self
            .c3
            .get(&(u.to_string(), v.to_string(), w.to_string()))
            .copied()
            .unwrap_or(0.0);
        (count - self.d[2]).max(0.0) / total + self.d[2] * row.len() as f64 / total * self.p2(v, w)
    }
}

fn kn_normalization() -> Check {
    let text = ["a b c d e", "a b a", "c c e b", "d e a b c", "e"];
    let corpus: Vec<Vec<&str>> = text
        .iter()
        .map(|s| s.split_whitespace().collect())
        .collect();
    let model = train_kn3(&corpus).map_err(|e| e.to_string())?;
    let vocab = model.vocabulary();
    let mut contexts = 0;
    for v in model.bigram_contexts() {
        let s: f64 = vocab.iter().map(|w| model.prob_bigram(v, w)).sum();
        ensure((s - 1.0).abs() <= 1e-9, format!("context {v}: {s}"))?;
        contexts += 1;
    }
    for (u, v) in model.trigram_contexts() {
        let s: f64 = vocab.iter().map(|w| model.prob(u, v, w)).sum();
        ensure((s - 1.0).abs() <= 1e-9, format!("context {u} {v}: {s}"))?;
        contexts += 1;
    }
    let reference = ReferenceKn::new(&text);
    ensure(
        reference.vocab.len() == vocab.len(),
        "vocabulary sizes differ",
    )?;
    for u in ["<s>", "a", "b", "c", "d", "e"] {
        for v in ["<s>", "a", "b", "c", "d", "e"] {
            for w in &reference.vocab {
                let (got, want) = (model.prob(u, v, w), reference.p3(u, v, w));
                ensure(
                    (got - want).abs() < 1e-12,
                    format!("P({w}|{u} {v}) {got} vs {want}"),
                )?;
            }
        }
    }
    Ok(format!(
        "{contexts} contexts sum to 1; all trigram probabilities match a direct computation"
    ))
}

fn random_text<R: Rng>(rng: &mut R, words: &[String], sentences: usize) -> Vec<Vec<String>> {
    (0..sentences)
        .map(|_| {
            (0..rng.gen_range(2..8))
                .map(|_| words.choose(rng).unwrap().clone())
                .collect()
        })
        .collect()
}

fn similarity_sanity() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let left: Vec<String> = (0..30).map(|i| format!("alpha{i}")).collect();
    let right: Vec<String> = (0..30).map(|i| format!("omega{i}")).collect();
    let filter = ContentFilter::default();
    for trial in 0..100 {
        let (nx, ny) = (rng.gen_range(3..12), rng.gen_range(3..12));
        let x = random_text(&mut rng, &left, nx);
        let y = random_text(&mut rng, &right, ny);
        let tx = TermDistribution::build(&x).map_err(|e| e.to_string())?;
        let ty = TermDistribution::build(&y).map_err(|e| e.to_string())?;
        ensure(
            jsd(&tx, &tx).abs() < 1e-12,
            format!("trial {trial}: jsd(x,x) = {}", jsd(&tx, &tx)),
        )?;
        ensure(
            (jsd(&tx, &ty) - 100.0).abs() <= 1e-6,
            format!("trial {trial}: disjoint jsd {}", jsd(&tx, &ty)),
        )?;
        let vx = VocabProfile::build(&x, &filter);
        ensure(
            tvc(&vx, &vx).map_err(|e| e.to_string())? == 1.0,
            "tvc(x,x) != 1",
        )?;
        ensure(
            jsv(&vx, &vx).map_err(|e| e.to_string())? == 1.0,
            "jsv(x,x) != 1",
        )?;
        let model = train_kn3(&x).map_err(|e| e.to_string())?;
        let own = perplexity(&model, &x, PplMode::Mean).map_err(|e| e.to_string())?;
        let other = perplexity(&model, &y, PplMode::Mean).map_err(|e| e.to_string())?;
        ensure(
            own <= other,
            format!("trial {trial}: own {own} > disjoint {other}"),
        )?;
    }
    Ok("100/100 trials".into())
}

fn spearman_worked_example() -> Check {
    let effectiveness = ["PubMed", "Wikipedia", "MIMIC", "Yelp", "News", "Books"];
    let coverage = ["PubMed", "Wikipedia", "News", "MIMIC", "Books", "Yelp"];
    let rho = spearman(&effectiveness, &coverage).map_err(|e| e.to_string())?;
    // Distinct ranks: 1 - 6 * sum(d^2) / (n (n^2 - 1)).
    let n = effectiveness.len() as f64;
    let d2: f64 = effectiveness
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let j = coverage.iter().position(|t| t == s).unwrap();
            ((i as f64) - (j as f64)).powi(2)
        })
        .sum();
    let closed = 1.0 - 6.0 * d2 / (n * (n * n - 1.0));
    ensure(
        (rho - closed).abs() < 1e-12,
        format!("{rho} vs closed form {closed}"),
    )?;
    ensure((rho - 0.71).abs() <= 0.005, format!("rho {rho}"))?;
    Ok(format!("rho = {rho:.4}"))
}

fn statistics_arithmetic() -> Check {
    let mut mock = Vec::new();
    for i in 0..6318 {
        let sentence =
            Sentence::from_text("pain in the knee", "mock", i).map_err(|e| e.to_string())?;
        let positions = if i < 675 { vec![0, 3] } else { vec![0] };
        let m = Mention::new(positions, "ADE").map_err(|e| e.to_string())?;
        mock.push(AnnotatedSentence::new(sentence, vec![m]).map_err(|e| e.to_string())?);
    }
    let printed = corpus_statistics(&mock)
        .map_err(|e| e.to_string())?
        .to_string();
    ensure(
        printed.contains("675 (10.6)"),
        format!("printed:\n{printed}"),
    )?;

    let fixtures = generate_fixtures(&FixtureSpec::all(), 500, 4).map_err(|e| e.to_string())?;
    let report = corpus_statistics(&fixtures).map_err(|e| e.to_string())?;
    let components: usize = report.components.values().sum();
    let overlap: usize = report.overlap.values().sum();
    ensure(
        components == report.discontinuous && overlap == report.discontinuous,
        format!("{components} / {overlap} vs {}", report.discontinuous),
    )?;

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let (text, ann) = (dir.path().join("mock.txt"), dir.path().join("mock.ann"));
    write_standoff_files(&mock, &text, &ann).map_err(|e| e.to_string())?;
    let out = run_cli(&["stats", "-i", path_str(&text), "--ann", path_str(&ann)]);
    ensure(
        out.status.success() && stdout(&out) == printed,
        "CLI stats differ from the library report",
    )?;
    Ok("675 of 6318 prints 10.6; histograms sum to the discontinuous total".into())
}

fn codec_checks() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for i in 0..1000 {
        let a = random_flat(&mut rng, i, 12);
        let tags = encode_bio(&a);
        ensure(!tags.lossy, format!("flat sentence {i} marked lossy"))?;
        let back = decode_bio(&a.sentence, &tags).map_err(|e| e.to_string())?;
        ensure(
            back.sorted_mentions() == a.sorted_mentions(),
            format!("sentence {i} differs"),
        )?;
    }
    let sentence =
        Sentence::from_text("intense pelvic and back pain", "fig", 0).map_err(|e| e.to_string())?;
    let mentions = vec![
        Mention::new(vec![0, 1, 4], "ADE").map_err(|e| e.to_string())?,
        Mention::new(vec![3, 4], "ADE").map_err(|e| e.to_string())?,
    ];
    let a = AnnotatedSentence::new(sentence, mentions).map_err(|e| e.to_string())?;
    let tags = encode_bioext(&a).map_err(|e| e.to_string())?;
    ensure(
        tags.tags[4] == "BH",
        format!("`pain` tagged {}", tags.tags[4]),
    )?;
    let (decoded, report) = decode_bioext(&a.sentence, &tags).map_err(|e| e.to_string())?;
    ensure(
        decoded.sorted_mentions() == a.sorted_mentions(),
        "bioext decode differs",
    )?;
    ensure(
        report.readings.iter().any(|r| r.mentions.len() == 3),
        "three-mention reading not reported",
    )?;
    Ok(format!(
        "1000 flat round trips; tags {}",
        tags.tags.join(" ")
    ))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("oracle round trip", oracle_round_trip),
        ("crossing-composition limit", crossing_limit),
        ("greedy vs reference oracle", greedy_vs_reference),
        ("learning sanity", learning_sanity),
        ("flat baseline on discontinuous mentions", flat_baseline),
        ("evaluation oracle equivalence", evaluation_oracle),
        ("augmentation invariants", augmentation_invariants),
        ("Kneser-Ney normalization", kn_normalization),
        ("similarity sanity", similarity_sanity),
        ("Spearman worked example", spearman_worked_example),
        ("statistics arithmetic", statistics_arithmetic),
        ("codec checks", codec_checks),
    ];
    let mut failures = BTreeMap::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail}", i + 1),
            Err(detail) => {
                println!("criterion {:>2} FAIL {name}: {detail}", i + 1);
                failures.insert(i + 1, detail);
            }
        }
    }
    println!(
        "acceptance: {} passed, {} failed",
        criteria.len() - failures.len(),
        failures.len()
    );
    if !failures.is_empty() {
        std::process::exit(1);
    }
}
