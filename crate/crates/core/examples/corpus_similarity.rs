//! Ranks three tiny candidate corpora against a target with all four
//! similarity measures, then correlates two of the rankings.

use discner::similarity::{rank_sources, spearman, Measure, SimilarityOptions, Source};

fn sentences(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .map(|l| l.split_whitespace().map(str::to_string).collect())
        .collect()
}

fn main() -> discner::Result<()> {
    let target = sentences(
        "severe headache after taking aspirin\n\
         muscle pain and fatigue on lipitor\n\
         nausea and dizziness since starting the new medication",
    );
    let sources = vec![
        Source {
            name: "forum".into(),
            sentences: sentences(
                "terrible headache since i started lipitor\n\
                 my muscle pain got worse on the medication\n\
                 aspirin gave me nausea",
            ),
        },
        Source {
            name: "abstracts".into(),
            sentences: sentences(
                "statin therapy is associated with muscle symptoms\n\
                 patients reported headache and nausea\n\
                 the medication was well tolerated",
            ),
        },
        Source {
            name: "reviews".into(),
            sentences: sentences(
                "the pasta was great and the service friendly\n\
                 we waited an hour for a table\n\
                 dessert was too sweet",
            ),
        },
    ];
    let report = rank_sources(&sources, &target, &SimilarityOptions::default())?;
    print!("{report}");

    let names = |m: Measure| -> Vec<String> {
        report
            .ranking(m)
            .iter()
            .map(|&i| report.rows[i].name.clone())
            .collect()
    };
    let rho = spearman(&names(Measure::Tvc), &names(Measure::Jsd))?;
    println!("spearman(TVC, JSD) = {rho:.3}");
    Ok(())
}
