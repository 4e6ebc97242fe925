//! Counts reachable and unreachable gold mentions per overlap category on
//! generated fixtures, and compares the greedy oracle with exhaustive search.

use discner::corpus::OverlapCategory;
use discner::io::{generate_fixtures, FixtureSpec};
use discner::transition::{oracle, reference_oracle, REFERENCE_MAX_LEN};

fn main() -> discner::Result<()> {
    println!(
        "{:<20} {:>9} {:>11} {:>12} {:>12}",
        "category", "reachable", "unreachable", "short greedy", "short search"
    );
    for category in OverlapCategory::ALL {
        let corpus = generate_fixtures(&FixtureSpec::only(category), 100, 7)?;
        let (mut reachable, mut unreachable, mut short, mut searched) = (0, 0, 0, 0);
        for a in &corpus {
            let r = oracle(a);
            reachable += r.reachable.len();
            unreachable += r.unreachable.len();
            if a.sentence.len() <= REFERENCE_MAX_LEN {
                short += r.reachable.len();
                searched += reference_oracle(a, REFERENCE_MAX_LEN)?.reachable.len();
            }
        }
        println!(
            "{:<20} {reachable:>9} {unreachable:>11} {short:>12} {searched:>12}",
            category.name()
        );
    }
    Ok(())
}
