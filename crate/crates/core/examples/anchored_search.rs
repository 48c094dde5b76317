//! Replays a catalog search anchored on a subgroup and an end set, and
//! compares the candidate counter with the counting formula.

use factorix::catalog::Catalog;
use factorix::search::{Limits, Mode};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let catalog = Catalog::builtin();
    let entry = catalog.load("lemma-3.5")?;
    println!("{}: {}", entry.id, entry.description);
    let out = entry.run_search(Mode::FindAll, &Limits::default()).expect("entry has a search")?;
    println!(
        "{}: {} solutions, {} candidates (formula {:?}), exhaustive {}",
        out.strategy,
        out.solutions.len(),
        out.stats.candidates,
        out.formula_candidates,
        out.exhaustive
    );
    let g = &entry.group.table;
    if let Some(c) = out.solutions.first() {
        for f in c.factors() {
            println!("  {}", f.display(g));
        }
    }
    Ok(())
}
