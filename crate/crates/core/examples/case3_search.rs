//! Middle factors that are not subgroups: the compatibility graph search.

use factorix::catalog::Catalog;
use factorix::search::{Limits, Mode};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let catalog = Catalog::builtin();
    let entry = catalog.load("lemma-3.6")?;
    let out = entry.run_search(Mode::FindFirst, &Limits::default()).expect("entry has a search")?;
    println!(
        "{}: {} solution(s) after {} graph build(s), {} nodes, {:.2?}",
        out.strategy,
        out.solutions.len(),
        out.stats.graph_builds,
        out.stats.nodes,
        out.elapsed
    );
    for c in &out.solutions {
        println!("pattern {:?}: {:?}", c.pattern(), c.verify());
    }
    Ok(())
}
