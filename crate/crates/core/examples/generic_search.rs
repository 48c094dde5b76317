//! Counts the normalized factorizations of A4 for every ordered pattern.

use std::sync::Arc;

use factorix::group::GroupTable;
use factorix::patterns::enumerate_words;
use factorix::search::{generic_search, GenericOptions, Limits, Mode};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = Arc::new(GroupTable::from_cycle_strings(4, &["(1,2,3)", "(2,3,4)"])?);
    let limits = Limits::default();
    for w in enumerate_words(g.order() as u64)? {
        let out = generic_search(&g, &w.as_sizes(), Mode::FindAll, &limits, GenericOptions::default())?;
        println!("{:<10} {:>4} solutions, {} candidates", w.to_string(), out.solutions.len(), out.stats.candidates);
    }
    Ok(())
}
