//! Certifies every prime word of |S4| up to reversal, printing how each
//! certificate was obtained.

use std::sync::Arc;

use factorix::catalog::Catalog;
use factorix::group::GroupTable;
use factorix::search::cascade::{multifold, Cascade, CascadeOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let catalog = Catalog::builtin();
    let g = Arc::new(GroupTable::from_cycle_strings(4, &["(1,2)", "(1,2,3,4)"])?);

    let mut cascade = Cascade::new(&catalog, CascadeOptions::default());
    let solved = cascade.solve(&g, &[2, 3, 2, 2])?;
    println!("(2,3,2,2):");
    for step in &solved.provenance {
        println!("  {step}");
    }

    let report = multifold(&catalog, &g, CascadeOptions::default());
    println!("{:?}: {}/{} classes in {:.2?}", report.verdict, report.certified(), report.classes.len(), report.elapsed);
    for c in &report.classes {
        let how = c.solved.as_ref().and_then(|s| s.provenance.first().cloned()).unwrap_or_default();
        println!("  {:<10} {how}", c.word.to_string());
    }
    Ok(())
}
