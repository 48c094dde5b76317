//! Builds S3 from a transposition and the rotations, checks the
//! factorization, then breaks it.

use std::sync::Arc;

use factorix::certify::{normalize, reverse, Certificate, Verdict};
use factorix::factor_set::FactorSet;
use factorix::group::GroupTable;
use factorix::perm::Perm;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = Arc::new(GroupTable::from_cycle_strings(3, &["(1,2)", "(1,2,3)"])?);
    let idx = |s: &str| g.index_of(&Perm::parse(s, 3).unwrap()).unwrap();
    let n = g.order();

    let swap = FactorSet::new(n, [idx("()"), idx("(1,2)")]);
    let turn = FactorSet::new(n, [idx("()"), idx("(1,2,3)"), idx("(1,3,2)")]);
    let c = Certificate::new(Arc::clone(&g), vec![swap.clone(), turn])?;
    println!("S3 = {} * {}", c.factors()[0].display(&g), c.factors()[1].display(&g));
    println!("verdict: {:?}", c.verify());

    let r = reverse(&c)?;
    println!("reversed pattern {:?}: {:?}", r.pattern(), r.verify());
    println!("normalized: {}", normalize(&r)?.is_normalized());

    // (1,2)·(1,2) = ()·(), so this product repeats an element.
    let clash = FactorSet::new(n, [idx("()"), idx("(1,2)"), idx("(1,2,3)")]);
    let b = Certificate::new(Arc::clone(&g), vec![swap, clash])?;
    assert!(matches!(b.verify(), Verdict::Collision { .. }));
    println!("{} * {}: {:?}", b.factors()[0].display(&g), b.factors()[1].display(&g), b.verify());
    Ok(())
}
