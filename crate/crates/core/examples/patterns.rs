//! Prime words of a group order, grouped up to reversal.

use factorix::patterns::{palindrome_count, prime_index_discard, reversal_class_count, word_count, PatternPlan};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(168u64);
    println!("n = {n}: {} words, {} palindromes, {} classes", word_count(n)?, palindrome_count(n)?, reversal_class_count(n)?);
    let plan = PatternPlan::new(n)?;
    let largest = factorix::patterns::prime_signature(n).last().map(|&(p, _)| p).unwrap_or(1);
    let plan = prime_index_discard(&plan, largest, true)?;
    println!("after discarding words ending in {largest}:");
    for w in &plan.classes {
        println!("  {w}");
    }
    println!("{} classes discarded", plan.discarded.len());
    Ok(())
}
