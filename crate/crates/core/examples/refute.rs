//! Shows that A4 has no factorization with pattern (2,3,2), while (3,2,2)
//! exists.

use std::sync::Arc;

use factorix::group::GroupTable;
use factorix::search::{refute, GenericOptions, Limits};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = Arc::new(GroupTable::from_cycle_strings(4, &["(1,2,3)", "(2,3,4)"])?);
    for pattern in [[2, 3, 2], [3, 2, 2]] {
        let r = refute(&g, &pattern, &Limits::default(), GenericOptions::default())?;
        println!("{:?}: {:?} via {} in {:.2?}", pattern, r.verdict, r.method, r.elapsed);
    }
    Ok(())
}
