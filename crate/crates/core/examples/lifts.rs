//! Extends factorizations of a subgroup and of a quotient to S4.

use std::sync::Arc;

use factorix::certify::{lift_by_quotient, lift_by_transversal, Certificate, Side};
use factorix::group::GroupTable;
use factorix::perm::Perm;
use factorix::structure::{quotient_group, Subgroup};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = Arc::new(GroupTable::from_cycle_strings(4, &["(1,2)", "(1,2,3,4)"])?);

    let a4 = Subgroup::from_perms(&g, &["(1,2,3)", "(2,3,4)"].map(|s| Perm::parse(s, 4).unwrap())).unwrap();
    let (t, _) = a4.table()?;
    let c = lift_by_transversal(&Certificate::whole(&t), &a4, Side::Right)?;
    println!("A4 then a transversal: {:?} {:?}", c.pattern(), c.verify());

    let v4 = Subgroup::from_perms(&g, &["(1,2)(3,4)", "(1,3)(2,4)"].map(|s| Perm::parse(s, 4).unwrap())).unwrap();
    assert!(v4.is_normal());
    let q = quotient_group(&v4)?;
    println!("S4/V4 has order {}", q.table.order());
    for position in 0..=1 {
        let c = lift_by_quotient(&Certificate::whole(&q.table), &v4, position)?;
        println!("V4 at position {position}: {:?} {:?}", c.pattern(), c.verify());
    }
    Ok(())
}
