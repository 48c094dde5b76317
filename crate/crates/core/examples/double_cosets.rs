//! S4 = A·T·B with A a Sylow 3-subgroup, B a Klein four-group and T a
//! set of double coset representatives.

use std::sync::Arc;

use factorix::catalog::sandwich;
use factorix::certify::Certificate;
use factorix::group::GroupTable;
use factorix::perm::Perm;
use factorix::structure::{double_cosets, sylow_subgroup, Subgroup};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = Arc::new(GroupTable::from_cycle_strings(4, &["(1,2)", "(1,2,3,4)"])?);
    let a = sylow_subgroup(&g, 3)?;
    let klein = ["(1,2)(3,4)", "(1,3)(2,4)"].map(|s| Perm::parse(s, 4).unwrap());
    let b = Subgroup::from_perms(&g, &klein).expect("Klein four-group lies in S4");
    let dc = double_cosets(&a, &b)?;
    println!("|A| = {}, |B| = {}, {} double cosets of sizes {:?}", a.order(), b.order(), dc.count(), dc.coset_sizes);

    // Each side is refined by its own whole group.
    let mut whole = |h: &Subgroup, word: &[usize]| {
        let (t, _) = h.table().ok()?;
        (word == [h.order()]).then(|| Certificate::whole(&t))
    };
    let c = sandwich(&a, &b, &[3, dc.count(), 4], &mut whole).expect("sandwich applies");
    for f in c.factors() {
        println!("  {}", f.display(&g));
    }
    println!("pattern {:?}: {:?}", c.pattern(), c.verify());
    Ok(())
}
