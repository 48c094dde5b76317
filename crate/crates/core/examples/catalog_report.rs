//! Lists the built-in catalog, verifies every stated factorization and
//! prints one of them in the certificate file format.

use factorix::catalog::Catalog;
use factorix::report::CertificateJson;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let catalog = Catalog::builtin();
    println!("groups: {}", catalog.group_ids().collect::<Vec<_>>().join(", "));
    for id in catalog.entry_ids() {
        let entry = catalog.load(id)?;
        match entry.certificate() {
            Some(c) => println!("{id:<20} {:?} {:?}", c.pattern(), c.verify()),
            None => println!("{id:<20} words {:?}", entry.words),
        }
    }
    let c = catalog.load("lemma-4.2")?.certificate().expect("entry states a factorization");
    println!("{}", CertificateJson::of(&c).to_json());
    Ok(())
}
