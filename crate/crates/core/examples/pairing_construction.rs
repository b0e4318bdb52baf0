//! Doubles every catalog seed into an E-CZCS by pairing members and checks
//! the promised width.

use eczcs::construct::{fixture, seed_catalog, theorem2_construct};

fn main() -> eczcs::Result<()> {
    for e in seed_catalog()? {
        let (m, n, l, z) = e.params();
        let out = theorem2_construct(&e.family, z, false)?;
        println!(
            "{:<14} ({m},{n},{l},{z}) -> ({m},{n},{},{}) {}",
            e.id,
            out.family.seq_len(),
            out.z,
            if out.verdict.passed { "ok" } else { "FAILED" }
        );
    }

    let seed = fixture("table3")?;
    let out = theorem2_construct(&seed, 10, false)?;
    println!("\n{}", out.family.to_text());
    Ok(())
}
