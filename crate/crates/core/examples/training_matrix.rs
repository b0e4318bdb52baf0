//! Places E-CZCS sets on GSM antennas and sweeps the delay spread through
//! the interference-free design check.

use eczcs::construct::fixture;
use eczcs::training::{build_training_matrix, check_design_criterion, Entry, GsmConfig};

fn main() -> eczcs::Result<()> {
    for (id, nt, na) in [("table4", 4, 2), ("table5", 8, 3)] {
        let fam = fixture(id)?;
        let psi = build_training_matrix(&fam, &GsmConfig::new(nt, na)?, id)?;
        let meta = psi.meta();
        println!("{id} on ({nt},{na}): V={} L'={} E={}", meta.v, psi.len(), psi.energy());
        // one glyph per length-L segment
        for row in psi.rows() {
            let line: String = row
                .chunks(meta.l)
                .map(|seg| if seg.iter().all(|e| *e == Entry::Zero) { '.' } else { '#' })
                .collect();
            println!("  {line}");
        }
        let largest = (0..meta.l).take_while(|&l| check_design_criterion(&psi, l).passed).last();
        println!("  criterion holds up to lambda = {largest:?}");
        if let Some(v) = check_design_criterion(&psi, largest.map_or(0, |l| l + 1)).violations.first() {
            println!("  first violation: {:?} rows {:?} shift {} magnitude {}", v.check, v.indices, v.shift, v.magnitude);
        }
    }
    Ok(())
}
