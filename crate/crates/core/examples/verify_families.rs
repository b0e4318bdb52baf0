//! Classifies the embedded families and prints the measured zone widths
//! next to the width bound.

use eczcs::construct::{fixture, fixture_ids, zccs_width};
use eczcs::verify::{check_eczcs, eczcs_bound, flatten_to_zcz, is_optimal, measure_zcz_width, tang_fan_matsufuji_bound};

fn main() -> eczcs::Result<()> {
    for id in fixture_ids() {
        let fam = fixture(id)?;
        let (m, n, l, q) = (fam.num_sets(), fam.set_size(), fam.seq_len(), fam.q());
        println!("{id}: M={m} N={n} L={l} q={q}");
        println!("  ZCCS width        {:?}", zccs_width(&fam)?);
        let w = measure_zcz_width(&fam);
        println!("  E-CZCS width      {w:?} (bound {})", eczcs_bound(m, n, l, q));
        if let Some(z) = w.filter(|&z| z > 0) {
            println!("  optimal           {}", is_optimal(&fam, z)?);
            let flat = flatten_to_zcz(&fam);
            println!(
                "  flattened ZCZ set {} sequences of length {}, bound {}",
                flat.size(),
                flat.seq_len(),
                tang_fan_matsufuji_bound(flat.size(), flat.seq_len(), q)
            );
            let over = check_eczcs(&fam, z + 1)?;
            if let Some(v) = over.violations.first() {
                println!("  first failure at Z={}: {:?} {:?} u={} |.|={}", z + 1, v.check, v.indices, v.shift, v.magnitude);
            }
        }
    }
    Ok(())
}
