//! Generalized-Boolean-function constructions: the stored presets, an
//! optimal parameter choice and a complete complementary code.

use eczcs::gbf::{build_theorem3_f, lemma2_ccc, optimal_theorem3_params, preset, theorem3_construct, PRESETS};
use eczcs::verify::{check_ccc, check_eczcs, eczcs_bound};

fn main() -> eczcs::Result<()> {
    for name in PRESETS {
        let spec = preset(name)?;
        let p = spec.partition()?;
        let fam = spec.theorem3()?;
        let z = spec.zone_width()?;
        println!("preset {name}: f = {}", build_theorem3_f(&p, spec.q, &spec.eta())?);
        println!(
            "  ({},{},{},{z}) E-CZCS: {}",
            fam.num_sets(),
            fam.set_size(),
            fam.seq_len(),
            check_eczcs(&fam, z)?.passed
        );
    }

    println!();
    for (m, k, v) in [(5, 2, 1), (6, 2, 2), (6, 3, 1)] {
        let p = optimal_theorem3_params(m, k, v)?;
        let fam = theorem3_construct(&p, 2, v, &vec![0; m + 1])?;
        let z = 1 << (p.first(1) - 1);
        let bound = eczcs_bound(fam.num_sets(), fam.set_size(), fam.seq_len(), 2);
        println!("m={m} k={k} v={v} paths {:?}: Z={z}, bound {bound}, passes {}", p.blocks(), check_eczcs(&fam, z)?.passed);
    }

    let p = optimal_theorem3_params(4, 2, 2)?;
    let ccc = lemma2_ccc(&p, 4, &[0; 5])?;
    println!("\nquaternary CCC {}x{} of length {}: {}", ccc.num_sets(), ccc.set_size(), ccc.seq_len(), check_ccc(&ccc)?.passed);
    Ok(())
}
