//! Compares E-CZCS training with random binary, Zadoff-Chu and a ZCCS that
//! lacks the cross-channel property.

use eczcs::construct::{fixture, interleave_pairing};
use eczcs::sim::{analytic_mse, baseline_random_binary, baseline_zadoff_chu, baseline_zccs, mse_floor};
use eczcs::training::{build_ls_model_matrix, build_training_matrix, GsmConfig, TrainingMatrix};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> eczcs::Result<()> {
    let cfg = GsmConfig::new(4, 2)?;
    let candidates: Vec<(&str, TrainingMatrix)> = vec![
        ("E-CZCS", build_training_matrix(&fixture("table4")?, &cfg, "table4")?),
        ("random binary", baseline_random_binary(&cfg, 2, 24, &mut ChaCha8Rng::seed_from_u64(5))?),
        ("Zadoff-Chu", baseline_zadoff_chu(&cfg, 2, 24, &[1, 5, 7, 11])?),
        ("interleaved ZCCS", baseline_zccs(&interleave_pairing(&fixture("table3")?)?, &cfg, "interleaved")?),
    ];
    let sigma2 = 0.1;
    print!("{:<18}", "lambda");
    for l in [1, 3, 5, 7, 9, 11] {
        print!("{l:>8}");
    }
    println!();
    for (name, psi) in &candidates {
        let floor = mse_floor(sigma2, psi.energy());
        print!("{name:<18}");
        for l in [1, 3, 5, 7, 9, 11] {
            match analytic_mse(&build_ls_model_matrix(psi, l)?, sigma2) {
                Ok(mse) => print!("{:>8.3}", mse / floor),
                Err(_) => print!("{:>8}", "rank"),
            }
        }
        println!();
    }
    Ok(())
}
