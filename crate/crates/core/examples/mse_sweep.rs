//! Channel-estimation MSE against delay spread for the (2,2,24,9) training
//! matrix on four antennas.

use eczcs::sim::{monte_carlo_mse, resolve_training, SimConfig};

fn main() -> eczcs::Result<()> {
    let cfg = SimConfig {
        training: "table4".into(),
        nt: 4,
        na: 2,
        q: 2,
        ebn0_db: vec![16.0],
        lambdas: (1..=12).collect(),
        trials: 2000,
        seed: 1,
        noiseless: false,
    };
    cfg.validate()?;
    let psi = resolve_training(&cfg.training, &cfg.gsm(), cfg.q, cfg.seed)?;
    let report = monte_carlo_mse(&psi, &cfg)?;
    println!("lambda  empirical/floor  analytic/floor");
    for p in &report.points {
        let ratio = |x: Option<f64>| x.map_or("failed".to_string(), |x| format!("{:.4}", x / p.floor));
        println!("{:>6}  {:>15}  {:>14}", p.lambda, ratio(p.empirical_mse), ratio(p.analytic_mse));
    }
    Ok(())
}
