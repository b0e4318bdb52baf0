//! Aperiodic, set-sum and cross-channel correlation profiles of the
//! embedded (2,2,24,9) family.

use eczcs::construct::fixture;
use eczcs::correlation::format_magnitude;
use eczcs::{profile, Pairing};

fn main() -> eczcs::Result<()> {
    let fam = fixture("table4")?;
    let (g0, g1) = (fam.set(0), fam.set(1));

    let show = |name: &str, p: Pairing<'_>| -> eczcs::Result<()> {
        let prof = profile(p)?;
        let line: Vec<String> = prof
            .shifts()
            .zip(prof.values())
            .filter(|(u, _)| *u >= 0)
            .map(|(_, v)| format_magnitude(v))
            .collect();
        println!("{name:<24} {}", line.join(" "));
        Ok(())
    };

    show("|rho(g0_0, g0_0; u)|", Pairing::Aperiodic(g0.get(0), g0.get(0)))?;
    show("|rho(g0_0, g0_1; u)|", Pairing::Aperiodic(g0.get(0), g0.get(1)))?;
    show("|rho(G0, G0; u)|", Pairing::SetSum(g0, g0))?;
    show("|rho(G0, G1; u)|", Pairing::SetSum(g0, g1))?;
    show("|rho_hat(G0, G1; u)|", Pairing::CrossChannel(g0, g1))?;
    show("|phi(g0_0, g1_0; u)|", Pairing::Periodic(g0.get(0), g1.get(0)))?;
    Ok(())
}
