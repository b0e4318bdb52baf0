//! Maps a bit stream onto a GSM transmit block.

use eczcs::training::{activation_table, map_bits_to_gsm_block, parse_bits, GsmConfig};

fn main() -> eczcs::Result<()> {
    let cfg = GsmConfig::new(4, 2)?;
    let table = activation_table(&cfg);
    for i in 0..table.patterns.len() {
        let active: Vec<usize> = table.active(i).iter().map(|a| a + 1).collect();
        println!("pattern {i:0w$b} -> antennas {active:?}", w = table.bits);
    }

    let bits = parse_bits("0110 1101 0001 1000")?;
    println!();
    for row in map_bits_to_gsm_block(&bits, &cfg)? {
        let line: Vec<String> = row.iter().map(|s| format!("{s:+}").replace("+0", " 0")).collect();
        println!("{}", line.join(" "));
    }
    Ok(())
}
