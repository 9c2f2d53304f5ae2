//! Predictive estimators from an abundance file: the chance that the next
//! observation (or the one after m more) is a new species, or a species seen
//! l times. Pass a CSV path as the first argument, or use the built-in data.

use std::io::Cursor;

use gibbs_partitions::cli::parse_abundance;
use gibbs_partitions::estimators::{
    closure_total, discovery_probability, estimate_new_l, estimate_old_l, m_step_discovery, one_step_old_l,
};
use gibbs_partitions::PitmanYor;

const DEFAULT: &str = "species,count\nrobin,6\nwren,3\njay,2\nfinch,1\nowl,1\nlark,1\n";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sample = match std::env::args().nth(1) {
        Some(path) => parse_abundance(std::fs::File::open(path)?)?,
        None => parse_abundance(Cursor::new(DEFAULT))?,
    };
    let model = PitmanYor::new(0.4, 1.5)?;
    println!("n = {}, j = {}", sample.n(), sample.j());
    println!("P(next is new) = {:.6}", discovery_probability(&model, &sample)?);
    for l in 1..=3 {
        println!(
            "P(next is an old species seen {l} times) = {:.6}",
            one_step_old_l(&model, &sample, l)?
        );
    }
    let m = 8;
    println!("\nafter m = {m} more observations:");
    println!("P(new at n+m+1) = {:.6}", m_step_discovery(&model, &sample, m)?);
    for l in 1..=3 {
        println!(
            "l = {l}: new {:.6}, old {:.6}",
            estimate_new_l(&model, &sample, m, l)?,
            estimate_old_l(&model, &sample, m, l)?
        );
    }
    println!("total probability: {:.12}", closure_total(&model, &sample, m)?);
    Ok(())
}
