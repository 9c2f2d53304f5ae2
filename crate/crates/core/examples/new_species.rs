//! Posterior laws of new species: given an observed abundance vector, how
//! many new species (K_m) and how many new species of each size (W_{l,m})
//! appear among m further observations.

use gibbs_partitions::conditional::{new_blocks_mean, new_blocks_pmf, w_mean, w_pmf};
use gibbs_partitions::{ObservedSample, PitmanYor};

fn main() -> gibbs_partitions::Result<()> {
    let model = PitmanYor::new(0.5, 1.0)?;
    let sample = ObservedSample::new(vec![5, 3, 2, 1, 1, 1])?;
    let m = 10;
    println!("observed n = {}, j = {}; predicting m = {m}", sample.n(), sample.j());
    let pmf = new_blocks_pmf(&model, &sample, m)?;
    for (k, p) in pmf.iter().enumerate() {
        println!("P(K_m = {k:>2}) = {p:.6}");
    }
    println!("E(K_m) = {:.6}", new_blocks_mean(&model, &sample, m)?);
    for l in 1..=3 {
        let p0 = w_pmf(&model, &sample, m, l)?[0];
        println!(
            "E(W_{{{l},m}}) = {:.6}, P(W_{{{l},m}} = 0) = {p0:.6}",
            w_mean(&model, &sample, m, l)?
        );
    }
    Ok(())
}
