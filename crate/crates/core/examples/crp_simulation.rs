//! Chinese restaurant simulation against the exact law of K_n, and a
//! continuation of an observed sample against E(K_m).

use gibbs_partitions::conditional::new_blocks_mean;
use gibbs_partitions::models::CachedWeights;
use gibbs_partitions::samplers::{replicate, sample_conditional, sample_partition};
use gibbs_partitions::unconditional::kn_pmf;
use gibbs_partitions::{ObservedSample, PitmanYor};

fn main() -> gibbs_partitions::Result<()> {
    let model = PitmanYor::new(0.5, 1.0)?;
    let (n, reps, seed) = (10, 100_000, 7);
    let cached = CachedWeights::new(&model, n + 1)?;
    let ks = replicate(reps, seed, |rng| Ok(sample_partition(&cached, n, rng)?.k()))?;
    let exact = kn_pmf(&model, n)?;
    println!(" k  simulated  exact");
    for (k, p) in exact.iter().enumerate().skip(1) {
        let freq = ks.iter().filter(|&&x| x == k).count() as f64 / reps as f64;
        println!("{k:>2}  {freq:.5}    {p:.5}");
    }

    let sample = ObservedSample::new(vec![3, 2, 1])?;
    let m = 6;
    let cached = CachedWeights::new(&model, sample.n() + m + 1)?;
    let draws = replicate(reps, seed, |rng| Ok(sample_conditional(&cached, &sample, m, rng)?.k()))?;
    let mean = draws.iter().sum::<usize>() as f64 / reps as f64;
    println!(
        "\nE(K_m): simulated {mean:.4}, exact {:.4}",
        new_blocks_mean(&model, &sample, m)?
    );
    Ok(())
}
