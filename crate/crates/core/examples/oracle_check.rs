//! Brute-force ground truth: enumerate every set partition and compare the
//! closed forms with it.

use gibbs_partitions::oracle::{bell, enumerate_partitions, oracle_distribution};
use gibbs_partitions::unconditional::kn_pmf;
use gibbs_partitions::verify::{verify_conditional_all, verify_unconditional, TOLERANCE};
use gibbs_partitions::PitmanYor;

fn main() -> gibbs_partitions::Result<()> {
    let model = PitmanYor::new(0.3, 2.0)?;
    let n = 7;
    println!(
        "{} set partitions of [{n}] (Bell = {})",
        enumerate_partitions(n)?.count(),
        bell(n)
    );
    let by_k = oracle_distribution(&model, n, |p| p.k())?;
    let closed = kn_pmf(&model, n)?;
    for (k, p) in &by_k {
        println!("K = {k}: enumerated {p:.12}, closed {:.12}", closed[*k]);
    }

    let mut report = verify_unconditional(&model, n)?;
    report.merge(verify_conditional_all(&model, 5, 4)?);
    for check in report.checks() {
        println!(
            "{:<32} {:>6} comparisons, max deviation {:.2e}",
            check.name, check.comparisons, check.max_deviation
        );
    }
    println!("passed at {TOLERANCE:e}: {}", report.passed(TOLERANCE));
    Ok(())
}
