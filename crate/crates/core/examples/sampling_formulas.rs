//! Ewens and Pitman-Yor sampling formulas: the EPPF of one partition, the
//! law of the counts vector and the number of blocks.

use gibbs_partitions::enumerate::integer_partitions;
use gibbs_partitions::unconditional::{eppf, gibbs_sampling_formula, kn_pmf};
use gibbs_partitions::{Composition, PitmanYor};

fn main() -> gibbs_partitions::Result<()> {
    let ewens = PitmanYor::ewens(1.0)?;
    let py = PitmanYor::new(0.5, 1.0)?;
    let n = 5;

    let blocks = Composition::new(vec![3, 1, 1])?;
    println!(
        "EPPF(3,1,1): ewens {:.6}, py {:.6}",
        eppf(&ewens, &blocks)?,
        eppf(&py, &blocks)?
    );

    println!("\ncounts vector law at n = {n} (ewens / py):");
    let mut total = (0.0, 0.0);
    for parts in integer_partitions(n) {
        let counts = Composition::new(parts.clone())?.counts();
        let (a, b) = (
            gibbs_sampling_formula(&ewens, &counts)?,
            gibbs_sampling_formula(&py, &counts)?,
        );
        total = (total.0 + a, total.1 + b);
        println!("{parts:?}: {a:.6} / {b:.6}");
    }
    println!("totals: {:.12} / {:.12}", total.0, total.1);

    println!("\nP(K_{n} = k):");
    for (k, (a, b)) in kn_pmf(&ewens, n)?.iter().zip(kn_pmf(&py, n)?).enumerate().skip(1) {
        println!("k = {k}: {a:.6} / {b:.6}");
    }
    Ok(())
}
