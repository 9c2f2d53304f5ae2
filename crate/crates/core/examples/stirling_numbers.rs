//! Generalized Stirling numbers: the central triangle, a non-central row
//! and the α = 0 case, which gives the unsigned Stirling numbers of the
//! first kind.

use gibbs_partitions::stirling::{central_stirling, central_table, factorial_coefficient, noncentral_stirling};

fn main() -> gibbs_partitions::Result<()> {
    let alpha = 0.5;
    let table = central_table(alpha, 6)?;
    println!("S(n, k; alpha = {alpha})");
    for n in 1..=6 {
        let row: Vec<String> = (1..=n).map(|k| format!("{:>10.4}", table.get(n, k).to_f64())).collect();
        println!("n = {n}: {}", row.join(" "));
    }

    let gamma = -2.5;
    println!("\nnon-central, gamma = {gamma}");
    for k in 0..=5 {
        let s = noncentral_stirling(5, k, alpha, gamma)?;
        println!("S(5, {k}) = {:.6}", s.to_f64());
    }

    println!("\n|s(6, k)| from alpha = 0:");
    for k in 1..=6 {
        print!("{} ", central_stirling(6, k, 0.0)?.to_f64().round());
    }
    println!();

    // Large rows stay finite in log space.
    let big = central_stirling(400, 50, 0.3)?;
    println!("\nln S(400, 50; 0.3) = {:.6}", big.ln_abs());
    println!(
        "C(6, 2; 0.5, 0) = {:.6}",
        factorial_coefficient(6, 2, 0.5, 0.0)?.to_f64()
    );
    Ok(())
}
