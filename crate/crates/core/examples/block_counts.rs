//! Laws and factorial moments of the number of blocks of each size,
//! C_{l,n}, including singletons and the joint moments across sizes.

use gibbs_partitions::unconditional::{cl_mean, cl_pmf, joint_factorial_moments, marginal_given_kn, singleton_law};
use gibbs_partitions::PitmanYor;

fn main() -> gibbs_partitions::Result<()> {
    let model = PitmanYor::new(0.25, 2.0)?;
    let n = 12;
    for l in 1..=4 {
        let pmf = cl_pmf(&model, n, l)?;
        let shown: Vec<String> = pmf.iter().map(|p| format!("{p:.4}")).collect();
        println!(
            "C_{{{l},{n}}}: mean {:.4}, pmf [{}]",
            cl_mean(&model, n, l)?,
            shown.join(", ")
        );
    }
    println!("P(no singletons) = {:.6}", singleton_law(&model, n, 0)?);
    // E[(C_1)_{[2]} C_2] for a sample of 12.
    println!("E[(C_1)_[2] C_2] = {:.6}", joint_factorial_moments(&model, n, &[2, 1])?);
    // Given three blocks, the first one in random order has size 10 with probability:
    println!("P(N_1 = 10 | K = 3) = {:.6}", marginal_given_kn(0.25, &[10], n, 3)?);
    Ok(())
}
