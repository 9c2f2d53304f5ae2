//! How further observations spread over species already seen: the Pólya
//! allocation law, the number of old species ending with a given abundance
//! (O_{l,m}) and factorial moments of all species of that abundance (Z_{l,m}).

use gibbs_partitions::polya::{
    multivariate_polya_mass, o_mean, o_pmf, polya_gibbs_joint, z_factorial_moment, OldAllocation,
};
use gibbs_partitions::{ObservedSample, PitmanYor};

fn main() -> gibbs_partitions::Result<()> {
    let (alpha, theta) = (0.3, 2.0);
    let model = PitmanYor::new(alpha, theta)?;
    let sample = ObservedSample::new(vec![4, 2, 1])?;
    let m = 5;

    let alloc = OldAllocation::new(vec![2, 1, 0], 2);
    println!(
        "P(M = (2,1,0), S = 2) = {:.8} (closed Pólya form {:.8})",
        polya_gibbs_joint(&model, &sample, m, &alloc)?,
        multivariate_polya_mass(alpha, theta, &sample, m, &alloc)?
    );
    for l in [1, 2, 4, 6] {
        let pmf: Vec<String> = o_pmf(&model, &sample, m, l)?
            .iter()
            .map(|p| format!("{p:.4}"))
            .collect();
        println!(
            "O_{{{l},m}}: mean {:.4}, pmf [{}], E[(Z)_[2]] = {:.4}",
            o_mean(&model, &sample, m, l)?,
            pmf.join(", "),
            z_factorial_moment(&model, &sample, m, l, 2)?
        );
    }
    Ok(())
}
