//! A model given only by its weight triangle: build one from JSON, check the
//! backward recursion, and use it like any other model.

use gibbs_partitions::estimators::discovery_probability;
use gibbs_partitions::models::verify_backward_recursion;
use gibbs_partitions::unconditional::kn_pmf;
use gibbs_partitions::{GibbsModel, ObservedSample, PitmanYor, WeightTable};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Tabulate a Fisher model (two species) and round-trip it through JSON.
    let fisher = PitmanYor::fisher(-1.0, 2)?;
    let json = serde_json::to_string(&WeightTable::tabulate(&fisher, 8)?.to_file())?;
    let table = WeightTable::from_json(&json)?;
    println!("table covers n <= {:?}", table.max_n());

    let check = verify_backward_recursion(&table, 7)?;
    println!(
        "recursion holds: {} (worst relative error {:.1e})",
        check.holds, check.worst_relative_error
    );
    println!("P(K_8 = k): {:?}", kn_pmf(&table, 8)?);
    let sample = ObservedSample::new(vec![3, 1])?;
    println!("P(third species) = {}", discovery_probability(&table, &sample)?);

    // A table violating the recursion is rejected.
    let bad = r#"{"alpha": 0.0, "maxN": 2, "rows": [[1.0], [0.3, 0.3]]}"#;
    println!("bad table: {}", WeightTable::from_json(bad).unwrap_err());
    Ok(())
}
