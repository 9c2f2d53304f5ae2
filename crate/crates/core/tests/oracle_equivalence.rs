use gibbs_partitions::estimators::discovery_probability;
use gibbs_partitions::oracle::{self, bell, enumerate_partitions};
use gibbs_partitions::verify::{verify_conditional_all, verify_unconditional, TOLERANCE};
use gibbs_partitions::{GibbsModel, ObservedSample, PitmanYor, WeightTable};

fn grid() -> Vec<(String, Box<dyn GibbsModel>)> {
    let mut models: Vec<(String, Box<dyn GibbsModel>)> = [(0.0, 1.0), (0.5, 1.0), (0.25, 2.0), (0.75, -0.5)]
        .into_iter()
        .map(|(a, t)| {
            (
                format!("PY({a}, {t})"),
                Box::new(PitmanYor::new(a, t).unwrap()) as Box<dyn GibbsModel>,
            )
        })
        .collect();
    models.push(("Fisher(-1, 3)".into(), Box::new(PitmanYor::fisher(-1.0, 3).unwrap())));
    let table = WeightTable::tabulate(&PitmanYor::new(0.3, 2.0).unwrap(), 12).unwrap();
    models.push(("table PY(0.3, 2)".into(), Box::new(table)));
    models
}

#[test]
fn partitions_are_counted_by_bell_numbers() {
    for (n, expected) in [(1, 1), (3, 5), (5, 52), (8, 4140)] {
        assert_eq!(enumerate_partitions(n).unwrap().count() as u128, expected);
        assert_eq!(bell(n), expected);
    }
}

#[test]
fn oracle_guard_rejects_large_n() {
    assert!(enumerate_partitions(oracle::DEFAULT_MAX_N + 1).is_err());
}

#[test]
fn constant_statistic_is_one_atom() {
    let py = PitmanYor::new(0.5, 1.0).unwrap();
    let table = oracle::oracle_distribution(&py, 6, |_| ()).unwrap();
    assert_eq!(table.len(), 1);
    assert!((table[&()] - 1.0).abs() < 1e-12);
}

#[test]
fn one_more_observation_opens_a_block_with_discovery_probability() {
    for (name, model) in grid() {
        let sample = ObservedSample::new(vec![2, 1]).unwrap();
        let law = oracle::oracle_conditional(&model, &sample, 1, |o| o.k()).unwrap();
        let disc = discovery_probability(&model, &sample).unwrap();
        assert!((law[&1] - disc).abs() < TOLERANCE, "{name}");
        assert!((law[&0] - (1.0 - disc)).abs() < TOLERANCE, "{name}");
    }
}

#[test]
fn unconditional_closed_forms_match_enumeration() {
    for (name, model) in grid() {
        for n in 1..=7 {
            let report = verify_unconditional(&model, n).unwrap();
            assert!(
                report.passed(TOLERANCE),
                "{name} n={n}: max deviation {:e}",
                report.max_deviation()
            );
        }
    }
}

#[test]
fn conditional_closed_forms_match_enumeration() {
    for (name, model) in grid() {
        for n in 1..=4 {
            for m in 0..=3 {
                let report = verify_conditional_all(&model, n, m).unwrap();
                assert!(
                    report.passed(TOLERANCE),
                    "{name} n={n} m={m}: max deviation {:e}",
                    report.max_deviation()
                );
            }
        }
    }
}
