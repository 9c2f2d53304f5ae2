//! Predictive estimators: the probability that observation `n + m + 1`
//! belongs to a species seen exactly `l` times, split by whether the species
//! is new (first seen among the `m` additional observations) or old, plus the
//! one-step prediction rule and the discovery probability.

use crate::conditional::{base_weight, selection_kernel, ObservedSample};
use crate::error::{Error, Result};
use crate::factorials::{binomial, rising};
use crate::models::{weight_ratio, GibbsModel};
use crate::numeric::{to_probability, SignedLogValue};
use crate::stirling::noncentral_table;
use crate::unconditional::weighted_row_sum;

/// Probability that observation `n + 1` joins an old species seen `l` times:
/// `c_l (l - α) V_{n+1,j} / V_{n,j}`.
pub fn one_step_old_l(model: &(impl GibbsModel + ?Sized), sample: &ObservedSample, l: usize) -> Result<f64> {
    if l == 0 {
        return Err(Error::IndexOutOfRange("l must be at least 1".into()));
    }
    let count = sample.count_of_size(l);
    if count == 0 {
        return Ok(0.0);
    }
    let ratio = weight_ratio(model, (sample.n() + 1, sample.j()), (sample.n(), sample.j()))?;
    Ok(to_probability(
        ratio * SignedLogValue::from_f64(count as f64 * (l as f64 - model.alpha())),
    ))
}

/// Probability that observation `n + 1` is a new species, `V_{n+1,j+1} / V_{n,j}`.
pub fn discovery_probability(model: &(impl GibbsModel + ?Sized), sample: &ObservedSample) -> Result<f64> {
    let ratio = weight_ratio(model, (sample.n() + 1, sample.j() + 1), (sample.n(), sample.j()))?;
    Ok(to_probability(ratio))
}

/// Posterior mean of the probability that observation `n + m + 1` hits a
/// species first observed among the `m` additional observations and seen
/// `l` times by then. Zero when `l > m`.
pub fn estimate_new_l(model: &(impl GibbsModel + ?Sized), sample: &ObservedSample, m: usize, l: usize) -> Result<f64> {
    if l == 0 {
        return Err(Error::IndexOutOfRange("l must be at least 1".into()));
    }
    if l > m {
        return Ok(0.0);
    }
    let kernel = selection_kernel(model, sample, m, sample.n() + m + 1, &[], &[l])?;
    Ok(to_probability(
        kernel * SignedLogValue::from_f64(l as f64 - model.alpha()),
    ))
}

fn check_old_l(sample: &ObservedSample, m: usize, l: usize) -> Result<()> {
    if l == 0 || l > sample.n() + m {
        Err(Error::IndexOutOfRange(format!(
            "l = {l} outside 1..={}",
            sample.n() + m
        )))
    } else {
        Ok(())
    }
}

/// Posterior mean of the probability that observation `n + m + 1` hits an
/// old species seen `l` times among the first `n + m` observations. Blocks
/// with equal original size are handled together.
pub fn estimate_old_l(model: &(impl GibbsModel + ?Sized), sample: &ObservedSample, m: usize, l: usize) -> Result<f64> {
    check_old_l(sample, m, l)?;
    let alpha = model.alpha();
    let (n, j) = (sample.n(), sample.j());
    let base = base_weight(model, sample)?;
    let mut sizes = sample.multiplicities().to_vec();
    sizes.sort_unstable();
    sizes.dedup();
    let mut terms = Vec::new();
    for v in sizes.into_iter().filter(|&v| v <= l && l - v <= m) {
        let rest = m - (l - v);
        let gamma = -(n as f64 - j as f64 * alpha + alpha - v as f64);
        let table = noncentral_table(alpha, gamma, rest)?;
        let sum = weighted_row_sum(model, n + m + 1, j, rest, |a, b| table.get(a, b))?;
        let count = sample.count_of_size(v) as f64;
        terms.push(SignedLogValue::from_f64(count) * binomial(m, l - v) * rising(v as f64 - alpha, l - v) * sum);
    }
    let value = SignedLogValue::from_f64(l as f64 - alpha) * SignedLogValue::sum(terms) / base;
    Ok(to_probability(value))
}

/// [`estimate_old_l`] summed block by block, without grouping.
pub fn estimate_old_l_by_block(
    model: &(impl GibbsModel + ?Sized),
    sample: &ObservedSample,
    m: usize,
    l: usize,
) -> Result<f64> {
    check_old_l(sample, m, l)?;
    let mut terms = Vec::new();
    for &n_i in sample.multiplicities().iter().filter(|&&n_i| n_i <= l) {
        terms.push(selection_kernel(
            model,
            sample,
            m,
            sample.n() + m + 1,
            &[(n_i, l - n_i)],
            &[],
        )?);
    }
    let value = SignedLogValue::from_f64(l as f64 - model.alpha()) * SignedLogValue::sum(terms);
    Ok(to_probability(value))
}

/// Posterior mean of the probability that observation `n + m + 1` is a
/// species seen neither in the basic sample nor in the `m` additional ones:
/// `Σ_k V_{n+m+1,j+k+1} / V_{n,j} · S_{m,k}^{-1,-α,-(n-jα)}`.
pub fn m_step_discovery(model: &(impl GibbsModel + ?Sized), sample: &ObservedSample, m: usize) -> Result<f64> {
    let alpha = model.alpha();
    let table = noncentral_table(alpha, sample.gamma(alpha), m)?;
    let sum = weighted_row_sum(model, sample.n() + m + 1, sample.j() + 1, m, |a, b| table.get(a, b))?;
    Ok(to_probability(sum / base_weight(model, sample)?))
}

/// `m_step_discovery + Σ_l estimate_new_l + Σ_l estimate_old_l`, which
/// should equal one.
pub fn closure_total(model: &(impl GibbsModel + ?Sized), sample: &ObservedSample, m: usize) -> Result<f64> {
    let mut total = m_step_discovery(model, sample, m)?;
    for l in 1..=m {
        total += estimate_new_l(model, sample, m, l)?;
    }
    for l in 1..=sample.n() + m {
        total += estimate_old_l(model, sample, m, l)?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{PitmanYor, WeightTable};
    use approx::assert_abs_diff_eq;

    fn sample(m: &[usize]) -> ObservedSample {
        ObservedSample::new(m.to_vec()).unwrap()
    }

    #[test]
    fn one_step_rule() {
        let theta = 1.7;
        let ewens = PitmanYor::ewens(theta).unwrap();
        let s = sample(&[3, 1, 1, 2]);
        let n = s.n() as f64;
        assert_abs_diff_eq!(
            discovery_probability(&ewens, &s).unwrap(),
            theta / (theta + n),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            one_step_old_l(&ewens, &s, 1).unwrap(),
            2.0 / (theta + n),
            epsilon = 1e-15
        );
        assert_eq!(one_step_old_l(&ewens, &s, 4).unwrap(), 0.0);
        let (alpha, theta) = (0.5, 1.0);
        let py = PitmanYor::new(alpha, theta).unwrap();
        assert_abs_diff_eq!(
            discovery_probability(&py, &s).unwrap(),
            (theta + 4.0 * alpha) / (theta + n),
            epsilon = 1e-15
        );
        for model in [py, ewens, PitmanYor::fisher(-1.0, 5).unwrap()] {
            let total: f64 = discovery_probability(&model, &s).unwrap()
                + (1..=s.n()).map(|l| one_step_old_l(&model, &s, l).unwrap()).sum::<f64>();
            assert_abs_diff_eq!(total, 1.0, epsilon = 1e-14);
            for l in 1..=s.n() {
                assert_abs_diff_eq!(
                    estimate_old_l(&model, &s, 0, l).unwrap(),
                    one_step_old_l(&model, &s, l).unwrap(),
                    epsilon = 1e-14
                );
            }
            assert_abs_diff_eq!(
                m_step_discovery(&model, &s, 0).unwrap(),
                discovery_probability(&model, &s).unwrap(),
                epsilon = 1e-14
            );
        }
        assert!(one_step_old_l(&PitmanYor::ewens(1.0).unwrap(), &s, 0).is_err());
    }

    #[test]
    fn new_l_single_term() {
        let py = PitmanYor::new(0.3, 2.0).unwrap();
        let s = sample(&[2, 1]);
        let expected = 0.7 * (py.weight(5, 3).unwrap() / py.weight(3, 2).unwrap()).to_f64();
        assert_abs_diff_eq!(estimate_new_l(&py, &s, 1, 1).unwrap(), expected, epsilon = 1e-14);
        assert_eq!(estimate_new_l(&py, &s, 2, 3).unwrap(), 0.0);
        assert!(estimate_new_l(&py, &s, 2, 0).is_err());
    }

    #[test]
    fn grouped_matches_block_sum_and_closes() {
        let custom = WeightTable::tabulate(&PitmanYor::new(0.25, 2.0).unwrap(), 20).unwrap();
        let models: Vec<Box<dyn GibbsModel>> = vec![
            Box::new(PitmanYor::new(0.5, 1.0).unwrap()),
            Box::new(PitmanYor::ewens(1.0).unwrap()),
            Box::new(PitmanYor::new(0.75, -0.5).unwrap()),
            Box::new(PitmanYor::fisher(-0.5, 4).unwrap()),
            Box::new(custom),
        ];
        let s = sample(&[2, 1, 2]);
        for model in &models {
            for m in 0..=5 {
                for l in 1..=s.n() + m {
                    let grouped = estimate_old_l(model, &s, m, l).unwrap();
                    assert_abs_diff_eq!(
                        grouped,
                        estimate_old_l_by_block(model, &s, m, l).unwrap(),
                        epsilon = 1e-13
                    );
                    assert!((0.0..=1.0).contains(&grouped));
                }
                assert_abs_diff_eq!(closure_total(model, &s, m).unwrap(), 1.0, epsilon = 1e-12);
            }
        }
        let py = PitmanYor::new(0.5, 1.0).unwrap();
        assert_eq!(estimate_old_l(&py, &sample(&[3, 4]), 1, 2).unwrap(), 0.0);
        assert!(estimate_old_l(&py, &s, 1, 7).is_err());
    }
}
