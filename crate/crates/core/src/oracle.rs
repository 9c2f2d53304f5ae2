//! Brute-force ground truth for small `n`: every set partition of `[n]`
//! (or every continuation of an observed sample) weighted by the EPPF in
//! plain floating point, aggregated by an arbitrary statistic.

use std::collections::BTreeMap;

use crate::conditional::ObservedSample;
use crate::enumerate::compositions;
use crate::error::{Error, Result};
use crate::models::GibbsModel;

/// Largest `n` (or `n + m`) enumerated unless `GIBBS_MAX_N` says otherwise.
pub const DEFAULT_MAX_N: usize = 13;

/// Tolerance on the total enumerated mass.
pub const MASS_TOLERANCE: f64 = 1e-12;

/// Current enumeration guard; `GIBBS_MAX_N` overrides the default at the
/// caller's own risk.
pub fn max_n_guard() -> usize {
    std::env::var("GIBBS_MAX_N")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_N)
}

fn check_guard(n: usize) -> Result<()> {
    let guard = max_n_guard();
    if n > guard {
        Err(Error::OracleGuard { n, guard })
    } else {
        Ok(())
    }
}

/// Set partitions of `[n]` as restricted growth strings: `labels[0] = 0` and
/// each label is at most one more than the largest before it.
#[derive(Debug, Clone)]
pub struct SetPartitions {
    labels: Vec<usize>,
    /// `prefix_max[i]` is the largest label among `labels[..=i]`.
    prefix_max: Vec<usize>,
    done: bool,
}

/// Streams every set partition of `[n]` exactly once; there are Bell(n).
pub fn enumerate_partitions(n: usize) -> Result<SetPartitions> {
    check_guard(n)?;
    Ok(SetPartitions {
        labels: vec![0; n],
        prefix_max: vec![0; n],
        done: n == 0,
    })
}

impl Iterator for SetPartitions {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.labels.clone();
        let n = self.labels.len();
        match (1..n).rev().find(|&i| self.labels[i] <= self.prefix_max[i - 1]) {
            Some(i) => {
                self.labels[i] += 1;
                self.prefix_max[i] = self.prefix_max[i - 1].max(self.labels[i]);
                for t in i + 1..n {
                    self.labels[t] = 0;
                    self.prefix_max[t] = self.prefix_max[i];
                }
            }
            None => self.done = true,
        }
        Some(out)
    }
}

/// A set partition of `[n]` seen through its block sizes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    pub labels: Vec<usize>,
    pub sizes: Vec<usize>,
}

impl Partition {
    fn from_labels(labels: Vec<usize>) -> Self {
        let k = labels.iter().max().map_or(0, |&x| x + 1);
        let mut sizes = vec![0; k];
        for &b in &labels {
            sizes[b] += 1;
        }
        Self { labels, sizes }
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn k(&self) -> usize {
        self.sizes.len()
    }

    pub fn count_of_size(&self, l: usize) -> usize {
        self.sizes.iter().filter(|&&s| s == l).count()
    }
}

fn rising_f64(x: f64, n: usize) -> f64 {
    (0..n).map(|i| x + i as f64).product()
}

/// EPPF in plain floating point.
pub fn eppf_f64(model: &(impl GibbsModel + ?Sized), sizes: &[usize]) -> Result<f64> {
    let n: usize = sizes.iter().sum();
    let v = model.weight_or_zero(n, sizes.len())?.to_f64();
    let alpha = model.alpha();
    Ok(v * sizes.iter().map(|&s| rising_f64(1.0 - alpha, s - 1)).product::<f64>())
}

fn check_mass(total: f64) -> Result<()> {
    if (total - 1.0).abs() > MASS_TOLERANCE {
        Err(Error::OracleMass(total))
    } else {
        Ok(())
    }
}

/// Law of `statistic` over random partitions of `[n]`.
pub fn oracle_distribution<T: Ord>(
    model: &(impl GibbsModel + ?Sized),
    n: usize,
    statistic: impl Fn(&Partition) -> T,
) -> Result<BTreeMap<T, f64>> {
    let mut table = BTreeMap::new();
    let mut total = 0.0;
    for labels in enumerate_partitions(n)? {
        let p = Partition::from_labels(labels);
        let w = eppf_f64(model, &p.sizes)?;
        total += w;
        *table.entry(statistic(&p)).or_insert(0.0) += w;
    }
    check_mass(total)?;
    Ok(table)
}

/// `E[f(Π_n)]` by enumeration.
pub fn oracle_expectation(model: &(impl GibbsModel + ?Sized), n: usize, f: impl Fn(&Partition) -> f64) -> Result<f64> {
    let mut total = 0.0;
    let mut acc = 0.0;
    for labels in enumerate_partitions(n)? {
        let p = Partition::from_labels(labels);
        let w = eppf_f64(model, &p.sizes)?;
        total += w;
        acc += w * f(&p);
    }
    check_mass(total)?;
    Ok(acc)
}

/// One continuation of an observed sample by `m` labelled observations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionalOutcome {
    pub old_increments: Vec<usize>,
    pub new_sizes: Vec<usize>,
    /// Block of each additional observation; labels `>= j` are new blocks.
    pub labels: Vec<usize>,
}

impl ConditionalOutcome {
    pub fn k(&self) -> usize {
        self.new_sizes.len()
    }

    pub fn s(&self) -> usize {
        self.new_sizes.iter().sum()
    }

    pub fn new_of_size(&self, l: usize) -> usize {
        self.new_sizes.iter().filter(|&&s| s == l).count()
    }

    pub fn old_of_size(&self, sample: &ObservedSample, l: usize) -> usize {
        sample
            .multiplicities()
            .iter()
            .zip(&self.old_increments)
            .filter(|&(&n_i, &t)| n_i + t == l)
            .count()
    }
}

/// Visits every placement of `m` labelled observations into old blocks,
/// earlier new blocks or a fresh block, with its conditional probability
/// `EPPF(extended) / EPPF(basic)`.
fn for_each_continuation(
    model: &(impl GibbsModel + ?Sized),
    sample: &ObservedSample,
    m: usize,
    visit: &mut dyn FnMut(&ConditionalOutcome, f64),
) -> Result<f64> {
    check_guard(sample.n() + m)?;
    let basic = eppf_f64(model, sample.multiplicities())?;
    if basic == 0.0 {
        return Err(Error::ZeroProbability("observed sample has zero probability".into()));
    }
    let mut walk = Walk {
        model,
        sample,
        basic,
        labels: vec![0; m],
        sizes: sample.multiplicities().to_vec(),
        total: 0.0,
        visit,
    };
    walk.go(0)?;
    debug_assert_eq!(walk.sizes.len(), sample.j());
    Ok(walk.total)
}

struct Walk<'a, M: ?Sized> {
    model: &'a M,
    sample: &'a ObservedSample,
    basic: f64,
    labels: Vec<usize>,
    sizes: Vec<usize>,
    total: f64,
    visit: &'a mut dyn FnMut(&ConditionalOutcome, f64),
}

impl<M: GibbsModel + ?Sized> Walk<'_, M> {
    fn go(&mut self, pos: usize) -> Result<()> {
        let j = self.sample.j();
        if pos == self.labels.len() {
            let p = eppf_f64(self.model, &self.sizes)? / self.basic;
            self.total += p;
            let outcome = ConditionalOutcome {
                old_increments: self.sizes[..j]
                    .iter()
                    .zip(self.sample.multiplicities())
                    .map(|(s, n)| s - n)
                    .collect(),
                new_sizes: self.sizes[j..].to_vec(),
                labels: self.labels.clone(),
            };
            (self.visit)(&outcome, p);
            return Ok(());
        }
        let open = self.sizes.len();
        for b in 0..=open {
            self.labels[pos] = b;
            if b == open {
                self.sizes.push(1);
            } else {
                self.sizes[b] += 1;
            }
            self.go(pos + 1)?;
            if b == open {
                self.sizes.pop();
            } else {
                self.sizes[b] -= 1;
            }
        }
        Ok(())
    }
}

/// Conditional law of `statistic` given the observed sample.
pub fn oracle_conditional<T: Ord>(
    model: &(impl GibbsModel + ?Sized),
    sample: &ObservedSample,
    m: usize,
    statistic: impl Fn(&ConditionalOutcome) -> T,
) -> Result<BTreeMap<T, f64>> {
    let mut table = BTreeMap::new();
    let total = for_each_continuation(model, sample, m, &mut |o, p| {
        *table.entry(statistic(o)).or_insert(0.0) += p;
    })?;
    check_mass(total)?;
    Ok(table)
}

/// Every continuation with its conditional probability.
pub fn oracle_continuations(
    model: &(impl GibbsModel + ?Sized),
    sample: &ObservedSample,
    m: usize,
) -> Result<Vec<(ConditionalOutcome, f64)>> {
    let mut all = Vec::new();
    let total = for_each_continuation(model, sample, m, &mut |o, p| all.push((o.clone(), p)))?;
    check_mass(total)?;
    Ok(all)
}

/// Conditional expectation of `f` given the observed sample.
pub fn oracle_conditional_expectation(
    model: &(impl GibbsModel + ?Sized),
    sample: &ObservedSample,
    m: usize,
    f: impl Fn(&ConditionalOutcome) -> f64,
) -> Result<f64> {
    let mut acc = 0.0;
    let total = for_each_continuation(model, sample, m, &mut |o, p| acc += p * f(o))?;
    check_mass(total)?;
    Ok(acc)
}

/// Bell numbers by the Bell triangle.
pub fn bell(n: usize) -> u128 {
    let mut row = vec![1u128];
    for _ in 0..n {
        let mut next = vec![*row.last().unwrap()];
        for &x in &row {
            next.push(next.last().unwrap() + x);
        }
        row = next;
    }
    row[0]
}

/// Unsigned Stirling numbers of the first kind.
pub fn unsigned_stirling_first(n: usize, k: usize) -> u128 {
    let mut row = vec![1u128];
    for i in 0..n {
        let mut next = vec![0u128; i + 2];
        for (j, &x) in row.iter().enumerate() {
            next[j + 1] += x;
            next[j] += i as u128 * x;
        }
        row = next;
    }
    row.get(k).copied().unwrap_or(0)
}

/// Generalized Stirling number `S_{n,k}^{-1,-α,0}` as
/// `(1/k!) Σ_{compositions (n_1..n_k) of n} n!/Π n_i! · Π (1-α)_{n_i-1}`.
pub fn stirling_by_compositions(n: usize, k: usize, alpha: f64) -> f64 {
    if n == 0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    let fact = |x: usize| (1..=x).map(|i| i as f64).product::<f64>();
    let sum: f64 = compositions(n)
        .filter(|c| c.len() == k)
        .map(|c| {
            fact(n)
                * c.iter()
                    .map(|&p| rising_f64(1.0 - alpha, p - 1) / fact(p))
                    .product::<f64>()
        })
        .sum();
    sum / fact(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::PitmanYor;
    use approx::assert_abs_diff_eq;

    #[test]
    fn bell_counts() {
        for (n, expected) in [(1, 1), (2, 2), (3, 5), (4, 15), (5, 52), (8, 4140)] {
            assert_eq!(enumerate_partitions(n).unwrap().count() as u128, expected);
            assert_eq!(bell(n), expected);
        }
        assert_eq!(bell(13), 27_644_437);
        assert_eq!(enumerate_partitions(1).unwrap().collect::<Vec<_>>(), vec![vec![0]]);
    }

    #[test]
    fn guard_applies() {
        assert!(
            matches!(enumerate_partitions(DEFAULT_MAX_N + 1), Err(Error::OracleGuard { .. }))
                || max_n_guard() > DEFAULT_MAX_N
        );
    }

    #[test]
    fn first_kind_table() {
        assert_eq!(unsigned_stirling_first(4, 2), 11);
        assert_eq!(unsigned_stirling_first(5, 3), 35);
        assert_eq!(unsigned_stirling_first(3, 5), 0);
        assert_abs_diff_eq!(stirling_by_compositions(4, 2, 0.0), 11.0, epsilon = 1e-12);
    }

    #[test]
    fn constant_statistic_is_one_atom() {
        let py = PitmanYor::new(0.3, 2.0).unwrap();
        let table = oracle_distribution(&py, 6, |_| ()).unwrap();
        assert_abs_diff_eq!(table[&()], 1.0, epsilon = 1e-12);
        let s = ObservedSample::new(vec![2, 1]).unwrap();
        let table = oracle_conditional(&py, &s, 1, |o| o.k()).unwrap();
        let disc = (py.weight(4, 3).unwrap() / py.weight(3, 2).unwrap()).to_f64();
        assert_abs_diff_eq!(table[&1], disc, epsilon = 1e-14);
        assert_abs_diff_eq!(table[&0], 1.0 - disc, epsilon = 1e-14);
    }
}
