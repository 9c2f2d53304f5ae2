//! Closed forms against exhaustive enumeration. Every law, moment and
//! estimator is recomputed from the oracle tables and the worst absolute
//! deviation is reported per quantity.

use std::collections::BTreeMap;

use crate::conditional::{self as cond, NewBlockOutcome, ObservedSample};
use crate::error::Result;
use crate::estimators;
use crate::models::GibbsModel;
use crate::oracle::{self, ConditionalOutcome};
use crate::polya::{self, OldAllocation};
use crate::stirling::central_table;
use crate::unconditional::{self as uncond, Composition, CountsVector};

/// Default tolerance for a passing check.
pub const TOLERANCE: f64 = 1e-10;

/// Worst deviation seen for one quantity.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub max_deviation: f64,
    pub comparisons: usize,
}

/// All checks from one or more verification runs.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct VerifyReport {
    checks: BTreeMap<String, Check>,
}

impl VerifyReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn compare(&mut self, name: &str, closed: f64, exact: f64) {
        let dev = (closed - exact).abs();
        let check = self.checks.entry(name.to_string()).or_insert_with(|| Check {
            name: name.to_string(),
            max_deviation: 0.0,
            comparisons: 0,
        });
        // NaN must not hide behind `max`.
        if dev.is_nan() || dev > check.max_deviation {
            check.max_deviation = if dev.is_nan() { f64::INFINITY } else { dev };
        }
        check.comparisons += 1;
    }

    /// Records `|closed - exact| / max(1, |exact|)`, for quantities that are
    /// not bounded by one.
    pub fn compare_relative(&mut self, name: &str, closed: f64, exact: f64) {
        let scale = exact.abs().max(1.0);
        self.compare(name, closed / scale, exact / scale);
    }

    pub fn merge(&mut self, other: VerifyReport) {
        for (name, c) in other.checks {
            let entry = self.checks.entry(name).or_insert_with(|| Check {
                max_deviation: 0.0,
                comparisons: 0,
                ..c.clone()
            });
            entry.max_deviation = entry.max_deviation.max(c.max_deviation);
            entry.comparisons += c.comparisons;
        }
    }

    pub fn checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.values()
    }

    pub fn max_deviation(&self) -> f64 {
        self.checks.values().map(|c| c.max_deviation).fold(0.0, f64::max)
    }

    pub fn comparisons(&self) -> usize {
        self.checks.values().map(|c| c.comparisons).sum()
    }

    pub fn passed(&self, tolerance: f64) -> bool {
        self.max_deviation() <= tolerance
    }
}

/// Order vectors `(r_1, ..., r_len)` with `Σ l r_l ≤ budget`, `Σ r_l ≤
/// max_total` and at least one nonzero entry.
pub fn order_vectors(len: usize, budget: usize, max_total: usize) -> Vec<Vec<usize>> {
    fn go(l: usize, len: usize, budget: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if l > len {
            if cur.iter().any(|&r| r > 0) {
                out.push(cur.clone());
            }
            return;
        }
        for r in 0..=left.min(budget / l) {
            cur.push(r);
            go(l + 1, len, budget - l * r, left - r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, len, budget, max_total, &mut Vec::new(), &mut out);
    out
}

fn falling(x: usize, r: usize) -> f64 {
    (0..r).map(|i| x as f64 - i as f64).product()
}

fn rising(x: f64, n: usize) -> f64 {
    (0..n).map(|i| x + i as f64).product()
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

fn multiset_key(sizes: &[usize]) -> Vec<usize> {
    let mut v = sizes.to_vec();
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}

/// `Π_v (multiplicity of v)!`: permutations of a tuple that leave it fixed.
fn stabilizer(sizes: &[usize]) -> f64 {
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for &s in sizes {
        *counts.entry(s).or_default() += 1;
    }
    counts.values().map(|&c| factorial(c)).product()
}

/// Number of ordered tuples of distinct blocks whose sizes read `parts`.
fn ordered_matches(sizes: &[usize], parts: &[usize]) -> f64 {
    fn go(sizes: &[usize], used: &mut [bool], parts: &[usize]) -> f64 {
        let Some((&first, rest)) = parts.split_first() else {
            return 1.0;
        };
        let mut total = 0.0;
        for i in 0..sizes.len() {
            if !used[i] && sizes[i] == first {
                used[i] = true;
                total += go(sizes, used, rest);
                used[i] = false;
            }
        }
        total
    }
    go(sizes, &mut vec![false; sizes.len()], parts)
}

/// Pitman-Yor closed form of `E[Π_l (C_{l,n})_{[r_l]}]`:
/// `n!/(n-M)! Π_l [(1-α)_{l-1}/l!]^{r_l} (θ+α)_{R-1↑α} (θ+Rα)_{n-M} / (θ+1)_{n-1}`
/// with `M = Σ l r_l`, `R = Σ r_l ≥ 1`.
pub fn py_joint_moments_closed_form(alpha: f64, theta: f64, n: usize, orders: &[usize]) -> f64 {
    let big_m: usize = orders.iter().enumerate().map(|(i, &r)| (i + 1) * r).sum();
    let big_r: usize = orders.iter().sum();
    if big_m > n {
        return 0.0;
    }
    if big_r == 0 {
        return 1.0;
    }
    let mut value = factorial(n) / factorial(n - big_m);
    for (i, &r) in orders.iter().enumerate() {
        let l = i + 1;
        value *= (rising(1.0 - alpha, l - 1) / factorial(l)).powi(r as i32);
    }
    let step: f64 = (1..big_r).map(|i| theta + i as f64 * alpha).product();
    value * step * rising(theta + big_r as f64 * alpha, n - big_m) / rising(theta + 1.0, n - 1)
}

/// Ewens closed form `1{M ≤ n} n!/(n-M)! Π_l (θ/l)^{r_l} Γ(θ+n-M)/Γ(θ+n)`.
pub fn ewens_joint_moments_closed_form(theta: f64, n: usize, orders: &[usize]) -> f64 {
    let big_m: usize = orders.iter().enumerate().map(|(i, &r)| (i + 1) * r).sum();
    if big_m > n {
        return 0.0;
    }
    let mut value = factorial(n) / factorial(n - big_m);
    for (i, &r) in orders.iter().enumerate() {
        value *= (theta / (i + 1) as f64).powi(r as i32);
    }
    // Γ(θ+n-M)/Γ(θ+n) = 1/(θ+n-M)_M
    value / rising(theta + (n - big_m) as f64, big_m)
}

/// Unconditional laws and moments at sample size `n`.
pub fn verify_unconditional(model: &(impl GibbsModel + ?Sized), n: usize) -> Result<VerifyReport> {
    let mut rep = VerifyReport::new();
    let alpha = model.alpha();
    // Mass of each composition in order of appearance.
    let by_appearance = oracle::oracle_distribution(model, n, |p| p.sizes.clone())?;
    let mass_where = |pred: &dyn Fn(&[usize]) -> f64| -> f64 { by_appearance.iter().map(|(c, w)| w * pred(c)).sum() };

    let table = central_table(alpha, n)?;
    for k in 1..=n {
        rep.compare_relative(
            "stirling",
            table.get(n, k).to_f64(),
            oracle::stirling_by_compositions(n, k, alpha),
        );
    }

    let kn = uncond::kn_pmf(model, n)?;
    for (k, &p) in kn.iter().enumerate() {
        rep.compare("kn_law", p, mass_where(&|c| (c.len() == k) as u8 as f64));
    }

    for l in 1..=n {
        let count = |c: &[usize]| c.iter().filter(|&&s| s == l).count();
        for (x, &p) in uncond::cl_pmf(model, n, l)?.iter().enumerate() {
            rep.compare("cl_law", p, mass_where(&|c| (count(c) == x) as u8 as f64));
            if l == 1 {
                rep.compare(
                    "singleton_law",
                    uncond::singleton_law(model, n, x)?,
                    mass_where(&|c| (count(c) == x) as u8 as f64),
                );
            }
        }
        rep.compare(
            "cl_mean",
            uncond::cl_mean(model, n, l)?,
            mass_where(&|c| count(c) as f64),
        );
        for r in 0..=n / l {
            rep.compare(
                "cl_factorial_moment",
                uncond::cl_factorial_moment(model, n, l, r)?,
                mass_where(&|c| falling(count(c), r)),
            );
        }
    }

    for orders in order_vectors(n, n, n) {
        let exact = mass_where(&|c| {
            orders
                .iter()
                .enumerate()
                .map(|(i, &r)| falling(c.iter().filter(|&&s| s == i + 1).count(), r))
                .product()
        });
        rep.compare(
            "joint_factorial_moments",
            uncond::joint_factorial_moments(model, n, &orders)?,
            exact,
        );
    }

    let mut by_multiset: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
    for (c, &w) in &by_appearance {
        *by_multiset.entry(multiset_key(c)).or_default() += w;
    }
    for (c, &w) in &by_appearance {
        let comp = Composition::new(c.clone())?;
        rep.compare("size_biased_joint", uncond::size_biased_joint(model, &comp)?, w);
        let exchangeable = by_multiset[&multiset_key(c)] * stabilizer(c) / factorial(c.len());
        rep.compare(
            "multivariate_gibbs",
            uncond::multivariate_gibbs(model, &comp)?,
            exchangeable,
        );
    }
    for (key, &w) in &by_multiset {
        rep.compare(
            "gibbs_sampling_formula",
            uncond::gibbs_sampling_formula(model, &Composition::new(key.clone())?.counts())?,
            w,
        );
        let mut counts = vec![0; n];
        key.iter().for_each(|&s| counts[s - 1] += 1);
        rep.compare(
            "gibbs_sampling_formula",
            uncond::gibbs_sampling_formula(model, &CountsVector::new(counts)?)?,
            w,
        );
    }

    // First r blocks in exchangeable random order.
    for r in 1..=n.min(2) {
        for parts in crate::enumerate::weak_compositions(n, r + 1)
            .filter(|v| v[..r].iter().all(|&p| p > 0))
            .map(|v| v[..r].to_vec())
        {
            let mut sizes_total = 0.0;
            for (k, &p_k) in kn.iter().enumerate().skip(r) {
                let exact = mass_where(&|c| {
                    if c.len() == k {
                        ordered_matches(c, &parts) / falling(k, r)
                    } else {
                        0.0
                    }
                });
                sizes_total += exact;
                rep.compare("r_marginal", uncond::r_marginal(model, n, &parts, k)?, exact);
                if p_k > 0.0 {
                    rep.compare(
                        "marginal_given_kn",
                        uncond::marginal_given_kn(alpha, &parts, n, k)?,
                        exact / p_k,
                    );
                }
            }
            rep.compare("sizes_marginal", uncond::sizes_marginal(model, n, &parts)?, sizes_total);
        }
    }
    for (k, &p_k) in kn.iter().enumerate().skip(1) {
        if p_k > 0.0 {
            let exact = mass_where(&|c| {
                if c.len() == k {
                    c.iter().sum::<usize>() as f64 / k as f64
                } else {
                    0.0
                }
            }) / p_k;
            rep.compare(
                "expected_first_block_given_kn",
                uncond::expected_first_block_given_kn(alpha, n, k)?,
                exact,
            );
        }
    }
    Ok(rep)
}

/// Conditional, Pólya and estimator quantities for one observed sample and
/// `m` additional observations.
pub fn verify_conditional(
    model: &(impl GibbsModel + ?Sized),
    sample: &ObservedSample,
    m: usize,
) -> Result<VerifyReport> {
    let mut rep = VerifyReport::new();
    let alpha = model.alpha();
    let (n, j) = (sample.n(), sample.j());
    let all = oracle::oracle_continuations(model, sample, m)?;
    let expect = |f: &dyn Fn(&ConditionalOutcome) -> f64| -> f64 { all.iter().map(|(o, p)| p * f(o)).sum() };

    for (o, p) in &all {
        rep.compare(
            "crp_mixed",
            cond::crp_mixed(model, sample, &o.old_increments, &o.new_sizes)?,
            *p,
        );
    }

    for (k, &p) in cond::new_blocks_pmf(model, sample, m)?.iter().enumerate() {
        rep.compare("new_blocks_law", p, expect(&|o| (o.k() == k) as u8 as f64));
    }
    rep.compare(
        "new_blocks_mean",
        cond::new_blocks_mean(model, sample, m)?,
        expect(&|o| o.k() as f64),
    );

    for l in 1..=m {
        for (x, &p) in cond::w_pmf(model, sample, m, l)?.iter().enumerate() {
            rep.compare("w_law", p, expect(&|o| (o.new_of_size(l) == x) as u8 as f64));
        }
        rep.compare(
            "w_mean",
            cond::w_mean(model, sample, m, l)?,
            expect(&|o| o.new_of_size(l) as f64),
        );
        for r in 0..=m / l {
            rep.compare(
                "w_factorial_moment",
                cond::w_factorial_moment(model, sample, m, l, r)?,
                expect(&|o| falling(o.new_of_size(l), r)),
            );
        }
    }
    for x in 0..=m {
        rep.compare(
            "new_singletons_law",
            cond::new_singletons_law(model, sample, m, x)?,
            expect(&|o| (o.new_of_size(1) == x) as u8 as f64),
        );
    }
    for orders in order_vectors(m, m, m) {
        let exact = expect(&|o| {
            orders
                .iter()
                .enumerate()
                .map(|(i, &r)| falling(o.new_of_size(i + 1), r))
                .product()
        });
        rep.compare(
            "w_joint_factorial_moments",
            cond::w_joint_factorial_moments(model, sample, m, &orders)?,
            exact,
        );
    }

    // New-block sizes: counts vectors and exchangeable order.
    let mut by_counts: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
    let mut by_multiset: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
    let mut by_s: BTreeMap<usize, f64> = BTreeMap::new();
    let mut by_ks: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for (o, p) in &all {
        let mut w = vec![0; m];
        o.new_sizes.iter().for_each(|&s| w[s - 1] += 1);
        *by_counts.entry(w).or_default() += p;
        *by_multiset.entry(multiset_key(&o.new_sizes)).or_default() += p;
        *by_s.entry(o.s()).or_default() += p;
        *by_ks.entry((o.k(), o.s())).or_default() += p;
    }
    for (w, &p) in &by_counts {
        rep.compare(
            "conditional_sampling_formula",
            cond::conditional_sampling_formula(model, sample, m, w)?,
            p,
        );
    }
    for s in 0..=m {
        for sizes in crate::enumerate::compositions(s).chain((s == 0).then(Vec::new)) {
            let outcome = NewBlockOutcome::new(sizes.clone())?;
            let joint = by_multiset.get(&multiset_key(&sizes)).copied().unwrap_or(0.0) * stabilizer(&sizes)
                / factorial(sizes.len());
            rep.compare(
                "new_block_joint",
                cond::new_block_joint(model, sample, m, &outcome)?,
                joint,
            );
            if !sizes.is_empty() {
                rep.compare(
                    "conditional_multivariate_gibbs",
                    cond::conditional_multivariate_gibbs(model, sample, m, &sizes)?,
                    joint,
                );
            }
            if let Some(&ps) = by_s.get(&s).filter(|&&p| p > 0.0) {
                rep.compare(
                    "new_block_given_s",
                    cond::new_block_given_s(model, sample, m, &outcome)?,
                    joint / ps,
                );
            }
            if let Some(&pks) = by_ks.get(&(sizes.len(), s)).filter(|&&p| p > 0.0) {
                if !sizes.is_empty() {
                    rep.compare(
                        "new_sizes_given_km_s",
                        cond::new_sizes_given_km_s(alpha, &outcome)?,
                        joint / pks,
                    );
                }
            }
        }
    }
    for r in 1..=m.min(2) {
        for v in crate::enumerate::weak_compositions(m, r + 1) {
            let parts = &v[..r];
            if parts.contains(&0) {
                continue;
            }
            for k in r..=m {
                let exact = expect(&|o| {
                    if o.k() == k {
                        ordered_matches(&o.new_sizes, parts) / falling(k, r)
                    } else {
                        0.0
                    }
                });
                rep.compare(
                    "conditional_marginal",
                    cond::conditional_marginal(model, sample, m, parts, k)?,
                    exact,
                );
            }
        }
    }

    // Old blocks.
    let mut by_alloc: BTreeMap<(Vec<usize>, usize), f64> = BTreeMap::new();
    for (o, p) in &all {
        *by_alloc.entry((o.old_increments.clone(), o.s())).or_default() += p;
    }
    for v in crate::enumerate::weak_compositions(m, j + 1) {
        let alloc = OldAllocation::new(v[..j].to_vec(), v[j]);
        let exact = by_alloc.get(&(v[..j].to_vec(), v[j])).copied().unwrap_or(0.0);
        rep.compare(
            "polya_gibbs_joint",
            polya::polya_gibbs_joint(model, sample, m, &alloc)?,
            exact,
        );
    }
    for r in 1..=j.min(2) {
        for v in crate::enumerate::weak_compositions(m, r + 1) {
            let first = &v[..r];
            let exact = expect(&|o| (o.old_increments[..r] == *first) as u8 as f64);
            rep.compare(
                "old_increments_marginal",
                polya::old_increments_marginal(model, sample, m, first)?,
                exact,
            );
        }
    }
    for i in 0..j {
        for t in 0..=m {
            rep.compare(
                "old_increment_marginal",
                polya::old_increment_marginal(model, sample, m, i, t)?,
                expect(&|o| (o.old_increments[i] == t) as u8 as f64),
            );
        }
    }
    for l in 1..=n + m {
        for (y, &p) in polya::o_pmf(model, sample, m, l)?.iter().enumerate() {
            rep.compare("o_law", p, expect(&|o| (o.old_of_size(sample, l) == y) as u8 as f64));
        }
        rep.compare(
            "o_mean",
            polya::o_mean(model, sample, m, l)?,
            expect(&|o| o.old_of_size(sample, l) as f64),
        );
        for r in 0..=j.min(3) {
            let exact = expect(&|o| falling(o.old_of_size(sample, l), r));
            rep.compare(
                "o_factorial_moment",
                polya::o_factorial_moment(model, sample, m, l, r)?,
                exact,
            );
            let exact_z = expect(&|o| falling(o.old_of_size(sample, l) + o.new_of_size(l), r));
            rep.compare(
                "z_factorial_moment",
                polya::z_factorial_moment(model, sample, m, l, r)?,
                exact_z,
            );
        }
    }
    for orders in order_vectors(n + m, usize::MAX / 2, 2) {
        let exact = expect(&|o| {
            orders
                .iter()
                .enumerate()
                .map(|(i, &r)| falling(o.old_of_size(sample, i + 1), r))
                .product()
        });
        rep.compare(
            "o_joint_factorial_moments",
            polya::o_joint_factorial_moments(model, sample, m, &orders)?,
            exact,
        );
    }

    // Estimators: posterior means of the one-step rule at n + m.
    let step = |o: &ConditionalOutcome, extra_blocks: usize| -> Result<f64> {
        let den = model.weight_or_zero(n + m, j + o.k())?;
        if den.is_zero() {
            // Continuation past a finite capacity; it has probability zero.
            return Ok(0.0);
        }
        Ok((model.weight_or_zero(n + m + 1, j + o.k() + extra_blocks)? / den).to_f64())
    };
    let mut stay = Vec::with_capacity(all.len());
    let mut fresh = Vec::with_capacity(all.len());
    for (o, _) in &all {
        stay.push(step(o, 0)?);
        fresh.push(step(o, 1)?);
    }
    let posterior = |f: &dyn Fn(usize, &ConditionalOutcome) -> f64| -> f64 {
        all.iter().enumerate().map(|(i, (o, p))| p * f(i, o)).sum()
    };
    rep.compare(
        "m_step_discovery",
        estimators::m_step_discovery(model, sample, m)?,
        posterior(&|i, _| fresh[i]),
    );
    for l in 1..=m {
        let exact = posterior(&|i, o| (l as f64 - alpha) * o.new_of_size(l) as f64 * stay[i]);
        rep.compare(
            "estimate_new_l",
            estimators::estimate_new_l(model, sample, m, l)?,
            exact,
        );
    }
    for l in 1..=n + m {
        let exact = posterior(&|i, o| (l as f64 - alpha) * o.old_of_size(sample, l) as f64 * stay[i]);
        rep.compare(
            "estimate_old_l",
            estimators::estimate_old_l(model, sample, m, l)?,
            exact,
        );
        rep.compare(
            "estimate_old_l_by_block",
            estimators::estimate_old_l_by_block(model, sample, m, l)?,
            exact,
        );
    }
    rep.compare("estimator_closure", estimators::closure_total(model, sample, m)?, 1.0);
    Ok(rep)
}

/// [`verify_conditional`] over every observed sample of size `n` (one per
/// integer partition) that the model can produce.
pub fn verify_conditional_all(model: &(impl GibbsModel + ?Sized), n: usize, m: usize) -> Result<VerifyReport> {
    let mut rep = VerifyReport::new();
    for parts in crate::enumerate::integer_partitions(n) {
        if model.capacity().is_some_and(|c| parts.len() > c) {
            continue;
        }
        rep.merge(verify_conditional(model, &ObservedSample::new(parts)?, m)?);
    }
    Ok(rep)
}
