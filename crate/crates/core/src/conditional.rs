//! Laws of an additional sample of size `m` given a basic sample with
//! multiplicities `(n_1, ..., n_j)`: the multistep Chinese restaurant
//! probabilities, the joint law of the number and sizes of new blocks, its
//! marginals, and the laws and factorial moments of `W_{l,m}`, the number of
//! new blocks of size `l`.
//!
//! Everything about new blocks depends on the basic sample only through
//! `(n, j)`; the functions still take an [`ObservedSample`] so callers state
//! what is conditioned on. Non-central Stirling numbers appear with
//! `γ = -(n - jα)`.

use crate::error::{Error, Result};
use crate::factorials::{factorial, falling_factorial, rising};
use crate::models::GibbsModel;
use crate::numeric::{to_probability, SignedLogValue};
use crate::stirling::{central_table, noncentral_table};
use crate::unconditional::{block_weight, weighted_row_sum};

/// Multiplicities `(n_1, ..., n_j)` of the species seen in a basic sample.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ObservedSample {
    multiplicities: Vec<usize>,
    n: usize,
}

impl ObservedSample {
    pub fn new(multiplicities: Vec<usize>) -> Result<Self> {
        if multiplicities.is_empty() {
            return Err(Error::InvalidSample("no species observed".into()));
        }
        if let Some(pos) = multiplicities.iter().position(|&c| c == 0) {
            return Err(Error::InvalidSample(format!(
                "species {} has multiplicity zero",
                pos + 1
            )));
        }
        let n = multiplicities.iter().sum();
        Ok(Self { multiplicities, n })
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn j(&self) -> usize {
        self.multiplicities.len()
    }

    /// `c_{l,n}`, the number of species seen exactly `l` times.
    pub fn count_of_size(&self, l: usize) -> usize {
        self.multiplicities.iter().filter(|&&c| c == l).count()
    }

    /// `-(n - jα)`, the non-central parameter of new-block laws.
    pub fn gamma(&self, alpha: f64) -> f64 {
        -(self.n as f64 - self.j() as f64 * alpha)
    }
}

/// New blocks formed by the additional sample: `k` blocks with sizes
/// `(s_1, ..., s_k)` holding `s` observations in total. The empty outcome is
/// the event that no new block appears.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NewBlockOutcome {
    sizes: Vec<usize>,
    s: usize,
}

impl NewBlockOutcome {
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.contains(&0) {
            return Err(Error::Constraint("new block sizes must be positive".into()));
        }
        let s = sizes.iter().sum();
        Ok(Self { sizes, s })
    }

    pub fn empty() -> Self {
        Self {
            sizes: Vec::new(),
            s: 0,
        }
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn k(&self) -> usize {
        self.sizes.len()
    }

    pub fn s(&self) -> usize {
        self.s
    }
}

/// `V_{n,j}`, rejecting samples the model cannot produce.
pub(crate) fn base_weight(model: &(impl GibbsModel + ?Sized), sample: &ObservedSample) -> Result<SignedLogValue> {
    if let Some(capacity) = model.capacity() {
        if sample.j() > capacity {
            return Err(Error::InvalidSample(format!(
                "{} species observed but the model has {capacity} classes",
                sample.j()
            )));
        }
    }
    let v = model.weight_or_zero(sample.n, sample.j())?;
    if v.is_zero() {
        return Err(Error::ZeroProbability(format!("V({}, {}) = 0", sample.n, sample.j())));
    }
    Ok(v)
}

fn inv_factorials(parts: &[usize]) -> SignedLogValue {
    parts.iter().map(|&p| factorial(p)).product::<SignedLogValue>().recip()
}

fn new_block_product(alpha: f64, sizes: &[usize]) -> SignedLogValue {
    sizes.iter().map(|&s| block_weight(alpha, s)).product()
}

fn old_product(alpha: f64, sample: &ObservedSample, increments: &[usize]) -> SignedLogValue {
    sample
        .multiplicities
        .iter()
        .zip(increments)
        .map(|(&n_i, &m_i)| rising(n_i as f64 - alpha, m_i))
        .product()
}

fn check_alloc(sample: &ObservedSample, alloc: &[usize]) -> Result<usize> {
    if alloc.len() != sample.j() {
        return Err(Error::Constraint(format!(
            "allocation has {} entries for {} old blocks",
            alloc.len(),
            sample.j()
        )));
    }
    Ok(alloc.iter().sum())
}

/// Probability that the next `m` customers all join old tables with
/// increments `(m_1, ..., m_j)`.
pub fn crp_all_old(model: &(impl GibbsModel + ?Sized), sample: &ObservedSample, alloc: &[usize]) -> Result<f64> {
    crp_mixed(model, sample, alloc, &[])
}

/// Probability that the next `m` customers all sit at new tables, in a given
/// seating with table sizes `(s_1, ..., s_k)`.
pub fn crp_all_new(model: &(impl GibbsModel + ?Sized), sample: &ObservedSample, sizes: &[usize]) -> Result<f64> {
    if sizes.is_empty() {
        return Err(Error::Constraint("no new tables given".into()));
    }
    crp_mixed(model, sample, &vec![0; sample.j()], sizes)
}

/// Probability of one particular seating of the next customers: increments
/// `(m_1, ..., m_j)` at old tables and new tables of sizes `(s_1, ..., s_k)`.
pub fn crp_mixed(
    model: &(impl GibbsModel + ?Sized),
    sample: &ObservedSample,
    alloc: &[usize],
    sizes: &[usize],
) -> Result<f64> {
    let old = check_alloc(sample, alloc)?;
    if sizes.contains(&0) {
        return Err(Error::Constraint("new table sizes must be positive".into()));
    }
    let m = old + sizes.iter().sum::<usize>();
    let alpha = model.alpha();
    let v = model.weight_or_zero(sample.n + m, sample.j() + sizes.len())? / base_weight(model, sample)?;
    Ok(to_probability(
        v * old_product(alpha, sample, alloc) * new_block_product(alpha, sizes),
    ))
}

/// `P(K_m = k, S_m = s, S_1 = s_1, ..., S_k = s_k)` for new-block sizes in
/// exchangeable random order. The empty outcome has probability
/// `(V_{n+m,j} / V_{n,j}) (n - jα)_m`.
pub fn new_block_joint(
    model: &(impl GibbsModel + ?Sized),
    sample: &ObservedSample,
    m: usize,
    outcome: &NewBlockOutcome,
) -> Result<f64> {
    if outcome.s > m {
        return Err(Error::Constraint(format!(
            "new blocks hold {} > m = {m} observations",
            outcome.s
        )));
    }
    let alpha = model.alpha();
    let k = outcome.k();
    let value = factorial(m) * inv_factorials(&outcome.sizes) / factorial(k) / factorial(m - outcome.s)
        * model.weight_or_zero(sample.n + m, sample.j() + k)?
        / base_weight(model, sample)?
        * rising(-sample.gamma(alpha), m - outcome.s)
        * new_block_product(alpha, &outcome.sizes);
    Ok(to_probability(value))
}

/// `P(K_m = k, S_1 = s_1, ..., S_k = s_k | S_m = s)`.
pub fn new_block_given_s(
    model: &(impl GibbsModel + ?Sized),
    sample: &ObservedSample,
    m: usize,
    outcome: &NewBlockOutcome,
) -> Result<f64> {
    let s = outcome.s;
    if s > m {
        return Err(Error::Constraint(format!("s = {s} exceeds m = {m}")));
    }
    let alpha = model.alpha();
    let k = outcome.k();
    let table = central_table(alpha, s)?;
    let denominator = weighted_row_sum(model, sample.n + m, sample.j(), s, |a, b| table.get(a, b))?;
    if denominator.is_zero() {
        return Err(Error::ZeroProbability(format!("S_m = {s} is impossible")));
    }
    let value = factorial(s) * inv_factorials(&outcome.sizes) / factorial(k)
        * model.weight_or_zero(sample.n + m, sample.j() + k)?
        / denominator
        * new_block_product(alpha, &outcome.sizes);
    Ok(to_probability(value))
}

/// `P(S_1 = s_1, ..., S_k = s_k | K_m = k, S_m = s)`, free of the weights.
pub fn new_sizes_given_km_s(alpha: f64, outcome: &NewBlockOutcome) -> Result<f64> {
    let (s, k) = (outcome.s, outcome.k());
    let table = central_table(alpha, s)?;
    let value = factorial(s) * inv_factorials(&outcome.sizes) / factorial(k) * new_block_product(alpha, &outcome.sizes)
        / table.get(s, k);
    Ok(to_probability(value))
}

/// `P(S_1 = s_1, ..., S_k = s_k, K_m = k)` with `k` the number of sizes
/// given. With the sizes fixed, `S_m = Σ s_i` is determined, so this equals
/// [`new_block_joint`].
pub fn conditional_multivariate_gibbs(
    model: &(impl GibbsModel + ?Sized),
    sample: &ObservedSample,
    m: usize,
    sizes: &[usize],
) -> Result<f64> {
    new_block_joint(model, sample, m, &NewBlockOutcome::new(sizes.to_vec())?)
}

/// `P(W_{1,m} = w_1, ..., W_{m,m} = w_m)` with `w[l - 1] = w_l`.
pub fn conditional_sampling_formula(
    model: &(impl GibbsModel + ?Sized),
    sample: &ObservedSample,
    m: usize,
    w: &[usize],
) -> Result<f64> {
    let alpha = model.alpha();
    let s: usize = w.iter().enumerate().map(|(i, &c)| (i + 1) * c).sum();
    if s > m {
        return Err(Error::Constraint(format!("counts cover {s} > m = {m} observations")));
    }
    let k: usize = w.iter().sum();
    let mut value = factorial(m) * model.weight_or_zero(sample.n + m, sample.j() + k)? / base_weight(model, sample)?
        * rising(-sample.gamma(alpha), m - s)
        / factorial(m - s);
    for (i, &c) in w.iter().enumerate() {
        let l = i + 1;
        value *= (block_weight(alpha, l) / factorial(l)).powi(c) / factorial(c);
    }
    Ok(to_probability(value))
}

/// `P(S_1 = s_1, ..., S_r = s_r, K_m = k)`.
pub fn conditional_marginal(
    model: &(impl GibbsModel + ?Sized),
    sample: &ObservedSample,
    m: usize,
    parts: &[usize],
    k: usize,
) -> Result<f64> {
    if parts.contains(&0) {
        return Err(Error::Constraint("new block sizes must be positive".into()));
    }
    let used: usize = parts.iter().sum();
    if used > m {
        return Err(Error::Constraint(format!("sizes sum to {used} > m = {m}")));
    }
    let r = parts.len();
    if k < r || k - r > m - used {
        return Ok(0.0);
    }
    let alpha = model.alpha();
    let table = noncentral_table(alpha, sample.gamma(alpha), m)?;
    let value = factorial(m) * new_block_product(alpha, parts) * inv_factorials(parts)
        / factorial(m - used)
        / falling_factorial(k as f64, r)
        * model.weight_or_zero(sample.n + m, sample.j() + k)?
        / base_weight(model, sample)?
        * table.get(m - used, k - r);
    Ok(to_probability(value))
}

/// `E[Π_l (W_{l,m})_{[r_l]}]` with `orders[l - 1] = r_l`.
pub fn w_joint_factorial_moments(
    model: &(impl GibbsModel + ?Sized),
    sample: &ObservedSample,
    m: usize,
    orders: &[usize],
) -> Result<f64> {
    let alpha = model.alpha();
    let mut used = 0;
    let mut blocks = 0;
    let mut coeff = factorial(m);
    for (i, &r) in orders.iter().enumerate() {
        let l = i + 1;
        used += l * r;
        blocks += r;
        coeff *= (block_weight(alpha, l) / factorial(l)).powi(r);
    }
    if used > m {
        return Err(Error::Constraint(format!("Σ l r_l = {used} exceeds m = {m}")));
    }
    if blocks == 0 {
        return Ok(1.0);
    }
    let rest = m - used;
    let table = noncentral_table(alpha, sample.gamma(alpha), m)?;
    let sum = weighted_row_sum(model, sample.n + m, sample.j() + blocks, rest, |a, b| table.get(a, b))?;
    Ok((coeff / factorial(rest) * sum / base_weight(model, sample)?).to_f64())
}

/// `E[(W_{l,m})_{[r]}]`.
pub fn w_factorial_moment(
    model: &(impl GibbsModel + ?Sized),
    sample: &ObservedSample,
    m: usize,
    l: usize,
    r: usize,
) -> Result<f64> {
    check_l(m, l)?;
    if l * r > m {
        return Ok(0.0);
    }
    let mut orders = vec![0; l];
    orders[l - 1] = r;
    w_joint_factorial_moments(model, sample, m, &orders)
}

fn check_l(m: usize, l: usize) -> Result<()> {
    if l == 0 || l > m {
        Err(Error::IndexOutOfRange(format!("block size l = {l} outside 1..={m}")))
    } else {
        Ok(())
    }
}

/// `P(W_{l,m} = x)` by the alternating series, summed to `⌊m/l⌋`.
pub fn w_law(model: &(impl GibbsModel + ?Sized), sample: &ObservedSample, m: usize, l: usize, x: usize) -> Result<f64> {
    check_l(m, l)?;
    let bound = m / l;
    if x > bound {
        return Err(Error::IndexOutOfRange(format!(
            "x = {x} exceeds the support bound {bound}"
        )));
    }
    let alpha = model.alpha();
    let table = noncentral_table(alpha, sample.gamma(alpha), m)?;
    let a = block_weight(alpha, l) / factorial(l);
    let mut terms = Vec::with_capacity(bound - x + 1);
    for r in 0..=bound - x {
        let rest = m - r * l - x * l;
        let sign = if r % 2 == 0 { 1 } else { -1 };
        let inner = weighted_row_sum(model, sample.n + m, sample.j() + r + x, rest, |p, q| table.get(p, q))?;
        terms.push(SignedLogValue::new(sign, 0.0) * a.powi(r) / factorial(r) / factorial(rest) * inner);
    }
    let value = a.powi(x) / factorial(x) * factorial(m) / base_weight(model, sample)? * SignedLogValue::sum(terms);
    Ok(to_probability(value))
}

/// `P(W_{l,m} = x)` for `x = 0, ..., ⌊m/l⌋`.
pub fn w_pmf(model: &(impl GibbsModel + ?Sized), sample: &ObservedSample, m: usize, l: usize) -> Result<Vec<f64>> {
    check_l(m, l)?;
    (0..=m / l).map(|x| w_law(model, sample, m, l, x)).collect()
}

/// `E(W_{l,m}) = C(m,l) (1-α)_{l-1} / V_{n,j} Σ_k V_{n+m,j+k} S^γ_{m-l,k-1}`.
pub fn w_mean(model: &(impl GibbsModel + ?Sized), sample: &ObservedSample, m: usize, l: usize) -> Result<f64> {
    if l == 0 {
        return Err(Error::IndexOutOfRange("block size l must be positive".into()));
    }
    if l > m {
        return Ok(0.0);
    }
    let alpha = model.alpha();
    let table = noncentral_table(alpha, sample.gamma(alpha), m)?;
    let sum = weighted_row_sum(model, sample.n + m, sample.j() + 1, m - l, |p, q| table.get(p, q))?;
    let value = crate::factorials::binomial(m, l) * block_weight(alpha, l) / base_weight(model, sample)? * sum;
    Ok(value.to_f64())
}

/// `P(W_{1,m} = x)`, the law of the number of new singletons.
pub fn new_singletons_law(
    model: &(impl GibbsModel + ?Sized),
    sample: &ObservedSample,
    m: usize,
    x: usize,
) -> Result<f64> {
    if x > m {
        return Err(Error::IndexOutOfRange(format!("x = {x} exceeds m = {m}")));
    }
    let alpha = model.alpha();
    let table = noncentral_table(alpha, sample.gamma(alpha), m)?;
    let mut terms = Vec::with_capacity(m - x + 1);
    for r in 0..=m - x {
        let rest = m - r - x;
        let sign = if r % 2 == 0 { 1 } else { -1 };
        let inner = weighted_row_sum(model, sample.n + m, sample.j() + r + x, rest, |p, q| table.get(p, q))?;
        terms.push(SignedLogValue::new(sign, 0.0) / (factorial(r) * factorial(rest)) * inner);
    }
    let value = factorial(m) / factorial(x) / base_weight(model, sample)? * SignedLogValue::sum(terms);
    Ok(to_probability(value))
}

/// `P(K_m = k) = (V_{n+m,j+k} / V_{n,j}) S^γ_{m,k}`, the law of the number
/// of new blocks.
pub fn new_blocks_law(model: &(impl GibbsModel + ?Sized), sample: &ObservedSample, m: usize, k: usize) -> Result<f64> {
    if k > m {
        return Err(Error::IndexOutOfRange(format!("k = {k} exceeds m = {m}")));
    }
    let alpha = model.alpha();
    let table = noncentral_table(alpha, sample.gamma(alpha), m)?;
    let value = model.weight_or_zero(sample.n + m, sample.j() + k)? / base_weight(model, sample)? * table.get(m, k);
    Ok(to_probability(value))
}

/// `P(K_m = k)` for `k = 0, ..., m`.
pub fn new_blocks_pmf(model: &(impl GibbsModel + ?Sized), sample: &ObservedSample, m: usize) -> Result<Vec<f64>> {
    (0..=m).map(|k| new_blocks_law(model, sample, m, k)).collect()
}

/// `E(K_m)`.
pub fn new_blocks_mean(model: &(impl GibbsModel + ?Sized), sample: &ObservedSample, m: usize) -> Result<f64> {
    Ok(new_blocks_pmf(model, sample, m)?
        .iter()
        .enumerate()
        .map(|(k, p)| k as f64 * p)
        .sum())
}

/// Expected number of ordered selections of distinct blocks after the
/// additional sample in which old block `ξ` (original size `n_ξ`) grew by
/// exactly `t_ξ` and the selected new blocks have the given sizes, with the
/// weights evaluated on row `vn` (`n + m` for laws of the extended
/// partition, `n + m + 1` for one-step-ahead estimators):
///
/// ```text
/// m! Π (n_ξ-α)_{t_ξ} Π (1-α)_{s_i-1} / (Π t_ξ! Π s_i! (m - Σt - Σs)!)
///   × Σ_k V_{vn, j+q+k} / V_{n,j} S^{γ}_{m-Σt-Σs, k},
/// γ = -(n - Σ n_ξ - (j - |ξ|) α)
/// ```
pub(crate) fn selection_kernel(
    model: &(impl GibbsModel + ?Sized),
    sample: &ObservedSample,
    m: usize,
    vn: usize,
    old: &[(usize, usize)],
    new_sizes: &[usize],
) -> Result<SignedLogValue> {
    let alpha = model.alpha();
    let grown: usize = old.iter().map(|&(_, t)| t).sum();
    let fresh: usize = new_sizes.iter().sum();
    if grown + fresh > m {
        return Ok(SignedLogValue::ZERO);
    }
    let rest = m - grown - fresh;
    let removed: usize = old.iter().map(|&(n_xi, _)| n_xi).sum();
    let gamma = -((sample.n - removed) as f64 - (sample.j() - old.len()) as f64 * alpha);
    let table = noncentral_table(alpha, gamma, rest)?;
    let mut coeff = factorial(m) / factorial(rest) * new_block_product(alpha, new_sizes) * inv_factorials(new_sizes);
    for &(n_xi, t) in old {
        coeff *= rising(n_xi as f64 - alpha, t) / factorial(t);
    }
    let sum = weighted_row_sum(model, vn, sample.j() + new_sizes.len(), rest, |a, b| table.get(a, b))?;
    Ok(coeff * sum / base_weight(model, sample)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::{compositions, integer_partitions};
    use crate::models::PitmanYor;
    use approx::assert_abs_diff_eq;

    fn sample(m: &[usize]) -> ObservedSample {
        ObservedSample::new(m.to_vec()).unwrap()
    }

    #[test]
    fn sample_validation() {
        assert!(ObservedSample::new(vec![]).is_err());
        assert!(ObservedSample::new(vec![1, 0]).is_err());
        let s = sample(&[3, 1, 1]);
        assert_eq!((s.n(), s.j(), s.count_of_size(1)), (5, 3, 2));
        let fisher = PitmanYor::fisher(-1.0, 2).unwrap();
        assert!(new_blocks_law(&fisher, &s, 2, 0).is_err());
    }

    #[test]
    fn crp_examples() {
        let (alpha, theta) = (0.4, 1.5);
        let py = PitmanYor::new(alpha, theta).unwrap();
        let s = sample(&[2, 1]);
        let ratio = |a: usize, b: usize| (py.weight(a, b).unwrap() / py.weight(3, 2).unwrap()).to_f64();
        assert_abs_diff_eq!(crp_all_old(&py, &s, &[0, 0]).unwrap(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(
            crp_all_old(&py, &s, &[1, 0]).unwrap(),
            ratio(4, 2) * (2.0 - alpha),
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(crp_all_new(&py, &s, &[1]).unwrap(), ratio(4, 3), epsilon = 1e-14);
        assert_abs_diff_eq!(
            crp_all_new(&py, &s, &[3]).unwrap(),
            ratio(6, 3) * rising(1.0 - alpha, 2).to_f64(),
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            crp_mixed(&py, &s, &[0, 1], &[1]).unwrap(),
            ratio(5, 3) * (1.0 - alpha),
            epsilon = 1e-14
        );
        let ewens = PitmanYor::ewens(theta).unwrap();
        assert_abs_diff_eq!(
            crp_all_new(&ewens, &sample(&[1]), &[1]).unwrap(),
            theta / (theta + 1.0),
            epsilon = 1e-14
        );
        assert!(crp_all_old(&py, &s, &[1]).is_err());
        assert!(crp_all_new(&py, &s, &[]).is_err());
    }

    /// Sums every seating of `m` labelled customers, tracked as block sizes.
    fn seating_tree_total(model: &PitmanYor, s: &ObservedSample, m: usize) -> f64 {
        fn go(model: &PitmanYor, s: &ObservedSample, old: &mut Vec<usize>, new: &mut Vec<usize>, left: usize) -> f64 {
            if left == 0 {
                return crp_mixed(model, s, old, new).unwrap();
            }
            let mut total = 0.0;
            for i in 0..old.len() {
                old[i] += 1;
                total += go(model, s, old, new, left - 1);
                old[i] -= 1;
            }
            for i in 0..new.len() {
                new[i] += 1;
                total += go(model, s, old, new, left - 1);
                new[i] -= 1;
            }
            new.push(1);
            total += go(model, s, old, new, left - 1);
            new.pop();
            total
        }
        go(model, s, &mut vec![0; s.j()], &mut Vec::new(), m)
    }

    #[test]
    fn seating_tree_sums_to_one() {
        let s = sample(&[2, 1, 1]);
        for model in [PitmanYor::new(0.5, 1.0).unwrap(), PitmanYor::fisher(-1.0, 5).unwrap()] {
            for m in 0..=4 {
                assert_abs_diff_eq!(seating_tree_total(&model, &s, m), 1.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn new_block_joint_normalizes() {
        let py = PitmanYor::new(0.3, 2.0).unwrap();
        let s = sample(&[3, 1]);
        let ratio = |a: usize, b: usize| (py.weight(a, b).unwrap() / py.weight(4, 2).unwrap()).to_f64();
        assert_abs_diff_eq!(
            new_block_joint(&py, &s, 1, &NewBlockOutcome::new(vec![1]).unwrap()).unwrap(),
            ratio(5, 3),
            epsilon = 1e-14
        );
        for m in 1..=6 {
            let atom = new_block_joint(&py, &s, m, &NewBlockOutcome::empty()).unwrap();
            assert_abs_diff_eq!(atom, ratio(4 + m, 2) * rising(4.0 - 0.6, m).to_f64(), epsilon = 1e-14);
            let mut total = atom;
            for used in 1..=m {
                for sizes in compositions(used) {
                    total += new_block_joint(&py, &s, m, &NewBlockOutcome::new(sizes).unwrap()).unwrap();
                }
            }
            assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn conditioning_on_s() {
        let py = PitmanYor::new(0.45, 0.9).unwrap();
        let s = sample(&[2, 2]);
        assert_abs_diff_eq!(
            new_block_given_s(&py, &s, 4, &NewBlockOutcome::new(vec![1]).unwrap()).unwrap(),
            1.0,
            epsilon = 1e-14
        );
        for used in 1..=5 {
            let total: f64 = compositions(used)
                .map(|c| new_block_given_s(&py, &s, 5, &NewBlockOutcome::new(c).unwrap()).unwrap())
                .sum();
            assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);
        }
        let one = new_block_given_s(&py, &s, 5, &NewBlockOutcome::new(vec![2]).unwrap()).unwrap();
        let two = new_block_given_s(&py, &s, 5, &NewBlockOutcome::new(vec![1, 1]).unwrap()).unwrap();
        let expected = (py.weight(9, 3).unwrap() * SignedLogValue::from_f64(0.55) / py.weight(9, 4).unwrap()).to_f64();
        assert_abs_diff_eq!(one / two, expected, epsilon = 1e-12);
    }

    #[test]
    fn sizes_given_k_and_s() {
        for alpha in [-0.5, 0.0, 0.5] {
            for s in 1..=8 {
                for k in 1..=s {
                    let total: f64 = compositions(s)
                        .filter(|c| c.len() == k)
                        .map(|c| new_sizes_given_km_s(alpha, &NewBlockOutcome::new(c).unwrap()).unwrap())
                        .sum();
                    assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);
                }
                let all_singletons = NewBlockOutcome::new(vec![1; s]).unwrap();
                assert_abs_diff_eq!(
                    new_sizes_given_km_s(alpha, &all_singletons).unwrap(),
                    1.0,
                    epsilon = 1e-12
                );
            }
        }
    }

    #[test]
    fn sampling_formula_and_marginals() {
        let py = PitmanYor::new(0.25, 1.2).unwrap();
        let s = sample(&[1, 2, 1]);
        let m = 5;
        let mut total = new_block_joint(&py, &s, m, &NewBlockOutcome::empty()).unwrap();
        for used in 1..=m {
            for p in integer_partitions(used) {
                let mut w = vec![0; m];
                for &x in &p {
                    w[x - 1] += 1;
                }
                total += conditional_sampling_formula(&py, &s, m, &w).unwrap();
            }
        }
        assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);

        assert_abs_diff_eq!(
            conditional_marginal(&py, &s, 1, &[1], 1).unwrap(),
            new_blocks_law(&py, &s, 1, 1).unwrap(),
            epsilon = 1e-14
        );
        let full = [2, 1];
        assert_abs_diff_eq!(
            conditional_marginal(&py, &s, m, &full, 2).unwrap(),
            conditional_multivariate_gibbs(&py, &s, m, &full).unwrap(),
            epsilon = 1e-13
        );
        let mut total = 0.0;
        for l in 1..=m {
            for k in 1..=m {
                total += conditional_marginal(&py, &s, m, &[l], k).unwrap();
            }
        }
        total += new_blocks_law(&py, &s, m, 0).unwrap();
        assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn w_laws() {
        let py = PitmanYor::new(0.6, 0.4).unwrap();
        let s = sample(&[2, 1]);
        let disc = (py.weight(4, 3).unwrap() / py.weight(3, 2).unwrap()).to_f64();
        assert_abs_diff_eq!(w_factorial_moment(&py, &s, 1, 1, 1).unwrap(), disc, epsilon = 1e-14);
        assert_abs_diff_eq!(
            w_joint_factorial_moments(&py, &s, 3, &[0, 0, 0]).unwrap(),
            1.0,
            epsilon = 1e-15
        );
        for m in 1..=6 {
            for l in 1..=m {
                let pmf = w_pmf(&py, &s, m, l).unwrap();
                assert_abs_diff_eq!(pmf.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
                let mean: f64 = pmf.iter().enumerate().map(|(x, p)| x as f64 * p).sum();
                assert_abs_diff_eq!(w_mean(&py, &s, m, l).unwrap(), mean, epsilon = 1e-12);
                assert_abs_diff_eq!(w_factorial_moment(&py, &s, m, l, 1).unwrap(), mean, epsilon = 1e-12);
            }
            assert_abs_diff_eq!(
                w_law(&py, &s, m, m, 1).unwrap(),
                conditional_marginal(&py, &s, m, &[m], 1).unwrap(),
                epsilon = 1e-13
            );
            for x in 0..=m {
                assert_abs_diff_eq!(
                    new_singletons_law(&py, &s, m, x).unwrap(),
                    w_law(&py, &s, m, 1, x).unwrap(),
                    epsilon = 1e-13
                );
            }
            assert_abs_diff_eq!(
                new_blocks_pmf(&py, &s, m).unwrap().iter().sum::<f64>(),
                1.0,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn kernel_matches_marginals() {
        let py = PitmanYor::new(0.2, 3.0).unwrap();
        let s = sample(&[2, 1, 3]);
        let m = 4;
        let k1 = selection_kernel(&py, &s, m, s.n() + m, &[], &[2]).unwrap().to_f64();
        assert_abs_diff_eq!(k1, w_mean(&py, &s, m, 2).unwrap(), epsilon = 1e-13);
        let k0 = selection_kernel(&py, &s, m, s.n() + m, &[], &[]).unwrap().to_f64();
        assert_abs_diff_eq!(k0, 1.0, epsilon = 1e-13);
        // Old block of size 1 grows to size 2: P(M_2 = 1).
        let k_old = selection_kernel(&py, &s, m, s.n() + m, &[(1, 1)], &[])
            .unwrap()
            .to_f64();
        assert!(k_old > 0.0 && k_old < 1.0);
    }
}
