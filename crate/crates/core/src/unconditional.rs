//! Laws of an exchangeable Gibbs partition of `[n]`: the EPPF, the
//! multivariate distributions of block sizes, the Gibbs sampling formula,
//! marginals, the law of the number of blocks `K_n` and of the number of
//! blocks of a given size `C_{l,n}`, and their falling factorial moments.

use crate::error::{Error, Result};
use crate::factorials::{factorial, falling_factorial, rising};
use crate::models::GibbsModel;
use crate::numeric::{to_probability, SignedLogValue};
use crate::stirling::central_table;

/// Ordered block sizes `(n_1, ..., n_k)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Composition {
    parts: Vec<usize>,
    n: usize,
}

impl Composition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidComposition("no parts".into()));
        }
        if let Some(pos) = parts.iter().position(|&p| p == 0) {
            return Err(Error::InvalidComposition(format!("part {} is zero", pos + 1)));
        }
        let n = parts.iter().sum();
        Ok(Self { parts, n })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.parts.len()
    }

    /// Parts sorted in non-increasing order.
    pub fn canonical(&self) -> Self {
        let mut parts = self.parts.clone();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self { parts, n: self.n }
    }

    pub fn counts(&self) -> CountsVector {
        let mut counts = vec![0; self.n];
        for &p in &self.parts {
            counts[p - 1] += 1;
        }
        CountsVector { counts }
    }
}

/// `(c_1, ..., c_n)`: `c_i` blocks of size `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CountsVector {
    counts: Vec<usize>,
}

impl CountsVector {
    /// `counts[i - 1]` is the number of blocks of size `i`; trailing zeros
    /// may be omitted.
    pub fn new(counts: Vec<usize>) -> Result<Self> {
        if counts.iter().all(|&c| c == 0) {
            return Err(Error::InvalidCounts("no blocks".into()));
        }
        let cv = Self { counts };
        let n = cv.n();
        let mut counts = cv.counts;
        counts.resize(n, 0);
        Ok(Self { counts })
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn n(&self) -> usize {
        self.counts.iter().enumerate().map(|(i, &c)| (i + 1) * c).sum()
    }

    pub fn k(&self) -> usize {
        self.counts.iter().sum()
    }

    /// The composition with parts listed in non-increasing order.
    pub fn composition(&self) -> Composition {
        let parts = self
            .counts
            .iter()
            .enumerate()
            .rev()
            .flat_map(|(i, &c)| std::iter::repeat_n(i + 1, c))
            .collect();
        Composition { parts, n: self.n() }
    }
}

/// `(1 - α)_{i-1}`, the weight of a block of size `i`.
pub(crate) fn block_weight(alpha: f64, size: usize) -> SignedLogValue {
    rising(1.0 - alpha, size - 1)
}

fn block_product(alpha: f64, parts: &[usize]) -> SignedLogValue {
    parts.iter().map(|&p| block_weight(alpha, p)).product()
}

fn inv_factorials(parts: &[usize]) -> SignedLogValue {
    parts.iter().map(|&p| factorial(p)).product::<SignedLogValue>().recip()
}

/// `Σ_{i=0}^{row} V_{vn, k0+i} S_{row,i}`, with `S` supplied as a closure.
pub(crate) fn weighted_row_sum(
    model: &(impl GibbsModel + ?Sized),
    vn: usize,
    k0: usize,
    row: usize,
    stirling: impl Fn(usize, usize) -> SignedLogValue,
) -> Result<SignedLogValue> {
    let terms = (0..=row)
        .map(|i| Ok(model.weight_or_zero(vn, k0 + i)? * stirling(row, i)))
        .collect::<Result<Vec<_>>>()?;
    Ok(SignedLogValue::sum(terms))
}

/// `V_{n,k} Π_j (1 - α)_{n_j - 1}`: probability of one particular set
/// partition with these block sizes.
pub fn eppf(model: &(impl GibbsModel + ?Sized), comp: &Composition) -> Result<f64> {
    Ok(to_probability(eppf_value(model, comp)?))
}

fn eppf_value(model: &(impl GibbsModel + ?Sized), comp: &Composition) -> Result<SignedLogValue> {
    Ok(model.weight_or_zero(comp.n, comp.k())? * block_product(model.alpha(), &comp.parts))
}

/// Probability that the blocks, listed by order of appearance, have sizes
/// `(n_1, ..., n_k)`.
pub fn size_biased_joint(model: &(impl GibbsModel + ?Sized), comp: &Composition) -> Result<f64> {
    // n! / (n_k (n_k + n_{k-1}) ··· (n_k + ... + n_1) Π (n_j - 1)!)
    let mut coeff = factorial(comp.n);
    let mut tail = 0usize;
    for &p in comp.parts.iter().rev() {
        tail += p;
        coeff /= SignedLogValue::from_usize(tail) * factorial(p - 1);
    }
    Ok(to_probability(coeff * eppf_value(model, comp)?))
}

/// Probability that the block sizes, in exchangeable random order, equal
/// `(n_1, ..., n_k)`.
pub fn multivariate_gibbs(model: &(impl GibbsModel + ?Sized), comp: &Composition) -> Result<f64> {
    let coeff = factorial(comp.n) * inv_factorials(&comp.parts) / factorial(comp.k());
    Ok(to_probability(coeff * eppf_value(model, comp)?))
}

/// Probability of the counts vector `(c_1, ..., c_n)`.
pub fn gibbs_sampling_formula(model: &(impl GibbsModel + ?Sized), cv: &CountsVector) -> Result<f64> {
    let alpha = model.alpha();
    let mut value = factorial(cv.n()) * model.weight_or_zero(cv.n(), cv.k())?;
    for (i, &c) in cv.counts.iter().enumerate() {
        let size = i + 1;
        value *= (block_weight(alpha, size) / factorial(size)).powi(c) / factorial(c);
    }
    Ok(to_probability(value))
}

fn check_parts(parts: &[usize], n: usize) -> Result<usize> {
    if parts.contains(&0) {
        return Err(Error::Constraint("block sizes must be positive".into()));
    }
    let used: usize = parts.iter().sum();
    if used > n {
        return Err(Error::Constraint(format!("block sizes sum to {used} > n = {n}")));
    }
    Ok(used)
}

/// `P(N_1 = n_1, ..., N_r = n_r, K_n = k)` for the first `r` blocks in
/// exchangeable random order.
pub fn r_marginal(model: &(impl GibbsModel + ?Sized), n: usize, parts: &[usize], k: usize) -> Result<f64> {
    let used = check_parts(parts, n)?;
    let r = parts.len();
    if k < r || k - r > n - used || k == 0 {
        return Ok(0.0);
    }
    let alpha = model.alpha();
    let s = central_table(alpha, n)?;
    let value = factorial(n) * inv_factorials(parts) / factorial(n - used)
        * block_product(alpha, parts)
        * model.weight_or_zero(n, k)?
        / falling_factorial(k as f64, r)
        * s.get(n - used, k - r);
    Ok(to_probability(value))
}

/// `P(N_1 = n_1, ..., N_r = n_r)`, marginalized over `K_n`.
pub fn sizes_marginal(model: &(impl GibbsModel + ?Sized), n: usize, parts: &[usize]) -> Result<f64> {
    let used = check_parts(parts, n)?;
    let mut total = 0.0;
    for k in parts.len().max(1)..=parts.len() + n - used {
        total += r_marginal(model, n, parts, k)?;
    }
    Ok(total.min(1.0))
}

fn check_kn(n: usize, k: usize) -> Result<()> {
    if n == 0 || k == 0 || k > n {
        Err(Error::IndexOutOfRange(format!(
            "need 1 <= k <= n, got n = {n}, k = {k}"
        )))
    } else {
        Ok(())
    }
}

/// `P(K_n = k) = V_{n,k} S_{n,k}`.
pub fn kn_distribution(model: &(impl GibbsModel + ?Sized), n: usize, k: usize) -> Result<f64> {
    check_kn(n, k)?;
    let s = central_table(model.alpha(), n)?;
    Ok(to_probability(model.weight_or_zero(n, k)? * s.get(n, k)))
}

/// `P(K_n = k)` for `k = 0, ..., n` (index 0 is always zero).
pub fn kn_pmf(model: &(impl GibbsModel + ?Sized), n: usize) -> Result<Vec<f64>> {
    let mut pmf = vec![0.0];
    for k in 1..=n {
        pmf.push(kn_distribution(model, n, k)?);
    }
    Ok(pmf)
}

/// `P(N_1 = n_1, ..., N_r = n_r | K_n = k)`; depends on the model only
/// through `α`.
pub fn marginal_given_kn(alpha: f64, parts: &[usize], n: usize, k: usize) -> Result<f64> {
    check_kn(n, k)?;
    let used = check_parts(parts, n)?;
    let r = parts.len();
    if k < r || k - r > n - used {
        return Ok(0.0);
    }
    let s = central_table(alpha, n)?;
    let value = factorial(n) * inv_factorials(parts) / factorial(n - used) * block_product(alpha, parts)
        / falling_factorial(k as f64, r)
        * s.get(n - used, k - r)
        / s.get(n, k);
    Ok(to_probability(value))
}

/// `E(N_1 | K_n = k) = (n/k) S^{-1,-α,-(1-α)}_{n-1,k-1} / S_{n,k}`.
pub fn expected_first_block_given_kn(alpha: f64, n: usize, k: usize) -> Result<f64> {
    check_kn(n, k)?;
    let s = central_table(alpha, n)?;
    let shifted = crate::stirling::noncentral_table(alpha, -(1.0 - alpha), n)?;
    let value = SignedLogValue::from_f64(n as f64 / k as f64) * shifted.get(n - 1, k - 1) / s.get(n, k);
    Ok(value.to_f64())
}

/// `E[Π_l (C_{l,n})_{[r_l]}]` with `orders[l - 1] = r_l`.
pub fn joint_factorial_moments(model: &(impl GibbsModel + ?Sized), n: usize, orders: &[usize]) -> Result<f64> {
    Ok(joint_factorial_moments_value(model, n, orders)?.to_f64())
}

pub(crate) fn joint_factorial_moments_value(
    model: &(impl GibbsModel + ?Sized),
    n: usize,
    orders: &[usize],
) -> Result<SignedLogValue> {
    let alpha = model.alpha();
    let mut used = 0usize;
    let mut blocks = 0usize;
    let mut coeff = factorial(n);
    for (i, &r) in orders.iter().enumerate() {
        let l = i + 1;
        used += l * r;
        blocks += r;
        coeff *= (block_weight(alpha, l) / factorial(l)).powi(r);
    }
    if used > n {
        return Err(Error::Constraint(format!("Σ l r_l = {used} exceeds n = {n}")));
    }
    if blocks == 0 {
        return Ok(SignedLogValue::ONE);
    }
    let rest = n - used;
    let s = central_table(alpha, n)?;
    let sum = weighted_row_sum(model, n, blocks, rest, |a, b| s.get(a, b))?;
    Ok(coeff / factorial(rest) * sum)
}

/// `E[(C_{l,n})_{[r]}]`.
pub fn cl_factorial_moment(model: &(impl GibbsModel + ?Sized), n: usize, l: usize, r: usize) -> Result<f64> {
    check_l(n, l)?;
    if l * r > n {
        return Ok(0.0);
    }
    let mut orders = vec![0; l];
    orders[l - 1] = r;
    joint_factorial_moments(model, n, &orders)
}

fn check_l(n: usize, l: usize) -> Result<()> {
    if l == 0 || l > n {
        Err(Error::IndexOutOfRange(format!("block size l = {l} outside 1..={n}")))
    } else {
        Ok(())
    }
}

/// `P(C_{l,n} = x)` by the alternating inversion series, summed up to the
/// support bound `⌊n/l⌋`.
pub fn cl_law(model: &(impl GibbsModel + ?Sized), n: usize, l: usize, x: usize) -> Result<f64> {
    check_l(n, l)?;
    let bound = n / l;
    if x > bound {
        return Err(Error::IndexOutOfRange(format!(
            "x = {x} exceeds the support bound {bound}"
        )));
    }
    let alpha = model.alpha();
    let s = central_table(alpha, n)?;
    let a = block_weight(alpha, l) / factorial(l);
    let mut terms = Vec::with_capacity(bound - x + 1);
    for r in 0..=bound - x {
        let rest = n - r * l - x * l;
        let sign = if r % 2 == 0 { 1 } else { -1 };
        let inner = weighted_row_sum(model, n, r + x, rest, |p, q| s.get(p, q))?;
        terms.push(SignedLogValue::new(sign, 0.0) * a.powi(r) / factorial(r) / factorial(rest) * inner);
    }
    let value = factorial(n) * a.powi(x) / factorial(x) * SignedLogValue::sum(terms);
    Ok(to_probability(value))
}

/// `P(C_{l,n} = x)` for `x = 0, ..., ⌊n/l⌋`.
pub fn cl_pmf(model: &(impl GibbsModel + ?Sized), n: usize, l: usize) -> Result<Vec<f64>> {
    check_l(n, l)?;
    (0..=n / l).map(|x| cl_law(model, n, l, x)).collect()
}

/// `E(C_{l,n}) = C(n,l) (1-α)_{l-1} Σ_k V_{n,k} S_{n-l,k-1}`.
pub fn cl_mean(model: &(impl GibbsModel + ?Sized), n: usize, l: usize) -> Result<f64> {
    check_l(n, l)?;
    let alpha = model.alpha();
    let s = central_table(alpha, n)?;
    let sum = weighted_row_sum(model, n, 1, n - l, |p, q| s.get(p, q))?;
    Ok((crate::factorials::binomial(n, l) * block_weight(alpha, l) * sum).to_f64())
}

/// `P(C_{1,n} = x)`, the law of the number of singletons.
pub fn singleton_law(model: &(impl GibbsModel + ?Sized), n: usize, x: usize) -> Result<f64> {
    if n == 0 || x > n {
        return Err(Error::IndexOutOfRange(format!("x = {x} outside 0..={n}")));
    }
    let s = central_table(model.alpha(), n)?;
    let mut terms = Vec::with_capacity(n - x + 1);
    for r in 0..=n - x {
        let rest = n - r - x;
        let sign = if r % 2 == 0 { 1 } else { -1 };
        let inner = weighted_row_sum(model, n, r + x, rest, |p, q| s.get(p, q))?;
        terms.push(SignedLogValue::new(sign, 0.0) / (factorial(r) * factorial(rest)) * inner);
    }
    Ok(to_probability(factorial(n) / factorial(x) * SignedLogValue::sum(terms)))
}

/// `E(C_{1,n}) = n Σ_k V_{n,k} S_{n-1,k-1}`.
pub fn singleton_mean(model: &(impl GibbsModel + ?Sized), n: usize) -> Result<f64> {
    check_l(n, 1)?;
    let s = central_table(model.alpha(), n)?;
    let sum = weighted_row_sum(model, n, 1, n - 1, |p, q| s.get(p, q))?;
    Ok((SignedLogValue::from_usize(n) * sum).to_f64())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::{compositions, integer_partitions};
    use crate::models::PitmanYor;
    use approx::assert_abs_diff_eq;

    fn comp(parts: &[usize]) -> Composition {
        Composition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn composition_validation() {
        assert!(Composition::new(vec![]).is_err());
        assert!(Composition::new(vec![2, 0]).is_err());
        let c = comp(&[1, 3, 2]);
        assert_eq!((c.n(), c.k()), (6, 3));
        assert_eq!(c.canonical().parts(), &[3, 2, 1]);
        assert_eq!(c.counts().counts(), &[1, 1, 1, 0, 0, 0]);
        assert_eq!(
            CountsVector::new(vec![1, 1, 1]).unwrap().composition().parts(),
            &[3, 2, 1]
        );
        assert!(CountsVector::new(vec![0, 0]).is_err());
    }

    #[test]
    fn eppf_examples() {
        let (alpha, theta) = (0.4, 1.3);
        let py = PitmanYor::new(alpha, theta).unwrap();
        assert_abs_diff_eq!(
            eppf(&py, &comp(&[1, 1])).unwrap(),
            (theta + alpha) / (theta + 1.0),
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            eppf(&py, &comp(&[2])).unwrap(),
            (1.0 - alpha) / (theta + 1.0),
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(eppf(&py, &comp(&[1])).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            eppf(&py, &comp(&[3, 1, 2])).unwrap(),
            eppf(&py, &comp(&[1, 2, 3])).unwrap(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn size_biased_examples() {
        let py = PitmanYor::new(0.3, 0.8).unwrap();
        assert_abs_diff_eq!(size_biased_joint(&py, &comp(&[1])).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            size_biased_joint(&py, &comp(&[1, 1])).unwrap(),
            1.1 / 1.8,
            epsilon = 1e-14
        );
        let total: f64 = [&[3][..], &[2, 1], &[1, 2], &[1, 1, 1]]
            .iter()
            .map(|p| size_biased_joint(&py, &comp(p)).unwrap())
            .sum();
        assert_abs_diff_eq!(total, 1.0, epsilon = 1e-13);
        for n in 1..=7 {
            let total: f64 = compositions(n)
                .map(|p| size_biased_joint(&py, &comp(&p)).unwrap())
                .sum();
            assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn multivariate_examples() {
        let theta = 1.7;
        let ewens = PitmanYor::ewens(theta).unwrap();
        assert_abs_diff_eq!(
            multivariate_gibbs(&ewens, &comp(&[1, 1])).unwrap(),
            theta / (theta + 1.0),
            epsilon = 1e-14
        );
        let py = PitmanYor::new(0.5, 1.0).unwrap();
        let total: f64 = compositions(6)
            .map(|p| multivariate_gibbs(&py, &comp(&p)).unwrap())
            .sum();
        assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(
            multivariate_gibbs(&py, &comp(&[4, 1, 1])).unwrap(),
            multivariate_gibbs(&py, &comp(&[1, 4, 1])).unwrap(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn sampling_formula_examples() {
        let theta = 2.5;
        let ewens = PitmanYor::ewens(theta).unwrap();
        let one_block = CountsVector::new(vec![0, 1]).unwrap();
        let two_blocks = CountsVector::new(vec![2, 0]).unwrap();
        assert_abs_diff_eq!(
            gibbs_sampling_formula(&ewens, &one_block).unwrap(),
            1.0 / (theta + 1.0),
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            gibbs_sampling_formula(&ewens, &two_blocks).unwrap(),
            theta / (theta + 1.0),
            epsilon = 1e-14
        );
        let py = PitmanYor::new(0.25, 2.0).unwrap();
        let total: f64 = integer_partitions(6)
            .map(|p| gibbs_sampling_formula(&py, &Composition::new(p).unwrap().counts()).unwrap())
            .sum();
        assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn sampling_formula_aggregates_compositions() {
        let py = PitmanYor::new(0.3, 2.0).unwrap();
        for p in integer_partitions(7) {
            let c = Composition::new(p).unwrap();
            let by_counts = gibbs_sampling_formula(&py, &c.counts()).unwrap();
            let by_comps: f64 = compositions(7)
                .filter(|q| Composition::new(q.clone()).unwrap().counts() == c.counts())
                .map(|q| multivariate_gibbs(&py, &Composition::new(q).unwrap()).unwrap())
                .sum();
            assert_abs_diff_eq!(by_counts, by_comps, epsilon = 1e-13);
        }
    }

    #[test]
    fn r_marginal_examples() {
        let py = PitmanYor::new(0.5, 1.0).unwrap();
        let full = comp(&[2, 1, 3]);
        assert_abs_diff_eq!(
            r_marginal(&py, 6, full.parts(), 3).unwrap(),
            multivariate_gibbs(&py, &full).unwrap(),
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            r_marginal(&py, 2, &[1], 2).unwrap(),
            py.weight(2, 2).unwrap().to_f64(),
            epsilon = 1e-14
        );
        let mut total = 0.0;
        for n1 in 1..=5 {
            for k in 1..=5 {
                total += r_marginal(&py, 5, &[n1], k).unwrap();
            }
        }
        assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);
        assert!(r_marginal(&py, 3, &[2, 2], 2).is_err());
    }

    #[test]
    fn kn_examples() {
        let theta = 0.7;
        let ewens = PitmanYor::ewens(theta).unwrap();
        assert_abs_diff_eq!(kn_distribution(&ewens, 1, 1).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            kn_distribution(&ewens, 2, 1).unwrap(),
            1.0 / (theta + 1.0),
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            kn_distribution(&ewens, 2, 2).unwrap(),
            theta / (theta + 1.0),
            epsilon = 1e-14
        );
        for n in 1..=10 {
            let total: f64 = kn_pmf(&ewens, n).unwrap().iter().sum();
            assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);
        }
        assert!(kn_distribution(&ewens, 3, 4).is_err());
        let fisher = PitmanYor::fisher(-1.0, 3).unwrap();
        assert_eq!(kn_distribution(&fisher, 5, 4).unwrap(), 0.0);
    }

    #[test]
    fn marginal_given_kn_examples() {
        let alpha = 0.35;
        assert_abs_diff_eq!(marginal_given_kn(alpha, &[1; 5], 5, 5).unwrap(), 1.0, epsilon = 1e-13);
        let py = PitmanYor::new(alpha, 1.5).unwrap();
        for k in 1..=6 {
            for n1 in 1..=6 - k + 1 {
                let bayes = r_marginal(&py, 6, &[n1], k).unwrap() / kn_distribution(&py, 6, k).unwrap();
                assert_abs_diff_eq!(marginal_given_kn(alpha, &[n1], 6, k).unwrap(), bayes, epsilon = 1e-13);
            }
            let mean: f64 = (1..=6 - k + 1)
                .map(|n1| n1 as f64 * marginal_given_kn(alpha, &[n1], 6, k).unwrap())
                .sum();
            assert_abs_diff_eq!(
                expected_first_block_given_kn(alpha, 6, k).unwrap(),
                mean,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn moment_examples() {
        let theta = 1.4;
        let ewens = PitmanYor::ewens(theta).unwrap();
        assert_abs_diff_eq!(
            joint_factorial_moments(&ewens, 4, &[0, 0]).unwrap(),
            1.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            joint_factorial_moments(&ewens, 2, &[1]).unwrap(),
            2.0 * theta / (theta + 1.0),
            epsilon = 1e-14
        );
        assert!(joint_factorial_moments(&ewens, 3, &[2, 1]).is_err());
    }

    #[test]
    fn cl_law_examples() {
        let py = PitmanYor::new(0.6, 0.5).unwrap();
        for n in 1..=8 {
            assert_abs_diff_eq!(
                cl_law(&py, n, n, 1).unwrap(),
                kn_distribution(&py, n, 1).unwrap(),
                epsilon = 1e-13
            );
            for l in 1..=n {
                let pmf = cl_pmf(&py, n, l).unwrap();
                assert_abs_diff_eq!(pmf.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
                let mean: f64 = pmf.iter().enumerate().map(|(x, p)| x as f64 * p).sum();
                assert_abs_diff_eq!(cl_mean(&py, n, l).unwrap(), mean, epsilon = 1e-12);
            }
            for x in 0..=n {
                assert_abs_diff_eq!(
                    singleton_law(&py, n, x).unwrap(),
                    cl_law(&py, n, 1, x).unwrap(),
                    epsilon = 1e-13
                );
            }
            assert_abs_diff_eq!(
                singleton_mean(&py, n).unwrap(),
                cl_mean(&py, n, 1).unwrap(),
                epsilon = 1e-13
            );
        }
        assert!(cl_law(&py, 5, 2, 3).is_err());
    }
}
