//! How an additional sample of size `m` spreads over the `j` old blocks: the
//! multivariate Pólya-Gibbs law of the increments `(M_1, ..., M_j)` and the
//! mass `S_m` falling in new blocks, its marginals, and the laws and factorial
//! moments of `O_{l,m}` (old blocks of final size `l`) and `Z_{l,m}` (all
//! blocks of final size `l`).
//!
//! Sums over sets `Ξ` of old blocks only depend on the multiset of original
//! sizes in `Ξ`, so they are enumerated by how many blocks of each distinct
//! multiplicity are chosen, weighted by the number of such sets. The cost is
//! the number of such count vectors, at most `C(j, r)`.

use crate::conditional::{base_weight, selection_kernel, ObservedSample};
use crate::error::{Error, Result};
use crate::factorials::{binomial, factorial, rising};
use crate::models::GibbsModel;
use crate::numeric::{to_probability, SignedLogValue};
use crate::stirling::{central_table, noncentral_table};
use crate::unconditional::weighted_row_sum;

/// Increments `(m_1, ..., m_j)` of the old blocks and the number `s` of
/// additional observations landing in new blocks.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OldAllocation {
    increments: Vec<usize>,
    s_new: usize,
}

impl OldAllocation {
    pub fn new(increments: Vec<usize>, s_new: usize) -> Self {
        Self { increments, s_new }
    }

    pub fn increments(&self) -> &[usize] {
        &self.increments
    }

    pub fn s_new(&self) -> usize {
        self.s_new
    }

    /// Size of the additional sample, `Σ m_i + s`.
    pub fn m(&self) -> usize {
        self.increments.iter().sum::<usize>() + self.s_new
    }
}

fn check_allocation(sample: &ObservedSample, m: usize, alloc: &OldAllocation) -> Result<()> {
    if alloc.increments.len() != sample.j() {
        return Err(Error::Constraint(format!(
            "allocation has {} increments for {} old blocks",
            alloc.increments.len(),
            sample.j()
        )));
    }
    if alloc.m() != m {
        return Err(Error::Constraint(format!(
            "allocation covers {} observations, expected m = {m}",
            alloc.m()
        )));
    }
    Ok(())
}

fn multinomial_prefix(m: usize, alloc: &OldAllocation) -> SignedLogValue {
    let den: SignedLogValue = alloc.increments.iter().map(|&x| factorial(x)).product();
    factorial(m) / (den * factorial(alloc.s_new))
}

fn old_rising(alpha: f64, sample: &ObservedSample, increments: &[usize]) -> SignedLogValue {
    sample
        .multiplicities()
        .iter()
        .zip(increments)
        .map(|(&n_i, &m_i)| rising(n_i as f64 - alpha, m_i))
        .product()
}

/// `P(M_1 = m_1, ..., M_j = m_j, S_m = s)`.
pub fn polya_gibbs_joint(
    model: &(impl GibbsModel + ?Sized),
    sample: &ObservedSample,
    m: usize,
    alloc: &OldAllocation,
) -> Result<f64> {
    check_allocation(sample, m, alloc)?;
    let alpha = model.alpha();
    let table = central_table(alpha, alloc.s_new)?;
    let sum = weighted_row_sum(model, sample.n() + m, sample.j(), alloc.s_new, |a, b| table.get(a, b))?;
    let value =
        multinomial_prefix(m, alloc) * old_rising(alpha, sample, &alloc.increments) * sum / base_weight(model, sample)?;
    Ok(to_probability(value))
}

/// Multivariate Pólya mass with parameters `(m; n_1-α, ..., n_j-α, θ+jα)`:
/// the closed form of [`polya_gibbs_joint`] under Pitman-Yor weights.
pub fn multivariate_polya_mass(
    alpha: f64,
    theta: f64,
    sample: &ObservedSample,
    m: usize,
    alloc: &OldAllocation,
) -> Result<f64> {
    check_allocation(sample, m, alloc)?;
    let j = sample.j() as f64;
    let value = multinomial_prefix(m, alloc)
        * old_rising(alpha, sample, &alloc.increments)
        * rising(theta + j * alpha, alloc.s_new)
        / rising(sample.n() as f64 + theta, m);
    Ok(to_probability(value))
}

/// `P(M_1 = m_1, ..., M_r = m_r)` for the first `r` old blocks.
pub fn old_increments_marginal(
    model: &(impl GibbsModel + ?Sized),
    sample: &ObservedSample,
    m: usize,
    first: &[usize],
) -> Result<f64> {
    let r = first.len();
    if r > sample.j() {
        return Err(Error::Constraint(format!(
            "{r} increments given for {} old blocks",
            sample.j()
        )));
    }
    let used: usize = first.iter().sum();
    if used > m {
        return Err(Error::Constraint(format!("increments sum to {used} > m = {m}")));
    }
    let alpha = model.alpha();
    let covered: usize = sample.multiplicities()[..r].iter().sum();
    let gamma = -(sample.n() as f64 - (sample.j() - r) as f64 * alpha - covered as f64);
    let rest = m - used;
    let table = noncentral_table(alpha, gamma, rest)?;
    let sum = weighted_row_sum(model, sample.n() + m, sample.j(), rest, |a, b| table.get(a, b))?;
    let den: SignedLogValue = first.iter().map(|&x| factorial(x)).product();
    let value =
        factorial(m) / (den * factorial(rest)) * old_rising(alpha, sample, first) * sum / base_weight(model, sample)?;
    Ok(to_probability(value))
}

/// `P(M_i = t)` for old block `i` (zero-based).
pub fn old_increment_marginal(
    model: &(impl GibbsModel + ?Sized),
    sample: &ObservedSample,
    m: usize,
    i: usize,
    t: usize,
) -> Result<f64> {
    let n_i = *sample
        .multiplicities()
        .get(i)
        .ok_or_else(|| Error::IndexOutOfRange(format!("old block {i} of {}", sample.j())))?;
    if t > m {
        return Ok(0.0);
    }
    let alpha = model.alpha();
    let gamma = -(sample.n() as f64 - sample.j() as f64 * alpha + alpha - n_i as f64);
    let rest = m - t;
    let table = noncentral_table(alpha, gamma, rest)?;
    let sum = weighted_row_sum(model, sample.n() + m, sample.j(), rest, |a, b| table.get(a, b))?;
    let value = binomial(m, t) * rising(n_i as f64 - alpha, t) / base_weight(model, sample)? * sum;
    Ok(to_probability(value))
}

/// Distinct multiplicities with their counts, `(value, how many blocks)`.
fn multiplicity_groups(sample: &ObservedSample) -> Vec<(usize, usize)> {
    let mut groups: Vec<(usize, usize)> = Vec::new();
    let mut sorted = sample.multiplicities().to_vec();
    sorted.sort_unstable();
    for v in sorted {
        match groups.last_mut() {
            Some((last, count)) if *last == v => *count += 1,
            _ => groups.push((v, 1)),
        }
    }
    groups
}

type SelectionVisitor<'a> = dyn FnMut(SignedLogValue, &[(usize, usize)]) -> Result<()> + 'a;

/// Visits every assignment of pairwise disjoint sets `Ξ_l` of old blocks,
/// `|Ξ_l| = r_l`, with every block in `Ξ_l` of original size at most `l`.
/// Sets are enumerated up to relabeling of blocks with equal size; the
/// callback receives the number of labelled assignments and the
/// list of `(n_ξ, l - n_ξ)` pairs.
fn for_each_selection(
    groups: &[(usize, usize)],
    targets: &[(usize, usize)],
    visit: &mut SelectionVisitor<'_>,
) -> Result<()> {
    struct State<'a> {
        groups: &'a [(usize, usize)],
        targets: &'a [(usize, usize)],
        used: Vec<usize>,
        chosen: Vec<(usize, usize)>,
    }

    fn go(
        st: &mut State<'_>,
        ti: usize,
        gi: usize,
        left: usize,
        weight: SignedLogValue,
        visit: &mut SelectionVisitor<'_>,
    ) -> Result<()> {
        if ti == st.targets.len() {
            let mut w = weight;
            for (g, &(_, count)) in st.groups.iter().enumerate() {
                w *= factorial(count) / factorial(count - st.used[g]);
            }
            return visit(w, &st.chosen);
        }
        let l = st.targets[ti].0;
        if left == 0 {
            let next_r = st.targets.get(ti + 1).map_or(0, |&(_, r)| r);
            return go(st, ti + 1, 0, next_r, weight, visit);
        }
        if gi == st.groups.len() || st.groups[gi].0 > l {
            return Ok(());
        }
        let (v, count) = st.groups[gi];
        let free = count - st.used[gi];
        for c in 0..=free.min(left) {
            st.used[gi] += c;
            for _ in 0..c {
                st.chosen.push((v, l - v));
            }
            go(st, ti, gi + 1, left - c, weight / factorial(c), visit)?;
            st.chosen.truncate(st.chosen.len() - c);
            st.used[gi] -= c;
        }
        Ok(())
    }

    let mut st = State {
        groups,
        targets,
        used: vec![0; groups.len()],
        chosen: Vec::new(),
    };
    let first = targets.first().map_or(0, |&(_, r)| r);
    go(&mut st, 0, 0, first, SignedLogValue::ONE, visit)
}

/// `E[Π_l (O_{l,m})_{[r_l]}]` with `orders[l - 1] = r_l`.
pub fn o_joint_factorial_moments(
    model: &(impl GibbsModel + ?Sized),
    sample: &ObservedSample,
    m: usize,
    orders: &[usize],
) -> Result<f64> {
    if orders.len() > sample.n() + m && orders[sample.n() + m..].iter().any(|&r| r > 0) {
        return Ok(0.0);
    }
    let targets: Vec<(usize, usize)> = orders
        .iter()
        .enumerate()
        .filter(|(_, &r)| r > 0)
        .map(|(i, &r)| (i + 1, r))
        .collect();
    if targets.iter().map(|&(_, r)| r).sum::<usize>() > sample.j() {
        return Ok(0.0);
    }
    base_weight(model, sample)?;
    let groups = multiplicity_groups(sample);
    let mut terms = Vec::new();
    let vn = sample.n() + m;
    for_each_selection(&groups, &targets, &mut |count, chosen| {
        terms.push(count * selection_kernel(model, sample, m, vn, chosen, &[])?);
        Ok(())
    })?;
    let ordered: SignedLogValue = targets.iter().map(|&(_, r)| factorial(r)).product();
    Ok((ordered * SignedLogValue::sum(terms)).to_f64())
}

fn check_final_size(sample: &ObservedSample, m: usize, l: usize) -> Result<()> {
    if l == 0 || l > sample.n() + m {
        Err(Error::IndexOutOfRange(format!(
            "block size l = {l} outside 1..={}",
            sample.n() + m
        )))
    } else {
        Ok(())
    }
}

/// `E[(O_{l,m})_{[r]}]`.
pub fn o_factorial_moment(
    model: &(impl GibbsModel + ?Sized),
    sample: &ObservedSample,
    m: usize,
    l: usize,
    r: usize,
) -> Result<f64> {
    check_final_size(sample, m, l)?;
    let mut orders = vec![0; l];
    orders[l - 1] = r;
    o_joint_factorial_moments(model, sample, m, &orders)
}

/// `Σ_{|Ξ| = q} P(every block in Ξ reaches size l)`, i.e. `E[(O_{l,m})_{[q]}] / q!`.
fn unordered_old_moment(
    model: &(impl GibbsModel + ?Sized),
    sample: &ObservedSample,
    m: usize,
    l: usize,
    q: usize,
    groups: &[(usize, usize)],
) -> Result<SignedLogValue> {
    let mut terms = Vec::new();
    let vn = sample.n() + m;
    for_each_selection(groups, &[(l, q)], &mut |count, chosen| {
        terms.push(count * selection_kernel(model, sample, m, vn, chosen, &[])?);
        Ok(())
    })?;
    Ok(SignedLogValue::sum(terms))
}

/// Number of old blocks that can still reach size `l`.
pub fn eligible_old_blocks(sample: &ObservedSample, l: usize) -> usize {
    sample.multiplicities().iter().filter(|&&n_i| n_i <= l).count()
}

/// `P(O_{l,m} = y)` by the alternating series over sets of eligible old
/// blocks; zero when `y` exceeds the number of blocks with `n_i ≤ l`.
pub fn o_law(model: &(impl GibbsModel + ?Sized), sample: &ObservedSample, m: usize, l: usize, y: usize) -> Result<f64> {
    check_final_size(sample, m, l)?;
    if y > sample.j() {
        return Err(Error::IndexOutOfRange(format!("y = {y} exceeds j = {}", sample.j())));
    }
    base_weight(model, sample)?;
    let eligible = eligible_old_blocks(sample, l);
    if y > eligible {
        return Ok(0.0);
    }
    let groups = multiplicity_groups(sample);
    let mut terms = Vec::with_capacity(eligible - y + 1);
    for r in 0..=eligible - y {
        let sign = if r % 2 == 0 { 1 } else { -1 };
        let coeff = SignedLogValue::new(sign, 0.0) * binomial(r + y, y);
        terms.push(coeff * unordered_old_moment(model, sample, m, l, r + y, &groups)?);
    }
    Ok(to_probability(SignedLogValue::sum(terms)))
}

/// `P(O_{l,m} = y)` for `y = 0, ..., j`.
pub fn o_pmf(model: &(impl GibbsModel + ?Sized), sample: &ObservedSample, m: usize, l: usize) -> Result<Vec<f64>> {
    (0..=sample.j()).map(|y| o_law(model, sample, m, l, y)).collect()
}

/// `E(O_{l,m}) = Σ_{i: n_i ≤ l} P(M_i = l - n_i)`.
pub fn o_mean(model: &(impl GibbsModel + ?Sized), sample: &ObservedSample, m: usize, l: usize) -> Result<f64> {
    check_final_size(sample, m, l)?;
    let mut total = 0.0;
    for (i, &n_i) in sample.multiplicities().iter().enumerate() {
        if n_i <= l {
            total += old_increment_marginal(model, sample, m, i, l - n_i)?;
        }
    }
    Ok(total)
}

/// `E[(Z_{l,m})_{[r]}]` where `Z_{l,m}` counts old and new blocks of final
/// size `l`.
pub fn z_factorial_moment(
    model: &(impl GibbsModel + ?Sized),
    sample: &ObservedSample,
    m: usize,
    l: usize,
    r: usize,
) -> Result<f64> {
    check_final_size(sample, m, l)?;
    base_weight(model, sample)?;
    let groups = multiplicity_groups(sample);
    let vn = sample.n() + m;
    let mut terms = Vec::new();
    for t in 0..=r.min(sample.j()) {
        let new_sizes = vec![l; r - t];
        // C(r, t) t! = r! / (r - t)!
        let coeff = factorial(r) / factorial(r - t);
        for_each_selection(&groups, &[(l, t)], &mut |count, chosen| {
            terms.push(coeff * count * selection_kernel(model, sample, m, vn, chosen, &new_sizes)?);
            Ok(())
        })?;
    }
    Ok(SignedLogValue::sum(terms).to_f64())
}

/// `E[(O_{l,m})_{[r]}]` by the literal sum over `r`-subsets of old blocks,
/// without grouping equal multiplicities.
pub fn o_factorial_moment_by_subsets(
    model: &(impl GibbsModel + ?Sized),
    sample: &ObservedSample,
    m: usize,
    l: usize,
    r: usize,
) -> Result<f64> {
    check_final_size(sample, m, l)?;
    let eligible: Vec<usize> = sample
        .multiplicities()
        .iter()
        .copied()
        .filter(|&n_i| n_i <= l)
        .collect();
    let vn = sample.n() + m;
    let mut terms = Vec::new();
    for subset in crate::enumerate::combinations(eligible.len(), r) {
        let chosen: Vec<(usize, usize)> = subset.iter().map(|&i| (eligible[i], l - eligible[i])).collect();
        terms.push(selection_kernel(model, sample, m, vn, &chosen, &[])?);
    }
    Ok((factorial(r) * SignedLogValue::sum(terms)).to_f64())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conditional::w_mean;
    use crate::enumerate::weak_compositions;
    use crate::models::PitmanYor;
    use approx::assert_abs_diff_eq;

    fn sample(m: &[usize]) -> ObservedSample {
        ObservedSample::new(m.to_vec()).unwrap()
    }

    fn allocations(j: usize, m: usize) -> impl Iterator<Item = OldAllocation> {
        weak_compositions(m, j + 1).map(move |v| OldAllocation::new(v[..j].to_vec(), v[j]))
    }

    #[test]
    fn joint_normalizes_and_reduces() {
        let (alpha, theta) = (0.5, 1.0);
        let py = PitmanYor::new(alpha, theta).unwrap();
        let s = sample(&[2, 1, 1]);
        assert_abs_diff_eq!(
            polya_gibbs_joint(&py, &s, 0, &OldAllocation::new(vec![0, 0, 0], 0)).unwrap(),
            1.0,
            epsilon = 1e-14
        );
        for m in 0..=6 {
            let mut total = 0.0;
            for a in allocations(3, m) {
                let p = polya_gibbs_joint(&py, &s, m, &a).unwrap();
                assert_abs_diff_eq!(
                    p,
                    multivariate_polya_mass(alpha, theta, &s, m, &a).unwrap(),
                    epsilon = 1e-13
                );
                total += p;
            }
            assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);
        }
        assert!(polya_gibbs_joint(&py, &s, 2, &OldAllocation::new(vec![1, 0], 1)).is_err());
        assert!(polya_gibbs_joint(&py, &s, 3, &OldAllocation::new(vec![1, 0, 0], 1)).is_err());
    }

    #[test]
    fn marginals_are_consistent() {
        let model = PitmanYor::fisher(-0.5, 6).unwrap();
        let s = sample(&[3, 1, 2]);
        let m = 4;
        for a in 0..=m {
            let direct: f64 = allocations(3, m)
                .filter(|x| x.increments()[0] == a)
                .map(|x| polya_gibbs_joint(&model, &s, m, &x).unwrap())
                .sum();
            assert_abs_diff_eq!(
                old_increments_marginal(&model, &s, m, &[a]).unwrap(),
                direct,
                epsilon = 1e-13
            );
            assert_abs_diff_eq!(
                old_increment_marginal(&model, &s, m, 0, a).unwrap(),
                direct,
                epsilon = 1e-13
            );
            for b in 0..=m - a {
                let direct: f64 = allocations(3, m)
                    .filter(|x| x.increments()[0] == a && x.increments()[1] == b)
                    .map(|x| polya_gibbs_joint(&model, &s, m, &x).unwrap())
                    .sum();
                assert_abs_diff_eq!(
                    old_increments_marginal(&model, &s, m, &[a, b]).unwrap(),
                    direct,
                    epsilon = 1e-13
                );
            }
        }
        for full in allocations(3, m) {
            assert_abs_diff_eq!(
                old_increments_marginal(&model, &s, m, full.increments()).unwrap(),
                polya_gibbs_joint(&model, &s, m, &full).unwrap(),
                epsilon = 1e-13
            );
        }
    }

    #[test]
    fn o_moments_and_law() {
        let py = PitmanYor::new(0.3, 2.0).unwrap();
        let s = sample(&[1, 2, 1, 3]);
        for l in 1..=5 {
            assert_abs_diff_eq!(o_factorial_moment(&py, &s, 0, l, 0).unwrap(), 1.0, epsilon = 1e-15);
            let c = s.count_of_size(l) as f64;
            assert_abs_diff_eq!(o_factorial_moment(&py, &s, 0, l, 1).unwrap(), c, epsilon = 1e-13);
            assert_abs_diff_eq!(
                o_factorial_moment(&py, &s, 0, l, 2).unwrap(),
                c * (c - 1.0),
                epsilon = 1e-13
            );
            let point = o_pmf(&py, &s, 0, l).unwrap();
            assert_abs_diff_eq!(point[s.count_of_size(l)], 1.0, epsilon = 1e-12);
        }
        for m in 1..=4 {
            for l in 1..=s.n() + m {
                let pmf = o_pmf(&py, &s, m, l).unwrap();
                assert_abs_diff_eq!(pmf.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
                let mean: f64 = pmf.iter().enumerate().map(|(y, p)| y as f64 * p).sum();
                assert_abs_diff_eq!(o_mean(&py, &s, m, l).unwrap(), mean, epsilon = 1e-12);
                for r in 0..=3 {
                    assert_abs_diff_eq!(
                        o_factorial_moment(&py, &s, m, l, r).unwrap(),
                        o_factorial_moment_by_subsets(&py, &s, m, l, r).unwrap(),
                        epsilon = 1e-12
                    );
                }
                for y in eligible_old_blocks(&s, l) + 1..=s.j() {
                    assert_eq!(o_law(&py, &s, m, l, y).unwrap(), 0.0);
                }
            }
        }
    }

    #[test]
    fn z_first_moment_is_sum_of_means() {
        let py = PitmanYor::new(0.4, 1.0).unwrap();
        let s = sample(&[2, 1]);
        for m in 1..=4 {
            for l in 1..=s.n() + m {
                assert_abs_diff_eq!(z_factorial_moment(&py, &s, m, l, 0).unwrap(), 1.0, epsilon = 1e-14);
                let expected = o_mean(&py, &s, m, l).unwrap() + w_mean(&py, &s, m, l).unwrap();
                assert_abs_diff_eq!(z_factorial_moment(&py, &s, m, l, 1).unwrap(), expected, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn joint_o_moments_use_disjoint_blocks() {
        // With a single old block, it cannot end with two different sizes.
        let py = PitmanYor::new(0.2, 1.0).unwrap();
        let s = sample(&[1]);
        assert_eq!(o_joint_factorial_moments(&py, &s, 2, &[0, 1, 1]).unwrap(), 0.0);
        let s = sample(&[1, 1]);
        let joint = o_joint_factorial_moments(&py, &s, 3, &[0, 1, 1]).unwrap();
        // Block 1 grows by 1 and block 2 by 2, or vice versa.
        let by_alloc: f64 = [[1usize, 2], [2, 1]]
            .iter()
            .map(|inc| polya_gibbs_joint(&py, &s, 3, &OldAllocation::new(inc.to_vec(), 0)).unwrap())
            .sum();
        assert_abs_diff_eq!(joint, by_alloc, epsilon = 1e-13);
    }
}
