//! Sequential (Chinese restaurant) sampling from any Gibbs model, forward
//! from scratch or continuing an observed sample, and seeded parallel
//! replication.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::conditional::ObservedSample;
use crate::error::{Error, Result};
use crate::models::GibbsModel;
use crate::numeric::record_warning;

/// Drift from one tolerated in the step probabilities before renormalizing.
pub const RENORMALIZE_THRESHOLD: f64 = 1e-9;

/// Block sizes in order of appearance, and the block of every observation.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PartitionState {
    sizes: Vec<usize>,
    labels: Vec<usize>,
}

impl PartitionState {
    pub fn new() -> Self {
        Self::default()
    }

    /// State whose first `n` observations fill blocks of the given sizes in
    /// turn.
    pub fn from_sizes(sizes: &[usize]) -> Result<Self> {
        if sizes.contains(&0) {
            return Err(Error::InvalidSample("block sizes must be positive".into()));
        }
        let labels = sizes
            .iter()
            .enumerate()
            .flat_map(|(i, &s)| std::iter::repeat_n(i, s))
            .collect();
        Ok(Self {
            sizes: sizes.to_vec(),
            labels,
        })
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Block index of each observation.
    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn k(&self) -> usize {
        self.sizes.len()
    }

    /// Number of blocks of size `l`.
    pub fn count_of_size(&self, l: usize) -> usize {
        self.sizes.iter().filter(|&&s| s == l).count()
    }

    fn push(&mut self, block: usize) {
        if block == self.sizes.len() {
            self.sizes.push(1);
        } else {
            self.sizes[block] += 1;
        }
        self.labels.push(block);
    }
}

/// Probabilities that the next observation joins each existing block, with
/// the new-block probability last.
pub fn step_probabilities(model: &(impl GibbsModel + ?Sized), state: &PartitionState) -> Result<Vec<f64>> {
    let (n, k) = (state.n(), state.k());
    if n == 0 {
        return Ok(vec![1.0]);
    }
    let base = model.weight(n, k)?;
    if base.is_zero() {
        return Err(Error::ZeroProbability(format!("V({n}, {k}) = 0")));
    }
    let stay = (model.weight_or_zero(n + 1, k)? / base).to_f64();
    let fresh = (model.weight_or_zero(n + 1, k + 1)? / base).to_f64();
    let alpha = model.alpha();
    let mut probs: Vec<f64> = state.sizes.iter().map(|&s| stay * (s as f64 - alpha)).collect();
    probs.push(fresh);
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > RENORMALIZE_THRESHOLD {
        record_warning(format!(
            "step probabilities at n = {n}, k = {k} summed to {total}; renormalized"
        ));
        probs.iter_mut().for_each(|p| *p /= total);
    }
    Ok(probs)
}

/// Adds observation `n + 1` to the state and returns the block it joined
/// (equal to the previous block count when it opened a new block).
pub fn sample_step<R: Rng + ?Sized>(
    model: &(impl GibbsModel + ?Sized),
    state: &mut PartitionState,
    rng: &mut R,
) -> Result<usize> {
    let probs = step_probabilities(model, state)?;
    let u: f64 = rng.random();
    let mut acc = 0.0;
    let mut block = probs.len() - 1;
    for (i, p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            block = i;
            break;
        }
    }
    // Roundoff can leave `u` past the cumulative sum; fall back to the last
    // block with positive probability.
    if probs[block] == 0.0 {
        block = probs.iter().rposition(|&p| p > 0.0).unwrap_or(0);
    }
    state.push(block);
    Ok(block)
}

/// A random partition of `[n]`.
pub fn sample_partition<R: Rng + ?Sized>(
    model: &(impl GibbsModel + ?Sized),
    n: usize,
    rng: &mut R,
) -> Result<PartitionState> {
    let mut state = PartitionState::new();
    for _ in 0..n {
        sample_step(model, &mut state, rng)?;
    }
    Ok(state)
}

/// Outcome of `m` additional observations after an observed sample.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionalDraw {
    /// Growth of each old block.
    pub old_increments: Vec<usize>,
    /// Sizes of the new blocks, in order of appearance.
    pub new_sizes: Vec<usize>,
    /// Full state after the additional observations.
    pub state: PartitionState,
}

impl ConditionalDraw {
    /// Number of new blocks `K_m`.
    pub fn k(&self) -> usize {
        self.new_sizes.len()
    }

    /// Number of new blocks of size `l`, `W_{l,m}`.
    pub fn new_of_size(&self, l: usize) -> usize {
        self.new_sizes.iter().filter(|&&s| s == l).count()
    }

    /// Number of old blocks with final size `l`, `O_{l,m}`, given the
    /// original sizes.
    pub fn old_of_size(&self, sample: &ObservedSample, l: usize) -> usize {
        sample
            .multiplicities()
            .iter()
            .zip(&self.old_increments)
            .filter(|&(&n_i, &t)| n_i + t == l)
            .count()
    }
}

/// Continues an observed sample by `m` sequential steps.
pub fn sample_conditional<R: Rng + ?Sized>(
    model: &(impl GibbsModel + ?Sized),
    sample: &ObservedSample,
    m: usize,
    rng: &mut R,
) -> Result<ConditionalDraw> {
    let j = sample.j();
    let mut state = PartitionState::from_sizes(sample.multiplicities())?;
    for _ in 0..m {
        sample_step(model, &mut state, rng)?;
    }
    let old_increments = state.sizes[..j]
        .iter()
        .zip(sample.multiplicities())
        .map(|(&s, &n_i)| s - n_i)
        .collect();
    let new_sizes = state.sizes[j..].to_vec();
    Ok(ConditionalDraw {
        old_increments,
        new_sizes,
        state,
    })
}

/// Seeded generator for replicate `rep`: one ChaCha stream per replicate.
pub fn replicate_rng(seed: u64, rep: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(rep);
    rng
}

/// Runs `reps` independent replicates in parallel. The result depends only
/// on `seed`, not on scheduling.
pub fn replicate<T, F>(reps: usize, seed: u64, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng) -> Result<T> + Sync,
{
    (0..reps as u64)
        .into_par_iter()
        .map(|rep| f(&mut replicate_rng(seed, rep)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::PitmanYor;
    use approx::assert_abs_diff_eq;

    #[test]
    fn first_step_is_deterministic() {
        let py = PitmanYor::new(0.5, 1.0).unwrap();
        let mut rng = replicate_rng(3, 0);
        let mut state = PartitionState::new();
        assert_eq!(sample_step(&py, &mut state, &mut rng).unwrap(), 0);
        assert_eq!(state.sizes(), &[1]);
    }

    #[test]
    fn step_probabilities_sum_to_one() {
        let ewens = PitmanYor::ewens(2.0).unwrap();
        let p = step_probabilities(&ewens, &PartitionState::from_sizes(&[1]).unwrap()).unwrap();
        assert_abs_diff_eq!(p[1], 2.0 / 3.0, epsilon = 1e-15);
        for model in [PitmanYor::new(0.75, -0.5).unwrap(), PitmanYor::fisher(-1.0, 3).unwrap()] {
            let mut rng = replicate_rng(1, 0);
            let mut state = PartitionState::new();
            for _ in 0..40 {
                let probs = step_probabilities(&model, &state).unwrap();
                assert_abs_diff_eq!(probs.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
                sample_step(&model, &mut state, &mut rng).unwrap();
            }
            assert!(model.capacity().is_none_or(|c| state.k() <= c));
            assert_eq!(state.sizes().iter().sum::<usize>(), 40);
        }
    }

    #[test]
    fn conditional_draw_bookkeeping() {
        let py = PitmanYor::new(0.3, 1.0).unwrap();
        let s = ObservedSample::new(vec![2, 1]).unwrap();
        let draw = sample_conditional(&py, &s, 0, &mut replicate_rng(0, 0)).unwrap();
        assert_eq!(draw.old_increments, vec![0, 0]);
        assert!(draw.new_sizes.is_empty());
        let draw = sample_conditional(&py, &s, 6, &mut replicate_rng(0, 1)).unwrap();
        assert_eq!(
            draw.old_increments.iter().sum::<usize>() + draw.new_sizes.iter().sum::<usize>(),
            6
        );
        assert_eq!(draw.state.n(), 9);
    }

    #[test]
    fn replication_is_reproducible() {
        let py = PitmanYor::new(0.5, 1.0).unwrap();
        let run = || replicate(200, 42, |rng| Ok(sample_partition(&py, 10, rng)?.k())).unwrap();
        assert_eq!(run(), run());
    }
}
