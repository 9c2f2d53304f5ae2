//! Generalized Stirling numbers `S_{n,k}^{-1,-α}` and their non-central
//! variant `S_{n,k}^{-1,-α,γ}`.
//!
//! The central numbers are the connection coefficients of
//! `(x)_n = Σ_k S_{n,k} (x)_{k↑α}` and satisfy
//!
//! ```text
//! S_{n+1,k} = S_{n,k-1} + (n - kα) S_{n,k},   S_{0,0} = 1,  S_{n,0} = 0 (n ≥ 1)
//! ```
//!
//! Every coefficient is nonnegative for `α < 1`, so the log-space recurrence
//! never cancels. The non-central numbers are the coefficients of
//! `(yα - γ)_n = Σ_k S_{n,k}^{γ} (yα)_{k↑α}`; they obey the same recurrence
//! with factor `(n - kα - γ)` and `S_{n,0}^{γ} = (-γ)_n`, and also the
//! convolution `S_{n,k}^{γ} = Σ_s C(n,s) S_{s,k} (-γ)_{n-s}`.
//!
//! Tables are immutable once built and shared through a process-wide cache
//! keyed by the exact bit patterns of `α` and `γ`.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use crate::error::{Error, Result};
use crate::factorials::{binomial, rising};
use crate::numeric::SignedLogValue;

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::AlphaOutOfRange(alpha))
    }
}

fn triangle_index(n: usize, k: usize) -> usize {
    n * (n + 1) / 2 + k
}

/// Central generalized Stirling numbers for one `α`, `0 ≤ k ≤ n ≤ max_n`.
#[derive(Debug, Clone)]
pub struct StirlingTable {
    alpha: f64,
    max_n: usize,
    entries: Vec<SignedLogValue>,
}

impl StirlingTable {
    pub fn new(alpha: f64, max_n: usize) -> Result<Self> {
        check_alpha(alpha)?;
        let entries = recurrence_triangle(max_n, |n, k| n as f64 - k as f64 * alpha);
        Ok(Self { alpha, max_n, entries })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn max_n(&self) -> usize {
        self.max_n
    }

    /// `S_{n,k}`, zero for `k > n`.
    ///
    /// # Panics
    /// If `n` exceeds the table bound.
    pub fn get(&self, n: usize, k: usize) -> SignedLogValue {
        assert!(
            n <= self.max_n,
            "Stirling table built to n = {}, asked for {n}",
            self.max_n
        );
        if k > n {
            SignedLogValue::ZERO
        } else {
            self.entries[triangle_index(n, k)]
        }
    }
}

/// Non-central generalized Stirling numbers for one `(α, γ)` pair.
#[derive(Debug, Clone)]
pub struct NoncentralStirlingTable {
    alpha: f64,
    gamma: f64,
    max_n: usize,
    entries: Vec<SignedLogValue>,
}

impl NoncentralStirlingTable {
    /// Builds the table by the recurrence when `-γ ≥ 0` (all terms
    /// nonnegative) and by convolution with the central table otherwise.
    pub fn new(alpha: f64, gamma: f64, max_n: usize) -> Result<Self> {
        check_alpha(alpha)?;
        if !gamma.is_finite() {
            return Err(Error::InvalidParameters(format!("gamma must be finite, got {gamma}")));
        }
        let entries = if gamma <= 0.0 {
            recurrence_triangle(max_n, |n, k| n as f64 - k as f64 * alpha - gamma)
        } else {
            let central = central_table(alpha, max_n)?;
            let mut entries = Vec::with_capacity(triangle_index(max_n, max_n) + 1);
            for n in 0..=max_n {
                for k in 0..=n {
                    entries.push(convolve(&central, n, k, gamma));
                }
            }
            entries
        };
        Ok(Self {
            alpha,
            gamma,
            max_n,
            entries,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn max_n(&self) -> usize {
        self.max_n
    }

    /// `S_{n,k}^{γ}`, zero for `k > n`.
    ///
    /// # Panics
    /// If `n` exceeds the table bound.
    pub fn get(&self, n: usize, k: usize) -> SignedLogValue {
        assert!(
            n <= self.max_n,
            "Stirling table built to n = {}, asked for {n}",
            self.max_n
        );
        if k > n {
            SignedLogValue::ZERO
        } else {
            self.entries[triangle_index(n, k)]
        }
    }
}

/// Fills `T_{n+1,k} = T_{n,k-1} + c(n,k) T_{n,k}` from `T_{0,0} = 1`.
/// The central factor vanishes at `(0, 0)`, which zeroes the `k = 0` column.
fn recurrence_triangle(max_n: usize, factor: impl Fn(usize, usize) -> f64) -> Vec<SignedLogValue> {
    let mut entries = vec![SignedLogValue::ZERO; triangle_index(max_n, max_n) + 1];
    entries[0] = SignedLogValue::ONE;
    for n in 0..max_n {
        for k in 0..=n + 1 {
            let from_left = if k == 0 {
                SignedLogValue::ZERO
            } else {
                entries[triangle_index(n, k - 1)]
            };
            let from_above = if k <= n {
                SignedLogValue::from_f64(factor(n, k)) * entries[triangle_index(n, k)]
            } else {
                SignedLogValue::ZERO
            };
            entries[triangle_index(n + 1, k)] = SignedLogValue::sum([from_left, from_above]);
        }
    }
    entries
}

fn convolve(central: &StirlingTable, n: usize, k: usize, gamma: f64) -> SignedLogValue {
    SignedLogValue::sum((k..=n).map(|s| binomial(n, s) * central.get(s, k) * rising(-gamma, n - s)))
}

/// `S_{n,k}^{γ}` by the convolution `Σ_{s=k}^{n} C(n,s) S_{s,k} (-γ)_{n-s}`,
/// independent of how the non-central table was built.
pub fn noncentral_by_convolution(n: usize, k: usize, alpha: f64, gamma: f64) -> Result<SignedLogValue> {
    check_bounds(n, k)?;
    let central = central_table(alpha, n)?;
    Ok(convolve(&central, n, k, gamma))
}

/// `S_{n,k}^{γ}` by the recurrence with factor `(n - kα - γ)`, for any sign
/// of `γ`. Terms may alternate when `γ > 0`.
pub fn noncentral_by_recurrence(n: usize, k: usize, alpha: f64, gamma: f64) -> Result<SignedLogValue> {
    check_bounds(n, k)?;
    check_alpha(alpha)?;
    let entries = recurrence_triangle(n, |i, j| i as f64 - j as f64 * alpha - gamma);
    Ok(entries[triangle_index(n, k)])
}

fn check_bounds(n: usize, k: usize) -> Result<()> {
    if k > n {
        Err(Error::IndexOutOfRange(format!(
            "Stirling index k = {k} exceeds n = {n}"
        )))
    } else {
        Ok(())
    }
}

/// `S_{n,k}^{-1,-α}`.
pub fn central_stirling(n: usize, k: usize, alpha: f64) -> Result<SignedLogValue> {
    check_bounds(n, k)?;
    Ok(central_table(alpha, n)?.get(n, k))
}

/// `S_{n,k}^{-1,-α,γ}`.
pub fn noncentral_stirling(n: usize, k: usize, alpha: f64, gamma: f64) -> Result<SignedLogValue> {
    check_bounds(n, k)?;
    Ok(noncentral_table(alpha, gamma, n)?.get(n, k))
}

/// Generalized factorial coefficient `C_{n,k}^{α,γ} = α^k S_{n,k}^{-1,-α,γ}`.
pub fn factorial_coefficient(n: usize, k: usize, alpha: f64, gamma: f64) -> Result<SignedLogValue> {
    Ok(SignedLogValue::from_f64(alpha).powi(k) * noncentral_stirling(n, k, alpha, gamma)?)
}

type CacheKey = (u64, Option<u64>);

/// Bit pattern with `-0.0` folded onto `0.0`.
fn canonical_bits(x: f64) -> u64 {
    if x == 0.0 {
        0.0f64.to_bits()
    } else {
        x.to_bits()
    }
}

enum CachedTable {
    Central(Arc<StirlingTable>),
    Noncentral(Arc<NoncentralStirlingTable>),
}

fn cache() -> &'static RwLock<HashMap<CacheKey, CachedTable>> {
    static CACHE: OnceLock<RwLock<HashMap<CacheKey, CachedTable>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Grows requests so repeated slightly-larger lookups do not rebuild each time.
fn grown_bound(requested: usize, existing: Option<usize>) -> usize {
    match existing {
        Some(old) => requested.max(old + old / 2),
        None => requested.max(16),
    }
}

/// Shared central table covering at least `max_n`.
pub fn central_table(alpha: f64, max_n: usize) -> Result<Arc<StirlingTable>> {
    check_alpha(alpha)?;
    let key = (canonical_bits(alpha), None);
    let existing = {
        let guard = cache().read().expect("Stirling cache poisoned");
        match guard.get(&key) {
            Some(CachedTable::Central(t)) if t.max_n() >= max_n => return Ok(Arc::clone(t)),
            Some(CachedTable::Central(t)) => Some(t.max_n()),
            _ => None,
        }
    };
    let table = Arc::new(StirlingTable::new(alpha, grown_bound(max_n, existing))?);
    let mut guard = cache().write().expect("Stirling cache poisoned");
    match guard.get(&key) {
        Some(CachedTable::Central(t)) if t.max_n() >= table.max_n() => Ok(Arc::clone(t)),
        _ => {
            guard.insert(key, CachedTable::Central(Arc::clone(&table)));
            Ok(table)
        }
    }
}

/// Shared non-central table covering at least `max_n`.
pub fn noncentral_table(alpha: f64, gamma: f64, max_n: usize) -> Result<Arc<NoncentralStirlingTable>> {
    check_alpha(alpha)?;
    let key = (canonical_bits(alpha), Some(canonical_bits(gamma)));
    let existing = {
        let guard = cache().read().expect("Stirling cache poisoned");
        match guard.get(&key) {
            Some(CachedTable::Noncentral(t)) if t.max_n() >= max_n => return Ok(Arc::clone(t)),
            Some(CachedTable::Noncentral(t)) => Some(t.max_n()),
            _ => None,
        }
    };
    let table = Arc::new(NoncentralStirlingTable::new(
        alpha,
        gamma,
        grown_bound(max_n, existing),
    )?);
    let mut guard = cache().write().expect("Stirling cache poisoned");
    match guard.get(&key) {
        Some(CachedTable::Noncentral(t)) if t.max_n() >= table.max_n() => Ok(Arc::clone(t)),
        _ => {
            guard.insert(key, CachedTable::Noncentral(Arc::clone(&table)));
            Ok(table)
        }
    }
}

/// Drops every cached table.
pub fn clear_cache() {
    cache().write().expect("Stirling cache poisoned").clear();
}
