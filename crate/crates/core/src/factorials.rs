//! Generalized rising and falling factorial powers.
//!
//! `(x)_{n↑h} = x (x + h) ··· (x + (n-1) h)`, evaluated as a direct product
//! so negative factors keep their sign. `(x)_n` is the `h = 1` case and the
//! falling factorial `(x)_{[n]}` is the `h = -1` case.

use crate::numeric::SignedLogValue;

/// Tolerance used by the identity checks in this module.
pub const IDENTITY_TOLERANCE: f64 = 1e-12;

/// A factorial power `(base)_{count↑increment}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorialSpec {
    pub base: f64,
    pub count: usize,
    pub increment: f64,
}

impl FactorialSpec {
    pub fn new(base: f64, count: usize, increment: f64) -> Self {
        Self { base, count, increment }
    }

    pub fn evaluate(&self) -> SignedLogValue {
        rising_factorial(self.base, self.count, self.increment)
    }
}

/// `(x)_{n↑h}`. An empty product (`n = 0`) is one; `h = 0` gives `x^n`.
///
/// Factors are multiplied in plain floating point while the partial product
/// stays well inside the exponent range, then folded into the log-space
/// accumulator, so rounding grows with the number of factors rather than
/// with the size of the logarithm.
pub fn rising_factorial(x: f64, n: usize, h: f64) -> SignedLogValue {
    const LIMIT: f64 = 1e280;
    let mut acc = SignedLogValue::ONE;
    let mut chunk = 1.0f64;
    for i in 0..n {
        let factor = x + i as f64 * h;
        if factor == 0.0 {
            return SignedLogValue::ZERO;
        }
        let next = chunk * factor;
        if next.abs() > LIMIT || next.abs() < 1.0 / LIMIT {
            acc *= SignedLogValue::from_f64(chunk);
            chunk = factor;
        } else {
            chunk = next;
        }
    }
    acc * SignedLogValue::from_f64(chunk)
}

/// Ordinary rising factorial `(x)_n = x (x+1) ··· (x+n-1)`.
pub fn rising(x: f64, n: usize) -> SignedLogValue {
    rising_factorial(x, n, 1.0)
}

/// Falling factorial `(x)_{[n]} = x (x-1) ··· (x-n+1)`.
pub fn falling_factorial(x: f64, n: usize) -> SignedLogValue {
    rising_factorial(x, n, -1.0)
}

pub fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|i| (i as f64).ln()).sum()
}

pub fn factorial(n: usize) -> SignedLogValue {
    rising_factorial(1.0, n, 1.0)
}

/// Binomial coefficient; zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> SignedLogValue {
    if k > n {
        return SignedLogValue::ZERO;
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Checks `(x)_{n+r↑h} = (x)_{n↑h} (x + nh)_{r↑h}`.
pub fn check_multiplicative_law(x: f64, n: usize, r: usize, h: f64) -> bool {
    let whole = rising_factorial(x, n + r, h);
    let split = rising_factorial(x, n, h) * rising_factorial(x + n as f64 * h, r, h);
    whole.relative_difference(split) <= IDENTITY_TOLERANCE
}

/// Inverts falling factorial moments into a point probability:
/// `P(X = x) = Σ_r (-1)^r E[(X)_{[x+r]}] / (x! r!)`.
///
/// `moments[q]` holds `E[(X)_{[q]}]`; moments past the end of the slice are
/// taken to be zero, which holds whenever the slice reaches the support bound.
pub fn invert_factorial_moments(moments: &[SignedLogValue], x: usize) -> SignedLogValue {
    if x >= moments.len() {
        return SignedLogValue::ZERO;
    }
    let ln_x_factorial = ln_factorial(x);
    let terms = moments[x..].iter().enumerate().map(|(r, &moment)| {
        let sign = if r % 2 == 0 { 1 } else { -1 };
        SignedLogValue::new(sign, -ln_x_factorial - ln_factorial(r)) * moment
    });
    SignedLogValue::sum(terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn rising_examples() {
        assert_relative_eq!(rising_factorial(2.0, 3, 1.0).to_f64(), 24.0, epsilon = 1e-12);
        assert_relative_eq!(rising_factorial(2.0, 3, 0.0).to_f64(), 8.0, epsilon = 1e-12);
        assert_eq!(rising_factorial(5.0, 0, 0.3), SignedLogValue::ONE);
        assert_relative_eq!(
            rising_factorial(-1.5, 3, 1.0).to_f64(),
            -1.5 * -0.5 * 0.5,
            epsilon = 1e-14
        );
        assert_eq!(
            FactorialSpec::new(2.0, 3, 1.0).evaluate(),
            rising_factorial(2.0, 3, 1.0)
        );
    }

    #[test]
    fn falling_examples() {
        assert_relative_eq!(falling_factorial(5.0, 2).to_f64(), 20.0, epsilon = 1e-12);
        assert!(falling_factorial(3.0, 4).is_zero());
        assert_eq!(falling_factorial(3.0, 0), SignedLogValue::ONE);
        assert_eq!(falling_factorial(7.5, 3), rising_factorial(7.5, 3, -1.0));
    }

    #[test]
    fn multiplicative_law_examples() {
        assert!(check_multiplicative_law(1.5, 2, 3, 0.7));
        assert!(check_multiplicative_law(-2.0, 1, 1, 1.0));
        assert!(check_multiplicative_law(0.0, 0, 5, 2.0));
    }

    #[test]
    fn binomials() {
        assert_relative_eq!(binomial(5, 2).to_f64(), 10.0, epsilon = 1e-12);
        assert!(binomial(2, 5).is_zero());
        assert_relative_eq!(factorial(6).to_f64(), 720.0, epsilon = 1e-12);
    }

    #[test]
    fn inversion_of_binomial_moments() {
        // Binomial(4, 0.3): E[(X)_{[q]}] = (4)_{[q]} 0.3^q.
        let moments: Vec<_> = (0..=4)
            .map(|q| falling_factorial(4.0, q) * SignedLogValue::from_f64(0.3).powi(q))
            .collect();
        let pmf = [0.2401, 0.4116, 0.2646, 0.0756, 0.0081];
        for (x, &p) in pmf.iter().enumerate() {
            assert_relative_eq!(invert_factorial_moments(&moments, x).to_f64(), p, epsilon = 1e-14);
        }
        assert!(invert_factorial_moments(&moments, 5).is_zero());
    }

    /// Brute-force expansion of the generalized multinomial theorem over
    /// all `(n_1, ..., n_p)` with sum `n`.
    fn multinomial_rhs(z: &[f64], n: usize, h: f64) -> f64 {
        fn go(z: &[f64], remaining: usize, h: f64) -> f64 {
            if z.len() == 1 {
                return rising_factorial(z[0], remaining, h).to_f64() / factorial(remaining).to_f64();
            }
            (0..=remaining)
                .map(|take| {
                    rising_factorial(z[0], take, h).to_f64() / factorial(take).to_f64()
                        * go(&z[1..], remaining - take, h)
                })
                .sum()
        }
        factorial(n).to_f64() * go(z, n, h)
    }

    #[test]
    fn multinomial_identity_exhaustive() {
        let cases: [&[f64]; 3] = [&[0.7], &[1.5, -0.4], &[0.3, 2.2, -1.1]];
        for z in cases {
            for n in 0..=8 {
                for h in [1.0, 0.5, -0.75] {
                    let lhs = rising_factorial(z.iter().sum(), n, h).to_f64();
                    let rhs = multinomial_rhs(z, n, h);
                    assert!((lhs - rhs).abs() <= 1e-10 * lhs.abs().max(1.0), "z={z:?} n={n} h={h}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn multiplicative_law_holds(x in -5.0f64..5.0, n in 0usize..15, r in 0usize..15, h in -2.0f64..2.0) {
            prop_assert!(check_multiplicative_law(x, n, r, h));
        }

        #[test]
        fn binomial_identity(x in -3.0f64..3.0, y in -3.0f64..3.0, h in -1.5f64..1.5, n in 0usize..=12) {
            let lhs = rising_factorial(x + y, n, h);
            let rhs = SignedLogValue::sum((0..=n).map(|k| {
                binomial(n, k) * rising_factorial(x, k, h) * rising_factorial(y, n - k, h)
            }));
            let scale = (0..=n)
                .map(|k| (binomial(n, k) * rising_factorial(x, k, h) * rising_factorial(y, n - k, h)).to_f64().abs())
                .fold(0.0f64, f64::max);
            prop_assert!((lhs.to_f64() - rhs.to_f64()).abs() <= 1e-11 * scale.max(lhs.to_f64().abs()).max(1e-300));
        }

        #[test]
        fn shifted_rising_factorial(z in 0.05f64..6.0, n in 0usize..=10, m in 1usize..=10) {
            let lhs = rising(z, n + m - 1);
            let rhs = rising(z, m - 1) * rising(z + m as f64 - 1.0, n);
            prop_assert!(lhs.relative_difference(rhs) <= 1e-12);
        }
    }
}
