//! Sign-tracked logarithmic arithmetic.
//!
//! Every quantity in this crate is a product or ratio of factorial-like
//! terms, which overflow `f64` long before `n = 10^3`. A
//! [`SignedLogValue`] stores `sign * exp(ln_abs)` so products are additions
//! and only sums need care. Sums rescale to the largest term and accumulate
//! in double-double precision, largest magnitude first.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Div, DivAssign, Mul, MulAssign, Neg};

/// Relative size (with respect to the largest term) below which a signed sum
/// is taken to have cancelled exactly.
pub const CANCELLATION_THRESHOLD: f64 = 1e-12;

/// Probability excursions outside `[0, 1]` larger than this are reported as
/// warnings rather than silently clamped.
pub const CLAMP_WARNING_THRESHOLD: f64 = 1e-9;

/// A real number stored as `(sign, ln|value|)`.
///
/// `sign == 0` is exact zero regardless of the stored magnitude. The
/// logarithm is kept as an unevaluated sum `hi + lo` so that products and
/// `f64` round trips keep full relative precision even when `|ln x|` is in
/// the hundreds.
#[derive(Clone, Copy, PartialEq)]
pub struct SignedLogValue {
    sign: i8,
    ln_hi: f64,
    ln_lo: f64,
}

/// Error-free transformation `a + b = s + e`.
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

// Double-double arithmetic on unevaluated pairs `hi + lo`, used where a
// logarithm is converted to or from a plain value.
type Dd = (f64, f64);

const LN2: Dd = (std::f64::consts::LN_2, 2.319_046_813_846_299_6e-17);

fn quick_two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    (s, b - (s - a))
}

fn dd_add(a: Dd, b: Dd) -> Dd {
    let (s, e) = two_sum(a.0, b.0);
    let (t, f) = two_sum(a.1, b.1);
    let (s, e) = quick_two_sum(s, e + t);
    quick_two_sum(s, e + f)
}

fn dd_mul(a: Dd, b: Dd) -> Dd {
    let p = a.0 * b.0;
    let e = a.0.mul_add(b.0, -p);
    quick_two_sum(p, e + (a.0 * b.1 + a.1 * b.0))
}

fn dd_div_f64(a: Dd, d: f64) -> Dd {
    let q = a.0 / d;
    let p = q * d;
    let err = q.mul_add(d, -p);
    quick_two_sum(q, ((a.0 - p) - err + a.1) / d)
}

/// `e^x` to about 32 significant digits.
fn exp_dd(x: Dd) -> Dd {
    if x.0 > 709.8 {
        return (f64::INFINITY, 0.0);
    }
    if x.0 < -745.2 {
        return (0.0, 0.0);
    }
    if x.0 == 0.0 && x.1 == 0.0 {
        return (1.0, 0.0);
    }
    // x = k ln 2 + 256 r with |r| < 0.0014.
    let k = (x.0 / LN2.0).round();
    let reduced = dd_add(x, dd_mul((-k, 0.0), LN2));
    let r = (reduced.0 / 256.0, reduced.1 / 256.0);
    // expm1(r) = r (1 + r/2 (1 + r/3 (1 + ...)))
    let mut acc: Dd = (1.0, 0.0);
    for i in (2..=11).rev() {
        acc = dd_add((1.0, 0.0), dd_div_f64(dd_mul(r, acc), i as f64));
    }
    let mut e = dd_mul(r, acc);
    for _ in 0..8 {
        // expm1(2y) = expm1(y) (expm1(y) + 2)
        e = dd_mul(e, dd_add(e, (2.0, 0.0)));
    }
    let y = dd_add((1.0, 0.0), e);
    let k = k as i32;
    let (s1, s2) = (2f64.powi(k / 2), 2f64.powi(k - k / 2));
    (y.0 * s1 * s2, y.1 * s1 * s2)
}

/// `ln a` for finite `a > 0`, to about 32 significant digits.
fn ln_dd(a: f64) -> Dd {
    const SHIFT: i32 = 600;
    if !(1e-300..=1e300).contains(&a) {
        let scale = if a < 1.0 { SHIFT } else { -SHIFT };
        let shifted = ln_dd(a * 2f64.powi(scale));
        return dd_add(shifted, dd_mul((-f64::from(scale), 0.0), LN2));
    }
    // One Newton step y <- y + a e^{-y} - 1 from the libm estimate.
    let y0 = a.ln();
    let t = dd_mul(exp_dd((-y0, 0.0)), (a, 0.0));
    dd_add((y0, 0.0), dd_add(t, (-1.0, 0.0)))
}

impl SignedLogValue {
    pub const ZERO: Self = Self {
        sign: 0,
        ln_hi: f64::NEG_INFINITY,
        ln_lo: 0.0,
    };
    pub const ONE: Self = Self {
        sign: 1,
        ln_hi: 0.0,
        ln_lo: 0.0,
    };

    pub fn new(sign: i8, ln_abs: f64) -> Self {
        Self::with_parts(sign, ln_abs, 0.0)
    }

    fn with_parts(sign: i8, hi: f64, lo: f64) -> Self {
        if sign == 0 || hi == f64::NEG_INFINITY || hi.is_nan() {
            return Self::ZERO;
        }
        if !hi.is_finite() {
            return Self {
                sign: sign.signum(),
                ln_hi: hi,
                ln_lo: 0.0,
            };
        }
        let (hi, lo) = two_sum(hi, lo);
        Self {
            sign: sign.signum(),
            ln_hi: hi,
            ln_lo: lo,
        }
    }

    /// A positive value given by its natural logarithm.
    pub fn from_ln(ln_abs: f64) -> Self {
        Self::new(1, ln_abs)
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 || x.is_nan() {
            return Self::ZERO;
        }
        let sign = if x > 0.0 { 1 } else { -1 };
        let a = x.abs();
        if a.is_infinite() {
            return Self::new(sign, f64::INFINITY);
        }
        let (hi, lo) = ln_dd(a);
        Self::with_parts(sign, hi, lo)
    }

    pub fn from_usize(x: usize) -> Self {
        Self::from_f64(x as f64)
    }

    pub fn to_f64(self) -> f64 {
        match self.sign {
            0 => 0.0,
            s => f64::from(s) * exp_dd((self.ln_hi, self.ln_lo)).0,
        }
    }

    pub fn sign(self) -> i8 {
        self.sign
    }

    /// `ln|value|`; negative infinity for zero.
    pub fn ln_abs(self) -> f64 {
        if self.sign == 0 {
            f64::NEG_INFINITY
        } else {
            self.ln_hi + self.ln_lo
        }
    }

    pub fn is_zero(self) -> bool {
        self.sign == 0
    }

    pub fn is_positive(self) -> bool {
        self.sign > 0
    }

    pub fn abs(self) -> Self {
        Self::with_parts(self.sign.abs(), self.ln_hi, self.ln_lo)
    }

    /// Reciprocal; zero maps to zero so it still annihilates products.
    pub fn recip(self) -> Self {
        if self.sign == 0 {
            return Self::ZERO;
        }
        Self::with_parts(self.sign, -self.ln_hi, -self.ln_lo)
    }

    pub fn powi(self, exponent: usize) -> Self {
        if exponent == 0 {
            return Self::ONE;
        }
        if self.sign == 0 {
            return Self::ZERO;
        }
        let sign = if self.sign < 0 && exponent % 2 == 1 { -1 } else { 1 };
        let e = exponent as f64;
        let hi = self.ln_hi * e;
        let err = self.ln_hi.mul_add(e, -hi);
        Self::with_parts(sign, hi, err + self.ln_lo * e)
    }

    /// Difference of log-magnitudes `ln|self| - ln|other|`.
    fn ln_gap(self, other: Self) -> f64 {
        (self.ln_hi - other.ln_hi) + (self.ln_lo - other.ln_lo)
    }

    /// Relative difference `|a - b| / max(|a|, |b|)`, zero when both are zero.
    pub fn relative_difference(self, other: Self) -> f64 {
        if self.is_zero() && other.is_zero() {
            return 0.0;
        }
        if self.is_zero() || other.is_zero() {
            return 1.0;
        }
        let gap = self.ln_gap(other).abs();
        if self.sign == other.sign {
            // |e^a - e^b| / e^max = 1 - e^{-|a-b|}
            -(-gap).exp_m1()
        } else {
            1.0 + (-gap).exp()
        }
    }

    /// Sum of a sequence with overflow-free scaling and compensated
    /// accumulation. Cancellation down to [`CANCELLATION_THRESHOLD`] of the
    /// largest term snaps to exact zero.
    pub fn sum<I: IntoIterator<Item = Self>>(terms: I) -> Self {
        let mut terms: Vec<Self> = terms.into_iter().filter(|t| !t.is_zero()).collect();
        match terms.len() {
            0 => return Self::ZERO,
            1 => return terms[0],
            _ => {}
        }
        terms.sort_by(|a, b| b.ln_abs().partial_cmp(&a.ln_abs()).unwrap_or(Ordering::Equal));
        let top = terms[0];
        if top.ln_hi == f64::INFINITY {
            let sign = terms
                .iter()
                .filter(|t| t.ln_hi == f64::INFINITY)
                .map(|t| t.sign)
                .sum::<i8>();
            return Self::new(sign.signum(), f64::INFINITY);
        }
        let mixed = terms.iter().any(|t| t.sign != top.sign);

        let mut total: Dd = (0.0, 0.0);
        for t in &terms {
            let (x, e) = exp_dd(dd_add((t.ln_hi, t.ln_lo), (-top.ln_hi, -top.ln_lo)));
            let s = f64::from(t.sign);
            total = dd_add(total, (s * x, s * e));
        }

        if total.0 == 0.0 || (mixed && total.0.abs() <= CANCELLATION_THRESHOLD) {
            return Self::ZERO;
        }
        let sign = if total.0 > 0.0 { 1 } else { -1 };
        let magnitude = total.0.abs();
        let ln_total = dd_add(ln_dd(magnitude), (f64::from(sign) * total.1 / magnitude, 0.0));
        let (hi, lo) = dd_add((top.ln_hi, top.ln_lo), ln_total);
        Self::with_parts(sign, hi, lo)
    }
}

impl Default for SignedLogValue {
    fn default() -> Self {
        Self::ZERO
    }
}

impl fmt::Debug for SignedLogValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            0 => write!(f, "SignedLogValue(0)"),
            s => write!(
                f,
                "SignedLogValue({}exp({}))",
                if s < 0 { "-" } else { "+" },
                self.ln_abs()
            ),
        }
    }
}

impl fmt::Display for SignedLogValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_f64())
    }
}

impl From<f64> for SignedLogValue {
    fn from(x: f64) -> Self {
        Self::from_f64(x)
    }
}

impl Mul for SignedLogValue {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        if self.sign == 0 || rhs.sign == 0 {
            return Self::ZERO;
        }
        let (hi, err) = two_sum(self.ln_hi, rhs.ln_hi);
        Self::with_parts(self.sign * rhs.sign, hi, err + self.ln_lo + rhs.ln_lo)
    }
}

impl MulAssign for SignedLogValue {
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

impl Div for SignedLogValue {
    type Output = Self;

    fn div(self, rhs: Self) -> Self {
        debug_assert!(!rhs.is_zero(), "division by a zero SignedLogValue");
        self * rhs.recip()
    }
}

impl DivAssign for SignedLogValue {
    fn div_assign(&mut self, rhs: Self) {
        *self = *self / rhs;
    }
}

impl Neg for SignedLogValue {
    type Output = Self;

    fn neg(self) -> Self {
        Self::with_parts(-self.sign, self.ln_hi, self.ln_lo)
    }
}

impl Sum for SignedLogValue {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        SignedLogValue::sum(iter)
    }
}

impl Product for SignedLogValue {
    fn product<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ONE, |acc, x| acc * x)
    }
}

pub fn slv_mul(a: SignedLogValue, b: SignedLogValue) -> SignedLogValue {
    a * b
}

pub fn slv_sum(terms: &[SignedLogValue]) -> SignedLogValue {
    SignedLogValue::sum(terms.iter().copied())
}

/// Counters collected while converting values to probabilities on the
/// current thread.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Diagnostics {
    pub clamps: usize,
    pub warnings: Vec<String>,
}

thread_local! {
    static DIAGNOSTICS: RefCell<Diagnostics> = RefCell::new(Diagnostics::default());
}

/// Returns and resets the diagnostics accumulated on this thread.
pub fn take_diagnostics() -> Diagnostics {
    DIAGNOSTICS.with(|d| std::mem::take(&mut *d.borrow_mut()))
}

pub fn record_warning(message: impl Into<String>) {
    let message = message.into();
    log::warn!("{message}");
    DIAGNOSTICS.with(|d| d.borrow_mut().warnings.push(message));
}

/// Clamps a computed probability into `[0, 1]`.
pub fn clamp_probability(p: f64) -> f64 {
    if (0.0..=1.0).contains(&p) {
        return p;
    }
    let clamped = p.clamp(0.0, 1.0);
    let excursion = (p - clamped).abs();
    DIAGNOSTICS.with(|d| d.borrow_mut().clamps += 1);
    if excursion > CLAMP_WARNING_THRESHOLD || p.is_nan() {
        record_warning(format!(
            "probability {p:e} clamped to {clamped} (excursion {excursion:e})"
        ));
    }
    clamped
}

pub fn to_probability(v: SignedLogValue) -> f64 {
    clamp_probability(v.to_f64())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn slv(x: f64) -> SignedLogValue {
        SignedLogValue::from_f64(x)
    }

    #[test]
    fn mul_examples() {
        let p = slv(2.0) * slv(3.0);
        assert_eq!(p.sign(), 1);
        assert_relative_eq!(p.ln_abs(), 6f64.ln(), epsilon = 1e-15);
        assert!((SignedLogValue::ZERO * slv(5.0)).is_zero());
        let q = slv(-4.0) * slv(-4.0);
        assert_eq!(q.sign(), 1);
        assert_relative_eq!(q.ln_abs(), 16f64.ln(), epsilon = 1e-15);
    }

    #[test]
    fn sum_examples() {
        assert_relative_eq!(slv_sum(&[slv(1.0), slv(1.0), slv(1.0)]).to_f64(), 3.0, epsilon = 1e-15);
        assert!(slv_sum(&[slv(0.37), slv(-0.37)]).is_zero());
        let big = SignedLogValue::from_ln(700.0);
        let s = slv_sum(&[big, big]);
        assert_eq!(s.sign(), 1);
        assert_relative_eq!(s.ln_abs(), 700.0 + 2f64.ln(), epsilon = 1e-12);
        let huge = SignedLogValue::from_ln(5000.0);
        let s = slv_sum(&[huge, huge, -huge]);
        assert_relative_eq!(s.ln_abs(), 5000.0, epsilon = 1e-12);
    }

    #[test]
    fn near_cancellation_snaps_to_zero() {
        let s = slv_sum(&[slv(1.0), slv(-1.0 + 1e-14)]);
        assert!(s.is_zero());
        // Genuine small differences survive.
        let s = slv_sum(&[slv(1.0), slv(-1.0 + 1e-6)]);
        assert_relative_eq!(s.to_f64(), 1e-6, max_relative = 1e-9);
    }

    #[test]
    fn zero_ignores_magnitude() {
        let z = SignedLogValue::new(0, 12.0);
        assert!(z.is_zero());
        assert_eq!(z, SignedLogValue::ZERO);
        assert_eq!(z.to_f64(), 0.0);
    }

    #[test]
    fn powers_track_sign() {
        assert_relative_eq!(slv(-2.0).powi(3).to_f64(), -8.0, epsilon = 1e-12);
        assert_relative_eq!(slv(-2.0).powi(2).to_f64(), 4.0, epsilon = 1e-12);
        assert_eq!(slv(0.0).powi(0), SignedLogValue::ONE);
    }

    #[test]
    fn clamping_is_counted() {
        let _ = take_diagnostics();
        assert_eq!(clamp_probability(0.5), 0.5);
        assert_eq!(clamp_probability(1.0 + 1e-13), 1.0);
        assert_eq!(clamp_probability(-0.25), 0.0);
        let d = take_diagnostics();
        assert_eq!(d.clamps, 2);
        assert_eq!(d.warnings.len(), 1);
        assert_eq!(take_diagnostics(), Diagnostics::default());
    }

    proptest! {
        #[test]
        fn round_trip(mantissa in 1.0f64..10.0, exponent in -299i32..299, negative: bool) {
            let x = if negative { -1.0 } else { 1.0 } * mantissa * 10f64.powi(exponent);
            let back = slv(x).to_f64();
            prop_assert!(((back - x) / x).abs() <= 1e-14);
        }

        #[test]
        fn mul_commutes_and_associates(a in -1e6f64..1e6, b in -1e6f64..1e6, c in -1e6f64..1e6) {
            let (a, b, c) = (slv(a), slv(b), slv(c));
            prop_assert!((a * b).relative_difference(b * a) <= 1e-13);
            prop_assert!(((a * b) * c).relative_difference(a * (b * c)) <= 1e-13);
        }

        #[test]
        fn sum_is_permutation_invariant(
            xs in proptest::collection::vec(-1e3f64..1e3, 1..20),
            seed in any::<u64>(),
        ) {
            let terms: Vec<_> = xs.iter().map(|&x| slv(x)).collect();
            let mut shuffled = terms.clone();
            let len = shuffled.len();
            let mut state = seed;
            for i in (1..len).rev() {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                shuffled.swap(i, (state >> 33) as usize % (i + 1));
            }
            let a = slv_sum(&terms);
            let b = slv_sum(&shuffled);
            let largest = xs.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            prop_assert!((a.to_f64() - b.to_f64()).abs() <= 1e-12 * largest.max(a.to_f64().abs()));
        }
    }
}
