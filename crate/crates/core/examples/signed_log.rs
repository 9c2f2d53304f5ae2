//! Signed log-space arithmetic: products and sums of numbers far outside
//! the floating-point range, and cancellation in alternating sums.

use gibbs_partitions::factorials::{factorial, rising};
use gibbs_partitions::SignedLogValue;

fn main() {
    let huge = factorial(1000);
    println!("ln 1000! = {:.6}", huge.ln_abs());
    let ratio = factorial(1001) / huge;
    println!("1001!/1000! = {}", ratio.to_f64());

    let neg = rising(-2.5, 4);
    println!("(-2.5)_4 = {} (sign {})", neg.to_f64(), neg.sign());

    // Residues below 1e-12 of the largest term are treated as exact cancellation.
    let terms = [1e300, -1e300, 3.0].map(SignedLogValue::from_f64);
    println!("1e300 - 1e300 + 3 -> {}", SignedLogValue::sum(terms).to_f64());
    let terms = [1.0, -1.0 + 1e-9, 2e-9].map(SignedLogValue::from_f64);
    println!("1 - (1 - 1e-9) + 2e-9 -> {:e}", SignedLogValue::sum(terms).to_f64());
    let x = SignedLogValue::from_f64(1e-300) * SignedLogValue::from_f64(1e-300);
    println!("1e-300 * 1e-300: ln = {:.4}, underflows to {}", x.ln_abs(), x.to_f64());
}
