//! Exact integer combinatorics and a few floating-point companions.
//!
//! Everything integer-valued is accumulated in `u128` with checked arithmetic;
//! conversion to `f64` happens only where a witness consumes the number.

use num_rational::Ratio;

use crate::error::{Error, Result};

/// Stirling number of the second kind `S(e, f)`: the number of ways to
/// partition an `e`-element set into `f` non-empty blocks.
///
/// Built row by row from `S(e, f) = f S(e-1, f) + S(e-1, f-1)`.
pub fn stirling2(e: usize, f: usize) -> Result<u128> {
    if f > e {
        return Ok(0);
    }
    if e == 0 {
        return Ok(1);
    }
    if f == 0 {
        return Ok(0);
    }
    let row = stirling2_row(e)?;
    Ok(row[f])
}

/// Row `S(e, 0..=e)` of the Stirling triangle.
pub fn stirling2_row(e: usize) -> Result<Vec<u128>> {
    let mut row = vec![0u128; e + 1];
    row[0] = 1;
    for n in 1..=e {
        // in place, right to left so row[k-1] still holds S(n-1, k-1)
        for k in (1..=n).rev() {
            let grown = (k as u128)
                .checked_mul(row[k])
                .and_then(|v| v.checked_add(row[k - 1]))
                .ok_or(Error::Overflow("Stirling number of the second kind"))?;
            row[k] = grown;
        }
        row[0] = 0;
    }
    Ok(row)
}

/// `n!!` for `n >= -1`, with `(-1)!! = 0!! = 1`.
pub fn double_factorial(n: i64) -> Result<u128> {
    if n < -1 {
        return Err(Error::InvalidArgument(format!(
            "double factorial needs n >= -1, got {n}"
        )));
    }
    let mut acc: u128 = 1;
    let mut k = n;
    while k > 1 {
        acc = acc
            .checked_mul(k as u128)
            .ok_or(Error::Overflow("double factorial"))?;
        k -= 2;
    }
    Ok(acc)
}

pub fn factorial(n: usize) -> Result<u128> {
    (1..=n as u128).try_fold(1u128, |acc, k| {
        acc.checked_mul(k).ok_or(Error::Overflow("factorial"))
    })
}

pub fn binomial(n: usize, k: usize) -> Result<u128> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = acc
            .checked_mul((n - i) as u128)
            .ok_or(Error::Overflow("binomial coefficient"))?
            / (i as u128 + 1);
    }
    Ok(acc)
}

/// The rising factorial `(1/2)_{l/2} = (l-1)!! / 2^{l/2}` for even `l >= 2`,
/// the `l`-th central quadrature moment of a coherent state.
pub fn pochhammer_half(l: usize) -> Result<Ratio<u128>> {
    if l < 2 || !l.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "(1/2)_(l/2) needs an even l >= 2, got {l}"
        )));
    }
    let numer = double_factorial(l as i64 - 1)?;
    if l / 2 >= 128 {
        return Err(Error::Overflow("power of two"));
    }
    let denom = 1u128 << (l / 2);
    Ok(Ratio::new(numer, denom))
}

pub fn ratio_to_f64(r: &Ratio<u128>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// `ln n!`. Exact-product based below 171, Stirling series above.
pub fn ln_factorial(n: u64) -> f64 {
    if n < 171 {
        let mut acc = 1.0f64;
        for k in 2..=n {
            acc *= k as f64;
        }
        acc.ln()
    } else {
        let x = n as f64 + 1.0;
        // ln Gamma(x) asymptotic series; truncation error < 1e-20 for x > 171
        let inv = 1.0 / x;
        let inv2 = inv * inv;
        let series = inv
            * (1.0 / 12.0
                - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 * (1.0 / 1680.0))));
        (x - 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln() + series
    }
}

/// `ln (r! / (r-n)!)`, the log falling factorial. Requires `n <= r`.
pub fn ln_falling(r: u64, n: u64) -> f64 {
    debug_assert!(n <= r);
    if n <= 16 {
        (0..n).map(|k| ((r - k) as f64).ln()).sum()
    } else {
        ln_factorial(r) - ln_factorial(r - n)
    }
}
