//! Exact comparisons between size thresholds of the form `a * x` with `a` an
//! integer cardinality and `x` a nonnegative `f64` parameter.
//!
//! Every finite `f64` is an exact binary rational, so `a * x <= b * y` can be
//! decided without rounding by comparing `a * mant(x) * 2^exp(x)` against
//! `b * mant(y) * 2^exp(y)` in wide integer arithmetic. All size-window and
//! expansion-factor tests in this crate go through these helpers; cardinalities
//! are never pushed through floating-point division.

use std::cmp::Ordering;

/// Decomposes a finite nonnegative `f64` into `(mantissa, exponent)` with
/// `x == mantissa * 2^exponent` exactly.
fn decompose(x: f64) -> (u64, i32) {
    debug_assert!(x.is_finite() && x >= 0.0);
    if x == 0.0 {
        return (0, 0);
    }
    let bits = x.to_bits();
    let raw_exp = ((bits >> 52) & 0x7ff) as i32;
    let frac = bits & ((1u64 << 52) - 1);
    if raw_exp == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), raw_exp - 1075)
    }
}

/// Compares `lhs * 2^le` with `rhs * 2^re` exactly. A shift that would push
/// significant bits past 128 is decided by magnitude instead of performed;
/// `checked_shl` alone is not enough because it permits bits to drop off.
fn cmp_mag(lhs: u128, le: i32, rhs: u128, re: i32) -> Ordering {
    if lhs == 0 || rhs == 0 {
        return lhs.cmp(&rhs);
    }
    let diff = le - re;
    if diff >= 0 {
        let bits = 128 - lhs.leading_zeros() as i32;
        if bits + diff > 128 {
            Ordering::Greater
        } else {
            (lhs << diff).cmp(&rhs)
        }
    } else {
        let bits = 128 - rhs.leading_zeros() as i32;
        if bits - diff > 128 {
            Ordering::Less
        } else {
            lhs.cmp(&(rhs << -diff))
        }
    }
}

/// Compares `a * x` with `b * y` exactly. Requires `x, y` finite and `>= 0`.
pub fn cmp_scaled(a: u64, x: f64, b: u64, y: f64) -> Ordering {
    let (mx, ex) = decompose(x);
    let (my, ey) = decompose(y);
    cmp_mag(a as u128 * mx as u128, ex, b as u128 * my as u128, ey)
}

/// Compares the product `x * y` with `b * z` exactly; all floats finite and
/// `>= 0`. Used for hypothesis checks like `alpha * t` against a constant.
pub fn cmp_prod(x: f64, y: f64, b: u64, z: f64) -> Ordering {
    let (mx, ex) = decompose(x);
    let (my, ey) = decompose(y);
    let (mz, ez) = decompose(z);
    cmp_mag(
        mx as u128 * my as u128,
        ex + ey,
        b as u128 * mz as u128,
        ez,
    )
}

/// `a * x <= b * y`, exactly.
pub fn le_scaled(a: u64, x: f64, b: u64, y: f64) -> bool {
    cmp_scaled(a, x, b, y) != Ordering::Greater
}

/// `a * x < b * y`, exactly.
pub fn lt_scaled(a: u64, x: f64, b: u64, y: f64) -> bool {
    cmp_scaled(a, x, b, y) == Ordering::Less
}

/// Largest `k` in `0..=max` with `k * x <= b * y`; exact in the same sense.
pub fn max_count_within(max: usize, x: f64, b: u64, y: f64) -> usize {
    let (mut lo, mut hi) = (0usize, max);
    while lo < hi {
        let mid = lo + (hi - lo + 1) / 2;
        if le_scaled(mid as u64, x, b, y) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    lo
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dyadic_products_compare_exactly() {
        assert_eq!(cmp_scaled(2, 2.0, 1, 4.0), Ordering::Equal);
        assert_eq!(cmp_scaled(3, 0.25, 1, 1.0), Ordering::Less);
        assert_eq!(cmp_scaled(5, 0.25, 1, 1.25), Ordering::Equal);
        assert_eq!(cmp_scaled(1, 0.5, 0, 1.0), Ordering::Greater);
        assert_eq!(cmp_scaled(0, 0.5, 0, 123.0), Ordering::Equal);
    }

    #[test]
    fn nondyadic_comparisons_follow_binary_representation() {
        // 0.1 rounds up in binary, so 3 * (0.1 as f64) exceeds the f64 0.3.
        assert_eq!(cmp_scaled(3, 0.1, 1, 0.3), Ordering::Greater);
        assert_eq!(cmp_scaled(10, 0.1, 1, 1.0), Ordering::Greater);
    }

    #[test]
    fn extreme_exponent_gaps_short_circuit() {
        assert_eq!(cmp_scaled(1, 1e300, 1, 1e-300), Ordering::Greater);
        assert_eq!(cmp_scaled(1, 1e-300, 1, 1e300), Ordering::Less);
        assert_eq!(cmp_scaled(1, f64::MIN_POSITIVE, 1, 1.0), Ordering::Less);
    }

    #[test]
    fn moderate_shifts_do_not_drop_bits() {
        // lhs already has 113 significant bits; a further shift of 20 must
        // compare by magnitude, not wrap.
        assert_eq!(
            cmp_scaled(1 << 60, 1.0, 1, (0.5f64).powi(20)),
            Ordering::Greater
        );
        assert_eq!(
            cmp_scaled(1, (0.5f64).powi(20), 1 << 60, 1.0),
            Ordering::Less
        );
    }

    #[test]
    fn float_products_compare_exactly() {
        assert_eq!(cmp_prod(0.5, 2048.0, 1024, 1.0), Ordering::Equal);
        assert_eq!(cmp_prod(0.5, 2049.0, 1024, 1.0), Ordering::Greater);
        assert_eq!(cmp_prod(0.25, 6.0, 1024, 1.0), Ordering::Less);
        assert_eq!(cmp_prod(0.3, 10.0, 3, 1.0), Ordering::Less);
        assert_eq!(cmp_prod(0.0, 5.0, 1, 1.0), Ordering::Less);
    }

    #[test]
    fn max_count_matches_direct_scan() {
        for &(x, b, y) in &[(2.0, 10u64, 0.5), (1.0, 7, 0.25), (3.0, 100, 0.3)] {
            let fast = max_count_within(1000, x, b, y);
            let slow = (0..=1000).rev().find(|&k| le_scaled(k as u64, x, b, y));
            assert_eq!(Some(fast), slow);
        }
    }
}
