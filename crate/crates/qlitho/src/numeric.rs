//! Exact combinatorial kernels shared by the dosage expansion.

/// Binomial coefficient C(n, k) in exact integer arithmetic.
///
/// The multiplicative form keeps every intermediate an exact binomial
/// coefficient times an integer; u128 holds C(64, 32) * 64 with room to spare.
pub(crate) fn binomial_u128(n: u32, k: u32) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// C(n, k) converted to floating point once, after the exact integer build.
pub(crate) fn binomial(n: u32, k: u32) -> f64 {
    binomial_u128(n, k) as f64
}

/// k! as a double; exact up to 2^53 (k <= 18), faithfully rounded beyond.
pub(crate) fn factorial(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

/// ln(k!) by direct summation of logs.
pub(crate) fn ln_factorial(k: u32) -> f64 {
    (1..=k).map(|i| f64::from(i).ln()).sum()
}

/// x / k!, switching to log space for k > 20 where k! loses integer exactness.
pub(crate) fn div_by_factorial(x: f64, k: u32) -> f64 {
    debug_assert!(x >= 0.0);
    if k <= 20 {
        x / factorial(k)
    } else if x > 0.0 {
        (x.ln() - ln_factorial(k)).exp()
    } else {
        0.0
    }
}

/// sqrt(n (n-1) ... (n-j+1)), the amplitude factor of a j-fold annihilation.
///
/// Each factor is an exact integer converted to f64 before the square root.
/// The full product is bounded by sqrt(64!) ~ 3.6e44, safely inside f64 range,
/// so no logarithmic accumulation is needed at the 64-photon cap.
pub(crate) fn falling_sqrt(n: u32, j: u32) -> f64 {
    if j > n {
        return 0.0;
    }
    (0..j).map(|t| f64::from(n - t).sqrt()).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_exact_values() {
        assert_eq!(binomial_u128(0, 0), 1);
        assert_eq!(binomial_u128(5, 2), 10);
        assert_eq!(binomial_u128(10, 5), 252);
        assert_eq!(binomial_u128(64, 32), 1_832_624_140_942_590_534);
        assert_eq!(binomial_u128(64, 64), 1);
        assert_eq!(binomial_u128(3, 7), 0);
    }

    #[test]
    fn binomial_matches_pascal_triangle() {
        let mut row = vec![1u128];
        for n in 1..=20u32 {
            let mut next = vec![1u128];
            for k in 1..n as usize {
                next.push(row[k - 1] + row[k]);
            }
            next.push(1);
            row = next;
            for (k, &want) in row.iter().enumerate() {
                assert_eq!(binomial_u128(n, k as u32), want, "C({n},{k})");
            }
        }
    }

    #[test]
    fn factorial_small() {
        assert_eq!(factorial(0), 1.0);
        assert_eq!(factorial(5), 120.0);
        assert_eq!(factorial(10), 3_628_800.0);
    }

    #[test]
    fn div_by_factorial_log_path_agrees() {
        // 21! = 51090942171709440000 fits u128 exactly.
        let fact21 = 51_090_942_171_709_440_000u128 as f64;
        for &x in &[1.0, 3.5e10, 7.2e40] {
            let direct = x / fact21;
            let log_path = div_by_factorial(x, 21);
            assert!(
                (direct - log_path).abs() <= 1e-12 * direct,
                "{direct} vs {log_path}"
            );
        }
        assert_eq!(div_by_factorial(0.0, 30), 0.0);
    }

    #[test]
    fn falling_sqrt_squares_to_integer_product() {
        // j = n recovers sqrt(n!).
        for n in 0..=10u32 {
            let product: f64 = (1..=n).map(f64::from).product();
            let fs = falling_sqrt(n, n);
            assert!((fs * fs - product).abs() <= 1e-9 * product.max(1.0));
        }
        assert_eq!(falling_sqrt(2, 3), 0.0);
        assert_eq!(falling_sqrt(7, 0), 1.0);
    }
}
