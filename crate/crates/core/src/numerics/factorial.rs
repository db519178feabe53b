use std::f64::consts::PI;
use std::sync::OnceLock;

const TABLE_LEN: usize = 128;

fn table() -> &'static [f64; TABLE_LEN] {
    static TABLE: OnceLock<[f64; TABLE_LEN]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [0.0; TABLE_LEN];
        for k in 1..TABLE_LEN {
            t[k] = t[k - 1] + (k as f64).ln();
        }
        t
    })
}

/// ln(n!).
///
/// Cumulative sum of logarithms below 128, Stirling series above. The
/// truncated series error at n ≥ 128 is below 1/(1188 n⁹).
pub fn log_factorial(n: usize) -> f64 {
    if n < TABLE_LEN {
        return table()[n];
    }
    let x = n as f64;
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let series =
        inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 * (1.0 / 1680.0))));
    x * x.ln() - x + 0.5 * (2.0 * PI * x).ln() + series
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent route: compensated summation of ln k.
    fn kahan_log_factorial(n: usize) -> f64 {
        let (mut sum, mut comp) = (0.0f64, 0.0f64);
        for k in 2..=n {
            let y = (k as f64).ln() - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        sum
    }

    #[test]
    fn small_values() {
        assert_eq!(log_factorial(0), 0.0);
        assert_eq!(log_factorial(1), 0.0);
        assert!((log_factorial(10) - 3_628_800f64.ln()).abs() < 1e-14);
        assert!((log_factorial(10) - 15.104_412_573_075_516).abs() < 1e-13);
    }

    #[test]
    fn large_values_match_high_precision() {
        // mpmath loggamma(n + 1)
        let cases = [
            (170, 706.573_062_245_787_3),
            (1000, 5_912.128_178_488_163),
            (10_000, 82_108.927_836_814_35),
        ];
        for (n, expected) in cases {
            let got = log_factorial(n);
            assert!(
                ((got - expected) / expected).abs() < 1e-14,
                "n={n}: {got} vs {expected}"
            );
        }
    }

    #[test]
    fn table_and_series_agree_with_summation() {
        for n in [127, 128, 129, 500, 1000, 4000] {
            let a = log_factorial(n);
            let b = kahan_log_factorial(n);
            assert!(((a - b) / b).abs() < 1e-13, "n={n}");
        }
    }
}
