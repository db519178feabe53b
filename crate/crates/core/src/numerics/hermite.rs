use num_complex::Complex64;

use super::LogScaledComplex;

const RESCALE_ABOVE: f64 = 1e100;

/// H_k(x) for k = 0..=n_max via H_{k+1} = 2x H_k − 2k H_{k−1}, carrying a
/// shared log scale so nothing overflows.
pub fn hermite_sequence_log_scaled(n_max: usize, x: Complex64) -> Vec<LogScaledComplex> {
    let mut out = Vec::with_capacity(n_max + 1);
    let mut log_scale = 0.0;
    let mut prev = Complex64::new(0.0, 0.0);
    let mut cur = Complex64::new(1.0, 0.0);
    out.push(LogScaledComplex::from_complex(cur));
    for k in 0..n_max {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
        let mag = cur.norm().max(prev.norm());
        if mag > RESCALE_ABOVE || (mag < 1.0 / RESCALE_ABOVE && mag > 0.0) {
            prev /= mag;
            cur /= mag;
            log_scale += mag.ln();
        }
        out.push(LogScaledComplex::from_complex(cur).scale_log(log_scale));
    }
    out
}

pub fn hermite_log_scaled(n: usize, x: Complex64) -> LogScaledComplex {
    *hermite_sequence_log_scaled(n, x)
        .last()
        .expect("sequence holds n + 1 entries")
}
