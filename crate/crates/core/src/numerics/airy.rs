use std::f64::consts::{FRAC_PI_4, PI};

/// First (largest) zero of Ai.
pub const AIRY_AI_FIRST_ZERO: f64 = -2.338_107_410_459_767;

/// Ai′ at the first zero.
pub const AIRY_AI_PRIME_AT_FIRST_ZERO: f64 = 0.701_210_822_720_691_4;

const AI_0: f64 = 0.355_028_053_887_817_2;
const AI_PRIME_0: f64 = -0.258_819_403_792_806_8;

// Beyond these the Maclaurin series loses digits to cancellation and the
// asymptotic expansions are already below 1e-10 relative error.
const SERIES_MAX_POSITIVE: f64 = 5.0;
const SERIES_MAX_NEGATIVE: f64 = -7.0;

/// Airy function of the first kind for real argument.
pub fn airy_ai(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x > SERIES_MAX_POSITIVE {
        asymptotic_positive(x)
    } else if x < SERIES_MAX_NEGATIVE {
        asymptotic_negative(-x)
    } else {
        maclaurin(x)
    }
}

fn maclaurin(x: f64) -> f64 {
    let x3 = x * x * x;
    let mut f_term = 1.0;
    let mut g_term = x;
    let mut f = f_term;
    let mut g = g_term;
    for k in 0..200 {
        let k3 = 3.0 * k as f64;
        f_term *= x3 / ((k3 + 2.0) * (k3 + 3.0));
        g_term *= x3 / ((k3 + 3.0) * (k3 + 4.0));
        f += f_term;
        g += g_term;
        if f_term.abs() < 1e-18 * f.abs() && g_term.abs() < 1e-18 * g.abs().max(1e-300) {
            break;
        }
    }
    AI_0 * f + AI_PRIME_0 * g
}

/// Coefficients u_k of the Airy asymptotic series, u₀ = 1.
fn u_coefficients(n: usize) -> Vec<f64> {
    let mut u = Vec::with_capacity(n);
    u.push(1.0);
    for k in 1..n {
        let kf = k as f64;
        let num = (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0);
        let den = (2.0 * kf - 1.0) * 216.0 * kf;
        let prev = u[k - 1];
        u.push(prev * num / den);
    }
    u
}

fn asymptotic_positive(x: f64) -> f64 {
    let zeta = 2.0 / 3.0 * x * x.sqrt();
    let u = u_coefficients(40);
    let mut sum = 0.0;
    let mut prev_mag = f64::INFINITY;
    let mut zpow = 1.0;
    for (k, uk) in u.iter().enumerate() {
        let term = uk * zpow;
        if term.abs() > prev_mag {
            break;
        }
        sum += if k % 2 == 0 { term } else { -term };
        prev_mag = term.abs();
        if prev_mag < 1e-17 * sum.abs() {
            break;
        }
        zpow /= zeta;
    }
    (-zeta).exp() / (2.0 * PI.sqrt() * x.powf(0.25)) * sum
}

/// Ai(−x) for x > 0.
fn asymptotic_negative(x: f64) -> f64 {
    let zeta = 2.0 / 3.0 * x * x.sqrt();
    let u = u_coefficients(40);
    let mut even = 0.0;
    let mut odd = 0.0;
    let mut zpow = 1.0;
    let mut prev_mag = f64::INFINITY;
    for (k, uk) in u.iter().enumerate() {
        let term = uk * zpow;
        if term.abs() > prev_mag || term.abs() < 1e-18 {
            break;
        }
        prev_mag = term.abs();
        // k = 2j contributes (−1)^j to the even series, k = 2j+1 to the odd
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            even += sign * term;
        } else {
            odd += sign * term;
        }
        zpow /= zeta;
    }
    let phase = zeta + FRAC_PI_4;
    (phase.sin() * even - phase.cos() * odd) / (PI.sqrt() * x.powf(0.25))
}

#[cfg(test)]
mod tests {
    use super::*;

    // mpmath airyai
    const REFERENCE: [(f64, f64); 22] = [
        (0.0, 0.355_028_053_887_817_2),
        (1.0, 0.135_292_416_312_881_42),
        (-1.0, 0.535_560_883_292_352_1),
        (2.0, 0.034_924_130_423_274_38),
        (-2.0, 0.227_407_428_201_685_58),
        (3.9, 0.001_167_654_872_991_449_7),
        (4.1, 0.000_773_629_663_781_597_8),
        (-4.5, 0.292_152_781_055_959_5),
        (5.0, 0.000_108_344_428_136_074_42),
        (-5.0, 0.350_761_009_024_114_3),
        (6.0, 9.947_694_360_252_89e-6),
        (-6.0, -0.329_145_173_629_823_1),
        (6.9, 9.786_113_339_266_028e-7),
        (-6.9, 0.101_687_997_739_764_83),
        (7.1, 5.725_322_885_877_663e-7),
        (-7.1, 0.254_036_328_561_978_15),
        (8.0, 4.692_207_616_099_232e-8),
        (-8.0, -0.052_705_050_356_386_2),
        (9.5, 5.330_263_704_617_492e-10),
        (-9.5, 0.319_103_247_719_128_2),
        (10.0, 1.104_753_255_289_868_6e-10),
        (-10.0, 0.040_241_238_486_443_19),
    ];

    #[test]
    fn matches_reference_to_1e_8() {
        for (x, want) in REFERENCE {
            let got = airy_ai(x);
            assert!((got - want).abs() < 1e-10, "Ai({x}) = {got}, want {want}");
        }
    }

    #[test]
    fn first_zero() {
        assert!(airy_ai(AIRY_AI_FIRST_ZERO).abs() < 1e-13);
        assert!(airy_ai(-2.338_107).abs() < 1e-5);
    }

    #[test]
    fn zero_value() {
        assert!((airy_ai(0.0) - 0.355_028).abs() < 1e-6);
    }

    #[test]
    fn first_zero_derivative_by_finite_difference() {
        let h = 1e-5;
        let d = (airy_ai(AIRY_AI_FIRST_ZERO + h) - airy_ai(AIRY_AI_FIRST_ZERO - h)) / (2.0 * h);
        assert!((d - AIRY_AI_PRIME_AT_FIRST_ZERO).abs() < 1e-8);
    }

    #[test]
    fn monotone_decay_beyond_one() {
        let mut prev = airy_ai(1.0);
        for i in 1..=300 {
            let x = 1.0 + i as f64 * 0.05;
            let v = airy_ai(x);
            assert!(v > 0.0 && v < prev, "x={x}");
            prev = v;
        }
    }

    #[test]
    fn branches_are_continuous() {
        for edge in [SERIES_MAX_POSITIVE, SERIES_MAX_NEGATIVE] {
            let a = airy_ai(edge - 1e-12);
            let b = airy_ai(edge + 1e-12);
            assert!((a - b).abs() < 1e-10, "edge {edge}: {a} vs {b}");
        }
    }
}
