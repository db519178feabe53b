/// J_ℓ(x) for ℓ = 0..=l_max by Miller's downward recurrence normalized with
/// J₀ + 2 Σ J_{2k} = 1.
pub fn bessel_j_nonneg(l_max: usize, x: f64) -> Vec<f64> {
    assert!(x >= 0.0, "bessel_j_nonneg requires x >= 0, got {x}");
    let mut out = vec![0.0; l_max + 1];
    if x < 1e-30 {
        // leading term (x/2)^ℓ / ℓ! is exact to double precision here
        out[0] = 1.0;
        let mut term = 1.0;
        for (l, slot) in out.iter_mut().enumerate().skip(1) {
            term *= 0.5 * x / l as f64;
            *slot = term;
        }
        return out;
    }

    let order = (l_max as f64).max(x.ceil());
    let mut start = (order + 20.0 + (60.0 * order).sqrt()) as usize;
    start += start % 2;

    const RESCALE: f64 = 1e250;
    let mut next = 0.0; // J_{k+1}
    let mut cur = 1e-300; // J_k
    let mut norm = 0.0;
    let two_over_x = 2.0 / x;
    for k in (1..=start).rev() {
        if k <= l_max {
            out[k] = cur;
        }
        if k % 2 == 0 {
            norm += 2.0 * cur;
        }
        let prev = k as f64 * two_over_x * cur - next;
        next = cur;
        cur = prev;
        if cur.abs() > RESCALE {
            cur /= RESCALE;
            next /= RESCALE;
            norm /= RESCALE;
            for v in out.iter_mut().skip(k) {
                *v /= RESCALE;
            }
        }
    }
    out[0] = cur;
    norm += cur;
    for v in &mut out {
        *v /= norm;
    }
    out
}

/// J_ℓ(x) for integer ℓ of either sign, x ≥ 0.
pub fn bessel_j(ell: i64, x: f64) -> f64 {
    let n = ell.unsigned_abs() as usize;
    let v = bessel_j_nonneg(n, x)[n];
    if ell < 0 && n % 2 == 1 {
        -v
    } else {
        v
    }
}
