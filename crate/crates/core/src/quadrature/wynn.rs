use num_complex::Complex64;

/// Wynn's epsilon extrapolation of a sequence of partial sums. Returns the
/// deepest even-column entry built from the supplied sums.
pub(crate) fn wynn_epsilon(sums: &[Complex64]) -> Complex64 {
    let n = sums.len();
    if n < 3 {
        return *sums.last().unwrap_or(&Complex64::new(0.0, 0.0));
    }
    // prev = column k-1, cur = column k; column -1 is all zeros.
    let mut prev = vec![Complex64::new(0.0, 0.0); n + 1];
    let mut cur: Vec<Complex64> = sums.to_vec();
    let mut best = sums[n - 1];
    let mut k = 0;
    while cur.len() > 1 {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for i in 0..cur.len() - 1 {
            let diff = cur[i + 1] - cur[i];
            if diff.norm() <= 1e-300 {
                // converged column: the even column entry is final
                return if k % 2 == 0 { cur[i + 1] } else { best };
            }
            next.push(prev[i + 1] + diff.inv());
        }
        prev = cur;
        cur = next;
        k += 1;
        if k % 2 == 0 {
            best = *cur.last().expect("nonempty column");
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accelerates_alternating_harmonic_series() {
        let mut s = Complex64::new(0.0, 0.0);
        let sums: Vec<Complex64> = (1..=14)
            .map(|k| {
                let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                s += Complex64::new(sign / k as f64, 0.0);
                s
            })
            .collect();
        let est = wynn_epsilon(&sums);
        assert!((est.re - std::f64::consts::LN_2).abs() < 1e-10, "{est}");
    }

    #[test]
    fn geometric_series_is_exact() {
        let mut s = Complex64::new(0.0, 0.0);
        let sums: Vec<Complex64> = (0..5)
            .map(|k| {
                s += Complex64::new(0.5f64.powi(k), 0.0);
                s
            })
            .collect();
        assert!((wynn_epsilon(&sums).re - 2.0).abs() < 1e-12);
    }
}
