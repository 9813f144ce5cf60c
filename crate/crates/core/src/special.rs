//! Special functions used by the atom library and the screened walk.

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Crossover between the power series and the asymptotic expansion of I0.
const I0_SERIES_MAX: f64 = 20.0;
/// Crossover for K0; below it the series loses at most ~8 digits.
const K0_SERIES_MAX: f64 = 9.0;

/// Modified Bessel function of the first kind, order zero.
///
/// Power series below `x = 20`, Hankel asymptotic expansion above. Both
/// branches are accurate to a few ulps over their ranges. Negative arguments
/// use the evenness of I0.
pub fn bessel_i0(x: f64) -> f64 {
    let x = x.abs();
    if x <= I0_SERIES_MAX {
        i0_series(x)
    } else {
        i0_asymptotic(x)
    }
}

fn i0_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut m = 1.0;
    loop {
        term *= q / (m * m);
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
        m += 1.0;
    }
    sum
}

fn i0_asymptotic(x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k: f64 = 1.0;
    loop {
        let next = term * (2.0 * k - 1.0).powi(2) / (8.0 * k * x);
        if next.abs() >= term.abs() || next < 1e-17 * sum {
            break;
        }
        sum += next;
        term = next;
        k += 1.0;
    }
    x.exp() / (std::f64::consts::TAU * x).sqrt() * sum
}

/// Modified Bessel function of the second kind, order zero, for `x > 0`.
///
/// Returns `+inf` at zero and NaN for negative input.
pub fn bessel_k0(x: f64) -> f64 {
    if x.is_nan() || x < 0.0 {
        return f64::NAN;
    }
    if x == 0.0 {
        return f64::INFINITY;
    }
    if x <= K0_SERIES_MAX {
        k0_series(x)
    } else {
        k0_asymptotic(x)
    }
}

fn k0_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut harmonic = 0.0;
    let mut tail = 0.0;
    let mut k: f64 = 1.0;
    loop {
        term *= q / (k * k);
        harmonic += 1.0 / k;
        let add = term * harmonic;
        tail += add;
        if add < 1e-18 * tail.abs().max(1e-300) {
            break;
        }
        k += 1.0;
    }
    -((0.5 * x).ln() + EULER_GAMMA) * i0_series(x) + tail
}

fn k0_asymptotic(x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k: f64 = 1.0;
    loop {
        let next = -term * (2.0 * k - 1.0).powi(2) / (8.0 * k * x);
        if next.abs() >= term.abs() || next.abs() < 1e-17 {
            break;
        }
        sum += next;
        term = next;
        k += 1.0;
    }
    (std::f64::consts::FRAC_PI_2 / x).sqrt() * (-x).exp() * sum
}

/// Error function (pure-Rust `libm` port, ~1 ulp).
#[inline]
pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn i0_truncated_series(x: f64, terms: usize) -> f64 {
        let mut sum = 0.0;
        let mut fact = 1.0;
        for m in 0..terms {
            if m > 0 {
                fact *= m as f64;
            }
            sum += (x / 2.0).powi(2 * m as i32) / (fact * fact);
        }
        sum
    }

    /// I0(x) = (1/pi) * integral_0^pi exp(x cos t) dt; the trapezoid rule is
    /// spectrally accurate for this periodic integrand.
    fn i0_quadrature(x: f64) -> f64 {
        let n = 2000;
        let h = std::f64::consts::PI / n as f64;
        let mut s = 0.5 * (x.exp() + (-x).exp());
        for i in 1..n {
            s += (x * (i as f64 * h).cos()).exp();
        }
        s * h / std::f64::consts::PI
    }

    /// K0(x) = integral_0^inf exp(-x cosh t) dt, by composite Simpson.
    fn k0_quadrature(x: f64) -> f64 {
        let upper = ((50.0 / x).max(2.0)).acosh() + 1.0;
        let n = 200_000;
        let h = upper / n as f64;
        let f = |t: f64| (-x * t.cosh()).exp();
        let mut s = f(0.0) + f(upper);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(i as f64 * h);
        }
        s * h / 3.0
    }

    #[test]
    fn i0_reference_values() {
        assert_eq!(bessel_i0(0.0), 1.0);
        let one = i0_truncated_series(1.0, 30);
        let five = i0_truncated_series(5.0, 30);
        assert!((one - 1.266_065_88).abs() < 1e-8);
        assert!((five - 27.239_871_8).abs() < 1e-6);
        assert!((bessel_i0(1.0) - one).abs() / one < 1e-14);
        assert!((bessel_i0(5.0) - five).abs() / five < 1e-14);
    }

    #[test]
    fn i0_matches_quadrature_across_branches() {
        for &x in &[0.1, 0.5, 2.0, 3.75, 3.76, 7.0, 12.0, 19.9, 20.1, 25.0, 40.0] {
            let q = i0_quadrature(x);
            let rel = (bessel_i0(x) - q).abs() / q;
            assert!(rel < 1e-8, "x={x} rel={rel}");
        }
    }

    #[test]
    fn k0_matches_quadrature_across_branches() {
        for &x in &[0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 8.9, 9.1, 12.0, 20.0] {
            let q = k0_quadrature(x);
            let rel = (bessel_k0(x) - q).abs() / q;
            assert!(rel < 1e-6, "x={x} rel={rel}");
        }
    }

    #[test]
    fn k0_edge_cases() {
        assert_eq!(bessel_k0(0.0), f64::INFINITY);
        assert!(bessel_k0(-1.0).is_nan());
        // Continuity across the branch switch.
        let lo = bessel_k0(K0_SERIES_MAX - 1e-9);
        let hi = bessel_k0(K0_SERIES_MAX + 1e-9);
        assert!((lo - hi).abs() / lo < 1e-7);
    }

    #[test]
    fn erf_reference() {
        assert_eq!(erf(0.0), 0.0);
        assert!((erf(1.0) - 0.842_700_792_949_714_9).abs() < 1e-15);
        assert!((erf(-0.5) + 0.520_499_877_813_046_5).abs() < 1e-15);
    }
}
