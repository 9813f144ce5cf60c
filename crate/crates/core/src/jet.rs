//! Bivariate truncated Taylor polynomials ("jets") for exact derivatives.
//!
//! A `Jet<N>` carries the Taylor coefficients `c[i,j] = d^i_x d^j_y u / (i! j!)`
//! of a function of `(x, y)` up to total degree `N <= 4`. Arithmetic and the
//! elementary functions below propagate them exactly (up to rounding), so
//! writing a formula once over [`Real`] yields its value as `f64` and its
//! derivatives as a jet.

use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::special::{bessel_i0, erf};

const MAX_ORDER: usize = 4;
const LEN: usize = 15;
const FACT: [f64; 5] = [1.0, 1.0, 2.0, 6.0, 24.0];

/// Storage slot of the coefficient of `x^i y^j` with `i + j = degree`.
#[inline]
const fn slot(degree: usize, j: usize) -> usize {
    degree * (degree + 1) / 2 + j
}

/// Scalar interface shared by `f64` and [`Jet`].
pub trait Real:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Add<f64, Output = Self>
    + Sub<f64, Output = Self>
    + Mul<f64, Output = Self>
{
    fn cst(v: f64) -> Self;
    /// Constant (zeroth-order) part.
    fn value(&self) -> f64;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn sqrt(self) -> Self;
    fn tanh(self) -> Self;
    fn sinh(self) -> Self;
    fn cosh(self) -> Self;
    fn erf(self) -> Self;
    fn powi(self, n: i32) -> Self;
    fn recip(self) -> Self;
    /// `I0(sqrt(s))`, smooth in `s >= 0` including at the origin.
    fn i0_sqrt(self) -> Self;
    /// Four-quadrant `atan2(self, x)`.
    fn atan2(self, x: Self) -> Self;
}

impl Real for f64 {
    #[inline]
    fn cst(v: f64) -> Self {
        v
    }
    #[inline]
    fn value(&self) -> f64 {
        *self
    }
    #[inline]
    fn sin(self) -> Self {
        f64::sin(self)
    }
    #[inline]
    fn cos(self) -> Self {
        f64::cos(self)
    }
    #[inline]
    fn exp(self) -> Self {
        f64::exp(self)
    }
    #[inline]
    fn ln(self) -> Self {
        f64::ln(self)
    }
    #[inline]
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    #[inline]
    fn tanh(self) -> Self {
        f64::tanh(self)
    }
    #[inline]
    fn sinh(self) -> Self {
        f64::sinh(self)
    }
    #[inline]
    fn cosh(self) -> Self {
        f64::cosh(self)
    }
    #[inline]
    fn erf(self) -> Self {
        erf(self)
    }
    #[inline]
    fn powi(self, n: i32) -> Self {
        f64::powi(self, n)
    }
    #[inline]
    fn recip(self) -> Self {
        1.0 / self
    }
    #[inline]
    fn i0_sqrt(self) -> Self {
        bessel_i0(self.max(0.0).sqrt())
    }
    #[inline]
    fn atan2(self, x: Self) -> Self {
        f64::atan2(self, x)
    }
}

/// Truncated bivariate Taylor polynomial of total degree `N`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet<const N: usize> {
    c: [f64; LEN],
}

/// Derivatives up to the Laplacian.
pub type Jet2 = Jet<2>;
/// Derivatives up to the bi-Laplacian.
pub type Jet4 = Jet<4>;

impl<const N: usize> Jet<N> {
    const ORDER_OK: () = assert!(N <= MAX_ORDER);

    #[inline]
    fn active() -> usize {
        #[allow(clippy::let_unit_value)]
        let _ = Self::ORDER_OK;
        slot(N + 1, 0)
    }

    pub fn constant(v: f64) -> Self {
        let mut c = [0.0; LEN];
        c[0] = v;
        let _ = Self::active();
        Self { c }
    }

    /// The coordinate functions `x` and `y` expanded about `(x0, y0)`.
    pub fn variables(x0: f64, y0: f64) -> (Self, Self) {
        let mut x = Self::constant(x0);
        let mut y = Self::constant(y0);
        if N >= 1 {
            x.c[slot(1, 0)] = 1.0;
            y.c[slot(1, 1)] = 1.0;
        }
        (x, y)
    }

    /// Coefficient of `x^i y^j`.
    pub fn coeff(&self, i: usize, j: usize) -> f64 {
        if i + j > N {
            0.0
        } else {
            self.c[slot(i + j, j)]
        }
    }

    /// Mixed partial derivative `d^i_x d^j_y`.
    pub fn partial(&self, i: usize, j: usize) -> f64 {
        self.coeff(i, j) * FACT[i] * FACT[j]
    }

    pub fn gradient(&self) -> [f64; 2] {
        [self.partial(1, 0), self.partial(0, 1)]
    }

    pub fn laplacian(&self) -> f64 {
        self.partial(2, 0) + self.partial(0, 2)
    }

    pub fn bilaplacian(&self) -> f64 {
        self.partial(4, 0) + 2.0 * self.partial(2, 2) + self.partial(0, 4)
    }

    /// Non-constant part.
    #[inline]
    fn nilpotent(mut self) -> Self {
        self.c[0] = 0.0;
        self
    }

    /// `f(self)` given `derivs[k] = f^(k)(self.value())`.
    fn compose(self, derivs: [f64; MAX_ORDER + 1]) -> Self {
        let h = self.nilpotent();
        let mut r = Self::constant(derivs[N] / FACT[N]);
        for k in (0..N).rev() {
            r = r * h;
            r.c[0] += derivs[k] / FACT[k];
        }
        r
    }
}

impl<const N: usize> Add for Jet<N> {
    type Output = Self;
    #[inline]
    fn add(mut self, o: Self) -> Self {
        for k in 0..Self::active() {
            self.c[k] += o.c[k];
        }
        self
    }
}

impl<const N: usize> Sub for Jet<N> {
    type Output = Self;
    #[inline]
    fn sub(mut self, o: Self) -> Self {
        for k in 0..Self::active() {
            self.c[k] -= o.c[k];
        }
        self
    }
}

impl<const N: usize> Neg for Jet<N> {
    type Output = Self;
    #[inline]
    fn neg(mut self) -> Self {
        for k in 0..Self::active() {
            self.c[k] = -self.c[k];
        }
        self
    }
}

impl<const N: usize> Mul for Jet<N> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let mut out = [0.0; LEN];
        for d1 in 0..=N {
            for d2 in 0..=(N - d1) {
                for j1 in 0..=d1 {
                    let a = self.c[slot(d1, j1)];
                    if a == 0.0 {
                        continue;
                    }
                    for j2 in 0..=d2 {
                        out[slot(d1 + d2, j1 + j2)] += a * o.c[slot(d2, j2)];
                    }
                }
            }
        }
        Self { c: out }
    }
}

impl<const N: usize> Div for Jet<N> {
    type Output = Self;
    #[inline]
    fn div(self, o: Self) -> Self {
        self * o.recip()
    }
}

impl<const N: usize> Add<f64> for Jet<N> {
    type Output = Self;
    #[inline]
    fn add(mut self, v: f64) -> Self {
        self.c[0] += v;
        self
    }
}

impl<const N: usize> Sub<f64> for Jet<N> {
    type Output = Self;
    #[inline]
    fn sub(mut self, v: f64) -> Self {
        self.c[0] -= v;
        self
    }
}

impl<const N: usize> Mul<f64> for Jet<N> {
    type Output = Self;
    #[inline]
    fn mul(mut self, v: f64) -> Self {
        for k in 0..Self::active() {
            self.c[k] *= v;
        }
        self
    }
}

/// Derivatives of `x^p` at `a` for real `p`.
fn power_derivs(a: f64, p: f64) -> [f64; 5] {
    let mut d = [0.0; 5];
    let mut coef = 1.0;
    for (k, slot) in d.iter_mut().enumerate() {
        *slot = coef * a.powf(p - k as f64);
        coef *= p - k as f64;
    }
    d
}

fn powi_derivs(a: f64, n: i32) -> [f64; 5] {
    let mut d = [0.0; 5];
    let mut coef = 1.0;
    for (k, slot) in d.iter_mut().enumerate() {
        *slot = if coef == 0.0 { 0.0 } else { coef * a.powi(n - k as i32) };
        coef *= f64::from(n) - k as f64;
    }
    d
}

/// `d^k/ds^k I0(sqrt(s))` for `k = 0..=4`, from the series in `s`.
fn i0_sqrt_derivs(s: f64) -> [f64; 5] {
    let s = s.max(0.0);
    let mut d = [0.0; 5];
    d[0] = bessel_i0(s.sqrt());
    for (k, slot) in d.iter_mut().enumerate().skip(1) {
        // sum_{m>=k} s^(m-k) / (4^m m! (m-k)!)
        let mut m = k as f64;
        let mut term = 1.0 / (4f64.powi(k as i32) * FACT[k]);
        let mut sum = term;
        loop {
            let j = m - k as f64 + 1.0;
            m += 1.0;
            term *= s / (4.0 * m * j);
            sum += term;
            if term < 1e-18 * sum {
                break;
            }
        }
        *slot = sum;
    }
    d
}

impl<const N: usize> Real for Jet<N> {
    #[inline]
    fn cst(v: f64) -> Self {
        Self::constant(v)
    }
    #[inline]
    fn value(&self) -> f64 {
        self.c[0]
    }
    fn sin(self) -> Self {
        let (s, c) = self.c[0].sin_cos();
        self.compose([s, c, -s, -c, s])
    }
    fn cos(self) -> Self {
        let (s, c) = self.c[0].sin_cos();
        self.compose([c, -s, -c, s, c])
    }
    fn exp(self) -> Self {
        let e = self.c[0].exp();
        self.compose([e; 5])
    }
    fn ln(self) -> Self {
        let a = self.c[0];
        self.compose([a.ln(), 1.0 / a, -1.0 / (a * a), 2.0 / a.powi(3), -6.0 / a.powi(4)])
    }
    fn sqrt(self) -> Self {
        self.compose(power_derivs(self.c[0], 0.5))
    }
    fn tanh(self) -> Self {
        let t = self.c[0].tanh();
        let s = 1.0 - t * t;
        self.compose([
            t,
            s,
            -2.0 * t * s,
            -2.0 * s * s + 4.0 * t * t * s,
            16.0 * t * s * s - 8.0 * t.powi(3) * s,
        ])
    }
    fn sinh(self) -> Self {
        let (sh, ch) = (self.c[0].sinh(), self.c[0].cosh());
        self.compose([sh, ch, sh, ch, sh])
    }
    fn cosh(self) -> Self {
        let (sh, ch) = (self.c[0].sinh(), self.c[0].cosh());
        self.compose([ch, sh, ch, sh, ch])
    }
    fn erf(self) -> Self {
        let a = self.c[0];
        let g = std::f64::consts::FRAC_2_SQRT_PI * (-a * a).exp();
        self.compose([
            erf(a),
            g,
            -2.0 * a * g,
            (4.0 * a * a - 2.0) * g,
            (-8.0 * a.powi(3) + 12.0 * a) * g,
        ])
    }
    fn powi(self, n: i32) -> Self {
        self.compose(powi_derivs(self.c[0], n))
    }
    fn recip(self) -> Self {
        self.compose(powi_derivs(self.c[0], -1))
    }
    fn i0_sqrt(self) -> Self {
        self.compose(i0_sqrt_derivs(self.c[0]))
    }
    fn atan2(self, x: Self) -> Self {
        // theta = theta0 + atan(t), t = tan(theta - theta0) has no constant term.
        let (y0, x0) = (self.c[0], x.c[0]);
        let theta0 = y0.atan2(x0);
        let t = (x * y0 * -1.0 + self * x0) / (x * x0 + self * y0);
        t.compose([0.0, 1.0, 0.0, -2.0, 0.0]) + theta0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn polynomial_coefficients_are_exact() {
        let (x, y) = Jet4::variables(0.3, -0.7);
        let u = x * x * x * y + y * y * 2.0;
        // u_x = 3x^2 y, u_xx = 6xy, u_xxy = 6x, u_xxxy = 6
        assert!(close(u.value(), 0.027 * -0.7 + 0.98, 1e-15));
        assert!(close(u.partial(1, 0), 3.0 * 0.09 * -0.7, 1e-15));
        assert!(close(u.partial(2, 0), 6.0 * 0.3 * -0.7, 1e-15));
        assert!(close(u.partial(3, 1), 6.0, 1e-15));
        assert!(close(u.partial(0, 2), 4.0, 1e-15));
        assert_eq!(u.partial(4, 0), 0.0);
    }

    #[test]
    fn plane_wave_bilaplacian() {
        let k = 3.3;
        let (x, y) = Jet4::variables(0.2, 0.45);
        let n = (0.6f64, 0.8f64);
        let u = ((x * n.0 + y * n.1) * k).cos();
        assert!(close(u.laplacian(), -k * k * u.value(), 1e-12));
        assert!(close(u.bilaplacian(), k.powi(4) * u.value(), 1e-11));
    }

    #[test]
    fn elementary_functions_match_closed_forms() {
        let (x, _) = Jet4::variables(0.37, 0.0);
        let checks: Vec<(Jet4, [f64; 3])> = vec![
            (x.sin(), [0.37f64.sin(), 0.37f64.cos(), -0.37f64.sin()]),
            (x.exp(), [0.37f64.exp(); 3]),
            (x.ln(), [0.37f64.ln(), 1.0 / 0.37, -1.0 / (0.37 * 0.37)]),
            (
                x.sqrt(),
                [0.37f64.sqrt(), 0.5 / 0.37f64.sqrt(), -0.25 * 0.37f64.powf(-1.5)],
            ),
        ];
        for (jet, want) in checks {
            for (k, w) in want.iter().enumerate() {
                assert!(close(jet.partial(k, 0), *w, 1e-13), "{k}: {jet:?}");
            }
        }
        let t = x.tanh();
        let h = 1e-3;
        let fd4 = (0.37f64 + 2.0 * h).tanh() - 4.0 * (0.37f64 + h).tanh() + 6.0 * 0.37f64.tanh()
            - 4.0 * (0.37f64 - h).tanh()
            + (0.37f64 - 2.0 * h).tanh();
        assert!(close(t.partial(4, 0), fd4 / h.powi(4), 1e-4));
        let e = x.erf();
        let fd3 = (erf(0.37 + 2.0 * h) - 2.0 * erf(0.37 + h) + 2.0 * erf(0.37 - h)
            - erf(0.37 - 2.0 * h))
            / (2.0 * h.powi(3));
        assert!(close(e.partial(3, 0), fd3, 1e-5));
    }

    #[test]
    fn i0_radial_is_screened_harmonic() {
        let mu = 2.1;
        for &(px, py) in &[(0.0, 0.0), (0.4, -0.3), (1.1, 0.9)] {
            let (x, y) = Jet4::variables(px, py);
            let u = ((x * x + y * y) * (mu * mu)).i0_sqrt();
            assert!(close(u.laplacian(), mu * mu * u.value(), 1e-12));
            assert!(close(u.bilaplacian(), mu.powi(4) * u.value(), 1e-11));
        }
    }

    #[test]
    fn atan2_is_harmonic_and_consistent() {
        let (x, y) = Jet4::variables(-0.4, 0.9);
        let th = y.atan2(x);
        assert!(close(th.value(), 0.9f64.atan2(-0.4), 1e-15));
        let r2 = 0.16 + 0.81;
        assert!(close(th.partial(1, 0), -0.9 / r2, 1e-14));
        assert!(close(th.partial(0, 1), -0.4 / r2, 1e-14));
        assert!(th.laplacian().abs() < 1e-12);
        assert!(th.bilaplacian().abs() < 1e-9);
    }

    #[test]
    fn division_and_powers() {
        let (x, y) = Jet2::variables(0.5, 0.25);
        let u = (x * x + y * y + 1.0).recip();
        let v = (x * x + y * y + 1.0).powi(-1);
        for (i, j) in [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)] {
            assert!(close(u.partial(i, j), v.partial(i, j), 1e-14));
        }
        let w = x / y;
        assert!(close(w.partial(0, 1), -0.5 / 0.0625, 1e-14));
        // Truncation: order-2 jets carry nothing above degree 2.
        assert_eq!((x * x * x).coeff(3, 0), 0.0);
    }
}
