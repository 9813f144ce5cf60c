//! Closed forms of the atom library.
//!
//! Every form is written once over [`Real`], so the same code yields plain
//! values (`f64`) and exact derivatives (jets). Laplacians additionally have
//! hand-derived closed forms used by the walk's hot path.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::jet::Real;
use crate::special::bessel_i0;
use crate::vec2::Vec2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Hyper {
    Sinh,
    Cosh,
    Tanh,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Wave {
    Sin,
    Cos,
    Tanh,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bump {
    pub a: f64,
    pub w: f64,
    pub center: Vec2,
}

/// Analytic shape of one atom. Coordinates are `(x, y)` over the plane.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum Form {
    /// `c0 + c1 x + c2 y + c3 x^2 + c4 xy + c5 y^2 + c6 x^3 + c7 x^2 y + c8 x y^2 + c9 y^3`
    Poly { c: [f64; 10] },
    /// `a sin(k pi x)`
    SinX { a: f64, k: f64 },
    /// `a exp(b x)`
    ExpX { a: f64, b: f64 },
    /// `a log(x^2 + shift)`
    LogX { a: f64, shift: f64 },
    HyperX { a: f64, func: Hyper },
    ErfX { a: f64 },
    /// `a sqrt(x^2 + eps)`
    SoftAbsX { a: f64, eps: f64 },
    /// `a Re(z^n)` or `a Im(z^n)`
    Polar { a: f64, n: u32, sine: bool },
    /// `a cos(k (cos(dir) x + sin(dir) y))`
    PlaneWave { a: f64, k: f64, dir: f64 },
    /// `a I0(mu |x|)`
    RadialI0 { a: f64, mu: f64 },
    /// `a log|x - center|`
    LogRadius { a: f64, center: Vec2 },
    Gaussian(Bump),
    /// `a / (1 + b x^2 + c y^2)`
    Rational { a: f64, b: f64, c: f64 },
    /// `a f1(k1 x) f2(k2 y)`
    Product { a: f64, f1: Wave, k1: f64, f2: Wave, k2: f64 },
    GaussianSum { terms: Vec<Bump> },
    /// `a sin(k1 pi x) cos(k2 pi y)`
    SinCos { a: f64, k1: f64, k2: f64 },
    /// `a logaddexp(b x, c y)`
    LogSumExp { a: f64, b: f64, c: f64 },
    /// `a sech^2(b (x - x0)) sech^2(c (y - y0))`
    SechBump { a: f64, b: f64, c: f64, center: Vec2 },
    /// `a tanh(k (n . x - offset))`, `n = (cos dir, sin dir)`
    TanhRamp { a: f64, k: f64, dir: f64, offset: f64 },
    /// `a exp(k x) cos(k y)` or with `sin`
    ExpTrig { a: f64, k: f64, sine: bool },
    /// `a trig(k s) hyp(k t)` with `(s, t) = (x, y)`, or `(y, x)` when swapped.
    TrigHyp { a: f64, k: f64, sine: bool, sinh: bool, swap: bool },
    Linear { a: f64, b: f64 },
    /// `a x y`
    Bilinear { a: f64 },
    /// `a arg(x - center)` with the branch cut pointing away from the origin.
    Angle { a: f64, center: Vec2 },
    /// `a Re(1 / (z - z0))`
    Inversion { a: f64, center: Vec2 },
    /// `a Re(1 / (z - z0)^2)`
    Dipole { a: f64, center: Vec2 },
    /// `a (u^2 - v^2)` or `2 a u v` in coordinates rotated by `angle`.
    Quadratic { a: f64, angle: f64, mixed: bool },
}

fn poly_eval<T: Real>(c: &[f64; 10], x: T, y: T) -> T {
    let tail = x * c[1] + y * c[2] + x * x * c[3] + x * y * c[4] + y * y * c[5];
    let cubic = x * x * x * c[6] + x * x * y * c[7] + x * y * y * c[8] + y * y * y * c[9];
    tail + cubic + c[0]
}

/// `(Re, Im)` of `(x + iy)^n`.
fn complex_pow<T: Real>(x: T, y: T, n: u32) -> (T, T) {
    let mut re = T::cst(1.0);
    let mut im = T::cst(0.0);
    for _ in 0..n {
        let r = re * x - im * y;
        im = re * y + im * x;
        re = r;
    }
    (re, im)
}

fn wave<T: Real>(f: Wave, t: T) -> T {
    match f {
        Wave::Sin => t.sin(),
        Wave::Cos => t.cos(),
        Wave::Tanh => t.tanh(),
    }
}

/// Second derivative of `wave(f, t)` in `t`.
fn wave_dd(f: Wave, t: f64) -> f64 {
    match f {
        Wave::Sin => -t.sin(),
        Wave::Cos => -t.cos(),
        Wave::Tanh => {
            let th = t.tanh();
            -2.0 * th * (1.0 - th * th)
        }
    }
}

fn sech2<T: Real>(t: T) -> T {
    t.cosh().powi(-2)
}

/// Rotation putting the branch cut of `atan2` on the ray from `center` away
/// from the origin.
pub(crate) fn angle_frame(center: Vec2) -> (f64, f64) {
    let phi = PI - center.y.atan2(center.x);
    (phi.cos(), phi.sin())
}

impl Form {
    /// Value of the form, generic over plain floats and jets.
    pub fn eval<T: Real>(&self, x: T, y: T) -> T {
        match self {
            Form::Poly { c } => poly_eval(c, x, y),
            Form::SinX { a, k } => (x * (k * PI)).sin() * *a,
            Form::ExpX { a, b } => (x * *b).exp() * *a,
            Form::LogX { a, shift } => (x * x + *shift).ln() * *a,
            Form::HyperX { a, func } => {
                let v = match func {
                    Hyper::Sinh => x.sinh(),
                    Hyper::Cosh => x.cosh(),
                    Hyper::Tanh => x.tanh(),
                };
                v * *a
            }
            Form::ErfX { a } => x.erf() * *a,
            Form::SoftAbsX { a, eps } => (x * x + *eps).sqrt() * *a,
            Form::Polar { a, n, sine } => {
                let (re, im) = complex_pow(x, y, *n);
                (if *sine { im } else { re }) * *a
            }
            Form::PlaneWave { a, k, dir } => {
                ((x * dir.cos() + y * dir.sin()) * *k).cos() * *a
            }
            Form::RadialI0 { a, mu } => ((x * x + y * y) * (mu * mu)).i0_sqrt() * *a,
            Form::LogRadius { a, center } => {
                let dx = x - center.x;
                let dy = y - center.y;
                (dx * dx + dy * dy).ln() * (0.5 * a)
            }
            Form::Gaussian(b) => gaussian(b, x, y),
            Form::Rational { a, b, c } => (x * x * *b + y * y * *c + 1.0).recip() * *a,
            Form::Product { a, f1, k1, f2, k2 } => {
                wave(*f1, x * *k1) * wave(*f2, y * *k2) * *a
            }
            Form::GaussianSum { terms } => terms
                .iter()
                .fold(T::cst(0.0), |acc, b| acc + gaussian(b, x, y)),
            Form::SinCos { a, k1, k2 } => {
                (x * (k1 * PI)).sin() * (y * (k2 * PI)).cos() * *a
            }
            Form::LogSumExp { a, b, c } => {
                let p = x * *b;
                let q = y * *c;
                let m = p.value().max(q.value());
                ((p - m).exp() + (q - m).exp()).ln() * *a + a * m
            }
            Form::SechBump { a, b, c, center } => {
                sech2((x - center.x) * *b) * sech2((y - center.y) * *c) * *a
            }
            Form::TanhRamp { a, k, dir, offset } => {
                ((x * dir.cos() + y * dir.sin() - *offset) * *k).tanh() * *a
            }
            Form::ExpTrig { a, k, sine } => {
                let t = y * *k;
                (x * *k).exp() * (if *sine { t.sin() } else { t.cos() }) * *a
            }
            Form::TrigHyp { a, k, sine, sinh, swap } => {
                let (s, t) = if *swap { (y, x) } else { (x, y) };
                let s = s * *k;
                let t = t * *k;
                let trig = if *sine { s.sin() } else { s.cos() };
                let hyp = if *sinh { t.sinh() } else { t.cosh() };
                trig * hyp * *a
            }
            Form::Linear { a, b } => x * *a + y * *b,
            Form::Bilinear { a } => x * y * *a,
            Form::Angle { a, center } => {
                let (c, s) = angle_frame(*center);
                let dx = x - center.x;
                let dy = y - center.y;
                let vx = dx * c - dy * s;
                let vy = dx * s + dy * c;
                vy.atan2(vx) * *a
            }
            Form::Inversion { a, center } => {
                let dx = x - center.x;
                let dy = y - center.y;
                dx * (dx * dx + dy * dy).recip() * *a
            }
            Form::Dipole { a, center } => {
                let dx = x - center.x;
                let dy = y - center.y;
                let r2 = dx * dx + dy * dy;
                (dx * dx - dy * dy) * (r2 * r2).recip() * *a
            }
            Form::Quadratic { a, angle, mixed } => {
                let (s, c) = angle.sin_cos();
                let u = x * c + y * s;
                let v = y * c - x * s;
                if *mixed {
                    u * v * (2.0 * a)
                } else {
                    (u * u - v * v) * *a
                }
            }
        }
    }

    /// Value and Laplacian from hand-derived closed forms.
    pub fn value_laplacian(&self, p: Vec2) -> (f64, f64) {
        let (x, y) = (p.x, p.y);
        match self {
            Form::Poly { c } => {
                let lap = 2.0 * c[3] + 2.0 * c[5] + (6.0 * c[6] + 2.0 * c[8]) * x + (2.0 * c[7] + 6.0 * c[9]) * y;
                (poly_eval(c, x, y), lap)
            }
            Form::SinX { a, k } => {
                let w = k * PI;
                let u = a * (w * x).sin();
                (u, -w * w * u)
            }
            Form::ExpX { a, b } => {
                let u = a * (b * x).exp();
                (u, b * b * u)
            }
            Form::LogX { a, shift } => {
                let d = x * x + shift;
                (a * d.ln(), a * 2.0 * (shift - x * x) / (d * d))
            }
            Form::HyperX { a, func } => match func {
                Hyper::Sinh => {
                    let u = a * x.sinh();
                    (u, u)
                }
                Hyper::Cosh => {
                    let u = a * x.cosh();
                    (u, u)
                }
                Hyper::Tanh => {
                    let t = x.tanh();
                    (a * t, -2.0 * a * t * (1.0 - t * t))
                }
            },
            Form::ErfX { a } => (
                a * crate::special::erf(x),
                -a * 4.0 * x / PI.sqrt() * (-x * x).exp(),
            ),
            Form::SoftAbsX { a, eps } => {
                let d = x * x + eps;
                let s = d.sqrt();
                (a * s, a * eps / (d * s))
            }
            Form::PlaneWave { a, k, dir } => {
                let u = a * (k * (x * dir.cos() + y * dir.sin())).cos();
                (u, -k * k * u)
            }
            Form::RadialI0 { a, mu } => {
                let u = a * bessel_i0(mu * p.norm());
                (u, mu * mu * u)
            }
            Form::Gaussian(b) => gaussian_lap(b, p),
            Form::Rational { a, b, c } => {
                let d = 1.0 + b * x * x + c * y * y;
                let d2 = d * d;
                let lap = a * (8.0 * (b * b * x * x + c * c * y * y) / (d2 * d) - 2.0 * (b + c) / d2);
                (a / d, lap)
            }
            Form::Product { a, f1, k1, f2, k2 } => {
                let (s, t) = (k1 * x, k2 * y);
                let g1 = wave(*f1, s);
                let g2 = wave(*f2, t);
                let lap = a * (k1 * k1 * wave_dd(*f1, s) * g2 + k2 * k2 * g1 * wave_dd(*f2, t));
                (a * g1 * g2, lap)
            }
            Form::GaussianSum { terms } => terms.iter().fold((0.0, 0.0), |(u, l), b| {
                let (bu, bl) = gaussian_lap(b, p);
                (u + bu, l + bl)
            }),
            Form::SinCos { a, k1, k2 } => {
                let u = a * (k1 * PI * x).sin() * (k2 * PI * y).cos();
                (u, -PI * PI * (k1 * k1 + k2 * k2) * u)
            }
            Form::LogSumExp { a, b, c } => {
                let (s, t) = (b * x, c * y);
                let m = s.max(t);
                let (es, et) = ((s - m).exp(), (t - m).exp());
                let q = es / (es + et);
                (a * (m + (es + et).ln()), a * (b * b + c * c) * q * (1.0 - q))
            }
            Form::SechBump { a, b, c, center } => {
                let sb = sech2(b * (x - center.x));
                let sc = sech2(c * (y - center.y));
                let dd = |s: f64| s * (4.0 - 6.0 * s);
                (a * sb * sc, a * (b * b * dd(sb) * sc + c * c * sb * dd(sc)))
            }
            Form::TanhRamp { a, k, dir, offset } => {
                let t = (k * (x * dir.cos() + y * dir.sin() - offset)).tanh();
                (a * t, -2.0 * a * k * k * t * (1.0 - t * t))
            }
            Form::Polar { .. }
            | Form::LogRadius { .. }
            | Form::ExpTrig { .. }
            | Form::TrigHyp { .. }
            | Form::Linear { .. }
            | Form::Bilinear { .. }
            | Form::Angle { .. }
            | Form::Inversion { .. }
            | Form::Dipole { .. }
            | Form::Quadratic { .. } => (self.eval(x, y), 0.0),
        }
    }

    /// Points or rays where the form is singular, for placement checks.
    pub fn singularity(&self) -> Option<Singularity> {
        match self {
            Form::LogRadius { center, .. }
            | Form::Inversion { center, .. }
            | Form::Dipole { center, .. } => Some(Singularity::Point(*center)),
            Form::Angle { center, .. } => Some(Singularity::Ray(*center)),
            _ => None,
        }
    }
}

/// Where a form stops being smooth.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Singularity {
    Point(Vec2),
    /// The branch cut `{c + t c/|c| : t >= 0}` starting at `c`.
    Ray(Vec2),
}

fn gaussian<T: Real>(b: &Bump, x: T, y: T) -> T {
    let dx = x - b.center.x;
    let dy = y - b.center.y;
    ((dx * dx + dy * dy) * -b.w).exp() * b.a
}

fn gaussian_lap(b: &Bump, p: Vec2) -> (f64, f64) {
    let r2 = (p - b.center).norm_sq();
    let u = b.a * (-b.w * r2).exp();
    (u, u * (4.0 * b.w * b.w * r2 - 4.0 * b.w))
}
