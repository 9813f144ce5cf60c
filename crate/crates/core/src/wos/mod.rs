//! Walk-on-Spheres for Laplace, Poisson (`Δu = f`) and Yukawa (`Δu - λu = f`).

mod grid;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::manufactured::{Family, PdeInstance};
use crate::rng::{fold_key, hash_str, RngStream};
use crate::vec2::Vec2;

pub use crate::special::{bessel_i0, bessel_k0};
pub use grid::{solve_grid, walk_key, Trajectory};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct WosParams {
    /// Walks stop once `sdf < epsilon`.
    pub epsilon: f64,
    /// Steps after which a walk is projected to the boundary regardless.
    pub max_steps: u32,
    pub resolution: usize,
    /// Upper bound on `max budget * masked pixels` for one grid solve.
    pub compute_cap: u64,
}

impl Default for WosParams {
    fn default() -> Self {
        WosParams::train()
    }
}

impl WosParams {
    pub fn train() -> Self {
        WosParams {
            epsilon: 1e-4,
            max_steps: 128,
            resolution: crate::field::DEFAULT_RESOLUTION,
            compute_cap: 1 << 36,
        }
    }

    pub fn eval() -> Self {
        WosParams { max_steps: 256, ..WosParams::train() }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum WosError {
    #[error("walk-on-spheres does not support the {0:?} family")]
    UnsupportedFamily(Family),
    #[error("requested {requested} walks exceeds the compute cap {cap}")]
    ComputeCapExceeded { requested: u64, cap: u64 },
    #[error("budgets must be non-empty, positive and strictly ascending")]
    InvalidBudgets,
    #[error("invalid parameters: {0}")]
    InvalidParams(&'static str),
}

/// Samples the 2D ball Green's density `(4 r / R^2) ln(R / r)` via
/// `r = R sqrt(U1 U2)`. Returns the offset and the mass `R^2 / 4`.
#[inline]
pub fn greens_sample_ball(radius: f64, rng: &mut RngStream) -> (Vec2, f64) {
    let r = radius * (rng.uniform_open0() * rng.uniform_open0()).sqrt();
    (rng.unit_vector() * r, 0.25 * radius * radius)
}

/// Yukawa Green's function of a ball of radius `R` at distance `r` from the
/// centre, for `mu = sqrt(lambda)`, given `I0(mu R)` and `K0(mu R)`.
#[inline]
pub fn screened_green(mu: f64, r: f64, i0_big: f64, k0_big: f64) -> f64 {
    let mr = mu * r;
    (bessel_k0(mr) - k0_big * bessel_i0(mr) / i0_big) / (2.0 * PI)
}

/// `G_lambda(rho; R) / G_0(rho; R)` for `0 < rho < R`; 0 where the
/// Laplace kernel underflows at the shell.
#[inline]
pub fn screening_ratio(mu: f64, rho: f64, radius: f64, i0_big: f64, k0_big: f64) -> f64 {
    let g0 = (radius / rho).ln() / (2.0 * PI);
    if g0 > 0.0 {
        (screened_green(mu, rho, i0_big, k0_big) / g0).clamp(0.0, 1.0)
    } else {
        0.0
    }
}

/// Outcome of one walk.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Walk {
    pub value: f64,
    pub steps: u32,
    /// Stopped by `max_steps` rather than the shell.
    pub overflowed: bool,
}

/// One walk from `start`. The family must be WoS-supported.
pub fn wos_walk(inst: &PdeInstance, start: Vec2, params: &WosParams, rng: &mut RngStream) -> Walk {
    let domain = &inst.domain;
    let mu = inst.lambda.sqrt();
    let mut x = start;
    let mut acc = 0.0;
    let mut weight = 1.0;
    let mut steps = 0;
    let mut overflowed = false;
    loop {
        let r = domain.sdf(x);
        if r < params.epsilon {
            break;
        }
        if steps >= params.max_steps {
            overflowed = true;
            break;
        }
        match inst.family {
            Family::Poisson => {
                let (off, mass) = greens_sample_ball(r, rng);
                acc -= mass * inst.forcing(x + off);
            }
            Family::Yukawa => {
                let i0_big = bessel_i0(mu * r);
                let k0_big = bessel_k0(mu * r);
                // Source point from the Laplace ball density, reweighted by
                // G_lambda / G_0, which lies in [0, 1].
                let (off, mass) = greens_sample_ball(r, rng);
                acc -= weight * mass * screening_ratio(mu, off.norm(), r, i0_big, k0_big) * inst.forcing(x + off);
                weight /= i0_big;
            }
            _ => {}
        }
        x = x + rng.unit_vector() * r;
        steps += 1;
    }
    let b = domain.project_to_boundary(x).unwrap_or(x);
    Walk { value: acc + weight * inst.boundary_value(b), steps, overflowed }
}

/// Checks that `inst` can be walked.
pub fn check_supported(inst: &PdeInstance) -> Result<(), WosError> {
    if inst.family.wos_supported() {
        Ok(())
    } else {
        Err(WosError::UnsupportedFamily(inst.family))
    }
}

/// Mean and unbiased variance of `k` walks from `point`; walk `w` uses the
/// substream `(key, stream, w)`. The variance of a single walk is reported
/// as 0.
pub fn estimate_point(
    inst: &PdeInstance,
    point: Vec2,
    k: u32,
    params: &WosParams,
    key: u64,
    stream: u32,
) -> Result<(f64, f64), WosError> {
    check_supported(inst)?;
    if k == 0 {
        return Err(WosError::InvalidBudgets);
    }
    // Welford accumulation.
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for w in 0..k {
        let mut rng = RngStream::for_walk(key, stream, w);
        let v = wos_walk(inst, point, params, &mut rng).value;
        let d = v - mean;
        mean += d / f64::from(w + 1);
        m2 += d * (v - mean);
    }
    let var = if k > 1 { m2 / f64::from(k - 1) } else { 0.0 };
    Ok((mean, var))
}

/// Key for point estimates of a case under `seed`.
pub fn point_key(seed: u64, case_id: &str) -> u64 {
    fold_key(&[seed, hash_str(case_id), 0x706f_696e_74])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atoms::{Atom, AtomKind, Form, Solution};
    use crate::geometry::Domain;
    use crate::manufactured::HardnessMeta;

    fn disk_instance(family: Family, lambda: f64, atoms: Vec<Atom>) -> PdeInstance {
        PdeInstance {
            case_id: "w".into(),
            family,
            lambda,
            k: 0.0,
            domain: Domain::disk(1.0),
            solution: Solution::new(atoms),
            hardness: HardnessMeta::default(),
        }
    }

    fn constant(c: f64) -> Atom {
        let mut coeffs = [0.0; 10];
        coeffs[0] = c;
        Atom { kind: AtomKind::Poly, form: Form::Poly { c: coeffs } }
    }

    #[test]
    fn green_mass_is_quarter_r_squared() {
        let mut rng = RngStream::from_seed(1);
        for r in [0.1, 1.0, 2.5] {
            let (off, mass) = greens_sample_ball(r, &mut rng);
            assert!(off.norm() <= r);
            assert_eq!(mass, 0.25 * r * r);
        }
        // Independent quadrature of the radial integral of r ln(R/r).
        let n = 200_000;
        let h = 1.0 / n as f64;
        let q: f64 = (0..n)
            .map(|i| {
                let r = (i as f64 + 0.5) * h;
                r * (1.0 / r).ln()
            })
            .sum::<f64>()
            * h;
        assert!((q - 0.25).abs() < 1e-6);
    }

    #[test]
    fn screening_ratio_bounds_and_limit() {
        for mu in [0.3, 2.0, 7.0] {
            let r = 0.8;
            let (i0, k0) = (bessel_i0(mu * r), bessel_k0(mu * r));
            for rho in [1e-9, 0.01, 0.4, 0.79, 0.8 * (1.0 - 1e-15)] {
                let q = screening_ratio(mu, rho, r, i0, k0);
                assert!((0.0..=1.0).contains(&q), "{mu} {rho} {q}");
            }
        }
        let mu = 1e-4;
        let q = screening_ratio(mu, 0.3, 1.0, bessel_i0(mu), bessel_k0(mu));
        assert!((q - 1.0).abs() < 1e-6, "{q}");
    }

    #[test]
    fn screened_source_integral_matches_closed_form() {
        // Integral of G_lambda over the ball is (1 - 1/I0(mu R)) / lambda.
        let mut rng = RngStream::from_seed(11);
        for (lambda, r) in [(4.0, 1.0), (45.0, 0.5)] {
            let mu = f64::sqrt(lambda);
            let (i0, k0) = (bessel_i0(mu * r), bessel_k0(mu * r));
            let n = 200_000;
            let (mut s, mut s2) = (0.0, 0.0);
            for _ in 0..n {
                let (off, mass) = greens_sample_ball(r, &mut rng);
                let w = mass * screening_ratio(mu, off.norm(), r, i0, k0);
                s += w;
                s2 += w * w;
            }
            let mean = s / n as f64;
            let se = ((s2 / n as f64 - mean * mean) / n as f64).sqrt();
            let want = (1.0 - 1.0 / i0) / lambda;
            assert!((mean - want).abs() < 4.0 * se, "{lambda}: {mean} vs {want} (se {se})");
        }
    }

    #[test]
    fn constant_boundary_is_exact() {
        let inst = disk_instance(Family::Laplace, 0.0, vec![constant(0.75)]);
        let p = WosParams::train();
        for w in 0..200 {
            let mut rng = RngStream::for_walk(5, 0, w);
            assert_eq!(wos_walk(&inst, Vec2::new(0.2, -0.3), &p, &mut rng).value, 0.75);
        }
    }

    #[test]
    fn laplace_linear_mean_is_zero_at_center() {
        let atom = Atom { kind: AtomKind::HLinear, form: Form::Linear { a: 1.0, b: 0.0 } };
        let inst = disk_instance(Family::Laplace, 0.0, vec![atom]);
        let (mean, var) = estimate_point(&inst, Vec2::new(0.0, 0.0), 4096, &WosParams::train(), 77, 0).unwrap();
        assert!(mean.abs() <= 3.0 * (var / 4096.0).sqrt(), "{mean} {var}");
        assert!((var - 0.5).abs() < 0.05, "Var of cos on the circle is 1/2, got {var}");
    }

    #[test]
    fn yukawa_constant_solution() {
        // u = 1, f = -4 for lambda = 4.
        let inst = disk_instance(Family::Yukawa, 4.0, vec![constant(1.0)]);
        let (mean, var) = estimate_point(&inst, Vec2::new(0.0, 0.0), 10_000, &WosParams::train(), 3, 0).unwrap();
        assert!((mean - 1.0).abs() <= 3.0 * (var / 1e4).sqrt() + 1e-3, "{mean} {var}");
    }

    #[test]
    fn screening_damps_walk_variance() {
        let atom = Atom { kind: AtomKind::HLinear, form: Form::Linear { a: 1.0, b: 0.5 } };
        let var = |lambda| {
            let inst = disk_instance(Family::Yukawa, lambda, vec![atom.clone()]);
            estimate_point(&inst, Vec2::new(0.3, 0.2), 20_000, &WosParams::train(), 9, 0).unwrap().1
        };
        let (strong, weak) = (var(50.0), var(0.5));
        assert!(strong < weak, "{strong} vs {weak}");
    }

    #[test]
    fn poisson_quadratic_solution() {
        // u = x^2 + y^2, f = 4; the boundary term is 1 on the unit disk.
        let mut c = [0.0; 10];
        c[3] = 1.0;
        c[5] = 1.0;
        let inst = disk_instance(Family::Poisson, 0.0, vec![Atom { kind: AtomKind::Poly, form: Form::Poly { c } }]);
        let p = Vec2::new(0.3, 0.1);
        let (mean, var) = estimate_point(&inst, p, 10_000, &WosParams::train(), 4, 0).unwrap();
        assert!((mean - p.norm_sq()).abs() <= 3.0 * (var / 1e4).sqrt() + 1e-3, "{mean} {var}");
    }

    #[test]
    fn single_walk_variance_convention() {
        let inst = disk_instance(Family::Laplace, 0.0, vec![constant(1.0)]);
        let (_, var) = estimate_point(&inst, Vec2::new(0.0, 0.0), 1, &WosParams::train(), 1, 0).unwrap();
        assert_eq!(var, 0.0);
    }

    #[test]
    fn unsupported_families_error() {
        let inst = disk_instance(Family::Helmholtz, 0.0, vec![constant(1.0)]);
        assert_eq!(
            estimate_point(&inst, Vec2::new(0.0, 0.0), 4, &WosParams::train(), 1, 0),
            Err(WosError::UnsupportedFamily(Family::Helmholtz))
        );
    }

    #[test]
    fn walk_length_grows_as_epsilon_shrinks() {
        let inst = disk_instance(Family::Laplace, 0.0, vec![constant(1.0)]);
        let mut prev = 0.0;
        for eps in [1e-2, 1e-3, 1e-4] {
            let p = WosParams { epsilon: eps, max_steps: 100_000, ..WosParams::train() };
            let total: u32 = (0..4000)
                .map(|w| wos_walk(&inst, Vec2::new(0.3, -0.2), &p, &mut RngStream::for_walk(2, 0, w)).steps)
                .sum();
            let mean = total as f64 / 4000.0;
            assert!(mean > prev, "eps {eps}: {mean} <= {prev}");
            prev = mean;
        }
    }
}
