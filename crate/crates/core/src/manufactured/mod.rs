//! Manufactured PDE instances: family, domain, analytic solution, forcing.

mod filters;
mod generate;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::atoms::{Pool, Solution};
use crate::field::{pixel_center, Field};
use crate::geometry::Domain;
use crate::vec2::Vec2;

pub use filters::{quality_filter, FilterFailure, FilterStats};
pub use generate::{sample_instance, Generated, GenerationExhausted, case_key, case_id};

/// Elliptic problem families. `Δu = f` sign convention throughout.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Laplace,
    Poisson,
    Yukawa,
    Biharmonic,
    Helmholtz,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::Laplace,
        Family::Poisson,
        Family::Yukawa,
        Family::Biharmonic,
        Family::Helmholtz,
    ];
    pub const TRAIN: [Family; 3] = [Family::Laplace, Family::Poisson, Family::Yukawa];

    pub fn name(self) -> &'static str {
        match self {
            Family::Laplace => "laplace",
            Family::Poisson => "poisson",
            Family::Yukawa => "yukawa",
            Family::Biharmonic => "biharmonic",
            Family::Helmholtz => "helmholtz",
        }
    }

    pub fn parse(s: &str) -> Option<Family> {
        Family::ALL.into_iter().find(|f| f.name() == s)
    }

    pub fn is_forced(self) -> bool {
        self != Family::Laplace
    }

    pub fn pool(self) -> Pool {
        if self == Family::Laplace {
            Pool::Harmonic
        } else {
            Pool::General
        }
    }

    /// Families the walk estimator handles.
    pub fn wos_supported(self) -> bool {
        matches!(self, Family::Laplace | Family::Poisson | Family::Yukawa)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct HardnessMeta {
    pub std_u: f64,
    pub std_f: f64,
}

/// A fully specified Dirichlet problem with known solution.
#[derive(Clone, Debug, PartialEq)]
pub struct PdeInstance {
    pub case_id: String,
    pub family: Family,
    /// Yukawa screening, 0 otherwise.
    pub lambda: f64,
    /// Helmholtz wavenumber, 0 otherwise.
    pub k: f64,
    pub domain: Domain,
    pub solution: Solution,
    pub hardness: HardnessMeta,
}

#[derive(Debug, Error, PartialEq)]
#[error("non-finite ground truth at pixel ({i}, {j})")]
pub struct NonFiniteGroundTruth {
    pub i: usize,
    pub j: usize,
}

impl PdeInstance {
    /// Forcing from the solution: `0`, `Δu`, `Δu - λu`, `Δu + k²u`, or `Δ²u`.
    pub fn forcing(&self, p: Vec2) -> f64 {
        self.value_and_forcing(p).1
    }

    /// `(u, f)` at `p`.
    pub fn value_and_forcing(&self, p: Vec2) -> (f64, f64) {
        match self.family {
            Family::Laplace => (self.solution.value(p), 0.0),
            Family::Biharmonic => {
                let j = self.solution.jet4(p);
                (j.coeff(0, 0), j.bilaplacian())
            }
            _ => {
                let (u, lap) = self.solution.value_laplacian(p);
                (u, self.forcing_from(u, lap))
            }
        }
    }

    /// Forcing from a precomputed `(u, Δu)`; not valid for biharmonic.
    #[inline]
    pub fn forcing_from(&self, u: f64, lap: f64) -> f64 {
        match self.family {
            Family::Laplace => 0.0,
            Family::Poisson => lap,
            Family::Yukawa => lap - self.lambda * u,
            Family::Helmholtz => lap + self.k * self.k * u,
            Family::Biharmonic => f64::NAN,
        }
    }

    /// Dirichlet data: the solution itself.
    #[inline]
    pub fn boundary_value(&self, p: Vec2) -> f64 {
        self.solution.value(p)
    }

    pub fn mask_grid(&self, res: usize) -> Field {
        rows(res, |p| if self.domain.sdf(p) > 0.0 { 1.0 } else { 0.0 })
    }

    /// `(clean, mask)` at pixel centres; `clean` is 0 outside the domain.
    pub fn ground_truth_grid(&self, res: usize) -> Result<(Field, Field), NonFiniteGroundTruth> {
        let mask = self.mask_grid(res);
        let clean = rows(res, |p| {
            if self.domain.sdf(p) > 0.0 {
                self.solution.value(p) as f32
            } else {
                0.0
            }
        });
        if let Some(k) = (0..clean.len()).find(|&k| mask.inside(k) && !clean.data()[k].is_finite()) {
            return Err(NonFiniteGroundTruth { i: k / res, j: k % res });
        }
        Ok((clean, mask))
    }

    /// Forcing at pixel centres, 0 outside the domain.
    pub fn forcing_grid(&self, res: usize) -> Field {
        rows(res, |p| {
            if self.domain.sdf(p) > 0.0 {
                self.forcing(p) as f32
            } else {
                0.0
            }
        })
    }
}

/// Evaluates `f` at every pixel centre, parallel over rows.
fn rows(res: usize, f: impl Fn(Vec2) -> f32 + Sync) -> Field {
    let mut data = vec![0.0f32; res * res];
    data.par_chunks_mut(res).enumerate().for_each(|(i, row)| {
        for (j, v) in row.iter_mut().enumerate() {
            *v = f(pixel_center(res, i, j));
        }
    });
    Field::from_vec(res, data)
}

/// Generator settings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GenConfig {
    /// Families with relative weights.
    pub families: Vec<(Family, f64)>,
    pub hard_extra: u32,
    pub max_attempts: u32,
    /// Interior samples for the amplitude and thickness filters.
    pub interior_samples: usize,
    /// Grid side used by the finite-ground-truth filter.
    pub resolution: usize,
    pub std_u_min: f64,
    pub std_u_max: f64,
    pub std_f_min: f64,
    pub std_f_max: f64,
    pub boundary_max: f64,
    pub min_interior_hits: usize,
    pub min_median_sdf: f64,
    pub lambda_range: (f64, f64),
    pub k_range: (f64, f64),
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig::train()
    }
}

impl GenConfig {
    /// Laplace, Poisson and Yukawa at 1/3 each.
    pub fn train() -> Self {
        GenConfig {
            families: Family::TRAIN.iter().map(|&f| (f, 1.0)).collect(),
            hard_extra: crate::atoms::DEFAULT_HARD_EXTRA,
            max_attempts: 40,
            interior_samples: 512,
            resolution: crate::field::DEFAULT_RESOLUTION,
            std_u_min: 1e-3,
            std_u_max: 200.0,
            std_f_min: 1e-4,
            std_f_max: 500.0,
            boundary_max: 500.0,
            min_interior_hits: 10,
            min_median_sdf: 0.03,
            lambda_range: (0.5, 50.0),
            k_range: (0.5, 10.0),
        }
    }

    /// All five families, uniformly.
    pub fn test() -> Self {
        GenConfig {
            families: Family::ALL.iter().map(|&f| (f, 1.0)).collect(),
            ..GenConfig::train()
        }
    }

    pub fn only(family: Family) -> Self {
        GenConfig {
            families: vec![(family, 1.0)],
            ..GenConfig::train()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atoms::{Atom, AtomKind, Bump, Form};

    fn instance(family: Family, atoms: Vec<Atom>) -> PdeInstance {
        PdeInstance {
            case_id: "t".into(),
            family,
            lambda: if family == Family::Yukawa { 2.0 } else { 0.0 },
            k: 0.0,
            domain: Domain::disk(1.0),
            solution: Solution::new(atoms),
            hardness: HardnessMeta::default(),
        }
    }

    fn linear() -> Atom {
        Atom { kind: AtomKind::HLinear, form: Form::Linear { a: 1.0, b: 0.0 } }
    }

    #[test]
    fn forcing_examples() {
        let p = Vec2::new(0.3, 0.4);
        assert_eq!(instance(Family::Laplace, vec![linear()]).forcing(p), 0.0);
        let y = instance(Family::Yukawa, vec![linear()]);
        assert!((y.forcing(p) + 0.6).abs() < 1e-15);
        let b = Bump { a: 0.9, w: 1.7, center: Vec2::new(0.1, -0.2) };
        let g = instance(
            Family::Poisson,
            vec![Atom { kind: AtomKind::GaussianBump, form: Form::Gaussian(b) }],
        );
        assert!((g.forcing(b.center) + 4.0 * 0.9 * 1.7).abs() < 1e-13);
    }

    #[test]
    fn boundary_values_of_polar() {
        let inst = instance(
            Family::Laplace,
            vec![Atom { kind: AtomKind::HPolar, form: Form::Polar { a: 1.0, n: 1, sine: false } }],
        );
        for k in 0..16 {
            let t = k as f64 * 0.4;
            let p = Vec2::from_polar(1.0, t);
            assert!((inst.boundary_value(p) - t.cos()).abs() < 1e-15);
        }
    }

    #[test]
    fn disk_grid_mask_and_values() {
        let inst = instance(Family::Laplace, vec![linear()]);
        let (clean, mask) = inst.ground_truth_grid(256).unwrap();
        let frac = mask.count_inside() as f64 / mask.len() as f64;
        assert!((frac - std::f64::consts::FRAC_PI_4).abs() < 0.01);
        for i in 0..256 {
            for j in 0..256 {
                let k = i * 256 + j;
                let want = if mask.inside(k) { pixel_center(256, i, j).x as f32 } else { 0.0 };
                assert_eq!(clean.get(i, j), want);
            }
        }
    }

    #[test]
    fn family_names_round_trip() {
        for f in Family::ALL {
            assert_eq!(Family::parse(f.name()), Some(f));
            assert_eq!(serde_json::to_string(&f).unwrap(), format!("\"{}\"", f.name()));
        }
    }
}
