use serde::{Deserialize, Serialize};

use super::{GenConfig, PdeInstance};
use crate::atoms::Singularity;
use crate::geometry::{count_interior_hits, sample_boundary, sample_interior};
use crate::rng::RngStream;
use crate::vec2::Vec2;

/// Why a candidate instance was rejected. Variants are in check order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FilterFailure {
    FiniteTestPoint,
    FiniteForcing,
    DomainInterior,
    /// A singular point or branch cut of the solution reaches the domain.
    SingularCenter,
    ComposedThickness,
    SolutionAmplitude,
    BoundaryValues,
    ForcingAmplitude,
    FiniteGroundTruth,
}

impl FilterFailure {
    pub const ALL: [FilterFailure; 9] = [
        FilterFailure::FiniteTestPoint,
        FilterFailure::FiniteForcing,
        FilterFailure::DomainInterior,
        FilterFailure::SingularCenter,
        FilterFailure::ComposedThickness,
        FilterFailure::SolutionAmplitude,
        FilterFailure::BoundaryValues,
        FilterFailure::ForcingAmplitude,
        FilterFailure::FiniteGroundTruth,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FilterFailure::FiniteTestPoint => "finite_test_point",
            FilterFailure::FiniteForcing => "finite_forcing",
            FilterFailure::DomainInterior => "domain_interior",
            FilterFailure::SingularCenter => "singular_center",
            FilterFailure::ComposedThickness => "composed_thickness",
            FilterFailure::SolutionAmplitude => "solution_amplitude",
            FilterFailure::BoundaryValues => "boundary_values",
            FilterFailure::ForcingAmplitude => "forcing_amplitude",
            FilterFailure::FiniteGroundTruth => "finite_ground_truth",
        }
    }
}

impl std::fmt::Display for FilterFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Statistics collected by a passing filter run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FilterStats {
    pub std_u: f64,
    pub std_f: f64,
}

/// Clearance required between a singularity and the domain.
const SINGULAR_CLEARANCE: f64 = 0.05;
const TEST_POINT: Vec2 = Vec2 { x: 0.3, y: 0.4 };

fn std_dev(v: &[f64]) -> f64 {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    (v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n).sqrt()
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

fn singular_clear(inst: &PdeInstance) -> bool {
    let away = |p: Vec2| inst.domain.sdf(p) < -SINGULAR_CLEARANCE;
    inst.solution.singularities().into_iter().all(|s| match s {
        Singularity::Point(c) => away(c),
        Singularity::Ray(c) => {
            let dir = c * (1.0 / c.norm());
            (0..=150).all(|t| away(c + dir * (0.02 * t as f64)))
        }
    })
}

/// Runs the quality filters in order and returns the first failure.
///
/// `rng` drives the interior and boundary samples, so the verdict is a pure
/// function of the instance, the config and the stream.
pub fn quality_filter(
    inst: &PdeInstance,
    cfg: &GenConfig,
    rng: &mut RngStream,
) -> Result<FilterStats, FilterFailure> {
    let forced = inst.family.is_forced();
    if !inst.solution.value(TEST_POINT).is_finite() {
        return Err(FilterFailure::FiniteTestPoint);
    }
    if forced && !inst.forcing(TEST_POINT).is_finite() {
        return Err(FilterFailure::FiniteForcing);
    }
    if count_interior_hits(&inst.domain, rng, 128) < cfg.min_interior_hits {
        return Err(FilterFailure::DomainInterior);
    }
    if !singular_clear(inst) {
        return Err(FilterFailure::SingularCenter);
    }
    let interior = sample_interior(&inst.domain, rng, cfg.interior_samples)
        .map_err(|_| FilterFailure::DomainInterior)?
        .points;
    if inst.domain.is_composed() {
        let sdf = interior.iter().map(|&p| inst.domain.sdf(p)).collect();
        if !(median(sdf) > cfg.min_median_sdf) {
            return Err(FilterFailure::ComposedThickness);
        }
    }
    let (us, fs): (Vec<f64>, Vec<f64>) =
        interior.iter().map(|&p| inst.value_and_forcing(p)).unzip();
    let std_u = std_dev(&us);
    if !(std_u > cfg.std_u_min && std_u < cfg.std_u_max) {
        return Err(FilterFailure::SolutionAmplitude);
    }
    if inst.domain.is_composed() {
        let boundary = sample_boundary(&inst.domain, rng, 256);
        let max_g = boundary
            .iter()
            .map(|&p| inst.boundary_value(p).abs())
            .fold(0.0, f64::max);
        if !(max_g < cfg.boundary_max) {
            return Err(FilterFailure::BoundaryValues);
        }
    }
    let std_f = if forced { std_dev(&fs) } else { 0.0 };
    if forced && !(std_f > cfg.std_f_min && std_f < cfg.std_f_max) {
        return Err(FilterFailure::ForcingAmplitude);
    }
    if inst.ground_truth_grid(cfg.resolution).is_err() {
        return Err(FilterFailure::FiniteGroundTruth);
    }
    Ok(FilterStats { std_u, std_f })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atoms::{Atom, AtomKind, Form, Solution};
    use crate::geometry::{BoolOp, Domain, Placed};
    use crate::manufactured::{Family, HardnessMeta};

    fn inst(domain: Domain, atoms: Vec<Atom>) -> PdeInstance {
        PdeInstance {
            case_id: "f".into(),
            family: Family::Laplace,
            lambda: 0.0,
            k: 0.0,
            domain,
            solution: Solution::new(atoms),
            hardness: HardnessMeta::default(),
        }
    }

    fn lin(a: f64) -> Atom {
        Atom { kind: AtomKind::HLinear, form: Form::Linear { a, b: 0.0 } }
    }

    fn small_cfg() -> GenConfig {
        GenConfig { resolution: 64, ..GenConfig::train() }
    }

    #[test]
    fn flat_solution_fails_amplitude() {
        let i = inst(Domain::disk(1.0), vec![lin(1e-5)]);
        let mut rng = RngStream::from_seed(1);
        assert_eq!(quality_filter(&i, &small_cfg(), &mut rng), Err(FilterFailure::SolutionAmplitude));
    }

    #[test]
    fn plain_harmonic_passes() {
        let i = inst(Domain::disk(1.0), vec![lin(1.0)]);
        let mut rng = RngStream::from_seed(2);
        let s = quality_filter(&i, &small_cfg(), &mut rng).unwrap();
        assert!((s.std_u - 0.5).abs() < 0.05);
        assert_eq!(s.std_f, 0.0);
    }

    #[test]
    fn thin_intersection_fails_thickness() {
        let place = |x: f64| Placed {
            domain: Domain::disk(1.0),
            rotation: 0.0,
            offset: Vec2::new(x, 0.0),
        };
        let thin = Domain::composed(BoolOp::Intersection, place(-0.98), place(0.98));
        let i = inst(thin, vec![lin(1.0), lin(0.0)]);
        let cfg = GenConfig { min_interior_hits: 1, ..small_cfg() };
        let mut rng = RngStream::from_seed(3);
        assert_eq!(quality_filter(&i, &cfg, &mut rng), Err(FilterFailure::ComposedThickness));
    }

    #[test]
    fn singular_center_inside_is_rejected() {
        let atom = Atom {
            kind: AtomKind::HLogSource,
            form: Form::LogRadius { a: 1.0, center: Vec2::new(1.0, 0.0) },
        };
        let i = inst(Domain::Primitive(crate::geometry::Primitive::Square { half: 1.0 }), vec![lin(1.0), atom]);
        let mut rng = RngStream::from_seed(4);
        assert_eq!(quality_filter(&i, &small_cfg(), &mut rng), Err(FilterFailure::SingularCenter));
    }

    #[test]
    fn verdict_is_deterministic() {
        let i = inst(Domain::disk(1.0), vec![lin(0.7)]);
        let a = quality_filter(&i, &small_cfg(), &mut RngStream::from_seed(9));
        let b = quality_filter(&i, &small_cfg(), &mut RngStream::from_seed(9));
        assert_eq!(a, b);
    }
}
