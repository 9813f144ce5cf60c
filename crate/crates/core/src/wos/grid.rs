use rayon::prelude::*;

use super::{check_supported, wos_walk, WosError, WosParams};
use crate::field::{pixel_center, Field};
use crate::manufactured::PdeInstance;
use crate::rng::{fold_key, hash_str, RngStream};

/// Prefix-mean estimate fields at ascending budgets from one walk sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub budgets: Vec<u32>,
    pub fields: Vec<Field>,
    pub mask: Field,
    pub seed: u64,
    /// Walks stopped by the step cap.
    pub overflow_walks: u64,
    pub total_walks: u64,
    pub total_steps: u64,
}

impl Trajectory {
    pub fn field_at(&self, budget: u32) -> Option<&Field> {
        self.budgets.iter().position(|&b| b == budget).map(|i| &self.fields[i])
    }

    pub fn overflow_rate(&self) -> f64 {
        if self.total_walks == 0 {
            0.0
        } else {
            self.overflow_walks as f64 / self.total_walks as f64
        }
    }

    pub fn mean_steps(&self) -> f64 {
        if self.total_walks == 0 {
            0.0
        } else {
            self.total_steps as f64 / self.total_walks as f64
        }
    }
}

/// Walk key of a case: every walk is addressed by `(key, pixel, walk)`.
pub fn walk_key(seed: u64, case_id: &str) -> u64 {
    fold_key(&[seed, hash_str(case_id)])
}

#[derive(Default, Clone, Copy)]
struct Tally {
    overflow: u64,
    walks: u64,
    steps: u64,
}

/// Solves every masked pixel with `max(budgets)` walks and records the
/// running means at each budget. Deterministic for any thread count.
pub fn solve_grid(
    inst: &PdeInstance,
    budgets: &[u32],
    params: &WosParams,
    seed: u64,
) -> Result<Trajectory, WosError> {
    check_supported(inst)?;
    if budgets.is_empty() || budgets[0] == 0 || budgets.windows(2).any(|w| w[0] >= w[1]) {
        return Err(WosError::InvalidBudgets);
    }
    if !(params.epsilon > 0.0) || params.max_steps == 0 || params.resolution == 0 {
        return Err(WosError::InvalidParams("epsilon > 0, max_steps >= 1, resolution >= 1"));
    }
    let res = params.resolution;
    let mask = inst.mask_grid(res);
    let max_b = *budgets.last().unwrap_or(&1);
    let requested = u64::from(max_b) * mask.count_inside() as u64;
    if requested > params.compute_cap {
        return Err(WosError::ComputeCapExceeded { requested, cap: params.compute_cap });
    }
    let key = walk_key(seed, &inst.case_id);
    let nb = budgets.len();
    // Row-major, budget-minor: est[(i * res + j) * nb + b].
    let mut est = vec![0.0f32; res * res * nb];
    let tally = est
        .par_chunks_mut(res * nb)
        .enumerate()
        .map(|(i, row)| {
            let mut t = Tally::default();
            for j in 0..res {
                let pixel = i * res + j;
                if !mask.inside(pixel) {
                    continue;
                }
                let p = pixel_center(res, i, j);
                let mut sum = 0.0;
                let mut next = 0;
                for w in 0..max_b {
                    let mut rng = RngStream::for_walk(key, pixel as u32, w);
                    let walk = wos_walk(inst, p, params, &mut rng);
                    sum += walk.value;
                    t.steps += u64::from(walk.steps);
                    t.overflow += u64::from(walk.overflowed);
                    if w + 1 == budgets[next] {
                        row[j * nb + next] = (sum / f64::from(w + 1)) as f32;
                        next += 1;
                    }
                }
                t.walks += u64::from(max_b);
            }
            t
        })
        .reduce(Tally::default, |a, b| Tally {
            overflow: a.overflow + b.overflow,
            walks: a.walks + b.walks,
            steps: a.steps + b.steps,
        });
    let fields = (0..nb)
        .map(|b| Field::from_vec(res, (0..res * res).map(|k| est[k * nb + b]).collect()))
        .collect();
    Ok(Trajectory {
        budgets: budgets.to_vec(),
        fields,
        mask,
        seed,
        overflow_walks: tally.overflow,
        total_walks: tally.walks,
        total_steps: tally.steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atoms::{Atom, AtomKind, Form, Solution};
    use crate::geometry::Domain;
    use crate::manufactured::{Family, HardnessMeta};
    use crate::vec2::Vec2;

    fn inst() -> PdeInstance {
        PdeInstance {
            case_id: "000001_deadbeef".into(),
            family: Family::Poisson,
            lambda: 0.0,
            k: 0.0,
            domain: Domain::disk(1.0),
            solution: Solution::new(vec![
                Atom { kind: AtomKind::Trig, form: Form::SinX { a: 0.5, k: 0.3 } },
                Atom { kind: AtomKind::HLinear, form: Form::Linear { a: 0.2, b: -0.4 } },
            ]),
            hardness: HardnessMeta::default(),
        }
    }

    fn params(res: usize) -> WosParams {
        WosParams { resolution: res, ..WosParams::train() }
    }

    #[test]
    fn prefix_means_match_recomputation() {
        let i = inst();
        let t = solve_grid(&i, &[1, 2, 4, 8], &params(8), 5).unwrap();
        assert_eq!(t.fields.len(), 4);
        let key = walk_key(5, &i.case_id);
        for pixel in 0..64 {
            if !t.mask.inside(pixel) {
                assert!(t.fields.iter().all(|f| f.data()[pixel] == 0.0));
                continue;
            }
            let p = pixel_center(8, pixel / 8, pixel % 8);
            let vals: Vec<f64> = (0..8)
                .map(|w| wos_walk(&i, p, &params(8), &mut RngStream::for_walk(key, pixel as u32, w)).value)
                .collect();
            for (b, f) in t.budgets.iter().zip(&t.fields) {
                let m = vals[..*b as usize].iter().sum::<f64>() / f64::from(*b);
                assert_eq!(f.data()[pixel], m as f32);
            }
        }
    }

    #[test]
    fn rejects_bad_budgets_and_caps() {
        let i = inst();
        assert_eq!(solve_grid(&i, &[2, 2], &params(4), 0), Err(WosError::InvalidBudgets));
        assert_eq!(solve_grid(&i, &[], &params(4), 0), Err(WosError::InvalidBudgets));
        let capped = WosParams { compute_cap: 10, ..params(8) };
        assert!(matches!(solve_grid(&i, &[1, 4], &capped, 0), Err(WosError::ComputeCapExceeded { .. })));
    }

    #[test]
    fn same_seed_same_trajectory() {
        let i = inst();
        let a = solve_grid(&i, &[1, 3], &params(16), 9).unwrap();
        let b = solve_grid(&i, &[1, 3], &params(16), 9).unwrap();
        assert_eq!(a, b);
        let c = solve_grid(&i, &[1, 3], &params(16), 10).unwrap();
        assert_ne!(a.fields, c.fields);
        let v = a.field_at(3).unwrap().get(8, 8);
        let want = i.solution.value(Vec2::new(0.0625, 0.0625));
        assert!((f64::from(v) - want).abs() < 1.0, "{v} vs {want}");
    }
}
