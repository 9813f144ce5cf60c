use thiserror::Error;

use super::filters::{quality_filter, FilterFailure};
use super::{Family, GenConfig, HardnessMeta, PdeInstance};
use crate::atoms::sample_solution;
use crate::geometry::sample_domain;
use crate::rng::{fold_key, RngStream, StreamTag};

/// A successful draw with the rejections that preceded it.
#[derive(Clone, Debug)]
pub struct Generated {
    pub instance: PdeInstance,
    pub attempts: u32,
    pub rejections: Vec<FilterFailure>,
}

#[derive(Clone, Debug, Error, PartialEq)]
#[error("case {case_id}: no candidate passed in {attempts} attempts (last failure: {last})")]
pub struct GenerationExhausted {
    pub case_id: String,
    pub attempts: u32,
    pub last: FilterFailure,
    pub rejections: Vec<FilterFailure>,
}

/// RNG key of case `index` under `seed`.
pub fn case_key(seed: u64, index: u64) -> u64 {
    fold_key(&[seed, index])
}

/// `<index, zero padded>_<8 hex digits of the key>`.
pub fn case_id(index: u64, key: u64) -> String {
    format!("{index:06}_{:08x}", ((key >> 32) ^ key) as u32)
}

/// Draws case `index`: family once, then domain, solution and family
/// parameter on each attempt until the filters pass.
pub fn sample_instance(
    cfg: &GenConfig,
    seed: u64,
    index: u64,
) -> Result<Generated, GenerationExhausted> {
    let key = case_key(seed, index);
    let id = case_id(index, key);
    let weights: Vec<f64> = cfg.families.iter().map(|(_, w)| *w).collect();
    let mut fam_rng = RngStream::tagged(key, StreamTag::Generate, u32::MAX, 0);
    let family = cfg.families[fam_rng.weighted_index(&weights)].0;
    let mut rejections = Vec::new();
    for attempt in 0..cfg.max_attempts {
        let mut rng = RngStream::tagged(key, StreamTag::Generate, attempt, 0);
        let domain = sample_domain(&mut rng);
        let solution = sample_solution(family.pool(), cfg.hard_extra, &mut rng);
        let lambda = if family == Family::Yukawa {
            rng.range(cfg.lambda_range.0, cfg.lambda_range.1)
        } else {
            0.0
        };
        let k = if family == Family::Helmholtz {
            rng.range(cfg.k_range.0, cfg.k_range.1)
        } else {
            0.0
        };
        let mut inst = PdeInstance {
            case_id: id.clone(),
            family,
            lambda,
            k,
            domain,
            solution,
            hardness: HardnessMeta::default(),
        };
        let mut filter_rng = RngStream::tagged(key, StreamTag::Filter, attempt, 0);
        match quality_filter(&inst, cfg, &mut filter_rng) {
            Ok(stats) => {
                inst.hardness = HardnessMeta { std_u: stats.std_u, std_f: stats.std_f };
                return Ok(Generated { instance: inst, attempts: attempt + 1, rejections });
            }
            Err(why) => rejections.push(why),
        }
    }
    Err(GenerationExhausted {
        case_id: id,
        attempts: cfg.max_attempts,
        last: rejections.last().copied().unwrap_or(FilterFailure::FiniteTestPoint),
        rejections,
    })
}
