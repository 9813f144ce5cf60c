use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{write_atomic, Bundle, DataError, Truth};
use crate::manufactured::{Family, PdeInstance};
use crate::wos::{Trajectory, WosParams};

/// Environment variable naming the default output root.
pub const OUT_ENV: &str = "MCPDE_OUT";

/// `$MCPDE_OUT`, or `./mcpde-data`.
pub fn default_root() -> PathBuf {
    std::env::var_os(OUT_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("mcpde-data"))
}

/// Per-case solve metadata stored next to the bundles.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryMeta {
    pub case_id: String,
    pub family: Family,
    pub seed: u64,
    pub budgets: Vec<u32>,
    pub resolution: usize,
    pub wos: WosParams,
    pub overflow_walks: u64,
    pub total_walks: u64,
    pub total_steps: u64,
}

/// Paths of a dataset:
///
/// ```text
/// <root>/<split>.jsonl
/// <root>/<split>/<case_id>/B<budget>.npz
/// <root>/<split>/<case_id>/truth.npz
/// <root>/<split>/<case_id>/<case_id>.json
/// ```
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layout {
    pub root: PathBuf,
}

impl Layout {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Layout { root: root.into() }
    }

    pub fn records(&self, split: &str) -> PathBuf {
        self.root.join(format!("{split}.jsonl"))
    }

    pub fn split_dir(&self, split: &str) -> PathBuf {
        self.root.join(split)
    }

    pub fn case_dir(&self, split: &str, case_id: &str) -> PathBuf {
        self.split_dir(split).join(case_id)
    }

    pub fn bundle(&self, split: &str, case_id: &str, budget: u32) -> PathBuf {
        self.case_dir(split, case_id).join(format!("B{budget}.npz"))
    }

    pub fn truth(&self, split: &str, case_id: &str) -> PathBuf {
        self.case_dir(split, case_id).join("truth.npz")
    }

    pub fn meta(&self, split: &str, case_id: &str) -> PathBuf {
        self.case_dir(split, case_id).join(format!("{case_id}.json"))
    }

    /// Budgets whose bundle is absent.
    pub fn missing_budgets(&self, split: &str, case_id: &str, budgets: &[u32]) -> Vec<u32> {
        budgets.iter().copied().filter(|&b| !self.bundle(split, case_id, b).exists()).collect()
    }

    /// Budgets with a bundle on disk, ascending.
    pub fn budgets_on_disk(&self, split: &str, case_id: &str) -> Result<Vec<u32>, DataError> {
        let dir = self.case_dir(split, case_id);
        let mut out = Vec::new();
        for entry in std::fs::read_dir(&dir).map_err(DataError::io(&dir))? {
            let name = entry.map_err(DataError::io(&dir))?.file_name();
            let name = name.to_string_lossy();
            if let Some(b) = name.strip_prefix('B').and_then(|s| s.strip_suffix(".npz")) {
                if let Ok(b) = b.parse() {
                    out.push(b);
                }
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    pub fn write_truth(&self, split: &str, inst: &PdeInstance, truth: &Truth) -> Result<(), DataError> {
        truth.write(&self.truth(split, &inst.case_id))
    }

    /// Writes the bundles listed in `only` (all when `None`), then the
    /// metadata. `clean` and the trajectory mask must share a resolution.
    pub fn write_trajectory(
        &self,
        split: &str,
        inst: &PdeInstance,
        traj: &Trajectory,
        clean: &crate::field::Field,
        params: &WosParams,
        only: Option<&[u32]>,
    ) -> Result<usize, DataError> {
        clean.check_shape(&traj.mask).map_err(|_| DataError::ShapeMismatch)?;
        let mut written = 0;
        for (&b, field) in traj.budgets.iter().zip(&traj.fields) {
            if only.is_some_and(|o| !o.contains(&b)) {
                continue;
            }
            let bundle = Bundle { noisy: field.clone(), clean: clean.clone(), mask: traj.mask.clone() };
            bundle.write(&self.bundle(split, &inst.case_id, b))?;
            written += 1;
        }
        let meta = TrajectoryMeta {
            case_id: inst.case_id.clone(),
            family: inst.family,
            seed: traj.seed,
            budgets: traj.budgets.clone(),
            resolution: traj.mask.res(),
            wos: *params,
            overflow_walks: traj.overflow_walks,
            total_walks: traj.total_walks,
            total_steps: traj.total_steps,
        };
        let mut json = serde_json::to_string_pretty(&meta).expect("metadata serializes");
        json.push('\n');
        write_atomic(&self.meta(split, &inst.case_id), json.as_bytes())?;
        Ok(written)
    }

    pub fn read_meta(&self, split: &str, case_id: &str) -> Result<TrajectoryMeta, DataError> {
        let path = self.meta(split, case_id);
        let text = std::fs::read_to_string(&path).map_err(DataError::io(&path))?;
        serde_json::from_str(&text).map_err(|e| DataError::Parse { line: e.line(), message: e.to_string() })
    }
}

impl AsRef<Path> for Layout {
    fn as_ref(&self) -> &Path {
        &self.root
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manufactured::{sample_instance, GenConfig};
    use crate::wos::solve_grid;

    #[test]
    fn paths_follow_the_layout() {
        let l = Layout::new("/data");
        assert_eq!(l.records("train"), PathBuf::from("/data/train.jsonl"));
        assert_eq!(l.bundle("test", "000001_abcdef01", 32), PathBuf::from("/data/test/000001_abcdef01/B32.npz"));
        assert_eq!(l.meta("test", "c"), PathBuf::from("/data/test/c/c.json"));
    }

    #[test]
    fn trajectory_write_and_resume() {
        let dir = tempfile::tempdir().unwrap();
        let l = Layout::new(dir.path());
        let cfg = GenConfig { resolution: 16, interior_samples: 128, ..GenConfig::train() };
        let inst = sample_instance(&cfg, 3, 0).unwrap().instance;
        let params = WosParams { resolution: 16, ..WosParams::train() };
        let traj = solve_grid(&inst, &[1, 2, 4], &params, 3).unwrap();
        let (clean, _) = inst.ground_truth_grid(16).unwrap();
        assert_eq!(l.write_trajectory("train", &inst, &traj, &clean, &params, Some(&[2])).unwrap(), 1);
        assert_eq!(l.missing_budgets("train", &inst.case_id, &[1, 2, 4]), vec![1, 4]);
        l.write_trajectory("train", &inst, &traj, &clean, &params, None).unwrap();
        assert_eq!(l.budgets_on_disk("train", &inst.case_id).unwrap(), vec![1, 2, 4]);
        let meta = l.read_meta("train", &inst.case_id).unwrap();
        assert_eq!((meta.budgets, meta.resolution), (vec![1, 2, 4], 16));
        let b = Bundle::read(&l.bundle("train", &inst.case_id, 4)).unwrap();
        assert_eq!(&b.noisy, traj.field_at(4).unwrap());
        assert!(b.mask.data().iter().all(|&v| v == 0.0 || v == 1.0));
    }
}
