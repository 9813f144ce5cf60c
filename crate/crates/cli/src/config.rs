//! Run configuration: flags override the JSON config file, which overrides
//! built-in defaults.

use std::path::Path;

use mcpde::denoise::DenoiseParams;
use mcpde::manufactured::GenConfig;
use mcpde::wos::WosParams;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Contents of `--config`. Every section is optional and partially
/// specified sections are completed from defaults.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub root: Option<String>,
    pub split: Option<String>,
    pub budgets: Option<Vec<u32>>,
    pub generate: Option<GenConfig>,
    pub wos: Option<WosParams>,
    pub denoise: Option<DenoiseParams>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else { return Ok(FileConfig::default()) };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("reading config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Validation(format!("config {}: {e}", path.display())))
    }
}

/// First present value of flag, config, default.
pub fn pick<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

pub const TRAIN_BUDGETS: [u32; 6] = [1, 2, 4, 8, 16, 32];

/// Powers of two from 1 to 131072.
pub fn test_budgets() -> Vec<u32> {
    (0..18).map(|p| 1u32 << p).collect()
}

/// `train`, `test`, or a comma-separated list of budgets.
pub fn parse_budgets(s: &str) -> Result<Vec<u32>, CliError> {
    let list = match s {
        "train" => TRAIN_BUDGETS.to_vec(),
        "test" => test_budgets(),
        _ => s
            .split(',')
            .map(|t| t.trim().parse::<u32>().map_err(|_| CliError::Validation(format!("bad budget {t:?}"))))
            .collect::<Result<_, _>>()?,
    };
    if list.is_empty() || list[0] == 0 || list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Validation("budgets must be positive and strictly ascending".into()));
    }
    Ok(list)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_is_flag_then_file_then_default() {
        assert_eq!(pick(Some(1), Some(2), 3), 1);
        assert_eq!(pick(None, Some(2), 3), 2);
        assert_eq!(pick(None::<i32>, None, 3), 3);
    }

    #[test]
    fn partial_sections_fill_defaults() {
        let c: FileConfig = serde_json::from_str(r#"{"seed": 4, "wos": {"max_steps": 256}}"#).unwrap();
        let w = c.wos.unwrap();
        assert_eq!((c.seed, w.max_steps, w.epsilon), (Some(4), 256, 1e-4));
        assert!(serde_json::from_str::<FileConfig>(r#"{"sede": 4}"#).is_err());
    }

    #[test]
    fn budget_lists() {
        assert_eq!(parse_budgets("train").unwrap(), TRAIN_BUDGETS);
        let t = parse_budgets("test").unwrap();
        assert_eq!((t.len(), t[17]), (18, 131_072));
        assert_eq!(parse_budgets("1, 8,64").unwrap(), vec![1, 8, 64]);
        assert!(parse_budgets("8,4").is_err());
        assert!(parse_budgets("0,4").is_err());
    }
}
