//! Config file loading and flag resolution. The resolved config is fully
//! explicit and is echoed next to every output so runs are self-describing.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use swarmcap_core::{
    Error, GeneratorConfig, Mode, ReportFormat, Result, ScenarioName, StudyConfig,
};

pub const SEED_ENV_VAR: &str = "SWARMCAP_SEED";

/// Everything the CLI needs to run a command. JSON config file fields are
/// optional; flags override the file; unknown keys are rejected by name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CliConfig {
    /// Dataset generation seed. Falls back to the SWARMCAP_SEED environment
    /// variable, then to 0.
    pub seed: Option<u64>,
    pub generator: GeneratorConfig,
    pub case: ScenarioName,
    pub modes: Vec<Mode>,
    pub folds: usize,
    pub seeds: Vec<u64>,
    pub study: StudyConfig,
    pub out_dir: PathBuf,
    pub formats: Vec<ReportFormat>,
    /// Worker thread cap for the fold-by-seed grid; 0 means one per core.
    pub jobs: usize,
    /// Dataset CSV path. Missing file is generated on demand; absent path
    /// keeps the dataset in memory.
    pub data: Option<PathBuf>,
}

impl Default for CliConfig {
    fn default() -> Self {
        Self {
            seed: None,
            generator: GeneratorConfig::default(),
            case: ScenarioName::Balanced,
            modes: vec![Mode::Ll, Mode::Sl, Mode::Cl],
            folds: 5,
            seeds: vec![1, 2, 3],
            study: StudyConfig::default(),
            out_dir: PathBuf::from("out"),
            formats: ReportFormat::all().to_vec(),
            jobs: 0,
            data: None,
        }
    }
}

impl CliConfig {
    /// Loads the JSON config file, or the defaults when no path is given.
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| Error::Config(format!("invalid config {}: {e}", path.display())))
    }

    /// Fills the seed from the environment when neither file nor flag set it.
    pub fn resolve_seed(&mut self) -> Result<()> {
        if self.seed.is_some() {
            return Ok(());
        }
        self.seed = match std::env::var(SEED_ENV_VAR) {
            Ok(text) => Some(text.parse().map_err(|_| {
                Error::Config(format!("{SEED_ENV_VAR} must be an unsigned integer, got {text:?}"))
            })?),
            Err(_) => Some(0),
        };
        Ok(())
    }

    pub fn seed(&self) -> u64 {
        self.seed.expect("seed resolved before use")
    }

    pub fn validate(&self) -> Result<()> {
        self.generator.validate()?;
        self.study.swarm.validate()?;
        if self.modes.is_empty() {
            return Err(Error::Config("config field modes must not be empty".into()));
        }
        if self.seeds.is_empty() {
            return Err(Error::Config("config field seeds must not be empty".into()));
        }
        if self.formats.is_empty() {
            return Err(Error::Config(
                "config field formats must not be empty".into(),
            ));
        }
        Ok(())
    }

    /// Serializes the resolved config for the output-directory echo.
    pub fn to_pretty_json(&self) -> Result<String> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        Ok(text)
    }
}

/// Parses a comma-separated mode list, e.g. `ll,sl,cl`.
pub fn parse_modes(text: &str) -> Result<Vec<Mode>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(Mode::parse)
        .collect()
}

/// Parses a comma-separated seed list, e.g. `1,2,3`.
pub fn parse_seeds(text: &str) -> Result<Vec<u64>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse()
                .map_err(|_| Error::Config(format!("invalid seed {s:?}")))
        })
        .collect()
}

/// Parses a comma-separated format list, e.g. `csv,plotdata`.
pub fn parse_formats(text: &str) -> Result<Vec<ReportFormat>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(ReportFormat::parse)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_roundtrips_through_json() {
        let config = CliConfig::default();
        let text = config.to_pretty_json().unwrap();
        let back: CliConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back, config);
    }

    #[test]
    fn unknown_keys_are_named_in_the_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("config.json");
        std::fs::write(&path, r#"{"sseed": 3}"#).unwrap();
        let err = CliConfig::load(Some(&path)).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
        assert!(err.to_string().contains("sseed"));
    }

    #[test]
    fn nested_unknown_keys_are_rejected_too() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("config.json");
        std::fs::write(&path, r#"{"generator": {"noise_sigma": 0.1}}"#).unwrap();
        let err = CliConfig::load(Some(&path)).unwrap_err();
        assert!(err.to_string().contains("noise_sigma"));
        std::fs::write(&path, r#"{"study": {"swarm": {"cycles": 5}}}"#).unwrap();
        let err = CliConfig::load(Some(&path)).unwrap_err();
        assert!(err.to_string().contains("cycles"));
    }

    #[test]
    fn list_flag_parsers_accept_spaces_and_reject_junk() {
        assert_eq!(
            parse_modes("ll, sl_no_cwpa").unwrap(),
            vec![Mode::Ll, Mode::SlNoCwpa]
        );
        assert!(parse_modes("ll,warp").is_err());
        assert_eq!(parse_seeds("4, 5").unwrap(), vec![4, 5]);
        assert!(parse_seeds("4,x").is_err());
        assert_eq!(
            parse_formats("json,plotdata").unwrap(),
            vec![ReportFormat::Json, ReportFormat::Plotdata]
        );
        assert!(parse_formats("yaml").is_err());
    }

    #[test]
    fn partial_config_files_keep_defaults_elsewhere() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("config.json");
        std::fs::write(&path, r#"{"folds": 3, "case": "volume_biased"}"#).unwrap();
        let config = CliConfig::load(Some(&path)).unwrap();
        assert_eq!(config.folds, 3);
        assert_eq!(config.case, ScenarioName::VolumeBiased);
        assert_eq!(config.seeds, vec![1, 2, 3]);
    }
}
