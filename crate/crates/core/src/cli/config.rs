use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use super::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioKind {
    TwoLevel,
    TwoSpin,
    DecreasingField,
    CdCheck,
    InvariantCheck,
}

impl ScenarioKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::TwoLevel => "two-level",
            Self::TwoSpin => "two-spin",
            Self::DecreasingField => "decreasing-field",
            Self::CdCheck => "cd-check",
            Self::InvariantCheck => "invariant-check",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
}

/// Envelope `h(t)` for the decreasing-field scenario.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum FieldKind {
    /// `e^{−t/10}`.
    Exp,
    /// `(1 + t/10⁻⁴)^{−4}`.
    Power,
    /// `1 + t`.
    Linear,
    /// `h ≡ 1`.
    Constant,
}

/// Fully resolved run parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub scenario: ScenarioKind,
    pub alpha_bar: f64,
    pub t0: f64,
    pub omega: f64,
    pub dt: f64,
    pub gauge_eliminate_v0: bool,
    pub output_dir: PathBuf,
    pub format: Format,
    pub field: FieldKind,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            scenario: ScenarioKind::TwoLevel,
            alpha_bar: 2.0,
            t0: 10.0,
            omega: std::f64::consts::PI / 40.0,
            dt: 1e-3,
            gauge_eliminate_v0: true,
            output_dir: PathBuf::from("."),
            format: Format::Csv,
            field: FieldKind::Exp,
        }
    }
}

/// Config file contents: any subset of the [`RunConfig`] fields.
#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub scenario: Option<ScenarioKind>,
    pub alpha_bar: Option<f64>,
    pub t0: Option<f64>,
    pub omega: Option<f64>,
    pub dt: Option<f64>,
    pub gauge_eliminate_v0: Option<bool>,
    pub output_dir: Option<PathBuf>,
    pub format: Option<Format>,
    pub field: Option<FieldKind>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("invalid config file: {e}")))
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }
}

/// Command-line overrides; `None` leaves the file or default value in place.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub scenario: Option<ScenarioKind>,
    pub alpha_bar: Option<f64>,
    pub t0: Option<f64>,
    pub omega: Option<f64>,
    pub dt: Option<f64>,
    pub no_gauge: bool,
    pub output_dir: Option<PathBuf>,
    pub format: Option<Format>,
    pub field: Option<FieldKind>,
}

/// Merges flags over file values over defaults, then validates.
pub fn resolve(flags: &Overrides, file: Option<&ConfigFile>) -> Result<RunConfig, CliError> {
    let d = RunConfig::default();
    let f = file.cloned().unwrap_or_default();
    let cfg = RunConfig {
        scenario: flags.scenario.or(f.scenario).unwrap_or(d.scenario),
        alpha_bar: flags.alpha_bar.or(f.alpha_bar).unwrap_or(d.alpha_bar),
        t0: flags.t0.or(f.t0).unwrap_or(d.t0),
        omega: flags.omega.or(f.omega).unwrap_or(d.omega),
        dt: flags.dt.or(f.dt).unwrap_or(d.dt),
        gauge_eliminate_v0: if flags.no_gauge { false } else { f.gauge_eliminate_v0.unwrap_or(d.gauge_eliminate_v0) },
        output_dir: flags.output_dir.clone().or(f.output_dir).unwrap_or(d.output_dir),
        format: flags.format.or(f.format).unwrap_or(d.format),
        field: flags.field.or(f.field).unwrap_or(d.field),
    };
    validate(&cfg)?;
    Ok(cfg)
}

pub fn validate(cfg: &RunConfig) -> Result<(), CliError> {
    let check = |ok: bool, msg: String| if ok { Ok(()) } else { Err(CliError::Usage(msg)) };
    check(cfg.alpha_bar.is_finite() && cfg.alpha_bar >= 1.0, format!("alpha_bar must be >= 1 (got {})", cfg.alpha_bar))?;
    check(cfg.t0.is_finite() && cfg.t0 > 0.0, format!("t0 must be > 0 (got {})", cfg.t0))?;
    check(cfg.omega.is_finite() && cfg.omega > 0.0, format!("omega must be > 0 (got {})", cfg.omega))?;
    check(cfg.dt.is_finite() && cfg.dt > 0.0, format!("dt must be > 0 (got {})", cfg.dt))
}

/// Warning text when `dt` is coarse relative to `t0`.
pub fn coarse_step_warning(cfg: &RunConfig) -> Option<String> {
    (cfg.dt > cfg.t0 / 1000.0).then(|| format!("warning: dt = {} exceeds t0/1000 = {}; accuracy gates may not hold", cfg.dt, cfg.t0 / 1000.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_apply_without_overrides() {
        let cfg = resolve(&Overrides::default(), None).unwrap();
        assert_eq!(cfg, RunConfig::default());
    }

    #[test]
    fn flags_beat_file_beat_defaults() {
        let file = ConfigFile::parse(r#"{"alpha_bar": 3.0, "t0": 5.0}"#).unwrap();
        let flags = Overrides { alpha_bar: Some(2.0), ..Default::default() };
        let cfg = resolve(&flags, Some(&file)).unwrap();
        assert_eq!(cfg.alpha_bar, 2.0);
        assert_eq!(cfg.t0, 5.0);
        assert_eq!(cfg.dt, 1e-3);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(matches!(ConfigFile::parse(r#"{"alpha": 2.0}"#), Err(CliError::Usage(_))));
    }

    #[test]
    fn alpha_below_one_is_usage_error() {
        let flags = Overrides { alpha_bar: Some(0.5), ..Default::default() };
        assert!(matches!(resolve(&flags, None), Err(CliError::Usage(_))));
    }

    #[test]
    fn no_gauge_flag_overrides_file() {
        let file = ConfigFile::parse(r#"{"gauge_eliminate_v0": true}"#).unwrap();
        let cfg = resolve(&Overrides { no_gauge: true, ..Default::default() }, Some(&file)).unwrap();
        assert!(!cfg.gauge_eliminate_v0);
    }

    #[test]
    fn full_config_round_trips() {
        let cfg = RunConfig { scenario: ScenarioKind::CdCheck, format: Format::Json, ..Default::default() };
        let text = serde_json::to_string(&cfg).unwrap();
        assert_eq!(serde_json::from_str::<RunConfig>(&text).unwrap(), cfg);
    }
}
