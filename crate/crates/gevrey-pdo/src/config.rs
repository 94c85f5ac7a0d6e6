//! Run configuration: a single human-editable TOML file, versioned by
//! `schema_version`, holding the grid, parameter sweeps, sample counts,
//! seed and tolerance overrides.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("cannot parse config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("unsupported schema_version {got}, this build reads {want}")]
    SchemaVersion { got: u32, want: u32 },
    #[error("config domain violation: {0}")]
    Domain(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    pub schema_version: u32,
    /// Base seed; per-case streams are derived by hashing (suite, case).
    pub seed: u64,
    pub grid: GridConfig,
    pub sweeps: Sweeps,
    pub samples: SampleCounts,
    #[serde(default)]
    pub tolerances: Tolerances,
    /// Default output directory; the command-line flag overrides it.
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub d: usize,
    /// Base points per axis; refinement suites double and quadruple it.
    pub n: usize,
    pub len: f64,
}

/// Parameter sweeps. Each suite documents which lists it reads; the
/// embedding suite interprets `tau` entries as fractions of the critical
/// radius `s R^(-1/s)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweeps {
    pub s: Vec<f64>,
    pub r_scale: Vec<f64>,
    pub sigma: Vec<f64>,
    pub tau: Vec<f64>,
    pub tau_prime: Vec<f64>,
    pub delta: Vec<f64>,
    pub rho: Vec<f64>,
    pub m: Vec<f64>,
    pub k_ratio: Vec<f64>,
    pub h: Vec<f64>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleCounts {
    /// Total randomized samples per inequality check, spread across the
    /// (d, sigma, K) grid.
    pub inequality_samples: u64,
    /// Random pairs classified in the region-partition totality case.
    pub region_samples: u64,
    /// Random (symbol, input) pairs per quantization oracle case.
    pub quantization_cases: u32,
    /// Random inputs for the conjugation and operator-identity cases.
    pub conjugation_inputs: u32,
    /// Random inputs per action-norm estimate.
    pub action_samples: u32,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Relative rounding tolerance for hard inequalities.
    pub relative: f64,
    /// Oracle-equivalence tolerance for the quantization paths.
    pub oracle_l2: f64,
    /// Conjugated-symbol operator-identity tolerance.
    pub identity_l2: f64,
    /// Two-path consistency tolerance for the conjugated multiplication.
    pub two_path: f64,
    /// Allowed drift of fitted constants under grid refinement.
    pub drift: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            relative: 1e-12,
            oracle_l2: 1e-8,
            identity_l2: 1e-6,
            two_path: 1e-10,
            drift: 0.2,
        }
    }
}

impl SuiteConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| ConfigError::Io { path: path.to_path_buf(), source })?;
        let cfg: SuiteConfig = toml::from_str(&text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Checks every sweep value against the domain the target modules
    /// declare, naming the violated constraint.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let err = |msg: String| Err(ConfigError::Domain(msg));
        if self.schema_version != SCHEMA_VERSION {
            return Err(ConfigError::SchemaVersion {
                got: self.schema_version,
                want: SCHEMA_VERSION,
            });
        }
        if gevrey_core::make_grid(self.grid.d, self.grid.n, self.grid.len).is_err() {
            return err(format!(
                "grid: d must be 1..=3, n a power of two >= 4, len > 0; got d = {}, n = {}, len = {}",
                self.grid.d, self.grid.n, self.grid.len
            ));
        }
        // refinement suites go up to 8 * n
        if self.grid.n > 1 << 12 {
            return err(format!("grid.n = {} is beyond desk scale", self.grid.n));
        }
        for &s in &self.sweeps.s {
            if !(s > 1.0) {
                return err(format!("sweeps.s: Gevrey index must exceed 1, got {s}"));
            }
        }
        for &r in &self.sweeps.r_scale {
            if !(r > 0.0) {
                return err(format!("sweeps.r_scale: scale must be positive, got {r}"));
            }
        }
        for &sg in &self.sweeps.sigma {
            if !(sg > 0.0 && sg < 1.0) {
                return err(format!("sweeps.sigma: must lie strictly in (0,1), got {sg}"));
            }
        }
        for &t in &self.sweeps.tau {
            if !(t > 0.0) {
                return err(format!("sweeps.tau: radius must be positive, got {t}"));
            }
        }
        for &t in &self.sweeps.tau_prime {
            if !(t >= 0.0) {
                return err(format!("sweeps.tau_prime: must be >= 0, got {t}"));
            }
        }
        for &d in &self.sweeps.delta {
            if !(0.0..1.0).contains(&d) {
                return err(format!("sweeps.delta: must lie in [0,1), got {d}"));
            }
        }
        for (&d, &r) in self.sweeps.delta.iter().zip(&self.sweeps.rho) {
            if !(d < r && r <= 1.0) {
                return err(format!("sweeps.rho: need delta < rho <= 1, got delta={d}, rho={r}"));
            }
        }
        for &m in &self.sweeps.m {
            if !(m >= 0.0) {
                return err(format!("sweeps.m: order must be >= 0, got {m}"));
            }
        }
        for &k in &self.sweeps.k_ratio {
            if !(k > 1.0) {
                return err(format!("sweeps.k_ratio: must exceed 1, got {k}"));
            }
        }
        for &h in &self.sweeps.h {
            if !(0.0..=1.0).contains(&h) {
                return err(format!("sweeps.h: must lie in [0,1], got {h}"));
            }
        }
        if self.tolerances.relative <= 0.0
            || self.tolerances.oracle_l2 <= 0.0
            || self.tolerances.identity_l2 <= 0.0
            || self.tolerances.two_path <= 0.0
            || self.tolerances.drift <= 0.0
        {
            return err("tolerances must be positive".to_string());
        }
        Ok(())
    }
}

/// The default configuration shipped in `configs/default.toml`.
pub fn default_config() -> SuiteConfig {
    SuiteConfig {
        schema_version: SCHEMA_VERSION,
        seed: 42,
        grid: GridConfig { d: 1, n: 64, len: 2.0 * std::f64::consts::PI },
        sweeps: Sweeps {
            s: vec![1.5, 2.0, 3.0],
            r_scale: vec![1.0],
            sigma: vec![0.1, 0.3, 0.5, 0.7, 0.9],
            tau: vec![0.25, 0.5, 0.75],
            tau_prime: vec![0.2],
            delta: vec![0.25],
            rho: vec![0.75],
            m: vec![0.0, 1.0, 2.0, 4.0],
            k_ratio: vec![1.5, 2.0, 10.0],
            h: vec![0.0, 0.25, 0.5],
        },
        samples: SampleCounts {
            inequality_samples: 1_000_000,
            region_samples: 1_000_000,
            quantization_cases: 100,
            conjugation_inputs: 50,
            action_samples: 12,
        },
        tolerances: Tolerances::default(),
        output_dir: None,
    }
}
