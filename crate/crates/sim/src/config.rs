//! Experiment configuration.
//!
//! The file format is one `key = value` pair per line; `#` starts a comment.
//! Lists are comma separated, and `snr_db` also accepts `start:step:stop`.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use smcs_core::constellation::{Scheme, SignalConstellation, SpatialConstellation};
use smcs_core::detect::MlBudget;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("invalid value `{value}` for `{key}`")]
    Value { key: String, value: String },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DetectorKind {
    Ssp,
    SspNoninterleaved,
    SspIidChannels,
    Sp,
    NcsOmp,
    Lmmse,
    Ml,
    AnalyticGmmv,
    AnalyticMmv,
    GaussianApprox,
}

impl DetectorKind {
    pub const ALL: [DetectorKind; 10] = [
        Self::Ssp,
        Self::SspNoninterleaved,
        Self::SspIidChannels,
        Self::Sp,
        Self::NcsOmp,
        Self::Lmmse,
        Self::Ml,
        Self::AnalyticGmmv,
        Self::AnalyticMmv,
        Self::GaussianApprox,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Ssp => "ssp",
            Self::SspNoninterleaved => "ssp_noninterleaved",
            Self::SspIidChannels => "ssp_iid_channels",
            Self::Sp => "sp",
            Self::NcsOmp => "ncs_omp",
            Self::Lmmse => "lmmse",
            Self::Ml => "ml",
            Self::AnalyticGmmv => "analytic_gmmv",
            Self::AnalyticMmv => "analytic_mmv",
            Self::GaussianApprox => "gaussian_approx",
        }
    }

    /// Evaluated from closed forms instead of simulated.
    pub fn is_analytic(self) -> bool {
        matches!(self, Self::AnalyticGmmv | Self::AnalyticMmv | Self::GaussianApprox)
    }

    /// Group size the detector runs with. The conventional baselines always
    /// detect slot by slot (`G = 1`).
    pub fn group_size(self, configured: usize) -> usize {
        match self {
            Self::Sp | Self::NcsOmp | Self::Lmmse => 1,
            _ => configured,
        }
    }
}

impl fmt::Display for DetectorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DetectorKind {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        Self::ALL.into_iter().find(|d| d.name() == s).ok_or(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            Self::Csv => "csv",
            Self::Json => "json",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub n_t: usize,
    pub n_r: usize,
    pub n_a: usize,
    pub m: usize,
    pub scheme: Scheme,
    pub group_size: usize,
    pub r_t: f64,
    pub r_r: f64,
    pub snr_db: Vec<f64>,
    pub detectors: Vec<DetectorKind>,
    pub trials: u64,
    /// Stop a point after this many spatial errors; 0 disables early stop.
    pub max_errors: u64,
    pub seed: u64,
    pub out: Option<PathBuf>,
    /// Worker threads; 0 uses every available core.
    pub workers: usize,
    pub format: OutputFormat,
    pub ml_budget: u128,
    /// Record wall-clock time per point. Off by default so that outputs are
    /// byte-reproducible.
    pub timing: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            n_t: 64,
            n_r: 16,
            n_a: 1,
            m: 8,
            scheme: Scheme::Psk,
            group_size: 1,
            r_t: 0.0,
            r_r: 0.0,
            snr_db: vec![0.0],
            detectors: vec![DetectorKind::Ssp],
            trials: 1000,
            max_errors: 200,
            seed: 1,
            out: None,
            workers: 0,
            format: OutputFormat::Csv,
            ml_budget: MlBudget::default().0,
            timing: false,
        }
    }
}

pub const KEYS: [&str; 18] = [
    "nt", "nr", "na", "m", "scheme", "g", "rt", "rr", "snr_db", "detectors", "trials", "max_errors", "seed", "out",
    "workers", "format", "ml_budget", "timing",
];

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T, ConfigError> {
    value.parse().map_err(|_| ConfigError::Value { key: key.into(), value: value.into() })
}

fn parse_snr_list(value: &str) -> Option<Vec<f64>> {
    let parts: Vec<&str> = value.split(':').map(str::trim).collect();
    if let [start, step, stop] = parts[..] {
        let (start, step, stop): (f64, f64, f64) = (start.parse().ok()?, step.parse().ok()?, stop.parse().ok()?);
        if !(step > 0.0) || stop < start {
            return None;
        }
        let n = ((stop - start) / step + 1e-9).floor() as usize;
        return Some((0..=n).map(|i| start + i as f64 * step).collect());
    }
    value.split(',').map(|s| s.trim().parse().ok()).collect()
}

impl ExperimentConfig {
    /// Parses configuration text on top of the defaults and validates it.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = Self::default();
        cfg.apply_text(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Applies every `key = value` line of `text`.
    pub fn apply_text(&mut self, text: &str) -> Result<(), ConfigError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or(ConfigError::Syntax { line: i + 1 })?;
            self.set(key.trim(), value.trim())?;
        }
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        match key {
            "nt" => self.n_t = parse(key, value)?,
            "nr" => self.n_r = parse(key, value)?,
            "na" => self.n_a = parse(key, value)?,
            "m" => self.m = parse(key, value)?,
            "scheme" => {
                self.scheme = match value.to_ascii_lowercase().as_str() {
                    "psk" => Scheme::Psk,
                    "qam" => Scheme::Qam,
                    _ => return Err(ConfigError::Value { key: key.into(), value: value.into() }),
                }
            }
            "g" => self.group_size = parse(key, value)?,
            "rt" => self.r_t = parse(key, value)?,
            "rr" => self.r_r = parse(key, value)?,
            "snr_db" => {
                self.snr_db =
                    parse_snr_list(value).ok_or_else(|| ConfigError::Value { key: key.into(), value: value.into() })?
            }
            "detectors" => {
                self.detectors = value
                    .split(',')
                    .map(|s| s.trim().parse().map_err(|_| ConfigError::Value { key: key.into(), value: s.into() }))
                    .collect::<Result<_, _>>()?
            }
            "trials" => self.trials = parse(key, value)?,
            "max_errors" => self.max_errors = parse(key, value)?,
            "seed" => self.seed = parse(key, value)?,
            "out" => self.out = Some(PathBuf::from(value)),
            "workers" => self.workers = parse(key, value)?,
            "format" => {
                self.format = match value.to_ascii_lowercase().as_str() {
                    "csv" => OutputFormat::Csv,
                    "json" => OutputFormat::Json,
                    _ => return Err(ConfigError::Value { key: key.into(), value: value.into() }),
                }
            }
            "ml_budget" => self.ml_budget = parse(key, value)?,
            "timing" => self.timing = parse(key, value)?,
            _ => return Err(ConfigError::UnknownKey(key.into())),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let invalid = |s: &str| Err(ConfigError::Invalid(s.into()));
        if self.trials == 0 {
            return invalid("trials must be at least 1");
        }
        if self.group_size == 0 {
            return invalid("g must be at least 1");
        }
        if self.snr_db.is_empty() || self.snr_db.iter().any(|s| !s.is_finite()) {
            return invalid("snr_db must list finite values");
        }
        if self.snr_db.windows(2).any(|w| w[0] >= w[1]) {
            return invalid("snr_db must be strictly increasing");
        }
        if self.detectors.is_empty() {
            return invalid("at least one detector is required");
        }
        let mut seen = self.detectors.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != self.detectors.len() {
            return invalid("detectors must not repeat");
        }
        for r in [self.r_t, self.r_r] {
            if !(0.0..1.0).contains(&r) {
                return invalid("correlation coefficients must lie in [0, 1)");
            }
        }
        self.spatial().map_err(|e| ConfigError::Invalid(e.to_string()))?;
        self.signal().map_err(|e| ConfigError::Invalid(e.to_string()))?;
        Ok(())
    }

    pub fn spatial(&self) -> smcs_core::Result<SpatialConstellation> {
        SpatialConstellation::new(self.n_t, self.n_a)
    }

    pub fn signal(&self) -> smcs_core::Result<SignalConstellation> {
        SignalConstellation::new(self.scheme, self.m)
    }

    /// `σ_w²` at `snr_db` with `σ_s² = N_a`.
    pub fn noise_variance(&self, snr_db: f64) -> f64 {
        smcs_core::channel::noise_variance(snr_db, self.n_a as f64)
    }

    /// Every key that influences the records, in a fixed order.
    pub fn canonical(&self) -> String {
        let list = |v: &[f64]| v.iter().map(f64::to_string).collect::<Vec<_>>().join(",");
        let dets = self.detectors.iter().map(|d| d.name()).collect::<Vec<_>>().join(",");
        let scheme = match self.scheme {
            Scheme::Psk => "psk",
            Scheme::Qam => "qam",
        };
        format!(
            "nt={}\nnr={}\nna={}\nm={}\nscheme={}\ng={}\nrt={}\nrr={}\nsnr_db={}\ndetectors={}\ntrials={}\nmax_errors={}\nseed={}\nml_budget={}\n",
            self.n_t,
            self.n_r,
            self.n_a,
            self.m,
            scheme,
            self.group_size,
            self.r_t,
            self.r_r,
            list(&self.snr_db),
            dets,
            self.trials,
            self.max_errors,
            self.seed,
            self.ml_budget
        )
    }

    /// FNV-1a of [`Self::canonical`], as 16 hex digits.
    pub fn hash(&self) -> String {
        format!("{:016x}", fnv1a(self.canonical().as_bytes()))
    }
}

pub(crate) fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}
