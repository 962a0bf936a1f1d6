use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Deserialize;
use spindemag_core::entanglement::SpinPair;
use spindemag_core::isentrope::{GridSpacing, DEFAULT_GRID_POINTS, DEFAULT_OMEGA0_FINAL};

use crate::error::{CliError, CliResult};

/// Grid spacing as written in config files and on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    #[serde(alias = "logarithmic")]
    Log,
}

impl From<Spacing> for GridSpacing {
    fn from(s: Spacing) -> Self {
        match s {
            Spacing::Linear => GridSpacing::Linear,
            Spacing::Log => GridSpacing::Logarithmic,
        }
    }
}

impl fmt::Display for Spacing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Spacing::Linear => "linear",
            Spacing::Log => "log",
        })
    }
}

/// Contents of a `--config` TOML file. Every key is optional; command-line
/// flags take precedence.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub n_spins: Option<usize>,
    pub theta: Option<f64>,
    pub phi: Option<f64>,
    pub beta_init: Option<f64>,
    pub omega0_init: Option<f64>,
    pub omega0_final: Option<f64>,
    pub grid_points: Option<usize>,
    pub grid_spacing: Option<Spacing>,
    pub pairs: Option<Vec<String>>,
    pub output_path: Option<PathBuf>,
    pub n_list: Option<Vec<usize>>,
    pub probes: Option<Vec<String>>,
}

impl FileConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        toml::from_str(&text)
            .map_err(|e| CliError::Config(format!("invalid config {}: {e}", path.display())))
    }
}

/// Fully resolved run configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub n_spins: Option<usize>,
    pub theta: f64,
    pub phi: f64,
    pub beta_init: Option<f64>,
    pub omega0_init: Option<f64>,
    pub omega0_final: f64,
    pub grid_points: usize,
    pub grid_spacing: Spacing,
    pub pairs: Vec<SpinPair>,
    pub output_path: Option<PathBuf>,
    pub n_list: Vec<usize>,
    pub probes: Vec<Probe>,
}

/// Command-line values that override the config file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub n_spins: Option<usize>,
    pub theta: Option<f64>,
    pub phi: Option<f64>,
    pub beta_init: Option<f64>,
    pub omega0_init: Option<f64>,
    pub omega0_final: Option<f64>,
    pub grid_points: Option<usize>,
    pub grid_spacing: Option<Spacing>,
    pub pairs: Option<Vec<SpinPair>>,
    pub output_path: Option<PathBuf>,
    pub n_list: Option<Vec<usize>>,
    pub probes: Option<Vec<Probe>>,
}

impl RunConfig {
    pub fn resolve(file: FileConfig, over: Overrides) -> CliResult<Self> {
        let pairs = match over.pairs {
            Some(p) => p,
            None => match file.pairs {
                Some(list) => list.iter().map(|s| parse_pair(s)).collect::<CliResult<_>>()?,
                None => vec![SpinPair::new(1, 2).expect("valid pair")],
            },
        };
        let probes = match over.probes {
            Some(p) => p,
            None => file
                .probes
                .unwrap_or_default()
                .iter()
                .map(|s| s.parse())
                .collect::<CliResult<_>>()?,
        };
        let cfg = Self {
            n_spins: over.n_spins.or(file.n_spins),
            theta: over.theta.or(file.theta).unwrap_or(FRAC_PI_2),
            phi: over.phi.or(file.phi).unwrap_or(0.0),
            beta_init: over.beta_init.or(file.beta_init),
            omega0_init: over.omega0_init.or(file.omega0_init),
            omega0_final: over
                .omega0_final
                .or(file.omega0_final)
                .unwrap_or(DEFAULT_OMEGA0_FINAL),
            grid_points: over
                .grid_points
                .or(file.grid_points)
                .unwrap_or(DEFAULT_GRID_POINTS),
            grid_spacing: over.grid_spacing.or(file.grid_spacing).unwrap_or(Spacing::Log),
            pairs,
            output_path: over.output_path.or(file.output_path),
            n_list: over.n_list.or(file.n_list).unwrap_or_default(),
            probes,
        };
        if cfg.pairs.is_empty() {
            return Err(CliError::Config("pairs must not be empty".into()));
        }
        Ok(cfg)
    }

    pub fn n_spins(&self) -> CliResult<usize> {
        self.n_spins.ok_or_else(|| missing("n_spins"))
    }

    pub fn beta_init(&self) -> CliResult<f64> {
        self.beta_init.ok_or_else(|| missing("beta_init"))
    }

    pub fn omega0_init(&self) -> CliResult<f64> {
        self.omega0_init.ok_or_else(|| missing("omega0_init"))
    }

    /// One-line echo of the physical settings, for CSV metadata.
    pub fn echo(&self) -> String {
        let opt = |x: Option<f64>| x.map_or_else(|| "-".to_string(), crate::format::number);
        let pairs: Vec<String> = self.pairs.iter().map(|p| p.to_string()).collect();
        let mut s = String::new();
        if let Some(n) = self.n_spins {
            s += &format!("n_spins={n} ");
        }
        s += &format!(
            "theta={} phi={} beta_init={} omega0_init={} omega0_final={} grid_points={} grid_spacing={} pairs={}",
            crate::format::number(self.theta),
            crate::format::number(self.phi),
            opt(self.beta_init),
            opt(self.omega0_init),
            crate::format::number(self.omega0_final),
            self.grid_points,
            self.grid_spacing,
            pairs.join(",")
        );
        s
    }
}

fn missing(key: &str) -> CliError {
    CliError::Config(format!("missing required setting `{key}`"))
}

/// Parses `m:n`.
pub fn parse_pair(s: &str) -> CliResult<SpinPair> {
    let bad = || CliError::Config(format!("invalid pair `{s}`, expected m:n"));
    let (m, n) = s.trim().split_once(':').ok_or_else(bad)?;
    let m = m.trim().parse().map_err(|_| bad())?;
    let n = n.trim().parse().map_err(|_| bad())?;
    SpinPair::new(m, n).map_err(|e| CliError::Config(e.to_string()))
}

/// Parses `m:n[,m:n...]`.
pub fn parse_pairs(s: &str) -> CliResult<Vec<SpinPair>> {
    s.split(',').map(parse_pair).collect()
}

/// Parses a list of chain lengths such as `4,5,8` or `4-10`.
pub fn parse_n_list(s: &str) -> CliResult<Vec<usize>> {
    let bad = |t: &str| CliError::Config(format!("invalid chain length `{t}` in `{s}`"));
    let mut out = Vec::new();
    for part in s.split(',') {
        let part = part.trim();
        match part.split_once('-') {
            Some((a, b)) => {
                let a: usize = a.trim().parse().map_err(|_| bad(part))?;
                let b: usize = b.trim().parse().map_err(|_| bad(part))?;
                if a > b {
                    return Err(bad(part));
                }
                out.extend(a..=b);
            }
            None => out.push(part.parse().map_err(|_| bad(part))?),
        }
    }
    Ok(out)
}

/// A `(omega0, beta)` point to classify against the phase boundary.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Probe {
    pub omega0: f64,
    pub beta: f64,
}

impl FromStr for Probe {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        let bad = || CliError::Config(format!("invalid probe `{s}`, expected omega0:beta"));
        let (w, b) = s.trim().split_once(':').ok_or_else(bad)?;
        Ok(Self {
            omega0: w.trim().parse().map_err(|_| bad())?,
            beta: b.trim().parse().map_err(|_| bad())?,
        })
    }
}
