use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use clap::Args;

/// Run parameters. Every field can come from the command line or from a
/// `key = value` config file; the command line wins.
#[derive(Debug, Clone, Default, Args)]
pub struct RawConfig {
    /// Flat `key = value` file with defaults for any of these options.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// weyl1d | weyl2d[A|B] | weyl3d[A|B]± | dirac[1d|2d|3d]
    #[arg(long, global = true)]
    pub model: Option<String>,
    #[arg(long, global = true)]
    pub mass: Option<f64>,
    #[arg(long, global = true)]
    pub theta: Option<f64>,
    /// Torus side lengths, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    pub shape: Option<Vec<usize>>,
    /// Packet centre wave-vector, comma separated.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub k0: Option<Vec<f64>>,
    /// Packet width in wave-vector space.
    #[arg(long, global = true)]
    pub width: Option<f64>,
    /// Dispersion branch of the packet, counted from the lowest.
    #[arg(long, global = true)]
    pub branch: Option<usize>,
    #[arg(long, global = true)]
    pub steps: Option<usize>,
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Relative scaling applied to the transition matrices.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub perturb: Option<f64>,
    /// Grid points per axis for dispersion sampling.
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    /// Random wave-vector samples for sampled checks.
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Track overlap and discrimination error against the continuum model.
    #[arg(long, global = true)]
    pub compare: Option<bool>,
    /// Mode counts N_k for the commutator scan.
    #[arg(long, global = true, value_delimiter = ',')]
    pub sizes: Option<Vec<usize>>,
    /// Excitation numbers M for the commutator scan.
    #[arg(long, global = true, value_delimiter = ',')]
    pub excitations: Option<Vec<usize>>,
    /// Total fermionic mode cap for Fock computations.
    #[arg(long, global = true)]
    pub cap: Option<usize>,
    /// Largest integer time in the rotation sweep.
    #[arg(long, global = true)]
    pub t_max: Option<u32>,
    /// Lattice step for `units`.
    #[arg(long, global = true)]
    pub a: Option<f64>,
    /// Time step for `units`.
    #[arg(long, global = true)]
    pub tau: Option<f64>,
    /// Mass unit for `units`.
    #[arg(long, global = true)]
    pub unit_mass: Option<f64>,
    /// Speed of light for `units`.
    #[arg(long, global = true)]
    pub c: Option<f64>,
    /// Reduced Planck constant for `units`.
    #[arg(long, global = true)]
    pub hbar: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub model: String,
    pub mass: f64,
    pub theta: f64,
    pub shape: Option<Vec<usize>>,
    pub k0: Option<Vec<f64>>,
    pub width: Option<f64>,
    pub branch: Option<usize>,
    pub steps: usize,
    pub tol: f64,
    pub seed: u64,
    pub out: PathBuf,
    pub perturb: f64,
    pub grid: Option<usize>,
    pub samples: usize,
    pub compare: bool,
    pub sizes: Vec<usize>,
    pub excitations: Vec<usize>,
    pub cap: usize,
    pub t_max: u32,
    pub a: Option<f64>,
    pub tau: Option<f64>,
    pub unit_mass: Option<f64>,
    pub c: Option<f64>,
    pub hbar: Option<f64>,
}

fn list<T: FromStr>(v: &str) -> Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    v.split(',')
        .map(|x| x.trim().parse::<T>().map_err(|e| anyhow!("`{x}`: {e}")))
        .collect()
}

fn one<T: FromStr>(v: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    v.trim().parse::<T>().map_err(|e| anyhow!("`{v}`: {e}"))
}

impl RawConfig {
    /// Parses a config file body. Blank lines and `#` comments are ignored;
    /// keys may use `-` or `_`.
    pub fn parse_file(text: &str) -> Result<Self> {
        let mut seen = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("line {}: expected `key = value`", lineno + 1))?;
            let key = key.trim().replace('-', "_");
            if seen.insert(key.clone(), value.trim().to_string()).is_some() {
                bail!("line {}: duplicate key `{key}`", lineno + 1);
            }
        }
        let mut c = RawConfig::default();
        for (key, v) in &seen {
            let v = v.as_str();
            let r: Result<()> = (|| {
                match key.as_str() {
                    "model" => c.model = Some(v.to_string()),
                    "mass" => c.mass = Some(one(v)?),
                    "theta" => c.theta = Some(one(v)?),
                    "shape" => c.shape = Some(list(v)?),
                    "k0" => c.k0 = Some(list(v)?),
                    "width" => c.width = Some(one(v)?),
                    "branch" => c.branch = Some(one(v)?),
                    "steps" => c.steps = Some(one(v)?),
                    "tol" => c.tol = Some(one(v)?),
                    "seed" => c.seed = Some(one(v)?),
                    "out" => c.out = Some(PathBuf::from(v)),
                    "perturb" => c.perturb = Some(one(v)?),
                    "grid" => c.grid = Some(one(v)?),
                    "samples" => c.samples = Some(one(v)?),
                    "compare" => c.compare = Some(one(v)?),
                    "sizes" => c.sizes = Some(list(v)?),
                    "excitations" => c.excitations = Some(list(v)?),
                    "cap" => c.cap = Some(one(v)?),
                    "t_max" => c.t_max = Some(one(v)?),
                    "a" => c.a = Some(one(v)?),
                    "tau" => c.tau = Some(one(v)?),
                    "unit_mass" => c.unit_mass = Some(one(v)?),
                    "c" => c.c = Some(one(v)?),
                    "hbar" => c.hbar = Some(one(v)?),
                    "config" => bail!("nested config files are not supported"),
                    _ => bail!("unknown key"),
                }
                Ok(())
            })();
            r.with_context(|| format!("config key `{key}`"))?;
        }
        Ok(c)
    }

    /// Fills unset fields from `base`.
    pub fn or(self, base: RawConfig) -> RawConfig {
        RawConfig {
            config: self.config,
            model: self.model.or(base.model),
            mass: self.mass.or(base.mass),
            theta: self.theta.or(base.theta),
            shape: self.shape.or(base.shape),
            k0: self.k0.or(base.k0),
            width: self.width.or(base.width),
            branch: self.branch.or(base.branch),
            steps: self.steps.or(base.steps),
            tol: self.tol.or(base.tol),
            seed: self.seed.or(base.seed),
            out: self.out.or(base.out),
            perturb: self.perturb.or(base.perturb),
            grid: self.grid.or(base.grid),
            samples: self.samples.or(base.samples),
            compare: self.compare.or(base.compare),
            sizes: self.sizes.or(base.sizes),
            excitations: self.excitations.or(base.excitations),
            cap: self.cap.or(base.cap),
            t_max: self.t_max.or(base.t_max),
            a: self.a.or(base.a),
            tau: self.tau.or(base.tau),
            unit_mass: self.unit_mass.or(base.unit_mass),
            c: self.c.or(base.c),
            hbar: self.hbar.or(base.hbar),
        }
    }

    /// Merges the config file (if any) under the command-line values and
    /// applies defaults.
    pub fn resolve(self) -> Result<RunConfig> {
        let merged = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("reading {}", path.display()))?;
                let file = RawConfig::parse_file(&text)
                    .with_context(|| format!("in {}", path.display()))?;
                self.or(file)
            }
            None => self,
        };
        let cfg = RunConfig {
            model: merged.model.unwrap_or_else(|| "weyl3d+".into()),
            mass: merged.mass.unwrap_or(0.0),
            theta: merged.theta.unwrap_or(0.0),
            shape: merged.shape,
            k0: merged.k0,
            width: merged.width,
            branch: merged.branch,
            steps: merged.steps.unwrap_or(40),
            tol: merged.tol.unwrap_or(1e-12),
            seed: merged.seed.unwrap_or(0),
            out: merged.out.unwrap_or_else(|| PathBuf::from("qca-out")),
            perturb: merged.perturb.unwrap_or(0.0),
            grid: merged.grid,
            samples: merged.samples.unwrap_or(100),
            compare: merged.compare.unwrap_or(false),
            sizes: merged.sizes.unwrap_or_else(|| vec![2, 4, 6]),
            excitations: merged.excitations.unwrap_or_else(|| vec![0, 1, 2]),
            cap: merged.cap.unwrap_or(qca_core::maxwell::DEFAULT_MODE_CAP),
            t_max: merged.t_max.unwrap_or(10),
            a: merged.a,
            tau: merged.tau,
            unit_mass: merged.unit_mass,
            c: merged.c,
            hbar: merged.hbar,
        };
        if !(cfg.tol > 0.0 && cfg.tol.is_finite()) {
            bail!("tol must be positive");
        }
        if !cfg.perturb.is_finite() {
            bail!("perturb must be finite");
        }
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_parsing() {
        let c = RawConfig::parse_file(
            "# comment\nmodel = weyl1d\nshape = 64\nk0 = -1.0\nt-max = 3 # trailing\n",
        )
        .unwrap();
        assert_eq!(c.model.as_deref(), Some("weyl1d"));
        assert_eq!(c.shape, Some(vec![64]));
        assert_eq!(c.k0, Some(vec![-1.0]));
        assert_eq!(c.t_max, Some(3));
        assert!(RawConfig::parse_file("bogus = 1").is_err());
        assert!(RawConfig::parse_file("steps = x").is_err());
        assert!(RawConfig::parse_file("steps = 1\nsteps = 2").is_err());
    }

    #[test]
    fn command_line_wins() {
        let cli = RawConfig {
            steps: Some(5),
            ..Default::default()
        };
        let file = RawConfig {
            steps: Some(9),
            seed: Some(3),
            ..Default::default()
        };
        let c = cli.or(file).resolve().unwrap();
        assert_eq!((c.steps, c.seed), (5, 3));
    }
}
