use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pspin_core::{PotentialSpec, Resolution};

use crate::error::{CliError, Result};

/// Environment variable holding the worker-pool size.
pub const THREADS_ENV: &str = "PSPIN_THREADS";

pub const MIN_GRID: usize = 8;

#[derive(Debug, Parser)]
#[command(name = "pspin", version, about = "QA vs SA time exponents for the mean-field p-spin model")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Opts,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Effective potential U(k, q) at s = 0, s_QPT and 1.
    Potential,
    /// Optimal escape action against inverse temperature at fixed s.
    ActionVsBeta,
    /// QA and SA exponents over a (q_min, q_max) grid.
    Compare,
    /// Finite-N checks: splitting scaling, thermal occupations, overlaps.
    Oracle,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Potential => "potential",
            Command::ActionVsBeta => "action-vs-beta",
            Command::Compare => "compare",
            Command::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        <Format as ValueEnum>::from_str(s, true)
    }
}

impl Format {
    pub fn name(&self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Raw options. Every key can also be set in the config file as `key = value`.
#[derive(Debug, Clone, Default, Args)]
pub struct Opts {
    /// Flat key=value file; command-line flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub spec_qmin: Option<f64>,
    #[arg(long, global = true)]
    pub spec_qmax: Option<f64>,
    #[arg(long, global = true)]
    pub spec_c: Option<f64>,
    /// Annealing parameter for action-vs-beta and the thermal oracle.
    #[arg(long, global = true)]
    pub s: Option<f64>,
    /// Upper end of the β grid.
    #[arg(long, global = true)]
    pub beta: Option<f64>,
    #[arg(long, global = true)]
    pub grid_s: Option<usize>,
    #[arg(long, global = true)]
    pub grid_beta: Option<usize>,
    #[arg(long, global = true)]
    pub grid_k: Option<usize>,
    #[arg(long, global = true)]
    pub grid_q: Option<usize>,
    #[arg(long, global = true)]
    pub grid_e: Option<usize>,
    #[arg(long, global = true)]
    pub grid_fe: Option<usize>,
    #[arg(long, global = true)]
    pub grid_qmin: Option<usize>,
    #[arg(long, global = true)]
    pub grid_qmax: Option<usize>,
    /// Comma-separated system sizes for the splitting fit.
    #[arg(long, global = true)]
    pub n_list: Option<String>,
    #[arg(long, global = true)]
    pub n_thermal: Option<usize>,
    #[arg(long, global = true)]
    pub scaling_qmin: Option<f64>,
    #[arg(long, global = true)]
    pub scaling_qmax: Option<f64>,
    /// Output file; standard output when absent or "-".
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub format: Option<Format>,
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| CliError::Config(format!("cannot parse {key} = {value:?}")))
}

impl Opts {
    fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "spec-qmin" => self.spec_qmin = Some(parse(key, value)?),
            "spec-qmax" => self.spec_qmax = Some(parse(key, value)?),
            "spec-c" => self.spec_c = Some(parse(key, value)?),
            "s" => self.s = Some(parse(key, value)?),
            "beta" => self.beta = Some(parse(key, value)?),
            "grid-s" => self.grid_s = Some(parse(key, value)?),
            "grid-beta" => self.grid_beta = Some(parse(key, value)?),
            "grid-k" => self.grid_k = Some(parse(key, value)?),
            "grid-q" => self.grid_q = Some(parse(key, value)?),
            "grid-e" => self.grid_e = Some(parse(key, value)?),
            "grid-fe" => self.grid_fe = Some(parse(key, value)?),
            "grid-qmin" => self.grid_qmin = Some(parse(key, value)?),
            "grid-qmax" => self.grid_qmax = Some(parse(key, value)?),
            "n-list" => self.n_list = Some(value.trim().to_string()),
            "n-thermal" => self.n_thermal = Some(parse(key, value)?),
            "scaling-qmin" => self.scaling_qmin = Some(parse(key, value)?),
            "scaling-qmax" => self.scaling_qmax = Some(parse(key, value)?),
            "out" => self.out = Some(PathBuf::from(value.trim())),
            "format" => self.format = Some(parse(key, value)?),
            _ => return Err(CliError::Config(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    /// Reads a flat `key = value` file; `#` starts a comment.
    pub fn from_file(path: &Path) -> Result<Opts> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut opts = Opts::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("{}:{}: expected key = value", path.display(), i + 1)))?;
            opts.set(key.trim(), value)?;
        }
        Ok(opts)
    }

    /// Fields set here win over `base`.
    pub fn over(self, base: Opts) -> Opts {
        Opts {
            config: self.config.or(base.config),
            spec_qmin: self.spec_qmin.or(base.spec_qmin),
            spec_qmax: self.spec_qmax.or(base.spec_qmax),
            spec_c: self.spec_c.or(base.spec_c),
            s: self.s.or(base.s),
            beta: self.beta.or(base.beta),
            grid_s: self.grid_s.or(base.grid_s),
            grid_beta: self.grid_beta.or(base.grid_beta),
            grid_k: self.grid_k.or(base.grid_k),
            grid_q: self.grid_q.or(base.grid_q),
            grid_e: self.grid_e.or(base.grid_e),
            grid_fe: self.grid_fe.or(base.grid_fe),
            grid_qmin: self.grid_qmin.or(base.grid_qmin),
            grid_qmax: self.grid_qmax.or(base.grid_qmax),
            n_list: self.n_list.or(base.n_list),
            n_thermal: self.n_thermal.or(base.n_thermal),
            scaling_qmin: self.scaling_qmin.or(base.scaling_qmin),
            scaling_qmax: self.scaling_qmax.or(base.scaling_qmax),
            out: self.out.or(base.out),
            format: self.format.or(base.format),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicParams {
    pub q_min: f64,
    pub q_max: f64,
    pub c: f64,
}

impl CubicParams {
    pub fn spec(&self) -> Result<PotentialSpec> {
        Ok(PotentialSpec::cubic_with_strength(self.q_min, self.q_max, self.c)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grids {
    pub s: usize,
    pub beta: usize,
    pub k: usize,
    pub q: usize,
    pub e: usize,
    pub fe: usize,
    pub q_min: usize,
    pub q_max: usize,
}

impl Grids {
    pub fn resolution(&self) -> Resolution {
        Resolution { k_points: self.k, e_points: self.e, fe_k_points: self.fe, s_points: self.s }
    }
}

/// Fully resolved run parameters; identical configs give byte-identical output.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub cubic: CubicParams,
    pub s: f64,
    pub beta_max: f64,
    pub grids: Grids,
    pub n_list: Vec<usize>,
    pub n_thermal: usize,
    pub scaling: CubicParams,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    pub fn resolve(command: Command, cli: Opts) -> Result<RunConfig> {
        let file = match &cli.config {
            Some(path) => Opts::from_file(path)?,
            None => Opts::default(),
        };
        let o = cli.over(file);
        // Sweeps are costly per cell, so compare defaults to coarser inner grids.
        let coarse = command == Command::Compare;
        let full = Resolution::default();
        let grids = Grids {
            s: o.grid_s.unwrap_or(if coarse { 12 } else { full.s_points }),
            beta: o.grid_beta.unwrap_or(64),
            k: o.grid_k.unwrap_or(if coarse { 48 } else { full.k_points }),
            q: o.grid_q.unwrap_or(201),
            e: o.grid_e.unwrap_or(if coarse { 10 } else { full.e_points }),
            fe: o.grid_fe.unwrap_or(if coarse { 48 } else { full.fe_k_points }),
            q_min: o.grid_qmin.unwrap_or(64),
            q_max: o.grid_qmax.unwrap_or(64),
        };
        for (name, v) in [
            ("grid-s", grids.s),
            ("grid-beta", grids.beta),
            ("grid-k", grids.k),
            ("grid-q", grids.q),
            ("grid-e", grids.e),
            ("grid-fe", grids.fe),
            ("grid-qmin", grids.q_min),
            ("grid-qmax", grids.q_max),
        ] {
            if v < MIN_GRID {
                return Err(CliError::Config(format!("{name} = {v} is below the minimum {MIN_GRID}")));
            }
        }
        let n_list = match &o.n_list {
            Some(text) => text
                .split(',')
                .map(|t| parse::<usize>("n-list", t))
                .collect::<Result<Vec<_>>>()?,
            None => (100..=400).step_by(50).collect(),
        };
        let format = o
            .format
            .ok_or_else(|| CliError::Config("output format must be given with --format csv|json".into()))?;
        let beta_max = o.beta.unwrap_or(40.0);
        if !(beta_max > 0.0 && beta_max.is_finite()) {
            return Err(CliError::Config(format!("beta = {beta_max} must be positive and finite")));
        }
        let out = o.out.filter(|p| p.as_os_str() != "-");
        Ok(RunConfig {
            command,
            cubic: CubicParams {
                q_min: o.spec_qmin.unwrap_or(0.0),
                q_max: o.spec_qmax.unwrap_or(0.533),
                c: o.spec_c.unwrap_or(1.0),
            },
            s: o.s.unwrap_or(0.85),
            beta_max,
            grids,
            n_list,
            n_thermal: o.n_thermal.unwrap_or(400),
            scaling: CubicParams {
                q_min: o.scaling_qmin.unwrap_or(0.0),
                q_max: o.scaling_qmax.unwrap_or(0.2),
                c: o.spec_c.unwrap_or(1.0),
            },
            out,
            format,
        })
    }

    /// Every resolved setting, in a fixed order, for the output header.
    pub fn echo(&self) -> Vec<(String, String)> {
        let g = &self.grids;
        let list = self.n_list.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(",");
        [
            ("command", self.command.name().to_string()),
            ("spec-qmin", self.cubic.q_min.to_string()),
            ("spec-qmax", self.cubic.q_max.to_string()),
            ("spec-c", self.cubic.c.to_string()),
            ("s", self.s.to_string()),
            ("beta", self.beta_max.to_string()),
            ("grid-s", g.s.to_string()),
            ("grid-beta", g.beta.to_string()),
            ("grid-k", g.k.to_string()),
            ("grid-q", g.q.to_string()),
            ("grid-e", g.e.to_string()),
            ("grid-fe", g.fe.to_string()),
            ("grid-qmin", g.q_min.to_string()),
            ("grid-qmax", g.q_max.to_string()),
            ("n-list", list),
            ("n-thermal", self.n_thermal.to_string()),
            ("scaling-qmin", self.scaling.q_min.to_string()),
            ("scaling-qmax", self.scaling.q_max.to_string()),
            ("format", self.format.name().to_string()),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect()
    }
}
