//! Flag and config-file parsing, and validation into a [`RunConfig`].

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use chkp_core::profile::ProfileOptions;
use chkp_core::symbol::default_xi_max;
use chkp_core::WaveParams;
use clap::{Args, ValueEnum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Profile,
    Functionals,
    Symbol,
    Figure1,
    Puiseux,
    Eigs,
    Track,
    Sweep,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Profile => "profile",
            Command::Functionals => "functionals",
            Command::Symbol => "symbol",
            Command::Figure1 => "figure1",
            Command::Puiseux => "puiseux",
            Command::Eigs => "eigs",
            Command::Track => "track",
            Command::Sweep => "sweep",
        }
    }

    fn needs_weight(self) -> bool {
        matches!(
            self,
            Command::Symbol | Command::Figure1 | Command::Eigs | Command::Track
        )
    }

    fn needs_eta(self) -> bool {
        matches!(
            self,
            Command::Symbol | Command::Figure1 | Command::Eigs | Command::Track
        )
    }

    fn uses_profile(self) -> bool {
        matches!(
            self,
            Command::Profile | Command::Functionals | Command::Eigs | Command::Track
        )
    }

    fn uses_modes(self) -> bool {
        matches!(self, Command::Eigs | Command::Track)
    }

    fn formats(self) -> &'static [Format] {
        match self {
            Command::Figure1 => &[Format::Svg, Format::Csv, Format::Json],
            Command::Sweep => &[Format::Csv],
            _ => &[Format::Csv, Format::Json],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Svg => "svg",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s {
            "csv" => Some(Format::Csv),
            "json" => Some(Format::Json),
            "svg" => Some(Format::Svg),
            _ => None,
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.extension())
    }
}

/// Options that may also come from a config file. Values stay textual until
/// validation.
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// Background state k > 0.
    #[arg(long)]
    pub k: Option<String>,
    /// Wave speed c > 3k, or a range start:stop:count when sweeping.
    #[arg(long)]
    pub c: Option<String>,
    /// Exponential weight ν in (0, ν₀).
    #[arg(long, conflicts_with = "nu_frac")]
    pub nu: Option<String>,
    /// Weight as a fraction of ν₀.
    #[arg(long = "nu-frac")]
    pub nu_frac: Option<String>,
    /// Transverse wavenumber η.
    #[arg(long)]
    pub eta: Option<String>,
    /// Half-width of the profile grid.
    #[arg(long = "x-max")]
    pub x_max: Option<String>,
    /// Number of profile grid points.
    #[arg(long = "n-x")]
    pub n_x: Option<String>,
    /// Number of Fourier modes in the collocation.
    #[arg(long = "n-modes")]
    pub n_modes: Option<String>,
    /// Period of the collocation domain (default 2·x_max).
    #[arg(long = "domain-length")]
    pub domain_length: Option<String>,
    /// Half-width of the ξ window.
    #[arg(long = "xi-max")]
    pub xi_max: Option<String>,
    /// Number of ξ samples.
    #[arg(long = "n-xi")]
    pub n_xi: Option<String>,
    /// Output format: csv, json or svg.
    #[arg(long)]
    pub format: Option<String>,
    /// Output file (default `<command>.<format>`).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads for sweeps.
    #[arg(long, env = "CHKP_JOBS")]
    pub jobs: Option<String>,
}

const KEYS: [&str; 14] = [
    "k",
    "c",
    "nu",
    "nu-frac",
    "eta",
    "x-max",
    "n-x",
    "n-modes",
    "domain-length",
    "xi-max",
    "n-xi",
    "format",
    "out",
    "jobs",
];

impl Flags {
    fn slot(&mut self, key: &str) -> Option<&mut Option<String>> {
        Some(match key {
            "k" => &mut self.k,
            "c" => &mut self.c,
            "nu" => &mut self.nu,
            "nu-frac" => &mut self.nu_frac,
            "eta" => &mut self.eta,
            "x-max" => &mut self.x_max,
            "n-x" => &mut self.n_x,
            "n-modes" => &mut self.n_modes,
            "domain-length" => &mut self.domain_length,
            "xi-max" => &mut self.xi_max,
            "n-xi" => &mut self.n_xi,
            "format" => &mut self.format,
            "jobs" => &mut self.jobs,
            _ => return None,
        })
    }

    /// Fills unset flags from `key = value` lines. Keys are the flag names
    /// without the leading `--`; `_` and `-` are interchangeable.
    pub fn merge_file(&mut self, path: &Path, errors: &mut Vec<String>) {
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => {
                errors.push(format!("cannot read config {}: {e}", path.display()));
                return;
            }
        };
        let mut seen = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                errors.push(format!("config line {}: expected key = value", lineno + 1));
                continue;
            };
            let key = key.trim().replace('_', "-");
            let value = value.trim().to_owned();
            if seen.insert(key.clone(), ()).is_some() {
                errors.push(format!("config line {}: duplicate key {key}", lineno + 1));
                continue;
            }
            if key == "out" {
                self.out.get_or_insert_with(|| PathBuf::from(&value));
                continue;
            }
            match self.slot(&key) {
                Some(slot) => {
                    slot.get_or_insert(value);
                }
                None => errors.push(format!(
                    "config line {}: unknown key {key} (expected one of {})",
                    lineno + 1,
                    KEYS.join(", ")
                )),
            }
        }
    }
}

/// A scalar or an inclusive `start:stop:count` grid.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Single(f64),
    Range(Vec<f64>),
}

impl Value {
    pub fn points(&self) -> Vec<f64> {
        match self {
            Value::Single(v) => vec![*v],
            Value::Range(v) => v.clone(),
        }
    }

    fn is_range(&self) -> bool {
        matches!(self, Value::Range(_))
    }
}

fn parse_value(name: &str, s: &str, errors: &mut Vec<String>) -> Option<Value> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [v] => parse_f64(name, v, errors).map(Value::Single),
        [a, b, n] => {
            let start = parse_f64(name, a, errors)?;
            let stop = parse_f64(name, b, errors)?;
            let count: usize = match n.trim().parse() {
                Ok(n) => n,
                Err(_) => {
                    errors.push(format!(
                        "{name}: range count {n:?} is not a non-negative integer"
                    ));
                    return None;
                }
            };
            if count == 0 {
                errors.push(format!("{name}: range {s} is empty"));
                return None;
            }
            let step = if count > 1 {
                (stop - start) / (count - 1) as f64
            } else {
                0.0
            };
            Some(Value::Range(
                (0..count)
                    .map(|i| {
                        if i + 1 == count && count > 1 {
                            stop
                        } else {
                            start + i as f64 * step
                        }
                    })
                    .collect(),
            ))
        }
        _ => {
            errors.push(format!(
                "{name}: expected a number or start:stop:count, got {s:?}"
            ));
            None
        }
    }
}

fn parse_f64(name: &str, s: &str, errors: &mut Vec<String>) -> Option<f64> {
    match s.trim().parse::<f64>() {
        Ok(v) if v.is_finite() => Some(v),
        _ => {
            errors.push(format!("{name}: {s:?} is not a finite number"));
            None
        }
    }
}

fn parse_usize(name: &str, s: &str, errors: &mut Vec<String>) -> Option<usize> {
    match s.trim().parse::<usize>() {
        Ok(v) => Some(v),
        Err(_) => {
            errors.push(format!("{name}: {s:?} is not a non-negative integer"));
            None
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Weight {
    Absolute,
    Fraction,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Numerics {
    pub x_max: Option<f64>,
    pub n_x: usize,
    pub n_modes: usize,
    pub domain_length: Option<f64>,
    pub xi_max: Option<f64>,
    pub n_xi: usize,
}

impl Numerics {
    pub fn profile_options(&self) -> ProfileOptions {
        ProfileOptions {
            x_max: self.x_max,
            n_x: self.n_x,
            ..ProfileOptions::default()
        }
    }

    pub fn xi_max_for(&self, params: &WaveParams) -> f64 {
        self.xi_max.unwrap_or_else(|| default_xi_max(params))
    }
}

/// One fully validated grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub params: WaveParams,
    pub nu: f64,
    pub eta: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    /// The command evaluated at each point; differs from `command` for sweeps.
    pub target: Command,
    pub k: f64,
    pub c: Value,
    pub nu: Option<(Weight, Value)>,
    pub eta: Value,
    pub numerics: Numerics,
    pub format: Format,
    pub out: PathBuf,
    pub jobs: usize,
}

impl RunConfig {
    /// Grid points in row-major order `c`, then `ν`, then `η`. At most one of
    /// them has more than one value.
    pub fn points(&self) -> Vec<Point> {
        let mut out = Vec::new();
        for c in self.c.points() {
            let params = WaveParams::new(self.k, c).expect("validated");
            let nus = match &self.nu {
                None => vec![0.0],
                Some((Weight::Absolute, v)) => v.points(),
                Some((Weight::Fraction, v)) => {
                    v.points().iter().map(|f| f * params.nu0()).collect()
                }
            };
            for &nu in &nus {
                for eta in self.eta.points() {
                    out.push(Point { params, nu, eta });
                }
            }
        }
        out
    }

    pub fn domain_length_for(&self, params: &WaveParams) -> f64 {
        self.numerics
            .domain_length
            .unwrap_or_else(|| 2.0 * self.numerics.profile_options().x_max_for(params))
    }
}

/// Validates every field against the owning module's preconditions and
/// collects all problems into one list.
pub fn validate(
    command: Command,
    target: Option<Command>,
    flags: &Flags,
) -> Result<RunConfig, Vec<String>> {
    let mut errors = Vec::new();
    let mut flags = flags.clone();

    let target = match (command, target) {
        (Command::Sweep, Some(Command::Sweep)) => {
            errors.push("sweep: the swept command cannot itself be sweep".into());
            Command::Puiseux
        }
        (Command::Sweep, Some(t)) => t,
        (Command::Sweep, None) => {
            errors.push("sweep: name the command to sweep, e.g. `sweep puiseux`".into());
            Command::Puiseux
        }
        (c, Some(t)) => {
            errors.push(format!("{}: unexpected argument {}", c.name(), t.name()));
            c
        }
        (c, None) => c,
    };

    let jobs = match flags.jobs.take() {
        Some(s) => parse_usize("jobs", &s, &mut errors).filter(|&j| {
            if j == 0 {
                errors.push("jobs: must be at least 1".into());
            }
            j > 0
        }),
        None => None,
    }
    .unwrap_or_else(|| {
        std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)
    });

    let k = match &flags.k {
        Some(s) => parse_f64("k", s, &mut errors),
        None => {
            errors.push("k: required".into());
            None
        }
    };
    let c = match &flags.c {
        Some(s) => parse_value("c", s, &mut errors),
        None => {
            errors.push("c: required".into());
            None
        }
    };
    let nu = match (&flags.nu, &flags.nu_frac) {
        (Some(s), None) => parse_value("nu", s, &mut errors).map(|v| (Weight::Absolute, v)),
        (None, Some(s)) => parse_value("nu-frac", s, &mut errors).map(|v| (Weight::Fraction, v)),
        (Some(_), Some(_)) => {
            errors.push("nu and nu-frac are mutually exclusive".into());
            None
        }
        (None, None) => {
            if target.needs_weight() {
                errors.push(format!("{}: nu or nu-frac is required", target.name()));
            }
            None
        }
    };
    let eta = match &flags.eta {
        Some(s) => parse_value("eta", s, &mut errors),
        None if target.needs_eta() => {
            errors.push(format!("{}: eta is required", target.name()));
            None
        }
        None => Some(Value::Single(0.0)),
    };

    let opt_f64 = |name: &str, s: &Option<String>, errors: &mut Vec<String>| {
        s.as_deref().and_then(|s| parse_f64(name, s, errors))
    };
    let opt_usize = |name: &str, s: &Option<String>, errors: &mut Vec<String>| {
        s.as_deref().and_then(|s| parse_usize(name, s, errors))
    };
    let defaults = ProfileOptions::default();
    let numerics = Numerics {
        x_max: opt_f64("x-max", &flags.x_max, &mut errors),
        n_x: opt_usize("n-x", &flags.n_x, &mut errors).unwrap_or(defaults.n_x),
        n_modes: opt_usize("n-modes", &flags.n_modes, &mut errors).unwrap_or(512),
        domain_length: opt_f64("domain-length", &flags.domain_length, &mut errors),
        xi_max: opt_f64("xi-max", &flags.xi_max, &mut errors),
        n_xi: opt_usize("n-xi", &flags.n_xi, &mut errors).unwrap_or(4001),
    };
    if let Some(x) = numerics.x_max.filter(|&x| x <= 0.0) {
        errors.push(format!("x-max: must be positive, got {x}"));
    }
    if target.uses_profile() && numerics.n_x < 256 {
        errors.push(format!("n-x: must be at least 256, got {}", numerics.n_x));
    }
    if target.uses_modes() && (numerics.n_modes < 4 || !numerics.n_modes.is_multiple_of(2)) {
        errors.push(format!(
            "n-modes: must be even and at least 4, got {}",
            numerics.n_modes
        ));
    }
    if let Some(x) = numerics.xi_max.filter(|&x| x <= 0.0) {
        errors.push(format!("xi-max: must be positive, got {x}"));
    }
    if target == Command::Symbol && numerics.n_xi < 1024 {
        errors.push(format!(
            "n-xi: must be at least 1024, got {}",
            numerics.n_xi
        ));
    }
    if target == Command::Figure1 && numerics.n_xi < 2 {
        errors.push(format!("n-xi: must be at least 2, got {}", numerics.n_xi));
    }

    let format = match &flags.format {
        Some(s) => Format::parse(s).or_else(|| {
            errors.push(format!("format: unknown format {s:?}"));
            None
        }),
        None => Some(match command {
            Command::Figure1 => Format::Svg,
            Command::Puiseux | Command::Eigs => Format::Json,
            _ => Format::Csv,
        }),
    };
    if let Some(f) = format {
        if !command.formats().contains(&f) {
            errors.push(format!("format: {} does not support {f}", command.name()));
        }
    }

    let ranges = [c.as_ref(), nu.as_ref().map(|(_, v)| v), eta.as_ref()]
        .iter()
        .filter(|v| v.is_some_and(Value::is_range))
        .count();
    if ranges > 1 {
        errors.push("at most one of c, nu, eta may be a range".into());
    }
    if ranges > 0 && command != Command::Sweep {
        errors.push(format!(
            "{}: ranges are only accepted by sweep",
            command.name()
        ));
    }

    if let Some(k) = k.filter(|&k| k <= 0.0) {
        errors.push(format!("k: must be positive, got {k}"));
    }
    if let (Some(k), Some(c)) = (k, c.as_ref()) {
        for cv in c.points() {
            let Ok(params) = WaveParams::new(k, cv) else {
                if k > 0.0 {
                    errors.push(format!(
                        "c: no solitary wave at c = {cv}, requires c > 3k = {}",
                        3.0 * k
                    ));
                }
                continue;
            };
            check_point(
                target,
                &params,
                nu.as_ref(),
                eta.as_ref(),
                &numerics,
                &mut errors,
            );
        }
    }

    let format = format.unwrap_or(Format::Csv);
    let out = flags
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("{}.{}", target.name(), format.extension())));

    if !errors.is_empty() {
        errors.dedup();
        return Err(errors);
    }
    Ok(RunConfig {
        command,
        target,
        k: k.expect("validated"),
        c: c.expect("validated"),
        nu,
        eta: eta.expect("validated"),
        numerics,
        format,
        out,
        jobs,
    })
}

fn check_point(
    target: Command,
    params: &WaveParams,
    nu: Option<&(Weight, Value)>,
    eta: Option<&Value>,
    numerics: &Numerics,
    errors: &mut Vec<String>,
) {
    let nu0 = params.nu0();
    let nus: Vec<f64> = match nu {
        Some((Weight::Absolute, v)) => v.points(),
        Some((Weight::Fraction, v)) => v.points().iter().map(|f| f * nu0).collect(),
        None => Vec::new(),
    };
    let etas = eta.map(Value::points).unwrap_or_default();
    if target.needs_weight() {
        for &n in &nus {
            let closed_below = matches!(target, Command::Eigs | Command::Figure1);
            let lower_ok = if closed_below { n >= 0.0 } else { n > 0.0 };
            if !(lower_ok && n < nu0) {
                errors.push(format!(
                    "nu: {n} is outside the admissible range {}0, {nu0}) at c = {}",
                    if closed_below { "[" } else { "(" },
                    params.c()
                ));
            }
            if target == Command::Eigs && n == 0.0 && etas.iter().any(|&e| e != 0.0) {
                errors.push("nu = 0 requires eta = 0 (the zero Fourier mode is singular)".into());
            }
        }
    }
    if target.uses_modes() {
        let x_max = numerics.profile_options().x_max_for(params);
        if let Some(l) = numerics.domain_length.filter(|&l| l < 2.0 * x_max) {
            errors.push(format!(
                "domain-length: {l} is below 2·x_max = {} at c = {}",
                2.0 * x_max,
                params.c()
            ));
        }
    }
    if target == Command::Track && etas.iter().any(|&e| e < 0.0) {
        errors.push("eta: track expects non-negative values".into());
    }
}
