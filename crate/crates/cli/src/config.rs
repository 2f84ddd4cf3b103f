//! Flat `section.key = value` scenario documents.
//!
//! ```text
//! # comments run to the end of the line
//! production.kind = ces
//! production.alpha = 0.3
//! initial.c0 = shoot
//! sweep.population.r = 0.01, 0.02, 0.03
//! ```

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use ramsey_allee_core::{AlleeParams, Error as ModelError, ProductionSpec, RamseyParams};

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub key: String,
    /// 1-based line of the offending entry; `None` for a missing key.
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: {}: {}", self.key, self.message),
            None => write!(f, "{}: {}", self.key, self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialConsumption {
    Value(f64),
    Shoot,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Solver {
    pub t_end: f64,
    pub rtol: f64,
    pub atol: f64,
}

impl Default for Solver {
    fn default() -> Self {
        Solver {
            t_end: 2000.0,
            rtol: 1e-8,
            atol: 1e-10,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub csv: String,
    pub svg: Option<String>,
    pub stride: usize,
}

impl Default for Output {
    fn default() -> Self {
        Output {
            csv: "trajectory.csv".into(),
            svg: None,
            stride: 1,
        }
    }
}

/// One swept key and the values it takes, in document order.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepAxis {
    pub key: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub production: ProductionSpec,
    pub economy: RamseyParams,
    pub population: AlleeParams,
    pub k0: f64,
    pub c0: InitialConsumption,
    pub solver: Solver,
    pub output: Output,
    pub shooting_horizon: Option<f64>,
    pub sweep: Vec<SweepAxis>,
}

const NUMERIC_KEYS: &[&str] = &[
    "production.alpha",
    "production.tau",
    "economy.rho",
    "economy.delta",
    "economy.sigma",
    "population.r",
    "population.threshold",
    "population.capacity",
    "population.l0",
    "initial.k0",
    "initial.c0",
    "solver.t_end",
    "solver.rtol",
    "solver.atol",
    "shooting.horizon",
];

const OTHER_KEYS: &[&str] = &["production.kind", "output.csv", "output.svg", "output.stride"];

struct Entry {
    value: String,
    line: usize,
}

struct Document {
    entries: BTreeMap<String, Entry>,
    sweep: Vec<(String, Entry)>,
}

impl Document {
    fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut entries = BTreeMap::new();
        let mut sweep: Vec<(String, Entry)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                return Err(ConfigError {
                    key: content.to_string(),
                    line: Some(line),
                    message: "expected `key = value`".into(),
                });
            };
            let (key, value) = (key.trim().to_string(), value.trim().to_string());
            let err = |message: String| ConfigError {
                key: key.clone(),
                line: Some(line),
                message,
            };
            if value.is_empty() {
                return Err(err("empty value".into()));
            }
            if let Some(target) = key.strip_prefix("sweep.") {
                if !NUMERIC_KEYS.contains(&target) {
                    return Err(err(format!("`{target}` is not a numeric key that can be swept")));
                }
                if sweep.iter().any(|(k, _)| k == target) {
                    return Err(err("duplicate key".into()));
                }
                sweep.push((target.to_string(), Entry { value, line }));
                continue;
            }
            if !NUMERIC_KEYS.contains(&key.as_str()) && !OTHER_KEYS.contains(&key.as_str()) {
                return Err(err("unknown key".into()));
            }
            if entries.contains_key(&key) {
                return Err(err("duplicate key".into()));
            }
            entries.insert(key, Entry { value, line });
        }
        Ok(Document { entries, sweep })
    }

    fn line(&self, key: &str) -> Option<usize> {
        self.entries.get(key).map(|e| e.line)
    }

    fn missing(key: &str) -> ConfigError {
        ConfigError {
            key: key.into(),
            line: None,
            message: "missing required key".into(),
        }
    }

    fn number(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        self.entries
            .get(key)
            .map(|e| parse_number(key, &e.value, e.line))
            .transpose()
    }

    fn required(&self, key: &str) -> Result<f64, ConfigError> {
        self.number(key)?.ok_or_else(|| Self::missing(key))
    }

    fn reject(&self, key: &str, why: &str) -> Result<(), ConfigError> {
        match self.entries.get(key) {
            Some(e) => Err(ConfigError {
                key: key.into(),
                line: Some(e.line),
                message: why.into(),
            }),
            None => Ok(()),
        }
    }
}

fn parse_number(key: &str, value: &str, line: usize) -> Result<f64, ConfigError> {
    let x: f64 = value.parse().map_err(|_| ConfigError {
        key: key.into(),
        line: Some(line),
        message: format!("expected a number, found `{value}`"),
    })?;
    if !x.is_finite() {
        return Err(ConfigError {
            key: key.into(),
            line: Some(line),
            message: format!("expected a finite number, found `{value}`"),
        });
    }
    Ok(x)
}

fn parse_bool(value: &str) -> Option<bool> {
    match value {
        "true" => Some(true),
        "false" => Some(false),
        _ => None,
    }
}

/// Attaches the line of the offending key to a model validation error.
fn model_error(doc: &Document, section: &str, err: ModelError) -> ConfigError {
    let key = match &err {
        ModelError::InvalidParameter { name, .. } => (*name).to_string(),
        _ => section.to_string(),
    };
    let line = doc.line(&key).or_else(|| {
        doc.entries
            .iter()
            .filter(|(k, _)| k.starts_with(section))
            .map(|(_, e)| e.line)
            .min()
    });
    ConfigError {
        key,
        line,
        message: err.to_string(),
    }
}

pub fn parse_config(text: &str) -> Result<ScenarioConfig, ConfigError> {
    let doc = Document::parse(text)?;

    let kind = doc.entries.get("production.kind").ok_or_else(|| Document::missing("production.kind"))?;
    let production = match kind.value.as_str() {
        "ces" => ProductionSpec::Ces {
            alpha: doc.required("production.alpha")?,
            tau: doc.required("production.tau")?,
        },
        "cobb_douglas" => {
            doc.reject("production.tau", "only used by kind ces")?;
            ProductionSpec::CobbDouglas {
                alpha: doc.required("production.alpha")?,
            }
        }
        "log" | "cara" => {
            doc.reject("production.alpha", "only used by kinds ces and cobb_douglas")?;
            doc.reject("production.tau", "only used by kind ces")?;
            if kind.value == "log" {
                ProductionSpec::Log
            } else {
                ProductionSpec::Cara
            }
        }
        other => {
            return Err(ConfigError {
                key: "production.kind".into(),
                line: Some(kind.line),
                message: format!("expected one of ces, cobb_douglas, log, cara; found `{other}`"),
            })
        }
    };
    production.validate().map_err(|e| model_error(&doc, "production", e))?;

    let economy = RamseyParams {
        rho: doc.required("economy.rho")?,
        delta: doc.required("economy.delta")?,
        sigma: doc.required("economy.sigma")?,
    };
    economy.validate().map_err(|e| model_error(&doc, "economy", e))?;

    let population = AlleeParams {
        r: doc.required("population.r")?,
        threshold: doc.required("population.threshold")?,
        capacity: doc.required("population.capacity")?,
        l0: doc.required("population.l0")?,
    };
    population.validate().map_err(|e| model_error(&doc, "population", e))?;

    let k0 = doc.required("initial.k0")?;
    if !(k0 > 0.0) {
        return Err(ConfigError {
            key: "initial.k0".into(),
            line: doc.line("initial.k0"),
            message: "expected k0 > 0".into(),
        });
    }
    let c0_entry = doc.entries.get("initial.c0").ok_or_else(|| Document::missing("initial.c0"))?;
    let c0 = if c0_entry.value == "shoot" {
        InitialConsumption::Shoot
    } else {
        let c = parse_number("initial.c0", &c0_entry.value, c0_entry.line).map_err(|mut e| {
            e.message = format!("expected a number or `shoot`, found `{}`", c0_entry.value);
            e
        })?;
        if c < 0.0 {
            return Err(ConfigError {
                key: "initial.c0".into(),
                line: Some(c0_entry.line),
                message: "expected c0 >= 0".into(),
            });
        }
        InitialConsumption::Value(c)
    };

    let defaults = Solver::default();
    let solver = Solver {
        t_end: doc.number("solver.t_end")?.unwrap_or(defaults.t_end),
        rtol: doc.number("solver.rtol")?.unwrap_or(defaults.rtol),
        atol: doc.number("solver.atol")?.unwrap_or(defaults.atol),
    };
    for (key, value, ok) in [
        ("solver.t_end", solver.t_end, solver.t_end >= 0.0),
        ("solver.rtol", solver.rtol, solver.rtol > 0.0),
        ("solver.atol", solver.atol, solver.atol > 0.0),
    ] {
        if !ok {
            return Err(ConfigError {
                key: key.into(),
                line: doc.line(key),
                message: format!("out of range: {value}"),
            });
        }
    }

    let shooting_horizon = doc.number("shooting.horizon")?;
    if let Some(h) = shooting_horizon {
        if !(h > 0.0) {
            return Err(ConfigError {
                key: "shooting.horizon".into(),
                line: doc.line("shooting.horizon"),
                message: "expected a positive horizon".into(),
            });
        }
    }

    let mut output = Output::default();
    if let Some(e) = doc.entries.get("output.csv") {
        output.csv = e.value.clone();
    }
    if let Some(e) = doc.entries.get("output.svg") {
        output.svg = match parse_bool(&e.value) {
            Some(true) => Some(default_svg_name(&output.csv)),
            Some(false) => None,
            None => Some(e.value.clone()),
        };
    }
    if let Some(e) = doc.entries.get("output.stride") {
        output.stride = match e.value.parse::<usize>() {
            Ok(s) if s > 0 => s,
            _ => {
                return Err(ConfigError {
                    key: "output.stride".into(),
                    line: Some(e.line),
                    message: format!("expected a positive integer, found `{}`", e.value),
                })
            }
        };
    }

    let mut sweep = Vec::new();
    for (key, entry) in &doc.sweep {
        let values = entry
            .value
            .split(',')
            .map(|v| parse_number(&format!("sweep.{key}"), v.trim(), entry.line))
            .collect::<Result<Vec<_>, _>>()?;
        sweep.push(SweepAxis {
            key: key.clone(),
            values,
        });
    }

    let config = ScenarioConfig {
        production,
        economy,
        population,
        k0,
        c0,
        solver,
        output,
        shooting_horizon,
        sweep,
    };
    // Every grid point must itself be a valid scenario.
    for axis in &config.sweep {
        let line = doc.sweep.iter().find(|(k, _)| *k == axis.key).map(|(_, e)| e.line);
        for &v in &axis.values {
            config.with_value(&axis.key, v).map_err(|mut e| {
                e.key = format!("sweep.{}", axis.key);
                e.line = line;
                e
            })?;
        }
    }
    Ok(config)
}

pub fn default_svg_name(csv: &str) -> String {
    match csv.strip_suffix(".csv") {
        Some(stem) => format!("{stem}.svg"),
        None => format!("{csv}.svg"),
    }
}

impl ScenarioConfig {
    /// Copy with one numeric key replaced, revalidated.
    pub fn with_value(&self, key: &str, value: f64) -> Result<ScenarioConfig, ConfigError> {
        let mut c = self.clone();
        let bad_key = || ConfigError {
            key: key.into(),
            line: None,
            message: format!("not applicable to production kind {}", self.production.kind_name()),
        };
        match key {
            "production.alpha" => match &mut c.production {
                ProductionSpec::Ces { alpha, .. } | ProductionSpec::CobbDouglas { alpha } => *alpha = value,
                _ => return Err(bad_key()),
            },
            "production.tau" => match &mut c.production {
                ProductionSpec::Ces { tau, .. } => *tau = value,
                _ => return Err(bad_key()),
            },
            "economy.rho" => c.economy.rho = value,
            "economy.delta" => c.economy.delta = value,
            "economy.sigma" => c.economy.sigma = value,
            "population.r" => c.population.r = value,
            "population.threshold" => c.population.threshold = value,
            "population.capacity" => c.population.capacity = value,
            "population.l0" => c.population.l0 = value,
            "initial.k0" => c.k0 = value,
            "initial.c0" => c.c0 = InitialConsumption::Value(value),
            "solver.t_end" => c.solver.t_end = value,
            "solver.rtol" => c.solver.rtol = value,
            "solver.atol" => c.solver.atol = value,
            "shooting.horizon" => c.shooting_horizon = Some(value),
            _ => {
                return Err(ConfigError {
                    key: key.into(),
                    line: None,
                    message: "unknown numeric key".into(),
                })
            }
        }
        c.sweep.clear();
        parse_config(&emit_config(&c)).map(|mut parsed| {
            parsed.sweep = self.sweep.clone();
            parsed
        })
    }
}

/// Canonical document for `config`; [`parse_config`] reads it back
/// unchanged.
pub fn emit_config(config: &ScenarioConfig) -> String {
    let mut out = String::new();
    let mut put = |key: &str, value: String| {
        let _ = writeln!(out, "{key} = {value}");
    };
    put("production.kind", config.production.kind_name().into());
    if let Some(alpha) = config.production.alpha() {
        put("production.alpha", format!("{alpha:?}"));
    }
    if let Some(tau) = config.production.tau() {
        put("production.tau", format!("{tau:?}"));
    }
    put("economy.rho", format!("{:?}", config.economy.rho));
    put("economy.delta", format!("{:?}", config.economy.delta));
    put("economy.sigma", format!("{:?}", config.economy.sigma));
    put("population.r", format!("{:?}", config.population.r));
    put("population.threshold", format!("{:?}", config.population.threshold));
    put("population.capacity", format!("{:?}", config.population.capacity));
    put("population.l0", format!("{:?}", config.population.l0));
    put("initial.k0", format!("{:?}", config.k0));
    put(
        "initial.c0",
        match config.c0 {
            InitialConsumption::Shoot => "shoot".into(),
            InitialConsumption::Value(c) => format!("{c:?}"),
        },
    );
    put("solver.t_end", format!("{:?}", config.solver.t_end));
    put("solver.rtol", format!("{:?}", config.solver.rtol));
    put("solver.atol", format!("{:?}", config.solver.atol));
    if let Some(h) = config.shooting_horizon {
        put("shooting.horizon", format!("{h:?}"));
    }
    put("output.csv", config.output.csv.clone());
    match &config.output.svg {
        Some(svg) => put("output.svg", svg.clone()),
        None => put("output.svg", "false".into()),
    }
    put("output.stride", config.output.stride.to_string());
    for axis in &config.sweep {
        let values: Vec<String> = axis.values.iter().map(|v| format!("{v:?}")).collect();
        put(&format!("sweep.{}", axis.key), values.join(", "));
    }
    out
}
