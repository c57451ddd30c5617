//! Config-file loading and value resolution.
//!
//! Precedence: built-in defaults < SUPERLAB_QUAD_ORDER (quadrature density
//! only) < config file < command-line flags. The config file is flat
//! `key = value` lines; `#` starts a comment; unknown keys are usage errors.

use std::collections::BTreeMap;
use std::path::Path;

use crate::{AppError, CommonArgs, OutputFormat};

const ALLOWED_KEYS: &[&str] = &[
    "a", "b", "c", "format", "g", "g-values", "grid", "ma2", "n", "n-max", "n-values", "out",
    "precision", "quad-order", "scale", "scaling", "t", "t-grid", "theta-grid", "tol", "window",
    "x", "basis",
];

/// Resolved-value context: the parsed config file plus a record of every
/// final value, written to the sidecar so runs are reproducible.
pub struct Ctx {
    file: BTreeMap<String, String>,
    pub resolved: BTreeMap<String, String>,
    pub out_dir: std::path::PathBuf,
    pub format: OutputFormat,
    pub precision: usize,
    pub quad_density: usize,
}

fn parse_file(path: &Path) -> Result<BTreeMap<String, String>, AppError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| AppError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(AppError::Usage(format!(
                "{}:{}: expected `key = value`, got `{raw}`",
                path.display(),
                lineno + 1
            )));
        };
        let key = key.trim().to_string();
        if !ALLOWED_KEYS.contains(&key.as_str()) {
            return Err(AppError::Usage(format!(
                "{}:{}: unknown key `{key}`",
                path.display(),
                lineno + 1
            )));
        }
        map.insert(key, value.trim().to_string());
    }
    Ok(map)
}

impl Ctx {
    pub fn load(common: &CommonArgs) -> Result<Self, AppError> {
        let file = match &common.config {
            Some(p) => parse_file(p)?,
            None => BTreeMap::new(),
        };
        let mut ctx = Ctx {
            file,
            resolved: BTreeMap::new(),
            out_dir: std::path::PathBuf::from("."),
            format: OutputFormat::Csv,
            precision: 12,
            quad_density: superlab_core::energy_analysis::DEFAULT_QUAD_DENSITY,
        };
        if let Some(dir) = common
            .out
            .clone()
            .or_else(|| ctx.file.get("out").map(std::path::PathBuf::from))
        {
            ctx.out_dir = dir;
        }
        ctx.format = match (&common.format, ctx.file.get("format")) {
            (Some(f), _) => *f,
            (None, Some(s)) => match s.as_str() {
                "csv" => OutputFormat::Csv,
                "svg" => OutputFormat::Svg,
                "both" => OutputFormat::Both,
                other => {
                    return Err(AppError::Usage(format!("bad format `{other}` in config")))
                }
            },
            (None, None) => OutputFormat::Csv,
        };
        ctx.precision = ctx.value("precision", common.precision, 12usize)?;
        if !(1..=17).contains(&ctx.precision) {
            return Err(AppError::Usage(format!(
                "precision {} out of range 1..=17",
                ctx.precision
            )));
        }
        // Quadrature density: default < env < file < flag.
        let env_density = match std::env::var("SUPERLAB_QUAD_ORDER") {
            Ok(s) => Some(s.parse::<usize>().map_err(|_| {
                AppError::Usage(format!("SUPERLAB_QUAD_ORDER=`{s}` is not an integer"))
            })?),
            Err(_) => None,
        };
        let default_density =
            env_density.unwrap_or(superlab_core::energy_analysis::DEFAULT_QUAD_DENSITY);
        ctx.quad_density = ctx.value("quad-order", common.quad_order, default_density)?;
        if ctx.quad_density < 2 {
            return Err(AppError::Usage("quad-order must be at least 2".into()));
        }
        ctx.resolved
            .insert("quad-order".into(), ctx.quad_density.to_string());
        ctx.resolved
            .insert("precision".into(), ctx.precision.to_string());
        Ok(ctx)
    }

    /// Raw config-file value, if present.
    pub fn raw(&self, key: &str) -> Option<&String> {
        self.file.get(key)
    }

    /// Record a resolved value for the sidecar.
    pub fn record(&mut self, key: &str, value: &str) {
        self.resolved.insert(key.to_string(), value.to_string());
    }

    /// flag < file < default resolution for any parseable type; records the
    /// outcome for the sidecar.
    pub fn value<T>(&mut self, key: &str, flag: Option<T>, default: T) -> Result<T, AppError>
    where
        T: std::str::FromStr + ToString + Clone,
    {
        let v = match flag {
            Some(v) => v,
            None => match self.file.get(key) {
                Some(raw) => raw.parse::<T>().map_err(|_| {
                    AppError::Usage(format!("config key `{key}`: cannot parse `{raw}`"))
                })?,
                None => default,
            },
        };
        self.resolved.insert(key.to_string(), v.to_string());
        Ok(v)
    }

    /// Comma-separated list resolution.
    pub fn list<T>(&mut self, key: &str, flag: Option<Vec<T>>, default: &[T]) -> Result<Vec<T>, AppError>
    where
        T: std::str::FromStr + ToString + Clone,
    {
        let v = match flag {
            Some(v) if !v.is_empty() => v,
            _ => match self.file.get(key) {
                Some(raw) => raw
                    .split(',')
                    .map(|s| {
                        s.trim().parse::<T>().map_err(|_| {
                            AppError::Usage(format!("config key `{key}`: cannot parse `{s}`"))
                        })
                    })
                    .collect::<Result<Vec<T>, AppError>>()?,
                None => default.to_vec(),
            },
        };
        self.resolved.insert(
            key.to_string(),
            v.iter().map(T::to_string).collect::<Vec<_>>().join(","),
        );
        Ok(v)
    }

    /// `lo:hi:count` grid resolution.
    pub fn grid(
        &mut self,
        key: &str,
        flag: &Option<String>,
        default: (f64, f64, usize),
    ) -> Result<Vec<f64>, AppError> {
        let spec = match flag {
            Some(s) => s.clone(),
            None => match self.file.get(key) {
                Some(raw) => raw.clone(),
                None => format!("{}:{}:{}", default.0, default.1, default.2),
            },
        };
        self.resolved.insert(key.to_string(), spec.clone());
        parse_grid(&spec)
    }
}

pub fn parse_grid(spec: &str) -> Result<Vec<f64>, AppError> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(AppError::Usage(format!(
            "grid `{spec}` must be lo:hi:count"
        )));
    }
    let lo: f64 = parts[0]
        .trim()
        .parse()
        .map_err(|_| AppError::Usage(format!("grid `{spec}`: bad lower bound")))?;
    let hi: f64 = parts[1]
        .trim()
        .parse()
        .map_err(|_| AppError::Usage(format!("grid `{spec}`: bad upper bound")))?;
    let count: usize = parts[2]
        .trim()
        .parse()
        .map_err(|_| AppError::Usage(format!("grid `{spec}`: bad count")))?;
    if count < 2 || !lo.is_finite() || !hi.is_finite() || lo >= hi {
        return Err(AppError::Usage(format!(
            "grid `{spec}` needs lo < hi and count >= 2"
        )));
    }
    Ok((0..count)
        .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
        .collect())
}
