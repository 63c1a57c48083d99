use std::fs;
use std::path::{Path, PathBuf};

use pd7kit::boutroux::{NEWTON_TOL, QUAD_TOL};
use pd7kit::levelset::CAPTURE_TOL;
use pd7kit::solution::POLE_TOL;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "pretty" => Ok(Format::Pretty),
            _ => Err(format!("unknown format `{s}` (json, csv, pretty)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub quadrature_tol: f64,
    pub newton_tol: f64,
    pub trace_tol: f64,
    pub pole_tol: f64,
    pub cache: Option<PathBuf>,
    pub format: Format,
    pub parallelism: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            quadrature_tol: QUAD_TOL,
            newton_tol: NEWTON_TOL,
            trace_tol: CAPTURE_TOL,
            pole_tol: POLE_TOL,
            cache: None,
            format: Format::Json,
            parallelism: 1,
        }
    }
}

impl Config {
    /// `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Config, String> {
        let mut c = Config::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| format!("line {}: expected key=value", i + 1))?;
            c.set(k.trim(), v.trim()).map_err(|e| format!("line {}: {e}", i + 1))?;
        }
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Config, String> {
        let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        Config::parse(&text)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        let tol = |v: &str| -> Result<f64, String> {
            let x: f64 = v.parse().map_err(|_| format!("`{v}` is not a number"))?;
            if x > 0.0 && x.is_finite() {
                Ok(x)
            } else {
                Err(format!("tolerance must be positive, got {v}"))
            }
        };
        match key {
            "quadrature_tol" => self.quadrature_tol = tol(value)?,
            "newton_tol" => self.newton_tol = tol(value)?,
            "trace_tol" => self.trace_tol = tol(value)?,
            "pole_tol" => self.pole_tol = tol(value)?,
            "cache" => self.cache = Some(PathBuf::from(value)),
            "format" => self.format = value.parse()?,
            "parallelism" => {
                self.parallelism = value.parse().ok().filter(|&p| p > 0).ok_or_else(|| format!("bad parallelism `{value}`"))?
            }
            _ => return Err(format!("unknown key `{key}`")),
        }
        Ok(())
    }

    /// Settings that the library takes as compile-time constants.
    pub fn fixed_overrides(&self) -> Vec<&'static str> {
        let d = Config::default();
        let mut out = Vec::new();
        if self.quadrature_tol != d.quadrature_tol {
            out.push("quadrature_tol");
        }
        if self.newton_tol != d.newton_tol {
            out.push("newton_tol");
        }
        if self.trace_tol != d.trace_tol {
            out.push("trace_tol");
        }
        if self.parallelism != d.parallelism {
            out.push("parallelism");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_reject() {
        let c = Config::parse("# comment\npole_tol = 1e-20\nformat=csv\n").unwrap();
        assert_eq!(c.pole_tol, 1e-20);
        assert_eq!(c.format, Format::Csv);
        assert!(Config::parse("newton_tol = -1").is_err());
        assert!(Config::parse("colour = red").is_err());
        assert!(Config::parse("just words").is_err());
    }
}
