//! Sectioned `key = value` run configuration.
//!
//! ```text
//! # comment
//! [run]
//! command = sweep
//! scenario = ion_direct
//!
//! [params]
//! omega_m = 2pi*70e6 Hz
//! m_eff = 1 pg
//! ```
//!
//! Values are SI unless a unit token follows the number. Frequencies given in
//! Hz must carry the explicit `2pi*` prefix, which converts them to rad/s.

use std::fmt;

use hybrid_core::constants::E_CHARGE;

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq)]
pub struct Entry {
    pub key: String,
    pub raw: String,
    pub line: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Section {
    pub name: String,
    pub line: usize,
    pub entries: Vec<Entry>,
}

/// A parsed configuration file.
#[derive(Clone, Debug, PartialEq)]
pub struct Config {
    pub text: String,
    pub sections: Vec<Section>,
}

/// Physical dimension of a parsed value, named like the units of
/// [`hybrid_core::scenarios::Quantity`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dim {
    /// No unit token was given: the number is taken as SI.
    Bare,
    Unit(&'static str),
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dim::Bare => f.write_str("(none)"),
            Dim::Unit(u) => f.write_str(u),
        }
    }
}

/// A number in SI units together with the dimension of its unit token.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Value {
    pub si: f64,
    pub dim: Dim,
}

impl Value {
    /// Checks the value against the unit expected by its target.
    pub fn expect(self, unit: &str) -> Result<f64, String> {
        match self.dim {
            Dim::Bare => Ok(self.si),
            Dim::Unit(u) if u == unit => Ok(self.si),
            Dim::Unit(u) => Err(format!("expected a value in {unit}, got {u}")),
        }
    }
}

/// SI prefixes as powers of ten.
const PREFIXES: [(&str, i32); 11] = [
    ("f", -15),
    ("p", -12),
    ("n", -9),
    ("u", -6),
    ("µ", -6),
    ("μ", -6),
    ("m", -3),
    ("k", 3),
    ("M", 6),
    ("G", 9),
    ("T", 12),
];

/// Base units that accept SI prefixes: `(token, power of ten to SI, dimension)`.
const BASES: [(&str, i32, &str); 13] = [
    ("Hz", 0, "Hz"),
    ("s", 0, "s"),
    ("g", -3, "kg"),
    ("m", 0, "m"),
    ("V", 0, "V"),
    ("A", 0, "A"),
    ("F", 0, "F"),
    ("J", 0, "J"),
    ("eV", 0, "eV"),
    ("K", 0, "K"),
    ("T", 0, "T"),
    ("W", 0, "W"),
    ("C", 0, "C"),
];

/// Unit tokens taken literally.
const EXACT: [&str; 3] = ["rad/s", "T/m", "m/s"];

/// Scales by `10^k` with a single correctly rounded operation, so that
/// `5 ng` gives exactly the double nearest to `5e-12`.
fn pow10(x: f64, k: i32) -> f64 {
    if k >= 0 {
        x * 10f64.powi(k)
    } else {
        x / 10f64.powi(-k)
    }
}

/// Power of ten and dimension of a unit token.
fn unit_scale(token: &str) -> Option<(i32, &'static str)> {
    if let Some(d) = EXACT.iter().find(|t| **t == token) {
        return Some((0, d));
    }
    if let Some(&(_, k, d)) = BASES.iter().find(|(t, _, _)| *t == token) {
        return Some((k, d));
    }
    for (p, pk) in PREFIXES {
        if let Some(rest) = token.strip_prefix(p) {
            if let Some(&(_, k, d)) = BASES.iter().find(|(t, _, _)| *t == rest) {
                return Some((pk + k, d));
            }
        }
    }
    None
}

/// SI value and dimension of `x` in `token` units.
fn to_si(x: f64, token: &str) -> Option<(f64, &'static str)> {
    let (k, d) = unit_scale(token)?;
    Some(match d {
        "eV" => (pow10(x, k) * E_CHARGE, "J"),
        _ => (pow10(x, k), d),
    })
}

/// Parses `[-]2pi*<number> Hz`, `<number> <unit>` or a bare number.
pub fn parse_value(raw: &str) -> Result<Value, String> {
    let mut parts = raw.split_whitespace();
    let num = parts.next().ok_or("missing value")?;
    let unit = parts.next();
    if parts.next().is_some() {
        return Err(format!("unexpected trailing text in `{raw}`"));
    }
    let (sign, body) = match num.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, num.strip_prefix('+').unwrap_or(num)),
    };
    let (two_pi, body) = match body.strip_prefix("2pi*") {
        Some(rest) => (true, rest),
        None => (false, body),
    };
    let x: f64 = body.parse().map_err(|_| format!("`{num}` is not a number"))?;
    let x = sign * x;
    match (two_pi, unit) {
        (true, None) => Ok(Value { si: std::f64::consts::TAU * x, dim: Dim::Unit("rad/s") }),
        (true, Some(u)) => match to_si(x, u) {
            Some((hz, "Hz")) => Ok(Value { si: std::f64::consts::TAU * hz, dim: Dim::Unit("rad/s") }),
            _ => Err(format!("the `2pi*` prefix only applies to Hz values, got unit `{u}`")),
        },
        (false, None) => Ok(Value { si: x, dim: Dim::Bare }),
        (false, Some(u)) => match to_si(x, u) {
            Some((_, "Hz")) => Err(format!("frequency `{raw}` needs the `2pi*` prefix or rad/s units")),
            Some((v, d)) => Ok(Value { si: v, dim: Dim::Unit(d) }),
            None => Err(format!("unknown unit `{u}`")),
        },
    }
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut sections: Vec<Section> = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let n = idx + 1;
            let line = match line.find(['#', ';']) {
                Some(k) => &line[..k],
                None => line,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| CliError::config(n, "unterminated section header"))?
                    .trim();
                if name.is_empty() {
                    return Err(CliError::config(n, "empty section name"));
                }
                if sections.iter().any(|s| s.name == name) {
                    return Err(CliError::config(n, format!("duplicate section [{name}]")));
                }
                sections.push(Section { name: name.to_string(), line: n, entries: Vec::new() });
                continue;
            }
            let (key, raw) = line
                .split_once('=')
                .ok_or_else(|| CliError::config(n, format!("expected `key = value`, got `{line}`")))?;
            let key = key.trim();
            if key.is_empty() {
                return Err(CliError::config(n, "empty key"));
            }
            let section = sections
                .last_mut()
                .ok_or_else(|| CliError::config(n, "entry outside of any section"))?;
            if section.entries.iter().any(|e| e.key == key) {
                return Err(CliError::config(n, format!("duplicate key `{key}` in [{}]", section.name)));
            }
            section.entries.push(Entry { key: key.to_string(), raw: raw.trim().to_string(), line: n });
        }
        Ok(Self { text: text.to_string(), sections })
    }

    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }

    /// Fails on any section outside `allowed`.
    pub fn only_sections(&self, allowed: &[&str]) -> Result<(), CliError> {
        match self.sections.iter().find(|s| !allowed.contains(&s.name.as_str())) {
            Some(s) => Err(CliError::config(s.line, format!("unexpected section [{}]", s.name))),
            None => Ok(()),
        }
    }
}

impl Section {
    pub fn entry(&self, key: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.key == key)
    }

    fn required(&self, key: &str) -> Result<&Entry, CliError> {
        self.entry(key)
            .ok_or_else(|| CliError::config(self.line, format!("[{}] is missing `{key}`", self.name)))
    }

    pub fn str(&self, key: &str) -> Result<&str, CliError> {
        let e = self.required(key)?;
        if e.raw.is_empty() {
            return Err(CliError::config(e.line, format!("`{key}` is empty")));
        }
        Ok(&e.raw)
    }

    pub fn str_or<'a>(&'a self, key: &str, default: &'a str) -> Result<&'a str, CliError> {
        match self.entry(key) {
            Some(_) => self.str(key),
            None => Ok(default),
        }
    }

    /// A number in SI units, checked against `unit` when a unit token is given.
    pub fn f64(&self, key: &str, unit: &str) -> Result<f64, CliError> {
        let e = self.required(key)?;
        e.number(unit)
    }

    pub fn f64_or(&self, key: &str, unit: &str, default: f64) -> Result<f64, CliError> {
        match self.entry(key) {
            Some(e) => e.number(unit),
            None => Ok(default),
        }
    }

    pub fn usize(&self, key: &str) -> Result<usize, CliError> {
        let e = self.required(key)?;
        e.raw
            .parse()
            .map_err(|_| CliError::config(e.line, format!("`{key}` must be a non-negative integer, got `{}`", e.raw)))
    }

    pub fn usize_or(&self, key: &str, default: usize) -> Result<usize, CliError> {
        match self.entry(key) {
            Some(_) => self.usize(key),
            None => Ok(default),
        }
    }

    pub fn bool_or(&self, key: &str, default: bool) -> Result<bool, CliError> {
        let Some(e) = self.entry(key) else { return Ok(default) };
        match e.raw.as_str() {
            "true" | "yes" | "1" => Ok(true),
            "false" | "no" | "0" => Ok(false),
            other => Err(CliError::config(e.line, format!("`{key}` must be true or false, got `{other}`"))),
        }
    }

    /// Comma-separated list of numbers.
    pub fn f64_list(&self, key: &str, unit: &str) -> Result<Option<Vec<f64>>, CliError> {
        let Some(e) = self.entry(key) else { return Ok(None) };
        e.raw
            .split(',')
            .map(|item| parse_value(item.trim()).and_then(|v| v.expect(unit)).map_err(|m| CliError::config(e.line, m)))
            .collect::<Result<Vec<_>, _>>()
            .map(Some)
    }

    /// Fails on any key outside `allowed`.
    pub fn only_keys(&self, allowed: &[&str]) -> Result<(), CliError> {
        match self.entries.iter().find(|e| !allowed.contains(&e.key.as_str())) {
            Some(e) => Err(CliError::config(e.line, format!("unknown key `{}` in [{}]", e.key, self.name))),
            None => Ok(()),
        }
    }
}

impl Entry {
    pub fn number(&self, unit: &str) -> Result<f64, CliError> {
        let v = parse_value(&self.raw)
            .and_then(|v| v.expect(unit))
            .map_err(|m| CliError::config(self.line, format!("`{}`: {m}", self.key)))?;
        if !v.is_finite() {
            return Err(CliError::config(self.line, format!("`{}` must be finite", self.key)));
        }
        Ok(v)
    }
}

/// Parses a truncation spec such as `6` or `4x4`.
pub fn parse_dims(spec: &str) -> Result<Vec<usize>, String> {
    spec.split(['x', 'X', ','])
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|_| format!("bad truncation spec `{spec}`; use e.g. `6` or `4x4`"))
        })
        .collect()
}
