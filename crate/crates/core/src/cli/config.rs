//! Plain-text `key = value` run configuration.
//!
//! One assignment per line; `#` starts a comment. `scenario` selects the
//! registry entry and every other key must belong to it. Numbers may carry
//! a trailing `pi` factor (`0.9pi`, `pi`, `-0.5 pi`); lists are
//! comma-separated.

use std::f64::consts::PI;

use super::registry::{find, Kind, ScenarioSpec};
use super::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    spec: ScenarioSpec,
    values: Vec<String>,
}

pub fn parse_number(raw: &str) -> Option<f64> {
    let s = raw.trim().to_ascii_lowercase();
    let v = match s.strip_suffix("pi") {
        Some(prefix) => {
            let prefix = prefix.trim().trim_end_matches('*').trim();
            let coef = match prefix {
                "" | "+" => 1.0,
                "-" => -1.0,
                other => other.parse::<f64>().ok()?,
            };
            coef * PI
        }
        None => s.parse::<f64>().ok()?,
    };
    v.is_finite().then_some(v)
}

pub fn parse_list(raw: &str) -> Option<Vec<f64>> {
    let items: Option<Vec<f64>> = raw.split(',').map(parse_number).collect();
    items.filter(|v| !v.is_empty())
}

fn check_value(kind: Kind, raw: &str) -> Result<(), String> {
    let ok = match kind {
        Kind::Number => parse_number(raw).is_some(),
        Kind::List => parse_list(raw).is_some(),
        Kind::Count => raw.parse::<usize>().is_ok(),
        Kind::Choice(options) => options.contains(&raw),
        Kind::Text => !raw.is_empty(),
    };
    if ok {
        return Ok(());
    }
    Err(match kind {
        Kind::Number => format!("'{raw}' is not a number"),
        Kind::List => format!("'{raw}' is not a comma-separated list of numbers"),
        Kind::Count => format!("'{raw}' is not a non-negative integer"),
        Kind::Choice(options) => format!("'{raw}' is not one of {}", options.join(", ")),
        Kind::Text => "empty value".into(),
    })
}

impl RunConfig {
    /// Defaults of the named scenario.
    pub fn defaults(scenario: &str) -> Result<Self, CliError> {
        let spec = find(scenario).ok_or_else(|| CliError::UnknownScenario(scenario.to_string()))?;
        let values = spec.params.iter().map(|p| p.default.to_string()).collect();
        Ok(Self { spec, values })
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut entries: Vec<(usize, String, String)> = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let content = line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| CliError::Parse {
                line: line_no,
                message: format!("expected key=value, found '{content}'"),
            })?;
            let (key, value) = (key.trim(), value.trim());
            if key.is_empty() {
                return Err(CliError::Parse {
                    line: line_no,
                    message: "missing key before '='".into(),
                });
            }
            if let Some((first, _, _)) = entries.iter().find(|e| e.1 == key) {
                return Err(CliError::Parse {
                    line: line_no,
                    message: format!("'{key}' already set on line {first}"),
                });
            }
            entries.push((line_no, key.to_string(), value.to_string()));
        }
        let scenario = entries
            .iter()
            .find(|e| e.1 == "scenario")
            .ok_or(CliError::MissingScenario)?;
        let mut config = Self::defaults(&scenario.2).map_err(|_| CliError::Parse {
            line: scenario.0,
            message: format!("unknown scenario '{}'", scenario.2),
        })?;
        for (line, key, value) in entries.iter().filter(|e| e.1 != "scenario") {
            let idx = config
                .spec
                .params
                .iter()
                .position(|p| p.key == key.as_str())
                .ok_or_else(|| CliError::UnknownKey {
                    line: *line,
                    key: key.clone(),
                    scenario: config.spec.name,
                })?;
            check_value(config.spec.params[idx].kind, value).map_err(|message| CliError::Parse {
                line: *line,
                message: format!("{key}: {message}"),
            })?;
            config.values[idx] = value.clone();
        }
        Ok(config)
    }

    pub fn scenario(&self) -> &'static str {
        self.spec.name
    }

    pub fn spec(&self) -> &ScenarioSpec {
        &self.spec
    }

    fn raw(&self, key: &str) -> &str {
        let idx = self
            .spec
            .params
            .iter()
            .position(|p| p.key == key)
            .unwrap_or_else(|| panic!("scenario {} has no key {key}", self.spec.name));
        &self.values[idx]
    }

    pub fn number(&self, key: &str) -> f64 {
        parse_number(self.raw(key)).expect("validated number")
    }

    pub fn list(&self, key: &str) -> Vec<f64> {
        parse_list(self.raw(key)).expect("validated list")
    }

    pub fn count(&self, key: &str) -> usize {
        self.raw(key).parse().expect("validated count")
    }

    pub fn text(&self, key: &str) -> &str {
        self.raw(key)
    }

    /// Sets one value, checked like a config line.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let idx = self
            .spec
            .params
            .iter()
            .position(|p| p.key == key)
            .ok_or_else(|| CliError::UnknownKey {
                line: 0,
                key: key.to_string(),
                scenario: self.spec.name,
            })?;
        check_value(self.spec.params[idx].kind, value).map_err(|message| CliError::Parse { line: 0, message })?;
        self.values[idx] = value.to_string();
        Ok(())
    }

    /// `scenario=…` followed by every key in registry order.
    pub fn resolved(&self) -> String {
        let mut out = format!("scenario={}\n", self.spec.name);
        for (p, v) in self.spec.params.iter().zip(&self.values) {
            out.push_str(&format!("{}={}\n", p.key, v));
        }
        out
    }
}
