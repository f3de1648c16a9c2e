//! `key = value` config files merged into the command line.
//!
//! Keys are long flag names (`m-ratios = 0.5,1.5`; underscores are accepted
//! for dashes). Flags given on the command line win over the file. A value of
//! `true` adds a bare switch, `false` leaves it out.

use std::path::Path;

use crate::{HarnessError, Result};

pub fn parse_config(text: &str) -> Result<Vec<(String, String)>> {
    let mut out: Vec<(String, String)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| HarnessError::Config {
            line: i + 1,
            msg: format!("expected `key = value`, got '{line}'"),
        })?;
        let key = key.trim().replace('_', "-");
        if key.is_empty() || key.contains(char::is_whitespace) {
            return Err(HarnessError::Config {
                line: i + 1,
                msg: format!("bad key '{key}'"),
            });
        }
        if key == "config" {
            return Err(HarnessError::Config {
                line: i + 1,
                msg: "config files cannot include other config files".into(),
            });
        }
        let value = value.trim().to_string();
        match out.iter_mut().find(|(k, _)| *k == key) {
            Some(slot) => slot.1 = value,
            None => out.push((key, value)),
        }
    }
    Ok(out)
}

fn flag_present(args: &[String], key: &str) -> bool {
    let long = format!("--{key}");
    let long_eq = format!("--{key}=");
    args.iter().any(|a| *a == long || a.starts_with(&long_eq))
}

/// Removes `--config PATH` from `args` and appends file entries whose flag
/// is not already present.
pub fn merge_config(args: Vec<String>) -> Result<Vec<String>> {
    let mut rest = Vec::with_capacity(args.len());
    let mut path = None;
    let mut iter = args.into_iter();
    while let Some(arg) = iter.next() {
        if arg == "--config" {
            match iter.next() {
                Some(p) => path = Some(p),
                None => {
                    // let the parser report the missing value
                    rest.push(arg);
                }
            }
        } else if let Some(p) = arg.strip_prefix("--config=") {
            path = Some(p.to_string());
        } else {
            rest.push(arg);
        }
    }
    let Some(path) = path else {
        return Ok(rest);
    };
    let text = std::fs::read_to_string(Path::new(&path))?;
    let mut merged = rest.clone();
    for (key, value) in parse_config(&text)? {
        if flag_present(&rest, &key) {
            continue;
        }
        match value.as_str() {
            "true" => merged.push(format!("--{key}")),
            "false" => {}
            _ => {
                merged.push(format!("--{key}"));
                merged.push(value);
            }
        }
    }
    Ok(merged)
}
