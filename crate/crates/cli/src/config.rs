//! Key-value configuration files and the run header.
//!
//! A file holds `key = value` lines (`#` comments, blank lines ignored).
//! Keys are flag names with or without the leading dashes, `_` or `-`. The
//! reserved key `command` names the subcommand (`bounds kl` for nested ones)
//! and is used only when the command line gives none.

use std::ffi::OsString;
use std::path::Path;

use serde_json::{Map, Value};

use crate::args::{BOUNDS_COMMANDS, COMMANDS};
use crate::CliError;

/// Flags accepted before the subcommand.
const GLOBAL_KEYS: &[&str] = &["seed", "threads", "out", "format"];

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConfigFile {
    pub command: Vec<String>,
    pub entries: Vec<(String, String)>,
}

pub fn parse_config(text: &str) -> Result<ConfigFile, CliError> {
    let mut cfg = ConfigFile::default();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .map(|(k, v)| (k.trim(), v.trim()))
            .or_else(|| line.split_once(char::is_whitespace).map(|(k, v)| (k.trim(), v.trim())))
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected 'key = value'", i + 1)))?;
        let key = key.trim_start_matches('-').replace('_', "-");
        if key.is_empty() || value.is_empty() {
            return Err(CliError::Usage(format!("config line {}: empty key or value", i + 1)));
        }
        if key == "config" {
            return Err(CliError::Usage("config files cannot include other config files".into()));
        }
        if key == "command" {
            cfg.command = value.split_whitespace().map(str::to_string).collect();
        } else {
            cfg.entries.push((key, value.to_string()));
        }
    }
    Ok(cfg)
}

pub fn load_config(path: &Path) -> Result<ConfigFile, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    parse_config(&text)
}

/// Value of `--config` in raw arguments, if any.
pub fn find_config_flag(argv: &[OsString]) -> Option<OsString> {
    let mut it = argv.iter().skip(1);
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--" {
            break;
        }
        if s == "--config" {
            return it.next().cloned();
        }
        if let Some(v) = s.strip_prefix("--config=") {
            return Some(v.into());
        }
    }
    None
}

/// Position just past the subcommand tokens (top level, then nested).
fn command_end(argv: &[OsString]) -> Option<usize> {
    let top = argv
        .iter()
        .position(|a| COMMANDS.contains(&a.to_string_lossy().as_ref()))?;
    if argv[top] == "bounds" {
        if let Some(next) = argv.get(top + 1) {
            if BOUNDS_COMMANDS.contains(&next.to_string_lossy().as_ref()) {
                return Some(top + 2);
            }
        }
    }
    Some(top + 1)
}

/// Splices file entries into `argv` ahead of the explicit flags.
pub fn merge_config(argv: Vec<OsString>, cfg: &ConfigFile) -> Vec<OsString> {
    let mut argv = argv;
    if command_end(&argv).is_none() && !cfg.command.is_empty() {
        let at = argv.len().min(1);
        for (k, c) in cfg.command.iter().enumerate() {
            argv.insert(at + k, c.into());
        }
    }
    let (global, local): (Vec<_>, Vec<_>) =
        cfg.entries.iter().partition(|(k, _)| GLOBAL_KEYS.contains(&k.as_str()));
    let flag = |(k, v): &&(String, String)| OsString::from(format!("--{k}={v}"));
    let mut out: Vec<OsString> = argv.iter().take(1).cloned().collect();
    out.extend(global.iter().map(flag));
    let end = command_end(&argv).unwrap_or(argv.len());
    out.extend(argv[1.min(argv.len())..end].iter().cloned());
    out.extend(local.iter().map(flag));
    out.extend(argv[end..].iter().cloned());
    out
}

/// Subcommand arguments with kebab-case keys, nulls dropped.
pub fn command_args(command: &Value) -> Map<String, Value> {
    let mut v = command;
    while let Value::Object(map) = v {
        match map.iter().next() {
            Some((k, inner))
                if map.len() == 1
                    && (COMMANDS.contains(&k.as_str()) || BOUNDS_COMMANDS.contains(&k.as_str())) =>
            {
                v = inner
            }
            _ => break,
        }
    }
    let Value::Object(map) = v else {
        return Map::new();
    };
    map.iter()
        .filter(|(_, v)| !v.is_null())
        .map(|(k, v)| (k.replace('_', "-"), v.clone()))
        .collect()
}

/// Flat `key=value` pairs of the subcommand arguments, in key order.
pub fn config_pairs(command: &Value) -> Vec<(String, String)> {
    command_args(command).iter().map(|(k, v)| (k.clone(), render(v))).collect()
}

fn render(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(render).collect::<Vec<_>>().join(","),
        other => other.to_string(),
    }
}

/// Comment line opening every CSV: tool version, command, arguments, seed.
pub fn header_line(command_name: &str, pairs: &[(String, String)], seed: u64) -> String {
    let mut s = format!("# rgg {} command={}", env!("CARGO_PKG_VERSION"), command_name.replace(' ', ":"));
    for (k, v) in pairs {
        s.push_str(&format!(" {k}={v}"));
    }
    s.push_str(&format!(" seed={seed}"));
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn os(v: &[&str]) -> Vec<OsString> {
        v.iter().map(OsString::from).collect()
    }

    #[test]
    fn parses_both_separators_and_comments() {
        let c = parse_config("# hi\nn = 10\n--d 30 # trailing\nbound_c=3\ncommand = bounds kl\n").unwrap();
        assert_eq!(c.command, vec!["bounds", "kl"]);
        assert_eq!(
            c.entries,
            vec![
                ("n".into(), "10".into()),
                ("d".into(), "30".into()),
                ("bound-c".into(), "3".into())
            ]
        );
        assert!(parse_config("justakey\n").is_err());
    }

    #[test]
    fn explicit_flags_come_last() {
        let cfg = parse_config("seed = 1\nn = 10\np = 0.5").unwrap();
        let merged = merge_config(os(&["rgg", "--seed", "9", "power", "--n", "20"]), &cfg);
        assert_eq!(
            merged,
            os(&["rgg", "--seed=1", "--seed", "9", "power", "--n=10", "--p=0.5", "--n", "20"])
        );
    }

    #[test]
    fn nested_and_file_commands() {
        let cfg = parse_config("command = bounds kl\nn = 5").unwrap();
        let merged = merge_config(os(&["rgg", "--p", "0.5"]), &cfg);
        assert_eq!(merged, os(&["rgg", "bounds", "kl", "--n=5", "--p", "0.5"]));
        let cfg = parse_config("n = 5").unwrap();
        let merged = merge_config(os(&["rgg", "bounds", "kl", "--d", "9"]), &cfg);
        assert_eq!(merged, os(&["rgg", "bounds", "kl", "--n=5", "--d", "9"]));
    }

    #[test]
    fn finds_config_flag() {
        assert_eq!(find_config_flag(&os(&["rgg", "x", "--config", "a.cfg"])), Some("a.cfg".into()));
        assert_eq!(find_config_flag(&os(&["rgg", "--config=b"])), Some("b".into()));
        assert_eq!(find_config_flag(&os(&["rgg", "--", "--config", "c"])), None);
    }
}
