//! `key=value` config files, merged below command-line flags.
//!
//! Keys are long flag names (`alpha`, `i-min` or `i_min`) or short letters
//! (`d`, `N`). A key whose flag already appears on the command line is
//! ignored; the rest are appended to argv before parsing.

use std::ffi::OsString;
use std::path::Path;

use clap::{Arg, ArgAction, Command, CommandFactory};

use crate::args::Cli;
use crate::error::{CliError, CliResult};

/// Locates `--config FILE` or `--config=FILE` in raw argv.
fn config_path(argv: &[String]) -> Option<String> {
    let mut it = argv.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Some(p.to_string());
        }
    }
    None
}

pub fn parse_pairs(text: &str) -> CliResult<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("line {}: expected key=value", i + 1)))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

fn find_arg<'a>(cmd: &'a Command, sub: Option<&'a Command>, key: &str) -> Option<&'a Arg> {
    let long = key.replace('_', "-");
    let matches = |a: &&Arg| {
        a.get_long() == Some(long.as_str()) || (key.chars().count() == 1 && a.get_short() == key.chars().next())
    };
    sub.into_iter()
        .flat_map(|s| s.get_arguments())
        .find(matches)
        .or_else(|| cmd.get_arguments().find(matches))
}

fn present(argv: &[String], arg: &Arg) -> bool {
    argv.iter().any(|a| {
        if let Some(l) = arg.get_long() {
            let flag = format!("--{l}");
            if *a == flag || a.starts_with(&format!("{flag}=")) {
                return true;
            }
        }
        match arg.get_short() {
            Some(c) => a.starts_with(&format!("-{c}")) && !a.starts_with("--"),
            None => false,
        }
    })
}

/// Returns argv with config-file defaults appended.
pub fn merge(argv: Vec<String>) -> CliResult<Vec<OsString>> {
    let Some(path) = config_path(&argv) else {
        return Ok(argv.into_iter().map(Into::into).collect());
    };
    let text =
        std::fs::read_to_string(Path::new(&path)).map_err(|e| CliError::Config(format!("cannot read {path}: {e}")))?;
    let cmd = Cli::command();
    let sub = argv
        .iter()
        .skip(1)
        .find_map(|a| cmd.get_subcommands().find(|s| s.get_name() == a));
    let mut extra = Vec::new();
    for (key, value) in parse_pairs(&text)? {
        let arg = find_arg(&cmd, sub, &key).ok_or_else(|| CliError::Config(format!("unknown key `{key}`")))?;
        if arg.get_id() == "config" || arg.is_positional() {
            return Err(CliError::Config(format!(
                "key `{key}` cannot be set from a config file"
            )));
        }
        if present(&argv, arg) {
            continue;
        }
        let flag = match arg.get_long() {
            Some(l) => format!("--{l}"),
            None => format!("-{}", arg.get_short().expect("named argument")),
        };
        if matches!(arg.get_action(), ArgAction::SetTrue) {
            match value.as_str() {
                "true" | "1" | "yes" => extra.push(flag),
                "false" | "0" | "no" => {}
                _ => return Err(CliError::Config(format!("`{key}` expects true or false"))),
            }
        } else {
            extra.push(format!("{flag}={value}"));
        }
    }
    Ok(argv.into_iter().chain(extra).map(Into::into).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strings(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn pairs_skip_comments() {
        let p = parse_pairs("# c\nalpha = 0.7\n\nN=16\n").unwrap();
        assert_eq!(p, vec![("alpha".into(), "0.7".into()), ("N".into(), "16".into())]);
        assert!(parse_pairs("oops").is_err());
    }

    #[test]
    fn presence_by_long_and_short() {
        let cmd = Cli::command();
        let sub = cmd.find_subcommand("sum");
        let n = find_arg(&cmd, sub, "N").unwrap();
        assert_eq!(n.get_long(), Some("len"));
        assert!(present(&strings(&["weylbound", "sum", "-N", "5"]), n));
        assert!(present(&strings(&["weylbound", "sum", "--len=5"]), n));
        assert!(!present(&strings(&["weylbound", "sum", "-d", "2"]), n));
        assert!(find_arg(&cmd, sub, "threads").is_some());
        assert!(find_arg(&cmd, sub, "nonsense").is_none());
    }
}
