//! `key=value` run files merged into the argument list ahead of explicit flags.

use std::collections::BTreeSet;

use clap::{ArgAction, Command, CommandFactory};

use crate::args::Cli;
use crate::error::CliError;

/// One `key=value` pair with its 1-based line number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub key: String,
    pub value: String,
    pub line: usize,
}

/// Parses `key=value` lines; blank lines and `#` comments are skipped.
pub fn parse_config(text: &str) -> Result<Vec<Entry>, CliError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Validation(format!("config line {}: expected key=value, got {line:?}", idx + 1)))?;
        let key = k.trim().replace('_', "-");
        if key.is_empty() {
            return Err(CliError::Validation(format!("config line {}: empty key", idx + 1)));
        }
        out.push(Entry { key, value: v.trim().to_string(), line: idx + 1 });
    }
    Ok(out)
}

fn long_names(cmd: &Command) -> Vec<(String, bool)> {
    cmd.get_arguments()
        .filter_map(|a| {
            let flag = matches!(a.get_action(), ArgAction::SetTrue | ArgAction::SetFalse);
            a.get_long().map(|l| (l.to_string(), flag))
        })
        .filter(|(l, _)| l != "config" && l != "help" && l != "version")
        .collect()
}

fn nearest<'a>(key: &str, names: impl Iterator<Item = &'a str>) -> Option<&'a str> {
    names.min_by_key(|n| strsim::levenshtein(key, n))
}

/// Inserts the pairs of the `--config` file right after the subcommand, skipping
/// keys that also appear as flags so that flags win.
pub fn merge_config(argv: Vec<String>) -> Result<Vec<String>, CliError> {
    let mut path = None;
    for (i, tok) in argv.iter().enumerate() {
        if tok == "--config" {
            path = argv.get(i + 1).cloned();
        } else if let Some(p) = tok.strip_prefix("--config=") {
            path = Some(p.to_string());
        }
    }
    let Some(path) = path else { return Ok(argv) };
    let root = Cli::command();
    let sub_pos = argv.iter().position(|t| root.get_subcommands().any(|s| s.get_name() == t));
    let Some(sub_pos) = sub_pos else {
        return Err(CliError::Validation("a config file needs a subcommand".into()));
    };
    let sub = root.find_subcommand(&argv[sub_pos]).expect("subcommand found above");
    let mut names = long_names(sub);
    names.extend(long_names(&root));
    let text = std::fs::read_to_string(&path).map_err(|e| CliError::Validation(format!("cannot read config {path}: {e}")))?;
    let given: BTreeSet<String> = argv
        .iter()
        .filter_map(|t| t.strip_prefix("--"))
        .map(|t| t.split('=').next().unwrap_or(t).to_string())
        .collect();
    let mut extra = Vec::new();
    for e in parse_config(&text)? {
        let Some((name, flag)) = names.iter().find(|(n, _)| *n == e.key) else {
            let hint = nearest(&e.key, names.iter().map(|(n, _)| n.as_str()))
                .map(|n| format!("; did you mean `{n}`?"))
                .unwrap_or_default();
            return Err(CliError::Validation(format!("config line {}: unknown key `{}`{hint}", e.line, e.key)));
        };
        if given.contains(name) {
            continue;
        }
        if *flag {
            match e.value.as_str() {
                "true" | "1" | "yes" => extra.push(format!("--{name}")),
                "false" | "0" | "no" => {}
                v => return Err(CliError::Validation(format!("config line {}: `{name}` expects true or false, got {v:?}", e.line))),
            }
        } else {
            extra.push(format!("--{name}"));
            extra.extend(e.value.split_whitespace().map(str::to_string));
        }
    }
    let mut out = argv;
    out.splice(sub_pos + 1..sub_pos + 1, extra);
    Ok(out)
}
