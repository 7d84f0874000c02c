//! Lint and format configuration.
//!
//! The document format is one `key = value` per line with `#` comments.
//! Lists are comma separated and may be wrapped in brackets. Per-rule
//! settings use dotted keys: `rule.L03.enabled = false`,
//! `rule.I04.severity = error`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::diagnostics::Severity;
use crate::program::Indicator;

/// Default configuration file name looked up in the working directory.
pub const DEFAULT_CONFIG_FILE: &str = ".prolintrc";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ModeSystem {
    #[default]
    Recommended,
    Pldoc,
    Simple,
}

impl ModeSystem {
    pub const ALL: [ModeSystem; 3] = [ModeSystem::Recommended, ModeSystem::Pldoc, ModeSystem::Simple];

    pub fn as_str(self) -> &'static str {
        match self {
            ModeSystem::Recommended => "recommended",
            ModeSystem::Pldoc => "pldoc",
            ModeSystem::Simple => "simple",
        }
    }
}

impl fmt::Display for ModeSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModeSystem {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "recommended" => Ok(ModeSystem::Recommended),
            "pldoc" => Ok(ModeSystem::Pldoc),
            "simple" => Ok(ModeSystem::Simple),
            _ => Err(format!("unknown mode system `{s}` (expected recommended, pldoc or simple)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CommaStyle {
    /// Every comma is followed by one space or a newline.
    #[default]
    Simple,
    /// Like simple, except commas inside data structures take no space.
    Structured,
}

impl FromStr for CommaStyle {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "simple" => Ok(CommaStyle::Simple),
            "structured" => Ok(CommaStyle::Structured),
            _ => Err(format!("unknown comma style `{s}` (expected simple or structured)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RuleSetting {
    pub enabled: Option<bool>,
    pub severity: Option<Severity>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub rules: BTreeMap<String, RuleSetting>,
    pub indent_size: usize,
    pub max_line_length: usize,
    pub clause_lines_info: usize,
    pub clause_lines_warn: usize,
    pub eol_comment_max: usize,
    /// Numeric literals as written, e.g. `-1`.
    pub magic_number_allowlist: Vec<String>,
    pub inline_goal_allowlist: Vec<Indicator>,
    pub mode_system: ModeSystem,
    pub comma_style: CommaStyle,
    pub failure_threshold: Severity,
    pub n03_allowlist: Vec<String>,
    pub n04_leet_enabled: bool,
    pub n04_leet_allowlist: Vec<String>,
    /// Apply D01 in files without a module directive.
    pub require_docs_without_module: bool,
    /// Glob patterns (`*`, `?`) naming public predicates in module-less files.
    pub public_patterns: Vec<String>,
    pub extensions: Vec<String>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            rules: BTreeMap::new(),
            indent_size: 4,
            max_line_length: 79,
            clause_lines_info: 24,
            clause_lines_warn: 48,
            eol_comment_max: 40,
            magic_number_allowlist: ["0", "1", "-1", "2"].map(String::from).to_vec(),
            inline_goal_allowlist: vec![
                Indicator::new("write", 1),
                Indicator::new("nl", 0),
                Indicator::new("print", 1),
                Indicator::new("format", 1),
                Indicator::new("format", 2),
                Indicator::new("format", 3),
            ],
            mode_system: ModeSystem::Recommended,
            comma_style: CommaStyle::Simple,
            failure_threshold: Severity::Warning,
            n03_allowlist: ["src", "msg", "tmp", "str", "ptr", "cfg", "db", "html", "http"]
                .map(String::from)
                .to_vec(),
            n04_leet_enabled: false,
            n04_leet_allowlist: ["i18n", "l10n"].map(String::from).to_vec(),
            require_docs_without_module: true,
            public_patterns: Vec::new(),
            extensions: ["pl", "pro", "prolog"].map(String::from).to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ConfigError {
    pub line: usize,
    pub message: String,
}

/// A non-fatal problem found while loading, such as an unknown key.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigWarning {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ConfigWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoadedConfig {
    pub config: Config,
    pub warnings: Vec<ConfigWarning>,
}

impl Config {
    pub fn setting(&self, rule: &str) -> RuleSetting {
        self.rules.get(rule).copied().unwrap_or_default()
    }

    pub fn set_enabled(&mut self, rule: &str, enabled: bool) {
        self.rules.entry(rule.to_string()).or_default().enabled = Some(enabled);
    }

    pub fn set_severity(&mut self, rule: &str, severity: Severity) {
        self.rules.entry(rule.to_string()).or_default().severity = Some(severity);
    }

    pub fn is_inline_goal(&self, ind: &Indicator) -> bool {
        self.inline_goal_allowlist.contains(ind)
    }

    /// Whether a literal's text is allowlisted, comparing integers by value.
    pub fn is_allowed_number(&self, text: &str) -> bool {
        let value = crate::lexer::integer_value(text);
        self.magic_number_allowlist.iter().any(|a| match (value, crate::lexer::integer_value(a)) {
            (Some(x), Some(y)) => x == y,
            _ => a == text,
        })
    }

    /// Overlay one `key = value` setting. Returns a warning for unknown keys.
    pub fn apply(&mut self, key: &str, value: &str) -> Result<Option<String>, String> {
        if let Some(rest) = key.strip_prefix("rule.") {
            let Some((id, field)) = rest.split_once('.') else {
                return Err(format!("malformed rule key `{key}` (expected rule.<ID>.enabled or rule.<ID>.severity)"));
            };
            let warning = (!crate::rules::is_known_rule(id)).then(|| format!("unknown rule id `{id}`"));
            match field {
                "enabled" => self.set_enabled(id, parse_bool(value)?),
                "severity" => self.set_severity(id, value.parse()?),
                _ => return Ok(Some(format!("unknown rule setting `{field}` in `{key}`"))),
            }
            return Ok(warning);
        }
        match key {
            "indent_size" => self.indent_size = parse_count(value, 1)?,
            "max_line_length" => self.max_line_length = parse_count(value, 1)?,
            "clause_lines_info" => self.clause_lines_info = parse_count(value, 1)?,
            "clause_lines_warn" => self.clause_lines_warn = parse_count(value, 1)?,
            "eol_comment_max" => self.eol_comment_max = parse_count(value, 1)?,
            "magic_number_allowlist" => {
                let items = parse_list(value);
                if let Some(bad) = items.iter().find(|s| !is_number_text(s)) {
                    return Err(format!("`{bad}` is not a number"));
                }
                self.magic_number_allowlist = items;
            }
            "inline_goal_allowlist" => {
                self.inline_goal_allowlist = parse_list(value)
                    .iter()
                    .map(|s| parse_indicator(s))
                    .collect::<Result<_, _>>()?;
            }
            "mode_system" => self.mode_system = value.parse()?,
            "comma_style" => self.comma_style = value.parse()?,
            "failure_threshold" | "fail_on" => self.failure_threshold = value.parse()?,
            "n03.allowlist" => self.n03_allowlist = parse_list(value),
            "n04.leet.enabled" => self.n04_leet_enabled = parse_bool(value)?,
            "n04.leet.allowlist" => self.n04_leet_allowlist = parse_list(value),
            "n06.enabled" => self.set_enabled("N06", parse_bool(value)?),
            "require_docs_without_module" => self.require_docs_without_module = parse_bool(value)?,
            "public_patterns" => self.public_patterns = parse_list(value),
            "extensions" => {
                self.extensions = parse_list(value)
                    .into_iter()
                    .map(|e| e.trim_start_matches('.').to_string())
                    .collect()
            }
            _ => return Ok(Some(format!("unknown configuration key `{key}`"))),
        }
        Ok(None)
    }
}

/// Parse a configuration document over the defaults.
pub fn load_config(text: &str) -> Result<LoadedConfig, ConfigError> {
    let mut config = Config::default();
    let mut warnings = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = strip_comment(raw).trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(ConfigError {
                line,
                message: format!("expected `key = value`, found `{content}`"),
            });
        };
        let key = key.trim();
        let value = unquote(value.trim());
        if key.is_empty() {
            return Err(ConfigError {
                line,
                message: "missing key before `=`".to_string(),
            });
        }
        match config.apply(key, value) {
            Ok(Some(message)) => warnings.push(ConfigWarning { line, message }),
            Ok(None) => {}
            Err(message) => {
                return Err(ConfigError {
                    line,
                    message: format!("{key}: {message}"),
                })
            }
        }
    }
    if config.clause_lines_warn < config.clause_lines_info {
        warnings.push(ConfigWarning {
            line: 0,
            message: "clause_lines_warn is below clause_lines_info".to_string(),
        });
    }
    Ok(LoadedConfig { config, warnings })
}

/// `#` starts a comment unless it sits inside double quotes.
fn strip_comment(line: &str) -> &str {
    let mut in_quotes = false;
    for (i, c) in line.char_indices() {
        match c {
            '"' => in_quotes = !in_quotes,
            '#' if !in_quotes => return &line[..i],
            _ => {}
        }
    }
    line
}

fn unquote(value: &str) -> &str {
    value
        .strip_prefix('"')
        .and_then(|v| v.strip_suffix('"'))
        .unwrap_or(value)
}

fn parse_bool(value: &str) -> Result<bool, String> {
    match value {
        "true" | "yes" | "on" => Ok(true),
        "false" | "no" | "off" => Ok(false),
        _ => Err(format!("expected true or false, found `{value}`")),
    }
}

fn parse_count(value: &str, min: usize) -> Result<usize, String> {
    match value.parse::<usize>() {
        Ok(n) if n >= min => Ok(n),
        _ => Err(format!("expected a positive integer, found `{value}`")),
    }
}

fn parse_list(value: &str) -> Vec<String> {
    let inner = value
        .strip_prefix('[')
        .and_then(|v| v.strip_suffix(']'))
        .unwrap_or(value);
    inner
        .split(',')
        .map(|s| unquote(s.trim()).to_string())
        .filter(|s| !s.is_empty())
        .collect()
}

fn is_number_text(s: &str) -> bool {
    let body = s.strip_prefix('-').unwrap_or(s);
    !body.is_empty() && (crate::lexer::integer_value(s).is_some() || body.parse::<f64>().is_ok())
}

pub fn parse_indicator(s: &str) -> Result<Indicator, String> {
    let (name, arity) = s
        .rsplit_once('/')
        .ok_or_else(|| format!("expected name/arity, found `{s}`"))?;
    let arity = arity
        .trim()
        .parse()
        .map_err(|_| format!("bad arity in `{s}`"))?;
    Ok(Indicator::new(name.trim(), arity))
}

/// Minimal glob match supporting `*` and `?`.
pub fn glob_match(pattern: &str, text: &str) -> bool {
    let p: Vec<char> = pattern.chars().collect();
    let t: Vec<char> = text.chars().collect();
    let (mut pi, mut ti) = (0, 0);
    let mut star: Option<(usize, usize)> = None;
    while ti < t.len() {
        if pi < p.len() && (p[pi] == '?' || p[pi] == t[ti]) {
            pi += 1;
            ti += 1;
        } else if pi < p.len() && p[pi] == '*' {
            star = Some((pi, ti));
            pi += 1;
        } else if let Some((sp, st)) = star {
            pi = sp + 1;
            ti = st + 1;
            star = Some((sp, st + 1));
        } else {
            return false;
        }
    }
    p[pi..].iter().all(|&c| c == '*')
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_gives_defaults() {
        let loaded = load_config("").unwrap();
        assert_eq!(loaded.config, Config::default());
        assert!(loaded.warnings.is_empty());
    }

    #[test]
    fn overrides() {
        let text = "# comment\nmax_line_length = 100\nrule.L03.enabled = false\nrule.I04.severity = error # trailing\nmode_system = pldoc\ninline_goal_allowlist = [write/1, nl/0]\n";
        let c = load_config(text).unwrap().config;
        assert_eq!(c.max_line_length, 100);
        assert_eq!(c.setting("L03").enabled, Some(false));
        assert_eq!(c.setting("I04").severity, Some(Severity::Error));
        assert_eq!(c.mode_system, ModeSystem::Pldoc);
        assert_eq!(c.inline_goal_allowlist.len(), 2);
    }

    #[test]
    fn unknown_keys_warn() {
        let loaded = load_config("colour = blue\nrule.Z99.enabled = true\n").unwrap();
        assert_eq!(loaded.warnings.len(), 2);
        assert_eq!(loaded.warnings[0].line, 1);
        assert_eq!(loaded.warnings[1].line, 2);
    }

    #[test]
    fn malformed_lines_fail_with_line_number() {
        let err = load_config("indent_size = 4\nnonsense\n").unwrap_err();
        assert_eq!(err.line, 2);
        let err = load_config("indent_size = four\n").unwrap_err();
        assert_eq!(err.line, 1);
    }

    #[test]
    fn allowlisted_numbers_compare_integers_by_value() {
        let c = Config::default();
        assert!(c.is_allowed_number("0x1"));
        assert!(c.is_allowed_number("-1"));
        assert!(!c.is_allowed_number("3"));
    }

    #[test]
    fn globs() {
        assert!(glob_match("api_*", "api_call"));
        assert!(glob_match("*", ""));
        assert!(glob_match("a?c", "abc"));
        assert!(!glob_match("a*d", "abc"));
    }
}
