//! Rule registry and the lint driver.

pub mod docs;
pub mod idioms;
pub mod layout;
pub mod naming;

use std::collections::{BTreeSet, HashMap};
use std::panic::{catch_unwind, AssertUnwindSafe};

use crate::config::Config;
use crate::diagnostics::{sort_diagnostics, Diagnostic, Severity, INTERNAL_ERROR};
use crate::program::{group_predicates, PredicateDef, Program};
use crate::source::{SourceFile, Span};

/// Static description of a rule for the catalog.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleDescriptor {
    pub id: &'static str,
    pub title: &'static str,
    /// The guideline the rule enforces.
    pub guideline: &'static str,
    pub default_severity: Severity,
    pub default_enabled: bool,
    /// Configuration keys the rule reads, with their defaults.
    pub parameters: &'static [(&'static str, &'static str)],
}

pub type Check = fn(&Context) -> Vec<Diagnostic>;

pub struct Rule {
    pub descriptor: RuleDescriptor,
    pub check: Check,
}

/// Everything a rule may look at.
pub struct Context<'a> {
    pub src: &'a SourceFile,
    pub program: &'a Program,
    pub config: &'a Config,
    pub predicates: Vec<PredicateDef>,
    item_of_token: HashMap<usize, usize>,
}

impl<'a> Context<'a> {
    pub fn new(src: &'a SourceFile, program: &'a Program, config: &'a Config) -> Context<'a> {
        let item_of_token = program
            .items
            .iter()
            .enumerate()
            .flat_map(|(i, c)| c.tokens.clone().map(move |t| (t, i)))
            .collect();
        Context {
            src,
            program,
            config,
            predicates: group_predicates(program),
            item_of_token,
        }
    }

    /// Clause owning a token, if the token was read as part of one.
    pub fn item_of_token(&self, token: usize) -> Option<usize> {
        self.item_of_token.get(&token).copied()
    }

    /// A diagnostic with the rule's default severity.
    pub fn diag(&self, id: &str, span: Span, message: impl Into<String>) -> Diagnostic {
        let severity = descriptor(id).map_or(Severity::Warning, |d| d.default_severity);
        Diagnostic::new(id, severity, span, message)
    }
}

macro_rules! rule {
    ($id:literal, $title:literal, $guideline:literal, $sev:ident, $enabled:literal, [$($k:literal = $v:literal),*], $check:path) => {
        Rule {
            descriptor: RuleDescriptor {
                id: $id,
                title: $title,
                guideline: $guideline,
                default_severity: Severity::$sev,
                default_enabled: $enabled,
                parameters: &[$(($k, $v)),*],
            },
            check: $check,
        }
    };
}

static RULES: &[Rule] = &[
    rule!("L01", "no tab characters in layout", "Indent with spaces instead of tabs.", Warning, true, [], layout::l01),
    rule!("L02", "indentation is a multiple of the indent size", "Use an indent size of 4 spaces; indent all but the first line of each clause.", Warning, true, ["indent_size" = "4"], layout::l02),
    rule!("L03", "line length", "Limit the length of source code lines.", Warning, true, ["max_line_length" = "79"], layout::l03),
    rule!("L04", "clause length", "Limit the length (number of lines) of clauses.", Info, true, ["clause_lines_info" = "24", "clause_lines_warn" = "48"], layout::l04),
    rule!("L05", "one subgoal per line", "Put each subgoal on a separate line.", Warning, true, ["inline_goal_allowlist" = "write/1, nl/0, print/1, format/1, format/2, format/3"], layout::l05),
    rule!("L06", "clause begins on a new line at column 1", "Begin each clause on a new line.", Warning, true, [], layout::l06),
    rule!("L07", "space after commas", "Be consistent in the use of space around commas.", Warning, true, ["comma_style" = "simple"], layout::l07),
    rule!("L08", "disjunction and if-then-else shape", "Decide how to format disjunctions and if-then-elses.", Warning, true, [], layout::l08),
    rule!("L09", "repeat loop indentation", "Indent an additional level between repeat and the corresponding cut.", Warning, true, ["indent_size" = "4"], layout::l09),
    rule!("L10", "long end-of-line comment", "Avoid comments to the right of the code.", Hint, true, ["eol_comment_max" = "40"], layout::l10),
    rule!("L11", "file header comment", "A source file should begin with a standard header.", Hint, true, [], layout::l11),
    rule!("L12", "vertical spacing between predicates", "Skip a line before the first clause of the next predicate.", Hint, true, [], layout::l12),
    rule!("N01", "underscore-separated identifiers", "Use underscores to separate words in compound identifiers.", Warning, true, [], naming::n01),
    rule!("N02", "capitalize every word of a variable", "Prefer Result_So_Far to Result_so_far.", Hint, true, [], naming::n02),
    rule!("N03", "pronounceable names", "Make all names pronounceable.", Hint, true, ["n03.allowlist" = "src, msg, tmp, str, ptr, cfg, db, html, http"], naming::n03),
    rule!("N04", "numbers written as words", "Within names, do not express numbers as words.", Hint, true, ["n04.leet.enabled" = "false", "n04.leet.allowlist" = "i18n, l10n"], naming::n04),
    rule!("N05", "_aux suffix", "Use _aux only when all else seems inappropriate.", Hint, true, [], naming::n05),
    rule!("N06", "singular/plural list patterns", "Match a list of trees to [Tree|Trees].", Hint, false, ["n06.enabled" = "false"], naming::n06),
    rule!("N07", "threaded state variable names", "Consistently name threaded state variables.", Hint, true, [], naming::n07),
    rule!("D01", "documented public predicates", "Begin every predicate with an introductory comment in a well-defined format.", Warning, true, ["require_docs_without_module" = "true", "public_patterns" = ""], docs::d01),
    rule!("D02", "doc head syntax", "Use argument mode specifiers from one system.", Warning, true, ["mode_system" = "recommended"], docs::d02),
    rule!("D03", "doc head matches the predicate", "Document multiple arities with one block only when each head matches a definition.", Warning, true, [], docs::d03),
    rule!("D04", "determinism documented", "The degree of determinism must always be documented.", Info, true, [], docs::d04),
    rule!("D05", "argument names match the doc", "Head argument names should be the same as in the documentation.", Hint, true, [], docs::d05),
    rule!("D06", "auxiliary predicates use a single %", "Make main comments visibly distinct from auxiliary ones.", Hint, true, [], docs::d06),
    rule!("D07", "inputs before outputs", "Place inputs, then intermediate results, then final results.", Hint, true, ["mode_system" = "recommended"], docs::d07),
    rule!("I01", "cut at the end of the last clause", "Look out for a cut at the end of the last clause of a predicate.", Warning, true, [], idioms::i01),
    rule!("I02", "repeat without a cut", "Look out for a repeat not followed by a cut.", Warning, true, [], idioms::i02),
    rule!("I03", "append with a one-element list", "Look out for append with a one-element list as its first argument.", Hint, true, [], idioms::i03),
    rule!("I04", "singleton variables", "Heed the compiler's warnings about singleton variables.", Warning, true, [], idioms::i04),
    rule!("I05", "magic numbers", "Isolate magic numbers: make each one the argument of a fact.", Hint, true, ["magic_number_allowlist" = "0, 1, -1, 2"], idioms::i05),
    rule!("I06", "reminder and debugging tags", "Tag temporary code with %D, %TBD: or %FIX: and clear them out.", Info, true, [], idioms::i06),
    rule!("I07", "parenthesize conjunctions inside disjunctions", "Use layout and parentheses to indicate precedence.", Hint, true, [], idioms::i07),
];

pub fn registry() -> &'static [Rule] {
    RULES
}

pub fn catalog() -> impl Iterator<Item = &'static RuleDescriptor> {
    RULES.iter().map(|r| &r.descriptor)
}

pub fn descriptor(id: &str) -> Option<&'static RuleDescriptor> {
    catalog().find(|d| d.id == id)
}

/// Rule ids of the registry plus the parser and internal ids.
pub fn is_known_rule(id: &str) -> bool {
    descriptor(id).is_some()
        || matches!(
            id,
            crate::diagnostics::LEX_ERROR | crate::diagnostics::SYNTAX_ERROR | INTERNAL_ERROR
        )
}

pub fn is_enabled(config: &Config, id: &str) -> bool {
    let default = descriptor(id).is_none_or(|d| d.default_enabled);
    config.setting(id).enabled.unwrap_or(default)
}

/// Rule ids named by `% prolint: allow ID...` comments on each clause's first line.
fn suppressions(program: &Program) -> Vec<(Span, BTreeSet<String>)> {
    let mut out = Vec::new();
    for clause in &program.items {
        let line = clause.span.start_line;
        let mut ids = BTreeSet::new();
        for c in &program.comments {
            if c.span.start_line != line {
                continue;
            }
            if let Some(pos) = c.text.find("prolint: allow") {
                let rest = &c.text[pos + "prolint: allow".len()..];
                ids.extend(
                    rest.split(|ch: char| ch == ',' || ch.is_whitespace())
                        .map(|s| s.trim_end_matches("*/"))
                        .filter(|s| !s.is_empty())
                        .map(str::to_string),
                );
            }
        }
        if !ids.is_empty() {
            out.push((clause.span, ids));
        }
    }
    out
}

/// Run every enabled rule. `parse_diags` are the lexer and reader
/// diagnostics; they are always kept and never suppressed.
pub fn run(src: &SourceFile, program: &Program, parse_diags: &[Diagnostic], config: &Config) -> Vec<Diagnostic> {
    let ctx = Context::new(src, program, config);
    let allowed = suppressions(program);
    let mut out: Vec<Diagnostic> = parse_diags.to_vec();
    for rule in RULES {
        let id = rule.descriptor.id;
        if !is_enabled(config, id) {
            continue;
        }
        let found = catch_unwind(AssertUnwindSafe(|| (rule.check)(&ctx)));
        match found {
            Ok(diags) => {
                let over = config.setting(id).severity;
                for mut d in diags {
                    let suppressed = allowed.iter().any(|(span, ids)| {
                        ids.contains(&d.rule_id)
                            && span.byte_start <= d.span.byte_start
                            && d.span.byte_start < span.byte_end
                    });
                    if suppressed {
                        continue;
                    }
                    if let Some(s) = over {
                        d.severity = s;
                    }
                    out.push(d);
                }
            }
            Err(_) => out.push(Diagnostic::new(
                INTERNAL_ERROR,
                Severity::Error,
                src.span(0, 0),
                format!("internal error while running rule {id}; its results were dropped"),
            )),
        }
    }
    sort_diagnostics(&mut out);
    out
}

/// Scan, parse and lint one file.
pub fn lint_source(src: &SourceFile, config: &Config) -> Vec<Diagnostic> {
    let (program, diags) = crate::reader::parse_source(src);
    run(src, &program, &diags, config)
}
