//! Naming rules N01 to N07.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use crate::diagnostics::Diagnostic;
use crate::program::{Clause, Indicator};
use crate::rules::Context;
use crate::source::Span;
use crate::term::{Notation, Term, TermKind};

/// An identifier split into words.
///
/// `separators[i]` is the underscore run before `segments[i]`; the first
/// holds any leading underscores. Case transitions split with an empty
/// separator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentifierWords {
    pub original: String,
    pub segments: Vec<String>,
    pub separators: Vec<String>,
    pub trailing_digits: Option<String>,
}

impl IdentifierWords {
    pub fn rejoin(&self) -> String {
        let mut s = String::new();
        for (sep, seg) in self.separators.iter().zip(&self.segments) {
            s.push_str(sep);
            s.push_str(seg);
        }
        if let Some(d) = &self.trailing_digits {
            s.push_str(d);
        }
        s
    }

    /// Non-empty words.
    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.segments.iter().map(String::as_str).filter(|s| !s.is_empty())
    }
}

pub fn split_identifier(s: &str) -> IdentifierWords {
    let body_end = s
        .char_indices()
        .rev()
        .take_while(|(_, c)| c.is_ascii_digit())
        .last()
        .map(|(i, _)| i)
        .unwrap_or(s.len());
    let (body, digits) = if body_end == 0 { (s, "") } else { s.split_at(body_end) };
    let mut segments = Vec::new();
    let mut separators = Vec::new();
    let mut sep = String::new();
    let mut seg = String::new();
    let mut prev: Option<char> = None;
    for c in body.chars() {
        if c == '_' {
            if !seg.is_empty() {
                separators.push(std::mem::take(&mut sep));
                segments.push(std::mem::take(&mut seg));
            }
            sep.push('_');
        } else {
            if c.is_uppercase() && prev.is_some_and(|p| p.is_lowercase()) && !seg.is_empty() {
                separators.push(std::mem::take(&mut sep));
                segments.push(std::mem::take(&mut seg));
            }
            seg.push(c);
        }
        prev = Some(c);
    }
    if !seg.is_empty() || !sep.is_empty() || segments.is_empty() {
        separators.push(sep);
        segments.push(seg);
    }
    IdentifierWords {
        original: s.to_string(),
        segments,
        separators,
        trailing_digits: (!digits.is_empty()).then(|| digits.to_string()),
    }
}

pub fn has_intercaps(s: &str) -> bool {
    let chars: Vec<char> = s.chars().collect();
    chars.windows(2).any(|w| w[0].is_lowercase() && w[1].is_uppercase())
}

fn capitalize(w: &str) -> String {
    let mut c = w.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

fn rebuild(words: &IdentifierWords, f: impl Fn(&str) -> String) -> String {
    let mut s = String::new();
    for (i, (sep, seg)) in words.separators.iter().zip(&words.segments).enumerate() {
        if sep.is_empty() && i > 0 {
            s.push('_');
        } else {
            s.push_str(sep);
        }
        s.push_str(&f(seg));
    }
    if let Some(d) = &words.trailing_digits {
        s.push_str(d);
    }
    s
}

/// Underscore-style spelling of an intercaps atom.
pub fn suggest_atom(name: &str) -> String {
    rebuild(&split_identifier(name), |w| w.to_lowercase())
}

/// Underscore-style spelling of an intercaps variable.
pub fn suggest_variable(name: &str) -> String {
    rebuild(&split_identifier(name), capitalize)
}

#[derive(Debug, Clone)]
struct Ident {
    name: String,
    span: Span,
    variable: bool,
    /// Clause index, for clause-scoped variable reporting.
    item: usize,
}

fn identifiers(ctx: &Context) -> Vec<Ident> {
    let mut out = Vec::new();
    for (item, clause) in ctx.program.items.iter().enumerate() {
        clause.term.walk(&mut |t: &Term| match &t.kind {
            TermKind::Var(v) => out.push(Ident {
                name: v.clone(),
                span: t.span,
                variable: true,
                item,
            }),
            TermKind::Atom(a) if !a.is_quoted() => out.push(Ident {
                name: a.name.clone(),
                span: t.span,
                variable: false,
                item,
            }),
            TermKind::Compound {
                functor,
                functor_span,
                notation,
                ..
            } if !functor.is_quoted() && !matches!(notation, Notation::List | Notation::Curly) => {
                out.push(Ident {
                    name: functor.name.clone(),
                    span: *functor_span,
                    variable: false,
                    item,
                })
            }
            _ => {}
        });
    }
    out.sort_by_key(|i| i.span.byte_start);
    out
}

/// Identifiers subject to naming rules, first occurrence only: atoms once
/// per file, variables once per clause.
fn distinct(ctx: &Context) -> Vec<Ident> {
    let mut seen = HashSet::new();
    identifiers(ctx)
        .into_iter()
        .filter(|i| {
            if i.variable && i.name.starts_with('_') {
                return false;
            }
            if !i.name.chars().any(char::is_alphabetic) {
                return false;
            }
            let scope = if i.variable { Some(i.item) } else { None };
            seen.insert((i.name.clone(), i.variable, scope))
        })
        .collect()
}

fn predicate_at(ctx: &Context, item: usize) -> Option<Indicator> {
    ctx.program.items.get(item).and_then(Clause::indicator)
}

pub fn n01(ctx: &Context) -> Vec<Diagnostic> {
    distinct(ctx)
        .into_iter()
        .filter(|i| has_intercaps(&i.name))
        .map(|i| {
            let (kind, suggestion) = if i.variable {
                ("variable", suggest_variable(&i.name))
            } else {
                ("atom", suggest_atom(&i.name))
            };
            ctx.diag(
                "N01",
                i.span,
                format!("{kind} `{}` uses intercaps; separate words with underscores", i.name),
            )
            .with_suggestion(suggestion)
            .with_predicate(predicate_at(ctx, i.item))
        })
        .collect()
}

fn exempt_final_word(w: &str) -> bool {
    matches!(w, "in" | "out" | "tmp")
}

pub fn n02(ctx: &Context) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for i in distinct(ctx).into_iter().filter(|i| i.variable) {
        let words = split_identifier(&i.name);
        let last = words.segments.len() - 1;
        let bad = words.segments.iter().enumerate().any(|(k, seg)| {
            k > 0
                && !words.separators[k].is_empty()
                && seg.chars().next().is_some_and(char::is_lowercase)
                && !(k == last && exempt_final_word(seg))
        });
        if !bad {
            continue;
        }
        let fixed = {
            let mut w = words.clone();
            for (k, seg) in w.segments.iter_mut().enumerate() {
                if !(k == last && exempt_final_word(seg)) {
                    *seg = capitalize(seg);
                }
            }
            w.rejoin()
        };
        out.push(
            ctx.diag(
                "N02",
                i.span,
                format!("variable `{}` has words that do not begin with a capital", i.name),
            )
            .with_suggestion(fixed)
            .with_predicate(predicate_at(ctx, i.item)),
        );
    }
    out
}

fn unpronounceable(word: &str, allow: &[String]) -> bool {
    let letters: String = word.chars().filter(|c| c.is_alphabetic()).collect::<String>().to_lowercase();
    letters.chars().count() >= 4
        && !letters.chars().any(|c| "aeiouy".contains(c))
        && !allow.iter().any(|a| a.eq_ignore_ascii_case(&letters))
}

pub fn n03(ctx: &Context) -> Vec<Diagnostic> {
    let allow = &ctx.config.n03_allowlist;
    let mut out = Vec::new();
    for i in distinct(ctx) {
        let words = split_identifier(&i.name);
        let found = words.words().find(|w| unpronounceable(w, allow)).map(str::to_string);
        if let Some(w) = found {
            out.push(
                ctx.diag(
                    "N03",
                    i.span,
                    format!("`{}` is hard to pronounce: `{w}` has no vowel", i.name),
                )
                .with_predicate(predicate_at(ctx, i.item)),
            );
        }
    }
    out
}

const NUMBER_WORDS: [&str; 20] = [
    "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten", "eleven", "twelve",
    "thirteen", "fourteen", "fifteen", "sixteen", "seventeen", "eighteen", "nineteen", "twenty",
];

pub fn number_word_value(w: &str) -> Option<usize> {
    let lower = w.to_lowercase();
    NUMBER_WORDS.iter().position(|n| *n == lower).map(|p| p + 1)
}

fn replace_segment(words: &IdentifierWords, k: usize, with: &str) -> String {
    let mut w = words.clone();
    w.segments[k] = with.to_string();
    w.rejoin()
}

/// Letter, digits, letter.
fn is_leet(name: &str) -> bool {
    let c: Vec<char> = name.chars().collect();
    (1..c.len()).any(|i| {
        c[i].is_ascii_digit() && c[i - 1].is_alphabetic() && {
            let mut j = i;
            while j < c.len() && c[j].is_ascii_digit() {
                j += 1;
            }
            j < c.len() && c[j].is_alphabetic()
        }
    })
}

pub fn n04(ctx: &Context) -> Vec<Diagnostic> {
    let cfg = ctx.config;
    let mut out = Vec::new();
    let pred_names: BTreeSet<String> = ctx.predicates.iter().map(|p| p.indicator.name.clone()).collect();
    let sibling = |words: &IdentifierWords, k: usize| {
        pred_names.iter().any(|other| {
            if other == &words.original {
                return false;
            }
            let o = split_identifier(other);
            o.segments.len() == words.segments.len()
                && o.trailing_digits == words.trailing_digits
                && (0..o.segments.len()).all(|j| {
                    if j == k {
                        number_word_value(&o.segments[j]).is_some()
                    } else {
                        o.segments[j].eq_ignore_ascii_case(&words.segments[j])
                    }
                })
        })
    };
    for i in distinct(ctx) {
        let words = split_identifier(&i.name);
        let last = words.segments.len() - 1;
        let mut found = None;
        for (k, seg) in words.segments.iter().enumerate() {
            let Some(n) = number_word_value(seg) else { continue };
            let suffix = k == last && k > 0 && words.trailing_digits.is_none() && !words.separators[k].is_empty();
            let predicate = !i.variable && pred_names.contains(&i.name);
            if suffix || (predicate && sibling(&words, k)) {
                found = Some((seg.clone(), replace_segment(&words, k, &n.to_string())));
                break;
            }
        }
        if let Some((word, suggestion)) = found {
            out.push(
                ctx.diag(
                    "N04",
                    i.span,
                    format!("`{}` spells the number `{word}` as a word; use digits", i.name),
                )
                .with_suggestion(suggestion)
                .with_predicate(predicate_at(ctx, i.item)),
            );
        } else if cfg.n04_leet_enabled
            && is_leet(&i.name)
            && !cfg.n04_leet_allowlist.iter().any(|a| a.eq_ignore_ascii_case(&i.name))
        {
            out.push(
                ctx.diag(
                    "N04",
                    i.span,
                    format!("`{}` embeds digits between letters; spell the words out", i.name),
                )
                .with_predicate(predicate_at(ctx, i.item)),
            );
        }
    }
    out
}

fn aux_base(name: &str) -> Option<&str> {
    let trimmed = name.trim_end_matches(|c: char| c.is_ascii_digit());
    trimmed.strip_suffix("_aux").filter(|b| !b.is_empty())
}

pub fn n05(ctx: &Context) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for def in &ctx.predicates {
        let Some(base) = aux_base(&def.indicator.name) else { continue };
        let clause = def.first_clause(ctx.program);
        let span = clause
            .head()
            .map(|h| match &crate::program::strip_module(h).kind {
                TermKind::Compound { functor_span, .. } => *functor_span,
                _ => h.span,
            })
            .unwrap_or(clause.span);
        out.push(
            ctx.diag(
                "N05",
                span,
                format!(
                    "predicate {} uses the _aux suffix; prefer a name such as {base}_case, {base}_loop, {base}_unguarded, or {base} with a different arity",
                    def.indicator
                ),
            )
            .with_predicate(Some(def.indicator.clone())),
        );
    }
    out
}

/// Whether `[H|T]` follows the singular/plural convention.
pub fn list_names_match(head: &str, tail: &str) -> bool {
    let stem = tail.strip_suffix('s').unwrap_or(tail);
    tail == format!("{head}s") || (!stem.is_empty() && (stem.starts_with(head) || head.starts_with(stem)))
}

pub fn n06(ctx: &Context) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for (item, clause) in ctx.program.items.iter().enumerate() {
        clause.term.walk(&mut |t: &Term| {
            let TermKind::Compound {
                notation: Notation::List,
                args,
                ..
            } = &t.kind
            else {
                return;
            };
            if !t.is(".", 2) {
                return;
            }
            let (Some(h), Some(tl)) = (args[0].var_name(), args[1].var_name()) else {
                return;
            };
            if h.starts_with('_') || tl.starts_with('_') || list_names_match(h, tl) {
                return;
            }
            out.push(
                ctx.diag(
                    "N06",
                    t.span,
                    format!("list pattern [{h}|{tl}]: name the tail after the head, as in [{h}|{h}s]"),
                )
                .with_suggestion(format!("[{h}|{h}s]"))
                .with_predicate(predicate_at(ctx, item)),
            );
        });
    }
    out
}

/// `Base` and number of a numbered variable such as `State1`.
fn numbered(name: &str) -> Option<(&str, u32)> {
    let base = name.trim_end_matches(|c: char| c.is_ascii_digit());
    if base.is_empty() || base.len() == name.len() {
        return None;
    }
    name[base.len()..].parse().ok().map(|n| (base, n))
}

fn in_out_style(name: &str) -> bool {
    let lower = name.to_lowercase();
    lower.ends_with("_in") || lower.ends_with("_out")
}

pub fn n07(ctx: &Context) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for (item, clause) in ctx.program.items.iter().enumerate() {
        let vars = clause.term.variables();
        let mut first: BTreeMap<&str, Span> = BTreeMap::new();
        for v in &vars {
            let name = v.var_name().unwrap_or_default();
            if !name.starts_with('_') {
                first.entry(name).or_insert(v.span);
            }
        }
        let mut families: BTreeMap<&str, BTreeSet<u32>> = BTreeMap::new();
        for name in first.keys() {
            if let Some((base, n)) = numbered(name) {
                families.entry(base).or_default().insert(n);
            }
        }
        let mixes = first.keys().any(|n| in_out_style(n));
        for (base, nums) in families {
            if !nums.contains(&0) {
                continue;
            }
            let max = *nums.iter().max().unwrap_or(&0);
            let missing: Vec<String> = (0..max)
                .filter(|k| !nums.contains(k))
                .map(|k| format!("{base}{k}"))
                .collect();
            if let Some(gap) = (0..max).find(|k| !nums.contains(k)) {
                let after_n = nums.iter().copied().find(|&n| n > gap).unwrap_or(max);
                let after = format!("{base}{after_n}");
                let span = first.get(after.as_str()).copied().unwrap_or(clause.span);
                out.push(
                    ctx.diag(
                        "N07",
                        span,
                        format!(
                            "state variables {base}0..{base}{max} skip {}",
                            missing.join(", ")
                        ),
                    )
                    .with_predicate(predicate_at(ctx, item)),
                );
            }
            let chained = nums.len() > 1 || first.contains_key(base);
            if mixes && chained {
                let span = first.get(format!("{base}0").as_str()).copied().unwrap_or(clause.span);
                out.push(
                    ctx.diag(
                        "N07",
                        span,
                        format!("clause mixes numbered state variables ({base}0, ...) with the _in/_out convention"),
                    )
                    .with_predicate(predicate_at(ctx, item)),
                );
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Config;
    use crate::rules::lint_source;
    use crate::source::SourceFile;

    fn lint_cfg(text: &str, rule: &str, cfg: &Config) -> Vec<Diagnostic> {
        let src = SourceFile::from_text("t.pl", text);
        lint_source(&src, cfg).into_iter().filter(|d| d.rule_id == rule).collect()
    }

    fn lint(text: &str, rule: &str) -> Vec<Diagnostic> {
        lint_cfg(text, rule, &Config::default())
    }

    #[test]
    fn splitting_round_trips() {
        for s in ["isWellFormed", "Result_so_far", "State0", "__x__y_", "a", "X1y2", "_", "ABC"] {
            assert_eq!(split_identifier(s).rejoin(), s);
        }
        let w = split_identifier("isWellFormed");
        assert_eq!(w.segments, ["is", "Well", "Formed"]);
        let w = split_identifier("State_tmp1");
        assert_eq!(w.segments, ["State", "tmp"]);
        assert_eq!(w.trailing_digits.as_deref(), Some("1"));
    }

    #[test]
    fn intercaps() {
        let d = lint("p :-\n    isWellFormed.\n", "N01");
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].suggestion.as_deref(), Some("is_well_formed"));
        let d = lint("p(ResultSoFar) :-\n    q(ResultSoFar).\n", "N01");
        assert_eq!(d[0].suggestion.as_deref(), Some("Result_So_Far"));
        assert!(lint("p :-\n    'isWellFormed'.\n", "N01").is_empty());
    }

    #[test]
    fn variable_capitals() {
        let d = lint("p(Result_so_far) :-\n    q(Result_so_far).\n", "N02");
        assert_eq!(d[0].suggestion.as_deref(), Some("Result_So_Far"));
        assert!(lint("p(E_in, Es_out, State_tmp1) :-\n    q(E_in, Es_out, State_tmp1).\n", "N02").is_empty());
    }

    #[test]
    fn pronounceable() {
        assert!(lint("stlacie.\n", "N03").is_empty());
        assert_eq!(lint("strngth.\n", "N03").len(), 1);
        assert!(lint("html_page.\n", "N03").is_empty());
    }

    #[test]
    fn number_words() {
        assert_eq!(lint("step_one.\n", "N04").len(), 1);
        assert_eq!(lint("one_step.\n\ntwo_step.\n", "N04").len(), 2);
        assert!(lint("one_step.\n", "N04").is_empty());
        assert!(lint("exe2bin.\n", "N04").is_empty());
        let mut cfg = Config::default();
        cfg.n04_leet_enabled = true;
        assert_eq!(lint_cfg("exe2bin.\n", "N04", &cfg).len(), 1);
        assert!(lint_cfg("i18n.\n", "N04", &cfg).is_empty());
    }

    #[test]
    fn aux_suffix() {
        assert_eq!(lint("walk_aux(X) :-\n    q(X).\n", "N05").len(), 1);
        assert!(lint("walk_loop(X) :-\n    q(X).\n", "N05").is_empty());
    }

    #[test]
    fn list_patterns() {
        assert!(list_names_match("Tree", "Trees"));
        assert!(list_names_match("X", "Xs"));
        assert!(!list_names_match("Tree", "Xs"));
        assert!(!list_names_match("First", "Rest"));
        let mut cfg = Config::default();
        assert!(lint_cfg("p([Tree|Xs]) :-\n    q(Tree, Xs).\n", "N06", &cfg).is_empty());
        cfg.set_enabled("N06", true);
        assert_eq!(lint_cfg("p([Tree|Xs]) :-\n    q(Tree, Xs).\n", "N06", &cfg).len(), 1);
        assert!(lint_cfg("p([Tree|Trees]) :-\n    q(Tree, Trees).\n", "N06", &cfg).is_empty());
    }

    #[test]
    fn state_chains() {
        let d = lint("p(State0, State) :-\n    q(State0, State2),\n    r(State2, State).\n", "N07");
        assert_eq!(d.len(), 1);
        assert!(d[0].message.contains("State1"));
        assert!(lint("p(S0, S) :-\n    q(S0, S1),\n    r(S1, S).\n", "N07").is_empty());
        assert!(lint("p(L1, L2) :-\n    q(L1, L3),\n    r(L3, L2).\n", "N07").is_empty());
        let mixed = "p(S0, S, A_in, A_out) :-\n    q(S0, S, A_in, A_out).\n";
        assert_eq!(lint(mixed, "N07").len(), 1);
    }
}
