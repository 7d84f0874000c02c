//! Idiom rules I01 to I07: constructs that are almost always wrong.

use std::collections::BTreeMap;

use crate::body::{final_goal, is_cut, leaf_goals};
use crate::diagnostics::{Diagnostic, Severity};
use crate::lexer::{integer_value, TokenKind};
use crate::program::{strip_module, Clause};
use crate::rules::Context;
use crate::source::Span;
use crate::term::{Term, TermKind};

pub fn i01(ctx: &Context) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for def in &ctx.predicates {
        let clause = def.last_clause(ctx.program);
        let Some(body) = clause.body() else { continue };
        let last = final_goal(body);
        if is_cut(last) {
            out.push(
                ctx.diag(
                    "I01",
                    last.span,
                    format!(
                        "cut at the end of the last clause of {}; if it is intentional, say why in a comment",
                        def.indicator
                    ),
                )
                .with_predicate(Some(def.indicator.clone())),
            );
        }
    }
    out
}

pub fn i02(ctx: &Context) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for clause in &ctx.program.items {
        let Some(body) = clause.body() else { continue };
        let goals = leaf_goals(body);
        for (i, g) in goals.iter().enumerate() {
            if g.term.is_atom("repeat") && !goals[i + 1..].iter().any(|h| is_cut(h.term)) {
                out.push(
                    ctx.diag("I02", g.term.span, "repeat is not followed by a cut in this clause")
                        .with_predicate(clause.indicator()),
                );
            }
        }
    }
    out
}

fn source_text<'a>(ctx: &'a Context, t: &Term) -> &'a str {
    let s = t.outer_span();
    &ctx.src.content[s.byte_start..s.byte_end]
}

pub fn i03(ctx: &Context) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for clause in &ctx.program.items {
        let Some(body) = clause.body() else { continue };
        for g in leaf_goals(body) {
            let t = strip_module(g.term);
            if !t.is("append", 3) {
                continue;
            }
            let Some((items, tail)) = t.args()[0].list_parts() else { continue };
            if items.len() != 1 || !tail.is_atom("[]") {
                continue;
            }
            let elem = source_text(ctx, items[0]);
            let suggestion = format!(
                "{} = [{elem}|{}]",
                source_text(ctx, &t.args()[2]),
                source_text(ctx, &t.args()[1])
            );
            out.push(
                ctx.diag(
                    "I03",
                    t.span,
                    format!("append/3 with the one-element list [{elem}] as its first argument; write [{elem}|Rest] instead"),
                )
                .with_suggestion(suggestion)
                .with_predicate(clause.indicator()),
            );
        }
    }
    out
}

/// Occurrence count and first span of each named variable in a clause.
pub fn variable_counts(clause: &Clause) -> BTreeMap<String, (usize, Span)> {
    let mut counts: BTreeMap<String, (usize, Span)> = BTreeMap::new();
    for v in clause.term.variables() {
        let name = v.var_name().unwrap_or_default();
        if name == "_" {
            continue;
        }
        counts
            .entry(name.to_string())
            .and_modify(|e| e.0 += 1)
            .or_insert((1, v.span));
    }
    counts
}

pub fn i04(ctx: &Context) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for clause in &ctx.program.items {
        for (name, (count, span)) in variable_counts(clause) {
            let d = if name.starts_with('_') {
                if count < 2 {
                    continue;
                }
                let mut d = ctx.diag(
                    "I04",
                    span,
                    format!("variable {name} is used {count} times but its leading underscore marks it as unused"),
                );
                d.severity = Severity::Info;
                d.with_suggestion(name.trim_start_matches('_').to_string())
            } else if count == 1 {
                ctx.diag("I04", span, format!("singleton variable {name}"))
                    .with_suggestion(format!("_{name}"))
            } else {
                continue;
            };
            out.push(d.with_predicate(clause.indicator()));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum NumberKey {
    Int(i128),
    Float(String),
}

fn constant_suggestion(text: &str) -> String {
    let bare = text.trim_start_matches('-');
    if bare.starts_with("3.14") {
        format!("pi({text}).")
    } else if bare.starts_with("2.718") {
        format!("e({text}).")
    } else {
        format!("constant_name({text}).")
    }
}

pub fn i05(ctx: &Context) -> Vec<Diagnostic> {
    let mut seen: BTreeMap<NumberKey, (String, Vec<Span>)> = BTreeMap::new();
    for clause in &ctx.program.items {
        if clause.is_directive() {
            continue;
        }
        clause.term.walk(&mut |t: &Term| {
            let key = match &t.kind {
                TermKind::Integer(text) if !text.trim_start_matches('-').starts_with("0'") => {
                    match integer_value(text) {
                        Some(v) => NumberKey::Int(v),
                        None => NumberKey::Float(text.clone()),
                    }
                }
                TermKind::Float(text) => NumberKey::Float(text.clone()),
                _ => return,
            };
            let text = match &t.kind {
                TermKind::Integer(s) | TermKind::Float(s) => s.clone(),
                _ => unreachable!(),
            };
            if ctx.config.is_allowed_number(&text) {
                return;
            }
            seen.entry(key).or_insert_with(|| (text, Vec::new())).1.push(t.span);
        });
    }
    let mut out: Vec<Diagnostic> = seen
        .into_values()
        .filter(|(_, spans)| spans.len() >= 2)
        .map(|(text, mut spans)| {
            spans.sort_by_key(|s| s.byte_start);
            ctx.diag(
                "I05",
                spans[0],
                format!(
                    "number {text} appears {} times; make it the argument of a fact",
                    spans.len()
                ),
            )
            .with_suggestion(constant_suggestion(&text))
            .with_related(spans)
        })
        .collect();
    out.sort_by_key(|d| d.span.byte_start);
    out
}

/// The reminder tag a line comment starts with, if any.
pub fn reminder_tag(text: &str) -> Option<&'static str> {
    let rest = text.strip_prefix('%')?;
    if rest.starts_with('D') && rest[1..].chars().next().is_none_or(char::is_whitespace) {
        return Some("D");
    }
    let rest = rest.trim_start();
    if rest.starts_with("TBD:") {
        Some("TBD")
    } else if rest.starts_with("FIX:") {
        Some("FIX")
    } else {
        None
    }
}

pub fn i06(ctx: &Context) -> Vec<Diagnostic> {
    ctx.program
        .tokens
        .iter()
        .filter(|t| t.kind == TokenKind::LineComment)
        .filter_map(|t| {
            let tag = reminder_tag(&t.text)?;
            let what = match tag {
                "D" => "debugging code marked %D",
                "TBD" => "to-do note (TBD)",
                _ => "known problem (FIX)",
            };
            Some(ctx.diag("I06", t.span, format!("{what}: {}", t.text.trim())))
        })
        .collect()
}

pub fn i07(ctx: &Context) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for clause in &ctx.program.items {
        let Some(body) = clause.body() else { continue };
        body.walk(&mut |t: &Term| {
            if !t.is(";", 2) {
                return;
            }
            let TermKind::Compound { functor_span, .. } = &t.kind else { return };
            let line = functor_span.start_line;
            for child in t.args() {
                if child.is(",", 2)
                    && !child.is_parenthesized()
                    && child.span.start_line == line
                    && child.span.end_line == line
                {
                    out.push(
                        ctx.diag(
                            "I07",
                            child.span,
                            "conjunction directly inside `;` without parentheses; `a, b ; c` means `(a, b) ; c`",
                        )
                        .with_suggestion("add parentheses around the conjunction")
                        .with_predicate(clause.indicator()),
                    );
                }
            }
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use crate::config::Config;
    use crate::diagnostics::{Diagnostic, Severity};
    use crate::rules::lint_source;
    use crate::source::SourceFile;

    fn lint(text: &str, rule: &str) -> Vec<Diagnostic> {
        let src = SourceFile::from_text("t.pl", text);
        lint_source(&src, &Config::default())
            .into_iter()
            .filter(|d| d.rule_id == rule)
            .collect()
    }

    #[test]
    fn terminal_cut() {
        let last = "count_up(X) :-\n    write(X),\n    Y is X + 1,\n    count_up(Y).\ncount_up(10) :-\n    !.\n";
        assert_eq!(lint(last, "I01").len(), 1);
        let first = "count_up(10) :-\n    !.\ncount_up(X) :-\n    write(X),\n    Y is X + 1,\n    count_up(Y).\n";
        assert!(lint(first, "I01").is_empty());
        assert!(lint("p :-\n    \\+ !.\n", "I01").is_empty());
    }

    #[test]
    fn repeat_without_cut() {
        assert_eq!(lint("p :-\n    repeat,\n    read(X),\n    handle(X).\n", "I02").len(), 1);
        assert!(lint("p :-\n    repeat,\n    read(X),\n    X == end,\n    !.\n", "I02").is_empty());
    }

    #[test]
    fn append_singleton_list() {
        let d = lint("q :-\n    append([X], L, R),\n    use(X, L, R).\n", "I03");
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].suggestion.as_deref(), Some("R = [X|L]"));
        assert!(lint("q :-\n    append([X, Y], L, R),\n    use(X, Y, L, R).\n", "I03").is_empty());
    }

    #[test]
    fn singletons() {
        let d = lint("p(X, Y) :-\n    q(X).\n", "I04");
        assert_eq!(d.len(), 1);
        assert!(d[0].message.contains('Y'));
        let d = lint("p(_X) :-\n    q(_X).\n", "I04");
        assert_eq!(d[0].severity, Severity::Info);
        assert!(lint("p(_, _) :-\n    q(_Y).\n", "I04").is_empty());
    }

    #[test]
    fn magic_numbers() {
        let d = lint("area(R, A) :-\n    A is 3.14159 * R * R.\n\ncirc(R, C) :-\n    C is 2 * 3.14159 * R.\n", "I05");
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].related.len(), 2);
        assert_eq!(d[0].suggestion.as_deref(), Some("pi(3.14159)."));
        assert!(lint("p(3.14159).\np(3.141590).\n", "I05").is_empty());
        assert_eq!(lint("p(42).\np(0x2a).\n", "I05").len(), 1);
        assert!(lint("p(0'a).\np(0'a).\n", "I05").is_empty());
    }

    #[test]
    fn reminder_tags() {
        assert_eq!(super::reminder_tag("%TBD: later"), Some("TBD"));
        assert_eq!(super::reminder_tag("%FIX: broken"), Some("FIX"));
        assert_eq!(super::reminder_tag("%D"), Some("D"));
        assert_eq!(super::reminder_tag("%D debug"), Some("D"));
        assert_eq!(super::reminder_tag("%Done"), None);
        assert_eq!(lint("p :-\n    q. %D\n", "I06").len(), 1);
    }

    #[test]
    fn conjunction_in_disjunction() {
        assert_eq!(lint("p :-\n    ( a, b ; c ).\n", "I07").len(), 1);
        assert!(lint("p :-\n    ( (a, b) ; c ).\n", "I07").is_empty());
    }
}
