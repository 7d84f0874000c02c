//! Layout rules L01 to L12: raw lines, tokens and clause shapes.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::body::{is_branching, is_cut, leaf_goals, sequences};
use crate::config::CommaStyle;
use crate::diagnostics::{Diagnostic, Severity};
use crate::lexer::{Token, TokenKind};
use crate::program::{strip_module, Attachment, Clause, ClauseKind, Indicator};
use crate::rules::Context;
use crate::term::{Notation, Term, TermKind};

/// Byte ranges of tokens whose text is data or commentary.
fn opaque_ranges(tokens: &[Token]) -> Vec<(usize, usize)> {
    tokens
        .iter()
        .filter(|t| t.kind.is_opaque())
        .map(|t| (t.span.byte_start, t.span.byte_end))
        .collect()
}

pub fn l01(ctx: &Context) -> Vec<Diagnostic> {
    let opaque = opaque_ranges(&ctx.program.tokens);
    let mut out = Vec::new();
    let mut oi = 0;
    for line in &ctx.src.lines {
        if !line.has_tab {
            continue;
        }
        let text = &ctx.src.content[line.byte_start..line.byte_end];
        for (off, c) in text.char_indices() {
            if c != '\t' {
                continue;
            }
            let b = line.byte_start + off;
            while oi < opaque.len() && opaque[oi].1 <= b {
                oi += 1;
            }
            if oi < opaque.len() && opaque[oi].0 <= b {
                continue;
            }
            let col = text[..off].chars().count() + 1;
            let leading = text[..off].chars().all(|c| c == ' ' || c == '\t');
            let message = if leading {
                "tab character used for indentation"
            } else {
                "tab character used for spacing"
            };
            out.push(
                ctx.diag("L01", ctx.src.span_at(line.number, col, 1), message)
                    .with_suggestion("replace tabs with spaces"),
            );
            break;
        }
    }
    out
}

/// Start offsets of goals and control parentheses in a clause body.
fn structural_offsets(clause: &Clause) -> HashSet<usize> {
    let mut set = HashSet::new();
    if let Some(body) = clause.body() {
        for seq in sequences(body) {
            for g in seq {
                set.insert(g.outer_span().byte_start);
                if let Some(p) = g.parens {
                    set.insert(p.close.byte_start);
                }
            }
        }
        let mut stack = vec![body];
        while let Some(t) = stack.pop() {
            if is_branching(t) || t.is(",", 2) || t.is("\\+", 1) {
                if let Some(p) = t.parens {
                    set.insert(p.open.byte_start);
                    set.insert(p.close.byte_start);
                }
                stack.extend(t.args());
            }
        }
    }
    set
}

pub fn l02(ctx: &Context) -> Vec<Diagnostic> {
    let unit = ctx.config.indent_size;
    let tokens = &ctx.program.tokens;
    let mut out = Vec::new();
    for clause in &ctx.program.items {
        let structural = structural_offsets(clause);
        let first_line = clause.span.start_line;
        // open-bracket line for each close token
        let mut stack: Vec<usize> = Vec::new();
        let mut opened_on: HashMap<usize, usize> = HashMap::new();
        for k in clause.tokens.clone() {
            let t = &tokens[k];
            if t.kind.is_open() {
                stack.push(t.span.start_line);
            } else if t.kind.is_close() {
                if let Some(line) = stack.pop() {
                    opened_on.insert(k, line);
                }
            }
        }
        for k in clause.tokens.clone().skip(1) {
            let t = &tokens[k];
            if !t.preceded_by_newline {
                continue;
            }
            let indent = t.span.start_col - 1;
            if indent == 0 && t.kind.is_close() && opened_on.get(&k) == Some(&first_line) {
                continue;
            }
            let strict = t.kind.is_comment() || structural.contains(&t.span.byte_start);
            let message = if indent < unit {
                Some(format!(
                    "line inside a clause is indented {indent} spaces; indent it at least {unit}"
                ))
            } else if strict && !indent.is_multiple_of(unit) {
                Some(format!(
                    "indentation of {indent} spaces is not a multiple of {unit}"
                ))
            } else {
                None
            };
            if let Some(message) = message {
                out.push(
                    ctx.diag("L02", t.span, message)
                        .with_predicate(clause.indicator()),
                );
            }
        }
    }
    out
}

pub fn l03(ctx: &Context) -> Vec<Diagnostic> {
    let max = ctx.config.max_line_length;
    ctx.src
        .lines
        .iter()
        .filter(|l| l.length > max)
        .map(|l| {
            ctx.diag(
                "L03",
                ctx.src.span_at(l.number, max + 1, l.length - max),
                format!("line is {} characters long (maximum {max})", l.length),
            )
        })
        .collect()
}

pub fn l04(ctx: &Context) -> Vec<Diagnostic> {
    let cfg = ctx.config;
    let mut out = Vec::new();
    for clause in &ctx.program.items {
        let lines = clause.span.end_line - clause.span.start_line + 1;
        let (limit, severity) = if lines > cfg.clause_lines_warn {
            (cfg.clause_lines_warn, Severity::Warning)
        } else if lines > cfg.clause_lines_info {
            (cfg.clause_lines_info, Severity::Info)
        } else {
            continue;
        };
        let head = &ctx.program.tokens[clause.tokens.start];
        let mut d = ctx.diag(
            "L04",
            head.span,
            format!("clause is {lines} lines long (more than {limit})"),
        );
        d.severity = severity;
        out.push(d.with_predicate(clause.indicator()));
    }
    out
}

fn goal_label(t: &Term) -> String {
    match Indicator::of(t) {
        Some(ind) => ind.to_string(),
        None => t.to_canonical(),
    }
}

pub fn l05(ctx: &Context) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let mut reported = BTreeSet::new();
    for clause in &ctx.program.items {
        if !matches!(clause.kind, ClauseKind::Rule | ClauseKind::GrammarRule) {
            continue;
        }
        let Some(body) = clause.body() else { continue };
        for seq in sequences(body) {
            for pair in seq.windows(2) {
                let (prev, next) = (pair[0], pair[1]);
                let next_span = next.outer_span();
                if next_span.start_line != prev.outer_span().end_line {
                    continue;
                }
                let inline = |t: &Term| {
                    Indicator::of(strip_module(t)).is_some_and(|i| ctx.config.is_inline_goal(&i))
                };
                if inline(prev) && inline(next) {
                    continue;
                }
                if !reported.insert(next_span.start_line) {
                    continue;
                }
                out.push(
                    ctx.diag(
                        "L05",
                        next_span,
                        format!(
                            "goal {} shares a line with the previous goal; put each subgoal on a separate line",
                            goal_label(next)
                        ),
                    )
                    .with_predicate(clause.indicator()),
                );
            }
        }
    }
    out
}

pub fn l06(ctx: &Context) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for clause in &ctx.program.items {
        let t = &ctx.program.tokens[clause.tokens.start];
        let message = if !t.preceded_by_newline {
            "clause begins on the same line as preceding code; begin each clause on a new line".to_string()
        } else if t.span.start_col != 1 {
            format!(
                "clause begins at column {}; begin each clause at column 1",
                t.span.start_col
            )
        } else {
            continue;
        };
        out.push(ctx.diag("L06", t.span, message).with_predicate(clause.indicator()));
    }
    out
}

/// Terms whose brackets hold goals or goal arguments rather than data:
/// functional heads and goals, and the braces of grammar-rule bodies.
pub(crate) fn goal_terms(clause: &Clause) -> Vec<&Term> {
    fn mark<'a>(t: &'a Term, out: &mut Vec<&'a Term>) {
        let t = strip_module(t);
        if matches!(
            t.kind,
            TermKind::Compound {
                notation: Notation::Functional,
                ..
            }
        ) {
            out.push(t);
        }
    }
    let mut out = Vec::new();
    if let Some(head) = clause.head() {
        mark(head, &mut out);
    }
    if let Some(body) = clause.body() {
        for g in leaf_goals(body) {
            mark(g.term, &mut out);
        }
    }
    if clause.kind == ClauseKind::GrammarRule {
        if let Some(body) = clause.body() {
            body.walk(&mut |t| {
                if matches!(
                    t.kind,
                    TermKind::Compound {
                        notation: Notation::Curly,
                        ..
                    }
                ) {
                    out.push(t);
                }
            });
        }
    }
    out
}

/// Offsets of the open tokens of [`goal_terms`].
fn goal_brackets(clause: &Clause) -> HashSet<usize> {
    goal_terms(clause)
        .into_iter()
        .filter_map(|t| match &t.kind {
            TermKind::Compound {
                notation: Notation::Curly,
                functor_span,
                ..
            } => Some(functor_span.byte_start),
            TermKind::Compound { functor_span, .. } => Some(functor_span.byte_end),
            _ => None,
        })
        .collect()
}

/// Whether each comma token of a clause sits inside a data structure.
pub(crate) fn data_commas(clause: &Clause, tokens: &[Token]) -> HashMap<usize, bool> {
    let goals = goal_brackets(clause);
    let mut stack: Vec<bool> = Vec::new();
    let mut out = HashMap::new();
    for k in clause.tokens.clone() {
        let t = &tokens[k];
        let here = stack.last().copied().unwrap_or(false);
        match t.kind {
            TokenKind::OpenParen => {
                let functor = k > 0 && t.adjacent_to(&tokens[k - 1]) && tokens[k - 1].kind.is_name();
                let data = if functor {
                    !goals.contains(&t.span.byte_start)
                } else {
                    here
                };
                stack.push(data);
            }
            TokenKind::OpenBracket => stack.push(true),
            TokenKind::OpenBrace => stack.push(!goals.contains(&t.span.byte_start)),
            TokenKind::CloseParen | TokenKind::CloseBracket | TokenKind::CloseBrace => {
                stack.pop();
            }
            TokenKind::Comma => {
                out.insert(k, here);
            }
            _ => {}
        }
    }
    out
}

pub fn l07(ctx: &Context) -> Vec<Diagnostic> {
    let tokens = &ctx.program.tokens;
    let structured = ctx.config.comma_style == CommaStyle::Structured;
    let mut out = Vec::new();
    for clause in &ctx.program.items {
        let data = if structured {
            data_commas(clause, tokens)
        } else {
            HashMap::new()
        };
        for k in clause.tokens.clone() {
            let t = &tokens[k];
            if t.kind != TokenKind::Comma {
                continue;
            }
            let Some(next) = tokens.get(k + 1) else { continue };
            if next.span.start_line != t.span.end_line {
                continue;
            }
            let gap = next.span.start_col - t.span.end_col;
            let is_data = data.get(&k).copied().unwrap_or(false);
            let message = if is_data {
                (gap > 0).then(|| "comma inside a data structure is followed by a space".to_string())
            } else if gap == 0 {
                Some("comma is not followed by a space".to_string())
            } else if gap > 1 && !structured && !next.kind.is_comment() {
                Some(format!("comma is followed by {gap} spaces; use exactly one"))
            } else {
                None
            };
            if let Some(message) = message {
                out.push(ctx.diag("L07", t.span, message).with_predicate(clause.indicator()));
            }
        }
    }
    out
}

pub fn l08(ctx: &Context) -> Vec<Diagnostic> {
    let tokens = &ctx.program.tokens;
    let mut out = Vec::new();
    for clause in &ctx.program.items {
        for k in clause.tokens.clone() {
            let t = &tokens[k];
            if t.kind != TokenKind::Punct || t.text != ";" {
                continue;
            }
            let next = tokens[k + 1..clause.tokens.end]
                .iter()
                .find(|n| !n.kind.is_comment());
            let shares_line = k > 0 && tokens[k - 1].span.end_line == t.span.start_line;
            if shares_line && next.is_some_and(|n| n.span.start_line > t.span.end_line) {
                out.push(
                    ctx.diag(
                        "L08",
                        t.span,
                        "`;` at the end of a line is easy to miss; start the next line with it",
                    )
                    .with_predicate(clause.indicator()),
                );
            }
        }
        if let Some(body) = clause.body() {
            check_shape(ctx, clause, body, false, &mut out);
        }
    }
    out
}

fn check_shape(ctx: &Context, clause: &Clause, t: &Term, chain_child: bool, out: &mut Vec<Diagnostic>) {
    let branching = t.is(";", 2) || t.is("->", 2) || t.is("*->", 2);
    if branching && !(chain_child && !t.is_parenthesized()) && t.span.is_multiline() {
        let name = t.name().unwrap_or_default();
        match t.parens {
            None => out.push(
                ctx.diag(
                    "L08",
                    t.span,
                    format!("multi-line `{name}` must be enclosed in parentheses"),
                )
                .with_predicate(clause.indicator()),
            ),
            Some(p) if p.open.start_col != p.close.start_col => out.push(
                ctx.diag(
                    "L08",
                    p.close,
                    format!(
                        "closing parenthesis at column {} is not below the opening one at column {}",
                        p.close.start_col, p.open.start_col
                    ),
                )
                .with_predicate(clause.indicator()),
            ),
            Some(_) => {}
        }
    }
    if t.is(";", 2) || t.is("|", 2) {
        for a in t.args() {
            let chain = a.is(";", 2) || a.is("->", 2) || a.is("*->", 2);
            check_shape(ctx, clause, a, chain, out);
        }
    } else if branching || t.is(",", 2) {
        for a in t.args() {
            check_shape(ctx, clause, a, false, out);
        }
    } else if t.is("\\+", 1) {
        check_shape(ctx, clause, &t.args()[0], false, out);
    }
}

pub fn l09(ctx: &Context) -> Vec<Diagnostic> {
    let unit = ctx.config.indent_size;
    let mut out = Vec::new();
    for clause in &ctx.program.items {
        let Some(body) = clause.body() else { continue };
        for seq in sequences(body) {
            for (i, g) in seq.iter().enumerate() {
                if !g.is_atom("repeat") {
                    continue;
                }
                let Some(j) = seq[i + 1..].iter().position(|t| is_cut(t)).map(|p| p + i + 1) else {
                    continue;
                };
                let base = line_start_indent(ctx, g, clause, unit);
                let want = base + unit;
                for (k, inner) in seq.iter().enumerate().take(j).skip(i + 1) {
                    // A later repeat opens a nested region that owns this goal.
                    if seq[i + 1..k].iter().any(|t| t.is_atom("repeat")) {
                        continue;
                    }
                    let span = inner.outer_span();
                    let Some(line) = ctx.src.line(span.start_line) else { continue };
                    if line.indent_width != span.start_col - 1 {
                        continue;
                    }
                    if line.indent_width != want {
                        out.push(
                            ctx.diag(
                                "L09",
                                span,
                                format!(
                                    "goal between repeat and its cut is indented {} spaces; indent it {want}",
                                    line.indent_width
                                ),
                            )
                            .with_predicate(clause.indicator()),
                        );
                    }
                }
            }
        }
    }
    out
}

/// Indentation of a goal's line, or the body indent if the goal shares
/// the head line.
fn line_start_indent(ctx: &Context, g: &Term, clause: &Clause, unit: usize) -> usize {
    let span = g.outer_span();
    match ctx.src.line(span.start_line) {
        Some(line) if line.indent_width == span.start_col - 1 => line.indent_width,
        _ if span.start_line == clause.span.start_line => unit,
        _ => span.start_col - 1,
    }
}

/// Comment tokens that follow code on the same line.
pub(crate) fn end_of_line_comments(tokens: &[Token]) -> Vec<usize> {
    let mut out = Vec::new();
    let mut last_code_line = 0;
    for (k, t) in tokens.iter().enumerate() {
        if t.kind.is_comment() {
            if t.span.start_line == last_code_line && !t.span.is_multiline() {
                out.push(k);
            }
        } else {
            last_code_line = t.span.end_line;
        }
    }
    out
}

pub fn l10(ctx: &Context) -> Vec<Diagnostic> {
    let max = ctx.config.eol_comment_max;
    let tokens = &ctx.program.tokens;
    end_of_line_comments(tokens)
        .into_iter()
        .filter_map(|k| {
            let t = &tokens[k];
            let len = t.text.chars().count();
            (len > max).then(|| {
                ctx.diag(
                    "L10",
                    t.span,
                    format!("end-of-line comment is {len} characters long (more than {max}); move it above the code"),
                )
            })
        })
        .collect()
}

fn is_header_at(tokens: &[Token], k: usize) -> bool {
    match tokens.get(k) {
        Some(t) if t.kind == TokenKind::BlockComment => true,
        Some(t) if t.kind == TokenKind::LineComment => {
            let line = t.span.start_line;
            let following = tokens[k + 1..]
                .iter()
                .enumerate()
                .take_while(|(i, n)| {
                    n.kind == TokenKind::LineComment && n.span.start_line == line + i + 1 && n.preceded_by_newline
                })
                .count();
            following >= 2
        }
        _ => false,
    }
}

pub fn l11(ctx: &Context) -> Vec<Diagnostic> {
    let tokens = &ctx.program.tokens;
    if tokens.is_empty() || is_header_at(tokens, 0) {
        return Vec::new();
    }
    if let Some(m) = &ctx.program.module {
        let item = &ctx.program.items[m.item];
        if m.item == 0 && item.tokens.start == 0 && is_header_at(tokens, item.tokens.end) {
            return Vec::new();
        }
    }
    let first = &tokens[0];
    let message = if first.kind == TokenKind::LineComment {
        "file header should be a block comment or at least 3 comment lines"
    } else {
        "file does not begin with a header comment"
    };
    vec![ctx.diag("L11", first.span, message)]
}

pub fn l12(ctx: &Context) -> Vec<Diagnostic> {
    let program = ctx.program;
    let mut first_comment_line: HashMap<usize, usize> = HashMap::new();
    for c in &program.comments {
        if let Attachment::Preceding(i) = c.attachment {
            first_comment_line.entry(i).or_insert(c.span.start_line);
        }
    }
    let mut out = Vec::new();
    for (i, pair) in program.items.windows(2).enumerate() {
        let (a, b) = (&pair[0], &pair[1]);
        if a.is_directive() || b.is_directive() {
            continue;
        }
        let (Some(ia), Some(ib)) = (a.indicator(), b.indicator()) else {
            continue;
        };
        let start = first_comment_line
            .get(&(i + 1))
            .copied()
            .unwrap_or(b.span.start_line);
        if start <= a.span.end_line {
            continue;
        }
        let blanks = (a.span.end_line + 1..start)
            .filter(|&n| ctx.src.blank_line(n))
            .count();
        let same = ia == ib && (a.kind == ClauseKind::GrammarRule) == (b.kind == ClauseKind::GrammarRule);
        let head = &program.tokens[b.tokens.start];
        if same && blanks > 0 {
            out.push(
                ctx.diag("L12", head.span, format!("blank line between clauses of {ib}"))
                    .with_predicate(Some(ib)),
            );
        } else if !same && blanks == 0 {
            out.push(
                ctx.diag(
                    "L12",
                    head.span,
                    format!("no blank line between {ia} and {ib}"),
                )
                .with_predicate(Some(ib)),
            );
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use crate::config::Config;
    use crate::diagnostics::Diagnostic;
    use crate::rules::lint_source;
    use crate::source::SourceFile;

    fn lint(text: &str, rule: &str) -> Vec<Diagnostic> {
        lint_with(text, rule, &Config::default())
    }

    fn lint_with(text: &str, rule: &str, cfg: &Config) -> Vec<Diagnostic> {
        let src = SourceFile::from_text("t.pl", text);
        lint_source(&src, cfg)
            .into_iter()
            .filter(|d| d.rule_id == rule)
            .collect()
    }

    #[test]
    fn tabs_outside_quotes_only() {
        let d = lint("p :-\n\tq.\n", "L01");
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].message, "tab character used for indentation");
        assert_eq!((d[0].span.start_line, d[0].span.start_col), (2, 1));
        assert!(lint("p :-\n    q('\t').\n", "L01").is_empty());
        assert!(lint("% a\tb\np.\n", "L01").is_empty());
    }

    #[test]
    fn indentation_units() {
        assert!(lint("p :-\n    q,\n    r.\n", "L02").is_empty());
        assert_eq!(lint("p :-\n  q,\n  r.\n", "L02").len(), 2);
        assert_eq!(lint("p :-\n      q.\n", "L02").len(), 1);
        // continuation inside a term accepts any indent past one unit
        assert!(lint("p :-\n    q(a,\n      b).\n", "L02").is_empty());
        assert!(lint("long(\n    a,\n    b\n) :-\n    q.\n", "L02").is_empty());
    }

    #[test]
    fn line_length() {
        let long = format!("p :-\n    q('{}').\n", "x".repeat(80));
        let d = lint(&long, "L03");
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].span.start_col, 80);
    }

    #[test]
    fn clause_length_tiers() {
        let body = |n: usize| {
            let goals: Vec<String> = (0..n).map(|i| format!("    g{i}")).collect();
            format!("p :-\n{}.\n", goals.join(",\n"))
        };
        assert!(lint(&body(23), "L04").is_empty());
        let d = lint(&body(30), "L04");
        assert_eq!(d[0].severity, crate::diagnostics::Severity::Info);
        let d = lint(&body(60), "L04");
        assert_eq!(d[0].severity, crate::diagnostics::Severity::Warning);
    }

    #[test]
    fn one_goal_per_line() {
        let d = lint("p :- a, b.\n", "L05");
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].span.start_col, 9);
        assert!(lint(
            "p(T) :-\n    write('CPU time = '), write(T), write(' msec'), nl.\n",
            "L05"
        )
        .is_empty());
        assert_eq!(lint("p :-\n    a, b, c.\n", "L05").len(), 1);
    }

    #[test]
    fn clause_start_column() {
        assert_eq!(lint(" p.\n", "L06").len(), 1);
        assert_eq!(lint("p. q.\n", "L06").len(), 1);
        assert!(lint("p.\nq.\n", "L06").is_empty());
    }

    #[test]
    fn comma_spacing() {
        assert_eq!(lint("p(a,b).\n", "L07").len(), 1);
        assert_eq!(lint("p(a,  b).\n", "L07").len(), 1);
        assert!(lint("p(a, b) :-\n    q,\n    r.\n", "L07").is_empty());
        let mut cfg = Config::default();
        cfg.comma_style = crate::config::CommaStyle::Structured;
        assert!(lint_with("p([1,2], f(x,y)) :-\n    q(a, [b,c]).\n", "L07", &cfg).is_empty());
        assert_eq!(lint_with("p :-\n    q(a, [b, c]).\n", "L07", &cfg).len(), 1);
    }

    #[test]
    fn disjunction_shape() {
        let d = lint("p :-\n    (   a ;\n        b\n    ).\n", "L08");
        assert_eq!(d.len(), 1, "{d:?}");
        assert!(lint("p :-\n    (   a\n    ;   b\n    ).\n", "L08").is_empty());
        assert_eq!(lint("p :-\n    (   a\n    ;   b\n      ).\n", "L08").len(), 1);
        assert_eq!(lint("p :-\n    a\n    ;\n    b.\n", "L08").len(), 1);
        let ite = "p :-\n    (   t1 ->\n        a\n    ;   t2 ->\n        b\n    ;   c\n    ).\n";
        assert!(lint(ite, "L08").is_empty());
    }

    #[test]
    fn repeat_indentation() {
        let good = "process_queries :-\n    repeat,\n        read_query(Q),\n        handle(Q),\n        Q = [quit],\n    !,\n    write('All done.'), nl.\n";
        assert!(lint(good, "L09").is_empty());
        let bad = good.replace("        ", "    ");
        assert_eq!(lint(&bad, "L09").len(), 3);
    }

    #[test]
    fn eol_comments() {
        assert!(lint("p. % short\n", "L10").is_empty());
        let long = format!("p. % {}\n", "x".repeat(50));
        assert_eq!(lint(&long, "L10").len(), 1);
    }

    #[test]
    fn header() {
        assert_eq!(lint("p.\n", "L11").len(), 1);
        assert!(lint("/* header */\np.\n", "L11").is_empty());
        assert!(lint("% a\n% b\n% c\np.\n", "L11").is_empty());
        assert_eq!(lint("% a\np.\n", "L11").len(), 1);
        assert!(lint(":- module(m, []).\n/* header */\np.\n", "L11").is_empty());
    }

    #[test]
    fn vertical_spacing() {
        assert!(lint("a(1).\na(2).\n\nb.\n", "L12").is_empty());
        assert_eq!(lint("a(1).\n\na(2).\nb.\n", "L12").len(), 2);
        assert!(lint("a(1).\n% note\na(2).\n", "L12").is_empty());
    }
}
