//! Documentation rules D01 to D07.

use std::collections::{BTreeSet, HashMap};

use crate::body::leaf_goals;
use crate::config::glob_match;
use crate::diagnostics::Diagnostic;
use crate::doc::{parse_doc_head, parse_doc_head_any, strip_marker, DocHead, Marker};
use crate::lexer::TokenKind;
use crate::program::{strip_module, ClauseKind, Indicator, PredicateDef};
use crate::rules::Context;
use crate::source::Span;
use crate::term::{Term, TermKind};

/// One candidate head line of a doc comment.
#[derive(Debug, Clone)]
pub struct HeadLine {
    pub text: String,
    pub span: Span,
}

/// The documentation comment found above a predicate.
#[derive(Debug, Clone)]
pub struct DocBlock {
    pub marker: Marker,
    pub heads: Vec<HeadLine>,
    pub span: Span,
}

fn main_marker(text: &str) -> bool {
    (text.starts_with("%%") && !text.starts_with("%%%")) || text.starts_with("%!")
}

fn first_word(text: &str) -> &str {
    let (_, body) = strip_marker(text);
    let body = body.trim_start();
    let end = body
        .find(|c: char| !(c.is_alphanumeric() || c == '_'))
        .unwrap_or(body.len());
    &body[..end]
}

/// Locate the doc comment above a clause: the nearest block of own-line
/// comments with only blank lines between it and the clause.
pub fn find_doc(ctx: &Context, item: usize, name: &str) -> Option<DocBlock> {
    let tokens = &ctx.program.tokens;
    let start = ctx.program.items[item].tokens.start;
    let mut k = start.checked_sub(1)?;
    let own_line = |k: usize| tokens[k].kind.is_comment() && tokens[k].preceded_by_newline;
    if !own_line(k) {
        return None;
    }
    while k > 0 && own_line(k - 1) && tokens[k].span.start_line <= tokens[k - 1].span.end_line + 1 {
        k -= 1;
    }
    let block: Vec<usize> = (k..start).collect();
    let first = &tokens[block[0]];
    let span = first.span.join(tokens[start - 1].span);

    if first.kind == TokenKind::BlockComment {
        if !first.text.starts_with("/**") {
            return None;
        }
        let inner = first.text.trim_start_matches("/**").trim_end_matches("*/");
        let line = inner
            .lines()
            .map(|l| l.trim().trim_start_matches('*').trim())
            .find(|l| !l.is_empty())?;
        return Some(DocBlock {
            marker: Marker::Double,
            heads: vec![HeadLine {
                text: line.to_string(),
                span: first.span,
            }],
            span,
        });
    }

    if main_marker(&first.text) {
        let mut heads = vec![HeadLine {
            text: first.text.clone(),
            span: first.span,
        }];
        for &j in &block[1..] {
            let t = &tokens[j];
            if t.kind != TokenKind::LineComment || !main_marker(&t.text) || parse_doc_head_any(&t.text).is_err() {
                break;
            }
            heads.push(HeadLine {
                text: t.text.clone(),
                span: t.span,
            });
        }
        return Some(DocBlock {
            marker: Marker::Double,
            heads,
            span,
        });
    }

    if first.kind == TokenKind::LineComment && first_word(&first.text) == name {
        let looks_like_head = |text: &str| {
            let (_, body) = strip_marker(text);
            body.trim_start()[name.len()..].starts_with('(') || parse_doc_head_any(text).is_ok()
        };
        if !looks_like_head(&first.text) {
            return None;
        }
        let mut heads = vec![HeadLine {
            text: first.text.clone(),
            span: first.span,
        }];
        for &j in &block[1..] {
            let t = &tokens[j];
            if t.kind != TokenKind::LineComment || first_word(&t.text) != name || parse_doc_head_any(&t.text).is_err() {
                break;
            }
            heads.push(HeadLine {
                text: t.text.clone(),
                span: t.span,
            });
        }
        return Some(DocBlock {
            marker: Marker::Single,
            heads,
            span,
        });
    }
    None
}

/// Documentation for every predicate that has some.
fn documented<'a>(ctx: &'a Context) -> Vec<(&'a PredicateDef, DocBlock)> {
    ctx.predicates
        .iter()
        .filter_map(|def| find_doc(ctx, def.clauses[0], &def.indicator.name).map(|b| (def, b)))
        .collect()
}

fn parsed_heads(block: &DocBlock) -> Vec<(DocHead, Span)> {
    block
        .heads
        .iter()
        .filter_map(|h| parse_doc_head_any(&h.text).ok().map(|d| (d, h.span)))
        .collect()
}

/// Goals a body calls, including goal arguments of common meta-predicates.
fn called_goals<'a>(body: &'a Term, out: &mut Vec<&'a Term>) {
    for g in leaf_goals(body) {
        let t = strip_module(g.term);
        out.push(t);
        let meta: &[usize] = match (t.name().unwrap_or_default(), t.arity()) {
            ("findall", 3) | ("findall", 4) | ("bagof", 3) | ("setof", 3) | ("aggregate_all", 3) => &[1],
            ("forall", 2) => &[0, 1],
            ("call", 1) | ("once", 1) | ("ignore", 1) => &[0],
            ("catch", 3) => &[0, 2],
            _ => &[],
        };
        for &i in meta {
            let mut a = &t.args()[i];
            while a.is("^", 2) {
                a = &a.args()[1];
            }
            called_goals(a, out);
        }
    }
}

fn grammar_calls(body: &Term, out: &mut Vec<Indicator>) {
    for g in leaf_goals(body) {
        let t = strip_module(g.term);
        if t.is("{}", 1) {
            let mut goals = Vec::new();
            called_goals(&t.args()[0], &mut goals);
            out.extend(goals.into_iter().filter_map(Indicator::of));
        } else if t.is(".", 2) || t.is_atom("[]") || t.is_atom("!") || matches!(t.kind, TermKind::Str(_)) {
            continue;
        } else if let Some(ind) = Indicator::of(t) {
            out.push(Indicator::new(ind.name, ind.arity + 2));
        }
    }
}

/// Callee (as called) to the names of predicates calling it.
pub fn references(ctx: &Context) -> HashMap<Indicator, BTreeSet<String>> {
    let mut refs: HashMap<Indicator, BTreeSet<String>> = HashMap::new();
    for clause in &ctx.program.items {
        let (Some(caller), Some(body)) = (clause.indicator(), clause.body()) else {
            continue;
        };
        let mut callees = Vec::new();
        if clause.kind == ClauseKind::GrammarRule {
            grammar_calls(body, &mut callees);
        } else {
            let mut goals = Vec::new();
            called_goals(body, &mut goals);
            callees.extend(goals.into_iter().filter_map(Indicator::of));
        }
        for callee in callees {
            refs.entry(callee).or_default().insert(caller.name.clone());
        }
    }
    refs
}

fn head_anchor(ctx: &Context, def: &PredicateDef) -> Span {
    let clause = def.first_clause(ctx.program);
    ctx.program.tokens[clause.tokens.start].span
}

/// Whether D01 expects documentation for a predicate in a module-less file.
fn needs_doc_without_module(ctx: &Context, def: &PredicateDef, refs: &HashMap<Indicator, BTreeSet<String>>) -> bool {
    let name = &def.indicator.name;
    let key = Indicator::new(name.clone(), def.call_arity());
    let called_elsewhere = refs
        .get(&key)
        .is_some_and(|callers| callers.iter().any(|c| c != name));
    let public = ctx
        .config
        .public_patterns
        .iter()
        .any(|p| glob_match(p, name) || glob_match(p, &def.indicator.to_string()));
    called_elsewhere || public
}

pub fn d01(ctx: &Context) -> Vec<Diagnostic> {
    let has_module = ctx.program.module.is_some();
    if !has_module && !ctx.config.require_docs_without_module {
        return Vec::new();
    }
    let refs = if has_module { HashMap::new() } else { references(ctx) };
    let mut out = Vec::new();
    for def in &ctx.predicates {
        let doc = find_doc(ctx, def.clauses[0], &def.indicator.name);
        let message = if has_module {
            if !def.exported {
                continue;
            }
            match doc.map(|d| d.marker) {
                Some(Marker::Double) => continue,
                Some(Marker::Single) => format!(
                    "exported predicate {} is documented with a single %; use %% for its introductory comment",
                    def.indicator
                ),
                None => format!("exported predicate {} has no %% documentation comment", def.indicator),
            }
        } else {
            if doc.is_some() || !needs_doc_without_module(ctx, def, &refs) {
                continue;
            }
            format!(
                "predicate {} is used by other predicates but has no documentation comment",
                def.indicator
            )
        };
        out.push(
            ctx.diag("D01", head_anchor(ctx, def), message)
                .with_predicate(Some(def.indicator.clone())),
        );
    }
    out
}

pub fn d02(ctx: &Context) -> Vec<Diagnostic> {
    let system = ctx.config.mode_system;
    let mut out = Vec::new();
    for (def, block) in documented(ctx) {
        for h in &block.heads {
            if let Err(e) = parse_doc_head(&h.text, system) {
                out.push(
                    ctx.diag("D02", h.span, format!("cannot read doc head for {}: {e}", def.indicator))
                        .with_predicate(Some(def.indicator.clone())),
                );
            }
        }
    }
    out
}

pub fn d03(ctx: &Context) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for (def, block) in documented(ctx) {
        for (head, span) in parsed_heads(&block) {
            let message = if head.predicate_name != def.indicator.name {
                format!(
                    "doc head names `{}` but precedes {}",
                    head.predicate_name, def.indicator
                )
            } else {
                let matches = ctx.predicates.iter().any(|p| {
                    p.indicator.name == head.predicate_name
                        && if head.grammar {
                            p.grammar && p.indicator.arity == head.arity()
                        } else {
                            p.indicator.arity == head.arity() || p.call_arity() == head.arity()
                        }
                });
                if matches {
                    continue;
                }
                format!(
                    "documented arity {}, defined arity {}",
                    head.arity(),
                    def.indicator.arity
                )
            };
            out.push(
                ctx.diag("D03", span, message)
                    .with_predicate(Some(def.indicator.clone())),
            );
        }
    }
    out
}

pub fn d04(ctx: &Context) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for (def, block) in documented(ctx) {
        if block.marker != Marker::Double {
            continue;
        }
        for (head, span) in parsed_heads(&block) {
            if head.determinism.is_none() {
                out.push(
                    ctx.diag(
                        "D04",
                        span,
                        format!(
                            "doc head for {}/{} does not state its determinism (is det, semidet, multi or nondet)",
                            head.predicate_name,
                            head.arity()
                        ),
                    )
                    .with_predicate(Some(def.indicator.clone())),
                );
            }
        }
    }
    out
}

pub fn d05(ctx: &Context) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for (def, block) in documented(ctx) {
        let Some((head, _)) = parsed_heads(&block).into_iter().find(|(h, _)| {
            h.predicate_name == def.indicator.name && h.arity() == def.indicator.arity
        }) else {
            continue;
        };
        let clause = def.first_clause(ctx.program);
        let Some(clause_head) = clause.head().map(strip_module) else { continue };
        for (i, (arg, doc)) in clause_head.args().iter().zip(&head.args).enumerate() {
            let Some(var) = arg.var_name() else { continue };
            if var == "_" {
                continue;
            }
            let bare = var.trim_start_matches('_');
            if bare != doc.name.trim_start_matches('_') {
                out.push(
                    ctx.diag(
                        "D05",
                        arg.span,
                        format!(
                            "argument {} of {} is named {var} here but {} in its documentation",
                            i + 1,
                            def.indicator,
                            doc.name
                        ),
                    )
                    .with_suggestion(doc.name.clone())
                    .with_predicate(Some(def.indicator.clone())),
                );
            }
        }
    }
    out
}

pub fn d06(ctx: &Context) -> Vec<Diagnostic> {
    if ctx.program.module.is_none() {
        return Vec::new();
    }
    documented(ctx)
        .into_iter()
        .filter(|(def, block)| !def.exported && block.marker == Marker::Double)
        .map(|(def, block)| {
            ctx.diag(
                "D06",
                block.heads[0].span,
                format!(
                    "{} is not exported but is documented with %%; use a single % for auxiliary predicates",
                    def.indicator
                ),
            )
            .with_predicate(Some(def.indicator.clone()))
        })
        .collect()
}

pub fn d07(ctx: &Context) -> Vec<Diagnostic> {
    let system = ctx.config.mode_system;
    let mut out = Vec::new();
    for (def, block) in documented(ctx) {
        for h in &block.heads {
            let Ok(head) = parse_doc_head(&h.text, system) else { continue };
            let mut output: Option<&crate::doc::ArgDoc> = None;
            for a in &head.args {
                let Some(m) = a.mode else { continue };
                if m.is_output() && output.is_none() {
                    output = Some(a);
                } else if m.is_input() {
                    if let Some(o) = output {
                        out.push(
                            ctx.diag(
                                "D07",
                                h.span,
                                format!(
                                    "input {}{} follows output {}{}; place inputs before outputs",
                                    m.symbol(),
                                    a.name,
                                    o.mode.map(|m| m.symbol()).unwrap_or('-'),
                                    o.name
                                ),
                            )
                            .with_predicate(Some(def.indicator.clone())),
                        );
                        break;
                    }
                }
            }
        }
    }
    out
}
