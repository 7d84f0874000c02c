//! Shared checks for the formatter invariants.

#![allow(dead_code)]

pub mod gen;

use prolint::config::Config;
use prolint::program::Program;
use prolint::reader::parse_source;
use prolint::rules::lint_source;
use prolint::{format_source, SourceFile};

pub fn parse(text: &str) -> Program {
    let src = SourceFile::from_text("t.pl", text);
    let (program, diags) = parse_source(&src);
    assert!(
        diags.iter().all(|d| !d.is_syntax()),
        "unexpected syntax errors {diags:?} in\n{text}"
    );
    program
}

fn comment_texts(p: &Program) -> Vec<String> {
    let mut v: Vec<String> = p.comments.iter().map(|c| c.text.clone()).collect();
    v.sort();
    v
}

/// Check idempotence, structural equality, comment conservation and the
/// layout-rule witness for one input. Returns the formatted text.
pub fn check_invariants(text: &str, cfg: &Config) -> Result<String, String> {
    let src = SourceFile::from_text("t.pl", text);
    let once = format_source(&src, cfg).map_err(|d| format!("refused: {}", d.message))?;
    let twice = format_source(&SourceFile::from_text("t.pl", once.as_str()), cfg)
        .map_err(|d| format!("formatted output does not parse: {}\n{once}", d.message))?;
    if once != twice {
        return Err(format!("not idempotent\n--- input\n{text}\n--- once\n{once}\n--- twice\n{twice}"));
    }
    let before = parse(text);
    let after = parse(&once);
    if before.items.len() != after.items.len() {
        return Err(format!("clause count changed\n{text}\n---\n{once}"));
    }
    for (a, b) in before.items.iter().zip(&after.items) {
        if !a.term.same_structure(&b.term) {
            return Err(format!(
                "clause changed: {} vs {}\n--- input\n{text}\n--- output\n{once}",
                a.term.to_canonical(),
                b.term.to_canonical()
            ));
        }
    }
    if comment_texts(&before) != comment_texts(&after) {
        return Err(format!("comments changed\n{text}\n---\n{once}"));
    }
    let layout: Vec<String> = lint_source(&SourceFile::from_text("t.pl", once.as_str()), cfg)
        .into_iter()
        .filter(|d| d.rule_id.starts_with('L'))
        .map(|d| format!("{} {}:{} {}", d.rule_id, d.span.start_line, d.span.start_col, d.message))
        .collect();
    if !layout.is_empty() {
        return Err(format!("layout diagnostics {layout:#?}\n--- input\n{text}\n--- output\n{once}"));
    }
    Ok(once)
}

/// True when the formatted text has a clause over the length limit. The
/// formatter cannot shorten clauses, so such inputs fall outside the
/// layout witness.
pub fn exceeds_clause_limit(text: &str, cfg: &Config) -> bool {
    let Ok(once) = format_source(&SourceFile::from_text("t.pl", text), cfg) else {
        return false;
    };
    lint_source(&SourceFile::from_text("t.pl", once.as_str()), cfg)
        .iter()
        .any(|d| d.rule_id == "L04")
}
