//! Property tests for the source model, reader, engine and rule families.

mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::gen;
use proptest::prelude::*;
use prolint::config::{Config, ModeSystem};
use prolint::diagnostics::{Diagnostic, Severity};
use prolint::doc::{parse_doc_head_any, print_doc_head, ArgDoc, DetSpec, DocHead, Marker, ModeSpecifier};
use prolint::lexer::{scan, TokenKind};
use prolint::ops::OperatorTable;
use prolint::reader::{parse_source, parse_term};
use prolint::source::Span;
use prolint::{lint_source, SourceFile};

fn lint(text: &str, cfg: &Config) -> Vec<Diagnostic> {
    lint_source(&SourceFile::from_text("p.pl", text), cfg)
}

fn raw_text() -> impl Strategy<Value = String> {
    prop::collection::vec(
        prop_oneof![
            Just("foo"), Just("X"), Just("_y"), Just("42"), Just("0'a"), Just("3.5e2"),
            Just(" "), Just("  "), Just("\t"), Just("\n"), Just("\r\n"), Just("'q a'"), Just("\"s\""),
            Just("% c\n"), Just("/* b\n */"), Just("("), Just(")"), Just("["), Just("]"),
            Just("{"), Just("}"), Just(","), Just("|"), Just("."), Just(". "), Just(":-"),
            Just("+"), Just("-"), Just("\\+"), Just(";"), Just("->"), Just("'"), Just("\""),
            Just("é"), Just("0x1F"),
        ],
        0..40,
    )
    .prop_map(|parts| parts.concat())
}

fn doc_head(system: ModeSystem) -> impl Strategy<Value = DocHead> {
    let vocab = ModeSpecifier::vocabulary(system).to_vec();
    let arg = (
        prop::option::of(prop::sample::select(vocab)),
        prop::sample::select(vec!["X", "List", "Result_So_Far", "T1", "_Acc"]),
        prop::option::of(prop::sample::select(vec!["integer", "list(T)", "order", "term"])),
    )
        .prop_map(|(mode, name, type_name)| ArgDoc {
            mode,
            name: name.to_string(),
            type_name: type_name.map(str::to_string),
        });
    (
        prop::sample::select(vec!["compare", "same_length", "ord_union", "p"]),
        prop::collection::vec(arg, 0..5),
        prop::option::of(prop::sample::select(DetSpec::ALL.to_vec())),
        prop::bool::ANY,
        prop::bool::ANY,
    )
        .prop_map(|(name, args, determinism, double, grammar)| DocHead {
            predicate_name: name.to_string(),
            args,
            determinism,
            comment_span: Span::default(),
            marker: if double { Marker::Double } else { Marker::Single },
            grammar,
        })
}

/// Variable occurrence counts by a plain walk over the clause's tokens.
fn token_singletons(text: &str) -> BTreeSet<(usize, String)> {
    let src = SourceFile::from_text("p.pl", text);
    let (program, _) = parse_source(&src);
    let mut out = BTreeSet::new();
    for (i, clause) in program.items.iter().enumerate() {
        let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
        for t in &program.tokens[clause.tokens.clone()] {
            if t.kind == TokenKind::Variable && t.text != "_" {
                *counts.entry(t.text.as_str()).or_default() += 1;
            }
        }
        out.extend(
            counts
                .into_iter()
                .filter(|(name, n)| *n == 1 && !name.starts_with('_'))
                .map(|(name, _)| (i, name.to_string())),
        );
    }
    out
}

fn item_of(text: &str, span: Span) -> usize {
    let (program, _) = parse_source(&SourceFile::from_text("p.pl", text));
    program
        .items
        .iter()
        .position(|c| c.span.byte_start <= span.byte_start && span.byte_end <= c.span.byte_end)
        .expect("inside a clause")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn lines_rebuild_content(text in raw_text()) {
        let src = SourceFile::from_text("p.pl", text.clone());
        for (i, l) in src.lines.iter().enumerate() {
            prop_assert_eq!(l.number, i + 1);
            prop_assert!(l.indent_width <= l.length);
            let body = &src.content[l.byte_start..l.byte_end];
            prop_assert_eq!(l.is_blank, body.chars().all(char::is_whitespace));
        }
        let rebuilt: Vec<&str> = src.lines.iter().map(|l| &src.content[l.byte_start..l.byte_end]).collect();
        // The final terminator ends the last line rather than starting a new one.
        let mut joined = rebuilt.join("\n");
        if text.ends_with('\n') {
            joined.push('\n');
        }
        prop_assert_eq!(joined, text.replace("\r\n", "\n"));
    }

    #[test]
    fn scanning_is_lossless_and_deterministic(text in raw_text()) {
        let src = SourceFile::from_text("p.pl", text.clone());
        let (tokens, _) = scan(&src);
        let mut rebuilt = String::new();
        let mut at = 0;
        for t in &tokens {
            prop_assert!(t.span.byte_start >= at, "overlapping tokens");
            let gap = &text[at..t.span.byte_start];
            prop_assert!(gap.chars().all(char::is_whitespace), "non-layout gap {:?}", gap);
            prop_assert_eq!(&text[t.span.byte_start..t.span.byte_end], t.text.as_str());
            rebuilt.push_str(gap);
            rebuilt.push_str(&t.text);
            at = t.span.byte_end;
            if t.kind == TokenKind::End {
                prop_assert!(t.text == ".");
                prop_assert!(text[at..].chars().next().is_none_or(|c| c.is_whitespace() || c == '%'));
            }
        }
        prop_assert!(text[at..].chars().all(char::is_whitespace));
        rebuilt.push_str(&text[at..]);
        prop_assert_eq!(rebuilt, text);
        prop_assert_eq!(scan(&src), scan(&src));
    }

    #[test]
    fn canonical_round_trip(text in gen::term()) {
        let ops = OperatorTable::iso();
        let t = parse_term(&text, &ops).map_err(|e| TestCaseError::fail(format!("{text}: {}", e.message)))?;
        let canon = t.to_canonical();
        let back = parse_term(&canon, &ops).map_err(|e| TestCaseError::fail(format!("{canon}: {}", e.message)))?;
        prop_assert!(t.same_structure(&back), "{} vs {}", canon, back.to_canonical());
    }

    #[test]
    fn every_token_is_accounted_for(text in gen::program()) {
        let (program, _) = parse_source(&SourceFile::from_text("p.pl", text));
        let mut owner = vec![0u8; program.tokens.len()];
        for c in &program.items {
            for k in c.tokens.clone() {
                owner[k] += 1;
            }
        }
        for r in &program.skipped {
            for k in r.clone() {
                owner[k] += 1;
            }
        }
        for (k, t) in program.tokens.iter().enumerate() {
            if t.kind.is_comment() {
                prop_assert!(owner[k] <= 1, "comment {} claimed twice", k);
            } else {
                prop_assert_eq!(owner[k], 1, "token {} `{}`", k, t.text);
            }
        }
        prop_assert_eq!(
            program.comments.len(),
            program.tokens.iter().filter(|t| t.kind.is_comment()).count()
        );
    }

    #[test]
    fn linting_is_deterministic(text in gen::program()) {
        let cfg = Config::default();
        prop_assert_eq!(lint(&text, &cfg), lint(&text, &cfg));
    }

    #[test]
    fn disabling_a_rule_removes_only_its_diagnostics(text in gen::program(), pick in any::<prop::sample::Index>()) {
        let cfg = Config::default();
        let all = lint(&text, &cfg);
        let ids: Vec<String> = all.iter().map(|d| d.rule_id.clone()).collect::<BTreeSet<_>>().into_iter().collect();
        prop_assume!(!ids.is_empty());
        let id = pick.get(&ids);
        let mut off = cfg.clone();
        off.set_enabled(id, false);
        let expected: Vec<Diagnostic> = all.iter().filter(|d| &d.rule_id != id || d.is_syntax()).cloned().collect();
        prop_assert_eq!(lint(&text, &off), expected);
    }

    #[test]
    fn severity_override_changes_only_severity(text in gen::program(), pick in any::<prop::sample::Index>()) {
        let cfg = Config::default();
        let all = lint(&text, &cfg);
        let ids: Vec<String> = all.iter().filter(|d| !d.is_syntax()).map(|d| d.rule_id.clone()).collect::<BTreeSet<_>>().into_iter().collect();
        prop_assume!(!ids.is_empty());
        let id = pick.get(&ids);
        let mut over = cfg.clone();
        over.set_severity(id, Severity::Error);
        let after = lint(&text, &over);
        prop_assert_eq!(after.len(), all.len());
        for (a, b) in all.iter().zip(&after) {
            prop_assert_eq!(&a.rule_id, &b.rule_id);
            prop_assert_eq!(&a.message, &b.message);
            prop_assert_eq!(a.span, b.span);
            let want = if &a.rule_id == id { Severity::Error } else { a.severity };
            prop_assert_eq!(b.severity, want);
        }
    }

    #[test]
    fn one_l05_per_line(text in gen::program()) {
        let mut lines = BTreeSet::new();
        for d in lint(&text, &Config::default()).iter().filter(|d| d.rule_id == "L05") {
            prop_assert!(lines.insert(d.span.start_line), "two L05 on line {}", d.span.start_line);
        }
    }

    #[test]
    fn comment_words_do_not_affect_structure_rules(text in gen::program()) {
        let edited: String = {
            let (program, _) = parse_source(&SourceFile::from_text("p.pl", text.clone()));
            let mut s = text.clone().into_bytes();
            for c in &program.comments {
                for b in &mut s[c.span.byte_start..c.span.byte_end] {
                    if b.is_ascii_lowercase() {
                        *b = b'z';
                    }
                }
            }
            String::from_utf8(s).expect("ascii edit")
        };
        let pick = |t: &str| -> Vec<(String, Span)> {
            lint(t, &Config::default())
                .into_iter()
                .filter(|d| matches!(d.rule_id.as_str(), "L05" | "L06" | "L07" | "L08" | "L09"))
                .map(|d| (d.rule_id, d.span))
                .collect()
        };
        prop_assert_eq!(pick(&text), pick(&edited));
    }

    #[test]
    fn singleton_oracle(text in gen::program()) {
        let (_, diags) = parse_source(&SourceFile::from_text("p.pl", text.clone()));
        prop_assume!(diags.iter().all(|d| !d.is_syntax()));
        let reported: BTreeSet<(usize, String)> = lint(&text, &Config::default())
            .into_iter()
            .filter(|d| d.rule_id == "I04" && d.severity == Severity::Warning)
            .map(|d| (item_of(&text, d.span), text[d.span.byte_start..d.span.byte_end].to_string()))
            .collect();
        prop_assert_eq!(reported, token_singletons(&text));
    }

    #[test]
    fn i01_and_i05_report_at_most_once(text in gen::program()) {
        let diags = lint(&text, &Config::default());
        let mut preds = BTreeSet::new();
        let mut values = BTreeSet::new();
        for d in &diags {
            if d.rule_id == "I01" {
                prop_assert!(preds.insert(d.predicate.clone()));
            }
            if d.rule_id == "I05" {
                prop_assert!(values.insert(d.message.split(' ').nth(1).map(str::to_string)));
            }
        }
    }

    #[test]
    fn doc_heads_round_trip((system, head) in prop::sample::select(ModeSystem::ALL.to_vec())
        .prop_flat_map(|s| (Just(s), doc_head(s))))
    {
        let printed = print_doc_head(&head);
        let back = prolint::doc::parse_doc_head(&printed, system)
            .map_err(|e| TestCaseError::fail(format!("{printed}: {e}")))?;
        prop_assert_eq!(DocHead { comment_span: Span::default(), ..back }, head);
    }
}

fn camel() -> impl Strategy<Value = (String, bool)> {
    (
        prop::collection::vec(prop::sample::select(vec!["list", "sum", "tree", "node", "count", "acc"]), 2..4),
        prop::bool::ANY,
    )
        .prop_map(|(words, variable)| {
            let mut s = String::new();
            for (i, w) in words.iter().enumerate() {
                let mut cs = w.chars();
                let first = cs.next().expect("word");
                if i == 0 && !variable {
                    s.push(first);
                } else {
                    s.extend(first.to_uppercase());
                }
                s.push_str(cs.as_str());
            }
            (s, variable)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn n01_suggestion_is_idempotent((name, variable) in camel()) {
        let text = if variable {
            format!("% header\n\np({name}) :-\n    q({name}).\n")
        } else {
            format!("% header\n\np({name}).\n")
        };
        let d = lint(&text, &Config::default());
        let n01: Vec<&Diagnostic> = d.iter().filter(|d| d.rule_id == "N01").collect();
        prop_assert_eq!(n01.len(), 1);
        let fixed_name = n01[0].suggestion.clone().expect("suggestion");
        let fixed = text.replace(&name, &fixed_name);
        prop_assert!(lint(&fixed, &Config::default()).iter().all(|d| d.rule_id != "N01"));
    }

    #[test]
    fn quoted_atoms_are_exempt_from_naming((name, _) in camel()) {
        let text = format!("% header\n\np('{name}').\np('sum2Total').\n");
        prop_assert!(lint(&text, &Config::default())
            .iter()
            .all(|d| !matches!(d.rule_id.as_str(), "N01" | "N02" | "N03" | "N04")));
    }

    #[test]
    fn renaming_a_singleton_keeps_one_i04(name in "[A-Z][a-z]{0,6}") {
        prop_assume!(name != "X");
        let base = "p(X, Y) :-\n    q(X).\n";
        let renamed = base.replace('Y', &name);
        let count = |t: &str| lint(t, &Config::default()).iter().filter(|d| d.rule_id == "I04").count();
        prop_assert_eq!(count(base), 1);
        prop_assert_eq!(count(&renamed), 1);
    }

    #[test]
    fn mode_system_only_affects_d02_and_d07(
        heads in prop::collection::vec(doc_head(ModeSystem::Recommended), 1..4),
        other in prop::sample::select(vec![ModeSystem::Pldoc, ModeSystem::Simple]),
    ) {
        let mut text = String::from(":- module(m, []).\n\n");
        for h in &heads {
            text.push_str(&print_doc_head(h));
            text.push('\n');
            let args: Vec<&str> = h.args.iter().map(|a| a.name.as_str()).collect();
            if args.is_empty() {
                text.push_str(&format!("{}.\n\n", h.predicate_name));
            } else {
                text.push_str(&format!("{}({}).\n\n", h.predicate_name, args.join(", ")));
            }
        }
        let keep = |sys: ModeSystem| -> Vec<Diagnostic> {
            let mut cfg = Config::default();
            cfg.mode_system = sys;
            lint(&text, &cfg).into_iter().filter(|d| d.rule_id != "D02" && d.rule_id != "D07").collect()
        };
        prop_assert_eq!(keep(ModeSystem::Recommended), keep(other));
    }

    #[test]
    fn d01_silent_without_module_when_not_required(text in gen::program()) {
        let mut cfg = Config::default();
        cfg.require_docs_without_module = false;
        prop_assert!(lint(&text, &cfg).iter().all(|d| d.rule_id != "D01"));
    }
}

#[test]
fn lenient_parse_accepts_every_symbol() {
    for m in ModeSpecifier::ALL {
        let text = format!("%% p({}X) is det", m.symbol());
        assert_eq!(parse_doc_head_any(&text).expect("parses").args[0].mode, Some(m));
    }
}
