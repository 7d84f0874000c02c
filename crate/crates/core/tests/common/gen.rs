//! Generators for random Prolog source text.

use proptest::prelude::*;

pub fn atom() -> impl Strategy<Value = String> {
    prop_oneof![
        Just("a".to_string()),
        Just("foo".to_string()),
        Just("bar_baz".to_string()),
        Just("'Hello world'".to_string()),
        Just("[]".to_string()),
        Just("'it''s'".to_string()),
        Just("(-)".to_string()),
        Just("(=)".to_string()),
    ]
}

pub fn var() -> impl Strategy<Value = String> {
    prop_oneof![
        Just("X".to_string()),
        Just("Y".to_string()),
        Just("Rest".to_string()),
        Just("_".to_string()),
        Just("Acc0".to_string()),
    ]
}

pub fn number() -> impl Strategy<Value = String> {
    prop_oneof![
        Just("0".to_string()),
        Just("1".to_string()),
        Just("-1".to_string()),
        Just("42".to_string()),
        Just("3.5".to_string()),
        Just("0'a".to_string()),
        Just("- 1".to_string()),
    ]
}

pub fn ws() -> impl Strategy<Value = &'static str> {
    prop_oneof![Just(""), Just(" "), Just("  "), Just("\n      ")]
}

pub fn term() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![atom(), var(), number(), Just("\"str\"".to_string())];
    leaf.prop_recursive(3, 24, 4, |inner| {
        let ops = prop_oneof![
            Just("+"),
            Just("-"),
            Just("*"),
            Just("/"),
            Just("^"),
            Just(":"),
            Just("mod"),
            Just("="),
            Just("->"),
            Just(";"),
            Just(","),
            Just("**"),
        ];
        prop_oneof![
            (prop::collection::vec(inner.clone(), 1..4), ws())
                .prop_map(|(args, w)| format!("f({})", args.join(&format!(",{w}")))),
            prop::collection::vec(inner.clone(), 0..4).prop_map(|xs| format!("[{}]", xs.join(", "))),
            (inner.clone(), var()).prop_map(|(h, t)| format!("[{h}|{t}]")),
            (inner.clone(), ops, inner.clone(), ws())
                .prop_map(|(a, op, b, w)| {
                    let w = if w.is_empty() && op == "mod" { " " } else { w };
                    // A prefix minus term has priority 200, above what `**` accepts.
                    let b = if op == "**" && b.starts_with('-') { format!("({b})") } else { b };
                    format!("({a}{w}{op} {b})")
                }),
            inner.clone().prop_map(|a| format!("- ({a})")),
            inner.clone().prop_map(|a| format!("{{{a}}}")),
        ]
    })
}

pub fn simple_goal() -> impl Strategy<Value = String> {
    prop_oneof![
        (atom(), prop::collection::vec(term(), 0..3)).prop_map(|(_, args)| if args.is_empty() {
            "true".to_string()
        } else {
            format!("goal({})", args.join(", "))
        }),
        (var(), term()).prop_map(|(v, t)| format!("{v} = {t}")),
        (var(), term()).prop_map(|(v, t)| format!("{v} is {t}")),
        term().prop_map(|t| format!("\\+ p({t})")),
        Just("!".to_string()),
        Just("lists:append(X, Y, Z)".to_string()),
        Just("findall(X, (member(X, L), X > 1), Xs)".to_string()),
    ]
}

pub fn goal() -> impl Strategy<Value = String> {
    simple_goal().prop_recursive(2, 8, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("( {a} ; {b} )")),
            (inner.clone(), inner.clone(), inner.clone())
                .prop_map(|(c, t, e)| format!("( {c} -> {t} ; {e} )")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}, {b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("\\+ ({a}, {b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("( {a}, {b} ; fail )")),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| format!("repeat, {a}, {b}, !")),
        ]
    })
}

pub fn separator() -> impl Strategy<Value = String> {
    prop_oneof![
        Just(", ".to_string()),
        Just(",\n    ".to_string()),
        Just(",\n\t".to_string()),
        Just(", % note\n    ".to_string()),
        Just(",\n    % own line\n    ".to_string()),
        Just(" ,".to_string()),
    ]
}

pub fn clause(name: &'static str) -> impl Strategy<Value = String> {
    prop_oneof![
        prop::collection::vec(term(), 0..3).prop_map(move |args| if args.is_empty() {
            format!("{name}.")
        } else {
            format!("{name}({}).", args.join(","))
        }),
        (
            prop::collection::vec(term(), 1..3),
            prop::collection::vec((goal(), separator()), 1..5),
            prop::bool::ANY,
        )
            .prop_map(move |(args, goals, trailing)| {
                let mut body = String::from(" ");
                for (i, (g, sep)) in goals.iter().enumerate() {
                    if i > 0 {
                        body.push_str(sep);
                    }
                    body.push_str(g);
                }
                let end = if trailing { ". % done\n" } else { "." };
                format!("{name}({}) :-{body}{end}", args.join(", "))
            }),
    ]
}

pub fn program() -> impl Strategy<Value = String> {
    (
        prop::collection::vec(clause("alpha"), 1..3),
        prop::collection::vec(clause("beta"), 1..3),
        prop::collection::vec(prop_oneof![Just("\n"), Just("\n\n"), Just(" "), Just("\n% between\n")], 4),
        prop::bool::ANY,
    )
        .prop_map(|(a, b, gaps, directive)| {
            let mut out = String::from("/* Generated\n   test file. */\n\n");
            if directive {
                out.push_str(":- dynamic counter/1.\n\n");
            }
            let all: Vec<String> = a.into_iter().chain(b).collect();
            for (i, c) in all.iter().enumerate() {
                if i > 0 {
                    out.push_str(gaps[i % gaps.len()]);
                }
                out.push_str(c);
            }
            out.push('\n');
            out
        })
}
