//! Documentation comment heads: `name(+Arg:type, ...) is det`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::config::ModeSystem;
use crate::source::Span;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModeSpecifier {
    /// `*` ground on entry.
    Ground,
    /// `+` nonvar on entry.
    Nonvar,
    /// `=` input that may be var and is left as found.
    Unchanged,
    /// `-` var on entry.
    Var,
    /// `/` var on entry and not shared.
    Unshared,
    /// `>` output that might be nonvar.
    Output,
    /// `?` unspecified.
    Unspecified,
    /// `:` meta-argument.
    Meta,
    /// `@` not further instantiated.
    NotFurther,
    /// `!` mutable structure.
    Mutable,
}

impl ModeSpecifier {
    pub const ALL: [ModeSpecifier; 10] = [
        ModeSpecifier::Ground,
        ModeSpecifier::Nonvar,
        ModeSpecifier::Unchanged,
        ModeSpecifier::Var,
        ModeSpecifier::Unshared,
        ModeSpecifier::Output,
        ModeSpecifier::Unspecified,
        ModeSpecifier::Meta,
        ModeSpecifier::NotFurther,
        ModeSpecifier::Mutable,
    ];

    pub fn symbol(self) -> char {
        match self {
            ModeSpecifier::Ground => '*',
            ModeSpecifier::Nonvar => '+',
            ModeSpecifier::Unchanged => '=',
            ModeSpecifier::Var => '-',
            ModeSpecifier::Unshared => '/',
            ModeSpecifier::Output => '>',
            ModeSpecifier::Unspecified => '?',
            ModeSpecifier::Meta => ':',
            ModeSpecifier::NotFurther => '@',
            ModeSpecifier::Mutable => '!',
        }
    }

    pub fn from_symbol(c: char) -> Option<ModeSpecifier> {
        ModeSpecifier::ALL.into_iter().find(|m| m.symbol() == c)
    }

    /// Specifiers in a system's vocabulary.
    pub fn vocabulary(system: ModeSystem) -> &'static [ModeSpecifier] {
        use ModeSpecifier::*;
        match system {
            ModeSystem::Recommended => &[Ground, Nonvar, Unchanged, Var, Unshared, Output, Unspecified],
            ModeSystem::Pldoc => &[Nonvar, Var, Unspecified, Meta, NotFurther, Mutable],
            ModeSystem::Simple => &[Nonvar, Var, Unspecified],
        }
    }

    pub fn in_system(self, system: ModeSystem) -> bool {
        ModeSpecifier::vocabulary(system).contains(&self)
    }

    /// Thought of as input.
    pub fn is_input(self) -> bool {
        matches!(self, ModeSpecifier::Ground | ModeSpecifier::Nonvar)
    }

    /// Thought of as output and required unbound.
    pub fn is_output(self) -> bool {
        matches!(self, ModeSpecifier::Var | ModeSpecifier::Unshared)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DetSpec {
    Det,
    Semidet,
    Multi,
    Nondet,
}

impl DetSpec {
    pub const ALL: [DetSpec; 4] = [DetSpec::Det, DetSpec::Semidet, DetSpec::Multi, DetSpec::Nondet];

    pub fn as_str(self) -> &'static str {
        match self {
            DetSpec::Det => "det",
            DetSpec::Semidet => "semidet",
            DetSpec::Multi => "multi",
            DetSpec::Nondet => "nondet",
        }
    }
}

impl FromStr for DetSpec {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        DetSpec::ALL.into_iter().find(|d| d.as_str() == s).ok_or(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Marker {
    /// `%%`, `%!` or `/**`: main documentation.
    Double,
    /// `%`: auxiliary predicate.
    Single,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ArgDoc {
    pub mode: Option<ModeSpecifier>,
    pub name: String,
    pub type_name: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DocHead {
    pub predicate_name: String,
    pub args: Vec<ArgDoc>,
    pub determinism: Option<DetSpec>,
    pub comment_span: Span,
    pub marker: Marker,
    /// Written with a `//` suffix: a grammar rule.
    pub grammar: bool,
}

impl DocHead {
    pub fn arity(&self) -> usize {
        self.args.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DocError {
    #[error("mode `{symbol}` is not part of the {system} mode system{}", hint(.symbol))]
    ForeignMode { symbol: char, system: ModeSystem },
    #[error("unknown mode `{symbol}` at column {column}")]
    UnknownMode { symbol: char, column: usize },
    #[error("unknown determinism `{word}` (expected det, semidet, multi or nondet)")]
    UnknownDeterminism { word: String },
    #[error("{message} at column {column}")]
    Malformed { message: String, column: usize },
}

fn hint(symbol: &char) -> String {
    let owners: Vec<&str> = ModeSystem::ALL
        .iter()
        .filter(|s| ModeSpecifier::from_symbol(*symbol).is_some_and(|m| m.in_system(**s)))
        .map(|s| s.as_str())
        .collect();
    if owners.is_empty() {
        String::new()
    } else {
        format!(" (used by {})", owners.join(", "))
    }
}

/// Strip a leading doc marker, returning the marker and the head text.
pub fn strip_marker(text: &str) -> (Marker, &str) {
    let t = text.trim_start();
    if let Some(rest) = t.strip_prefix("/**") {
        return (Marker::Double, rest.trim_start_matches('*'));
    }
    if let Some(rest) = t.strip_prefix("%%").or_else(|| t.strip_prefix("%!")) {
        return (Marker::Double, rest.trim_start_matches('%'));
    }
    if let Some(rest) = t.strip_prefix('%') {
        return (Marker::Single, rest);
    }
    (Marker::Double, t)
}

struct Scanner {
    chars: Vec<char>,
    pos: usize,
    /// Column offset of the head text within the original line.
    base: usize,
}

impl Scanner {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn column(&self) -> usize {
        self.base + self.pos + 1
    }

    fn malformed(&self, message: impl Into<String>) -> DocError {
        DocError::Malformed {
            message: message.into(),
            column: self.column(),
        }
    }

    fn word(&mut self) -> String {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_alphanumeric() || c == '_') {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn eat(&mut self, s: &str) -> bool {
        let n = s.chars().count();
        if self.chars.len() >= self.pos + n && self.chars[self.pos..self.pos + n].iter().copied().eq(s.chars()) {
            self.pos += n;
            true
        } else {
            false
        }
    }
}

/// Parse a head leniently: any mode symbol from any system is accepted.
pub fn parse_doc_head_any(text: &str) -> Result<DocHead, DocError> {
    let (marker, body) = strip_marker(text);
    let base = text.len() - body.len();
    let base = text[..base].chars().count();
    let mut s = Scanner {
        chars: body.chars().collect(),
        pos: 0,
        base,
    };
    s.skip_ws();
    let name = s.word();
    if name.is_empty() || !name.chars().next().is_some_and(|c| c.is_lowercase()) {
        return Err(s.malformed("expected a predicate name"));
    }
    let mut args = Vec::new();
    if s.peek() == Some('(') {
        s.pos += 1;
        loop {
            s.skip_ws();
            args.push(parse_arg(&mut s)?);
            s.skip_ws();
            match s.peek() {
                Some(',') => s.pos += 1,
                Some(')') => {
                    s.pos += 1;
                    break;
                }
                _ => return Err(s.malformed("expected `,` or `)`")),
            }
        }
    }
    let grammar = s.eat("//");
    s.skip_ws();
    let mut determinism = None;
    let save = s.pos;
    if s.word() == "is" {
        s.skip_ws();
        let word = s.word();
        determinism = Some(
            word.parse::<DetSpec>()
                .map_err(|_| DocError::UnknownDeterminism { word: word.clone() })?,
        );
        s.skip_ws();
    } else {
        s.pos = save;
    }
    if s.peek() == Some('.') {
        s.pos += 1;
        s.skip_ws();
    }
    if s.peek().is_some() {
        return Err(s.malformed("unexpected text after the head"));
    }
    Ok(DocHead {
        predicate_name: name,
        args,
        determinism,
        comment_span: Span::default(),
        marker,
        grammar,
    })
}

fn parse_arg(s: &mut Scanner) -> Result<ArgDoc, DocError> {
    let mut mode = None;
    if let Some(c) = s.peek() {
        if !c.is_alphanumeric() && c != '_' {
            match ModeSpecifier::from_symbol(c) {
                Some(m) => {
                    mode = Some(m);
                    s.pos += 1;
                }
                None => {
                    return Err(DocError::UnknownMode {
                        symbol: c,
                        column: s.column(),
                    })
                }
            }
        }
    }
    let name = s.word();
    if !name.chars().next().is_some_and(|c| c.is_uppercase() || c == '_') {
        return Err(s.malformed("expected an argument name starting with a capital letter"));
    }
    s.skip_ws();
    let mut type_name = None;
    if s.peek() == Some(':') {
        s.pos += 1;
        let start = s.pos;
        let mut depth = 0usize;
        while let Some(c) = s.peek() {
            match c {
                '(' | '[' | '{' => depth += 1,
                ')' | ']' | '}' if depth == 0 => break,
                ')' | ']' | '}' => depth -= 1,
                ',' if depth == 0 => break,
                _ => {}
            }
            s.pos += 1;
        }
        let ty: String = s.chars[start..s.pos].iter().collect::<String>().trim().to_string();
        if ty.is_empty() {
            return Err(s.malformed("empty type after `:`"));
        }
        type_name = Some(ty);
    }
    Ok(ArgDoc { mode, name, type_name })
}

/// Parse a head and check its modes against one system.
pub fn parse_doc_head(text: &str, system: ModeSystem) -> Result<DocHead, DocError> {
    let head = parse_doc_head_any(text)?;
    validate(&head, system)?;
    Ok(head)
}

pub fn validate(head: &DocHead, system: ModeSystem) -> Result<(), DocError> {
    for a in &head.args {
        if let Some(m) = a.mode {
            if !m.in_system(system) {
                return Err(DocError::ForeignMode {
                    symbol: m.symbol(),
                    system,
                });
            }
        }
    }
    Ok(())
}

/// Render a head in canonical form, marker included.
pub fn print_doc_head(head: &DocHead) -> String {
    let mut s = String::from(match head.marker {
        Marker::Double => "%% ",
        Marker::Single => "% ",
    });
    s.push_str(&head.predicate_name);
    if !head.args.is_empty() {
        s.push('(');
        for (i, a) in head.args.iter().enumerate() {
            if i > 0 {
                s.push_str(", ");
            }
            if let Some(m) = a.mode {
                s.push(m.symbol());
            }
            s.push_str(&a.name);
            if let Some(t) = &a.type_name {
                s.push(':');
                s.push_str(t);
            }
        }
        s.push(')');
    }
    if head.grammar {
        s.push_str("//");
    }
    if let Some(d) = head.determinism {
        s.push_str(" is ");
        s.push_str(d.as_str());
    }
    s
}

impl fmt::Display for DocHead {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_doc_head(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compare_annotation() {
        let h = parse_doc_head("compare(?R:order, =T1:term, =T2:term)", ModeSystem::Recommended).unwrap();
        let modes: Vec<char> = h.args.iter().map(|a| a.mode.unwrap().symbol()).collect();
        assert_eq!(modes, ['?', '=', '=']);
        let types: Vec<&str> = h.args.iter().map(|a| a.type_name.as_deref().unwrap()).collect();
        assert_eq!(types, ["order", "term", "term"]);
    }

    #[test]
    fn determinism_and_arity_zero() {
        let h = parse_doc_head("nth0(?Index, ?List, ?Elem) is nondet", ModeSystem::Recommended).unwrap();
        assert_eq!(h.arity(), 3);
        assert_eq!(h.determinism, Some(DetSpec::Nondet));
        let h = parse_doc_head("main is det", ModeSystem::Simple).unwrap();
        assert_eq!(h.arity(), 0);
        assert_eq!(h.determinism, Some(DetSpec::Det));
    }

    #[test]
    fn markers() {
        assert_eq!(parse_doc_head_any("%% p(+X) is det.").unwrap().marker, Marker::Double);
        assert_eq!(parse_doc_head_any("%!  p(+X)").unwrap().marker, Marker::Double);
        assert_eq!(parse_doc_head_any("% p(+X)").unwrap().marker, Marker::Single);
        assert!(parse_doc_head_any("%% phrase(+X)//").unwrap().grammar);
    }

    #[test]
    fn foreign_modes() {
        let err = parse_doc_head("p(@X)", ModeSystem::Recommended).unwrap_err();
        assert!(err.to_string().contains('@'));
        assert!(err.to_string().contains("pldoc"));
        assert!(parse_doc_head("p(*X)", ModeSystem::Pldoc).is_err());
        assert!(parse_doc_head("p(#X)", ModeSystem::Pldoc).is_err());
    }

    #[test]
    fn malformed() {
        assert!(parse_doc_head_any("p(+x)").is_err());
        assert!(parse_doc_head_any("p(+X").is_err());
        assert!(parse_doc_head_any("p(+X) is maybe").is_err());
        assert!(parse_doc_head_any("p(+X) and more").is_err());
    }

    #[test]
    fn nested_types() {
        let h = parse_doc_head_any("p(+L:list(pair(K,V)), -N:int)").unwrap();
        assert_eq!(h.args[0].type_name.as_deref(), Some("list(pair(K,V))"));
        assert_eq!(h.args.len(), 2);
    }
}
