//! Parse-tree terms.

use crate::lexer::{integer_value, is_alnum, is_symbol_char, starts_atom};
use crate::source::Span;

/// Atom name plus the verbatim quoted lexeme when the source quoted it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atom {
    pub name: String,
    pub quoted: Option<String>,
}

impl Atom {
    pub fn plain(name: impl Into<String>) -> Atom {
        Atom {
            name: name.into(),
            quoted: None,
        }
    }

    /// Source spelling: the quoted lexeme if any, else the bare name.
    pub fn text(&self) -> &str {
        self.quoted.as_deref().unwrap_or(&self.name)
    }

    pub fn is_quoted(&self) -> bool {
        self.quoted.is_some()
    }
}

/// How a compound was written.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Notation {
    Functional,
    Prefix,
    Infix,
    Postfix,
    /// `[a, b|T]` sugar.
    List,
    /// `{...}`.
    Curly,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TermKind {
    Var(String),
    Atom(Atom),
    /// Integer literal as written.
    Integer(String),
    /// Float literal as written.
    Float(String),
    /// String literal as written, quotes included.
    Str(String),
    Compound {
        functor: Atom,
        functor_span: Span,
        args: Vec<Term>,
        notation: Notation,
    },
}

/// Spans of the outermost explicit parenthesis pair around a term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Parens {
    pub open: Span,
    pub close: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub kind: TermKind,
    /// The term itself, excluding any wrapping parentheses.
    pub span: Span,
    pub parens: Option<Parens>,
}

impl Term {
    pub fn new(kind: TermKind, span: Span) -> Term {
        Term {
            kind,
            span,
            parens: None,
        }
    }

    pub fn atom(name: &str, span: Span) -> Term {
        Term::new(TermKind::Atom(Atom::plain(name)), span)
    }

    pub fn compound(name: &str, args: Vec<Term>, span: Span, notation: Notation) -> Term {
        Term::new(
            TermKind::Compound {
                functor: Atom::plain(name),
                functor_span: span,
                args,
                notation,
            },
            span,
        )
    }

    pub fn is_parenthesized(&self) -> bool {
        self.parens.is_some()
    }

    /// Span including explicit parentheses.
    pub fn outer_span(&self) -> Span {
        match self.parens {
            Some(p) => p.open.join(p.close),
            None => self.span,
        }
    }

    /// Functor name for atoms and compounds.
    pub fn name(&self) -> Option<&str> {
        match &self.kind {
            TermKind::Atom(a) => Some(&a.name),
            TermKind::Compound { functor, .. } => Some(&functor.name),
            _ => None,
        }
    }

    pub fn arity(&self) -> usize {
        match &self.kind {
            TermKind::Compound { args, .. } => args.len(),
            _ => 0,
        }
    }

    pub fn args(&self) -> &[Term] {
        match &self.kind {
            TermKind::Compound { args, .. } => args,
            _ => &[],
        }
    }

    pub fn is_callable(&self) -> bool {
        matches!(self.kind, TermKind::Atom(_) | TermKind::Compound { .. })
    }

    pub fn is_var(&self) -> bool {
        matches!(self.kind, TermKind::Var(_))
    }

    pub fn var_name(&self) -> Option<&str> {
        match &self.kind {
            TermKind::Var(v) => Some(v),
            _ => None,
        }
    }

    /// True for an atom or compound with this name and arity.
    pub fn is(&self, name: &str, arity: usize) -> bool {
        self.name() == Some(name) && self.arity() == arity && self.is_callable()
    }

    pub fn is_atom(&self, name: &str) -> bool {
        matches!(&self.kind, TermKind::Atom(a) if a.name == name)
    }

    /// Elements and tail of a list term (`'.'/2` chain).
    pub fn list_parts(&self) -> Option<(Vec<&Term>, &Term)> {
        if !self.is(".", 2) {
            return None;
        }
        let mut items = Vec::new();
        let mut cur = self;
        while cur.is(".", 2) {
            items.push(&cur.args()[0]);
            cur = &cur.args()[1];
        }
        Some((items, cur))
    }

    /// Pre-order traversal over this term and every subterm.
    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a Term)) {
        f(self);
        for a in self.args() {
            a.walk(f);
        }
    }

    /// Every variable occurrence in source order.
    pub fn variables(&self) -> Vec<&Term> {
        let mut out = Vec::new();
        self.walk(&mut |t| {
            if t.is_var() {
                out.push(t);
            }
        });
        out.sort_by_key(|t| t.span.byte_start);
        out
    }

    /// Equality ignoring spans, parenthesization and notation.
    pub fn same_structure(&self, other: &Term) -> bool {
        match (&self.kind, &other.kind) {
            (TermKind::Var(a), TermKind::Var(b)) => a == b,
            (TermKind::Atom(a), TermKind::Atom(b)) => a.name == b.name,
            (TermKind::Integer(a), TermKind::Integer(b)) => {
                match (integer_value(a), integer_value(b)) {
                    (Some(x), Some(y)) => x == y,
                    _ => a == b,
                }
            }
            (TermKind::Float(a), TermKind::Float(b)) => a == b,
            (TermKind::Str(a), TermKind::Str(b)) => a == b,
            (
                TermKind::Compound {
                    functor: f, args: a, ..
                },
                TermKind::Compound {
                    functor: g, args: b, ..
                },
            ) => {
                f.name == g.name
                    && a.len() == b.len()
                    && a.iter().zip(b).all(|(x, y)| x.same_structure(y))
            }
            _ => false,
        }
    }

    /// Canonical functional notation: no operators, no list sugar.
    pub fn to_canonical(&self) -> String {
        match &self.kind {
            TermKind::Var(v) => v.clone(),
            TermKind::Atom(a) => canonical_atom(a),
            TermKind::Integer(t) | TermKind::Float(t) | TermKind::Str(t) => t.clone(),
            TermKind::Compound { functor, args, .. } => {
                let args: Vec<String> = args.iter().map(|a| a.to_canonical()).collect();
                format!("{}({})", canonical_atom(functor), args.join(", "))
            }
        }
    }
}

fn canonical_atom(a: &Atom) -> String {
    if let Some(q) = &a.quoted {
        return q.clone();
    }
    if needs_quotes(&a.name) {
        quote_atom(&a.name)
    } else {
        a.name.clone()
    }
}

/// Whether an atom name must be quoted to read back as the same atom.
pub fn needs_quotes(name: &str) -> bool {
    let mut chars = name.chars();
    let Some(first) = chars.next() else {
        return true;
    };
    if starts_atom(first) {
        return !name.chars().all(is_alnum);
    }
    if matches!(name, "[]" | "{}" | "!" | ";") {
        return false;
    }
    if name.chars().all(is_symbol_char) {
        // A bare `.` would read as an end token.
        return name == ".";
    }
    true
}

pub fn quote_atom(name: &str) -> String {
    let mut out = String::from("'");
    for c in name.chars() {
        match c {
            '\'' => out.push_str("\\'"),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('\'');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quoting() {
        assert!(!needs_quotes("foo_bar"));
        assert!(needs_quotes("Foo"));
        assert!(needs_quotes("foo bar"));
        assert!(!needs_quotes(":-"));
        assert!(!needs_quotes("[]"));
        assert!(needs_quotes("."));
        assert_eq!(quote_atom("it's"), "'it\\'s'");
    }
}
