//! Operator-precedence term reader.
//!
//! A Pratt-style reader over the token stream: `parse(max)` reads a primary
//! term and then folds in infix and postfix operators whose priority fits
//! under `max`. `op/3` and `module/2` directives update the table as the
//! file is read, so later clauses see the new operators.

use std::ops::Range;

use thiserror::Error;

use crate::diagnostics::{Diagnostic, Severity, SYNTAX_ERROR};
use crate::lexer::{scan, unescape, Token, TokenKind};
use crate::ops::{OpType, OperatorTable};
use crate::program::{Attachment, Clause, Comment, Indicator, ModuleDecl, Program};
use crate::source::{SourceFile, Span};
use crate::term::{Atom, Notation, Parens, Term, TermKind};

#[derive(Debug, Clone, Error, PartialEq)]
#[error("{message}")]
pub struct SyntaxError {
    pub message: String,
    pub span: Span,
    /// Set when the offending token is a lexer error that was already reported.
    pub lexical: bool,
}

type Parse<T> = Result<T, SyntaxError>;

struct Cursor<'a> {
    tokens: &'a [Token],
    /// Indices of non-comment tokens.
    code: Vec<usize>,
    pos: usize,
    ops: &'a OperatorTable,
    eof_span: Span,
}

impl<'a> Cursor<'a> {
    fn new(tokens: &'a [Token], ops: &'a OperatorTable, eof_span: Span) -> Cursor<'a> {
        let code = tokens
            .iter()
            .enumerate()
            .filter(|(_, t)| !t.kind.is_comment())
            .map(|(i, _)| i)
            .collect();
        Cursor {
            tokens,
            code,
            pos: 0,
            ops,
            eof_span,
        }
    }

    fn peek(&self) -> Option<&'a Token> {
        self.code.get(self.pos).map(|&i| &self.tokens[i])
    }

    fn peek2(&self) -> Option<&'a Token> {
        self.code.get(self.pos + 1).map(|&i| &self.tokens[i])
    }

    fn next(&mut self) -> Option<&'a Token> {
        let t = self.peek();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn token_index(&self) -> usize {
        self.code
            .get(self.pos)
            .copied()
            .unwrap_or(self.tokens.len())
    }

    fn error_at(&self, tok: Option<&Token>, message: impl Into<String>) -> SyntaxError {
        match tok {
            Some(t) => SyntaxError {
                message: message.into(),
                span: t.span,
                lexical: t.kind == TokenKind::Error,
            },
            None => SyntaxError {
                message: message.into(),
                span: self.eof_span,
                lexical: false,
            },
        }
    }

    fn unexpected(&self, tok: Option<&Token>) -> SyntaxError {
        match tok {
            None => self.error_at(None, "unexpected end of file"),
            Some(t) if t.kind == TokenKind::End => {
                self.error_at(tok, "unexpected end of clause")
            }
            Some(t) => self.error_at(tok, format!("unexpected `{}`", t.text)),
        }
    }

    fn expect(&mut self, kind: TokenKind, what: &str) -> Parse<&'a Token> {
        match self.peek() {
            Some(t) if t.kind == kind => {
                self.pos += 1;
                Ok(t)
            }
            other => {
                let found = match other {
                    Some(t) if t.kind == TokenKind::End => "end of clause".to_string(),
                    Some(t) => format!("`{}`", t.text),
                    None => "end of file".to_string(),
                };
                Err(self.error_at(other, format!("expected {what}, found {found}")))
            }
        }
    }

    /// Atom name denoted by a name token.
    fn name_of(tok: &Token) -> Option<String> {
        match tok.kind {
            TokenKind::Atom | TokenKind::Punct => Some(tok.text.clone()),
            TokenKind::QuotedAtom => {
                let body = &tok.text[1..tok.text.len() - 1];
                Some(unescape(body, '\'').unwrap_or_else(|_| body.to_string()))
            }
            _ => None,
        }
    }

    fn atom_of(tok: &Token) -> Atom {
        Atom {
            name: Self::name_of(tok).unwrap_or_default(),
            quoted: (tok.kind == TokenKind::QuotedAtom).then(|| tok.text.clone()),
        }
    }

    /// Name under which a token may act as an infix or postfix operator.
    fn infix_name(tok: &Token) -> Option<String> {
        match tok.kind {
            TokenKind::Comma => Some(",".to_string()),
            TokenKind::Bar => Some("|".to_string()),
            _ => Self::name_of(tok),
        }
    }

    fn is_term_end(tok: Option<&Token>) -> bool {
        match tok {
            None => true,
            Some(t) => matches!(
                t.kind,
                TokenKind::CloseParen
                    | TokenKind::CloseBracket
                    | TokenKind::CloseBrace
                    | TokenKind::Comma
                    | TokenKind::Bar
                    | TokenKind::End
            ),
        }
    }

    fn parse(&mut self, max: u16) -> Parse<(Term, u16)> {
        let (mut left, mut left_prec) = self.primary(max)?;
        while let Some(tok) = self.peek() {
            let Some(name) = Self::infix_name(tok) else {
                break;
            };
            if let Some(def) = self.ops.infix(&name) {
                if def.priority <= max && left_prec <= def.left_max() {
                    let def = def.clone();
                    self.pos += 1;
                    let (right, _) = self.parse(def.right_max())?;
                    let span = left.outer_span().join(right.outer_span());
                    left = Term::new(
                        TermKind::Compound {
                            functor: Self::atom_of_op(tok, &name),
                            functor_span: tok.span,
                            args: vec![left, right],
                            notation: Notation::Infix,
                        },
                        span,
                    );
                    left_prec = def.priority;
                    continue;
                }
            }
            if let Some(def) = self.ops.postfix(&name) {
                if def.priority <= max && left_prec <= def.left_max() {
                    let priority = def.priority;
                    self.pos += 1;
                    let span = left.outer_span().join(tok.span);
                    left = Term::new(
                        TermKind::Compound {
                            functor: Self::atom_of_op(tok, &name),
                            functor_span: tok.span,
                            args: vec![left],
                            notation: Notation::Postfix,
                        },
                        span,
                    );
                    left_prec = priority;
                    continue;
                }
            }
            break;
        }
        Ok((left, left_prec))
    }

    fn atom_of_op(tok: &Token, name: &str) -> Atom {
        Atom {
            name: name.to_string(),
            quoted: (tok.kind == TokenKind::QuotedAtom).then(|| tok.text.clone()),
        }
    }

    fn primary(&mut self, max: u16) -> Parse<(Term, u16)> {
        let Some(tok) = self.next() else {
            return Err(self.unexpected(None));
        };
        match tok.kind {
            TokenKind::Integer => Ok((Term::new(TermKind::Integer(tok.text.clone()), tok.span), 0)),
            TokenKind::Float => Ok((Term::new(TermKind::Float(tok.text.clone()), tok.span), 0)),
            TokenKind::Variable => Ok((Term::new(TermKind::Var(tok.text.clone()), tok.span), 0)),
            TokenKind::Str => Ok((Term::new(TermKind::Str(tok.text.clone()), tok.span), 0)),
            TokenKind::OpenParen => {
                let (mut inner, _) = self.parse(1200)?;
                let close = self.expect(TokenKind::CloseParen, "`)`")?;
                inner.parens = Some(Parens {
                    open: tok.span,
                    close: close.span,
                });
                Ok((inner, 0))
            }
            TokenKind::OpenBracket => {
                if self.peek().is_some_and(|t| t.kind == TokenKind::CloseBracket) {
                    return self.empty_pair("[]", tok.span);
                }
                self.list(tok).map(|t| (t, 0))
            }
            TokenKind::OpenBrace => {
                if self.peek().is_some_and(|t| t.kind == TokenKind::CloseBrace) {
                    return self.empty_pair("{}", tok.span);
                }
                let (inner, _) = self.parse(1200)?;
                let close = self.expect(TokenKind::CloseBrace, "`}`")?;
                let span = tok.span.join(close.span);
                Ok((
                    Term::new(
                        TermKind::Compound {
                            functor: Atom::plain("{}"),
                            functor_span: tok.span,
                            args: vec![inner],
                            notation: Notation::Curly,
                        },
                        span,
                    ),
                    0,
                ))
            }
            TokenKind::Atom | TokenKind::QuotedAtom | TokenKind::Punct => self.name_term(tok, max),
            _ => Err(self.unexpected(Some(tok))),
        }
    }

    /// Arguments of `functor(`, the open parenthesis being next.
    fn arguments(&mut self, functor: Atom, functor_span: Span) -> Parse<(Term, u16)> {
        self.pos += 1;
        let mut args = Vec::new();
        loop {
            let (arg, _) = self.parse(999)?;
            args.push(arg);
            match self.next() {
                Some(t) if t.kind == TokenKind::Comma => continue,
                Some(t) if t.kind == TokenKind::CloseParen => {
                    let span = functor_span.join(t.span);
                    let kind = TermKind::Compound {
                        functor,
                        functor_span,
                        args,
                        notation: Notation::Functional,
                    };
                    return Ok((Term::new(kind, span), 0));
                }
                other => {
                    let found = match other {
                        Some(t) if t.kind == TokenKind::End => "end of clause".to_string(),
                        Some(t) => format!("`{}`", t.text),
                        None => "end of file".to_string(),
                    };
                    return Err(self.error_at(
                        other,
                        format!("expected `,` or `)` in arguments of {}, found {found}", functor.name),
                    ));
                }
            }
        }
    }

    /// `[]` or `{}` just read, possibly used as a functor.
    fn empty_pair(&mut self, name: &str, span: Span) -> Parse<(Term, u16)> {
        let close = self.next().expect("peeked");
        let span = span.join(close.span);
        if self.peek().is_some_and(|n| n.kind == TokenKind::OpenParen && n.adjacent_to(close)) {
            return self.arguments(Atom::plain(name), span);
        }
        Ok((Term::atom(name, span), 0))
    }

    fn name_term(&mut self, tok: &'a Token, max: u16) -> Parse<(Term, u16)> {
        let name = Self::name_of(tok).unwrap_or_default();
        let next = self.peek();

        // negative numeric literal
        if name == "-" && tok.kind == TokenKind::Punct {
            if let Some(num) = next.filter(|n| {
                matches!(n.kind, TokenKind::Integer | TokenKind::Float) && n.adjacent_to(tok)
            }) {
                self.pos += 1;
                let text = format!("-{}", num.text);
                let span = tok.span.join(num.span);
                let kind = match num.kind {
                    TokenKind::Integer => TermKind::Integer(text),
                    _ => TermKind::Float(text),
                };
                return Ok((Term::new(kind, span), 0));
            }
        }

        // functional notation
        if next.is_some_and(|n| n.kind == TokenKind::OpenParen && n.adjacent_to(tok)) {
            return self.arguments(Self::atom_of(tok), tok.span);
        }

        if let Some(def) = self.ops.prefix(&name) {
            let as_atom = Self::is_term_end(next)
                || next.is_some_and(|n| {
                    Self::infix_name(n).is_some_and(|nn| {
                        (self.ops.infix(&nn).is_some() || self.ops.postfix(&nn).is_some())
                            && self.ops.prefix(&nn).is_none()
                            && !self
                                .peek2()
                                .is_some_and(|p| p.kind == TokenKind::OpenParen && p.adjacent_to(n))
                    })
                });
            if !as_atom {
                let priority = def.priority;
                if priority > max {
                    return Err(self.error_at(
                        Some(tok),
                        format!("prefix operator `{name}` (priority {priority}) needs parentheses here"),
                    ));
                }
                let (arg, _) = self.parse(def.right_max())?;
                let span = tok.span.join(arg.outer_span());
                return Ok((
                    Term::new(
                        TermKind::Compound {
                            functor: Self::atom_of(tok),
                            functor_span: tok.span,
                            args: vec![arg],
                            notation: Notation::Prefix,
                        },
                        span,
                    ),
                    priority,
                ));
            }
        }
        Ok((Term::new(TermKind::Atom(Self::atom_of(tok)), tok.span), 0))
    }

    fn list(&mut self, open: &'a Token) -> Parse<Term> {
        let mut items = Vec::new();
        loop {
            let (item, _) = self.parse(999)?;
            items.push(item);
            match self.peek() {
                Some(t) if t.kind == TokenKind::Comma => {
                    self.pos += 1;
                }
                _ => break,
            }
        }
        let tail = match self.peek() {
            Some(t) if t.kind == TokenKind::Bar => {
                self.pos += 1;
                Some(self.parse(999)?.0)
            }
            _ => None,
        };
        let close = self.expect(TokenKind::CloseBracket, "`,`, `|` or `]`")?;
        let end_span = close.span;
        let mut acc = match tail {
            Some(t) => t,
            None => Term::atom("[]", end_span),
        };
        let n = items.len();
        for (i, item) in items.into_iter().rev().enumerate() {
            let start = if i + 1 == n { open.span } else { item.outer_span() };
            let span = start.join(end_span);
            acc = Term::new(
                TermKind::Compound {
                    functor: Atom::plain("."),
                    functor_span: open.span,
                    args: vec![item, acc],
                    notation: Notation::List,
                },
                span,
            );
        }
        Ok(acc)
    }
}

/// Read one term (up to an end token or end of input) from a token slice.
pub fn read_term(tokens: &[Token], ops: &OperatorTable) -> Result<Term, SyntaxError> {
    let eof = tokens.last().map(|t| t.span).unwrap_or_default();
    let mut cur = Cursor::new(tokens, ops, eof);
    let (term, _) = cur.parse(1200)?;
    match cur.peek() {
        None => Ok(term),
        Some(t) if t.kind == TokenKind::End => Ok(term),
        Some(t) => Err(cur.error_at(Some(t), operator_expected(t))),
    }
}

fn operator_expected(t: &Token) -> String {
    format!("operator expected before `{}` (priority clash or missing operator)", t.text)
}

/// Convenience: scan and read a single term from text.
pub fn parse_term(text: &str, ops: &OperatorTable) -> Result<Term, SyntaxError> {
    let src = SourceFile::from_text("<term>", text);
    let (tokens, diags) = scan(&src);
    if let Some(d) = diags.first() {
        return Err(SyntaxError {
            message: d.message.clone(),
            span: d.span,
            lexical: true,
        });
    }
    read_term(&tokens, ops)
}

/// Scan and read a whole file.
pub fn parse_source(src: &SourceFile) -> (Program, Vec<Diagnostic>) {
    let (tokens, mut diags) = scan(src);
    let (program, syntax) = read_program(src, tokens);
    diags.extend(syntax);
    (program, diags)
}

/// Read every clause of a token stream.
pub fn read_program(src: &SourceFile, tokens: Vec<Token>) -> (Program, Vec<Diagnostic>) {
    let mut ops = OperatorTable::iso();
    let mut items: Vec<Clause> = Vec::new();
    let mut diags = Vec::new();
    let mut skipped = Vec::new();
    let mut module: Option<ModuleDecl> = None;
    let eof_span = src.span(src.content.len(), src.content.len());

    let code: Vec<usize> = tokens
        .iter()
        .enumerate()
        .filter(|(_, t)| !t.kind.is_comment())
        .map(|(i, _)| i)
        .collect();
    let mut ci = 0;
    while ci < code.len() {
        let first = code[ci];
        let table = ops.clone();
        let mut cur = Cursor::new(&tokens, &table, eof_span);
        cur.pos = ci;
        let result = cur.parse(1200).and_then(|(term, _)| match cur.peek() {
            Some(t) if t.kind == TokenKind::End => {
                cur.pos += 1;
                Ok(term)
            }
            other => Err(match other {
                None => cur.error_at(None, "missing `.` at end of clause"),
                Some(t) => cur.error_at(Some(t), operator_expected(t)),
            }),
        });
        match result {
            Ok(term) => {
                let end_tok = &tokens[code[cur.pos - 1]];
                let range = first..code[cur.pos - 1] + 1;
                let span = tokens[first].span.join(end_tok.span);
                let clause = Clause::from_term(term, span, range);
                if clause.is_directive() {
                    apply_directive(&clause, &mut ops, &mut module, items.len());
                }
                items.push(clause);
                ci = cur.pos;
            }
            Err(err) => {
                if !err.lexical {
                    diags.push(Diagnostic::new(
                        SYNTAX_ERROR,
                        Severity::Error,
                        err.span,
                        format!("syntax error: {}", err.message),
                    ));
                }
                // resume after the next end token at or beyond the error
                let err_index = cur.token_index();
                let mut j = ci;
                while j < code.len()
                    && (code[j] < err_index.min(tokens.len()) || tokens[code[j]].kind != TokenKind::End)
                {
                    j += 1;
                }
                let end = if j < code.len() { j + 1 } else { code.len() };
                let last_tok = code[end - 1];
                skipped.push(first..last_tok + 1);
                ci = end;
            }
        }
    }
    let comments = attach_comments(&tokens, &items, &skipped);
    (
        Program {
            tokens,
            items,
            comments,
            operators: ops,
            module,
            skipped,
        },
        diags,
    )
}

pub(crate) fn apply_directive(
    clause: &Clause,
    ops: &mut OperatorTable,
    module: &mut Option<ModuleDecl>,
    index: usize,
) {
    let Some(goal) = clause.body() else { return };
    if goal.is("op", 3) {
        apply_op(goal, ops);
    } else if goal.is("module", 2) && module.is_none() {
        let name = goal.args()[0].name().unwrap_or_default().to_string();
        let mut exports = Vec::new();
        if let Some((items, _)) = goal.args()[1].list_parts() {
            for item in items {
                if item.is("op", 3) {
                    apply_op(item, ops);
                } else if let Some(ind) = export_indicator(item) {
                    exports.push(ind);
                }
            }
        }
        *module = Some(ModuleDecl {
            name,
            exports,
            item: index,
        });
    }
}

fn export_indicator(item: &Term) -> Option<Indicator> {
    let (name, arity, extra) = if item.is("/", 2) {
        (&item.args()[0], &item.args()[1], 0)
    } else if item.is("//", 2) {
        (&item.args()[0], &item.args()[1], 2)
    } else {
        return None;
    };
    let arity = match &arity.kind {
        TermKind::Integer(t) => t.parse::<usize>().ok()?,
        _ => return None,
    };
    Some(Indicator::new(name.name()?, arity + extra))
}

fn apply_op(goal: &Term, ops: &mut OperatorTable) {
    let args = goal.args();
    let priority = match &args[0].kind {
        TermKind::Integer(t) => match t.parse::<u16>() {
            Ok(p) if p <= 1200 => p,
            _ => return,
        },
        _ => return,
    };
    let Some(op_type) = args[1].name().and_then(|n| n.parse::<OpType>().ok()) else {
        return;
    };
    let names: Vec<&Term> = match args[2].list_parts() {
        Some((items, _)) => items,
        None => vec![&args[2]],
    };
    for n in names {
        if let TermKind::Atom(a) = &n.kind {
            ops.add(&a.name, priority, op_type);
        }
    }
}

fn owner_of(ranges: &[(Range<usize>, Option<usize>)], token: usize) -> Option<&(Range<usize>, Option<usize>)> {
    let i = ranges.partition_point(|(r, _)| r.end <= token);
    ranges.get(i).filter(|(r, _)| r.contains(&token))
}

fn attach_comments(tokens: &[Token], items: &[Clause], skipped: &[Range<usize>]) -> Vec<Comment> {
    let mut ranges: Vec<(Range<usize>, Option<usize>)> = items
        .iter()
        .enumerate()
        .map(|(i, c)| (c.tokens.clone(), Some(i)))
        .chain(skipped.iter().map(|r| (r.clone(), None)))
        .collect();
    ranges.sort_by_key(|(r, _)| r.start);

    let first_token_item: std::collections::HashMap<usize, usize> = items
        .iter()
        .enumerate()
        .map(|(i, c)| (c.tokens.start, i))
        .collect();

    let prev_code = |k: usize| (0..k).rev().find(|&j| !tokens[j].kind.is_comment());

    let mut out = Vec::new();
    for (k, tok) in tokens.iter().enumerate() {
        if !tok.kind.is_comment() {
            continue;
        }
        let single_line = !tok.span.is_multiline();
        let trailing_code = prev_code(k).filter(|&j| {
            single_line && tokens[j].span.end_line == tok.span.start_line
        });
        let attachment = match owner_of(&ranges, k) {
            Some((_, Some(item))) => match trailing_code {
                Some(j) if items[*item].tokens.contains(&j) => Attachment::Trailing(*item),
                _ => Attachment::Inner(*item),
            },
            Some((_, None)) => Attachment::FreeStanding,
            None => {
                let trailing_owner = trailing_code
                    .and_then(|j| owner_of(&ranges, j))
                    .map(|(_, item)| *item);
                match trailing_owner {
                    Some(Some(item)) => Attachment::Trailing(item),
                    Some(None) => Attachment::FreeStanding,
                    None => preceding_target(tokens, k, &first_token_item)
                        .map(Attachment::Preceding)
                        .unwrap_or(Attachment::FreeStanding),
                }
            }
        };
        out.push(Comment {
            token: k,
            text: tok.text.clone(),
            span: tok.span,
            attachment,
        });
    }
    out
}

/// Follow a run of comments with no blank line in between down to a clause start.
fn preceding_target(
    tokens: &[Token],
    k: usize,
    first_token_item: &std::collections::HashMap<usize, usize>,
) -> Option<usize> {
    let mut prev = &tokens[k];
    let mut j = k + 1;
    while j < tokens.len() {
        let next = &tokens[j];
        if next.span.start_line > prev.span.end_line + 1 {
            return None;
        }
        if !next.kind.is_comment() {
            return first_token_item.get(&j).copied();
        }
        prev = next;
        j += 1;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn term(text: &str) -> Term {
        parse_term(text, &OperatorTable::iso()).unwrap()
    }

    fn canon(text: &str) -> String {
        term(text).to_canonical()
    }

    #[test]
    fn comma_binds_tighter_than_semicolon() {
        assert_eq!(canon("a,b;c"), ";(','(a, b), c)");
        let t = term("(a,b);c");
        assert_eq!(t.to_canonical(), ";(','(a, b), c)");
        assert!(t.args()[0].is_parenthesized());
        assert!(!term("a,b;c").args()[0].is_parenthesized());
    }

    #[test]
    fn arithmetic_priorities() {
        assert_eq!(canon("X is 1+2*3"), "is(X, +(1, *(2, 3)))");
        assert_eq!(canon("a-b-c"), "-(-(a, b), c)");
        assert_eq!(canon("a^b^c"), "^(a, ^(b, c))");
        assert_eq!(canon("- a ^ b"), "-(^(a, b))");
        assert_eq!(canon("\\+ a = b"), "\\+(=(a, b))");
    }

    #[test]
    fn xfx_does_not_chain() {
        assert!(parse_term("a = b = c", &OperatorTable::iso()).is_err());
    }

    #[test]
    fn negative_numbers() {
        assert_eq!(canon("X is -1"), "is(X, -1)");
        assert_eq!(canon("X is - 1"), "is(X, -(1))");
        assert_eq!(canon("a-1"), "-(a, 1)");
        assert_eq!(canon("-(1)"), "-(1)");
        assert_eq!(canon("-(a, b)"), "-(a, b)");
    }

    #[test]
    fn operators_as_atoms() {
        assert_eq!(canon("f(-, +)"), "f(-, +)");
        assert_eq!(canon("X = (-)"), "=(X, -)");
        assert_eq!(canon("maplist(=(X), L)"), "maplist(=(X), L)");
        assert_eq!(canon("[-]"), "'.'(-, [])");
    }

    #[test]
    fn lists_and_curly() {
        assert_eq!(canon("[a, b|T]"), "'.'(a, '.'(b, T))");
        assert_eq!(canon("[]"), "[]");
        assert_eq!(canon("{a, b}"), "{}(','(a, b))");
        assert_eq!(canon("\"abc\""), "\"abc\"");
    }

    #[test]
    fn clause_kinds() {
        use crate::program::ClauseKind::*;
        let src = SourceFile::from_text("t.pl", "a.\na :- b.\n:- c.\ns --> [x].\n");
        let (p, d) = parse_source(&src);
        assert!(d.is_empty());
        let kinds: Vec<_> = p.items.iter().map(|c| c.kind).collect();
        assert_eq!(kinds, vec![Fact, Rule, Directive, GrammarRule]);
    }

    #[test]
    fn op_directive_updates_table() {
        let src = SourceFile::from_text("t.pl", ":- op(700, xfx, ===).\na === b.\n");
        let (p, d) = parse_source(&src);
        assert!(d.is_empty(), "{d:?}");
        assert_eq!(p.items[1].term.to_canonical(), "===(a, b)");
    }

    #[test]
    fn module_exports() {
        let src = SourceFile::from_text("t.pl", ":- module(m, [foo/1, bar//2]).\n");
        let (p, _) = parse_source(&src);
        let m = p.module.unwrap();
        assert_eq!(m.name, "m");
        assert_eq!(m.exports, vec![Indicator::new("foo", 1), Indicator::new("bar", 4)]);
    }

    #[test]
    fn recovery_skips_one_clause() {
        let src = SourceFile::from_text("t.pl", "a(1).\nb(1 2).\nc(3).\n");
        let (p, d) = parse_source(&src);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].span.start_line, 2);
        assert_eq!(p.items.len(), 2);
        assert_eq!(p.skipped.len(), 1);
    }

    #[test]
    fn comment_attachment() {
        let text = "% header\n\n% about foo\nfoo :- % why\n    % inside\n    bar.\n\n% loose\n";
        let src = SourceFile::from_text("t.pl", text);
        let (p, _) = parse_source(&src);
        let att: Vec<_> = p.comments.iter().map(|c| c.attachment).collect();
        assert_eq!(
            att,
            vec![
                Attachment::FreeStanding,
                Attachment::Preceding(0),
                Attachment::Trailing(0),
                Attachment::Inner(0),
                Attachment::FreeStanding,
            ]
        );
    }

    #[test]
    fn trailing_after_end_token() {
        let src = SourceFile::from_text("t.pl", "a. % first\nb.\n");
        let (p, _) = parse_source(&src);
        assert_eq!(p.comments[0].attachment, Attachment::Trailing(0));
    }

    #[test]
    fn spans_slice_source() {
        let text = "foo(X, [a|T]) :- X = (b ; c).";
        let src = SourceFile::from_text("t.pl", text);
        let (p, _) = parse_source(&src);
        let body = p.items[0].body().unwrap();
        let rhs = &body.args()[1];
        assert_eq!(&text[rhs.span.byte_start..rhs.span.byte_end], "b ; c");
        assert_eq!(&text[rhs.outer_span().byte_start..rhs.outer_span().byte_end], "(b ; c)");
        let head = p.items[0].head().unwrap();
        assert_eq!(&text[head.span.byte_start..head.span.byte_end], "foo(X, [a|T])");
    }
}
