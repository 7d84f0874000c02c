//! Clauses, predicates and the parsed program.

use std::collections::HashMap;
use std::fmt;
use std::ops::Range;

use crate::lexer::Token;
use crate::ops::OperatorTable;
use crate::source::Span;
use crate::term::Term;

/// A predicate indicator `name/arity`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Indicator {
    pub name: String,
    pub arity: usize,
}

impl Indicator {
    pub fn new(name: impl Into<String>, arity: usize) -> Indicator {
        Indicator {
            name: name.into(),
            arity,
        }
    }

    /// Indicator of a callable term, looking through module qualification.
    pub fn of(term: &Term) -> Option<Indicator> {
        let term = strip_module(term);
        term.is_callable()
            .then(|| Indicator::new(term.name().unwrap_or_default(), term.arity()))
    }
}

impl fmt::Display for Indicator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.name, self.arity)
    }
}

/// `M:Goal` → `Goal`, repeatedly.
pub fn strip_module(term: &Term) -> &Term {
    let mut t = term;
    while t.is(":", 2) {
        t = &t.args()[1];
    }
    t
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClauseKind {
    Fact,
    Rule,
    Directive,
    GrammarRule,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Clause {
    pub kind: ClauseKind,
    /// The whole term read for the clause.
    pub term: Term,
    /// From the first token through the end token.
    pub span: Span,
    /// Span of `:-` or `-->` when present.
    pub neck_span: Option<Span>,
    /// Token index range, end token included.
    pub tokens: Range<usize>,
}

impl Clause {
    pub fn from_term(term: Term, span: Span, tokens: Range<usize>) -> Clause {
        let kind = if term.is(":-", 2) {
            ClauseKind::Rule
        } else if term.is(":-", 1) || term.is("?-", 1) {
            ClauseKind::Directive
        } else if term.is("-->", 2) {
            ClauseKind::GrammarRule
        } else {
            ClauseKind::Fact
        };
        let neck_span = match &term.kind {
            crate::term::TermKind::Compound { functor_span, .. }
                if kind != ClauseKind::Fact =>
            {
                Some(*functor_span)
            }
            _ => None,
        };
        Clause {
            kind,
            term,
            span,
            neck_span,
            tokens,
        }
    }

    pub fn head(&self) -> Option<&Term> {
        match self.kind {
            ClauseKind::Fact => Some(&self.term),
            ClauseKind::Rule | ClauseKind::GrammarRule => Some(&self.term.args()[0]),
            ClauseKind::Directive => None,
        }
    }

    pub fn body(&self) -> Option<&Term> {
        match self.kind {
            ClauseKind::Fact => None,
            ClauseKind::Rule | ClauseKind::GrammarRule => Some(&self.term.args()[1]),
            ClauseKind::Directive => Some(&self.term.args()[0]),
        }
    }

    /// Head predicate indicator. Grammar rules report the arity as written.
    pub fn indicator(&self) -> Option<Indicator> {
        let head = self.head()?;
        let head = if self.kind == ClauseKind::GrammarRule && head.is(",", 2) {
            // pushback: `a, [x] --> ...`
            &head.args()[0]
        } else {
            head
        };
        Indicator::of(head)
    }

    pub fn is_directive(&self) -> bool {
        self.kind == ClauseKind::Directive
    }
}

/// Where a comment belongs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Attachment {
    /// Part of a comment block directly above the clause.
    Preceding(usize),
    /// After code on the same line; the clause owning that code.
    Trailing(usize),
    /// On its own line inside the clause.
    Inner(usize),
    FreeStanding,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comment {
    /// Index into the program's token list.
    pub token: usize,
    pub text: String,
    pub span: Span,
    pub attachment: Attachment,
}

impl Comment {
    pub fn is_block(&self) -> bool {
        self.text.starts_with("/*")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModuleDecl {
    pub name: String,
    pub exports: Vec<Indicator>,
    /// Index of the directive in `Program::items`.
    pub item: usize,
}

#[derive(Debug, Clone)]
pub struct Program {
    pub tokens: Vec<Token>,
    pub items: Vec<Clause>,
    pub comments: Vec<Comment>,
    /// Operator table as of end of file.
    pub operators: OperatorTable,
    pub module: Option<ModuleDecl>,
    /// Token ranges skipped by error recovery.
    pub skipped: Vec<Range<usize>>,
}

impl Program {
    pub fn exports(&self) -> &[Indicator] {
        self.module
            .as_ref()
            .map(|m| m.exports.as_slice())
            .unwrap_or(&[])
    }

    /// Comments attached to an item, in source order.
    pub fn comments_of(&self, item: usize) -> impl Iterator<Item = &Comment> {
        self.comments.iter().filter(move |c| {
            matches!(c.attachment,
                Attachment::Preceding(i) | Attachment::Trailing(i) | Attachment::Inner(i) if i == item)
        })
    }
}

/// All clauses of one predicate.
#[derive(Debug, Clone, PartialEq)]
pub struct PredicateDef {
    pub indicator: Indicator,
    /// Indices into `Program::items`, in source order.
    pub clauses: Vec<usize>,
    pub contiguous: bool,
    pub exported: bool,
    /// Defined by `-->` rules; the callable predicate has two more arguments.
    pub grammar: bool,
}

impl PredicateDef {
    pub fn first_clause<'p>(&self, program: &'p Program) -> &'p Clause {
        &program.items[self.clauses[0]]
    }

    pub fn last_clause<'p>(&self, program: &'p Program) -> &'p Clause {
        &program.items[*self.clauses.last().expect("predicate has clauses")]
    }

    /// Arity of the predicate as called.
    pub fn call_arity(&self) -> usize {
        if self.grammar {
            self.indicator.arity + 2
        } else {
            self.indicator.arity
        }
    }
}

/// Group clauses by predicate, in first-appearance order.
pub fn group_predicates(program: &Program) -> Vec<PredicateDef> {
    let mut order: Vec<PredicateDef> = Vec::new();
    let mut index: HashMap<(Indicator, bool), usize> = HashMap::new();
    for (i, clause) in program.items.iter().enumerate() {
        if clause.is_directive() {
            continue;
        }
        let Some(ind) = clause.indicator() else {
            continue;
        };
        let grammar = clause.kind == crate::program::ClauseKind::GrammarRule;
        let key = (ind.clone(), grammar);
        match index.get(&key) {
            Some(&p) => order[p].clauses.push(i),
            None => {
                index.insert(key, order.len());
                order.push(PredicateDef {
                    indicator: ind,
                    clauses: vec![i],
                    contiguous: true,
                    exported: false,
                    grammar,
                });
            }
        }
    }
    let owner: HashMap<usize, usize> = order
        .iter()
        .enumerate()
        .flat_map(|(p, def)| def.clauses.iter().map(move |&c| (c, p)))
        .collect();
    let has_module = program.module.is_some();
    let exports = program.exports();
    for (p, def) in order.iter_mut().enumerate() {
        let first = def.clauses[0];
        let last = *def.clauses.last().unwrap();
        def.contiguous = (first..=last).all(|c| owner.get(&c).is_none_or(|&o| o == p));
        def.exported = !has_module
            || exports.contains(&def.indicator)
            || (def.grammar
                && exports.contains(&Indicator::new(def.indicator.name.clone(), def.call_arity())));
    }
    order
}

/// Flatten a right-nested `,/2` body into its goal sequence.
///
/// Parenthesized conjunctions below the top are kept as single goals.
pub fn conjunction_goals(body: &Term) -> Vec<&Term> {
    let mut out = Vec::new();
    let mut cur = body;
    loop {
        if cur.is(",", 2) && (std::ptr::eq(cur, body) || !cur.is_parenthesized()) {
            let left = &cur.args()[0];
            if left.is(",", 2) && !left.is_parenthesized() {
                out.extend(conjunction_goals(left));
            } else {
                out.push(left);
            }
            cur = &cur.args()[1];
        } else {
            out.push(cur);
            return out;
        }
    }
}
