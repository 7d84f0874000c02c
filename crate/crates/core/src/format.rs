//! Canonical layout: compact disjunction blocks, one goal per line,
//! minimal parentheses and comments kept next to the code they describe.

use std::collections::HashSet;

use crate::body::is_branching;
use crate::config::{CommaStyle, Config};
use crate::diagnostics::{Diagnostic, Severity};
use crate::lexer::is_symbol_char;
use crate::ops::{OperatorDef, OperatorTable};
use crate::program::{Attachment, Clause, ClauseKind, Comment, Program};
use crate::reader::{apply_directive, parse_source};
use crate::rules::layout::goal_terms;
use crate::source::{SourceFile, Span};
use crate::term::{needs_quotes, quote_atom, Atom, Notation, Term, TermKind};

/// Layout parameters, all taken from [`Config`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormatStyle {
    pub indent_size: usize,
    pub max_line: usize,
    pub eol_comment_max: usize,
    pub comma_style: CommaStyle,
}

impl FormatStyle {
    pub fn from_config(config: &Config) -> FormatStyle {
        FormatStyle {
            indent_size: config.indent_size.max(1),
            max_line: config.max_line_length,
            eol_comment_max: config.eol_comment_max,
            comma_style: config.comma_style,
        }
    }

    /// Width of `(   ` and `;   ` in a disjunction block.
    fn lead_width(&self) -> usize {
        self.indent_size.max(2)
    }
}

/// Result of comparing a file with its formatted text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormatCheck {
    pub formatted: String,
    /// First position where the source differs, if it does.
    pub divergence: Option<Span>,
}

impl FormatCheck {
    pub fn is_formatted(&self) -> bool {
        self.divergence.is_none()
    }
}

/// Parse and format a file. Any syntax error refuses the whole file.
pub fn format_source(src: &SourceFile, config: &Config) -> Result<String, Diagnostic> {
    let (program, diags) = parse_source(src);
    if let Some(d) = diags.into_iter().find(|d| d.severity == Severity::Error) {
        return Err(d);
    }
    Ok(format_program(&program, config))
}

pub fn check_format(src: &SourceFile, config: &Config) -> Result<FormatCheck, Diagnostic> {
    let formatted = format_source(src, config)?;
    let divergence = first_difference(&src.content, &formatted).map(|b| {
        let end = src.content[b..]
            .chars()
            .next()
            .map_or(b, |c| b + c.len_utf8());
        src.span(b, end)
    });
    Ok(FormatCheck {
        formatted,
        divergence,
    })
}

fn first_difference(a: &str, b: &str) -> Option<usize> {
    let i = a
        .char_indices()
        .zip(b.chars())
        .find(|((_, x), y)| x != y)
        .map(|((i, _), _)| i);
    match i {
        Some(i) => Some(i),
        None if a.len() == b.len() => None,
        None => Some(a.len().min(b.len())),
    }
}

fn width(s: &str) -> usize {
    match s.rfind('\n') {
        Some(i) => s[i + 1..].chars().count(),
        None => s.chars().count(),
    }
}

fn spaces(n: usize) -> String {
    " ".repeat(n)
}

/// How a compound prints.
enum Form<'t> {
    Infix(&'t OperatorDef),
    Prefix(&'t OperatorDef),
    Postfix(&'t OperatorDef),
    List,
    Curly,
    Functional,
}

fn atom_text(a: &Atom) -> String {
    match &a.quoted {
        Some(q) => q.clone(),
        None if needs_quotes(&a.name) => quote_atom(&a.name),
        None => a.name.clone(),
    }
}

/// Operator names print bare whenever that reads back as the same atom.
fn op_text(name: &str) -> String {
    match name {
        "," => ",".into(),
        "|" => "|".into(),
        _ if needs_quotes(name) => quote_atom(name),
        _ => name.into(),
    }
}

fn is_alnum_op(name: &str) -> bool {
    name.chars().next().is_some_and(|c| c.is_alphabetic())
}

/// One argument or list element waiting to be placed.
struct Piece<'t> {
    term: &'t Term,
    max: u16,
    data: bool,
    /// List tail: joined with `|` instead of a comma.
    tail: bool,
}

struct Printer<'a> {
    ops: &'a OperatorTable,
    style: &'a FormatStyle,
    /// Terms whose argument commas separate goal arguments.
    goals: HashSet<*const Term>,
}

impl<'a> Printer<'a> {
    fn form<'t>(&'t self, t: &Term) -> Option<Form<'t>> {
        let TermKind::Compound {
            functor,
            args,
            notation,
            ..
        } = &t.kind
        else {
            return None;
        };
        let name = functor.name.as_str();
        Some(match (name, args.len()) {
            _ if *notation == Notation::List => Form::List,
            (".", 2) => Form::List,
            ("{}", 1) => Form::Curly,
            (_, 2) if self.ops.infix(name).is_some() => Form::Infix(self.ops.infix(name).unwrap()),
            // `table(X)` stays a call; `table X` stays a declaration.
            (_, 1) if is_alnum_op(name) && *notation == Notation::Functional => Form::Functional,
            (_, 1) if self.ops.prefix(name).is_some() => Form::Prefix(self.ops.prefix(name).unwrap()),
            (_, 1) if self.ops.postfix(name).is_some() => {
                Form::Postfix(self.ops.postfix(name).unwrap())
            }
            _ => Form::Functional,
        })
    }

    fn priority(&self, t: &Term) -> u16 {
        match self.form(t) {
            Some(Form::Infix(d)) | Some(Form::Prefix(d)) | Some(Form::Postfix(d)) => d.priority,
            _ => 0,
        }
    }

    fn is_op_atom(&self, t: &Term) -> bool {
        match &t.kind {
            TermKind::Atom(a) => {
                self.ops.is_op(&a.name) && !matches!(a.name.as_str(), "[]" | "{}" | "!")
            }
            _ => false,
        }
    }

    fn comma(&self, data: bool) -> &'static str {
        if data && self.style.comma_style == CommaStyle::Structured {
            ","
        } else {
            ", "
        }
    }

    fn args_data(&self, t: &Term) -> bool {
        !self.goals.contains(&(t as *const Term))
    }

    /// Flat text of a term in a context allowing priority `max`.
    fn flat(&self, t: &Term, max: u16, data: bool) -> String {
        let text = self.flat_bare(t, data);
        if self.priority(t) > max {
            format!("({text})")
        } else {
            text
        }
    }

    /// Flat text of an operator's operand.
    fn operand(&self, t: &Term, max: u16, data: bool) -> String {
        if self.is_op_atom(t) {
            format!("({})", self.flat_bare(t, data))
        } else {
            self.flat(t, max, data)
        }
    }

    fn flat_bare(&self, t: &Term, data: bool) -> String {
        match &t.kind {
            TermKind::Var(s) | TermKind::Integer(s) | TermKind::Float(s) | TermKind::Str(s) => s.clone(),
            TermKind::Atom(a) => atom_text(a),
            TermKind::Compound { functor, args, .. } => match self.form(t).expect("compound") {
                Form::List => {
                    let (items, tail) = t.list_parts().expect("list");
                    let sep = self.comma(true);
                    let mut out = String::from("[");
                    let items: Vec<String> = items.iter().map(|i| self.flat(i, 999, true)).collect();
                    out.push_str(&items.join(sep));
                    if !tail.is_atom("[]") {
                        out.push('|');
                        out.push_str(&self.flat(tail, 999, true));
                    }
                    out.push(']');
                    out
                }
                Form::Curly => format!("{{{}}}", self.flat(&args[0], 1200, self.args_data(t))),
                Form::Infix(def) => {
                    let (l, r) = (&args[0], &args[1]);
                    let force = matches!(functor.name.as_str(), ";" | "|");
                    let side = |x: &Term, max: u16| {
                        if force && x.is(",", 2) {
                            format!("({})", self.flat_bare(x, data))
                        } else {
                            self.operand(x, max, data)
                        }
                    };
                    let ls = side(l, def.left_max());
                    let rs = side(r, def.right_max());
                    let (before, after) = self.infix_spacing(def, l, r, &ls, &rs, data);
                    format!("{ls}{before}{}{after}{rs}", op_text(&def.name))
                }
                Form::Prefix(def) => {
                    let arg = self.operand(&args[0], def.right_max(), data);
                    format!("{}{}{arg}", op_text(&def.name), self.prefix_gap(def, &arg))
                }
                Form::Postfix(def) => {
                    let arg = self.operand(&args[0], def.left_max(), data);
                    format!("{arg} {}", op_text(&def.name))
                }
                Form::Functional => {
                    let sep = self.comma(self.args_data(t));
                    let data = self.args_data(t);
                    let args: Vec<String> = args.iter().map(|a| self.flat(a, 999, data)).collect();
                    format!("{}({})", atom_text(functor), args.join(sep))
                }
            },
        }
    }

    fn prefix_gap(&self, def: &OperatorDef, arg: &str) -> &'static str {
        let tight = matches!(def.name.as_str(), "-" | "+" | "\\")
            && arg.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_');
        if tight {
            ""
        } else {
            " "
        }
    }

    /// Space before and after an infix operator.
    fn infix_spacing(
        &self,
        def: &OperatorDef,
        l: &Term,
        r: &Term,
        ls: &str,
        rs: &str,
        data: bool,
    ) -> (&'static str, &'static str) {
        let name = def.name.as_str();
        if name == "," {
            return ("", if self.comma(data) == "," { "" } else { " " });
        }
        if is_alnum_op(name) {
            return (" ", " ");
        }
        let tight = match name {
            ":" | "^" => true,
            "/" | "//" => matches!(l.kind, TermKind::Atom(_)) && matches!(r.kind, TermKind::Integer(_)),
            _ => false,
        };
        let glues = |a: Option<char>, b: Option<char>| {
            matches!((a, b), (Some(x), Some(y)) if is_symbol_char(x) && is_symbol_char(y))
        };
        let op_first = name.chars().next();
        let op_last = name.chars().last();
        if tight
            && !glues(ls.chars().last(), op_first)
            && !glues(op_last, rs.chars().next())
            && !rs.starts_with('(')
        {
            ("", "")
        } else {
            (" ", " ")
        }
    }

    /// Lay out a term starting at column `col`, followed by `tail` more
    /// characters on its last line. The first returned line continues the
    /// current line; later ones carry their own indentation.
    fn pp(&self, t: &Term, max: u16, data: bool, col: usize, tail: usize) -> Vec<String> {
        let flat = self.flat(t, max, data);
        if col + width(&flat) + tail <= self.style.max_line || !self.breakable(t) {
            return vec![flat];
        }
        if self.priority(t) > max {
            let mut lines = self.pp_bare(t, data, col + 1, tail + 1);
            lines[0].insert(0, '(');
            lines.last_mut().expect("line").push(')');
            return lines;
        }
        self.pp_bare(t, data, col, tail)
    }

    fn breakable(&self, t: &Term) -> bool {
        matches!(t.kind, TermKind::Compound { .. })
    }

    fn pp_bare(&self, t: &Term, data: bool, col: usize, tail: usize) -> Vec<String> {
        let unit = self.style.indent_size;
        let TermKind::Compound { functor, args, .. } = &t.kind else {
            return vec![self.flat_bare(t, data)];
        };
        match self.form(t).expect("compound") {
            Form::Functional => {
                let d = self.args_data(t);
                let pieces: Vec<Piece> = args
                    .iter()
                    .map(|a| Piece {
                        term: a,
                        max: 999,
                        data: d,
                        tail: false,
                    })
                    .collect();
                self.bracketed(&format!("{}(", atom_text(functor)), &pieces, ")", d, col, unit, tail)
            }
            Form::List => {
                let (items, rest) = t.list_parts().expect("list");
                let mut pieces: Vec<Piece> = items
                    .into_iter()
                    .map(|a| Piece {
                        term: a,
                        max: 999,
                        data: true,
                        tail: false,
                    })
                    .collect();
                if !rest.is_atom("[]") {
                    pieces.push(Piece {
                        term: rest,
                        max: 999,
                        data: true,
                        tail: true,
                    });
                }
                self.bracketed("[", &pieces, "]", true, col, unit, tail)
            }
            Form::Curly => {
                let mut lines = self.pp(&args[0], 1200, self.args_data(t), col + 1, tail + 1);
                lines[0].insert(0, '{');
                lines.last_mut().expect("line").push('}');
                lines
            }
            Form::Infix(def) => {
                let (l, r) = (&args[0], &args[1]);
                let force = matches!(def.name.as_str(), ";" | "|");
                let wrap = |x: &Term| (force && x.is(",", 2)) || self.is_op_atom(x);
                let ls_flat = self.flat_bare(l, data);
                let rs_flat = self.flat_bare(r, data);
                let (before, after) = self.infix_spacing(def, l, r, &ls_flat, &rs_flat, data);
                if force && !self.fits_flat(t, data, col, tail) {
                    // Broken disjunctions lead with the operator.
                    let mut lines = self.operand_pp(l, def.left_max(), data, col, 0, wrap(l));
                    let lead = format!("{} ", op_text(&def.name));
                    lines.push(format!("{}{lead}", spaces(col)));
                    let more = self.operand_pp(r, def.right_max(), data, col + lead.len(), tail, wrap(r));
                    self.join(&mut lines, "", more);
                    return lines;
                }
                let op = format!("{before}{}", op_text(&def.name));
                let mut lines = self.operand_pp(l, def.left_max(), data, col, width(&op), wrap(l));
                lines.last_mut().expect("line").push_str(&op);
                let cur_col = self.col_after(&lines, col);
                let right_flat = self.operand(r, def.right_max(), data);
                let fits = cur_col + after.len() + width(&right_flat) + tail <= self.style.max_line;
                let indent = col + unit;
                let more = (fits || self.breakable(r))
                    .then(|| self.operand_pp(r, def.right_max(), data, cur_col + after.len(), tail, wrap(r)));
                let moved = |m: &Vec<String>| {
                    !fits
                        && indent < cur_col
                        && self.widest(m, cur_col + after.len(), tail) > self.style.max_line
                };
                if let Some(more) = more.filter(|m| !moved(m)) {
                    self.join(&mut lines, after, more);
                } else if self.breakable(r) {
                    lines.push(spaces(indent));
                    let more = self.operand_pp(r, def.right_max(), data, indent, tail, wrap(r));
                    self.join(&mut lines, "", more);
                } else {
                    lines.push(format!("{}{right_flat}", spaces(indent)));
                }
                lines
            }
            Form::Prefix(def) => {
                let arg_flat = self.operand(&args[0], def.right_max(), data);
                let head = format!("{}{}", op_text(&def.name), self.prefix_gap(def, &arg_flat));
                let mut lines = vec![head.clone()];
                let more = self.operand_pp(&args[0], def.right_max(), data, col + width(&head), tail, self.is_op_atom(&args[0]));
                self.join(&mut lines, "", more);
                lines
            }
            Form::Postfix(_) => vec![self.flat_bare(t, data)],
        }
    }

    fn operand_pp(&self, t: &Term, max: u16, data: bool, col: usize, tail: usize, wrap: bool) -> Vec<String> {
        if wrap {
            let mut lines = self.pp_bare(t, data, col + 1, tail + 1);
            lines[0].insert(0, '(');
            lines.last_mut().expect("line").push(')');
            lines
        } else {
            self.pp(t, max, data, col, tail)
        }
    }

    fn fits_flat(&self, t: &Term, data: bool, col: usize, tail: usize) -> bool {
        col + width(&self.flat_bare(t, data)) + tail <= self.style.max_line
    }

    /// Rightmost column reached by `lines` placed at `col`, counting `tail`.
    fn widest(&self, lines: &[String], col: usize, tail: usize) -> usize {
        let n = lines.len();
        lines
            .iter()
            .enumerate()
            .map(|(i, l)| {
                let start = if i == 0 { col } else { 0 };
                start + width(l) + if i + 1 == n { tail } else { 0 }
            })
            .max()
            .unwrap_or(col)
    }

    fn col_after(&self, lines: &[String], col: usize) -> usize {
        if lines.len() == 1 {
            col + width(&lines[0])
        } else {
            width(lines.last().expect("line"))
        }
    }

    /// Append `more` to `lines`, its first line after `sep`.
    fn join(&self, lines: &mut Vec<String>, sep: &str, more: Vec<String>) {
        let mut more = more.into_iter();
        let last = lines.last_mut().expect("line");
        last.push_str(sep);
        last.push_str(&more.next().unwrap_or_default());
        lines.extend(more);
    }

    /// `open`, pieces filled greedily, `close`. Continuation lines start one
    /// unit past `col`.
    #[allow(clippy::too_many_arguments)]
    fn bracketed(
        &self,
        open: &str,
        pieces: &[Piece],
        close: &str,
        data: bool,
        col: usize,
        unit: usize,
        tail: usize,
    ) -> Vec<String> {
        let mut lines = vec![open.to_string()];
        self.fill(pieces, &mut lines, col + width(open), col + unit, width(close) + tail, data);
        lines.last_mut().expect("line").push_str(close);
        lines
    }

    /// Place pieces after the current last line, which ends at `cur_col`.
    fn fill(
        &self,
        pieces: &[Piece],
        lines: &mut Vec<String>,
        mut cur_col: usize,
        cont: usize,
        last_after: usize,
        data: bool,
    ) {
        let comma = self.comma(data);
        let space = &comma[1..];
        for (i, p) in pieces.iter().enumerate() {
            let after = if i + 1 == pieces.len() { last_after } else { 1 };
            let (sep, col) = if i == 0 {
                ("", cur_col)
            } else if p.tail {
                lines.last_mut().expect("line").push('|');
                cur_col += 1;
                let flat = self.flat(p.term, p.max, p.data);
                if cur_col + width(&flat) + after <= self.style.max_line {
                    ("", cur_col)
                } else {
                    lines.push(spaces(cont));
                    ("", cont)
                }
            } else {
                lines.last_mut().expect("line").push(',');
                cur_col += 1;
                let flat = self.flat(p.term, p.max, p.data);
                if cur_col + space.len() + width(&flat) + after <= self.style.max_line {
                    (space, cur_col + space.len())
                } else {
                    lines.push(spaces(cont));
                    ("", cont)
                }
            };
            let more = self.pp(p.term, p.max, p.data, col, after);
            cur_col = if more.len() == 1 {
                col + width(&more[0])
            } else {
                width(more.last().expect("line"))
            };
            self.join(lines, sep, more);
        }
    }
}

/// One line of a formatted clause.
#[derive(Debug, Clone)]
struct Line {
    text: String,
}

/// A goal (or clause head) line group that comments attach to.
#[derive(Debug, Clone, Copy)]
struct Unit {
    byte_start: usize,
    first: usize,
    last: usize,
}

struct ClauseWriter<'p, 'a> {
    p: &'p Printer<'a>,
    lines: Vec<Line>,
    units: Vec<Unit>,
}

fn conj_flatten(t: &Term) -> Vec<&Term> {
    let mut out = Vec::new();
    let mut cur = t;
    while cur.is(",", 2) {
        out.push(&cur.args()[0]);
        cur = &cur.args()[1];
    }
    out.push(cur);
    out
}

/// Disjuncts of a goal-level branching term with their separators.
fn disjuncts(t: &Term) -> Vec<(&'static str, &Term)> {
    let sep = if t.is(";", 2) {
        ";"
    } else if t.is("|", 2) {
        "|"
    } else {
        return vec![("(", t)];
    };
    let mut out = vec![("(", &t.args()[0])];
    let mut cur = &t.args()[1];
    while cur.is(sep, 2) {
        out.push((sep, &cur.args()[0]));
        cur = &cur.args()[1];
    }
    out.push((sep, cur));
    out
}

fn attach_tail(line: &mut String, tail: &str) {
    if tail.starts_with('.') && line.chars().last().is_some_and(is_symbol_char) {
        line.push(' ');
    }
    line.push_str(tail);
}

impl<'p, 'a> ClauseWriter<'p, 'a> {
    fn unit(&self) -> usize {
        self.p.style.indent_size
    }

    fn push_unit(&mut self, byte_start: usize, texts: Vec<String>) {
        let first = self.lines.len();
        self.lines.extend(texts.into_iter().map(|text| Line { text }));
        self.units.push(Unit {
            byte_start,
            first,
            last: self.lines.len() - 1,
        });
    }

    fn seq(&mut self, goals: &[&Term], first_prefix: String, indent: usize, tail: &str) {
        let unit = self.unit();
        // Each repeat indents the goals up to its cut by one more unit.
        let mut extra = vec![0; goals.len()];
        for (i, g) in goals.iter().enumerate() {
            if !g.is_atom("repeat") {
                continue;
            }
            if let Some(j) = goals[i + 1..].iter().position(|g| g.is_atom("!")) {
                for e in &mut extra[i + 1..i + 1 + j] {
                    *e += unit;
                }
            }
        }
        for (i, g) in goals.iter().enumerate() {
            let prefix = if i == 0 {
                first_prefix.clone()
            } else {
                spaces(indent + extra[i])
            };
            let t = if i + 1 == goals.len() { tail } else { "," };
            self.goal(g, prefix, t);
        }
    }

    fn goal(&mut self, g: &Term, prefix: String, tail: &str) {
        if is_branching(g) {
            self.block(&disjuncts(g), prefix, tail);
        } else if g.is(",", 2) {
            self.block(&[("(", g)], prefix, tail);
        } else if g.is("\\+", 1) && (is_branching(&g.args()[0]) || g.args()[0].is(",", 2)) {
            let unit = self.unit();
            let mut head = format!("{prefix}\\+ ");
            let w = width(&head);
            head.push_str(&spaces((unit - w % unit) % unit));
            self.block(&disjuncts(&g.args()[0]), head, tail);
        } else {
            let col = width(&prefix);
            let mut texts = self.p.pp(g, 999, false, col, tail.chars().count());
            texts[0].insert_str(0, &prefix);
            attach_tail(texts.last_mut().expect("line"), tail);
            self.push_unit(g.outer_span().byte_start, texts);
        }
    }

    fn block(&mut self, parts: &[(&str, &Term)], prefix: String, tail: &str) {
        let c = width(&prefix);
        let lead_w = self.p.style.lead_width();
        let pad = spaces(lead_w - 1);
        for (k, (sep, d)) in parts.iter().enumerate() {
            let lead = if k == 0 {
                format!("{prefix}({pad}")
            } else {
                format!("{}{sep}{pad}", spaces(c))
            };
            self.disjunct(d, lead, c + lead_w);
        }
        let mut close = format!("{})", spaces(c));
        attach_tail(&mut close, tail);
        self.lines.push(Line { text: close });
    }

    fn disjunct(&mut self, d: &Term, lead: String, inner: usize) {
        if d.is("->", 2) || d.is("*->", 2) {
            let arrow = format!(" {}", d.name().unwrap_or_default());
            self.seq(&conj_flatten(&d.args()[0]), lead, inner, &arrow);
            self.seq(&conj_flatten(&d.args()[1]), spaces(inner), inner, "");
        } else {
            self.seq(&conj_flatten(d), lead, inner, "");
        }
    }

    fn head(&mut self, clause: &Clause, head: &Term, tail: &str) {
        let p = self.p;
        let unit = self.unit();
        let flat = p.flat(head, 1199, false);
        let texts = if width(&flat) + tail.chars().count() <= p.style.max_line {
            let mut line = flat;
            attach_tail(&mut line, tail);
            vec![line]
        } else if let (Some(Form::Functional), TermKind::Compound { functor, args, .. }) = (p.form(head), &head.kind) {
            let data = p.args_data(head);
            let pieces: Vec<Piece> = args
                .iter()
                .map(|a| Piece {
                    term: a,
                    max: 999,
                    data,
                    tail: false,
                })
                .collect();
            let mut lines = vec![format!("{}(", atom_text(functor)), spaces(unit)];
            p.fill(&pieces, &mut lines, unit, unit, 0, data);
            let mut close = ")".to_string();
            attach_tail(&mut close, tail);
            lines.push(close);
            lines
        } else {
            let mut lines = p.pp(head, 1199, false, 0, tail.chars().count());
            attach_tail(lines.last_mut().expect("line"), tail);
            lines
        };
        self.push_unit(clause.span.byte_start, texts);
    }

    fn clause(&mut self, clause: &Clause) {
        let unit = self.unit();
        match clause.kind {
            ClauseKind::Rule | ClauseKind::GrammarRule => {
                let neck = if clause.kind == ClauseKind::Rule { " :-" } else { " -->" };
                self.head(clause, clause.head().expect("head"), neck);
                let body = clause.body().expect("body");
                self.seq(&conj_flatten(body), spaces(unit), unit, ".");
            }
            ClauseKind::Fact => self.head(clause, &clause.term, "."),
            ClauseKind::Directive => {
                let neck = if clause.term.is("?-", 1) { "?- " } else { ":- " };
                let body = clause.body().expect("body");
                let mut texts = self.p.pp(body, 1199, false, neck.len(), 1);
                texts[0].insert_str(0, neck);
                attach_tail(texts.last_mut().expect("line"), ".");
                self.push_unit(clause.span.byte_start, texts);
            }
        }
    }
}

fn indent_of(line: &str) -> usize {
    line.len() - line.trim_start_matches(' ').len()
}

fn comment_lines(text: &str, indent: usize) -> Vec<String> {
    let mut out: Vec<String> = text.split('\n').map(str::to_string).collect();
    out[0].insert_str(0, &spaces(indent));
    out
}

/// Place a clause's own comments around its formatted lines.
fn place_comments(
    program: &Program,
    style: &FormatStyle,
    writer: ClauseWriter,
    comments: &[&Comment],
) -> Vec<String> {
    let ClauseWriter { lines, units, .. } = writer;
    let n = units.len();
    let mut before: Vec<Vec<&Comment>> = vec![Vec::new(); n];
    let mut trailing: Vec<Vec<&Comment>> = vec![Vec::new(); n];
    let mut above: Vec<&Comment> = Vec::new();
    for &c in comments {
        match c.attachment {
            Attachment::Preceding(_) => above.push(c),
            Attachment::Inner(_) => {
                let u = units
                    .iter()
                    .position(|u| u.byte_start > c.span.byte_start)
                    .unwrap_or(n - 1);
                before[u].push(c);
            }
            Attachment::Trailing(_) => {
                let prev = (0..c.token)
                    .rev()
                    .find(|&k| !program.tokens[k].kind.is_comment())
                    .map_or(0, |k| program.tokens[k].span.byte_start);
                let u = units.iter().rposition(|u| u.byte_start <= prev).unwrap_or(0);
                trailing[u].push(c);
            }
            Attachment::FreeStanding => {}
        }
    }
    let mut keep: Vec<Option<&Comment>> = vec![None; n];
    for (u, list) in trailing.into_iter().enumerate() {
        let fits = |c: &Comment| {
            let len = c.text.chars().count();
            !c.text.contains('\n')
                && len <= style.eol_comment_max
                && width(&lines[units[u].last].text) + 1 + len <= style.max_line
        };
        if list.len() == 1 && fits(list[0]) {
            keep[u] = Some(list[0]);
        } else {
            before[u].extend(list);
        }
    }

    let mut out: Vec<String> = Vec::new();
    for c in above {
        out.extend(comment_lines(&c.text, 0));
    }
    let mut next_unit = 0;
    for (i, line) in lines.into_iter().enumerate() {
        let mut text = line.text;
        while next_unit < n && units[next_unit].first == i {
            let indent = indent_of(&text);
            for c in &before[next_unit] {
                out.extend(comment_lines(&c.text, indent));
            }
            next_unit += 1;
        }
        if let Some(u) = units.iter().position(|u| u.last == i) {
            if let Some(c) = keep[u] {
                text.push(' ');
                text.push_str(&c.text);
            }
        }
        out.push(text);
    }
    out
}

#[derive(Debug, Clone, Copy)]
enum Block {
    Item(usize),
    Free(usize),
}

/// Format a parsed program. The program must be free of syntax errors.
pub fn format_program(program: &Program, config: &Config) -> String {
    let style = FormatStyle::from_config(config);
    let mut ops = OperatorTable::iso();
    let mut module = None;

    let mut per_item: Vec<Vec<&Comment>> = vec![Vec::new(); program.items.len()];
    let mut free: Vec<usize> = Vec::new();
    for (ci, c) in program.comments.iter().enumerate() {
        match c.attachment {
            Attachment::Preceding(i) | Attachment::Trailing(i) | Attachment::Inner(i) => per_item[i].push(c),
            Attachment::FreeStanding => free.push(ci),
        }
    }

    let mut rendered: Vec<Vec<String>> = Vec::with_capacity(program.items.len());
    for (i, clause) in program.items.iter().enumerate() {
        let printer = Printer {
            ops: &ops,
            style: &style,
            goals: goal_terms(clause).into_iter().map(|t| t as *const Term).collect(),
        };
        let mut writer = ClauseWriter {
            p: &printer,
            lines: Vec::new(),
            units: Vec::new(),
        };
        writer.clause(clause);
        rendered.push(place_comments(program, &style, writer, &per_item[i]));
        if clause.is_directive() {
            apply_directive(clause, &mut ops, &mut module, i);
        }
    }

    // source extent of each block
    let item_lines = |i: usize| {
        let clause = &program.items[i];
        let mut start = clause.span.start_line;
        let mut end = clause.span.end_line;
        for c in &per_item[i] {
            start = start.min(c.span.start_line);
            if matches!(c.attachment, Attachment::Trailing(_)) {
                end = end.max(c.span.end_line);
            }
        }
        (start, end)
    };
    let mut blocks: Vec<(usize, Block)> = program
        .items
        .iter()
        .enumerate()
        .map(|(i, _)| {
            let first = per_item[i]
                .iter()
                .map(|c| c.span.byte_start)
                .chain(std::iter::once(program.items[i].span.byte_start))
                .min()
                .unwrap_or(0);
            (first, Block::Item(i))
        })
        .chain(free.iter().map(|&ci| (program.comments[ci].span.byte_start, Block::Free(ci))))
        .collect();
    blocks.sort_by_key(|(b, _)| *b);
    let blocks: Vec<Block> = blocks.into_iter().map(|(_, b)| b).collect();

    let extent = |b: Block| match b {
        Block::Item(i) => item_lines(i),
        Block::Free(ci) => {
            let s = program.comments[ci].span;
            (s.start_line, s.end_line)
        }
    };
    let same_predicate = |a: usize, b: usize| {
        let (x, y) = (&program.items[a], &program.items[b]);
        !x.is_directive()
            && !y.is_directive()
            && x.indicator().is_some()
            && x.indicator() == y.indicator()
            && (x.kind == ClauseKind::GrammarRule) == (y.kind == ClauseKind::GrammarRule)
    };
    let clause_pair = |a: usize, b: usize| {
        let (x, y) = (&program.items[a], &program.items[b]);
        !x.is_directive() && !y.is_directive() && x.indicator().is_some() && y.indicator().is_some()
    };

    let mut out: Vec<String> = Vec::new();
    for (k, &b) in blocks.iter().enumerate() {
        if k > 0 {
            let prev = blocks[k - 1];
            let prev_item = blocks[..k].iter().rev().find_map(|b| match b {
                Block::Item(i) => Some(*i),
                Block::Free(_) => None,
            });
            let next_item = blocks[k..].iter().find_map(|b| match b {
                Block::Item(i) => Some(*i),
                Block::Free(_) => None,
            });
            let source_gap = extent(b).0.saturating_sub(extent(prev).1 + 1).min(2);
            let gap = match (prev, b, prev_item, next_item) {
                (_, _, Some(x), Some(y)) if same_predicate(x, y) => 0,
                (Block::Item(x), Block::Item(y), _, _) if clause_pair(x, y) => 1,
                _ => source_gap,
            };
            out.extend(std::iter::repeat_n(String::new(), gap));
        }
        match b {
            Block::Item(i) => out.extend(rendered[i].iter().cloned()),
            Block::Free(ci) => out.extend(comment_lines(&program.comments[ci].text, 0)),
        }
    }
    if out.is_empty() {
        return String::new();
    }
    let mut text = out.join("\n");
    text.push('\n');
    text
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fmt(text: &str) -> String {
        format_source(&SourceFile::from_text("t.pl", text), &Config::default()).unwrap()
    }

    #[test]
    fn same_length() {
        let got = fmt("same_length([],[]). same_length([_|L1],[_|L2]):-same_length(L1,L2).");
        assert_eq!(
            got,
            "same_length([], []).\nsame_length([_|L1], [_|L2]) :-\n    same_length(L1, L2).\n"
        );
    }

    #[test]
    fn compact_disjunction() {
        assert_eq!(fmt("p :- ( a ; b )."), "p :-\n    (   a\n    ;   b\n    ).\n");
    }

    #[test]
    fn if_then_else() {
        let got = fmt("p :- ( t1 -> a ; t2 -> b ; c ).");
        assert_eq!(
            got,
            "p :-\n    (   t1 ->\n        a\n    ;   t2 ->\n        b\n    ;   c\n    ).\n"
        );
    }

    #[test]
    fn repeat_region() {
        let got = fmt("process_queries :- repeat, read_query(Q), handle(Q), Q = [quit], !, write('All done.'), nl.");
        assert_eq!(
            got,
            "process_queries :-\n    repeat,\n        read_query(Q),\n        handle(Q),\n        Q = [quit],\n    !,\n    write('All done.'),\n    nl.\n"
        );
    }

    #[test]
    fn minimal_parentheses() {
        assert_eq!(fmt("p(X) :- X = ((a+b)*c), Y is (1-(2-3)), q(Y)."), "p(X) :-\n    X = (a + b) * c,\n    Y is 1 - (2 - 3),\n    q(Y).\n");
        assert_eq!(fmt("p :- X = (-(1)), Y = -1, Z = -(a), q(X, Y, Z)."), "p :-\n    X = - 1,\n    Y = -1,\n    Z = -a,\n    q(X, Y, Z).\n");
        assert_eq!(fmt("p(X) :- findall(Y, (a(Y), b ; c), X)."), "p(X) :-\n    findall(Y, ((a(Y), b) ; c), X).\n");
        assert_eq!(fmt("x(lists:append/3, f(-), [-])."), "x(lists:append/3, f(-), [-]).\n");
    }

    #[test]
    fn comments_survive() {
        let src = "% header one\n% header two\n% header three\n\n% doc\nfoo(X) :- % why\n    % inner\n    bar(X), baz.\n";
        let got = fmt(src);
        assert_eq!(
            got,
            "% header one\n% header two\n% header three\n\n% doc\nfoo(X) :- % why\n    % inner\n    bar(X),\n    baz.\n"
        );
    }

    #[test]
    fn long_heads_break_after_paren() {
        let mut cfg = Config::default();
        cfg.max_line_length = 30;
        let src = SourceFile::from_text("t.pl", "long_predicate_name(long_arg1, long_arg2, long_arg3) :- true.\n");
        let got = format_source(&src, &cfg).unwrap();
        assert_eq!(
            got,
            "long_predicate_name(\n    long_arg1, long_arg2,\n    long_arg3\n) :-\n    true.\n"
        );
    }

    #[test]
    fn blank_lines() {
        let got = fmt("a(1).\n\n\na(2).\nb.\n\n\n\n:- dynamic c/1.\n");
        assert_eq!(got, "a(1).\na(2).\n\nb.\n\n\n:- dynamic c/1.\n");
    }

    #[test]
    fn check_reports_divergence() {
        let src = SourceFile::from_text("t.pl", "p :-\n\tq.\n");
        let check = check_format(&src, &Config::default()).unwrap();
        let span = check.divergence.unwrap();
        assert_eq!((span.start_line, span.start_col), (2, 1));
        let src = SourceFile::from_text("t.pl", "p.\n\n");
        assert!(!check_format(&src, &Config::default()).unwrap().is_formatted());
        let src = SourceFile::from_text("t.pl", "p.\n");
        assert!(check_format(&src, &Config::default()).unwrap().is_formatted());
    }

    #[test]
    fn refuses_syntax_errors() {
        assert!(format_source(&SourceFile::from_text("t.pl", "p :- .\n"), &Config::default()).is_err());
    }
}
