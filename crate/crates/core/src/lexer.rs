//! Tokenizer following the ISO Prolog token classes.
//!
//! Comments are kept as tokens so the formatter can put them back.

use crate::diagnostics::{Diagnostic, Severity, LEX_ERROR};
use crate::source::{SourceFile, Span};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    /// Letter-digit name starting with a lowercase letter.
    Atom,
    QuotedAtom,
    Variable,
    Integer,
    Float,
    /// Double- or back-quoted text.
    Str,
    /// Graphic-character names (`:-`, `=..`) and the solo names `!` and `;`.
    Punct,
    OpenParen,
    CloseParen,
    OpenBracket,
    CloseBracket,
    OpenBrace,
    CloseBrace,
    Comma,
    Bar,
    /// The clause terminator.
    End,
    LineComment,
    BlockComment,
    Error,
}

impl TokenKind {
    pub fn is_comment(self) -> bool {
        matches!(self, TokenKind::LineComment | TokenKind::BlockComment)
    }

    /// Tokens that can name an atom or a functor.
    pub fn is_name(self) -> bool {
        matches!(
            self,
            TokenKind::Atom | TokenKind::QuotedAtom | TokenKind::Punct
        )
    }

    pub fn is_open(self) -> bool {
        matches!(
            self,
            TokenKind::OpenParen | TokenKind::OpenBracket | TokenKind::OpenBrace
        )
    }

    pub fn is_close(self) -> bool {
        matches!(
            self,
            TokenKind::CloseParen | TokenKind::CloseBracket | TokenKind::CloseBrace
        )
    }

    /// Token kinds whose text may legitimately contain tabs or arbitrary characters.
    pub fn is_opaque(self) -> bool {
        matches!(
            self,
            TokenKind::QuotedAtom
                | TokenKind::Str
                | TokenKind::LineComment
                | TokenKind::BlockComment
                | TokenKind::Error
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    pub span: Span,
    /// A newline separates this token from the previous one (true for the first token).
    pub preceded_by_newline: bool,
    /// Spaces immediately before the token on its line.
    pub preceding_spaces: usize,
}

impl Token {
    /// Numeric value of an integer token, including `0'c` character codes.
    pub fn integer_value(&self) -> Option<i128> {
        if self.kind != TokenKind::Integer {
            return None;
        }
        integer_value(&self.text)
    }

    /// Whether the previous byte of the source is the end of `prev` (no layout between).
    pub fn adjacent_to(&self, prev: &Token) -> bool {
        prev.span.byte_end == self.span.byte_start
    }
}

/// Value of an integer literal as written (`42`, `-7`, `0'a`, `0x1F`, `0b101`, `0o17`).
pub fn integer_value(text: &str) -> Option<i128> {
    let (negative, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text),
    };
    let value = if let Some(rest) = body.strip_prefix("0'") {
        char_code_value(rest)?
    } else if let Some(hex) = body.strip_prefix("0x") {
        i128::from_str_radix(&hex.replace('_', ""), 16).ok()?
    } else if let Some(oct) = body.strip_prefix("0o") {
        i128::from_str_radix(&oct.replace('_', ""), 8).ok()?
    } else if let Some(bin) = body.strip_prefix("0b") {
        i128::from_str_radix(&bin.replace('_', ""), 2).ok()?
    } else {
        body.replace('_', "").parse::<i128>().ok()?
    };
    Some(if negative { -value } else { value })
}

fn char_code_value(rest: &str) -> Option<i128> {
    let mut chars = rest.chars();
    let c = chars.next()?;
    if c == '\\' {
        let unescaped = unescape(rest, '\'').ok()?;
        return unescaped.chars().next().map(|c| c as i128);
    }
    if c == '\'' {
        // `0''` and `0'''` both denote the quote character.
        return Some('\'' as i128);
    }
    Some(c as i128)
}

/// Resolve ISO escape sequences in the body of a quoted item.
///
/// `body` excludes the surrounding quotes. Returns the offset of the first
/// malformed escape on failure.
pub fn unescape(body: &str, quote: char) -> Result<String, usize> {
    let mut out = String::new();
    let mut chars = body.char_indices().peekable();
    while let Some((i, c)) = chars.next() {
        if c == quote {
            // doubled quote
            if let Some((_, next)) = chars.peek() {
                if *next == quote {
                    chars.next();
                }
            }
            out.push(quote);
            continue;
        }
        if c != '\\' {
            out.push(c);
            continue;
        }
        let Some((_, e)) = chars.next() else {
            return Err(i);
        };
        match e {
            'n' => out.push('\n'),
            't' => out.push('\t'),
            'r' => out.push('\r'),
            'a' => out.push('\x07'),
            'b' => out.push('\x08'),
            'f' => out.push('\x0c'),
            'v' => out.push('\x0b'),
            'e' => out.push('\x1b'),
            's' => out.push(' '),
            '0'..='7' => {
                let mut digits = String::from(e);
                while let Some((_, d)) = chars.peek() {
                    if d.is_digit(8) {
                        digits.push(*d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                if let Some((_, '\\')) = chars.peek() {
                    chars.next();
                }
                let code = u32::from_str_radix(&digits, 8).map_err(|_| i)?;
                out.push(char::from_u32(code).ok_or(i)?);
            }
            'x' => {
                let mut digits = String::new();
                while let Some((_, d)) = chars.peek() {
                    if d.is_ascii_hexdigit() {
                        digits.push(*d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                if let Some((_, '\\')) = chars.peek() {
                    chars.next();
                }
                let code = u32::from_str_radix(&digits, 16).map_err(|_| i)?;
                out.push(char::from_u32(code).ok_or(i)?);
            }
            '\n' => {}
            '\\' | '\'' | '"' | '`' => out.push(e),
            _ => return Err(i),
        }
    }
    Ok(out)
}

pub fn is_symbol_char(c: char) -> bool {
    matches!(
        c,
        '#' | '$' | '&' | '*' | '+' | '-' | '.' | '/' | ':' | '<' | '=' | '>' | '?' | '@' | '^'
            | '~' | '\\'
    )
}

pub fn is_alnum(c: char) -> bool {
    c == '_' || c.is_alphanumeric()
}

/// Lowercase-initial letters start atoms; uppercase or `_` start variables.
pub fn starts_variable(c: char) -> bool {
    c == '_' || c.is_uppercase()
}

pub fn starts_atom(c: char) -> bool {
    c.is_alphabetic() && !c.is_uppercase()
}

struct Lexer<'a> {
    src: &'a SourceFile,
    text: &'a str,
    pos: usize,
    tokens: Vec<Token>,
    diagnostics: Vec<Diagnostic>,
    newline_pending: bool,
    spaces: usize,
}

/// Tokenize a source file. Never fails; lexical problems become diagnostics.
pub fn scan(src: &SourceFile) -> (Vec<Token>, Vec<Diagnostic>) {
    let mut lx = Lexer {
        src,
        text: &src.content,
        pos: 0,
        tokens: Vec::new(),
        diagnostics: Vec::new(),
        newline_pending: true,
        spaces: 0,
    };
    lx.run();
    (lx.tokens, lx.diagnostics)
}

impl<'a> Lexer<'a> {
    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn peek_at(&self, n: usize) -> Option<char> {
        self.text[self.pos..].chars().nth(n)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn eat_while(&mut self, f: impl Fn(char) -> bool) {
        while let Some(c) = self.peek() {
            if f(c) {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn push(&mut self, kind: TokenKind, start: usize) {
        let span = self.src.span(start, self.pos);
        self.tokens.push(Token {
            kind,
            text: self.text[start..self.pos].to_string(),
            span,
            preceded_by_newline: self.newline_pending,
            preceding_spaces: self.spaces,
        });
        self.newline_pending = false;
        self.spaces = 0;
    }

    fn error(&mut self, start: usize, message: String) {
        let span = self.src.span(start, self.pos);
        self.diagnostics
            .push(Diagnostic::new(LEX_ERROR, Severity::Error, span, message));
    }

    fn run(&mut self) {
        while let Some(c) = self.peek() {
            let start = self.pos;
            match c {
                '\n' => {
                    self.bump();
                    self.newline_pending = true;
                    self.spaces = 0;
                }
                ' ' => {
                    self.bump();
                    self.spaces += 1;
                }
                c if c.is_whitespace() => {
                    self.bump();
                    self.spaces = 0;
                }
                '%' => {
                    self.eat_while(|c| c != '\n');
                    // Trailing layout (including `\r`) is not part of the comment.
                    let trimmed = self.text[start..self.pos].trim_end().len();
                    let end = self.pos;
                    self.pos = start + trimmed;
                    self.push(TokenKind::LineComment, start);
                    self.pos = end;
                }
                '/' if self.peek_at(1) == Some('*') => {
                    match self.text[start + 2..].find("*/") {
                        Some(off) => {
                            self.pos = start + 2 + off + 2;
                            self.push(TokenKind::BlockComment, start);
                        }
                        None => {
                            self.unterminated(start, "block comment");
                            return;
                        }
                    }
                }
                '0' if self.peek_at(1) == Some('\'') => self.char_code(start),
                c if c.is_ascii_digit() => self.number(start),
                c if starts_variable(c) => {
                    self.eat_while(is_alnum);
                    self.push(TokenKind::Variable, start);
                }
                c if starts_atom(c) => {
                    self.eat_while(is_alnum);
                    self.push(TokenKind::Atom, start);
                }
                '\'' => {
                    if !self.quoted(start, '\'', TokenKind::QuotedAtom) {
                        return;
                    }
                }
                '"' | '`' => {
                    if !self.quoted(start, c, TokenKind::Str) {
                        return;
                    }
                }
                '(' => self.single(TokenKind::OpenParen),
                ')' => self.single(TokenKind::CloseParen),
                '[' => self.single(TokenKind::OpenBracket),
                ']' => self.single(TokenKind::CloseBracket),
                '{' => self.single(TokenKind::OpenBrace),
                '}' => self.single(TokenKind::CloseBrace),
                ',' => self.single(TokenKind::Comma),
                '|' if self.peek_at(1) == Some('|') => {
                    self.bump();
                    self.bump();
                    self.push(TokenKind::Punct, start);
                }
                '|' => self.single(TokenKind::Bar),
                '!' | ';' => self.single(TokenKind::Punct),
                c if is_symbol_char(c) => {
                    self.eat_while(is_symbol_char);
                    let text = &self.text[start..self.pos];
                    if text == "." {
                        let next = self.peek();
                        if next.is_none_or(|n| n.is_whitespace() || n == '%') {
                            self.push(TokenKind::End, start);
                            continue;
                        }
                    }
                    self.push(TokenKind::Punct, start);
                }
                other => {
                    self.bump();
                    self.error(start, format!("unexpected character `{other}`"));
                    self.push(TokenKind::Error, start);
                }
            }
        }
    }

    fn single(&mut self, kind: TokenKind) {
        let start = self.pos;
        self.bump();
        self.push(kind, start);
    }

    fn unterminated(&mut self, start: usize, what: &str) {
        self.pos = self.text.len();
        self.error(start, format!("unterminated {what}"));
        self.push(TokenKind::Error, start);
    }

    /// Returns false when the item runs to end of file.
    fn quoted(&mut self, start: usize, quote: char, kind: TokenKind) -> bool {
        self.bump();
        loop {
            match self.bump() {
                None => {
                    let what = match quote {
                        '\'' => "quoted atom",
                        _ => "string",
                    };
                    self.unterminated(start, what);
                    return false;
                }
                Some('\\') => {
                    self.bump();
                }
                Some(c) if c == quote => {
                    if self.peek() == Some(quote) {
                        self.bump();
                    } else {
                        break;
                    }
                }
                Some(_) => {}
            }
        }
        let body = &self.text[start + 1..self.pos - 1];
        if let Err(off) = unescape(body, quote) {
            let at = start + 1 + off;
            let saved = self.pos;
            self.pos = at + 1;
            self.error(at, "malformed escape sequence".to_string());
            self.pos = saved;
        }
        self.push(kind, start);
        true
    }

    fn char_code(&mut self, start: usize) {
        self.bump();
        self.bump();
        match self.bump() {
            Some('\\') => {
                // escape: \n, \\, \xHH\, \NNN\
                match self.bump() {
                    Some('x') => {
                        self.eat_while(|c| c.is_ascii_hexdigit());
                        if self.peek() == Some('\\') {
                            self.bump();
                        }
                    }
                    Some(d) if d.is_digit(8) => {
                        self.eat_while(|c| c.is_digit(8));
                        if self.peek() == Some('\\') {
                            self.bump();
                        }
                    }
                    Some(_) => {}
                    None => {
                        self.error(start, "incomplete character code".to_string());
                        self.push(TokenKind::Error, start);
                        return;
                    }
                }
            }
            Some('\'') => {
                if self.peek() == Some('\'') {
                    self.bump();
                }
            }
            Some(_) => {}
            None => {
                self.error(start, "incomplete character code".to_string());
                self.push(TokenKind::Error, start);
                return;
            }
        }
        self.push(TokenKind::Integer, start);
    }

    fn number(&mut self, start: usize) {
        let radix = match (self.peek(), self.peek_at(1), self.peek_at(2)) {
            (Some('0'), Some('x'), Some(c)) if c.is_ascii_hexdigit() => Some(16),
            (Some('0'), Some('o'), Some(c)) if c.is_digit(8) => Some(8),
            (Some('0'), Some('b'), Some(c)) if c.is_digit(2) => Some(2),
            _ => None,
        };
        if let Some(radix) = radix {
            self.bump();
            self.bump();
            self.eat_while(|c| c.is_digit(radix));
            self.push(TokenKind::Integer, start);
            return;
        }
        self.eat_while(|c| c.is_ascii_digit());
        let mut kind = TokenKind::Integer;
        if self.peek() == Some('.') && self.peek_at(1).is_some_and(|c| c.is_ascii_digit()) {
            kind = TokenKind::Float;
            self.bump();
            self.eat_while(|c| c.is_ascii_digit());
        }
        if kind == TokenKind::Float && matches!(self.peek(), Some('e') | Some('E')) {
            let exp_digits = match self.peek_at(1) {
                Some('+') | Some('-') => self.peek_at(2).is_some_and(|c| c.is_ascii_digit()),
                Some(c) => c.is_ascii_digit(),
                None => false,
            };
            if exp_digits {
                self.bump();
                if matches!(self.peek(), Some('+') | Some('-')) {
                    self.bump();
                }
                self.eat_while(|c| c.is_ascii_digit());
            }
        }
        self.push(kind, start);
    }
}
