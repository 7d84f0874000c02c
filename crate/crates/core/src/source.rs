//! Source files, line tables and spans.

use std::fmt;
use std::path::Path;

use serde::Serialize;
use thiserror::Error;

/// A region of a source file.
///
/// Lines and columns are 1-based and count characters; `end_col` is the
/// column just past the last spanned character. `byte_start..byte_end`
/// slices the file content to exactly the spanned text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
pub struct Span {
    pub start_line: usize,
    pub start_col: usize,
    pub end_line: usize,
    pub end_col: usize,
    pub byte_start: usize,
    pub byte_end: usize,
}

impl Span {
    /// Smallest span covering both `self` and `other`.
    pub fn join(self, other: Span) -> Span {
        let (first, _) = if self.byte_start <= other.byte_start {
            (self, other)
        } else {
            (other, self)
        };
        let last = if self.byte_end >= other.byte_end {
            self
        } else {
            other
        };
        Span {
            start_line: first.start_line,
            start_col: first.start_col,
            end_line: last.end_line,
            end_col: last.end_col,
            byte_start: first.byte_start,
            byte_end: last.byte_end,
        }
    }

    pub fn contains(&self, byte: usize) -> bool {
        self.byte_start <= byte && byte < self.byte_end
    }

    pub fn is_multiline(&self) -> bool {
        self.end_line > self.start_line
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.start_line, self.start_col)
    }
}

/// Metrics for one physical line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineInfo {
    pub number: usize,
    /// Characters on the line, excluding the line terminator. Tabs count as one.
    pub length: usize,
    pub indent_width: usize,
    /// Any tab anywhere on the line, including inside quoted text.
    pub has_tab: bool,
    pub is_blank: bool,
    /// Byte offset of the first character of the line.
    pub byte_start: usize,
    /// Byte offset just past the line content (before `\r\n` or `\n`).
    pub byte_end: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NewlineStyle {
    None,
    Lf,
    CrLf,
    Mixed,
}

#[derive(Debug, Error)]
pub enum SourceError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: invalid UTF-8 at byte offset {offset}")]
    Encoding { path: String, offset: usize },
}

/// A loaded source file with its line table.
#[derive(Debug, Clone)]
pub struct SourceFile {
    pub path: String,
    pub content: String,
    pub lines: Vec<LineInfo>,
    pub newline: NewlineStyle,
}

impl SourceFile {
    /// Reads and decodes a file from disk.
    pub fn load(path: impl AsRef<Path>) -> Result<SourceFile, SourceError> {
        let path = path.as_ref();
        let display = path.display().to_string();
        let bytes = std::fs::read(path).map_err(|source| SourceError::Io {
            path: display.clone(),
            source,
        })?;
        SourceFile::from_bytes(display, bytes)
    }

    pub fn from_bytes(path: impl Into<String>, bytes: Vec<u8>) -> Result<SourceFile, SourceError> {
        let path = path.into();
        match String::from_utf8(bytes) {
            Ok(text) => Ok(SourceFile::from_text(path, text)),
            Err(err) => Err(SourceError::Encoding {
                path,
                offset: err.utf8_error().valid_up_to(),
            }),
        }
    }

    pub fn from_text(path: impl Into<String>, content: impl Into<String>) -> SourceFile {
        let content = content.into();
        let (lines, newline) = line_table(&content);
        SourceFile {
            path: path.into(),
            content,
            lines,
            newline,
        }
    }

    pub fn line(&self, number: usize) -> Option<&LineInfo> {
        number.checked_sub(1).and_then(|i| self.lines.get(i))
    }

    /// Text of a line without its terminator.
    pub fn line_text(&self, number: usize) -> &str {
        match self.line(number) {
            Some(info) => &self.content[info.byte_start..info.byte_end],
            None => "",
        }
    }

    /// Line number (1-based) containing the byte offset.
    pub fn line_of(&self, byte: usize) -> usize {
        match self.lines.binary_search_by(|l| l.byte_start.cmp(&byte)) {
            Ok(i) => i + 1,
            Err(0) => 1,
            Err(i) => i,
        }
    }

    /// 1-based (line, column) of a byte offset.
    pub fn position(&self, byte: usize) -> (usize, usize) {
        if self.lines.is_empty() {
            return (1, 1);
        }
        let line = self.line_of(byte);
        let start = self.lines[line - 1].byte_start;
        let upto = byte.min(self.content.len());
        let col = self.content[start..upto.max(start)].chars().count() + 1;
        (line, col)
    }

    /// Span for a byte range.
    pub fn span(&self, byte_start: usize, byte_end: usize) -> Span {
        let (start_line, start_col) = self.position(byte_start);
        let (end_line, end_col) = self.position(byte_end);
        Span {
            start_line,
            start_col,
            end_line,
            end_col,
            byte_start,
            byte_end,
        }
    }

    /// Span of `len` characters starting at a 1-based line/column.
    pub fn span_at(&self, line: usize, col: usize, len: usize) -> Span {
        let Some(info) = self.line(line) else {
            return self.span(self.content.len(), self.content.len());
        };
        let text = &self.content[info.byte_start..info.byte_end];
        let byte_of = |c: usize| {
            text.char_indices()
                .nth(c)
                .map(|(i, _)| i)
                .unwrap_or(text.len())
                + info.byte_start
        };
        let start = byte_of(col - 1);
        let end = byte_of(col - 1 + len);
        self.span(start, end)
    }

    pub fn blank_line(&self, number: usize) -> bool {
        self.line(number).map(|l| l.is_blank).unwrap_or(true)
    }
}

/// Physical line metrics for a source file.
pub fn line_metrics(src: &SourceFile) -> Vec<LineInfo> {
    src.lines.clone()
}

fn line_table(content: &str) -> (Vec<LineInfo>, NewlineStyle) {
    let mut lines = Vec::new();
    let mut saw_lf = false;
    let mut saw_crlf = false;
    let mut start = 0;
    let bytes = content.as_bytes();
    let push = |start: usize, end: usize, lines: &mut Vec<LineInfo>| {
        let text = &content[start..end];
        let length = text.chars().count();
        let indent_width = text.chars().take_while(|c| c.is_whitespace()).count();
        let whitespace = text.chars().filter(|c| c.is_whitespace()).count();
        lines.push(LineInfo {
            number: lines.len() + 1,
            length,
            indent_width,
            has_tab: text.contains('\t'),
            is_blank: whitespace == length,
            byte_start: start,
            byte_end: end,
        });
    };
    for (i, &b) in bytes.iter().enumerate() {
        if b == b'\n' {
            let end = if i > start && bytes[i - 1] == b'\r' {
                saw_crlf = true;
                i - 1
            } else {
                saw_lf = true;
                i
            };
            push(start, end, &mut lines);
            start = i + 1;
        }
    }
    if start < content.len() {
        push(start, content.len(), &mut lines);
    }
    let style = match (saw_lf, saw_crlf) {
        (false, false) => NewlineStyle::None,
        (true, false) => NewlineStyle::Lf,
        (false, true) => NewlineStyle::CrLf,
        (true, true) => NewlineStyle::Mixed,
    };
    (lines, style)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_input_has_no_lines() {
        let src = SourceFile::from_text("t.pl", "");
        assert!(src.lines.iter().all(|l| l.is_blank));
        assert_eq!(src.lines.len(), 0);
    }

    #[test]
    fn single_fact() {
        let src = SourceFile::from_text("t.pl", "a.\n");
        assert_eq!(src.lines.len(), 1);
        assert_eq!(src.lines[0].length, 2);
        assert!(!src.lines[0].has_tab);
        assert_eq!(src.newline, NewlineStyle::Lf);
    }

    #[test]
    fn leading_tab() {
        let src = SourceFile::from_text("t.pl", "\tfoo.\n");
        assert!(src.lines[0].has_tab);
        assert_eq!(src.lines[0].indent_width, 1);
    }

    #[test]
    fn metrics_examples() {
        let long = "x".repeat(79);
        let src = SourceFile::from_text("t.pl", format!("{long}\n    foo\n  \t x\n"));
        let m = line_metrics(&src);
        assert_eq!(m[0].length, 79);
        assert_eq!(m[1].indent_width, 4);
        assert!(m[2].has_tab);
    }

    #[test]
    fn crlf_is_recorded_and_excluded_from_length() {
        let src = SourceFile::from_text("t.pl", "a.\r\nbb.\r\n");
        assert_eq!(src.newline, NewlineStyle::CrLf);
        assert_eq!(src.lines[0].length, 2);
        assert_eq!(src.line_text(2), "bb.");
    }

    #[test]
    fn invalid_utf8_reports_offset() {
        let err = SourceFile::from_bytes("bad.pl", vec![b'a', b'.', 0xff, b'\n']).unwrap_err();
        match err {
            SourceError::Encoding { offset, .. } => assert_eq!(offset, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn missing_file_is_io_error_with_path() {
        let err = SourceFile::load("/nonexistent/dir/x.pl").unwrap_err();
        assert!(err.to_string().contains("/nonexistent/dir/x.pl"));
    }

    #[test]
    fn positions_are_character_based() {
        let src = SourceFile::from_text("t.pl", "é(x).\nfoo.\n");
        assert_eq!(src.position(2), (1, 2));
        assert_eq!(src.position(src.content.find("foo").unwrap()), (2, 1));
    }
}
