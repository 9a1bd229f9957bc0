//! A small indentation-based structured text format: key/value mappings,
//! lists, inline bracket lists and literal text blocks.
//!
//! All on-disk documents of the toolchain (models, fixtures, domain specs,
//! traces, encoded processes) share this layer. The parser reports exact
//! line/column positions; the writer is deterministic so documents are
//! golden-file stable.
//!
//! Shape by example:
//!
//! ```text
//! process: recruitment
//! tables:
//!   - name: Offers
//!     readOnly: true
//!     attrs:
//!       - offerID: string
//! dataflow:
//!   - [applicant.name, candidate.name]
//! expr: |
//!   When offerID = chosen Then set status to 'accepted'
//!   Otherwise set status to status
//! ```

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("{line}:{col}: {message}")]
pub struct DocError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl DocError {
    pub fn new(line: usize, col: usize, message: impl Into<String>) -> DocError {
        DocError {
            line,
            col,
            message: message.into(),
        }
    }
}

/// A scalar leaf. `Str` round-trips single-quoted; `Bare` is unquoted text
/// (identifiers, numbers, expressions) kept verbatim.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scalar {
    Str(String),
    Bare(String),
}

impl Scalar {
    pub fn text(&self) -> &str {
        match self {
            Scalar::Str(s) | Scalar::Bare(s) => s,
        }
    }

    pub fn is_quoted(&self) -> bool {
        matches!(self, Scalar::Str(_))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub line: usize,
    pub col: usize,
    pub value: DocValue,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DocValue {
    Scalar(Scalar),
    /// Inline `[a, b, c]` list of scalars.
    Inline(Vec<Scalar>),
    List(Vec<Node>),
    Map(Vec<MapEntry>),
    /// Literal block introduced by `|`.
    Text(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MapEntry {
    pub key: String,
    pub line: usize,
    pub col: usize,
    pub node: Node,
}

impl Node {
    pub fn as_map(&self) -> Result<&[MapEntry], DocError> {
        match &self.value {
            DocValue::Map(entries) => Ok(entries),
            _ => Err(DocError::new(self.line, self.col, "expected a mapping")),
        }
    }

    pub fn as_list(&self) -> Result<&[Node], DocError> {
        match &self.value {
            DocValue::List(items) => Ok(items),
            _ => Err(DocError::new(self.line, self.col, "expected a list")),
        }
    }

    pub fn as_scalar(&self) -> Result<&Scalar, DocError> {
        match &self.value {
            DocValue::Scalar(s) => Ok(s),
            _ => Err(DocError::new(self.line, self.col, "expected a scalar value")),
        }
    }

    /// Scalar or literal text block, as plain text.
    pub fn as_text(&self) -> Result<&str, DocError> {
        match &self.value {
            DocValue::Scalar(s) => Ok(s.text()),
            DocValue::Text(t) => Ok(t),
            _ => Err(DocError::new(self.line, self.col, "expected a text value")),
        }
    }

    pub fn as_inline(&self) -> Result<&[Scalar], DocError> {
        match &self.value {
            DocValue::Inline(items) => Ok(items),
            _ => Err(DocError::new(
                self.line,
                self.col,
                "expected an inline [..] list",
            )),
        }
    }
}

/// Looks up a required key in a mapping.
pub fn get<'a>(entries: &'a [MapEntry], key: &str, ctx: &Node) -> Result<&'a Node, DocError> {
    entries
        .iter()
        .find(|e| e.key == key)
        .map(|e| &e.node)
        .ok_or_else(|| DocError::new(ctx.line, ctx.col, format!("missing required key '{key}'")))
}

pub fn get_opt<'a>(entries: &'a [MapEntry], key: &str) -> Option<&'a Node> {
    entries.iter().find(|e| e.key == key).map(|e| &e.node)
}

/// Rejects keys outside the allowed set. Unknown keys are load errors so
/// typos surface instead of being silently ignored.
pub fn check_keys(entries: &[MapEntry], allowed: &[&str]) -> Result<(), DocError> {
    for e in entries {
        if !allowed.contains(&e.key.as_str()) {
            return Err(DocError::new(
                e.line,
                e.col,
                format!(
                    "unknown key '{}' (expected one of: {})",
                    e.key,
                    allowed.join(", ")
                ),
            ));
        }
    }
    Ok(())
}

struct Line<'a> {
    number: usize,
    indent: usize,
    content: &'a str,
}

pub fn parse(text: &str) -> Result<Node, DocError> {
    let mut lines = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let number = idx + 1;
        if let Some(tab_pos) = raw.find('\t') {
            return Err(DocError::new(
                number,
                tab_pos + 1,
                "tabs are not allowed; indent with spaces",
            ));
        }
        let trimmed = raw.trim_end();
        let indent = trimmed.len() - trimmed.trim_start().len();
        let content = trimmed.trim_start();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        lines.push(Line {
            number,
            indent,
            content,
        });
    }
    if lines.is_empty() {
        return Err(DocError::new(1, 1, "empty document"));
    }
    let mut pos = 0;
    let node = parse_block(&lines, &mut pos, 0)?;
    if pos < lines.len() {
        let l = &lines[pos];
        return Err(DocError::new(
            l.number,
            l.indent + 1,
            "unexpected indentation",
        ));
    }
    match node.value {
        DocValue::Map(_) => Ok(node),
        _ => Err(DocError::new(1, 1, "document root must be a mapping")),
    }
}

fn parse_block(lines: &[Line], pos: &mut usize, indent: usize) -> Result<Node, DocError> {
    let first = &lines[*pos];
    if first.content.starts_with("- ") || first.content == "-" {
        parse_list(lines, pos, indent)
    } else {
        parse_map(lines, pos, indent)
    }
}

fn parse_map(lines: &[Line], pos: &mut usize, indent: usize) -> Result<Node, DocError> {
    let mut entries = Vec::new();
    let (start_line, start_col) = (lines[*pos].number, indent + 1);
    while *pos < lines.len() {
        let line = &lines[*pos];
        if line.indent < indent {
            break;
        }
        if line.indent > indent {
            return Err(DocError::new(
                line.number,
                line.indent + 1,
                "unexpected indentation",
            ));
        }
        if line.content.starts_with("- ") || line.content == "-" {
            break;
        }
        let (key, rest, value_col) = split_key(line)?;
        *pos += 1;
        let node = parse_entry_value(lines, pos, line, indent, rest, value_col)?;
        entries.push(MapEntry {
            key,
            line: line.number,
            col: line.indent + 1,
            node,
        });
    }
    Ok(Node {
        line: start_line,
        col: start_col,
        value: DocValue::Map(entries),
    })
}

fn parse_list(lines: &[Line], pos: &mut usize, indent: usize) -> Result<Node, DocError> {
    let mut items = Vec::new();
    let (start_line, start_col) = (lines[*pos].number, indent + 1);
    while *pos < lines.len() {
        let line = &lines[*pos];
        if line.indent != indent {
            if line.indent > indent {
                return Err(DocError::new(
                    line.number,
                    line.indent + 1,
                    "unexpected indentation",
                ));
            }
            break;
        }
        let Some(rest) = line.content.strip_prefix("- ") else {
            break;
        };
        let item_indent = indent + 2;
        let item_col = item_indent + 1;
        if rest.is_empty() {
            return Err(DocError::new(line.number, item_col, "empty list item"));
        }
        // An item is either a plain value or the first entry of a mapping
        // whose further entries sit two columns deeper than the dash.
        if let Some((key, inline, value_col)) = try_split_key(rest, item_indent) {
            let first_line = line;
            *pos += 1;
            let first_node =
                parse_entry_value(lines, pos, first_line, item_indent, inline, value_col)?;
            let mut entries = vec![MapEntry {
                key,
                line: first_line.number,
                col: item_col,
                node: first_node,
            }];
            while *pos < lines.len() && lines[*pos].indent == item_indent {
                let l = &lines[*pos];
                if l.content.starts_with("- ") {
                    break;
                }
                let (key, inline, value_col) = split_key(l)?;
                *pos += 1;
                let node = parse_entry_value(lines, pos, l, item_indent, inline, value_col)?;
                entries.push(MapEntry {
                    key,
                    line: l.number,
                    col: l.indent + 1,
                    node,
                });
            }
            items.push(Node {
                line: first_line.number,
                col: item_col,
                value: DocValue::Map(entries),
            });
        } else {
            items.push(parse_scalar_value(rest, line.number, item_col)?);
            *pos += 1;
        }
    }
    Ok(Node {
        line: start_line,
        col: start_col,
        value: DocValue::List(items),
    })
}

/// Parses the value part of a `key:` entry: inline scalar, literal block
/// (`|`), or an indented child block.
fn parse_entry_value(
    lines: &[Line],
    pos: &mut usize,
    key_line: &Line,
    key_indent: usize,
    inline: Option<&str>,
    value_col: usize,
) -> Result<Node, DocError> {
    match inline {
        Some("|") => {
            let mut text = String::new();
            let mut first = true;
            while *pos < lines.len() && lines[*pos].indent > key_indent {
                let l = &lines[*pos];
                if !first {
                    text.push('\n');
                }
                first = false;
                text.push_str(l.content);
                *pos += 1;
            }
            if first {
                return Err(DocError::new(
                    key_line.number,
                    value_col,
                    "literal block '|' has no content",
                ));
            }
            Ok(Node {
                line: key_line.number,
                col: value_col,
                value: DocValue::Text(text),
            })
        }
        Some(v) => {
            if *pos < lines.len() && lines[*pos].indent > key_indent {
                let l = &lines[*pos];
                return Err(DocError::new(
                    l.number,
                    l.indent + 1,
                    "a key with an inline value cannot also have children",
                ));
            }
            parse_scalar_value(v, key_line.number, value_col)
        }
        None => {
            if *pos >= lines.len() || lines[*pos].indent <= key_indent {
                return Err(DocError::new(
                    key_line.number,
                    key_line.indent + 1,
                    "key has no value",
                ));
            }
            let child_indent = lines[*pos].indent;
            parse_block(lines, pos, child_indent)
        }
    }
}

/// Parses `text` as a scalar or inline bracket list.
fn parse_scalar_value(text: &str, line: usize, col: usize) -> Result<Node, DocError> {
    let value = if text.starts_with('[') {
        if !text.ends_with(']') {
            return Err(DocError::new(line, col, "unterminated inline list"));
        }
        let inner = &text[1..text.len() - 1];
        DocValue::Inline(split_inline(inner, line, col)?)
    } else {
        DocValue::Scalar(parse_scalar(text, line, col)?)
    };
    Ok(Node { line, col, value })
}

fn parse_scalar(text: &str, line: usize, col: usize) -> Result<Scalar, DocError> {
    if text.starts_with('\'') {
        let inner = &text[1..];
        let mut out = String::new();
        let mut chars = inner.chars().peekable();
        let mut closed = false;
        while let Some(c) = chars.next() {
            if c == '\'' {
                if chars.peek() == Some(&'\'') {
                    out.push('\'');
                    chars.next();
                } else {
                    closed = true;
                    break;
                }
            } else {
                out.push(c);
            }
        }
        if !closed {
            return Err(DocError::new(line, col, "unterminated string literal"));
        }
        if chars.next().is_some() {
            return Err(DocError::new(
                line,
                col,
                "unexpected text after string literal",
            ));
        }
        Ok(Scalar::Str(out))
    } else {
        Ok(Scalar::Bare(text.to_string()))
    }
}

fn split_inline(inner: &str, line: usize, col: usize) -> Result<Vec<Scalar>, DocError> {
    let mut items = Vec::new();
    let mut current = String::new();
    let mut in_str = false;
    let mut chars = inner.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '\'' => {
                if in_str && chars.peek() == Some(&'\'') {
                    current.push('\'');
                    current.push('\'');
                    chars.next();
                } else {
                    in_str = !in_str;
                    current.push('\'');
                }
            }
            ',' if !in_str => {
                push_inline_item(&mut items, &mut current, line, col)?;
            }
            _ => current.push(c),
        }
    }
    if in_str {
        return Err(DocError::new(line, col, "unterminated string literal"));
    }
    if !current.trim().is_empty() {
        push_inline_item(&mut items, &mut current, line, col)?;
    }
    Ok(items)
}

fn push_inline_item(
    items: &mut Vec<Scalar>,
    current: &mut String,
    line: usize,
    col: usize,
) -> Result<(), DocError> {
    let piece = current.trim();
    if piece.is_empty() {
        return Err(DocError::new(line, col, "empty inline list element"));
    }
    items.push(parse_scalar(piece, line, col)?);
    current.clear();
    Ok(())
}

fn split_key(line: &Line) -> Result<(String, Option<&str>, usize), DocError> {
    match try_split_key(line.content, line.indent) {
        Some(v) => Ok(v),
        None => Err(DocError::new(
            line.number,
            line.indent + 1,
            "expected 'key:' or 'key: value'",
        )),
    }
}

/// Splits `key: value` at the first colon outside quotes. Returns the key,
/// the trimmed inline value (None when absent) and the value column.
fn try_split_key(content: &str, indent: usize) -> Option<(String, Option<&str>, usize)> {
    if content.starts_with('\'') || content.starts_with('[') {
        return None;
    }
    let colon = content.find(':')?;
    let key = content[..colon].trim_end();
    if key.is_empty() || key.contains('\'') || key.contains('[') {
        return None;
    }
    let rest = &content[colon + 1..];
    if rest.is_empty() {
        Some((key.to_string(), None, indent + colon + 2))
    } else if let Some(stripped) = rest.strip_prefix(' ') {
        let value = stripped.trim();
        let value_col = indent + colon + 2 + (stripped.len() - stripped.trim_start().len()) + 1;
        if value.is_empty() {
            Some((key.to_string(), None, value_col))
        } else {
            Some((key.to_string(), Some(value), value_col))
        }
    } else {
        // "a:b" without a space is a plain scalar, not a key.
        None
    }
}

// ---------------------------------------------------------------------------
// Writing
// ---------------------------------------------------------------------------

/// Deterministic writer for the document format.
#[derive(Default)]
pub struct Writer {
    out: String,
}

impl Writer {
    pub fn new() -> Writer {
        Writer::default()
    }

    pub fn finish(self) -> String {
        self.out
    }

    pub fn blank(&mut self) {
        self.out.push('\n');
    }

    pub fn entry(&mut self, indent: usize, key: &str, value: &str) {
        self.pad(indent);
        self.out.push_str(key);
        self.out.push_str(": ");
        self.out.push_str(value);
        self.out.push('\n');
    }

    pub fn section(&mut self, indent: usize, key: &str) {
        self.pad(indent);
        self.out.push_str(key);
        self.out.push_str(":\n");
    }

    pub fn item(&mut self, indent: usize, value: &str) {
        self.pad(indent);
        self.out.push_str("- ");
        self.out.push_str(value);
        self.out.push('\n');
    }

    /// First `key: value` line of a list item mapping.
    pub fn item_entry(&mut self, indent: usize, key: &str, value: &str) {
        self.pad(indent);
        self.out.push_str("- ");
        self.out.push_str(key);
        self.out.push_str(": ");
        self.out.push_str(value);
        self.out.push('\n');
    }

    /// First `key:` section line of a list item mapping.
    pub fn item_section(&mut self, indent: usize, key: &str) {
        self.pad(indent);
        self.out.push_str("- ");
        self.out.push_str(key);
        self.out.push_str(":\n");
    }

    pub fn text_block(&mut self, indent: usize, key: &str, text: &str) {
        self.pad(indent);
        self.out.push_str(key);
        self.out.push_str(": |\n");
        for line in text.lines() {
            self.pad(indent + 2);
            self.out.push_str(line);
            self.out.push('\n');
        }
    }

    fn pad(&mut self, indent: usize) {
        for _ in 0..indent {
            self.out.push(' ');
        }
    }
}

pub fn inline_list(items: &[String]) -> String {
    format!("[{}]", items.join(", "))
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Str(s) => f.write_str(&crate::value::quote(s)),
            Scalar::Bare(s) => f.write_str(s),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_nested_maps_and_lists() {
        let text = "\
process: demo
tables:
  - name: Offers
    readOnly: true
    attrs:
      - offerID: string
      - offerDate: date
edges:
  - [a.x, b.y]
";
        let root = parse(text).unwrap();
        let entries = root.as_map().unwrap();
        assert_eq!(entries.len(), 3);
        let tables = get(entries, "tables", &root).unwrap().as_list().unwrap();
        let t0 = tables[0].as_map().unwrap();
        assert_eq!(get(t0, "name", &tables[0]).unwrap().as_text().unwrap(), "Offers");
        let attrs = get(t0, "attrs", &tables[0]).unwrap().as_list().unwrap();
        assert_eq!(attrs.len(), 2);
        let edges = get(entries, "edges", &root).unwrap().as_list().unwrap();
        let edge = edges[0].as_inline().unwrap();
        assert_eq!(edge[0].text(), "a.x");
    }

    #[test]
    fn literal_block_preserves_lines() {
        let text = "\
op: |
  When a = 1 Then set x to 2
  Otherwise set x to x
";
        let root = parse(text).unwrap();
        let entries = root.as_map().unwrap();
        let op = get(entries, "op", &root).unwrap().as_text().unwrap();
        assert_eq!(
            op,
            "When a = 1 Then set x to 2\nOtherwise set x to x"
        );
    }

    #[test]
    fn empty_document_is_an_error() {
        let err = parse("").unwrap_err();
        assert_eq!(err.line, 1);
    }

    #[test]
    fn tabs_are_rejected() {
        let err = parse("a:\n\tb: 1\n").unwrap_err();
        assert!(err.message.contains("tabs"));
    }

    #[test]
    fn quoted_strings_unescape() {
        let root = parse("msg: 'it''s fine'\n").unwrap();
        let entries = root.as_map().unwrap();
        let scalar = get(entries, "msg", &root).unwrap().as_scalar().unwrap();
        assert_eq!(scalar.text(), "it's fine");
        assert!(scalar.is_quoted());
    }

    #[test]
    fn writer_round_trips(){
        let mut w = Writer::new();
        w.entry(0, "process", "demo");
        w.section(0, "tables");
        w.item_entry(2, "name", "Offers");
        w.entry(4, "readOnly", "true");
        let text = w.finish();
        let parsed = parse(&text).unwrap();
        let entries = parsed.as_map().unwrap();
        assert_eq!(entries.len(), 2);
    }
}
