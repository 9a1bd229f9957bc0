//! Tokenizer for the expression languages. Keywords are case-insensitive,
//! identifiers case-sensitive, strings single-quoted with `''` escaping.

use crate::lang::LangError;

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    Ident(String),
    Int(i64),
    Float(f64),
    Str(String),
    Keyword(Kw),
    Sym(Sym),
    Placeholder(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kw {
    Select,
    From,
    Where,
    And,
    Or,
    Not,
    Tuple,
    In,
    Insert,
    Into,
    Delete,
    Update,
    Set,
    Case,
    When,
    Then,
    Else,
    Otherwise,
    To,
    True,
    False,
}

impl Kw {
    fn parse(word: &str) -> Option<Kw> {
        // Keywords are matched case-insensitively.
        let lower = word.to_ascii_lowercase();
        Some(match lower.as_str() {
            "select" => Kw::Select,
            "from" => Kw::From,
            "where" => Kw::Where,
            "and" => Kw::And,
            "or" => Kw::Or,
            "not" => Kw::Not,
            "tuple" => Kw::Tuple,
            "in" => Kw::In,
            "insert" => Kw::Insert,
            "into" => Kw::Into,
            "delete" => Kw::Delete,
            "update" => Kw::Update,
            "set" => Kw::Set,
            "case" => Kw::Case,
            "when" => Kw::When,
            "then" => Kw::Then,
            "else" => Kw::Else,
            "otherwise" => Kw::Otherwise,
            "to" => Kw::To,
            "true" => Kw::True,
            "false" => Kw::False,
            _ => return None,
        })
    }

    pub fn text(self) -> &'static str {
        match self {
            Kw::Select => "SELECT",
            Kw::From => "FROM",
            Kw::Where => "WHERE",
            Kw::And => "AND",
            Kw::Or => "OR",
            Kw::Not => "NOT",
            Kw::Tuple => "TUPLE",
            Kw::In => "IN",
            Kw::Insert => "INSERT",
            Kw::Into => "INTO",
            Kw::Delete => "DELETE",
            Kw::Update => "UPDATE",
            Kw::Set => "SET",
            Kw::Case => "CASE",
            Kw::When => "WHEN",
            Kw::Then => "THEN",
            Kw::Else => "ELSE",
            Kw::Otherwise => "Otherwise",
            Kw::To => "to",
            Kw::True => "TRUE",
            Kw::False => "FALSE",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sym {
    Eq,
    Neq,
    Gt,
    Lt,
    Le,
    Ge,
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
    Comma,
    Dot,
    Semicolon,
}

impl Sym {
    pub fn text(self) -> &'static str {
        match self {
            Sym::Eq => "=",
            Sym::Neq => "!=",
            Sym::Gt => ">",
            Sym::Lt => "<",
            Sym::Le => "<=",
            Sym::Ge => ">=",
            Sym::Plus => "+",
            Sym::Minus => "-",
            Sym::Star => "*",
            Sym::Slash => "/",
            Sym::LParen => "(",
            Sym::RParen => ")",
            Sym::Comma => ",",
            Sym::Dot => ".",
            Sym::Semicolon => ";",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

pub fn describe(tok: &Tok) -> String {
    match tok {
        Tok::Ident(name) => format!("identifier '{name}'"),
        Tok::Int(v) => format!("'{v}'"),
        Tok::Float(v) => format!("'{v}'"),
        Tok::Str(_) => "string literal".into(),
        Tok::Keyword(kw) => format!("'{}'", kw.text()),
        Tok::Sym(sym) => format!("'{}'", sym.text()),
        Tok::Placeholder(name) => format!("'@{name}'"),
    }
}

pub fn lex(text: &str) -> Result<Vec<Token>, LangError> {
    let mut tokens = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = text.chars().peekable();

    macro_rules! push {
        ($tok:expr, $start_col:expr) => {
            tokens.push(Token {
                tok: $tok,
                line,
                col: $start_col,
            })
        };
    }

    while let Some(&c) = chars.peek() {
        let start_col = col;
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
            }
            '\'' => {
                chars.next();
                col += 1;
                let mut out = String::new();
                let mut closed = false;
                while let Some(&c) = chars.peek() {
                    chars.next();
                    col += 1;
                    if c == '\'' {
                        if chars.peek() == Some(&'\'') {
                            out.push('\'');
                            chars.next();
                            col += 1;
                        } else {
                            closed = true;
                            break;
                        }
                    } else {
                        if c == '\n' {
                            line += 1;
                            col = 1;
                        }
                        out.push(c);
                    }
                }
                if !closed {
                    return Err(LangError::parse(line, start_col, "unterminated string"));
                }
                push!(Tok::Str(out), start_col);
            }
            '@' => {
                chars.next();
                col += 1;
                let mut name = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_alphanumeric() || c == '_' {
                        name.push(c);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                if name.is_empty() {
                    return Err(LangError::parse(line, start_col, "'@' must name a placeholder"));
                }
                push!(Tok::Placeholder(name), start_col);
            }
            c if c.is_ascii_digit() => {
                let mut num = String::new();
                let mut is_float = false;
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_digit() {
                        num.push(c);
                        chars.next();
                        col += 1;
                    } else if c == '.' {
                        // A dot starts a fraction only when a digit follows;
                        // `R.a` keeps its dot as a separate token.
                        let mut ahead = chars.clone();
                        ahead.next();
                        match ahead.peek() {
                            Some(d) if d.is_ascii_digit() => {
                                if is_float {
                                    break;
                                }
                                is_float = true;
                                num.push('.');
                                chars.next();
                                col += 1;
                            }
                            _ => break,
                        }
                    } else {
                        break;
                    }
                }
                if is_float {
                    let v: f64 = num
                        .parse()
                        .map_err(|_| LangError::parse(line, start_col, "bad number"))?;
                    push!(Tok::Float(v), start_col);
                } else {
                    let v: i64 = num.parse().map_err(|_| {
                        LangError::parse(line, start_col, "integer literal out of range")
                    })?;
                    push!(Tok::Int(v), start_col);
                }
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut word = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_alphanumeric() || c == '_' {
                        word.push(c);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                match Kw::parse(&word) {
                    Some(kw) => push!(Tok::Keyword(kw), start_col),
                    None => push!(Tok::Ident(word), start_col),
                }
            }
            _ => {
                chars.next();
                col += 1;
                let sym = match c {
                    '=' => Sym::Eq,
                    '!' => {
                        if chars.peek() == Some(&'=') {
                            chars.next();
                            col += 1;
                            Sym::Neq
                        } else {
                            return Err(LangError::parse(line, start_col, "expected '!='"));
                        }
                    }
                    '>' => {
                        if chars.peek() == Some(&'=') {
                            chars.next();
                            col += 1;
                            Sym::Ge
                        } else {
                            Sym::Gt
                        }
                    }
                    '<' => {
                        if chars.peek() == Some(&'=') {
                            chars.next();
                            col += 1;
                            Sym::Le
                        } else {
                            Sym::Lt
                        }
                    }
                    '+' => Sym::Plus,
                    '-' => Sym::Minus,
                    '*' => Sym::Star,
                    '/' => Sym::Slash,
                    '(' => Sym::LParen,
                    ')' => Sym::RParen,
                    ',' => Sym::Comma,
                    '.' => Sym::Dot,
                    ';' => Sym::Semicolon,
                    other => {
                        return Err(LangError::parse(
                            line,
                            start_col,
                            format!("unexpected character '{other}'"),
                        ))
                    }
                };
                push!(Tok::Sym(sym), start_col);
            }
        }
    }
    Ok(tokens)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keywords_are_case_insensitive() {
        let toks = lex("select FROM Where").unwrap();
        assert_eq!(toks[0].tok, Tok::Keyword(Kw::Select));
        assert_eq!(toks[1].tok, Tok::Keyword(Kw::From));
        assert_eq!(toks[2].tok, Tok::Keyword(Kw::Where));
    }

    #[test]
    fn dotted_names_keep_their_dot() {
        let toks = lex("Offers.offerID").unwrap();
        assert_eq!(toks.len(), 3);
        assert_eq!(toks[1].tok, Tok::Sym(Sym::Dot));
    }

    #[test]
    fn numbers_and_dots() {
        let toks = lex("3.5 x.y 7").unwrap();
        assert_eq!(toks[0].tok, Tok::Float(3.5));
        assert_eq!(toks[1].tok, Tok::Ident("x".into()));
        assert_eq!(toks[4].tok, Tok::Int(7));
    }

    #[test]
    fn strings_unescape_quotes() {
        let toks = lex("'it''s'").unwrap();
        assert_eq!(toks[0].tok, Tok::Str("it's".into()));
    }
}
