use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Word(String),
    Str(String),
    LBrace,
    RBrace,
    Semi,
    Newline,
    Arrow,
    DashDash,
    Eq,
    /// A character or construct the lexer could not make sense of.
    Bad(String),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Word(w) => write!(f, "`{w}`"),
            Tok::Str(s) => write!(f, "string {s:?}"),
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
            Tok::Semi => f.write_str("`;`"),
            Tok::Newline => f.write_str("end of line"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::DashDash => f.write_str("`--`"),
            Tok::Eq => f.write_str("`=`"),
            Tok::Bad(s) => f.write_str(s),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

/// 1-based line/column of a character.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) struct Pos {
    pub line: usize,
    pub col: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Token {
    pub tok: Tok,
    pub start: Pos,
    /// Position of the last character of the token (inclusive).
    pub end: Pos,
}

pub(crate) fn is_word_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    pos: Pos,
    last: Pos,
}

impl Cursor<'_> {
    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        self.last = self.pos;
        if c == '\n' {
            self.pos.line += 1;
            self.pos.col = 1;
        } else {
            self.pos.col += 1;
        }
        Some(c)
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }
}

pub(crate) fn lex(text: &str) -> Vec<Token> {
    let mut cur = Cursor {
        chars: text.chars().peekable(),
        pos: Pos { line: 1, col: 1 },
        last: Pos { line: 1, col: 1 },
    };
    let mut out = Vec::new();
    while let Some(c) = cur.peek() {
        let start = cur.pos;
        let tok = match c {
            ' ' | '\t' | '\r' => {
                cur.bump();
                continue;
            }
            '\n' => {
                cur.bump();
                Tok::Newline
            }
            '/' => {
                cur.bump();
                if cur.peek() == Some('/') {
                    while cur.peek().is_some_and(|c| c != '\n') {
                        cur.bump();
                    }
                    continue;
                }
                Tok::Bad("`/`".into())
            }
            '{' => {
                cur.bump();
                Tok::LBrace
            }
            '}' => {
                cur.bump();
                Tok::RBrace
            }
            ';' => {
                cur.bump();
                Tok::Semi
            }
            '=' => {
                cur.bump();
                Tok::Eq
            }
            '-' => {
                cur.bump();
                match cur.peek() {
                    Some('>') => {
                        cur.bump();
                        Tok::Arrow
                    }
                    Some('-') => {
                        cur.bump();
                        Tok::DashDash
                    }
                    _ => Tok::Bad("`-`".into()),
                }
            }
            '"' => {
                cur.bump();
                lex_string(&mut cur)
            }
            c if is_word_char(c) => {
                let mut w = String::new();
                while let Some(c) = cur.peek().filter(|&c| is_word_char(c)) {
                    w.push(c);
                    cur.bump();
                }
                Tok::Word(w)
            }
            other => {
                cur.bump();
                Tok::Bad(format!("unexpected character {other:?}"))
            }
        };
        out.push(Token {
            tok,
            start,
            end: cur.last,
        });
    }
    let eof = if out.is_empty() {
        Pos { line: 1, col: 1 }
    } else {
        cur.last
    };
    out.push(Token {
        tok: Tok::Eof,
        start: eof,
        end: eof,
    });
    out
}

fn lex_string(cur: &mut Cursor) -> Tok {
    let mut s = String::new();
    loop {
        match cur.bump() {
            None | Some('\n') => return Tok::Bad("unterminated string".into()),
            Some('"') => return Tok::Str(s),
            Some('\\') => match cur.bump() {
                Some('n') => s.push('\n'),
                Some('t') => s.push('\t'),
                Some('r') => s.push('\r'),
                Some('"') => s.push('"'),
                Some('\\') => s.push('\\'),
                Some('u') => match lex_unicode_escape(cur) {
                    Some(c) => s.push(c),
                    None => return Tok::Bad("invalid unicode escape".into()),
                },
                Some(other) => return Tok::Bad(format!("unknown escape `\\{other}`")),
                None => return Tok::Bad("unterminated string".into()),
            },
            Some(c) => s.push(c),
        }
    }
}

fn lex_unicode_escape(cur: &mut Cursor) -> Option<char> {
    if cur.bump()? != '{' {
        return None;
    }
    let mut hex = String::new();
    loop {
        match cur.bump()? {
            '}' => break,
            c if c.is_ascii_hexdigit() && hex.len() < 6 => hex.push(c),
            _ => return None,
        }
    }
    char::from_u32(u32::from_str_radix(&hex, 16).ok()?)
}
