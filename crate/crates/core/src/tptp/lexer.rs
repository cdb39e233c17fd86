use super::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    /// `[a-z][A-Za-z0-9_]*`
    Lower(String),
    /// `[A-Z][A-Za-z0-9_]*`
    Upper(String),
    /// `'…'`, already unescaped.
    Quoted(String),
    /// `$word`
    Dollar(String),
    Hole,
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Dot,
    Colon,
    At,
    Eq,
    Neq,
    Implies,
    RevImplies,
    Iff,
    Xor,
    And,
    Or,
    Not,
    Bang,
    Question,
    Caret,
    PiBang,
    Psub,
    Arrow,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Lower(s) | Tok::Upper(s) => format!("`{s}`"),
            Tok::Quoted(s) => format!("'{s}'"),
            Tok::Dollar(s) => format!("`${s}`"),
            other => format!("`{}`", punct(other)),
        }
    }
}

fn punct(t: &Tok) -> &'static str {
    match t {
        Tok::Hole => "_",
        Tok::LParen => "(",
        Tok::RParen => ")",
        Tok::LBrack => "[",
        Tok::RBrack => "]",
        Tok::Comma => ",",
        Tok::Dot => ".",
        Tok::Colon => ":",
        Tok::At => "@",
        Tok::Eq => "=",
        Tok::Neq => "!=",
        Tok::Implies => "=>",
        Tok::RevImplies => "<=",
        Tok::Iff => "<=>",
        Tok::Xor => "<~>",
        Tok::And => "&",
        Tok::Or => "|",
        Tok::Not => "~",
        Tok::Bang => "!",
        Tok::Question => "?",
        Tok::Caret => "^",
        Tok::PiBang => "!>",
        Tok::Psub => "?|",
        Tok::Arrow => ">",
        _ => "?",
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

fn word_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

pub(crate) fn lex(src: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let at = |i: usize| chars.get(i).copied();
    macro_rules! advance {
        ($n:expr) => {
            for _ in 0..$n {
                if at(i) == Some('\n') {
                    line += 1;
                    col = 1;
                } else {
                    col += 1;
                }
                i += 1;
            }
        };
    }
    while let Some(c) = at(i) {
        let (l0, c0) = (line, col);
        let err = |msg: String| ParseError {
            line: l0,
            col: c0,
            msg,
        };
        if c.is_whitespace() {
            advance!(1);
            continue;
        }
        if c == '%' {
            while at(i).is_some_and(|c| c != '\n') {
                advance!(1);
            }
            continue;
        }
        if c == '/' && at(i + 1) == Some('*') {
            advance!(2);
            loop {
                match at(i) {
                    None => return Err(err("unterminated comment".into())),
                    Some('*') if at(i + 1) == Some('/') => {
                        advance!(2);
                        break;
                    }
                    Some(_) => advance!(1),
                }
            }
            continue;
        }
        let tok = if c.is_ascii_alphabetic() {
            let start = i;
            let mut j = i;
            while at(j).is_some_and(word_char) {
                j += 1;
            }
            let w: String = chars[start..j].iter().collect();
            advance!(j - start);
            let tok = if c.is_ascii_uppercase() {
                Tok::Upper(w)
            } else {
                Tok::Lower(w)
            };
            out.push(Spanned {
                tok,
                line: l0,
                col: c0,
            });
            continue;
        } else if c == '$' {
            let mut j = i + 1;
            while at(j).is_some_and(word_char) {
                j += 1;
            }
            if j == i + 1 {
                return Err(err("expected a word after `$`".into()));
            }
            let w: String = chars[i + 1..j].iter().collect();
            advance!(j - i);
            out.push(Spanned {
                tok: Tok::Dollar(w),
                line: l0,
                col: c0,
            });
            continue;
        } else if c == '\'' {
            let mut s = String::new();
            advance!(1);
            loop {
                match at(i) {
                    None => return Err(err("unterminated quoted name".into())),
                    Some('\'') => {
                        advance!(1);
                        break;
                    }
                    Some('\\') => match at(i + 1) {
                        Some(e @ ('\\' | '\'')) => {
                            s.push(e);
                            advance!(2);
                        }
                        _ => return Err(err("bad escape in quoted name".into())),
                    },
                    Some(ch) => {
                        s.push(ch);
                        advance!(1);
                    }
                }
            }
            if s.is_empty() {
                return Err(err("empty quoted name".into()));
            }
            out.push(Spanned {
                tok: Tok::Quoted(s),
                line: l0,
                col: c0,
            });
            continue;
        } else {
            let two: String = chars[i..(i + 2).min(chars.len())].iter().collect();
            let three: String = chars[i..(i + 3).min(chars.len())].iter().collect();
            match three.as_str() {
                "<=>" => Some((Tok::Iff, 3)),
                "<~>" => Some((Tok::Xor, 3)),
                _ => None,
            }
            .or(match two.as_str() {
                "!=" => Some((Tok::Neq, 2)),
                "=>" => Some((Tok::Implies, 2)),
                "<=" => Some((Tok::RevImplies, 2)),
                "!>" => Some((Tok::PiBang, 2)),
                "?|" => Some((Tok::Psub, 2)),
                _ => None,
            })
            .or(match c {
                '_' if !at(i + 1).is_some_and(word_char) => Some((Tok::Hole, 1)),
                '(' => Some((Tok::LParen, 1)),
                ')' => Some((Tok::RParen, 1)),
                '[' => Some((Tok::LBrack, 1)),
                ']' => Some((Tok::RBrack, 1)),
                ',' => Some((Tok::Comma, 1)),
                '.' => Some((Tok::Dot, 1)),
                ':' => Some((Tok::Colon, 1)),
                '@' => Some((Tok::At, 1)),
                '=' => Some((Tok::Eq, 1)),
                '&' => Some((Tok::And, 1)),
                '|' => Some((Tok::Or, 1)),
                '~' => Some((Tok::Not, 1)),
                '!' => Some((Tok::Bang, 1)),
                '?' => Some((Tok::Question, 1)),
                '^' => Some((Tok::Caret, 1)),
                '>' => Some((Tok::Arrow, 1)),
                _ => None,
            })
        };
        match tok {
            Some((tok, n)) => {
                advance!(n);
                out.push(Spanned {
                    tok,
                    line: l0,
                    col: c0,
                });
            }
            None => return Err(err(format!("unexpected character {c:?}"))),
        }
    }
    Ok(out)
}
