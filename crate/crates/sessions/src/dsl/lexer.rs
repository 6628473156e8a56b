//! Tokenizer for the model language. `#` starts a comment running to the
//! end of the line; every token carries its source position.

use super::DslError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Nat(u64),
    Int(i64),
    Str(String),
    LBrace,
    RBrace,
    LParen,
    RParen,
    Semi,
    Comma,
    Assign,
    EqEq,
    Bang,
    Question,
    Dot,
    Colon,
    Pipe,
    Caret,
    Arrow,
    Plus,
    PlusPlus,
    OPlus,
    Minus,
    Star,
    Lt,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Nat(n) => format!("number `{n}`"),
            Tok::Int(n) => format!("integer `{n}i`"),
            Tok::Str(s) => format!("string {s:?}"),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Assign => "`=`".into(),
            Tok::EqEq => "`==`".into(),
            Tok::Bang => "`!`".into(),
            Tok::Question => "`?`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Pipe => "`|`".into(),
            Tok::Caret => "`^`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Plus => "`+`".into(),
            Tok::PlusPlus => "`++`".into(),
            Tok::OPlus => "`(+)`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Lt => "`<`".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

pub fn lex(src: &str) -> Result<Vec<Spanned>, DslError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    let mut line = 1;
    let mut col = 1;
    let err = |line: usize, col: usize, msg: String| DslError::Syntax { line, col, msg };

    while i < chars.len() {
        let c = chars[i];
        let (tline, tcol) = (line, col);
        let advance = |i: &mut usize, line: &mut usize, col: &mut usize| {
            if chars[*i] == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
            *i += 1;
        };
        match c {
            ' ' | '\t' | '\r' | '\n' => {
                advance(&mut i, &mut line, &mut col);
                continue;
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    advance(&mut i, &mut line, &mut col);
                }
                continue;
            }
            _ => {}
        }
        let tok = match c {
            '{' => {
                advance(&mut i, &mut line, &mut col);
                Tok::LBrace
            }
            '}' => {
                advance(&mut i, &mut line, &mut col);
                Tok::RBrace
            }
            '(' => {
                if i + 2 < chars.len() && chars[i + 1] == '+' && chars[i + 2] == ')' {
                    for _ in 0..3 {
                        advance(&mut i, &mut line, &mut col);
                    }
                    Tok::OPlus
                } else {
                    advance(&mut i, &mut line, &mut col);
                    Tok::LParen
                }
            }
            ')' => {
                advance(&mut i, &mut line, &mut col);
                Tok::RParen
            }
            ';' => {
                advance(&mut i, &mut line, &mut col);
                Tok::Semi
            }
            ',' => {
                advance(&mut i, &mut line, &mut col);
                Tok::Comma
            }
            '.' => {
                advance(&mut i, &mut line, &mut col);
                Tok::Dot
            }
            ':' => {
                advance(&mut i, &mut line, &mut col);
                Tok::Colon
            }
            '|' => {
                advance(&mut i, &mut line, &mut col);
                Tok::Pipe
            }
            '^' => {
                advance(&mut i, &mut line, &mut col);
                Tok::Caret
            }
            '!' => {
                advance(&mut i, &mut line, &mut col);
                Tok::Bang
            }
            '?' => {
                advance(&mut i, &mut line, &mut col);
                Tok::Question
            }
            '*' => {
                advance(&mut i, &mut line, &mut col);
                Tok::Star
            }
            '<' => {
                advance(&mut i, &mut line, &mut col);
                Tok::Lt
            }
            '=' => {
                advance(&mut i, &mut line, &mut col);
                if i < chars.len() && chars[i] == '=' {
                    advance(&mut i, &mut line, &mut col);
                    Tok::EqEq
                } else {
                    Tok::Assign
                }
            }
            '+' => {
                advance(&mut i, &mut line, &mut col);
                if i < chars.len() && chars[i] == '+' {
                    advance(&mut i, &mut line, &mut col);
                    Tok::PlusPlus
                } else {
                    Tok::Plus
                }
            }
            '-' => {
                advance(&mut i, &mut line, &mut col);
                if i < chars.len() && chars[i] == '>' {
                    advance(&mut i, &mut line, &mut col);
                    Tok::Arrow
                } else {
                    Tok::Minus
                }
            }
            '"' => {
                advance(&mut i, &mut line, &mut col);
                let mut s = String::new();
                loop {
                    if i >= chars.len() {
                        return Err(err(tline, tcol, "unterminated string literal".into()));
                    }
                    match chars[i] {
                        '"' => {
                            advance(&mut i, &mut line, &mut col);
                            break;
                        }
                        '\\' => {
                            advance(&mut i, &mut line, &mut col);
                            let esc = *chars.get(i).ok_or_else(|| {
                                err(tline, tcol, "unterminated string literal".into())
                            })?;
                            s.push(match esc {
                                'n' => '\n',
                                't' => '\t',
                                '"' => '"',
                                '\\' => '\\',
                                other => {
                                    return Err(err(
                                        line,
                                        col,
                                        format!("unknown escape `\\{other}`"),
                                    ))
                                }
                            });
                            advance(&mut i, &mut line, &mut col);
                        }
                        other => {
                            s.push(other);
                            advance(&mut i, &mut line, &mut col);
                        }
                    }
                }
                Tok::Str(s)
            }
            d if d.is_ascii_digit() => {
                let mut s = String::new();
                while i < chars.len() && chars[i].is_ascii_digit() {
                    s.push(chars[i]);
                    advance(&mut i, &mut line, &mut col);
                }
                if i < chars.len() && chars[i] == 'i' {
                    advance(&mut i, &mut line, &mut col);
                    let n: i64 = s
                        .parse()
                        .map_err(|_| err(tline, tcol, format!("integer `{s}i` out of range")))?;
                    Tok::Int(n)
                } else {
                    let n: u64 = s
                        .parse()
                        .map_err(|_| err(tline, tcol, format!("number `{s}` out of range")))?;
                    Tok::Nat(n)
                }
            }
            a if a.is_ascii_alphabetic() || a == '_' => {
                let mut s = String::new();
                while i < chars.len()
                    && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'')
                {
                    s.push(chars[i]);
                    advance(&mut i, &mut line, &mut col);
                }
                Tok::Ident(s)
            }
            other => {
                return Err(err(tline, tcol, format!("unexpected character `{other}`")));
            }
        };
        out.push(Spanned {
            tok,
            line: tline,
            col: tcol,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(src: &str) -> Vec<Tok> {
        lex(src).unwrap().into_iter().map(|s| s.tok).collect()
    }

    #[test]
    fn operators_and_literals() {
        assert_eq!(
            toks(r#"p!l(5i ++ "a\n") (+) end"#),
            vec![
                Tok::Ident("p".into()),
                Tok::Bang,
                Tok::Ident("l".into()),
                Tok::LParen,
                Tok::Int(5),
                Tok::PlusPlus,
                Tok::Str("a\n".into()),
                Tok::RParen,
                Tok::OPlus,
                Tok::Ident("end".into()),
            ]
        );
    }

    #[test]
    fn comments_and_positions() {
        let ts = lex("a # comment\n  b").unwrap();
        assert_eq!(ts.len(), 2);
        assert_eq!((ts[1].line, ts[1].col), (2, 3));
    }

    #[test]
    fn arrow_vs_minus_and_eq() {
        assert_eq!(
            toks("-> - == = 7 7i"),
            vec![
                Tok::Arrow,
                Tok::Minus,
                Tok::EqEq,
                Tok::Assign,
                Tok::Nat(7),
                Tok::Int(7),
            ]
        );
    }

    #[test]
    fn oplus_requires_the_exact_sequence() {
        assert_eq!(toks("(a + b)")[0], Tok::LParen);
        assert_eq!(toks("(+)"), vec![Tok::OPlus]);
    }
}
