//! Tokenizer for theory and derivation files.

use crate::error::ParseError;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Tok {
    Ident(String),
    Int(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Comma,
    Colon,
    Dot,
    PropComp, // the three characters `(.)`
    Pipe,
    Star,
    Plus,
    Eq,
    EqEq,
    FatArrow,
    Arrow,
    Tilde,
    LtLt,
    Eof,
}

impl std::fmt::Display for Tok {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(s) => write!(f, "`{s}`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::LBracket => write!(f, "`[`"),
            Tok::RBracket => write!(f, "`]`"),
            Tok::LBrace => write!(f, "`{{`"),
            Tok::RBrace => write!(f, "`}}`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::Colon => write!(f, "`:`"),
            Tok::Dot => write!(f, "`.`"),
            Tok::PropComp => write!(f, "`(.)`"),
            Tok::Pipe => write!(f, "`|`"),
            Tok::Star => write!(f, "`*`"),
            Tok::Plus => write!(f, "`+`"),
            Tok::Eq => write!(f, "`=`"),
            Tok::EqEq => write!(f, "`==`"),
            Tok::FatArrow => write!(f, "`=>`"),
            Tok::Arrow => write!(f, "`->`"),
            Tok::Tilde => write!(f, "`~`"),
            Tok::LtLt => write!(f, "`<<`"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

pub fn lex(input: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = input.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let mut line = 1;
    let mut col = 1;
    macro_rules! push {
        ($tok:expr, $len:expr) => {{
            out.push(Spanned { tok: $tok, line, col });
            i += $len;
            col += $len;
        }};
    }
    while i < chars.len() {
        let c = chars[i];
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            ' ' | '\t' | '\r' => {
                i += 1;
                col += 1;
            }
            '/' if chars.get(i + 1) == Some(&'/') => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '(' => {
                if chars.get(i + 1) == Some(&'.') && chars.get(i + 2) == Some(&')') {
                    push!(Tok::PropComp, 3);
                } else {
                    push!(Tok::LParen, 1);
                }
            }
            ')' => push!(Tok::RParen, 1),
            '[' => push!(Tok::LBracket, 1),
            ']' => push!(Tok::RBracket, 1),
            '{' => push!(Tok::LBrace, 1),
            '}' => push!(Tok::RBrace, 1),
            ',' => push!(Tok::Comma, 1),
            ':' => push!(Tok::Colon, 1),
            '.' => push!(Tok::Dot, 1),
            '|' => push!(Tok::Pipe, 1),
            '*' => push!(Tok::Star, 1),
            '+' => push!(Tok::Plus, 1),
            '~' => push!(Tok::Tilde, 1),
            '=' => {
                if chars.get(i + 1) == Some(&'=') {
                    push!(Tok::EqEq, 2);
                } else if chars.get(i + 1) == Some(&'>') {
                    push!(Tok::FatArrow, 2);
                } else {
                    push!(Tok::Eq, 1);
                }
            }
            '-' => {
                if chars.get(i + 1) == Some(&'>') {
                    push!(Tok::Arrow, 2);
                } else {
                    return Err(ParseError {
                        line,
                        col,
                        msg: "unexpected `-`".to_string(),
                    });
                }
            }
            '<' => {
                if chars.get(i + 1) == Some(&'<') {
                    push!(Tok::LtLt, 2);
                } else {
                    return Err(ParseError {
                        line,
                        col,
                        msg: "unexpected `<`".to_string(),
                    });
                }
            }
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                out.push(Spanned { tok: Tok::Int(text), line, col });
                col += i - start;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() {
                    let c = chars[i];
                    if c.is_ascii_alphanumeric() || c == '_' {
                        i += 1;
                    } else if c == '-'
                        && chars
                            .get(i + 1)
                            .is_some_and(|n| n.is_ascii_alphanumeric() || *n == '_')
                    {
                        // hyphenated identifiers (rule names); `->` stays an arrow
                        i += 1;
                    } else {
                        break;
                    }
                }
                let text: String = chars[start..i].iter().collect();
                out.push(Spanned { tok: Tok::Ident(text), line, col });
                col += i - start;
            }
            other => {
                return Err(ParseError {
                    line,
                    col,
                    msg: format!("unexpected character `{other}`"),
                })
            }
        }
    }
    out.push(Spanned { tok: Tok::Eof, line, col });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(s: &str) -> Vec<Tok> {
        lex(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn operators_and_identifiers() {
        assert_eq!(
            kinds("untag[T].tag[T] == id[V_T]"),
            vec![
                Tok::Ident("untag".into()),
                Tok::LBracket,
                Tok::Ident("T".into()),
                Tok::RBracket,
                Tok::Dot,
                Tok::Ident("tag".into()),
                Tok::LBracket,
                Tok::Ident("T".into()),
                Tok::RBracket,
                Tok::EqEq,
                Tok::Ident("id".into()),
                Tok::LBracket,
                Tok::Ident("V_T".into()),
                Tok::RBracket,
                Tok::Eof,
            ]
        );
    }

    #[test]
    fn prop_comp_and_hyphens() {
        assert_eq!(
            kinds("k (.) f"),
            vec![Tok::Ident("k".into()), Tok::PropComp, Tok::Ident("f".into()), Tok::Eof]
        );
        assert_eq!(
            kinds("(rule w-subs)"),
            vec![
                Tok::LParen,
                Tok::Ident("rule".into()),
                Tok::Ident("w-subs".into()),
                Tok::RParen,
                Tok::Eof
            ]
        );
        assert_eq!(
            kinds("A -> B"),
            vec![Tok::Ident("A".into()), Tok::Arrow, Tok::Ident("B".into()), Tok::Eof]
        );
    }

    #[test]
    fn comments_and_positions() {
        let toks = lex("a // rest\n  b").unwrap();
        assert_eq!(toks[0].tok, Tok::Ident("a".into()));
        assert_eq!((toks[1].line, toks[1].col), (2, 3));
        assert!(lex("a ? b").is_err());
    }
}
