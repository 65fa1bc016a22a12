//! Tokenizer for the `.bhdl` surface syntax.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Identifier,
    Number,
    UnitSuffix,
    Punct,
    Keyword,
    Str,
    End,
}

#[derive(Debug, Clone)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    pub line: usize,
    pub column: usize,
}

const KEYWORDS: &[&str] = &[
    "abstract", "block", "extends", "port", "param", "connect", "export", "check", "range",
    "interval", "bool", "int", "text", "true", "false",
];

pub fn tokenize(source: &str) -> Result<Vec<Token>> {
    let mut tokens = Vec::new();
    let chars: Vec<char> = source.chars().collect();
    let mut i = 0;
    let mut line = 1;
    let mut column = 1;

    macro_rules! bump {
        () => {{
            if chars[i] == '\n' {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
            i += 1;
        }};
    }

    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            bump!();
            continue;
        }
        // line comments
        if c == '/' && i + 1 < chars.len() && chars[i + 1] == '/' {
            while i < chars.len() && chars[i] != '\n' {
                bump!();
            }
            continue;
        }
        let (tok_line, tok_col) = (line, column);
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                bump!();
            }
            let text: String = chars[start..i].iter().collect();
            let kind = if KEYWORDS.contains(&text.as_str()) {
                TokenKind::Keyword
            } else {
                TokenKind::Identifier
            };
            tokens.push(Token {
                kind,
                text,
                line: tok_line,
                column: tok_col,
            });
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                bump!();
            }
            // exponent
            if i < chars.len()
                && (chars[i] == 'e' || chars[i] == 'E')
                && i + 1 < chars.len()
                && (chars[i + 1].is_ascii_digit()
                    || ((chars[i + 1] == '+' || chars[i + 1] == '-')
                        && i + 2 < chars.len()
                        && chars[i + 2].is_ascii_digit()))
            {
                bump!();
                if chars[i] == '+' || chars[i] == '-' {
                    bump!();
                }
                while i < chars.len() && chars[i].is_ascii_digit() {
                    bump!();
                }
            }
            let text: String = chars[start..i].iter().collect();
            tokens.push(Token {
                kind: TokenKind::Number,
                text,
                line: tok_line,
                column: tok_col,
            });
            // a unit suffix binds to the number only when directly adjacent
            if i < chars.len() && chars[i].is_ascii_alphabetic() {
                let (s_line, s_col) = (line, column);
                let start = i;
                while i < chars.len() && chars[i].is_ascii_alphabetic() {
                    bump!();
                }
                tokens.push(Token {
                    kind: TokenKind::UnitSuffix,
                    text: chars[start..i].iter().collect(),
                    line: s_line,
                    column: s_col,
                });
            } else if i < chars.len() && chars[i] == '%' {
                let (s_line, s_col) = (line, column);
                bump!();
                tokens.push(Token {
                    kind: TokenKind::UnitSuffix,
                    text: "%".to_string(),
                    line: s_line,
                    column: s_col,
                });
            }
            continue;
        }
        if c == '"' {
            bump!();
            let start = i;
            while i < chars.len() && chars[i] != '"' {
                bump!();
            }
            if i >= chars.len() {
                return Err(Error::Lex {
                    ch: '"',
                    line: tok_line,
                    column: tok_col,
                });
            }
            let text: String = chars[start..i].iter().collect();
            bump!(); // closing quote
            tokens.push(Token {
                kind: TokenKind::Str,
                text,
                line: tok_line,
                column: tok_col,
            });
            continue;
        }
        // `+-` is the tolerance operator
        if c == '+' && i + 1 < chars.len() && chars[i + 1] == '-' {
            bump!();
            bump!();
            tokens.push(Token {
                kind: TokenKind::Punct,
                text: "+-".to_string(),
                line: tok_line,
                column: tok_col,
            });
            continue;
        }
        if "{}()[]=,:.+-*/%".contains(c) {
            bump!();
            tokens.push(Token {
                kind: TokenKind::Punct,
                text: c.to_string(),
                line: tok_line,
                column: tok_col,
            });
            continue;
        }
        return Err(Error::Lex {
            ch: c,
            line: tok_line,
            column: tok_col,
        });
    }
    tokens.push(Token {
        kind: TokenKind::End,
        text: String::new(),
        line,
        column,
    });
    Ok(tokens)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn texts(src: &str) -> Vec<String> {
        tokenize(src).unwrap().into_iter().map(|t| t.text).collect()
    }

    #[test]
    fn instance_declaration() {
        let toks = tokenize("mcu = MagicMcu()").unwrap();
        let kinds: Vec<TokenKind> = toks.iter().map(|t| t.kind).collect();
        assert_eq!(
            kinds,
            vec![
                TokenKind::Identifier,
                TokenKind::Punct,
                TokenKind::Identifier,
                TokenKind::Punct,
                TokenKind::Punct,
                TokenKind::End,
            ]
        );
        assert_eq!(
            texts("mcu = MagicMcu()"),
            vec!["mcu", "=", "MagicMcu", "(", ")", ""]
        );
    }

    #[test]
    fn empty_source() {
        let toks = tokenize("").unwrap();
        assert_eq!(toks.len(), 1);
        assert_eq!(toks[0].kind, TokenKind::End);
    }

    #[test]
    fn number_with_unit_suffix() {
        let toks = tokenize("5mA").unwrap();
        assert_eq!(toks[0].kind, TokenKind::Number);
        assert_eq!(toks[0].text, "5");
        assert_eq!(toks[1].kind, TokenKind::UnitSuffix);
        assert_eq!(toks[1].text, "mA");
    }

    #[test]
    fn comments_skipped_and_positions_tracked() {
        let toks = tokenize("// hello\nblock X").unwrap();
        assert_eq!(toks[0].text, "block");
        assert_eq!(toks[0].line, 2);
        assert_eq!(toks[0].column, 1);
        assert_eq!(toks[1].column, 7);
    }

    #[test]
    fn illegal_character_reports_position() {
        let err = tokenize("block\n  ~").unwrap_err();
        match err {
            Error::Lex { ch, line, column } => {
                assert_eq!(ch, '~');
                assert_eq!((line, column), (2, 3));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn tolerance_operator() {
        assert_eq!(texts("5mA +- 1mA"), vec!["5", "mA", "+-", "1", "mA", ""]);
        assert_eq!(
            texts("10kOhm +- 5%"),
            vec!["10", "kOhm", "+-", "5", "%", ""]
        );
    }
}
