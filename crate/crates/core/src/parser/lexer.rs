use super::syntax::Span;
use super::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Str(String),
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Comma,
    Colon,
    ColonEq,
    Semi,
    Dot,
    Backslash,
    Bang,
    Star,
    StarP,
    StarS,
    Arrow,
    Implies,
    Iff,
    LessEq,
    Less,
    EqEq,
    Eq,
    Tilde,
    Inverse,
    Amp,
    Bar,
    Wedge,
    Vee,
    Underscore,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Str(s) => format!("string \"{s}\""),
            Tok::Eof => "end of input".into(),
            t => format!("`{}`", t.text()),
        }
    }

    pub fn text(&self) -> &'static str {
        match self {
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::Comma => ",",
            Tok::Colon => ":",
            Tok::ColonEq => ":=",
            Tok::Semi => ";",
            Tok::Dot => ".",
            Tok::Backslash => "\\",
            Tok::Bang => "!",
            Tok::Star => "*",
            Tok::StarP => "*p",
            Tok::StarS => "*s",
            Tok::Arrow => "->",
            Tok::Implies => "=>",
            Tok::Iff => "<=>",
            Tok::LessEq => "<=",
            Tok::Less => "<",
            Tok::EqEq => "==",
            Tok::Eq => "=",
            Tok::Tilde => "~",
            Tok::Inverse => "^-1",
            Tok::Amp => "&",
            Tok::Bar => "|",
            Tok::Wedge => "/\\",
            Tok::Vee => "\\/",
            Tok::Underscore => "_",
            Tok::Ident(_) | Tok::Str(_) => "",
            Tok::Eof => "<eof>",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
    /// Whitespace or a comment separates this token from the previous one.
    pub spaced: bool,
}

#[derive(Debug, Clone)]
pub struct Comment {
    pub span: Span,
    pub text: String,
}

fn ident_start(c: char) -> bool {
    c.is_ascii_alphabetic()
}

fn ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

pub fn lex(src: &str) -> Result<(Vec<Token>, Vec<Comment>), ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut toks = Vec::new();
    let mut comments = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let mut spaced = true;
    let peek = |k: usize| chars.get(k).copied();
    while i < chars.len() {
        let c = chars[i];
        let span = Span { line, col };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            spaced = true;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            spaced = true;
            continue;
        }
        if c == '#' {
            let start = i + 1;
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            col += i - start + 1;
            comments.push(Comment { span, text: text.trim().to_string() });
            spaced = true;
            continue;
        }
        let (tok, len) = if ident_start(c) {
            let mut j = i + 1;
            while j < chars.len() {
                let d = chars[j];
                if ident_continue(d) || (d == '-' && peek(j + 1).is_some_and(|e| e.is_ascii_alphanumeric())) {
                    j += 1;
                } else {
                    break;
                }
            }
            (Tok::Ident(chars[i..j].iter().collect()), j - i)
        } else if c == '"' {
            let mut j = i + 1;
            while j < chars.len() && chars[j] != '"' && chars[j] != '\n' {
                j += 1;
            }
            if peek(j) != Some('"') {
                return Err(ParseError::Syntax { span, expected: vec!["closing `\"`".into()], found: "end of line".into() });
            }
            (Tok::Str(chars[i + 1..j].iter().collect()), j - i + 1)
        } else {
            let two: String = chars[i..(i + 2).min(chars.len())].iter().collect();
            let three: String = chars[i..(i + 3).min(chars.len())].iter().collect();
            let after = |k: usize| peek(i + k).is_some_and(ident_continue);
            match () {
                _ if three == "<=>" => (Tok::Iff, 3),
                _ if three == "^-1" => (Tok::Inverse, 3),
                _ if two == ":=" => (Tok::ColonEq, 2),
                _ if two == "->" => (Tok::Arrow, 2),
                _ if two == "=>" => (Tok::Implies, 2),
                _ if two == "<=" => (Tok::LessEq, 2),
                _ if two == "==" => (Tok::EqEq, 2),
                _ if two == "/\\" => (Tok::Wedge, 2),
                _ if two == "\\/" => (Tok::Vee, 2),
                _ if two == "*p" && !after(2) => (Tok::StarP, 2),
                _ if two == "*s" && !after(2) => (Tok::StarS, 2),
                _ => {
                    let t = match c {
                        '(' => Tok::LParen,
                        ')' => Tok::RParen,
                        '{' => Tok::LBrace,
                        '}' => Tok::RBrace,
                        '[' => Tok::LBracket,
                        ']' => Tok::RBracket,
                        ',' => Tok::Comma,
                        ':' => Tok::Colon,
                        ';' => Tok::Semi,
                        '.' => Tok::Dot,
                        '\\' => Tok::Backslash,
                        '!' => Tok::Bang,
                        '*' => Tok::Star,
                        '<' => Tok::Less,
                        '=' => Tok::Eq,
                        '~' => Tok::Tilde,
                        '&' => Tok::Amp,
                        '|' => Tok::Bar,
                        '_' => Tok::Underscore,
                        other => {
                            return Err(ParseError::Syntax {
                                span,
                                expected: vec!["a token".into()],
                                found: format!("character {other:?}"),
                            })
                        }
                    };
                    (t, 1)
                }
            }
        };
        toks.push(Token { tok, span, spaced });
        spaced = false;
        i += len;
        col += len;
    }
    toks.push(Token { tok: Tok::Eof, span: Span { line, col }, spaced: true });
    Ok((toks, comments))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(src: &str) -> Vec<Tok> {
        lex(src).unwrap().0.into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn longest_match_on_operators() {
        assert_eq!(
            kinds("A<=>B<=C<D"),
            vec![
                Tok::Ident("A".into()),
                Tok::Iff,
                Tok::Ident("B".into()),
                Tok::LessEq,
                Tok::Ident("C".into()),
                Tok::Less,
                Tok::Ident("D".into()),
                Tok::Eof
            ]
        );
    }

    #[test]
    fn dashes_join_identifiers_but_not_arrows() {
        assert_eq!(
            kinds("eq-refl A->B R^-1"),
            vec![
                Tok::Ident("eq-refl".into()),
                Tok::Ident("A".into()),
                Tok::Arrow,
                Tok::Ident("B".into()),
                Tok::Ident("R".into()),
                Tok::Inverse,
                Tok::Eof
            ]
        );
    }

    #[test]
    fn annotated_stars() {
        assert_eq!(kinds("*p *s * *q"), vec![Tok::StarP, Tok::StarS, Tok::Star, Tok::Star, Tok::Ident("q".into()), Tok::Eof]);
    }

    #[test]
    fn comments_are_collected_with_positions() {
        let (_, comments) = lex("def x ; # note here\n# whole line").unwrap();
        assert_eq!(comments.len(), 2);
        assert_eq!(comments[0].text, "note here");
        assert_eq!(comments[0].span.line, 1);
        assert_eq!(comments[1].span.line, 2);
    }
}
