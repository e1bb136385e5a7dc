use std::collections::HashMap;

use super::lexer::{lex, Tok, Token};
use super::syntax::*;
use super::ParseError;

const KEYWORDS: &[&str] = &["flag", "def", "prim", "check", "notation", "forall", "exists", "o", "eps", "sub"];

pub fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

/// Parses a whole script.
pub fn parse_script(src: &str) -> Result<SurfaceScript, ParseError> {
    let (toks, comments) = lex(src)?;
    let mut notes = HashMap::new();
    for c in comments {
        notes.entry(c.span.line).or_insert((c.span.col, c.text));
    }
    let mut p = Parser { toks, pos: 0, notes, in_flag_header: false };
    p.script()
}

/// Parses a single expression, e.g. for tests and tooling.
pub fn parse_expr(src: &str) -> Result<SExpr, ParseError> {
    let (toks, _) = lex(src)?;
    let mut p = Parser { toks, pos: 0, notes: HashMap::new(), in_flag_header: false };
    let e = p.expr()?;
    p.expect(Tok::Eof, "end of input")?;
    Ok(e)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    notes: HashMap<usize, (usize, String)>,
    /// Inside a flag header `{` opens the flag body, not a set.
    in_flag_header: bool,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn span(&self) -> Span {
        self.toks[self.pos].span
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, expected: &[&str]) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            span: self.span(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().describe(),
        })
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<Token, ParseError> {
        if *self.peek() == t {
            Ok(self.bump())
        } else {
            self.error(&[what])
        }
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn name(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) if !is_keyword(&s) => {
                self.bump();
                Ok(s)
            }
            _ => self.error(&["identifier"]),
        }
    }

    fn names(&mut self) -> Result<Vec<String>, ParseError> {
        let mut out = vec![self.name()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            out.push(self.name()?);
        }
        Ok(out)
    }

    /// `;` followed by an optional comment on the same line.
    fn terminator(&mut self) -> Result<Option<String>, ParseError> {
        let semi = self.expect(Tok::Semi, "`;`")?;
        Ok(match self.notes.get(&semi.span.line) {
            Some((col, text)) if *col > semi.span.col && !text.is_empty() => Some(text.clone()),
            _ => None,
        })
    }

    fn script(&mut self) -> Result<SurfaceScript, ParseError> {
        let mut items = Vec::new();
        let mut open: Vec<Span> = Vec::new();
        loop {
            let span = self.span();
            match self.peek().clone() {
                Tok::Eof => break,
                Tok::RBrace => {
                    if open.pop().is_none() {
                        return Err(ParseError::UnbalancedFlag { span, reason: "`}` without an open flag".into() });
                    }
                    self.bump();
                    items.push(FlagItem::CloseFlag(span));
                }
                Tok::Ident(kw) => match kw.as_str() {
                    "flag" => {
                        self.bump();
                        let mut decls = Vec::new();
                        loop {
                            let dspan = self.span();
                            let names = self.names()?;
                            self.expect(Tok::Colon, "`:`")?;
                            self.in_flag_header = true;
                            let ty = self.expr();
                            self.in_flag_header = false;
                            decls.push(Decl { names, ty: ty?, span: dspan });
                            if *self.peek() == Tok::Comma {
                                self.bump();
                            } else {
                                break;
                            }
                        }
                        self.expect(Tok::LBrace, "`{`")?;
                        open.push(span);
                        items.push(FlagItem::OpenFlag(decls, span));
                    }
                    "def" | "prim" => items.push(FlagItem::Def(self.def_step()?)),
                    "check" => {
                        self.bump();
                        let subject = self.expr()?;
                        self.expect(Tok::Colon, "`:`")?;
                        let classifier = self.expr()?;
                        let note = self.terminator()?;
                        items.push(FlagItem::Check(CheckStep { subject, classifier, note, span }));
                    }
                    "notation" => {
                        self.bump();
                        let symbol = match self.bump().tok {
                            Tok::Str(s) => s,
                            _ => {
                                self.pos -= 1;
                                return self.error(&["quoted notation symbol"]);
                            }
                        };
                        self.expect(Tok::ColonEq, "`:=`")?;
                        let target = self.def_name()?;
                        let note = self.terminator()?;
                        items.push(FlagItem::Notation(NotationStep { symbol, target, note, span }));
                    }
                    _ => return self.error(&["`flag`", "`def`", "`prim`", "`check`", "`notation`", "`}`"]),
                },
                _ => return self.error(&["`flag`", "`def`", "`prim`", "`check`", "`notation`", "`}`"]),
            }
        }
        if let Some(span) = open.pop() {
            return Err(ParseError::UnbalancedFlag { span, reason: "flag is never closed".into() });
        }
        Ok(SurfaceScript { items })
    }

    fn def_step(&mut self) -> Result<DefStep, ParseError> {
        let span = self.span();
        let kind = if self.is_kw("prim") { DefKind::Primitive } else { DefKind::Descriptive };
        self.bump();
        let name = self.def_name()?;
        let params = if *self.peek() == Tok::LParen {
            self.bump();
            let mut list = Vec::new();
            if *self.peek() != Tok::RParen {
                list = self.names()?;
            }
            self.expect(Tok::RParen, "`)`")?;
            if list.is_empty() {
                Params::FromFlags
            } else {
                Params::Named(list)
            }
        } else {
            Params::FromFlags
        };
        let ty = if *self.peek() == Tok::Colon || kind == DefKind::Primitive {
            self.expect(Tok::Colon, "`:`")?;
            Some(self.expr()?)
        } else {
            None
        };
        let body = if kind == DefKind::Descriptive && *self.peek() == Tok::ColonEq {
            self.bump();
            Some(self.expr()?)
        } else {
            None
        };
        let note = self.terminator()?;
        Ok(DefStep { kind, name, params, ty, body, note, span })
    }

    pub fn expr(&mut self) -> Result<SExpr, ParseError> {
        self.level(1)
    }

    /// `forall(S, P)` and `exists(S, P)` name the quantifier constants
    /// directly.
    fn quantifier_call(&self) -> bool {
        (self.is_kw("forall") || self.is_kw("exists"))
            && self.toks[self.pos + 1].tok == Tok::LParen
            && !self.toks[self.pos + 1].spaced
    }

    fn starts_binder(&self) -> bool {
        matches!(self.peek(), Tok::Backslash | Tok::Bang)
            || ((self.is_kw("forall") || self.is_kw("exists")) && !self.quantifier_call())
    }

    /// A definition name or notation target; the quantifier words are
    /// allowed here.
    fn def_name(&mut self) -> Result<String, ParseError> {
        if self.is_kw("forall") || self.is_kw("exists") {
            if let Tok::Ident(s) = self.bump().tok {
                return Ok(s);
            }
        }
        self.name()
    }

    fn binder(&mut self) -> Result<SExpr, ParseError> {
        let kind = match self.bump().tok {
            Tok::Backslash => BinderKind::Lam,
            Tok::Bang => BinderKind::Pi,
            Tok::Ident(s) if s == "forall" => BinderKind::Forall,
            _ => BinderKind::Exists,
        };
        let names = self.names()?;
        self.expect(Tok::Colon, "`:`")?;
        let ty = self.expr()?;
        self.expect(Tok::Dot, "`.`")?;
        let body = self.expr()?;
        Ok(SExpr::Binder(kind, names, Box::new(ty), Box::new(body)))
    }

    /// Precedence levels, loosest first: 1 arrows and `<=>` (right
    /// associative); 2 `/\` `\/`; 3 `=[T]` `==` `<=` `sub` `eps` `<`
    /// (non-associative); 4 `|`; 5 `&`; 6 `o`; 7 prefix `~`; 8
    /// application; 9 postfix `^-1`. Binders may open any operand and
    /// extend as far right as possible.
    fn level(&mut self, lvl: u8) -> Result<SExpr, ParseError> {
        if self.starts_binder() {
            return self.binder();
        }
        match lvl {
            1 => {
                let lhs = self.level(2)?;
                let span = self.span();
                match self.peek() {
                    Tok::Arrow | Tok::Implies => {
                        let kind = if *self.peek() == Tok::Arrow { ArrowKind::Type } else { ArrowKind::Implies };
                        self.bump();
                        let rhs = self.level(1)?;
                        Ok(SExpr::Arrow(kind, Box::new(lhs), Box::new(rhs)))
                    }
                    Tok::Iff => {
                        self.bump();
                        let rhs = self.level(1)?;
                        Ok(SExpr::Op(Op::Iff, vec![lhs, rhs], span))
                    }
                    _ => Ok(lhs),
                }
            }
            2 => {
                let mut lhs = self.level(3)?;
                loop {
                    let span = self.span();
                    let op = match self.peek() {
                        Tok::Wedge => Op::And,
                        Tok::Vee => Op::Or,
                        _ => return Ok(lhs),
                    };
                    self.bump();
                    let rhs = self.level(3)?;
                    lhs = SExpr::Op(op, vec![lhs, rhs], span);
                }
            }
            3 => {
                let lhs = self.level(4)?;
                let span = self.span();
                let op = match self.peek() {
                    Tok::Eq => {
                        self.bump();
                        self.expect(Tok::LBracket, "`[` after `=`")?;
                        let carrier = self.expr()?;
                        self.expect(Tok::RBracket, "`]`")?;
                        let rhs = self.level(4)?;
                        return Ok(SExpr::Op(Op::Equal, vec![carrier, lhs, rhs], span));
                    }
                    Tok::EqEq => Op::ExtEqual,
                    Tok::LessEq => Op::SubRel,
                    Tok::Less => Op::Less,
                    Tok::Ident(s) if s == "sub" => Op::Subset,
                    Tok::Ident(s) if s == "eps" => Op::Elem,
                    _ => return Ok(lhs),
                };
                self.bump();
                let rhs = self.level(4)?;
                Ok(SExpr::Op(op, vec![lhs, rhs], span))
            }
            4..=6 => {
                let mut lhs = self.level(lvl + 1)?;
                loop {
                    let span = self.span();
                    let op = match (lvl, self.peek()) {
                        (4, Tok::Bar) => Op::Union,
                        (5, Tok::Amp) => Op::Intersect,
                        (6, Tok::Ident(s)) if s == "o" => Op::Compose,
                        _ => return Ok(lhs),
                    };
                    self.bump();
                    let rhs = self.level(lvl + 1)?;
                    lhs = SExpr::Op(op, vec![lhs, rhs], span);
                }
            }
            7 => {
                if *self.peek() == Tok::Tilde {
                    let span = self.span();
                    self.bump();
                    let inner = self.level(7)?;
                    return Ok(SExpr::Op(Op::Not, vec![inner], span));
                }
                self.level(8)
            }
            _ => {
                let mut head = self.postfix()?;
                while self.starts_atom() {
                    let arg = self.postfix()?;
                    head = SExpr::app(head, arg);
                }
                Ok(head)
            }
        }
    }

    fn starts_atom(&self) -> bool {
        match self.peek() {
            Tok::Ident(s) => !is_keyword(s) || self.quantifier_call(),
            Tok::LParen | Tok::Star | Tok::StarP | Tok::StarS | Tok::LBracket => true,
            Tok::LBrace => !self.in_flag_header,
            _ => false,
        }
    }

    fn postfix(&mut self) -> Result<SExpr, ParseError> {
        let mut e = self.atom()?;
        loop {
            let span = self.span();
            let postfix_conv = matches!(self.peek(), Tok::Ident(s) if s == "conv")
                && !(self.toks[self.pos + 1].tok == Tok::LParen && !self.toks[self.pos + 1].spaced);
            if *self.peek() != Tok::Inverse && !postfix_conv {
                break;
            }
            self.bump();
            e = SExpr::Op(Op::Converse, vec![e], span);
        }
        Ok(e)
    }

    fn atom(&mut self) -> Result<SExpr, ParseError> {
        let span = self.span();
        match self.peek().clone() {
            Tok::Star => {
                self.bump();
                Ok(SExpr::Star(StarTag::Plain))
            }
            Tok::StarP => {
                self.bump();
                Ok(SExpr::Star(StarTag::Prop))
            }
            Tok::StarS => {
                self.bump();
                Ok(SExpr::Star(StarTag::Set))
            }
            Tok::Ident(s) if !is_keyword(&s) || self.quantifier_call() => {
                self.bump();
                let call = *self.peek() == Tok::LParen && !self.toks[self.pos].spaced;
                if !call {
                    return Ok(SExpr::Ident(s, span));
                }
                self.bump();
                let mut args = Vec::new();
                if *self.peek() != Tok::RParen {
                    args.push(self.expr()?);
                    while *self.peek() == Tok::Comma {
                        self.bump();
                        args.push(self.expr()?);
                    }
                }
                self.expect(Tok::RParen, "`)` or `,`")?;
                Ok(SExpr::Call(s, args, span))
            }
            Tok::LParen => {
                self.bump();
                let saved = std::mem::replace(&mut self.in_flag_header, false);
                let e = self.expr();
                self.in_flag_header = saved;
                let e = e?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::LBrace => {
                self.bump();
                let name = self.name()?;
                self.expect(Tok::Colon, "`:`")?;
                let ty = self.level(5)?;
                self.expect(Tok::Bar, "`|`")?;
                let body = self.expr()?;
                self.expect(Tok::RBrace, "`}`")?;
                Ok(SExpr::SetBuilder(name, Box::new(ty), Box::new(body)))
            }
            Tok::LBracket => {
                self.bump();
                let x = self.expr()?;
                self.expect(Tok::RBracket, "`]`")?;
                self.expect(Tok::Underscore, "`_`")?;
                let r = self.postfix()?;
                Ok(SExpr::Class(Box::new(x), Box::new(r), span))
            }
            _ => self.error(&["expression"]),
        }
    }
}
