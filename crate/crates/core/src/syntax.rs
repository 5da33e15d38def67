//! Text syntax for formulae and knowledge bases.
//!
//! A knowledge base file is line oriented:
//!
//! ```text
//! sig: xor,1
//! # comment
//! p ^ Lp
//! ```
//!
//! The header lists built-in connectives (`and`/`&`, `or`/`|`, `not`/`~`,
//! `xor`/`^`, `0`, `1`, `id`) or user connectives, each of which must be
//! defined by a `def <name> <arity> <bits>` line right after the header.
//! Operator binding, tightest first: `L`, `~`, `&`, `^`, `|`; binary
//! operators associate to the left. Other connectives use call syntax
//! `name(a, b)`.

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::{self, Write as _};

use crate::clones::{TruthTable, MAX_ARITY};
use crate::error::{Error, Result};
use crate::formula::{is_identifier, Connective, Formula, KnowledgeBase, Notation, Signature};

const PREFIX_STRENGTH: u8 = 4;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Ident(String),
    Const(char),
    Belief,
    Op(char),
    Open,
    Close,
    Comma,
    End,
}

#[derive(Clone, Debug)]
struct Spanned {
    token: Token,
    column: usize,
}

fn lex(text: &str, line: usize) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        let token = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            'a'..='z' => {
                let start = i;
                while i + 1 < chars.len() && matches!(chars[i + 1], 'a'..='z' | '0'..='9' | '_') {
                    i += 1;
                }
                Token::Ident(chars[start..=i].iter().collect())
            }
            '0' | '1' => Token::Const(c),
            'L' => Token::Belief,
            '~' | '&' | '^' | '|' => Token::Op(c),
            '(' => Token::Open,
            ')' => Token::Close,
            ',' => Token::Comma,
            other => {
                return Err(Error::Syntax {
                    line,
                    column,
                    message: alloc::format!("unexpected character '{other}'"),
                })
            }
        };
        out.push(Spanned { token, column });
        i += 1;
    }
    out.push(Spanned {
        token: Token::End,
        column: chars.len() + 1,
    });
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Spanned>,
    pos: usize,
    signature: &'a Signature,
    line: usize,
}

impl Parser<'_> {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos].token
    }

    fn next(&mut self) -> Spanned {
        let t = self.tokens[self.pos].clone();
        if t.token != Token::End {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, column: usize, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            line: self.line,
            column,
            message: message.into(),
        })
    }

    fn connective(&self, symbol: &str) -> Result<Arc<Connective>> {
        self.signature
            .get(symbol)
            .cloned()
            .ok_or_else(|| Error::NotInSignature(symbol.to_string()))
    }

    fn formula(&mut self) -> Result<Formula> {
        let f = self.binary(1)?;
        let t = self.next();
        if t.token != Token::End {
            return self.error(t.column, "unexpected trailing input");
        }
        Ok(f)
    }

    fn binary(&mut self, strength: u8) -> Result<Formula> {
        if strength >= PREFIX_STRENGTH {
            return self.unary();
        }
        let mut lhs = self.binary(strength + 1)?;
        loop {
            let symbol = match self.peek() {
                Token::Op('|') if strength == 1 => "|",
                Token::Op('^') if strength == 2 => "^",
                Token::Op('&') if strength == 3 => "&",
                _ => return Ok(lhs),
            };
            self.next();
            let c = self.connective(symbol)?;
            let rhs = self.binary(strength + 1)?;
            lhs = Formula::try_apply(&c, vec![lhs, rhs])?;
        }
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek() {
            Token::Belief => {
                self.next();
                Ok(Formula::belief(self.unary()?))
            }
            Token::Op('~') => {
                self.next();
                let c = self.connective("~")?;
                let inner = self.unary()?;
                Formula::try_apply(&c, vec![inner])
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Formula> {
        let t = self.next();
        match t.token {
            Token::Ident(name) => {
                if *self.peek() != Token::Open {
                    return Ok(Formula::Atom(name));
                }
                self.next();
                let c = self.connective(&name)?;
                let mut args = Vec::new();
                if *self.peek() == Token::Close {
                    self.next();
                } else {
                    loop {
                        args.push(self.binary(1)?);
                        let sep = self.next();
                        match sep.token {
                            Token::Comma => continue,
                            Token::Close => break,
                            _ => return self.error(sep.column, "expected ',' or ')'"),
                        }
                    }
                }
                Formula::try_apply(&c, args)
            }
            Token::Const(c) => {
                let mut s = [0u8; 4];
                let c = self.connective(c.encode_utf8(&mut s))?;
                Formula::try_apply(&c, Vec::new())
            }
            Token::Open => {
                let inner = self.binary(1)?;
                let close = self.next();
                if close.token != Token::Close {
                    return self.error(close.column, "expected ')'");
                }
                Ok(inner)
            }
            Token::End => self.error(t.column, "unexpected end of formula"),
            other => self.error(t.column, alloc::format!("unexpected token {other:?}")),
        }
    }
}

/// Parses one formula; every connective must belong to `signature`.
pub fn parse_formula(text: &str, signature: &Signature) -> Result<Formula> {
    parse_formula_at(text, signature, 1)
}

fn parse_formula_at(text: &str, signature: &Signature, line: usize) -> Result<Formula> {
    Parser {
        tokens: lex(text, line)?,
        pos: 0,
        signature,
        line,
    }
    .formula()
}

/// Parses a knowledge base file.
pub fn parse_kb(text: &str) -> Result<KnowledgeBase> {
    let syntax = |line: usize, column: usize, message: &str| Error::Syntax {
        line,
        column,
        message: message.to_string(),
    };

    // Header entries: a resolved connective, or a user name awaiting its `def`.
    let mut header: Option<Vec<(String, Option<Connective>)>> = None;
    let mut signature: Option<Signature> = None;
    let mut premises = Vec::new();

    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let column = raw.len() - raw.trim_start().len() + 1;
        let Some(entries) = header.as_mut() else {
            let Some(list) = trimmed.strip_prefix("sig:") else {
                return Err(syntax(line, column, "expected 'sig:' header"));
            };
            let mut entries = Vec::new();
            for name in list.split(',').map(str::trim).filter(|n| !n.is_empty()) {
                let entry = match Connective::builtin(name) {
                    Some(c) => (c.name().to_string(), Some(c)),
                    None if is_identifier(name) => (name.to_string(), None),
                    None => {
                        return Err(syntax(
                            line,
                            column,
                            &alloc::format!("invalid connective name '{name}'"),
                        ))
                    }
                };
                if entries.iter().any(|(n, _)| *n == entry.0) {
                    return Err(syntax(
                        line,
                        column,
                        &alloc::format!("connective '{name}' listed twice"),
                    ));
                }
                entries.push(entry);
            }
            header = Some(entries);
            continue;
        };
        if let Some(def) = trimmed.strip_prefix("def ") {
            if signature.is_some() {
                return Err(syntax(
                    line,
                    column,
                    "'def' lines must directly follow the signature header",
                ));
            }
            let fields: Vec<&str> = def.split_whitespace().collect();
            let [name, arity, bits] = fields[..] else {
                return Err(syntax(line, column, "expected 'def <name> <arity> <bits>'"));
            };
            let arity: usize = arity
                .parse()
                .map_err(|_| syntax(line, column, "arity must be a nonnegative integer"))?;
            if arity > MAX_ARITY {
                return Err(Error::ArityTooLarge(arity));
            }
            let connective = Connective::new(name, TruthTable::from_bit_str(arity, bits)?)?;
            let Some(slot) = entries.iter_mut().find(|(n, _)| n == name) else {
                return Err(syntax(
                    line,
                    column,
                    &alloc::format!("connective '{name}' is not listed in the signature"),
                ));
            };
            if slot.1.is_some() {
                return Err(syntax(
                    line,
                    column,
                    &alloc::format!("connective '{name}' defined twice"),
                ));
            }
            slot.1 = Some(connective);
            continue;
        }
        if signature.is_none() {
            signature = Some(resolve_header(entries)?);
        }
        let sig = signature.as_ref().expect("resolved above");
        premises.push(parse_formula_at(raw, sig, line)?);
    }

    let signature = match (signature, header) {
        (Some(sig), _) => sig,
        (None, Some(entries)) => resolve_header(&entries)?,
        (None, None) => return Err(syntax(1, 1, "expected 'sig:' header")),
    };
    KnowledgeBase::new(signature, premises)
}

fn resolve_header(entries: &[(String, Option<Connective>)]) -> Result<Signature> {
    let connectives = entries
        .iter()
        .map(|(name, c)| {
            c.clone().ok_or_else(|| {
                Error::BadDefinition(alloc::format!("connective '{name}' is never defined"))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Signature::new(connectives)
}

/// Canonical text of a knowledge base; parsing it yields the same value.
pub fn render_kb(kb: &KnowledgeBase) -> String {
    let mut out = String::from("sig: ");
    let names: Vec<&str> = kb.signature().connectives().map(Connective::name).collect();
    out.push_str(&names.join(","));
    out.push('\n');
    for c in kb.signature().connectives().filter(|c| !c.is_builtin()) {
        let _ = writeln!(out, "def {} {} {}", c.name(), c.arity(), c.table());
    }
    for p in kb.premises() {
        let _ = writeln!(out, "{p}");
    }
    out
}

fn strength(f: &Formula) -> u8 {
    match f {
        Formula::Apply(c, _) => match c.notation() {
            Notation::Infix(_, s) => s,
            _ => PREFIX_STRENGTH,
        },
        _ => PREFIX_STRENGTH,
    }
}

fn write_operand(out: &mut fmt::Formatter<'_>, f: &Formula, parens: bool) -> fmt::Result {
    if parens {
        write!(out, "({f})")
    } else {
        write!(out, "{f}")
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(name) => out.write_str(name),
            Formula::Belief(inner) => {
                out.write_str("L")?;
                write_operand(out, inner, strength(inner) < PREFIX_STRENGTH)
            }
            Formula::Apply(c, args) => match c.notation() {
                Notation::Constant(s) => out.write_str(s),
                Notation::Prefix(s) => {
                    out.write_str(s)?;
                    write_operand(out, &args[0], strength(&args[0]) < PREFIX_STRENGTH)
                }
                Notation::Infix(s, own) => {
                    write_operand(out, &args[0], strength(&args[0]) < own)?;
                    write!(out, " {s} ")?;
                    write_operand(out, &args[1], strength(&args[1]) <= own)
                }
                Notation::Call => {
                    write!(out, "{}(", c.name())?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            out.write_str(", ")?;
                        }
                        write!(out, "{a}")?;
                    }
                    out.write_str(")")
                }
            },
        }
    }
}
