//! Tokenizer and recursive-descent parser for the signature/term DSL.
//!
//! ```text
//! signature  := "signature" NAME item* "end"
//! item       := "op" NAME ":" INT | "const" NAME | "join" NAME | "zero" NAME | "unit" NAME
//! term       := NAME | NAME "(" term ("," term)* ")"
//! identity   := term "=" term
//! ```
//!
//! Whitespace is insignificant and `#` starts a comment running to the end of the line.

use crate::error::{Error, Result};
use crate::signature::Signature;
use crate::term::{Identity, Term};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Word(String),
    Colon,
    LParen,
    RParen,
    Comma,
    Eq,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

pub(crate) fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\'' || c == '.' || c == '{' || c == '}'
}

fn tokenize(src: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    let (mut line, mut column) = (1, 1);
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        let simple = match c {
            ':' => Some(Tok::Colon),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            '=' => Some(Tok::Eq),
            _ => None,
        };
        if let Some(tok) = simple {
            chars.next();
            column += 1;
            out.push(Token {
                tok,
                line: l,
                column: col,
            });
            continue;
        }
        if c == '\n' {
            chars.next();
            line += 1;
            column = 1;
        } else if c.is_whitespace() {
            chars.next();
            column += 1;
        } else if c == '#' {
            while let Some(&c) = chars.peek() {
                if c == '\n' {
                    break;
                }
                chars.next();
            }
        } else if is_word_char(c) {
            let mut word = String::new();
            while let Some(&c) = chars.peek() {
                if !is_word_char(c) {
                    break;
                }
                word.push(c);
                chars.next();
                column += 1;
            }
            out.push(Token {
                tok: Tok::Word(word),
                line: l,
                column: col,
            });
        } else {
            return Err(Error::Syntax {
                line: l,
                column: col,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn new(src: &str) -> Result<Self> {
        let tokens = tokenize(src)?;
        let end = match src.lines().enumerate().last() {
            Some((i, l)) => (i + 1, l.chars().count() + 1),
            None => (1, 1),
        };
        Ok(Parser { tokens, pos: 0, end })
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        let (line, column) = self
            .tokens
            .get(self.pos)
            .map(|t| (t.line, t.column))
            .unwrap_or(self.end);
        Err(Error::Syntax {
            line,
            column,
            message: message.into(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn at_end(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn word(&mut self, what: &str) -> Result<String> {
        match self.peek() {
            Some(Tok::Word(w)) => {
                let w = w.clone();
                self.pos += 1;
                Ok(w)
            }
            _ => self.err(format!("expected {what}")),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<()> {
        match self.peek() {
            Some(Tok::Word(w)) if w == kw => {
                self.pos += 1;
                Ok(())
            }
            _ => self.err(format!("expected `{kw}`")),
        }
    }

    fn finish(&self) -> Result<()> {
        if self.at_end() {
            Ok(())
        } else {
            self.err("unexpected trailing input")
        }
    }

    fn signature(&mut self) -> Result<Signature> {
        self.keyword("signature")?;
        let name = self.word("signature name")?;
        let mut sig = Signature::new(name);
        let (mut join, mut zero, mut unit) = (None, None, None);
        loop {
            let kw = self.word("`op`, `const`, `join`, `zero`, `unit` or `end`")?;
            match kw.as_str() {
                "end" => break,
                "op" => {
                    let sym = self.word("operation name")?;
                    self.expect(Tok::Colon, "`:`")?;
                    let arity = self.word("arity")?;
                    let arity: usize = match arity.parse() {
                        Ok(a) => a,
                        Err(_) => {
                            self.pos -= 1;
                            return self.err(format!("arity `{arity}` is not a non-negative integer"));
                        }
                    };
                    sig.push_op(sym, arity)?;
                }
                "const" => {
                    let sym = self.word("constant name")?;
                    sig.push_op(sym, 0)?;
                }
                "join" => join = Some(self.word("join symbol")?),
                "zero" => zero = Some(self.word("zero symbol")?),
                "unit" => unit = Some(self.word("unit symbol")?),
                other => {
                    self.pos -= 1;
                    return self.err(format!("unknown signature item `{other}`"));
                }
            }
        }
        self.finish()?;
        // Conventional constant names designate themselves when no explicit item does.
        if zero.is_none() {
            zero = ["zero", "0"]
                .iter()
                .find(|s| sig.arity(s) == Some(0))
                .map(|s| s.to_string());
        }
        if unit.is_none() {
            unit = ["one", "1"]
                .iter()
                .find(|s| sig.arity(s) == Some(0))
                .map(|s| s.to_string());
        }
        if let Some(j) = join {
            sig.designate_join(j)?;
        }
        if let Some(z) = zero {
            sig.designate_zero(z)?;
        }
        if let Some(u) = unit {
            sig.designate_unit(u)?;
        }
        Ok(sig)
    }

    fn term(&mut self, sig: &Signature) -> Result<Term> {
        let start = self.pos;
        let name = self.word("term")?;
        if self.peek() == Some(&Tok::LParen) {
            self.pos += 1;
            let mut args = vec![self.term(sig)?];
            while self.peek() == Some(&Tok::Comma) {
                self.pos += 1;
                args.push(self.term(sig)?);
            }
            self.expect(Tok::RParen, "`)` or `,`")?;
            match sig.arity(&name) {
                None => {
                    self.pos = start;
                    Err(Error::UnknownSymbol(name))
                }
                Some(expected) if expected != args.len() => Err(Error::ArityMismatch {
                    symbol: name,
                    expected,
                    found: args.len(),
                }),
                Some(_) => Ok(Term::App(name, args)),
            }
        } else {
            match sig.arity(&name) {
                Some(0) => Ok(Term::constant(name)),
                Some(expected) => Err(Error::ArityMismatch {
                    symbol: name,
                    expected,
                    found: 0,
                }),
                None => Ok(Term::Var(name)),
            }
        }
    }
}

/// Parses a `signature … end` block.
pub fn parse_signature(text: &str) -> Result<Signature> {
    Parser::new(text)?.signature()
}

/// Parses a prefix-notation term, checking every symbol against `sig`.
///
/// Bare names that are not 0-ary symbols of the signature become variables.
pub fn parse_term(text: &str, sig: &Signature) -> Result<Term> {
    let mut p = Parser::new(text)?;
    let t = p.term(sig)?;
    p.finish()?;
    Ok(t)
}

pub fn parse_identity(text: &str, sig: &Signature) -> Result<Identity> {
    let mut p = Parser::new(text)?;
    let lhs = p.term(sig)?;
    p.expect(Tok::Eq, "`=`")?;
    let rhs = p.term(sig)?;
    p.finish()?;
    Ok(Identity::new(lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_signature() {
        let sig = parse_signature("signature SL op mul:2 end").unwrap();
        assert_eq!(sig.name(), "SL");
        assert_eq!(sig.ops(), &[("mul".to_string(), 2)]);
        assert_eq!(sig.unit_symbol(), None);
    }

    #[test]
    fn constant_one_becomes_unit() {
        let sig = parse_signature("signature SL1 op mul:2 const one end").unwrap();
        assert_eq!(sig.unit_symbol(), Some("one"));
        assert_eq!(sig.arity("one"), Some(0));
    }

    #[test]
    fn explicit_designations() {
        let src = "signature B # bisemilattice\n op mul:2\n join plus\n zero bot\n unit top\nend";
        let sig = parse_signature(src).unwrap();
        assert_eq!(sig.join_symbol(), Some("plus"));
        assert_eq!(sig.arity("plus"), Some(2));
        assert_eq!(sig.zero_symbol(), Some("bot"));
        assert_eq!(sig.unit_symbol(), Some("top"));
    }

    #[test]
    fn duplicate_symbol_rejected() {
        let err = parse_signature("signature S op mul:2 op mul:3 end").unwrap_err();
        assert!(matches!(err, Error::DuplicateSymbol(s) if s == "mul"));
    }

    #[test]
    fn join_must_be_binary() {
        let err = parse_signature("signature S op f:3 join f end").unwrap_err();
        assert!(matches!(err, Error::BadArity { expected: 2, .. }));
    }

    #[test]
    fn syntax_error_position() {
        let err = parse_signature("signature S\n  op mul 2\nend").unwrap_err();
        match err {
            Error::Syntax { line, column, .. } => assert_eq!((line, column), (2, 10)),
            e => panic!("unexpected {e:?}"),
        }
        assert!(matches!(
            parse_signature("signature S op mul:2"),
            Err(Error::Syntax { .. })
        ));
    }

    #[test]
    fn terms() {
        let sig = parse_signature("signature SL1 op mul:2 const one end").unwrap();
        let t = parse_term("mul(x, mul(y, z))", &sig).unwrap();
        assert_eq!(t.size(), 5);
        assert_eq!(t.op_count(), 2);
        assert!(matches!(
            parse_term("mul(x)", &sig),
            Err(Error::ArityMismatch {
                expected: 2,
                found: 1,
                ..
            })
        ));
        assert_eq!(parse_term("one", &sig).unwrap(), Term::constant("one"));
        assert!(matches!(parse_term("f(x)", &sig), Err(Error::UnknownSymbol(_))));
        assert!(matches!(
            parse_term("mul", &sig),
            Err(Error::ArityMismatch { found: 0, .. })
        ));
    }

    #[test]
    fn identities() {
        let sig = parse_signature("signature SL op mul:2 end").unwrap();
        let id = parse_identity("mul(x, x) = x", &sig).unwrap();
        assert_eq!(id.rhs, Term::var("x"));
        assert!(parse_identity("mul(x, x) x", &sig).is_err());
    }
}
