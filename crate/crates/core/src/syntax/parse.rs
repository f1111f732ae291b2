//! Recursive-descent parser shared by formulas and prefix trees.
//!
//! Quantifier scope extends maximally to the right; `&` binds tighter than
//! `|`; chains associate to the left.

use super::ast::{Atom, Connective, Formula, Literal, Quantifier, Term, VarSet};
use super::tree::PrefixTree;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(String),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Slash,
    Amp,
    Bar,
    Tilde,
    Eq,
    Neq,
    Gap,
    Eof,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<Spanned>> {
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let mut out = Vec::new();
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let mut push = |tok: Tok, width: usize, i: &mut usize, col: &mut usize| {
            out.push(Spanned {
                tok,
                line: l0,
                col: c0,
            });
            *i += width;
            *col += width;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                i += 1;
                col += 1;
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '(' => push(Tok::LParen, 1, &mut i, &mut col),
            ')' => push(Tok::RParen, 1, &mut i, &mut col),
            '{' => push(Tok::LBrace, 1, &mut i, &mut col),
            '}' => push(Tok::RBrace, 1, &mut i, &mut col),
            ',' => push(Tok::Comma, 1, &mut i, &mut col),
            '/' => push(Tok::Slash, 1, &mut i, &mut col),
            '&' => push(Tok::Amp, 1, &mut i, &mut col),
            '|' => push(Tok::Bar, 1, &mut i, &mut col),
            '~' => push(Tok::Tilde, 1, &mut i, &mut col),
            '=' => push(Tok::Eq, 1, &mut i, &mut col),
            '!' if chars.get(i + 1) == Some(&'=') => push(Tok::Neq, 2, &mut i, &mut col),
            '[' if chars.get(i + 1) == Some(&']') => push(Tok::Gap, 2, &mut i, &mut col),
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len()
                    && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'')
                {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                col += i - start;
                out.push(Spanned {
                    tok: Tok::Ident(s),
                    line: l0,
                    col: c0,
                });
            }
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                col += i - start;
                out.push(Spanned {
                    tok: Tok::Num(s),
                    line: l0,
                    col: c0,
                });
            }
            other => {
                return Err(Error::Parse {
                    line,
                    col,
                    msg: format!("unexpected character `{other}`"),
                })
            }
        }
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

/// Untyped parse result; gaps and literals may both appear.
#[derive(Debug, Clone)]
enum Node {
    Lit(Literal),
    Neg(Box<Node>),
    Conn(Connective, Box<Node>, Box<Node>),
    Quant {
        kind: Quantifier,
        var: String,
        slash: VarSet,
        body: Box<Node>,
    },
    Gap,
}

struct Header {
    kind: Quantifier,
    var: String,
    slash: VarSet,
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        let s = &self.toks[self.pos];
        Err(Error::Parse {
            line: s.line,
            col: s.col,
            msg: msg.into(),
        })
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => self.err(format!("expected {what}")),
        }
    }

    fn quantifier_at(&self, k: usize) -> Option<Quantifier> {
        match (self.peek_at(k), self.peek_at(k + 1)) {
            (Tok::Ident(q), Tok::Ident(_)) if q == "A" => Some(Quantifier::Forall),
            (Tok::Ident(q), Tok::Ident(_)) if q == "E" => Some(Quantifier::Exists),
            _ => None,
        }
    }

    /// `A x` or `E x`, optionally followed by `/{v,...}`.
    fn header(&mut self) -> Result<Header> {
        let kind = match self.quantifier_at(0) {
            Some(k) => k,
            None => return self.err("expected quantifier"),
        };
        self.bump();
        let (line, col) = (self.toks[self.pos].line, self.toks[self.pos].col);
        let var = self.ident("variable")?;
        let mut slash = VarSet::new();
        if *self.peek() == Tok::Slash {
            self.bump();
            self.expect(Tok::LBrace, "`{` after `/`")?;
            if *self.peek() != Tok::RBrace {
                loop {
                    slash.insert(self.ident("variable in slash set")?);
                    if *self.peek() == Tok::Comma {
                        self.bump();
                    } else {
                        break;
                    }
                }
            }
            self.expect(Tok::RBrace, "`}` closing slash set")?;
        }
        if slash.contains(&var) {
            return Err(Error::Parse {
                line,
                col,
                msg: format!("slash set of `{var}` contains `{var}` itself"),
            });
        }
        Ok(Header { kind, var, slash })
    }

    /// A parenthesised header such as `(E y/{x})`, if one starts here.
    fn paren_header(&mut self) -> Result<Option<Header>> {
        if *self.peek() != Tok::LParen || self.quantifier_at(1).is_none() {
            return Ok(None);
        }
        let save = self.pos;
        self.bump();
        let h = self.header()?;
        if *self.peek() == Tok::RParen {
            self.bump();
            Ok(Some(h))
        } else {
            self.pos = save;
            Ok(None)
        }
    }

    fn expr(&mut self) -> Result<Node> {
        let mut left = self.conj()?;
        while *self.peek() == Tok::Bar {
            self.bump();
            let right = self.conj()?;
            left = Node::Conn(Connective::Or, Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn conj(&mut self) -> Result<Node> {
        let mut left = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let right = self.unary()?;
            left = Node::Conn(Connective::And, Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn quantified(&mut self, h: Header) -> Result<Node> {
        let body = self.expr()?;
        Ok(Node::Quant {
            kind: h.kind,
            var: h.var,
            slash: h.slash,
            body: Box::new(body),
        })
    }

    fn unary(&mut self) -> Result<Node> {
        if self.quantifier_at(0).is_some() {
            let h = self.header()?;
            return self.quantified(h);
        }
        if let Some(h) = self.paren_header()? {
            return self.quantified(h);
        }
        if *self.peek() == Tok::Tilde {
            self.bump();
            let inner = self.unary()?;
            return Ok(match inner {
                Node::Lit(mut l) => {
                    l.positive = !l.positive;
                    Node::Lit(l)
                }
                Node::Neg(n) => *n,
                Node::Gap => return self.err("negation of a gap"),
                other => Node::Neg(Box::new(other)),
            });
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Node> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let n = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(n)
            }
            Tok::Gap => {
                self.bump();
                Ok(Node::Gap)
            }
            Tok::Ident(name) if *self.peek_at(1) == Tok::LParen => {
                self.bump();
                self.bump();
                let mut args = Vec::new();
                if *self.peek() != Tok::RParen {
                    loop {
                        args.push(self.term()?);
                        if *self.peek() == Tok::Comma {
                            self.bump();
                        } else {
                            break;
                        }
                    }
                }
                self.expect(Tok::RParen, "`)` closing argument list")?;
                Ok(Node::Lit(Literal {
                    positive: true,
                    atom: Atom::Rel { name, args },
                }))
            }
            Tok::Ident(_) | Tok::Num(_) => {
                let a = self.term()?;
                let positive = match self.peek() {
                    Tok::Eq => true,
                    Tok::Neq => false,
                    _ => return self.err("expected `=` or `!=` after term"),
                };
                self.bump();
                let b = self.term()?;
                Ok(Node::Lit(Literal {
                    positive,
                    atom: Atom::Eq(a, b),
                }))
            }
            Tok::Eof => self.err("unexpected end of input"),
            _ => self.err("expected formula"),
        }
    }

    fn term(&mut self) -> Result<Term> {
        match self.bump() {
            Tok::Ident(s) => Ok(Term::Var(s)),
            Tok::Num(s) => Ok(Term::Const(s)),
            _ => {
                self.pos = self.pos.saturating_sub(1);
                self.err("expected term")
            }
        }
    }
}

fn parse_node(src: &str) -> Result<Node> {
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
    };
    let n = p.expr()?;
    if *p.peek() != Tok::Eof {
        return p.err("trailing input");
    }
    Ok(n)
}

fn to_formula(n: Node) -> std::result::Result<Formula, &'static str> {
    Ok(match n {
        Node::Lit(l) => Formula::Lit(l),
        Node::Neg(m) => Formula::Neg(Box::new(to_formula(*m)?)),
        Node::Conn(c, l, r) => {
            Formula::Conn(c, Box::new(to_formula(*l)?), Box::new(to_formula(*r)?))
        }
        Node::Quant {
            kind,
            var,
            slash,
            body,
        } => Formula::Quant {
            kind,
            var,
            slash,
            body: Box::new(to_formula(*body)?),
        },
        Node::Gap => return Err("gap `[]` is only allowed in trees"),
    })
}

fn to_tree(n: Node) -> std::result::Result<PrefixTree, &'static str> {
    Ok(match n {
        Node::Gap => PrefixTree::Gap(0),
        Node::Conn(op, l, r) => PrefixTree::Conn {
            op,
            left: Box::new(to_tree(*l)?),
            right: Box::new(to_tree(*r)?),
        },
        Node::Quant {
            kind,
            var,
            slash,
            body,
        } => PrefixTree::Quant {
            kind,
            var,
            slash,
            child: Box::new(to_tree(*body)?),
        },
        Node::Lit(_) | Node::Neg(_) => return Err("trees may not contain atoms or negations"),
    })
}

pub fn parse_formula(src: &str) -> Result<Formula> {
    to_formula(parse_node(src)?).map_err(|m| Error::Parse {
        line: 1,
        col: 1,
        msg: m.into(),
    })
}

pub fn parse_tree(src: &str) -> Result<PrefixTree> {
    to_tree(parse_node(src)?)
        .map(PrefixTree::renumbered)
        .map_err(|m| Error::Parse {
            line: 1,
            col: 1,
            msg: m.into(),
        })
}
