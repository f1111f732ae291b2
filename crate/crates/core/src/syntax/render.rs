use std::fmt;

use super::ast::{Atom, Connective, Formula, Literal, Quantifier, VarSet};
use super::tree::PrefixTree;

/// Borrowed view shared by formulas and trees so both render alike.
enum View<'a> {
    Leaf(String),
    Neg(&'a Formula),
    Conn(Connective, Item<'a>, Item<'a>),
    Quant(Quantifier, &'a str, &'a VarSet, Item<'a>),
}

#[derive(Clone, Copy)]
enum Item<'a> {
    F(&'a Formula),
    T(&'a PrefixTree),
}

fn literal(l: &Literal) -> String {
    match (&l.atom, l.positive) {
        (Atom::Eq(a, b), true) => format!("{a}={b}"),
        (Atom::Eq(a, b), false) => format!("{a}!={b}"),
        (Atom::Rel { name, args }, pos) => {
            let args: Vec<String> = args.iter().map(|t| t.to_string()).collect();
            let neg = if pos { "" } else { "~" };
            format!("{neg}{name}({})", args.join(","))
        }
    }
}

impl<'a> Item<'a> {
    fn view(self) -> View<'a> {
        match self {
            Item::F(Formula::Lit(l)) => View::Leaf(literal(l)),
            Item::F(Formula::Neg(g)) => View::Neg(g),
            Item::F(Formula::Conn(c, l, r)) => View::Conn(*c, Item::F(l), Item::F(r)),
            Item::F(Formula::Quant {
                kind,
                var,
                slash,
                body,
            }) => View::Quant(*kind, var, slash, Item::F(body)),
            Item::T(PrefixTree::Gap(_)) => View::Leaf("[]".into()),
            Item::T(PrefixTree::Conn { op, left, right }) => {
                View::Conn(*op, Item::T(left), Item::T(right))
            }
            Item::T(PrefixTree::Quant {
                kind,
                var,
                slash,
                child,
            }) => View::Quant(*kind, var, slash, Item::T(child)),
        }
    }

    fn write(self, out: &mut String) {
        match self.view() {
            View::Leaf(s) => out.push_str(&s),
            View::Neg(g) => {
                out.push_str("~(");
                Item::F(g).write(out);
                out.push(')');
            }
            View::Quant(kind, var, slash, body) => {
                if slash.is_empty() {
                    out.push_str(&format!("{} {} ", kind.symbol(), var));
                } else {
                    let s: Vec<&str> = slash.iter().map(String::as_str).collect();
                    out.push_str(&format!("({} {}/{{{}}}) ", kind.symbol(), var, s.join(",")));
                }
                let wrap = matches!(body.view(), View::Conn(..));
                paren(out, wrap, body);
            }
            View::Conn(op, l, r) => {
                let wrap_l = match l.view() {
                    View::Quant(..) => true,
                    View::Conn(c, ..) => c == Connective::Or && op == Connective::And,
                    _ => false,
                };
                let wrap_r = match r.view() {
                    View::Quant(..) => true,
                    View::Conn(c, ..) => c == op || c == Connective::Or,
                    _ => false,
                };
                paren(out, wrap_l, l);
                out.push_str(&format!(" {} ", op.symbol()));
                paren(out, wrap_r, r);
            }
        }
    }
}

fn paren(out: &mut String, wrap: bool, item: Item<'_>) {
    if wrap {
        out.push('(');
    }
    item.write(out);
    if wrap {
        out.push(')');
    }
}

pub fn render_formula(f: &Formula) -> String {
    let mut s = String::new();
    Item::F(f).write(&mut s);
    s
}

pub fn render_tree(t: &PrefixTree) -> String {
    let mut s = String::new();
    Item::T(t).write(&mut s);
    s
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_formula(self))
    }
}

impl fmt::Display for PrefixTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_tree(self))
    }
}
