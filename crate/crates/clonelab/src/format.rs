//! Text literals for relations.
//!
//! ```text
//! rel  k=1 sorts=[1,1] {01,10}
//! disj k=2 sorts=[1,2] : x1=0 | x2=1
//! ```
//!
//! In a `rel` literal, character `i` of a bit string binds variable `i`. In
//! a `disj` literal a clause is `term(+term)*=bit` with `term` either `x<n>`
//! (1-based) or a bit. Whitespace is free between tokens. Two extensions
//! keep printing total: `{}` is the empty relation and a `disj` literal may
//! have no clauses (also the empty relation).

use clonelab_core::gf2::{DisjunctiveForm, LinearEquation};
use clonelab_core::relation::MAX_ARITY;
use clonelab_core::{Relation, Table};
use std::fmt::Write;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

/// A parsed literal; `disj` literals keep their clauses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Literal {
    Rel(Relation),
    Disj(DisjunctiveForm),
}

impl Literal {
    pub fn relation(&self) -> Relation {
        match self {
            Literal::Rel(r) => r.clone(),
            Literal::Disj(f) => f.materialize(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Word(String),
    Digits(String),
    Sym(char),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1, 1);
    while let Some(&c) = chars.peek() {
        let (l0, c0) = (line, col);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next().expect("peeked");
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        if c.is_whitespace() {
            bump(&mut chars);
        } else if c.is_ascii_alphabetic() {
            let mut s = String::new();
            while chars.peek().is_some_and(|c| c.is_ascii_alphanumeric()) {
                s.push(bump(&mut chars));
            }
            out.push(Token { tok: Tok::Word(s), line: l0, col: c0 });
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while chars.peek().is_some_and(|c| c.is_ascii_digit()) {
                s.push(bump(&mut chars));
            }
            out.push(Token { tok: Tok::Digits(s), line: l0, col: c0 });
        } else if "=[]{},:|+".contains(c) {
            bump(&mut chars);
            out.push(Token { tok: Tok::Sym(c), line: l0, col: c0 });
        } else {
            return Err(ParseError { line: l0, col: c0, msg: format!("unexpected character {c:?}") });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn err<T>(&self, at: Option<&Token>, msg: impl Into<String>) -> Result<T, ParseError> {
        let (line, col) = at.map_or(self.end, |t| (t.line, t.col));
        Err(ParseError { line, col, msg: msg.into() })
    }

    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn sym(&mut self, c: char) -> Result<Token, ParseError> {
        match self.next() {
            Some(t) if t.tok == Tok::Sym(c) => Ok(t),
            other => self.err(other.as_ref(), format!("expected '{c}'")),
        }
    }

    fn word(&mut self, w: &str) -> Result<Token, ParseError> {
        match self.next() {
            Some(t) if t.tok == Tok::Word(w.into()) => Ok(t),
            other => self.err(other.as_ref(), format!("expected '{w}'")),
        }
    }

    fn int(&mut self) -> Result<(usize, Token), ParseError> {
        match self.next() {
            Some(t) => match &t.tok {
                Tok::Digits(d) => match d.parse() {
                    Ok(v) => Ok((v, t)),
                    Err(_) => self.err(Some(&t), "integer too large"),
                },
                _ => self.err(Some(&t), "expected an integer"),
            },
            None => self.err(None, "expected an integer"),
        }
    }

    fn header(&mut self) -> Result<(usize, Vec<u8>), ParseError> {
        self.word("k")?;
        self.sym('=')?;
        let (k, kt) = self.int()?;
        if k == 0 || k > 255 {
            return self.err(Some(&kt), "k must be in 1..=255");
        }
        self.word("sorts")?;
        self.sym('=')?;
        self.sym('[')?;
        let mut sorts = Vec::new();
        if self.peek().map(|t| &t.tok) != Some(&Tok::Sym(']')) {
            loop {
                let (s, st) = self.int()?;
                if s == 0 || s > k {
                    return self.err(Some(&st), format!("sort index {s} outside 1..={k}"));
                }
                sorts.push(s as u8);
                match self.next() {
                    Some(t) if t.tok == Tok::Sym(',') => continue,
                    Some(t) if t.tok == Tok::Sym(']') => break,
                    other => return self.err(other.as_ref(), "expected ',' or ']'"),
                }
            }
        } else {
            self.next();
        }
        if sorts.len() > MAX_ARITY {
            return self.err(None, format!("arity {} exceeds {MAX_ARITY}", sorts.len()));
        }
        Ok((k, sorts))
    }

    fn rel(&mut self) -> Result<Literal, ParseError> {
        let (k, sorts) = self.header()?;
        let n = sorts.len();
        self.sym('{')?;
        let mut table = Table::empty(n);
        if self.peek().map(|t| &t.tok) == Some(&Tok::Sym('}')) {
            self.next();
        } else {
            loop {
                let t = self.next();
                let Some(t) = t else { return self.err(None, "expected a bit string") };
                let Tok::Digits(bits) = &t.tok else { return self.err(Some(&t), "expected a bit string") };
                if bits.chars().any(|c| c != '0' && c != '1') {
                    return self.err(Some(&t), format!("bad tuple {bits:?}: only 0 and 1 allowed"));
                }
                if bits.len() != n {
                    return self.err(Some(&t), format!("tuple {bits:?} has length {}, expected {n}", bits.len()));
                }
                let idx = bits.bytes().fold(0usize, |a, b| (a << 1) | (b - b'0') as usize);
                table.set(idx, true);
                match self.next() {
                    Some(t) if t.tok == Tok::Sym(',') => continue,
                    Some(t) if t.tok == Tok::Sym('}') => break,
                    other => return self.err(other.as_ref(), "expected ',' or '}'"),
                }
            }
        }
        Ok(Literal::Rel(Relation::from_table(k, &sorts, table).expect("header validated")))
    }

    fn term(&mut self, n: usize) -> Result<(u64, bool), ParseError> {
        let t = self.next();
        let Some(t) = t else { return self.err(None, "expected a term") };
        match &t.tok {
            Tok::Digits(d) if d == "0" || d == "1" => Ok((0, d == "1")),
            Tok::Word(w) if w.starts_with('x') && w.len() > 1 && w[1..].bytes().all(|b| b.is_ascii_digit()) => {
                let v: usize = w[1..].parse().unwrap_or(usize::MAX);
                if v == 0 || v > n {
                    return self.err(Some(&t), format!("variable x{} outside x1..x{n}", &w[1..]));
                }
                Ok((1 << (v - 1), false))
            }
            _ => self.err(Some(&t), "expected x<n> or a bit"),
        }
    }

    fn clause(&mut self, n: usize) -> Result<LinearEquation, ParseError> {
        let (mut coeffs, mut rhs) = self.term(n)?;
        while self.peek().map(|t| &t.tok) == Some(&Tok::Sym('+')) {
            self.next();
            let (c, b) = self.term(n)?;
            coeffs ^= c;
            rhs ^= b;
        }
        self.sym('=')?;
        let t = self.next();
        match t.as_ref().map(|t| &t.tok) {
            Some(Tok::Digits(d)) if d == "0" || d == "1" => rhs ^= d == "1",
            _ => return self.err(t.as_ref(), "expected 0 or 1"),
        }
        let vars: Vec<usize> = (0..n).filter(|j| (coeffs >> j) & 1 == 1).collect();
        Ok(LinearEquation::new(n, &vars, rhs))
    }

    fn disj(&mut self) -> Result<Literal, ParseError> {
        let (k, sorts) = self.header()?;
        let n = sorts.len();
        self.sym(':')?;
        let mut clauses = Vec::new();
        let starts_clause = |t: Option<&Token>| match t.map(|t| &t.tok) {
            Some(Tok::Word(w)) => w != "rel" && w != "disj",
            Some(Tok::Digits(_)) => true,
            _ => false,
        };
        if starts_clause(self.peek()) {
            clauses.push(self.clause(n)?);
            while self.peek().map(|t| &t.tok) == Some(&Tok::Sym('|')) {
                self.next();
                clauses.push(self.clause(n)?);
            }
        }
        let form = DisjunctiveForm::new(k, &sorts, clauses).expect("header validated");
        Ok(Literal::Disj(form))
    }

    fn literal(&mut self) -> Result<Literal, ParseError> {
        let t = self.next();
        match t.as_ref().map(|t| &t.tok) {
            Some(Tok::Word(w)) if w == "rel" => self.rel(),
            Some(Tok::Word(w)) if w == "disj" => self.disj(),
            _ => self.err(t.as_ref(), "expected 'rel' or 'disj'"),
        }
    }
}

fn end_of(text: &str) -> (usize, usize) {
    let line = text.matches('\n').count() + 1;
    let col = text.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

/// All literals in `text`, in order.
pub fn parse_literals(text: &str) -> Result<Vec<Literal>, ParseError> {
    let mut p = Parser { toks: lex(text)?, pos: 0, end: end_of(text) };
    let mut out = Vec::new();
    while p.peek().is_some() {
        out.push(p.literal()?);
    }
    Ok(out)
}

/// Exactly one literal.
pub fn parse_relation(text: &str) -> Result<Literal, ParseError> {
    let mut v = parse_literals(text)?;
    match v.len() {
        1 => Ok(v.pop().expect("one")),
        0 => Err(ParseError { line: 1, col: 1, msg: "no literal found".into() }),
        _ => {
            let (line, col) = end_of(text);
            Err(ParseError { line, col, msg: "expected a single literal".into() })
        }
    }
}

fn header(k: usize, sorts: &[u8]) -> String {
    let s: Vec<String> = sorts.iter().map(|s| s.to_string()).collect();
    format!("k={k} sorts=[{}]", s.join(","))
}

/// `rel` literal with tuples in increasing order.
pub fn print_relation(rel: &Relation) -> String {
    let n = rel.arity();
    let tuples: Vec<String> = rel
        .table()
        .ones()
        .map(|i| (0..n).map(|j| if (i >> (n - 1 - j)) & 1 == 1 { '1' } else { '0' }).collect())
        .collect();
    if n == 0 && !tuples.is_empty() {
        // an empty bit string cannot be written; use the clause 0=0
        return format!("disj {} : 0=0", header(rel.k(), rel.sorts()));
    }
    format!("rel {} {{{}}}", header(rel.k(), rel.sorts()), tuples.join(","))
}

pub fn print_clause(c: &LinearEquation) -> String {
    let mut s = String::new();
    let vars: Vec<usize> = c.vars().collect();
    if vars.is_empty() {
        s.push('0');
    }
    for (i, v) in vars.iter().enumerate() {
        let _ = write!(s, "{}x{}", if i > 0 { "+" } else { "" }, v + 1);
    }
    let _ = write!(s, "={}", c.rhs as u8);
    s
}

/// `disj` literal with the clauses in stored order.
pub fn print_form(f: &DisjunctiveForm) -> String {
    let clauses: Vec<String> = f.clauses().iter().map(print_clause).collect();
    let body = if clauses.is_empty() { String::new() } else { format!(" {}", clauses.join(" | ")) };
    format!("disj {} :{body}", header(f.k(), f.sorts()))
}

pub fn print_literal(l: &Literal) -> String {
    match l {
        Literal::Rel(r) => print_relation(r),
        Literal::Disj(f) => print_form(f),
    }
}
