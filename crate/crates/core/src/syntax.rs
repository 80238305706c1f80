//! Formulas, sorted sequents and hypersequents.
//!
//! The kernel formula type has exactly five constructors. Disjunction,
//! implication and possibility are parser sugar and are expanded on input:
//! `A | B` is `~(~A & ~B)`, `A > B` is `~(A & ~B)` and `dia A` is `~box ~A`.
//! The printer folds those shapes back, so `parse_formula(&f.to_string())`
//! is the identity.

use std::fmt;

use thiserror::Error;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Formula {
    Bot,
    Atom(String),
    Neg(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Box(Box<Formula>),
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(name.to_string())
    }

    pub fn neg(a: Formula) -> Formula {
        Formula::Neg(Box::new(a))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn boxed(a: Formula) -> Formula {
        Formula::Box(Box::new(a))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::neg(Formula::and(Formula::neg(a), Formula::neg(b)))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::neg(Formula::and(a, Formula::neg(b)))
    }

    pub fn dia(a: Formula) -> Formula {
        Formula::neg(Formula::boxed(Formula::neg(a)))
    }

    pub fn top() -> Formula {
        Formula::neg(Formula::Bot)
    }

    /// Number of `~`, `&` and `box` nodes.
    pub fn degree(&self) -> usize {
        match self {
            Formula::Bot | Formula::Atom(_) => 0,
            Formula::Neg(a) | Formula::Box(a) => 1 + a.degree(),
            Formula::And(a, b) => 1 + a.degree() + b.degree(),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::Bot | Formula::Atom(_) => 1,
            Formula::Neg(a) | Formula::Box(a) => 1 + a.size(),
            Formula::And(a, b) => 1 + a.size() + b.size(),
        }
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Formula::Bot | Formula::Atom(_))
    }

    pub fn is_boxed(&self) -> bool {
        matches!(self, Formula::Box(_))
    }

    /// The body of a boxed formula.
    pub fn unbox(&self) -> Option<&Formula> {
        match self {
            Formula::Box(a) => Some(a),
            _ => None,
        }
    }

    /// Atom names in first-occurrence order.
    pub fn atoms(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut Vec<String>) {
        match self {
            Formula::Bot => {}
            Formula::Atom(p) => {
                if !out.contains(p) {
                    out.push(p.clone());
                }
            }
            Formula::Neg(a) | Formula::Box(a) => a.collect_atoms(out),
            Formula::And(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// `⋀∅ = ¬⊥`, otherwise a left-nested conjunction.
    pub fn conj(fs: &[Formula]) -> Formula {
        match fs.split_first() {
            None => Formula::top(),
            Some((first, rest)) => rest
                .iter()
                .fold(first.clone(), |acc, f| Formula::and(acc, f.clone())),
        }
    }

    /// `⋁∅ = ⊥`, otherwise a left-nested disjunction.
    pub fn disj(fs: &[Formula]) -> Formula {
        match fs.split_first() {
            None => Formula::Bot,
            Some((first, rest)) => rest
                .iter()
                .fold(first.clone(), |acc, f| Formula::or(acc, f.clone())),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Sort {
    /// `⇒`, read under one necessity operator.
    Modal,
    /// `→`, the ordinary sequent arrow.
    Plain,
}

impl Sort {
    pub fn arrow(self) -> &'static str {
        match self {
            Sort::Modal => "=>",
            Sort::Plain => "->",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Sequent {
    pub sort: Sort,
    pub ante: Vec<Formula>,
    pub succ: Vec<Formula>,
}

#[derive(Debug, Error, PartialEq, Eq, Clone)]
#[error("sort mismatch: cannot concatenate {0:?} with {1:?} sequent")]
pub struct SortMismatch(pub Sort, pub Sort);

impl Sequent {
    pub fn new(sort: Sort, ante: Vec<Formula>, succ: Vec<Formula>) -> Sequent {
        Sequent { sort, ante, succ }
    }

    pub fn plain(ante: Vec<Formula>, succ: Vec<Formula>) -> Sequent {
        Sequent::new(Sort::Plain, ante, succ)
    }

    pub fn modal(ante: Vec<Formula>, succ: Vec<Formula>) -> Sequent {
        Sequent::new(Sort::Modal, ante, succ)
    }

    pub fn empty(sort: Sort) -> Sequent {
        Sequent::new(sort, vec![], vec![])
    }

    pub fn is_empty(&self) -> bool {
        self.ante.is_empty() && self.succ.is_empty()
    }

    pub fn side(&self, side: Side) -> &Vec<Formula> {
        match side {
            Side::Left => &self.ante,
            Side::Right => &self.succ,
        }
    }

    pub fn side_mut(&mut self, side: Side) -> &mut Vec<Formula> {
        match side {
            Side::Left => &mut self.ante,
            Side::Right => &mut self.succ,
        }
    }

    pub fn with_sort(&self, sort: Sort) -> Sequent {
        Sequent::new(sort, self.ante.clone(), self.succ.clone())
    }

    /// Both sides sorted, for multiset comparison.
    pub fn canonical(&self) -> Sequent {
        let mut s = self.clone();
        s.ante.sort();
        s.succ.sort();
        s
    }

    pub fn same(&self, other: &Sequent) -> bool {
        self.sort == other.sort
            && self.ante.len() == other.ante.len()
            && self.succ.len() == other.succ.len()
            && self.canonical() == other.canonical()
    }

    /// Is this `A ≫ A` or `⊥ ≫`?
    pub fn is_initial_shape(&self) -> bool {
        match (self.ante.as_slice(), self.succ.as_slice()) {
            ([a], [b]) => a == b,
            ([Formula::Bot], []) => true,
            _ => false,
        }
    }

    pub fn image(&self) -> Formula {
        formula_image(self)
    }

    pub fn concat(&self, other: &Sequent) -> Result<Sequent, SortMismatch> {
        concat_sequents(self, other)
    }

    pub fn size(&self) -> usize {
        self.ante.iter().chain(&self.succ).map(Formula::size).sum()
    }
}

/// Ordered list of sequents; rule addressing uses positions, while
/// semantic comparison ignores order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Hypersequent(pub Vec<Sequent>);

impl Hypersequent {
    pub fn new(seqs: Vec<Sequent>) -> Hypersequent {
        Hypersequent(seqs)
    }

    pub fn single(s: Sequent) -> Hypersequent {
        Hypersequent(vec![s])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn seqs(&self) -> &[Sequent] {
        &self.0
    }

    pub fn canonical(&self) -> Vec<Sequent> {
        let mut v: Vec<Sequent> = self.0.iter().map(Sequent::canonical).collect();
        v.sort();
        v
    }

    /// Equality up to permutation of sequents and of formulas inside them.
    pub fn equiv(&self, other: &Hypersequent) -> bool {
        self.len() == other.len() && self.canonical() == other.canonical()
    }

    pub fn image(&self) -> Formula {
        hyper_image(self)
    }

    pub fn concat_all(&self) -> Result<Sequent, SortMismatch> {
        concat_hyper(self)
    }

    pub fn push(&mut self, s: Sequent) {
        self.0.push(s);
    }

    pub fn extend(&mut self, other: &Hypersequent) {
        self.0.extend(other.0.iter().cloned());
    }

    pub fn all_sort(&self, sort: Sort) -> bool {
        self.0.iter().all(|s| s.sort == sort)
    }

    pub fn size(&self) -> usize {
        self.0.iter().map(|s| s.size() + 1).sum()
    }

    pub fn atoms(&self) -> Vec<String> {
        self.image().atoms()
    }
}

pub fn formula_image(s: &Sequent) -> Formula {
    let body = Formula::implies(Formula::conj(&s.ante), Formula::disj(&s.succ));
    match s.sort {
        Sort::Modal => Formula::boxed(body),
        Sort::Plain => body,
    }
}

pub fn hyper_image(h: &Hypersequent) -> Formula {
    let images: Vec<Formula> = h.0.iter().map(formula_image).collect();
    Formula::disj(&images)
}

pub fn concat_sequents(a: &Sequent, b: &Sequent) -> Result<Sequent, SortMismatch> {
    if a.sort != b.sort {
        return Err(SortMismatch(a.sort, b.sort));
    }
    let mut ante = a.ante.clone();
    ante.extend(b.ante.iter().cloned());
    let mut succ = a.succ.clone();
    succ.extend(b.succ.iter().cloned());
    Ok(Sequent::new(a.sort, ante, succ))
}

pub fn concat_hyper(h: &Hypersequent) -> Result<Sequent, SortMismatch> {
    let (first, rest) = h
        .0
        .split_first()
        .expect("concatenation of an empty hypersequent");
    rest.iter()
        .try_fold(first.clone(), |acc, s| concat_sequents(&acc, s))
}

// ---------------------------------------------------------------------------
// Printing

const PREC_IMP: u8 = 1;
const PREC_OR: u8 = 2;
const PREC_AND: u8 = 3;

enum View<'a> {
    Imp(&'a Formula, &'a Formula),
    Or(&'a Formula, &'a Formula),
    Dia(&'a Formula),
    Prim,
}

fn view(f: &Formula) -> View<'_> {
    if let Formula::Neg(inner) = f {
        match inner.as_ref() {
            Formula::And(a, nb) => {
                if let Formula::Neg(b) = nb.as_ref() {
                    if let Formula::Neg(a1) = a.as_ref() {
                        if **a1 != Formula::Bot {
                            return View::Or(a1, b);
                        }
                    }
                    return View::Imp(a, b);
                }
            }
            Formula::Box(b) => {
                if let Formula::Neg(a) = b.as_ref() {
                    return View::Dia(a);
                }
            }
            _ => {}
        }
    }
    View::Prim
}

fn binary_prec(f: &Formula) -> Option<u8> {
    match view(f) {
        View::Imp(..) => Some(PREC_IMP),
        View::Or(..) => Some(PREC_OR),
        View::Dia(_) => None,
        View::Prim => match f {
            Formula::And(..) => Some(PREC_AND),
            _ => None,
        },
    }
}

fn write_operand(f: &Formula, out: &mut String) {
    if binary_prec(f).is_some() {
        out.push('(');
        write_formula(f, out);
        out.push(')');
    } else {
        write_formula(f, out);
    }
}

fn write_prefix(op: &str, child: &Formula, out: &mut String) {
    out.push_str(op);
    if binary_prec(child).is_some() {
        out.push('(');
        write_formula(child, out);
        out.push(')');
    } else {
        if op != "~" {
            out.push(' ');
        }
        write_formula(child, out);
    }
}

fn write_formula(f: &Formula, out: &mut String) {
    match view(f) {
        View::Imp(a, b) => {
            write_operand(a, out);
            out.push_str(" > ");
            write_operand(b, out);
        }
        View::Or(a, b) => {
            write_operand(a, out);
            out.push_str(" | ");
            write_operand(b, out);
        }
        View::Dia(a) => write_prefix("dia", a, out),
        View::Prim => match f {
            Formula::Bot => out.push_str("bot"),
            Formula::Atom(p) => out.push_str(p),
            Formula::Neg(a) => write_prefix("~", a, out),
            Formula::Box(a) => write_prefix("box", a, out),
            Formula::And(a, b) => {
                write_operand(a, out);
                out.push_str(" & ");
                write_operand(b, out);
            }
        },
    }
}

pub fn print_formula(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(f, &mut out);
    out
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_formula(self))
    }
}

fn join(fs: &[Formula]) -> String {
    fs.iter()
        .map(print_formula)
        .collect::<Vec<_>>()
        .join(", ")
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = join(&self.ante);
        let r = join(&self.succ);
        let arrow = self.sort.arrow();
        match (l.is_empty(), r.is_empty()) {
            (true, true) => write!(f, "{arrow}"),
            (true, false) => write!(f, "{arrow} {r}"),
            (false, true) => write!(f, "{l} {arrow}"),
            (false, false) => write!(f, "{l} {arrow} {r}"),
        }
    }
}

impl fmt::Display for Hypersequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|s| s.to_string()).collect();
        f.write_str(&parts.join(" || "))
    }
}

// ---------------------------------------------------------------------------
// Parsing

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("parse error at {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Bot,
    Ident(String),
    Not,
    BoxOp,
    Dia,
    And,
    Or,
    Imp,
    LParen,
    RParen,
    Comma,
    Arrow(Sort),
    Bar2,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let at = |k: usize| chars.get(k).map(|c| c.1);
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            '~' | '¬' => Tok::Not,
            '&' | '∧' => Tok::And,
            '∨' => Tok::Or,
            '⊃' | '>' => Tok::Imp,
            '□' => Tok::BoxOp,
            '◇' => Tok::Dia,
            '⊥' => Tok::Bot,
            '⇒' => Tok::Arrow(Sort::Modal),
            '→' => Tok::Arrow(Sort::Plain),
            '|' => {
                if at(i + 1) == Some('|') {
                    i += 1;
                    Tok::Bar2
                } else {
                    Tok::Or
                }
            }
            '=' if at(i + 1) == Some('>') => {
                i += 1;
                Tok::Arrow(Sort::Modal)
            }
            '-' if at(i + 1) == Some('>') => {
                i += 1;
                Tok::Arrow(Sort::Plain)
            }
            '<' if at(i + 1) == Some('>') => {
                i += 1;
                Tok::Dia
            }
            c if c.is_ascii_alphanumeric() || c == '_' => {
                let mut j = i;
                let mut name = String::new();
                while let Some(d) = at(j) {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        name.push(d);
                        j += 1;
                    } else {
                        break;
                    }
                }
                i = j - 1;
                match name.as_str() {
                    "bot" => Tok::Bot,
                    "box" => Tok::BoxOp,
                    "dia" => Tok::Dia,
                    _ => Tok::Ident(name),
                }
            }
            other => {
                return Err(ParseError {
                    pos,
                    msg: format!("unexpected character {other:?}"),
                })
            }
        };
        out.push((pos, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    i: usize,
    end: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Parser, ParseError> {
        Ok(Parser {
            toks: lex(text)?,
            i: 0,
            end: text.len(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|t| &t.1)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.i).map(|t| t.0).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        if self.i < self.toks.len() {
            self.err("trailing input")
        } else {
            Ok(())
        }
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if self.eat(&Tok::Imp) {
            let rhs = self.imp()?;
            Ok(Formula::implies(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while self.eat(&Tok::Or) {
            let rhs = self.and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.eat(&Tok::And) {
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Not) => {
                self.i += 1;
                Ok(Formula::neg(self.unary()?))
            }
            Some(Tok::BoxOp) => {
                self.i += 1;
                Ok(Formula::boxed(self.unary()?))
            }
            Some(Tok::Dia) => {
                self.i += 1;
                Ok(Formula::dia(self.unary()?))
            }
            Some(Tok::Bot) => {
                self.i += 1;
                Ok(Formula::Bot)
            }
            Some(Tok::Ident(name)) => {
                self.i += 1;
                Ok(Formula::Atom(name))
            }
            Some(Tok::LParen) => {
                self.i += 1;
                let f = self.imp()?;
                if !self.eat(&Tok::RParen) {
                    return self.err("expected ')'");
                }
                Ok(f)
            }
            Some(t) => self.err(format!("unexpected token {t:?}")),
            None => self.err("unexpected end of input"),
        }
    }

    fn formula_list(&mut self) -> Result<Vec<Formula>, ParseError> {
        let mut out = Vec::new();
        match self.peek() {
            None | Some(Tok::Arrow(_)) | Some(Tok::Bar2) => return Ok(out),
            _ => {}
        }
        out.push(self.imp()?);
        while self.eat(&Tok::Comma) {
            out.push(self.imp()?);
        }
        Ok(out)
    }

    fn sequent(&mut self) -> Result<Sequent, ParseError> {
        let ante = self.formula_list()?;
        let sort = match self.peek() {
            Some(Tok::Arrow(s)) => *s,
            _ => return self.err("expected '=>' or '->'"),
        };
        self.i += 1;
        let succ = self.formula_list()?;
        Ok(Sequent::new(sort, ante, succ))
    }

    fn hypersequent(&mut self) -> Result<Hypersequent, ParseError> {
        let mut seqs = vec![self.sequent()?];
        while self.eat(&Tok::Bar2) {
            seqs.push(self.sequent()?);
        }
        Ok(Hypersequent(seqs))
    }
}

pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text)?;
    let f = p.imp()?;
    p.finish()?;
    Ok(f)
}

pub fn parse_sequent(text: &str) -> Result<Sequent, ParseError> {
    let mut p = Parser::new(text)?;
    let s = p.sequent()?;
    p.finish()?;
    Ok(s)
}

pub fn parse_hypersequent(text: &str) -> Result<Hypersequent, ParseError> {
    let mut p = Parser::new(text)?;
    let h = p.hypersequent()?;
    p.finish()?;
    Ok(h)
}

/// Shorthand for tests and builders; panics on malformed input.
pub fn f(text: &str) -> Formula {
    parse_formula(text).unwrap_or_else(|e| panic!("{text:?}: {e}"))
}

/// Shorthand for tests and builders; panics on malformed input.
pub fn hs(text: &str) -> Hypersequent {
    parse_hypersequent(text).unwrap_or_else(|e| panic!("{text:?}: {e}"))
}

/// Shorthand for tests and builders; panics on malformed input.
pub fn sq(text: &str) -> Sequent {
    parse_sequent(text).unwrap_or_else(|e| panic!("{text:?}: {e}"))
}
