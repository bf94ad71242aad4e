//! A small language for statistics and predicates on orbit states.
//!
//! Statistics are rational linear combinations of atoms:
//!
//! * `chi(x)` and `chi(x,a)`: membership of `x` (or `(x,a)`) in an ideal, or
//!   `f(x) >= a` for a P-partition,
//! * `F(i)`: `chi(l,i)+chi(r,i)+chi(c,i-1)` on the `V` family,
//! * `B(i)`: `chi(0hat,i-1)` plus `chi(b,i)` over all leaves of a claw,
//! * `f(i)` and `eta(j)`: value at `i` and size of the preimage of `j` for
//!   one-line functions.
//!
//! Predicates compare statistics with `== != < <= > >=` and combine the
//! results with `&&`, `||` and `!`. Division is only by nonzero integer
//! literals, and products need a constant factor, so every statistic stays
//! linear in its atoms.

use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::functions::OneLineFunction;
use crate::ideal::OrderIdeal;
use crate::poset::Poset;
use crate::whirl::PPartition;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    LParen,
    RParen,
    Comma,
    Plus,
    Minus,
    Star,
    Slash,
    Cmp(CmpOp),
    And,
    Or,
    Not,
    End,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    fn apply(self, a: &BigRational, b: &BigRational) -> bool {
        match self {
            CmpOp::Eq => a == b,
            CmpOp::Ne => a != b,
            CmpOp::Lt => a < b,
            CmpOp::Le => a <= b,
            CmpOp::Gt => a > b,
            CmpOp::Ge => a >= b,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Pos {
    line: usize,
    column: usize,
}

fn ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || ('\u{300}'..='\u{36f}').contains(&c)
}

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut col) = (1, 1);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, column: col };
        let next = chars.get(i + 1).copied();
        let mut width = 1;
        let tok = match c {
            '\n' => {
                line += 1;
                col = 1;
                i += 1;
                continue;
            }
            c if c.is_whitespace() => {
                col += 1;
                i += 1;
                continue;
            }
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            '+' => Tok::Plus,
            '-' | '−' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '=' if next == Some('=') => {
                width = 2;
                Tok::Cmp(CmpOp::Eq)
            }
            '!' if next == Some('=') => {
                width = 2;
                Tok::Cmp(CmpOp::Ne)
            }
            '!' => Tok::Not,
            '<' if next == Some('=') => {
                width = 2;
                Tok::Cmp(CmpOp::Le)
            }
            '<' => Tok::Cmp(CmpOp::Lt),
            '>' if next == Some('=') => {
                width = 2;
                Tok::Cmp(CmpOp::Ge)
            }
            '>' => Tok::Cmp(CmpOp::Gt),
            '&' if next == Some('&') => {
                width = 2;
                Tok::And
            }
            '|' if next == Some('|') => {
                width = 2;
                Tok::Or
            }
            c if ident_char(c) => {
                let start = i;
                while i + width < chars.len() && ident_char(chars[i + width]) {
                    width += 1;
                }
                let word: String = chars[start..start + width].iter().collect();
                if word.chars().all(|d| d.is_ascii_digit()) {
                    Tok::Num(word.parse().expect("digit string"))
                } else {
                    Tok::Ident(word)
                }
            }
            other => {
                return Err(Error::parse(line, col, format!("unexpected character {other:?}")));
            }
        };
        out.push((tok, pos));
        i += width;
        col += width;
    }
    out.push((Tok::End, Pos { line, column: col }));
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
struct AtomRef {
    head: String,
    args: Vec<String>,
    pos: Pos,
}

#[derive(Clone, Debug, PartialEq)]
enum Node {
    Num(BigRational),
    Atom(AtomRef),
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>, Pos),
    Div(Box<Node>, BigInt),
    Cmp(Box<Node>, CmpOp, Box<Node>),
    And(Box<Node>, Box<Node>),
    Or(Box<Node>, Box<Node>),
    Not(Box<Node>),
}

impl Node {
    fn is_bool(&self) -> bool {
        matches!(self, Node::Cmp(..) | Node::And(..) | Node::Or(..) | Node::Not(..))
    }
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn fail<T>(&self, message: impl Into<String>) -> Result<T> {
        let p = self.pos();
        Err(Error::parse(p.line, p.column, message))
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.fail(format!("expected {what}"))
        }
    }

    fn or(&mut self) -> Result<Node> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Or {
            self.bump();
            lhs = Node::Or(Box::new(lhs), Box::new(self.and()?));
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Node> {
        let mut lhs = self.not()?;
        while *self.peek() == Tok::And {
            self.bump();
            lhs = Node::And(Box::new(lhs), Box::new(self.not()?));
        }
        Ok(lhs)
    }

    fn not(&mut self) -> Result<Node> {
        if *self.peek() == Tok::Not {
            self.bump();
            return Ok(Node::Not(Box::new(self.not()?)));
        }
        self.cmp()
    }

    fn cmp(&mut self) -> Result<Node> {
        let lhs = self.sum()?;
        if let Tok::Cmp(op) = *self.peek() {
            self.bump();
            let rhs = self.sum()?;
            return Ok(Node::Cmp(Box::new(lhs), op, Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn sum(&mut self) -> Result<Node> {
        let mut lhs = self.product()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Node::Add(Box::new(lhs), Box::new(self.product()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Node::Sub(Box::new(lhs), Box::new(self.product()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn product(&mut self) -> Result<Node> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    let pos = self.pos();
                    self.bump();
                    lhs = Node::Mul(Box::new(lhs), Box::new(self.unary()?), pos);
                }
                Tok::Slash => {
                    self.bump();
                    let pos = self.pos();
                    match self.bump() {
                        Tok::Num(n) if !n.is_zero() => lhs = Node::Div(Box::new(lhs), n),
                        Tok::Num(_) => return Err(err_at(pos, "division by zero")),
                        _ => {
                            return Err(err_at(
                                pos,
                                "division is only by a nonzero integer literal",
                            ))
                        }
                    }
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Node> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Node> {
        let pos = self.pos();
        match self.bump() {
            Tok::Num(n) => Ok(Node::Num(BigRational::from_integer(n))),
            Tok::LParen => {
                let inner = self.or()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            Tok::Ident(head) => {
                self.expect(Tok::LParen, &format!("'(' after {head}"))?;
                let mut args = Vec::new();
                loop {
                    let arg_pos = self.pos();
                    match self.bump() {
                        Tok::Ident(s) => args.push(s),
                        Tok::Num(n) => args.push(n.to_string()),
                        _ => return Err(err_at(arg_pos, "expected an element name or integer")),
                    }
                    let sep_pos = self.pos();
                    match self.bump() {
                        Tok::Comma => continue,
                        Tok::RParen => break,
                        _ => return Err(err_at(sep_pos, "expected ',' or ')'")),
                    }
                }
                Ok(Node::Atom(AtomRef { head, args, pos }))
            }
            Tok::End => Err(err_at(pos, "unexpected end of input")),
            _ => Err(err_at(pos, "expected a number, an atom or '('")),
        }
    }
}

fn parse_node(text: &str) -> Result<Node> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
    };
    let node = p.or()?;
    if *p.peek() != Tok::End {
        return p.fail("unexpected trailing input");
    }
    Ok(node)
}

/// A resolved atom; its meaning depends on the state type.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BoundAtom {
    /// Element index lies in an order ideal.
    Contains(usize),
    /// A P-partition has `f(x) >= a`, with `1 <= a <= k`.
    AtLeast { x: usize, a: u32 },
    /// Value of a one-line function at a 0-based position.
    Value(usize),
    /// Preimage size of a value of a one-line function.
    Preimage(u32),
}

/// States a statistic can observe.
pub trait Observable {
    fn observe(&self, atom: &BoundAtom) -> i64;
}

impl Observable for OrderIdeal {
    fn observe(&self, atom: &BoundAtom) -> i64 {
        match *atom {
            BoundAtom::Contains(x) => self.contains(x) as i64,
            _ => 0,
        }
    }
}

impl Observable for PPartition {
    fn observe(&self, atom: &BoundAtom) -> i64 {
        match *atom {
            BoundAtom::AtLeast { x, a } => (self.label(x) >= a) as i64,
            _ => 0,
        }
    }
}

impl Observable for OneLineFunction {
    fn observe(&self, atom: &BoundAtom) -> i64 {
        match *atom {
            BoundAtom::Value(i) => self.values()[i] as i64,
            BoundAtom::Preimage(j) => self.preimage_size(j) as i64,
            _ => 0,
        }
    }
}

/// `constant + sum coeff * atom`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Linear {
    constant: BigRational,
    terms: BTreeMap<BoundAtom, BigRational>,
}

impl Linear {
    pub fn constant(c: BigRational) -> Self {
        Linear {
            constant: c,
            terms: BTreeMap::new(),
        }
    }

    pub fn atom(a: BoundAtom) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(a, BigRational::one());
        Linear {
            constant: BigRational::zero(),
            terms,
        }
    }

    fn from_int(v: i64) -> Self {
        Self::constant(BigRational::from_integer(v.into()))
    }

    fn is_constant(&self) -> bool {
        self.terms.is_empty()
    }

    fn add(mut self, other: Linear, sign: i64) -> Self {
        let s = BigRational::from_integer(sign.into());
        self.constant += &other.constant * &s;
        for (a, c) in other.terms {
            let e = self.terms.entry(a).or_insert_with(BigRational::zero);
            *e += c * &s;
        }
        self.terms.retain(|_, c| !c.is_zero());
        self
    }

    fn scale(mut self, by: &BigRational) -> Self {
        self.constant *= by;
        for c in self.terms.values_mut() {
            *c *= by;
        }
        self.terms.retain(|_, c| !c.is_zero());
        self
    }

    pub fn eval<S: Observable>(&self, state: &S) -> BigRational {
        let mut acc = self.constant.clone();
        for (a, c) in &self.terms {
            acc += c * BigRational::from_integer(state.observe(a).into());
        }
        acc
    }

    /// Sum over `states`, accumulating each atom as an integer first.
    pub fn total<S: Observable>(&self, states: &[S]) -> BigRational {
        let mut acc = &self.constant * BigRational::from_integer(states.len().into());
        for (a, c) in &self.terms {
            let count: i64 = states.iter().map(|s| s.observe(a)).sum();
            acc += c * BigRational::from_integer(count.into());
        }
        acc
    }

    pub fn atoms(&self) -> impl Iterator<Item = &BoundAtom> {
        self.terms.keys()
    }
}

#[derive(Clone, Copy)]
enum Space<'a> {
    Ideals(&'a Poset),
    Partitions { base: &'a Poset, k: u32 },
    Functions { n: usize, k: u32 },
}

fn err_at(pos: Pos, message: impl Into<String>) -> Error {
    Error::parse(pos.line, pos.column, message)
}

fn int_arg(atom: &AtomRef, i: usize) -> Result<i64> {
    atom.args[i].parse::<i64>().map_err(|_| {
        err_at(
            atom.pos,
            format!("argument {} of {} must be an integer", i + 1, atom.head),
        )
    })
}

impl<'a> Space<'a> {
    fn base(&self) -> Option<(&'a Poset, u32)> {
        match *self {
            Space::Ideals(p) => p.product_info().map(|i| (&i.base, i.k as u32)),
            Space::Partitions { base, k } => Some((base, k)),
            Space::Functions { .. } => None,
        }
    }

    /// `chi(name, level)` with `level <= 0` meaning always 1 and
    /// `level > k` meaning always 0.
    fn chi_level(&self, name: &str, level: i64, pos: Pos) -> Result<Linear> {
        let (base, k) = self.base().ok_or_else(|| {
            err_at(pos, "chi(x,a) needs a product with a chain or a P-partition space")
        })?;
        let x = base
            .index_of(name)
            .ok_or_else(|| Error::UnknownAtom(format!("element {name:?}")))?;
        if level <= 0 {
            return Ok(Linear::from_int(1));
        }
        if level > k as i64 {
            return Ok(Linear::from_int(0));
        }
        Ok(match *self {
            Space::Ideals(p) => Linear::atom(BoundAtom::Contains(
                p.product_index(x, level as usize).expect("level in range"),
            )),
            _ => Linear::atom(BoundAtom::AtLeast { x, a: level as u32 }),
        })
    }

    fn resolve(&self, atom: &AtomRef) -> Result<Linear> {
        let arity = |n: usize| -> Result<()> {
            if atom.args.len() == n {
                Ok(())
            } else {
                Err(err_at(
                    atom.pos,
                    format!("{} takes {n} argument(s), got {}", atom.head, atom.args.len()),
                ))
            }
        };
        match (atom.head.as_str(), *self) {
            ("chi", Space::Ideals(p)) if atom.args.len() == 1 => {
                let name = &atom.args[0];
                let x = p
                    .index_of(name)
                    .ok_or_else(|| Error::UnknownAtom(format!("element {name:?}")))?;
                Ok(Linear::atom(BoundAtom::Contains(x)))
            }
            ("chi", Space::Partitions { base, k: 1 }) if atom.args.len() == 1 => {
                let name = &atom.args[0];
                let x = base
                    .index_of(name)
                    .ok_or_else(|| Error::UnknownAtom(format!("element {name:?}")))?;
                Ok(Linear::atom(BoundAtom::AtLeast { x, a: 1 }))
            }
            ("chi", Space::Ideals(_) | Space::Partitions { .. }) => {
                arity(2)?;
                self.chi_level(&atom.args[0], int_arg(atom, 1)?, atom.pos)
            }
            ("F", Space::Ideals(_) | Space::Partitions { .. }) => {
                arity(1)?;
                let i = int_arg(atom, 0)?;
                Ok(self
                    .chi_level("l", i, atom.pos)?
                    .add(self.chi_level("r", i, atom.pos)?, 1)
                    .add(self.chi_level("c", i - 1, atom.pos)?, 1))
            }
            ("B", Space::Ideals(_) | Space::Partitions { .. }) => {
                arity(1)?;
                let i = int_arg(atom, 0)?;
                let (base, _) = self.base().ok_or_else(|| {
                    err_at(atom.pos, "B(i) needs a claw times a chain")
                })?;
                let shape = base
                    .claw_shape()
                    .ok_or_else(|| err_at(atom.pos, "B(i) needs a claw-shaped factor"))?;
                let mut acc = self.chi_level(base.name(shape.hub), i - 1, atom.pos)?;
                for &leaf in &shape.leaves {
                    acc = acc.add(self.chi_level(base.name(leaf), i, atom.pos)?, 1);
                }
                Ok(acc)
            }
            ("f", Space::Functions { n, .. }) => {
                arity(1)?;
                let i = int_arg(atom, 0)?;
                if i < 1 || i as usize > n {
                    return Err(err_at(atom.pos, format!("f({i}) outside 1..={n}")));
                }
                Ok(Linear::atom(BoundAtom::Value(i as usize - 1)))
            }
            ("eta", Space::Functions { k, .. }) => {
                arity(1)?;
                let j = int_arg(atom, 0)?;
                if j < 1 || j > k as i64 {
                    return Err(err_at(atom.pos, format!("eta({j}) outside 1..={k}")));
                }
                Ok(Linear::atom(BoundAtom::Preimage(j as u32)))
            }
            (head, _) => Err(Error::UnknownAtom(format!(
                "{head}({}) is not defined on this state space",
                atom.args.join(",")
            ))),
        }
    }

    fn linearize(&self, node: &Node) -> Result<Linear> {
        Ok(match node {
            Node::Num(c) => Linear::constant(c.clone()),
            Node::Atom(a) => self.resolve(a)?,
            Node::Neg(a) => self.linearize(a)?.scale(&-BigRational::one()),
            Node::Add(a, b) => self.linearize(a)?.add(self.linearize(b)?, 1),
            Node::Sub(a, b) => self.linearize(a)?.add(self.linearize(b)?, -1),
            Node::Mul(a, b, pos) => {
                let (a, b) = (self.linearize(a)?, self.linearize(b)?);
                if a.is_constant() {
                    b.scale(&a.constant)
                } else if b.is_constant() {
                    a.scale(&b.constant)
                } else {
                    return Err(err_at(*pos, "product of two non-constant terms"));
                }
            }
            Node::Div(a, d) => self
                .linearize(a)?
                .scale(&BigRational::new(BigInt::one(), d.clone())),
            Node::Cmp(..) | Node::And(..) | Node::Or(..) | Node::Not(..) => {
                return Err(Error::Precondition(
                    "comparison used where a number was expected".into(),
                ))
            }
        })
    }

    fn condition(&self, node: &Node) -> Result<Cond> {
        Ok(match node {
            Node::Cmp(a, op, b) => Cond::Cmp(self.linearize(a)?, *op, self.linearize(b)?),
            Node::And(a, b) => Cond::And(Box::new(self.condition(a)?), Box::new(self.condition(b)?)),
            Node::Or(a, b) => Cond::Or(Box::new(self.condition(a)?), Box::new(self.condition(b)?)),
            Node::Not(a) => Cond::Not(Box::new(self.condition(a)?)),
            _ => {
                return Err(Error::Precondition(
                    "a predicate must be a comparison or a boolean combination".into(),
                ))
            }
        })
    }
}

/// A parsed, bound statistic on states of type `S`.
#[derive(Clone, PartialEq, Eq)]
pub struct Statistic<S> {
    text: String,
    linear: Linear,
    _state: PhantomData<fn(&S)>,
}

impl<S> fmt::Debug for Statistic<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Statistic({:?})", self.text)
    }
}

impl<S: Observable> Statistic<S> {
    fn bind(text: &str, space: Space<'_>) -> Result<Self> {
        let node = parse_node(text)?;
        if node.is_bool() {
            return Err(Error::Precondition(format!(
                "{text:?} is a predicate, not a statistic"
            )));
        }
        Ok(Statistic {
            text: text.trim().to_string(),
            linear: space.linearize(&node)?,
            _state: PhantomData,
        })
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn linear(&self) -> &Linear {
        &self.linear
    }

    pub fn eval(&self, state: &S) -> BigRational {
        self.linear.eval(state)
    }

    pub fn total(&self, states: &[S]) -> BigRational {
        self.linear.total(states)
    }
}

impl Statistic<OrderIdeal> {
    /// Binds to order ideals of `poset`; `chi(x,a)` and `F`/`B` need
    /// `poset` to be a product with a chain.
    pub fn for_ideals(text: &str, poset: &Poset) -> Result<Self> {
        Self::bind(text, Space::Ideals(poset))
    }
}

impl Statistic<PPartition> {
    pub fn for_partitions(text: &str, base: &Poset, k: u32) -> Result<Self> {
        Self::bind(text, Space::Partitions { base, k })
    }
}

impl Statistic<OneLineFunction> {
    pub fn for_functions(text: &str, n: usize, k: u32) -> Result<Self> {
        Self::bind(text, Space::Functions { n, k })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Cond {
    Cmp(Linear, CmpOp, Linear),
    And(Box<Cond>, Box<Cond>),
    Or(Box<Cond>, Box<Cond>),
    Not(Box<Cond>),
}

impl Cond {
    fn holds<S: Observable>(&self, s: &S) -> bool {
        match self {
            Cond::Cmp(a, op, b) => op.apply(&a.eval(s), &b.eval(s)),
            Cond::And(a, b) => a.holds(s) && b.holds(s),
            Cond::Or(a, b) => a.holds(s) || b.holds(s),
            Cond::Not(a) => !a.holds(s),
        }
    }
}

/// A parsed, bound boolean condition on states of type `S`.
#[derive(Clone, PartialEq, Eq)]
pub struct Predicate<S> {
    text: String,
    cond: Cond,
    _state: PhantomData<fn(&S)>,
}

impl<S> fmt::Debug for Predicate<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Predicate({:?})", self.text)
    }
}

impl<S: Observable> Predicate<S> {
    fn bind(text: &str, space: Space<'_>) -> Result<Self> {
        let node = parse_node(text)?;
        Ok(Predicate {
            text: text.trim().to_string(),
            cond: space.condition(&node)?,
            _state: PhantomData,
        })
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn holds(&self, state: &S) -> bool {
        self.cond.holds(state)
    }
}

impl Predicate<OneLineFunction> {
    pub fn for_functions(text: &str, n: usize, k: u32) -> Result<Self> {
        Self::bind(text, Space::Functions { n, k })
    }
}

impl Predicate<PPartition> {
    pub fn for_partitions(text: &str, base: &Poset, k: u32) -> Result<Self> {
        Self::bind(text, Space::Partitions { base, k })
    }
}

impl Predicate<OrderIdeal> {
    pub fn for_ideals(text: &str, poset: &Poset) -> Result<Self> {
        Self::bind(text, Space::Ideals(poset))
    }
}

/// Renders `num/den` with an explicit denominator, e.g. `1/1`.
pub fn ratio_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `a/b` or `a`.
pub fn parse_ratio(text: &str) -> Option<BigRational> {
    let t = text.trim();
    let (n, d) = t.split_once('/').unwrap_or((t, "1"));
    let n: BigInt = n.trim().parse().ok()?;
    let d: BigInt = d.trim().parse().ok()?;
    (!d.is_zero()).then(|| BigRational::new(n, d))
}

/// Small-integer rational shorthand.
pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Limits;
    use crate::ideal::enumerate_ideals;
    use crate::poset::{make_claw, make_v, product_with_chain};
    use crate::whirl::{phi, enumerate_partitions};

    fn v4() -> Poset {
        product_with_chain(&make_v(), 4, Limits::default()).unwrap()
    }

    #[test]
    fn parses_v_statistic_on_ideals() {
        let p = v4();
        let s = Statistic::for_ideals("chi(l,1)+chi(r,1)-chi(c,4)", &p).unwrap();
        let full = OrderIdeal::full(&p);
        assert_eq!(s.eval(&full), ratio(1, 1));
        assert_eq!(s.eval(&OrderIdeal::empty(&p)), ratio(0, 1));
        assert_eq!(s.linear().atoms().count(), 3);
    }

    #[test]
    fn constant_and_arithmetic() {
        let p = v4();
        let z = Statistic::for_ideals("0", &p).unwrap();
        assert_eq!(z.eval(&OrderIdeal::full(&p)), ratio(0, 1));
        let s = Statistic::for_ideals("3/4*(chi(l,2) - 2) + -1", &p).unwrap();
        assert_eq!(s.eval(&OrderIdeal::full(&p)), ratio(-7, 4));
        let s = Statistic::for_ideals("chi(c,1)*2/3", &p).unwrap();
        assert_eq!(s.eval(&OrderIdeal::full(&p)), ratio(2, 3));
    }

    #[test]
    fn full_element_names_work() {
        let p = v4();
        let a = Statistic::for_ideals("chi(c_4)", &p).unwrap();
        let b = Statistic::for_ideals("chi(c,4)", &p).unwrap();
        assert_eq!(a.linear(), b.linear());
        let c = Statistic::for_ideals("chi(ℓ,1)", &p).unwrap();
        assert_eq!(c.linear(), Statistic::for_ideals("chi(l,1)", &p).unwrap().linear());
    }

    #[test]
    fn flux_expands_with_boundary_levels() {
        let p = product_with_chain(&make_v(), 9, Limits::default()).unwrap();
        let f1 = Statistic::for_ideals("F(1)", &p).unwrap();
        let direct = Statistic::for_ideals("chi(l,1)+chi(r,1)+1", &p).unwrap();
        assert_eq!(f1.linear(), direct.linear());
        let f10 = Statistic::for_ideals("F(10)", &p).unwrap();
        assert_eq!(f10.linear(), Statistic::for_ideals("chi(c,9)", &p).unwrap().linear());
        assert!(Statistic::for_ideals("F(2)-F(9)", &p).is_ok());
    }

    #[test]
    fn claw_back_flux() {
        let c4 = make_claw(4).unwrap();
        let s = Statistic::for_partitions("B(3)", &c4, 6).unwrap();
        let t = Statistic::for_partitions(
            "chi(0hat,2)+chi(b1,3)+chi(b2,3)+chi(b3,3)+chi(b4,3)",
            &c4,
            6,
        )
        .unwrap();
        assert_eq!(s.linear(), t.linear());
        let f = PPartition::new(&c4, vec![1, 3, 5, 5, 5], 6).unwrap();
        assert_eq!(s.eval(&f), ratio(4, 1));
    }

    #[test]
    fn partition_and_ideal_views_agree() {
        let v = make_v();
        let p = v4();
        let text = "2*chi(l,1)-chi(r,3)+F(2)-B(4)/5";
        let on_ideals = Statistic::for_ideals(text, &p).unwrap();
        let on_parts = Statistic::for_partitions(text, &v, 4).unwrap();
        for f in enumerate_partitions(&v, 4, Limits::default()).unwrap() {
            assert_eq!(on_parts.eval(&f), on_ideals.eval(&phi(&p, &f).unwrap()));
        }
    }

    #[test]
    fn error_positions() {
        let p = v4();
        match Statistic::for_ideals("chi(l,1) + $", &p) {
            Err(Error::Parse { line: 1, column: 12, .. }) => {}
            other => panic!("{other:?}"),
        }
        match Statistic::for_ideals("chi(l,1) +", &p) {
            Err(Error::Parse { column: 11, .. }) => {}
            other => panic!("{other:?}"),
        }
        match Statistic::for_ideals("chi(l,1)\n / 0", &p) {
            Err(Error::Parse { line: 2, column: 4, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            Statistic::for_ideals("chi(l,1)*chi(r,1)", &p),
            Err(Error::Parse { column: 9, .. })
        ));
        assert!(matches!(
            Statistic::for_ideals("chi(q,1)", &p),
            Err(Error::UnknownAtom(_))
        ));
        assert!(matches!(
            Statistic::for_ideals("eta(1)", &p),
            Err(Error::UnknownAtom(_))
        ));
        assert!(Statistic::for_ideals("chi(l,1) < 1", &p).is_err());
    }

    #[test]
    fn function_atoms_and_predicates() {
        let f = OneLineFunction::parse("21344", 4).unwrap();
        let eta4 = Statistic::for_functions("eta(4)", 5, 4).unwrap();
        assert_eq!(eta4.eval(&f), ratio(2, 1));
        let p = Predicate::<OneLineFunction>::for_functions("f(1) != f(2)", 5, 4).unwrap();
        assert!(p.holds(&f));
        let q = Predicate::<OneLineFunction>::for_functions(
            "!(f(4) == f(5)) || (eta(1) >= 1 && f(3) <= 3)",
            5,
            4,
        )
        .unwrap();
        assert!(q.holds(&f));
        assert!(Predicate::<OneLineFunction>::for_functions("f(6) == 1", 5, 4).is_err());
        assert!(Predicate::<OneLineFunction>::for_functions("f(1)", 5, 4).is_err());
        assert!(Statistic::for_functions("f(1) == 1", 5, 4).is_err());
    }

    #[test]
    fn totals_match_pointwise_sums() {
        let p = v4();
        let s = Statistic::for_ideals("F(2)-F(4)+1/7*chi(c,3)", &p).unwrap();
        let ideals = enumerate_ideals(&p, Limits::default()).unwrap();
        let mut acc = BigRational::zero();
        for i in &ideals {
            acc += s.eval(i);
        }
        assert_eq!(s.total(&ideals), acc);
    }

    #[test]
    fn ratio_helpers() {
        assert_eq!(ratio_string(&ratio(2, 4)), "1/2");
        assert_eq!(ratio_string(&ratio(3, 1)), "3/1");
        assert_eq!(parse_ratio("-6/4"), Some(ratio(-3, 2)));
        assert_eq!(parse_ratio("5"), Some(ratio(5, 1)));
        assert_eq!(parse_ratio("1/0"), None);
    }
}
