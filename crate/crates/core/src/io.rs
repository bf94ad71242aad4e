//! Poset text format and JSON mirror.
//!
//! Builder expressions: `chain(N)`, `V`, `claw(N)`, `<expr> x [K]`, with
//! parentheses for grouping. Explicit block:
//!
//! ```text
//! elements: 3
//! names: a b c
//! 0 < 1
//! 0 < 2
//! ```
//!
//! Cover lines accept indices or names. `#` starts a comment.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Limits, Result};
use crate::poset::{make_chain, make_claw, make_v, product_with_chain, Poset};

/// Parses either form of the poset grammar.
pub fn parse_poset(text: &str, limits: Limits) -> Result<Poset> {
    let first = text
        .lines()
        .map(strip_comment)
        .find(|l| !l.trim().is_empty())
        .ok_or_else(|| Error::parse(1, 1, "empty poset description"))?;
    if first.trim_start().starts_with("elements") {
        parse_block(text)
    } else {
        let mut p = Builder {
            chars: text.chars().collect(),
            at: 0,
            line: 1,
            col: 1,
            limits,
        };
        let poset = p.expr()?;
        p.skip_ws();
        if p.at < p.chars.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(poset)
    }
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("")
}

struct Builder {
    chars: Vec<char>,
    at: usize,
    line: usize,
    col: usize,
    limits: Limits,
}

impl Builder {
    fn error(&self, message: impl Into<String>) -> Error {
        Error::parse(self.line, self.col, message)
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.at).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.at += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c == '#' {
                while self.peek().is_some_and(|c| c != '\n') {
                    self.bump();
                }
            } else if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn expect(&mut self, want: char) -> Result<()> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c == want => {
                self.bump();
                Ok(())
            }
            Some(c) => Err(self.error(format!("expected {want:?}, found {c:?}"))),
            None => Err(self.error(format!("expected {want:?}, found end of input"))),
        }
    }

    fn word(&mut self) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek().filter(|c| c.is_alphanumeric() || *c == '_') {
            s.push(c);
            self.bump();
        }
        s
    }

    fn number(&mut self) -> Result<usize> {
        self.skip_ws();
        let (line, col) = (self.line, self.col);
        let digits = self.word();
        digits
            .parse()
            .map_err(|_| Error::parse(line, col, format!("expected a number, found {digits:?}")))
    }

    fn expr(&mut self) -> Result<Poset> {
        let mut poset = self.term()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some('x') | Some('×') => {
                    self.bump();
                }
                _ => return Ok(poset),
            }
            self.expect('[')?;
            let (line, col) = (self.line, self.col);
            let k = self.number()?;
            self.expect(']')?;
            poset = product_with_chain(&poset, k, self.limits).map_err(|e| match e {
                Error::InvalidSize(m) => Error::parse(line, col, m),
                other => other,
            })?;
        }
    }

    fn term(&mut self) -> Result<Poset> {
        self.skip_ws();
        if self.peek() == Some('(') {
            self.bump();
            let p = self.expr()?;
            self.expect(')')?;
            return Ok(p);
        }
        let (line, col) = (self.line, self.col);
        let name = self.word();
        let at = |e: Error| match e {
            Error::InvalidSize(m) => Error::parse(line, col, m),
            other => other,
        };
        match name.as_str() {
            "V" => Ok(make_v()),
            "chain" | "claw" => {
                self.expect('(')?;
                let n = self.number()?;
                self.expect(')')?;
                if name == "chain" {
                    make_chain(n).map_err(at)
                } else {
                    make_claw(n).map_err(at)
                }
            }
            "" => Err(match self.peek() {
                Some(c) => Error::parse(line, col, format!("unexpected {c:?}")),
                None => Error::parse(line, col, "expected a poset, found end of input"),
            }),
            other => Err(Error::parse(
                line,
                col,
                format!("unknown builder {other:?}; expected chain(N), V or claw(N)"),
            )),
        }
    }
}

fn parse_block(text: &str) -> Result<Poset> {
    let mut size: Option<usize> = None;
    let mut names: Option<Vec<String>> = None;
    let mut relations = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = strip_comment(raw);
        let indent = line.len() - line.trim_start().len();
        let col = |offset: usize| line[..indent + offset].chars().count() + 1;
        let body = line.trim();
        if body.is_empty() {
            continue;
        }
        if let Some(rest) = body.strip_prefix("elements:") {
            if size.is_some() {
                return Err(Error::parse(line_no, col(0), "duplicate elements line"));
            }
            let n: usize = rest.trim().parse().map_err(|_| {
                Error::parse(line_no, col(9), format!("bad element count {:?}", rest.trim()))
            })?;
            if n == 0 {
                return Err(Error::parse(line_no, col(9), "poset must have at least one element"));
            }
            size = Some(n);
        } else if let Some(rest) = body.strip_prefix("names:") {
            let n = size.ok_or_else(|| Error::parse(line_no, col(0), "names before elements"))?;
            let list: Vec<String> = rest.split_whitespace().map(String::from).collect();
            if list.len() != n {
                return Err(Error::parse(
                    line_no,
                    col(6),
                    format!("expected {n} names, found {}", list.len()),
                ));
            }
            for (j, a) in list.iter().enumerate() {
                if list[..j].contains(a) {
                    return Err(Error::parse(line_no, col(6), format!("duplicate name {a:?}")));
                }
            }
            names = Some(list);
        } else {
            let n = size.ok_or_else(|| Error::parse(line_no, col(0), "cover before elements"))?;
            let Some((a, b)) = body.split_once('<') else {
                return Err(Error::parse(line_no, col(0), format!("expected `i < j`, found {body:?}")));
            };
            let lookup = |token: &str, offset: usize| -> Result<usize> {
                let token = token.trim();
                if let Some(list) = &names {
                    if let Some(j) = list.iter().position(|x| x == token) {
                        return Ok(j);
                    }
                }
                match token.parse::<usize>() {
                    Ok(j) if j < n => Ok(j),
                    _ => Err(Error::parse(line_no, col(offset), format!("unknown element {token:?}"))),
                }
            };
            let left = lookup(a, 0)?;
            let right = lookup(b, a.len() + 1 + (b.len() - b.trim_start().len()))?;
            relations.push((left, right));
        }
    }
    let n = size.ok_or_else(|| Error::parse(1, 1, "missing elements line"))?;
    let names = names.unwrap_or_else(|| (0..n).map(|i| i.to_string()).collect());
    Poset::from_relations(names, &relations)
}

/// Explicit-block form; parsing it back gives the same element order and
/// covers.
pub fn serialize_poset(poset: &Poset) -> String {
    let mut out = format!("elements: {}\nnames: {}\n", poset.size(), poset.names().join(" "));
    for &(a, b) in poset.covers() {
        out.push_str(&format!("{a} < {b}\n"));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetJson {
    pub size: usize,
    pub names: Vec<String>,
    pub covers: Vec<[usize; 2]>,
}

impl From<&Poset> for PosetJson {
    fn from(p: &Poset) -> Self {
        PosetJson {
            size: p.size(),
            names: p.names().to_vec(),
            covers: p.covers().iter().map(|&(a, b)| [a, b]).collect(),
        }
    }
}

impl PosetJson {
    pub fn to_poset(&self) -> Result<Poset> {
        if self.names.len() != self.size {
            return Err(Error::MalformedPoset(format!(
                "size {} but {} names",
                self.size,
                self.names.len()
            )));
        }
        let relations: Vec<(usize, usize)> = self.covers.iter().map(|&[a, b]| (a, b)).collect();
        Poset::from_relations(self.names.clone(), &relations)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(t: &str) -> Result<Poset> {
        parse_poset(t, Limits::default())
    }

    fn parse_err(t: &str) -> (usize, usize) {
        match parse(t) {
            Err(Error::Parse { line, column, .. }) => (line, column),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn builders() {
        let p = parse("V x [4]").unwrap();
        assert_eq!(p.size(), 12);
        assert_eq!(p.product_info().unwrap().k, 4);
        assert_eq!(parse("claw(5) x [3]").unwrap().size(), 18);
        assert_eq!(parse("chain(3)").unwrap().covers(), &[(0, 1), (1, 2)]);
        assert_eq!(parse("(chain(2) × [2]) x [2]").unwrap().size(), 8);
        assert_eq!(parse("claw(2)").unwrap(), make_v());
    }

    #[test]
    fn explicit_block() {
        let p = parse("elements: 2 \n 0 < 1").unwrap();
        assert_eq!(p, make_chain(2).unwrap());
        let q = parse("elements: 3\nnames: l c r\nc < l  # comment\nc < r\n").unwrap();
        assert_eq!(q, make_v());
    }

    #[test]
    fn error_positions() {
        assert_eq!(parse_err("V x [4"), (1, 7));
        assert_eq!(parse_err("claw(5) y"), (1, 9));
        assert_eq!(parse_err("\n  tree(3)"), (2, 3));
        assert_eq!(parse_err("chain(0)"), (1, 1));
        assert_eq!(parse_err("elements: 2\n0 < 5"), (2, 5));
        assert_eq!(parse_err("elements: 2\nnames: a"), (2, 7));
    }

    #[test]
    fn cycles_rejected() {
        let e = parse("elements: 2\n0 < 1\n1 < 0").unwrap_err();
        assert!(matches!(e, Error::MalformedPoset(_)), "{e}");
    }

    #[test]
    fn round_trips() {
        for text in ["V x [3]", "claw(4)", "chain(5)", "elements: 4\n0 < 2\n1 < 2\n2 < 3"] {
            let p = parse(text).unwrap();
            let back = parse(&serialize_poset(&p)).unwrap();
            assert_eq!(back.names(), p.names());
            assert_eq!(back.covers(), p.covers());
            let json = serde_json::to_string(&PosetJson::from(&p)).unwrap();
            let from_json: PosetJson = serde_json::from_str(&json).unwrap();
            assert_eq!(from_json.to_poset().unwrap().covers(), p.covers());
        }
    }

    #[test]
    fn json_shape() {
        let v = serde_json::to_value(PosetJson::from(&make_v())).unwrap();
        assert_eq!(v, serde_json::json!({"size": 3, "names": ["l", "c", "r"], "covers": [[1, 0], [1, 2]]}));
    }
}
