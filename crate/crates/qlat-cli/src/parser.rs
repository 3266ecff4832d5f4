//! The lattice-expression language: tokenizer, recursive-descent parser, and
//! printer.
//!
//! Grammar (whitespace insensitive):
//!
//! ```text
//! expr  := term | "perp(" expr ("," expr)+ ")"
//! term  := root | "s(" int ")" | named
//!        | "glue(" expr ("," expr)* ";" glue ("," glue)* ")"
//!        | "gram(" "[" row ("," row)* "]" ")"
//! root  := ("I" | "A" | "D" | "Dplus") "(" int ")" | "E7" | "E8"
//! named := "M(" int ")" | "K(" int ")" | "Aki(" int "," int ")"
//!        | "Mbig(" int ")" | "L12" | "L16" | "M14"
//! glue  := "[" int "]" | "1/" int | "[" rat ("," rat)* "]"
//! row   := "[" rat ("," rat)* "]"
//! rat   := int [ "/" int ]
//! ```
//!
//! A bracket list with a single integer entry is a glue index `[i]`; any
//! other bracket list is a dual-coordinate vector. Parse errors carry line
//! and column.

use qlat::rat::{format_rat, Rat};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseError {
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    ArityMismatch {
        components: usize,
        glues: usize,
    },
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Syntax { line, col, message } => {
                write!(f, "syntax error at {line}:{col}: {message}")
            }
            ParseError::ArityMismatch { components, glues } => write!(
                f,
                "arity mismatch: {components} glue components but {glues} glue references"
            ),
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RootRef {
    I(u64),
    A(u64),
    D(u64),
    DPlus(u64),
    E7,
    E8,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NamedRef {
    M(u64),
    K(u64),
    Aki(i64, u64),
    MBig(u64),
    L12,
    L16,
    M14,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GlueRef {
    Index(i64),
    Fraction(u64),
    DualCoords(Vec<Rat>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatticeExpr {
    Root(RootRef),
    Scalar(i64),
    Named(NamedRef),
    Perp(Vec<LatticeExpr>),
    Glue {
        components: Vec<LatticeExpr>,
        glues: Vec<GlueRef>,
    },
    Literal(Vec<Vec<Rat>>),
}

impl fmt::Display for LatticeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeExpr::Root(r) => match r {
                RootRef::I(n) => write!(f, "I({n})"),
                RootRef::A(n) => write!(f, "A({n})"),
                RootRef::D(n) => write!(f, "D({n})"),
                RootRef::DPlus(n) => write!(f, "Dplus({n})"),
                RootRef::E7 => write!(f, "E7"),
                RootRef::E8 => write!(f, "E8"),
            },
            LatticeExpr::Scalar(a) => write!(f, "s({a})"),
            LatticeExpr::Named(n) => match n {
                NamedRef::M(c) => write!(f, "M({c})"),
                NamedRef::K(d) => write!(f, "K({d})"),
                NamedRef::Aki(k, i) => write!(f, "Aki({k},{i})"),
                NamedRef::MBig(k) => write!(f, "Mbig({k})"),
                NamedRef::L12 => write!(f, "L12"),
                NamedRef::L16 => write!(f, "L16"),
                NamedRef::M14 => write!(f, "M14"),
            },
            LatticeExpr::Perp(parts) => {
                write!(f, "perp(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ")")
            }
            LatticeExpr::Glue { components, glues } => {
                write!(f, "glue(")?;
                for (i, c) in components.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, "; ")?;
                for (i, g) in glues.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    match g {
                        GlueRef::Index(ix) => write!(f, "[{ix}]")?,
                        GlueRef::Fraction(m) => write!(f, "1/{m}")?,
                        GlueRef::DualCoords(v) => {
                            write!(f, "[")?;
                            for (j, x) in v.iter().enumerate() {
                                if j > 0 {
                                    write!(f, ", ")?;
                                }
                                write!(f, "{}", format_rat(x))?;
                            }
                            write!(f, "]")?;
                        }
                    }
                }
                write!(f, ")")
            }
            LatticeExpr::Literal(rows) => {
                write!(f, "gram([")?;
                for (i, row) in rows.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "[")?;
                    for (j, x) in row.iter().enumerate() {
                        if j > 0 {
                            write!(f, ", ")?;
                        }
                        write!(f, "{}", format_rat(x))?;
                    }
                    write!(f, "]")?;
                }
                write!(f, "])")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Semicolon,
    Slash,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            line: self.line,
            col: self.col,
            message: message.into(),
        }
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.src.get(self.pos).copied();
        if let Some(c) = c {
            self.pos += 1;
            if c == b'\n' {
                self.line += 1;
                self.col = 1;
            } else {
                self.col += 1;
            }
        }
        c
    }

    fn tokens(mut self) -> Result<Vec<Spanned>, ParseError> {
        let mut out = Vec::new();
        loop {
            while matches!(self.src.get(self.pos), Some(c) if c.is_ascii_whitespace()) {
                self.bump();
            }
            let (line, col) = (self.line, self.col);
            let Some(&c) = self.src.get(self.pos) else {
                return Ok(out);
            };
            let tok = match c {
                b'(' => {
                    self.bump();
                    Tok::LParen
                }
                b')' => {
                    self.bump();
                    Tok::RParen
                }
                b'[' => {
                    self.bump();
                    Tok::LBracket
                }
                b']' => {
                    self.bump();
                    Tok::RBracket
                }
                b',' => {
                    self.bump();
                    Tok::Comma
                }
                b';' => {
                    self.bump();
                    Tok::Semicolon
                }
                b'/' => {
                    self.bump();
                    Tok::Slash
                }
                b'-' | b'0'..=b'9' => {
                    let mut s = String::new();
                    s.push(self.bump().unwrap() as char);
                    while matches!(self.src.get(self.pos), Some(d) if d.is_ascii_digit()) {
                        s.push(self.bump().unwrap() as char);
                    }
                    let n: i64 = s
                        .parse()
                        .map_err(|_| self.error(format!("bad integer {s:?}")))?;
                    Tok::Int(n)
                }
                c if c.is_ascii_alphabetic() => {
                    let mut s = String::new();
                    while matches!(self.src.get(self.pos), Some(d) if d.is_ascii_alphanumeric()) {
                        s.push(self.bump().unwrap() as char);
                    }
                    Tok::Ident(s)
                }
                other => {
                    return Err(self.error(format!("unexpected character {:?}", other as char)))
                }
            };
            out.push(Spanned { tok, line, col });
        }
    }
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map(|s| (s.line, s.col))
            .unwrap_or((1, 1))
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        let (line, col) = self.here();
        ParseError::Syntax {
            line,
            col,
            message: message.into(),
        }
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|s| s.tok.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        match self.bump() {
            Some(t) if t == want => Ok(()),
            _ => {
                self.pos = self.pos.saturating_sub(1);
                Err(self.error(format!("expected {what}")))
            }
        }
    }

    fn int(&mut self, what: &str) -> Result<i64, ParseError> {
        match self.bump() {
            Some(Tok::Int(n)) => Ok(n),
            _ => {
                self.pos = self.pos.saturating_sub(1);
                Err(self.error(format!("expected {what}")))
            }
        }
    }

    fn uint(&mut self, what: &str) -> Result<u64, ParseError> {
        let n = self.int(what)?;
        u64::try_from(n).map_err(|_| self.error(format!("{what} must be nonnegative")))
    }

    fn rat(&mut self) -> Result<Rat, ParseError> {
        let p = self.int("rational numerator")?;
        if self.peek() == Some(&Tok::Slash) {
            self.bump();
            let q = self.int("rational denominator")?;
            if q == 0 {
                return Err(self.error("zero denominator"));
            }
            Ok(qlat::rat::rat(p, q))
        } else {
            Ok(qlat::rat::rat_int(p))
        }
    }

    /// `[ rat, ... ]` after the opening bracket has been consumed.
    fn bracket_tail(&mut self) -> Result<Vec<Rat>, ParseError> {
        let mut entries = vec![self.rat()?];
        loop {
            match self.bump() {
                Some(Tok::RBracket) => return Ok(entries),
                Some(Tok::Comma) => entries.push(self.rat()?),
                _ => {
                    self.pos = self.pos.saturating_sub(1);
                    return Err(self.error("expected ',' or ']' in bracket list"));
                }
            }
        }
    }

    fn glue_ref(&mut self) -> Result<GlueRef, ParseError> {
        match self.peek() {
            Some(Tok::LBracket) => {
                self.bump();
                let entries = self.bracket_tail()?;
                if entries.len() == 1 && qlat::rat::is_integer(&entries[0]) {
                    let ix: i64 = entries[0]
                        .numer()
                        .try_into()
                        .map_err(|_| self.error("glue index out of range"))?;
                    Ok(GlueRef::Index(ix))
                } else {
                    Ok(GlueRef::DualCoords(entries))
                }
            }
            Some(Tok::Int(1)) => {
                self.bump();
                self.expect(Tok::Slash, "'/' in fraction glue")?;
                let m = self.uint("fraction denominator")?;
                if m == 0 {
                    return Err(self.error("zero fraction denominator"));
                }
                Ok(GlueRef::Fraction(m))
            }
            _ => Err(self.error("expected glue reference: [i], 1/m, or [coords]")),
        }
    }

    fn paren_uint(&mut self, what: &str) -> Result<u64, ParseError> {
        self.expect(Tok::LParen, "'('")?;
        let n = self.uint(what)?;
        self.expect(Tok::RParen, "')'")?;
        Ok(n)
    }

    fn expr(&mut self) -> Result<LatticeExpr, ParseError> {
        let Some(tok) = self.bump() else {
            return Err(self.error("unexpected end of input"));
        };
        match tok {
            Tok::Ident(name) => match name.as_str() {
                "I" => Ok(LatticeExpr::Root(RootRef::I(self.paren_uint("rank")?))),
                "A" => Ok(LatticeExpr::Root(RootRef::A(self.paren_uint("rank")?))),
                "D" => Ok(LatticeExpr::Root(RootRef::D(self.paren_uint("rank")?))),
                "Dplus" => Ok(LatticeExpr::Root(RootRef::DPlus(self.paren_uint("rank")?))),
                "E7" => Ok(LatticeExpr::Root(RootRef::E7)),
                "E8" => Ok(LatticeExpr::Root(RootRef::E8)),
                "L12" => Ok(LatticeExpr::Named(NamedRef::L12)),
                "L16" => Ok(LatticeExpr::Named(NamedRef::L16)),
                "M14" => Ok(LatticeExpr::Named(NamedRef::M14)),
                "s" => {
                    self.expect(Tok::LParen, "'('")?;
                    let a = self.int("scalar")?;
                    self.expect(Tok::RParen, "')'")?;
                    Ok(LatticeExpr::Scalar(a))
                }
                "M" => Ok(LatticeExpr::Named(NamedRef::M(self.paren_uint("parameter")?))),
                "K" => Ok(LatticeExpr::Named(NamedRef::K(self.paren_uint("parameter")?))),
                "Mbig" => Ok(LatticeExpr::Named(NamedRef::MBig(
                    self.paren_uint("parameter")?,
                ))),
                "Aki" => {
                    self.expect(Tok::LParen, "'('")?;
                    let k = self.int("parameter k")?;
                    self.expect(Tok::Comma, "','")?;
                    let i = self.uint("parameter i")?;
                    self.expect(Tok::RParen, "')'")?;
                    Ok(LatticeExpr::Named(NamedRef::Aki(k, i)))
                }
                "perp" => {
                    self.expect(Tok::LParen, "'('")?;
                    let mut parts = vec![self.expr()?];
                    loop {
                        match self.bump() {
                            Some(Tok::Comma) => parts.push(self.expr()?),
                            Some(Tok::RParen) => break,
                            _ => {
                                self.pos = self.pos.saturating_sub(1);
                                return Err(self.error("expected ',' or ')' in perp"));
                            }
                        }
                    }
                    if parts.len() < 2 {
                        return Err(self.error("perp needs at least two summands"));
                    }
                    Ok(LatticeExpr::Perp(parts))
                }
                "glue" => {
                    self.expect(Tok::LParen, "'('")?;
                    let mut components = vec![self.expr()?];
                    loop {
                        match self.bump() {
                            Some(Tok::Comma) => components.push(self.expr()?),
                            Some(Tok::Semicolon) => break,
                            _ => {
                                self.pos = self.pos.saturating_sub(1);
                                return Err(self.error("expected ',' or ';' in glue"));
                            }
                        }
                    }
                    let mut glues = vec![self.glue_ref()?];
                    loop {
                        match self.bump() {
                            Some(Tok::Comma) => glues.push(self.glue_ref()?),
                            Some(Tok::RParen) => break,
                            _ => {
                                self.pos = self.pos.saturating_sub(1);
                                return Err(self.error("expected ',' or ')' in glue"));
                            }
                        }
                    }
                    if components.len() != glues.len() {
                        return Err(ParseError::ArityMismatch {
                            components: components.len(),
                            glues: glues.len(),
                        });
                    }
                    Ok(LatticeExpr::Glue { components, glues })
                }
                "gram" => {
                    self.expect(Tok::LParen, "'('")?;
                    self.expect(Tok::LBracket, "'['")?;
                    let mut rows = Vec::new();
                    loop {
                        self.expect(Tok::LBracket, "'[' starting a row")?;
                        rows.push(self.bracket_tail()?);
                        match self.bump() {
                            Some(Tok::Comma) => continue,
                            Some(Tok::RBracket) => break,
                            _ => {
                                self.pos = self.pos.saturating_sub(1);
                                return Err(self.error("expected ',' or ']' after row"));
                            }
                        }
                    }
                    self.expect(Tok::RParen, "')'")?;
                    Ok(LatticeExpr::Literal(rows))
                }
                other => Err(self.error(format!("unknown name {other:?}"))),
            },
            _ => {
                self.pos = self.pos.saturating_sub(1);
                Err(self.error("expected an expression"))
            }
        }
    }
}

/// Parses a lattice expression. Never panics; all failures are structured.
pub fn parse_expression(text: &str) -> Result<LatticeExpr, ParseError> {
    let toks = Lexer::new(text).tokens()?;
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.error("trailing input after expression"));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_named_and_round_trips() {
        for src in [
            "glue(A(4), s(20); [1], 1/5)",
            "perp(A(2), s(5))",
            "L16",
            "gram([[2, -1], [-1, 2]])",
            "glue(E7, A(5); [1], [3])",
            "glue(A(2), s(6); [1], [1/2, 1/3])",
            "Aki(-1,4)",
        ] {
            let ast = parse_expression(src).unwrap();
            let printed = ast.to_string();
            let re = parse_expression(&printed).unwrap();
            assert_eq!(ast, re, "round trip failed for {src}");
        }
    }

    #[test]
    fn arity_mismatch_is_structured() {
        match parse_expression("glue(A(11), A(5); [2])") {
            Err(ParseError::ArityMismatch { components, glues }) => {
                assert_eq!((components, glues), (2, 1));
            }
            other => panic!("expected arity mismatch, got {other:?}"),
        }
    }

    #[test]
    fn syntax_errors_carry_position() {
        match parse_expression("perp(A(2)") {
            Err(ParseError::Syntax { line, col, .. }) => {
                assert_eq!(line, 1);
                assert!(col >= 9);
            }
            other => panic!("expected syntax error, got {other:?}"),
        }
        assert!(parse_expression("").is_err());
        assert!(parse_expression("A(2) A(3)").is_err());
        assert!(parse_expression("unknown(1)").is_err());
    }

    #[test]
    fn single_integer_bracket_is_index() {
        match parse_expression("glue(A(2), s(3); [1], 1/3)").unwrap() {
            LatticeExpr::Glue { glues, .. } => {
                assert_eq!(glues[0], GlueRef::Index(1));
                assert_eq!(glues[1], GlueRef::Fraction(3));
            }
            _ => unreachable!(),
        }
        // A one-entry list with a fraction is dual coordinates.
        match parse_expression("glue(s(4); [1/2])").unwrap() {
            LatticeExpr::Glue { glues, .. } => {
                assert_eq!(glues[0], GlueRef::DualCoords(vec![qlat::rat::rat(1, 2)]));
            }
            _ => unreachable!(),
        }
    }
}
