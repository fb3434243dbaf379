//! Map-definition files.
//!
//! ```text
//! map gamma3 {
//!   vars: x, y, z
//!   params: l1 = 1/3, l2 = 1/4, l3 = 1/5
//!   x -> l1*(y + x*z)
//!   y -> l2*x
//!   z -> l3*z
//! }
//! ```
//!
//! Parameters are substituted while parsing, so every rule becomes an exact
//! polynomial in the declared variables. Unary minus binds looser than `^`:
//! `-x^2` is `-(x^2)`. `#` starts a comment running to the end of the line.

use std::collections::HashMap;
use std::fmt::{self, Write as _};

use polydyn_core::{parse_rational, MapError, PolyMap, Polynomial, Rational};
use thiserror::Error;

/// Exponents above this are rejected rather than expanded.
pub const MAX_EXPONENT: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    UnexpectedToken { expected: String, found: String },
    UndeclaredIdentifier(String),
    NonRationalParameter(String),
    DuplicateDeclaration(String),
    DuplicateRule(String),
    MissingRule(String),
    RuleForNonVariable(String),
    ZeroDenominator,
    ExponentTooLarge(String),
    Empty,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::UnexpectedChar(c) => write!(f, "unexpected character {c:?}"),
            Self::UnexpectedToken { expected, found } => write!(f, "expected {expected}, found {found}"),
            Self::UndeclaredIdentifier(name) => write!(f, "undeclared identifier `{name}`"),
            Self::NonRationalParameter(name) => write!(f, "parameter `{name}` must be bound to a rational literal"),
            Self::DuplicateDeclaration(name) => write!(f, "`{name}` is declared twice"),
            Self::DuplicateRule(name) => write!(f, "second rule for `{name}`"),
            Self::MissingRule(name) => write!(f, "no rule for variable `{name}`"),
            Self::RuleForNonVariable(name) => write!(f, "`{name}` is not a declared variable"),
            Self::ZeroDenominator => f.write_str("zero denominator"),
            Self::ExponentTooLarge(e) => write!(f, "exponent {e} exceeds {MAX_EXPONENT}"),
            Self::Empty => f.write_str("file contains no map definition"),
        }
    }
}

/// Error with a 1-based source position.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {kind}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: usize,
    pub column: usize,
}

/// One `map` block with parameters already substituted.
#[derive(Debug, Clone, PartialEq)]
pub struct MapSpec {
    pub name: String,
    pub vars: Vec<String>,
    pub params: Vec<(String, Rational)>,
    /// One polynomial per variable, in declaration order.
    pub components: Vec<Polynomial<Rational>>,
}

impl MapSpec {
    pub fn to_map(&self) -> Result<PolyMap<Rational>, MapError> {
        Ok(PolyMap::new(self.components.clone())?.with_name(self.name.clone()))
    }

    /// Wraps an existing map, naming variables `x1..xd`.
    pub fn from_map(f: &PolyMap<Rational>) -> Self {
        Self {
            name: f.name().unwrap_or("map").to_string(),
            vars: (1..=f.dim()).map(|i| format!("x{i}")).collect(),
            params: Vec::new(),
            components: f.components().to_vec(),
        }
    }

    /// Canonical map-file text; parsing it yields an equal spec.
    pub fn render(&self) -> String {
        let names: Vec<&str> = self.vars.iter().map(String::as_str).collect();
        let mut out = String::new();
        let _ = writeln!(out, "map {} {{", self.name);
        let _ = writeln!(out, "  vars: {}", self.vars.join(", "));
        if !self.params.is_empty() {
            let bindings: Vec<String> = self.params.iter().map(|(n, v)| format!("{n} = {v}")).collect();
            let _ = writeln!(out, "  params: {}", bindings.join(", "));
        }
        for (var, p) in self.vars.iter().zip(&self.components) {
            let _ = writeln!(out, "  {var} -> {}", p.render_with(&names));
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Nat(String),
    Arrow,
    Colon,
    Comma,
    Eq,
    LBrace,
    RBrace,
    LParen,
    RParen,
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Nat(s) => write!(f, "number `{s}`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Eq => f.write_str("`=`"),
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::Minus => f.write_str("`-`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Caret => f.write_str("`^`"),
            Tok::Slash => f.write_str("`/`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1, 1);
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars<'_>>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
            c
        };
        if c.is_whitespace() {
            bump(&mut chars);
            continue;
        }
        if c == '#' {
            while chars.peek().is_some_and(|&c| c != '\n') {
                bump(&mut chars);
            }
            continue;
        }
        let tok = if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&c) = chars.peek().filter(|c| c.is_ascii_alphanumeric() || **c == '_') {
                s.push(c);
                bump(&mut chars);
            }
            Tok::Ident(s)
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&c) = chars.peek().filter(|c| c.is_ascii_digit()) {
                s.push(c);
                bump(&mut chars);
            }
            Tok::Nat(s)
        } else {
            bump(&mut chars);
            match c {
                '-' if chars.peek() == Some(&'>') => {
                    bump(&mut chars);
                    Tok::Arrow
                }
                '-' => Tok::Minus,
                ':' => Tok::Colon,
                ',' => Tok::Comma,
                '=' => Tok::Eq,
                '{' => Tok::LBrace,
                '}' => Tok::RBrace,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '+' => Tok::Plus,
                '*' => Tok::Star,
                '^' => Tok::Caret,
                '/' => Tok::Slash,
                other => return Err(ParseError { kind: ParseErrorKind::UnexpectedChar(other), line: l, column: col }),
            }
        };
        out.push(Spanned { tok, line: l, column: col });
    }
    out.push(Spanned { tok: Tok::Eof, line, column });
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [Spanned],
    pos: usize,
}

enum Binding {
    Var(usize),
    Param(Rational),
}

struct Scope {
    dim: usize,
    names: HashMap<String, Binding>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn next(&mut self) -> &'a Spanned {
        let t = &self.toks[self.pos];
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn error_at(&self, at: &Spanned, kind: ParseErrorKind) -> ParseError {
        ParseError { kind, line: at.line, column: at.column }
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        let at = &self.toks[self.pos];
        self.error_at(at, ParseErrorKind::UnexpectedToken { expected: expected.into(), found: at.tok.to_string() })
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.next();
            Ok(())
        } else {
            Err(self.unexpected(&tok.to_string()))
        }
    }

    fn ident(&mut self) -> Result<(&'a Spanned, String), ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => Ok((self.next(), s)),
            _ => Err(self.unexpected("identifier")),
        }
    }

    fn keyword(&mut self, word: &str) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Ident(s) if s == word => {
                self.next();
                Ok(())
            }
            _ => Err(self.unexpected(&format!("`{word}`"))),
        }
    }

    fn at_keyword(&self, word: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == word)
            && matches!(self.toks.get(self.pos + 1).map(|t| &t.tok), Some(Tok::Colon))
    }

    /// `INT ("/" NAT)?`, with the sign already consumed by the caller.
    fn rational_literal(&mut self) -> Result<Rational, ParseError> {
        let start = &self.toks[self.pos];
        let num = match self.peek().clone() {
            Tok::Nat(n) => {
                self.next();
                n
            }
            _ => return Err(self.unexpected("number")),
        };
        let den = if *self.peek() == Tok::Slash {
            self.next();
            match self.peek().clone() {
                Tok::Nat(d) => {
                    self.next();
                    d
                }
                _ => return Err(self.unexpected("denominator")),
            }
        } else {
            String::from("1")
        };
        parse_rational(&format!("{num}/{den}")).ok_or_else(|| self.error_at(start, ParseErrorKind::ZeroDenominator))
    }

    fn mapdef(&mut self) -> Result<MapSpec, ParseError> {
        self.keyword("map")?;
        let (_, name) = self.ident()?;
        self.expect(Tok::LBrace)?;

        let mut scope = Scope { dim: 0, names: HashMap::new() };
        let mut vars = Vec::new();
        self.keyword("vars")?;
        self.expect(Tok::Colon)?;
        loop {
            let (at, v) = self.ident()?;
            if scope.names.contains_key(&v) {
                return Err(self.error_at(at, ParseErrorKind::DuplicateDeclaration(v)));
            }
            scope.names.insert(v.clone(), Binding::Var(vars.len()));
            vars.push(v);
            if *self.peek() != Tok::Comma {
                break;
            }
            self.next();
        }
        scope.dim = vars.len();

        let mut params = Vec::new();
        if self.at_keyword("params") {
            self.next();
            self.next();
            loop {
                let (at, p) = self.ident()?;
                if scope.names.contains_key(&p) {
                    return Err(self.error_at(at, ParseErrorKind::DuplicateDeclaration(p)));
                }
                self.expect(Tok::Eq)?;
                let negative = *self.peek() == Tok::Minus;
                if negative {
                    self.next();
                }
                if !matches!(self.peek(), Tok::Nat(_)) {
                    let here = &self.toks[self.pos];
                    return Err(self.error_at(here, ParseErrorKind::NonRationalParameter(p)));
                }
                let mut value = self.rational_literal()?;
                if negative {
                    value = -value;
                }
                if !matches!(self.peek(), Tok::Comma | Tok::Ident(_) | Tok::RBrace) {
                    let here = &self.toks[self.pos];
                    return Err(self.error_at(here, ParseErrorKind::NonRationalParameter(p)));
                }
                scope.names.insert(p.clone(), Binding::Param(value.clone()));
                params.push((p, value));
                if *self.peek() != Tok::Comma {
                    break;
                }
                self.next();
            }
        }

        let mut components: Vec<Option<Polynomial<Rational>>> = vec![None; vars.len()];
        loop {
            if *self.peek() == Tok::RBrace {
                break;
            }
            let (at, target) = self.ident()?;
            let index = match scope.names.get(&target) {
                Some(Binding::Var(i)) => *i,
                Some(Binding::Param(_)) => return Err(self.error_at(at, ParseErrorKind::RuleForNonVariable(target))),
                None => return Err(self.error_at(at, ParseErrorKind::UndeclaredIdentifier(target))),
            };
            if components[index].is_some() {
                return Err(self.error_at(at, ParseErrorKind::DuplicateRule(target)));
            }
            self.expect(Tok::Arrow)?;
            components[index] = Some(self.expr(&scope)?);
        }
        let close = self.next();
        let components = components
            .into_iter()
            .zip(&vars)
            .map(|(c, v)| c.ok_or_else(|| self.error_at(close, ParseErrorKind::MissingRule(v.clone()))))
            .collect::<Result<_, _>>()?;
        Ok(MapSpec { name, vars, params, components })
    }

    fn expr(&mut self, scope: &Scope) -> Result<Polynomial<Rational>, ParseError> {
        let mut acc = self.term(scope)?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.next();
                    acc = &acc + &self.term(scope)?;
                }
                Tok::Minus => {
                    self.next();
                    acc = &acc - &self.term(scope)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self, scope: &Scope) -> Result<Polynomial<Rational>, ParseError> {
        let mut acc = self.factor(scope)?;
        while *self.peek() == Tok::Star {
            self.next();
            acc = &acc * &self.factor(scope)?;
        }
        Ok(acc)
    }

    fn factor(&mut self, scope: &Scope) -> Result<Polynomial<Rational>, ParseError> {
        if *self.peek() == Tok::Minus {
            self.next();
            return Ok(-&self.factor(scope)?);
        }
        let mut base = self.primary(scope)?;
        while *self.peek() == Tok::Caret {
            self.next();
            let at = &self.toks[self.pos];
            let Tok::Nat(e) = self.peek().clone() else {
                return Err(self.unexpected("natural exponent"));
            };
            self.next();
            let exp = e
                .parse::<u32>()
                .ok()
                .filter(|&e| e <= MAX_EXPONENT)
                .ok_or_else(|| self.error_at(at, ParseErrorKind::ExponentTooLarge(e)))?;
            base = base.pow(exp);
        }
        Ok(base)
    }

    fn primary(&mut self, scope: &Scope) -> Result<Polynomial<Rational>, ParseError> {
        match self.peek().clone() {
            Tok::Nat(_) => Ok(Polynomial::constant(scope.dim, self.rational_literal()?)),
            Tok::Ident(name) => {
                let at = self.next();
                match scope.names.get(&name) {
                    Some(Binding::Var(i)) => Ok(Polynomial::var(scope.dim, *i)),
                    Some(Binding::Param(v)) => Ok(Polynomial::constant(scope.dim, v.clone())),
                    None => Err(self.error_at(at, ParseErrorKind::UndeclaredIdentifier(name))),
                }
            }
            Tok::LParen => {
                self.next();
                let inner = self.expr(scope)?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            _ => Err(self.unexpected("expression")),
        }
    }
}

/// Parses every `map` block in `text`.
pub fn parse_map_file(text: &str) -> Result<Vec<MapSpec>, ParseError> {
    let toks = lex(text)?;
    let mut parser = Parser { toks: &toks, pos: 0 };
    let mut specs = Vec::new();
    while *parser.peek() != Tok::Eof {
        specs.push(parser.mapdef()?);
    }
    if specs.is_empty() {
        let end = &toks[toks.len() - 1];
        return Err(ParseError { kind: ParseErrorKind::Empty, line: end.line, column: end.column });
    }
    Ok(specs)
}

/// The first map of a file.
pub fn parse_map(text: &str) -> Result<MapSpec, ParseError> {
    Ok(parse_map_file(text)?.swap_remove(0))
}

/// The `gamma3` example file.
pub const GAMMA3_MAP: &str = include_str!("../maps/gamma3.map");
