use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;

use super::{BinOp, Binder, Formula, Nbhd, Quantifier, Term};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyntaxError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl core::error::Error for SyntaxError {}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(BigInt),
    LParen,
    RParen,
    Plus,
    Minus,
    Star,
    Slash,
    Eq,
    Ne,
    Arrow,
    Colon,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Num(n) => write!(f, "`{n}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::Minus => f.write_str("`-`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Slash => f.write_str("`/`"),
            Tok::Eq => f.write_str("`=`"),
            Tok::Ne => f.write_str("`!=`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

const KEYWORDS: [&str; 6] = ["forall", "exists", "in", "and", "or", "not"];

fn lex(text: &str) -> Result<Vec<(Tok, usize, usize)>, SyntaxError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut line, mut col) = (1, 1);
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        let (l0, c0) = (line, col);
        let advance = |n: usize, k: &mut usize, col: &mut usize| {
            *k += n;
            *col += n;
        };
        if c == '\n' {
            k += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            advance(1, &mut k, &mut col);
            continue;
        }
        if c == '#' {
            while k < chars.len() && chars[k] != '\n' {
                k += 1;
            }
            continue;
        }
        let next = chars.get(k + 1).copied();
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '+' => Tok::Plus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '=' => Tok::Eq,
            ':' => Tok::Colon,
            '-' if next == Some('>') => {
                advance(1, &mut k, &mut col);
                Tok::Arrow
            }
            '-' => Tok::Minus,
            '!' if next == Some('=') => {
                advance(1, &mut k, &mut col);
                Tok::Ne
            }
            d if d.is_ascii_digit() => {
                let start = k;
                while k < chars.len() && chars[k].is_ascii_digit() {
                    k += 1;
                }
                col += k - start;
                let s: String = chars[start..k].iter().collect();
                out.push((Tok::Num(s.parse().expect("digits")), l0, c0));
                continue;
            }
            a if a.is_ascii_alphabetic() || a == '_' => {
                let start = k;
                while k < chars.len() && (chars[k].is_ascii_alphanumeric() || chars[k] == '_' || chars[k] == '\'') {
                    k += 1;
                }
                col += k - start;
                out.push((Tok::Ident(chars[start..k].iter().collect()), l0, c0));
                continue;
            }
            other => {
                return Err(SyntaxError {
                    line: l0,
                    column: c0,
                    message: alloc::format!("unexpected character `{other}`"),
                })
            }
        };
        advance(1, &mut k, &mut col);
        out.push((tok, l0, c0));
    }
    out.push((Tok::End, line, col));
    Ok(out)
}

fn is_nbhd_name(s: &str) -> bool {
    s.chars().next().is_some_and(|c| c.is_ascii_uppercase())
}

struct Parser {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    scope: Vec<String>,
}

type PResult<T> = Result<T, SyntaxError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, n: usize) -> &Tok {
        &self.toks[(self.pos + n).min(self.toks.len() - 1)].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_at(&self, pos: usize, message: impl Into<String>) -> SyntaxError {
        let (_, line, column) = self.toks[pos];
        SyntaxError {
            line,
            column,
            message: message.into(),
        }
    }

    fn error(&self, message: impl Into<String>) -> SyntaxError {
        self.error_at(self.pos, message)
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn expect(&mut self, tok: Tok) -> PResult<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(alloc::format!("expected {tok}, found {}", self.peek())))
        }
    }

    fn ident(&mut self, what: &str) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.bump();
                Ok(s)
            }
            other => Err(self.error(alloc::format!("expected {what}, found {other}"))),
        }
    }

    fn formula(&mut self) -> PResult<Formula> {
        if self.is_kw("forall") || self.is_kw("exists") {
            return self.quantified();
        }
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.formula()?;
            return Ok(Formula::Implies(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn quantified(&mut self) -> PResult<Formula> {
        let q = if self.is_kw("forall") { Quantifier::Forall } else { Quantifier::Exists };
        self.bump();
        let at = self.pos;
        let name = self.ident("a variable")?;
        if name == "i" {
            return Err(self.error_at(at, "`i` is a constant and cannot be bound"));
        }
        if self.scope.contains(&name) {
            return Err(self.error_at(at, alloc::format!("`{name}` is already bound")));
        }
        let binder = if is_nbhd_name(&name) {
            let topology = if self.is_kw("in") {
                self.bump();
                Some(self.ident("a topology name")?)
            } else {
                None
            };
            Binder::Nbhd { name: name.clone(), topology }
        } else {
            let nonzero = if *self.peek() == Tok::Ne {
                self.bump();
                match self.bump() {
                    Tok::Num(n) if n == BigInt::from(0) => true,
                    _ => return Err(self.error_at(self.pos - 1, "only `!= 0` may follow a bound variable")),
                }
            } else {
                false
            };
            Binder::Field { name: name.clone(), nonzero }
        };
        if *self.peek() == Tok::Colon {
            self.bump();
        }
        self.scope.push(name);
        let body = self.formula();
        self.scope.pop();
        Ok(Formula::Quant(q, binder, Box::new(body?)))
    }

    fn disjunction(&mut self) -> PResult<Formula> {
        let mut lhs = self.conjunction()?;
        while self.is_kw("or") {
            self.bump();
            let rhs = self.conjunction()?;
            lhs = Formula::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> PResult<Formula> {
        let mut lhs = self.unary()?;
        while self.is_kw("and") {
            self.bump();
            let rhs = self.unary()?;
            lhs = Formula::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Formula> {
        if self.is_kw("not") {
            self.bump();
            return Ok(Formula::Not(Box::new(self.unary()?)));
        }
        if self.is_kw("forall") || self.is_kw("exists") {
            return self.quantified();
        }
        if *self.peek() == Tok::LParen {
            let save = self.pos;
            self.bump();
            if let Ok(f) = self.formula() {
                if *self.peek() == Tok::RParen {
                    self.bump();
                    let continues_term = matches!(
                        self.peek(),
                        Tok::Plus | Tok::Minus | Tok::Star | Tok::Slash | Tok::Eq | Tok::Ne
                    ) || self.is_kw("in");
                    if !continues_term {
                        return Ok(f);
                    }
                }
            }
            self.pos = save;
        }
        self.atom()
    }

    fn atom(&mut self) -> PResult<Formula> {
        let lhs = self.term()?;
        match self.peek() {
            Tok::Eq => {
                self.bump();
                Ok(Formula::Eq(lhs, self.term()?))
            }
            Tok::Ne => {
                self.bump();
                Ok(Formula::Ne(lhs, self.term()?))
            }
            Tok::Ident(s) if s == "in" => {
                self.bump();
                Ok(Formula::In(lhs, self.nbhd()?))
            }
            other => Err(self.error(alloc::format!("expected `=`, `!=` or `in`, found {other}"))),
        }
    }

    fn nbhd_var(&mut self) -> PResult<String> {
        let at = self.pos;
        let name = self.ident("a neighbourhood variable")?;
        if !is_nbhd_name(&name) {
            return Err(self.error_at(at, alloc::format!("`{name}` is a field variable, not a neighbourhood")));
        }
        Ok(name)
    }

    fn nbhd(&mut self) -> PResult<Nbhd> {
        if matches!(self.peek(), Tok::Ident(s) if is_nbhd_name(s)) {
            return Ok(Nbhd {
                var: self.nbhd_var()?,
                scale: None,
            });
        }
        if let Tok::Ident(s) = self.peek() {
            if s != "i" && !KEYWORDS.contains(&s.as_str()) && *self.peek_at(1) != Tok::Star {
                return Err(self.error(alloc::format!("`{s}` is a field variable, not a neighbourhood")));
            }
        }
        let mut scale = self.signed()?;
        loop {
            self.expect(Tok::Star)?;
            if matches!(self.peek(), Tok::Ident(s) if is_nbhd_name(s)) {
                return Ok(Nbhd {
                    var: self.nbhd_var()?,
                    scale: Some(scale),
                });
            }
            let rhs = self.signed()?;
            scale = Term::Bin(BinOp::Mul, Box::new(scale), Box::new(rhs));
        }
    }

    fn term(&mut self) -> PResult<Term> {
        let mut lhs = self.product()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.product()?;
            lhs = Term::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn product(&mut self) -> PResult<Term> {
        let mut lhs = self.signed()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            // `c*U` belongs to the membership atom, not to the term
            if op == BinOp::Mul && matches!(self.peek_at(1), Tok::Ident(s) if is_nbhd_name(s)) {
                return Ok(lhs);
            }
            self.bump();
            let rhs = self.signed()?;
            lhs = Term::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn signed(&mut self) -> PResult<Term> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Term::Neg(Box::new(self.signed()?)));
        }
        self.primary()
    }

    fn primary(&mut self) -> PResult<Term> {
        let at = self.pos;
        match self.bump() {
            Tok::Num(n) => Ok(Term::Num(n)),
            Tok::Ident(s) if s == "i" => Ok(Term::Imag),
            Tok::Ident(s) if KEYWORDS.contains(&s.as_str()) => {
                Err(self.error_at(at, alloc::format!("expected a term, found keyword `{s}`")))
            }
            Tok::Ident(s) if is_nbhd_name(&s) => Err(self.error_at(
                at,
                alloc::format!("`{s}` is a neighbourhood variable and cannot appear in a term"),
            )),
            Tok::Ident(s) => Ok(Term::Var(s)),
            Tok::LParen => {
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            other => Err(self.error_at(at, alloc::format!("expected a term, found {other}"))),
        }
    }
}

/// Parses a sentence; see the module documentation for the grammar.
pub fn parse(text: &str) -> Result<Formula, SyntaxError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        scope: Vec::new(),
    };
    let f = p.formula()?;
    if *p.peek() != Tok::End {
        return Err(p.error(alloc::format!("unexpected {} after the sentence", p.peek())));
    }
    Ok(f)
}

impl core::str::FromStr for Formula {
    type Err = SyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}
