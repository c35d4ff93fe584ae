//! Lexer and recursive-descent parser for the session language.
//!
//! The grammar (sketch):
//!
//! ```text
//! script    := statement (';' statement)*
//! statement := 'field' 'GF' '(' INT ')' '(' idents ')'
//!            | 'let' IDENT '=' vexpr
//!            | 'aniso' vexpr | 'defect' vexpr 'over' vexpr | 'norm' vexpr
//!            | 'pindep' '{' vexprs '}' | 'pbasis' '{' vexprs '}'
//!            | 'minimal' vexpr | 'tower' vexpr
//!            | 'pisp' vexpr ['--max-gens' INT] ['--extra' vexprs]
//!            | 'fsp-min' vexpr | 'fsp-pfister' pfisterlit
//!            | 'fsp-neighbor' INT INT vexpr
//!            | 'verify-table1' INT | 'selftest' | vexpr
//! vexpr     := osum ; osum := oprod ('(+)' oprod)*
//! oprod     := sum ('(*)' sum)*
//! sum       := product (('+'|'-') product)*
//! product   := unary (('*'|'/') unary)*
//! unary     := '-' unary | postfix ; postfix := atom ('^' int)*
//! atom      := INT | IDENT | '(' vexpr ')' | '<' ... '>' | '<<' ... '>>'
//!            | 'extend' extitem (',' extitem)*
//! extitem   := product '^' '(' 1 '/' INT ')'
//! ```
//!
//! Precedence: `^` > unary `-` > `* /` > `+ -`; `(*)` binds tighter than
//! `(+)`. Exponents are integers; fractional exponents appear only inside
//! `extend`. Errors carry line and column.

use std::fmt;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone)]
pub struct ParseError {
    pub pos: Pos,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at {}: {}", self.pos, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, PartialEq, Eq, Debug)]
enum Tok {
    Ident(String),
    Int(u64),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LAngle,
    RAngle,
    LBrace,
    RBrace,
    Comma,
    Semi,
    Eq,
    OPlus,
    OTimes,
    Flag(String),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Plus => write!(f, "`+`"),
            Tok::Minus => write!(f, "`-`"),
            Tok::Star => write!(f, "`*`"),
            Tok::Slash => write!(f, "`/`"),
            Tok::Caret => write!(f, "`^`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::LAngle => write!(f, "`<`"),
            Tok::RAngle => write!(f, "`>`"),
            Tok::LBrace => write!(f, "`{{`"),
            Tok::RBrace => write!(f, "`}}`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::Semi => write!(f, "`;`"),
            Tok::Eq => write!(f, "`=`"),
            Tok::OPlus => write!(f, "`(+)`"),
            Tok::OTimes => write!(f, "`(*)`"),
            Tok::Flag(s) => write!(f, "`--{s}`"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

fn lex(source: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = source.chars().collect();
    let mut i = 0usize;
    let mut line = 1usize;
    let mut col = 1usize;
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        let mut advance = |i: &mut usize, col: &mut usize, n: usize| {
            *i += n;
            *col += n;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => advance(&mut i, &mut col, 1),
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '(' => {
                if i + 2 < chars.len() && chars[i + 1] == '+' && chars[i + 2] == ')' {
                    out.push((Tok::OPlus, pos));
                    advance(&mut i, &mut col, 3);
                } else if i + 2 < chars.len() && chars[i + 1] == '*' && chars[i + 2] == ')' {
                    out.push((Tok::OTimes, pos));
                    advance(&mut i, &mut col, 3);
                } else {
                    out.push((Tok::LParen, pos));
                    advance(&mut i, &mut col, 1);
                }
            }
            ')' => {
                out.push((Tok::RParen, pos));
                advance(&mut i, &mut col, 1);
            }
            '<' => {
                out.push((Tok::LAngle, pos));
                advance(&mut i, &mut col, 1);
            }
            '>' => {
                out.push((Tok::RAngle, pos));
                advance(&mut i, &mut col, 1);
            }
            '{' => {
                out.push((Tok::LBrace, pos));
                advance(&mut i, &mut col, 1);
            }
            '}' => {
                out.push((Tok::RBrace, pos));
                advance(&mut i, &mut col, 1);
            }
            ',' => {
                out.push((Tok::Comma, pos));
                advance(&mut i, &mut col, 1);
            }
            ';' => {
                out.push((Tok::Semi, pos));
                advance(&mut i, &mut col, 1);
            }
            '=' => {
                out.push((Tok::Eq, pos));
                advance(&mut i, &mut col, 1);
            }
            '+' => {
                out.push((Tok::Plus, pos));
                advance(&mut i, &mut col, 1);
            }
            '-' => {
                if i + 1 < chars.len() && chars[i + 1] == '-' {
                    let mut j = i + 2;
                    let mut name = String::new();
                    while j < chars.len()
                        && (chars[j].is_ascii_alphanumeric() || chars[j] == '-' || chars[j] == '_')
                    {
                        name.push(chars[j]);
                        j += 1;
                    }
                    if name.is_empty() {
                        return Err(ParseError {
                            pos,
                            message: "expected a flag name after `--`".into(),
                        });
                    }
                    let len = 2 + name.len();
                    out.push((Tok::Flag(name), pos));
                    advance(&mut i, &mut col, len);
                } else {
                    out.push((Tok::Minus, pos));
                    advance(&mut i, &mut col, 1);
                }
            }
            '*' => {
                out.push((Tok::Star, pos));
                advance(&mut i, &mut col, 1);
            }
            '/' => {
                if i + 1 < chars.len() && chars[i + 1] == '/' {
                    while i < chars.len() && chars[i] != '\n' {
                        i += 1;
                    }
                } else {
                    out.push((Tok::Slash, pos));
                    advance(&mut i, &mut col, 1);
                }
            }
            '^' => {
                out.push((Tok::Caret, pos));
                advance(&mut i, &mut col, 1);
            }
            c if c.is_ascii_digit() => {
                let mut j = i;
                let mut value: u64 = 0;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    value = value
                        .checked_mul(10)
                        .and_then(|v| v.checked_add(chars[j] as u64 - '0' as u64))
                        .ok_or_else(|| ParseError {
                            pos,
                            message: "integer literal overflows".into(),
                        })?;
                    j += 1;
                }
                let len = j - i;
                out.push((Tok::Int(value), pos));
                advance(&mut i, &mut col, len);
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut j = i;
                let mut name = String::new();
                while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                    name.push(chars[j]);
                    j += 1;
                }
                let len = name.len();
                out.push((Tok::Ident(name), pos));
                advance(&mut i, &mut col, len);
            }
            other => {
                return Err(ParseError {
                    pos,
                    message: format!("unexpected character `{other}`"),
                })
            }
        }
    }
    out.push((
        Tok::Eof,
        Pos {
            line,
            col,
        },
    ));
    Ok(out)
}

/// An expression over elements, forms and extensions; typing happens at
/// evaluation time.
#[derive(Clone, Debug)]
pub enum Expr {
    Int(u64, Pos),
    Var(String, Pos),
    Neg(Box<Expr>, Pos),
    Add(Box<Expr>, Box<Expr>, Pos),
    Sub(Box<Expr>, Box<Expr>, Pos),
    Mul(Box<Expr>, Box<Expr>, Pos),
    Div(Box<Expr>, Box<Expr>, Pos),
    Pow(Box<Expr>, i64, Pos),
    FormLit(Vec<Expr>, Pos),
    PfisterLit(Vec<Expr>, Pos),
    OSum(Box<Expr>, Box<Expr>, Pos),
    OTensor(Box<Expr>, Box<Expr>, Pos),
    /// `extend base^(1/q), ...` with `q` the literal root degree.
    Extend(Vec<(Expr, u64)>, Pos),
}

impl Expr {
    pub fn pos(&self) -> Pos {
        match self {
            Expr::Int(_, p)
            | Expr::Var(_, p)
            | Expr::Neg(_, p)
            | Expr::Add(_, _, p)
            | Expr::Sub(_, _, p)
            | Expr::Mul(_, _, p)
            | Expr::Div(_, _, p)
            | Expr::Pow(_, _, p)
            | Expr::FormLit(_, p)
            | Expr::PfisterLit(_, p)
            | Expr::OSum(_, _, p)
            | Expr::OTensor(_, _, p)
            | Expr::Extend(_, p) => *p,
        }
    }
}

#[derive(Clone, Debug)]
pub enum Statement {
    Field { p: u64, vars: Vec<String>, pos: Pos },
    Let { name: String, expr: Expr, pos: Pos },
    Aniso(Expr),
    Defect { form: Expr, ext: Expr },
    Norm(Expr),
    PIndep(Vec<Expr>),
    PBasis(Vec<Expr>),
    Minimal(Expr),
    Tower(Expr),
    Pisp { form: Expr, max_gens: Option<usize>, extra: Vec<Expr> },
    FspMin(Expr),
    FspPfister { gens: Vec<Expr>, pos: Pos },
    FspNeighbor { n: usize, s: usize, d: Expr, pos: Pos },
    VerifyTable { p: u64, pos: Pos },
    Selftest { pos: Pos },
    Eval(Expr),
}

pub fn parse(source: &str) -> Result<Vec<Statement>, ParseError> {
    let tokens = lex(source)?;
    let mut p = Parser { tokens, idx: 0 };
    p.script()
}

struct Parser {
    tokens: Vec<(Tok, Pos)>,
    idx: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.idx].0
    }

    fn peek_at(&self, offset: usize) -> &Tok {
        let i = (self.idx + offset).min(self.tokens.len() - 1);
        &self.tokens[i].0
    }

    fn pos(&self) -> Pos {
        self.tokens[self.idx].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.tokens[self.idx].0.clone();
        if self.idx + 1 < self.tokens.len() {
            self.idx += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!("expected {tok}, found {}", self.peek())))
        }
    }

    fn error(&self, message: String) -> ParseError {
        ParseError {
            pos: self.pos(),
            message,
        }
    }

    fn expect_int(&mut self) -> Result<u64, ParseError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(n)
            }
            other => Err(self.error(format!("expected an integer, found {other}"))),
        }
    }

    fn expect_ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            other => Err(self.error(format!("expected an identifier, found {other}"))),
        }
    }

    fn script(&mut self) -> Result<Vec<Statement>, ParseError> {
        let mut out = Vec::new();
        loop {
            while *self.peek() == Tok::Semi {
                self.bump();
            }
            if *self.peek() == Tok::Eof {
                return Ok(out);
            }
            out.push(self.statement()?);
            match self.peek() {
                Tok::Semi => {
                    self.bump();
                }
                Tok::Eof => return Ok(out),
                other => {
                    return Err(self.error(format!(
                        "expected `;` or end of input after a statement, found {other}"
                    )))
                }
            }
        }
    }

    /// Merges `IDENT - IDENT/INT` command names like `fsp-min`,
    /// `verify-table1`; only applies at statement position.
    fn command_name(&self) -> Option<(String, usize)> {
        let Tok::Ident(first) = self.peek() else {
            return None;
        };
        if *self.peek_at(1) == Tok::Minus {
            match self.peek_at(2) {
                Tok::Ident(second) => return Some((format!("{first}-{second}"), 3)),
                Tok::Int(n) => return Some((format!("{first}-{n}"), 3)),
                _ => {}
            }
        }
        Some((first.clone(), 1))
    }

    fn statement(&mut self) -> Result<Statement, ParseError> {
        let pos = self.pos();
        if let Some((name, len)) = self.command_name() {
            match name.as_str() {
                "field" => {
                    self.idx += len;
                    return self.field_statement(pos);
                }
                "let" => {
                    self.idx += len;
                    let name = self.expect_ident()?;
                    self.expect(Tok::Eq)?;
                    let expr = self.vexpr()?;
                    return Ok(Statement::Let { name, expr, pos });
                }
                "aniso" => {
                    self.idx += len;
                    return Ok(Statement::Aniso(self.vexpr()?));
                }
                "defect" => {
                    self.idx += len;
                    let form = self.vexpr()?;
                    match self.peek() {
                        Tok::Ident(kw) if kw == "over" => {
                            self.bump();
                        }
                        other => {
                            return Err(self.error(format!(
                                "expected `over` in a defect command, found {other}"
                            )))
                        }
                    }
                    let ext = self.vexpr()?;
                    return Ok(Statement::Defect { form, ext });
                }
                "norm" => {
                    self.idx += len;
                    return Ok(Statement::Norm(self.vexpr()?));
                }
                "pindep" => {
                    self.idx += len;
                    return Ok(Statement::PIndep(self.braced_list()?));
                }
                "pbasis" => {
                    self.idx += len;
                    return Ok(Statement::PBasis(self.braced_list()?));
                }
                "minimal" => {
                    self.idx += len;
                    return Ok(Statement::Minimal(self.vexpr()?));
                }
                "tower" => {
                    self.idx += len;
                    return Ok(Statement::Tower(self.vexpr()?));
                }
                "pisp" => {
                    self.idx += len;
                    let form = self.vexpr()?;
                    let mut max_gens = None;
                    let mut extra = Vec::new();
                    while let Tok::Flag(flag) = self.peek().clone() {
                        self.bump();
                        match flag.as_str() {
                            "max-gens" => {
                                max_gens = Some(self.expect_int()? as usize);
                            }
                            "extra" => {
                                extra.push(self.vexpr()?);
                                while *self.peek() == Tok::Comma {
                                    self.bump();
                                    extra.push(self.vexpr()?);
                                }
                            }
                            other => {
                                return Err(
                                    self.error(format!("unknown pisp option `--{other}`"))
                                )
                            }
                        }
                    }
                    return Ok(Statement::Pisp {
                        form,
                        max_gens,
                        extra,
                    });
                }
                "fsp-min" => {
                    self.idx += len;
                    return Ok(Statement::FspMin(self.vexpr()?));
                }
                "fsp-pfister" => {
                    self.idx += len;
                    let pos = self.pos();
                    let expr = self.vexpr()?;
                    if let Expr::PfisterLit(gens, _) = expr {
                        return Ok(Statement::FspPfister { gens, pos });
                    }
                    return Err(ParseError {
                        pos,
                        message: "fsp-pfister expects a quasi-Pfister literal `<<...>>`".into(),
                    });
                }
                "fsp-neighbor" => {
                    self.idx += len;
                    let n = self.expect_int()? as usize;
                    let s = self.expect_int()? as usize;
                    let d = self.vexpr()?;
                    return Ok(Statement::FspNeighbor { n, s, d, pos });
                }
                "verify-table1" => {
                    self.idx += len;
                    let p = self.expect_int()?;
                    return Ok(Statement::VerifyTable { p, pos });
                }
                "selftest" => {
                    self.idx += len;
                    return Ok(Statement::Selftest { pos });
                }
                _ => {}
            }
        }
        Ok(Statement::Eval(self.vexpr()?))
    }

    fn field_statement(&mut self, pos: Pos) -> Result<Statement, ParseError> {
        match self.peek().clone() {
            Tok::Ident(gf) if gf == "GF" => {
                self.bump();
            }
            other => return Err(self.error(format!("expected `GF`, found {other}"))),
        }
        self.expect(Tok::LParen)?;
        let p = self.expect_int()?;
        self.expect(Tok::RParen)?;
        let mut vars = Vec::new();
        if *self.peek() == Tok::LParen {
            self.bump();
            if *self.peek() != Tok::RParen {
                loop {
                    vars.push(self.expect_ident()?);
                    if *self.peek() == Tok::Comma {
                        self.bump();
                    } else {
                        break;
                    }
                }
            }
            self.expect(Tok::RParen)?;
        }
        Ok(Statement::Field { p, vars, pos })
    }

    fn braced_list(&mut self) -> Result<Vec<Expr>, ParseError> {
        self.expect(Tok::LBrace)?;
        let mut out = Vec::new();
        if *self.peek() != Tok::RBrace {
            loop {
                out.push(self.vexpr()?);
                if *self.peek() == Tok::Comma {
                    self.bump();
                } else {
                    break;
                }
            }
        }
        self.expect(Tok::RBrace)?;
        Ok(out)
    }

    fn vexpr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.oprod()?;
        while *self.peek() == Tok::OPlus {
            let pos = self.pos();
            self.bump();
            let rhs = self.oprod()?;
            lhs = Expr::OSum(Box::new(lhs), Box::new(rhs), pos);
        }
        Ok(lhs)
    }

    fn oprod(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.sum()?;
        while *self.peek() == Tok::OTimes {
            let pos = self.pos();
            self.bump();
            let rhs = self.sum()?;
            lhs = Expr::OTensor(Box::new(lhs), Box::new(rhs), pos);
        }
        Ok(lhs)
    }

    fn sum(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.product(false)?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    let pos = self.pos();
                    self.bump();
                    let rhs = self.product(false)?;
                    lhs = Expr::Add(Box::new(lhs), Box::new(rhs), pos);
                }
                Tok::Minus => {
                    let pos = self.pos();
                    self.bump();
                    let rhs = self.product(false)?;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(rhs), pos);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn product(&mut self, in_extend: bool) -> Result<Expr, ParseError> {
        let mut lhs = self.unary(in_extend)?;
        loop {
            match self.peek() {
                Tok::Star => {
                    let pos = self.pos();
                    self.bump();
                    let rhs = self.unary(in_extend)?;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(rhs), pos);
                }
                Tok::Slash => {
                    let pos = self.pos();
                    self.bump();
                    let rhs = self.unary(in_extend)?;
                    lhs = Expr::Div(Box::new(lhs), Box::new(rhs), pos);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self, in_extend: bool) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Minus {
            let pos = self.pos();
            self.bump();
            let inner = self.unary(in_extend)?;
            return Ok(Expr::Neg(Box::new(inner), pos));
        }
        self.postfix(in_extend)
    }

    fn postfix(&mut self, in_extend: bool) -> Result<Expr, ParseError> {
        let mut base = self.atom()?;
        while *self.peek() == Tok::Caret {
            // inside `extend`, leave `^(1/q)` for the root syntax
            if in_extend
                && *self.peek_at(1) == Tok::LParen
                && matches!(self.peek_at(2), Tok::Int(_))
                && *self.peek_at(3) == Tok::Slash
            {
                return Ok(base);
            }
            let pos = self.pos();
            self.bump();
            let exponent = self.exponent()?;
            base = Expr::Pow(Box::new(base), exponent, pos);
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<i64, ParseError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(n as i64)
            }
            Tok::Minus => {
                self.bump();
                let n = self.expect_int()?;
                Ok(-(n as i64))
            }
            Tok::LParen => {
                self.bump();
                let sign = if *self.peek() == Tok::Minus {
                    self.bump();
                    -1
                } else {
                    1
                };
                let n = self.expect_int()?;
                self.expect(Tok::RParen)?;
                Ok(sign * n as i64)
            }
            other => Err(self.error(format!("expected an integer exponent, found {other}"))),
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Expr::Int(n, pos))
            }
            Tok::Ident(name) if name == "extend" => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    items.push(self.extend_item()?);
                    if *self.peek() == Tok::Comma {
                        self.bump();
                    } else {
                        break;
                    }
                }
                Ok(Expr::Extend(items, pos))
            }
            Tok::Ident(name) => {
                self.bump();
                Ok(Expr::Var(name, pos))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.vexpr()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Tok::LAngle => {
                self.bump();
                if *self.peek() == Tok::LAngle {
                    self.bump();
                    let mut gens = Vec::new();
                    if *self.peek() != Tok::RAngle {
                        loop {
                            gens.push(self.vexpr()?);
                            if *self.peek() == Tok::Comma {
                                self.bump();
                            } else {
                                break;
                            }
                        }
                    }
                    self.expect(Tok::RAngle)?;
                    self.expect(Tok::RAngle)?;
                    Ok(Expr::PfisterLit(gens, pos))
                } else {
                    let mut coeffs = Vec::new();
                    if *self.peek() != Tok::RAngle {
                        loop {
                            coeffs.push(self.vexpr()?);
                            if *self.peek() == Tok::Comma {
                                self.bump();
                            } else {
                                break;
                            }
                        }
                    }
                    self.expect(Tok::RAngle)?;
                    Ok(Expr::FormLit(coeffs, pos))
                }
            }
            other => Err(self.error(format!("expected an expression, found {other}"))),
        }
    }

    fn extend_item(&mut self) -> Result<(Expr, u64), ParseError> {
        let base = self.product(true)?;
        self.expect(Tok::Caret)?;
        self.expect(Tok::LParen)?;
        let one = self.expect_int()?;
        if one != 1 {
            return Err(self.error("root exponents must have the shape 1/q".into()));
        }
        self.expect(Tok::Slash)?;
        let q = self.expect_int()?;
        self.expect(Tok::RParen)?;
        Ok((base, q))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lex_operator_forms() {
        let toks = lex("<1,x> (+) <y> (*) <1>").unwrap();
        assert!(toks.iter().any(|(t, _)| *t == Tok::OPlus));
        assert!(toks.iter().any(|(t, _)| *t == Tok::OTimes));
    }

    #[test]
    fn parse_field_and_command() {
        let stmts = parse("field GF(2)(x,y); aniso <x, y, x+y>").unwrap();
        assert_eq!(stmts.len(), 2);
        assert!(matches!(&stmts[0], Statement::Field { p: 2, vars, .. } if vars == &["x", "y"]));
        assert!(matches!(&stmts[1], Statement::Aniso(_)));
    }

    #[test]
    fn parse_defect_over_extend() {
        let stmts = parse("defect <<x,y>> over extend x^(1/2)").unwrap();
        match &stmts[0] {
            Statement::Defect { ext, .. } => match ext {
                Expr::Extend(items, _) => {
                    assert_eq!(items.len(), 1);
                    assert_eq!(items[0].1, 2);
                }
                other => panic!("expected extend, got {other:?}"),
            },
            other => panic!("expected defect, got {other:?}"),
        }
    }

    #[test]
    fn parse_extend_with_powers_and_ratios() {
        let stmts = parse("let E = extend x^2/y^(1/4), y^(1/2)").unwrap();
        match &stmts[0] {
            Statement::Let { expr: Expr::Extend(items, _), .. } => {
                assert_eq!(items.len(), 2);
                assert_eq!(items[0].1, 4);
                assert_eq!(items[1].1, 2);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parse_errors_carry_position() {
        let err = parse("field GF(2)(x);\naniso <x, ,>").unwrap_err();
        assert_eq!(err.pos.line, 2);
        let err2 = parse("aniso <x> extra").unwrap_err();
        assert!(err2.message.contains("expected `;`"));
    }

    #[test]
    fn parse_pisp_flags() {
        let stmts = parse("pisp <1,x> --max-gens 3 --extra x+1, x*y").unwrap();
        match &stmts[0] {
            Statement::Pisp {
                max_gens, extra, ..
            } => {
                assert_eq!(*max_gens, Some(3));
                assert_eq!(extra.len(), 2);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parse_hyphenated_commands() {
        assert!(matches!(
            parse("fsp-min <1,x>").unwrap()[0],
            Statement::FspMin(_)
        ));
        assert!(matches!(
            parse("fsp-neighbor 2 1 z").unwrap()[0],
            Statement::FspNeighbor { n: 2, s: 1, .. }
        ));
        assert!(matches!(
            parse("verify-table1 5").unwrap()[0],
            Statement::VerifyTable { p: 5, .. }
        ));
        assert!(parse("fsp-pfister <1,x>").is_err());
    }

    #[test]
    fn negative_exponents() {
        let stmts = parse("x^-2; x^(-3)").unwrap();
        assert_eq!(stmts.len(), 2);
        match &stmts[0] {
            Statement::Eval(Expr::Pow(_, e, _)) => assert_eq!(*e, -2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn comments_are_skipped() {
        let stmts = parse("# leading comment\nfield GF(3)(x) // trailing\n; aniso <x>").unwrap();
        assert_eq!(stmts.len(), 2);
    }
}
