//! Recursive-descent parsers for the continuous and classical surface grammars.
//!
//! Continuous:
//!
//! ```text
//! formula := atom | "d(" term "," term ")" | "max(" formula {"," formula} ")"
//!          | "min(" formula {"," formula} ")"
//!          | "affine[" rat {"," rat} ";" rat "](" formula {"," formula} ")"
//!          | pl "(" formula ")" | "sup" ident "." formula | "inf" ident "." formula
//!          | "h[" ident ";" pl "](" formula "," formula ")" | rat
//! pl      := "pl{" point {"," point} "}" ["slopes[" rat "," rat "]"]
//! point   := "(" rat "," rat ")"
//! rat     := ["-"] integer ["/" positive-integer]
//! ```
//!
//! Classical: `~`, `&`, `|`, `->` (right associative, loosest), `exists x.`,
//! `forall x.` (scope extends as far right as possible), `=`, `!=`, `true`,
//! `false` and relation application.

use std::collections::BTreeMap;

use crate::error::SyntaxError;
use crate::rational::Rational;
use crate::syntax::classical::ClassicalFormula;
use crate::syntax::formula::{Formula, HNode, Term};
use crate::syntax::pl::PLFunc;
use crate::syntax::signature::{ClassicalSignature, Signature, RESERVED};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Comma,
    Semi,
    Dot,
    Slash,
    Minus,
    Tilde,
    Amp,
    Pipe,
    Arrow,
    Eq,
    Neq,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(s) => format!("number `{s}`"),
            Tok::Eof => "end of input".into(),
            other => format!("`{}`", other.text()),
        }
    }

    fn text(&self) -> &'static str {
        match self {
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::Comma => ",",
            Tok::Semi => ";",
            Tok::Dot => ".",
            Tok::Slash => "/",
            Tok::Minus => "-",
            Tok::Tilde => "~",
            Tok::Amp => "&",
            Tok::Pipe => "|",
            Tok::Arrow => "->",
            Tok::Eq => "=",
            Tok::Neq => "!=",
            _ => "",
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, SyntaxError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let single = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            ',' => Some(Tok::Comma),
            ';' => Some(Tok::Semi),
            '.' => Some(Tok::Dot),
            '/' => Some(Tok::Slash),
            '~' => Some(Tok::Tilde),
            '&' => Some(Tok::Amp),
            '|' => Some(Tok::Pipe),
            '=' => Some(Tok::Eq),
            _ => None,
        };
        if let Some(t) = single {
            out.push((t, start));
            i += 1;
            continue;
        }
        if c == '-' {
            if bytes.get(i + 1) == Some(&b'>') {
                out.push((Tok::Arrow, start));
                i += 2;
            } else {
                out.push((Tok::Minus, start));
                i += 1;
            }
            continue;
        }
        if c == '!' && bytes.get(i + 1) == Some(&b'=') {
            out.push((Tok::Neq, start));
            i += 2;
            continue;
        }
        if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            out.push((Tok::Int(text[start..i].to_string()), start));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            while i < bytes.len()
                && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_' || bytes[i] == b'\'')
            {
                i += 1;
            }
            out.push((Tok::Ident(text[start..i].to_string()), start));
            continue;
        }
        return Err(SyntaxError::Parse {
            pos: start,
            message: format!("unexpected character {c:?}"),
        });
    }
    out.push((Tok::Eof, text.len()));
    Ok(out)
}

/// Symbol resolution: either against a declared signature or by inference.
#[derive(Debug)]
enum Symbols {
    Strict {
        constants: Vec<String>,
        functions: BTreeMap<String, usize>,
        relations: BTreeMap<String, usize>,
    },
    Inferred {
        functions: BTreeMap<String, usize>,
        relations: BTreeMap<String, usize>,
    },
}

impl Symbols {
    fn strict(sig: &ClassicalSignature) -> Self {
        Symbols::Strict {
            constants: sig.constants.clone(),
            functions: sig.functions.iter().cloned().collect(),
            relations: sig.relations.iter().cloned().collect(),
        }
    }

    fn inferred() -> Self {
        Symbols::Inferred {
            functions: BTreeMap::new(),
            relations: BTreeMap::new(),
        }
    }

    fn is_constant(&self, name: &str) -> bool {
        match self {
            Symbols::Strict { constants, .. } => constants.iter().any(|c| c == name),
            Symbols::Inferred { .. } => false,
        }
    }

    fn check(
        table: &mut BTreeMap<String, usize>,
        strict: bool,
        kind: &'static str,
        name: &str,
        found: usize,
    ) -> Result<(), SyntaxError> {
        match table.get(name) {
            Some(&expected) if expected != found => Err(SyntaxError::ArityMismatch {
                name: name.to_string(),
                expected,
                found,
            }),
            Some(_) => Ok(()),
            None if strict => Err(SyntaxError::UnknownSymbol {
                kind,
                name: name.to_string(),
            }),
            None => {
                table.insert(name.to_string(), found);
                Ok(())
            }
        }
    }

    fn function(&mut self, name: &str, arity: usize) -> Result<(), SyntaxError> {
        match self {
            Symbols::Strict { functions, .. } => {
                Self::check(functions, true, "function", name, arity)
            }
            Symbols::Inferred {
                functions,
                relations,
            } => {
                if relations.contains_key(name) {
                    return Err(SyntaxError::UnknownSymbol {
                        kind: "function",
                        name: name.to_string(),
                    });
                }
                Self::check(functions, false, "function", name, arity)
            }
        }
    }

    fn relation(&mut self, name: &str, arity: usize) -> Result<(), SyntaxError> {
        match self {
            Symbols::Strict { relations, .. } => {
                Self::check(relations, true, "predicate", name, arity)
            }
            Symbols::Inferred {
                functions,
                relations,
            } => {
                if functions.contains_key(name) {
                    return Err(SyntaxError::UnknownSymbol {
                        kind: "predicate",
                        name: name.to_string(),
                    });
                }
                Self::check(relations, false, "predicate", name, arity)
            }
        }
    }

    fn into_classical(self) -> ClassicalSignature {
        match self {
            Symbols::Strict {
                constants,
                functions,
                relations,
            } => ClassicalSignature {
                constants,
                functions: functions.into_iter().collect(),
                relations: relations.into_iter().collect(),
            },
            Symbols::Inferred {
                functions,
                relations,
            } => ClassicalSignature {
                constants: Vec::new(),
                functions: functions.into_iter().collect(),
                relations: relations.into_iter().collect(),
            },
        }
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    symbols: Symbols,
}

type PResult<T> = Result<T, SyntaxError>;

impl Parser {
    fn new(text: &str, symbols: Symbols) -> PResult<Self> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
            symbols,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: String) -> PResult<T> {
        Err(SyntaxError::Parse {
            pos: self.offset(),
            message,
        })
    }

    fn expect(&mut self, want: Tok) -> PResult<()> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            self.error(format!(
                "expected {}, found {}",
                want.describe(),
                self.peek().describe()
            ))
        }
    }

    fn eat(&mut self, want: &Tok) -> bool {
        if self.peek() == want {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> PResult<()> {
        match self.peek() {
            Tok::Ident(s) if s == kw => {
                self.bump();
                Ok(())
            }
            other => self.error(format!("expected `{kw}`, found {}", other.describe())),
        }
    }

    fn finish(&mut self) -> PResult<()> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            self.error(format!("unexpected trailing {}", self.peek().describe()))
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) if !RESERVED.contains(&s.as_str()) => {
                self.bump();
                Ok(s)
            }
            Tok::Ident(s) => self.error(format!("`{s}` is reserved")),
            other => self.error(format!("expected an identifier, found {}", other.describe())),
        }
    }

    fn rational(&mut self) -> PResult<Rational> {
        let start = self.offset();
        let neg = self.eat(&Tok::Minus);
        let num = match self.bump() {
            Tok::Int(s) => s,
            other => {
                return Err(SyntaxError::Parse {
                    pos: start,
                    message: format!("expected a rational, found {}", other.describe()),
                })
            }
        };
        let mut text = if neg { format!("-{num}") } else { num };
        if self.eat(&Tok::Slash) {
            match self.bump() {
                Tok::Int(d) => {
                    text.push('/');
                    text.push_str(&d);
                }
                other => {
                    return Err(SyntaxError::Parse {
                        pos: start,
                        message: format!("expected a denominator, found {}", other.describe()),
                    })
                }
            }
        }
        text.parse::<Rational>().map_err(|e| SyntaxError::Parse {
            pos: start,
            message: e.to_string(),
        })
    }

    fn comma_list<T>(&mut self, close: Tok, mut item: impl FnMut(&mut Self) -> PResult<T>) -> PResult<Vec<T>> {
        let mut out = vec![item(self)?];
        while self.eat(&Tok::Comma) {
            out.push(item(self)?);
        }
        self.expect(close)?;
        Ok(out)
    }

    fn term(&mut self) -> PResult<Term> {
        let name = self.ident()?;
        if self.eat(&Tok::LParen) {
            let args = self.comma_list(Tok::RParen, Self::term)?;
            self.symbols.function(&name, args.len())?;
            Ok(Term::App(name, args))
        } else if self.symbols.is_constant(&name) {
            Ok(Term::Const(name))
        } else {
            Ok(Term::Var(name))
        }
    }

    fn pl(&mut self) -> PResult<PLFunc> {
        let start = self.offset();
        self.expect_keyword("pl")?;
        self.expect(Tok::LBrace)?;
        let points = self.comma_list(Tok::RBrace, |p| {
            p.expect(Tok::LParen)?;
            let x = p.rational()?;
            p.expect(Tok::Comma)?;
            let y = p.rational()?;
            p.expect(Tok::RParen)?;
            Ok((x, y))
        })?;
        let (left, right) = if matches!(self.peek(), Tok::Ident(s) if s == "slopes") {
            self.bump();
            self.expect(Tok::LBracket)?;
            let l = self.rational()?;
            self.expect(Tok::Comma)?;
            let r = self.rational()?;
            self.expect(Tok::RBracket)?;
            (l, r)
        } else {
            (Rational::ZERO, Rational::ZERO)
        };
        PLFunc::new(points, left, right).map_err(|e| SyntaxError::Parse {
            pos: start,
            message: e.to_string(),
        })
    }

    fn formula(&mut self) -> PResult<Formula> {
        match self.peek().clone() {
            Tok::Int(_) | Tok::Minus => Ok(Formula::constant(self.rational()?)),
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Ident(kw) => match kw.as_str() {
                "max" | "min" => {
                    self.bump();
                    self.expect(Tok::LParen)?;
                    let at = self.offset();
                    let xs = self.comma_list(Tok::RParen, Self::formula)?;
                    if xs.len() < 2 {
                        return Err(SyntaxError::Parse {
                            pos: at,
                            message: format!("`{kw}` needs at least two arguments"),
                        });
                    }
                    Ok(if kw == "max" { Formula::Max(xs) } else { Formula::Min(xs) })
                }
                "affine" => {
                    self.bump();
                    self.expect(Tok::LBracket)?;
                    let mut coeffs = vec![self.rational()?];
                    while self.eat(&Tok::Comma) {
                        coeffs.push(self.rational()?);
                    }
                    self.expect(Tok::Semi)?;
                    let constant = self.rational()?;
                    self.expect(Tok::RBracket)?;
                    self.expect(Tok::LParen)?;
                    let at = self.offset();
                    let args = self.comma_list(Tok::RParen, Self::formula)?;
                    if args.len() != coeffs.len() {
                        return Err(SyntaxError::Parse {
                            pos: at,
                            message: format!(
                                "affine combination has {} coefficient(s) but {} argument(s)",
                                coeffs.len(),
                                args.len()
                            ),
                        });
                    }
                    Ok(Formula::Affine {
                        coeffs,
                        constant,
                        args,
                    })
                }
                "pl" => {
                    let c = self.pl()?;
                    self.expect(Tok::LParen)?;
                    let f = self.formula()?;
                    self.expect(Tok::RParen)?;
                    Ok(Formula::Unary(c, Box::new(f)))
                }
                "sup" | "inf" => {
                    self.bump();
                    let v = self.ident()?;
                    self.expect(Tok::Dot)?;
                    let body = self.formula()?;
                    Ok(if kw == "sup" {
                        Formula::Sup(v, Box::new(body))
                    } else {
                        Formula::Inf(v, Box::new(body))
                    })
                }
                "h" => {
                    self.bump();
                    self.expect(Tok::LBracket)?;
                    let v = self.ident()?;
                    self.expect(Tok::Semi)?;
                    let at = self.offset();
                    let d = self.pl()?;
                    self.expect(Tok::RBracket)?;
                    self.expect(Tok::LParen)?;
                    let phi = self.formula()?;
                    self.expect(Tok::Comma)?;
                    let psi = self.formula()?;
                    self.expect(Tok::RParen)?;
                    let delta = d.fixed_point().map_err(|e| match e {
                        SyntaxError::NotMonotone { .. } => e,
                        other => SyntaxError::Parse {
                            pos: at,
                            message: other.to_string(),
                        },
                    })?;
                    Ok(Formula::H(Box::new(HNode {
                        var: v,
                        d,
                        delta,
                        phi,
                        psi,
                    })))
                }
                "d" if *self.peek_at(1) == Tok::LParen => {
                    self.bump();
                    self.bump();
                    let a = self.term()?;
                    self.expect(Tok::Comma)?;
                    let b = self.term()?;
                    self.expect(Tok::RParen)?;
                    Ok(Formula::Dist(a, b))
                }
                _ => {
                    let name = self.ident()?;
                    let args = if self.eat(&Tok::LParen) {
                        self.comma_list(Tok::RParen, Self::term)?
                    } else {
                        Vec::new()
                    };
                    self.symbols.relation(&name, args.len())?;
                    Ok(Formula::Atomic(name, args))
                }
            },
            other => self.error(format!("expected a formula, found {}", other.describe())),
        }
    }

    // classical grammar, loosest first

    fn classical(&mut self) -> PResult<ClassicalFormula> {
        let lhs = self.classical_or()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.classical()?;
            Ok(ClassicalFormula::implies(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn classical_or(&mut self) -> PResult<ClassicalFormula> {
        let mut acc = self.classical_and()?;
        while self.eat(&Tok::Pipe) {
            let rhs = self.classical_and()?;
            acc = ClassicalFormula::or(acc, rhs);
        }
        Ok(acc)
    }

    fn classical_and(&mut self) -> PResult<ClassicalFormula> {
        let mut acc = self.classical_unary()?;
        while self.eat(&Tok::Amp) {
            let rhs = self.classical_unary()?;
            acc = ClassicalFormula::and(acc, rhs);
        }
        Ok(acc)
    }

    fn classical_unary(&mut self) -> PResult<ClassicalFormula> {
        match self.peek().clone() {
            Tok::Tilde => {
                self.bump();
                Ok(ClassicalFormula::not(self.classical_unary()?))
            }
            Tok::LParen => {
                self.bump();
                let f = self.classical()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Ident(kw) if kw == "exists" || kw == "forall" => {
                self.bump();
                let v = self.ident()?;
                self.expect(Tok::Dot)?;
                let body = self.classical()?;
                Ok(if kw == "exists" {
                    ClassicalFormula::Exists(v, Box::new(body))
                } else {
                    ClassicalFormula::Forall(v, Box::new(body))
                })
            }
            Tok::Ident(kw) if kw == "true" => {
                self.bump();
                Ok(ClassicalFormula::True)
            }
            Tok::Ident(kw) if kw == "false" => {
                self.bump();
                Ok(ClassicalFormula::False)
            }
            Tok::Ident(_) => self.classical_atom(),
            other => self.error(format!("expected a formula, found {}", other.describe())),
        }
    }

    /// `R(t, ...)`, `R`, `t = s` or `t != s`.
    fn classical_atom(&mut self) -> PResult<ClassicalFormula> {
        let name = self.ident()?;
        let args = if self.eat(&Tok::LParen) {
            Some(self.comma_list(Tok::RParen, Self::term)?)
        } else {
            None
        };
        let eq = match self.peek() {
            Tok::Eq => Some(false),
            Tok::Neq => Some(true),
            _ => None,
        };
        if let Some(negated) = eq {
            self.bump();
            let lhs = match args {
                Some(args) => {
                    self.symbols.function(&name, args.len())?;
                    Term::App(name, args)
                }
                None if self.symbols.is_constant(&name) => Term::Const(name),
                None => Term::Var(name),
            };
            let rhs = self.term()?;
            let e = ClassicalFormula::Equal(lhs, rhs);
            return Ok(if negated { ClassicalFormula::not(e) } else { e });
        }
        let args = args.unwrap_or_default();
        self.symbols.relation(&name, args.len())?;
        Ok(ClassicalFormula::Atomic(name, args))
    }
}

/// Parses a continuous formula, resolving symbols against `sig`.
pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula, SyntaxError> {
    let mut p = Parser::new(text, Symbols::strict(&sig.classical()))?;
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}

/// Parses a continuous formula and infers its signature from usage.
///
/// Inferred predicates range over `[0, 1]`; every modulus and the diameter
/// bound are 1. Bare identifiers in term position are variables.
pub fn parse_formula_inferred(text: &str) -> Result<(Formula, Signature), SyntaxError> {
    let mut p = Parser::new(text, Symbols::inferred())?;
    let f = p.formula()?;
    p.finish()?;
    Ok((f, p.symbols.into_classical().metrized()))
}

pub fn parse_classical(text: &str, sig: &ClassicalSignature) -> Result<ClassicalFormula, SyntaxError> {
    let mut p = Parser::new(text, Symbols::strict(sig))?;
    let f = p.classical()?;
    p.finish()?;
    Ok(f)
}

pub fn parse_classical_inferred(text: &str) -> Result<(ClassicalFormula, ClassicalSignature), SyntaxError> {
    let mut p = Parser::new(text, Symbols::inferred())?;
    let f = p.classical()?;
    p.finish()?;
    Ok((f, p.symbols.into_classical()))
}

/// Parses a connective literal such as `pl{(0,1),(1,0)}slopes[-1,-1]`.
pub fn parse_pl(text: &str) -> Result<PLFunc, SyntaxError> {
    let mut p = Parser::new(text, Symbols::inferred())?;
    let c = p.pl()?;
    p.finish()?;
    Ok(c)
}
