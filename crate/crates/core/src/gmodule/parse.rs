//! Text format for presented modules.
//!
//! ```text
//! # comments start with '#'
//! ring: D=-16          # or: Z
//! group: C2            # or: C1
//! action: conj         # or: trivial
//! generators: 1
//! relation: (s - 1)*e1
//! ```
//!
//! Relations are twisted-ring expressions in the generators `e1..en`. Atoms
//! are integers, `w` (the ring generator `f*omega`), `i` (when it lies in the
//! ring) and `s` (the nontrivial group element); products are taken left to
//! right and do not commute. The header lines may be omitted when the caller
//! supplies the ring.

use num_bigint::BigInt;
use num_traits::Zero;

use super::presented::{ModuleVector, PresentedModule};
use crate::error::{Error, Result};
use crate::quad::{FieldElement, QuadOrder};
use crate::twisted::{Action, GaloisGroup, Integers, IntegralRing, TwistedMatrix, TwistedRingElement};

/// Ring named in a module file.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RingSpec {
    Integers,
    Order(QuadOrder),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModuleSource {
    pub ring: Option<RingSpec>,
    pub group_order: Option<usize>,
    pub action: Option<Action>,
    pub gens: usize,
    relations: Vec<(usize, Expr)>,
}

/// A parsed module over one of the supported coefficient rings.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyModule {
    Integers(PresentedModule<Integers>),
    Order(PresentedModule<QuadOrder>),
}

#[derive(Clone, Debug, PartialEq)]
enum Expr {
    Int(BigInt),
    W,
    I,
    S,
    Gen(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

pub fn parse_module_source(text: &str) -> Result<ModuleSource> {
    let mut src = ModuleSource { ring: None, group_order: None, action: None, gens: 0, relations: Vec::new() };
    let mut saw_gens = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once(':')
            .ok_or_else(|| perr(line, "expected 'key: value'"))?;
        let value = value.trim();
        match key.trim() {
            "ring" => src.ring = Some(parse_ring(line, value)?),
            "group" => {
                src.group_order = Some(match value {
                    "C1" | "1" => 1,
                    "C2" | "2" => 2,
                    other => return Err(perr(line, format!("unsupported group '{other}'"))),
                })
            }
            "action" => src.action = Some(value.parse().map_err(|e: Error| perr(line, e.to_string()))?),
            "generators" => {
                src.gens = value.parse().map_err(|_| perr(line, "generators must be a nonnegative integer"))?;
                saw_gens = true;
            }
            "relation" => {
                if !saw_gens {
                    return Err(perr(line, "'generators' must precede relations"));
                }
                let expr = Parser::new(line, value).parse_all()?;
                src.relations.push((line, expr));
            }
            other => return Err(perr(line, format!("unknown key '{other}'"))),
        }
    }
    if !saw_gens {
        return Err(perr(0, "missing 'generators' line"));
    }
    Ok(src)
}

fn parse_ring(line: usize, value: &str) -> Result<RingSpec> {
    if value == "Z" {
        return Ok(RingSpec::Integers);
    }
    let disc = value
        .strip_prefix("D=")
        .and_then(|d| d.trim().parse::<i64>().ok())
        .ok_or_else(|| perr(line, format!("bad ring '{value}', expected 'Z' or 'D=<discriminant>'")))?;
    QuadOrder::from_discriminant(disc).map(RingSpec::Order).map_err(|e| perr(line, e.to_string()))
}

impl ModuleSource {
    /// Evaluates the relations over `ring` and `group`.
    pub fn build<R: IntegralRing>(&self, ring: R, group: GaloisGroup) -> Result<PresentedModule<R>> {
        let mut entries = Vec::new();
        for (line, expr) in &self.relations {
            match eval(expr, &ring, group, self.gens).map_err(|e| relabel(e, *line))? {
                Value::Vector(v) => entries.extend(v),
                Value::Scalar(x) if x.is_zero() => entries.extend(zero_vector(&ring, group, self.gens)),
                Value::Scalar(_) => return Err(perr(*line, "relation must be a combination of generators")),
            }
        }
        let rows = self.relations.len();
        let x = TwistedMatrix::from_entries(ring.clone(), group, rows, self.gens, entries)?;
        PresentedModule::new(ring, group, self.gens, x)
    }

    /// Builds the module using the header, with `ring`, `group_order` and
    /// `action` filling in (and required to agree with) missing header fields.
    pub fn resolve(&self, ring: Option<RingSpec>, group_order: Option<usize>, action: Option<Action>) -> Result<AnyModule> {
        let ring = merge(self.ring, ring, "ring")?.ok_or_else(|| perr(0, "ring not specified"))?;
        let order = merge(self.group_order, group_order, "group")?.unwrap_or(2);
        let default_action = match ring {
            RingSpec::Integers => Action::Trivial,
            RingSpec::Order(_) => Action::Conjugation,
        };
        let action = merge(self.action, action, "action")?.unwrap_or(default_action);
        let group = if order == 1 { GaloisGroup::trivial() } else { GaloisGroup::new(order, action)? };
        match ring {
            RingSpec::Integers => Ok(AnyModule::Integers(self.build(Integers, group)?)),
            RingSpec::Order(o) => Ok(AnyModule::Order(self.build(o, group)?)),
        }
    }
}

fn merge<T: PartialEq + std::fmt::Debug>(file: Option<T>, given: Option<T>, what: &str) -> Result<Option<T>> {
    match (file, given) {
        (Some(a), Some(b)) if a != b => {
            Err(Error::RingMismatch(format!("module file says {what} {a:?}, command line says {b:?}")))
        }
        (a, b) => Ok(a.or(b)),
    }
}

fn relabel(e: Error, line: usize) -> Error {
    match e {
        Error::Parse { msg, .. } => Error::Parse { line, msg },
        other => other,
    }
}

/// Parses a module file whose header names the ring.
pub fn parse_module(text: &str) -> Result<AnyModule> {
    parse_module_source(text)?.resolve(None, None, None)
}

struct Parser {
    line: usize,
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn new(line: usize, src: &str) -> Self {
        Parser { line, chars: src.chars().collect(), pos: 0 }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        perr(self.line, format!("{} (column {})", msg.into(), self.pos + 1))
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn parse_all(mut self) -> Result<Expr> {
        let e = self.expr()?;
        if let Some(c) = self.peek() {
            return Err(self.err(format!("unexpected '{c}'")));
        }
        Ok(e)
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        while let Some(c @ ('+' | '-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            lhs = if c == '+' { Expr::Add(lhs.into(), rhs.into()) } else { Expr::Sub(lhs.into(), rhs.into()) };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            let rhs = self.factor()?;
            lhs = Expr::Mul(lhs.into(), rhs.into());
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr> {
        match self.peek() {
            None => Err(self.err("unexpected end of expression")),
            Some('-') => {
                self.pos += 1;
                Ok(Expr::Neg(self.factor()?.into()))
            }
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.chars.get(self.pos).is_some_and(char::is_ascii_digit) {
                    self.pos += 1;
                }
                let digits: String = self.chars[start..self.pos].iter().collect();
                Ok(Expr::Int(digits.parse().expect("digits")))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.chars.get(self.pos).is_some_and(char::is_ascii_alphanumeric) {
                    self.pos += 1;
                }
                let word: String = self.chars[start..self.pos].iter().collect();
                match word.as_str() {
                    "w" => Ok(Expr::W),
                    "i" => Ok(Expr::I),
                    "s" => Ok(Expr::S),
                    _ => match word.strip_prefix('e').and_then(|k| k.parse::<usize>().ok()) {
                        Some(k) if k >= 1 => Ok(Expr::Gen(k - 1)),
                        _ => {
                            self.pos = start;
                            Err(self.err(format!("unknown symbol '{word}'")))
                        }
                    },
                }
            }
            Some(c) => Err(self.err(format!("unexpected '{c}'"))),
        }
    }
}

enum Value<R: IntegralRing> {
    Scalar(TwistedRingElement<R>),
    Vector(ModuleVector<R>),
}

fn zero_vector<R: IntegralRing>(ring: &R, group: GaloisGroup, n: usize) -> ModuleVector<R> {
    vec![TwistedRingElement::zero(ring.clone(), group); n]
}

fn field_to_ring<R: IntegralRing>(ring: &R, x: &FieldElement) -> Option<R::Elem> {
    let basis = ring.z_basis();
    if basis.len() == 1 {
        return (x.b.is_zero() && x.a.is_integer()).then(|| ring.from_coords(&[x.a.to_integer()]));
    }
    // basis is 1, f*omega
    let f = ring.to_field(&basis[1]).b;
    let y = &x.b / &f;
    (x.a.is_integer() && y.is_integer()).then(|| ring.from_coords(&[x.a.to_integer(), y.to_integer()]))
}

fn eval<R: IntegralRing>(e: &Expr, ring: &R, group: GaloisGroup, gens: usize) -> Result<Value<R>> {
    let scalar = |r: R::Elem| Value::Scalar(TwistedRingElement::scalar(ring.clone(), group, r));
    Ok(match e {
        Expr::Int(n) => scalar(ring.from_coords(&{
            let mut c = vec![BigInt::zero(); ring.z_rank()];
            c[0] = n.clone();
            c
        })),
        Expr::W => {
            let b = ring.z_basis();
            if b.len() < 2 {
                return Err(perr(0, "'w' is not available over Z"));
            }
            scalar(b[1].clone())
        }
        Expr::I => {
            let i = ring
                .quad_field()
                .filter(|k| k.d() == -1)
                .and_then(|k| field_to_ring(ring, &k.omega()))
                .ok_or_else(|| perr(0, "'i' is not in the ring"))?;
            scalar(i)
        }
        Expr::S => {
            if group.order() != 2 {
                return Err(perr(0, "'s' needs the group C2"));
            }
            Value::Scalar(TwistedRingElement::group_element(ring.clone(), group, 1))
        }
        Expr::Gen(k) => {
            if *k >= gens {
                return Err(perr(0, format!("generator e{} out of range", k + 1)));
            }
            let mut v = zero_vector(ring, group, gens);
            v[*k] = TwistedRingElement::one(ring.clone(), group);
            Value::Vector(v)
        }
        Expr::Neg(a) => match eval(a, ring, group, gens)? {
            Value::Scalar(x) => Value::Scalar(x.tr_neg()),
            Value::Vector(v) => Value::Vector(v.iter().map(TwistedRingElement::tr_neg).collect()),
        },
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            let (x, y) = (eval(a, ring, group, gens)?, eval(b, ring, group, gens)?);
            let sub = matches!(e, Expr::Sub(..));
            let op = |p: &TwistedRingElement<R>, q: &TwistedRingElement<R>| if sub { p.tr_sub(q) } else { p.tr_add(q) };
            match (x, y) {
                (Value::Scalar(p), Value::Scalar(q)) => Value::Scalar(op(&p, &q)?),
                (Value::Vector(p), Value::Vector(q)) => {
                    Value::Vector(p.iter().zip(&q).map(|(u, v)| op(u, v)).collect::<Result<_>>()?)
                }
                _ => return Err(perr(0, "cannot add a scalar to a vector")),
            }
        }
        Expr::Mul(a, b) => match (eval(a, ring, group, gens)?, eval(b, ring, group, gens)?) {
            (Value::Scalar(p), Value::Scalar(q)) => Value::Scalar(p.tr_mul(&q)?),
            (Value::Scalar(p), Value::Vector(v)) => Value::Vector(v.iter().map(|x| p.tr_mul(x)).collect::<Result<_>>()?),
            _ => return Err(perr(0, "vectors can only be multiplied on the left by scalars")),
        },
    })
}

/// Text of one relation row, readable by the parser.
pub fn format_relation<R: IntegralRing>(row: &[TwistedRingElement<R>]) -> String {
    let mut parts = Vec::new();
    for (j, x) in row.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        let mut coeff = Vec::new();
        for g in x.group().elements() {
            let c = x.ring().coords(x.coeff(g));
            if c.iter().all(Zero::is_zero) {
                continue;
            }
            let mut r = c[0].to_string();
            if c.len() == 2 && !c[1].is_zero() {
                r = format!("{} + {}*w", c[0], c[1]);
            }
            coeff.push(if g == 0 { format!("({r})") } else { format!("({r})*s") });
        }
        parts.push(format!("({})*e{}", coeff.join(" + "), j + 1));
    }
    if parts.is_empty() {
        "0*e1".into()
    } else {
        parts.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gmodule::standard;

    #[test]
    fn parses_ring_module() {
        let text = "ring: D=-16\ngroup: C2\naction: conj\ngenerators: 1\nrelation: (s - 1)*e1\n";
        let AnyModule::Order(m) = parse_module(text).unwrap() else { panic!("expected an order") };
        let o = QuadOrder::from_discriminant(-16).unwrap();
        assert_eq!(m, standard::ring_module(&o, GaloisGroup::c2(Action::Conjugation)));
    }

    #[test]
    fn products_do_not_commute() {
        let o = QuadOrder::from_discriminant(-4).unwrap();
        let g = GaloisGroup::c2(Action::Conjugation);
        let a = parse_module_source("generators: 1\nrelation: s*i*e1").unwrap().build(o, g).unwrap();
        let b = parse_module_source("generators: 1\nrelation: -i*s*e1").unwrap().build(o, g).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn maximal_mod_order_from_text() {
        let text = "ring: D=-16\ngenerators: 2\nrelation: e1\nrelation: w*e2 + 4*e1\nrelation: 2*e2\nrelation: s*e2 + e2";
        let AnyModule::Order(m) = parse_module(text).unwrap() else { panic!() };
        let flat = m.flatten();
        assert_eq!((flat.rank, flat.torsion_order()), (0, BigInt::from(2)));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let bad = "ring: D=-16\ngenerators: 1\n\nrelation: e1 + 2";
        assert!(matches!(parse_module(bad), Err(Error::Parse { line: 4, .. })));
        assert!(matches!(parse_module("ring: D=-5\ngenerators: 1"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_module("ring: Z\ngenerators: 1\nrelation: w*e1"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_module("ring: Z\ngenerators: 1\nrelation: e2"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_module("ring: Z\ngenerators: 1\nrelation: e1*e1"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_module("ring: D=-16\ngenerators: 1\nrelation: i*e1"), Err(Error::Parse { line: 3, .. })));
    }

    #[test]
    fn header_conflicts_with_flags() {
        let src = parse_module_source("ring: D=-16\naction: trivial\ngenerators: 1").unwrap();
        assert!(matches!(src.resolve(None, None, Some(Action::Conjugation)), Err(Error::RingMismatch(_))));
    }

    #[test]
    fn format_round_trip() {
        let o = QuadOrder::from_discriminant(-16).unwrap();
        let g = GaloisGroup::c2(Action::Conjugation);
        let m = standard::maximal_mod_order(&o, g);
        let mut text = String::from("generators: 1\n");
        for i in 0..m.relations().rows() {
            text.push_str(&format!("relation: {}\n", format_relation(m.relations().row(i))));
        }
        assert_eq!(parse_module_source(&text).unwrap().build(o, g).unwrap(), m);
    }
}
