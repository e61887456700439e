//! A textual language for morphism expressions.
//!
//! ```text
//! expr := term (('∘' | 'o') term)*
//! term := atom (('⊗' | '*') atom)*
//! atom := id[word] | b[l] | d[l] | bl[l] | dl[l] | c[l, l]
//!       | dual(expr) | duall(expr) | name | (expr)
//! ```
//!
//! `f o g` means f after g. Both operators associate to the left; tensor
//! binds tighter. Positions in diagnostics are 0-based character offsets.

pub mod corpus;

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::repcat::{Morphism, ObjectWord, RepCategory, SimpleLabel};

#[derive(Clone, Copy, Debug, Default)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

#[derive(Clone, Debug)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExprKind {
    Id(ObjectWord),
    Coev(SimpleLabel),
    Ev(SimpleLabel),
    CoevL(SimpleLabel),
    EvL(SimpleLabel),
    Flip(SimpleLabel, SimpleLabel),
    Named(String),
    Tensor(Box<Expr>, Box<Expr>),
    /// upper ∘ lower; `op` is the position of the operator.
    Compose { upper: Box<Expr>, lower: Box<Expr>, op: usize },
    Dual(Box<Expr>),
    DualL(Box<Expr>),
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        match (&self.kind, &other.kind) {
            (ExprKind::Compose { upper: a, lower: b, .. }, ExprKind::Compose { upper: c, lower: d, .. }) => {
                a == c && b == d
            }
            (a, b) => a == b,
        }
    }
}

impl Expr {
    pub fn new(kind: ExprKind) -> Self {
        Expr {
            kind,
            span: Span::default(),
        }
    }

    pub fn compose(upper: Expr, lower: Expr) -> Self {
        Expr::new(ExprKind::Compose {
            upper: Box::new(upper),
            lower: Box::new(lower),
            op: 0,
        })
    }

    pub fn tensor(left: Expr, right: Expr) -> Self {
        Expr::new(ExprKind::Tensor(Box::new(left), Box::new(right)))
    }

    fn precedence(&self) -> u8 {
        match self.kind {
            ExprKind::Compose { .. } => 1,
            ExprKind::Tensor(..) => 2,
            _ => 3,
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let paren = self.precedence() < min;
        if paren {
            write!(f, "(")?;
        }
        match &self.kind {
            ExprKind::Id(w) => {
                write!(f, "id[")?;
                for (i, x) in w.factors().iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, "]")?;
            }
            ExprKind::Coev(x) => write!(f, "b[{x}]")?,
            ExprKind::Ev(x) => write!(f, "d[{x}]")?,
            ExprKind::CoevL(x) => write!(f, "bl[{x}]")?,
            ExprKind::EvL(x) => write!(f, "dl[{x}]")?,
            ExprKind::Flip(x, y) => write!(f, "c[{x},{y}]")?,
            ExprKind::Named(n) => write!(f, "{n}")?,
            ExprKind::Tensor(l, r) => {
                l.fmt_at(f, 2)?;
                write!(f, " * ")?;
                r.fmt_at(f, 3)?;
            }
            ExprKind::Compose { upper, lower, .. } => {
                upper.fmt_at(f, 1)?;
                write!(f, " o ")?;
                lower.fmt_at(f, 2)?;
            }
            ExprKind::Dual(e) => write!(f, "dual({e})")?,
            ExprKind::DualL(e) => write!(f, "duall({e})")?,
        }
        if paren {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, 0)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Caret,
    LBrack,
    RBrack,
    LParen,
    RParen,
    Comma,
    Compose,
    Tensor,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Caret => write!(f, "`^`"),
            Tok::LBrack => write!(f, "`[`"),
            Tok::RBrack => write!(f, "`]`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::Compose => write!(f, "composition operator"),
            Tok::Tensor => write!(f, "tensor operator"),
        }
    }
}

fn syntax(position: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        position,
        message: message.into(),
    }
}

fn lex(src: &str) -> Result<(Vec<(Tok, usize)>, usize)> {
    let chars: Vec<char> = src.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '^' => Tok::Caret,
            '[' => Tok::LBrack,
            ']' => Tok::RBrack,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            '∘' => Tok::Compose,
            '⊗' | '*' => Tok::Tensor,
            c if c.is_ascii_alphanumeric() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                toks.push((if word == "o" { Tok::Compose } else { Tok::Ident(word) }, start));
                continue;
            }
            other => return Err(syntax(i, format!("unexpected character `{other}`"))),
        };
        toks.push((tok, i));
        i += 1;
    }
    Ok((toks, chars.len()))
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(_, p)| *p)
    }

    fn last_end(&self) -> usize {
        match self.pos.checked_sub(1).and_then(|i| self.toks.get(i)) {
            Some((Tok::Ident(s), p)) => p + s.chars().count(),
            Some((_, p)) => p + 1,
            None => 0,
        }
    }

    fn unexpected(&self, wanted: &str) -> Error {
        match self.peek() {
            Some(t) => syntax(self.here(), format!("expected {wanted}, found {t}")),
            None => syntax(self.end, format!("expected {wanted}, found end of input")),
        }
    }

    fn expect(&mut self, t: Tok, wanted: &str) -> Result<()> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.unexpected(wanted))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut e = self.term()?;
        while self.peek() == Some(&Tok::Compose) {
            let op = self.here();
            self.pos += 1;
            let rhs = self.term()?;
            let span = Span {
                start: e.span.start,
                end: rhs.span.end,
            };
            e = Expr {
                kind: ExprKind::Compose {
                    upper: Box::new(e),
                    lower: Box::new(rhs),
                    op,
                },
                span,
            };
        }
        Ok(e)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut e = self.atom()?;
        while self.peek() == Some(&Tok::Tensor) {
            self.pos += 1;
            let rhs = self.atom()?;
            let span = Span {
                start: e.span.start,
                end: rhs.span.end,
            };
            e = Expr {
                kind: ExprKind::Tensor(Box::new(e), Box::new(rhs)),
                span,
            };
        }
        Ok(e)
    }

    fn label(&mut self) -> Result<SimpleLabel> {
        let Some(Tok::Ident(name)) = self.peek().cloned() else {
            return Err(self.unexpected("a label"));
        };
        self.pos += 1;
        let mut x = SimpleLabel::new(name);
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            x = x.dual();
        }
        Ok(x)
    }

    fn word(&mut self) -> Result<ObjectWord> {
        let mut w = Vec::new();
        if self.peek() == Some(&Tok::RBrack) {
            return Ok(ObjectWord(w));
        }
        w.push(self.label()?);
        while self.peek() == Some(&Tok::Comma) {
            self.pos += 1;
            w.push(self.label()?);
        }
        Ok(ObjectWord(w))
    }

    fn atom(&mut self) -> Result<Expr> {
        let start = self.here();
        let kind = match self.peek().cloned() {
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                return Ok(Expr {
                    kind: e.kind,
                    span: Span {
                        start,
                        end: self.last_end(),
                    },
                });
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                let next = self.peek().cloned();
                match (name.as_str(), next) {
                    ("id", Some(Tok::LBrack)) => {
                        self.pos += 1;
                        let w = self.word()?;
                        self.expect(Tok::RBrack, "`,` or `]`")?;
                        ExprKind::Id(w)
                    }
                    (kw @ ("b" | "d" | "bl" | "dl"), Some(Tok::LBrack)) => {
                        self.pos += 1;
                        let x = self.label()?;
                        self.expect(Tok::RBrack, "`]`")?;
                        match kw {
                            "b" => ExprKind::Coev(x),
                            "d" => ExprKind::Ev(x),
                            "bl" => ExprKind::CoevL(x),
                            _ => ExprKind::EvL(x),
                        }
                    }
                    ("c", Some(Tok::LBrack)) => {
                        self.pos += 1;
                        let x = self.label()?;
                        self.expect(Tok::Comma, "`,`")?;
                        let y = self.label()?;
                        self.expect(Tok::RBrack, "`]`")?;
                        ExprKind::Flip(x, y)
                    }
                    (kw @ ("dual" | "duall"), Some(Tok::LParen)) => {
                        self.pos += 1;
                        let e = Box::new(self.expr()?);
                        self.expect(Tok::RParen, "`)`")?;
                        if kw == "dual" {
                            ExprKind::Dual(e)
                        } else {
                            ExprKind::DualL(e)
                        }
                    }
                    _ => ExprKind::Named(name),
                }
            }
            _ => return Err(self.unexpected("an expression")),
        };
        Ok(Expr {
            kind,
            span: Span {
                start,
                end: self.last_end(),
            },
        })
    }
}

pub fn parse(src: &str) -> Result<Expr> {
    let (toks, end) = lex(src)?;
    let mut p = Parser { toks, pos: 0, end };
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(p.unexpected("an operator or end of input"));
    }
    Ok(e)
}

/// Named morphisms available to expressions.
#[derive(Clone, Debug, Default)]
pub struct Environment {
    bindings: BTreeMap<String, Morphism>,
}

impl Environment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bind(&mut self, name: impl Into<String>, m: Morphism) -> Result<()> {
        let name = name.into();
        if self.bindings.contains_key(&name) {
            return Err(Error::HypothesisViolation(format!("`{name}` is already bound")));
        }
        self.bindings.insert(name, m);
        Ok(())
    }

    pub fn with(mut self, name: impl Into<String>, m: Morphism) -> Result<Self> {
        self.bind(name, m)?;
        Ok(self)
    }

    pub fn get(&self, name: &str) -> Option<&Morphism> {
        self.bindings.get(name)
    }
}

/// (dom, cod) of a well-typed expression.
pub fn typecheck(e: &Expr, env: &Environment) -> Result<(ObjectWord, ObjectWord)> {
    let s = |x: &SimpleLabel| ObjectWord::simple(x.clone());
    Ok(match &e.kind {
        ExprKind::Id(w) => (w.clone(), w.clone()),
        ExprKind::Coev(x) => (ObjectWord::unit(), s(x).concat(&s(&x.dual()))),
        ExprKind::Ev(x) => (s(&x.dual()).concat(&s(x)), ObjectWord::unit()),
        ExprKind::CoevL(x) => (ObjectWord::unit(), s(&x.dual()).concat(&s(x))),
        ExprKind::EvL(x) => (s(x).concat(&s(&x.dual())), ObjectWord::unit()),
        ExprKind::Flip(x, y) => (s(x).concat(&s(y)), s(y).concat(&s(x))),
        ExprKind::Named(n) => {
            let m = env.get(n).ok_or_else(|| Error::Unbound {
                position: e.span.start,
                name: n.clone(),
            })?;
            (m.dom().clone(), m.cod().clone())
        }
        ExprKind::Tensor(l, r) => {
            let (ld, lc) = typecheck(l, env)?;
            let (rd, rc) = typecheck(r, env)?;
            (ld.concat(&rd), lc.concat(&rc))
        }
        ExprKind::Compose { upper, lower, op } => {
            let (ud, uc) = typecheck(upper, env)?;
            let (ld, lc) = typecheck(lower, env)?;
            if ud != lc {
                return Err(Error::ComposeMismatch {
                    position: *op,
                    upper_dom: ud,
                    lower_cod: lc,
                });
            }
            (ld, uc)
        }
        ExprKind::Dual(inner) | ExprKind::DualL(inner) => {
            let (d, c) = typecheck(inner, env)?;
            (c.dual(), d.dual())
        }
    })
}

/// Typechecks, then evaluates bottom-up in `cat`.
pub fn evaluate(e: &Expr, env: &Environment, cat: &RepCategory) -> Result<Morphism> {
    typecheck(e, env)?;
    eval(e, env, cat)
}

fn eval(e: &Expr, env: &Environment, cat: &RepCategory) -> Result<Morphism> {
    match &e.kind {
        ExprKind::Id(w) => cat.identity(w),
        ExprKind::Coev(x) => cat.coevaluation(x),
        ExprKind::Ev(x) => cat.evaluation(x),
        ExprKind::CoevL(x) => cat.coevaluation_left(x),
        ExprKind::EvL(x) => cat.evaluation_left(x),
        ExprKind::Flip(x, y) => cat.braiding_flip(x, y),
        ExprKind::Named(n) => {
            let m = env.get(n).expect("typechecked");
            cat.check_word(m.dom())?;
            cat.check_word(m.cod())?;
            Ok(m.clone())
        }
        ExprKind::Tensor(l, r) => Ok(eval(l, env, cat)?.tensor(&eval(r, env, cat)?)),
        ExprKind::Compose { upper, lower, .. } => eval(upper, env, cat)?.compose(&eval(lower, env, cat)?),
        ExprKind::Dual(inner) => cat.dual_morphism(&eval(inner, env, cat)?),
        ExprKind::DualL(inner) => cat.dual_morphism_left(&eval(inner, env, cat)?),
    }
}

pub fn eval_str(src: &str, env: &Environment, cat: &RepCategory) -> Result<Morphism> {
    evaluate(&parse(src)?, env, cat)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::indicator;
    use crate::numerics::{self, Tolerance};
    use crate::zoo;
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn cat(name: &str) -> RepCategory {
        RepCategory::new(zoo::group(name).unwrap(), Tolerance::default())
    }

    fn v(s: &str) -> SimpleLabel {
        s.parse().unwrap()
    }

    #[test]
    fn parse_examples() {
        let e = parse("id[V] o id[V]").unwrap();
        let id = || Expr::new(ExprKind::Id(ObjectWord::simple(v("V"))));
        assert_eq!(e, Expr::compose(id(), id()));

        let e = parse("(id[V] * d[V]) o (b[V] * id[V])").unwrap();
        let want = Expr::compose(
            Expr::tensor(id(), Expr::new(ExprKind::Ev(v("V")))),
            Expr::tensor(Expr::new(ExprKind::Coev(v("V"))), id()),
        );
        assert_eq!(e, want);
        assert_eq!(parse("(id[V] ⊗ d[V]) ∘ (b[V] ⊗ id[V])").unwrap(), want);

        match parse("d[V] o o") {
            Err(Error::Syntax { position, .. }) => assert_eq!(position, 7),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse(""), Err(Error::Syntax { position: 0, .. })));
        assert!(matches!(parse("id[V"), Err(Error::Syntax { position: 4, .. })));
        assert!(matches!(parse("c[V]"), Err(Error::Syntax { position: 3, .. })));
        assert!(matches!(parse("id[V] $"), Err(Error::Syntax { position: 6, .. })));
    }

    #[test]
    fn left_associative() {
        let e = parse("f o g o h").unwrap();
        let n = |s: &str| Expr::new(ExprKind::Named(s.into()));
        assert_eq!(e, Expr::compose(Expr::compose(n("f"), n("g")), n("h")));
        let e = parse("f * g o h").unwrap();
        assert_eq!(e, Expr::compose(Expr::tensor(n("f"), n("g")), n("h")));
    }

    #[test]
    fn typecheck_examples() {
        let env = Environment::new();
        let zz = parse("(id[V] * d[V]) o (b[V] * id[V])").unwrap();
        let one = ObjectWord::simple(v("V"));
        assert_eq!(typecheck(&zz, &env).unwrap(), (one.clone(), one));

        match typecheck(&parse("d[V] o b[V]").unwrap(), &env) {
            Err(Error::ComposeMismatch {
                position,
                upper_dom,
                lower_cod,
            }) => {
                assert_eq!(position, 5);
                assert_eq!(upper_dom, "V^,V".parse().unwrap());
                assert_eq!(lower_cod, "V,V^".parse().unwrap());
            }
            other => panic!("{other:?}"),
        }
        match typecheck(&parse("id[V] o phi").unwrap(), &env) {
            Err(Error::Unbound { position, name }) => assert_eq!((position, name.as_str()), (8, "phi")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn evaluate_examples() {
        let s3 = cat("S3");
        let env = Environment::new();
        let m = eval_str("(id[std] * d[std]) o (b[std] * id[std])", &env, &s3).unwrap();
        assert!(numerics::approx_equal(m.mat(), &numerics::identity(2), s3.tol()).unwrap());

        let q8 = cat("Q8");
        let w = indicator::find_self_duality(&q8, &v("V")).unwrap().unwrap();
        let env = Environment::new()
            .with("Phi", w.phi.clone())
            .unwrap()
            .with("Phiinv", w.phi_inv.clone())
            .unwrap();
        let nu = eval_str("(d[V] * id[V^]) o (id[V^] * Phiinv * Phi) o (id[V^] * bl[V])", &env, &q8).unwrap();
        assert_eq!(numerics::scalar_multiple_of_identity(nu.mat(), q8.tol()), Some(Complex64::new(-1.0, 0.0)));

        let lhs = eval_str("dl[V] o (id[V] * Phi)", &env, &q8).unwrap();
        let rhs = eval_str("d[V] o (Phi * id[V])", &env, &q8).unwrap();
        assert!(lhs.approx_eq(&rhs.scale(Complex64::new(-1.0, 0.0)), q8.tol()));
    }

    #[test]
    fn zigzags_for_every_label() {
        let env = Environment::new();
        for g in zoo::GROUP_NAMES {
            let c = cat(g);
            for x in c.simples() {
                for x in [x.clone(), x.dual()] {
                    let xd = x.dual();
                    let id = c.identity(&ObjectWord::simple(x.clone())).unwrap();
                    let idd = c.identity(&ObjectWord::simple(xd.clone())).unwrap();
                    for (src, want) in [
                        (format!("(id[{x}] * d[{x}]) o (b[{x}] * id[{x}])"), &id),
                        (format!("(d[{x}] * id[{xd}]) o (id[{xd}] * b[{x}])"), &idd),
                        (format!("(dl[{x}] * id[{x}]) o (id[{x}] * bl[{x}])"), &id),
                        (format!("(id[{xd}] * dl[{x}]) o (bl[{x}] * id[{xd}])"), &idd),
                    ] {
                        let m = eval_str(&src, &env, &c).unwrap();
                        assert!(m.approx_eq(want, c.tol()), "{g}: {src}");
                    }
                }
            }
        }
    }

    #[test]
    fn compositional() {
        let s3 = cat("S3");
        let env = Environment::new();
        let a = parse("d[std] * id[sgn]").unwrap();
        let b = parse("id[std^] * c[sgn,std]").unwrap();
        let whole = Expr::compose(a.clone(), b.clone());
        let lhs = evaluate(&whole, &env, &s3).unwrap();
        let rhs = evaluate(&a, &env, &s3)
            .unwrap()
            .compose(&evaluate(&b, &env, &s3).unwrap())
            .unwrap();
        assert!(lhs.approx_eq(&rhs, s3.tol()));
    }

    #[test]
    fn unknown_label_is_reported() {
        let s3 = cat("S3");
        assert!(matches!(
            eval_str("id[V]", &Environment::new(), &s3),
            Err(Error::UnknownLabel(_))
        ));
    }

    fn arb_label() -> impl Strategy<Value = SimpleLabel> {
        ("[A-Za-z][A-Za-z0-9_]{0,3}", any::<bool>())
            .prop_filter("reserved", |(s, _)| s != "o")
            .prop_map(|(s, d)| SimpleLabel { label: s, dualized: d })
    }

    fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            prop::collection::vec(arb_label(), 0..3).prop_map(|w| ExprKind::Id(ObjectWord(w))),
            arb_label().prop_map(ExprKind::Coev),
            arb_label().prop_map(ExprKind::Ev),
            arb_label().prop_map(ExprKind::CoevL),
            arb_label().prop_map(ExprKind::EvL),
            (arb_label(), arb_label()).prop_map(|(x, y)| ExprKind::Flip(x, y)),
            "[a-z][a-z0-9_]{0,4}"
                .prop_filter("keyword", |s| s != "o")
                .prop_map(ExprKind::Named),
        ]
        .prop_map(Expr::new);
        leaf.prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::tensor(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::compose(a, b)),
                inner.clone().prop_map(|a| Expr::new(ExprKind::Dual(Box::new(a)))),
                inner.prop_map(|a| Expr::new(ExprKind::DualL(Box::new(a)))),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(e in arb_expr()) {
            let printed = e.to_string();
            let back = parse(&printed).unwrap();
            prop_assert_eq!(back, e);
        }
    }
}
