//! The expression language.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := base ('^' ('-')? integer)?
//! base   := integer | 'i' | 'h' | identifier | '(' expr ')'
//! ```
//!
//! `-x^2` is `-(x^2)`. Rational literals are written as quotients, `-4/7`.
//! There is no implicit multiplication.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::field::{Field, GaussianRational as G};
use crate::poly::Vars;
use crate::ratfn::RationalFunction;
use crate::series::HSeries;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Const(G),
    /// Index into the variable list the expression was parsed against.
    Var(usize),
    ImagUnit,
    H,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
    End,
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    vars: &'a Vars,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut k = 0;
    while k < bytes.len() {
        let c = bytes[k] as char;
        if c.is_ascii_whitespace() {
            k += 1;
        } else if c.is_ascii_digit() {
            let start = k;
            while k < bytes.len() && bytes[k].is_ascii_digit() {
                k += 1;
            }
            let n: BigInt = text[start..k].parse().expect("digits");
            out.push((Tok::Int(n), start));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = k;
            while k < bytes.len() && (bytes[k].is_ascii_alphanumeric() || bytes[k] == b'_') {
                k += 1;
            }
            out.push((Tok::Ident(text[start..k].to_string()), start));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Sym(c), k));
            k += 1;
        } else {
            let ch = text[k..].chars().next().expect("in bounds");
            return Err(Error::Syntax {
                offset: k,
                message: format!("unexpected character `{ch}`"),
            });
        }
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &str) -> Error {
        let found = match self.peek() {
            Tok::End => "end of input".to_string(),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Sym(c) => format!("`{c}`"),
        };
        Error::Syntax {
            offset: self.offset(),
            message: format!("expected {expected}, found {found}"),
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == &Tok::Sym(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let base = self.base()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let negative = self.eat('-');
        let at = self.offset();
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                let n: i64 = i64::try_from(&n).map_err(|_| Error::Syntax {
                    offset: at,
                    message: "exponent too large".into(),
                })?;
                Ok(Expr::Pow(Box::new(base), if negative { -n } else { n }))
            }
            _ => Err(self.error("an integer exponent")),
        }
    }

    fn base(&mut self) -> Result<Expr> {
        let at = self.offset();
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Expr::Const(G::real(BigRational::from_integer(n))))
            }
            Tok::Ident(name) => {
                self.bump();
                if let Some(k) = self.vars.index(&name) {
                    Ok(Expr::Var(k))
                } else if name == "i" {
                    Ok(Expr::ImagUnit)
                } else if name == "h" {
                    Ok(Expr::H)
                } else {
                    Err(Error::UnknownIdentifier { name, offset: at })
                }
            }
            Tok::Sym('(') => {
                self.bump();
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(self.error("`)`"));
                }
                Ok(inner)
            }
            _ => Err(self.error("a number, variable or `(`")),
        }
    }
}

/// Parses `text`, resolving identifiers against `vars`. Outside `vars`,
/// `i` is the imaginary unit and `h` the series parameter.
pub fn parse_expr(text: &str, vars: &Vars) -> Result<Expr> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        vars,
    };
    let e = p.expr()?;
    if p.peek() != &Tok::End {
        return Err(p.error("an operator"));
    }
    Ok(e)
}

/// A polynomial in `h` with rational-function coefficients, lowest first.
struct HPoly<F>(Vec<RationalFunction<F>>);

impl<F: Field> HPoly<F> {
    fn degree(&self) -> usize {
        self.0.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
    }

    fn h_free(&self) -> Option<&RationalFunction<F>> {
        (self.degree() == 0).then(|| &self.0[0])
    }

    fn add(self, other: Self, sign: bool) -> Self {
        let n = self.0.len().max(other.0.len());
        let vars = self.0[0].vars().clone();
        let zero = RationalFunction::zero(&vars);
        HPoly(
            (0..n)
                .map(|k| {
                    let a = self.0.get(k).unwrap_or(&zero);
                    let b = other.0.get(k).unwrap_or(&zero);
                    if sign {
                        a + b
                    } else {
                        a - b
                    }
                })
                .collect(),
        )
    }

    fn mul(&self, other: &Self, order: usize) -> Result<Self> {
        let (da, db) = (self.degree(), other.degree());
        if da + db > order {
            return Err(Error::OrderOverflow { degree: da + db, order });
        }
        let vars = self.0[0].vars().clone();
        let mut out = vec![RationalFunction::zero(&vars); da + db + 1];
        for i in 0..=da {
            for j in 0..=db {
                if !self.0[i].is_zero() && !other.0[j].is_zero() {
                    out[i + j] = &out[i + j] + &(&self.0[i] * &other.0[j]);
                }
            }
        }
        Ok(HPoly(out))
    }
}

fn eval(e: &Expr, vars: &Vars, order: usize) -> Result<HPoly<G>> {
    let scalar = |c: G| HPoly(vec![RationalFunction::constant(vars, c)]);
    Ok(match e {
        Expr::Const(c) => scalar(c.clone()),
        Expr::Var(k) => HPoly(vec![RationalFunction::var(vars, *k)]),
        Expr::ImagUnit => scalar(G::i()),
        Expr::H => {
            if order == 0 {
                return Err(Error::OrderOverflow { degree: 1, order });
            }
            HPoly(vec![RationalFunction::zero(vars), RationalFunction::one(vars)])
        }
        Expr::Neg(a) => {
            let a = eval(a, vars, order)?;
            HPoly(a.0.iter().map(|c| -c.clone()).collect())
        }
        Expr::Add(a, b) => eval(a, vars, order)?.add(eval(b, vars, order)?, true),
        Expr::Sub(a, b) => eval(a, vars, order)?.add(eval(b, vars, order)?, false),
        Expr::Mul(a, b) => eval(a, vars, order)?.mul(&eval(b, vars, order)?, order)?,
        Expr::Div(a, b) => {
            let num = eval(a, vars, order)?;
            let den = eval(b, vars, order)?;
            let den = den.h_free().ok_or(Error::HInDenominator)?.inv()?;
            HPoly(num.0.iter().map(|c| c * &den).collect())
        }
        Expr::Pow(a, n) => {
            let base = eval(a, vars, order)?;
            if let Some(b) = base.h_free() {
                HPoly(vec![b.powi(*n)?])
            } else if *n < 0 {
                return Err(Error::HInDenominator);
            } else {
                let mut acc = HPoly(vec![RationalFunction::one(vars)]);
                for _ in 0..*n {
                    acc = acc.mul(&base, order)?;
                }
                acc
            }
        }
    })
}

/// Evaluates `e` into a series of the given order. `h` may not occur in a
/// denominator, and no term may carry a power of `h` beyond `order`.
pub fn lower_expr(e: &Expr, vars: &Vars, order: usize) -> Result<HSeries<G>> {
    let HPoly(mut coeffs) = eval(e, vars, order)?;
    coeffs.resize(order + 1, RationalFunction::zero(vars));
    HSeries::new(coeffs)
}

/// [`parse_expr`] followed by [`lower_expr`].
pub fn parse_series(text: &str, vars: &Vars, order: usize) -> Result<HSeries<G>> {
    lower_expr(&parse_expr(text, vars)?, vars, order)
}

/// An expression that must not involve `h`.
pub fn parse_function(text: &str, vars: &Vars) -> Result<RationalFunction<G>> {
    Ok(parse_series(text, vars, 0)?.coeff(0).clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy() -> Vars {
        Vars::new(["x", "y"])
    }

    fn series(text: &str, order: usize) -> Result<HSeries<G>> {
        parse_series(text, &xy(), order)
    }

    #[test]
    fn precedence() {
        let vars = xy();
        let x = RationalFunction::<G>::var(&vars, 0);
        assert_eq!(series("-x^2", 0).unwrap().coeff(0), &-(&x * &x));
        assert_eq!(series("(-x)^2", 0).unwrap().coeff(0), &(&x * &x));
        assert_eq!(series("2*x - -x", 0).unwrap().coeff(0), &x.scale(&G::from(3)));
        assert_eq!(
            series("-4/7", 0).unwrap().coeff(0).constant_value(),
            Some(G::from_ratio(-4, 7))
        );
        assert_eq!(series("x^-2*x^2", 0).unwrap().coeff(0), &RationalFunction::one(&vars));
        assert_eq!(
            series("1/2/x", 0).unwrap().coeff(0),
            &(&RationalFunction::one(&vars) / &x).scale(&G::from_ratio(1, 2))
        );
    }

    #[test]
    fn spec_examples() {
        let s = series("x*y + (1/2)*i*h", 2).unwrap();
        assert_eq!(s.to_expr_string(), "x*y + (1/2)*i*h");
        let z = Vars::new(["z"]);
        let f = parse_function("(z^2 - 1)/(z - 1)", &z).unwrap();
        assert_eq!(f.to_expr_string(), "z + 1");
        assert_eq!(
            parse_expr("x +", &xy()),
            Err(Error::Syntax {
                offset: 3,
                message: "expected a number, variable or `(`, found end of input".into()
            })
        );
        let s = series("1 + h*h*x", 2).unwrap();
        assert_eq!(s.coeffs()[0], RationalFunction::one(&xy()));
        assert!(s.coeffs()[1].is_zero());
        assert_eq!(s.coeffs()[2], RationalFunction::var(&xy(), 0));
        assert_eq!(series("1/h", 2), Err(Error::HInDenominator));
        assert_eq!(series("h^-1", 2), Err(Error::HInDenominator));
        assert_eq!(series("h^3", 2), Err(Error::OrderOverflow { degree: 3, order: 2 }));
    }

    #[test]
    fn identifiers() {
        assert_eq!(
            parse_expr("x*q", &xy()),
            Err(Error::UnknownIdentifier {
                name: "q".into(),
                offset: 2
            })
        );
        assert!(matches!(parse_expr("x y", &xy()), Err(Error::Syntax { offset: 2, .. })));
        assert!(matches!(
            parse_expr("x $ y", &xy()),
            Err(Error::Syntax { offset: 2, .. })
        ));
        assert!(matches!(parse_expr("(x", &xy()), Err(Error::Syntax { offset: 2, .. })));
        let v = Vars::new(["z1", "p1"]);
        assert!(parse_expr("z1*p1 - i", &v).is_ok());
    }

    #[test]
    fn rendering_reparses() {
        let texts = [
            "z^2*p - i*z*h - (1/8)/p*h^2",
            "(x + 1)/(y + 1)",
            "-x/y + (1 - (1/3)*i)*x*h",
            "1/(x*y)*h^2",
            "0",
        ];
        let vars = Vars::new(["z", "p", "x", "y"]);
        for t in texts {
            let s = parse_series(t, &vars, 2).unwrap();
            let again = parse_series(&s.to_expr_string(), &vars, 2).unwrap();
            assert_eq!(s, again, "{t}");
        }
    }
}
