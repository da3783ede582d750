//! Parsing of polynomial expressions in two variables over Q(i).
//!
//! Grammar:
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := unary (("*" | "/") unary)*
//! unary  := "-" unary | "+" unary | power
//! power  := atom ("^" integer)?
//! atom   := integer | "i" | identifier | "(" expr ")"
//! ```
//!
//! Division is allowed by nonzero constants only. The identifier `i` is the imaginary unit.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::number::GaussRat;
use crate::poly::Poly;

pub const DEFAULT_DEGREE_CAP: u32 = 64;

/// A parsed germ with the names of its variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputGerm {
    pub expression: String,
    /// Names of the variables in the `x` and `y` roles.
    pub vars: (String, String),
    pub poly: Poly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

fn tokenize(s: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        if c.is_whitespace() {
            k += 1;
        } else if c.is_ascii_digit() {
            let start = k;
            while k < chars.len() && chars[k].is_ascii_digit() {
                k += 1;
            }
            let digits: String = chars[start..k].iter().collect();
            out.push((start, Tok::Int(digits.parse().expect("digits"))));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = k;
            while k < chars.len() && (chars[k].is_ascii_alphanumeric() || chars[k] == '_') {
                k += 1;
            }
            out.push((start, Tok::Ident(chars[start..k].iter().collect())));
        } else if "+-*/^()".contains(c) {
            out.push((k, Tok::Sym(c)));
            k += 1;
        } else {
            return Err(Error::Parse { pos: k, msg: format!("unexpected character '{}'", c) });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [(usize, Tok)],
    k: usize,
    end: usize,
    x: String,
    y: String,
    cap: u32,
}

impl Parser<'_> {
    fn pos(&self) -> usize {
        self.toks.get(self.k).map_or(self.end, |t| t.0)
    }

    fn peek_sym(&self) -> Option<char> {
        match self.toks.get(self.k) {
            Some((_, Tok::Sym(c))) => Some(*c),
            _ => None,
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos(), msg: msg.into() })
    }

    fn capped(&self, p: Poly) -> Result<Poly> {
        let degree = p.total_degree();
        if degree > self.cap {
            return Err(Error::DegreeCap { degree, cap: self.cap });
        }
        Ok(p)
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = self.term()?;
        while let Some(c @ ('+' | '-')) = self.peek_sym() {
            self.k += 1;
            let t = self.term()?;
            acc = if c == '+' { acc.add(&t) } else { acc.sub(&t) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.unary()?;
        while let Some(c @ ('*' | '/')) = self.peek_sym() {
            self.k += 1;
            let pos = self.pos();
            let t = self.unary()?;
            acc = if c == '*' {
                self.capped(acc.mul(&t))?
            } else {
                if t.total_degree() > 0 {
                    return Err(Error::Parse { pos, msg: "division by a non-constant".into() });
                }
                let inv = t.coeff(0, 0).inv().ok_or(Error::Parse { pos, msg: "division by zero".into() })?;
                acc.scale(&inv)
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Poly> {
        match self.peek_sym() {
            Some('-') => {
                self.k += 1;
                Ok(self.unary()?.neg())
            }
            Some('+') => {
                self.k += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.peek_sym() != Some('^') {
            return Ok(base);
        }
        self.k += 1;
        let Some((_, Tok::Int(n))) = self.toks.get(self.k) else {
            return self.err("expected a nonnegative integer exponent");
        };
        let n: u32 = match n.try_into() {
            Ok(n) => n,
            Err(_) => return Err(Error::DegreeCap { degree: u32::MAX, cap: self.cap }),
        };
        self.k += 1;
        let degree = base.total_degree() as u64 * n as u64;
        if degree > self.cap as u64 {
            return Err(Error::DegreeCap { degree: degree.min(u32::MAX as u64) as u32, cap: self.cap });
        }
        Ok(base.pow(n))
    }

    fn atom(&mut self) -> Result<Poly> {
        let Some((_, tok)) = self.toks.get(self.k) else {
            return self.err("unexpected end of input");
        };
        self.k += 1;
        match tok {
            Tok::Int(n) => Ok(Poly::constant(GaussRat::from_real(BigRational::from_integer(n.clone())))),
            Tok::Ident(s) if s == "i" => Ok(Poly::constant(GaussRat::i())),
            Tok::Ident(s) if *s == self.x => Ok(Poly::x()),
            Tok::Ident(s) if *s == self.y => Ok(Poly::y()),
            Tok::Ident(s) => {
                self.k -= 1;
                self.err(format!("unknown identifier '{}'", s))
            }
            Tok::Sym('(') => {
                let e = self.expr()?;
                if self.peek_sym() != Some(')') {
                    return self.err("expected ')'");
                }
                self.k += 1;
                Ok(e)
            }
            Tok::Sym(c) => {
                self.k -= 1;
                self.err(format!("unexpected '{}'", c))
            }
        }
    }
}

/// Chooses the variable names: the identifiers in order of appearance, the second taking the
/// `y` role unless `y_var` names one of them.
fn infer_vars(toks: &[(usize, Tok)], y_var: Option<&str>) -> Result<(String, String)> {
    let mut names: Vec<(usize, String)> = Vec::new();
    for (pos, t) in toks {
        if let Tok::Ident(s) = t {
            if s != "i" && !names.iter().any(|(_, n)| n == s) {
                names.push((*pos, s.clone()));
            }
        }
    }
    if names.len() > 2 {
        return Err(Error::Parse { pos: names[2].0, msg: format!("a third variable '{}'", names[2].1) });
    }
    let names: Vec<String> = names.into_iter().map(|(_, n)| n).collect();
    match y_var {
        Some(y) => {
            let x = names.iter().find(|n| *n != y).cloned().unwrap_or_else(|| if y == "x" { "u".into() } else { "x".into() });
            Ok((x, y.to_string()))
        }
        None => Ok(match names.as_slice() {
            [] => ("x".into(), "y".into()),
            [a] if a == "y" || a == "w" => (if a == "y" { "x" } else { "z" }.into(), a.clone()),
            [a] => (a.clone(), "y".into()),
            [a, b] => (a.clone(), b.clone()),
            _ => unreachable!(),
        }),
    }
}

/// Parses a germ; `y_var` overrides the variable in the `y` role.
pub fn parse_polynomial(text: &str, y_var: Option<&str>, cap: u32) -> Result<InputGerm> {
    let toks = tokenize(text)?;
    if toks.is_empty() {
        return Err(Error::EmptyInput);
    }
    let (x, y) = infer_vars(&toks, y_var)?;
    let mut p = Parser { toks: &toks, k: 0, end: text.chars().count(), x, y, cap };
    let poly = p.expr()?;
    if p.k < toks.len() {
        return p.err("unexpected trailing input");
    }
    let poly = p.capped(poly)?;
    if poly.is_zero() {
        return Err(Error::EmptyInput);
    }
    if !poly.coeff(0, 0).is_zero() {
        return Err(Error::NotVanishingAtOrigin);
    }
    Ok(InputGerm { expression: text.to_string(), vars: (p.x, p.y), poly })
}

/// Parses a constant such as `-1/2+i`.
pub fn parse_constant(text: &str) -> Result<GaussRat> {
    let toks = tokenize(text)?;
    if toks.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut p = Parser { toks: &toks, k: 0, end: text.chars().count(), x: String::new(), y: String::new(), cap: 0 };
    let c = p.expr()?;
    if p.k < toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(c.coeff(0, 0))
}

/// Parses with the default degree cap and variable inference.
pub fn parse(text: &str) -> Result<Poly> {
    Ok(parse_polynomial(text, None, DEFAULT_DEGREE_CAP)?.poly)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_germs() {
        let g = parse_polynomial("x^3 + y^12", None, 64).unwrap();
        assert_eq!(g.vars, ("x".into(), "y".into()));
        assert_eq!(g.poly.num_terms(), 2);
        let h = parse_polynomial("z^4 + z^2*w^2 + w^4", None, 64).unwrap();
        assert_eq!(h.vars, ("z".into(), "w".into()));
        assert_eq!(h.poly.coeff(2, 2), GaussRat::one());
    }

    #[test]
    fn gaussian_coefficients() {
        let p = parse("(1/2 + 1/3*i)*x*y").unwrap();
        let c = p.coeff(1, 1);
        assert_eq!(c, &GaussRat::from_ratio(1, 2) + &(&GaussRat::from_ratio(1, 3) * &GaussRat::i()));
    }

    #[test]
    fn y_var_override() {
        let g = parse_polynomial("y^3 + x^12", Some("x"), 64).unwrap();
        assert_eq!(g.vars, ("y".into(), "x".into()));
        assert_eq!(g.poly.coeff(3, 0), GaussRat::one());
    }

    #[test]
    fn errors() {
        assert_eq!(parse("x^2 + 1"), Err(Error::NotVanishingAtOrigin));
        assert!(matches!(parse("x^65"), Err(Error::DegreeCap { .. })));
        assert!(matches!(parse("x^2 + y^3 )"), Err(Error::Parse { pos: 10, .. })));
        assert!(matches!(parse("x / y"), Err(Error::Parse { .. })));
        assert!(matches!(parse("x + y + z"), Err(Error::Parse { pos: 8, .. })));
        assert!(matches!(parse("x - x"), Err(Error::EmptyInput)));
    }

    #[test]
    fn constants() {
        assert_eq!(parse_constant("-1/2+i").unwrap(), &GaussRat::from_ratio(-1, 2) + &GaussRat::i());
        assert!(matches!(parse_constant("x"), Err(Error::Parse { pos: 0, .. })));
    }

    #[test]
    fn render_round_trip() {
        for s in ["x^3 + x^2*y^5 + y^12", "-(1/2+i)*x*y^2 + 3*x^4 - i*y^7"] {
            let p = parse(s).unwrap();
            assert_eq!(parse(&p.render("x", "y")).unwrap(), p);
        }
    }
}
