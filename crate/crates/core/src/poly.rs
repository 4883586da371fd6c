//! Sparse multivariate polynomials with exact coefficients.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::ParseError;
use crate::scalar::Scalar;

/// A polynomial in `x1..xr`, stored as exponent vector → nonzero coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly<C> {
    vars: usize,
    terms: BTreeMap<Vec<u32>, C>,
}

impl<C: Scalar> Poly<C> {
    pub fn zero(vars: usize) -> Self {
        Poly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: usize, c: C) -> Self {
        let mut p = Poly::zero(vars);
        p.add_term(vec![0; vars], c);
        p
    }

    pub fn one(vars: usize) -> Self {
        Poly::constant(vars, C::one())
    }

    /// The coordinate `x_{i+1}` (0-based `i`).
    pub fn var(vars: usize, i: usize) -> Self {
        assert!(i < vars);
        let mut e = vec![0; vars];
        e[i] = 1;
        let mut p = Poly::zero(vars);
        p.add_term(e, C::one());
        p
    }

    pub fn monomial(exponents: Vec<u32>, c: C) -> Self {
        let mut p = Poly::zero(exponents.len());
        p.add_term(exponents, c);
        p
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &C)> + '_ {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn coefficient(&self, exponents: &[u32]) -> C {
        self.terms.get(exponents).cloned().unwrap_or_else(C::zero)
    }

    pub fn add_term(&mut self, exponents: Vec<u32>, c: C) {
        assert_eq!(exponents.len(), self.vars);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exponents) {
            Some(v) => {
                *v = v.clone() + c;
                if v.is_zero() {
                    self.terms.remove(&exponents);
                }
            }
            None => {
                self.terms.insert(exponents, c);
            }
        }
    }

    pub fn add_assign(&mut self, other: &Poly<C>) {
        assert_eq!(self.vars, other.vars);
        for (e, c) in &other.terms {
            self.add_term(e.clone(), c.clone());
        }
    }

    pub fn add(&self, other: &Poly<C>) -> Poly<C> {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &Poly<C>) -> Poly<C> {
        self.add(&other.scale(&-C::one()))
    }

    pub fn scale(&self, c: &C) -> Poly<C> {
        let mut out = Poly::zero(self.vars);
        if c.is_zero() {
            return out;
        }
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v.clone() * c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Poly<C>) -> Poly<C> {
        assert_eq!(self.vars, other.vars);
        let mut out = Poly::zero(self.vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca.clone() * cb.clone());
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Poly<C> {
        let mut out = Poly::one(self.vars);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// `∂/∂x_{i+1}`.
    pub fn derivative(&self, i: usize) -> Poly<C> {
        let mut out = Poly::zero(self.vars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut d = e.clone();
            d[i] -= 1;
            out.add_term(d, c.clone() * C::from_i64(e[i] as i64));
        }
        out
    }

    /// Applies `∂_{i1} … ∂_{ik}`.
    pub fn derivatives(&self, indices: &[usize]) -> Poly<C> {
        let mut out = self.clone();
        for &i in indices {
            if out.is_zero() {
                break;
            }
            out = out.derivative(i);
        }
        out
    }

    /// Parses `+ - * ^`, parentheses, rational literals `p/q` and the
    /// variables `x1..x{vars}`.
    pub fn parse(vars: usize, text: &str) -> Result<Poly<C>, ParseError> {
        let mut p = Parser {
            vars,
            chars: text.chars().filter(|c| !c.is_whitespace()).collect(),
            pos: 0,
        };
        let out = p.expr()?;
        if p.pos != p.chars.len() {
            return Err(p.error("unexpected character"));
        }
        Ok(out)
    }
}

impl<C: Scalar> fmt::Display for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        // Highest total degree first, then lexicographically descending.
        let mut terms: Vec<(&Vec<u32>, &C)> = self.terms.iter().collect();
        terms.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            db.cmp(&da).then_with(|| b.0.cmp(a.0))
        });
        for (k, (e, c)) in terms.into_iter().enumerate() {
            let mut text = c.to_string();
            let negative = text.starts_with('-');
            if negative {
                text.remove(0);
            }
            if k == 0 {
                if negative {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if negative { " - " } else { " + " })?;
            }
            let mut factors = Vec::new();
            if text != "1" || e.iter().all(|&x| x == 0) {
                factors.push(text);
            }
            for (i, &x) in e.iter().enumerate() {
                match x {
                    0 => {}
                    1 => factors.push(format!("x{}", i + 1)),
                    _ => factors.push(format!("x{}^{}", i + 1, x)),
                }
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

struct Parser {
    vars: usize,
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn error(&self, reason: &str) -> ParseError {
        let rest: String = self.chars[self.pos.min(self.chars.len())..]
            .iter()
            .collect();
        ParseError::BadToken {
            token: if rest.is_empty() {
                "<end>".into()
            } else {
                rest
            },
            reason: reason.into(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn expr<C: Scalar>(&mut self) -> Result<Poly<C>, ParseError> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                '+' => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                '-' => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term<C: Scalar>(&mut self) -> Result<Poly<C>, ParseError> {
        let mut acc = self.power()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            acc = acc.mul(&self.power()?);
        }
        Ok(acc)
    }

    fn power<C: Scalar>(&mut self) -> Result<Poly<C>, ParseError> {
        let base = self.unary()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let k = self.integer()?;
            let k: u32 = k.parse().map_err(|_| self.error("exponent too large"))?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn unary<C: Scalar>(&mut self) -> Result<Poly<C>, ParseError> {
        match self.peek() {
            Some('-') => {
                self.pos += 1;
                Ok(self.unary::<C>()?.scale(&-C::one()))
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.primary(),
        }
    }

    fn primary<C: Scalar>(&mut self) -> Result<Poly<C>, ParseError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some('x') => {
                self.pos += 1;
                let digits = self.integer()?;
                let i: usize = digits.parse().map_err(|_| self.error("bad variable"))?;
                if i == 0 || i > self.vars {
                    return Err(ParseError::OutOfRange {
                        token: format!("x{i}"),
                        limit: self.vars + 1,
                    });
                }
                Ok(Poly::var(self.vars, i - 1))
            }
            Some(c) if c.is_ascii_digit() => {
                let mut text = self.integer()?;
                if self.peek() == Some('/') {
                    self.pos += 1;
                    text.push('/');
                    text.push_str(&self.integer()?);
                }
                let c = C::parse_scalar(&text).ok_or_else(|| ParseError::BadToken {
                    token: text.clone(),
                    reason: "not a rational number".into(),
                })?;
                Ok(Poly::constant(self.vars, c))
            }
            _ => Err(self.error("expected a number, variable or `(`")),
        }
    }

    fn integer(&mut self) -> Result<String, ParseError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected digits"));
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    type P = Poly<Rational>;

    #[test]
    fn parse_and_print() {
        let p = P::parse(3, "2*x1^2*x2 - 1/3*x3 + 1").unwrap();
        assert_eq!(p.to_string(), "2*x1^2*x2 - 1/3*x3 + 1");
        assert_eq!(P::parse(3, &p.to_string()).unwrap(), p);
        assert_eq!(
            P::parse(2, "(x1 + x2)^2").unwrap().to_string(),
            "x1^2 + 2*x1*x2 + x2^2"
        );
        assert_eq!(P::parse(2, "-x1").unwrap().to_string(), "-x1");
        assert_eq!(P::parse(2, "x1 - x1").unwrap().to_string(), "0");
        assert!(P::parse(2, "x3").is_err());
        assert!(P::parse(2, "x1 +").is_err());
        assert!(P::parse(2, "2 x1").is_err());
    }

    #[test]
    fn derivatives() {
        let p = P::parse(2, "x1^3*x2 + 5*x2^2").unwrap();
        assert_eq!(p.derivative(0), P::parse(2, "3*x1^2*x2").unwrap());
        assert_eq!(p.derivatives(&[1, 1]), P::parse(2, "10").unwrap());
        assert!(p.derivatives(&[0, 0, 0, 0]).is_zero());
    }

    #[test]
    fn product_rule() {
        let a = P::parse(2, "x1^2 + x2").unwrap();
        let b = P::parse(2, "x1*x2 - 3").unwrap();
        let lhs = a.mul(&b).derivative(0);
        let rhs = a.derivative(0).mul(&b).add(&a.mul(&b.derivative(0)));
        assert_eq!(lhs, rhs);
    }
}
